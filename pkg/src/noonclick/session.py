"""Live session: the engine behind a message protocol.

Wire format: length-prefixed JSON messages (4-byte big-endian length, then
UTF-8 JSON) over any ordered reliable byte stream; over WebSocket each text
message is one JSON document.  Message envelope::

    {"kind": <str>, "seq": <int>, "ts_ms": <int>, "payload": {...}}

Kinds from client: hello, click, set_period.  Kinds from server: config,
state, winner, undo_applied, period_changed, error.  Sequence numbers
increase strictly per direction.  State messages list every clock with id,
label, phase (seconds) and normalized posterior.

Click timestamps are milliseconds on the session clock, which starts at the
hello handshake; the hello reply carries ``session_epoch_ms`` (server wall
time) so the client can stamp clicks consistently.
"""

from __future__ import annotations

import json
import logging
import socket
import struct
import sys
import time
from dataclasses import dataclass, field

from .click_model import ClickDensity
from .keyboard import KeyboardState, clock_label
from .language_prior import CorpusIndex, PriorConfig
from .selector import ClockSet, PeriodRangeError, RoundState, period_for_index
from .simulator import EngineConfig

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1
AUTOSAVE_EVERY = 20


@dataclass
class SessionConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    prior: PriorConfig = field(default_factory=PriorConfig)
    corpus_path: str | None = None
    density_path: str | None = None

    def to_payload(self) -> dict:
        return {
            "protocol_version": PROTOCOL_VERSION,
            "period_index": self.engine.period_index,
            "period_T": self.engine.period_T,
            "alpha": self.engine.alpha,
            "damping_lambda": self.engine.damping_lambda,
            "bin_count": self.engine.bin_count,
            "n_delay": self.engine.n_delay,
        }


class SessionEngine:
    """Transport-free session logic: message dict in, message dicts out.

    Deterministic: the reply sequence depends only on the configuration and
    the received messages, so recorded click logs replay identically.
    """

    def __init__(self, config: SessionConfig,
                 index: CorpusIndex | None = None,
                 density: ClickDensity | None = None):
        self.config = config
        if index is None and config.corpus_path:
            index = CorpusIndex.load(config.corpus_path)
        self.keyboard = KeyboardState(index=index, prior_config=config.prior)
        self.density = density or config.engine.fresh_density()
        self.period_index = config.engine.period_index
        self.period_T = period_for_index(self.period_index)
        self.alpha = config.engine.alpha
        self._seq = 0
        self._round: RoundState | None = None
        self._pending_period: int | None = None
        self._selection_count = 0
        self._start_round()

    # -- round plumbing ---------------------------------------------------

    def _start_round(self) -> None:
        if self._pending_period is not None:
            self.period_index = self._pending_period
            self.period_T = period_for_index(self.period_index)
            self._pending_period = None
        clocks = ClockSet.from_prior(self.keyboard.prior())
        self._round = RoundState(clocks=clocks, density=self.density,
                                 period_T=self.period_T,
                                 period_index_j=self.period_index,
                                 alpha=self.alpha)

    def _msg(self, kind: str, payload: dict) -> dict:
        self._seq += 1
        return {"kind": kind, "seq": self._seq,
                "ts_ms": int(time.monotonic() * 1000), "payload": payload}

    def _state_payload(self) -> dict:
        posterior = self._round.posterior()
        return {
            "text": self.keyboard.text,
            "clicks_so_far": self._round.clicks_so_far,
            "clocks": [
                {"id": cid, "label": clock_label(cid),
                 "phase": float(self._round.clocks.phases[i]),
                 "posterior": posterior[cid]}
                for i, cid in enumerate(self._round.clocks.ids)
            ],
        }

    # -- message handling -------------------------------------------------

    def handle(self, message: dict) -> list[dict]:
        try:
            kind = message["kind"]
        except (TypeError, KeyError):
            return [self._msg("error", {"reason": "malformed message"})]
        handler = getattr(self, f"_on_{kind}", None)
        if handler is None:
            return [self._msg("error", {"reason": f"unknown kind {kind!r}"})]
        try:
            return handler(message.get("payload") or {})
        except Exception as exc:  # session must survive bad payloads
            log.exception("error handling %s", kind)
            return [self._msg("error", {"reason": str(exc)})]

    def _on_hello(self, payload: dict) -> list[dict]:
        config = self.config.to_payload()
        config["session_epoch_ms"] = int(time.monotonic() * 1000)
        return [self._msg("config", config),
                self._msg("state", self._state_payload())]

    def _on_click(self, payload: dict) -> list[dict]:
        click_time = float(payload["click_time_ms"]) / 1000.0
        self._round.register_click(click_time)
        winner = self._round.check_winner()
        if winner is None:
            return [self._msg("state", self._state_payload())]
        return self._finish_round(winner)

    def _finish_round(self, winner: str) -> list[dict]:
        offsets = self._round.winner_offsets(winner)
        out = [self._msg("winner", {"clock_id": winner,
                                    "label": clock_label(winner),
                                    "clicks": self._round.clicks_so_far})]
        was_undo = self.keyboard.apply_selection(winner)
        if was_undo:
            self.density.discard_last()
            out.append(self._msg("undo_applied", {"text": self.keyboard.text}))
        self.density.stage_selection(winner, offsets)
        self._selection_count += 1
        if (self.config.density_path
                and self._selection_count % AUTOSAVE_EVERY == 0):
            self.density.save(self.config.density_path)
        self._start_round()
        out.append(self._msg("state", self._state_payload()))
        return out

    def _on_set_period(self, payload: dict) -> list[dict]:
        j = int(payload["period_index"])
        try:
            period = period_for_index(j)
        except PeriodRangeError as exc:
            return [self._msg("error", {"reason": str(exc)})]
        if self._round.clicks_so_far > 0:
            # honored only between selections
            self._pending_period = j
            return [self._msg("period_changed",
                              {"period_index": j, "period_T": period,
                               "deferred": True})]
        self.period_index = j
        self.period_T = period
        self._round.set_period(j)
        return [self._msg("period_changed",
                          {"period_index": j, "period_T": period,
                           "deferred": False}),
                self._msg("state", self._state_payload())]

    # -- replay -----------------------------------------------------------

    def replay(self, messages: list[dict]) -> list[dict]:
        """Feed a recorded message log; returns the full reply transcript."""
        out = []
        for message in messages:
            out.extend(self.handle(message))
        return out


# -- transports ------------------------------------------------------------


def read_frame(stream) -> dict | None:
    header = stream.read(4)
    if not header or len(header) < 4:
        return None
    (length,) = struct.unpack(">I", header)
    body = stream.read(length)
    if len(body) < length:
        return None
    return json.loads(body.decode("utf-8"))


def write_frame(stream, message: dict) -> None:
    body = json.dumps(message, separators=(",", ":")).encode("utf-8")
    stream.write(struct.pack(">I", len(body)) + body)
    stream.flush()


def _serve_stream(engine: SessionEngine, reader, writer) -> None:
    while True:
        message = read_frame(reader)
        if message is None:
            break
        for reply in engine.handle(message):
            write_frame(writer, reply)


def serve_stdio(engine: SessionEngine) -> None:
    _serve_stream(engine, sys.stdin.buffer, sys.stdout.buffer)


def serve_tcp(engine_factory, host: str, port: int) -> None:
    with socket.create_server((host, port)) as server:
        log.info("listening on %s:%d", host, port)
        while True:
            conn, addr = server.accept()
            log.info("client %s connected", addr)
            engine = engine_factory()
            try:
                with conn, conn.makefile("rb") as r, conn.makefile("wb") as w:
                    _serve_stream(engine, r, w)
            except (ConnectionError, OSError):
                pass
            finally:
                if engine.config.density_path:
                    engine.density.save(engine.config.density_path)
                log.info("client %s disconnected", addr)


def serve_websocket(engine_factory, host: str, port: int) -> None:
    """One JSON document per text message; requires the websockets package."""
    import asyncio

    import websockets

    async def handler(ws):
        engine = engine_factory()
        try:
            async for raw in ws:
                for reply in engine.handle(json.loads(raw)):
                    await ws.send(json.dumps(reply, separators=(",", ":")))
        finally:
            if engine.config.density_path:
                engine.density.save(engine.config.density_path)

    async def run():
        async with websockets.serve(handler, host, port):
            log.info("websocket listening on %s:%d", host, port)
            await asyncio.Future()

    asyncio.run(run())
