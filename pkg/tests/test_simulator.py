import numpy as np
import pytest

from noonclick import metrics, simulator as sim
from noonclick.cli import data_path
from noonclick.language_prior import build_index, load_word_frequencies


@pytest.fixture(scope="module")
def index():
    return build_index(load_word_frequencies(data_path("corpus.tsv")))


@pytest.fixture(scope="module")
def phrases():
    with open(data_path("phrases.txt")) as fh:
        return [line.strip() for line in fh if line.strip()]


class TestMetrics:
    def test_entropy_uniform_30(self):
        assert metrics.entropy_bits({i: 1 / 30 for i in range(30)}) == \
            pytest.approx(np.log2(30), abs=1e-9)

    def test_entropy_uniform_difference(self):
        diff = (metrics.entropy_bits(np.full(401, 1 / 401))
                - metrics.entropy_bits(np.full(30, 1 / 30)))
        assert diff == pytest.approx(3.74, abs=5e-3)

    def test_entropy_point_mass(self):
        assert metrics.entropy_bits(np.array([1.0, 0.0, 0.0])) == 0.0

    @pytest.mark.parametrize("a,b,d", [
        ("", "abc", 3),
        ("kitten", "sitting", 3),
        ("same", "same", 0),
        ("abc", "", 3),
        ("flaw", "lawn", 2),
    ])
    def test_levenshtein(self, a, b, d):
        assert metrics.levenshtein(a, b) == d

    def test_levenshtein_dp_oracle(self):
        # quadratic-table reference implementation
        def oracle(a, b):
            table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
            for i in range(len(a) + 1):
                table[i][0] = i
            for j in range(len(b) + 1):
                table[0][j] = j
            for i in range(1, len(a) + 1):
                for j in range(1, len(b) + 1):
                    table[i][j] = min(table[i - 1][j] + 1,
                                      table[i][j - 1] + 1,
                                      table[i - 1][j - 1]
                                      + (a[i - 1] != b[j - 1]))
            return table[len(a)][len(b)]

        rng = np.random.default_rng(6)
        for _ in range(30):
            a = "".join(rng.choice(list("abcd"), size=rng.integers(0, 9)))
            b = "".join(rng.choice(list("abcd"), size=rng.integers(0, 9)))
            assert metrics.levenshtein(a, b) == oracle(a, b)

    def test_error_rate(self):
        assert metrics.error_rate(["abcde"], ["abcde"]) == 0.0
        assert metrics.error_rate(["a" * 20], ["a" * 19 + "b"]) == 0.05
        targets = ["hello_world", "the_cat"]
        outputs = ["hello_world", "the_hat"]
        assert metrics.error_rate(targets, outputs) == pytest.approx(1 / 18)

    def test_error_rate_empty_targets(self):
        with pytest.raises(ValueError):
            metrics.error_rate([""], ["x"])

    def test_wpm_five_char_words(self):
        assert metrics.words_per_minute(50, 60.0) == pytest.approx(10.0)
        assert metrics.words_per_minute(29, 120.0) == pytest.approx(2.9)


class TestUserProfile:
    def test_validation(self):
        with pytest.raises(ValueError):
            sim.UserProfile(offset_sd=0.0)
        with pytest.raises(ValueError):
            sim.UserProfile(lapse_prob=0.7)


class TestSimulateSelection:
    CFG = sim.EngineConfig()

    def test_seeded_determinism(self):
        prior = {f"c{i}": 1 / 8 for i in range(8)}
        prof = sim.UserProfile(offset_sd=0.02)
        a = sim.simulate_selection(prior, "c3", prof, self.CFG, rng_seed=42)
        b = sim.simulate_selection(prior, "c3", prof, self.CFG, rng_seed=42)
        assert a == b

    def test_unknown_target_rejected(self):
        with pytest.raises(ValueError):
            sim.simulate_selection({"a": 1.0}, "b", sim.UserProfile(), self.CFG)

    def test_entropy_trace_recorded(self):
        prior = {f"c{i}": 1 / 16 for i in range(16)}
        rec = sim.simulate_selection(prior, "c5",
                                     sim.UserProfile(offset_sd=0.02),
                                     self.CFG, rng_seed=1)
        assert len(rec.entropy_trace) == rec.clicks
        assert all(bits >= 0 for bits in rec.entropy_trace)

    def test_lapse_extends_time_not_correctness(self):
        prior = {f"c{i}": 1 / 8 for i in range(8)}
        steady = sim.UserProfile(offset_sd=0.02, lapse_prob=0.0)
        lapsing = sim.UserProfile(offset_sd=0.02, lapse_prob=0.5)
        a = [sim.simulate_selection(prior, "c0", steady, self.CFG, s)
             for s in range(30)]
        b = [sim.simulate_selection(prior, "c0", lapsing, self.CFG, s)
             for s in range(30)]
        assert all(r.correct for r in a) and all(r.correct for r in b)
        assert np.mean([r.seconds for r in b]) > np.mean([r.seconds for r in a])

    def test_entropy_decreases_in_expectation(self):
        prior = {f"c{i:02d}": 1 / 30 for i in range(30)}
        prof = sim.UserProfile(offset_sd=0.02)
        records = sim.run_selection_batch(prior, prof, self.CFG, seed=8,
                                          trials=1000)
        by_click = {}
        for rec in records:
            prev = metrics.entropy_bits(np.full(30, 1 / 30))
            for k, bits in enumerate(rec.entropy_trace):
                by_click.setdefault(k, []).append(prev - bits)
                prev = bits
        for k, drops in by_click.items():
            if len(drops) >= 100:  # enough trials reach this click depth
                assert np.mean(drops) > 0, f"entropy rose at click {k}"

    def test_logarithmic_scaling(self):
        prof = sim.UserProfile(offset_sd=0.01)
        cfg = self.CFG
        rng = np.random.default_rng(0)
        density = cfg.fresh_density()
        sim.pretrain_density(density, prof, rng)
        b = metrics.density_bits_per_click(density)
        sizes = [8, 30, 100, 401]
        means = []
        for C in sizes:
            prior = {f"c{i:03d}": 1 / C for i in range(C)}
            recs = sim.run_selection_batch(prior, prof, cfg, seed=C,
                                           trials=150)
            means.append(np.mean([r.clicks for r in recs]))
        preds = np.log2(sizes) / b
        a = np.mean(np.array(means) - preds)
        residuals = np.array(means) - (a + preds)
        assert np.all(np.abs(residuals) < 0.5), (means, a + preds)


class TestTyping:
    def test_error_free_precise_profile(self, index):
        prof = sim.UserProfile(offset_sd=0.01)
        result = sim.simulate_typing("hello_world.", prof, index, seed=3)
        assert result.output == "hello_world."
        assert result.errors == 0
        assert not result.aborted

    def test_deterministic(self, index):
        prof = sim.UserProfile(offset_sd=0.02)
        a = sim.simulate_typing("the_server_closed", prof, index, seed=5)
        b = sim.simulate_typing("the_server_closed", prof, index, seed=5)
        assert (a.output, a.clicks, a.seconds) == (b.output, b.clicks, b.seconds)

    def test_wrong_selection_recovered_by_undo(self, index):
        # a sloppy profile eventually errs; the agent must still converge
        prof = sim.UserProfile(offset_sd=0.08)
        done = 0
        for seed in range(6):
            r = sim.simulate_typing("window_title", prof, index, seed=seed,
                                    config=sim.EngineConfig(alpha=9.0))
            if not r.aborted:
                assert r.output == "window_title"
                done += 1
        assert done >= 4

    def test_click_load_band(self, index, phrases):
        loads = []
        for sd in (0.01, 0.02, 0.03):
            prof = sim.UserProfile(offset_sd=sd)
            clicks = chars = 0
            for i, phrase in enumerate(phrases[:8]):
                r = sim.simulate_typing(phrase, prof, index, seed=100 + i)
                assert not r.aborted
                clicks += r.clicks
                chars += len(phrase)
            loads.append(clicks / chars)
        assert 1.1 <= np.mean(loads) <= 1.6


class TestScanning:
    def test_two_clicks_per_char_without_completions(self, phrases):
        for phrase in phrases[:5]:
            clicks, _ = sim.simulate_scanning(phrase, 1.0)
            assert clicks == 2 * len(phrase)

    def test_delay_schedule(self):
        assert sim.scanning_delay(0) == pytest.approx(1.0)
        assert sim.scanning_delay(5) == pytest.approx(0.5)
        with pytest.raises(ValueError):
            sim.scanning_delay(10)

    def test_completions_save_clicks(self, index, phrases):
        total = total_plain = chars = 0
        for phrase in phrases:
            c, _ = sim.simulate_scanning(phrase, 1.0, index,
                                         use_completions=True)
            p, _ = sim.simulate_scanning(phrase, 1.0)
            total += c
            total_plain += p
            chars += len(phrase)
        assert total_plain == 2 * chars
        assert total / chars < 2.0

    def test_top_left_cell_costs_no_waiting(self):
        # 'a' sits at row 0; its column is one step from the row highlight
        clicks, seconds = sim.simulate_scanning("a", 0.7)
        assert clicks == 2
        assert seconds == pytest.approx(0.7)  # one column step only

    def test_unknown_character_rejected(self):
        with pytest.raises(ValueError):
            sim.simulate_scanning("é", 1.0)

    def test_clicks_equal_two_per_selection(self, index):
        phrase = "the_client_writes"
        clicks, _ = sim.simulate_scanning(phrase, 1.0, index,
                                          use_completions=True)
        assert clicks % 2 == 0
