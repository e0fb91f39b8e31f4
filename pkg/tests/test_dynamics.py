import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roleflow.dynamics import (
    INACTIVE,
    StateSequence,
    build_sequences,
    retention_distribution,
    retention_span,
    transition_counts,
    transition_matrices_by_step,
    transition_matrix,
    write_matrix_csv,
    write_retention_csv,
)

A, B = 0, 1


def seqs(*states):
    return [StateSequence(f"a{i}", tuple(s)) for i, s in enumerate(states)]


def markov_chains(P, n, length, rng):
    """Sample ``n`` chains from transition matrix ``P`` with a uniform start."""
    k = len(P)
    cum = np.cumsum(P, axis=1)
    out = np.empty((n, length), dtype=int)
    out[:, 0] = rng.integers(k, size=n)
    for t in range(1, length):
        u = rng.random(n)
        out[:, t] = (u[:, None] > cum[out[:, t - 1]]).sum(1)
    return [StateSequence(str(i), tuple(int(x) for x in row)) for i, row in enumerate(out)]


KNOWN = np.array([
    [0.70, 0.10, 0.10, 0.05, 0.05],
    [0.05, 0.80, 0.05, 0.05, 0.05],
    [0.20, 0.10, 0.50, 0.10, 0.10],
    [0.10, 0.20, 0.10, 0.55, 0.05],
    [0.02, 0.03, 0.05, 0.10, 0.80],
])


class TestBuildSequences:
    def test_present_everywhere(self):
        out = build_sequences([{"x": 2}, {"x": 2}, {"x": 1}, {"x": 0}], 4)
        assert out == [StateSequence("x", (2, 2, 1, 0))]

    def test_missing_window(self):
        out = build_sequences([{"x": 3}, {"x": 3}, {"x": 3}, {}], 4)
        assert out[0].states == (3, 3, 3, INACTIVE)

    def test_flamer_then_sympathizer(self):
        flamer, sympathizer = 2, 4
        out = build_sequences([{"acct": flamer}] * 3 + [{"acct": sympathizer}], 4)
        assert out[0].states == (flamer, flamer, flamer, sympathizer)

    def test_accounts_come_from_first_window(self):
        out = build_sequences([{"x": 0}, {"x": 1, "late": 2}], 2)
        assert [s.account_id for s in out] == ["x"]

    def test_short_assignment_list_padded(self):
        assert build_sequences([{"x": 0}], 3)[0].states == (0, INACTIVE, INACTIVE)


class TestRetention:
    @pytest.mark.parametrize("states,span", [
        ((A, A, A, A), 4), ((A, A, B, A), 2), ((A, INACTIVE, A, A), 1), ((INACTIVE, A, A, A), 0), ((A,), 1),
    ])
    def test_span(self, states, span):
        assert retention_span(states) == span

    def test_distribution(self):
        r = retention_distribution(seqs((A, A, A, A), (A, B, B, B), (B, B, A, A), (INACTIVE, A, A, A)), 4)
        assert r.excluded == 1
        assert list(r.proportions[A]) == [0.5, 0.0, 0.0, 0.5]
        assert list(r.proportions[B]) == [0.0, 1.0, 0.0, 0.0]

    @given(st.lists(st.lists(st.one_of(st.none(), st.integers(0, 3)), min_size=4, max_size=4), max_size=40))
    def test_rows_sum_to_one(self, states):
        r = retention_distribution([StateSequence(str(i), tuple(s)) for i, s in enumerate(states)], 4)
        for props in r.proportions.values():
            assert props.sum() == pytest.approx(1.0, abs=1e-9)
        assert r.excluded + sum(c.sum() for c in r.counts.values()) == len(states)


class TestTransitions:
    def test_constant_chain(self):
        tm = transition_matrix(seqs((A, A, A, A)), 2)
        assert tm.probabilities[A].tolist() == [1.0, 0.0]
        assert tm.zero_rows == [B]

    def test_hand_count(self):
        tm = transition_matrix(seqs((A, B), (A, B), (A, A)), 2)
        assert tm.probabilities[A] == pytest.approx([1 / 3, 2 / 3])

    def test_inactive_pairs_skipped(self):
        tm = transition_matrix(seqs((A, INACTIVE, B, B)), 2)
        assert tm.counts.tolist() == [[0, 0], [0, 1]]

    def test_inactive_state_mode(self):
        tm = transition_matrix(seqs((A, INACTIVE, B)), 2, inactive_state=True)
        assert tm.counts.shape == (3, 3)
        assert tm.counts[A, 2] == 1 and tm.counts[2, B] == 1

    def test_state_out_of_range(self):
        with pytest.raises(ValueError):
            transition_counts(seqs((A, 5)), 2)

    def test_per_step(self):
        steps = transition_matrices_by_step(seqs((A, B, B), (A, A, B)), 2)
        assert len(steps) == 2
        assert steps[0].counts.tolist() == [[1, 1], [0, 0]]
        assert steps[1].counts.tolist() == [[0, 1], [0, 1]]
        assert sum(s.counts for s in steps).tolist() == transition_counts(seqs((A, B, B), (A, A, B)), 2).tolist()

    @given(st.lists(st.lists(st.one_of(st.none(), st.integers(0, 4)), min_size=4, max_size=4), max_size=50))
    def test_conservation_and_stochastic_rows(self, states):
        sq = [StateSequence(str(i), tuple(s)) for i, s in enumerate(states)]
        tm = transition_matrix(sq, 5)
        pairs = sum(1 for s in states for a, b in zip(s, s[1:]) if a is not None and b is not None)
        assert tm.counts.sum() == pairs
        for i, row in enumerate(tm.probabilities):
            assert row.sum() == pytest.approx(0.0 if i in tm.zero_rows else 1.0, abs=1e-9)

    def test_monte_carlo_recovery(self):
        rng = np.random.default_rng(2024)
        tm = transition_matrix(markov_chains(KNOWN, 5000, 4, rng), 5)
        assert np.abs(tm.probabilities - KNOWN).max() < 0.02

    def test_error_shrinks_with_sample_size(self):
        errs = []
        for n in (500, 20_000):
            trials = [np.abs(transition_matrix(markov_chains(KNOWN, n, 4, np.random.default_rng(s)), 5).probabilities
                             - KNOWN).mean() for s in range(5)]
            errs.append(np.mean(trials))
        assert errs[1] < errs[0] / 2


def test_csv_outputs(tmp_path):
    tm = transition_matrix(seqs((A, B), (A, A)), 2)
    write_matrix_csv(tmp_path / "p.csv", tm.probabilities, ["educator", "flamer"], "config_hash=x seed=0")
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "# config_hash=x seed=0"
    assert lines[1] == "from,educator,flamer"
    assert lines[2] == "educator,0.5,0.5"
    r = retention_distribution(seqs((A, A), (A, B)), 2)
    write_retention_csv(tmp_path / "r.csv", r, {0: "educator"})
    assert (tmp_path / "r.csv").read_text().splitlines()[1:] == ["educator,1,0.5,1", "educator,2,0.5,1"]
