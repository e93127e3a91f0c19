from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signctrl.certify import Status, Verdict
from signctrl.errors import SamplingError
from signctrl.graph import Sign, SignedNetwork
from signctrl.merge import analyze
from signctrl.numeric import (
    Mode,
    controllability_matrix,
    diagonal_feasibility,
    equilibrate,
    kalman_rank,
    l_matrix_refutation,
    monte_carlo,
    nominal_realization,
    numeric_rank,
    realization_from_weights,
    refute_certification,
    sample_realization,
    trial_seed,
)

from corpus import corpus
from test_graph import networks

FIG1_L = np.array([
    [-2, 2, 1, 0, -1],
    [2, -3, 1, 1, -1],
    [1, 1, -3, 1, 0],
    [0, 1, 1, -5, 3],
    [-1, -1, 0, 3, -1],
], dtype=float)


def exact_rank(M):
    """Rank over the rationals by Gaussian elimination; entries must be integers."""
    rows = [[Fraction(int(round(x))) for x in row] for row in np.asarray(M)]
    assert np.allclose(np.asarray(M), np.round(M))
    rank = 0
    for c in range(len(rows[0]) if rows else 0):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_fig1_nominal_matrices(net):
    r = nominal_realization(net("fig1"))
    np.testing.assert_array_equal(r.L, FIG1_L)
    np.testing.assert_array_equal(np.diag(r.L), [-2, -3, -3, -5, -1])
    B = np.zeros((5, 3))
    B[2, 0] = B[3, 1] = B[4, 2] = 1
    np.testing.assert_array_equal(r.B, B)


def test_fig1_nominal_full_rank(net):
    C = controllability_matrix(nominal_realization(net("fig1")))
    assert C.shape == (5, 15)
    assert exact_rank(C) == 5
    assert numeric_rank(C) == 5


def test_nominal_requires_weights(net):
    with pytest.raises(ValueError):
        nominal_realization(net("fig8"))


def test_all_positive_integer_draws():
    net = SignedNetwork(4, {(1, 2): "+", (2, 3): "+", (3, 4): "+", (1, 4): "+"}, (1,))
    for t in range(50):
        r = sample_realization(net, "int", trial_seed(3, t))
        assert set(r.weights.values()) <= {1.0, 2.0, 3.0, 4.0, 5.0}
        assert np.all(np.diag(r.L) < 0)


def test_continuous_range():
    net = SignedNetwork(3, {(1, 2): "-", (2, 3): "+"}, (1,))
    for t in range(50):
        w = sample_realization(net, Mode.CONTINUOUS, [7, t]).weights
        assert -5.0 <= w[(1, 2)] <= -0.5 and 0.5 <= w[(2, 3)] <= 5.0


def test_zero_laplacian():
    net = SignedNetwork(4, {}, (1, 3))
    r = realization_from_weights(net, {})
    C = controllability_matrix(r)
    assert C.shape == (4, 8)
    assert numeric_rank(C) == 2


def test_numeric_rank_basics():
    assert numeric_rank(np.eye(5)) == 5
    assert numeric_rank(np.zeros((4, 6))) == 0
    rng = np.random.default_rng(0)
    M = np.outer(rng.normal(size=5), rng.normal(size=5))
    assert numeric_rank(M) == 1 == np.linalg.matrix_rank(M)
    with pytest.raises(ValueError, match="non-finite"):
        numeric_rank(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        numeric_rank(np.eye(2), rel_tol=0)


def test_equilibrate_keeps_zero_columns():
    M = np.array([[3.0, 0.0], [4.0, 0.0]])
    np.testing.assert_allclose(equilibrate(M), [[0.6, 0.0], [0.8, 0.0]])


def test_monte_carlo_report(net):
    rep = monte_carlo(net("fig1"), 50, "cont", 1)
    assert rep.trials == 50 and len(rep.ranks) == 50
    assert rep.min_rank == rep.max_rank == 5 and rep.deficient_trials == ()
    assert "0 deficient" in rep.summary()
    with pytest.raises(ValueError):
        monte_carlo(net("fig1"), 0)


def test_seed_determinism(net):
    n = net("fig8_signs")
    a = monte_carlo(n, 300, "int", 4)
    b = monte_carlo(n, 300, "int", 4)
    assert a == b
    for t in (0, 17, 299):
        assert sample_realization(n, "int", trial_seed(4, t)).weights == \
            sample_realization(n, "int", trial_seed(4, t)).weights
    assert monte_carlo(n, 300, "int", 5).ranks != a.ranks


def test_trials_independent_of_run_length(net):
    n = net("fig8_signs")
    short = monte_carlo(n, 100, "int", 9)
    long = monte_carlo(n, 400, "int", 9)
    assert long.ranks[:100] == short.ranks


def test_deficient_witness_is_rank_deficient(net):
    rep = monte_carlo(net("fig8_signs"), 2000, "int", 0)
    assert rep.deficient_trials
    assert exact_rank(controllability_matrix(rep.witness)) < 5


def test_l_matrix_examples(net):
    assert not l_matrix_refutation(net("fig1"), 1000, 0).refuted
    assert not l_matrix_refutation(SignedNetwork(1, {}, (1,)), 50, 0).refuted
    res = l_matrix_refutation(SignedNetwork(3, {(1, 2): "+"}, (1,)), 10, 0)
    assert res.refuted and res.trial == 0
    assert "not a proof" in l_matrix_refutation(net("fig1"), 10, 0).describe()


def test_refute_certification(net):
    n = net("fig8_signs")
    verdict = analyze(n)[2]
    refuted = refute_certification(n, verdict, 2000, "int", 0)
    assert refuted.status is Status.NUMERICALLY_REFUTED
    assert kalman_rank(refuted.realization) < 5
    kept = refute_certification(n, verdict, 1000, "cont", 0)
    assert kept.status is Status.NOT_CERTIFIED
    assert "1000 trials" in kept.notes[-1]
    with pytest.raises(ValueError):
        refute_certification(n, Verdict(Status.CERTIFIED, "pipeline"), 10)


def test_declared_diagonal_signs_are_enforced():
    net = SignedNetwork(3, {(1, 2): "+", (2, 3): "-", (1, 3): "-"}, (1,), diagonal_signs=("+", "-", "+"))
    assert diagonal_feasibility(net) == {1: True, 2: True, 3: True}
    for t in range(30):
        r = sample_realization(net, "cont", [2, t])
        assert list(np.sign(np.diag(r.L))) == [1, -1, 1]


def test_infeasible_diagonal_signs():
    net = SignedNetwork(2, {(1, 2): "+"}, (1,), diagonal_signs=("+", "-"))
    assert diagonal_feasibility(net) == {1: False, 2: True}
    with pytest.raises(SamplingError):
        sample_realization(net, "int", 0)
    assert diagonal_feasibility(SignedNetwork(2, {(1, 2): "+"}, (1,))) is None


def test_raw_rank_underestimates_on_ill_conditioned_draws():
    # a certified 7-node network whose raw Kalman matrix falls below the tolerance
    net = corpus()[79]
    assert analyze(net)[2].certified
    draws = [sample_realization(net, "int", trial_seed(79, t)) for t in range(100)]
    raw = [kalman_rank(r, scaled=False) for r in draws]
    assert min(raw) < net.n
    for r in draws:
        assert exact_rank(controllability_matrix(r)) == kalman_rank(r) == net.n


@settings(max_examples=50, deadline=None)
@given(networks(max_n=8), st.sampled_from(["cont", "int"]), st.integers(0, 2**32 - 1))
def test_laplacian_and_sign_invariants(net, mode, seed):
    r = sample_realization(net, mode, seed)
    np.testing.assert_allclose(r.L.sum(axis=1), 0, atol=1e-12)
    np.testing.assert_array_equal(r.L, r.L.T)
    for (i, j), w in r.weights.items():
        assert Sign.of(w) == net.state_edge_signs[(i, j)]
        assert r.L[i - 1, j - 1] == w
    assert set(r.weights) == set(net.edges)


def test_cayley_hamilton_closure():
    nets = [n for n in corpus(60, seed=3) if n.n <= 8]
    count = 0
    for idx, net in enumerate(nets):
        for t in range(5):
            r = sample_realization(net, "int" if t % 2 else "cont", [idx, t])
            base = numeric_rank(equilibrate(controllability_matrix(r)))
            more = numeric_rank(equilibrate(controllability_matrix(r, blocks=net.n + 1)))
            assert more <= base
            count += 1
            if count == 100:
                return
    assert count == 100


def test_integer_rank_matches_exact_rank(net):
    n = net("fig8_signs")
    rep = monte_carlo(n, 600, "int", 21)
    for t in range(600):
        r = sample_realization(n, "int", trial_seed(21, t))
        assert rep.ranks[t] == exact_rank(controllability_matrix(r))
