"""Sign-consistent realizations and rank experiments on the Kalman matrix.

A realization draws a magnitude for every signed edge, builds the signed
Laplacian ``L`` (``l_ij = a_ij``, ``l_ii = -sum_j a_ij``) and the unit input
matrix ``B``, and the rank of ``[B, LB, ..., L^(n-1) B]`` decides
controllability of that particular realization.
"""

from __future__ import annotations

import dataclasses
import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .certify import Status, Verdict
from .errors import SamplingError
from .graph import Edge, Sign, SignedNetwork

DEFAULT_REL_TOL = 1e-9
MAX_RESAMPLES = 1000
CONT_RANGE = (0.5, 5.0)
INT_RANGE = (1, 5)


class Mode(str, enum.Enum):
    CONTINUOUS = "cont"
    INTEGER = "int"

    @property
    def bounds(self) -> tuple[float, float]:
        return CONT_RANGE if self is Mode.CONTINUOUS else INT_RANGE


@dataclass(frozen=True, eq=False)
class Realization:
    L: np.ndarray
    B: np.ndarray
    weights: dict[Edge, float]
    resamples: int = 0

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def T(self) -> np.ndarray:
        """The stacked matrix ``[L, B]``."""
        return np.hstack([self.L, self.B])


def input_matrix(net: SignedNetwork) -> np.ndarray:
    B = np.zeros((net.n, net.m))
    for k, s in enumerate(net.input_assignment):
        B[s - 1, k] = 1.0
    return B


def laplacian(n: int, weights: dict[Edge, float]) -> np.ndarray:
    L = np.zeros((n, n))
    for (i, j), w in weights.items():
        L[i - 1, j - 1] = L[j - 1, i - 1] = w
    # diagonal from the off-diagonal row sums, so every row sums to zero
    L[np.diag_indices(n)] = -L.sum(axis=1)
    return L


def realization_from_weights(net: SignedNetwork, weights: dict[Edge, float]) -> Realization:
    return Realization(laplacian(net.n, weights), input_matrix(net), dict(weights))


def nominal_realization(net: SignedNetwork) -> Realization:
    if net.nominal_weights is None:
        raise ValueError("network carries no nominal weights")
    return realization_from_weights(net, {e: w for e, w in net.nominal_weights.items() if w})


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(seed: int, trial: int) -> list[int]:
    """Seed of trial ``trial``; trials are independent of execution order."""
    return [seed, trial]


def _diagonal_ok(L: np.ndarray, declared: Sequence[Sign]) -> bool:
    d = np.sign(np.diag(L))
    return all(int(x) == int(s) for x, s in zip(d, declared))


def sample_realization(net: SignedNetwork, mode: Mode | str = Mode.CONTINUOUS, rng_seed=None) -> Realization:
    """Draw one realization from the sign pattern of ``net``.

    Magnitudes are uniform on [0.5, 5.0] (continuous) or on {1, ..., 5}
    (integer). When the network declares diagonal signs, draws whose derived
    diagonal is zero or of the wrong sign are redrawn.
    """
    mode = Mode(mode)
    rng = _rng(rng_seed)
    edges = net.edges
    signs = np.array([int(net.state_edge_signs[e]) for e in edges], dtype=float)
    B = input_matrix(net)
    lo, hi = mode.bounds
    for attempt in range(MAX_RESAMPLES + 1):
        if mode is Mode.CONTINUOUS:
            mags = rng.uniform(lo, hi, size=len(edges))
        else:
            mags = rng.integers(lo, hi + 1, size=len(edges)).astype(float)
        weights = dict(zip(edges, (signs * mags).tolist()))
        L = laplacian(net.n, weights)
        if net.diagonal_signs is None or _diagonal_ok(L, net.diagonal_signs):
            return Realization(L, B, weights, attempt)
    raise SamplingError(
        f"no draw matched the declared diagonal signs in {MAX_RESAMPLES} retries; "
        "the diagonal sign pattern is likely infeasible"
    )


def controllability_matrix(r: Realization, blocks: int | None = None) -> np.ndarray:
    """``[B, LB, ..., L^(blocks-1) B]``; ``blocks`` defaults to n."""
    blocks = r.n if blocks is None else blocks
    out = [r.B]
    for _ in range(blocks - 1):
        out.append(r.L @ out[-1])
    return np.hstack(out)


def numeric_rank(M, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Count singular values above ``rel_tol * sigma_max * max(M.shape)``."""
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    sv = np.linalg.svd(M, compute_uv=False)
    top = sv[0] if sv.size else 0.0
    if top == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * top * max(M.shape)))


def equilibrate(M: np.ndarray) -> np.ndarray:
    """Scale every nonzero column to unit norm; the rank is unchanged."""
    norms = np.linalg.norm(M, axis=0)
    return M / np.where(norms > 0, norms, 1.0)


def kalman_rank(r: Realization, rel_tol: float = DEFAULT_REL_TOL, scaled: bool = True) -> int:
    """Numeric rank of the controllability matrix of ``r``.

    The raw blocks ``L^k B`` grow like ``|L|^k``, which pushes the smallest
    singular value of a controllable pair below the tolerance already for
    n around 7. Column scaling keeps the rank and removes that artefact.
    """
    C = controllability_matrix(r)
    return numeric_rank(equilibrate(C) if scaled else C, rel_tol)


@dataclass(frozen=True)
class RankReport:
    trials: int
    ranks: tuple[int, ...]
    deficient_trials: tuple[int, ...]
    mode: Mode
    seed: int
    n: int
    resamples: int = 0
    witness: Realization | None = field(default=None, compare=False, repr=False)

    @property
    def min_rank(self) -> int:
        return min(self.ranks)

    @property
    def max_rank(self) -> int:
        return max(self.ranks)

    @property
    def resample_rate(self) -> float:
        return self.resamples / self.trials

    def summary(self) -> str:
        return (f"{self.trials} trials ({self.mode.value}, seed {self.seed}): rank min {self.min_rank}, "
                f"max {self.max_rank}, {len(self.deficient_trials)} deficient (rank < {self.n})")


def monte_carlo(net: SignedNetwork, trials: int, mode: Mode | str = Mode.CONTINUOUS, rng_seed: int = 0,
                rel_tol: float = DEFAULT_REL_TOL, scaled: bool = True) -> RankReport:
    """Rank of the controllability matrix over ``trials`` independent draws.

    Trial ``t`` uses its own stream seeded by ``(rng_seed, t)``. ``scaled``
    selects the column-scaled rank (see ``kalman_rank``).
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    mode = Mode(mode)
    ranks = []
    deficient = []
    resamples = 0
    witness = None
    for t in range(trials):
        r = sample_realization(net, mode, trial_seed(rng_seed, t))
        resamples += r.resamples
        rank = kalman_rank(r, rel_tol, scaled)
        ranks.append(rank)
        if rank < net.n:
            deficient.append(t)
            if witness is None:
                witness = r
    return RankReport(trials, tuple(ranks), tuple(deficient), mode, rng_seed, net.n, resamples, witness)


@dataclass(frozen=True)
class LMatrixResult:
    """Randomized search for a rank-deficient ``[L, B]``.

    ``refuted`` False only means no deficient draw was found.
    """

    refuted: bool
    trials: int
    trial: int | None = None
    realization: Realization | None = field(default=None, compare=False, repr=False)

    def describe(self) -> str:
        if self.refuted:
            return f"refuted: [L, B] rank deficient in trial {self.trial}"
        return f"no refutation found in {self.trials} trials (not a proof)"


def l_matrix_refutation(net: SignedNetwork, trials: int, rng_seed: int = 0,
                        mode: Mode | str = Mode.CONTINUOUS, rel_tol: float = DEFAULT_REL_TOL) -> LMatrixResult:
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    for t in range(trials):
        r = sample_realization(net, mode, trial_seed(rng_seed, t))
        if numeric_rank(r.T, rel_tol) < net.n:
            return LMatrixResult(True, t + 1, t, r)
    return LMatrixResult(False, trials)


def diagonal_feasibility(net: SignedNetwork, mode: Mode | str = Mode.CONTINUOUS) -> dict[int, bool] | None:
    """Per node, whether its declared diagonal sign is reachable by some draw.

    ``l_ii`` is minus the sum of the incident weights, so a negative
    diagonal needs a positive sum and vice versa. Checked node by node over
    the magnitude range of ``mode``; ``None`` when no signs are declared.
    """
    if net.diagonal_signs is None:
        return None
    lo, hi = Mode(mode).bounds
    low = {i: 0.0 for i in range(1, net.n + 1)}
    high = dict(low)
    for (i, j) in net.edges:
        s = net.state_edge_signs[(i, j)]
        for v in (i, j):
            if s > 0:
                low[v] += lo
                high[v] += hi
            else:
                low[v] -= hi
                high[v] -= lo
    out = {}
    for i, d in enumerate(net.diagonal_signs, start=1):
        out[i] = high[i] > 0 if d < 0 else low[i] < 0
    return out


def refute_certification(net: SignedNetwork, verdict: Verdict, trials: int,
                         mode: Mode | str = Mode.INTEGER, rng_seed: int = 0) -> Verdict:
    """Upgrade NotCertified to NumericallyRefuted on a rank-deficient draw."""
    if verdict.status is not Status.NOT_CERTIFIED:
        raise ValueError(f"only a not-certified verdict can be refuted, got {verdict.status.value}")
    report = monte_carlo(net, trials, mode, rng_seed)
    if report.deficient_trials:
        t = report.deficient_trials[0]
        note = f"trial {t + 1} of {trials} ({report.mode.value}, seed {rng_seed}) has rank {report.ranks[t]} < {net.n}"
        return dataclasses.replace(verdict, status=Status.NUMERICALLY_REFUTED,
                                   realization=report.witness, notes=verdict.notes + (note,))
    note = f"no rank-deficient realization in {trials} trials ({report.mode.value}, seed {rng_seed})"
    return dataclasses.replace(verdict, notes=verdict.notes + (note,))
