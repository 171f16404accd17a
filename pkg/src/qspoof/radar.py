"""Single-mode radar detection scenario in the Fock (photon number) basis.

The no-target hypothesis is thermal-like background noise

    rho0 = (1 - n_b)|0><0| + n_b |k><k|,

and the target hypothesis mixes a reflected signal photon state into it,

    rho1 = (1 - x) rho0 + x |l><l|.

Everything is diagonal in the number basis, so the scenario doubles as an
analytically tractable commuting test bed.  Sweeps rebuild the pair and
the risk-optimal projector per grid point and report both counterfactual
and genuine (post-distortion) operating rates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adversary import optimal_attack
from .detection import HypothesisPair, helstrom_measurement
from .operators import DensityOperator, as_matrix


@dataclass(frozen=True)
class RadarParams:
    """Background weight ``n_b``, signal weight ``x``, noise level ``k``, signal level ``l``."""

    n_b: float
    x: float
    k: int
    l: int

    def __post_init__(self):
        if not 0.0 <= self.n_b <= 1.0:
            raise ValueError(f"n_b must lie in [0, 1], got {self.n_b!r}")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {self.x!r}")
        if self.k < 0 or self.k != int(self.k):
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")
        if self.l < 0 or self.l != int(self.l):
            raise ValueError(f"l must be a nonnegative integer, got {self.l!r}")

    @property
    def dim(self) -> int:
        return max(self.k, self.l) + 1

    def with_l(self, l: int) -> "RadarParams":
        return RadarParams(self.n_b, self.x, self.k, l)


def build_radar_pair(params: RadarParams, c0: float, c1: float) -> HypothesisPair:
    """Number-basis hypothesis pair for the radar scenario.

    Coinciding levels (k = 0, or l inside {0, k}) are handled by summing
    the coefficients on the shared diagonal entry.
    """
    d = params.dim
    p0 = np.zeros(d)
    p0[0] += 1.0 - params.n_b
    p0[params.k] += params.n_b
    p1 = (1.0 - params.x) * p0
    p1[params.l] += params.x
    return HypothesisPair(
        DensityOperator.from_diagonal(p0),
        DensityOperator.from_diagonal(p1),
        c0,
        c1,
    )


def mean_photon(rho) -> float:
    """Expected photon number sum_n n rho_nn of a number-basis state."""
    m = as_matrix(rho)
    return float(np.dot(np.arange(m.shape[0]), np.diag(m).real))


def default_tau_grid(n: int = 60, lo: float = 1e-2, hi: float = 1e2) -> np.ndarray:
    """Logarithmically spaced threshold grid, 60 points in [1e-2, 1e2] by default."""
    return np.logspace(np.log10(lo), np.log10(hi), n)


@dataclass(frozen=True)
class PhotonSweepRow:
    """One signal-level sample: counterfactual and genuine detection rates."""

    l: int
    mean_photon: float
    lam: float
    p_detect: float
    genuine_p_detect: float


def photon_sweep(base: RadarParams, l_values, lambdas, tau: float) -> list[PhotonSweepRow]:
    """Detection rates across signal levels ``l`` for each distortion price.

    The detector threshold ``tau`` is held fixed; the hypothesis pair and
    its risk-optimal projector are rebuilt for every ``l``.  Rows come back
    ordered by (lam, l).
    """
    if tau <= 0:
        raise ValueError(f"threshold must be positive, got {tau!r}")
    lams = [float(v) for v in lambdas]
    if any(v <= 0 for v in lams):
        raise ValueError("distortion prices must be positive")
    ls = [int(v) for v in l_values]
    if any(v < 0 for v in ls):
        raise ValueError("signal levels must be nonnegative")
    per_l = {}
    for l in sorted(set(ls)):
        pair = build_radar_pair(base.with_l(l), *_priors_from_tau(tau))
        hel = helstrom_measurement(pair)
        nbar = mean_photon(pair.rho1)
        per_l[l] = (pair, hel, nbar)
    rows = []
    for lam in sorted(set(lams)):
        for l in sorted(set(ls)):
            pair, hel, nbar = per_l[l]
            sol = optimal_attack(pair, hel.pi1, lam)
            rows.append(
                PhotonSweepRow(
                    l=l,
                    mean_photon=nbar,
                    lam=lam,
                    p_detect=hel.p_detect,
                    genuine_p_detect=sol.genuine_p_detect,
                )
            )
    return rows


@dataclass(frozen=True)
class RocPoint:
    """Operating point at one threshold, counterfactual and genuine."""

    tau: float
    p_false: float
    p_detect: float
    genuine_p_false: float
    genuine_p_detect: float


@dataclass(frozen=True)
class RocCurve:
    """Operating points over a threshold grid; ``lam`` is None when undistorted."""

    lam: float | None
    points: tuple

    def __post_init__(self):
        taus = [p.tau for p in self.points]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ValueError("thresholds must be strictly increasing along a curve")


def _priors_from_tau(tau: float) -> tuple[float, float]:
    return 1.0 / (1.0 + tau), tau / (1.0 + tau)


def roc_sweep(params: RadarParams, lambdas, tau_grid=None) -> list[RocCurve]:
    """Receiver operating characteristic curves over a threshold grid.

    Returns one undistorted curve (``lam`` None, genuine rates equal the
    counterfactual ones) followed by one curve per distortion price in
    ascending order.  Cost weights at each threshold are c0 = 1/(1+tau),
    c1 = tau/(1+tau).
    """
    grid = default_tau_grid() if tau_grid is None else np.asarray(tau_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("threshold grid must be a nonempty 1-d sequence")
    if np.any(grid <= 0):
        raise ValueError("thresholds must be positive")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("threshold grid must be strictly increasing")
    lams = sorted({float(v) for v in lambdas})
    if any(v <= 0 for v in lams):
        raise ValueError("distortion prices must be positive")

    base_points = []
    solved = []  # (pair, helstrom) per tau
    for tau in grid:
        pair = build_radar_pair(params, *_priors_from_tau(float(tau)))
        hel = helstrom_measurement(pair)
        solved.append((pair, hel))
        base_points.append(
            RocPoint(
                tau=float(tau),
                p_false=hel.p_false,
                p_detect=hel.p_detect,
                genuine_p_false=hel.p_false,
                genuine_p_detect=hel.p_detect,
            )
        )
    curves = [RocCurve(lam=None, points=tuple(base_points))]
    for lam in lams:
        points = []
        for tau, (pair, hel) in zip(grid, solved):
            sol = optimal_attack(pair, hel.pi1, lam)
            points.append(
                RocPoint(
                    tau=float(tau),
                    p_false=hel.p_false,
                    p_detect=hel.p_detect,
                    genuine_p_false=sol.genuine_p_false,
                    genuine_p_detect=sol.genuine_p_detect,
                )
            )
        curves.append(RocCurve(lam=lam, points=tuple(points)))
    return curves
