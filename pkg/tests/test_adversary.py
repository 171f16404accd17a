"""Interceptor layer: closed-form distortion, oracle, bounds, perturbation."""

import math

import numpy as np
import pytest

from qspoof import (
    BoundReport,
    DensityOperator,
    HypothesisPair,
    OracleConvergenceError,
    ProjectorMeasurement,
    attacker_utility,
    detection_bounds,
    gap_condition_sums,
    genuine_rates,
    helstrom_measurement,
    optimal_attack,
    oracle_attack,
    overlap_weights,
    perturbation_estimate,
    relative_entropy,
)
from qspoof.adversary import _chart_value, _chart_value_grad
from qspoof.sampling import (
    near_commuting_pair,
    random_commuting_pair,
    random_density,
    random_pair,
    random_projector,
)

STATE_TOL = 1e-10
ORACLE_TOL = 1e-6
E = math.e


def radar_pair():
    return HypothesisPair(
        rho0=DensityOperator.from_diagonal([0.6, 0.4, 0.0]),
        rho1=DensityOperator.from_diagonal([0.06, 0.04, 0.9]),
        c0=0.5,
        c1=0.5,
    )


def radar_attack(lam):
    pair = radar_pair()
    res = helstrom_measurement(pair)
    return pair, res, optimal_attack(pair, res.pi1, lam)


# ---------------------------------------------------------------- closed form

def test_attack_radar_lambda_one():
    # scalar rederivation: suppressed entries are r_i * exp(-Pi_ii / lam)
    z_want = 0.06 + 0.04 + 0.9 / E
    want = np.array([0.06, 0.04, 0.9 / E]) / z_want
    pair, res, sol = radar_attack(1.0)
    assert abs(sol.z1 - z_want) <= 1e-15
    assert np.allclose(np.diag(sol.rho1_prime.matrix).real, want, atol=1e-14)
    assert abs(sol.genuine_p_detect - want[2]) <= 1e-14
    # pinned decimal values
    assert abs(sol.z1 - 0.43109149705429806) <= 1e-12
    assert abs(sol.genuine_p_detect - 0.768030683315926) <= 1e-12
    assert np.allclose(
        np.diag(sol.rho1_prime.matrix).real,
        [0.13918159, 0.09278773, 0.76803068],
        atol=1e-8,
    )


@pytest.mark.parametrize(
    "lam,z_want,pd_want",
    [
        (0.5, 0.22180175491295145, 0.5491469396207161),
        (2.0, 0.6458775937413701, 0.8451719010397454),
    ],
)
def test_attack_radar_lambda_grid(lam, z_want, pd_want):
    _, _, sol = radar_attack(lam)
    assert abs(sol.z1 - z_want) <= 1e-14
    assert abs(sol.genuine_p_detect - pd_want) <= 1e-14
    # scalar rederivation of both
    q = 0.9 * math.exp(-1.0 / lam)
    assert abs(sol.z1 - (0.1 + q)) <= 1e-14
    assert abs(sol.genuine_p_detect - q / (0.1 + q)) <= 1e-13


def test_attack_leaves_rho0_untouched():
    pair, res, sol = radar_attack(1.0)
    assert sol.rho0_prime is pair.rho0
    assert sol.genuine_p_false == res.p_false


def test_attack_false_alarm_equality_off_diagonal():
    rng = np.random.default_rng(42)
    pair = random_pair(rng, 4)
    res = helstrom_measurement(pair)
    sol = optimal_attack(pair, res.pi1, 1.0)
    assert sol.genuine_p_false == res.p_false


def test_attack_utility_identity():
    # at the optimum, utility equals -lam * ln Z1
    for lam in (0.5, 1.0, 2.0, 5.0):
        _, _, sol = radar_attack(lam)
        assert abs(sol.utility - (-lam * math.log(sol.z1))) <= 1e-12
    _, _, sol = radar_attack(1.0)
    assert abs(sol.utility - 0.8414349212595708) <= 1e-12


def test_attack_utility_identity_noncommuting():
    rng = np.random.default_rng(7)
    for _ in range(5):
        pair = random_pair(rng, int(rng.integers(2, 6)))
        res = helstrom_measurement(pair)
        for lam in (0.5, 2.0):
            sol = optimal_attack(pair, res.pi1, lam)
            assert abs(sol.utility - (-lam * math.log(sol.z1))) <= 1e-10


def test_attack_large_lambda_recovers_rho1():
    pair, _, sol = radar_attack(1e9)
    dev = np.max(np.abs(sol.rho1_prime.matrix - pair.rho1.matrix))
    assert dev <= 1e-8


def test_attack_rejects_nonpositive_lambda():
    pair = radar_pair()
    res = helstrom_measurement(pair)
    for lam in (0.0, -1.0):
        with pytest.raises(ValueError):
            optimal_attack(pair, res.pi1, lam)


def test_attack_zero_projector_is_identity_map():
    pair = radar_pair()
    sol = optimal_attack(pair, ProjectorMeasurement.zero(3), 1.0)
    assert np.allclose(sol.rho1_prime.matrix, pair.rho1.matrix, atol=1e-14)
    assert abs(sol.utility) <= 1e-14


def test_attack_preserves_support():
    # rank-deficient rho1: the distortion must stay on its support
    pair = HypothesisPair(
        rho0=DensityOperator.from_diagonal([0.5, 0.5, 0.0]),
        rho1=DensityOperator.from_diagonal([0.3, 0.0, 0.7]),
        c0=0.5,
        c1=0.5,
    )
    res = helstrom_measurement(pair)
    sol = optimal_attack(pair, res.pi1, 1.0)
    m = sol.rho1_prime.matrix
    assert abs(m[1, 1]) <= 1e-14
    assert np.all(np.abs(m[1, :]) <= 1e-14)
    assert math.isfinite(relative_entropy(sol.rho1_prime, pair.rho1))


def test_attack_is_minimum_among_feasible_states():
    rng = np.random.default_rng(5)
    for _ in range(10):
        pair = random_pair(rng, int(rng.integers(2, 6)))
        res = helstrom_measurement(pair)
        lam = float(rng.uniform(0.3, 4.0))
        sol = optimal_attack(pair, res.pi1, lam)
        best = sol.utility
        for _ in range(8):
            sigma = random_density(rng, pair.rho1.dim, min_eigenvalue=1e-4)
            for t in (0.03, 0.3, 1.0):
                mix = DensityOperator(
                    (1 - t) * sol.rho1_prime.matrix + t * sigma.matrix
                )
                trial = attacker_utility(mix, pair.rho0, res.pi1, pair, lam)
                assert best <= trial + 1e-9


# ---------------------------------------------------------------- utility

def test_utility_of_undistorted_states_is_detect_rate():
    pair = radar_pair()
    res = helstrom_measurement(pair)
    u = attacker_utility(pair.rho1, pair.rho0, res.pi1, pair, 1.0)
    assert abs(u - res.p_detect) <= 1e-14


def test_utility_infinite_outside_support():
    pair = HypothesisPair(
        rho0=DensityOperator.from_diagonal([0.5, 0.5, 0.0]),
        rho1=DensityOperator.from_diagonal([0.5, 0.5, 0.0]),
        c0=0.5,
        c1=0.5,
    )
    bad = DensityOperator.from_diagonal([0.25, 0.25, 0.5])
    u = attacker_utility(bad, pair.rho0, ProjectorMeasurement.zero(3), pair, 1.0)
    assert math.isinf(u)


def test_genuine_rates_match_solution():
    pair, res, sol = radar_attack(1.0)
    pd, pf = genuine_rates(res.pi1, sol)
    assert pd == sol.genuine_p_detect
    assert pf == sol.genuine_p_false


# ---------------------------------------------------------------- bounds

def test_detection_bounds_radar():
    lower, upper = detection_bounds(0.9, 1.0)
    assert upper == 0.9
    assert abs(lower - 0.9 / E) <= 1e-15
    assert abs(lower - 0.33109149705429806) <= 1e-12


def test_detection_bounds_large_lambda_collapse():
    lower, upper = detection_bounds(0.7, 1e9)
    assert upper - lower <= 1e-9


def test_bound_report_radar_within():
    _, _, sol = radar_attack(1.0)
    rep = BoundReport.evaluate(0.9, sol.genuine_p_detect, 1.0)
    assert rep.lower_satisfied and rep.upper_satisfied
    assert rep.lower <= sol.genuine_p_detect <= rep.upper


def test_bound_report_flags_violations():
    rep = BoundReport.evaluate(0.9, 0.95, 1.0)
    assert not rep.upper_satisfied
    rep = BoundReport.evaluate(0.9, 0.1, 1.0)
    assert not rep.lower_satisfied


def test_bounds_hold_on_commuting_instances():
    rng = np.random.default_rng(12)
    for _ in range(15):
        pair = random_commuting_pair(rng, int(rng.integers(2, 7)))
        res = helstrom_measurement(pair)
        for lam in (0.2, 0.5, 1.0, 2.0, 5.0):
            sol = optimal_attack(pair, res.pi1, lam)
            rep = BoundReport.evaluate(res.p_detect, sol.genuine_p_detect, lam)
            assert rep.lower_satisfied and rep.upper_satisfied


def test_upper_bound_holds_on_generic_instances():
    rng = np.random.default_rng(13)
    for _ in range(15):
        pair = random_pair(rng, int(rng.integers(2, 7)))
        res = helstrom_measurement(pair)
        for lam in (0.2, 1.0, 5.0):
            sol = optimal_attack(pair, res.pi1, lam)
            assert sol.genuine_p_detect <= res.p_detect + 1e-9


def test_genuine_rate_monotone_in_lambda():
    pair = radar_pair()
    res = helstrom_measurement(pair)
    lams = [0.2, 0.5, 1.0, 2.0, 5.0, 10.0]
    got = [optimal_attack(pair, res.pi1, lam).genuine_p_detect for lam in lams]
    assert all(b >= a - 1e-12 for a, b in zip(got, got[1:]))
    # commuting radar collapses to a scalar formula
    for lam, pd in zip(lams, got):
        q = 0.9 * math.exp(-1.0 / lam)
        assert abs(pd - q / (0.1 + q)) <= 1e-12


# ---------------------------------------------------------------- oracle

def test_oracle_matches_logistic_solution():
    # rho1 = I/2 and a rank-one penalty reduce to one scalar variable;
    # the in-test golden-section minimum and the logistic closed form agree
    pair = HypothesisPair(
        rho0=DensityOperator.maximally_mixed(2),
        rho1=DensityOperator.maximally_mixed(2),
        c0=0.5,
        c1=0.5,
    )
    pi1 = ProjectorMeasurement(np.diag([1.0, 0.0]))

    def objective(s):
        return s + s * math.log(2 * s) + (1 - s) * math.log(2 * (1 - s))

    lo, hi = 1e-6, 1 - 1e-6
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    for _ in range(200):
        if objective(c) < objective(d):
            b, d = d, c
            c = b - invphi * (b - a)
        else:
            a, c = c, d
            d = a + invphi * (b - a)
    s_scan = (a + b) / 2

    s_want = 1.0 / (1.0 + E)
    assert abs(s_scan - s_want) <= 1e-7  # golden-section fixed-point limit
    sigma = oracle_attack(pair, pi1, 1.0)
    got = np.diag(sigma.matrix).real
    assert abs(got[0] - s_want) <= 1e-7
    assert abs(got[1] - E / (1.0 + E)) <= 1e-7


def test_oracle_matches_closed_form_commuting():
    pair = radar_pair()
    res = helstrom_measurement(pair)
    sol = optimal_attack(pair, res.pi1, 1.0)
    sigma = oracle_attack(pair, res.pi1, 1.0)
    assert np.linalg.norm(sigma.matrix - sol.rho1_prime.matrix) <= 1e-6


def test_oracle_matches_closed_form_noncommuting():
    rng = np.random.default_rng(99)
    pair = random_pair(rng, 2)
    res = helstrom_measurement(pair)
    for lam in (0.5, 2.0):
        sol = optimal_attack(pair, res.pi1, lam)
        sigma = oracle_attack(pair, res.pi1, lam)
        assert np.linalg.norm(sigma.matrix - sol.rho1_prime.matrix) <= 1e-5
        gap = attacker_utility(sigma, pair.rho0, res.pi1, pair, lam) - sol.utility
        assert -ORACLE_TOL <= gap <= ORACLE_TOL


def test_oracle_nonconvergence_carries_best_iterate():
    rng = np.random.default_rng(3)
    pair = random_pair(rng, 4)
    res = helstrom_measurement(pair)
    with pytest.raises(OracleConvergenceError) as err:
        oracle_attack(pair, res.pi1, 0.5, iterations=2)
    assert isinstance(err.value.best_state, DensityOperator)
    assert err.value.iterations == 2
    assert math.isfinite(err.value.best_utility)


def test_chart_gradient_matches_finite_differences():
    rng = np.random.default_rng(21)
    dim = 3
    pair = random_pair(rng, dim)
    res = helstrom_measurement(pair)
    v = np.linalg.eigh(pair.rho1.matrix)[1]
    pi_s = v.conj().T @ res.pi1.matrix @ v
    log_r = np.log(np.linalg.eigvalsh(pair.rho1.matrix))
    h = np.diag(log_r).astype(np.complex128)
    h += 0.05 * (lambda a: (a + a.conj().T) / 2)(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    )
    val, grad = _chart_value_grad(h, pi_s, log_r, 1.3)
    eps = 1e-6
    for i in range(dim):
        for j in range(i, dim):
            de = np.zeros((dim, dim), dtype=np.complex128)
            if i == j:
                de[i, i] = 1.0
            else:
                de[i, j] = de[j, i] = 0.5  # real symmetric direction
            num = (
                _chart_value(h + eps * de, pi_s, log_r, 1.3)
                - _chart_value(h - eps * de, pi_s, log_r, 1.3)
            ) / (2 * eps)
            ana = float(np.real(np.sum(grad.conj() * de)))
            assert abs(num - ana) <= 1e-6 * max(1.0, abs(num))
    assert math.isfinite(val)


# ---------------------------------------------------------------- perturbation

def test_overlap_weights_radar():
    pair = radar_pair()
    pi1 = ProjectorMeasurement(np.diag([0.0, 0.0, 1.0]))
    beta = overlap_weights(pair.rho1, pi1)
    assert np.allclose(beta, [1.0, 0.0, 0.0], atol=1e-14)


def test_overlap_weights_sum_to_rank():
    rng = np.random.default_rng(31)
    for _ in range(5):
        rho = random_density(rng, 5, min_eigenvalue=1e-3)
        pi = random_projector(rng, 5)
        beta = overlap_weights(rho, pi)
        assert abs(beta.sum() - pi.rank) <= 1e-10
        assert np.all(beta >= -1e-12) and np.all(beta <= 1 + 1e-12)


def test_gap_condition_sums_handmade():
    # rho1 = diag(0.7, 0.3), projector onto (1,1)/sqrt(2):
    # off-diagonal coupling 0.5 against the gap 0.4 gives 1.25 on both rows
    rho1 = DensityOperator.from_diagonal([0.7, 0.3])
    pi1 = ProjectorMeasurement(np.full((2, 2), 0.5))
    sums = gap_condition_sums(rho1, pi1)
    assert np.allclose(sums, [1.25, 1.25], atol=1e-12)


def test_gap_condition_sums_commuting_are_zero():
    pair = radar_pair()
    pi1 = ProjectorMeasurement(np.diag([0.0, 0.0, 1.0]))
    assert np.allclose(gap_condition_sums(pair.rho1, pi1), 0.0, atol=1e-14)


def test_perturbation_zero_projector_exact():
    pair = radar_pair()
    rep = perturbation_estimate(pair, ProjectorMeasurement.zero(3), 10.0)
    assert rep.max_residual == 0.0


def test_perturbation_commuting_exact():
    pair = radar_pair()
    pi1 = ProjectorMeasurement(np.diag([0.0, 0.0, 1.0]))
    rep = perturbation_estimate(pair, pi1, 10.0)
    assert rep.applicable
    assert rep.max_residual <= 1e-12


def test_perturbation_residual_shrinks_with_lambda():
    rng = np.random.default_rng(17)
    spectrum = np.array([0.4, 0.3, 0.2, 0.1])
    from qspoof.sampling import haar_unitary

    u = haar_unitary(rng, 4)
    rho1 = DensityOperator(u @ np.diag(spectrum) @ u.conj().T)
    pair = HypothesisPair(
        rho0=DensityOperator.maximally_mixed(4), rho1=rho1, c0=0.5, c1=0.5
    )
    pi1 = random_projector(rng, 4, rank=2)
    r10 = perturbation_estimate(pair, pi1, 10.0)
    r100 = perturbation_estimate(pair, pi1, 100.0)
    assert r10.applicable and r100.applicable
    assert r100.max_residual <= 1e-3
    assert r10.max_residual / r100.max_residual >= 50.0


def test_perturbation_flags_rank_deficiency():
    pair = HypothesisPair(
        rho0=DensityOperator.maximally_mixed(3),
        rho1=DensityOperator.from_diagonal([0.6, 0.4, 0.0]),
        c0=0.5,
        c1=0.5,
    )
    rep = perturbation_estimate(pair, ProjectorMeasurement.zero(3), 10.0)
    assert not rep.full_rank
    assert not rep.applicable
    assert rep.residual.shape == (2,)  # sized to the support


def test_perturbation_flags_degenerate_spectrum():
    pair = HypothesisPair(
        rho0=DensityOperator.maximally_mixed(3),
        rho1=DensityOperator.from_diagonal([0.4, 0.4, 0.2]),
        c0=0.5,
        c1=0.5,
    )
    rep = perturbation_estimate(pair, ProjectorMeasurement.zero(3), 10.0)
    assert not rep.simple_spectrum
    assert rep.cluster_flags.any()
    assert not rep.applicable


def test_perturbation_gap_condition_flag():
    rng = np.random.default_rng(23)
    pair = near_commuting_pair(rng, 4)
    res = helstrom_measurement(pair)
    rep = perturbation_estimate(pair, res.pi1, 10.0)
    assert rep.gap_condition_holds == bool(np.all(rep.gap_sums < 1.0))
