"""
When is the distortion well described to first order?
=====================================================

The closed-form exponent ln rho1 - Pi1/lambda is a perturbed version of
ln rho1.  For large prices its eigenvalues are approximately
ln r_i - beta_i/lambda with beta_i the projector weight on the i-th
eigenvector, and the error contracts like 1/lambda^2 provided the
spectrum of rho1 is simple and the projector couples eigenvectors
weakly relative to their gaps.  This script measures the contraction
and shows the diagnostic flags on instances where the expansion is
not trustworthy.
"""

import numpy as np

from qspoof import (
    DensityOperator,
    HypothesisPair,
    gap_condition_sums,
    helstrom_measurement,
    perturbation_estimate,
)
from qspoof.sampling import haar_unitary, random_density, random_projector

rng = np.random.default_rng(5)

# Simple spectrum with equal gaps of 0.1, rotated into a random basis.
u = haar_unitary(rng, 4)
rho1 = DensityOperator(u @ np.diag([0.4, 0.3, 0.2, 0.1]) @ u.conj().T)
pair = HypothesisPair(
    rho0=random_density(rng, 4, min_eigenvalue=1e-3), rho1=rho1, c0=0.5, c1=0.5
)
pi1 = random_projector(rng, 4, rank=2)

print("residual of the first-order eigenvalue estimate:")
prev = None
for lam in (10.0, 30.0, 100.0, 300.0):
    rep = perturbation_estimate(pair, pi1, lam)
    note = "" if prev is None else f"  (shrink {prev / rep.max_residual:6.1f}x)"
    print(f"  lambda = {lam:6.0f}: {rep.max_residual:.3e}{note}")
    prev = rep.max_residual

rep = perturbation_estimate(pair, pi1, 100.0)
print()
print("per-eigenvector coupling sums (need < 1 for the gap condition):")
print(" ", np.round(rep.gap_sums, 3), "->", "holds" if rep.gap_condition_holds else "fails")

# A commuting instance is exact at first order: the projector is already
# diagonal in the eigenbasis of rho1, so there is nothing to expand.
diag_pair = HypothesisPair(
    rho0=DensityOperator.from_diagonal([0.6, 0.4, 0.0]),
    rho1=DensityOperator.from_diagonal([0.06, 0.04, 0.9]),
    c0=0.5,
    c1=0.5,
)
hel = helstrom_measurement(diag_pair)
rep = perturbation_estimate(diag_pair, hel.pi1, 10.0)
print()
print(f"commuting instance residual: {rep.max_residual:.1e}")
print(f"coupling sums: {gap_condition_sums(diag_pair.rho1, hel.pi1)}")

# Degenerate spectra void the expansion; the report flags rather than lies.
deg = HypothesisPair(
    rho0=DensityOperator.maximally_mixed(3),
    rho1=DensityOperator.from_diagonal([0.4, 0.4, 0.2]),
    c0=0.5,
    c1=0.5,
)
rep = perturbation_estimate(deg, helstrom_measurement(deg).pi1, 10.0)
print()
print(f"degenerate instance: applicable = {rep.applicable}, "
      f"simple spectrum = {rep.simple_spectrum}, clusters = {rep.cluster_flags}")
