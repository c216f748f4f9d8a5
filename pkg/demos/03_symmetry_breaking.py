"""Spectral reality and its geometric breaking.

The driven-frame effective Hamiltonian is not Hermitian, yet its spectrum
is real as long as the operator is a similarity transform of a Hermitian
one.  Geometrically, a reflection-symmetric metric protects that reality.
Adding an odd component asym * sin(q z) to the metric removes the
protecting reflection; beyond an empirical threshold, quasienergies
collide and leave the real axis in complex-conjugate pairs, and the
corresponding mode piles up on one side of each metric period.

The threshold below is not predicted by any formula here -- it was
calibrated by this very sweep and is recorded in
tests/golden/pt_threshold.json.
"""

from curvedual.pipelines import run_pt_sweep

asymmetries = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3]
rows = run_pt_sweep(asymmetries)

print("kappa(z) = 1 + 0.3 cos(2z) + asym sin(2z), strong drive (amplitude 4, omega 64)")
print(f"{'asym':>6} {'max|Im eps|':>12} {'broken':>7} {'pairs':>6} {'side-bias':>10}")
for r in rows:
    print(
        f"{r['asymmetry']:>6.2f} {r['max_imag']:>12.3e} "
        f"{str(r['pt_broken']).lower():>7} {r['n_conjugate_pairs']:>6} "
        f"{r['localization_asymmetry']:>10.4f}"
    )

first = next((r["asymmetry"] for r in rows if r["pt_broken"]), None)
print(f"\nempirical breaking threshold: first broken point at asym = {first}")
print("(side-bias is the density-weighted sign of sin(2z) for the most")
print(" complex eigenvector; the plain left/right split would read zero")
print(" because the density repeats with the metric period)")
