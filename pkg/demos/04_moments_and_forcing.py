"""Boundary moments and the finite-atom obstruction.

The boundary block of a weighted pair is a stationary system: a unitary
walk whose autocorrelations reproduce the Fourier coefficients of the
symbol's defect weight. Fitting those moments by nonnegative masses at
finitely many unimodular atoms succeeds only in degenerate situations,
which is exactly what rules out finite point spectrum for the
associated parts.
"""

import numpy as np

from woldlab import (block_model_check, block_model_from_assembly,
                     construct_example, finite_spectrum_forcing,
                     moment_match, polynomial)

sym = polynomial([0.5, 0.5])
pair = construct_example(sym, 32)
model = block_model_from_assembly(pair.assembly)

print("stationary system identities (averaging symbol, degree 32):")
for name, value in block_model_check(model).items():
    print(f"  {name:18s} {value:.3e}")
print()

measured, expected, err = moment_match(model.u, model.b[:, 0], sym, 12)
print("moment match over |k| <= 12:")
print(f"  w(0) measured {measured[0].real:+.6f}  expected"
      f" {expected[0].real:+.6f}")
print(f"  w(1) measured {measured[1].real:+.6f}  expected"
      f" {expected[1].real:+.6f}")
print(f"  worst deviation {err:.3e}")
print()

# Four atoms cannot carry the averaging weight: the best nonnegative
# fit misses by a margin far above any tolerance.
atoms4 = np.exp(2j * np.pi * np.arange(4) / 4)
rep4 = finite_spectrum_forcing(None, sym, 12, atoms=atoms4)
print(f"4 equally spaced atoms: residual {rep4.residual:.6f}"
      f" -> forced trivial: {rep4.forced_trivial}")

# With as many atoms as moment lines the criterion aliases: 12 atoms
# interpolate every band-limited sequence up to |k| = 6 + 5, so the fit
# succeeds and nothing is forced. Moment matching is a necessary
# condition, not a spectral measure.
atoms12 = np.exp(2j * np.pi * np.arange(12) / 12)
rep12 = finite_spectrum_forcing(None, sym, 6, atoms=atoms12)
print(f"12 atoms at k_max 6:    residual {rep12.residual:.3e}"
      f" -> forced trivial: {rep12.forced_trivial}")
print(f"  masses {np.round(rep12.masses, 4)}")
