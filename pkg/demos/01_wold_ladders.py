"""Wandering ladders and hyper-ranges of isometric windows.

Three runs of the same split: a truncated shift (everything is ladder),
a shift padded with a unitary block (the block survives as the
hyper-range), and an inner multiplier (the ladder is tilted but still
exhausts the window).
"""

import numpy as np
import scipy.linalg as sla

from woldlab import (GradedOperator, abstract_space, blaschke, compress,
                     direct_sum, multiplier, shift, wold_split)


def describe(name, dec):
    dims = [s.dim for s in dec.ladder]
    print(f"{name}:")
    print(f"  wandering dim      {dec.wandering.dim}")
    print(f"  ladder dims        {dims[:6]}{' ...' if len(dims) > 6 else ''}"
          f" ({len(dims)} rungs)")
    print(f"  hyper-range dim    {dec.hyper_range.dim}")
    print(f"  completeness       {dec.completeness_residual:.3e}")
    print(f"  rung orthogonality {dec.ladder_orthogonality:.3e}")
    print()


# A truncated shift: one wandering vector, one rung per degree, nothing
# left over.
describe("pure shift, degree 16", wold_split(compress(shift(1, 16)), 16))

# Pad the shift with a 3x3 unitary. The ladder walks the shift part and
# the unitary block is exactly what the ladder cannot reach.
sq = compress(shift(1, 10))
rng = np.random.default_rng(3)
q = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0]
space, _ = direct_sum(sq.domain, abstract_space(3))
op = GradedOperator(matrix=sla.block_diag(sq.matrix, q),
                    domain=space, codomain=space, growth=1, window=9)
describe("shift plus 3x3 unitary", wold_split(op, 10))

# Multiplication by an inner function is also a shift in disguise: the
# wandering vector is no longer a coordinate, but the ladder still
# fills the window. The window is kept far below the truncation degree
# so the dropped tail cannot contaminate the rungs.
sym = blaschke([0.25], truncation_hint=200)
big = compress(multiplier(sym, 112, order=112))
tilted = GradedOperator(matrix=big.matrix, domain=big.domain,
                        codomain=big.codomain, growth=0, window=12)
describe("inner multiplier, zero at 0.25", wold_split(tilted, 44))
