"""
Newton lifting and equiprojectable fibers
=========================================

Lift the root z = 1 of z^2 - y at y = 1 to a power series in t = y - 1,
recover a rational function from a truncated series, and split a finite
point set into pieces with constant fiber sizes.
"""
from fractions import Fraction

from tridecomp.chains import make_chain
from tridecomp.lifting import TruncatedSeries, lift_step, rational_reconstruction, start_state
from tridecomp.poly import VarOrder, parse_poly
from tridecomp.zerodim import FiberSystem, decompose_fiber, numeric_fiber_oracle

order = VarOrder(["y", "z"])
h = parse_poly("z^2 - y", order)
state = start_state([make_chain(order, [("z", "z - 1")])], [0], [Fraction(1)])

# each step doubles the precision: 1, 2, 4, 8
for _ in range(3):
    state = lift_step([h], state)
coeffs = [-c for c in state.series(0, 0, (0,)).by_degree()]
print("sqrt(1 + t) =", " + ".join(f"({c})*t^{k}" for k, c in enumerate(coeffs)))

###############################################################################
# 1 - t + t^2 - t^3 is 1/y expanded at y = 1, truncated after four terms.

oy = VarOrder(["y"])
series = TruncatedSeries(oy, [0], [Fraction(1)], {(k,): Fraction((-1) ** k) for k in range(4)}, 4)
num, den = rational_reconstruction(series, 0, 1)
print(f"reconstructed: {num} / ({den})")

###############################################################################
# Points with z1 in {0, 1, 2}: above z1 = 0 and 1 lie two values of z2,
# above z1 = 2 only one.  That gives two equiprojectable pieces.

fo = VarOrder(["z1", "z2"])
sys_ = FiberSystem(
    [parse_poly("z1*(z1 - 1)*(z1 - 2)", fo), parse_poly("z2^2 - 1", fo)],
    [parse_poly("(z1 - 2)*(z2 - 1)", fo)],
)
for comp in decompose_fiber(sys_):
    print(comp.fiber_profile, [g.to_str() for g in comp.chain.chain.polys])

# the numeric oracle finds the same profiles
print(sorted({p for _, p in numeric_fiber_oracle(sys_)}))
