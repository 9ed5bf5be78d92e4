"""
Lines and isolated points
=========================

The system in systems/example3.sys has two lines (x2 = 0 and x1 + x2 = 0) and four
isolated solutions (+-sqrt2, +-sqrt2).  Two of those points already sit on
the line x1 + x2 = 0, so an irredundant answer keeps just the other two.
"""
import os

from tridecomp.chains import make_chain, validate_chain
from tridecomp.decompose import DecompositionResult, RandomConfig, main_decompose
from tridecomp.poly import VarOrder
from tridecomp.sysfile import load_system_file
from tridecomp.verify import verify_irredundant, verify_result

HERE = os.path.dirname(os.path.abspath(__file__))
inp, overrides, _ = load_system_file(os.path.join(HERE, "systems", "example3.sys"))

# the file gives both equidimensional parts explicitly
for part in inp.equidim_parts:
    print(f"dimension {part.d}: {[p.to_str() for p in part.polys]}")

result = main_decompose(inp, RandomConfig(overrides=overrides, deterministic=True))
for rec in result.chains:
    print(rec.dimension, [g.to_str() for g in rec.chain.polys])

###############################################################################
# The projections, keyed by the eliminated variables.  The override alpha
# makes one of them vanish, so a seeded alpha is drawn instead (the warning
# above).

for S, g in sorted(result.cover.items()):
    print([inp.order.names[i] for i in S], g.to_str())

###############################################################################
# A numeric check of the answer: cover, irredundancy, degrees

report = verify_result(inp, result, samples=10, seed=1)
print(report.to_text())

###############################################################################
# Now keep all four points as a single chain.  The verifier notices that
# two of them lie on the line x1 + x2 = 0.

order = VarOrder(["x1", "x2"])
redundant = DecompositionResult(
    [
        validate_chain(make_chain(order, [("x2", "x2^2 - 2"), ("x1", "x1^2 - 2")])),
        validate_chain(make_chain(order, [("x1", "x1 + x2")])),
        validate_chain(make_chain(order, [("x2", "x2")])),
    ],
    order,
    {},
    {},
)
for v in verify_irredundant(redundant, 25):
    if v.contained_points:
        print(f"chain {v.i} inside chain {v.j}? {v.verdict} at {v.contained_points}")
