"""
Decomposing a hypersurface
==========================

The curve x1*x2*(x1 + x2) = 0 in the plane is three lines through the
origin.  With x1 < x2, the chains come out grouped by their leader
variable: one chain for the two lines that can be solved for x1, and one
for the line x2 = 0.
"""
import os

from tridecomp.chains import prem_chain
from tridecomp.decompose import RandomConfig, main_decompose
from tridecomp.sysfile import load_system_file

HERE = os.path.dirname(os.path.abspath(__file__))

inp, overrides, _ = load_system_file(os.path.join(HERE, "systems", "example1.sys"))
print("input:", [f.to_str() for f in inp.polys])

# the override block pins alpha, so the run does not depend on a seed
result = main_decompose(inp, RandomConfig(overrides=overrides, deterministic=True))

for rec in result.chains:
    leaders = [inp.order.names[z] for z in rec.chain.leaders]
    print(f"chain over {leaders}: {[g.to_str() for g in rec.chain.polys]}  ({rec.cls})")

# x1^2 + x1*x2 = x1*(x1 + x2) carries two of the lines

###############################################################################
# Every input polynomial reduces to zero against every chain.

for rec in result.chains:
    print([prem_chain(f, rec.chain).to_str() for f in inp.polys])

###############################################################################
# The random choices made along the way are logged, so a run can be
# replayed exactly.

print("alpha:", result.random_log["alpha"])
print("avoid-repetitions bound:", result.probability_report["avoid_repetitions"])
