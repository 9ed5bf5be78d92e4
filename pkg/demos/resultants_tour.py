"""
Three resultants
================

Eliminating x from x^2 - y and x*y - 1 with the Sylvester matrix, with
the Macaulay matrix of the homogenized system, and with the perturbed
resultant used when the plain one vanishes identically.
"""
from tridecomp.poly import VarOrder, parse_poly
from tridecomp.resultants import canny_pres, macaulay_resultant, sylvester_resultant

order = VarOrder(["x", "y"])
f = parse_poly("x^2 - y", order)
g = parse_poly("x*y - 1", order)

print("sylvester:", sylvester_resultant(f, g, "x").to_str())
print("macaulay: ", macaulay_resultant([f, g], ["x"]).to_str())
print("perturbed:", canny_pres([f, g], ["x"]).to_str())

# all three vanish at y^3 = 1, where the curves meet

###############################################################################
# Where the perturbation matters: two polynomials sharing the factor x - y.
# The plain resultant is identically zero, the perturbed one is not.

f = parse_poly("(x - y)*(x + 1)", order)
g = parse_poly("(x - y)*(x - 2)", order)
print("sylvester:", sylvester_resultant(f, g, "x").to_str())
print("perturbed:", canny_pres([f, g], ["x"]).to_str())
