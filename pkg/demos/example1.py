"""Walks with steps E, N, W, S confined to the quarter plane.

Walks through each pipeline stage by hand: kernel form, orbit, orbit sum,
positive-part extraction and the comparison with the series oracle.
"""

from pathlib import Path

from orbitsum.algebra.laurent import VARS2, VARS3, LaurentPoly
from orbitsum.algebra.ratfun import to_laurent
from orbitsum.cli.problem import load_problem
from orbitsum.dde import oracle_expand, to_kernel_form, verify_kernel_form
from orbitsum.orbit import compute_orbit, normalized_orbit_sum, orbit_equations, section_free_basis
from orbitsum.pipeline import SolveConfig, field_elem_str, solve
from orbitsum.puiseux import positive_part

N = 8

problem = load_problem(Path(__file__).resolve().parent.parent / "problems" / "ex1.dde")
dde = problem.dde
print("problem:", problem.name)

k = to_kernel_form(dde)
print("kernel S:", k.S)
print("kernel form verified to t^%d:" % N, verify_kernel_form(k, dde, N))

orbit = compute_orbit(k.S)
print("orbit:")
for u, v in orbit.elements:
    print("  (%s, %s)" % (field_elem_str(u), field_elem_str(v)))

eqs = orbit_equations(k, orbit)
basis = section_free_basis(eqs, orbit.field)
ose = normalized_orbit_sum(k, orbit, eqs, basis)
print("orbit-sum weights:", ", ".join(field_elem_str(w) for w in ose.weights))

# the orbit sum is num / (x*y*K) with num a Laurent polynomial
xy2 = LaurentPoly({(1, 1): 1}, VARS2)
num = xy2 * to_laurent(ose.numerator[0].rational_value())
print("numerator:", num)
pp = positive_part(num, N, strict=True, kernel=(1, k.S))
xy = LaurentPoly({(1, 1, 0): 1}, VARS3)
oracle = oracle_expand(dde, N)["F"]
print("[x^> y^>] of the orbit sum equals x*y*F to t^%d:" % N, pp == xy * oracle)

sol = solve(dde, config=SolveConfig(order=N))
print("solve:", sol.status)
for row in sol.report["oracle"]["table"][:5]:
    print("  t^%d: %s" % (row["n"], row["computed"]))
