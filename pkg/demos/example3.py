"""A coupled two-unknown system whose orbit needs a quadratic extension.

The kernel block of problems/ex3.dde is checked against the system, the
orbit of size 6 is computed over Q(x, y)[X]/(m), and the positive-part
certifier runs under an irrational order weight before the oracle check.
"""

import time
from pathlib import Path

from orbitsum.certifier import input_from_orbit_sum, ppe
from orbitsum.cli import parse_weight
from orbitsum.cli.problem import load_problem
from orbitsum.dde import support_cone_bound, verify_kernel_form
from orbitsum.orbit import compute_orbit, normalized_orbit_sum, orbit_equations, section_free_basis
from orbitsum.pipeline import SolveConfig, eliminant_str, field_elem_str, solve

N = 6

problem = load_problem(Path(__file__).resolve().parent.parent / "problems" / "ex3.dde")
k = problem.kernel
weight = parse_weight("0+1r:1/2")  # x^a y^b is small when sqrt(2) a + b/2 > 0
print("problem:", problem.name)
print("kernel block verified to t^%d:" % N, verify_kernel_form(k, problem.dde, N))

t0 = time.perf_counter()
orbit = compute_orbit(k.S)
print("orbit size %d over m(X) = %s" % (len(orbit), eliminant_str(orbit.field)))
for u, v in orbit.elements:
    print("  (%s, %s)" % (field_elem_str(u), field_elem_str(v)))

eqs = orbit_equations(k, orbit)
basis = section_free_basis(eqs, orbit.field)
ose = normalized_orbit_sum(k, orbit, eqs, basis)
print("section-free dimension:", len(basis))
for w in ose.weights:
    print("  weight", field_elem_str(w))

cert = ppe(input_from_orbit_sum(ose, support_cone_bound(problem.dde)), order=weight)
print("certifier verdict:", cert.verdict)
for i, tc in enumerate(cert.triples):
    print("  term %d: empty meet with the orthant: %s" % (i, tc.empty))

sol = solve(problem.dde, k, SolveConfig(order=N, weight=weight))
print("solve:", sol.status)
for row in sol.report["oracle"]["table"][:4]:
    print("  t^%d: %s" % (row["n"], row["computed"]))
print("elapsed: %.1f s" % (time.perf_counter() - t0))
