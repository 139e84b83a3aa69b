"""A first tour: quasi-critical points of two Belyi maps on elliptic curves.

Everything below is exact rational / quadratic-field arithmetic; no floats.
Run:  python demos/01_quasi_critical_points.py
"""

from torbelyi import (
    BelyiPair,
    EllipticCurve,
    analyze,
    critical_points,
    fibers,
    is_belyi,
    parse_curve_function,
)

# ---------------------------------------------------------------------------
# Example 1: E: y^2 = x^3 + 1 with beta(x, y) = (1 - y)/2.
# The Jacobian determinant (df/dx)(dbeta/dy) - (df/dy)(dbeta/dx) reduces to
# (3/2) x^2, so the critical points sit over x = 0 -- plus the point at
# infinity, which is always tested separately.
# ---------------------------------------------------------------------------
E = EllipticCurve(0, 0, 0, 0, 1, label="36/a/4")
beta = parse_curve_function("(1-y)/2", E)
pair = BelyiPair(E, beta, "3T1-3_3_3-a")

points, unresolved = critical_points(pair)
print("critical points of (1-y)/2 on y^2 = x^3 + 1:")
for P in points:
    print("   ", P)

check = is_belyi(pair)
print("critical values inside {0, 1, inf}?", check.status)

# The three fibers B = beta^-1(0), W = beta^-1(1), F = beta^-1(inf), with
# ramification indices attached from local series expansions:
data = fibers(pair)
for tag in "BWF":
    rows = [f"{P} (e = {e})" for P, e in data[tag].points.items()]
    print(f"  fiber {tag}:", "; ".join(rows))

report = analyze(pair)
print("degree:", report.degree)
print("quasi-critical points all torsion?", report.all_torsion)
print("group generated:", report.group, " -- the Z_3 subgroup of the hexagon")
print()

# ---------------------------------------------------------------------------
# Example 2: E: y^2 = x^3 - x with beta(x, y) = x^2.  The Jacobian reduces
# to -4xy, giving the full 2-torsion as the quasi-critical set.
# ---------------------------------------------------------------------------
E2 = EllipticCurve(0, 0, 0, -1, 0, label="32/a/3")
pair2 = BelyiPair(E2, parse_curve_function("x^2", E2), "4T1-4_4_2.2-a")
report2 = analyze(pair2)
print("x^2 on y^2 = x^3 - x:")
print("  ramification multiset:", report2.ramification_multiset)
print("  group generated:", report2.group)
for tag in "BWF":
    fib = report2.fibers[tag]
    rows = [f"{P} (e = {e}, order {fib.orders[P]})" for P, e in fib.points.items()]
    print(f"  fiber {tag}:", "; ".join(rows))

# ---------------------------------------------------------------------------
# A map that is NOT Belyi: x on y^2 = x^3 + 1 has a critical value -1.
# ---------------------------------------------------------------------------
bad = BelyiPair(E, parse_curve_function("x", E), "coordinate-x")
verdict = is_belyi(bad)
print()
print("is x a Belyi map on y^2 = x^3 + 1?", verdict.status)
for P, value in verdict.offending:
    print(f"   critical point {P} has value {value} outside {{0, 1, inf}}")
