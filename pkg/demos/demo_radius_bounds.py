"""Sandwiching the radius of convergence of the return series.

Two routes bound the breakdown point of G(z).  From above: minimize
P(t)/t, the one-variable form that ignores decay corrections.  From
below: track where the G-quadratic loses its real root once the bad
strings contribute a decaying D term.  A tighter certified decay radius
R pulls the lower bound up toward the free-group value.
"""

import math

from leinert import (
    DBound,
    RadiusProblem,
    bound_report,
    curve_points,
    discriminant_roots,
    eval_P,
    free_radius,
    r_squared_closed_form,
    radius_from_discriminant,
    solve_G_upper,
    woess_radius,
)

s, a = 2, 0.25
weights = (a,) * (2 * s)

r, theta = woess_radius(weights)
print(f"minimization radius for 2s = {2*s} letters of weight {a}: {r:.9f}")
print(f"  closed form 1/(2a sqrt(2s-1)) = {free_radius(s, a):.9f}, theta = {theta:.4f}")

print("\ndecay radius R -> breakdown point of the G-quadratic:")
for R in (2.0, 5.0, 10.0, math.inf):
    d_bound = DBound.zero() if math.isinf(R) else DBound.radius_form(R)
    problem = RadiusProblem(s=s, a=a, d_bound=d_bound)
    z = radius_from_discriminant(problem)
    label = "none" if math.isinf(R) else f"R = {R:g}"
    print(f"  {label:>8}: z = {z:.9f}")

# with a finite R the discriminant has two zeros inside (0, R); the
# smaller one is where the series first breaks down
problem = RadiusProblem(s=s, a=a, d_bound=DBound.radius_form(2.0))
print("\ndiscriminant zeros at R = 2:", [f"{z:.6f}" for z in discriminant_roots(problem)])

# closed-form inversion: pick the breakdown point, recover the R behind it
z = 0.9
R = math.sqrt(r_squared_closed_form(z, s, a))
back = radius_from_discriminant(
    RadiusProblem(s=s, a=a, d_bound=DBound.radius_form(R))
)
print(f"\nround trip: z = {z} -> R = {R:.6f} -> z = {back:.12f}")

# below the lower radius the solved G sits between P and Q
report = bound_report(problem)
print(f"\nbound report at R = 2: [{report.r_lower:.6f}, {report.r_upper:.6f}],"
      f" relative gap {report.relative_gap:.1%}")
print("z      G(z)       P(zG)      sandwich")
for k in range(5):
    z = report.r_lower * (0.15 + 0.8 * k / 4)
    g = solve_G_upper(z, problem)
    p = eval_P(z * g, weights)
    print(f"{z:.3f}  {g:.6f}  {p:.6f}  {'ok' if p <= g + 1e-9 else 'violated'}")

print("\nradius curve, a = 1/(2s):")
print("s   z_lower        z_upper        free formula")
for s_, a_, lo, hi, free in curve_points(range(2, 7), d_bound=DBound.radius_form(3.0)):
    print(f"{s_}   {lo:.6f}       {hi:.6f}       {free:.6f}")
