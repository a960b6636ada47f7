"""A tour of the closed-form solution families for F_{e1, 1}.

Run with ``python demos/01_solution_families.py``.
"""

# %% Setup
import numpy as np

from heismag import IntegrationConfig, LorentzForce, classify, integrate_full, period_and_image, solve

F = LorentzForce(1.0, 0.0, 1.0)
cbrt2 = 2.0 ** (1.0 / 3.0)

# One initial velocity per family.  The first coordinate is x0 = x'(0); the
# discriminant of the quartic P selects the formula used for x(t).
initial = {
    "elliptic, two real roots": (0.0, 0.0, -1.0),
    "elliptic, upper root pair": (0.0, -1.5 * cbrt2 - 1.5, -1.0),
    "elliptic, lower root pair": (0.0, -2.75, -2.0),
    "double root, mu > 0": (0.0, -1.5 * cbrt2 - 1.0, -1.0),
    "double root, mu < 0, right": (0.0, 2.0 * cbrt2**2 - 1.0, 2.5 * cbrt2 - 1.0),
    "double root, mu < 0, left": (0.0, 2.0, -4.75),
    "triple root": (0.0, 2.0, 2.0),
}

# %% Classification, period and image of x
print(f"{'family':28s} {'case':22s} {'Delta':>11s} {'period':>9s}  image of x")
for label, ic in initial.items():
    a = classify(ic, F.rho)
    period, image = period_and_image(a)
    per = "-" if period is None else f"{period:9.5f}"
    print(f"{label:28s} {str(a.case):22s} {a.delta:11.3e} {per:>9s}  {image}")

# %% Cross-check against the numerical oracle
# Orbits asymptotic to a hyperbolic point amplify double-precision errors
# like exp(lambda t), so they are integrated with the Taylor method instead.
t = np.linspace(0.0, 10.0, 201)
print("\nmax |closed form - oracle| on [0, 10]")
for label, ic in initial.items():
    g = solve(F, ic)
    method = "taylor" if "mu < 0" in label else "DOP853"
    cfg = IntegrationConfig(t_span=(0.0, 10.0), n_samples=t.size, method=method)
    err = np.max(np.abs(integrate_full(F, ic, cfg).analysis.states - g(t)))
    print(f"  {label:28s} {err:.2e}  ({method})")

# %% The curve itself drifts: only x is periodic
g = solve(F, initial["elliptic, two real roots"])
T = g.period
print("\nafter one period of x:", np.round(g(T)[:3], 6), "(x back at 0, y and z shifted)")
