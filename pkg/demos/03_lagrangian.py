"""Magnetic trajectories as Euler-Lagrange solutions.

``L = |v|^2 / 2 - theta(v)`` with ``d theta = omega_F``.  The primitive is
not unique: adding an exact form changes L but not its extremals.
"""

# %%
import numpy as np

from heismag import LagrangianSpec, LorentzForce, default_theta, el_residual, explicit_theta, lagrangian_eval, solve, theta_check
from heismag.variational import exact_form

F = LorentzForce(1.0, 0.0, 1.0)
print("d theta = omega_F for the default primitive:", bool(theta_check(default_theta(F), F)))
print("... and against the wrong force F_{0,1}:   ", bool(theta_check(default_theta(F), LorentzForce(0, 0, 1))))

# %% Two primitives differing by d(rho z)
state = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 1.0])
print("\nL at (1,1,0; 0,0,1):")
print("  default primitive ", lagrangian_eval(LagrangianSpec(F), state))
print("  without rho dz    ", lagrangian_eval(LagrangianSpec(F, explicit_theta(F)), state))

# %% Euler-Lagrange residuals along a closed-form trajectory
g = solve(F, (0.0, 0.0, -1.0))
t = np.linspace(-5.0, 5.0, 100)
f = lambda x, y, z: np.sin(x) * np.cos(y) + 0.5 * np.sin(z)  # noqa: E731
for name, theta in [("default", None), ("explicit", explicit_theta(F)), ("default + df", default_theta(F) + exact_form(f))]:
    r = el_residual(LagrangianSpec(F, theta), g, t)
    print(f"  {name:14s} max residual {np.max(np.abs(r)):.1e}")

# %% A Riemannian geodesic is not an extremal for F_{0,1}
geo = solve(LorentzForce(0.0, 0.0, 0.0), (0.6, 0.0, 0.8))
r = el_residual(LagrangianSpec(LorentzForce(0.0, 0.0, 1.0)), geo, t)
print("\ngeodesic under F_{0,1}: max |residual| per row", np.round(np.max(np.abs(r), axis=0), 6))
