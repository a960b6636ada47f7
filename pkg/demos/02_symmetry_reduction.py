"""Solving for an arbitrary left-invariant force by moving it to normal form.

Isometries fixing the identity, combined with time rescaling, move any
non-zero force to F_{e1, rho} with rho >= 0 or to F_{0, 1}.  Magnetic
trajectories move along with the force.
"""

# %%
import numpy as np

from heismag import LorentzForce, act_on_curve, act_on_force, canonicalize, isotropy_description, solve
from heismag.oracle import magnetic_residual

F = LorentzForce(0.6, -0.8, 1.5)
orbit = canonicalize(F)
w = orbit.witness
print("force      ", tuple(F))
print("normal form", np.round(np.array(tuple(orbit.canonical)), 12).tolist(), f"({orbit.kind})")
print("witness B  ", np.round(w.B, 6).tolist(), " r =", w.r)
print("isotropy   ", isotropy_description(F))

# %% The pipeline inside solve()
ic = (0.4, -0.2, 0.9)
ic_canonical = w.act_on_ic(ic)
print("\ninitial velocity in normal form:", np.round(ic_canonical.as_array(), 6))
g = solve(F, ic)
print("solution family:", g.case, "| period of x:", g.period)

# %% Equivariance: transform a known solution and check it solves the new problem
t = np.linspace(-4.0, 4.0, 81)
for name, elem in [("witness", w), ("its inverse", w.inverse())]:
    moved = act_on_curve(elem, g)
    res = magnetic_residual(moved, act_on_force(elem, F), t)
    print(f"{name:12s} -> force {np.round(np.array(tuple(act_on_force(elem, F))), 6).tolist()}  residual {np.max(np.abs(res)):.1e}")
