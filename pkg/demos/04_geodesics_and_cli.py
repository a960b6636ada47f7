"""Which magnetic trajectories are also geodesics, and the command line.

Only one-parameter subgroups exp(tX) qualify: X central for F_{0, rho},
X horizontal and in the kernel of F for F_{U, 0}.
"""

# %%
import subprocess
import sys

import numpy as np

from heismag import LorentzForce, geodesic_magnetic_classifier, solve
from heismag.oracle import geodesic_residual

t = np.linspace(0.0, 1.0, 101)
cases = [
    ("F_{0,2}, central", LorentzForce(0.0, 0.0, 2.0), (0.0, 0.0, 1.0)),
    ("F_{(0,3),0}, along e1", LorentzForce(0.0, 3.0, 0.0), (1.0, 0.0, 0.0)),
    ("F_{e1,1}, generic", LorentzForce(1.0, 0.0, 1.0), (0.3, 0.5, -0.2)),
]
for label, F, ic in cases:
    geo = geodesic_magnetic_classifier(F, ic)
    res = np.max(np.abs(geodesic_residual(solve(F, ic), t)))
    print(f"{label:24s} geodesic: {str(geo):5s}  geodesic-equation residual {res:.1e}")

# %% The same questions from the shell
for argv in (["classify", "--force", "0,0,1", "--ic", "0,0,1"],
             ["classify", "--force", "1,0,1", "--ic", "0,0,-1"],
             ["verify", "--force", "1,0,1", "--ic", "0,0,-1", "--n", "51"]):
    out = subprocess.run([sys.executable, "-m", "heismag", *argv], capture_output=True, text=True)
    print("$ heismag", " ".join(argv), f"  [exit {out.returncode}]")
    print("  " + "\n  ".join(out.stdout.splitlines()[:6]))
