"""The second-order constant ``C_nu(d)`` and where it is minimised.

For ``nu = 8 pi`` the minimum sits at the boundary ``d = 0`` with value
``2 pi (1 + 4 Gamma + 2 ln pi)``; larger ``nu`` moves it into the interior.
"""

import math

import numpy as np

from bogoliubov2d import c_nu_of_d, c_of_d, minimize_cnu
from bogoliubov2d.asymptotics import C_8PI_AT_0

for nu in (8 * math.pi, 8 * math.pi + 0.1, 10 * math.pi, 466.5):
    d, v = minimize_cnu(nu)
    print(f"nu = {nu:8.4f}: d* = {d:.6g}, min C_nu = {v:.10f}, C_nu(0) = {c_nu_of_d(nu, 0.0):.10f}")
print(f"closed form at nu = 8 pi: {C_8PI_AT_0:.12f}")

print("\n    d       C(d)        C_8pi(d)")
for d in np.concatenate([[0.0], np.geomspace(0.01, 100, 9)]):
    print(f"{d:8.3f}  {c_of_d(d):.8f}  {c_nu_of_d(8 * math.pi, d):.8f}")
