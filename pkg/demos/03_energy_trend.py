"""Ground-state energy of the simplified functional against its small-b expansion.

``F_min = 4 pi rho**2 b + 4 pi rho**2 b**2 ln b + min_d C_nu(d) rho**2 b**2 + o(rho**2 b**2)``.
The table lists ``|remainder| / (rho**2 b**2)`` which should go to zero as ``b`` does.
At these ``b`` it does not yet decrease monotonically: a positive remainder of
order ``b`` (the large-momentum piece ``I_>``, about ``250 b`` in these units)
competes with negative ``b ln b`` corrections.
"""

import math

from bogoliubov2d import ThermoPoint, ground_state_expansion
from bogoliubov2d.asymptotics import i_greater
from bogoliubov2d.constants import EULER_GAMMA

EPS = 2.0 * math.exp(-EULER_GAMMA)
print("   b      F_min          residual/b^2   d*_numeric   rho0/rho    I_>(0)/b^2")
for b in (0.05, 0.02, 0.01, 0.005, 0.0025, 0.001):
    r = ground_state_expansion(ThermoPoint(1.0, 0.0, 8 * math.pi, b))
    ig = i_greater(0.0, b, EPS) / b**2
    print(f"{b:7.4f}  {r.f_min:.10f}  {r.residual / b**2:+.5f}       {r.d_star_numeric:.3e}   {r.rho0_ratio:.6f}   {ig:.4f}")
