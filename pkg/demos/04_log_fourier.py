"""The Fourier transform of ``ln|x|`` and the checks built on it.

``c0 = (2 pi)**2 (ln 2 - Gamma)`` comes out of the Gaussian test function;
the principal-value part ``P`` picks up ``(2 pi)**2 ln(kappa) phi(0)`` under
dilation; the delta terms cancel exactly once ``epsilon`` is tied to ``a`` and ``b``.
"""

import math

import numpy as np

from bogoliubov2d.constants import EULER_GAMMA
from bogoliubov2d.logft import C0_EXACT, c0_check, delta_cancellation_check, p_action, p_scaling_residual

gauss = lambda p: np.exp(-0.5 * np.asarray(p, dtype=float) ** 2)
print(f"c0 by quadrature = {c0_check():.15f}")
print(f"c0 closed form   = {C0_EXACT:.15f}")
print(f"P(gauss)         = {p_action(gauss):.15f}  (= -c0 / 2)")
for k in (0.5, 2.0, 5.0):
    print(f"scaling residual at kappa = {k}: {p_scaling_residual(gauss, k):.2e}")
for b in (0.01, 0.05):
    for a in (0.3, 1.0):
        print(f"delta cancellation b={b}, a={a}: {delta_cancellation_check(b=b, a=a):.1e}")
eps = 2.0 * math.exp(-EULER_GAMMA - 0.5 / 0.01)
print(f"with epsilon off by 1%: {delta_cancellation_check(b=0.01, a=1.0, epsilon=1.01 * eps):.3e}"
      f"  (= 2 b ln 1.01 = {0.02 * math.log(1.01):.3e})")
