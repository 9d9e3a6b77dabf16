"""Numerical constants shared across modules."""

import math

#: Euler-Mascheroni constant (30 significant digits).
EULER_GAMMA = 0.577215664901532860606512090082

#: Riemann zeta(3/2) (30 significant digits).
ZETA_3_2 = 2.61237534868548834334856756793

#: zeta(5/2), used by the 3D ideal-gas free energy.
ZETA_5_2 = 1.34149165193473622951226326003

PI = math.pi
TWO_PI = 2.0 * math.pi
FOUR_PI_SQ = TWO_PI**2

#: Prefactor in eps = EPS_PREFACTOR * sqrt(rho) (cutoff of the log Fourier transform).
EPS_PREFACTOR = 2.0 * math.exp(-EULER_GAMMA)
