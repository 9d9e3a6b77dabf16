"""Positive-temperature references: ideal gases, the free-gas check and T_c.

In 2D every density is reached with ``mu < 0`` (no finite critical density);
in 3D the ideal gas condenses above ``rho_fc = zeta(3/2) (T / 4 pi)**(3/2)``.
The canonical functional evaluated on the free Bose gas stays below
``F0 + rho**2 V^(0)``, an upper bound for the interacting free energy.
"""

import numpy as np

from bogoliubov2d import PotentialSpec, ThermoPoint, critical_temperature_2d, fcan_energy, solve_scattering
from bogoliubov2d.asymptotics import ideal_gas_2d, ideal_gas_2d_mu, ideal_gas_3d

for mu in (-4.0, -1.0, -0.1, -1e-3):
    print(f"2D: T = 1, mu = {mu:<6} rho = {ideal_gas_2d(mu, 1.0):.8f}")
for rho in (0.01, 0.05, 0.1):
    F0, rho_fc = ideal_gas_3d(1.0, rho)
    print(f"3D: T = 1, rho = {rho:<5} F0 = {F0:.10f}  rho_fc = {rho_fc:.10f}")

sol = solve_scattering(PotentialSpec.bump(), 1.0)
T = 1.0
tp = ThermoPoint.from_solution(sol, temperature=T)
mu = ideal_gas_2d_mu(tp.rho, T)
gamma = lambda p: 1.0 / np.expm1((np.asarray(p) ** 2 - mu) / T)
zero = lambda p: np.zeros_like(np.asarray(p, dtype=float))
with np.errstate(over="ignore"):
    br = fcan_energy(tp, gamma, zero, 0.0, sol=sol, breakdown=True)
f0 = br.kinetic - br.entropy
print(f"\nfree-gas state at T = {T}, rho = {tp.rho}: F^can = {br.total:.6f}")
print(f"F0 + rho^2 V^(0) = {f0 + tp.rho**2 * tp.vhat0:.6f}")

for b in (0.05, 0.01, 0.001):
    print(f"T_c(rho = 1, b = {b}) = {critical_temperature_2d(1.0, b):.6f}")
print("T_c decreases like 1 / ln(1/b) as b -> 0")
