#!/usr/bin/env python3
"""Independent stiff-solver oracle for the over-damping mode plateau.

Solves u'' + xi^2 u + (b(t) + g(t) xi^2) u' = 0 with b = e^t, g = e^{-t}/2,
xi = 1, data (1, 0) using scipy's Radau IIA (an implicit Runge-Kutta method
unrelated to the TR-BDF2 pair in core/), and prints the plateau value that is
frozen into the acceptance suite and tests/unit/test_modes.cpp.

    $ python3 tests/oracle/mode_limit_oracle.py
    T=40: u = 0.464630872869  (ut = -2.5e-17)
"""

import numpy as np
from scipy.integrate import solve_ivp


def rhs(t, y):
    b = np.exp(t)
    g = 0.5 * np.exp(-t)
    return [y[1], -y[0] - (b + g) * y[1]]


def main():
    for T in (20.0, 40.0, 60.0):
        sol = solve_ivp(rhs, (0.0, T), [1.0, 0.0], method="Radau",
                        rtol=1e-12, atol=1e-14)
        print(f"T={T:g}: u = {sol.y[0, -1]:.12f}  (ut = {sol.y[1, -1]:.1e})")


if __name__ == "__main__":
    main()
