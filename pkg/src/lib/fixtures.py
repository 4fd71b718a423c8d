"""
Printed reference matrices and coefficients, used as golden fixtures

The combinatorial construction in lib.permops and the linear solve in
lib.perturb are authoritative; these are only compared against them.
"""

import cmath
import math

import numpy as np

# P12 on two spins, basis (uu, ud, du, dd)
PRINTED_P12_N2 = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
])

# P12 P23 on three spins, basis (uuu, uud, udu, duu, ddu, dud, udd, ddd)
PRINTED_CYCLE = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
])

# Three-state cycle block on (uud, udu, duu)
PRINTED_CYCLE_BLOCK = np.array([
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 0],
])

# Printed (α, β, γ) of each two-up state over (v2, v3, v4)
_OMEGA = cmath.exp(-2j * math.pi / 3)
_ROOT3_OVER_3 = math.sqrt(3) / 3

PRINTED_SECTOR_COEFFICIENTS = {
    'uud': (_ROOT3_OVER_3, _ROOT3_OVER_3, _ROOT3_OVER_3),
    'udu': (_ROOT3_OVER_3, 1j * (1 - _OMEGA) / 3, -1j * (1 - _OMEGA.conjugate()) / 3),
    'duu': (_ROOT3_OVER_3, -1j * (1 - _OMEGA.conjugate()) / 3, 1j * (1 - _OMEGA) / 3),
}

# Printed with an unbalanced parenthesis, read as −i(1 − e^{i2π/3})/3
CORRECTED_SECTOR_COEFFICIENTS = {('udu', 'gamma')}

FIXTURES = {
    ('P12', 2): PRINTED_P12_N2,
    ('P12P23', 3): PRINTED_CYCLE,
}


def printed_matrix(label: str, n: int):
    """Printed matrix for an operator label, or None when there is none"""
    return FIXTURES.get((label, n))
