"""Shared oracle helpers: independent (slow, obviously-correct) evaluations
used to cross-check the production paths."""

import cmath
import itertools

from gkzsums.arith import FieldTower


def naive_hyp_complex(tower: FieldTower, A, chi_exps, x) -> complex:
    """Float enumeration of the hypergeometric sum, independent of both the
    cyclotomic representation and the vectorized bucket path."""
    ext, base = tower.ext, tower.base
    qm1 = ext.q - 1
    total = 0j
    for a in itertools.product(range(qm1), repeat=A.n):
        t = tuple(ext.exp_table[ai] for ai in a)
        val = 0
        for j, col in enumerate(A.columns):
            term = x[j]
            for ti, w in zip(t, col):
                term = ext.mul(term, ext.pow(ti, w))
            val = ext.add(val, term)
        chie = tower.chi_exponent(chi_exps, t) if base.q > 2 else 0
        tr = tower.psi_exponent(val)
        angle = (chie / (base.q - 1) if base.q > 2 else 0.0) + tr / base.p
        total += cmath.exp(2j * cmath.pi * angle)
    return total


def naive_hyp_exact(tower: FieldTower, A, chi_exps, x):
    """Exact enumeration through CycloNumber arithmetic, term by term;
    independent of the histogram accumulation in sums.hyp_sum."""
    from gkzsums.arith import CycloNumber, additive_char, mult_char

    ext = tower.ext
    qm1 = ext.q - 1
    total = CycloNumber.zero()
    for a in itertools.product(range(qm1), repeat=A.n):
        t = tuple(ext.exp_table[ai] for ai in a)
        val = 0
        for j, col in enumerate(A.columns):
            term = x[j]
            for ti, w in zip(t, col):
                term = ext.mul(term, ext.pow(ti, w))
            val = ext.add(val, term)
        total = total + mult_char(tower, chi_exps, t) * additive_char(tower, val)
    return total


def assert_close(a: complex, b: complex, tol: float = 1e-8):
    assert abs(a - b) < tol, f"{a} != {b}"
