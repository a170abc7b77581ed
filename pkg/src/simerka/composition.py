"""Composition of form classes: products, inverses and powers."""

from __future__ import annotations

import math

from .forms import QForm, _reduce, _xgcd, principal_form, scan_represented

COPRIME_SCAN_BOUND = 20


def _compose(a1, b1, c1, a2, b2, c2):
    # general composition of primitive forms (united forms, gcd > 1 allowed)
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return _reduce(a3, b3, c3)


def _square(a, b, c):
    # duplication: only one extended gcd, against the leading coefficient
    d, u, _ = _xgcd(b, a)
    if d < 0:
        d, u = -d, -u
    A = a // d
    t = (-c * u) % A
    if A - t < t:
        t -= A
    b3 = b + 2 * A * t
    a3 = A * A
    return _reduce(a3, b3, (b3 * b3 - (b * b - 4 * a * c)) // (4 * a3))


def compose(q1, q2) -> QForm:
    """Reduced representative of the class product q1 * q2."""
    if q1.disc != q2.disc:
        raise ValueError("cannot compose forms of different discriminants")
    return QForm._raw(*_compose(*q1, *q2))


def dirichlet_compose(q1, q2, scan_bound: int = COPRIME_SCAN_BOUND) -> QForm:
    """Composition by Dirichlet's united forms.

    If the leading coefficients share a factor, q2 is first replaced by an
    equivalent form whose leading coefficient is a represented value coprime
    to A1.  Then B is chosen with B = B1 (mod 2A1), B = B2 (mod 2A2) and the
    product is (A1 A2, B, (B^2 - D) / (4 A1 A2)).
    """
    d = q1.disc
    if d != q2.disc:
        raise ValueError("cannot compose forms of different discriminants")
    a1, b1, _ = q1
    a2, b2, _ = q2
    if math.gcd(a1, a2) != 1:
        for value, f in scan_represented(q2, scan_bound):
            if math.gcd(value, a1) == 1:
                a2, b2, _ = f
                break
        else:
            raise ArithmeticError(
                f"no value of {q2} coprime to {a1} within |x|,|y| <= {scan_bound}"
            )
    # B = B1 + 2*A1*t with A1*t = (B2 - B1)/2 (mod A2); B1 = B2 = D (mod 2)
    t = (b2 - b1) // 2 * pow(a1, -1, a2) % a2 if a2 > 1 else 0
    b = b1 + 2 * a1 * t
    a3 = a1 * a2
    return QForm._raw(*_reduce(a3, b, (b * b - d) // (4 * a3)))


def inverse(q) -> QForm:
    a, b, c = q
    return QForm._raw(*_reduce(a, -b, c))


def power(q, n: int) -> QForm:
    """Reduced representative of q^n; negative n goes through the inverse."""
    d = q.disc
    if n < 0:
        q, n = inverse(q), -n
    result = principal_form(d)
    if n == 0:
        return result
    base = _reduce(*q)
    acc = None
    while n:
        if n & 1:
            acc = base if acc is None else _compose(*acc, *base)
        n >>= 1
        if n:
            base = _square(*base)
    return QForm._raw(*acc)


def power_product(forms, exponents, d) -> QForm:
    """Reduced product of forms[i] ** exponents[i]."""
    acc = principal_form(d)
    for f, e in zip(forms, exponents):
        if e:
            acc = compose(acc, power(f, e))
    return acc
