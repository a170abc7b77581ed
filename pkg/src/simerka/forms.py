"""
Positive definite binary quadratic forms.

A form Ax^2 + Bxy + Cy^2 is the triple ``QForm(A, B, C)``.  Reduced means
|B| <= A <= C with B >= 0 whenever |B| == A or A == C; every class of
properly equivalent forms has exactly one reduced member.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from . import arith

FUNDAMENTAL_TRIAL_BOUND = 10**6


class ConditionViolated(ValueError):
    pass


class QForm(tuple):
    __slots__ = ()

    def __new__(cls, a, b, c):
        a, b, c = int(a), int(b), int(c)
        if a <= 0 or b * b - 4 * a * c >= 0:
            raise ValueError(f"({a},{b},{c}) is not positive definite")
        return tuple.__new__(cls, (a, b, c))

    @classmethod
    def _raw(cls, a, b, c):
        return tuple.__new__(cls, (a, b, c))

    def __getnewargs__(self):
        return tuple(self)

    a = property(lambda self: self[0])
    b = property(lambda self: self[1])
    c = property(lambda self: self[2])

    @property
    def disc(self) -> int:
        a, b, c = self
        return b * b - 4 * a * c

    def __call__(self, x, y):
        a, b, c = self
        return a * x * x + b * x * y + c * y * y

    def is_reduced(self):
        a, b, c = self
        return -a < b <= a <= c and not (a == c and b < 0)

    def is_primitive(self):
        return math.gcd(*self) == 1

    def __str__(self):
        return "({},{},{})".format(*self)

    def __repr__(self):
        return "QForm({},{},{})".format(*self)

    @classmethod
    def parse(cls, text: str) -> "QForm":
        parts = re.split(r"\s*,\s*", text.strip().strip("()[]").strip())
        if len(parts) != 3:
            raise ValueError(f"cannot parse form {text!r}")
        return cls(*(int(p) for p in parts))


@dataclass(frozen=True)
class Discriminant:
    value: int

    def __post_init__(self):
        if self.value >= 0 or self.value % 4 not in (0, 1):
            raise ValueError(f"{self.value} is not a negative discriminant")

    @property
    def fundamental(self):
        """True/False, or None when |D| resists the factoring budget."""
        return is_fundamental(self.value)

    def __int__(self):
        return self.value


def _squarefree(n, bound):
    """True/False, or None if undecidable after trial division to bound."""
    for p in arith.primes_up_to(min(bound, math.isqrt(n) + 1)):
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
    if n == 1 or arith.is_prime(n):
        return True
    if arith._is_square(n):
        return False
    # every prime factor of n exceeds bound, so n < bound^3 means n = p*q
    if n < bound**3:
        return True
    return None


@lru_cache(maxsize=1024)
def is_fundamental(d: int, bound: int = FUNDAMENTAL_TRIAL_BOUND):
    if d % 4 == 1:
        return _squarefree(-d, bound)
    if d % 4 == 0 and (d // 4) % 4 in (2, 3):
        return _squarefree(-d // 4, bound)
    return False


def discriminant(q: QForm) -> Discriminant:
    return Discriminant(q.disc)


def _reduce(a, b, c):
    if not -a < b <= a:
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    return a, b, c


def reduce(q) -> QForm:
    return QForm._raw(*_reduce(*q))


def normalize(q) -> QForm:
    """Translate B into (-A, A] without changing A."""
    a, b, c = q
    if -a < b <= a:
        return QForm._raw(a, b, c)
    r = (a - b) // (2 * a)
    return QForm._raw(a, b + 2 * r * a, a * r * r + b * r + c)


def is_equivalent(q1, q2) -> bool:
    if q1.disc != q2.disc:
        raise ValueError("forms have different discriminants")
    return reduce(q1) == reduce(q2)


def principal_form(d) -> QForm:
    d = int(d)
    k = d % 2
    return QForm._raw(1, k, (k - d) // 4)


def is_principal(q) -> bool:
    return _reduce(*q)[0] == 1


def is_ambiguous(q) -> bool:
    a, b, c = reduce(q)
    return b == 0 or a == b or a == c


def neighbors(q) -> list:
    """(A+-B+C, -B-+2A, A) and (A+-B+C, B+-2C, C), all equivalent to q."""
    a, b, c = q
    out = []
    for s in (1, -1):
        m = a + s * b + c
        out.append(QForm._raw(m, -b - s * 2 * a, a))
        out.append(QForm._raw(m, b + s * 2 * c, c))
    return out


def transform(q, x, y, r, s):
    """q under the substitution X -> xX + rY, Y -> yX + sY."""
    a, b, c = q
    return (
        a * x * x + b * x * y + c * y * y,
        2 * a * x * r + b * (x * s + r * y) + 2 * c * y * s,
        a * r * r + b * r * s + c * s * s,
    )


def normalize_representation(q, x: int, y: int) -> QForm:
    """The form (a, B, C) ~ q with a = q(x, y) and -a < B <= a.

    Uses a determinant +1 substitution whose first column is (x, y).
    """
    g, u, v = _xgcd(x, y)
    if g != 1:
        if g == -1:
            u, v = -u, -v
        else:
            raise ValueError(f"({x},{y}) is not a primitive representation")
    # u*x + v*y = 1, so the matrix [[x, -v], [y, u]] has determinant 1
    return normalize(transform(q, x, y, -v, u))


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    return a, x0, y0


def scan_represented(q, bound: int) -> list:
    """Primitive representations with |x|, |y| <= bound.

    Returns (value, normalized form) pairs, one per distinct normalized
    form, ordered by value.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    seen = set()
    out = []
    for x in range(0, bound + 1):
        for y in range(-bound, bound + 1):
            # (x, y) and (-x, -y) give the same form
            if x == 0 and y <= 0:
                continue
            if math.gcd(x, y) != 1:
                continue
            f = normalize_representation(q, x, y)
            if f not in seen:
                seen.add(f)
                out.append((f.a, f))
    out.sort()
    return out


def power_residue_form(a: int, b: int, m: int, strict: bool = True):
    """The form (a, 2b, a^(m-1)) of discriminant -4(a^m - b^2).

    Its m-th power is (a^m, 2b, 1), which is principal.  When 0 < 2b <= a
    every intermediate power (a^k, 2b, a^(m-k)) is reduced and
    non-principal, so the order is exactly m.  ``strict`` rejects inputs
    outside that range.
    """
    if a < 3 or a % 2 == 0 or b < 1 or m < 2:
        raise ValueError("need odd a >= 3, b >= 1, m >= 2")
    D = a**m - b * b
    if D <= 0:
        raise ConditionViolated(f"a^m - b^2 = {D} is not positive")
    if strict and 2 * b > a:
        raise ConditionViolated(f"2b = {2 * b} exceeds a = {a}")
    q = QForm(a, 2 * b, a ** (m - 1))
    return q, Discriminant(-4 * D)


def reduced_forms(d: int, primitive: bool = True) -> list:
    """Every reduced form of discriminant d, by direct enumeration."""
    out = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive and math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QForm._raw(a, b, c))
    return out


def class_number(d: int) -> int:
    return len(reduced_forms(d))
