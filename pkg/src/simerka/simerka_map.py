"""
Prime forms, factor bases and the map from forms to factored rationals.

A form (a, B, C) whose leading coefficient factors over the base as
a = prod p^e is sent to prod p^(+-e), the sign of each prime read off the
residue of B mod 2p: positive when that residue, taken in (-p, p], is >= 0.
The sign agrees with the prime form I_p = (p, b_p, .) whose root b_p lies in
[0, p], so the image v always satisfies (a, B, C) ~ prod I_p^v_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import arith
from .arith import FactoredRational
from .forms import Discriminant, QForm, neighbors, normalize, reduce, scan_represented


class InertPrime(ValueError):
    pass


class NotSmooth(ArithmeticError):
    def __init__(self, cofactor):
        super().__init__(f"not smooth, cofactor {cofactor}")
        self.cofactor = cofactor


@dataclass(frozen=True)
class PrimeForm:
    p: int
    root: int
    form: QForm
    ramified: bool


@dataclass(frozen=True)
class FactorBase:
    disc: int
    primes: tuple
    bound: int
    index: dict = field(init=False, repr=False, compare=False)
    product: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {pf.p: i for i, pf in enumerate(self.primes)})
        object.__setattr__(self, "product", math.prod(pf.p for pf in self.primes))

    def __len__(self):
        return len(self.primes)

    @property
    def labels(self):
        return [pf.p for pf in self.primes]

    @property
    def forms(self):
        return [pf.form for pf in self.primes]

    def vector(self, value: FactoredRational) -> list:
        """Exponent vector of a factored rational over this base."""
        v = [0] * len(self.primes)
        for p, e in value.items():
            v[self.index[p]] = e
        return v

    def rational(self, vec) -> FactoredRational:
        return FactoredRational((pf.p, e) for pf, e in zip(self.primes, vec) if e)


def prime_form(d: int, p: int) -> PrimeForm:
    """I_p = (p, b_p, (b_p^2 - d)/4p) with b_p the least root of B^2 = d mod 4p."""
    d = int(d)
    if arith.kronecker(d, p) == -1:
        raise InertPrime(f"{p} is inert for discriminant {d}")
    b = arith.sqrt_mod(d, p, 4 * p)
    f = QForm(p, b, (b * b - d) // (4 * p))
    if not f.is_primitive():
        raise ValueError(f"prime form over {p} is not primitive for discriminant {d}")
    return PrimeForm(p, b, f, d % p == 0)


def default_base_bound(d: int) -> int:
    """min(sqrt(|d|/3), max(50, 6 log^2 |d|)), at least 2."""
    d = abs(int(d))
    bach = max(50, math.ceil(6 * math.log(d) ** 2)) if d > 1 else 50
    return max(2, min(math.isqrt(d // 3), bach))


def build_factor_base(d: int, bound: int | None = None) -> FactorBase:
    d = Discriminant(int(d)).value
    if bound is None:
        bound = default_base_bound(d)
    if bound < 2:
        raise ValueError("factor base bound must be >= 2")
    primes = []
    for p in arith.primes_up_to(bound):
        if arith.kronecker(d, p) == -1:
            continue
        if d % (p * p) == 0 and (p != 2 or (d // 4) % 4 in (0, 1)):
            # p divides the conductor: its prime form is not primitive
            continue
        primes.append(prime_form(d, p))
    return FactorBase(d, tuple(primes), bound)


def _signed_factor(a, b, base):
    """Image of (a, b, .) as a tuple of (prime, exponent), or None."""
    rest = a
    g = math.gcd(rest, base.product)
    while g > 1:
        rest //= g
        g = math.gcd(rest, g)
    if rest != 1:
        return None
    out = []
    for pf in base.primes:
        if a == 1:
            break
        p = pf.p
        if a % p:
            continue
        e = 0
        while a % p == 0:
            a //= p
            e += 1
        if pf.ramified:
            e %= 2
        elif (b % (2 * p)) > p:
            e = -e
        if e:
            out.append((p, e))
    return out


def simerka_value(q, base: FactorBase) -> FactoredRational:
    """The factored rational attached to q through its leading coefficient.

    Raises NotSmooth (carrying the unfactored cofactor) if A has a prime
    factor outside the base.
    """
    a, b, _ = normalize(q)
    items = _signed_factor(a, b, base)
    if items is None:
        raise NotSmooth(arith.smooth_factor(a, base.labels).cofactor)
    return FactoredRational(items)


@dataclass(frozen=True)
class Effort:
    scan_bound: int = 10
    neighbors: bool = True


CHEAP = Effort(scan_bound=0)


def smooth_search(q, base: FactorBase, effort: Effort = Effort()) -> list:
    """Every smooth value found on forms equivalent to q.

    Looks at reduce(q), the four neighbours (A+-B+C, ...), Q(0, 1) and the
    primitive representations with |x|, |y| <= effort.scan_bound.  Returns
    (FactoredRational, provenance) pairs, one per distinct value.
    """
    r = reduce(q)
    cands = [(r, "reduced")]
    a, b, c = r
    cands.append((QForm._raw(c, -b, a), "Q(0,1)"))
    if effort.neighbors:
        for f, tag in zip(neighbors(r), ("Q(1,1)", "Q(1,1)'", "Q(1,-1)", "Q(1,-1)'")):
            cands.append((f, tag))
    if effort.scan_bound:
        for _, f in scan_represented(r, effort.scan_bound):
            cands.append((f, "scan"))
    out = []
    seen = set()
    for f, tag in cands:
        fa, fb, _ = normalize(f)
        items = _signed_factor(fa, fb, base)
        if items is None:
            continue
        val = FactoredRational(items)
        if val not in seen:
            seen.add(val)
            out.append((val, f"{tag}={QForm._raw(*normalize(f))}"))
    return out

