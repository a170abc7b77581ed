"""
Factoring odd integers through the class group of Q(sqrt(-n)).

A non-principal ambiguous class of discriminant -n (or -4n) has a reduced
form with B = 0, A = B or A = C, and each shape exhibits a factorization
of n.  Such a class is found as Q^(ord/2) for a form Q of even order, or
from a power Q^(2a) whose smooth value is a perfect square.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field

from . import arith
from .composition import compose, power, power_product
from .forms import Discriminant, QForm, is_ambiguous, is_principal, reduce
from .lattice import RankDeficient
from .relations import RANDOM_PRODUCTS, RelationTimeout, class_group, element_order
from .simerka_map import Effort, FactorBase, default_base_bound, smooth_search

log = logging.getLogger(__name__)

TRIAL_BOUND = 1000
# returned by ambiguous_split when the form only gives 1 * n
TRIVIAL_SPLIT = None


class Certainty(str, enum.Enum):
    PRIME = "prime"
    COMPOSITE = "composite"
    UNKNOWN = "unknown"


class FactorBudgetExceeded(RuntimeError):
    def __init__(self, msg, result):
        super().__init__(msg)
        self.result = result


@dataclass
class FactorConfig:
    trial_bound: int = TRIAL_BOUND
    fb_bound: int | None = None
    seed: int = 0
    strategy: str = RANDOM_PRODUCTS
    scan_bound: int = 10
    power_cap: int = 40
    max_generators: int = 6
    multipliers: tuple = (1, 3, 5, 7, 11, 13)
    max_trials: int = 10**6
    workers: int = 1
    time_limit: float | None = None


@dataclass
class FactorResult:
    n: int
    factors: list = field(default_factory=list)  # [(divisor, exponent, Certainty)]
    trace: list = field(default_factory=list)
    complete: bool = True

    def as_dict(self):
        return {d: e for d, e, _ in self.factors}

    def product(self):
        return math.prod(d**e for d, e, _ in self.factors)

    def to_record(self):
        return {
            "n": str(self.n),
            "factors": [str(d) for d, e, _ in self.factors for _ in range(e)],
            "certainty": {str(d): c.value for d, _, c in self.factors},
            "complete": self.complete,
            "trace": self.trace,
        }


def choose_discriminant(n: int, multiplier: int = 1) -> Discriminant:
    """-kn when kn = 3 mod 4, else -4kn."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    m = multiplier * n
    return Discriminant(-m if m % 4 == 3 else -4 * m)


def ambiguous_split(q, n: int):
    """Nontrivial (d1, d2) with d1 * d2 == n read off an ambiguous form, or TRIVIAL_SPLIT."""
    if not is_ambiguous(q):
        raise ValueError(f"{q} is not ambiguous")
    a, b, c = reduce(q)
    # divisors of |disc| (or |disc|/4) exposed by each ambiguous shape
    if b == 0:
        cands = (a, c)
    elif a == b:
        cands = (a, 4 * c - a)
    else:
        cands = (2 * a - b, 2 * a + b)
    for x in cands:
        g = math.gcd(x, n)
        if 1 < g < n:
            return (min(g, n // g), max(g, n // g))
    return TRIVIAL_SPLIT


def square_shortcut(base: FactorBase, hits, q) -> QForm | None:
    """Ambiguous non-principal form from a square value on an even power of q.

    ``hits`` are (k, value) pairs with value a smooth value found on q^k.
    If k = 2a and every exponent of the value is even, say value = m^2, then
    q^a * prod I_p^(-w_p) with m = prod p^w_p squares to the identity.
    """
    for k, value in hits:
        if k % 2 or not value.all_even():
            continue
        w = [-e // 2 for e in base.vector(value)]
        r = compose(power(q, k // 2), power_product(base.forms, w, base.disc))
        if not is_principal(r):
            return r
    return None


def factor_base_bound(n: int) -> int:
    """About L(n)^(1/2): enough primes to reach an order multiple of one form."""
    ln = math.log(n)
    b = round(math.exp(0.5 * math.sqrt(ln * math.log(ln))))
    return max(30, min(b, default_base_bound(n)))


class _Run:
    def __init__(self, n, cfg):
        self.cfg = cfg
        self.result = FactorResult(n)
        self.deadline = time.monotonic() + cfg.time_limit if cfg.time_limit is not None else None

    def note(self, step, **kw):
        rec = {"step": step}
        rec.update({k: (str(v) if isinstance(v, (int, QForm)) and not isinstance(v, bool) else v) for k, v in kw.items()})
        self.result.trace.append(rec)
        log.debug("%s", rec)

    def check_clock(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise arith.BudgetExceeded("wall-clock limit reached")

    def split(self, m):
        """A nontrivial divisor of the odd composite m (not a perfect power), or None."""
        cfg = self.cfg
        for k in cfg.multipliers:
            if k > 1 and m % k == 0:
                return k
            d = choose_discriminant(m, k).value
            self.note("discriminant", n=m, multiplier=k, disc=d)
            bound = cfg.fb_bound or factor_base_bound(m)
            try:
                gs, base, _ = class_group(
                    d,
                    bound,
                    cfg.strategy,
                    cfg.seed,
                    power_cap=cfg.power_cap,
                    max_trials=cfg.max_trials,
                    workers=cfg.workers,
                )
            except (RankDeficient, RelationTimeout) as e:
                self.note("no-order", disc=d, reason=str(e))
                continue
            self.check_clock()
            h = gs.order_candidate
            self.note("order-multiple", disc=d, primes=len(base), h=h, certificate=gs.certified.value)
            for pf in base.primes:
                if pf.ramified and 1 < math.gcd(pf.p, m) < m:
                    self.note("ramified-prime", p=pf.p)
                    return math.gcd(pf.p, m)
            gens = [pf for pf in base.primes if not pf.ramified][: cfg.max_generators]
            for pf in gens:
                self.check_clock()
                q = pf.form
                o = element_order(q, h)
                self.note("order", form=q, order=o)
                if o % 2:
                    continue
                amb = power(q, o // 2)
                pair = ambiguous_split(amb, m)
                self.note("ambiguous", form=amb, disc=amb.disc, split=[str(x) for x in pair] if pair else None)
                if pair:
                    return pair[0]
            for pf in gens:
                found = self.shortcut(base, pf.form, m)
                if found:
                    return found
        return None

    def shortcut(self, base, q, m):
        effort = Effort(scan_bound=self.cfg.scan_bound)
        cur = reduce(q)
        for k in range(1, self.cfg.power_cap + 1):
            if k > 1:
                cur = compose(cur, q)
            if k % 2:
                continue
            self.check_clock()
            hits = [(k, v) for v, _ in smooth_search(cur, base, effort)]
            amb = square_shortcut(base, hits, q)
            if amb is None:
                continue
            value = next(v for _, v in hits if v.all_even())
            pair = ambiguous_split(amb, m)
            self.note("square", form=q, power=k, value=str(value), ambiguous=amb, split=[str(x) for x in pair] if pair else None)
            if pair:
                return pair[0]
        return None


def factor(n: int, config: FactorConfig | None = None) -> FactorResult:
    """Prime factorization of n.

    Raises FactorBudgetExceeded, carrying the partial result, if a composite
    part could not be split within the configured budgets.
    """
    n = int(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    cfg = config or FactorConfig()
    run = _Run(n, cfg)
    found = Counter()
    stuck = Counter()
    m = n
    small = []
    for p in arith.primes_up_to(cfg.trial_bound):
        while m % p == 0:
            m //= p
            found[p] += 1
        if p in found:
            small.append(p)
    if small:
        run.note("trial-division", bound=cfg.trial_bound, primes=[str(p) for p in small])
    stack = [(m, 1)] if m > 1 else []
    while stack:
        x, mult = stack.pop()
        if arith.is_prime(x):
            found[x] += mult
            continue
        pp = arith.perfect_power(x)
        if pp:
            run.note("perfect-power", n=x, root=pp[0], k=pp[1])
            stack.append((pp[0], mult * pp[1]))
            continue
        try:
            d = run.split(x)
        except arith.BudgetExceeded:
            run.note("budget-exceeded", n=x)
            for y, e in stack + [(x, mult)]:
                stuck[y] += e
            break
        if d is None:
            stuck[x] += mult
            continue
        run.note("split", n=x, factors=[str(d), str(x // d)])
        stack += [(d, mult), (x // d, mult)]
    res = run.result
    res.factors = sorted((p, e, Certainty.PRIME) for p, e in found.items())
    res.factors += sorted((c, e, Certainty.COMPOSITE) for c, e in stuck.items())
    res.factors.sort(key=lambda t: t[0])
    if res.product() != n:
        raise AssertionError("factor product does not reconstruct n")
    if stuck:
        res.complete = False
        raise FactorBudgetExceeded(f"unfactored composite parts: {sorted(stuck)}", res)
    return res
