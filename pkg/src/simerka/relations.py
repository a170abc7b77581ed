"""
Relation collection, class-group structure and element orders.

A relation is an exponent vector e over the factor base with
prod I_p^e_p principal.  Each smooth value v found on a form Q whose
class is known as prod I_p^x_p gives the relation x - v.  The lattice of
all relations presents the subgroup generated by the base; its
determinant is that subgroup's order and its Smith invariants are the
elementary divisors.
"""

from __future__ import annotations

import enum
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import arith
from .composition import _compose, _square, compose, power, power_product
from .forms import QForm, class_number, is_principal, principal_form
from .lattice import RankDeficient, RelationLattice
from .simerka_map import CHEAP, Effort, FactorBase, build_factor_base, smooth_search

log = logging.getLogger(__name__)

SMALL_POWERS = "small-powers"
RANDOM_PRODUCTS = "random-products"
STRATEGIES = (SMALL_POWERS, RANDOM_PRODUCTS)

POWER_CAP = 40
EXPONENT_RANGE = 1 << 16
ENUMERATION_LIMIT = 3 * 10**6
TRIAL_BUDGET = 10**6


class Certificate(str, enum.Enum):
    ENUMERATED = "enumerated"
    STABILIZED = "stabilized"
    DIVISOR_ONLY = "divisor-only"


class RelationTimeout(RuntimeError):
    def __init__(self, msg, relations):
        super().__init__(msg)
        self.relations = relations


class OrderPrecondition(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    exponents: tuple
    witness: str = ""
    batch: int = 0

    def to_record(self, base: FactorBase) -> dict:
        return {
            "disc": str(base.disc),
            "primes": base.labels,
            "exponents": list(self.exponents),
            "witness": self.witness,
            "batch": self.batch,
        }

    @classmethod
    def from_record(cls, rec: dict, base: FactorBase) -> "Relation":
        if "disc" in rec and int(rec["disc"]) != base.disc:
            raise ValueError("relation belongs to a different discriminant")
        vec = [0] * len(base)
        for p, e in zip(rec["primes"], rec["exponents"]):
            if e and p not in base.index:
                raise ValueError(f"prime {p} is not in the factor base")
            if e:
                vec[base.index[p]] = int(e)
        return cls(tuple(vec), rec.get("witness", ""), int(rec.get("batch", 0)))


@dataclass(frozen=True)
class GroupStructure:
    order_candidate: int
    elementary_divisors: tuple
    certified: Certificate
    lattice: RelationLattice = field(repr=False, compare=False, default=None)

    def contains(self, vec) -> bool:
        return self.lattice.contains(vec)


def _squares(base, i, k):
    # I_i^(2^j) for j < k, cached on the factor base
    table = base.__dict__.get("_squares")
    if table is None:
        table = base.__dict__["_squares"] = [[tuple(pf.form)] for pf in base.primes]
    row = table[i]
    while len(row) < k:
        row.append(_square(*row[-1]))
    return row


def verify_relation(rel, base: FactorBase) -> bool:
    exps = rel.exponents if isinstance(rel, Relation) else rel
    if len(exps) != len(base):
        raise ValueError("exponent vector does not match the factor base")
    acc = tuple(principal_form(base.disc))
    for i, e in enumerate(exps):
        if not e:
            continue
        m = abs(e)
        row = _squares(base, i, m.bit_length())
        for j in range(m.bit_length()):
            if m >> j & 1:
                a, b, c = row[j]
                acc = _compose(*acc, a, -b if e < 0 else b, c)
    return is_principal(acc)


def _ramified_relations(base):
    out = []
    for i, pf in enumerate(base.primes):
        if pf.ramified:
            v = [0] * len(base)
            v[i] = 2
            out.append(Relation(tuple(v), f"I_{pf.p}^2 ~ 1 (ramified)", -1))
    return out


def _hits_to_relations(x, hits, base, tag, batch):
    out = []
    for val, prov in hits:
        v = base.vector(val)
        e = tuple(a - b for a, b in zip(x, v))
        if any(e):
            out.append(Relation(e, f"{tag}: {prov} -> {val}", batch))
    return out


def _small_powers(base, seed, target, power_cap, effort, max_trials):
    r = len(base)
    order = list(range(r))
    if seed:
        random.Random(seed).shuffle(order)
    current = [principal_form(base.disc)] * r
    found, seen, trials = [], set(), 0
    for n in range(1, power_cap + 1):
        for i in order:
            current[i] = compose(current[i], base.primes[i].form)
            trials += 1
            x = [0] * r
            x[i] = n
            tag = f"I_{base.primes[i].p}^{n}"
            for rel in _hits_to_relations(x, smooth_search(current[i], base, effort), base, tag, seed):
                if rel.exponents not in seen:
                    seen.add(rel.exponents)
                    found.append(rel)
            if trials >= max_trials:
                raise RelationTimeout(f"trial budget {max_trials} exhausted", found)
        if len(found) >= target:
            return found
    if len(found) < target:
        raise RelationTimeout(f"power cap {power_cap} reached with {len(found)} relations", found)
    return found


def _random_products(base, seed, target, exponent_range, effort, max_trials, extra=3):
    r = len(base)
    rng = random.Random(seed)
    small = min(r, 12)
    found, seen = [], set()
    # hits from one trial are strongly correlated, so the target counts
    # productive trials rather than relations
    productive = 0
    for trial in range(max_trials):
        x = [0] * r
        i = trial % r
        x[i] = rng.randint(1, exponent_range)
        for j in rng.sample(range(small), min(extra, small)):
            if j != i:
                x[j] = rng.randint(-exponent_range, exponent_range)
        q = power_product(base.forms, x, base.disc)
        tag = "prod " + " ".join(f"I_{base.primes[k].p}^{e}" for k, e in enumerate(x) if e)
        fresh = 0
        for rel in _hits_to_relations(x, smooth_search(q, base, effort), base, tag, seed):
            if rel.exponents not in seen:
                seen.add(rel.exponents)
                found.append(rel)
                fresh += 1
        productive += fresh > 0
        if productive >= target and trial + 1 >= r:
            return found
    raise RelationTimeout(f"trial budget {max_trials} exhausted", found)


def _collect_one(base, strategy, seed, target, power_cap, exponent_range, effort, max_trials):
    if strategy == SMALL_POWERS:
        return _small_powers(base, seed, target, power_cap, effort or Effort(), max_trials)
    if strategy == RANDOM_PRODUCTS:
        return _random_products(base, seed, target, exponent_range, effort or CHEAP, max_trials)
    raise ValueError(f"unknown strategy {strategy!r}")


def collect_relations(
    base: FactorBase,
    strategy: str = RANDOM_PRODUCTS,
    seed: int = 0,
    target: int | None = None,
    *,
    power_cap: int = POWER_CAP,
    exponent_range: int = EXPONENT_RANGE,
    effort: Effort | None = None,
    max_trials: int = TRIAL_BUDGET,
    workers: int = 1,
    verify: bool = True,
) -> list:
    """Relations over ``base``; deterministic for a fixed seed with one worker."""
    if not len(base):
        raise ValueError("factor base is empty")
    if target is None:
        target = 2 * len(base) + 10
    args = (strategy, seed, target, power_cap, exponent_range, effort, max_trials)
    if workers <= 1:
        rels = _collect_one(base, *args)
    else:
        share = -(-target // workers)
        with ProcessPoolExecutor(workers) as pool:
            futs = [
                pool.submit(
                    _collect_one, base, strategy, seed * 1000 + k, share,
                    power_cap, exponent_range, effort, max_trials,
                )
                for k in range(workers)
            ]
            merged = {}
            for fut in futs:
                for rel in fut.result():
                    merged.setdefault(rel.exponents, rel)
        rels = [Relation(r.exponents, r.witness, seed) for r in merged.values()]
        rels.sort(key=lambda r: r.exponents)
    if verify:
        good = [rel for rel in rels if verify_relation(rel, base)]
        if len(good) < len(rels):
            log.warning("dropped %d relations failing verification", len(rels) - len(good))
        rels = good
    return rels


def _lattice(base, rels):
    return RelationLattice(len(base), [r.exponents for r in _ramified_relations(base) + list(rels)])


def group_structure(base: FactorBase, rels) -> GroupStructure:
    """Order and elementary divisors of the group presented by ``rels``.

    The result is ENUMERATED when brute-force reduced-form counting agrees,
    STABILIZED when the last independent batch of relations left the
    determinant unchanged, and DIVISOR_ONLY otherwise.
    """
    rels = list(rels)
    if not len(base):
        return GroupStructure(1, (), Certificate.ENUMERATED, RelationLattice(0, []))
    batches = sorted({rel.batch for rel in rels})
    earlier = None
    if len(batches) >= 2:
        earlier = _lattice(base, [r for r in rels if r.batch != batches[-1]])
    return _structure(base, _lattice(base, rels), earlier)


def _structure(base, lat, earlier):
    if not lat.full_rank:
        raise RankDeficient(f"relation lattice has rank {lat.rank} < {len(base)}")
    order = lat.det
    divisors = tuple(lat.invariants())
    cert = Certificate.DIVISOR_ONLY
    if earlier is not None and earlier.full_rank and earlier.det == order:
        cert = Certificate.STABILIZED
    if abs(base.disc) <= ENUMERATION_LIMIT:
        cert = Certificate.ENUMERATED if class_number(base.disc) == order else Certificate.DIVISOR_ONLY
    return GroupStructure(order, divisors, cert, lat)


def class_group(
    d: int,
    bound: int | None = None,
    strategy: str = RANDOM_PRODUCTS,
    seed: int = 0,
    *,
    max_batches: int = 8,
    initial=(),
    **kwargs,
):
    """Collect batches until the determinant is stable; returns (structure, base, relations).

    The first batch uses ``strategy``; later batches are random products
    with fresh seeds.  Stops once a batch leaves the determinant unchanged.
    ``initial`` relations (e.g. reloaded from a log) are used as a head start.
    """
    base = build_factor_base(d, bound)
    if not len(base):
        return group_structure(base, []), base, []
    rels = list(initial)
    lat = prev = None
    if rels:
        lat = _lattice(base, rels)
        # fresh seeds, so resumed batches are independent of the logged ones
        seed = max(seed, max(r.batch for r in rels) + 1)
    for k in range(max_batches):
        strat = strategy if k == 0 and not rels else RANDOM_PRODUCTS
        rels += collect_relations(base, strat, seed + k, **kwargs)
        prev, lat = lat, _lattice(base, rels)
        if lat.full_rank and prev is not None and prev.full_rank and prev.det == lat.det:
            break
    return _structure(base, lat, prev), base, rels


def element_order(q, multiple: int) -> int:
    """Exact order of the class of q, given a multiple of it."""
    if multiple < 1:
        raise ValueError("multiple must be positive")
    if not is_principal(power(q, multiple)):
        raise OrderPrecondition(f"{q}^{multiple} is not principal")
    m = multiple
    for p in arith.factorint(multiple):
        while m % p == 0 and is_principal(power(q, m // p)):
            m //= p
    return m


def write_relations(path, base, rels, mode="a"):
    with open(path, mode) as f:
        for rel in rels:
            f.write(json.dumps(rel.to_record(base)) + "\n")


def read_relations(path, base):
    out = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(Relation.from_record(json.loads(line), base))
    return out


def express(q, base: FactorBase, effort: Effort = Effort()):
    """Exponent vector x with q ~ prod I_p^x_p, or None if no smooth value is found."""
    hits = smooth_search(q, base, effort)
    return base.vector(hits[0][0]) if hits else None

