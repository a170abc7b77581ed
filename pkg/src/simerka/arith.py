"""
Exact integer utilities.

Kronecker symbols, square roots modulo small primes, primality, smoothness
over a fixed prime list, divisor sums of prime powers, Korselt's criterion
and Fermat-number divisibility.  Everything works on Python ints.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

# p < SCAN_LIMIT: square roots by scanning residues; Tonelli-Shanks above
SCAN_LIMIT = 1 << 12
FERMAT_STEP_BUDGET = 1 << 26

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class BudgetExceeded(ArithmeticError):
    pass


class FactoredRational:
    """A nonzero rational number kept as {prime: exponent}.

    Exponents are signed; zero exponents are never stored.  Instances are
    immutable and hashable.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, entries=None):
        items = {}
        if entries:
            if isinstance(entries, dict):
                entries = entries.items()
            for p, e in entries:
                p, e = int(p), int(e)
                if p < 2:
                    raise ValueError(f"not a prime: {p}")
                if e:
                    items[p] = items.get(p, 0) + e
        self._items = tuple(sorted((p, e) for p, e in items.items() if e))
        self._hash = None

    def items(self):
        return self._items

    def as_dict(self):
        return dict(self._items)

    def __getitem__(self, p):
        for q, e in self._items:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        # the empty product is the rational 1, still a valid value
        return True

    def is_one(self):
        return not self._items

    def __mul__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return FactoredRational(self._items + other._items)

    def __truediv__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k):
        return FactoredRational((p, e * k) for p, e in self._items)

    def inverse(self):
        return FactoredRational((p, -e) for p, e in self._items)

    def value(self):
        from fractions import Fraction

        r = Fraction(1)
        for p, e in self._items:
            r *= Fraction(p) ** e
        return r

    def all_even(self):
        return all(e % 2 == 0 for _, e in self._items)

    def __eq__(self, other):
        if isinstance(other, FactoredRational):
            return self._items == other._items
        if isinstance(other, dict):
            return self._items == FactoredRational(other)._items
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __str__(self):
        if not self._items:
            return "1"
        return " * ".join(f"{p}^{e}" for p, e in self._items)

    def __repr__(self):
        return f"FactoredRational({dict(self._items)!r})"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "1":
            return cls()
        entries = []
        for part in text.split("*"):
            base, sep, exp = part.strip().partition("^")
            entries.append((int(base), int(exp) if sep else 1))
        return cls(entries)


@dataclass(frozen=True)
class SmoothFactorization:
    exponents: FactoredRational
    cofactor: int

    @property
    def smooth(self):
        return self.cofactor == 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        raise ValueError("Kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _tonelli_shanks(a, p):
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_mod(d: int, p: int, squared_modulus: int):
    """Smallest B >= 0 with B^2 = d (mod squared_modulus) and B = d (mod 2).

    ``squared_modulus`` is p or 4p.  Returns None when no such B exists.
    """
    if squared_modulus not in (p, 4 * p):
        raise ValueError("squared_modulus must be p or 4p")
    m = squared_modulus
    if p == 2 or p < SCAN_LIMIT:
        par = d % 2
        # with modulus p the parity condition can push B up to [p, 2p)
        for b in range(par, 2 * m, 2):
            if (b * b - d) % m == 0:
                return b
        return None
    r = _tonelli_shanks(d, p)
    if r is None:
        return None
    if m == p:
        cands = [r, (p - r) % p, r + p, 2 * p - r]
    else:
        # B = +-r (mod p) with the parity of d fixes B^2 = d (mod 4p)
        cands = [r, (p - r) % p, r + p, (p - r) % p + p]
    ok = [b for b in cands if b % 2 == d % 2 and (b * b - d) % m == 0]
    return min(ok) if ok else None


def _is_sprp(n, a):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _is_square(n):
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _strong_lucas(n):
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D|n) = -1
    d = 5
    while True:
        k = kronecker(d, n)
        if k == -1:
            break
        if k == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
    p, q = 1, (1 - d) // 4
    m, s = n + 1, 0
    while m % 2 == 0:
        m //= 2
        s += 1
    inv2 = (n + 1) // 2
    u, v, qk = 1, p, q % n
    for bit in bin(m)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (d * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic Miller-Rabin below 2**64 (the fixed witness set is proven
    for n < 3.3e24).  Above that a Baillie-PSW test: no counterexample is
    known, but none is proven impossible either.
    """
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n < 1369:
        return True
    if n < 1 << 64:
        return all(_is_sprp(n, a) for a in _MR_WITNESSES)
    if not _is_sprp(n, 2) or _is_square(n):
        return False
    return _strong_lucas(n)


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> tuple:
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def smooth_factor(n: int, primes) -> SmoothFactorization:
    if n < 1:
        raise ValueError("smooth_factor expects n >= 1")
    exps = []
    for p in primes:
        if n == 1:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps.append((p, e))
    return SmoothFactorization(FactoredRational(exps), n)


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def perfect_power(n: int):
    """(r, k) with r**k == n and k >= 2 maximal, or None."""
    best = None
    for k in range(2, n.bit_length() + 1):
        r = integer_root(n, k)
        if r < 2:
            break
        if r**k == n:
            best = (r, k)
    return best


def pollard_rho(n: int, seed: int = 1) -> int:
    """A nontrivial factor of the composite n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 64
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> dict:
    """Full factorization {p: e}; used for order multiples and divisor sums."""
    out = {}
    for p in primes_up_to(1000):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        pp = perfect_power(m)
        if pp:
            r, k = pp
            for q, e in factorint(r).items():
                out[q] = out.get(q, 0) + e * k
            continue
        d = pollard_rho(m)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def sigma_prime_power(p: int, k: int) -> int:
    return (p ** (k + 1) - 1) // (p - 1)


def sigma(n: int) -> int:
    out = 1
    for p, e in factorint(n).items():
        out *= sigma_prime_power(p, e)
    return out


def is_carmichael(n: int) -> bool:
    """Korselt's criterion: composite, squarefree and p-1 | n-1 for p | n."""
    if n < 3 or is_prime(n):
        return False
    fac = factorint(n)
    if any(e > 1 for e in fac.values()):
        return False
    return all((n - 1) % (p - 1) == 0 for p in fac)


def carmichael_scan(limit: int) -> list:
    """All Carmichael numbers below ``limit``."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    # smallest-prime-factor sieve keeps the per-n factorisation cheap
    spf = list(range(limit))
    for i in range(2, math.isqrt(limit - 1) + 1):
        if spf[i] == i:
            for j in range(i * i, limit, i):
                if spf[j] == j:
                    spf[j] = i
    out = []
    for n in range(3, limit, 2):
        if spf[n] == n:
            continue
        m, ok, count = n, True, 0
        while m > 1:
            p = spf[m]
            m //= p
            if m % p == 0 or (n - 1) % (p - 1):
                ok = False
                break
            count += 1
        if ok and count >= 2:
            out.append(n)
    return out


def fermat_number_divisible(k: int, n: int, budget: int = FERMAT_STEP_BUDGET) -> bool:
    """True iff k divides the Fermat number 2**(2**n) + 1."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > budget:
        raise BudgetExceeded(f"{n} squarings exceed the budget of {budget}")
    x = 2 % k
    for _ in range(n):
        x = x * x % k
    return (x + 1) % k == 0


def _gf2_nullspace(rows, ncols):
    """Nullspace of the GF(2) matrix whose columns are bitmask ``rows``.

    ``rows[i]`` is the bit vector of table entry i; returns bitmasks over
    the entries (subsets) whose vectors sum to zero.
    """
    pivots = {}  # bit -> (vector, combination mask)
    basis = []
    for i, v in enumerate(rows):
        comb = 1 << i
        for bit in sorted(pivots, reverse=True):
            if v >> bit & 1:
                pv, pc = pivots[bit]
                v ^= pv
                comb ^= pc
        if v:
            pivots[v.bit_length() - 1] = (v, comb)
        else:
            basis.append(comb)
    return basis


def sigma_cube_square_search(prime_bound: int, max_basis: int = 20) -> list:
    """Squarefree n > 1 built from primes <= prime_bound with sigma(n^3) a square.

    Tabulates sigma(p^3), reduces the exponent vectors mod 2 and walks every
    combination of the GF(2) nullspace.
    """
    if prime_bound < 2:
        raise ValueError("prime_bound must be >= 2")
    table = primes_up_to(prime_bound)
    facs = [factorint(sigma_prime_power(p, 3)) for p in table]
    aux = sorted({q for f in facs for q in f})
    col = {q: i for i, q in enumerate(aux)}
    rows = []
    for f in facs:
        v = 0
        for q, e in f.items():
            if e % 2:
                v |= 1 << col[q]
        rows.append(v)
    basis = _gf2_nullspace(rows, len(aux))[:max_basis]
    found = set()
    for r in range(1, len(basis) + 1):
        for combo in combinations(basis, r):
            mask = 0
            for c in combo:
                mask ^= c
            n = math.prod(p for i, p in enumerate(table) if mask >> i & 1)
            if n > 1 and _is_square(sigma(n**3)):
                found.add(n)
    return sorted(found)
