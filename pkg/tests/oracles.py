"""
Independent brute-force oracles.  Nothing here imports the package: every
check is a direct enumeration or a textbook formula written from scratch.
"""

import math


def legendre_scan(a, p):
    """(a|p) for an odd prime p by listing the squares mod p."""
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def kronecker_brute(a, n):
    """Kronecker symbol from its definition: factor n by trial division."""
    if n == 0:
        raise ValueError
    res = 1
    if n < 0:
        n = -n
        if a < 0:
            res = -res
    m = n
    p = 2
    while m > 1:
        while m % p == 0:
            m //= p
            if p == 2:
                if a % 2 == 0:
                    return 0
                res *= 1 if a % 8 in (1, 7) else -1
            else:
                res *= legendre_scan(a, p)
        p += 1
    return res


def trial_factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime_brute(n):
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def is_fundamental_brute(d):
    def squarefree(m):
        return all(e == 1 for e in trial_factor(m).values())

    if d % 4 == 1:
        return squarefree(-d)
    if d % 4 == 0 and (d // 4) % 4 in (2, 3):
        return squarefree(-d // 4)
    return False


def fundamental_discriminants(limit):
    return [d for d in range(-3, -limit - 1, -1) if d % 4 in (0, 1) and is_fundamental_brute(d)]


def reduce_brute(a, b, c):
    """Textbook reduction by the two generating substitutions."""
    while True:
        if b > a or b <= -a:
            # translate: (a, b, c) -> (a, b - 2a, a - b + c) one step at a time
            if b > a:
                a, b, c = a, b - 2 * a, a - b + c
            else:
                a, b, c = a, b + 2 * a, a + b + c
            continue
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
            continue
        return (a, b, c)


def reduced_forms_brute(d):
    """All primitive reduced forms (a, b, c), scanning a, b, c directly."""
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a) == 0:
                c = (b * b - d) // (4 * a)
                if c >= a and not (c == a and b < 0) and math.gcd(math.gcd(a, b), c) == 1:
                    out.append((a, b, c))
        a += 1
    return out


def class_number_brute(d):
    return len(reduced_forms_brute(d))


def compose_brute(f, g):
    """Dirichlet composition with the middle coefficient found by search.

    The second form is moved to an equivalent one whose leading coefficient
    is coprime to the first (by trying x*X + y*Y substitutions), then
    B mod 2*a1*a2 is searched for directly.
    """
    a1, b1, c1 = f
    d = b1 * b1 - 4 * a1 * c1
    a2, b2, c2 = g
    if math.gcd(a1, a2) != 1:
        done = False
        for x in range(0, 30):
            for y in range(-30, 31):
                if math.gcd(x, y) != 1:
                    continue
                v = a2 * x * x + b2 * x * y + c2 * y * y
                if math.gcd(v, a1) == 1:
                    # complete (x, y) to a determinant-one matrix
                    if x == 0:
                        r, s = -y, 0
                    else:
                        r = next(r for r in range(-abs(x), abs(x) + 1) if (1 + r * y) % x == 0)
                        s = (1 + r * y) // x
                    a2, b2, c2 = (
                        v,
                        2 * a2 * x * r + b2 * (x * s + r * y) + 2 * c2 * y * s,
                        a2 * r * r + b2 * r * s + c2 * s * s,
                    )
                    done = True
                    break
            if done:
                break
        assert done
    m = 2 * a1 * a2
    for B in range(b1 % (2 * a1), m, 2 * a1):
        if (B - b2) % (2 * a2) == 0 and (B * B - d) % (4 * a1 * a2) == 0:
            return reduce_brute(a1 * a2, B, (B * B - d) // (4 * a1 * a2))
    raise AssertionError("no middle coefficient")


def principal(d):
    k = d % 2
    return (1, k, (k - d) // 4)


def order_brute(f):
    d = f[1] ** 2 - 4 * f[0] * f[2]
    e = principal(d)
    f = reduce_brute(*f)
    g, k = f, 1
    while g != e:
        g = compose_brute(g, f)
        k += 1
    return k


def sigma_brute(n):
    return sum(k for k in range(1, n + 1) if n % k == 0)


def carmichael_brute(limit):
    """Composite n < limit with a^(n-1) = 1 mod n for every a coprime to n."""
    out = []
    for n in range(3, limit, 2):
        if is_prime_brute(n):
            continue
        if all(pow(a, n - 1, n) == 1 for a in range(2, n) if math.gcd(a, n) == 1):
            out.append(n)
    return out


def fermat_mod(k, n):
    """F_n mod k by literally building 2^(2^n) for small n."""
    return (2 ** (2**n) + 1) % k
