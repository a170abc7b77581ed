"""
Integer lattices of relation vectors: Hermite and Smith normal forms.

Rows are added one at a time to an upper triangular basis.  Once every
column has a pivot the determinant D is known and D*Z^n lies in the
lattice, so all later arithmetic is done modulo D and entries stay small.
"""

from __future__ import annotations

import math

from .forms import _xgcd


class RankDeficient(ArithmeticError):
    pass


class HermiteLattice:
    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows = [None] * ncols
        self.det = None

    @property
    def rank(self):
        return sum(r is not None for r in self.rows)

    @property
    def full_rank(self):
        return self.det is not None

    def add(self, vec) -> bool:
        """Insert a vector; returns True if the lattice grew."""
        n = self.ncols
        if len(vec) != n:
            raise ValueError("vector length does not match the lattice")
        D = self.det
        v = [x % D for x in vec] if D else list(vec)
        grew = False
        for j in range(n):
            x = v[j]
            if x == 0:
                continue
            row = self.rows[j]
            if row is None:
                if x < 0:
                    v = [-t for t in v]
                self.rows[j] = v
                grew = True
                break
            p = row[j]
            if x % p == 0:
                f = x // p
                v[j:] = [a - f * b for a, b in zip(v[j:], row[j:])]
            else:
                g, s, t = _xgcd(p, x)
                if g < 0:
                    g, s, t = -g, -s, -t
                pg, xg = p // g, x // g
                tail_r, tail_v = row[j:], v[j:]
                new = [s * a + t * b for a, b in zip(tail_r, tail_v)]
                v[j:] = [pg * b - xg * a for a, b in zip(tail_r, tail_v)]
                if D:
                    new = [new[0]] + [e % D for e in new[1:]]
                    v[j:] = [e % D for e in v[j:]]
                self.rows[j] = [0] * j + new
                grew = True
        if grew and all(r is not None for r in self.rows):
            self._refresh()
        return grew

    def _refresh(self):
        D = math.prod(self.rows[j][j] for j in range(self.ncols))
        self.det = D
        for j, row in enumerate(self.rows):
            self.rows[j] = row[: j + 1] + [e % D for e in row[j + 1 :]]

    def normalized(self):
        """Rows in Hermite normal form (entries above a pivot reduced mod it)."""
        rows = [list(r) if r is not None else None for r in self.rows]
        n = self.ncols
        for k in range(n - 1, -1, -1):
            pr = rows[k]
            if pr is None:
                continue
            p = pr[k]
            for i in range(k):
                ri = rows[i]
                if ri is None:
                    continue
                f = ri[k] // p
                if f:
                    rows[i] = ri[:k] + [a - f * b for a, b in zip(ri[k:], pr[k:])]
        return [r for r in rows if r is not None]

    def contains(self, vec) -> bool:
        v = list(vec)
        for j in range(self.ncols):
            if v[j] == 0:
                continue
            row = self.rows[j]
            if row is None or v[j] % row[j]:
                return False
            f = v[j] // row[j]
            v[j:] = [a - f * b for a, b in zip(v[j:], row[j:])]
        return True

    def diagonal(self):
        return [r[j] if r is not None else 0 for j, r in enumerate(self.rows)]


def hermite_normal_form(rows, ncols=None):
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    lat = HermiteLattice(ncols)
    for r in rows:
        lat.add(r)
    return lat


def _snf_diagonal(m):
    """Smith invariants of a small square integer matrix (exact)."""
    m = [list(r) for r in m]
    k = len(m)
    out = []
    for t in range(k):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, k):
                for j in range(t, k):
                    if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                out.extend([0] * (k - t))
                return out
            i, j = best
            m[t], m[i] = m[i], m[t]
            for row in m:
                row[t], row[j] = row[j], row[t]
            p = m[t][t]
            clean = True
            for i in range(t + 1, k):
                f = m[i][t] // p
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[t])]
                if m[i][t]:
                    clean = False
            for j in range(t + 1, k):
                f = m[t][j] // p
                if f:
                    for row in m:
                        row[j] -= f * row[t]
                if m[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, k) for j in range(t + 1, k) if m[i][j] % p),
                None,
            )
            if bad is None:
                out.append(abs(p))
                break
            # fold the offending row into the pivot row and retry
            m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
    return out


def smith_invariants(lat: HermiteLattice) -> list:
    """Elementary divisors d1 | d2 | ... (all > 1) of Z^n / lattice."""
    if not lat.full_rank:
        raise RankDeficient(f"lattice has rank {lat.rank} < {lat.ncols}")
    D = lat.det
    n = lat.ncols
    m = [list(r) for r in lat.rows]
    keep = list(range(n))
    # a unit pivot lets its column absorb the rest of its row; drop it
    for j in range(n - 1, -1, -1):
        if m[j][j] != 1:
            continue
        row = m[j]
        for k in range(j + 1, n):
            f = row[k]
            if f:
                for i in range(j):
                    if m[i][j]:
                        m[i][k] = (m[i][k] - f * m[i][j]) % D
                row[k] = 0
        keep.remove(j)
    small = [[m[i][j] for j in keep] for i in keep]
    divs = _snf_diagonal(small)
    divs = sorted(d for d in divs if d != 1)
    if math.prod(divs) != D:
        raise ArithmeticError("Smith form does not match the determinant")
    return divs


class RelationLattice:
    """Z^n / L for a relation lattice L, after structured elimination.

    A relation with a +-1 entry in column j expresses generator j through
    the others, so that relation and column can be removed without changing
    the quotient group.  Pivots are taken in Markowitz order; what remains
    goes to a HermiteLattice.
    """

    def __init__(self, ncols: int, rows):
        self.ncols = ncols
        self.eliminated = []  # (column, pivot row as {col: val} with +1 at column)
        live = []
        for r in rows:
            d = {j: int(x) for j, x in enumerate(r) if x}
            if d:
                live.append(d)
        self._eliminate(live)
        self.columns = [j for j in range(ncols) if j not in self._gone]
        pos = {j: k for k, j in enumerate(self.columns)}
        dense = []
        for d in live:
            if d:
                v = [0] * len(self.columns)
                for j, x in d.items():
                    v[pos[j]] = x
                dense.append(v)
        dense.sort(key=lambda v: sum(1 for x in v if x))
        self.hermite = HermiteLattice(len(self.columns))
        for v in dense:
            self.hermite.add(v)

    def _eliminate(self, live):
        cols = {}
        for i, d in enumerate(live):
            for j in d:
                cols.setdefault(j, set()).add(i)
        gone = set()
        while True:
            best = None
            for j, rows_j in cols.items():
                if not rows_j:
                    continue
                cj = len(rows_j) - 1
                for i in rows_j:
                    if abs(live[i][j]) == 1:
                        cost = cj * (len(live[i]) - 1)
                        if best is None or cost < best[0]:
                            best = (cost, i, j)
            if best is None:
                break
            _, i, j = best
            piv = live[i]
            if piv[j] == -1:
                piv = {k: -x for k, x in piv.items()}
            for k in piv:
                cols[k].discard(i)
            live[i] = {}
            for t in list(cols[j]):
                w = live[t]
                f = w[j]
                for k, x in piv.items():
                    y = w.get(k, 0) - f * x
                    if y:
                        if k not in w:
                            cols[k].add(t)
                        w[k] = y
                    elif k in w:
                        del w[k]
                        cols[k].discard(t)
            del cols[j]
            gone.add(j)
            self.eliminated.append((j, piv))
        self._gone = gone

    def _project(self, vec):
        w = {j: int(x) for j, x in enumerate(vec) if x}
        for j, piv in self.eliminated:
            f = w.get(j, 0)
            if f:
                for k, x in piv.items():
                    y = w.get(k, 0) - f * x
                    if y:
                        w[k] = y
                    else:
                        w.pop(k, None)
        return [w.get(j, 0) for j in self.columns]

    @property
    def full_rank(self):
        return self.hermite.full_rank or not self.columns

    @property
    def rank(self):
        return len(self.eliminated) + self.hermite.rank

    @property
    def det(self):
        if not self.columns:
            return 1
        return self.hermite.det

    def contains(self, vec) -> bool:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match the lattice")
        return self.hermite.contains(self._project(vec))

    def invariants(self) -> list:
        if not self.columns:
            return []
        return smith_invariants(self.hermite)
