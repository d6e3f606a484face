"""Prime-by-prime linear algebra for finite abelian groups.

A finite group A = ⊕ Z/o_i splits as the sum of its p-primary parts, and
each part is a module over the local ring R = Z/p^e. Over R the entry of
least p-valuation divides its whole column, so elimination needs no
Euclidean steps and entries never exceed p^e. Submodules of R^n are kept
in Howell form (echelon rows plus the annihilator rows that zero
divisors force), which makes membership and kernels exact.

Results are reassembled across primes by the Chinese remainder theorem,
so callers only see vectors on the generators of A.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np

from .matrix import IntMatrix

if TYPE_CHECKING:
    from .abelian import AbHom

Vector = list[int]


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(x: int, p: int) -> int:
    v = 0
    while x and x % p == 0:
        x //= p
        v += 1
    return v


def _dtype(q: int):
    # products of two residues must fit
    return np.int64 if q < 1 << 20 else object


def _valuations(col: np.ndarray, p: int) -> np.ndarray:
    v = np.zeros(len(col), dtype=np.int64)
    x = col.copy()
    mask = x % p == 0
    while mask.any():
        v[mask] += 1
        x[mask] //= p
        mask = (x % p == 0) & mask
    return v


class Howell:
    """Howell form of a submodule of R^n, R = Z/p^e.

    ``rows[k]`` has its leading entry p^vals[k] in column ``cols[k]``;
    every element whose first c entries vanish is a combination of the
    rows with pivot column >= c.
    """

    def __init__(self, gens: np.ndarray, p: int, e: int, n: int):
        self.p, self.e, self.n = p, e, n
        q = self.q = p ** e
        dt = _dtype(q)
        active = np.array(gens, dtype=dt).reshape(-1, n) % q
        active = active[np.any(active != 0, axis=1)]
        rows, cols, vals = [], [], []
        for i in range(n):
            if not len(active):
                break
            col = active[:, i]
            nz = np.nonzero(col)[0]
            if not len(nz):
                continue
            vs = _valuations(col[nz], p)
            k = int(nz[int(np.argmin(vs))])
            v = int(vs.min())
            pv = p ** v
            unit = int(col[k]) // pv
            piv = (active[k] * pow(unit, -1, q)) % q
            others = np.delete(active, k, axis=0)
            if len(others):
                f = others[:, i] // pv
                others = (others - np.outer(f, piv)) % q
            ann = (piv * (p ** (e - v))) % q
            active = np.vstack([others, ann[None, :]]) if len(others) else ann[None, :]
            active = active[np.any(active != 0, axis=1)]
            rows.append(piv)
            cols.append(i)
            vals.append(v)
        self.rows = np.array(rows, dtype=dt).reshape(len(rows), n)
        self.cols, self.vals = cols, vals

    def __len__(self) -> int:
        return len(self.cols)

    def coords(self, x: Sequence[int]) -> list[int] | None:
        """Coefficients c with x = sum c_k rows[k] (mod p^e), or None."""
        q, p = self.q, self.p
        x = np.array(x, dtype=self.rows.dtype) % q
        out = []
        for k, (i, v) in enumerate(zip(self.cols, self.vals)):
            xi = int(x[i])
            pv = p ** v
            if xi % pv:
                return None
            c = xi // pv
            out.append(c)
            if c:
                x = (x - c * self.rows[k]) % q
        return out if not x.any() else None

    def relations(self) -> list[list[int]]:
        """Generators of the module of relations among the rows."""
        rels = []
        for k, v in enumerate(self.vals):
            ann = (self.rows[k] * (self.p ** (self.e - v))) % self.q
            c = self.coords(ann)
            rel = [(-x) % self.q for x in c]
            rel[k] = (rel[k] + self.p ** (self.e - v)) % self.q
            if any(rel):
                rels.append(rel)
        return rels


def local_snf(a: np.ndarray, p: int, e: int):
    """Smith form over Z/p^e of an r x c matrix: returns (U, Uinv, exponents).

    U a V = diag(p^exponents[t]) with exponent e meaning a zero pivot.
    Pivot: least valuation, ties broken by lowest (row, col).
    """
    q = p ** e
    r = a.shape[0]
    dt = _dtype(q)
    a = np.array(a, dtype=dt).reshape(r, -1) % q
    U = np.eye(r, dtype=dt)
    Ui = np.eye(r, dtype=dt)
    exps = []
    for t in range(r):
        sub = a[t:, t:]
        nz = np.argwhere(sub != 0)
        if not len(nz):
            exps.extend([e] * (r - t))
            break
        vs = _valuations(sub[nz[:, 0], nz[:, 1]], p)
        best = int(np.argmin(vs))
        v = int(vs[best])
        i, j = int(nz[best, 0]) + t, int(nz[best, 1]) + t
        if i != t:
            a[[t, i]] = a[[i, t]]
            U[[t, i]] = U[[i, t]]
            Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
        pv = p ** v
        unit = int(a[t, t]) // pv
        inv = pow(unit, -1, q)
        a[t] = (a[t] * inv) % q
        U[t] = (U[t] * inv) % q
        Ui[:, t] = (Ui[:, t] * unit) % q
        # clear column t below the pivot
        f = a[t + 1:, t] // pv
        if f.any():
            a[t + 1:] = (a[t + 1:] - np.outer(f, a[t])) % q
            U[t + 1:] = (U[t + 1:] - np.outer(f, U[t])) % q
            Ui[:, t] = (Ui[:, t] + Ui[:, t + 1:] @ f) % q
        # clear row t to the right (column operations; V is not needed)
        g = a[t, t + 1:] // pv
        if g.any():
            a[:, t + 1:] = (a[:, t + 1:] - np.outer(a[:, t], g)) % q
        exps.append(v)
    return U, Ui, exps


# ------------------------------------------------------------------ finite groups

class _PrimePart:
    """The p-part of A = ⊕ Z/o_i: R^n modulo p^v_i e_i, with CRT idempotents."""

    def __init__(self, orders: Sequence[int], p: int):
        self.p = p
        self.v = [valuation(o, p) for o in orders]
        self.e = max(self.v, default=0)
        self.q = p ** self.e
        self.n = len(orders)
        self.orders = list(orders)
        # c_i = 1 mod p^v_i and 0 mod o_i / p^v_i
        self.idem = []
        for o, v in zip(orders, self.v):
            pv = p ** v
            rest = o // pv
            self.idem.append(0 if v == 0 else (rest * pow(rest, -1, pv)) % o)

    def relations(self) -> list[list[int]]:
        rels = []
        for i, v in enumerate(self.v):
            if v < self.e:
                r = [0] * self.n
                r[i] = self.p ** v
                rels.append(r)
        return rels

    def project(self, x: Sequence[int]) -> list[int]:
        return [int(a) % self.q for a in x]

    def embed(self, y: Sequence[int]) -> Vector:
        return [(int(a) * c) % o for a, c, o in zip(y, self.idem, self.orders)]


def _primes(*orders_lists: Sequence[int]) -> list[int]:
    ps: set[int] = set()
    for orders in orders_lists:
        for o in orders:
            ps.update(factorize(o))
    return sorted(ps)


class FiniteSubquotient:
    """N / B inside a finite group A = ⊕ Z/o_i, in canonical form with lifts.

    Same interface as the integer ``Subquotient``: ``group``, ``lifts``,
    ``express``, ``contains``, ``is_zero_class``, ``induced``.
    """

    def __init__(self, orders: Sequence[int], numerator: Sequence[Sequence[int]],
                 denominator: Sequence[Sequence[int]]):
        from .abelian import FinAb
        self.orders = list(orders)
        self.dim = n = len(orders)
        self._parts = []
        per_prime = []       # (p, exponents, lifts (global), part, howell, U)
        for p in _primes(orders):
            part = _PrimePart(orders, p)
            rels = part.relations()
            num = [part.project(x) for x in numerator] + rels
            H = Howell(np.array(num or [[0] * n]), p, part.e, n)
            cols = H.relations()
            for b in denominator:
                c = H.coords(part.project(b))
                if c is None:
                    raise ValueError("denominator not contained in numerator")
                cols.append(c)
            for b in rels:
                cols.append(H.coords(b))
            r = len(H)
            if r == 0:
                continue
            mat = np.array(cols, dtype=H.rows.dtype).reshape(-1, r).T if cols else \
                np.zeros((r, 0), dtype=H.rows.dtype)
            U, Ui, exps = local_snf(mat, p, part.e)
            keep = [t for t in range(r) if exps[t] > 0]
            lifts = []
            for t in keep:
                y = (Ui[:, t] @ H.rows) % part.q
                lifts.append(part.embed(y))
            per_prime.append((p, [exps[t] for t in keep], lifts))
            self._parts.append((part, H, U, keep, [p ** exps[t] for t in keep]))
        # assemble: the j-th largest factor is the product of j-th largest p-powers
        k = max((len(ex) for _, ex, _ in per_prime), default=0)
        factors, lifts = [], []
        self._slots: list[list[tuple[int, int]]] = []    # per factor: (part index, local t)
        for j in range(k):
            d, lift, slot = 1, [0] * n, []
            for pi, (p, ex, ls) in enumerate(per_prime):
                order_desc = sorted(range(len(ex)), key=lambda t: (-ex[t], t))
                if j < len(order_desc):
                    t = order_desc[j]
                    d *= p ** ex[t]
                    lift = [(a + b) % o for a, b, o in zip(lift, ls[t], orders)]
                    slot.append((pi, t))
            factors.append(d)
            lifts.append(lift)
            self._slots.append(slot)
        factors.reverse()
        lifts.reverse()
        self._slots.reverse()
        self.group = FinAb(factors)
        self.lifts = lifts

    def _local_coords(self, x: Sequence[int]) -> list[list[int]] | None:
        out = []
        for part, H, U, keep, mods in self._parts:
            c = H.coords(part.project(x))
            if c is None:
                return None
            full = (U @ np.array(c, dtype=H.rows.dtype)) % part.q if len(c) else []
            out.append([int(full[t]) % m for t, m in zip(keep, mods)])
        return out

    def express(self, x: Sequence[int]) -> Vector:
        loc = self._local_coords(x)
        if loc is None:
            raise ValueError("element does not lie in the numerator subgroup")
        out = []
        for d, slot in zip(self.group.orders, self._slots):
            val, mod = 0, 1
            for pi, t in slot:
                m = self._parts[pi][4][t]
                a = loc[pi][t]
                # CRT step
                val = val + mod * (((a - val) * pow(mod, -1, m)) % m)
                mod *= m
            out.append(val % d)
        return out

    def contains(self, x: Sequence[int]) -> bool:
        return self._local_coords(x) is not None

    def is_zero_class(self, x: Sequence[int]) -> bool:
        return not any(self.express(x))

    def induced(self, fn: Callable[[Vector], Sequence[int]], target) -> AbHom:
        from .abelian import AbHom
        cols = [target.express(fn(list(v))) for v in self.lifts]
        mat = IntMatrix.from_columns(cols, target.group.ngens) if cols else \
            IntMatrix.zeros(target.group.ngens, 0)
        return AbHom(self.group, target.group, mat)


def finite_preimage(matrix: IntMatrix | np.ndarray, source: Sequence[int],
                    target: Sequence[int]) -> list[Vector]:
    """Generators of {x in A : matrix x = 0 in B} for finite A, B.

    Entries of ``target`` may be 0 (a copy of Z); the corresponding rows of a
    well-defined map from a finite group vanish and are ignored.
    """
    n, m = len(source), len(target)
    M = np.array(matrix.tolist() if isinstance(matrix, IntMatrix) else matrix,
                 dtype=object).reshape(m, n)
    rows_keep = [j for j in range(m) if target[j] != 0]
    tgt = [target[j] for j in rows_keep]
    M = M[rows_keep]
    m = len(tgt)
    out: list[Vector] = []
    for p in _primes(source, tgt):
        ps = _PrimePart(source, p)
        pt = _PrimePart(tgt, p)
        if ps.e == 0:
            continue
        e = max(ps.e, pt.e)
        q = p ** e
        gens = []
        for i in range(n):
            gens.append([int(M[j, i]) % q for j in range(m)] + [1 if k == i else 0 for k in range(n)])
        for j, v in enumerate(pt.v):
            if v < e:
                r = [0] * (m + n)
                r[j] = p ** v
                gens.append(r)
        for i, v in enumerate(ps.v):
            if v < e:
                r = [0] * (m + n)
                r[m + i] = p ** v
                gens.append(r)
        H = Howell(np.array(gens), p, e, m + n)
        for k, c in enumerate(H.cols):
            if c >= m:
                y = [int(a) for a in H.rows[k][m:]]
                out.append(ps.embed(y))
    return [v for v in out if any(v)]

