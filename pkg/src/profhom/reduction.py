"""Exact reductions of the normalized bar complex A ⊗_G Bar(G).

Entries of the differential are group-ring elements acting on the
coefficient module, so one reduction of Bar(G) serves every module.
Cancelling a pair of cells joined by a unit entry ±g is a chain homotopy
equivalence; the reduction keeps both directions of it:

* ``project(l, chain)`` maps a chain on normalized cells to the reduced
  complex (the projection f),
* ``lift(l, chain)`` maps a reduced chain back to normalized cells (the
  inclusion g), with f∘g = id and g∘f homotopic to id.

Three models share the interface: ``MorseBar`` uses an explicit acyclic
matching for cyclic groups (leading runs of a generator t, critical cells
t^l) and never materializes the complex; ``EliminationBar`` materializes
the complex up to a truncation and eliminates greedily (any group);
``LiteralBar`` is the bar complex itself, normalized or not.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .groups import FiniteGroup

Cell = tuple[int, ...]
Ring = dict[int, int]


# ------------------------------------------------------------ group ring

def rmul(G: FiniteGroup, s: Ring, r: Ring) -> Ring:
    """Product s*r in Z[G] (acting on modules: first r, then s)."""
    out: Ring = {}
    tab = G.table
    for g, a in s.items():
        row = tab[g]
        for h, b in r.items():
            k = row[h]
            v = out.get(k, 0) + a * b
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def unit_inverse(G: FiniteGroup, r: Ring) -> Ring | None:
    """Inverse of ±g, or None when r is not of that form."""
    if len(r) != 1:
        return None
    (g, c), = r.items()
    if c not in (1, -1):
        return None
    return {G.inv(g): c}


class RingCoeffs:
    """Chain coefficients in Z[G] itself (used to compute reduced entries)."""

    def __init__(self, G: FiniteGroup):
        self.G = G

    def one(self) -> Ring:
        return {0: 1}

    def is_zero(self, x: Ring) -> bool:
        return not x

    def add(self, x: Ring, y: Ring) -> Ring:
        out = dict(x)
        for g, c in y.items():
            v = out.get(g, 0) + c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return out

    def act(self, r: Ring, x: Ring) -> Ring:
        return rmul(self.G, r, x)

    def neg(self, x: Ring) -> Ring:
        return {g: -c for g, c in x.items()}


class ModuleCoeffs:
    """Chain coefficients in a finite G-module (numpy vectors mod orders)."""

    def __init__(self, module):
        self.M = module
        self.orders = module.orders

    def is_zero(self, x: np.ndarray) -> bool:
        return not x.any()

    def add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x + y) % self.orders

    def act(self, r: Ring, x: np.ndarray) -> np.ndarray:
        return self.M.act_ring(r, x)

    def neg(self, x: np.ndarray) -> np.ndarray:
        return (-x) % self.orders


def _accumulate(chain: dict, cell: Cell, value, coeffs) -> None:
    if cell in chain:
        v = coeffs.add(chain[cell], value)
        if coeffs.is_zero(v):
            del chain[cell]
        else:
            chain[cell] = v
    elif not coeffs.is_zero(value):
        chain[cell] = value


# ------------------------------------------------------------ bar faces

def faces(G: FiniteGroup, cell: Cell, normalized: bool = True) -> dict[Cell, Ring]:
    """Boundary of a cell of A ⊗_G Bar(G) as {target cell: ring entry}.

    d_0 drops the first entry, inner d_j multiplies entries j and j+1, and
    d_l drops the last entry g_l while acting by g_l; signs (-1)^j.
    In the normalized complex, degenerate targets (an entry equal to the
    identity) are zero.
    """
    l = len(cell)
    out: dict[Cell, Ring] = {}
    if l == 0:
        return out

    def put(target: Cell, g: int, c: int) -> None:
        r = out.setdefault(target, {})
        v = r.get(g, 0) + c
        if v:
            r[g] = v
        else:
            r.pop(g, None)
            if not r:
                del out[target]

    put(cell[1:], 0, 1)
    tab = G.table
    for j in range(1, l):
        comp = tab[cell[j - 1]][cell[j]]
        if normalized and comp == 0:
            continue
        put(cell[:j - 1] + (comp,) + cell[j + 1:], 0, -1 if j % 2 else 1)
    put(cell[:-1], cell[-1], -1 if l % 2 else 1)
    return out


def boundary(G: FiniteGroup, chain: dict, coeffs, normalized: bool = True) -> dict:
    out: dict = {}
    for cell, x in chain.items():
        for target, r in faces(G, cell, normalized).items():
            _accumulate(out, target, coeffs.act(r, x), coeffs)
    return out


def nondegenerate_cells(G: FiniteGroup, l: int) -> list[Cell]:
    """Normalized l-cells in lexicographic order."""
    from itertools import product
    return [c for c in product(range(1, G.order), repeat=l)]


class ReductionError(RuntimeError):
    """The matching failed to be acyclic or a pivot was not a unit."""


# ------------------------------------------------------------ Morse (cyclic)

class MorseBar:
    """Reduction of Bar(G) for cyclic G = <t> with critical cells t^l.

    Matching: a cell whose leading run of t's has odd length m is matched
    with its d_0 face; if m is even and the cell is not all t's, it is
    matched with (t,) + cell. Nothing is truncated, so every degree is
    reliable.
    """

    def __init__(self, G: FiniteGroup, t: int | None = None, max_steps: int = 5_000_000):
        if t is None:
            t = G.cyclic_generator
        if t is None or G.element_order(t) != G.order:
            raise ValueError("MorseBar needs a generator of a cyclic group")
        self.G, self.t = G, t
        self.max_steps = max_steps
        self._nu_inv: dict[Cell, Ring] = {}
        self._diff: dict[int, dict[tuple[int, int], Ring]] = {}

    reliable_through = float("inf")

    def _lead(self, cell: Cell) -> int:
        m = 0
        for x in cell:
            if x != self.t:
                break
            m += 1
        return m

    def is_critical(self, cell: Cell) -> bool:
        if self.G.order == 1:
            return True
        return self._lead(cell) == len(cell)

    def up_partner(self, cell: Cell) -> Cell | None:
        """The (l+1)-cell matched with ``cell``, if the match goes up."""
        m = self._lead(cell)
        if m == len(cell) or m % 2:
            return None
        return (self.t,) + cell

    def is_down(self, cell: Cell) -> bool:
        m = self._lead(cell)
        return m != len(cell) and m % 2 == 1

    def cells(self, l: int) -> list[Cell]:
        if self.G.order == 1:
            return [()] if l == 0 else []
        return [(self.t,) * l]

    def _pivot_inverse(self, b: Cell, a: Cell) -> Ring:
        inv = self._nu_inv.get(b)
        if inv is None:
            nu = faces(self.G, b).get(a)
            inv = unit_inverse(self.G, nu) if nu else None
            if inv is None:
                raise ReductionError(f"matched pair {b} -> {a} has non-unit entry {nu}")
            self._nu_inv[b] = inv
        return inv

    def project(self, l: int, chain: dict, coeffs) -> dict:
        """Morse projection of an l-chain onto critical cells."""
        x = dict(chain)
        pending = [c for c in x if self.up_partner(c) is not None]
        steps = 0
        while pending:
            a = pending.pop()
            if a not in x:
                continue
            b = self.up_partner(a)
            c = x.pop(a)
            w = coeffs.act(self._pivot_inverse(b, a), c)
            for y, r in faces(self.G, b).items():
                if y == a:
                    continue
                _accumulate(x, y, coeffs.neg(coeffs.act(r, w)), coeffs)
                if y in x and self.up_partner(y) is not None:
                    pending.append(y)
            steps += 1
            if steps > self.max_steps:
                raise ReductionError("projection did not terminate; matching not acyclic?")
        return {c: v for c, v in x.items() if self.is_critical(c)}

    def lift(self, l: int, chain: dict, coeffs) -> dict:
        """Inclusion of a critical l-chain into the normalized complex."""
        y = dict(chain)
        dy = {a: v for a, v in boundary(self.G, y, coeffs).items()
              if self.up_partner(a) is not None}
        steps = 0
        while dy:
            a = next(iter(dy))
            c = dy.pop(a)
            b = self.up_partner(a)
            w = coeffs.neg(coeffs.act(self._pivot_inverse(b, a), c))
            _accumulate(y, b, w, coeffs)
            for z, r in faces(self.G, b).items():
                if z != a and self.up_partner(z) is not None:
                    _accumulate(dy, z, coeffs.act(r, w), coeffs)
            steps += 1
            if steps > self.max_steps:
                raise ReductionError("lift did not terminate; matching not acyclic?")
        return y

    def differential(self, l: int) -> dict[tuple[int, int], Ring]:
        """Reduced d_l as {(row, col): ring entry} on ``cells(l-1)`` x ``cells(l)``."""
        if l not in self._diff:
            rc = RingCoeffs(self.G)
            rows = {c: i for i, c in enumerate(self.cells(l - 1))}
            out = {}
            for j, c in enumerate(self.cells(l)):
                img = self.project(l - 1, boundary(self.G, {c: rc.one()}, rc), rc)
                for cell, r in img.items():
                    out[(rows[cell], j)] = r
            self._diff[l] = out
        return self._diff[l]


# ------------------------------------------------------------ elimination

class _Lattice:
    """Incremental Hermite basis of a sublattice of Z^n (rows keyed by pivot)."""

    def __init__(self):
        self.rows: dict[int, list[int]] = {}

    def _reduce(self, v: list[int], insert: bool) -> bool:
        """Reduce v; with ``insert`` merge it in. True when v was not a member."""
        v = list(v)
        changed = False
        for j in range(len(v)):
            if not v[j]:
                continue
            row = self.rows.get(j)
            if row is None:
                if insert:
                    self.rows[j] = v if v[j] > 0 else [-x for x in v]
                return True
            if v[j] % row[j] == 0:
                f = v[j] // row[j]
                v = [a - f * b for a, b in zip(v, row)]
                continue
            if not insert:
                return True
            # unimodular step: new pivot gcd, remainder continues down
            g, s, t = _xgcd(row[j], v[j])
            a, b = row[j] // g, v[j] // g
            new = [s * x + t * y for x, y in zip(row, v)]
            v = [a * y - b * x for x, y in zip(row, v)]
            self.rows[j] = new
            changed = True
        return changed

    def contains(self, v: list[int]) -> bool:
        return not self._reduce(v, insert=False)

    def add(self, v: list[int]) -> bool:
        return self._reduce(v, insert=True)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0

class EliminationBar:
    """Greedy Gaussian elimination of the normalized bar complex up to degree L.

    Works for any finite group. Homology is reliable through degree L-1.
    Degree L only supplies boundaries, so its cells are pruned to a subset
    whose images generate the same Z[G]-submodule; ``project`` and ``lift``
    are defined below L only.
    """

    def __init__(self, G: FiniteGroup, L: int, cap: int = 200_000):
        total = sum((G.order - 1) ** l for l in range(L + 1))
        if total > cap:
            from .errors import SizeOverflow
            raise SizeOverflow(total, cap, f"normalized bar cells of a group of order {G.order}")
        self.G, self.L = G, L
        self.reliable_through = L - 1
        cells = [nondegenerate_cells(G, l) for l in range(L + 1)]
        # d[k][col][row] = ring entry of d_k from a k-cell to a (k-1)-cell
        d: list[dict[Cell, dict[Cell, Ring]]] = [dict() for _ in range(L + 1)]
        rows: list[dict[Cell, set]] = [dict() for _ in range(L + 1)]
        for k in range(1, L + 1):
            for c in cells[k]:
                col = faces(G, c)
                d[k][c] = col
                for a in col:
                    rows[k].setdefault(a, set()).add(c)
        alive = [set(cs) for cs in cells]
        self.records: list[tuple[int, Cell, Cell, Ring, dict, dict]] = []
        for k in range(1, L + 1):
            for b in cells[k]:
                if b not in alive[k]:
                    continue
                col = d[k][b]
                best = None
                for a, r in col.items():
                    inv = unit_inverse(G, r)
                    if inv is not None:
                        key = (len(rows[k].get(a, ())), a)
                        if best is None or key < best[0]:
                            best = (key, a, inv)
                if best is None:
                    continue
                _, a, nu_inv = best
                self._eliminate(k, b, a, nu_inv, d, rows, alive)
        self._cells = [sorted(alive[l]) for l in range(L + 1)]
        self._d = d
        if L >= 1:
            self._cells[L] = self._boundary_generators(L)
        self._diff: dict[int, dict[tuple[int, int], Ring]] = {}

    def _boundary_generators(self, k: int) -> list[Cell]:
        """Cells of degree k whose boundaries generate all of d_k as a Z[G]-module.

        A cell is kept when its boundary leaves the Z-lattice spanned by the
        kept boundaries and their right translates; that lattice is the
        Z[G]-submodule they generate, so tensoring with any module gives
        the same image.
        """
        G = self.G
        rows = {a: i for i, a in enumerate(self._cells[k - 1])}
        n = G.order

        def vec(col: dict, g: int | None) -> list[int]:
            v = [0] * (n * len(rows))
            for a, r in col.items():
                rr = r if g is None else rmul(G, r, {g: 1})
                for h, c in rr.items():
                    v[rows[a] * n + h] += c
            return v

        lat = _Lattice()
        kept = []
        for c in self._cells[k]:
            col = self._d[k][c]
            if not col or lat.contains(vec(col, None)):
                continue
            kept.append(c)
            for g in range(n):
                lat.add(vec(col, g))
        return kept

    def _eliminate(self, k, b, a, nu_inv, d, rows, alive) -> None:
        G = self.G
        gamma = {x: d[k][x][a] for x in rows[k].get(a, ()) if x != b}
        beta = {y: r for y, r in d[k][b].items() if y != a}
        self.records.append((k, b, a, nu_inv, gamma, beta))
        for x, gx in gamma.items():
            t = rmul(G, nu_inv, gx)
            colx = d[k][x]
            for y, by in beta.items():
                upd = rmul(G, by, t)
                cur = colx.get(y, {})
                new = dict(cur)
                for g, c in upd.items():
                    v = new.get(g, 0) - c
                    if v:
                        new[g] = v
                    else:
                        new.pop(g, None)
                if new:
                    colx[y] = new
                    rows[k].setdefault(y, set()).add(x)
                else:
                    colx.pop(y, None)
                    rows[k].get(y, set()).discard(x)
            colx.pop(a, None)
        # drop column b and row a of d_k
        for y in d[k][b]:
            rows[k].get(y, set()).discard(b)
        del d[k][b]
        rows[k].pop(a, None)
        # drop row b of d_{k+1} and column a of d_{k-1}
        if k + 1 <= self.L:
            for z in rows[k + 1].pop(b, ()):
                d[k + 1][z].pop(b, None)
        if k - 1 >= 1:
            for y in d[k - 1].pop(a, {}):
                rows[k - 1].get(y, set()).discard(a)
        alive[k].discard(b)
        alive[k - 1].discard(a)

    def cells(self, l: int) -> list[Cell]:
        if l > self.L:
            raise ValueError(f"degree {l} beyond truncation {self.L}")
        return self._cells[l]

    def differential(self, l: int) -> dict[tuple[int, int], Ring]:
        if l not in self._diff:
            rows = {c: i for i, c in enumerate(self._cells[l - 1])}
            out = {}
            for j, c in enumerate(self._cells[l]):
                for a, r in self._d[l][c].items():
                    out[(rows[a], j)] = r
            self._diff[l] = out
        return self._diff[l]

    def project(self, l: int, chain: dict, coeffs) -> dict:
        if l >= self.L:
            raise ValueError(f"no projection in the top degree {self.L}")
        x = dict(chain)
        for k, b, a, nu_inv, gamma, beta in self.records:
            if k == l:
                x.pop(b, None)
            elif k == l + 1 and a in x:
                w = coeffs.act(nu_inv, x.pop(a))
                for y, r in beta.items():
                    _accumulate(x, y, coeffs.neg(coeffs.act(r, w)), coeffs)
        return x

    def lift(self, l: int, chain: dict, coeffs) -> dict:
        if l >= self.L:
            raise ValueError(f"no lift in the top degree {self.L}")
        y = dict(chain)
        for k, b, a, nu_inv, gamma, beta in reversed(self.records):
            if k != l:
                continue
            acc = None
            for x, gx in gamma.items():
                if x in y:
                    v = coeffs.act(gx, y[x])
                    acc = v if acc is None else coeffs.add(acc, v)
            if acc is not None and not coeffs.is_zero(acc):
                y[b] = coeffs.neg(coeffs.act(nu_inv, acc))
        return y


# ------------------------------------------------------------ literal

class LiteralBar:
    """The bar complex itself behind the reduction interface.

    ``normalized`` keeps only cells without identity entries; otherwise
    every tuple of G^l is a cell. ``project`` and ``lift`` are identities
    (degenerate cells are dropped on projection in the normalized case).
    """

    reliable_through = float("inf")

    def __init__(self, G: FiniteGroup, normalized: bool = True, cap: int = 10 ** 6):
        self.G, self.normalized, self.cap = G, normalized, cap
        self._cells: dict[int, list[Cell]] = {}
        self._diff: dict[int, dict[tuple[int, int], Ring]] = {}

    def cells(self, l: int) -> list[Cell]:
        if l not in self._cells:
            if self.normalized:
                size = (self.G.order - 1) ** l
                if size > self.cap:
                    from .errors import SizeOverflow
                    raise SizeOverflow(size, self.cap, f"normalized bar cells in degree {l}")
                self._cells[l] = nondegenerate_cells(self.G, l)
            else:
                from .groups import power
                self._cells[l] = list(power(self.G, l, self.cap))
        return self._cells[l]

    def differential(self, l: int) -> dict[tuple[int, int], Ring]:
        if l not in self._diff:
            rows = {c: i for i, c in enumerate(self.cells(l - 1))}
            out = {}
            for j, c in enumerate(self.cells(l)):
                for a, r in faces(self.G, c, self.normalized).items():
                    out[(rows[a], j)] = r
            self._diff[l] = out
        return self._diff[l]

    def project(self, l: int, chain: dict, coeffs) -> dict:
        if not self.normalized:
            return dict(chain)
        return {c: v for c, v in chain.items() if 0 not in c}

    def lift(self, l: int, chain: dict, coeffs) -> dict:
        return dict(chain)


_CACHE: dict = {}

METHODS = ("auto", "morse", "elimination", "normalized", "unnormalized")


def reduced_bar(G: FiniteGroup, degree: int, method: str = "auto"):
    """A model of Bar(G) whose homology is reliable through ``degree``.

    ``method`` is "morse" (cyclic groups only), "elimination", "auto"
    (Morse when G is cyclic, else elimination), or "normalized" /
    "unnormalized" for the literal complexes.
    """
    if method not in METHODS:
        raise ValueError(f"unknown reduction method {method!r}")
    if method == "auto":
        method = "morse" if G.is_cyclic() else "elimination"
    if method in ("normalized", "unnormalized"):
        key = (G.table, method)
        if key not in _CACHE:
            _CACHE[key] = LiteralBar(G, normalized=method == "normalized")
        return _CACHE[key]
    if method == "morse":
        key = (G.table, "morse")
        if key not in _CACHE:
            _CACHE[key] = MorseBar(G)
        return _CACHE[key]
    # reuse any cached elimination that is deep enough
    best = None
    for key, red in _CACHE.items():
        if key[0] == G.table and key[1] == "elimination" and key[2] >= degree + 1:
            if best is None or key[2] < best[0]:
                best = (key[2], red)
    if best is not None:
        return best[1]
    red = EliminationBar(G, degree + 1)
    _CACHE[(G.table, "elimination", degree + 1)] = red
    return red


def clear_cache() -> None:
    _CACHE.clear()


def chain_map_cells(images: Callable[[int], int], chain: dict,
                    value_map: Callable, coeffs, normalized: bool = True) -> dict:
    """Push a bar chain along a group map, cellwise.

    In the normalized complex, cells with an entry mapping to the identity
    are degenerate in the target and vanish.
    """
    out: dict = {}
    for cell, v in chain.items():
        target = tuple(images(g) for g in cell)
        if normalized and 0 in target:
            continue
        _accumulate(out, target, value_map(v), coeffs)
    return out
