"""Bicomplexes, their column-filtration spectral sequence, and orbit homology.

A spectrum with a compatible action of the tower {G/N_i} is modeled by a
tower of chain complexes C_i of finite G/N_i-modules; H_q(C_i) plays the
role of π_q. At level i the homotopy orbit object becomes the bicomplex

    B_{p,q} = C_{i,q} ⊗_G (degree-p part of a model of Bar(G/N_i)),

p the bar direction and q the internal degree, and its total homology.
The limit over the tower is taken on total homology and on E_2 pages,
along the bicomplex maps induced by the tower transitions.

Sign convention: stored vertical differentials already carry (-1)^p, so
d^h and d^v anticommute and the total differential is d^h + d^v.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .abelian import AbGroup, AbHom, FinAb, homology_at
from .bar import bar_homology, flatten
from .errors import (CollapseViolation, CompositionNonzero, DepthMismatch, E2Mismatch,
                     GroupMismatch, NotEquivariant, SizeOverflow, ValidationError)
from .gmod import GModule, ModuleTower, check_equivariant, direct_sum, make_module
from .groups import FiniteGroup, GroupTower, identity_quotient
from .matrix import IntMatrix
from .primary import FiniteSubquotient, finite_preimage
from .profinite import TowerPair, continuous_homology, validate_tower_pair
from .reduction import ModuleCoeffs, chain_map_cells, reduced_bar
from .towers import DEFAULT_WINDOW, LimResult, tower_lim, Tower

Pos = tuple[int, int]


def _blocks(row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> IntMatrix:
    """Assemble a block matrix; ``blocks[(i, j)]`` is a row_sizes[i] x col_sizes[j] array."""
    roff = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    coff = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    out = np.zeros((int(roff[-1]), int(coff[-1])), dtype=object)
    for (i, j), B in blocks.items():
        B = np.asarray(B, dtype=object).reshape(row_sizes[i], col_sizes[j])
        out[roff[i]:roff[i + 1], coff[j]:coff[j + 1]] += B
    return IntMatrix([[int(x) for x in row] for row in out], int(roff[-1]), int(coff[-1]))


def _hom_matrix(f: AbHom) -> np.ndarray:
    return np.array(f.matrix.tolist(), dtype=object).reshape(f.matrix.rows, f.matrix.cols)


# ------------------------------------------------------------------ bicomplex

@dataclass
class Bicomplex:
    """First-quadrant array B_{p,q}, 0 <= p <= P, 0 <= q <= Q, of finite groups.

    ``dh[(p, q)]: B_{p,q} -> B_{p-1,q}`` and ``dv[(p, q)]: B_{p,q} -> B_{p,q-1}``;
    missing entries are zero maps. ``truncated_p`` / ``truncated_q`` mark a
    direction cut off from a longer complex, which bounds the degrees in
    which total homology is meaningful.
    """

    entries: dict[Pos, AbGroup]
    dh: dict[Pos, AbHom] = field(default_factory=dict)
    dv: dict[Pos, AbHom] = field(default_factory=dict)
    truncated_p: bool = False
    truncated_q: bool = False

    def __post_init__(self):
        self.P = max(p for p, _ in self.entries)
        self.Q = max(q for _, q in self.entries)
        for p in range(self.P + 1):
            for q in range(self.Q + 1):
                self.entries.setdefault((p, q), AbGroup(()))
        for (p, q), A in self.entries.items():
            if not A.is_finite():
                raise ValidationError(f"entry ({p}, {q}) is infinite")
        for p in range(self.P + 1):
            for q in range(self.Q + 1):
                B = self.entries[(p, q)]
                if p >= 1:
                    self._fill(self.dh, (p, q), B, self.entries[(p - 1, q)], "d^h")
                if q >= 1:
                    self._fill(self.dv, (p, q), B, self.entries[(p, q - 1)], "d^v")
        self._verify()
        self._tot: dict[int, tuple] = {}
        self._D: dict[int, IntMatrix] = {}

    @staticmethod
    def _fill(maps: dict, pos: Pos, src: AbGroup, tgt: AbGroup, name: str) -> None:
        f = maps.get(pos)
        if f is None:
            maps[pos] = AbHom.zero(src, tgt)
        elif f.source.orders != src.orders or f.target.orders != tgt.orders:
            raise ValidationError(f"{name} at {pos} does not connect the right entries")

    def _verify(self) -> None:
        for (p, q) in self.entries:
            if p >= 2 and not (self.dh[(p - 1, q)] @ self.dh[(p, q)]).is_zero():
                raise CompositionNonzero(f"d^h d^h != 0 at ({p}, {q})")
            if q >= 2 and not (self.dv[(p, q - 1)] @ self.dv[(p, q)]).is_zero():
                raise CompositionNonzero(f"d^v d^v != 0 at ({p}, {q})")
            if p >= 1 and q >= 1:
                a = (self.dh[(p, q - 1)] @ self.dv[(p, q)]).matrix
                b = (self.dv[(p - 1, q)] @ self.dh[(p, q)]).matrix
                s = AbHom(self.entries[(p, q)], self.entries[(p - 1, q - 1)], a + b, check=False)
                if not s.is_zero():
                    raise CompositionNonzero(f"d^h d^v + d^v d^h != 0 at ({p}, {q})")

    @property
    def reliable_through(self) -> int:
        """Highest total degree unaffected by truncation."""
        bounds = [self.P + self.Q]
        if self.truncated_p:
            bounds.append(self.P - 1)
        if self.truncated_q:
            bounds.append(self.Q - 1)
        return min(bounds)

    def columns(self, n: int) -> list[int]:
        return [p for p in range(max(0, n - self.Q), min(n, self.P) + 1)]

    def total(self, n: int) -> tuple[AbGroup, list[int], list[int]]:
        """Tot_n, the columns it meets, and the coordinate offset of each column."""
        if n not in self._tot:
            cols = self.columns(n)
            orders: tuple = ()
            offs = []
            for p in cols:
                offs.append(len(orders))
                orders += self.entries[(p, n - p)].orders
            self._tot[n] = (AbGroup(orders), cols, offs)
        return self._tot[n]

    def total_differential(self, n: int) -> IntMatrix:
        """d^h + d^v : Tot_n -> Tot_{n-1}."""
        if n not in self._D:
            src, scols, _ = self.total(n)
            tgt, tcols, _ = self.total(n - 1)
            rs = [self.entries[(p, n - 1 - p)].ngens for p in tcols]
            cs = [self.entries[(p, n - p)].ngens for p in scols]
            blocks = {}
            for j, p in enumerate(scols):
                q = n - p
                if p >= 1 and p - 1 in tcols:
                    blocks[(tcols.index(p - 1), j)] = _hom_matrix(self.dh[(p, q)])
                if q >= 1 and p in tcols:
                    blocks[(tcols.index(p), j)] = _hom_matrix(self.dv[(p, q)])
            self._D[n] = _blocks(rs, cs, blocks) if n >= 1 else IntMatrix.zeros(0, src.ngens)
        return self._D[n]

    def total_map(self, n: int) -> AbHom | None:
        if n < 1:
            return None
        return AbHom(self.total(n)[0], self.total(n - 1)[0], self.total_differential(n),
                     check=False)


@dataclass
class TotalHomology:
    groups: list[FinAb]
    subquotients: list = field(repr=False)
    reliable_through: int

    def __getitem__(self, n: int) -> FinAb:
        return self.groups[n]


def total_homology(B: Bicomplex, degrees: Sequence[int] | None = None) -> TotalHomology:
    """Homology of Tot with d = d^h + d^v, all degrees 0..P+Q unless given."""
    top = B.P + B.Q
    degrees = range(top + 1) if degrees is None else degrees
    subs, groups = [], []
    for n in degrees:
        d_out = B.total_map(n)
        d_in = B.total_map(n + 1) if n + 1 <= top else None
        S = homology_at(B.total(n)[0], d_in, d_out)
        subs.append(S)
        groups.append(S.group)
    return TotalHomology(groups, subs, B.reliable_through)


# ------------------------------------------------------------------ spectral sequence

class ColumnSpectralSequence:
    """The spectral sequence of the column filtration F_p Tot = ⊕_{p' <= p} B_{p',*}.

    Pages are computed directly as subquotients of Tot_n:

        E^r_{p,q} = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}),
        Z^r_p = {x in F_p Tot_n : d x in F_{p-r} Tot_{n-1}},

    so canonical generator lifts are zig-zag representatives and d_r is
    induced by the total differential. E^1 is vertical homology and E^2
    horizontal homology of vertical homology.
    """

    def __init__(self, B: Bicomplex):
        self.B = B
        self._Z: dict = {}
        self._E: dict = {}
        self._d: dict = {}

    @property
    def r_infinity(self) -> int:
        """A page from which every differential vanishes."""
        return min(self.B.P, self.B.Q + 1) + 1

    def _cycles(self, r: int, p: int, n: int) -> list[list[int]]:
        B = self.B
        if n < 0 or n > B.P + B.Q:
            return []
        A, cols, offs = B.total(n)
        if not cols or p < cols[0]:
            return []
        key = (r, p, n)
        if key in self._Z:
            return self._Z[key]
        top = min(p, cols[-1])
        end = offs[cols.index(top)] + B.entries[(top, n - top)].ngens
        dim = A.ngens
        units = [[1 if i == j else 0 for i in range(dim)] for j in range(end)]
        if r <= 0 or n == 0:
            out = units
        else:
            tgt, tcols, toffs = B.total(n - 1)
            rows = [toffs[k] + a for k, pp in enumerate(tcols) if pp > p - r
                    for a in range(B.entries[(pp, n - 1 - pp)].ngens)]
            if not rows:
                out = units
            else:
                D = B.total_differential(n)
                sub = [[D[(i, j)] for j in range(end)] for i in rows]
                ker = finite_preimage(IntMatrix(sub, len(rows), end), A.orders[:end],
                                      [tgt.orders[i] for i in rows])
                out = [v + [0] * (dim - end) for v in ker]
        self._Z[key] = out
        return out

    def in_grid(self, p: int, q: int) -> bool:
        return 0 <= p <= self.B.P and 0 <= q <= self.B.Q

    def page(self, r: int, p: int, q: int) -> FiniteSubquotient:
        key = (r, p, q)
        if key not in self._E:
            n = p + q
            A = self.B.total(n)[0]
            num = self._cycles(r, p, n)
            den = list(self._cycles(r - 1, p - 1, n))
            if n + 1 <= self.B.P + self.B.Q:
                D = self.B.total_differential(n + 1)
                den += [D.apply(z) for z in self._cycles(r - 1, p + r - 1, n + 1)]
            self._E[key] = FiniteSubquotient(A.orders, num, den)
        return self._E[key]

    def group(self, r: int, p: int, q: int) -> FinAb:
        return self.page(r, p, q).group

    def differential(self, r: int, p: int, q: int) -> AbHom:
        """d_r : E^r_{p,q} -> E^r_{p-r, q+r-1}."""
        key = (r, p, q)
        if key not in self._d:
            src = self.page(r, p, q)
            if self.in_grid(p - r, q + r - 1):
                tgt = self.page(r, p - r, q + r - 1)
                D = self.B.total_differential(p + q)
                self._d[key] = src.induced(D.apply, tgt)
            else:
                self._d[key] = AbHom.zero(src.group, FinAb())
        return self._d[key]


@dataclass
class SpectralSequencePages:
    """Pages E_1..E_R (R >= r_max and past the last possible differential).

    ``pages[r][(p, q)]`` and ``differentials[r][(p, q)]``; ``convergence``
    has one row per total degree n: the product of E_∞ orders on the
    anti-diagonal, the order of H_n(Tot), the product at page r_max, and
    flags. ``page_checks`` lists every spot where E_{r+1} is not the
    homology of (E_r, d_r) (empty when consistent).
    """

    pages: dict[int, dict[Pos, FinAb]]
    differentials: dict[int, dict[Pos, AbHom]] = field(repr=False)
    r_max: int
    r_infinity: int
    collapse_page: int
    convergence: list[dict]
    page_checks: list[tuple]
    reliable_through: int
    sequence: ColumnSpectralSequence = field(repr=False, default=None)

    @property
    def e_infinity(self) -> dict[Pos, FinAb]:
        return self.pages[self.r_infinity]

    @property
    def converges(self) -> bool:
        return all(row["match"] for row in self.convergence if row["reliable"])

    def verdict(self) -> str:
        return f"collapses at E_{self.collapse_page}"


def ss_pages(B: Bicomplex, r_max: int = 2) -> SpectralSequencePages:
    ss = ColumnSpectralSequence(B)
    r_inf = ss.r_infinity
    top = max(r_max, r_inf)
    grid = [(p, q) for p in range(B.P + 1) for q in range(B.Q + 1)]
    pages = {r: {pq: ss.group(r, *pq) for pq in grid} for r in range(1, top + 1)}
    diffs = {r: {pq: ss.differential(r, *pq) for pq in grid} for r in range(1, top)}
    checks = []
    for r in range(1, top):
        for (p, q) in grid:
            d_out = diffs[r][(p, q)]
            src = (p + r, q - r + 1)
            d_in = diffs[r][src] if ss.in_grid(*src) else None
            H = homology_at(pages[r][(p, q)], d_in, d_out).group
            if H != pages[r + 1][(p, q)]:
                checks.append((r, p, q, H, pages[r + 1][(p, q)]))
    collapse = 2
    for r in range(top - 1, 1, -1):
        if any(not d.is_zero() for d in diffs[r].values()):
            collapse = r + 1
            break
    tot = total_homology(B)
    conv = []
    for n in range(B.P + B.Q + 1):
        cells = [(p, n - p) for p in B.columns(n)]
        e_inf = prod(pages[r_inf][c].order() for c in cells)
        e_r = prod(pages[r_max][c].order() for c in cells) if r_max >= 1 else None
        h = tot[n].order()
        conv.append({"degree": n, "e_infinity_order": e_inf, "total_order": h,
                     "e_rmax_order": e_r, "match": e_inf == h,
                     "alive_after_rmax": e_r != h, "reliable": n <= B.reliable_through})
    return SpectralSequencePages(pages, diffs, r_max, r_inf, collapse, conv, checks,
                                 B.reliable_through, ss)


# ------------------------------------------------------------------ equivariant complexes

@dataclass
class EquivariantComplex:
    """C_0 <- C_1 <- ... <- C_Q of finite G-modules with equivariant d."""

    modules: tuple[GModule, ...]
    differentials: tuple[AbHom, ...]

    def __post_init__(self):
        self.modules = tuple(self.modules)
        self.differentials = tuple(self.differentials)
        if not self.modules:
            raise ValidationError("a complex needs at least one module")
        if len(self.differentials) != len(self.modules) - 1:
            raise ValidationError("need one differential per positive degree")
        G = self.modules[0].group
        if any(M.group != G for M in self.modules):
            raise GroupMismatch("modules of a complex must share one group")
        ident = identity_quotient(G)
        for q, d in enumerate(self.differentials, start=1):
            try:
                check_equivariant(d, self.modules[q], self.modules[q - 1], ident)
            except NotEquivariant as exc:
                raise NotEquivariant(f"differential d_{q}: {exc}", witness=(q, exc.witness)) \
                    from None
        for q in range(2, len(self.modules)):
            if not (self.differentials[q - 2] @ self.differentials[q - 1]).is_zero():
                raise CompositionNonzero(f"d_{q - 1} d_{q} != 0")

    @property
    def group(self) -> FiniteGroup:
        return self.modules[0].group

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def d(self, q: int) -> AbHom | None:
        return self.differentials[q - 1] if 1 <= q <= self.length else None

    def homology(self, q: int):
        return homology_at(self.modules[q].abgroup, self.d(q + 1), self.d(q))

    def homology_module(self, q: int) -> tuple[GModule, object]:
        """H_q with the induced action, and the subquotient it came from."""
        S = self.homology(q)
        M = self.modules[q]
        action = {g: S.induced(lambda x, g=g: M.act(g, x), S).matrix
                  for g in self.group.generators}
        return make_module(self.group, S.group, action), S


@dataclass
class OrbitInput:
    """A group tower and, per level, an equivariant complex with chain-map transitions.

    ``transitions[i][q]`` maps C_{i+1,q} -> C_{i,q}, equivariant along the
    quotient G/N_{i+1} -> G/N_i and commuting with the differentials.
    """

    groups: GroupTower
    complexes: tuple[EquivariantComplex, ...]
    transitions: tuple[tuple[AbHom, ...], ...]

    def __post_init__(self):
        self.complexes = tuple(self.complexes)
        self.transitions = tuple(tuple(t) for t in self.transitions)
        gt = self.groups
        if len(self.complexes) != gt.depth + 1 or len(self.transitions) != gt.depth:
            raise DepthMismatch(f"group tower depth {gt.depth} does not match "
                                f"{len(self.complexes)} complexes")
        Q = self.complexes[0].length
        for i, C in enumerate(self.complexes):
            if C.group != gt.groups[i]:
                raise GroupMismatch(f"complex at level {i} is not over the level-{i} quotient")
            if C.length != Q:
                raise ValidationError("all levels need complexes of the same length")
        for i, fs in enumerate(self.transitions):
            src, tgt = self.complexes[i + 1], self.complexes[i]
            if len(fs) != Q + 1:
                raise ValidationError(f"transition {i} needs one map per degree")
            for q, f in enumerate(fs):
                try:
                    check_equivariant(f, src.modules[q], tgt.modules[q], gt.maps[i])
                except NotEquivariant as exc:
                    raise NotEquivariant(f"transition {i}, degree {q}: {exc}",
                                         witness=(i, q, exc.witness)) from None
                if q >= 1 and tgt.d(q) @ f != fs[q - 1] @ src.d(q):
                    raise ValidationError(f"transition {i} is not a chain map in degree {q}")

    @property
    def depth(self) -> int:
        return self.groups.depth

    @property
    def length(self) -> int:
        return self.complexes[0].length

    def homology_pair(self, q: int) -> TowerPair:
        """The tower of H_q(C_i) as modules over G/N_i."""
        mods, subs = zip(*(C.homology_module(q) for C in self.complexes))
        maps = []
        for i, fs in enumerate(self.transitions):
            f = fs[q]
            maps.append(subs[i + 1].induced(f, subs[i]))
        return validate_tower_pair(self.groups, ModuleTower(tuple(mods), tuple(maps)))


def em_input(pair: TowerPair) -> OrbitInput:
    """Each A_i as a complex concentrated in degree 0."""
    cs = [EquivariantComplex((M,), ()) for M in pair.modules.modules]
    return OrbitInput(pair.groups, cs, [(f,) for f in pair.modules.maps])


def thicken(inp: OrbitInput, q: int) -> OrbitInput:
    """C ⊕ cone(id: C_q -> C_q), the cone placed in degrees q+1 -> q.

    The inclusion of C is a quasi-isomorphism; the complex grows by one
    degree when q is the top degree.
    """
    if not 0 <= q <= inp.length:
        raise ValueError("thickening degree out of range")
    new_cs = []
    for C in inp.complexes:
        mods = list(C.modules)
        diffs = list(C.differentials)
        if q == C.length:
            zero_mod = make_module(C.group, AbGroup(()))
            mods.append(zero_mod)
            diffs.append(AbHom.zero(zero_mod.abgroup, mods[q].abgroup))
        X = C.modules[q]
        old_q, old_q1 = mods[q], mods[q + 1]
        mods[q] = direct_sum(old_q, X)
        mods[q + 1] = direct_sum(old_q1, X)
        kx = X.ngens
        # d_{q+1}: (C_{q+1} ⊕ X) -> (C_q ⊕ X) is diag(d_{q+1}, id)
        dq1 = diffs[q]
        m = _hom_matrix(dq1)
        top = np.hstack([m, np.zeros((m.shape[0], kx), dtype=object)])
        bot = np.hstack([np.zeros((kx, m.shape[1]), dtype=object), np.eye(kx, dtype=object)])
        diffs[q] = AbHom(mods[q + 1].abgroup, mods[q].abgroup, np.vstack([top, bot]).tolist())
        if q >= 1:
            m = _hom_matrix(diffs[q - 1])
            diffs[q - 1] = AbHom(mods[q].abgroup, mods[q - 1].abgroup,
                                 np.hstack([m, np.zeros((m.shape[0], kx), dtype=object)]).tolist())
        if q + 2 <= len(mods) - 1:
            m = _hom_matrix(diffs[q + 1])
            diffs[q + 1] = AbHom(mods[q + 2].abgroup, mods[q + 1].abgroup,
                                 np.vstack([m, np.zeros((kx, m.shape[1]), dtype=object)]).tolist())
        new_cs.append(EquivariantComplex(tuple(mods), tuple(diffs)))
    new_ts = []
    for i, fs in enumerate(inp.transitions):
        fs = list(fs)
        if q == inp.length:
            fs.append(AbHom.zero(AbGroup(()), AbGroup(())))
        fq = inp.transitions[i][q]
        for deg in (q, q + 1):
            f = fs[deg]
            m = _hom_matrix(f)
            mq = _hom_matrix(fq)
            top = np.hstack([m, np.zeros((m.shape[0], mq.shape[1]), dtype=object)])
            bot = np.hstack([np.zeros((mq.shape[0], m.shape[1]), dtype=object), mq])
            fs[deg] = AbHom(new_cs[i + 1].modules[deg].abgroup, new_cs[i].modules[deg].abgroup,
                            np.vstack([top, bot]).tolist())
        new_ts.append(tuple(fs))
    return OrbitInput(inp.groups, tuple(new_cs), tuple(new_ts))


# ------------------------------------------------------------------ orbit bicomplex

def _level_bicomplex(C: EquivariantComplex, model, P: int) -> Bicomplex:
    entries, dh, dv = {}, {}, {}
    cells = [model.cells(p) for p in range(P + 1)]
    for q, M in enumerate(C.modules):
        for p in range(P + 1):
            entries[(p, q)] = AbGroup(M.abgroup.orders * len(cells[p]))
    for q, M in enumerate(C.modules):
        k = M.ngens
        for p in range(1, P + 1):
            blocks = {key: M.ring_matrix(r) for key, r in model.differential(p).items()}
            mat = _blocks([k] * len(cells[p - 1]), [k] * len(cells[p]), blocks)
            dh[(p, q)] = AbHom(entries[(p, q)], entries[(p - 1, q)], mat, check=False)
        if q >= 1:
            d = _hom_matrix(C.d(q))
            kin = C.modules[q - 1].ngens
            for p in range(P + 1):
                blocks = {(c, c): d * (-1) ** p for c in range(len(cells[p]))}
                mat = _blocks([kin] * len(cells[p]), [k] * len(cells[p]), blocks)
                dv[(p, q)] = AbHom(entries[(p, q)], entries[(p, q - 1)], mat, check=False)
    return Bicomplex(entries, dh, dv, truncated_p=True, truncated_q=False)


@dataclass
class StabilityReport:
    """E_2 entries at depth i* against depth i*-1 (None at depth 0)."""

    depth: int
    compared_with: int | None
    entries: dict[Pos, bool]

    @property
    def stable(self) -> bool | None:
        if self.compared_with is None:
            return None
        return all(self.entries.values())


@dataclass
class OrbitBicomplex:
    bicomplex: Bicomplex
    depth: int
    model: object = field(repr=False)
    stability: StabilityReport | None = None


def _models(inp: OrbitInput, P: int, method: str) -> list:
    out = []
    for i, G in enumerate(inp.groups.groups):
        try:
            out.append(reduced_bar(G, max(P - 1, 0), method))
        except SizeOverflow as exc:
            raise SizeOverflow(exc.size, exc.cap, f"level {i}: {exc.where}") from None
    normalized = {getattr(m, "normalized", True) for m in out}
    if len(normalized) > 1:
        raise ValidationError("levels mix normalized and unnormalized bar models")
    return out


def orbit_bicomplex(inp: OrbitInput, depth: int, P: int, method: str = "auto",
                    cap: int = 10 ** 6) -> OrbitBicomplex:
    """B_{p,q} = C_{i*,q} ⊗ Bar_p(G/N_{i*}) at working depth i* = ``depth``.

    ``method`` selects the model of the bar complex ("unnormalized" is the
    literal A[G^p] of the simplicial replacement). The stability report
    compares E_2 entries with depth i* - 1 for p <= P - 1.
    """
    if not 0 <= depth <= inp.depth:
        raise ValueError(f"depth {depth} outside the tower (0..{inp.depth})")
    models = _models(inp, P, method)
    sizes = [sum(len(models[depth].cells(p)) for p in range(P + 1)) *
             sum(M.ngens for M in inp.complexes[depth].modules)]
    if sizes[0] > cap:
        raise SizeOverflow(sizes[0], cap, f"orbit bicomplex at depth {depth}")
    B = _level_bicomplex(inp.complexes[depth], models[depth], P)
    report = None
    if depth >= 1:
        B0 = _level_bicomplex(inp.complexes[depth - 1], models[depth - 1], P)
        s1, s0 = ColumnSpectralSequence(B), ColumnSpectralSequence(B0)
        entries = {(p, q): s1.group(2, p, q) == s0.group(2, p, q)
                   for p in range(P) for q in range(B.Q + 1)}
        report = StabilityReport(depth, depth - 1, entries)
    else:
        report = StabilityReport(depth, None, {})
    return OrbitBicomplex(B, depth, models[depth], report)


def _level_map(inp: OrbitInput, i: int, models: list, B1: Bicomplex, B0: Bicomplex,
               P: int) -> dict[Pos, AbHom]:
    """The bicomplex map B(level i+1) -> B(level i) induced by the transition.

    Columns 0..P-1 only: column P just supplies boundaries (the model may
    keep a pruned generating set there), and every class this map is
    applied to lives in filtration < P.
    """
    q_map = inp.groups.maps[i]
    src, tgt = inp.complexes[i + 1], inp.complexes[i]
    m1, m0 = models[i + 1], models[i]
    normalized = getattr(m0, "normalized", True)
    out = {}
    for q in range(inp.length + 1):
        Ms, Mt = src.modules[q], tgt.modules[q]
        F = np.array(_hom_matrix(inp.transitions[i][q]), dtype=np.int64).reshape(Mt.ngens, Ms.ngens)
        cs, ct = ModuleCoeffs(Ms), ModuleCoeffs(Mt)
        for p in range(P):
            cols = []
            for cell in m1.cells(p):
                for j in range(Ms.ngens):
                    e = np.zeros(Ms.ngens, dtype=np.int64)
                    e[j] = 1
                    y = m1.lift(p, {cell: e}, cs)
                    z = chain_map_cells(q_map, y, lambda v: (F @ v) % Mt.orders, ct, normalized)
                    w = m0.project(p, z, ct)
                    cols.append(flatten(w, m0.cells(p), Mt.ngens))
            S, T = B1.entries[(p, q)], B0.entries[(p, q)]
            mat = IntMatrix.from_columns(cols, T.ngens) if cols else IntMatrix.zeros(T.ngens, 0)
            out[(p, q)] = AbHom(S, T, mat)
    # a bicomplex map commutes with both differentials
    for (p, q), f in out.items():
        if p >= 1 and out[(p - 1, q)] @ B1.dh[(p, q)] != B0.dh[(p, q)] @ f:
            raise ValidationError(f"level map {i} does not commute with d^h at ({p}, {q})")
        if q >= 1 and out[(p, q - 1)] @ B1.dv[(p, q)] != B0.dv[(p, q)] @ f:
            raise ValidationError(f"level map {i} does not commute with d^v at ({p}, {q})")
    return out


def _total_map(B1: Bicomplex, B0: Bicomplex, phi: dict[Pos, AbHom], n: int) -> IntMatrix:
    _, cols1, _ = B1.total(n)
    _, cols0, _ = B0.total(n)
    rs = [B0.entries[(p, n - p)].ngens for p in cols0]
    cs = [B1.entries[(p, n - p)].ngens for p in cols1]
    # a missing column (the top one) is sent to zero
    blocks = {(cols0.index(p), j): _hom_matrix(phi[(p, n - p)])
              for j, p in enumerate(cols1) if (p, n - p) in phi}
    return _blocks(rs, cs, blocks)


@dataclass
class E2Entry:
    p: int
    q: int
    levels: list[FinAb]            # E_2^{p,q} of the orbit bicomplex, per level
    levels_bar: list[FinAb]        # H_p(G/N_i, H_q(C_i)) through the bar module
    lim: LimResult                 # lim over levels of the E_2 entries
    continuous: LimResult          # continuous homology of the H_q tower
    agree: bool


@dataclass
class OrbitResult:
    """Graded orbit homology with provenance.

    ``lims[n]`` is the limit over the tower of H_n(Tot) at each level;
    ``values[n]`` its certified value (None when the truncation cannot
    certify it). ``e2`` holds the two-way E_2 comparison.
    """

    degrees: list[int]
    lims: list[LimResult]
    levels: list[list[FinAb]]
    e2: list[E2Entry]
    stability: StabilityReport
    reliable_through: int
    P: int
    bicomplexes: list[Bicomplex] = field(repr=False, default_factory=list)

    @property
    def values(self) -> list[FinAb | None]:
        return [L.certified for L in self.lims]

    @property
    def e2_verdict(self) -> str:
        if all(e.agree for e in self.e2):
            return "E2 agrees"
        return "E2 mismatch"


def orbit_homology(inp: OrbitInput, n_max: int, method: str = "auto",
                   window: int = DEFAULT_WINDOW, check_e2: bool = True) -> OrbitResult:
    """Total homology of the orbit bicomplexes in degrees 0..n_max, limited over levels.

    With ``check_e2`` the E_2 page is computed two ways on the reliable
    range p <= n_max: as lim over levels of the spectral-sequence E_2 of
    the bicomplex, and as continuous homology of the tower H_q(C_i); the
    levels are also compared one by one against the bar module. Any
    disagreement raises E2Mismatch.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    P = n_max + 1
    models = _models(inp, P, method)
    Bs = [_level_bicomplex(C, models[i], P) for i, C in enumerate(inp.complexes)]
    phis = [_level_map(inp, i, models, Bs[i + 1], Bs[i], P) for i in range(inp.depth)]
    degrees = list(range(n_max + 1))
    lims, levels = [], []
    for n in degrees:
        subs = [total_homology(B, [n]).subquotients[0] for B in Bs]
        maps = [subs[i + 1].induced(_total_map(Bs[i + 1], Bs[i], phis[i], n).apply, subs[i])
                for i in range(inp.depth)]
        levels.append([S.group for S in subs])
        lims.append(tower_lim(Tower(tuple(S.group for S in subs), tuple(maps)), window))
    sss = [ColumnSpectralSequence(B) for B in Bs]
    e2 = []
    if check_e2:
        for q in range(inp.length + 1):
            pair = inp.homology_pair(q)
            for p in range(P):
                pages = [ss.page(2, p, q) for ss in sss]
                maps = [pages[i + 1].induced(_total_map(Bs[i + 1], Bs[i], phis[i], p + q).apply,
                                             pages[i])
                        for i in range(inp.depth)]
                lim_a = tower_lim(Tower(tuple(E.group for E in pages), tuple(maps)), window)
                lv_bar = [bar_homology(M, p, method).group for M in pair.modules.modules]
                lim_b = continuous_homology(pair, p, window, method).lim
                lv = [E.group for E in pages]
                agree = (lv == lv_bar and lim_a.kind == lim_b.kind
                         and lim_a.certified == lim_b.certified)
                e2.append(E2Entry(p, q, lv, lv_bar, lim_a, lim_b, agree))
                if not agree:
                    raise E2Mismatch(
                        f"E_2^{{{p},{q}}}: bicomplex levels {[str(x) for x in lv]} "
                        f"lim {lim_a.describe()} vs bar levels {[str(x) for x in lv_bar]} "
                        f"lim {lim_b.describe()}")
    top = inp.depth
    if top >= 1:
        ent = {(p, q): sss[top].group(2, p, q) == sss[top - 1].group(2, p, q)
               for p in range(P) for q in range(inp.length + 1)}
        stab = StabilityReport(top, top - 1, ent)
    else:
        stab = StabilityReport(top, None, {})
    return OrbitResult(degrees, lims, levels, e2, stab, P - 1, P, Bs)


@dataclass
class EMOrbitResult:
    orbit: OrbitResult
    continuous: list
    collapse_page: int

    @property
    def values(self) -> list[FinAb | None]:
        return self.orbit.values


def em_orbit_homology(gt: GroupTower, mt: ModuleTower, n_max: int, method: str = "auto",
                      window: int = DEFAULT_WINDOW) -> EMOrbitResult:
    """Orbit homology of the Eilenberg-Mac Lane input, checked against H^c.

    The one-row bicomplex must collapse at E_2 and its limit must equal
    continuous homology degree by degree; CollapseViolation otherwise.
    """
    pair = validate_tower_pair(gt, mt)
    res = orbit_homology(em_input(pair), n_max, method, window)
    ss = ss_pages(res.bicomplexes[-1], r_max=2)
    if ss.collapse_page != 2:
        raise CollapseViolation(f"one-row spectral sequence has a nonzero d_r "
                                f"(collapses only at E_{ss.collapse_page})")
    conts = []
    for n in res.degrees:
        ch = continuous_homology(pair, n, window, method)
        conts.append(ch)
        a, b = res.lims[n], ch.lim
        if a.kind != b.kind or a.certified != b.certified:
            raise CollapseViolation(f"degree {n}: orbit homology {a.describe()} but "
                                    f"continuous homology {b.describe()}")
    return EMOrbitResult(res, conts, ss.collapse_page)
