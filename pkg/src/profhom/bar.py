"""Group homology through the bar complex A[G^•].

The degree-l term is a direct sum of copies of A indexed by G^l. On the
summand of (g_1, ..., g_l) the faces are: d_0 drops g_1, the inner d_j
multiply g_j g_{j+1}, and d_l acts by g_l and drops it. The Moore
differential is the alternating sum.

``bar_complex`` builds this complex literally (dense integer matrices, for
small inputs and cross-checks). ``bar_homology`` computes on an exact
reduction of the normalized complex (see ``reduction``) and carries the
maps needed to lift homology classes back to honest bar chains.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .abelian import (AbGroup, AbHom, FinAb, Subquotient, homology_at, preimage,
                      subquotient)
from .errors import CompositionNonzero, NotCyclic, SizeOverflow
from .gmod import GModule, check_equivariant
from .groups import DEFAULT_POWER_CAP, QuotientMap
from .matrix import IntMatrix
from .reduction import LiteralBar, ModuleCoeffs, chain_map_cells, reduced_bar


@dataclass
class ChainComplex:
    """C_0 <- C_1 <- ... <- C_L; ``differentials[l-1]`` is d_l: C_l -> C_{l-1}.

    d∘d = 0 is verified on construction.
    """

    groups: list[AbGroup]
    differentials: list[AbHom]

    def __post_init__(self):
        if len(self.differentials) != max(len(self.groups) - 1, 0):
            raise ValueError("need one differential per positive degree")
        for l, d in enumerate(self.differentials, start=1):
            if d.source.orders != self.groups[l].orders or \
                    d.target.orders != self.groups[l - 1].orders:
                raise ValueError(f"d_{l} does not connect C_{l} -> C_{l - 1}")
        for l in range(2, len(self.groups)):
            if not (self.differentials[l - 2] @ self.differentials[l - 1]).is_zero():
                raise CompositionNonzero(f"d_{l - 1} ∘ d_{l} != 0")

    @property
    def length(self) -> int:
        return len(self.groups) - 1

    def d(self, l: int) -> AbHom | None:
        if 1 <= l <= self.length:
            return self.differentials[l - 1]
        return None

    def homology(self, l: int) -> Subquotient:
        """H_l; the top degree L is computed as ker d_L (truncation artifact)."""
        return homology_at(self.groups[l], self.d(l + 1), self.d(l))


def _block_matrix(nrows: int, ncols: int, k: int, blocks: dict) -> IntMatrix:
    data = [[0] * (ncols * k) for _ in range(nrows * k)]
    for (i, j), B in blocks.items():
        for a in range(k):
            row = data[i * k + a]
            for b in range(k):
                row[j * k + b] += int(B[a, b])
    return IntMatrix(data, nrows * k, ncols * k)


def tensor_complex(M: GModule, model, top: int) -> ChainComplex:
    """M ⊗_G (a model of Bar(G)) in degrees 0..top."""
    k = M.ngens
    cells = [model.cells(l) for l in range(top + 1)]
    groups = [AbGroup(M.abgroup.orders * len(cs)) for cs in cells]
    diffs = []
    for l in range(1, top + 1):
        blocks = {key: M.ring_matrix(r) for key, r in model.differential(l).items()}
        mat = _block_matrix(len(cells[l - 1]), len(cells[l]), k, blocks)
        diffs.append(AbHom(groups[l], groups[l - 1], mat, check=False))
    return ChainComplex(groups, diffs)


def bar_complex(M: GModule, L: int, normalized: bool = False,
                cap: int = DEFAULT_POWER_CAP) -> ChainComplex:
    """The Moore complex of A[G^•] truncated at degree L, as integer matrices.

    ``normalized=True`` quotients out degenerate summands (an entry equal to
    the identity). Raises SizeOverflow when |G|^L times the number of
    generators of A exceeds ``cap``.
    """
    G = M.group
    size = G.order ** L * max(M.ngens, 1)
    if size > cap:
        raise SizeOverflow(size, cap, f"bar complex up to degree {L}")
    return tensor_complex(M, LiteralBar(G, normalized, cap), L)


def reduced_complex(M: GModule, top: int, method: str = "auto"):
    """M tensored with a model of Bar(G), degrees 0..top, and the model."""
    red = reduced_bar(M.group, top - 1 if top > 0 else 0, method)
    return tensor_complex(M, red, top), red


def flatten(chain: dict, cells: Sequence, k: int) -> list[int]:
    index = {c: i for i, c in enumerate(cells)}
    v = [0] * (len(cells) * k)
    for c, x in chain.items():
        i = index[c]
        v[i * k:(i + 1) * k] = [int(a) for a in x]
    return v


def unflatten(v: Sequence[int], cells: Sequence, k: int) -> dict:
    out = {}
    for i, c in enumerate(cells):
        x = np.array(v[i * k:(i + 1) * k], dtype=np.int64)
        if x.any():
            out[c] = x
    return out


@dataclass
class BarHomology:
    """H_p(G, M) with lifts to normalized bar chains.

    ``subquotient`` lives in the reduced complex; ``lift(j)`` returns the
    j-th canonical generator as a cycle on normalized cells, and
    ``express`` reads off canonical coordinates of a normalized cycle.
    """

    module: GModule
    degree: int
    subquotient: Subquotient
    reduction: object = field(repr=False)

    @property
    def group(self) -> FinAb:
        return self.subquotient.group

    def _coeffs(self) -> ModuleCoeffs:
        return ModuleCoeffs(self.module)

    def lift(self, j: int) -> dict:
        p, k = self.degree, self.module.ngens
        cells = self.reduction.cells(p)
        chain = unflatten(self.subquotient.lifts[j], cells, k)
        chain = {c: x % self.module.orders for c, x in chain.items()}
        chain = {c: x for c, x in chain.items() if x.any()}
        return self.reduction.lift(p, chain, self._coeffs())

    def express(self, chain: dict) -> list[int]:
        p, k = self.degree, self.module.ngens
        red = self.reduction.project(p, chain, self._coeffs())
        return self.subquotient.express(flatten(red, self.reduction.cells(p), k))


_HOMOLOGY_CACHE: dict = {}


def bar_homology(M: GModule, p: int, method: str = "auto") -> BarHomology:
    key = (M.group.table, M.abgroup.orders, M.action, p, method)
    hit = _HOMOLOGY_CACHE.get(key)
    if hit is not None and hit.module == M:
        return hit
    C, red = reduced_complex(M, p + 1, method)
    res = BarHomology(M, p, C.homology(p), red)
    _HOMOLOGY_CACHE[key] = res
    return res


def group_homology(M: GModule, p: int, method: str = "auto") -> FinAb:
    """H_p(G, A) computed from the bar complex."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    return bar_homology(M, p, method).group


def cyclic_homology_oracle(M: GModule, p: int, generator: int | None = None) -> FinAb:
    """H_p of a cyclic group from the periodic resolution.

    With T = g - 1 and N = 1 + g + ... + g^(n-1): H_0 = A/TA,
    H_odd = ker T / NA, H_even = ker N / TA.
    """
    G = M.group
    g = generator if generator is not None else G.cyclic_generator
    if g is None or G.element_order(g) != G.order:
        raise NotCyclic("module group is not cyclic (or generator has wrong order)")
    A = M.abgroup
    k, n = A.ngens, G.order
    ident = IntMatrix.identity(k)
    T = M.action[g] - ident
    N = IntMatrix.zeros(k, k)
    x = 0
    for _ in range(n):
        N = N + M.action[x]
        x = G.mul(x, g)
    rels = A.relations()
    unit = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    if p == 0:
        return subquotient(unit, T.columns() + rels, k).group
    if p % 2:
        num, den = preimage(T, rels), N.columns()
    else:
        num, den = preimage(N, rels), T.columns()
    return subquotient(num + rels, den + rels, k).group


def induced_homology_map(q: QuotientMap, f: AbHom, source: GModule, target: GModule,
                         p: int, method: str = "auto") -> AbHom:
    """H_p(q.source, source) -> H_p(q.target, target) induced by (q, f).

    The chain map sends the summand of (g_1, ..., g_l) into the summand of
    (q(g_1), ..., q(g_l)) through f. Equivariance f(g·a) = q(g)·f(a) is
    verified first.
    """
    check_equivariant(f, source, target, q)
    Hs = bar_homology(source, p, method)
    Ht = bar_homology(target, p, method)
    F = np.array(f.matrix.tolist(), dtype=np.int64).reshape(target.ngens, source.ngens)
    tc = ModuleCoeffs(target)
    cols = []
    for j in range(Hs.group.ngens):
        z = Hs.lift(j)
        img = chain_map_cells(q, z, lambda v: (F @ v) % target.orders, tc,
                              getattr(Hs.reduction, "normalized", True))
        cols.append(Ht.express(img))
    mat = IntMatrix.from_columns(cols, Ht.group.ngens) if cols else \
        IntMatrix.zeros(Ht.group.ngens, 0)
    return AbHom(Hs.group, Ht.group, mat)
