"""Finite modules over finite groups (left actions)."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .abelian import AbGroup, AbHom, FinAb, kernel, subquotient, Subquotient
from .errors import (ActionNotHomomorphic, ActionNotInvertible, GroupMismatch,
                     ModuleNotFinite, NotEquivariant, ValidationError)
from .groups import FiniteGroup, QuotientMap
from .matrix import IntMatrix
from .towers import Tower


class GModule:
    """A finite abelian group A with a left action of a finite group G.

    ``action[g]`` is the matrix of g on the generators of A (column j =
    image of generator j). A is any finite presentation ⊕ Z/o_j, not
    necessarily in invariant-factor form, so direct sums need no
    re-basing. Built and validated by ``make_module``.
    """

    def __init__(self, group: FiniteGroup, abgroup: AbGroup, action: Sequence[IntMatrix],
                 name: str | None = None):
        self.group = group
        self.abgroup = abgroup
        self.action = tuple(action)
        self.name = name
        self.orders = np.array(abgroup.orders, dtype=np.int64)
        k = abgroup.ngens
        self._np = np.array([np.array(m.tolist(), dtype=np.int64).reshape(k, k)
                             for m in self.action]).reshape(group.order, k, k)

    @property
    def ngens(self) -> int:
        return self.abgroup.ngens

    @property
    def order(self) -> int:
        return self.abgroup.order()

    def matrix_np(self, g: int) -> np.ndarray:
        return self._np[g]

    def act(self, g: int, v: Sequence[int]) -> list[int]:
        return self.abgroup.reduce(self.action[g].apply(list(v)))

    def act_ring(self, r: Mapping[int, int], v: np.ndarray) -> np.ndarray:
        """Apply a group-ring element sum_g c_g g to a vector."""
        out = np.zeros(self.ngens, dtype=np.int64)
        for g, c in r.items():
            out += c * (self._np[g] @ v)
        return out % self.orders if self.ngens else out

    def ring_matrix(self, r: Mapping[int, int]) -> np.ndarray:
        k = self.ngens
        out = np.zeros((k, k), dtype=np.int64)
        for g, c in r.items():
            out += c * self._np[g]
        return out

    def is_trivial(self) -> bool:
        ident = IntMatrix.identity(self.ngens)
        return all(m == ident for m in self.action)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GModule):
            return NotImplemented
        return (self.group == other.group and self.abgroup == other.abgroup
                and self.action == other.action)

    def __hash__(self) -> int:
        return hash((self.abgroup, self.action))

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<GModule{tag} {self.abgroup} over group of order {self.group.order}>"


def _as_matrix(m, k: int) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m, k, k)


def _finite_group(A: AbGroup | Sequence[int]) -> AbGroup:
    if not isinstance(A, AbGroup):
        A = AbGroup(A)
    if not A.is_finite():
        raise ModuleNotFinite(f"coefficient group {A} is infinite")
    return A


def make_module(G: FiniteGroup, A: AbGroup | Sequence[int],
                action: Mapping[int, Sequence[Sequence[int]] | IntMatrix] | None = None,
                name: str | None = None) -> GModule:
    """Extend generator images to an action of all of G and validate it.

    ``action`` maps group elements (a generating set; missing entries mean
    trivial action on G's own generators) to matrices on A's generators.
    """
    A = _finite_group(A)
    k = A.ngens
    ident = IntMatrix.identity(k)
    given = {int(g): _as_matrix(m, k) for g, m in (action or {}).items()}
    gens = list(given) if given else list(G.generators)
    for g in G.generators:
        if g not in given and len(G.generated(gens)) < G.order:
            gens.append(g)
    for g in gens:
        given.setdefault(g, ident)
    if len(G.generated(gens)) != G.order:
        raise ValidationError(f"action given on {sorted(given)}, which do not generate G")
    for g in sorted(given):
        f = AbHom(A, A, given[g])   # raises NotWellDefined on bad matrices
        if not kernel(f).group.is_trivial():
            raise ActionNotInvertible(g)

    mats: dict[int, IntMatrix] = {0: ident}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in mats:
                    mats[y] = AbHom(A, A, mats[x] @ given[g], check=False).matrix
                    nxt.append(y)
        frontier = nxt
    action_list = [mats[g] for g in range(G.order)]
    M = GModule(G, A, action_list, name)
    _check_action(M)
    return M


def _check_action(M: GModule) -> None:
    G, orders = M.group, M.orders
    k = M.ngens
    if k == 0:
        return
    if not (M._np[0] % orders[:, None] == np.eye(k, dtype=np.int64) % orders[:, None]).all():
        raise ActionNotHomomorphic(0, 0)
    for g in range(G.order):
        prod = np.einsum("ij,hjk->hik", M._np[g], M._np) % orders[:, None]
        target = M._np[list(G.table[g])] % orders[:, None]
        bad = np.nonzero((prod != target).any(axis=(1, 2)))[0]
        if len(bad):
            raise ActionNotHomomorphic(g, int(bad[0]))


def trivial_module(G: FiniteGroup, A: AbGroup | Sequence[int],
                   name: str | None = None) -> GModule:
    A = _finite_group(A)
    ident = IntMatrix.identity(A.ngens)
    return GModule(G, A, [ident] * G.order, name)


def coinvariants_subquotient(M: GModule) -> Subquotient:
    A = M.abgroup
    k = A.ngens
    den = A.relations()
    for g in M.group.generators:
        mat = M.action[g]
        for j in range(k):
            col = list(mat.column(j))
            col[j] -= 1
            den.append(col)
    unit = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    return subquotient(unit, den, k)


def coinvariants(M: GModule) -> FinAb:
    """A / <a - g·a>."""
    return coinvariants_subquotient(M).group


def restrict_along(q: QuotientMap, M: GModule) -> GModule:
    """Inflate M (over q.target) to a module over q.source."""
    if M.group != q.target:
        raise GroupMismatch("module group is not the target of the quotient map")
    return GModule(q.source, M.abgroup, [M.action[q(g)] for g in range(q.source.order)], M.name)


def check_equivariant(f: AbHom, source: GModule, target: GModule, q: QuotientMap) -> None:
    """Verify f(g·a) = q(g)·f(a) on all group elements and generators of A."""
    if q.source != source.group or q.target != target.group:
        raise GroupMismatch("quotient map does not connect the module groups")
    if f.source.orders != source.abgroup.orders or f.target.orders != target.abgroup.orders:
        raise GroupMismatch("map does not connect the underlying abelian groups")
    F = f.matrix
    for g in range(source.group.order):
        lhs = AbHom(source.abgroup, target.abgroup, F @ source.action[g], check=False)
        rhs = AbHom(source.abgroup, target.abgroup, target.action[q(g)] @ F, check=False)
        if lhs != rhs:
            j = next(j for j in range(F.cols)
                     if lhs.matrix.column(j) != rhs.matrix.column(j))
            raise NotEquivariant(f"f(g·a) != q(g)·f(a) for g = {g}, generator {j}",
                                 witness=(g, j))


class ModuleTower(Tower):
    """Tower of GModules A_0 <- A_1 <- ...; ``maps[i]`` are AbHoms A_{i+1} -> A_i.

    Equivariance along a group tower is checked by
    ``profinite.validate_tower_pair``.
    """

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.objects:
            raise ValidationError("a tower needs at least one object")
        if len(self.maps) != len(self.objects) - 1:
            raise ValidationError("module tower needs one map per consecutive pair")
        for i, f in enumerate(self.maps):
            if f.source.orders != self.objects[i + 1].abgroup.orders or \
                    f.target.orders != self.objects[i].abgroup.orders:
                raise ValidationError(f"transition {i} does not connect levels {i + 1} -> {i}")

    @property
    def modules(self) -> tuple[GModule, ...]:
        return self.objects


def constant_module_tower(modules: Sequence[GModule]) -> ModuleTower:
    """Identity transitions between modules sharing one abelian group."""
    maps = [AbHom.identity(modules[i].abgroup) for i in range(len(modules) - 1)]
    return ModuleTower(tuple(modules), tuple(maps))


def direct_sum(M: GModule, N: GModule) -> GModule:
    """M ⊕ N with generators of M first."""
    if M.group != N.group:
        raise GroupMismatch("direct sum of modules over different groups")
    A = M.abgroup + N.abgroup
    mats = []
    for g in range(M.group.order):
        a, b = M.action[g], N.action[g]
        mats.append(IntMatrix.hstack(
            IntMatrix.vstack(a, IntMatrix.zeros(b.rows, a.cols)),
            IntMatrix.vstack(IntMatrix.zeros(a.rows, b.cols), b)))
    return GModule(M.group, A, mats)
