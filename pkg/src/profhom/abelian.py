"""Finitely generated abelian groups, homomorphisms and subquotients.

Groups are presented on generators with diagonal relations: ``AbGroup(orders)``
is the direct sum of Z/orders[j] (order 0 meaning a copy of Z). ``FinAb`` is
the canonical invariant-factor form used for every reported result.
Subgroups are lattices in the free group on the generators, and every
subquotient keeps explicit generator lifts so maps can be induced on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Callable, Sequence

from .errors import CompositionNonzero, NotWellDefined
from .matrix import IntMatrix
from .primary import FiniteSubquotient, finite_preimage
from .smith import snf

Vector = list[int]


class AbGroup:
    """Direct sum of cyclic groups Z/orders[j]; order 0 is infinite cyclic."""

    __slots__ = ("orders",)

    def __init__(self, orders: Sequence[int] = ()):
        orders = tuple(int(o) for o in orders)
        if any(o < 0 for o in orders):
            raise ValueError(f"negative generator order in {orders}")
        self.orders = orders

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def is_finite(self) -> bool:
        return all(o > 0 for o in self.orders)

    def order(self) -> int | None:
        """Number of elements, or None if the group is infinite."""
        return prod(self.orders) if self.is_finite() else None

    def relations(self) -> list[Vector]:
        rels = []
        for j, o in enumerate(self.orders):
            if o > 0:
                v = [0] * self.ngens
                v[j] = o
                rels.append(v)
        return rels

    def reduce(self, v: Sequence[int]) -> Vector:
        return [x % o if o else x for x, o in zip(v, self.orders)]

    def is_zero_element(self, v: Sequence[int]) -> bool:
        return all((x % o == 0) if o else x == 0 for x, o in zip(v, self.orders))

    def canonical(self) -> FinAb:
        return FinAb.from_orders(self.orders)

    def elements(self):
        """Iterate over all elements (finite groups only), lexicographically."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        from itertools import product
        return (list(t) for t in product(*(range(o) for o in self.orders)))

    def __add__(self, other: AbGroup) -> AbGroup:
        return AbGroup(self.orders + other.orders)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbGroup):
            return NotImplemented
        return self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    def __repr__(self) -> str:
        return f"AbGroup({list(self.orders)})"


class FinAb(AbGroup):
    """Canonical invariant-factor form d_1 | d_2 | ... | d_k, no d_j = 1.

    Zeros (free summands) come last since every integer divides 0.
    Two FinAb values are isomorphic iff they are equal.
    """

    __slots__ = ()

    def __init__(self, invariant_factors: Sequence[int] = ()):
        super().__init__(invariant_factors)
        fs = self.orders
        if any(d == 1 for d in fs):
            raise ValueError(f"invariant factor 1 stored in {fs}")
        for a, b in zip(fs, fs[1:]):
            if a == 0 and b != 0 or (a != 0 and b % a != 0):
                raise ValueError(f"divisibility chain broken in {fs}")

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.orders

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FinAb:
        orders = [int(o) for o in orders]
        res = snf([[o if i == j else 0 for j in range(len(orders))]
                   for i, o in enumerate(orders)], len(orders), len(orders),
                  want_u=False, want_v=False)
        free = len(orders) - res.rank
        return cls([d for d in res.diagonal if d != 1] + [0] * free)

    @classmethod
    def trivial(cls) -> FinAb:
        return cls(())

    @classmethod
    def cyclic(cls, n: int) -> FinAb:
        return cls(() if n == 1 else (n,))

    def rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    def torsion_order(self) -> int:
        return prod(d for d in self.orders if d)

    def is_trivial(self) -> bool:
        return not self.orders

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.orders)

    def __repr__(self) -> str:
        return f"FinAb({list(self.orders)})"


class AbHom:
    """Homomorphism given by an integer matrix on generators.

    Column j is the image of source generator j. Construction checks that
    relations of the source land in the relations of the target.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: AbGroup, target: AbGroup, matrix: IntMatrix | Sequence,
                 check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, target.ngens, source.ngens)
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit "
                             f"{source} -> {target}")
        self.source, self.target = source, target
        # store reduced modulo the target so equal maps compare equal
        cols = [target.reduce(matrix.column(j)) for j in range(matrix.cols)]
        self.matrix = IntMatrix.from_columns(cols, target.ngens)
        if check:
            for j, o in enumerate(source.orders):
                if o and not target.is_zero_element([o * x for x in cols[j]]):
                    raise NotWellDefined(
                        f"generator {j} of order {o} maps to {cols[j]}, "
                        f"whose {o}-multiple is nonzero in {target}")

    @classmethod
    def zero(cls, source: AbGroup, target: AbGroup) -> AbHom:
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens), check=False)

    @classmethod
    def identity(cls, group: AbGroup) -> AbHom:
        return cls(group, group, IntMatrix.identity(group.ngens), check=False)

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.target.reduce(self.matrix.apply(list(v)))

    def __matmul__(self, other: AbHom) -> AbHom:
        """Composition ``self ∘ other``."""
        if other.target.orders != self.source.orders:
            raise ValueError("composition of incompatible maps")
        return AbHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(self.matrix.column(j))
                   for j in range(self.matrix.cols))

    def kernel(self) -> Subquotient:
        return kernel(self)

    def cokernel(self) -> Subquotient:
        return cokernel(self)

    def is_injective(self) -> bool:
        return kernel(self).group.is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self).group.is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __repr__(self) -> str:
        return f"AbHom({self.source!r} -> {self.target!r}, {self.matrix.tolist()})"


# ---------------------------------------------------------------- lattices

class Lattice:
    """The subgroup of Z^dim spanned by ``gens``, with a coordinate solver."""

    def __init__(self, gens: Sequence[Sequence[int]], dim: int):
        self.dim = dim
        gens = [list(g) for g in gens if any(g)]
        a = [[g[i] for g in gens] for i in range(dim)]
        res = snf(a, dim, len(gens), want_u=True, want_v=False, want_uinv=True)
        self._U = res.U
        self._d = res.diagonal
        r = res.rank
        Ui = res.Uinv
        self.basis: list[Vector] = [[Ui[k][i] * self._d[i] for k in range(dim)]
                                    for i in range(r)]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, x: Sequence[int]) -> Vector | None:
        """Coordinates of x in ``basis``, or None when x is not in the lattice."""
        y = [sum(u * v for u, v in zip(row, x) if u) for row in self._U]
        r = self.rank
        if any(y[i] for i in range(r, self.dim)):
            return None
        out = []
        for i in range(r):
            q, rem = divmod(y[i], self._d[i])
            if rem:
                return None
            out.append(q)
        return out

    def __contains__(self, x: Sequence[int]) -> bool:
        return self.coords(x) is not None

    def contains_lattice(self, other: Lattice) -> bool:
        return all(b in self for b in other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.contains_lattice(other) and \
            other.contains_lattice(self)

    __hash__ = None


def kernel_vectors(rows: list[list[int]], ncols: int) -> list[Vector]:
    """A Z-basis of {x in Z^ncols : rows @ x = 0}."""
    m = len(rows)
    res = snf([list(r) for r in rows], m, ncols, want_u=False, want_v=True)
    V = res.V
    return [[V[i][j] for i in range(ncols)] for j in range(res.rank, ncols)]


def preimage(matrix: IntMatrix, sub_gens: Sequence[Sequence[int]]) -> list[Vector]:
    """Generators of {x : matrix @ x in span(sub_gens)}."""
    m, n = matrix.shape
    sub_gens = [list(g) for g in sub_gens if any(g)]
    rows = [list(matrix.row(i)) + [-g[i] for g in sub_gens] for i in range(m)]
    return [v[:n] for v in kernel_vectors(rows, n + len(sub_gens))]


@dataclass
class Subquotient:
    """Z / B for lattices B ⊆ Z ⊆ Z^dim, in canonical form with lifts.

    ``lifts[k]`` is a vector of Z representing the k-th canonical generator
    of ``group``; ``express`` maps elements of Z to canonical coordinates.
    """

    group: FinAb
    lifts: list[Vector]
    dim: int
    _zlat: Lattice = field(repr=False)
    _U2: list[list[int]] = field(repr=False)
    _keep: list[int] = field(repr=False)

    def express(self, x: Sequence[int]) -> Vector:
        c = self._zlat.coords(x)
        if c is None:
            raise ValueError("element does not lie in the numerator subgroup")
        full = [sum(u * v for u, v in zip(row, c) if u) for row in self._U2]
        out = []
        for k, j in enumerate(self._keep):
            o = self.group.orders[k]
            out.append(full[j] % o if o else full[j])
        return out

    def contains(self, x: Sequence[int]) -> bool:
        return x in self._zlat

    def is_zero_class(self, x: Sequence[int]) -> bool:
        return not any(self.express(x))

    def induced(self, fn: Callable[[Vector], Sequence[int]], target: Subquotient) -> AbHom:
        """The map on subquotients induced by a vector map ``fn``."""
        cols = [target.express(fn(list(v))) for v in self.lifts]
        mat = IntMatrix.from_columns(cols, target.group.ngens) if cols else \
            IntMatrix.zeros(target.group.ngens, 0)
        return AbHom(self.group, target.group, mat)


def subquotient(numerator: Sequence[Sequence[int]], denominator: Sequence[Sequence[int]],
                dim: int) -> Subquotient:
    """Canonical form of span(numerator) / span(denominator).

    The denominator must lie inside the numerator's span (it is *not*
    automatically added); ValueError otherwise.
    """
    zlat = Lattice(list(numerator) + [list(b) for b in denominator], dim)
    r = zlat.rank
    ycols = []
    for b in denominator:
        c = zlat.coords(b)
        if c is None:
            raise ValueError("denominator not contained in numerator")
        if any(c):
            ycols.append(c)
    a = [[c[i] for c in ycols] for i in range(r)]
    res = snf(a, r, len(ycols), want_u=True, want_v=False, want_uinv=True)
    orders = [res.diagonal[j] if j < res.rank else 0 for j in range(r)]
    keep = [j for j in range(r) if orders[j] != 1]
    Ui = res.Uinv
    lifts = []
    for j in keep:
        v = [0] * dim
        for i in range(r):
            c = Ui[i][j]
            if c:
                bi = zlat.basis[i]
                for k in range(dim):
                    if bi[k]:
                        v[k] += c * bi[k]
        lifts.append(v)
    group = FinAb([orders[j] for j in keep])
    return Subquotient(group, lifts, dim, zlat, res.U, keep)


def _image_gens(f: AbHom) -> list[Vector]:
    return [list(f.matrix.column(j)) for j in range(f.matrix.cols)]


def _unit(n: int) -> list[Vector]:
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def kernel(f: AbHom) -> Subquotient | FiniteSubquotient:
    A = f.source
    if A.is_finite():
        return FiniteSubquotient(A.orders, finite_preimage(f.matrix, A.orders, f.target.orders), [])
    z = preimage(f.matrix, f.target.relations())
    return subquotient(z, A.relations(), A.ngens)


def cokernel(f: AbHom) -> Subquotient | FiniteSubquotient:
    B = f.target
    if B.is_finite():
        return FiniteSubquotient(B.orders, _unit(B.ngens), _image_gens(f))
    return subquotient(_unit(B.ngens), _image_gens(f) + B.relations(), B.ngens)


def image(f: AbHom) -> Subquotient | FiniteSubquotient:
    B = f.target
    if B.is_finite():
        return FiniteSubquotient(B.orders, _image_gens(f), [])
    return subquotient(_image_gens(f) + B.relations(), B.relations(), B.ngens)


def homology_at(A: AbGroup, d_in: AbHom | None, d_out: AbHom | None
                ) -> Subquotient | FiniteSubquotient:
    """ker(d_out) / im(d_in) inside A; a missing map is treated as zero.

    Finite A goes through the prime-by-prime engine, anything else through
    integer Smith forms.
    """
    if d_out is not None and d_out.source.orders != A.orders:
        raise ValueError("outgoing map does not start at the middle group")
    if d_in is not None and d_in.target.orders != A.orders:
        raise ValueError("incoming map does not end at the middle group")
    den = _image_gens(d_in) if d_in is not None else []
    if A.is_finite():
        z = finite_preimage(d_out.matrix, A.orders, d_out.target.orders) \
            if d_out is not None else _unit(A.ngens)
        return FiniteSubquotient(A.orders, z, den)
    if d_out is not None:
        z = preimage(d_out.matrix, d_out.target.relations())
    else:
        z = _unit(A.ngens)
    return subquotient(z, den + A.relations(), A.ngens)


def complex_homology(d_in: AbHom, d_out: AbHom) -> Subquotient:
    """Homology of B --d_in--> A --d_out--> C at A, with generator lifts.

    Raises CompositionNonzero when d_out ∘ d_in != 0.
    """
    if d_in.target.orders != d_out.source.orders:
        raise ValueError("maps are not composable")
    if not (d_out @ d_in).is_zero():
        raise CompositionNonzero("d_out ∘ d_in is not the zero map")
    return homology_at(d_in.target, d_in, d_out)
