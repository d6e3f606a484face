"""Finite groups as multiplication tables, quotient maps and towers of quotients."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (NoIdentity, NoInverse, NotAssociative, NotHomomorphism, NotNormal,
                     NotSubgroup, NotSurjective, SizeOverflow, ValidationError)
from .towers import Tower

DEFAULT_POWER_CAP = 10 ** 6


class FiniteGroup:
    """A finite group on elements 0..n-1 with 0 the identity.

    ``table[a][b]`` is the index of a*b. Validation happens in ``make_group``;
    the constructor trusts its input.
    """

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int] | None = None,
                 labels: Sequence[str] | None = None, name: str | None = None):
        self._table = np.asarray(table, dtype=np.int64)
        self.order = int(self._table.shape[0])
        self.table = tuple(tuple(int(x) for x in row) for row in self._table)
        inv = [0] * self.order
        for a in range(self.order):
            inv[a] = self.table[a].index(0)
        self.inverses = tuple(inv)
        self.generators = tuple(generators) if generators is not None else self._greedy_generators()
        self.labels = tuple(labels) if labels is not None else None
        self.name = name

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k % self.element_order(a)):
            x = self.table[x][a]
        return x

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens``."""
        gens = list(gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def _greedy_generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        span = frozenset({0})
        while len(span) < self.order:
            # prefer elements of largest order, then smallest index
            best = min((a for a in range(self.order) if a not in span),
                       key=lambda a: (-self.element_order(a), a))
            gens.append(best)
            span = self.generated(gens)
        return tuple(gens)

    @cached_property
    def cyclic_generator(self) -> int | None:
        """Smallest-index element generating the group, or None if not cyclic."""
        for a in range(self.order):
            if self.element_order(a) == self.order:
                return a
        return None

    def is_cyclic(self) -> bool:
        return self.cyclic_generator is not None

    def is_abelian(self) -> bool:
        return bool((self._table == self._table.T).all())

    def words(self) -> dict[int, tuple[int, ...]]:
        """A shortest word in ``generators`` for every element (BFS order)."""
        words = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.table[x][g]
                    if y not in words:
                        words[y] = words[x] + (g,)
                        nxt.append(y)
            frontier = nxt
        return words

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{tag} of order {self.order}>"


def make_group(table: Sequence[Sequence[int]], generators: Sequence[int] | None = None,
               labels: Sequence[str] | None = None, name: str | None = None) -> FiniteGroup:
    """Validate a multiplication table and build the group.

    Checks, in order: shape, identity, inverses, associativity. The first
    violated axiom is raised with witnesses.
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise ValidationError(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise ValidationError(f"table entries must lie in 0..{n - 1}")
    ar = np.arange(n)
    if not ((t[0] == ar).all() and (t[:, 0] == ar).all()):
        raise NoIdentity()
    for a in range(n):
        right = np.nonzero(t[a] == 0)[0]
        if len(right) == 0 or t[right[0], a] != 0:
            raise NoInverse(a)
    left = t[t[:, :, None], ar[None, None, :]]      # (a*b)*c
    right = t[ar[:, None, None], t[None, :, :]]     # a*(b*c)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise NotAssociative(a, b, c)
    if generators is not None:
        g = FiniteGroup(t, (), labels, name)
        if len(g.generated(generators)) != n:
            raise ValidationError(f"elements {list(generators)} do not generate the group")
    return FiniteGroup(t, generators, labels, name)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)],
                       generators=(1,) if n > 1 else (), name=f"Z/{n}")


def group_from_permutations(gens: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
    """Close permutation generators (images of 0..m-1) into a table.

    Elements are indexed in lexicographic order of their image tuples, so
    the identity is 0. Composition is (p*q)(x) = p(q(x)).
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        return FiniteGroup([[0]], (), name=name)
    m = len(gens[0])
    for g in gens:
        if len(g) != m or sorted(g) != list(range(m)):
            raise ValidationError(f"{list(g)} is not a permutation of 0..{m - 1}")
    ident = tuple(range(m))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[x]] for x in range(m))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(seen)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[q[x]] for x in range(m))] for q in elems] for p in elems]
    return FiniteGroup(table, tuple(index[g] for g in gens), name=name)


def symmetric_group(m: int) -> FiniteGroup:
    if m <= 1:
        return FiniteGroup([[0]], (), name=f"S{m}")
    gens = [tuple([1, 0] + list(range(2, m))), tuple(list(range(1, m)) + [0])]
    return group_from_permutations(gens, name=f"S{m}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n (n >= 3)."""
    rot = tuple((x + 1) % n for x in range(n))
    ref = tuple((-x) % n for x in range(n))
    return group_from_permutations([rot, ref], name=f"D{2 * n}")


def quaternion_group() -> FiniteGroup:
    # units (sign, axis) with axis 0..3 for 1, i, j, k
    mult = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, a in elems:
        row = []
        for s2, b in elems:
            s, c = mult[(a, b)]
            row.append(index[(s1 * s2 * s, c)])
        table.append(row)
    return make_group(table, name="Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with (g, h) indexed as g * |H| + h."""
    n, m = G.order, H.order
    table = [[G.table[a // m][b // m] * m + H.table[a % m][b % m]
              for b in range(n * m)] for a in range(n * m)]
    gens = [g * m for g in G.generators] + [h for h in H.generators]
    return FiniteGroup(table, gens, name=f"{G.name or 'G'}x{H.name or 'H'}")


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """A verified surjective homomorphism ``source -> target``."""

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        S, T, f = self.source, self.target, self.images
        if len(f) != S.order:
            raise NotHomomorphism(f"element map has {len(f)} entries, source has order {S.order}")
        if any(not 0 <= y < T.order for y in f):
            raise NotHomomorphism("element map leaves the target")
        for a in range(S.order):
            for b in range(S.order):
                if f[S.table[a][b]] != T.table[f[a]][f[b]]:
                    raise NotHomomorphism(f"f({a}*{b}) != f({a})*f({b})")
        missing = set(range(T.order)) - set(f)
        if missing:
            raise NotSurjective(f"target elements {sorted(missing)} not hit")

    def __call__(self, g: int) -> int:
        return self.images[g]

    @cached_property
    def kernel(self) -> frozenset[int]:
        return frozenset(a for a, y in enumerate(self.images) if y == 0)

    def compose(self, first: QuotientMap) -> QuotientMap:
        """``self ∘ first``."""
        if first.target != self.source:
            raise ValueError("quotient maps are not composable")
        return QuotientMap(first.source, self.target,
                           tuple(self.images[x] for x in first.images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuotientMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.images == other.images)

    def __hash__(self) -> int:
        return hash(self.images)


def identity_quotient(G: FiniteGroup) -> QuotientMap:
    return QuotientMap(G, G, tuple(range(G.order)))


def make_quotient(G: FiniteGroup, kernel: Iterable[int]) -> tuple[FiniteGroup, QuotientMap]:
    """G/K with cosets indexed by their minimal member, and the projection."""
    K = frozenset(int(k) for k in kernel)
    if not K or any(not 0 <= k < G.order for k in K):
        raise NotSubgroup("kernel must be a non-empty set of group elements")
    if 0 not in K:
        raise NotSubgroup("kernel does not contain the identity")
    for a in sorted(K):
        for b in sorted(K):
            if G.mul(a, b) not in K:
                raise NotSubgroup(f"{a}*{b} = {G.mul(a, b)} leaves the subset")
    for g in range(G.order):
        for k in sorted(K):
            c = G.conj(g, k)
            if c not in K:
                raise NotNormal(g, k, c)
    reps: dict[int, int] = {}
    coset_of = [0] * G.order
    for a in range(G.order):
        coset = frozenset(G.mul(a, k) for k in K)
        rep = min(coset)
        if rep not in reps:
            reps[rep] = len(reps)
        coset_of[a] = reps[rep]
    rep_list = sorted(reps, key=reps.get)
    table = [[coset_of[G.mul(a, b)] for b in rep_list] for a in rep_list]
    gens = []
    for g in G.generators:
        c = coset_of[g]
        if c != 0 and c not in gens:
            gens.append(c)
    Q = FiniteGroup(table, name=None)
    if len(Q.generated(gens)) == Q.order:
        Q = FiniteGroup(table, gens)
    return Q, QuotientMap(G, Q, tuple(coset_of))


class PowerIndex:
    """Lexicographic enumeration of the l-fold product G^l."""

    def __init__(self, G: FiniteGroup, l: int, cap: int = DEFAULT_POWER_CAP):
        if l < 0:
            raise ValueError("power must be non-negative")
        size = G.order ** l
        if size > cap:
            raise SizeOverflow(size, cap, f"|G|^{l} for |G| = {G.order}")
        self.group, self.length, self.size = G, l, size

    def __len__(self) -> int:
        return self.size

    def index(self, t: Sequence[int]) -> int:
        n, k = self.group.order, 0
        for x in t:
            k = k * n + x
        return k

    def tuple(self, k: int) -> tuple[int, ...]:
        n, out = self.group.order, []
        for _ in range(self.length):
            k, r = divmod(k, n)
            out.append(r)
        return tuple(reversed(out))

    def __iter__(self):
        for k in range(self.size):
            yield self.tuple(k)


def power(G: FiniteGroup, l: int, cap: int = DEFAULT_POWER_CAP) -> PowerIndex:
    return PowerIndex(G, l, cap)


def subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All subgroups, by closing joins of cyclic subgroups (small groups only)."""
    cyclic = {G.generated([a]) for a in range(G.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for H in frontier:
            for C in cyclic:
                if not C <= H:
                    J = G.generated(sorted(H | C))
                    if J not in found:
                        found.add(J)
                        nxt.add(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def is_normal(G: FiniteGroup, H: frozenset[int]) -> bool:
    return all(G.conj(g, h) in H for g in range(G.order) for h in H)


def normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    return [H for H in subgroups(G) if is_normal(G, H)]


class GroupTower(Tower):
    """Tower of finite groups G/N_0 <- G/N_1 <- ... with QuotientMap transitions."""

    def __post_init__(self):
        super().__post_init__()
        for i, q in enumerate(self.maps):
            if not isinstance(q, QuotientMap):
                raise ValidationError(f"transition {i} is not a QuotientMap")
            if q.source != self.objects[i + 1] or q.target != self.objects[i]:
                raise ValidationError(f"transition {i} does not connect levels {i + 1} -> {i}")
        for i in range(self.depth):
            if self.objects[i + 1].order < self.objects[i].order:
                raise ValidationError(f"group orders decrease at level {i + 1}")

    @property
    def groups(self) -> tuple[FiniteGroup, ...]:
        return self.objects

    def composite(self, j: int, i: int) -> QuotientMap:
        q = identity_quotient(self.objects[j])
        for k in range(j - 1, i - 1, -1):
            q = self.maps[k].compose(q)
        return q

    def truncate(self, depth: int) -> GroupTower:
        return GroupTower(self.objects[:depth + 1], self.maps[:depth])


def cyclic_p_tower(p: int, depth: int, start: int = 0) -> GroupTower:
    """Z/p^start <- Z/p^(start+1) <- ... <- Z/p^(start+depth), reduction maps."""
    groups = [cyclic_group(p ** (start + i)) for i in range(depth + 1)]
    maps = [QuotientMap(groups[i + 1], groups[i],
                        tuple(x % groups[i].order for x in range(groups[i + 1].order)))
            for i in range(depth)]
    return GroupTower(groups, maps)


def constant_group_tower(G: FiniteGroup, depth: int) -> GroupTower:
    q = identity_quotient(G)
    return GroupTower((G,) * (depth + 1), (q,) * depth)

