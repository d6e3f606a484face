"""Seeded generators of test inputs: groups, modules, complexes, bicomplexes, towers.

Everything takes a ``numpy.random.Generator`` so runs are reproducible.
Random objects are built from pieces whose invariants hold by
construction (trivial, permutation and cyclic-quotient modules; dot, pair,
square and staircase bicomplexes) and then mixed by random automorphisms,
which keeps validity while destroying any visible block structure.
"""
from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from .abelian import AbGroup, AbHom, FinAb
from .gmod import GModule, direct_sum, make_module, restrict_along, trivial_module
from .groups import (FiniteGroup, GroupTower, QuotientMap, cyclic_group, dihedral_group,
                     direct_product, group_from_permutations, make_quotient, normal_subgroups,
                     quaternion_group, subgroups, symmetric_group)
from .matrix import IntMatrix
from .orbit import Bicomplex, EquivariantComplex, OrbitInput
from .towers import Tower


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


# ------------------------------------------------------------------ groups

def small_groups(max_order: int = 16) -> list[FiniteGroup]:
    """A catalog of groups up to ``max_order`` covering every order class."""
    Z = cyclic_group
    out = [Z(n) for n in range(1, max_order + 1)]
    extra = [
        lambda: direct_product(Z(2), Z(2)),
        lambda: symmetric_group(3),
        lambda: dihedral_group(4),
        lambda: quaternion_group(),
        lambda: direct_product(Z(2), Z(4)),
        lambda: direct_product(direct_product(Z(2), Z(2)), Z(2)),
        lambda: direct_product(Z(3), Z(3)),
        lambda: dihedral_group(5),
        lambda: dihedral_group(6),
        lambda: group_from_permutations([(1, 2, 0, 3), (0, 2, 3, 1)], name="A4"),
        lambda: dihedral_group(7),
        lambda: dihedral_group(8),
        lambda: direct_product(Z(4), Z(4)),
        lambda: direct_product(Z(2), Z(8)),
        lambda: direct_product(Z(2), dihedral_group(4)),
        lambda: direct_product(Z(2), quaternion_group()),
    ]
    for make in extra:
        G = make()
        if G.order <= max_order:
            out.append(G)
    return out


def abelian_groups(max_order: int) -> list[FinAb]:
    """Every finite abelian group of order <= max_order, trivial group included."""
    out = []

    def extend(prefix: list[int], rest: int):
        out.append(FinAb(prefix))
        last = prefix[-1] if prefix else 2
        # each new invariant factor is a multiple of the previous one
        for m in range(last, rest + 1, last if prefix else 1):
            extend(prefix + [m], rest // m)

    extend([], max_order)
    return sorted(out, key=lambda A: (A.order(), A.orders))


def quotient_tower(G: FiniteGroup, chain: Sequence[frozenset]) -> GroupTower:
    """G/N_0 <- G/N_1 <- ... for a descending chain of normal subgroups."""
    quots = [make_quotient(G, N) for N in chain]
    groups = [Q for Q, _ in quots]
    maps = []
    for i in range(len(chain) - 1):
        q_hi, q_lo = quots[i + 1][1], quots[i][1]
        images = [0] * groups[i + 1].order
        for g in range(G.order):
            images[q_hi(g)] = q_lo(g)
        maps.append(QuotientMap(groups[i + 1], groups[i], tuple(images)))
    return GroupTower(tuple(groups), tuple(maps))


def random_group_tower(rng: np.random.Generator, max_order: int = 16,
                       depth: int | None = None) -> GroupTower:
    """Quotients of a catalog group along a random chain of normal subgroups."""
    groups = [G for G in small_groups(max_order) if G.order > 1]
    G = groups[int(rng.integers(len(groups)))]
    normals = sorted(normal_subgroups(G), key=len, reverse=True)
    chain = [normals[0]]
    while len(chain[-1]) > 1:
        smaller = [N for N in normals if N < chain[-1]]
        chain.append(smaller[int(rng.integers(len(smaller)))])
    if depth is not None:
        while len(chain) < depth + 1:
            chain.append(chain[-1])
        chain = chain[:depth + 1]
    return quotient_tower(G, chain)


# ------------------------------------------------------------------ automorphisms

def _reduce(m: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    if not len(orders):
        return m
    return m % np.array(orders, dtype=object)[:, None]


def random_automorphism(rng: np.random.Generator, orders: Sequence[int],
                        steps: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """A random automorphism of ⊕ Z/orders[i] and its inverse.

    A product of elementary moves: unit scalings, swaps of equal-order
    generators, and transvections e_i -> e_i + c e_j (c a multiple of
    o_j / gcd(o_i, o_j), so the move is well defined).
    """
    k = len(orders)
    a = np.eye(k, dtype=object)
    ai = np.eye(k, dtype=object)
    if k == 0:
        return a, ai
    for _ in range(steps):
        e = np.eye(k, dtype=object)
        ei = np.eye(k, dtype=object)
        kind = int(rng.integers(3))
        i, j = int(rng.integers(k)), int(rng.integers(k))
        oi, oj = orders[i], orders[j]
        if kind == 0:
            units = [u for u in range(1, oi) if gcd(u, oi) == 1] or [1]
            u = units[int(rng.integers(len(units)))]
            e[i, i] = u
            ei[i, i] = pow(u, -1, oi) if oi > 1 else 1
        elif kind == 1 and i != j and oi == oj:
            e[[i, j]] = e[[j, i]]
            ei[[i, j]] = ei[[j, i]]
        elif kind == 2 and i != j:
            step = oj // gcd(oi, oj)
            c = step * int(rng.integers(oj))
            e[j, i] = c
            ei[j, i] = -c
        a = _reduce(e @ a, orders)
        ai = _reduce(ai @ ei, orders)
    return a, ai


def _order_of(m: np.ndarray, orders: Sequence[int], limit: int = 10 ** 4) -> int:
    ident = _reduce(np.eye(len(orders), dtype=object), orders)
    x = _reduce(m.copy(), orders)
    for k in range(1, limit):
        if (x == ident).all():
            return k
        x = _reduce(m @ x, orders)
    raise RuntimeError("automorphism order exceeds search limit")


def _mpow(m: np.ndarray, e: int, orders: Sequence[int]) -> np.ndarray:
    out = _reduce(np.eye(len(orders), dtype=object), orders)
    for _ in range(e):
        out = _reduce(m @ out, orders)
    return out


def automorphism_of_order_dividing(rng: np.random.Generator, orders: Sequence[int], n: int,
                                   tries: int = 40) -> np.ndarray | None:
    """A nontrivial automorphism whose n-th power is the identity, if one is found."""
    ident = _reduce(np.eye(len(orders), dtype=object), orders)
    for _ in range(tries):
        a, _ = random_automorphism(rng, orders)
        k = _order_of(a, orders)
        e = gcd(k, n)
        if e > 1:
            b = _mpow(a, k // e, orders)
            if not (b == ident).all():
                return b
    return None


def _to_int(m: np.ndarray) -> IntMatrix:
    return IntMatrix([[int(x) for x in row] for row in m], m.shape[0], m.shape[1])


# ------------------------------------------------------------------ modules

def cyclic_quotients(G: FiniteGroup) -> list[tuple[QuotientMap, int]]:
    """Quotient maps onto nontrivial cyclic groups, with a generator of the image."""
    out = []
    for N in normal_subgroups(G):
        if len(N) == G.order:
            continue
        Q, q = make_quotient(G, N)
        gen = next((c for c in range(Q.order) if Q.element_order(c) == Q.order), None)
        if gen is not None:
            out.append((q, gen))
    return out


def module_through_cyclic_quotient(G: FiniteGroup, A: AbGroup, q: QuotientMap, gen: int,
                                   beta: np.ndarray) -> GModule:
    """g acts by beta^k where q(g) = gen^k."""
    Q = q.target
    log = {}
    x = 0
    for k in range(Q.order):
        log[x] = k
        x = Q.mul(x, gen)
    k = A.ngens
    powers = [_reduce(np.eye(k, dtype=object), A.orders)]
    for _ in range(Q.order - 1):
        powers.append(_reduce(beta @ powers[-1], A.orders))
    action = {g: _to_int(powers[log[q(g)]]) for g in G.generators}
    return make_module(G, A, action)


def permutation_module(G: FiniteGroup, H: frozenset, m: int) -> GModule:
    """(Z/m)^{G/H} with G permuting left cosets."""
    cosets: list[frozenset] = []
    index = {}
    for g in range(G.order):
        c = frozenset(G.mul(g, h) for h in H)
        if c not in index:
            index[c] = len(cosets)
            cosets.append(c)
    k = len(cosets)
    action = {}
    for g in G.generators:
        mat = [[0] * k for _ in range(k)]
        for j, c in enumerate(cosets):
            i = index[frozenset(G.mul(g, x) for x in c)]
            mat[i][j] = 1
        action[g] = mat
    return make_module(G, [m] * k, action)


def conjugate_module(M: GModule, a: np.ndarray, ai: np.ndarray) -> GModule:
    """The same module in the basis moved by the automorphism a: g ↦ a ρ(g) a^-1."""
    orders = M.abgroup.orders
    action = {}
    for g in M.group.generators:
        rho = np.array(M.action[g].tolist(), dtype=object).reshape(M.ngens, M.ngens)
        action[g] = _to_int(_reduce(a @ rho @ ai, orders))
    return make_module(M.group, M.abgroup, action)


def random_module(rng: np.random.Generator, G: FiniteGroup, max_order: int = 32) -> GModule:
    """A random finite G-module of order <= max_order.

    Kinds: trivial, permutation on cosets, action through a cyclic
    quotient, and direct sums; the result is conjugated by a random
    automorphism of the underlying group.
    """
    groups = [A for A in abelian_groups(max_order) if A.ngens]
    kinds = ["trivial", "cyclic", "cyclic", "perm", "sum"]
    kind = kinds[int(rng.integers(len(kinds)))]
    M = None
    if kind == "perm":
        subs = [H for H in subgroups(G) if G.order // len(H) > 1]
        feasible = [(H, m) for H in subs for m in (2, 3, 4, 5)
                    if m ** (G.order // len(H)) <= max_order]
        if feasible:
            H, m = feasible[int(rng.integers(len(feasible)))]
            M = permutation_module(G, H, m)
    elif kind == "cyclic":
        cq = cyclic_quotients(G)
        if cq:
            q, gen = cq[int(rng.integers(len(cq)))]
            A = groups[int(rng.integers(len(groups)))]
            beta = automorphism_of_order_dividing(rng, A.orders, q.target.order)
            if beta is not None:
                M = module_through_cyclic_quotient(G, A, q, gen, beta)
    elif kind == "sum" and max_order >= 4:
        M1 = random_module(rng, G, int(np.sqrt(max_order)))
        M2 = random_module(rng, G, max_order // max(M1.order, 1))
        M = direct_sum(M1, M2)
    if M is None:
        M = trivial_module(G, groups[int(rng.integers(len(groups)))])
    a, ai = random_automorphism(rng, M.abgroup.orders)
    return conjugate_module(M, a, ai)


def cyclic_module_family(n: int, max_order: int = 16, seed: int = 0,
                         per_group: int = 2) -> list[GModule]:
    """Modules over Z/n: every A of order <= max_order with the trivial action,
    negation when it is nontrivial and n is even, and up to ``per_group``
    further actions of order dividing n found by seeded search."""
    rng = rng_for(seed)
    G = cyclic_group(n)
    out = []
    for A in abelian_groups(max_order):
        out.append(trivial_module(G, A))
        if n == 1 or not A.ngens:
            continue
        seen = {tuple(map(tuple, np.eye(A.ngens, dtype=int).tolist()))}
        cands = []
        if n % 2 == 0 and max(A.orders) > 2:
            cands.append(_reduce(-np.eye(A.ngens, dtype=object), A.orders))
        for _ in range(per_group * 3):
            b = automorphism_of_order_dividing(rng, A.orders, n, tries=10)
            if b is not None:
                cands.append(b)
        added = 0
        for b in cands:
            key = tuple(tuple(int(x) for x in row) for row in b)
            if key in seen:
                continue
            seen.add(key)
            out.append(make_module(G, A, {1: _to_int(b)}))
            added += 1
            if added >= per_group:
                break
    return out


# ------------------------------------------------------------------ towers

def random_hom_matrix(rng: np.random.Generator, src: Sequence[int], tgt: Sequence[int],
                      zero_prob: float = 0.3) -> list[list[int]]:
    """A random well-defined homomorphism ⊕Z/src -> ⊕Z/tgt (finite orders)."""
    out = []
    for ot in tgt:
        row = []
        for os in src:
            step = ot // gcd(ot, os)
            c = 0 if rng.random() < zero_prob else step * int(rng.integers(max(ot // step, 1)))
            row.append(c)
        out.append(row)
    return out


def random_finite_tower(rng: np.random.Generator, depth: int = 6,
                        max_order: int = 64) -> Tower:
    """A tower of finite abelian groups with random transitions."""
    groups = abelian_groups(max_order)
    objs = [groups[int(rng.integers(len(groups)))] for _ in range(depth + 1)]
    maps = []
    for i in range(depth):
        s, t = objs[i + 1], objs[i]
        maps.append(AbHom(s, t, IntMatrix(random_hom_matrix(rng, s.orders, t.orders),
                                          t.ngens, s.ngens)))
    return Tower(tuple(objs), tuple(maps))


# ------------------------------------------------------------------ complexes

def _pieces_complex(G: FiniteGroup, length: int, pieces: list) -> EquivariantComplex:
    """Direct sum of pieces (module, degree, k): a dot if k is None, else
    X in degrees degree and degree-1 joined by multiplication by k."""
    zero = make_module(G, AbGroup(()))
    mods = [zero] * (length + 1)
    blocks: list[list] = [[] for _ in range(length + 1)]   # per degree: piece slots
    for idx, (X, q, k) in enumerate(pieces):
        blocks[q].append((idx, X))
        if k is not None:
            blocks[q - 1].append((idx, X))
    for q in range(length + 1):
        for _, X in blocks[q]:
            mods[q] = direct_sum(mods[q], X) if mods[q].ngens else X
    diffs = []
    for q in range(1, length + 1):
        rows = sum(X.ngens for _, X in blocks[q - 1])
        cols = sum(X.ngens for _, X in blocks[q])
        mat = np.zeros((rows, cols), dtype=object)
        c0 = 0
        for idx, X in blocks[q]:
            _, qq, k = pieces[idx]
            if qq == q and k is not None:
                r0 = 0
                for jdx, Y in blocks[q - 1]:
                    if jdx == idx:
                        break
                    r0 += Y.ngens
                mat[r0:r0 + X.ngens, c0:c0 + X.ngens] = k * np.eye(X.ngens, dtype=object)
            c0 += X.ngens
        diffs.append(AbHom(mods[q].abgroup, mods[q - 1].abgroup,
                           IntMatrix(mat.tolist(), rows, cols)))
    return EquivariantComplex(tuple(mods), tuple(diffs))


def random_piece_specs(rng: np.random.Generator, length: int, count: int,
                       acyclic: bool = False) -> list[tuple[int, int | None]]:
    """(degree, multiplier) pairs; multiplier None makes an isolated piece."""
    specs = []
    for _ in range(count):
        if acyclic or (length >= 1 and rng.random() < 0.6):
            q = int(rng.integers(1, length + 1)) if length >= 1 else 0
            k = 1 if acyclic else int(rng.choice([1, 2, 3, 0]))
            specs.append((q, k) if length >= 1 else (0, None))
        else:
            specs.append((int(rng.integers(length + 1)), None))
    return specs


def random_orbit_input(rng: np.random.Generator, gt: GroupTower, length: int = 1,
                       pieces: int = 2, max_order: int = 8,
                       acyclic: bool = False) -> OrbitInput:
    """Levelwise complexes built from level-0 modules inflated up the tower.

    Each piece keeps one module X over G/N_0; at level i it is X inflated
    along G/N_i -> G/N_0. Transitions are multiplication by a random
    scalar on each piece, which commutes with every differential.
    """
    base = gt.groups[0]
    specs = random_piece_specs(rng, length, pieces, acyclic)
    Xs = [random_module(rng, base, max_order) for _ in specs]
    scal = [[int(rng.choice([1, 1, 1, -1, 2])) for _ in specs] for _ in range(gt.depth)]
    cs = []
    for i, G in enumerate(gt.groups):
        q = gt.composite(i, 0)
        ps = [(restrict_along(q, X), d, k) for X, (d, k) in zip(Xs, specs)]
        cs.append(_pieces_complex(G, length, ps))
    ts = []
    for i in range(gt.depth):
        src, tgt = cs[i + 1], cs[i]
        fs = []
        for q in range(length + 1):
            diag = []
            for idx, (d, k) in enumerate(specs):
                if d == q or (k is not None and d - 1 == q):
                    diag += [scal[i][idx]] * Xs[idx].ngens
            fs.append(AbHom(src.modules[q].abgroup, tgt.modules[q].abgroup,
                            IntMatrix.diag(diag, len(diag), len(diag))))
        ts.append(tuple(fs))
    return OrbitInput(gt, tuple(cs), tuple(ts))


# ------------------------------------------------------------------ bicomplexes

def _piece_cells(kind: str, p: int, q: int) -> list[tuple[int, int]]:
    return {"dot": [(p, q)],
            "hpair": [(p, q), (p - 1, q)],
            "vpair": [(p, q), (p, q - 1)],
            "square": [(p, q), (p - 1, q), (p, q - 1), (p - 1, q - 1)],
            "stair": [(p, q), (p - 1, q), (p - 1, q + 1), (p - 2, q + 1)]}[kind]


def random_bicomplex(rng: np.random.Generator, P: int = 3, Q: int = 3, m: int | None = None,
                     max_entry_order: int = 64, pieces: int | None = None) -> Bicomplex:
    """A first-quadrant bicomplex with entries (Z/m)^k of order <= max_entry_order.

    Built as a direct sum of pieces (dots, horizontal and vertical pairs
    with a scalar map, anticommuting squares, and two-step staircases
    that force a nonzero d_2), then every entry is moved by a random
    automorphism, so the differentials become dense.
    """
    m = m or int(rng.choice([2, 3, 4, 6, 8]))
    kmax = 0
    while m ** (kmax + 1) <= max_entry_order:
        kmax += 1
    slots: dict[tuple[int, int], int] = {}
    plist = []
    n = pieces if pieces is not None else int(rng.integers(2, 2 * (P + Q) + 2))
    for _ in range(n):
        kind = str(rng.choice(["dot", "hpair", "vpair", "square", "stair"]))
        p, q = int(rng.integers(P + 1)), int(rng.integers(Q + 1))
        cells = _piece_cells(kind, p, q)
        if any(not (0 <= a <= P and 0 <= b <= Q) for a, b in cells):
            continue
        if any(slots.get(c, 0) + 1 > kmax for c in cells):
            continue
        idx = {}
        for c in cells:
            idx[c] = slots.get(c, 0)
            slots[c] = idx[c] + 1
        scalar = int(rng.integers(m)) if kind in ("hpair", "vpair") else 1
        plist.append((kind, cells, idx, scalar))
    entries = {(a, b): AbGroup((m,) * slots.get((a, b), 0))
               for a in range(P + 1) for b in range(Q + 1)}
    dh: dict = {}
    dv: dict = {}

    def put(store, src, tgt, i, j, val):
        key = src
        if key not in store:
            store[key] = np.zeros((slots.get(tgt, 0), slots.get(src, 0)), dtype=object)
        store[key][i, j] += val

    for kind, cells, idx, s in plist:
        if kind == "hpair":
            put(dh, cells[0], cells[1], idx[cells[1]], idx[cells[0]], s)
        elif kind == "vpair":
            put(dv, cells[0], cells[1], idx[cells[1]], idx[cells[0]], s)
        elif kind == "square":
            a, b, c, d = cells          # (p,q) (p-1,q) (p,q-1) (p-1,q-1)
            put(dh, a, b, idx[b], idx[a], 1)
            put(dv, a, c, idx[c], idx[a], 1)
            put(dh, c, d, idx[d], idx[c], 1)
            put(dv, b, d, idx[d], idx[b], -1)
        elif kind == "stair":
            a, b, c, d = cells          # (p,q) (p-1,q) (p-1,q+1) (p-2,q+1)
            put(dh, a, b, idx[b], idx[a], 1)
            put(dv, c, b, idx[b], idx[c], 1)
            put(dh, c, d, idx[d], idx[c], 1)
    autos = {c: random_automorphism(rng, entries[c].orders) for c in entries}
    out_h, out_v = {}, {}
    for store, out, step in ((dh, out_h, (-1, 0)), (dv, out_v, (0, -1))):
        for src, mat in store.items():
            tgt = (src[0] + step[0], src[1] + step[1])
            a_t = autos[tgt][0]
            ai_s = autos[src][1]
            mixed = _reduce(a_t @ mat @ ai_s, entries[tgt].orders)
            out[src] = AbHom(entries[src], entries[tgt], _to_int(mixed))
    return Bicomplex(entries, out_h, out_v)


def staircase_bicomplex(m: int = 2) -> Bicomplex:
    """The smallest bicomplex with a nonzero d_2: Z/m at (2,0), (1,0), (1,1), (0,1)."""
    A = AbGroup((m,))
    one = AbHom(A, A, [[1]])
    return Bicomplex({(2, 0): A, (1, 0): A, (1, 1): A, (0, 1): A},
                     dh={(2, 0): one, (1, 1): one}, dv={(1, 1): one})
