"""Truncated towers T_0 <- T_1 <- ... <- T_I and their limits.

A computer only sees finitely many levels, so every limit carries a marker:
``Stable`` when the tail transitions are verified isomorphisms, ``Pro``
otherwise. A Pro result may still report an ``effective_lim`` when the
eventual images stabilize inside the truncation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Generic, Sequence, TypeVar

from .abelian import AbGroup, AbHom, FinAb, Lattice, subquotient
from .errors import Indeterminate, NotStabilized, ValidationError

T = TypeVar("T")

DEFAULT_WINDOW = 2


@dataclass(frozen=True)
class Tower(Generic[T]):
    """Objects T_0..T_I with ``maps[i]: T_{i+1} -> T_i``.

    ``stabilization`` optionally declares that every transition with index
    >= s is an isomorphism; declared indices are checked for AbHom towers.
    """

    objects: tuple
    maps: tuple
    stabilization: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.objects:
            raise ValidationError("a tower needs at least one object")
        if len(self.maps) != len(self.objects) - 1:
            raise ValidationError(
                f"{len(self.objects)} objects need {len(self.objects) - 1} maps, "
                f"got {len(self.maps)}")
        for i, f in enumerate(self.maps):
            if isinstance(f, AbHom):
                if f.source.orders != self.objects[i + 1].orders or \
                        f.target.orders != self.objects[i].orders:
                    raise ValidationError(f"transition {i} does not connect levels {i + 1} -> {i}")
        if self.stabilization is not None:
            if self.stabilization < 0:
                raise ValidationError("stabilization index must be non-negative")
            for i in range(self.stabilization, len(self.maps)):
                f = self.maps[i]
                if isinstance(f, AbHom) and not f.is_isomorphism():
                    raise NotStabilized(f"transition {i} is not an isomorphism")

    @property
    def depth(self) -> int:
        return len(self.objects) - 1

    def __len__(self) -> int:
        return len(self.objects)

    def composite(self, j: int, i: int) -> AbHom:
        """The map T_j -> T_i for j >= i (AbHom towers)."""
        if j < i:
            raise ValueError("composites run from deeper to shallower levels")
        f = AbHom.identity(self.objects[j])
        for k in range(j - 1, i - 1, -1):
            f = self.maps[k] @ f
        return f

    def truncate(self, depth: int) -> Tower:
        return Tower(self.objects[:depth + 1], self.maps[:depth],
                     None if self.stabilization is None or self.stabilization > depth
                     else self.stabilization)


def constant_tower(obj: AbGroup, depth: int) -> Tower:
    return Tower((obj,) * (depth + 1), (AbHom.identity(obj),) * depth)


@dataclass
class LimResult:
    """Outcome of a truncated inverse limit.

    ``kind`` is "stable" or "pro". For stable results ``value`` is T_s and
    ``stable_from`` the first index from which every transition is an
    isomorphism. For pro results ``effective_lim`` is the limit of the
    eventual-image subtower when that subtower is certified stable inside
    the truncation, else None (``non_stabilized`` is then True).
    """

    kind: str
    value: FinAb | None
    stable_from: int | None
    window: int
    effective_lim: FinAb | None = None
    effective_from: int | None = None
    image_orders: list = field(default_factory=list)

    @property
    def non_stabilized(self) -> bool:
        return self.kind == "pro" and self.effective_lim is None

    @property
    def certified(self) -> FinAb | None:
        """The limit when the truncation certifies it, else None."""
        return self.value if self.kind == "stable" else self.effective_lim

    def describe(self) -> str:
        if self.kind == "stable":
            return f"{self.value} (stable at depth {self.stable_from})"
        if self.effective_lim is not None:
            return (f"{self.effective_lim} (eventual images stable at depth "
                    f"{self.effective_from})")
        return "pro-object (not stabilized within truncation)"


def _first_iso_tail(isos: Sequence[bool]) -> int:
    s = len(isos)
    while s > 0 and isos[s - 1]:
        s -= 1
    return s


def _image_lattice(f: AbHom) -> Lattice:
    B = f.target
    return Lattice([list(f.matrix.column(j)) for j in range(f.matrix.cols)] + B.relations(),
                   B.ngens)


def _image_chain(t: Tower, i: int) -> list[Lattice]:
    return [_image_lattice(t.composite(j, i)) for j in range(i, t.depth + 1)]


def tower_lim(t: Tower, window: int = DEFAULT_WINDOW) -> LimResult:
    """Inverse limit of a tower of finitely generated abelian groups."""
    if window < 1:
        raise ValueError("window must be positive")
    I = t.depth
    isos = [f.is_isomorphism() for f in t.maps]
    if I >= window and all(isos[I - window:]):
        s = _first_iso_tail(isos)
        return LimResult("stable", t.objects[s].canonical(), s, window)

    # eventual images: im(T_j -> T_i) constant over the last `window` deeper levels
    certified = []
    for i in range(0, I - window + 1):
        chain = [_image_lattice(t.composite(j, i)) for j in range(I - window + 1, I + 1)]
        if all(c == chain[0] for c in chain[1:]):
            certified.append(i)
        else:
            break
    res = LimResult("pro", None, None, window)
    if not certified:
        return res
    top = certified[-1]
    subs = []
    for i in range(top + 1):
        f = t.composite(I, i)
        B = f.target
        subs.append(subquotient([list(f.matrix.column(j)) for j in range(f.matrix.cols)]
                                + B.relations(), B.relations(), B.ngens))
    res.image_orders = [s.group.invariant_factors for s in subs]
    if top < window:
        return res
    image_isos = [subs[i + 1].induced(t.maps[i], subs[i]).is_isomorphism()
                  for i in range(top)]
    if all(image_isos[top - window:]):
        s = _first_iso_tail(image_isos)
        res.effective_lim = subs[s].group
        res.effective_from = s
    return res


@dataclass
class MLCheck:
    holds: bool | None
    witness: str

    def __bool__(self) -> bool:
        return bool(self.holds)


def ml_check(t: Tower) -> MLCheck:
    """Mittag-Leffler condition on the truncation.

    Towers of finite groups always satisfy it (descending chains of
    subgroups of a finite group stabilize); otherwise the image chains are
    inspected: stabilization at every index verifies ML, a chain that drops
    at every step up to the truncation refutes it, anything else is left
    undecided (``holds is None``).
    """
    if all(obj.is_finite() for obj in t.objects):
        return MLCheck(True, "all objects finite")
    I = t.depth
    undecided = []
    # the top level has no deeper levels to compare against inside the truncation
    for i in range(I):
        chain = _image_chain(t, i)
        if len(chain) >= 2 and chain[-1] == chain[-2]:
            continue
        if len(chain) >= 2 and all(not (a == b) for a, b in zip(chain, chain[1:])):
            return MLCheck(False, f"images into level {i} strictly decrease through depth {I}")
        undecided.append(i)
    if undecided:
        return MLCheck(None, f"image chains at levels {undecided} undecided within truncation")
    return MLCheck(True, "every image chain stabilizes within the truncation")


def tower_lim1(t: Tower) -> FinAb:
    """lim^1 of the tower; zero whenever Mittag-Leffler holds.

    Raises Indeterminate when ML fails or cannot be decided: lim^1 of a
    non-ML tower of countable groups is uncountable and has no finite
    description.
    """
    ml = ml_check(t)
    if ml.holds:
        return FinAb.trivial()
    raise Indeterminate(f"lim^1 not computable: {ml.witness}")

