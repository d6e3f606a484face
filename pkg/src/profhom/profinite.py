"""Continuous homology of a profinite group presented by a tower of quotients.

The group is never materialized: a GroupTower G/N_0 <- G/N_1 <- ... and a
ModuleTower A_0 <- A_1 <- ... (A_i a G/N_i-module) stand in for it, and

    H^c_p(G, lim A_i) = lim_i H_p(G/N_i, A_i),

the limit taken along the maps induced by (quotient, module transition).
lim^1 of the homology tower vanishes because every level is finite.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import AbHom, FinAb
from .bar import bar_homology, induced_homology_map
from .errors import (DepthMismatch, GroupMismatch, NotEquivariant, SizeOverflow,
                     ValidationError)
from .gmod import GModule, ModuleTower, check_equivariant, trivial_module
from .groups import GroupTower, constant_group_tower
from .towers import DEFAULT_WINDOW, LimResult, Tower, ml_check, tower_lim, tower_lim1


@dataclass(frozen=True)
class TowerPair:
    """A group tower and a module tower over it, validated together."""

    groups: GroupTower
    modules: ModuleTower

    @property
    def depth(self) -> int:
        return self.groups.depth


def validate_tower_pair(gt: GroupTower, mt: ModuleTower) -> TowerPair:
    """Check depths, module groups, and equivariance of every transition."""
    if gt.depth != mt.depth:
        raise DepthMismatch(f"group tower has depth {gt.depth}, module tower {mt.depth}")
    for i, (G, M) in enumerate(zip(gt.groups, mt.modules)):
        if M.group != G:
            raise GroupMismatch(f"module at level {i} is not over the level-{i} quotient")
    for i, (q, f) in enumerate(zip(gt.maps, mt.maps)):
        try:
            check_equivariant(f, mt.modules[i + 1], mt.modules[i], q)
        except NotEquivariant as exc:
            raise NotEquivariant(f"transition {i}: {exc}", witness=(i, exc.witness)) from None
    return TowerPair(gt, mt)


def trivial_coefficients(gt: GroupTower, orders) -> TowerPair:
    """The same finite abelian group with trivial action at every level."""
    A = orders if isinstance(orders, FinAb) else FinAb.from_orders(orders)
    mods = [trivial_module(G, A) for G in gt.groups]
    maps = [AbHom.identity(A) for _ in range(gt.depth)]
    return validate_tower_pair(gt, ModuleTower(tuple(mods), tuple(maps)))


def constant_pair(M: GModule, depth: int) -> TowerPair:
    """A finite group and module viewed as a constant tower."""
    gt = constant_group_tower(M.group, depth)
    mt = ModuleTower((M,) * (depth + 1), (AbHom.identity(M.abgroup),) * depth)
    return validate_tower_pair(gt, mt)


class HomologyTower(Tower):
    """H_p(G/N_i, A_i) with transitions induced along the tower pair."""

    def __init__(self, objects, maps, degree: int):
        super().__init__(tuple(objects), tuple(maps))
        object.__setattr__(self, "degree", degree)
        for i, H in enumerate(self.objects):
            if not H.is_finite():
                raise ValidationError(f"homology at level {i} is infinite")


def homology_tower(pair: TowerPair, p: int, method: str = "auto") -> HomologyTower:
    gt, mt = pair.groups, pair.modules
    objs = []
    for i, M in enumerate(mt.modules):
        try:
            objs.append(bar_homology(M, p, method).group)
        except SizeOverflow as exc:
            raise SizeOverflow(exc.size, exc.cap, f"level {i}: {exc.where}") from None
    maps = [induced_homology_map(gt.maps[i], mt.maps[i], mt.modules[i + 1], mt.modules[i],
                                 p, method)
            for i in range(pair.depth)]
    return HomologyTower(objs, maps, p)


@dataclass
class ContinuousHomologyResult:
    degree: int
    lim: LimResult
    tower: HomologyTower = field(repr=False)
    lim1_report: FinAb
    lim1_levels: list[bool]
    ml_witness: str

    @property
    def value(self) -> FinAb | None:
        """The certified limit, or None when the truncation is inconclusive."""
        return self.lim.certified

    @property
    def warning(self) -> str | None:
        if self.lim.non_stabilized:
            return (f"H^c_{self.degree}: tower not stabilized within depth "
                    f"{self.tower.depth}; truncation inconclusive")
        return None

    def describe(self) -> str:
        return self.lim.describe()


def continuous_homology(pair: TowerPair, p: int, window: int = DEFAULT_WINDOW,
                        method: str = "auto") -> ContinuousHomologyResult:
    """lim of the homology tower, with lim^1 = 0 checked at every level."""
    t = homology_tower(pair, p, method)
    # each level is a finite group, so its descending image chain stabilizes
    levels = [H.is_finite() for H in t.objects]
    if not all(levels):
        raise ValidationError("homology tower has an infinite level")
    ml = ml_check(t)
    lim1 = tower_lim1(t)
    if not lim1.is_trivial():
        raise AssertionError("lim^1 of a tower of finite groups must vanish")
    return ContinuousHomologyResult(p, tower_lim(t, window), t, lim1, levels, ml.witness)

