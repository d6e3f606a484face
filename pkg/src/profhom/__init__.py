"""Homology of profinite groups and homotopy orbits, through towers of finite quotients."""
from .abelian import AbGroup, AbHom, FinAb
from .bar import bar_complex, group_homology, induced_homology_map
from .gmod import GModule, ModuleTower, make_module, trivial_module
from .groups import FiniteGroup, GroupTower, cyclic_group, cyclic_p_tower, make_group
from .profinite import TowerPair, continuous_homology, validate_tower_pair
from .towers import LimResult, Tower, tower_lim

__version__ = "0.1.0"

__all__ = ["AbGroup", "AbHom", "FinAb", "bar_complex", "group_homology", "induced_homology_map",
           "GModule", "ModuleTower", "make_module", "trivial_module", "FiniteGroup",
           "GroupTower", "cyclic_group", "cyclic_p_tower", "make_group", "TowerPair",
           "continuous_homology", "validate_tower_pair", "LimResult", "Tower", "tower_lim"]
