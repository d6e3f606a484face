"""Command-line front end.

    profhom group-homology      --input doc.yaml --degrees 0..4
    profhom continuous-homology --input tower.yaml --degree 1 --depth 3
    profhom em-orbit            --input tower.yaml --degrees 0..3
    profhom orbit               --input complexes.yaml --degrees 0..2
    profhom ss-pages            --input bicomplex.yaml --pages 3

Inputs are YAML or JSON documents (schema in the README). ``--format
structured`` prints one JSON report with sorted keys, so identical inputs
give byte-identical output.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable

import yaml

from .abelian import AbGroup, AbHom, FinAb
from .bar import bar_homology
from .errors import (CollapseViolation, DepthMismatch, E2Mismatch, ProfhomError, SchemaError,
                     SizeOverflow, ValidationError)
from .gmod import GModule, ModuleTower, make_module, trivial_module
from .groups import (DEFAULT_POWER_CAP, FiniteGroup, GroupTower, QuotientMap,
                     constant_group_tower, cyclic_group, cyclic_p_tower, dihedral_group,
                     direct_product, group_from_permutations, make_group, quaternion_group,
                     symmetric_group)
from .matrix import IntMatrix
from .orbit import (Bicomplex, EquivariantComplex, OrbitInput, em_orbit_homology,
                    orbit_homology, ss_pages)
from .profinite import continuous_homology, validate_tower_pair
from .reduction import METHODS, reduced_bar
from .towers import DEFAULT_WINDOW, LimResult

COMMANDS = ("group-homology", "continuous-homology", "orbit", "em-orbit", "ss-pages")

EXIT_OK = 0
EXIT_SCHEMA = 10
EXIT_VALIDATION = 11
EXIT_SIZE = 12
EXIT_E2 = 13
EXIT_COLLAPSE = 14
EXIT_OTHER = 15


@dataclass(frozen=True)
class JobSpec:
    command: str
    input: str
    degrees: tuple[int, int]
    depth: int | None = None
    cap: int = DEFAULT_POWER_CAP
    format: str = "table"
    pages: int = 2
    window: int = DEFAULT_WINDOW
    method: str = "auto"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        lo, hi = self.degrees
        if lo < 0 or hi < lo:
            raise ValueError("degree range must satisfy 0 <= A <= B")
        if self.depth is not None and self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.cap <= 0 or self.window <= 0 or self.pages <= 0:
            raise ValueError("cap, window and pages must be positive")


# ------------------------------------------------------------------ schema helpers

def _need(doc: Any, key: str, path: str):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected a mapping")
    if key not in doc:
        raise SchemaError(f"{path}.{key}" if path else key, "missing required field")
    return doc[key]


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(path, f"expected an integer, got {x!r}")
    return x


def _int_list(x: Any, path: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(path, "expected a list of integers")
    return [_int(v, f"{path}[{i}]") for i, v in enumerate(x)]


def _matrix(x: Any, rows: int, cols: int, path: str) -> IntMatrix:
    if not isinstance(x, list) or len(x) != rows:
        raise SchemaError(path, f"expected a {rows} x {cols} matrix (list of {rows} rows)")
    data = []
    for i, row in enumerate(x):
        r = _int_list(row, f"{path}[{i}]")
        if len(r) != cols:
            raise SchemaError(f"{path}[{i}]", f"row has {len(r)} entries, expected {cols}")
        data.append(r)
    return IntMatrix(data, rows, cols)


def _located(path: str, fn: Callable, *args, **kw):
    """Run a constructor, prefixing validation errors with the document path."""
    try:
        return fn(*args, **kw)
    except ValidationError as exc:
        exc.path = path
        exc.args = (f"{path}: {exc}",)
        raise


# ------------------------------------------------------------------ parsing

def parse_group(doc: Any, path: str) -> FiniteGroup:
    """A group given by exactly one of: table, permutations, cyclic, symmetric,
    dihedral (n-gon), quaternion, product (list of two groups)."""
    if not isinstance(doc, dict):
        raise SchemaError(path, "a group must be a mapping")
    kinds = [k for k in ("table", "permutations", "cyclic", "symmetric", "dihedral",
                         "quaternion", "product") if k in doc]
    if len(kinds) != 1:
        raise SchemaError(path, "give exactly one of table / permutations / cyclic / "
                                "symmetric / dihedral / quaternion / product")
    kind = kinds[0]
    name = doc.get("name")
    if kind == "table":
        t = doc["table"]
        if not isinstance(t, list) or not all(isinstance(r, list) for r in t):
            raise SchemaError(f"{path}.table", "expected a list of rows")
        rows = [_int_list(r, f"{path}.table[{i}]") for i, r in enumerate(t)]
        gens = _int_list(doc["generators"], f"{path}.generators") if "generators" in doc else None
        return _located(f"{path}.table", make_group, rows, gens, name=name)
    if kind == "permutations":
        ps = doc["permutations"]
        if not isinstance(ps, list):
            raise SchemaError(f"{path}.permutations", "expected a list of permutations")
        perms = [_int_list(p, f"{path}.permutations[{i}]") for i, p in enumerate(ps)]
        G = _located(f"{path}.permutations", group_from_permutations, perms, name)
        return _located(f"{path}.permutations", make_group, G.table, G.generators, name=name)
    if kind == "quaternion":
        return quaternion_group()
    if kind == "product":
        parts = doc["product"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise SchemaError(f"{path}.product", "expected a list of two groups")
        return direct_product(parse_group(parts[0], f"{path}.product[0]"),
                              parse_group(parts[1], f"{path}.product[1]"))
    n = _int(doc[kind], f"{path}.{kind}")
    if n < 1:
        raise SchemaError(f"{path}.{kind}", "size must be positive")
    if kind == "cyclic":
        return cyclic_group(n)
    if kind == "symmetric":
        return symmetric_group(n)
    if n < 3:
        raise SchemaError(f"{path}.dihedral", "dihedral groups need n >= 3")
    return dihedral_group(n)


def parse_module(doc: Any, G: FiniteGroup, path: str) -> GModule:
    """{orders: [...], action: {element: matrix}}; a missing action is trivial.

    Action keys are element indices, or ``g0``, ``g1``, ... for the group's
    listed generators (handy for permutation groups, whose element indices
    are assigned internally).
    """
    orders = _int_list(_need(doc, "orders", path), f"{path}.orders")
    if any(o <= 0 for o in orders):
        raise SchemaError(f"{path}.orders", "module orders must be positive (finite modules)")
    k = len(orders)
    action = doc.get("action") or {}
    if not isinstance(action, dict):
        raise SchemaError(f"{path}.action", "expected a mapping element -> matrix")
    mats = {}
    for g, m in action.items():
        try:
            if isinstance(g, str) and g.startswith("g"):
                gi = G.generators[int(g[1:])]
            else:
                gi = int(g)
        except (TypeError, ValueError, IndexError):
            raise SchemaError(f"{path}.action", f"key {g!r} is neither an element index "
                                                f"nor a generator g0, g1, ...") from None
        if not 0 <= gi < G.order:
            raise SchemaError(f"{path}.action.{g}", f"element {gi} outside the group")
        mats[gi] = _matrix(m, k, k, f"{path}.action.{g}")
    if not mats:
        return _located(path, trivial_module, G, orders)
    return _located(path, make_module, G, orders, mats)


def parse_group_tower(doc: Any, path: str = "tower") -> GroupTower:
    """cyclic_p: {p, depth, start} | constant: {group, depth} |
    levels: [group, ...] with maps: [[images of level i+1 in level i], ...]."""
    if not isinstance(doc, dict):
        raise SchemaError(path, "a tower must be a mapping")
    if "cyclic_p" in doc:
        c = doc["cyclic_p"]
        p = _int(_need(c, "p", f"{path}.cyclic_p"), f"{path}.cyclic_p.p")
        d = _int(_need(c, "depth", f"{path}.cyclic_p"), f"{path}.cyclic_p.depth")
        s = _int(c.get("start", 0), f"{path}.cyclic_p.start")
        if p < 2 or d < 0 or s < 0:
            raise SchemaError(f"{path}.cyclic_p", "need p >= 2, depth >= 0, start >= 0")
        return cyclic_p_tower(p, d, s)
    if "constant" in doc:
        c = doc["constant"]
        G = parse_group(_need(c, "group", f"{path}.constant"), f"{path}.constant.group")
        d = _int(_need(c, "depth", f"{path}.constant"), f"{path}.constant.depth")
        if d < 0:
            raise SchemaError(f"{path}.constant.depth", "depth must be non-negative")
        return constant_group_tower(G, d)
    levels = _need(doc, "levels", path)
    if not isinstance(levels, list) or not levels:
        raise SchemaError(f"{path}.levels", "expected a non-empty list of groups")
    groups = [parse_group(g, f"{path}.levels[{i}]") for i, g in enumerate(levels)]
    maps_doc = doc.get("maps", [])
    if not isinstance(maps_doc, list) or len(maps_doc) != len(groups) - 1:
        raise SchemaError(f"{path}.maps", f"expected {len(groups) - 1} element maps")
    maps = []
    for i, m in enumerate(maps_doc):
        images = _int_list(m, f"{path}.maps[{i}]")
        maps.append(_located(f"{path}.maps[{i}]", QuotientMap, groups[i + 1], groups[i],
                             tuple(images)))
    return _located(path, GroupTower, tuple(groups), tuple(maps))


def parse_module_tower(doc: Any, gt: GroupTower, path: str = "modules") -> ModuleTower:
    """constant: {orders} (trivial action everywhere, identity maps) |
    levels: [module, ...] with maps: [matrix level i+1 -> level i, ...]."""
    if not isinstance(doc, dict):
        raise SchemaError(path, "a module tower must be a mapping")
    if "constant" in doc:
        c = doc["constant"]
        orders = _int_list(_need(c, "orders", f"{path}.constant"), f"{path}.constant.orders")
        A = AbGroup(orders)
        mods = [_located(f"{path}.constant", trivial_module, G, A) for G in gt.groups]
        maps = [AbHom.identity(A) for _ in range(gt.depth)]
        return ModuleTower(tuple(mods), tuple(maps))
    levels = _need(doc, "levels", path)
    if not isinstance(levels, list):
        raise SchemaError(f"{path}.levels", "expected a list of modules")
    if len(levels) != len(gt.groups):
        raise DepthMismatch(f"{path}.levels: {len(levels)} modules for a tower of "
                            f"{len(gt.groups)} groups")
    mods = [parse_module(m, gt.groups[i], f"{path}.levels[{i}]") for i, m in enumerate(levels)]
    maps_doc = doc.get("maps", [])
    if not isinstance(maps_doc, list) or len(maps_doc) != len(mods) - 1:
        raise SchemaError(f"{path}.maps", f"expected {len(mods) - 1} transition matrices")
    maps = []
    for i, m in enumerate(maps_doc):
        s, t = mods[i + 1].abgroup, mods[i].abgroup
        mat = _matrix(m, t.ngens, s.ngens, f"{path}.maps[{i}]")
        maps.append(_located(f"{path}.maps[{i}]", AbHom, s, t, mat))
    return _located(path, ModuleTower, tuple(mods), tuple(maps))


def parse_complexes(doc: Any, gt: GroupTower, path: str = "complexes") -> OrbitInput:
    """levels: [{modules: [...], differentials: [...]}, ...] and
    maps: [[matrix per degree], ...] (level i+1 -> level i)."""
    levels = _need(doc, "levels", path)
    if not isinstance(levels, list) or len(levels) != len(gt.groups):
        raise DepthMismatch(f"{path}.levels: expected {len(gt.groups)} complexes")
    cs = []
    for i, lv in enumerate(levels):
        lp = f"{path}.levels[{i}]"
        mods_doc = _need(lv, "modules", lp)
        if not isinstance(mods_doc, list) or not mods_doc:
            raise SchemaError(f"{lp}.modules", "expected a non-empty list of modules")
        mods = [parse_module(m, gt.groups[i], f"{lp}.modules[{q}]") for q, m in enumerate(mods_doc)]
        ds_doc = lv.get("differentials", [])
        if not isinstance(ds_doc, list) or len(ds_doc) != len(mods) - 1:
            raise SchemaError(f"{lp}.differentials", f"expected {len(mods) - 1} matrices")
        ds = []
        for q, m in enumerate(ds_doc, start=1):
            s, t = mods[q].abgroup, mods[q - 1].abgroup
            mat = _matrix(m, t.ngens, s.ngens, f"{lp}.differentials[{q - 1}]")
            ds.append(_located(f"{lp}.differentials[{q - 1}]", AbHom, s, t, mat))
        cs.append(_located(lp, EquivariantComplex, tuple(mods), tuple(ds)))
    maps_doc = doc.get("maps", [])
    if not isinstance(maps_doc, list) or len(maps_doc) != len(cs) - 1:
        raise SchemaError(f"{path}.maps", f"expected {len(cs) - 1} lists of matrices")
    ts = []
    for i, fs in enumerate(maps_doc):
        mp = f"{path}.maps[{i}]"
        if not isinstance(fs, list) or len(fs) != len(cs[i].modules):
            raise SchemaError(mp, "expected one matrix per degree")
        row = []
        for q, m in enumerate(fs):
            s, t = cs[i + 1].modules[q].abgroup, cs[i].modules[q].abgroup
            row.append(_located(f"{mp}[{q}]", AbHom, s, t,
                                _matrix(m, t.ngens, s.ngens, f"{mp}[{q}]")))
        ts.append(tuple(row))
    return _located(path, OrbitInput, gt, tuple(cs), tuple(ts))


def parse_bicomplex(doc: Any, path: str = "bicomplex") -> Bicomplex:
    """entries: [{at: [p, q], orders: [...]}], dh / dv: [{from: [p, q], matrix}]."""
    ents = _need(doc, "entries", path)
    if not isinstance(ents, list) or not ents:
        raise SchemaError(f"{path}.entries", "expected a non-empty list")
    entries = {}
    for i, e in enumerate(ents):
        ep = f"{path}.entries[{i}]"
        at = _int_list(_need(e, "at", ep), f"{ep}.at")
        if len(at) != 2 or min(at) < 0:
            raise SchemaError(f"{ep}.at", "expected [p, q] with p, q >= 0")
        orders = _int_list(_need(e, "orders", ep), f"{ep}.orders")
        if any(o <= 0 for o in orders):
            raise SchemaError(f"{ep}.orders", "entries must be finite")
        entries[tuple(at)] = AbGroup(orders)
    P = max(p for p, _ in entries)
    Q = max(q for _, q in entries)

    def entry(pq):
        return entries.get(pq, AbGroup(()))

    maps = {}
    for key, step in (("dh", (-1, 0)), ("dv", (0, -1))):
        out = {}
        for i, e in enumerate(doc.get(key, []) or []):
            ep = f"{path}.{key}[{i}]"
            src = tuple(_int_list(_need(e, "from", ep), f"{ep}.from"))
            tgt = (src[0] + step[0], src[1] + step[1])
            if len(src) != 2 or not (0 <= tgt[0] <= P and 0 <= tgt[1] <= Q and
                                     src[0] <= P and src[1] <= Q):
                raise SchemaError(f"{ep}.from", "differential leaves the first quadrant grid")
            S, T = entry(src), entry(tgt)
            out[src] = _located(ep, AbHom, S, T, _matrix(_need(e, "matrix", ep),
                                                         T.ngens, S.ngens, f"{ep}.matrix"))
        maps[key] = out
    return _located(path, Bicomplex, entries, maps["dh"], maps["dv"],
                    bool(doc.get("truncated_p", False)), bool(doc.get("truncated_q", False)))


def load_document(text: str, path: str = "<input>") -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError(path, f"not valid YAML/JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError(path, "top level must be a mapping")
    return doc


@dataclass
class Parsed:
    group: FiniteGroup | None = None
    module: GModule | None = None
    tower: GroupTower | None = None
    modules: ModuleTower | None = None
    orbit: OrbitInput | None = None
    bicomplex: Bicomplex | None = None


def parse_input(text: str, depth: int | None = None) -> Parsed:
    """Validate a document into library objects.

    Recognized top-level keys: ``group`` + ``module`` (single module),
    ``tower`` + ``modules`` (tower pair), ``tower`` + ``complexes`` (orbit
    input), ``bicomplex``. ``depth`` truncates towers.
    """
    doc = load_document(text)
    out = Parsed()
    if "group" in doc:
        out.group = parse_group(doc["group"], "group")
        if "module" in doc:
            out.module = parse_module(doc["module"], out.group, "module")
    if "tower" in doc:
        full = parse_group_tower(doc["tower"], "tower")
        if depth is not None and depth > full.depth:
            raise SchemaError("tower", f"requested depth {depth} exceeds tower depth {full.depth}")
        d = full.depth if depth is None else depth
        out.tower = full.truncate(d)
        if "modules" in doc:
            mt = parse_module_tower(doc["modules"], full, "modules")
            out.modules = ModuleTower(mt.modules[:d + 1], mt.maps[:d])
        if "complexes" in doc:
            inp = parse_complexes(doc["complexes"], full, "complexes")
            out.orbit = OrbitInput(out.tower, inp.complexes[:d + 1], inp.transitions[:d])
    if "bicomplex" in doc:
        out.bicomplex = parse_bicomplex(doc["bicomplex"], "bicomplex")
    return out


# ------------------------------------------------------------------ serialization

def finab_doc(A: AbGroup) -> dict:
    C = A if isinstance(A, FinAb) else A.canonical()
    return {"invariant_factors": list(C.invariant_factors), "text": str(C)}


def hom_doc(f: AbHom) -> dict:
    return {"source": list(f.source.orders), "target": list(f.target.orders),
            "matrix": f.matrix.tolist()}


def lim_doc(L: LimResult) -> dict:
    return {
        "kind": L.kind,
        "value": finab_doc(L.value) if L.value is not None else None,
        "stable_from": L.stable_from,
        "window": L.window,
        "effective_lim": finab_doc(L.effective_lim) if L.effective_lim is not None else None,
        "effective_from": L.effective_from,
        "certified": finab_doc(L.certified) if L.certified is not None else None,
        "non_stabilized": L.non_stabilized,
        "text": L.describe(),
    }


def group_doc(G: FiniteGroup) -> dict:
    return {"table": [list(r) for r in G.table], "generators": list(G.generators)}


def module_doc(M: GModule) -> dict:
    return {"orders": list(M.abgroup.orders),
            "action": {str(g): M.action[g].tolist() for g in M.group.generators}}


def tower_doc(gt: GroupTower) -> dict:
    return {"levels": [group_doc(G) for G in gt.groups],
            "maps": [list(q.images) for q in gt.maps]}


def module_tower_doc(mt: ModuleTower) -> dict:
    return {"levels": [module_doc(M) for M in mt.modules],
            "maps": [f.matrix.tolist() for f in mt.maps]}


def complexes_doc(inp: OrbitInput) -> dict:
    return {"levels": [{"modules": [module_doc(M) for M in C.modules],
                        "differentials": [d.matrix.tolist() for d in C.differentials]}
                       for C in inp.complexes],
            "maps": [[f.matrix.tolist() for f in fs] for fs in inp.transitions]}


def bicomplex_doc(B: Bicomplex) -> dict:
    ents = sorted(B.entries)
    return {"entries": [{"at": list(pq), "orders": list(B.entries[pq].orders)}
                        for pq in ents if B.entries[pq].ngens],
            "dh": [{"from": list(pq), "matrix": B.dh[pq].matrix.tolist()}
                   for pq in sorted(B.dh) if not B.dh[pq].is_zero()],
            "dv": [{"from": list(pq), "matrix": B.dv[pq].matrix.tolist()}
                   for pq in sorted(B.dv) if not B.dv[pq].is_zero()],
            "truncated_p": B.truncated_p, "truncated_q": B.truncated_q}


def _echo(parsed: Parsed) -> dict:
    out: dict = {}
    if parsed.group is not None:
        out["group"] = group_doc(parsed.group)
    if parsed.module is not None:
        out["module"] = module_doc(parsed.module)
    if parsed.tower is not None:
        out["tower"] = tower_doc(parsed.tower)
    if parsed.modules is not None:
        out["modules"] = module_tower_doc(parsed.modules)
    if parsed.orbit is not None:
        out["complexes"] = complexes_doc(parsed.orbit)
    if parsed.bicomplex is not None:
        out["bicomplex"] = bicomplex_doc(parsed.bicomplex)
    return out


# ------------------------------------------------------------------ jobs

def _require(obj, what: str, command: str):
    if obj is None:
        raise SchemaError(what, f"required by {command}")
    return obj


def _check_cap(G: FiniteGroup, k: int, L: int, job: JobSpec, where: str) -> None:
    """Exceeding the cap is an error; the reduced models are measured by their cells."""
    if job.method in ("normalized", "unnormalized"):
        size = G.order ** L * max(k, 1)
    else:
        size = len(reduced_bar(G, max(L - 1, 0), job.method).cells(L)) * max(k, 1)
    if size > job.cap:
        raise SizeOverflow(size, job.cap, where)


def _run_group_homology(job: JobSpec, parsed: Parsed) -> tuple[dict, list[str]]:
    M = _require(parsed.module, "module", job.command)
    lo, hi = job.degrees
    rows, lines = [], []
    for p in range(lo, hi + 1):
        _check_cap(M.group, M.ngens, p + 1, job, f"bar complex up to degree {p + 1}")
        H = bar_homology(M, p, job.method)
        rows.append({"degree": p, "homology": finab_doc(H.group),
                     "generator_lifts": [sorted(([list(c), [int(x) for x in v]]
                                                 for c, v in H.lift(j).items()))
                                         for j in range(H.group.ngens)]})
        lines.append(f"H_{p} = {H.group}")
    return {"results": rows}, lines


def _run_continuous(job: JobSpec, parsed: Parsed) -> tuple[dict, list[str]]:
    gt = _require(parsed.tower, "tower", job.command)
    mt = _require(parsed.modules, "modules", job.command)
    pair = validate_tower_pair(gt, mt)
    lo, hi = job.degrees
    rows, lines = [], []
    for p in range(lo, hi + 1):
        for i, (G, M) in enumerate(zip(gt.groups, mt.modules)):
            _check_cap(G, M.ngens, p + 1, job, f"level {i}, degree {p + 1}")
        res = continuous_homology(pair, p, job.window, job.method)
        rows.append({
            "degree": p,
            "levels": [finab_doc(H) for H in res.tower.objects],
            "transitions": [hom_doc(f) for f in res.tower.maps],
            "lim": lim_doc(res.lim),
            "lim1": finab_doc(res.lim1_report),
            "lim1_levels_finite": res.lim1_levels,
            "mittag_leffler": res.ml_witness,
            "warning": res.warning,
        })
        lines.append(f"p={p}: {res.describe()}")
        if res.warning:
            lines.append(f"  warning: {res.warning}")
    return {"results": rows}, lines


def _orbit_rows(res) -> tuple[list[dict], list[str]]:
    rows, lines = [], []
    for n in res.degrees:
        rows.append({"degree": n, "levels": [finab_doc(H) for H in res.levels[n]],
                     "lim": lim_doc(res.lims[n])})
        lines.append(f"n={n}: {res.lims[n].describe()}")
    return rows, lines


def _e2_doc(res) -> list[dict]:
    return [{"p": e.p, "q": e.q, "levels": [finab_doc(x) for x in e.levels],
             "levels_bar": [finab_doc(x) for x in e.levels_bar],
             "lim": lim_doc(e.lim), "continuous": lim_doc(e.continuous), "agree": e.agree}
            for e in res.e2]


def _stability_doc(st) -> dict:
    return {"depth": st.depth, "compared_with": st.compared_with, "stable": st.stable,
            "entries": [{"p": p, "q": q, "agree": v} for (p, q), v in sorted(st.entries.items())]}


def _guard_orbit(job: JobSpec, gt: GroupTower, ks: list[int], P: int) -> None:
    for i, G in enumerate(gt.groups):
        _check_cap(G, ks[i], P, job, f"orbit bicomplex at level {i}")


def _run_orbit(job: JobSpec, parsed: Parsed) -> tuple[dict, list[str]]:
    inp = _require(parsed.orbit, "complexes", job.command)
    lo, hi = job.degrees
    _guard_orbit(job, inp.groups, [sum(M.ngens for M in C.modules) for C in inp.complexes], hi + 1)
    res = orbit_homology(inp, hi, job.method, job.window)
    rows, lines = _orbit_rows(res)
    rows = rows[lo:]
    lines = lines[lo:]
    lines.append(f"E2 check: {res.e2_verdict}; reliable through degree {res.reliable_through}")
    return {"results": rows, "e2_check": {"verdict": res.e2_verdict, "entries": _e2_doc(res)},
            "stability": _stability_doc(res.stability),
            "reliable_through": res.reliable_through}, lines


def _run_em_orbit(job: JobSpec, parsed: Parsed) -> tuple[dict, list[str]]:
    gt = _require(parsed.tower, "tower", job.command)
    mt = _require(parsed.modules, "modules", job.command)
    lo, hi = job.degrees
    _guard_orbit(job, gt, [M.ngens for M in mt.modules], hi + 1)
    res = em_orbit_homology(gt, mt, hi, job.method, job.window)
    rows, lines = _orbit_rows(res.orbit)
    for row, ch in zip(rows, res.continuous):
        row["continuous"] = lim_doc(ch.lim)
    rows, lines = rows[lo:], lines[lo:]
    lines.append(f"E2 check: {res.orbit.e2_verdict}; collapses at E_{res.collapse_page}; "
                 f"reliable through degree {res.orbit.reliable_through}")
    return {"results": rows,
            "e2_check": {"verdict": res.orbit.e2_verdict, "entries": _e2_doc(res.orbit)},
            "collapse": {"page": res.collapse_page,
                         "verdict": f"collapses at E_{res.collapse_page}"},
            "stability": _stability_doc(res.orbit.stability),
            "reliable_through": res.orbit.reliable_through}, lines


def _run_ss_pages(job: JobSpec, parsed: Parsed) -> tuple[dict, list[str]]:
    B = _require(parsed.bicomplex, "bicomplex", job.command)
    S = ss_pages(B, job.pages)
    pages = []
    lines = []
    for r in sorted(S.pages):
        ents = [{"p": p, "q": q, "group": finab_doc(A)}
                for (p, q), A in sorted(S.pages[r].items()) if A.ngens]
        diffs = [{"p": p, "q": q, **hom_doc(d)}
                 for (p, q), d in sorted(S.differentials.get(r, {}).items()) if not d.is_zero()]
        pages.append({"r": r, "entries": ents, "nonzero_differentials": diffs})
        if r <= max(job.pages, S.r_infinity):
            body = ", ".join(f"({e['p']},{e['q']}): {e['group']['text']}" for e in ents) or "0"
            lines.append(f"E_{r}: {body}")
    for row in S.convergence:
        flag = "ok" if row["match"] else "MISMATCH"
        rel = "" if row["reliable"] else " (outside reliable range)"
        lines.append(f"n={row['degree']}: |E_inf| = {row['e_infinity_order']}, "
                     f"|H_n(Tot)| = {row['total_order']} {flag}{rel}")
    lines.append(S.verdict())
    return {"pages": pages, "r_max": S.r_max, "r_infinity": S.r_infinity,
            "convergence": S.convergence, "page_checks_failed": len(S.page_checks),
            "verdict": S.verdict(), "collapse_page": S.collapse_page,
            "reliable_through": S.reliable_through}, lines


RUNNERS = {"group-homology": _run_group_homology, "continuous-homology": _run_continuous,
           "orbit": _run_orbit, "em-orbit": _run_em_orbit, "ss-pages": _run_ss_pages}


def run(job: JobSpec, text: str | None = None) -> tuple[dict, str]:
    """Execute a job; returns the structured report and the table rendering."""
    if text is None:
        with open(job.input, encoding="utf-8") as fh:
            text = fh.read()
    parsed = parse_input(text, job.depth)
    body, lines = RUNNERS[job.command](job, parsed)
    report = {
        "command": job.command,
        "input_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "input": _echo(parsed),
        "degrees": list(job.degrees),
        "depth": job.depth,
        "window": job.window,
        "method": job.method,
        "cap": job.cap,
        **body,
    }
    return report, "\n".join(lines)


def render_structured(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# ------------------------------------------------------------------ entry point

def _degree_range(args) -> tuple[int, int]:
    if args.degrees:
        try:
            a, b = args.degrees.split("..")
            return int(a), int(b)
        except ValueError:
            raise SchemaError("--degrees", "expected A..B") from None
    if args.degree is not None:
        return args.degree, args.degree
    return 0, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="profhom", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="YAML or JSON document")
    g = ap.add_mutually_exclusive_group()
    g.add_argument("--degree", type=int, help="a single degree")
    g.add_argument("--degrees", help="degree range A..B (default 0..3)")
    ap.add_argument("--depth", type=int, help="truncate towers at this depth")
    ap.add_argument("--cap", type=int, default=DEFAULT_POWER_CAP,
                    help="largest admissible chain group, in copies of the module")
    ap.add_argument("--format", choices=("table", "structured"), default="table")
    ap.add_argument("--pages", type=int, default=2, help="r_max for ss-pages")
    ap.add_argument("--window", type=int, default=DEFAULT_WINDOW,
                    help="consecutive isomorphisms required for stabilization")
    ap.add_argument("--method", choices=METHODS, default="auto",
                    help="model of the bar complex")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = JobSpec(args.command, args.input, _degree_range(args), args.depth, args.cap,
                      args.format, args.pages, args.window, args.method)
        report, table = run(job)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValidationError as exc:
        print(f"validation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SizeOverflow as exc:
        print(f"size overflow: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except E2Mismatch as exc:
        print(f"E2 mismatch: {exc}", file=sys.stderr)
        return EXIT_E2
    except CollapseViolation as exc:
        print(f"collapse violation: {exc}", file=sys.stderr)
        return EXIT_COLLAPSE
    except ProfhomError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_OTHER
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    sys.stdout.write(render_structured(report) if job.format == "structured" else table + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
