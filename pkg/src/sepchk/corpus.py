"""The example corpus: builders, on-disk format, and the expectation runner.

Each entry is a JSON file naming its complex, map, pair and cloud files
(paths relative to the entry) plus an ``expect`` block. ``run_entry`` computes
the report; ``mismatches`` lists every expected field the report disagrees
with.
"""

from __future__ import annotations

import json
import time
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from sepchk import nerve, separation, simplicial as sc, theorems
from sepchk.errors import FormatError
from sepchk.simplicial import CellDesignation, SimplicialComplex

REPORT_KEYS = ("entry", "thm1", "thm2", "injective_on_U", "components", "incident",
               "closure_pass", "coverage", "duality_pass")
BOX2 = [-1.0, -1.0, 1.0, 1.0]
BOX3 = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]


def shipped_corpus_dir() -> Path:
    return Path(str(resources.files("sepchk") / "data" / "corpus"))


# -- embeddings ---------------------------------------------------------------------


def _ring(k: int, r: float) -> np.ndarray:
    th = 2 * np.pi * np.arange(k) / k
    return r * np.c_[np.cos(th), np.sin(th)]


def circle_embedding(k: int = 8, r: float = 0.8):
    return sc.circle(k), _ring(k, r)


def theta_embedding():
    x = sc.theta_graph(3)
    coords = np.array([(-0.8, 0), (0.8, 0), (-0.4, 0.6), (0.4, 0.6),
                       (-0.3, 0.0), (0.3, 0.0), (-0.4, -0.6), (0.4, -0.6)])
    return x, coords


def whisker_embedding():
    x = sc.circle_with_whisker(8, 2)
    return x, np.vstack([_ring(8, 0.6), [(0.75, 0.0), (0.9, 0.0)]])


def projected_circle_embedding(k: int = 4):
    x = sc.circle(2 * k)
    th = 2 * np.pi * np.arange(2 * k) / (2 * k)
    return x, np.c_[0.8 * np.cos(th), np.zeros(2 * k)]


def cone_extension(x: SimplicialComplex, coords: np.ndarray, apex):
    cx, _ = sc.cone(x)
    return cx, np.vstack([coords, [apex]])


def torus_embedding(p: int = 8, q: int = 6, R: float = 0.6, r: float = 0.25):
    x = sc.torus(p, q)
    pts = np.zeros((p * q, 3))
    for i in range(p):
        for j in range(q):
            a, b = 2 * np.pi * i / p, 2 * np.pi * j / q
            pts[i * q + j] = ((R + r * np.cos(b)) * np.cos(a), (R + r * np.cos(b)) * np.sin(a), r * np.sin(b))
    return x, pts


# -- building the shipped corpus ----------------------------------------------------


def _entry(name, x, cell, *, coords=None, xhat=None, ext=None, h=None, box=None, expect):
    return {"name": name, "x": x, "cell": list(cell), "coords": coords, "xhat": xhat,
            "ext": ext, "h": h, "box": box, "expect": expect}


def corpus_entries() -> list:
    """In-memory definitions of the shipped entries (sorted by name)."""
    nil = {"injective_on_U": None, "components": None, "incident": None,
           "closure_pass": None, "covers": None, "duality_pass": None}
    out = []

    x, f = circle_embedding()
    cx, F = cone_extension(x, f, (0.0, 0.0))
    out.append(_entry("circle", x, (0, 1), coords=f, xhat=cx, ext=F, h=0.05, box=BOX2, expect={
        "thm1": True, "thm2": True, "injective_on_U": True, "components": 2, "incident": 2,
        "closure_pass": True, "covers": "any", "duality_pass": True}))

    x, f = whisker_embedding()
    out.append(_entry("circle_with_whisker", x, (8, 9), coords=f, h=0.05, box=BOX2, expect={
        "thm1": False, "thm2": None, "injective_on_U": True, "components": 2, "incident": 1,
        "closure_pass": False, "covers": None, "duality_pass": True}))

    x, f = projected_circle_embedding()
    out.append(_entry("projected_circle", x, (0, 1), coords=f, h=0.05, box=BOX2, expect={
        "thm1": True, "thm2": None, "injective_on_U": False, "components": 1, "incident": None,
        "closure_pass": None, "covers": None, "duality_pass": True}))

    x, f = theta_embedding()
    out.append(_entry("theta", x, (4, 5), coords=f, h=0.05, box=BOX2, expect={
        "thm1": True, "thm2": None, "injective_on_U": True, "components": 3, "incident": 2,
        "closure_pass": True, "covers": None, "duality_pass": True}))

    cx, F = cone_extension(x, f, (0.0, 0.3))
    out.append(_entry("cone_over_theta", x, (4, 5), coords=f, xhat=cx, ext=F, h=0.05, box=BOX2, expect={
        "thm1": True, "thm2": True, "injective_on_U": True, "components": 3, "incident": 2,
        "closure_pass": True, "covers": "any", "duality_pass": True}))

    k = 8
    ann = sc.annulus(k)
    inner = sc.annulus_boundary(k, "inner")
    ring = _ring(k, 0.8)
    out.append(_entry("annulus_k_trivial", inner, (0, 1), coords=ring, xhat=ann,
                      ext=np.vstack([ring, ring]), h=0.05, box=BOX2, expect={
                          "thm1": True, "thm2": False, "injective_on_U": True, "components": 2,
                          "incident": 2, "closure_pass": True, "covers": "none", "duality_pass": True}))

    both = sc.annulus_boundary(k, "both")
    two = np.vstack([ring, _ring(k, 0.4)])
    out.append(_entry("annulus_full_boundary", both, (0, 1), coords=two, xhat=ann, ext=two,
                      h=0.05, box=BOX2, expect={
                          "thm1": True, "thm2": True, "injective_on_U": True, "components": 3,
                          "incident": 2, "closure_pass": True, "covers": "any", "duality_pass": True}))

    kb = sc.klein_bottle()
    top = sorted(kb.simplices(2))[0]
    out.append(_entry("klein_bottle", kb, top, expect={"thm1": True, "thm2": None, **nil}))
    out.append(_entry("cone_over_klein", kb, top, xhat=sc.cone(kb)[0],
                      expect={"thm1": True, "thm2": True, **nil}))

    x, f = torus_embedding()
    cx, F = cone_extension(x, f, (0.0, 0.0, 0.0))
    out.append(_entry("torus_r3", x, sorted(x.simplices(2))[0], coords=f, xhat=cx, ext=F,
                      h=0.05, box=BOX3, expect={
                          "thm1": True, "thm2": True, "injective_on_U": True, "components": 2,
                          "incident": 2, "closure_pass": True, "covers": "any", "duality_pass": None}))
    return sorted(out, key=lambda e: e["name"])


WARSAW = {"name": "warsaw", "eps": [nerve.DEFAULT_WINDOW[0], nerve.DEFAULT_WINDOW[1]], "mode": "cech",
          "expect": {"rank_X": 1, "rank_X_minus_U": 0, "stable": True}}


def write_corpus(directory) -> list:
    """Write every shipped entry into ``directory``; returns the entry paths."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for e in corpus_entries():
        name = e["name"]
        meta = {"name": name, "complex": f"{name}.cx", "cell": e["cell"]}
        sc.write_complex(e["x"], d / meta["complex"])
        if e["coords"] is not None:
            meta["map"] = f"{name}.map"
            separation.write_map(separation.PLMap(e["x"], e["coords"]), d / meta["map"])
            meta["grid"] = {"box": e["box"], "h": e["h"]}
        if e["xhat"] is not None:
            meta["pair"] = f"{name}.pair"
            sc.write_complex(e["xhat"], d / f"{name}_hat.cx")
            cell = " ".join(map(str, e["cell"]))
            (d / meta["pair"]).write_text(f"ambient {name}_hat.cx\nsub {name}.cx\ncell {cell}\n")
            if e["ext"] is not None:
                meta["extension_map"] = f"{name}_hat.map"
                separation.write_map(separation.PLMap(e["xhat"], e["ext"]), d / meta["extension_map"])
        meta["expect"] = e["expect"]
        p = d / f"{name}.json"
        p.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        paths.append(p)

    cloud = nerve.warsaw_circle_sample()
    nerve.write_cloud(cloud, d / "warsaw.cloud")
    meta = {"name": "warsaw", "cloud": "warsaw.cloud", "nerve": {"eps": WARSAW["eps"], "mode": WARSAW["mode"]},
            "expect": WARSAW["expect"]}
    p = d / "warsaw.json"
    p.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    paths.append(p)
    return sorted(paths)


# -- running ---------------------------------------------------------------------------


def load_entry(path) -> dict:
    path = Path(path)
    try:
        meta = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path.name}: {exc}") from None
    if not isinstance(meta, dict) or "name" not in meta or "expect" not in meta:
        raise FormatError(f"{path.name}: entry needs 'name' and 'expect'")
    meta["_dir"] = path.parent
    return meta


def _empty_report(name: str) -> dict:
    return {k: None for k in REPORT_KEYS} | {"entry": name}


def run_entry(meta: dict, timings: bool = False) -> dict:
    base: Path = meta["_dir"]
    rep = _empty_report(meta["name"])
    clock = {}
    t0 = time.perf_counter()
    if "complex" in meta:
        x = sc.read_complex(base / meta["complex"])
        u = CellDesignation(tuple(meta["cell"]))
        rep["thm1"] = theorems.check_thm1(x, u).to_dict()
        pair = f = F = None
        if "pair" in meta:
            pair = sc.read_pair(base / meta["pair"])
            if pair.sub.all_simplices != x.all_simplices:
                raise FormatError(f"{meta['name']}: pair sub-complex differs from the entry complex")
            rep["thm2"] = theorems.check_thm2(pair.ambient, x, u).to_dict()
        clock["hypotheses"] = time.perf_counter() - t0
        if "map" in meta:
            t1 = time.perf_counter()
            f = separation.read_map(base / meta["map"], x)
            if "extension_map" in meta:
                F = separation.read_map(base / meta["extension_map"], pair.ambient)
            grid = separation.Grid.from_box(meta["grid"]["box"], meta["grid"]["h"])
            sim = separation.simulate(f, u, grid, F)
            rep.update({k: v for k, v in sim.items() if not k.startswith("_")})
            clock["simulation"] = time.perf_counter() - t1
    if "cloud" in meta:
        t1 = time.perf_counter()
        cloud = nerve.read_cloud(base / meta["cloud"])
        e1, e2 = meta["nerve"]["eps"]
        mode = meta["nerve"].get("mode", "cech")
        minus = cloud.without("U")
        rep["nerve"] = {
            "eps": [e1, e2],
            "rank_X": nerve.cech_rank_at_scale(cloud, e1, 1, mode),
            "rank_X_minus_U": nerve.cech_rank_at_scale(minus, e1, 1, mode),
            "stable": nerve.stability_check(cloud, e1, e2, 1, mode),
        }
        clock["nerve"] = time.perf_counter() - t1
    if timings:
        rep["timings"] = {k: round(v, 4) for k, v in clock.items()}
    return rep


def _covers(rep: dict) -> Optional[str]:
    cov = rep.get("coverage")
    if cov is None:
        return None
    return "any" if 1.0 in (cov["v1"], cov["v2"]) else "none"


def mismatches(rep: dict, expect: dict) -> list:
    """Human-readable list of expected fields the report disagrees with."""
    got = {
        "thm1": None if rep["thm1"] is None else rep["thm1"]["holds"],
        "thm2": None if rep["thm2"] is None else rep["thm2"]["holds"],
        "injective_on_U": rep["injective_on_U"],
        "components": rep["components"],
        "incident": None if rep["incident"] is None else len(rep["incident"]),
        "closure_pass": rep["closure_pass"],
        "covers": _covers(rep),
        "duality_pass": rep["duality_pass"],
    }
    if "nerve" in rep:
        got.update({k: rep["nerve"][k] for k in ("rank_X", "rank_X_minus_U", "stable")})
    return [f"{k}: expected {v!r}, got {got.get(k)!r}" for k, v in sorted(expect.items()) if got.get(k) != v]


def run_corpus(directory, timings: bool = False) -> tuple:
    """``(reports, failures)`` where failures maps entry name to mismatch lines."""
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise FormatError(f"no corpus entries in {directory}")
    reports, failures = [], {}
    for p in paths:
        meta = load_entry(p)
        rep = run_entry(meta, timings)
        reports.append(rep)
        bad = mismatches(rep, meta["expect"])
        if bad:
            failures[meta["name"]] = bad
    reports.sort(key=lambda r: r["entry"])
    return reports, failures
