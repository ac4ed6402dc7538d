"""``sepchk`` command line.

Exit codes: 0 when the hypothesis holds or the run passes, 2 when a
hypothesis fails (a valid outcome), 1 on bad input, processing errors and
corpus mismatches.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from sepchk import corpus, nerve, separation, simplicial as sc, theorems
from sepchk.errors import FormatError, SepchkError
from sepchk.simplicial import CellDesignation

HOLDS, FAILS, ERROR = 0, 2, 1


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(report, args) -> None:
    text = _dump(report)
    sys.stdout.write(text)
    if getattr(args, "json", None):
        Path(args.json).write_text(text)


def _cell(args, fallback=None) -> CellDesignation:
    if args.cell:
        return CellDesignation(tuple(args.cell))
    if fallback is None:
        raise FormatError("no cell given (use --cell)")
    return fallback


def cmd_thm1(args) -> int:
    x = sc.read_complex(args.complex)
    rep = theorems.check_thm1(x, _cell(args))
    _emit({"entry": Path(args.complex).stem, "thm1": rep.to_dict()}, args)
    return HOLDS if rep.holds else FAILS


def cmd_thm2(args) -> int:
    pair = sc.read_pair(args.pair)
    rep = theorems.check_thm2(pair.ambient, pair.sub, _cell(args, pair.cell))
    out = rep.to_dict()
    if rep.alpha is not None:
        out["alpha"] = [int(b) for b in rep.alpha]
    _emit({"entry": Path(args.pair).stem, "thm2": out}, args)
    return HOLDS if rep.holds else FAILS


def cmd_simulate(args) -> int:
    x = sc.read_complex(args.complex)
    f = separation.read_map(args.map, x)
    u = _cell(args)
    d = f.ambient_dim
    box = args.box or ([-1.0] * d + [1.0] * d)
    if len(box) == 6:  # x0 y0 x1 y1 z0 z1 on the command line
        box = [box[0], box[1], box[4], box[2], box[3], box[5]]
    grid = separation.Grid.from_box(box, args.h)
    report = {k: None for k in corpus.REPORT_KEYS} | {"entry": Path(args.complex).stem}
    t1 = theorems.check_thm1(x, u)
    report["thm1"] = t1.to_dict()
    F = None
    if args.extension:
        pair = sc.read_pair(args.extension[0])
        report["thm2"] = theorems.check_thm2(pair.ambient, x, u).to_dict()
        F = separation.read_map(args.extension[1], pair.ambient)
    sim = separation.simulate(f, u, grid, F)
    report.update({k: v for k, v in sim.items() if not k.startswith("_")})
    if args.svg:
        if grid.ndim != 2:
            raise FormatError("--svg needs a planar map")
        Path(args.svg).write_text(separation.svg(sim["_grid"], sim["_labeling"], f, u))

    met = t1.holds and sim["injective_on_U"]
    separated = met and sim["components"] >= 2 and sim["incident"] is not None and len(sim["incident"]) == 2
    if not met:
        report["verdict"] = "hypotheses not met"
    elif not separated:
        report["verdict"] = "conclusion not observed at this resolution"
    else:
        report["verdict"] = "separates"
    _emit(report, args)
    if not met:
        return FAILS
    return HOLDS if separated else ERROR


def cmd_nerve(args) -> int:
    cloud = nerve.read_cloud(args.cloud)
    if args.remove_label:
        cloud = cloud.without(args.remove_label)
    out = {"entry": Path(args.cloud).stem, "eps": args.eps, "k": args.k, "mode": args.mode,
           "rank": nerve.cech_rank_at_scale(cloud, args.eps, args.k, args.mode)}
    if args.eps2 is not None:
        out["eps2"] = args.eps2
        out["stable"] = nerve.stability_check(cloud, args.eps, args.eps2, args.k, args.mode)
    _emit(out, args)
    return HOLDS


def cmd_corpus(args) -> int:
    directory = Path(args.dir) if args.dir else corpus.shipped_corpus_dir()
    reports, failures = corpus.run_corpus(directory, timings=args.timings)
    _emit({"entries": reports, "failures": failures}, args)
    for name, lines in sorted(failures.items()):
        for line in lines:
            sys.stderr.write(f"sepchk: {name}: {line}\n")
    return ERROR if failures else HOLDS


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; argparse's default 2 is reserved for failed hypotheses."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sepchk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", metavar="PATH", help="also write the report here")
        return sp

    s = common(sub.add_parser("thm1", help="hypothesis of the separation theorem for a complex"))
    s.add_argument("complex")
    s.add_argument("--cell", type=int, nargs="+", metavar="V")
    s.set_defaults(func=cmd_thm1)

    s = common(sub.add_parser("thm2", help="extension hypothesis K ⊄ J for a pair file"))
    s.add_argument("pair")
    s.add_argument("--cell", type=int, nargs="+", metavar="V")
    s.set_defaults(func=cmd_thm2)

    s = common(sub.add_parser("simulate", help="rasterize a PL map and check the conclusions"))
    s.add_argument("complex")
    s.add_argument("map")
    s.add_argument("--cell", type=int, nargs="+", metavar="V", required=True)
    s.add_argument("--h", type=float, default=0.05)
    s.add_argument("--box", type=float, nargs="+", metavar="B",
                   help="x0 y0 x1 y1 [z0 z1]; default is the unit box")
    s.add_argument("--extension", nargs=2, metavar=("PAIR", "MAP"), help="pair file and extension map")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_simulate)

    s = common(sub.add_parser("nerve", help="Čech or Rips nerve rank of a point cloud"))
    s.add_argument("cloud")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--eps2", type=float, help="second scale for the stability check")
    s.add_argument("--k", type=int, default=1, choices=(0, 1))
    s.add_argument("--mode", choices=("cech", "rips"), default="cech")
    s.add_argument("--remove-label", metavar="LABEL", help="drop points with this label first")
    s.set_defaults(func=cmd_nerve)

    s = common(sub.add_parser("corpus", help="run every entry of a corpus directory"))
    s.add_argument("dir", nargs="?", help="defaults to the shipped corpus")
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.box is not None and len(args.box) not in (4, 6):
        parser.error("--box takes 4 or 6 numbers")
    try:
        return args.func(args)
    except (SepchkError, OSError) as exc:
        sys.stderr.write(f"sepchk: error: {exc}\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
