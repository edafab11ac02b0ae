"""Command-line front end.

    amalgam-lab norm --fn gaussian --p 2 --q 1 --w poly:1
    amalgam-lab check all --seed 7
    amalgam-lab decide "3,3,1,poly:2,poly:1" "2,2,2,poly:1,poly:0"

Reports go to stdout (or ``--out``) as JSON or CSV; the human summary goes
to stderr.  Exit codes: 0 pass, 1 suite failure, 2 usage or parse error,
3 hypothesis or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .amalgam import amalgam_norm
from .catalog import HAND_PICKED, IFF_NEGATIVES, random_embedding_pairs
from .decide import decide_compactness, decide_embedding
from .errors import AmalgamError, SpecError
from .funcrep import CORPUS_SPECS, GridSpec, function_from_json, make_bump, make_gaussian, parse_function
from .space_a import SpaceSpec, parse_space
from .spectral import fourier
from .verifier import (
    SuiteReport,
    algebra_suite,
    approximate_identity,
    bf_chain,
    embedding_constant,
    iff_divergence_scan,
    module_suite,
    noncompactness_witness,
    translation_bounds,
    translation_continuity,
    vague_convergence,
    witness_rejection,
)
from .weights import parse_weight, poly

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

SUITES = ("algebra", "bf", "translation", "continuity", "embedding", "noncompact", "approxid", "vague", "module")

# documented defaults; a config may only move them in the stricter direction
DEFAULT_TOLERANCES = {
    "approxid_final_fraction": 0.02,
    "approxid_target": 0.01,
    "continuity_eps": 0.1,
    "noncompact_delta0": 1e-3,
}
_LARGER_IS_STRICTER = {"noncompact_delta0"}


@dataclass
class RunConfig:
    grid: GridSpec = field(default_factory=lambda: GridSpec(16, 256))
    tolerances: dict = field(default_factory=dict)
    corpus: list = field(default_factory=lambda: [dict(s) for s in CORPUS_SPECS])
    output_path: str | None = None
    output_format: str = "json"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        for key, val in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise SpecError(f"unknown tolerance {key!r}")
            default = DEFAULT_TOLERANCES[key]
            stricter = val >= default if key in _LARGER_IS_STRICTER else val <= default
            if not stricter:
                raise SpecError(f"tolerance {key}={val} loosens the default {default}")
        if self.output_format not in ("json", "csv"):
            raise SpecError(f"unknown output format {self.output_format!r}")
        if self.threads < 1:
            raise SpecError("threads must be >= 1")

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def to_json(self) -> dict:
        return {
            "grid": self.grid.to_json(),
            "tolerances": dict(sorted(self.tolerances.items())),
            "corpus": self.corpus,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> RunConfig:
        try:
            g = obj.get("grid", {})
            out = obj.get("output", {})
            return cls(
                grid=GridSpec(int(g.get("L", 16)), int(g.get("m", 256))),
                tolerances={k: float(v) for k, v in obj.get("tolerances", {}).items()},
                corpus=list(obj.get("corpus", [dict(s) for s in CORPUS_SPECS])),
                output_path=out.get("path"),
                output_format=out.get("format", "json"),
                seed=int(obj.get("seed", 0)),
                threads=int(obj.get("threads", 1)),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed config: {exc}") from exc


# ------------------------------------------------------------------ helpers


def _clean(obj):
    """Make a report JSON-safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _dump_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols = ["suite", "job", "theorem_tag", "case", "kind", "quantity", "value", "pass"]
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _clean(row.get(k)) for k in cols})
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _thread_count(arg: int | None, cfg_threads: int) -> int:
    if arg is not None:
        n = arg
    elif os.environ.get("AMALGAM_THREADS"):
        try:
            n = int(os.environ["AMALGAM_THREADS"])
        except ValueError as exc:
            raise SpecError("AMALGAM_THREADS must be an integer") from exc
    else:
        n = cfg_threads
    if n < 1:
        raise SpecError("thread count must be >= 1")
    return n


def _run_jobs(jobs: list[Callable[[], SuiteReport]], threads: int) -> list[SuiteReport]:
    """Run independent jobs; results come back in job order whatever the thread count."""
    if threads == 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


# ------------------------------------------------------------------- suites


def suite_jobs(name: str, cfg: RunConfig) -> list[Callable[[], SuiteReport]]:
    """The list of independent jobs making up one named suite."""
    grid = cfg.grid
    corpus = [function_from_json(s, grid) for s in cfg.corpus]
    smooth = [f for f in corpus if f.is_continuous()]
    gauss = make_gaussian(grid)
    w0, w1, w2 = poly(0), poly(1), poly(2)
    s11 = SpaceSpec(2, 2, 2, w1, w1)

    if name == "algebra":
        return [
            (lambda f=f, g=g, s=s: algebra_suite(f, g, s))
            for p, q, r in ((2, 2, 2), (3, 2, 1))
            for wt in (w0, w1)
            for s in [SpaceSpec(p, q, r, wt, wt)]
            for f in corpus
            for g in corpus
        ]
    if name == "bf":
        return [(lambda f=f: bf_chain(f, s11)) for f in corpus]
    if name == "translation":
        ys = (0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0)
        return [(lambda f=f: translation_bounds(f, s11, ys)) for f in smooth]
    if name == "continuity":
        eps = (cfg.tol("continuity_eps"), 2 * cfg.tol("continuity_eps"))
        return [(lambda f=f: translation_continuity(f, s11, eps, relative=True)) for f in smooth]
    if name == "embedding":
        pairs = list(HAND_PICKED) + random_embedding_pairs(cfg.seed)
        jobs = [(lambda a=a, b=b: embedding_constant(a, b, corpus)) for a, b in pairs]
        ts = (0.0, 1.0, 2.0, 4.0, 8.0, 12.0)
        jobs += [(lambda a=a, b=b: iff_divergence_scan(a, b, gauss, ts)) for a, b in IFF_NEGATIVES]
        return jobs
    if name == "noncompact":
        ts = (1.0, 2.0, 4.0, 8.0)
        delta0 = cfg.tol("noncompact_delta0")
        return [
            lambda: noncompactness_witness(gauss, w1, s11, ts, delta0=delta0),
            lambda: witness_rejection(gauss, w0, s11, ts),
            lambda: witness_rejection(gauss, w1, SpaceSpec(2, 2, 2, w2, w1), ts),
        ]
    if name == "approxid":
        kw = dict(target=cfg.tol("approxid_target"), final_fraction=cfg.tol("approxid_final_fraction"))
        radii = (1.0, 0.5, 0.25, 0.125)
        return [
            lambda: approximate_identity(gauss, s11, radii, **kw),
            lambda: approximate_identity(
                make_bump(0.0, 0.125, grid), s11, radii, target=kw["target"], final_fraction=None
            ),
        ]
    if name == "vague":
        k = make_bump(0.0, 1.0, grid)
        seq = [gauss.scale(1.0 / n) for n in (1, 2, 4, 8)]
        return [
            lambda: vague_convergence(seq, k, 2.0, w1),
            lambda: vague_convergence(corpus, k, 3.0, w0),
        ]
    if name == "module":
        s = SpaceSpec(2, 2, 2, w1, w1, w2)
        bumps = [make_bump(0.0, 0.5, grid), make_bump(1.0, 1.5, grid)]
        return [(lambda f=f, g=g: module_suite(f, g, s)) for f in corpus for g in bumps]
    raise SpecError(f"unknown suite {name!r}")


def run_check(names: list[str], cfg: RunConfig, threads: int) -> dict[str, list[SuiteReport]]:
    jobs, owners = [], []
    for name in names:
        js = suite_jobs(name, cfg)
        jobs += js
        owners += [name] * len(js)
    results = _run_jobs(jobs, threads)
    out: dict[str, list[SuiteReport]] = {n: [] for n in names}
    for name, rep in zip(owners, results):
        out[name].append(rep)
    return out


# ----------------------------------------------------------------- commands


def cmd_norm(args, cfg: RunConfig) -> int:
    f = parse_function(args.fn, cfg.grid)
    w = parse_weight(args.w)
    target = fourier(f) if args.domain == "frequency" else f
    rep = amalgam_norm(target, float(args.p), float(args.q), w)
    body = rep.to_json()
    body["function"] = f.label
    if cfg.output_format == "csv":
        rows = [
            {"suite": "norm", "job": 0, "theorem_tag": "norm", "case": f.label, "kind": "local",
             "quantity": str(n), "value": v, "pass": True}
            for n, v in rep.local_norms.items()
        ]
        rows.append({"suite": "norm", "job": 0, "theorem_tag": "norm", "case": f.label,
                     "kind": "global", "quantity": "global", "value": rep.global_, "pass": True})
        _emit(_dump_csv(rows), cfg)
    else:
        _emit(_dump_json(body), cfg)
    print(f"{f.label}: global = {rep.global_!r}", file=sys.stderr)
    return EXIT_PASS


def cmd_check(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    threads = _thread_count(args.threads, cfg.threads)
    results = run_check(names, cfg, threads)
    overall = all(r.overall_pass for reps in results.values() for r in reps)
    if cfg.output_format == "csv":
        rows = []
        for name, reps in results.items():
            for j, rep in enumerate(reps):
                for row in rep.rows():
                    rows.append({"suite": name, "job": j, **row})
        _emit(_dump_csv(rows), cfg)
    else:
        body = {
            "version": __version__,
            "config": cfg.to_json(),
            "overall_pass": overall,
            "suites": {
                name: {
                    "pass": all(r.overall_pass for r in reps),
                    "reports": [r.to_json() for r in reps],
                }
                for name, reps in results.items()
            },
        }
        _emit(_dump_json(body), cfg)
    for name, reps in results.items():
        ok = sum(r.overall_pass for r in reps)
        delta = max((r.grid_refinement_delta or 0.0) for r in reps) if reps else 0.0
        print(f"{name:12s} {ok:4d}/{len(reps):<4d} {'PASS' if ok == len(reps) else 'FAIL'}  "
              f"max refinement delta {delta:.3g}", file=sys.stderr)
    return EXIT_PASS if overall else EXIT_FAIL


def cmd_decide(args, cfg: RunConfig) -> int:
    src = parse_space(args.src)
    if args.compact is not None:
        w3 = parse_weight(args.compact)
        w4 = parse_weight(args.w4) if args.w4 is not None else None
        verdict = decide_compactness(src, w3, w4)
    else:
        if args.dst is None:
            raise SpecError("decide needs a destination space or --compact")
        verdict = decide_embedding(src, parse_space(args.dst))
    _emit(_dump_json(verdict.to_json()), cfg)
    print(f"{verdict.relation} ({verdict.rule})", file=sys.stderr)
    return EXIT_PASS


# ------------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="RunConfig JSON file (default: ./amalgam.json if present)")
    p.add_argument("--L", type=int, help="half-width of the window")
    p.add_argument("--m", type=int, help="samples per unit cell")
    p.add_argument("--emit", choices=("json", "csv"), help="output format")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, help="seed for randomized cases")
    p.add_argument("--threads", type=int, help="worker threads (also AMALGAM_THREADS)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="amalgam-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    pn = sub.add_parser("norm", parents=[common], help="amalgam norm of one function")
    pn.add_argument("--fn", required=True, help="gaussian | indicator:a:b | bump:c:r | JSON")
    pn.add_argument("--p", required=True, help="local exponent (inf allowed)")
    pn.add_argument("--q", required=True, help="global exponent (inf allowed)")
    pn.add_argument("--w", default="poly:0", help="weight, e.g. poly:1, exp:0.5, poly:1*exp:2")
    pn.add_argument("--domain", choices=("time", "frequency"), default="time")

    pc = sub.add_parser("check", parents=[common], help="run verifier suites")
    pc.add_argument("suite", choices=SUITES + ("all",))

    pd = sub.add_parser("decide", parents=[common], help="symbolic embedding verdict")
    pd.add_argument("src", help="p,q,r[,w1,w2] or JSON")
    pd.add_argument("dst", nargs="?", help="p,q,r[,w1,w2] or JSON")
    pd.add_argument("--compact", metavar="W3", help="decide never-compactness into weight W3")
    pd.add_argument("--w4", help="second target weight for the never-compactness rules")
    return parser


def load_config(args) -> RunConfig:
    path = args.config
    if path is None and os.path.exists("amalgam.json"):
        path = "amalgam.json"
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read config {path}: {exc}") from exc
        cfg = RunConfig.from_json(obj)
    else:
        cfg = RunConfig()
    if args.L is not None or args.m is not None:
        cfg.grid = GridSpec(args.L or cfg.grid.L, args.m or cfg.grid.m)
    if args.emit is not None:
        cfg.output_format = args.emit
    if args.out is not None:
        cfg.output_path = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


COMMANDS = {"norm": cmd_norm, "check": cmd_check, "decide": cmd_decide}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PASS
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmalgamError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
