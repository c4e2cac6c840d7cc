"""Command-line driver: data generation, targets, embedding, evaluation, grids.

Exit codes: 0 success, 2 usage or configuration error, 3 data/validation
or I/O error, 4 optimizer hit its iteration cap without converging.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .baselines import classical_mds, run_smacof
from .datasets import IDXFormatError, find_mnist, load_mnist, subsample
from .engine import config_for_variant, run_csmds
from .evaluation import knn_accuracy_table
from .geometry import DisconnectedGraphError, generate_swissroll, geodesic_distances, knn_graph
from .io import (
    content_digest,
    read_manifest,
    read_matrix,
    write_manifest,
    write_matrix,
    write_table,
    write_trace,
)
from .stress import compute_distance_matrix, raw_stress
from .types import InvalidConfigError, TraceRecord, ValidationError, validate_target

log = logging.getLogger("csmds")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 2, 3, 4


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def _k_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"K values must be >= 1, got {text!r}")
    return values


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def _workers() -> int:
    env = os.environ.get("CSMDS_WORKERS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


# -- generate ---------------------------------------------------------------

def cmd_generate(args, argv):
    out = Path(args.out)
    if args.dataset == "swissroll":
        cloud = generate_swissroll(args.n, args.noise, seed=args.seed)
        write_matrix(out, cloud.points, prefix="x", extra={"aux": cloud.aux})
        config = {"dataset": "swissroll", "n": args.n, "noise": args.noise}
        inputs = {}
    else:
        found = (args.images, args.labels) if args.images else find_mnist(args.mnist_dir)
        if not found or not found[1]:
            raise ValidationError("no MNIST IDX files found; pass --images/--labels")
        ds = subsample(load_mnist(*found), args.classes, args.count, seed=args.seed)
        write_matrix(out, ds.vectors, prefix="p", extra={"label": ds.labels})
        config = {"dataset": "mnist", "classes": sorted(set(args.classes)), "count": args.count}
        inputs = {"images": found[0], "labels": found[1]}
    write_manifest(_manifest_path(out), "generate", argv, config, args.seed,
                   inputs, {"points": out}, os.getcwd())
    log.info("wrote %s", out)
    return EXIT_OK


# -- distances --------------------------------------------------------------

def cmd_distances(args, argv):
    points, _ = read_matrix(args.input)
    if args.metric == "euclidean":
        target = validate_target(compute_distance_matrix(points))
    else:
        target = geodesic_distances(knn_graph(points, args.knn), method=args.sp_method)
    out = Path(args.out)
    write_matrix(out, target.values)
    config = {"metric": args.metric, "knn": args.knn if args.metric == "geodesic" else None,
              "sp_method": args.sp_method}
    write_manifest(_manifest_path(out), "distances", argv, config, None,
                   {"points": args.input}, {"target": out}, os.getcwd())
    return EXIT_OK


# -- embed ------------------------------------------------------------------

def _csmds_config(args, method):
    overrides = {
        "r0": args.r0, "epsilon": args.eps, "delta": args.delta,
        "p_init": args.p_init, "p_a": args.p_a, "p_th": args.p_th,
        "max_epochs": args.max_epochs, "seed": args.seed,
    }
    return config_for_variant(method, args.dims, overrides)


def embed_target(target, args):
    """Run one method; returns (coords, trace, converged, resolved config dict)."""
    method = args.method
    if method in ("fs", "rn", "bs"):
        config = _csmds_config(args, method)
        res = run_csmds(target, config)
        return res.embedding.coords, res.trace, res.converged, config.to_dict()
    if method == "smacof":
        res = run_smacof(target, args.dims, tol=args.tol, max_iter=args.max_iter, seed=args.seed)
        cfg = {"method": "smacof", "l": args.dims, "tol": args.tol,
               "max_iter": args.max_iter, "seed": args.seed}
        return res.embedding.coords, res.trace, res.converged, cfg
    start = time.perf_counter()
    res = classical_mds(target, args.dims)
    stress = raw_stress(target, res.embedding.distances)
    trace = [TraceRecord(0, stress, 0.0, 0, (time.perf_counter() - start) * 1e3)]
    cfg = {"method": "classical", "l": args.dims, "clamped": res.clamped}
    return res.embedding.coords, trace, True, cfg


def cmd_embed(args, argv):
    values, _ = read_matrix(args.target)
    target = validate_target(values)
    if args.method in ("smacof", "classical"):
        for flag in ("p_init", "p_a", "p_th"):
            if getattr(args, flag) is not None:
                raise InvalidConfigError(f"--{flag.replace('_', '-')} does not apply to {args.method}")
    start = time.perf_counter()
    coords, trace, converged, config = embed_target(target, args)
    elapsed_ms = (time.perf_counter() - start) * 1e3
    out_dir = Path(args.out_dir)
    write_matrix(out_dir / "embedding.csv", coords, prefix="x")
    write_trace(out_dir / "trace.csv", trace)
    write_manifest(out_dir / "manifest.json", "embed", argv, config, args.seed,
                   {"target": args.target},
                   {"embedding": out_dir / "embedding.csv", "trace": out_dir / "trace.csv"},
                   os.getcwd(), method=args.method, converged=converged,
                   embed_time_ms=elapsed_ms, final_stress=trace[-1].stress)
    log.info("%s: stress %.6g after %d records (%.0f ms)", args.method, trace[-1].stress,
             len(trace), elapsed_ms)
    if not converged:
        log.warning("%s stopped at its iteration cap without converging", args.method)
        return EXIT_NONCONVERGED
    return EXIT_OK


# -- knn-eval ---------------------------------------------------------------

def cmd_knn_eval(args, argv):
    x, _ = read_matrix(args.embedding)
    _, extras = read_matrix(args.labels)
    if "label" not in extras:
        raise ValidationError(f"{args.labels}: no 'label' column")
    y = extras["label"]
    if len(x) != len(y):
        raise ValidationError(f"{len(x)} embedding rows but {len(y)} labels")
    method, embed_ms = args.method, ""
    manifest = Path(args.embedding).with_name("manifest.json")
    if manifest.exists():
        meta = read_manifest(manifest)
        method = method or meta.get("method", "")
        embed_ms = meta.get("embed_time_ms", "")
    method = method or "initial"
    table = knn_accuracy_table(x, y, args.k, args.train_frac, args.seed)
    rows = [(method, x.shape[1], k, acc, embed_ms) for k, acc in table.items()]
    out = Path(args.out)
    header = ("method", "dims", "K", "accuracy", "embed_time_ms")
    write_table(out, header, rows, append=args.append)
    write_manifest(_manifest_path(out), "knn-eval", argv,
                   {"k": args.k, "train_frac": args.train_frac, "method": method},
                   args.seed, {"embedding": args.embedding, "labels": args.labels},
                   {"report": out}, os.getcwd())
    for row in rows:
        log.info("%s K=%d accuracy %.4f", row[0], row[2], row[3])
    return EXIT_OK


# -- convergence-grid -------------------------------------------------------

def _grid_cells(p_init_grid, p_th_grid):
    cells = [("fs", None, None)]
    cells += [("rn", p, None) for p in p_init_grid]
    cells += [("bs", p, th) for p in p_init_grid for th in p_th_grid]
    return cells


def _run_cell(target_values, cell, base):
    variant, p_init, p_th = cell
    overrides = dict(base)
    if variant != "fs":
        overrides["p_init"] = p_init
    if variant == "bs":
        overrides["p_th"] = p_th
    else:
        overrides.pop("p_a", None)
    config = config_for_variant(variant, overrides.pop("l"), overrides)
    res = run_csmds(validate_target(target_values), config)
    return cell, res.trace, res.converged


def _cell_name(cell):
    variant, p_init, p_th = cell
    if variant == "fs":
        return "fs"
    if variant == "rn":
        return f"rn_pinit{p_init:g}"
    return f"bs_pinit{p_init:g}_pth{p_th:g}"


def cmd_convergence_grid(args, argv):
    values, _ = read_matrix(args.target)
    target = validate_target(values)
    for p in args.p_init_grid:
        if not 0 < p < 1:
            raise InvalidConfigError(f"p_init grid values must lie in (0, 1), got {p}")
    cells = _grid_cells(args.p_init_grid, args.p_th_grid)
    # every cell starts from the same seed, hence the same initial embedding
    base = {"l": args.dims, "r0": args.r0, "epsilon": args.eps, "delta": args.delta,
            "p_a": args.p_a, "max_epochs": args.max_epochs, "seed": args.seed}
    config_for_variant("bs", args.dims, {"p_a": args.p_a, "p_init": args.p_init_grid[0],
                                         "p_th": args.p_th_grid[0]})
    workers = min(_workers(), len(cells))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, [target.values] * len(cells), cells,
                                    [base] * len(cells)))
    else:
        results = [_run_cell(target.values, cell, base) for cell in cells]
    out_dir = Path(args.out_dir)
    outputs = {}
    combined = []
    all_converged = True
    for cell, trace, converged in results:
        name = _cell_name(cell)
        path = out_dir / "traces" / f"{name}.csv"
        write_trace(path, trace)
        outputs[name] = path
        all_converged &= converged
        variant, p_init, p_th = cell
        for rec in trace:
            combined.append((variant, "" if p_init is None else "%g" % p_init,
                             "" if p_th is None else "%g" % p_th) + rec.as_row())
    write_table(out_dir / "combined.csv",
                ("variant", "p_init", "p_th") + TraceRecord.FIELDS, combined)
    outputs["combined"] = out_dir / "combined.csv"
    write_manifest(out_dir / "manifest.json", "convergence-grid", argv,
                   dict(base, p_init_grid=args.p_init_grid, p_th_grid=args.p_th_grid),
                   args.seed, {"target": args.target}, outputs, os.getcwd(),
                   cells=[_cell_name(c) for c in cells], workers=workers)
    return EXIT_OK if all_converged else EXIT_NONCONVERGED


# -- replay -----------------------------------------------------------------

def cmd_replay(args, argv):
    manifest = read_manifest(args.manifest)
    prev = os.getcwd()
    os.chdir(manifest["cwd"])
    try:
        code = main(manifest["argv"])
        mismatched = [name for name, meta in manifest["outputs"].items()
                      if content_digest(meta["path"]) != meta["sha256"]]
    finally:
        os.chdir(prev)
    if mismatched:
        log.error("outputs differ from the manifest: %s", ", ".join(mismatched))
        return EXIT_DATA
    log.info("replay reproduced %d outputs", len(manifest["outputs"]))
    return code


# -- parser -----------------------------------------------------------------

def _add_optimizer_flags(p, grid=False):
    p.add_argument("--dims", type=_positive_int, default=2, help="embedding dimension L")
    p.add_argument("--r0", type=float, default=5.0, help="initial search radius")
    p.add_argument("--eps", type=float, default=1e-4, help="relative improvement threshold")
    p.add_argument("--delta", type=float, default=1e-3, help="radius stopping threshold")
    p.add_argument("--max-epochs", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    if not grid:
        p.add_argument("--p-init", type=float, default=None)
        p.add_argument("--p-th", type=float, default=None)
    p.add_argument("--p-a", type=float, default=None if not grid else 0.05)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csmds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"csmds {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a point set")
    gsub = g.add_subparsers(dest="dataset", required=True)
    sr = gsub.add_parser("swissroll", help="3-D Swiss roll")
    sr.add_argument("--n", type=_positive_int, default=2000)
    sr.add_argument("--noise", type=float, default=0.0)
    sr.add_argument("--seed", type=int, default=0)
    sr.add_argument("--out", required=True)
    mn = gsub.add_parser("mnist", help="random MNIST subset from IDX files")
    mn.add_argument("--images")
    mn.add_argument("--labels")
    mn.add_argument("--mnist-dir")
    mn.add_argument("--classes", type=lambda s: [int(c) for c in s.split(",")],
                    default=list(range(10)))
    mn.add_argument("--count", type=int, default=1000)
    mn.add_argument("--seed", type=int, default=0)
    mn.add_argument("--out", required=True)

    d = sub.add_parser("distances", help="build a target dissimilarity matrix")
    d.add_argument("--input", required=True)
    d.add_argument("--metric", choices=("euclidean", "geodesic"), default="euclidean")
    d.add_argument("--knn", type=_positive_int, default=8)
    d.add_argument("--sp-method", choices=("dijkstra", "bellman-ford"), default="dijkstra")
    d.add_argument("--out", required=True)

    e = sub.add_parser("embed", help="embed a target matrix")
    e.add_argument("--target", required=True)
    e.add_argument("--method", choices=("fs", "rn", "bs", "smacof", "classical"), required=True)
    _add_optimizer_flags(e)
    e.add_argument("--tol", type=float, default=1e-6, help="SMACOF relative decrease threshold")
    e.add_argument("--max-iter", type=_positive_int, default=300, help="SMACOF iteration cap")
    e.add_argument("--out-dir", required=True)

    k = sub.add_parser("knn-eval", help="KNN accuracy of an embedding")
    k.add_argument("--embedding", required=True)
    k.add_argument("--labels", required=True, help="CSV with a 'label' column")
    k.add_argument("--k", type=_k_list, default=[1, 3, 5, 7, 9])
    k.add_argument("--train-frac", type=float, default=0.9)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--method", default=None, help="row label; read from the manifest if omitted")
    k.add_argument("--append", action="store_true")
    k.add_argument("--out", required=True)

    c = sub.add_parser("convergence-grid", help="stress traces over a p_init x p_th grid")
    c.add_argument("--target", required=True)
    _add_optimizer_flags(c, grid=True)
    c.add_argument("--p-init-grid", type=_float_list, required=True)
    c.add_argument("--p-th-grid", type=_float_list, required=True)
    c.add_argument("--out-dir", required=True)

    r = sub.add_parser("replay", help="re-run a manifest and verify its outputs")
    r.add_argument("manifest")
    return ap


COMMANDS = {
    "generate": cmd_generate,
    "distances": cmd_distances,
    "embed": cmd_embed,
    "knn-eval": cmd_knn_eval,
    "convergence-grid": cmd_convergence_grid,
    "replay": cmd_replay,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, argv)
    except InvalidConfigError as exc:
        print(f"csmds: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DisconnectedGraphError as exc:
        print(f"csmds: {exc} (try a larger --knn)", file=sys.stderr)
        return EXIT_DATA
    except (ValidationError, IDXFormatError, ValueError) as exc:
        print(f"csmds: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"csmds: I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
