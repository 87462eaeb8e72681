"""Command line front end for reproducible generate / fit / evaluate runs.

Subcommands:

* ``gen``     draw Gaussian class parameters (optionally pushed through a
              random linear channel) and seeded datasets
* ``fit``     fit a projection to parameter files or to a labeled dataset
* ``eval``    sweep retained divergence over r, classify, or grid-evaluate
              stored projections
* ``regime``  report the divergence split and the recommended method
* ``check``   run the built-in verification suite

All randomness flows from ``--seed``; every artifact embeds the config that
produced it, so any output is reproducible from its own config block.  Exit
codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import KlprojError
from .gaussian import (
    GaussianParams,
    LabeledDataset,
    estimate_params,
    kld,
    kld_projected,
    pooled_covariance,
)
from .linalg import orthonormalize_rows, spd_inv_sqrt
from .projections import (
    FRAME_ORIGINAL,
    FRAME_WHITENED,
    ProjectionResult,
    fit_auto,
    lda_direction,
    lol_projection,
    mean_first_projection,
    multiclass_lda,
    select_regime,
    whitened_component_projection,
)
from .refine import AscentOptions, gradient_ascent
from .evaluate import density_grid, pairwise_preservation, plugin_classifier_train, sweep_r
from .synth import ChannelSpec, embed_channel, random_class_params, sample
from . import fileio

_TWO_CLASS_METHODS = ("auto", "alg1", "alg2", "lda", "lol")


def _sub_seeds(seed: int, n: int) -> list[int]:
    state = np.random.SeedSequence(int(seed)).generate_state(n, dtype=np.uint64)
    return [int(s) for s in state]


def _print_wrote(path: Path) -> None:
    print(f"wrote {path}")


def _write_json(path: Path, record: dict) -> None:
    fileio.write_json(path, record)
    _print_wrote(path)


def _write_csv(path: Path, header: list, rows, config: dict) -> None:
    fileio.write_csv(path, header, rows)
    _print_wrote(path)
    sidecar = path.with_suffix(".config.json")
    fileio.write_json(sidecar, {"kind": "config", "config": config})
    _print_wrote(sidecar)


def _regime_dict(p1: GaussianParams, p2: GaussianParams, r: int) -> dict:
    report = select_regime(p1, p2, r)
    return {
        "d_mu": report.d_mu,
        "d_sigma": report.d_sigma,
        "r": report.r,
        "threshold": report.threshold,
        "recommendation": report.recommendation,
    }


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = {
        "command": "gen",
        "version": __version__,
        "seed": args.seed,
        "d": args.d,
        "t": args.t,
        "noise_var": args.noise_var,
        "classes": args.classes,
        "n": args.n,
        "n_test": args.n_test,
        "eig_min": args.eig_min,
        "eig_max": args.eig_max,
        "mean_scale": args.mean_scale,
    }

    if args.t is not None:
        if args.classes != 2:
            raise ValueError("channel generation is two-class; drop --classes or use 2")
        seeds = _sub_seeds(args.seed, 7)
        config["sub_seeds"] = {
            "signal_params": seeds[0:2],
            "channel": seeds[2],
            "train": seeds[3:5],
            "test": seeds[5:7],
        }
        sig1 = random_class_params(args.t, args.eig_min, args.eig_max, args.mean_scale, seeds[0])
        sig2 = random_class_params(args.t, args.eig_min, args.eig_max, args.mean_scale, seeds[1])
        chan = ChannelSpec(t=args.t, d=args.d, noise_var=args.noise_var, seed=seeds[2])
        p1, p2, h = embed_channel(sig1, sig2, chan)
        classes = [p1, p2]
        train_seeds, test_seeds = seeds[3:5], seeds[5:7]
        _write_json(
            out / "channel.json",
            {
                "kind": "channel",
                "t": args.t,
                "d": args.d,
                "noise_var": args.noise_var,
                "matrix": h.tolist(),
                "signal_class1": fileio.params_to_dict(sig1),
                "signal_class2": fileio.params_to_dict(sig2),
                "config": config,
            },
        )
    else:
        k = args.classes
        seeds = _sub_seeds(args.seed, 3 * k)
        config["sub_seeds"] = {
            "class_params": seeds[0:k],
            "train": seeds[k : 2 * k],
            "test": seeds[2 * k : 3 * k],
        }
        classes = [
            random_class_params(args.d, args.eig_min, args.eig_max, args.mean_scale, seeds[i])
            for i in range(k)
        ]
        train_seeds, test_seeds = seeds[k : 2 * k], seeds[2 * k : 3 * k]

    for i, p in enumerate(classes, start=1):
        _write_json(out / f"params_class{i}.json", fileio.params_to_dict(p, config=config))

    for name, count, per_class_seeds in (
        ("dataset.csv", args.n, train_seeds),
        ("test.csv", args.n_test, test_seeds),
    ):
        if count <= 0:
            continue
        blocks = [sample(p, count, s) for p, s in zip(classes, per_class_seeds)]
        labels = np.repeat(np.arange(1, len(classes) + 1), count)
        data = LabeledDataset(np.vstack(blocks), labels)
        fileio.dataset_to_csv(out / name, data)
        _print_wrote(out / name)
        fileio.write_json(
            (out / name).with_suffix(".config.json"),
            {"kind": "config", "config": config},
        )
        _print_wrote((out / name).with_suffix(".config.json"))
    return 0


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def _load_classes(args) -> tuple[list[GaussianParams], np.ndarray | None]:
    """Class parameters from --params files or estimated from --dataset.

    Returns the parameter list and, for the dataset route, the pooled
    covariance estimate (None otherwise).
    """
    if args.params and args.dataset:
        raise ValueError("pass either --params or --dataset, not both")
    if args.params:
        records = [fileio.read_json(p) for p in args.params]
        return [fileio.params_from_dict(rec) for rec in records], None
    if args.dataset:
        data = fileio.dataset_from_csv(args.dataset)
        ridge = getattr(args, "ridge", 0.0)
        plist = [estimate_params(data, int(lab), ridge) for lab in data.class_labels]
        return plist, pooled_covariance(data)
    raise ValueError("one of --params or --dataset is required")


def _fit_two_class(args, p1: GaussianParams, p2: GaussianParams,
                   pooled: np.ndarray | None) -> ProjectionResult:
    if args.r is None:
        raise ValueError(f"--r is required for method {args.method!r}")
    r = args.r
    if args.method == "auto":
        return fit_auto(p1, p2, r, mode=args.mode)
    if args.method == "alg1":
        return mean_first_projection(p1, p2, r)
    if args.method == "alg2":
        return whitened_component_projection(p1, p2, r)
    if args.method == "lol":
        return lol_projection(p1, p2, r, pooled_cov=pooled)
    if args.method == "lda":
        if r != 1:
            raise ValueError("lda produces a single direction; use --r 1")
        return lda_direction(p1, p2)
    raise ValueError(f"unknown method {args.method!r}")


def cmd_fit(args) -> int:
    plist, pooled = _load_classes(args)
    if args.swap:
        plist = plist[::-1]
    config = {
        "command": "fit",
        "version": __version__,
        "params": list(args.params or []),
        "dataset": args.dataset,
        "ridge": args.ridge,
        "r": args.r,
        "method": args.method,
        "mode": args.mode,
        "refine": args.refine,
        "max_iters": args.max_iters,
        "swap": args.swap,
    }
    extras: dict = {}

    if args.method == "mclda":
        if args.refine:
            raise ValueError("refinement applies to two-class projections only")
        result = multiclass_lda(plist, r=args.r)
        ratios = pairwise_preservation(plist, result.matrix)
        extras["pairwise_preservation"] = ratios.tolist()
    else:
        if len(plist) != 2:
            raise ValueError(
                f"method {args.method!r} uses exactly 2 classes, got {len(plist)}"
            )
        p1, p2 = plist
        result = _fit_two_class(args, p1, p2, pooled)
        extras["full_kld"] = kld(p1, p2)
        extras["regime"] = _regime_dict(p1, p2, result.r)
        if args.refine:
            opts = AscentOptions() if args.max_iters is None else AscentOptions(
                max_iters=args.max_iters
            )
            trace = gradient_ascent(result.in_original_frame(), p1, p2, opts)
            refined_matrix = orthonormalize_rows(trace.final_matrix)
            refined_kld = kld_projected(refined_matrix, p1, p2)
            extras["refinement"] = {
                "initial_kld": result.achieved_kld,
                "refined_kld": refined_kld,
                "iterations": trace.iterations_run,
                "converged": trace.converged,
                "reason": trace.reason,
            }
            result = ProjectionResult(
                matrix=refined_matrix,
                frame=FRAME_ORIGINAL,
                method=f"{result.method}_refined",
                achieved_kld=refined_kld,
                warnings=result.warnings,
            )

    _write_json(Path(args.out), fileio.projection_to_dict(result, config=config, **extras))
    return 0


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _whitened_view(p1: GaussianParams, p2: GaussianParams) -> tuple[GaussianParams, GaussianParams]:
    """The class pair mapped by x -> S (x - mu1) with S the class-1 whitener."""
    s = spd_inv_sqrt(p1.covariance)
    cov2 = s @ p2.covariance @ s
    return (
        GaussianParams(np.zeros(p1.dim), np.eye(p1.dim)),
        GaussianParams(s @ (p2.mean - p1.mean), (cov2 + cov2.T) / 2.0),
    )


def _parse_sweep_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"--sweep-r wants a range like 1..5, got {text!r}")
    return range(int(lo), int(hi) + 1)


def cmd_eval(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    projections = [fileio.projection_from_dict(fileio.read_json(f)) for f in args.projection]
    plist, pooled = _load_classes(args)
    if len(plist) != 2:
        raise ValueError(f"evaluation compares exactly 2 classes, got {len(plist)}")
    p1, p2 = plist
    config = {
        "command": "eval",
        "version": __version__,
        "projection": list(args.projection),
        "params": list(args.params or []),
        "dataset": args.dataset,
        "ridge": args.ridge,
        "sweep_r": args.sweep_r,
        "methods": args.methods,
        "refine": args.refine,
        "classify": args.classify,
        "train": args.train,
        "test": args.test,
        "density_grid": args.density_grid,
        "resolution": args.resolution,
        "scatter": args.scatter,
    }

    if args.sweep_r:
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        table = sweep_r(p1, p2, methods, _parse_sweep_range(args.sweep_r), refine=args.refine)
        sidecar_cfg = dict(config, full_kld=table.full_kld)
        _write_csv(out / "sweep.csv", ["method", "r", "kld"], table.rows, sidecar_cfg)

    if args.classify:
        if not (args.train and args.test):
            raise ValueError("--classify needs --train and --test datasets")
        train = fileio.dataset_from_csv(args.train)
        test = fileio.dataset_from_csv(args.test)
        records = [
            {
                "method": "full",
                "r": train.dim,
                "accuracy": plugin_classifier_train(train, np.eye(train.dim)).score(test),
            }
        ]
        for fname, proj in zip(args.projection, projections):
            model = plugin_classifier_train(train, proj.in_original_frame())
            records.append(
                {
                    "file": Path(fname).name,
                    "method": proj.method,
                    "r": proj.r,
                    "accuracy": model.score(test),
                }
            )
        _write_json(out / "classification.json",
                    {"kind": "classification", "results": records, "config": config})

    if args.density_grid:
        planar = [(f, p) for f, p in zip(args.projection, projections) if p.r == 2]
        if not planar:
            raise ValueError("--density-grid needs a projection with exactly 2 rows")
        for index, (fname, proj) in enumerate(planar, start=1):
            if proj.frame == FRAME_WHITENED:
                q1, q2 = _whitened_view(p1, p2)
                grid = density_grid(proj.matrix, q1, q2, resolution=args.resolution)
            else:
                grid = density_grid(proj.matrix, p1, p2, resolution=args.resolution)
            rows = []
            for label, values in ((1, grid.values_class1), (2, grid.values_class2)):
                for i, x in enumerate(grid.x_axis):
                    for j, y in enumerate(grid.y_axis):
                        rows.append((x, y, label, values[i, j]))
            name = "density_grid.csv" if len(planar) == 1 else f"density_grid_{index}.csv"
            sidecar_cfg = dict(
                config,
                projection_file=Path(fname).name,
                frame=proj.frame,
                contour_levels=list(grid.contour_levels()),
                peaks=[grid.peak_class1, grid.peak_class2],
            )
            _write_csv(out / name, ["x", "y", "class", "density"], rows, sidecar_cfg)

    if args.scatter:
        source = args.test or args.train or args.dataset
        if source is None:
            raise ValueError("--scatter needs a dataset (--dataset, --train, or --test)")
        data = fileio.dataset_from_csv(source)
        planar = [(f, p) for f, p in zip(args.projection, projections) if p.r == 2]
        if not planar:
            raise ValueError("--scatter needs a projection with exactly 2 rows")
        for index, (fname, proj) in enumerate(planar, start=1):
            pts = data.samples @ proj.in_original_frame().T
            rows = [
                (pts[i, 0], pts[i, 1], int(data.labels[i])) for i in range(pts.shape[0])
            ]
            name = "scatter.csv" if len(planar) == 1 else f"scatter_{index}.csv"
            sidecar_cfg = dict(config, projection_file=Path(fname).name, source=Path(source).name)
            _write_csv(out / name, ["x", "y", "class"], rows, sidecar_cfg)

    return 0


# ---------------------------------------------------------------------------
# regime / check
# ---------------------------------------------------------------------------


def cmd_regime(args) -> int:
    plist, _ = _load_classes(args)
    if args.swap:
        plist = plist[::-1]
    if len(plist) != 2:
        raise ValueError(f"regime analysis compares exactly 2 classes, got {len(plist)}")
    config = {
        "command": "regime",
        "version": __version__,
        "params": list(args.params or []),
        "dataset": args.dataset,
        "ridge": args.ridge,
        "r": args.r,
        "swap": args.swap,
    }
    record = {"kind": "regime", **_regime_dict(plist[0], plist[1], args.r), "config": config}
    if args.out:
        _write_json(Path(args.out), record)
    else:
        print(fileio.dumps_json(record))
    return 0


def cmd_check(args) -> int:
    from . import checks

    results = checks.run_all()
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({res.elapsed_s:.2f} s): {res.detail}")
    failed = [res for res in results if not res.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 0 if not failed else 3


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def _add_class_source(sub, ridge_default: float = 0.0) -> None:
    sub.add_argument("--params", nargs="+", metavar="FILE",
                     help="class parameter JSON files, one per class")
    sub.add_argument("--dataset", metavar="CSV",
                     help="labeled dataset CSV; class parameters are estimated")
    sub.add_argument("--ridge", type=float, default=ridge_default,
                     help="diagonal loading fraction for covariance estimates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klproj",
        description="Divergence-preserving linear dimension reduction for Gaussian classes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate class parameters and datasets")
    gen.add_argument("--d", type=int, required=True, help="observed dimension")
    gen.add_argument("--t", type=int, help="signal dimension; enables channel embedding")
    gen.add_argument("--noise-var", type=float, default=1.0, help="channel noise variance")
    gen.add_argument("--classes", type=int, default=2, help="number of classes")
    gen.add_argument("--n", type=int, default=0, help="training samples per class")
    gen.add_argument("--n-test", type=int, default=0, help="test samples per class")
    gen.add_argument("--eig-min", type=float, default=0.1, help="smallest covariance eigenvalue")
    gen.add_argument("--eig-max", type=float, default=10.0, help="largest covariance eigenvalue")
    gen.add_argument("--mean-scale", type=float, default=1.0, help="class mean scale")
    gen.add_argument("--seed", type=int, required=True, help="master seed (required)")
    gen.add_argument("--out-dir", default=".", help="output directory")
    gen.set_defaults(func=cmd_gen)

    fit = sub.add_parser("fit", help="fit a projection")
    _add_class_source(fit)
    fit.add_argument("--r", type=int, default=None, help="projection rank")
    fit.add_argument("--method", default="auto",
                     choices=["auto", "alg1", "alg2", "lda", "mclda", "lol"])
    fit.add_argument("--mode", default="rule", choices=["rule", "compare"],
                     help="how --method auto picks between alg1 and alg2")
    fit.add_argument("--refine", action="store_true", help="gradient-refine the fit")
    fit.add_argument("--max-iters", type=int, default=None, help="refinement iteration cap")
    fit.add_argument("--swap", action="store_true", help="swap class roles")
    fit.add_argument("--out", required=True, help="projection JSON output path")
    fit.set_defaults(func=cmd_fit)

    ev = sub.add_parser("eval", help="evaluate stored projections")
    ev.add_argument("--projection", nargs="+", required=True, metavar="FILE",
                    help="projection JSON files")
    _add_class_source(ev)
    ev.add_argument("--sweep-r", default=None, metavar="A..B",
                    help="sweep projection rank over an inclusive range")
    ev.add_argument("--methods", default="alg1,alg2,lol",
                    help="comma-separated method tags for the sweep")
    ev.add_argument("--refine", action="store_true",
                    help="add gradient-refined rows to the sweep")
    ev.add_argument("--classify", action="store_true",
                    help="train a plug-in classifier per projection")
    ev.add_argument("--train", metavar="CSV", help="training dataset for --classify")
    ev.add_argument("--test", metavar="CSV", help="test dataset for --classify")
    ev.add_argument("--density-grid", action="store_true",
                    help="tabulate both projected class densities on a grid")
    ev.add_argument("--resolution", type=int, default=200, help="grid resolution per axis")
    ev.add_argument("--scatter", action="store_true", help="project dataset samples to 2-D")
    ev.add_argument("--out-dir", required=True, help="output directory")
    ev.set_defaults(func=cmd_eval)

    reg = sub.add_parser("regime", help="report the divergence split at a given rank")
    _add_class_source(reg)
    reg.add_argument("--r", type=int, required=True, help="projection rank")
    reg.add_argument("--swap", action="store_true", help="swap class roles")
    reg.add_argument("--out", default=None, help="write JSON here instead of stdout")
    reg.set_defaults(func=cmd_regime)

    chk = sub.add_parser("check", help="run the built-in verification suite")
    chk.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except KlprojError as exc:
        _error_line(exc.code, str(exc))
        return exc.exit_code
    except ValueError as exc:
        _error_line("InvalidArguments", str(exc))
        return 2
    except OSError as exc:
        _error_line("IOError", str(exc))
        return 4


def _error_line(code: str, message: str) -> None:
    print(json.dumps({"error": code, "message": message}, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
