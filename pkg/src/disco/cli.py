"""Single executable front end: sampling, scoring, ranking, benchmark, timing.

Exit codes follow the usual discipline: 0 on success, 1 for runtime or data
errors (unreadable files, out-of-range points, constant outputs), 2 for
usage errors (bad flags, impossible shapes).  Every subcommand is seeded
and reproducible; `DISCO_SEED` serves as a master-seed fallback when no
--seed flag is given.  A JSON config file can pre-set any flag; explicit
flags always win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import benchmark as bench
from . import timing as timing_mod
from .discrepancy import ALL_KINDS, CLOSED_FORM_KINDS, MeasureKind, compute
from .metafunction import build_metafunction
from .sampling import (
    SamplerKind,
    SamplerMethod,
    generate,
    load_points_csv,
    save_points_csv,
)
from .sensitivity import importance_profile, jansen_total_order, savage_scores

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2

# Full-study timing grids: the closed-form sweep sits where quadratic work
# dominates call overhead; the ersatz sweep starts higher for the same
# reason (its linear work is tiny per point).
_CLASSIC_N_GRID = (200, 400, 800, 1600)
_CLASSIC_D_GRID = (4, 8, 16, 32)
_ERSATZ_N_GRID = (4096, 16384, 65536)
_ERSATZ_N_REF = 20000

_QUICK_CLASSIC_N_GRID = (100, 200, 400)
_QUICK_CLASSIC_D_GRID = (4, 8, 16)
_QUICK_ERSATZ_N_GRID = (2048, 8192, 32768)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("DISCO_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"DISCO_SEED must be an integer, got {env!r}") from exc
    return 0


def _load_config(argv: list[str]) -> dict:
    """Pull --config PATH out of argv by hand so it can seed parser defaults."""
    for i, arg in enumerate(argv):
        if arg == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[i + 1]
            break
        if arg.startswith("--config="):
            path = arg.split("=", 1)[1]
            break
    else:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError(f"config {path} must hold a JSON object of flag values")
    return doc


def _build_parser(config: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disco",
        description="Discrepancy measures as a sensitivity-analysis toolkit.",
    )
    parser.add_argument("--config", help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="generate unit-hypercube points")
    p_sample.add_argument("--method", choices=["random", "sobol"], default="sobol")
    p_sample.add_argument("--n", type=int, required=True, help="number of points")
    p_sample.add_argument("--d", type=int, required=True, help="dimensions")
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument(
        "--scramble",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="Owen-scramble the Sobol' stream (ignored for random)",
    )
    p_sample.add_argument("--out", help="output CSV path (default: stdout)")

    p_disc = sub.add_parser("discrepancy", help="score a points CSV")
    p_disc.add_argument("--in", dest="infile", required=True, help="points CSV")
    p_disc.add_argument(
        "--measure",
        choices=[k.value for k in ALL_KINDS] + ["all"],
        default="all",
    )

    p_sens = sub.add_parser("sensitivity", help="rank inputs of an (X, y) dataset")
    p_sens.add_argument("--inputs", required=True, help="unit-hypercube inputs CSV")
    p_sens.add_argument("--outputs", required=True, help="one-column outputs CSV")
    p_sens.add_argument(
        "--measure",
        choices=[k.value for k in ALL_KINDS] + ["all"],
        default="all",
    )
    p_sens.add_argument(
        "--jansen",
        action="store_true",
        help="outputs follow the stacked A/A_Bk layout; also emit total-order rows",
    )
    p_sens.add_argument("--n-base", type=int, default=None, help="base runs per block")
    p_sens.add_argument("--out", help="output CSV path (default: stdout)")

    p_bench = sub.add_parser("benchmark", help="randomized estimator benchmark")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    p_run = bench_sub.add_parser("run", help="run simulations, emit results CSV")
    p_run.add_argument("--sims", type=int, default=128)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_run.add_argument("--out", help="results CSV path (default: stdout)")
    p_run.add_argument(
        "--replay",
        type=int,
        default=None,
        metavar="SIM_ID",
        help="re-run one simulation and print its provenance JSON",
    )

    p_an = bench_sub.add_parser("analyze", help="summarize a results CSV")
    p_an.add_argument("results", help="results CSV from `benchmark run`")
    p_an.add_argument("--out-summary", help="summary CSV path (default: stdout)")
    p_an.add_argument("--out-mood", help="Mood p-value matrix CSV path (default: stdout)")
    p_an.add_argument("--svg", help="write a box plot of r by measure")

    p_tim = sub.add_parser("timing", help="empirical scaling study")
    p_tim.add_argument("--quick", action="store_true", help="small grids")
    p_tim.add_argument("--reps", type=int, default=None, help="repetitions per cell")
    p_tim.add_argument("--seed", type=int, default=None)
    p_tim.add_argument("--out", help="timing table CSV path (default: stdout)")
    p_tim.add_argument("--svg", help="write log-log scaling plots")

    for sp in (p_sample, p_disc, p_sens, p_run, p_an, p_tim):
        sp.set_defaults(**{k: v for k, v in config.items() if k != "command"})
    return parser


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _load_unit_points(path: str) -> np.ndarray:
    try:
        pts = load_points_csv(path)
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read points from {path}: {exc}") from exc
    bad = ~(np.isfinite(pts) & (pts >= 0.0) & (pts <= 1.0))
    if bad.any():
        row = int(np.argwhere(bad.any(axis=1))[0][0])
        raise DataError(
            f"{path}: row {row + 1} has a value outside the unit cube: "
            f"{pts[row].tolist()}"
        )
    return pts


def _selected_measures(name: str, d: int) -> list[MeasureKind]:
    if name == "all":
        kinds = list(CLOSED_FORM_KINDS)
        if d == 2:
            kinds.append(MeasureKind.S_ERSATZ)
        return kinds
    kind = MeasureKind(name)
    if kind is MeasureKind.S_ERSATZ and d != 2:
        raise UsageError(
            f"the ersatz measure needs a 2-column file, this one has {d} columns"
        )
    return [kind]


def _cmd_sample(args) -> int:
    if args.n < 1 or args.d < 1:
        raise UsageError("--n and --d must be positive")
    kind = SamplerKind(
        method=SamplerMethod(args.method),
        seed=_default_seed(args.seed),
        scrambling=bool(args.scramble),
    )
    try:
        pts = generate(kind, args.n, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out is None:
        for row in pts:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        try:
            save_points_csv(args.out, pts)
        except OSError as exc:
            raise DataError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def _cmd_discrepancy(args) -> int:
    pts = _load_unit_points(args.infile)
    kinds = _selected_measures(args.measure, pts.shape[1])
    single = args.measure != "all"
    for kind in kinds:
        value = compute(kind, pts).value
        if single:
            print(f"{value:.12g}")
        else:
            print(f"{kind.value} {value:.12g}")
    return EXIT_OK


def _cmd_sensitivity(args) -> int:
    pts = _load_unit_points(args.inputs)
    try:
        y = np.loadtxt(args.outputs, delimiter=",", dtype=np.float64).ravel()
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read outputs from {args.outputs}: {exc}") from exc
    if y.size != pts.shape[0]:
        raise DataError(
            f"row-count mismatch: {pts.shape[0]} input rows vs {y.size} outputs"
        )
    if np.ptp(y) == 0.0:
        raise DataError("constant output: importance is undefined")
    if args.measure == "all":
        kinds = list(ALL_KINDS)
    else:
        kinds = [MeasureKind(args.measure)]
    profile = importance_profile(pts, y, kinds)

    rows: list[tuple[int, str, float, float]] = []
    for kind in kinds:
        imp = profile[kind]
        sav = savage_scores(imp.scores)
        for i in range(pts.shape[1]):
            rows.append((i + 1, kind.value, float(imp.scores[i]), float(sav[i])))

    if args.jansen:
        if args.n_base is None:
            raise UsageError("--jansen requires --n-base")
        if args.n_base < 2:
            raise UsageError("--n-base must be at least 2")
        d = pts.shape[1]
        if y.size != args.n_base * (d + 1):
            raise DataError(
                f"outputs length {y.size} does not match the stacked layout "
                f"n_base*(d+1) = {args.n_base * (d + 1)}"
            )
        t_idx = jansen_total_order(y, args.n_base, d)
        if not t_idx.defined:
            raise DataError("constant output: total-order indices are undefined")
        sav = savage_scores(t_idx.t)
        for i in range(d):
            rows.append((i + 1, "jansen_total", float(t_idx.t[i]), float(sav[i])))

    fh, close = _open_out(args.out)
    try:
        fh.write("input,measure,score,savage_score\n")
        for idx, name, score, sav_score in rows:
            fh.write(f"{idx},{name},{score!r},{sav_score!r}\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _cmd_benchmark_run(args) -> int:
    if args.sims < 1:
        raise UsageError("--sims must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    seed = _default_seed(args.seed)
    if args.replay is not None:
        if args.replay < 0:
            raise UsageError("--replay takes a non-negative sim_id")
        rec = bench.replay(seed, args.replay)
        f = rec.factors
        doc = {
            "sim_id": f.sim_id,
            "master_seed": f.master_seed,
            "factors": {
                "tau": f.tau,
                "n_s": f.n_s,
                "d": f.d,
                "epsilon": f.epsilon,
                "phi": f.phi,
            },
            "seeds": {
                "sampler_method": f.sampler_kind.method.value,
                "design_seed": f.sampler_kind.seed,
                "scrambling": f.sampler_kind.scrambling,
                "transform_seed": f.transform_seed,
            },
            "metafunction": build_metafunction(f.d, f.epsilon).to_dict(),
            "r": {k.value: rec.r_by_measure.get(k) for k in ALL_KINDS},
            "wall_times_seconds": rec.wall_times,
            "error": rec.error,
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    records = bench.run_benchmark(args.sims, seed, jobs=args.jobs)
    fh, close = _open_out(args.out)
    try:
        bench.write_results_csv(records, fh)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _cmd_benchmark_analyze(args) -> int:
    try:
        records = bench.read_results_csv(args.results)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot read results from {args.results}: {exc}") from exc
    summaries = bench.aggregate(records)
    fh, close = _open_out(args.out_summary)
    try:
        bench.write_summary_csv(summaries, fh)
    finally:
        if close:
            fh.close()
    mood = bench.mood_all(records)
    fh, close = _open_out(args.out_mood)
    try:
        bench.write_mood_csv(mood, fh)
    finally:
        if close:
            fh.close()
    if args.svg:
        _svg_r_distributions(records, args.svg)
    return EXIT_OK


def _cmd_timing(args) -> int:
    seed = _default_seed(args.seed)
    classic = list(CLOSED_FORM_KINDS)
    if args.quick:
        reps = args.reps if args.reps is not None else 5
        rows = timing_mod.timing_study(
            _QUICK_CLASSIC_N_GRID,
            _QUICK_CLASSIC_D_GRID,
            reps=reps,
            measures=classic,
            seed=seed,
        )
        rows += timing_mod.timing_study(
            _QUICK_ERSATZ_N_GRID,
            _QUICK_CLASSIC_D_GRID,
            reps=reps,
            measures=[MeasureKind.S_ERSATZ],
            n_ref=_ERSATZ_N_REF,
            seed=seed,
        )
    else:
        reps = args.reps if args.reps is not None else 20
        rows = timing_mod.timing_study(
            _CLASSIC_N_GRID,
            _CLASSIC_D_GRID,
            reps=reps,
            measures=classic,
            seed=seed,
        )
        rows += timing_mod.timing_study(
            _ERSATZ_N_GRID,
            _CLASSIC_D_GRID,
            reps=reps,
            measures=[MeasureKind.S_ERSATZ],
            n_ref=_ERSATZ_N_REF,
            seed=seed,
        )
    fh, close = _open_out(args.out)
    try:
        fh.write("measure,axis,n,d,median_seconds\n")
        for row in rows:
            fh.write(
                f"{row.kind.value},{row.axis},{row.n},{row.d},{row.median_seconds!r}\n"
            )
    finally:
        if close:
            fh.close()
    slopes = timing_mod.fit_slopes(rows)
    for (kind, axis), slope in sorted(
        slopes.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
    ):
        print(f"slope {kind.value} vs {axis}: {slope:.3f}")
    if args.svg:
        _svg_timing(rows, args.svg)
    return EXIT_OK


def _svg_r_distributions(records, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = [bench.defined_r(records, k) for k in ALL_KINDS]
    labels = [k.value for k in ALL_KINDS]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.boxplot([d if d.size else [np.nan] for d in data], tick_labels=labels)
    ax.set_ylabel("r (savage-score agreement)")
    ax.axhline(0.0, color="grey", lw=0.5)
    fig.autofmt_xdate(rotation=30)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _svg_timing(rows, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for axis, ax in zip(("n", "d"), axes):
        for kind in ALL_KINDS:
            pts = sorted(
                (r.n if axis == "n" else r.d, r.median_seconds)
                for r in rows
                if r.kind is kind and r.axis == axis
            )
            if pts:
                ax.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", label=kind.value)
        ax.set_xlabel("sample size" if axis == "n" else "dimensions")
        ax.set_ylabel("median seconds")
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = _load_config(argv)
        parser = _build_parser(config)
        args = parser.parse_args(argv)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "discrepancy":
            return _cmd_discrepancy(args)
        if args.command == "sensitivity":
            return _cmd_sensitivity(args)
        if args.command == "benchmark":
            if args.bench_command == "run":
                return _cmd_benchmark_run(args)
            return _cmd_benchmark_analyze(args)
        if args.command == "timing":
            return _cmd_timing(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
