"""Command-line interface.

Subcommands: nn, risk, simulate, audit, population. Every command accepts
``--json`` and emits a bundle embedding the full input echo, so any output can
be reproduced from the output itself. Exit codes: 0 success, 1 usage error,
2 data or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .audit import (
    build_report,
    curve_to_csv,
    default_criteria,
    far_curve,
    parse_audit_csv,
    parse_paired_csv,
)
from .geometry import (
    SimConfig,
    nn_to_random_ratio,
    run_simulation,
    theory_comparison,
)
from .nnstats import nn_mean_approx, nn_mean_exact
from .perception import PerceptualParams, risk_verdict
from .population import (
    DEFAULT_KNOWN_FACES,
    builtin_datasets,
    builtin_estimates,
    familiarity_stats,
    fold_ratio,
    get_estimate,
)

__all__ = ["main", "run"]

#: Identities in the reference celebrity gallery of a commercial recognizer.
DEFAULT_GALLERY_SIZE = 8e6


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(args, inputs: dict, results: dict, human_lines: list[str]) -> None:
    if args.json:
        bundle = {
            "command": args.command,
            "version": __version__,
            "inputs": inputs,
            "results": results,
        }
        print(json.dumps(bundle, indent=2))
    else:
        for line in human_lines:
            print(line)


def _cmd_nn(args) -> int:
    inputs = {"D": args.D, "n": args.n, "N": args.N, "mode": args.mode}
    results: dict = {}
    lines = []
    if args.mode in ("exact", "both"):
        results["exact"] = nn_mean_exact(args.D, args.n, args.N)
        lines.append(f"exact   {results['exact']!r}")
    if args.mode in ("approx", "both"):
        results["approx"] = nn_mean_approx(args.D, args.n, args.N)
        lines.append(f"approx  {results['approx']!r}")
    if args.mode == "both":
        results["ratio"] = results["exact"] / results["approx"]
        lines.append(f"ratio   {results['ratio']!r}")
    _emit(args, inputs, results, lines)
    return 0


def _cmd_risk(args) -> int:
    if args.population is not None:
        estimate = get_estimate(args.population)
        N = estimate.count
    else:
        N = args.N
    params = PerceptualParams(d_bar_prime=args.dprime, c=args.c)
    assessment = risk_verdict(params, N, args.D)
    inputs = {
        "D": args.D,
        "N": N,
        "population": args.population,
        "dprime": args.dprime,
        "c": args.c,
    }
    lines = [
        f"verdict                {'AT RISK' if assessment.at_risk else 'not at risk'}",
        f"mean_nn_distance       {assessment.mean_nn_distance!r}",
        f"mean_nn_jnd            {assessment.mean_nn_jnd!r}",
        f"threshold_jnd          {assessment.threshold_jnd!r}",
        f"confusion_probability  {assessment.confusion_probability!r}",
        f"critical_population    {assessment.critical_population!r}",
    ]
    _emit(args, inputs, assessment.to_dict(), lines)
    return 0


def _cmd_simulate(args) -> int:
    config = SimConfig(
        D=args.D,
        N=args.N,
        trials=args.trials,
        seed=args.seed,
        topology=args.topology,
        max_rank=args.max_rank,
    )
    result = run_simulation(config, workers=args.workers)
    comparison = theory_comparison(result)
    if args.out is not None:
        out = Path(args.out)
        if out.suffix == ".json":
            out.write_text(result.to_json() + "\n")
        elif out.suffix == ".csv":
            out.write_text(result.to_csv())
        else:
            raise ValueError(f"--out must end in .json or .csv, got {args.out!r}")
    inputs = dict(config.to_dict(), workers=args.workers, out=args.out)
    lines = [f"{'rank':>4} {'mean':>22} {'se':>22} {'count':>8} {'theory':>22} {'z':>9}"]
    for stats, cmp in zip(result.ranks, comparison):
        lines.append(
            f"{stats.rank:>4} {stats.mean:>22.16g} {stats.se:>22.16g} "
            f"{stats.count:>8} {cmp['theory_mean']:>22.16g} {cmp['z']:>9.3f}"
        )
    _emit(args, inputs, {"simulation": result.to_json_dict(), "theory": comparison}, lines)
    return 0


def _cmd_audit(args) -> int:
    with open(args.records, newline="") as f:
        records = parse_audit_csv(f)
    pairs = None
    if args.pairs is not None:
        with open(args.pairs, newline="") as f:
            pairs = parse_paired_csv(f)
    criteria = default_criteria(args.curve_steps)
    target_population = None
    if args.population is not None:
        target_population = get_estimate(args.population).count
    report = build_report(
        records,
        pairs=pairs,
        criteria=criteria,
        gallery_size=args.gallery if target_population is not None else None,
        target_population=target_population,
        target_label=args.population,
    )
    if args.curve_out is not None:
        Path(args.curve_out).write_text(curve_to_csv(far_curve(records, criteria)))
    inputs = {
        "records": args.records,
        "pairs": args.pairs,
        "gallery": args.gallery,
        "population": args.population,
        "curve_steps": args.curve_steps,
    }
    far = report["far"]
    lines = [
        f"false_alarm_rate  {far['rate']!r}  (k={far['k']}, n={far['n']}, se={far['standard_error']:.4g})"
    ]
    if "discrimination" in report:
        disc = report["discrimination"]
        lines.append(
            f"discrimination    {disc['proportion_real_wins']!r}  (n_pairs={disc['n_pairs']})"
        )
        lines.append(f"jnd_fraction      {report['jnd_fraction']!r}")
    if "extrapolation" in report:
        ext = report["extrapolation"]
        lines.append(
            f"extrapolation     {ext['fraction']!r}  "
            f"(gallery={ext['gallery_size']:g} -> {ext['target_label']}={ext['target_population']:g})"
        )
    lines.extend(f"note: {n}" for n in report["notes"])
    _emit(args, inputs, report, lines)
    return 0


def _cmd_population(args) -> int:
    estimates = builtin_estimates()
    datasets = builtin_datasets()
    folds = [
        {
            "population": est.label,
            "dataset": ds.name,
            "ratio": fold_ratio(est.count, ds.reference_count()),
        }
        for est in estimates
        for ds in datasets
    ]
    familiarity = [
        dict(familiarity_stats(est.count), population=est.label) for est in estimates
    ]
    results = {
        "estimates": [e.to_dict() for e in estimates],
        "datasets": [d.to_dict() for d in datasets],
        "fold_ratios": folds,
        "familiarity": familiarity,
    }
    lines = ["population estimates:"]
    for e in estimates:
        lines.append(f"  {e.label:<24} {e.count:.4g}  ({e.provenance})")
    lines.append("datasets:")
    for d in datasets:
        approx = " (approximate)" if d.approximate else ""
        lines.append(
            f"  {d.name:<8} images={d.image_count}  identities<={d.identity_count_upper_bound}{approx}"
        )
    lines.append("fold ratios (population / dataset count):")
    for f in folds:
        lines.append(f"  {f['population']:<24} vs {f['dataset']:<8} {f['ratio']:,.1f}")
    lines.append(f"familiarity (known faces = {DEFAULT_KNOWN_FACES:g}):")
    for f in familiarity:
        lines.append(f"  {f['population']:<24} fraction {f['familiar_fraction']:.3e}")
    _emit(args, {}, results, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="likenessrisk", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_nn = sub.add_parser("nn", help="closed-form mean nearest-neighbor distances")
    p_nn.add_argument("-D", "--D", dest="D", type=int, required=True, help="dimensionality")
    p_nn.add_argument("-n", "--n", dest="n", type=int, default=1, help="neighbor rank")
    p_nn.add_argument("-N", "--N", dest="N", type=float, required=True,
                      help="point count (scientific notation accepted, e.g. 2e11)")
    mode = p_nn.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--approx", dest="mode", action="store_const", const="approx")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    p_nn.set_defaults(mode="both", func=_cmd_nn)

    p_risk = sub.add_parser("risk", help="evaluate the perceptual privacy criterion")
    p_risk.add_argument("-D", "--D", dest="D", type=int, default=10)
    source = p_risk.add_mutually_exclusive_group(required=True)
    source.add_argument("-N", "--N", dest="N", type=float, help="entity count")
    source.add_argument("--population", help="builtin population label")
    p_risk.add_argument("--dprime", type=float, default=1.0,
                        help="average observer discriminability (JND per unit distance)")
    p_risk.add_argument("--c", type=float, default=1.0, help="likeness threshold in JND")
    p_risk.set_defaults(func=_cmd_risk)

    p_sim = sub.add_parser("simulate", help="Monte Carlo check of the closed form")
    p_sim.add_argument("-D", "--D", dest="D", type=int, required=True)
    p_sim.add_argument("-N", "--N", dest="N", type=int, required=True, help="points per trial")
    p_sim.add_argument("--trials", type=int, default=100)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--topology", choices=("torus", "cube"), default="torus")
    p_sim.add_argument("--max-rank", type=int, default=2)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--out", help="write the result to this .json or .csv path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_audit = sub.add_parser("audit", help="false-alarm analysis of recognizer outputs")
    p_audit.add_argument("--records", required=True, help="audit CSV path")
    p_audit.add_argument("--pairs", help="paired-confidence CSV path")
    p_audit.add_argument("--gallery", type=float, default=DEFAULT_GALLERY_SIZE,
                         help="recognizer gallery size")
    p_audit.add_argument("--population", help="extrapolation target population label")
    p_audit.add_argument("--curve-steps", type=int, default=11)
    p_audit.add_argument("--curve-out", help="write the curve CSV to this path")
    p_audit.set_defaults(func=_cmd_audit)

    p_pop = sub.add_parser("population", help="builtin estimates, datasets, fold ratios")
    p_pop.set_defaults(func=_cmd_population)

    for p in (p_nn, p_risk, p_sim, p_audit, p_pop):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # includes AuditFormatError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
