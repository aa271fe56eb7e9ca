"""Command-line interface.

Every command writes a ``manifest.json`` with the fully resolved
configuration so any output can be reproduced bit-exactly. Exit codes:
0 success, 2 bad arguments, 3 data error, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import csv
import functools
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .backend import BACKEND
from .baselines import classic_cue_validities
from .benchmark import (BenchmarkConfig, export_cue_rank_heatmap,
                        minmax_scale, run_benchmark, trace_log_posterior,
                        write_results_csv, write_trace_csv)
from .datasets import SYNTHETIC_BENCHMARKS, load_item_table
from .embedding import run_embedding_experiment
from .inference import (EnumerationCapError, SamplerConfig,
                        default_threshold_grid, exhaustive_posterior,
                        gibbs_sample)
from .likelihood import NoisePrior, epsilon_posterior
from .model import build_comparisons
from .prediction import predictive_prob

EXIT_DATA_ERROR = 3
EXIT_ENUMERATION_CAP = 4


def _default_seed() -> int:
    return int(os.environ.get("PTTB_SEED", "0"))


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except EnumerationCapError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ENUMERATION_CAP)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA_ERROR)
    return wrapper


def _write_manifest(out_dir: Path, command: str, params: dict) -> None:
    manifest = {
        "tool": "pttb",
        "version": __version__,
        "backend": BACKEND,
        "command": command,
        "params": params,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_thresholds(spec: str, train):
    if spec == "none":
        return None
    if spec.startswith("auto:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise click.BadParameter(f"bad threshold spec {spec!r}")
        return default_threshold_grid(train, k)
    raise click.BadParameter(f"bad threshold spec {spec!r} "
                             "(expected 'none' or 'auto:K')")


@click.group()
@click.version_option(__version__)
def main():
    """Probabilistic Take The Best: fit, predict, benchmark, and experiment."""


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--criterion", required=True)
@click.option("--method", type=click.Choice(["exact", "mcmc"]), default="mcmc")
@click.option("--samples", default=1000, show_default=True)
@click.option("--burnin", default=100, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--thresholds", default="none", show_default=True,
              help="'none', or 'auto:K' for a K-point per-cue grid")
@click.option("--no-transitivity-weight", is_flag=True)
@click.option("--out", "out_dir", default="pttb-fit", type=click.Path(),
              show_default=True)
@_handle_errors
def fit(data_path, criterion, method, samples, burnin, seed, thresholds,
        no_transitivity_weight, out_dir):
    """Fit the strategy posterior on a CSV dataset."""
    seed = _default_seed() if seed is None else seed
    table, _ = load_item_table(data_path, criterion)
    train = build_comparisons(table, apply_weight=not no_transitivity_weight)
    grid = _parse_thresholds(thresholds, train)
    prior = NoisePrior()
    if method == "exact":
        posterior = exhaustive_posterior(train, prior, thresholds=grid)
    else:
        posterior = gibbs_sample(train, prior,
                                 SamplerConfig(samples, burnin, seed),
                                 thresholds=grid)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_posterior_csv(posterior, out / "posterior.csv", table.cue_names)
    validities = classic_cue_validities(train)
    export_cue_rank_heatmap(posterior, validities, out / "ranks.csv",
                            cue_names=table.cue_names)
    weights = posterior.entry_weights
    eps_mean = float(sum(
        w * epsilon_posterior(c, prior).mean
        for w, c in zip(weights, posterior.counts)))
    summary = {
        "mode": posterior.mode,
        "entries": posterior.n_entries,
        "epsilon_posterior_mean": eps_mean,
        "map_strategy": _strategy_dict(posterior.map_strategy(),
                                       table.cue_names),
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, "fit", {
        "data": str(data_path), "criterion": criterion, "method": method,
        "samples": samples, "burnin": burnin, "seed": seed,
        "thresholds": thresholds,
        "transitivity_weight": not no_transitivity_weight,
    })
    click.echo(f"wrote posterior ({posterior.n_entries} entries) to {out}")


def _strategy_dict(strategy, cue_names):
    return {
        "order": [cue_names[m] for m in strategy.order],
        "directions": {cue_names[m]: d
                       for m, d in enumerate(strategy.directions)},
        "thresholds": {cue_names[m]: t
                       for m, t in enumerate(strategy.thresholds)},
    }


def _write_posterior_csv(posterior, path, cue_names):
    weights = posterior.entry_weights
    agg: dict[tuple, float] = {}
    for s, w in zip(posterior.strategies, weights):
        key = (s.order, s.directions, s.thresholds)
        agg[key] = agg.get(key, 0.0) + float(w)
    rows = sorted(agg.items(), key=lambda kv: -kv[1])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", "directions", "thresholds", "probability"])
        for (order, dirs, thrs), p in rows:
            writer.writerow([
                "|".join(cue_names[m] for m in order),
                "|".join(str(d) for d in dirs),
                "|".join(repr(t) for t in thrs),
                repr(p),
            ])


def _parse_dataset_args(data_specs, synthetic):
    datasets = []
    for spec in data_specs:
        path, sep, crit = spec.rpartition(":")
        if not sep or not path:
            raise click.BadParameter(
                f"--data expects PATH:CRITERION, got {spec!r}")
        table, _ = load_item_table(path, crit)
        datasets.append((Path(path).stem, table))
    for name in synthetic:
        gen = SYNTHETIC_BENCHMARKS.get(name)
        if gen is None:
            known = ", ".join(sorted(SYNTHETIC_BENCHMARKS))
            raise click.BadParameter(
                f"unknown synthetic dataset {name!r} (choose from {known})")
        datasets.append((name, gen()))
    if not datasets:
        raise click.BadParameter("no datasets given (use --data or --synthetic)")
    return tuple(datasets)


@main.command()
@click.option("--data", "data_specs", multiple=True,
              help="PATH:CRITERION, repeatable")
@click.option("--synthetic", multiple=True,
              help="add a bundled synthetic benchmark dataset by name "
                   "(repeatable)")
@click.option("--fractions", default="0.1,0.3,0.5,0.7,0.9", show_default=True)
@click.option("--reps", default=100, show_default=True)
@click.option("--methods", default="PTTB,PTTB-CDT,TTB,LOGREG",
              show_default=True)
@click.option("--samples", default=1000, show_default=True)
@click.option("--burnin", default=100, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--jobs", default=1, show_default=True)
@click.option("--no-transitivity-weight", is_flag=True)
@click.option("--svg", is_flag=True)
@click.option("--out", "out_dir", default="pttb-bench", type=click.Path(),
              show_default=True)
@_handle_errors
def bench(data_specs, synthetic, fractions, reps, methods, samples, burnin,
          seed, jobs, no_transitivity_weight, svg, out_dir):
    """Replicated train/test accuracy comparison across methods."""
    seed = _default_seed() if seed is None else seed
    datasets = _parse_dataset_args(data_specs, synthetic)
    config = BenchmarkConfig(
        datasets=datasets,
        fractions=tuple(float(f) for f in fractions.split(",")),
        replications=reps,
        methods=tuple(m.strip() for m in methods.split(",")),
        sampler=SamplerConfig(samples, burnin, seed),
        base_seed=seed,
        transitivity_weight=not no_transitivity_weight,
        jobs=jobs,
    )
    rows = run_benchmark(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(rows, out / "results.csv")
    if svg:
        _plot_accuracy_curves(rows, out / "accuracy.svg")
    _write_manifest(out, "bench", {
        "datasets": [name for name, _ in datasets],
        "data": list(data_specs), "synthetic": list(synthetic),
        "fractions": fractions, "replications": reps,
        "methods": config.methods, "samples": samples, "burnin": burnin,
        "seed": seed, "jobs": jobs,
        "transitivity_weight": not no_transitivity_weight,
    })
    click.echo(f"wrote {len(rows)} result rows to {out / 'results.csv'}")


def _plot_accuracy_curves(rows, svg_path):
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt
    datasets = sorted({r.dataset for r in rows})
    fig, axes = plt.subplots(1, len(datasets),
                             figsize=(4 * len(datasets), 3.2), squeeze=False)
    for ax, ds in zip(axes[0], datasets):
        methods = sorted({r.method for r in rows if r.dataset == ds})
        for m in methods:
            pts = sorted({r.fraction for r in rows
                          if r.dataset == ds and r.method == m})
            means = [np.mean([r.accuracy for r in rows
                              if r.dataset == ds and r.method == m
                              and r.fraction == f]) for f in pts]
            ax.plot(pts, means, marker="o", label=m)
        ax.set_title(ds)
        ax.set_xlabel("training fraction")
        ax.set_ylabel("accuracy")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(svg_path)
    plt.close(fig)


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--criterion", required=True)
@click.option("--iterations", default=50, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--no-transitivity-weight", is_flag=True)
@click.option("--svg", is_flag=True)
@click.option("--out", "out_dir", default="pttb-trace", type=click.Path(),
              show_default=True)
@_handle_errors
def trace(data_path, criterion, iterations, seed, no_transitivity_weight,
          svg, out_dir):
    """Record the log posterior over the first MCMC sweeps."""
    seed = _default_seed() if seed is None else seed
    table, _ = load_item_table(data_path, criterion)
    data = build_comparisons(table, apply_weight=not no_transitivity_weight)
    values = trace_log_posterior(data, iterations=iterations, seed=seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(values, out / "trace.csv")
    if svg:
        import matplotlib
        matplotlib.use("svg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.plot(minmax_scale(values), "k-")
        ax.set_xlabel("MCMC iteration")
        ax.set_ylabel("scaled log posterior")
        fig.tight_layout()
        fig.savefig(out / "trace.svg")
        plt.close(fig)
    _write_manifest(out, "trace", {
        "data": str(data_path), "criterion": criterion,
        "iterations": iterations, "seed": seed,
        "transitivity_weight": not no_transitivity_weight,
    })
    click.echo(f"wrote trace to {out / 'trace.csv'}")


@main.command()
@click.option("--seed", default=None, type=int)
@click.option("--resolution", default=47, show_default=True)
@click.option("--subset", default=10, show_default=True)
@click.option("--threshold", default=0.25, show_default=True)
@click.option("--svg", is_flag=True)
@click.option("--out", "out_dir", default="pttb-embed", type=click.Path(),
              show_default=True)
@_handle_errors
def embed(seed, resolution, subset, threshold, svg, out_dir):
    """Run the biased-feedback regression experiment (five panels)."""
    seed = _default_seed() if seed is None else seed
    out = Path(out_dir)
    run_embedding_experiment(seed=seed, resolution=resolution,
                             subset_size=subset, threshold=threshold,
                             out_dir=out, svg=svg)
    _write_manifest(out, "embed", {
        "seed": seed, "resolution": resolution, "subset": subset,
        "threshold": threshold,
    })
    click.echo(f"wrote 5 panels to {out}")


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--criterion", required=True)
@click.option("--x1", required=True, help="comma-separated cue values")
@click.option("--x2", required=True, help="comma-separated cue values")
@click.option("--method", type=click.Choice(["exact", "mcmc"]), default="mcmc")
@click.option("--samples", default=1000, show_default=True)
@click.option("--burnin", default=100, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--thresholds", default="none", show_default=True)
@click.option("--no-transitivity-weight", is_flag=True)
@_handle_errors
def predict(data_path, criterion, x1, x2, method, samples, burnin, seed,
            thresholds, no_transitivity_weight):
    """Posterior predictive probability that the first item wins."""
    seed = _default_seed() if seed is None else seed
    table, _ = load_item_table(data_path, criterion)
    train = build_comparisons(table, apply_weight=not no_transitivity_weight)
    grid = _parse_thresholds(thresholds, train)
    prior = NoisePrior()
    if method == "exact":
        posterior = exhaustive_posterior(train, prior, thresholds=grid)
    else:
        posterior = gibbs_sample(train, prior,
                                 SamplerConfig(samples, burnin, seed),
                                 thresholds=grid)
    v1 = np.array([float(v) for v in x1.split(",")])
    v2 = np.array([float(v) for v in x2.split(",")])
    result = predictive_prob(posterior, prior, v1, v2)
    click.echo(json.dumps({"p_first": result.p_first,
                           "p_second": result.p_second,
                           "decided_label": result.decided_label}))


if __name__ == "__main__":
    main()
