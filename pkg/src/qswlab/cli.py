"""Command line experiment runner.

Subcommands generate graphs, run propagation sweeps, classify convergence,
scan search probabilities, and drive multi-sample sweeps. Outputs are CSV
(data columns, header always present) and JSON (full config echo, seed,
library version, wall-clock seconds) so runs can be reproduced exactly.

Exit codes: 0 success, 2 usage or config error, 3 numerical failure.
"""
from __future__ import annotations

import csv
import functools
import json
import math
import os
import sys
import time

import click
import numpy as np

from . import __version__, analysis, gksl, graphs, nonmoral, search
from .exceptions import NumericalError, QswlabError


def parse_graph_spec(spec: str):
    """`path:61`, `complete:256`, `star:100`, or `file:<path>`."""
    kind, _, arg = spec.partition(":")
    if not arg:
        raise click.UsageError(f"malformed graph spec {spec!r}")
    if kind == "file":
        try:
            with open(arg) as fh:
                return graphs.from_json(fh)
        except (OSError, ValueError, KeyError) as exc:
            raise click.UsageError(f"cannot load graph file {arg}: {exc}")
    try:
        n = int(arg)
    except ValueError:
        raise click.UsageError(f"graph size must be an integer in {spec!r}")
    if n < 1:
        raise click.UsageError("graph size must be positive")
    if kind == "path":
        return graphs.path(n)
    if kind == "complete":
        return graphs.complete(n)
    if kind == "star":
        return graphs.star(n)
    raise click.UsageError(f"unknown graph family {kind!r}")


def _write_json(path, payload, config, seed):
    doc = {
        "config": config,
        "seed": seed,
        "version": __version__,
        "wallclock_sec": payload.pop("_wallclock", None),
    }
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, default=float)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def numerical_guard(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (NumericalError, np.linalg.LinAlgError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(3)
        except QswlabError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    return wrapper


@click.group()
def main():
    """Continuous-time walk and quantum search experiments."""


@main.command("graphgen")
@click.option("--model", type=click.Choice(["er", "ba", "cl"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, default=None, help="edge probability (er)")
@click.option("--m0", type=int, default=None, help="attachment count (ba)")
@click.option("--a", type=float, default=None, help="power family offset (cl)")
@click.option("--b", type=float, default=None, help="power family slope (cl)")
@click.option("--directed", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@numerical_guard
def cmd_graphgen(model, n, p, m0, a, b, directed, seed, out):
    """Sample a random graph and write it as JSON."""
    if n < 1:
        raise click.UsageError("--n must be positive")
    try:
        if model == "er":
            if p is None:
                raise click.UsageError("er requires --p")
            g = graphs.gen_er(n, p, seed, directed=directed)
        elif model == "ba":
            if m0 is None:
                raise click.UsageError("ba requires --m0")
            g = graphs.gen_ba(n, m0, seed, directed=directed)
        else:
            if a is None or b is None:
                raise click.UsageError("cl requires --a and --b")
            if directed:
                raise click.UsageError("cl model is undirected")
            g = graphs.gen_cl(n, graphs.cl_powerlaw_omega(n, a, b), seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    with open(out, "w") as fh:
        graphs.to_json(g, fh)


def _time_grid(t_start, t_stop, t_step):
    if t_step <= 0 or t_stop < t_start:
        raise click.UsageError("need t_step > 0 and t_stop >= t_start")
    grid = np.arange(t_start, t_stop + 1e-9 * t_step, t_step)
    if grid.size == 0:
        raise click.UsageError("empty time grid")
    return grid


def _ngqsw_path_profiles(n, omega, times):
    """Natural-measurement profiles of the symmetrized walk on a path."""
    dg = nonmoral.demoralize(graphs.to_digraph(graphs.path(n)))
    lbs = nonmoral.symmetrized_path_lindblads(dg)
    ops = nonmoral.NonmoralOperators(
        hamiltonian=nonmoral.standard_hamiltonian(dg),
        rotating=nonmoral.standard_rotating_hamiltonian(dg),
        lindblads=lbs,
    )
    gen = nonmoral.ngqsw_generator(dg, ops, omega)
    rho = nonmoral.block_mixed_state(dg, (n - 1) // 2)
    out = np.empty((len(times), n))
    prev_t = 0.0
    for i, t in enumerate(times):
        rho = gksl.evolve(gen, rho, t - prev_t)
        prev_t = t
        out[i] = nonmoral.natural_measure(rho, dg)
    return out


@main.command("propagate")
@click.option("--model", type=click.Choice(["gqsw", "ngqsw"]), required=True)
@click.option("--omega", type=float, required=True)
@click.option("--length", type=int, default=121, show_default=True,
              help="path length")
@click.option("--t-start", type=float, default=30.0, show_default=True)
@click.option("--t-stop", type=float, default=1590.0, show_default=True)
@click.option("--t-step", type=float, default=30.0, show_default=True)
@click.option("--batch", type=int, default=5, show_default=True)
@click.option("--out-csv", type=click.Path(), required=True)
@click.option("--out-json", type=click.Path(), required=True)
@numerical_guard
def cmd_propagate(model, omega, length, t_start, t_stop, t_step, batch,
                  out_csv, out_json):
    """Second-moment propagation sweep on a path, with scaling exponents."""
    t0 = time.time()
    times = _time_grid(t_start, t_stop, t_step)
    if not 0.0 <= omega <= 1.0:
        raise click.UsageError("--omega must lie in [0, 1]")
    n = length
    center = (n + 1) // 2  # 1-based
    positions = np.arange(1, n + 1) - center
    mu2 = np.empty(times.size)
    if model == "gqsw":
        for i, t in enumerate(times):
            p = analysis.path_probability_profile(n, center, t, omega)
            mu2[i] = analysis.second_moment(p / p.sum(), positions)
    else:
        profiles = _ngqsw_path_profiles(n, omega, times)
        for i in range(times.size):
            mu2[i] = analysis.second_moment(profiles[i], positions)
    trace = analysis.scaling_exponents(times, mu2, batch)
    rows = []
    for i, t in enumerate(times):
        if i < trace.alphas.size:
            rows.append([t, mu2[i], trace.alpha_times[i], trace.alphas[i]])
        else:
            rows.append([t, mu2[i], "", ""])
    _write_csv(out_csv, ["t", "mu2", "alpha_mid", "alpha"], rows)
    payload = {"final_alpha": float(trace.alphas[-1]), "_wallclock": time.time() - t0}
    if trace.alphas.size >= 8:
        fit = analysis.fit_limit_model(trace.alpha_times, trace.alphas)
        payload["fit"] = {"p": fit.params, "residual": fit.residual,
                          "degenerate": fit.degenerate}
    config = {"command": "propagate", "model": model, "omega": omega,
              "length": length, "t_start": t_start, "t_stop": t_stop,
              "t_step": t_step, "batch": batch}
    _write_json(out_json, payload, config, seed=None)


@main.command("converge")
@click.option("--model", type=click.Choice(["lqsw", "gqsw", "ngqsw"]), required=True)
@click.option("--graph", "graph_spec", required=True)
@click.option("--omega", type=float, default=0.5, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@numerical_guard
def cmd_converge(model, graph_spec, omega, tol, out):
    """Classify the generator spectrum of a walk on the given graph."""
    t0 = time.time()
    g = parse_graph_spec(graph_spec)
    dig = g if isinstance(g, graphs.DiGraph) else graphs.to_digraph(g)
    if model == "lqsw":
        gen = gksl.generator_from_spec(gksl.lqsw_spec(dig, omega))
    elif model == "gqsw":
        gen = gksl.generator_from_spec(gksl.gqsw_spec(dig, omega))
    else:
        dg = nonmoral.demoralize(dig)
        gen = nonmoral.ngqsw_generator(dg, nonmoral.standard_operators(dg), omega)
    report = analysis.classify_convergence(gen, tol=tol)
    payload = {
        "classification": report.classification,
        "zero_multiplicity": report.zero_multiplicity,
        "second_smallest_abs": report.second_smallest_abs,
        "imaginary_count": report.imaginary_count,
        "tol": report.tol,
        "_wallclock": time.time() - t0,
    }
    config = {"command": "converge", "model": model, "graph": graph_spec,
              "omega": omega, "tol": tol}
    _write_json(out, payload, config, seed=None)


@main.command("search")
@click.option("--graph", "graph_spec", required=True)
@click.option("--kind", type=click.Choice(list(search.GRAPH_MATRIX_KINDS)),
              default="adjacency", show_default=True)
@click.option("--marked", type=int, required=True, help="1-based vertex")
@click.option("--gamma-rule", type=click.Choice(["s1", "caption"]), default="s1",
              show_default=True)
@click.option("--gamma", type=float, default=None,
              help="explicit transition rate, overrides the rule")
@click.option("--t-start", type=float, default=None)
@click.option("--t-stop", type=float, default=None)
@click.option("--t-step", type=float, default=None)
@click.option("--out-csv", type=click.Path(), required=True)
@click.option("--out-json", type=click.Path(), required=True)
@numerical_guard
def cmd_search(graph_spec, kind, marked, gamma_rule, gamma, t_start, t_stop,
               t_step, out_csv, out_json):
    """Success-probability scan of the spatial search; auto grid when no
    time options are given."""
    t0 = time.time()
    g = parse_graph_spec(graph_spec)
    if isinstance(g, graphs.DiGraph):
        raise click.UsageError("search requires an undirected graph")
    if not 1 <= marked <= g.n:
        raise click.UsageError(f"--marked must lie in 1..{g.n}")
    w = marked - 1
    h_g = search.graph_hamiltonian(g, kind)
    stats = search.search_stats(h_g, w)
    if t_start is None and t_stop is None and t_step is None:
        t_stop = 3.0 * stats.predicted_t
        times = np.linspace(0.0, t_stop, 301)
    else:
        if None in (t_start, t_stop, t_step):
            raise click.UsageError("give all of --t-start/--t-stop/--t-step or none")
        times = _time_grid(t_start, t_stop, t_step)
    gm = gamma if gamma is not None else ("S1" if gamma_rule == "s1" else "caption")
    run = search.run_search(h_g, w, gm, "principal", times)
    _write_csv(out_csv, ["t", "p"], list(zip(times, run.probs)))
    payload = {
        "stats": {
            "eps": stats.eps, "S1": stats.s1, "S2": stats.s2, "S3": stats.s3,
            "gap": stats.gap, "condition_holds": stats.condition_holds,
            "predicted_t": stats.predicted_t, "gamma": run.gamma,
        },
        "argmax_t": run.argmax_t,
        "p_max": run.p_max,
        "_wallclock": time.time() - t0,
    }
    config = {"command": "search", "graph": graph_spec, "kind": kind,
              "marked": marked, "gamma_rule": gamma_rule, "gamma": gamma}
    _write_json(out_json, payload, config, seed=None)


def _sweep_er_p0(cfg, outdir, seed):
    p0_list = cfg.get("p0", [2.0, 4.0, 8.0])
    n = int(cfg.get("n", 200))
    samples = int(cfg["samples"])
    marked_per_graph = int(cfg.get("marked_per_graph", 5))
    rows = []
    root = np.random.SeedSequence(seed)
    for p0 in p0_list:
        probs = []
        children = root.spawn(samples)
        for s in range(samples):
            rng = np.random.default_rng(children[s])
            g = graphs.gen_er(n, min(1.0, p0 * math.log(n) / n),
                              int(rng.integers(2**32)))
            gc = graphs.giant_component(g)
            h_g = search.graph_hamiltonian(gc, "laplacian")
            t_meas = math.pi * math.sqrt(gc.n) / 2.0
            marked = rng.choice(gc.n, size=min(marked_per_graph, gc.n),
                                replace=False)
            for w in marked:
                run = search.run_search(h_g, int(w), "caption", "principal",
                                        np.array([t_meas]))
                probs.append(run.probs[0])
        bound = search.lambert_bound(p0) if p0 > 1 else 0.0
        rows.append([p0, n, float(np.min(probs)), float(np.mean(probs)), bound])
        _write_csv(os.path.join(outdir, f"er_p0_{p0}.csv"), ["p"],
                   [[p] for p in probs])
    _write_csv(os.path.join(outdir, "aggregate.csv"),
               ["p0", "n", "minP", "meanP", "bound"], rows)


def _sweep_ba_search(cfg, outdir, seed):
    n_list = cfg.get("n", [100, 200, 400])
    m0 = int(cfg.get("m0", 3))
    samples = int(cfg["samples"])
    rows = []
    root = np.random.SeedSequence(seed)
    for n in n_list:
        children = root.spawn(samples)
        for s in range(samples):
            rng = np.random.default_rng(children[s])
            g = graphs.gen_ba(int(n), m0, int(rng.integers(2**32)))
            w = int(n) - 1
            h_g = search.graph_hamiltonian(g, "normalized_laplacian")
            stats = search.search_stats(h_g, w)
            run = search.run_search(h_g, w, "S1", "principal",
                                    np.array([stats.predicted_t]))
            rows.append([n, stats.predicted_t, run.probs[0]])
    _write_csv(os.path.join(outdir, "aggregate.csv"), ["n", "T", "pT"], rows)


@main.command("sweep")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@numerical_guard
def cmd_sweep(config_path):
    """Run a multi-sample experiment described by a JSON config file."""
    t0 = time.time()
    with open(config_path) as fh:
        cfg = json.load(fh)
    kind = cfg.get("kind")
    if int(cfg.get("samples", 0)) < 1:
        raise click.UsageError("config must request at least one sample")
    outdir = cfg.get("outdir", ".")
    os.makedirs(outdir, exist_ok=True)
    seed = int(cfg.get("seed", 0))
    if kind == "er_p0":
        _sweep_er_p0(cfg, outdir, seed)
    elif kind == "ba_search":
        _sweep_ba_search(cfg, outdir, seed)
    else:
        raise click.UsageError(f"unknown sweep kind {kind!r}")
    _write_json(os.path.join(outdir, "sweep.json"),
                {"_wallclock": time.time() - t0}, cfg, seed)


if __name__ == "__main__":
    main()
