#!/usr/bin/env python3
"""
Command-line front end: build graphs, run spectral / Cheeger / mixing / distance
analyses, the verification suite, and sweeps over h.

JSON and CSV go to stdout (or --out); logs and rich summaries go to stderr.
"""
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table
from rich import box

from . import __version__
from .errors import (
    ConvergenceError, InvalidInputError, InvalidParameterError, PlanarGapError,
)
from .graphs import (
    FORMATS, HatTree, build_binary_tree, build_hat_tree, build_weighted_chain, count_formulas,
    degree_stats, read_graph, serialize, subdivide_edges, as_weighted_graph,
)
from .logging_helper import get_logger, setup_logging
from .spectral import cheeger_exact, cheeger_sweep, lambda1, normalized_lambda1, verify_cheeger_inequality
from .utils.config_loader import RunConfig, build_run_config
from .verification import verify_all
from .walks import distance_stats, eccentricity, export_trajectory_csv, mixing_time, relaxation_time

logger = get_logger('cli')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64

SWEEP_COLUMNS = ['h', 'k', 'n', 'm', 'lambda1', 'bound_1_over_7k2', 'diam', 'hk', 'avg_sq_dist',
                 't_mix', 'relax_time', 'product_u', 'error']


class GapGroup(click.Group):
    """Click group that maps library exceptions onto the documented exit codes"""

    def main(self, args=None, prog_name=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            rv = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            rv = EXIT_FAILURE
        except ConvergenceError as e:
            logger.error(f"Numerical failure: {e}")
            click.echo(f"Error: {e}", err=True)
            rv = EXIT_NUMERICAL
        except (InvalidParameterError, InvalidInputError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            rv = EXIT_USAGE
        except PlanarGapError as e:
            click.echo(f"Error: {e}", err=True)
            rv = EXIT_FAILURE
        rv = int(rv or 0)
        if standalone_mode:
            sys.exit(rv)
        return rv


def _stderr_console(ctx: click.Context) -> Optional[Console]:
    if ctx.obj.get('quiet'):
        return None
    return Console(stderr=True)


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def emit_report(cfg: RunConfig, results: List[Dict[str, Any]], out: Optional[str] = None) -> None:
    """{"config", "version", "results"}; no timestamps so reruns are byte-identical"""
    text = json.dumps({'config': cfg.to_dict(), 'version': __version__, 'results': results},
                      indent=2, sort_keys=True, default=_to_jsonable)
    if out:
        Path(out).write_text(text + "\n")
        logger.info(f"Wrote report to {out}")
    else:
        click.echo(text)


def _make_config(ctx: click.Context, command: str, **overrides) -> RunConfig:
    cfg = build_run_config(command, overrides, ctx.obj.get('config_path'))
    logger.debug(f"Run config: {cfg.to_dict()}")
    return cfg


def _load_graph(cfg: RunConfig):
    if cfg.input_path:
        return read_graph(cfg.input_path)
    if cfg.h is None:
        raise click.UsageError("either --h or --in is required")
    return build_hat_tree(cfg.h, cfg.resolved_k(), max_vertices=cfg.max_vertices)


def _options(*decorators: Callable) -> Callable:
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func
    return apply


graph_source = _options(
    click.option('--h', 'h', type=int, default=None, help='Tree height h >= 1'),
    click.option('--k', 'k', type=int, default=None, help='Subdivision count (default 2^h)'),
    click.option('--in', 'input_path', type=click.Path(dir_okay=False), default=None,
                 help='Read the graph from a file instead of building it'),
)

solver_flags = _options(
    click.option('--solver', type=click.Choice(['auto', 'dense', 'iterative']), default=None),
    click.option('--tol', 'tolerance', type=float, default=None, help='Solver tolerance'),
    click.option('--max-iter', type=int, default=None),
    click.option('--dense-cutoff', type=int, default=None),
)


@click.group(cls=GapGroup)
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='YAML or JSON config (default config/config.yml)')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR']),
              default='WARNING', show_default=True)
@click.option('--log-file', type=click.Path(dir_okay=False), default=None)
@click.option('--quiet', is_flag=True, help='No summaries or log output on stderr')
@click.version_option(__version__, prog_name='planar-gap')
@click.pass_context
def cli(ctx, config_path, log_level, log_file, quiet):
    """Spectral gap, Cheeger, distance and mixing analysis of planar hat trees."""
    level = logging.CRITICAL if quiet else getattr(logging, log_level)
    setup_logging(level, log_file)
    ctx.ensure_object(dict)
    ctx.obj.update({'config_path': config_path, 'quiet': quiet})


@cli.command()
@click.option('--h', 'h', type=int, required=True)
@click.option('--k', 'k', type=int, default=None)
@click.option('--kind', type=click.Choice(['hat', 'tree', 'chain']), default='hat', show_default=True,
              help='hat tree, plain binary tree T_h, or weighted chain Q_h (k-subdivided if --k)')
@click.option('--format', 'format', type=click.Choice(list(FORMATS)), default=None)
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def build(ctx, **flags):
    """Build a graph and write it as edgelist, json or dot."""
    cfg = _make_config(ctx, 'build', **flags)
    kind = flags['kind']
    if kind == 'hat':
        graph = build_hat_tree(cfg.h, cfg.resolved_k(), max_vertices=cfg.max_vertices)
    elif kind == 'tree':
        graph = build_binary_tree(cfg.h, max_vertices=cfg.max_vertices)
    else:
        graph = build_weighted_chain(cfg.h)
        if cfg.k is not None:
            graph = subdivide_edges(graph, cfg.k)

    data = serialize(graph, cfg.format)
    if cfg.output_path:
        Path(cfg.output_path).write_bytes(data)
    else:
        click.echo(data.decode('utf-8'), nl=False)

    console = _stderr_console(ctx)
    if console:
        base = as_weighted_graph(graph)
        max_degree, d_max = degree_stats(graph)
        table = Table(title="🌳 Graph built", box=box.ROUNDED, header_style="bold cyan")
        table.add_column("quantity")
        table.add_column("value", justify="right")
        table.add_row("kind", kind)
        table.add_row("vertices", str(base.n))
        table.add_row("edges", str(base.m))
        if kind == 'hat':
            n_formula, m_formula = count_formulas(cfg.h, cfg.resolved_k())
            table.add_row("closed form (n, m)", f"({n_formula}, {m_formula})")
        table.add_row("max degree", str(max_degree))
        table.add_row("d_max", f"{d_max:g}")
        console.print(table)
    return EXIT_OK


@cli.command()
@graph_source
@solver_flags
@click.option('--seed', type=int, default=None)
@click.option('--normalized', is_flag=True, help='Gap of the normalized Laplacian instead')
@click.pass_context
def spectrum(ctx, normalized, **flags):
    """Smallest non-zero Laplacian eigenvalue with residual certificate."""
    cfg = _make_config(ctx, 'spectrum', **flags)
    graph = _load_graph(cfg)
    solve = normalized_lambda1 if normalized else lambda1
    try:
        report = solve(graph, **cfg.solver_options())
    except ConvergenceError as e:
        logger.error(f"Solver did not certify its residual: {e}")
        best = e.best.to_dict() if e.best is not None else {}
        best['converged'] = False
        emit_report(cfg, [best])
        return EXIT_NUMERICAL

    emit_report(cfg, [report.to_dict()])
    console = _stderr_console(ctx)
    if console:
        console.print(f"λ₁ = {report.lambda1:.12g}  (residual {report.residual:.2e}, {report.solver})")
    return EXIT_OK


@cli.command()
@graph_source
@click.option('--sweep', 'force_sweep', is_flag=True, help='Sweep cut along the Fiedler vector')
@click.pass_context
def cheeger(ctx, force_sweep, **flags):
    """Cheeger constant: exact for small graphs, sweep cut otherwise."""
    cfg = _make_config(ctx, 'cheeger', **flags)
    graph = _load_graph(cfg)
    n = as_weighted_graph(graph).n
    results = []
    if not force_sweep and n <= cfg.cheeger_exact_max_vertices:
        report = cheeger_exact(graph, max_vertices=cfg.cheeger_exact_max_vertices)
        results.append(report.to_dict())
        sandwich = verify_cheeger_inequality(graph, max_vertices=cfg.cheeger_exact_max_vertices,
                                             rel_tol=cfg.rel_tol)
        results.append(sandwich.to_dict())
    else:
        fiedler = lambda1(graph, **cfg.solver_options())
        report = cheeger_sweep(graph, fiedler.eigenvector)
        results.append(report.to_dict())
    emit_report(cfg, results)
    console = _stderr_console(ctx)
    if console:
        console.print(f"h(G) {'=' if report.method == 'exact' else '<='} {report.value:.12g} "
                      f"with |S| = {len(report.witness)} ({report.method})")
    return EXIT_OK


@cli.command()
@click.option('--h', 'h', type=int, required=True)
@click.option('--k', 'k', type=int, default=None)
@click.option('--trials', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--workers', type=int, default=None)
@solver_flags
@click.pass_context
def verify(ctx, **flags):
    """Run every certificate for (h, k); exit 1 if any claim fails."""
    cfg = _make_config(ctx, 'verify', **flags)
    reports = verify_all(cfg.h, cfg.resolved_k(), trials=cfg.trials, seed=cfg.seed,
                         rel_tol=cfg.rel_tol, workers=cfg.workers,
                         **cfg.solver_options(with_seed=False))
    emit_report(cfg, [r.to_dict() for r in reports])

    failing = [r.claim for r in reports if not r.passed]
    console = _stderr_console(ctx)
    if console:
        table = Table(title=f"🔎 Certificates h={cfg.h} k={cfg.resolved_k()}", box=box.ROUNDED,
                      header_style="bold cyan")
        table.add_column("claim", style="cyan")
        table.add_column("lhs", justify="right")
        table.add_column("rhs", justify="right")
        table.add_column("margin", justify="right")
        table.add_column("pass", justify="center")
        for r in reports:
            table.add_row(r.claim, f"{r.lhs:.6g}", f"{r.rhs:.6g}", f"{r.margin:.3g}",
                          "✅" if r.passed else "❌")
        console.print(table)
    if failing:
        click.echo(f"Failing claims: {', '.join(failing)}", err=True)
        return EXIT_FAILURE
    return EXIT_OK


@cli.command()
@graph_source
@click.option('--eps', type=float, default=None)
@click.option('--method', type=click.Choice(['auto', 'exact', 'monte_carlo']), default=None)
@click.option('--start-policy', type=str, default=None,
              help="extremes | root | worst_sampled | a vertex id")
@click.option('--walkers', type=int, default=None)
@click.option('--t-max', 't_max', type=int, default=None,
              help='Step cap (default 64 h k^2 on hat trees, 16 n^2 otherwise)')
@click.option('--seed', type=int, default=None)
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default=None,
              help='Write the t,tv trajectory as CSV here')
@click.pass_context
def mixing(ctx, **flags):
    """Total-variation mixing time of the lazy random walk."""
    cfg = _make_config(ctx, 'mixing', **flags)
    graph = _load_graph(cfg)
    policy = int(cfg.start_policy) if cfg.start_policy.isdigit() else cfg.start_policy
    report = mixing_time(graph, eps=cfg.eps, method=cfg.method, start_policy=policy, seed=cfg.seed,
                         walkers=cfg.walkers, random_starts=cfg.random_starts, t_max=cfg.t_max,
                         exact_max_vertices=cfg.mixing_exact_max_vertices,
                         **cfg.solver_options(with_seed=False))
    if cfg.output_path:
        export_trajectory_csv(report, cfg.output_path)
    emit_report(cfg, [report.to_dict(trajectory=not cfg.output_path)])
    console = _stderr_console(ctx)
    if console:
        console.print(f"t_mix({cfg.eps}) = {report.t_mix} ({report.method}, lazy walk), "
                      f"relaxation = {report.relaxation_time:.6g}")
    return EXIT_FAILURE if report.cap_reached else EXIT_OK


@cli.command()
@graph_source
@click.option('--mode', 'distance_mode', type=click.Choice(['exact', 'sampled']), default=None)
@click.option('--sample-pairs', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.pass_context
def metrics(ctx, **flags):
    """Diameter, mean (squared) distance and degree statistics."""
    cfg = _make_config(ctx, 'metrics', **flags)
    graph = _load_graph(cfg)
    stats = distance_stats(graph, mode=cfg.distance_mode, sample_pairs=cfg.sample_pairs, seed=cfg.seed,
                           max_vertices=cfg.distances_exact_max_vertices)
    base = as_weighted_graph(graph)
    max_degree, d_max = degree_stats(graph)
    result = stats.to_dict()
    result.update({'n': base.n, 'm': base.m, 'max_degree': max_degree, 'd_max': d_max})
    if isinstance(graph, HatTree):
        result.update({'h': graph.h, 'k': graph.k, 'hk': graph.depth,
                       'root_eccentricity': eccentricity(graph, graph.root)})
    emit_report(cfg, [result])
    console = _stderr_console(ctx)
    if console:
        console.print(f"diam = {stats.diameter}, mean d² = {stats.avg_sq_distance:.6g} ({stats.mode})")
    return EXIT_OK


def sweep_row(cfg: RunConfig, h: int) -> Dict[str, Any]:
    """One sweep row; failures land in the error column"""
    k = cfg.resolved_k(h)
    row: Dict[str, Any] = {column: np.nan for column in SWEEP_COLUMNS}
    row.update({'h': h, 'k': k, 'hk': h * k, 'error': ''})
    try:
        T = build_hat_tree(h, k, max_vertices=cfg.max_vertices)
        row.update({'n': T.n, 'm': T.graph.m, 'bound_1_over_7k2': 1.0 / (7.0 * k ** 2)})
        gap = lambda1(T, **cfg.solver_options()).lambda1
        stats = distance_stats(T, mode=cfg.distance_mode, sample_pairs=cfg.sample_pairs, seed=cfg.seed,
                               max_vertices=cfg.distances_exact_max_vertices)
        mix = mixing_time(T, eps=cfg.eps, method=cfg.method, start_policy=cfg.start_policy,
                          seed=cfg.seed, walkers=cfg.walkers, random_starts=cfg.random_starts,
                          t_max=cfg.t_max, exact_max_vertices=cfg.mixing_exact_max_vertices,
                          with_relaxation=False)
        if mix.cap_reached:
            row['error'] = f"cap reached: TV above eps={cfg.eps} at t_max={mix.t_max}"
        relax = relaxation_time(T, **cfg.solver_options())
        row.update({'lambda1': gap, 'diam': stats.diameter, 'avg_sq_dist': stats.avg_sq_distance,
                    't_mix': mix.t_mix, 'relax_time': relax, 'product_u': gap * stats.avg_sq_distance})
    except (PlanarGapError, MemoryError) as e:
        logger.warning(f"Sweep row h={h} failed: {e}")
        row['error'] = f"{type(e).__name__}: {e}"
    return row


@cli.command()
@click.option('--h-min', type=int, default=None)
@click.option('--h-max', type=int, default=None)
@click.option('--k', 'k', type=int, default=None, help='Fixed k for every row (default 2^h)')
@click.option('--eps', type=float, default=None)
@click.option('--method', type=click.Choice(['auto', 'exact', 'monte_carlo']), default=None)
@click.option('--t-max', 't_max', type=int, default=None, help='Mixing step cap per row')
@click.option('--seed', type=int, default=None)
@click.option('--workers', type=int, default=None)
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default=None,
              help='CSV destination (default stdout)')
@solver_flags
@click.pass_context
def sweep(ctx, **flags):
    """One CSV row per h with gap, diameter, distance, mixing and product columns."""
    cfg = _make_config(ctx, 'sweep', **flags)
    if cfg.h_min is None or cfg.h_max is None:
        raise click.UsageError("sweep needs --h-min and --h-max")
    heights = list(range(cfg.h_min, cfg.h_max + 1))
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        rows = list(pool.map(lambda h: sweep_row(cfg, h), heights))

    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    text = frame.to_csv(index=False)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
        logger.info(f"Wrote {len(rows)} sweep rows to {cfg.output_path}")
    else:
        click.echo(text, nl=False)

    console = _stderr_console(ctx)
    if console:
        table = Table(title="📈 Sweep", box=box.ROUNDED, header_style="bold cyan")
        for column in ('h', 'k', 'n', 'lambda1', 'bound_1_over_7k2', 'diam', 't_mix', 'product_u'):
            table.add_column(column, justify="right")
        for row in rows:
            table.add_row(*[f"{row[c]:.6g}" if isinstance(row[c], float) else str(row[c])
                            for c in ('h', 'k', 'n', 'lambda1', 'bound_1_over_7k2', 'diam', 't_mix',
                                      'product_u')])
        console.print(table)
    return EXIT_FAILURE if any(row['error'] for row in rows) else EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point; returns the exit code"""
    return cli.main(args=argv, prog_name='planar-gap', standalone_mode=False)


if __name__ == '__main__':
    sys.exit(main())
