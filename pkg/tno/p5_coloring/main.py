import json
import sys
import time
import uuid
from functools import wraps
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click
from marshmallow import ValidationError
from structlog.contextvars import bind_contextvars, clear_contextvars

from tno.p5_coloring import bench
from tno.p5_coloring.data_types import BranchStats, GenSpec, GraphFamily, RunReport, RunStatus, SolveConfig
from tno.p5_coloring.exceptions import (
    ContractError,
    InputError,
    OracleRefused,
    P5ColorError,
    PreconditionViolated,
    SolveTimeout,
)
from tno.p5_coloring.formats.dimacs import read_dimacs, write_dimacs
from tno.p5_coloring.formats.list_file import read_lists, write_lists
from tno.p5_coloring.model.graph_core import (
    Graph,
    connected_components,
    find_dominating_structure,
    find_induced_p5,
    members,
)
from tno.p5_coloring.model.instance_model import ListInstance, Sat, Verdict
from tno.p5_coloring.model.solver import Solver, verify
from tno.p5_coloring.settings import EnvSettings
from tno.p5_coloring.testkit.generators import generate, generate_lists
from tno.p5_coloring.testkit.oracle import brute_force_solve
from tno.shared.log import get_logger, set_level

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_TIMEOUT = 4


def emit(report: RunReport, summary: str):
    """The JSON report goes to stdout, the human readable summary to stderr."""
    click.echo(json.dumps(RunReport.Schema().dump(report), sort_keys=True))
    click.echo(summary, err=True)


def labelled(graph: Optional[Graph], vertices: Sequence[int]) -> List[str]:
    return [graph.label(v) if graph is not None else str(v) for v in vertices]


def command(name: str):
    """Run a subcommand with bound log context, mapping errors to a report and an exit code."""

    def decorator(func):
        @click.pass_context
        @wraps(func)
        def wrapper(ctx: click.Context, *args, **kwargs):
            bind_contextvars(command=name, run_id=uuid.uuid4().hex[:8])
            ctx.obj = ctx.obj or {}
            start = time.monotonic()
            try:
                code = func(ctx, *args, **kwargs)
            except SolveTimeout as e:
                elapsed = (time.monotonic() - start) * 1000
                emit(RunReport(RunStatus.TIMEOUT, name, elapsed_ms=elapsed, message=str(e)), f"timeout: {e}")
                code = EXIT_TIMEOUT
            except PreconditionViolated as e:
                witness = labelled(ctx.obj.get("graph"), e.witness) if e.witness is not None else None
                emit(RunReport(RunStatus.ERROR, name, witness=witness, message=str(e)), f"precondition violated: {e}")
                code = EXIT_PRECONDITION
            except (InputError, OracleRefused) as e:
                emit(RunReport(RunStatus.ERROR, name, message=str(e)), f"error: {e}")
                code = EXIT_INPUT
            except P5ColorError as e:
                logger.exception("Solver failure", message=str(e))
                emit(RunReport(RunStatus.ERROR, name, message=str(e)), f"internal error: {e}")
                code = EXIT_FAILED_CHECKS
            finally:
                clear_contextvars()
            ctx.exit(code or EXIT_OK)

        return wrapper

    return decorator


def load_graph(ctx: click.Context, path: str) -> Graph:
    graph = read_dimacs(path)
    ctx.obj["graph"] = graph
    logger.info("Loaded graph", path=path, vertices=graph.vertex_count, edges=graph.edge_count)
    return graph


def labelled_coloring(graph: Graph, coloring: Dict[int, int]) -> Dict[str, int]:
    return {graph.label(v): c for v, c in sorted(coloring.items())}


def verdict_report(name: str, graph: Graph, k: int, verdict: Verdict, elapsed_ms: float,
                   stats: Optional[BranchStats] = None) -> RunReport:
    if isinstance(verdict, Sat):
        return RunReport(RunStatus.SAT, name, labelled_coloring(graph, verdict.certificate), stats, elapsed_ms, k=k)
    witness = labelled(graph, members(verdict.clique)) if verdict.clique else None
    message = f"clique of size {len(witness)} exceeds {k} colours" if witness else None
    return RunReport(RunStatus.UNSAT, name, None, stats, elapsed_ms, k=k, witness=witness, message=message)


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug logging with branch traces.")
@click.pass_context
def cli(ctx: click.Context, verbose: int):
    """Exact k-list-colouring of P5-free graphs."""
    ctx.obj = {"verbose": verbose}
    if verbose:
        set_level("INFO" if verbose == 1 else "DEBUG")


@cli.command()
@click.option("-k", "k", type=click.IntRange(0), help="Number of colours.")
@click.option("--lists", "lists_path", type=click.Path(dir_okay=False),
              help="List file, one '<vertex>: c1 c2 ...' per line.")
@click.option("--timeout", type=click.FloatRange(min=0, min_open=True), help="Wall-clock budget in seconds.")
@click.option("--parallel", is_flag=True, help="Explore the top-level branch instances concurrently.")
@click.option("--verify", "report_path", type=click.Path(exists=True, dir_okay=False),
              help="Replay a JSON report and check its colouring instead of solving.")
@click.argument("graph_path", type=click.Path(dir_okay=False))
@command("solve")
def solve(ctx, k, lists_path, timeout, parallel, report_path, graph_path):
    """k-list-colouring verdict for GRAPH_PATH."""
    graph = load_graph(ctx, graph_path)
    if report_path:
        return replay(graph, k, lists_path, report_path)
    if k is None:
        raise InputError("-k is required")
    inst = read_lists(lists_path, graph, k)
    stats = BranchStats()
    config = SolveConfig.from_env(deadline=timeout, enable_parallel=parallel or None,
                                  trace=1 if ctx.obj.get("verbose", 0) > 1 else None)
    start = time.monotonic()
    verdict = Solver(config, stats).solve(inst)
    report = verdict_report("solve", graph, k, verdict, (time.monotonic() - start) * 1000, stats)
    emit(report, f"{report.status.value}: n={graph.vertex_count} k={k} in {report.elapsed_ms:.1f} ms, "
                 f"{stats.instances_created} instances, depth {stats.recursion_depth}")


def replay(graph: Graph, k: Optional[int], lists_path: Optional[str], report_path: str) -> int:
    try:
        previous = RunReport.Schema().load(json.loads(Path(report_path).read_text()))
    except (ValueError, TypeError, ValidationError) as e:
        raise InputError(f"cannot read report {report_path}: {e}")
    k = k if k is not None else previous.k
    if k is None:
        raise InputError("the report has no k, pass -k")
    if not previous.coloring:
        raise InputError(f"the report has no colouring (status {previous.status.value})")
    inst = read_lists(lists_path, graph, k)
    certificate = {graph.index_of(label): color for label, color in previous.coloring.items()}
    try:
        verified = verify(certificate, inst)
    except ContractError as e:
        raise InputError(f"the report does not colour every vertex: {e}")
    status = RunStatus.SAT if verified else RunStatus.ERROR
    emit(RunReport(status, "verify", previous.coloring if verified else None, k=k, verified=verified),
         f"colouring {'verifies' if verified else 'does NOT verify'} for k={k}")
    return EXIT_OK if verified else EXIT_INPUT


@cli.command()
@click.option("--cap", type=click.IntRange(0), help="Largest number of colours to try, default n.")
@click.argument("graph_path", type=click.Path(dir_okay=False))
@command("chromatic")
def chromatic(ctx, cap, graph_path):
    """Chromatic number and an optimal colouring of GRAPH_PATH."""
    graph = load_graph(ctx, graph_path)
    cap = graph.vertex_count if cap is None else cap
    stats = BranchStats()
    start = time.monotonic()
    found = Solver(SolveConfig.from_env(), stats).chromatic_coloring(graph, cap)
    elapsed = (time.monotonic() - start) * 1000
    if found is None:
        emit(RunReport(RunStatus.UNSAT, "chromatic", stats=stats, elapsed_ms=elapsed,
                       message=f"chromatic number exceeds {cap}"), f"chromatic number > {cap}")
        return
    coloring, chi = found
    report = RunReport(RunStatus.SAT, "chromatic", labelled_coloring(graph, coloring), stats, elapsed,
                       chromatic_number=chi)
    emit(report, f"chromatic number {chi}")


@cli.command("check-p5")
@click.argument("graph_path", type=click.Path(dir_okay=False))
@command("check-p5")
def check_p5(ctx, graph_path):
    """Whether GRAPH_PATH is P5-free, with an induced P5 when it is not."""
    graph = load_graph(ctx, graph_path)
    start = time.monotonic()
    witness = find_induced_p5(graph)
    elapsed = (time.monotonic() - start) * 1000
    labels = labelled(graph, witness) if witness is not None else None
    emit(RunReport(RunStatus.OK, "check-p5", elapsed_ms=elapsed, p5_free=witness is None, witness=labels),
         "P5-free" if witness is None else f"induced P5: {' - '.join(labels)}")


@cli.command()
@click.argument("graph_path", type=click.Path(dir_okay=False))
@command("dom")
def dom(ctx, graph_path):
    """A dominating clique or dominating P3 for every connected component of GRAPH_PATH."""
    graph = load_graph(ctx, graph_path)
    witness = find_induced_p5(graph)
    if witness is not None:
        raise PreconditionViolated("The graph contains an induced P5", witness=witness)
    start = time.monotonic()
    structures = []
    for component in connected_components(graph):
        sub, ids = graph.induced_subgraph(component)
        structure = find_dominating_structure(sub, sub.vertex_count)
        structures.append({
            "kind": structure.kind.value,
            "vertices": labelled(graph, [ids[v] for v in structure.members()]),
        })
    emit(RunReport(RunStatus.OK, "dom", elapsed_ms=(time.monotonic() - start) * 1000, structures=structures),
         "; ".join(f"{s['kind']} {{{', '.join(s['vertices'])}}}" for s in structures))


@cli.command()
@click.option("--family", type=click.Choice([f.value for f in GraphFamily]), required=True)
@click.option("--n", "n", type=click.IntRange(1), help="Vertex count, taken from --parts for multipartite graphs.")
@click.option("--seed", type=click.IntRange(0), show_default="P5COLOR_SEED or 0")
@click.option("--p", "edge_probability", type=click.FloatRange(0, 1), default=0.5, show_default=True)
@click.option("--parts", help="Comma separated part sizes, e.g. 2,2,2.")
@click.option("--clique-size", type=click.IntRange(0), help="Clique side of a split graph.")
@click.option("-k", "k", type=click.IntRange(1), help="Also emit random lists over this many colours.")
@click.option("--density", type=click.FloatRange(0, 1, min_open=True), default=1.0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="DIMACS file to write.")
@click.option("--lists-output", type=click.Path(dir_okay=False), help="List file to write, default OUTPUT.lists.")
@command("gen")
def gen(ctx, family, n, seed, edge_probability, parts, clique_size, k, density, output, lists_output):
    """Generate a P5-free graph, and lists when -k is given."""
    seed = EnvSettings.default_seed() if seed is None else seed
    try:
        part_sizes = [int(p) for p in parts.split(",")] if parts else []
    except ValueError:
        raise InputError(f"--parts must be comma separated integers, got {parts!r}")
    spec = GenSpec(GraphFamily(family), n or sum(part_sizes), edge_probability, part_sizes, seed, density, clique_size)
    start = time.monotonic()
    graph = generate(spec)
    comments = [f"generated by p5color gen family={spec.family.value} n={spec.n} seed={spec.seed}"]
    write_dimacs(graph, output, comments)
    written = [output]
    if k is not None:
        lists_output = lists_output or f"{output}.lists"
        # labels of the written file are the 1-indexed ids
        graph = read_dimacs(output)
        write_lists(graph, generate_lists(graph, k, density, seed + 1), lists_output, comments + [f"k={k}"])
        written.append(lists_output)
    emit(RunReport(RunStatus.OK, "gen", elapsed_ms=(time.monotonic() - start) * 1000, k=k,
                   message=" ".join(written)),
         f"wrote {', '.join(written)} ({graph.vertex_count} vertices, {graph.edge_count} edges)")


@cli.command()
@click.option("-k", "k", type=click.IntRange(0), required=True, help="Number of colours.")
@click.option("--lists", "lists_path", type=click.Path(dir_okay=False))
@click.argument("graph_path", type=click.Path(dir_okay=False))
@command("oracle")
def oracle(ctx, k, lists_path, graph_path):
    """Brute-force verdict, for cross-checking small inputs."""
    graph = load_graph(ctx, graph_path)
    inst: ListInstance = read_lists(lists_path, graph, k)
    start = time.monotonic()
    verdict = brute_force_solve(inst)
    report = verdict_report("oracle", graph, k, verdict, (time.monotonic() - start) * 1000)
    emit(report, f"{report.status.value} (brute force)")


@cli.command("bench")
@click.option("--suite", type=click.Choice(sorted(bench.SUITES) + ["all"]), default="all", show_default=True)
@click.option("--seed", type=click.IntRange(0), show_default="P5COLOR_SEED or 0")
@command("bench")
def run_bench(ctx, suite, seed):
    """Acceptance suites with a timing table."""
    seed = EnvSettings.default_seed() if seed is None else seed
    names = list(bench.SUITES) if suite == "all" else [suite]
    start = time.monotonic()
    table = bench.run_suites(names, seed)
    failures = int(table["failures"].sum())
    emit(RunReport(RunStatus.OK if failures == 0 else RunStatus.ERROR, "bench",
                   elapsed_ms=(time.monotonic() - start) * 1000, rows=json.loads(table.to_json(orient="records"))),
         table.to_string(index=False))
    return EXIT_OK if failures == 0 else EXIT_FAILED_CHECKS


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="p5color", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return EXIT_FAILED_CHECKS
    return result if isinstance(result, int) else EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
