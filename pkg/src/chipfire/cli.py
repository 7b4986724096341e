"""Command-line front end.

Reports go to standard output (or ``-o``) as JSON envelopes; `gen` and `extend`
write the graph text format unless given ``--json``. Diagnostics go to standard
error. Exit codes: 0 success, 1 usage, 2 invalid input,
3 budget exceeded, 4 reproduction mismatch.
"""

import argparse
import logging
import sys
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from pydantic import BaseModel

from chipfire import __version__, families, repro
from chipfire.certificates import (
    BrambleCertificate,
    load_certificate,
    scramble_order,
    shore_hitting_set,
    verify_bramble,
    verify_scramble,
)
from chipfire.config import STRATEGIES, Config
from chipfire.divisors import Divisor, find_unwinnable_debt, is_winnable, q_reduce, rank, reduction_chain
from chipfire.errors import BudgetExceededError, ChipfireError, InvalidInputError, ReproductionMismatchError
from chipfire.gonality import alpha_r, gonality, mf_gonality, theorem12_divisor, theorem12_preconditions
from chipfire.graph import Multigraph, dump_text, load_text
from chipfire.reports import (
    BoundResult,
    RankResult,
    ReduceResult,
    alpha_result,
    certificate_result,
    chain_result,
    envelope,
    extension_result,
    graph_result,
    input_hash,
    role_map,
    search_result,
    shore_result,
)

logger = logging.getLogger("chipfire")

FAMILIES = ("cycle", "path", "complete", "kbipartite", "bipartite", "crown", "banana")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Parsed arguments layered over the environment configuration."""

    subcommand: str
    graph: Path | None = None
    divisor: str | None = None
    r: int | None = None
    budget: float = 600.0
    threads: int = 1
    out: Path | None = None
    strategy: str = "ascending"
    chunk_size: int = 512

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: Config) -> "RunConfig":
        run = cls(
            subcommand=args.command,
            graph=Path(args.graph) if getattr(args, "graph", None) else None,
            divisor=getattr(args, "divisor", None),
            r=getattr(args, "rank_target", None),
            budget=getattr(args, "budget", None) or config.search.budget_seconds,
            threads=getattr(args, "threads", None) or config.search.threads,
            out=Path(args.out) if getattr(args, "out", None) else None,
            strategy=getattr(args, "strategy", None) or config.search.strategy,
            chunk_size=config.search.chunk_size,
        )
        run.validate()
        return run

    def validate(self) -> None:
        if self.r is not None and self.r < 1 and self.subcommand != "rank":
            raise InvalidInputError(f"-r must be at least 1, got {self.r}")
        if self.r is not None and self.r < 0:
            raise InvalidInputError(f"-r must be non-negative, got {self.r}")
        if self.budget <= 0:
            raise InvalidInputError(f"--budget must be positive, got {self.budget}")
        if self.threads < 1:
            raise InvalidInputError(f"--threads must be at least 1, got {self.threads}")

    def load_graph(self) -> Multigraph:
        if self.graph is None:
            raise InvalidInputError("this command needs -g/--graph")
        return load_text(self.graph)

    def load_divisor(self, G: Multigraph) -> Divisor:
        if self.divisor is None:
            raise InvalidInputError("this command needs -d/--divisor")
        path = Path(self.divisor)
        text = path.read_text() if path.is_file() else self.divisor
        D = Divisor.parse(text)
        if len(D) != G.n:
            raise InvalidInputError(f"divisor has {len(D)} entries for a graph on {G.n} vertices")
        return D

    def require_r(self) -> int:
        if self.r is None:
            raise InvalidInputError("this command needs -r/--rank-target")
        return self.r


def _emit(run: RunConfig, text: str) -> None:
    if run.out is not None:
        run.out.write_text(text)
        logger.info(f"Wrote {run.out}")
    else:
        sys.stdout.write(text)


def _report(run: RunConfig, command: str, result: BaseModel, digest: str | None, started: float) -> None:
    _emit(run, envelope(command, result, digest, time.monotonic() - started).to_json())


# -------------------------------------------------------------------
#   Subcommands
# -------------------------------------------------------------------


def _generate(args: argparse.Namespace) -> Multigraph:
    params = args.params
    family = "kbipartite" if args.family == "bipartite" else args.family
    need = {"cycle": 1, "path": 1, "complete": 1, "kbipartite": 2, "crown": 1}
    if family in need and len(params) != need[family]:
        raise InvalidInputError(f"{family} takes {need[family]} integer parameter(s)")
    if family == "cycle":
        return families.cycle(params[0])
    if family == "path":
        return families.path(params[0])
    if family == "complete":
        return families.complete(params[0])
    if family == "kbipartite":
        return families.complete_bipartite(params[0], params[1])
    if family == "crown":
        return families.crown(params[0])
    if not params:
        raise InvalidInputError("banana takes a vertex count followed by multiplicities")
    return families.generalized_banana(params[0], params[1:])


def _load_parts(value: str) -> families.BipartitionLabels:
    """Side labels from a file or an inline list such as ``"1 2 1 2"``."""
    path = Path(value)
    text = path.read_text() if path.is_file() else value
    try:
        return families.BipartitionLabels(tuple(int(x) for x in text.replace(",", " ").split()))
    except ValueError:
        raise InvalidInputError(f"--parts must list a side (1 or 2) per vertex, got {text.strip()!r}")


def cmd_gen(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = _generate(args)
    if args.dot:
        _emit(run, families.to_dot(G))
    elif args.json:
        _report(run, "gen", graph_result(G), input_hash(G), started)
    else:
        _emit(run, dump_text(G, comment=f"{args.family} {' '.join(map(str, args.params))}"))
    return 0


def cmd_extend(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    labels = _load_parts(args.parts) if args.parts else None
    extended, roles = families.bipartite_extension(G, labels)
    if args.json:
        _report(run, "extend", extension_result(extended, roles), input_hash(G), started)
    else:
        _emit(run, dump_text(extended, comment=f"bipartite extension of {run.graph}"))
    if args.roles:
        Path(args.roles).write_text(role_map(roles).model_dump_json(indent=2) + "\n")
        logger.info(f"Wrote role map to {args.roles}")
    return 0


def cmd_rank(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    D = run.load_divisor(G)
    result = RankResult(divisor=list(D), degree=D.degree, rank=rank(G, D))
    if run.r is not None:
        result.rank_target = run.r
        result.meets_target = result.rank >= run.r
        if not result.meets_target and D.degree >= run.r:
            refuted = find_unwinnable_debt(G, D, run.r)
            result.refuted_by = list(refuted) if refuted is not None else None
    _report(run, "rank", result, input_hash(G, str(D)), started)
    return 0


def cmd_reduce(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    D = run.load_divisor(G)
    reduced, script = q_reduce(G, D, args.reduce_vertex)
    result = ReduceResult(
        divisor=list(D),
        q=args.reduce_vertex,
        reduced=list(reduced),
        script=list(script.f),
        winnable=is_winnable(G, D),
    )
    if args.chain:
        result.chain = chain_result(reduction_chain(G, D, args.reduce_vertex))
    _report(run, "reduce", result, input_hash(G, str(D), str(args.reduce_vertex)), started)
    return 0


def cmd_gon(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    r = run.require_r()
    multiplicity_free = args.mf or args.command == "mfgon"
    engine = mf_gonality if multiplicity_free else gonality
    report = engine(
        G,
        r,
        run.budget,
        threads=run.threads,
        strategy=run.strategy,
        start_degree=args.start_degree,
        chunk_size=run.chunk_size,
    )
    command = "mfgon" if multiplicity_free else "gon"
    _report(run, command, search_result(report), input_hash(G), started)
    if report.budget_exceeded:
        raise BudgetExceededError(f"{command}: budget of {run.budget}s exceeded")
    return 0


def cmd_alpha(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    _report(run, "alpha", alpha_result(alpha_r(G, run.require_r())), input_hash(G), started)
    return 0


def cmd_bound(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    r = run.require_r()
    alpha = alpha_r(G, r).alpha
    holds = theorem12_preconditions(G, r)
    D = theorem12_divisor(G, r) if holds else None
    result = BoundResult(
        r=r,
        preconditions_hold=holds,
        alpha=alpha,
        upper_bound=G.n - alpha if holds else None,
        divisor=list(D) if D is not None else None,
    )
    if not holds:
        logger.warning(f"Independence bound does not apply at r={r}: min valence or girth too small")
    _report(run, "bound", result, input_hash(G), started)
    return 0


def cmd_cert(run: RunConfig, args: argparse.Namespace) -> int:
    started = time.monotonic()
    G = run.load_graph()
    cert = load_certificate(args.cert)
    if isinstance(cert, BrambleCertificate):
        verification = verify_bramble(G, cert)
        as_scramble = cert.as_scramble()
    else:
        verification = verify_scramble(G, cert)
        as_scramble = cert
    digest = input_hash(G, Path(args.cert).read_text())

    if not verification.valid:
        _report(run, "cert", certificate_result(cert, verification), digest, started)
        raise InvalidInputError(f"invalid certificate: {verification.violation}")

    order = scramble_order(G, as_scramble)
    exact = None
    if args.check_gonality:
        report = gonality(G, cert.r, run.budget, threads=run.threads, chunk_size=run.chunk_size)
        if report.budget_exceeded:
            raise BudgetExceededError(f"gonality cross-check exceeded {run.budget}s")
        exact = report.minimum_degree
    result = certificate_result(cert, verification, order, exact)
    if result.consistent is False:
        logger.error(f"Certificate order {order.order} exceeds gon_{cert.r} = {exact}")

    if args.shore is not None:
        if not isinstance(cert, BrambleCertificate):
            raise InvalidInputError("--shore needs a bramble certificate")
        shore = shore_hitting_set(G, cert, Divisor.parse(args.shore).chips)
        payload = envelope("cert", result, digest, time.monotonic() - started)
        payload.result["shore"] = shore_result(shore).model_dump(mode="json")
        _emit(run, payload.to_json())
        return 0

    _report(run, "cert", result, digest, started)
    return 0


def cmd_repro(run: RunConfig, args: argparse.Namespace) -> int:
    if args.list or not args.name:
        for name, r in repro.REPRODUCTIONS.items():
            sys.stdout.write(f"{name:26} {r.quantity} = {r.expected}\n")
        return 0
    started = time.monotonic()
    options = repro.RunOptions(threads=run.threads, budget=run.budget, chunk_size=run.chunk_size)
    result = repro.run(args.name, options)
    _report(run, "repro", result, None, started)
    if not result.match:
        failed = f" (failed checks: {', '.join(result.failed_checks)})" if result.failed_checks else ""
        raise ReproductionMismatchError(
            f"{args.name}: computed {result.computed}, expected {result.expected}{failed}"
        )
    return 0


def cmd_serve(run: RunConfig, args: argparse.Namespace, config: Config) -> int:
    from chipfire.server import serve

    if args.host:
        config.server.host = args.host
    if args.port:
        config.server.port = args.port
    config.validate()
    serve(config)
    return 0


# -------------------------------------------------------------------
#   Parser
# -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chipfire", description="Exact divisor theory on multigraphs.")
    parser.add_argument("--version", action="version", version=f"chipfire {__version__}")
    parser.add_argument("--log-level", help="Override CHIPFIRE_LOG_LEVEL")

    common = _Parser(add_help=False)
    common.add_argument("-o", "--out", help="Write the report here instead of stdout")

    graph = _Parser(add_help=False)
    graph.add_argument("-g", "--graph", required=True, help="Graph in the 'n <count>' text format")

    search = _Parser(add_help=False)
    search.add_argument("--budget", type=float, help="Wall-clock seconds (CHIPFIRE_BUDGET)")
    search.add_argument("--threads", type=int, help="Worker processes (CHIPFIRE_THREADS)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="Generate a graph family")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", type=int, nargs="*")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--text", action="store_true", help="Emit the graph text format (default)")
    fmt.add_argument("--dot", action="store_true", help="Emit Graphviz DOT")
    fmt.add_argument("--json", action="store_true", help="Emit a JSON report")

    p = sub.add_parser("extend", parents=[common, graph], help="Bipartite extension")
    p.add_argument(
        "--parts",
        "--labels",
        dest="parts",
        help="File or inline list giving the side (1 or 2) of every vertex; detected when omitted",
    )
    p.add_argument("--roles", help="Also write the JSON role map to this file")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--text", action="store_true", help="Emit the graph text format (default)")
    fmt.add_argument("--json", action="store_true", help="Emit a JSON report with roles")

    p = sub.add_parser("rank", parents=[common, graph], help="Baker-Norine rank")
    p.add_argument("-d", "--divisor", required=True, help="Chip list or a file holding one")
    p.add_argument("-r", "--rank-target", type=int, help="Report the refuting debt if rank is lower")

    p = sub.add_parser("reduce", parents=[common, graph], help="q-reduced form")
    p.add_argument("-d", "--divisor", required=True)
    p.add_argument("-q", "--reduce-vertex", type=int, required=True)
    p.add_argument("--chain", action="store_true", help="Include the set-firing chain")

    for name, help_text in (("gon", "Exact r-th gonality"), ("mfgon", "Same as gon --mf")):
        p = sub.add_parser(name, parents=[common, graph, search], help=help_text)
        p.add_argument("-r", "--rank-target", type=int, required=True)
        p.add_argument("--mf", action="store_true", help="Multiplicity-free divisors only")
        p.add_argument("--strategy", choices=STRATEGIES, help="CHIPFIRE_STRATEGY")
        p.add_argument("--start-degree", type=int, help="Assume nothing below this degree works")

    p = sub.add_parser("alpha", parents=[common, graph], help="r-independence number")
    p.add_argument("-r", "--rank-target", type=int, required=True)

    p = sub.add_parser("bound", parents=[common, graph], help="Independence upper bound")
    p.add_argument("-r", "--rank-target", type=int, required=True)

    p = sub.add_parser("cert", parents=[common, graph, search], help="Check a certificate")
    p.add_argument("-c", "--cert", required=True, help="Certificate JSON file")
    p.add_argument("--check-gonality", action="store_true", help="Compare against exact gon_r")
    p.add_argument("--shore", help="Vertex set U for the cut hitting multiset (brambles)")

    p = sub.add_parser("repro", parents=[common, search], help="Run a named reproduction")
    p.add_argument("name", nargs="?", choices=sorted(repro.REPRODUCTIONS))
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("serve", help="Run the HTTP service")
    p.add_argument("--host")
    p.add_argument("--port", type=int)

    return parser


COMMANDS = {
    "gen": cmd_gen,
    "extend": cmd_extend,
    "rank": cmd_rank,
    "reduce": cmd_reduce,
    "gon": cmd_gon,
    "mfgon": cmd_gon,
    "alpha": cmd_alpha,
    "bound": cmd_bound,
    "cert": cmd_cert,
    "repro": cmd_repro,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = Config.from_env()
        if args.log_level:
            config.logging.level = args.log_level.upper()
        config.validate()
    except ValueError as e:
        sys.stderr.write(f"chipfire: configuration error: {e}\n")
        return 1

    logging.basicConfig(
        level=config.logging.level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        run = RunConfig.from_args(args, config)
        if args.command == "serve":
            return cmd_serve(run, args, config)
        return COMMANDS[args.command](run, args)
    except ChipfireError as e:
        logger.error(str(e))
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return InvalidInputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
