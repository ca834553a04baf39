"""Command-line driver: ``shiftramsey <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments or
input files, 3 a size or budget guard refused the request.
Primary output goes to stdout (or ``--out``); diagnostics go to stderr.
Relative ``--out`` paths resolve against ``$SHIFTRAMSEY_OUTPUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

from . import __version__
from .coloring import (
    ADVERSARIAL_PREDICATES,
    Color,
    TwoColoring,
    adversarial_coloring,
    all_colorings,
    coloring_rank,
    dumps_coloring,
    load_coloring,
    monochromatic_coloring,
    random_coloring,
)
from .errors import GuardError, ShiftRamseyError
from .extraction import (
    ExtractionTrace,
    TowerSize,
    lemma1_extract,
    opportunistic_extract,
    ramsey_extract,
)
from .graph import Graph, chromatic_number, clique_number, complete_graph, cycle_graph, path_graph
from .shift import ShiftGraph, eh_graph, shift_graph, vertex_str
from .verify import Sampled, classical_ramsey, ramsey_check, verify_trace

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "SHIFTRAMSEY_OUTPUT_DIR"

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(ShiftRamseyError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    output_format: str = "text"


# -- argument helpers --------------------------------------------------------


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,K, got {text!r}") from None
    return a, b


def _triple(text: str) -> tuple[int, int, int]:
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected S,T,N, got {text!r}") from None
    return a, b, c


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def parse_graph_spec(spec: str) -> ShiftGraph | Graph:
    """``eh:K`` | ``sh:N,K`` | ``K:N`` | ``P:N`` | ``C:N`` | ``file:PATH`` (edge list)."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "eh":
            return eh_graph(int(arg))
        if kind == "sh":
            n, k = _pair(arg)
            return shift_graph(n, k)
        if kind == "K":
            return complete_graph(int(arg))
        if kind == "P":
            return path_graph(int(arg))
        if kind == "C":
            return cycle_graph(int(arg))
        if kind == "file":
            return Graph.from_edge_list(Path(arg).read_text(encoding="utf-8"))
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from None
    raise UsageError(f"unknown graph spec {spec!r} (use eh:K, sh:N,K, K:N, P:N, C:N or file:PATH)")


def _host_from(params: dict) -> ShiftGraph | Graph:
    if params.get("level") is not None:
        return eh_graph(params["level"])
    if params.get("shift") is not None:
        return shift_graph(*params["shift"])
    if params.get("graph") is not None:
        return parse_graph_spec(params["graph"])
    raise UsageError("choose a host with --level, --shift or --graph")


def _as_graph(host) -> Graph:
    return host.to_graph() if isinstance(host, ShiftGraph) else host


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, params: dict, stdout: TextIO) -> None:
    if params.get("out"):
        _resolve_out(params["out"]).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


# -- subcommands -------------------------------------------------------------


def _cmd_generate(cfg: RunConfig, stdout: TextIO) -> int:
    host = _host_from(cfg.parameters)
    fmt = cfg.output_format
    if fmt == "dot":
        text = _as_graph(host).to_dot(name=str(host).replace("(", "_").replace(",", "_").replace(")", ""))
    elif fmt == "edge-list":
        text = _as_graph(host).to_edge_list()
    else:
        if not isinstance(host, ShiftGraph):
            raise UsageError("generate --graph supports dot and edge-list output only")
        g = host.to_graph()
        text = _dump(
            {
                "schema_version": SCHEMA_VERSION,
                **host.descriptor(),
                "vertex_count": host.vertex_count,
                "edge_count": host.edge_count,
                "vertices": [list(v) for v in host.vertices()],
                "edges": [list(e) for e in g.edge_list],
            }
        )
    _emit(text, cfg.parameters, stdout)
    return EXIT_OK


def _coloring_from(params: dict, host) -> tuple[TwoColoring, dict]:
    """Build the coloring selected by the source flags, plus its provenance record."""
    if params.get("file"):
        return load_coloring(host, params["file"]), {"source": "file", "path": str(params["file"])}
    if params.get("mono"):
        color = Color.from_token(params["mono"])
        return monochromatic_coloring(host, color), {"source": "mono", "color": str(color)}
    if params.get("adversarial"):
        name = params["adversarial"]
        return adversarial_coloring(host, name), {"source": "adversarial", "name": name}
    seed = params.get("seed")
    if seed is None:
        raise UsageError("choose a coloring with --seed, --file, --mono or --adversarial")
    return random_coloring(host, seed), {"source": "seed", "seed": seed}


def coloring_from_provenance(prov: dict, host: ShiftGraph, base: Path | None = None) -> TwoColoring:
    src = prov.get("source")
    if src == "seed":
        return random_coloring(host, int(prov["seed"]))
    if src == "mono":
        return monochromatic_coloring(host, Color.from_token(prov["color"]))
    if src == "adversarial":
        return adversarial_coloring(host, prov["name"])
    if src == "file":
        path = Path(prov["path"])
        if base is not None and not path.is_absolute() and not path.exists():
            path = base / path
        return load_coloring(host, path)
    raise UsageError(f"unknown coloring provenance {prov!r}")


def _cmd_color(cfg: RunConfig, stdout: TextIO) -> int:
    p = cfg.parameters
    host = _host_from(p)
    if p.get("all"):
        lines = []
        for c in all_colorings(host):
            lines.append(f"{coloring_rank(c)} {''.join('RB'[b] for b in c.data)}\n")
        _emit("".join(lines), p, stdout)
        return EXIT_OK
    c, prov = _coloring_from(p | {"seed": cfg.seed}, host)
    if cfg.output_format == "json":
        data = c.data
        desc = host.descriptor() if isinstance(host, ShiftGraph) else {"vertices": host.vertex_count}
        text = _dump(
            {
                "schema_version": SCHEMA_VERSION,
                "host": desc,
                "coloring": prov,
                "edge_count": len(data),
                "red": data.count(0),
                "blue": data.count(1),
                "colors": "".join("RB"[b] for b in data),
            }
        )
    else:
        text = dumps_coloring(c)
    _emit(text, p, stdout)
    return EXIT_OK


def _cmd_extract(cfg: RunConfig, stdout: TextIO) -> int:
    p = cfg.parameters
    if p.get("lemma1"):
        if p.get("t") is None:
            raise UsageError("extract --lemma1 needs --t")
        level = 2 ** (p["t"] + 1)
    elif p.get("opportunistic"):
        if p.get("level") is None:
            raise UsageError("extract --opportunistic needs --level")
        level = p["level"]
    elif p.get("ramsey") is not None:
        if p.get("level") is None:
            raise UsageError("extract --ramsey needs --level")
        level = p["level"]
    else:
        raise UsageError("choose --lemma1, --opportunistic or --ramsey")
    host = eh_graph(level)
    c, prov = _coloring_from(p | {"seed": cfg.seed}, host)
    if p.get("lemma1"):
        trace = lemma1_extract(c, p["t"])
    elif p.get("opportunistic"):
        trace = opportunistic_extract(c, level)
    else:
        trace = ramsey_extract(c, p["ramsey"])
    if p.get("coloring_out"):
        out = _resolve_out(p["coloring_out"])
        out.write_text(dumps_coloring(c), encoding="utf-8")
        prov = {"source": "file", "path": str(out)} if prov["source"] == "file" else prov
    doc = {
        "schema_version": SCHEMA_VERSION,
        "host": host.descriptor(),
        "coloring": prov,
        "trace": trace.to_dict(),
    }
    _emit(_dump(doc), p, stdout)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig, stdout: TextIO) -> int:
    p = cfg.parameters
    trace_path = Path(p["trace"])
    try:
        doc = json.loads(trace_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{trace_path}: not valid JSON ({exc})") from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"{trace_path}: unsupported schema version {doc.get('schema_version')!r}")
    host = ShiftGraph.from_descriptor(doc["host"])
    trace = ExtractionTrace.from_dict(doc["trace"])
    if p.get("coloring"):
        c = load_coloring(host, p["coloring"])
    else:
        c = coloring_from_provenance(doc["coloring"], host, trace_path.parent)
    ok = verify_trace(c, trace)
    result = {
        "schema_version": SCHEMA_VERSION,
        "verified": ok,
        "procedure": trace.procedure,
        "scope": trace.scope,
        "final_points": list(trace.final_points),
        "final_color": str(trace.final_color),
        "achieved_level": trace.achieved_level,
    }
    if cfg.output_format == "json":
        stdout.write(_dump(result))
    else:
        stdout.write(("verified" if ok else "FAILED") + f": {trace.procedure} trace, {trace.scope} scope\n")
    if not ok:
        print("verification failed: trace does not hold for this coloring", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_invariant(cfg: RunConfig, stdout: TextIO) -> int:
    g = _as_graph(_host_from(cfg.parameters))
    if cfg.subcommand == "chi":
        value = chromatic_number(g, budget=cfg.parameters.get("budget") or 10**8)
    else:
        value = clique_number(g)
    if cfg.output_format == "json":
        stdout.write(_dump({"schema_version": SCHEMA_VERSION, cfg.subcommand: value, "vertex_count": g.vertex_count}))
    else:
        stdout.write(f"{value}\n")
    return EXIT_OK


def _cmd_ramsey(cfg: RunConfig, stdout: TextIO) -> int:
    p = cfg.parameters
    if p.get("classical"):
        s, t, n = p["classical"]
        verdict = classical_ramsey(s, t, n)
    else:
        if not p.get("host") or not p.get("pattern"):
            raise UsageError("ramsey needs --host and --pattern (or --classical S,T,N)")
        host = parse_graph_spec(p["host"])
        pattern = _as_graph(parse_graph_spec(p["pattern"]))
        if p.get("mode") == "sampled":
            mode = Sampled(p.get("count") or 1000, cfg.seed or 0)
        else:
            mode = "exhaustive"
        verdict = ramsey_check(host, pattern, mode, jobs=p.get("jobs") or 1)
    witness_path = None
    if verdict.witness_coloring is not None and p.get("witness_out"):
        out = _resolve_out(p["witness_out"])
        out.write_text(dumps_coloring(verdict.witness_coloring), encoding="utf-8")
        witness_path = str(out)
    if cfg.output_format == "json":
        _emit(verdict.to_json(witness_path), p, stdout)
    else:
        word = "forced" if verdict.forced else "not forced"
        _emit(f"{word} ({verdict.mode}, {verdict.colorings_checked} colorings checked)\n", p, stdout)
    return EXIT_OK


def _cmd_sseq(cfg: RunConfig, stdout: TextIO) -> int:
    n = cfg.parameters["n"]
    if n < 1:
        raise UsageError("sseq needs n >= 1")
    size = TowerSize(n)
    value = size.value
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    if cfg.output_format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "n": n, **size.to_dict()}
        doc["value"] = str(value) if value is not None else None
        stdout.write(_dump(doc))
    elif value is not None:
        stdout.write(f"{value}\n")
    else:
        stdout.write(size.describe() + "\n")
    return EXIT_OK


COMMANDS = {
    "generate": _cmd_generate,
    "color": _cmd_color,
    "extract": _cmd_extract,
    "verify": _cmd_verify,
    "chi": _cmd_invariant,
    "omega": _cmd_invariant,
    "ramsey": _cmd_ramsey,
    "sseq": _cmd_sseq,
}


def run(config: RunConfig, stdout: TextIO | None = None) -> int:
    """Execute one subcommand; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    try:
        return COMMANDS[config.subcommand](config, stdout)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ShiftRamseyError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


# -- parser ------------------------------------------------------------------


def _add_host_flags(sp: argparse.ArgumentParser, graph: bool = True) -> None:
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--level", type=int, help="Erdős–Hajnal graph G_K")
    g.add_argument("--shift", type=_pair, metavar="N,K", help="shift graph Sh(N,K)")
    if graph:
        g.add_argument("--graph", metavar="SPEC", help="eh:K, sh:N,K, K:N, P:N, C:N or file:PATH")


def _add_coloring_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=_seed, help="SplitMix64 seed for a random coloring")
    sp.add_argument("--file", help="coloring file to load")
    sp.add_argument("--mono", choices=["R", "B", "red", "blue"], help="monochromatic coloring")
    sp.add_argument("--adversarial", choices=sorted(ADVERSARIAL_PREDICATES), help="structured coloring")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftramsey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("generate", help="emit G_k or Sh(N,k)")
    _add_host_flags(sp)
    sp.add_argument("--format", choices=["json", "dot", "edge-list"], default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("color", help="produce red-blue edge colorings")
    _add_host_flags(sp)
    _add_coloring_flags(sp)
    sp.add_argument("--all", action="store_true", help="every coloring, one per line")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--out")

    sp = sub.add_parser("extract", help="run an extraction procedure and emit its trace")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--lemma1", action="store_true", help="star extraction on G_(2^(t+1))")
    mode.add_argument("--opportunistic", action="store_true", help="nested extraction on G_level")
    mode.add_argument("--ramsey", type=int, metavar="K", help="full nested extraction at the guaranteed bound")
    sp.add_argument("--t", type=int)
    sp.add_argument("--level", type=int)
    _add_coloring_flags(sp)
    sp.add_argument("--coloring-out", help="also write the coloring file used")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="replay a trace against its coloring")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--coloring", help="coloring file (default: rebuild from the trace's provenance)")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    for name, what in (("chi", "chromatic number"), ("omega", "clique number")):
        sp = sub.add_parser(name, help=f"exact {what}")
        _add_host_flags(sp)
        if name == "chi":
            sp.add_argument("--budget", type=int, help="search-node budget (default 10^8)")
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("ramsey", help="forcing checks over colorings")
    sp.add_argument("--host", metavar="SPEC")
    sp.add_argument("--pattern", metavar="SPEC")
    sp.add_argument("--classical", type=_triple, metavar="S,T,N", help="red K_S or blue K_T in every coloring of K_N")
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--count", type=int, help="sampled colorings (default 1000)")
    sp.add_argument("--seed", type=_seed)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--witness-out")
    sp.add_argument("--format", choices=["text", "json"], default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("sseq", help="S_n = 2^(S_(n-1)+2), exact or symbolic")
    sp.add_argument("n", type=int)
    sp.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(args).items() if k not in ("subcommand", "seed", "format")}
    return RunConfig(
        subcommand=args.subcommand,
        parameters=params,
        seed=getattr(args, "seed", None),
        output_format=getattr(args, "format", "text"),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
