"""Command-line driver.

Exit codes: 0 success (SAT), 1 UNSAT, 2 error, 3 timeout / incomplete search.
"""
from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import sizing
from .automata import decomposition_from_json, decomposition_to_dict, to_dot
from .encoding import EncodeOptions, encode, validate_sizes
from .errors import DfaDecompError, InputError
from .pareto import SearchOptions, identify as identify_sizes, search_frontier
from .sample import build_apta, load_sample, sample_to_json
from .satgate import Status
from . import taskgen

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2, 3


class StageError(click.ClickException):
    exit_code = EXIT_ERROR

    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")


class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if isinstance(exc, (DfaDecompError, OSError)):
            raise StageError(self.name, exc) from exc
        return False


def _parse_sizes(text):
    if text is None:
        return None
    try:
        return validate_sizes(tuple(int(x) for x in text.replace(" ", "").split(",") if x))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def _seconds(ms):
    return None if ms is None else ms / 1000.0


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _write_dots(decomp, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    for k, dfa in enumerate(decomp.dfas):
        (out / f"dfa_{k}.dot").write_text(to_dot(dfa, f"dfa_{k}"))


def _table(decomp) -> str:
    lines = []
    for k, dfa in enumerate(decomp.dfas):
        lines.append(f"  DFA {k}: {dfa.num_states} states, initial {dfa.initial}, "
                     f"accepting {sorted(dfa.accepting)}")
        width = max(len(s) for s in dfa.alphabet)
        header = "    state | " + " ".join(s.rjust(width) for s in dfa.alphabet)
        lines.append(header)
        for q, row in enumerate(dfa.delta):
            mark = "*" if q in dfa.accepting else " "
            lines.append(f"    {mark}{q:>4} | " + " ".join(str(t).rjust(width) for t in row))
    return "\n".join(lines)


def _load_config(ctx, param, value):
    if value is None:
        return None
    try:
        data = json.loads(Path(value).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read config {value}: {exc}") from None
    if not isinstance(data, dict):
        raise click.BadParameter("config must be a JSON object")
    commands = {"identify", "frontier", "bench", "score", "export", "generate"}
    aliases = {"json": "as_json", "format": "fmt"}

    def names(options):
        return {aliases.get(k, k.replace("-", "_")): v for k, v in options.items()}
    flat = names({k: v for k, v in data.items() if k not in commands})
    ctx.default_map = {cmd: {**flat, **names(data.get(cmd, {}))} for cmd in commands}
    return value


@click.group()
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config, is_eager=True,
              expose_value=False, help="JSON file with default option values.")
@click.option("-v", "--verbose", is_flag=True, help="Log every SAT call.")
def main(verbose):
    """Learn Pareto-optimal DFA decompositions from labeled examples."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


def search_options(f):
    f = click.option("--backend", default="internal", show_default=True,
                     help="'internal' or 'dimacs:<path>' (path defaults to $DFADECOMP_SOLVER).")(f)
    f = click.option("--timeout-ms", type=click.IntRange(min=1), default=None,
                     help="Time budget per SAT call.")(f)
    f = click.option("--no-symmetry", is_flag=True, help="Disable symmetry-breaking clauses.")(f)
    return f


@main.command()
@click.argument("sample_file", type=click.Path(dir_okay=False))
@click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Number of DFAs.")
@click.option("--sizes", default=None, help="Comma-separated state counts, e.g. 3,3.")
@search_options
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for DOT files.")
def identify(sample_file, n, sizes, no_symmetry, timeout_ms, backend, as_json, out):
    """Find a decomposition with the given state counts (one SAT call).

    Without --sizes the Pareto frontier is searched and the witness with the
    fewest total states is reported.
    """
    sizes = _parse_sizes(sizes)
    if sizes is None and n is None:
        raise click.UsageError("give --sizes or --n")
    if sizes is not None and n is not None and len(sizes) != n:
        raise click.UsageError(f"--n {n} does not match {len(sizes)} sizes")
    with _Stage("reading sample"):
        sample = load_sample(sample_file)
    with _Stage("solving"):
        if sizes is None:
            frontier = search_frontier(sample, n, SearchOptions(
                symmetry_breaking=not no_symmetry, timeout=_seconds(timeout_ms), backend=backend))
            if not frontier.complete:
                status, decomp = Status.TIMEOUT, None
            else:
                best = min(frontier.entries, key=lambda e: (sum(e.sizes), e.sizes))
                status, decomp, sizes = Status.SAT, best.decomposition, best.sizes
        else:
            result, decomp = identify_sizes(sample, sizes, not no_symmetry,
                                            _seconds(timeout_ms), backend)
            status = result.status
    report = {"version": "v1", "status": status.value,
              "sizes": list(sizes) if sizes else None,
              "decomposition": decomposition_to_dict(decomp) if decomp else None}
    if as_json:
        click.echo(_dump(report), nl=False)
    else:
        click.echo(f"{status.value}" + (f" {tuple(sizes)}" if sizes else ""))
        if decomp:
            click.echo(_table(decomp))
    if decomp and out:
        _write_dots(decomp, Path(out))
    sys.exit({Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT}.get(status, EXIT_TIMEOUT))


@main.command()
@click.argument("sample_file", type=click.Path(dir_okay=False))
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of DFAs.")
@search_options
@click.option("--global-timeout-ms", type=click.IntRange(min=1), default=None,
              help="Time budget for the whole search.")
@click.option("--size-cap", type=click.IntRange(min=1), default=None,
              help="Largest DFA the search may try (default: APTA size + 1).")
@click.option("--start", type=click.Choice(["ones", "twos"]), default="ones", show_default=True,
              help="Initial size tuple (1,...,1) or (2,...,2).")
@click.option("--parallel", type=click.IntRange(min=1), default=1, show_default=True,
              help="Solve the tuples of one BFS layer concurrently.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for DOT files (one subdirectory per frontier tuple).")
def frontier(sample_file, n, no_symmetry, timeout_ms, backend, global_timeout_ms, size_cap,
             start, parallel, as_json, out):
    """Enumerate the Pareto-optimal size tuples with one witness each."""
    with _Stage("reading sample"):
        sample = load_sample(sample_file)
    opts = SearchOptions(symmetry_breaking=not no_symmetry, timeout=_seconds(timeout_ms),
                         global_timeout=_seconds(global_timeout_ms), size_cap=size_cap,
                         start=start, parallel=parallel, backend=backend)
    with _Stage("searching"):
        result = search_frontier(sample, n, opts)
    if as_json:
        click.echo(_dump(result.to_dict()), nl=False)
    else:
        state = "complete" if result.complete else f"INCOMPLETE ({result.reason})"
        click.echo(f"Pareto frontier for n={n}: {len(result.entries)} tuple(s), {state}")
        for entry in result.entries:
            click.echo(f"{entry.sizes}  description length "
                       f"{sizing.decomposition_dl(entry.decomposition):.3f} nats")
            click.echo(_table(entry.decomposition))
    if out:
        for entry in result.entries:
            _write_dots(entry.decomposition, Path(out) / "_".join(map(str, entry.sizes)))
    sys.exit(EXIT_SAT if result.complete else EXIT_TIMEOUT)


@main.command()
@click.option("--scenario", type=click.Choice(["Q1", "Q2", "all"]), default="all", show_default=True)
@click.option("--paper-grid", is_flag=True, help="Use the full published grid instead of desk scale.")
@click.option("--seeds", type=click.IntRange(min=1), default=None, help="Number of seeds (0..k-1).")
@click.option("--timeout-ms", type=click.IntRange(min=1), default=None, help="Per-run time budget.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (default stdout).")
def bench(scenario, paper_grid, seeds, timeout_ms, workers, out):
    """Scaling sweeps over the number of DFAs (Q1) and of examples (Q2)."""
    import dataclasses
    grid = taskgen.PAPER_CONFIGS if paper_grid else taskgen.DESK_CONFIGS
    configs = [c for name, c in grid.items() if scenario == "all" or name.startswith(scenario)]
    rows = []
    with _Stage("benchmark"):
        for config in configs:
            if seeds is not None:
                config = dataclasses.replace(config, seeds=tuple(range(seeds)))
            if timeout_ms is not None:
                config = dataclasses.replace(config, timeout=timeout_ms / 1000.0)
            rows.extend(taskgen.run_bench(config, workers))
    text = taskgen.rows_to_csv(rows)
    if out:
        Path(out).write_text(text)
        for s in taskgen.summarize(rows):
            click.echo(f"{s.scenario:28} n={s.n:<3} examples={s.num_examples:<4} "
                       f"mean={s.mean_ms:10.1f} ms  timeouts={s.timeouts}/{s.runs}")
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_SAT if all(r["status"] == "ok" for r in rows) else EXIT_TIMEOUT)


@main.command()
@click.argument("decomposition_file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def score(decomposition_file, as_json):
    """Description length of a decomposition, in nats and bits."""
    with _Stage("reading decomposition"):
        decomp = decomposition_from_json(Path(decomposition_file).read_text())
    nats = sizing.decomposition_dl(decomp)
    members = [sizing.dfa_dl(d) for d in decomp.dfas]
    if as_json:
        click.echo(_dump({"version": "v1", "sizes": list(decomp.sizes), "nats": nats,
                          "bits": sizing.to_bits(nats), "member_nats": members}), nl=False)
    else:
        click.echo(f"{nats:.6f} nats")
        click.echo(f"{sizing.to_bits(nats):.6f} bits")


@main.command()
@click.argument("input_file", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["dimacs", "dot"]), required=True,
              help="dimacs: CNF for a sample and --sizes; dot: graphs of a decomposition file.")
@click.option("--sizes", default=None, help="State counts for the CNF, e.g. 3,3.")
@click.option("--no-symmetry", is_flag=True)
@click.option("--out", type=click.Path(), default=None,
              help="Output file (dimacs) or directory (dot); default stdout.")
def export(input_file, fmt, sizes, no_symmetry, out):
    """Write the CNF encoding as DIMACS, or a decomposition as DOT."""
    if fmt == "dimacs":
        sizes = _parse_sizes(sizes)
        if sizes is None:
            raise click.UsageError("--format dimacs needs --sizes")
        with _Stage("reading sample"):
            sample = load_sample(input_file)
        with _Stage("encoding"):
            cnf, varmap = encode(build_apta(sample), sizes,
                                 EncodeOptions(symmetry_breaking=not no_symmetry))
        text = cnf.to_dimacs(varmap)
        if out:
            Path(out).write_text(text)
        else:
            click.echo(text, nl=False)
        return
    with _Stage("reading decomposition"):
        decomp = decomposition_from_json(Path(input_file).read_text())
    if out:
        _write_dots(decomp, Path(out))
    else:
        for k, dfa in enumerate(decomp.dfas):
            click.echo(to_dot(dfa, f"dfa_{k}"), nl=False)


@main.command()
@click.option("--toy", "kind", flag_value="toy", default=True,
              help="Yellow-before-red and blue-before-brown over y r b n.")
@click.option("--chains", "kind", flag_value="chains", help="Disjoint ordering chains.")
@click.option("--n", "n", type=click.IntRange(min=1), default=2, show_default=True,
              help="Number of chains (with --chains).")
@click.option("--symbols", type=click.IntRange(min=2), default=2, show_default=True,
              help="Symbols per chain (with --chains).")
@click.option("--count", type=click.IntRange(min=2), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exhaustive", type=click.IntRange(min=0), default=None, metavar="LENGTH",
              help="Label every word up to LENGTH instead of sampling.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def generate(kind, n, symbols, count, seed, exhaustive, out):
    """Generate a labeled sample from a partially-ordered task."""
    task = taskgen.toy_task() if kind == "toy" else taskgen.chain_task(n, symbols)
    with _Stage("generating"):
        if exhaustive is not None:
            sample = taskgen.exhaustive_sample(task, exhaustive)
        else:
            sample = taskgen.generate_sample(task, count, seed)
    text = sample_to_json(sample)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()
