"""Pluggable CNF satisfiability backends.

Two interchangeable engines sit behind :func:`solve`:

* ``InternalBackend``: Glucose 4 (via PySAT) running in-process.
* ``ExternalBackend``: any binary that reads a DIMACS file given as its single
  argument and prints SAT-competition output (``s SATISFIABLE`` plus ``v`` lines).

Engine failures raise :class:`EngineError`; they are never reported as UNSAT.
"""
from __future__ import annotations

import os
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass, field
from enum import Enum

from .encoding import CnfInstance
from .errors import EngineError, InputError

SOLVER_ENV = "DFADECOMP_SOLVER"

# Set by the test suite: re-check every SAT model against the clause list.
VERIFY_MODELS = os.environ.get("DFADECOMP_VERIFY_MODELS", "") not in ("", "0")


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class SolveResult:
    status: Status
    model: tuple[int, ...] = ()
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def check_model(cnf: CnfInstance, model) -> None:
    """Independent evaluation of every clause under ``model``."""
    value = {}
    for lit in model:
        value[abs(lit)] = lit > 0
    if len(value) < cnf.num_vars or any(v not in value for v in range(1, cnf.num_vars + 1)):
        raise EngineError("SAT model does not assign every variable")
    for idx, clause in enumerate(cnf.clauses):
        if not any(value[abs(lit)] == (lit > 0) for lit in clause):
            raise EngineError(f"SAT model violates clause {idx}: {clause}")


def _total_model(raw, num_vars: int) -> tuple[int, ...]:
    assigned = {abs(lit): lit for lit in raw if lit != 0 and abs(lit) <= num_vars}
    return tuple(assigned.get(v, -v) for v in range(1, num_vars + 1))


class InternalBackend:
    name = "internal"

    def __init__(self, solver: str = "glucose4"):
        self.solver = solver

    def solve(self, cnf: CnfInstance, budget: float | None = None) -> SolveResult:
        try:
            from pysat.solvers import Solver
        except ImportError as exc:  # pragma: no cover - depends on environment
            raise EngineError(f"PySAT is not available: {exc}") from None
        start = time.perf_counter()
        if budget is not None and budget <= 0:
            return SolveResult(Status.TIMEOUT, stats={"wall_time": 0.0})
        try:
            engine = Solver(name=self.solver, bootstrap_with=cnf.clauses)
        except Exception as exc:
            raise EngineError(f"could not start solver {self.solver!r}: {exc}") from None
        with engine:
            if budget is None:
                answer = engine.solve()
            else:
                done = threading.Event()

                def watchdog():
                    # keep interrupting: a signal sent before the search starts may be cleared
                    if done.wait(budget):
                        return
                    while not done.is_set():
                        engine.interrupt()
                        done.wait(0.005)

                guard = threading.Thread(target=watchdog, daemon=True)
                guard.start()
                try:
                    answer = engine.solve_limited(expect_interrupt=True)
                finally:
                    done.set()
                    guard.join()
            stats = dict(engine.accum_stats() or {})
            stats["wall_time"] = time.perf_counter() - start
            if answer is None:
                return SolveResult(Status.TIMEOUT, stats=stats)
            if not answer:
                return SolveResult(Status.UNSAT, stats=stats)
            model = _total_model(engine.get_model() or [], cnf.num_vars)
        return SolveResult(Status.SAT, model, stats)


class ExternalBackend:
    name = "dimacs"

    def __init__(self, path: str | None = None):
        path = path or os.environ.get(SOLVER_ENV)
        if not path:
            raise InputError(f"no external solver given (use dimacs:<path> or set {SOLVER_ENV})")
        self.path = path

    def solve(self, cnf: CnfInstance, budget: float | None = None) -> SolveResult:
        start = time.perf_counter()
        with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as fh:
            fh.write(cnf.to_dimacs())
            cnf_path = fh.name
        try:
            proc = subprocess.run([self.path, cnf_path], capture_output=True, text=True,
                                  timeout=budget)
        except subprocess.TimeoutExpired:
            return SolveResult(Status.TIMEOUT, stats={"wall_time": time.perf_counter() - start})
        except OSError as exc:
            raise EngineError(f"cannot run external solver {self.path!r}: {exc}") from None
        finally:
            os.unlink(cnf_path)
        stats = {"wall_time": time.perf_counter() - start, "returncode": proc.returncode}
        status, values = None, []
        for line in proc.stdout.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "s":
                status = " ".join(parts[1:])
            elif parts[0] == "v":
                try:
                    values.extend(int(x) for x in parts[1:])
                except ValueError:
                    raise EngineError(f"malformed value line from solver: {line!r}") from None
        if status == "UNSATISFIABLE":
            return SolveResult(Status.UNSAT, stats=stats)
        if status == "SATISFIABLE":
            return SolveResult(Status.SAT, _total_model(values, cnf.num_vars), stats)
        if status == "UNKNOWN":
            return SolveResult(Status.TIMEOUT, stats=stats)
        raise EngineError(f"external solver {self.path!r} produced no status line "
                          f"(exit code {proc.returncode}): {proc.stderr.strip()[:200]}")


def make_backend(spec: str | None = None):
    """``"internal"`` (default), ``"internal:<pysat name>"`` or ``"dimacs[:<path>]"``."""
    spec = spec or "internal"
    kind, _, arg = spec.partition(":")
    if kind == "internal":
        return InternalBackend(arg or "glucose4")
    if kind == "dimacs":
        return ExternalBackend(arg or None)
    raise InputError(f"unknown backend {spec!r}; use 'internal' or 'dimacs:<path>'")


def solve(cnf: CnfInstance, budget: float | None = None, backend=None) -> SolveResult:
    """Solve ``cnf`` within ``budget`` seconds (None = unlimited)."""
    if backend is None or isinstance(backend, str):
        backend = make_backend(backend)
    result = backend.solve(cnf, budget)
    if VERIFY_MODELS and result.sat:
        check_model(cnf, result.model)
    return result
