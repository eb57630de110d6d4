"""Drive external QBF solvers over QCIR/QDIMACS files and normalize verdicts.

Solvers follow the DIMACS subprocess convention: formula path as the final
argument, exit code 10 for true/SAT and 20 for false/UNSAT; ``s cnf 1`` /
``s cnf 0`` result lines are recognized as a fallback.  No solver binaries
are bundled; discovery goes through a small key=value config file or the
``BDDLQBF_SOLVER`` environment variables.
"""

from __future__ import annotations

import dataclasses
import io
import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .circuit import tseitin_to_qdimacs, write_qcir
from .encoder import encode
from .oracle import Oracle
from .syntax import GameDomain, GameInstance

QCIR = "qcir"
QDIMACS = "qdimacs"


@dataclass(frozen=True)
class SolverSpec:
    executable: str
    args: tuple[str, ...] = ()
    input_format: str = QDIMACS
    timeout: float = 60.0
    memory_limit: int | None = None  # advisory only; not enforced here

    def __post_init__(self) -> None:
        if self.input_format not in (QCIR, QDIMACS):
            raise ValueError(f"unknown formula format {self.input_format!r}")


@dataclass(frozen=True)
class SolverVerdict:
    status: str  # "true" | "false" | "unknown" | "timeout" | "error"
    wall_time: float
    raw_output: str

    @property
    def decided(self) -> bool:
        return self.status in ("true", "false")


def run_solver(spec: SolverSpec, formula_file: str | Path) -> SolverVerdict:
    """One subprocess run; timeouts kill the solver and report as such."""
    cmd = [spec.executable, *spec.args, str(formula_file)]
    start = time.monotonic()
    try:
        proc = subprocess.run(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            timeout=spec.timeout,
        )
    except subprocess.TimeoutExpired as exc:
        output = (exc.stdout or b"").decode("utf-8", "replace")
        return SolverVerdict("timeout", time.monotonic() - start, output)
    except OSError as exc:
        return SolverVerdict("error", time.monotonic() - start, str(exc))
    wall = time.monotonic() - start
    output = proc.stdout.decode("utf-8", "replace")
    if proc.returncode == 10:
        return SolverVerdict("true", wall, output)
    if proc.returncode == 20:
        return SolverVerdict("false", wall, output)
    for line in output.splitlines():
        stripped = line.strip()
        if stripped.startswith("s cnf 1") or stripped == "s SATISFIABLE":
            return SolverVerdict("true", wall, output)
        if stripped.startswith("s cnf 0") or stripped == "s UNSATISFIABLE":
            return SolverVerdict("false", wall, output)
    return SolverVerdict("unknown", wall, output)


def write_formula(dom: GameDomain, inst: GameInstance, fmt: str, path: str | Path) -> None:
    enc = encode(dom, inst)
    with open(path, "w", encoding="utf-8") as handle:
        if fmt == QCIR:
            write_qcir(enc.circuit, handle)
        else:
            tseitin_to_qdimacs(enc.circuit, handle)


def formula_stats(dom: GameDomain, inst: GameInstance, fmt: str) -> dict[str, int]:
    """Variable/gate/clause counts of the serialized encoding."""
    enc = encode(dom, inst)
    buf = io.StringIO()
    if fmt == QCIR:
        write_qcir(enc.circuit, buf)
        return {
            "variables": enc.circuit.var_count(),
            "gates": enc.circuit.gate_count(),
        }
    tseitin_to_qdimacs(enc.circuit, buf)
    header = buf.getvalue().splitlines()[0].split()
    return {"variables": int(header[2]), "clauses": int(header[3])}


def solve_with_solver(
    dom: GameDomain, inst: GameInstance, spec: SolverSpec
) -> SolverVerdict:
    with tempfile.TemporaryDirectory(prefix="bddlqbf-") as tmp:
        path = Path(tmp) / f"formula.{spec.input_format}"
        write_formula(dom, inst, spec.input_format, path)
        return run_solver(spec, path)


def _oracle_verdict(dom: GameDomain, inst: GameInstance) -> SolverVerdict:
    start = time.monotonic()
    result = Oracle(dom, inst).solve()
    wall = time.monotonic() - start
    return SolverVerdict(
        "true" if result.black_wins else "false",
        wall,
        f"oracle: {result.nodes_expanded} nodes",
    )


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[tuple[int, SolverVerdict], ...]
    critical_depth: int | None   # smallest scanned depth with a true verdict
    max_refuted: int | None      # largest scanned depth with a false verdict


def depth_scan(
    dom: GameDomain,
    inst: GameInstance,
    dmin: int,
    dmax: int,
    spec: SolverSpec | None,
) -> ScanResult:
    """Solve depths dmin, dmin+2, ... and stop at the first winning depth.

    With spec=None the internal oracle decides each depth.  Solver errors on
    one depth are recorded and the scan carries on.
    """
    if dmin > dmax:
        raise ValueError("dmin must not exceed dmax")
    rows: list[tuple[int, SolverVerdict]] = []
    critical = None
    refuted = None
    for depth in range(dmin, dmax + 1, 2):
        candidate = dataclasses.replace(inst, depth=depth)
        if spec is None:
            verdict = _oracle_verdict(dom, candidate)
        else:
            verdict = solve_with_solver(dom, candidate, spec)
        rows.append((depth, verdict))
        if verdict.status == "true":
            critical = depth
            break
        if verdict.status == "false":
            refuted = depth
    return ScanResult(tuple(rows), critical, refuted)


# -- discovery -------------------------------------------------------------------


def load_solver_config(path: str | Path) -> SolverSpec:
    """Parse a key=value config file: solver=..., format=..., args=..., timeout=..."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text("utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    if "solver" not in values:
        raise ValueError(f"{path}: missing 'solver=' entry")
    return SolverSpec(
        executable=values["solver"],
        args=tuple(values.get("args", "").split()),
        input_format=values.get("format", QDIMACS),
        timeout=float(values.get("timeout", "60")),
    )


def discover_solver(
    config_path: str | Path | None = None, env: dict[str, str] | None = None
) -> SolverSpec | None:
    """Environment variables beat the config file; None when nothing is set.

    BDDLQBF_SOLVER names the executable, BDDLQBF_SOLVER_FORMAT the input
    format (default qdimacs), BDDLQBF_SOLVER_ARGS extra arguments.
    """
    env = os.environ if env is None else env
    exe = env.get("BDDLQBF_SOLVER")
    if exe:
        if shutil.which(exe) is None and not Path(exe).exists():
            return None
        return SolverSpec(
            executable=exe,
            args=tuple(env.get("BDDLQBF_SOLVER_ARGS", "").split()),
            input_format=env.get("BDDLQBF_SOLVER_FORMAT", QDIMACS),
            timeout=float(env.get("BDDLQBF_SOLVER_TIMEOUT", "60")),
        )
    if config_path and Path(config_path).exists():
        return load_solver_config(config_path)
    return None
