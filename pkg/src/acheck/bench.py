"""Batch checking of many circuit files with a JSON and a text report."""

from __future__ import annotations

import concurrent.futures as cf
import dataclasses
import logging
import os
import resource
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .circuit import ConstraintSystem
from .config import Config
from .dispatch import check
from .errors import AcheckError
from .frontend import lower_r1cs, parse_polyir, parse_r1cs, parse_sym
from .poly import Kind, Polynomial, Var
from .verdict import Category

log = logging.getLogger(__name__)

SMALL, MEDIUM, LARGE = "small", "medium", "large"
_ALGEBRAIC = {Category.ALGEBRAIC_EXACT, Category.ALGEBRAIC_OVER}


@dataclass(frozen=True)
class LoadOptions:
    """How circuit files are read."""

    sym: str | None = None  # symbol file; default is <stem>.sym next to the .r1cs
    prime: int | None = None  # replaces the file's modulus
    outputs: tuple | None = None  # output signal names
    c_sign: str = "neg"


def load_circuit(path: str | os.PathLike, options: LoadOptions = LoadOptions()) -> ConstraintSystem:
    """Read a .r1cs (with its .sym when present) or a .polyir file."""
    path = Path(path)
    if path.suffix == ".polyir":
        sys = parse_polyir(path.read_text(encoding="utf-8"), name=path.stem, prime=options.prime)
        if options.outputs is not None:
            sys = _rescope_outputs(sys, options.outputs)
        return sys
    if path.suffix != ".r1cs":
        raise AcheckError(f"{path}: expected a .r1cs or .polyir file")
    r = parse_r1cs(path.read_bytes())
    if options.prime is not None and options.prime != r.prime:
        log.warning("%s: replacing modulus %d with %d", path, r.prime, options.prime)
        r = dataclasses.replace(r, prime=options.prime)
    sym_path = Path(options.sym) if options.sym else path.with_suffix(".sym")
    sym = None
    if sym_path.exists():
        sym = parse_sym(sym_path.read_text(encoding="utf-8"))
    elif options.sym:
        raise AcheckError(f"{sym_path}: no such symbol file")
    return lower_r1cs(r, sym, options.outputs, options.c_sign, name=path.stem)


def _rescope_outputs(sys: ConstraintSystem, names) -> ConstraintSystem:
    wanted = set(names)
    missing = wanted - {v.name for v in sys.variables}
    if missing:
        raise AcheckError(f"unknown output names: {sorted(missing)}")
    out = []
    for v in sys.variables:
        if v.name in wanted:
            if v.is_known:
                raise AcheckError(f"{v.name} is an input and cannot be an output")
            out.append(Var(v.index, Kind.OUTPUT, v.name))
        elif v.kind is Kind.OUTPUT:
            out.append(Var(v.index, Kind.TEMP, v.name))
        else:
            out.append(v)
    p = sys.p
    rename = {
        old: Polynomial.var(p, new) for old, new in zip(sys.variables, out) if old.kind is not new.kind
    }
    rows = [f.substitute(rename) for f in sys.constraints]
    return ConstraintSystem(sys.prime, tuple(out), tuple(rows), sys.name)


def read_manifest(path: str | os.PathLike) -> list:
    """Circuit paths, one per line, relative to the manifest; '#' starts a comment."""
    path = Path(path)
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            p = Path(line)
            out.append(str(p if p.is_absolute() else path.parent / p))
    return out


def size_class(n_constraints: int) -> str:
    if n_constraints < 100:
        return SMALL
    if n_constraints < 1000:
        return MEDIUM
    return LARGE


@dataclass
class Row:
    name: str
    path: str
    circuit_class: str | None = None
    category: str | None = None
    evidence: dict = field(default_factory=dict)
    ledger: list = field(default_factory=list)
    seconds: float = 0.0
    n_constraints: int = 0
    reason: str = ""
    error: str | None = None

    @property
    def size(self) -> str:
        return size_class(self.n_constraints)

    def to_json(self) -> dict:
        d = {
            "name": self.name,
            "path": self.path,
            "class": self.circuit_class,
            "category": self.category,
            "evidence": self.evidence,
            "ledger": self.ledger,
            "seconds": round(self.seconds, 6),
            "constraints": self.n_constraints,
            "size": self.size,
        }
        if self.reason:
            d["reason"] = self.reason
        if self.error is not None:
            d["error"] = self.error
        return d


def _rate(num: int, den: int):
    return num / den if den else "n/a"


def _mean(xs: list):
    return sum(xs) / len(xs) if xs else "n/a"


@dataclass
class BenchmarkReport:
    rows: list
    config: Config = field(default_factory=Config)
    tool_version: str = __version__

    def _cats(self, row: Row):
        return Category(row.category) if row.category else None

    def aggregates(self) -> dict:
        def stats(rows: list) -> dict:
            ps = [r for r in rows if self._cats(r) is not None and self._cats(r).is_precise]
            al = [r for r in rows if self._cats(r) in _ALGEBRAIC]
            solved = ps + al
            return {
                "total": len(rows),
                "ps": len(ps),
                "as": len(solved),
                "ps_rate": _rate(len(ps), len(rows)),
                "as_rate": _rate(len(solved), len(rows)),
                "avg_ps_seconds": _mean([r.seconds for r in ps]),
                "avg_as_seconds": _mean([r.seconds for r in solved]),
            }

        agg = stats(self.rows)
        agg["errors"] = sum(1 for r in self.rows if r.error is not None)
        counts: dict = {c.value: 0 for c in Category}
        for r in self.rows:
            if r.category:
                counts[r.category] += 1
        agg["categories"] = counts
        agg["by_size"] = {s: stats([r for r in self.rows if r.size == s]) for s in (SMALL, MEDIUM, LARGE)}
        return agg

    def to_json(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "config": self.config.to_json(),
            "rows": [r.to_json() for r in self.rows],
            "aggregates": self.aggregates(),
        }

    def to_text(self) -> str:
        width = max([len(r.name) for r in self.rows] + [7])
        lines = [f"{'circuit':<{width}}  {'class':<16} {'category':<29} {'rows':>6} {'seconds':>9}"]
        for r in self.rows:
            cat = r.category or f"error: {r.error}"
            lines.append(
                f"{r.name:<{width}}  {r.circuit_class or '-':<16} {cat:<29} "
                f"{r.n_constraints:>6} {r.seconds:>9.3f}"
            )
        a = self.aggregates()

        def fmt(x):
            return x if isinstance(x, str) else f"{x:.3f}"

        lines.append("")
        lines.append(
            f"total {a['total']}  errors {a['errors']}  ps_rate {fmt(a['ps_rate'])}  "
            f"as_rate {fmt(a['as_rate'])}  avg PS s {fmt(a['avg_ps_seconds'])}  "
            f"avg PS&AS s {fmt(a['avg_as_seconds'])}"
        )
        for s, st in a["by_size"].items():
            if st["total"]:
                lines.append(f"  {s:<6} {st['total']:>4} circuits  ps {st['ps']}  as {st['as']}")
        return "\n".join(lines) + "\n"

    def exit_code(self) -> int:
        return exit_code([self._cats(r) for r in self.rows])


def exit_code(categories) -> int:
    """0 all exact, 2 any under, 3 any over (no under), 4 otherwise."""
    cats = list(categories)
    if Category.PRECISELY_UNDER in cats:
        return 2
    if Category.PRECISELY_OVER in cats:
        return 3
    if cats and all(c is Category.PRECISELY_EXACT for c in cats):
        return 0
    return 4


def limit_memory(limit: int | None):
    """Cap this process's address space so runaway checks fail with MemoryError."""
    if not limit:
        return
    try:
        soft, hard = resource.getrlimit(resource.RLIMIT_AS)
        if hard != resource.RLIM_INFINITY:
            limit = min(limit, hard)
        resource.setrlimit(resource.RLIMIT_AS, (limit, hard))
    except (ValueError, OSError) as e:
        log.warning("could not set a memory limit: %s", e)


def check_file(path: str, config: Config, options: LoadOptions = LoadOptions()) -> Row:
    """Load and check one file; load failures become an error row."""
    row = Row(name=Path(path).stem, path=str(path))
    t0 = time.perf_counter()
    try:
        sys = load_circuit(path, options)
    except (OSError, AcheckError, ValueError) as e:
        row.error = f"{type(e).__name__}: {e}"
        row.seconds = time.perf_counter() - t0
        return row
    row.n_constraints = len(sys.constraints)
    v = check(sys, config)
    row.circuit_class = v.circuit_class.value if v.circuit_class is not None else None
    row.category = v.category.value
    row.evidence = v.evidence
    row.ledger = [str(f) for f in v.ledger]
    row.seconds = v.seconds
    row.reason = v.reason
    return row


def run_benchmark(
    manifest: list,
    config: Config | None = None,
    workers: int = 1,
    options: LoadOptions = LoadOptions(),
) -> BenchmarkReport:
    """Check every circuit in `manifest`, in parallel when workers > 1."""
    config = config or Config()
    paths = [str(p) for p in manifest]
    if workers <= 1 or len(paths) <= 1:
        rows = [check_file(p, config, options) for p in paths]
    else:
        with cf.ProcessPoolExecutor(
            max_workers=workers, initializer=limit_memory, initargs=(config.memory_limit,)
        ) as pool:
            futures = [pool.submit(check_file, p, config, options) for p in paths]
            rows = []
            for p, fut in zip(paths, futures):
                try:
                    rows.append(fut.result())
                except Exception as e:  # a crashed worker must not sink the run
                    rows.append(Row(name=Path(p).stem, path=p, error=f"{type(e).__name__}: {e}"))
    return BenchmarkReport(rows, config)
