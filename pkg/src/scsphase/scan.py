"""Contour-grid and line scans with CSV output and JSON manifests.

A manifest records every input needed to regenerate its CSV; ``scan_from_manifest``
and ``line_from_manifest`` rebuild the spec and rerun it.
"""

from __future__ import annotations

import ast
import hashlib
import io
import json
import math
import operator
import os
import platform
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .evolution import EvolutionSpec, build_context
from .phase import choose_truncation, geometric_phase_numeric, gp_analytic, wrap_phase
from .states import Family, MixedStateSpec, SCSParams

__all__ = [
    "Axis",
    "GridSpec",
    "LineSpec",
    "ScanReport",
    "parse_range",
    "parse_angle",
    "run_scan",
    "run_line",
    "scan_from_manifest",
    "line_from_manifest",
    "format_float",
]

NUMERIC_ALPHA_BOUND = 1.5
NUMERIC_R_BOUND = 0.5
MODES = ("analytic", "numeric", "both")

SCAN_HEADER = ["alpha0", "alpha1", "gp_analytic", "gp_wrapped"]
SCAN_NUMERIC_HEADER = ["gp_numeric", "gp_total", "gp_dynamical", "abs_err_mod2pi"]
LINE_HEADER = ["alpha", "abs_gp_ent", "abs_gp_sep_unbal", "abs_gp_sep_bal"]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_angle(text: str | float) -> float:
    """Parse radians, allowing ``pi`` in simple arithmetic such as ``3*pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported angle expression: {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse angle {text!r}") from exc
    try:
        value = ev(tree)
    except ZeroDivisionError as exc:
        raise ValueError(f"division by zero in {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"angle {text!r} is not finite")
    return value


@dataclass(frozen=True)
class Axis:
    """Inclusive ``start:stop:count`` range."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis needs count >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ValueError(f"axis needs start < stop, got {self.start}:{self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self):
        return f"{format_float(self.start)}:{format_float(self.stop)}:{self.count}"


def parse_range(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like start:stop:count, got {text!r}")
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ValueError(f"range count must be an integer, got {parts[2]!r}") from exc
    return Axis(parse_angle(parts[0]), parse_angle(parts[1]), count)


def _axis_from(obj) -> Axis:
    if isinstance(obj, Axis):
        return obj
    if isinstance(obj, str):
        return parse_range(obj)
    return Axis(float(obj["start"]), float(obj["stop"]), int(obj["count"]))


@dataclass(frozen=True)
class GridSpec:
    family: Family
    theta: float
    lam: float
    r0: float
    r1: float
    alpha0: Axis
    alpha1: Axis
    mode: str = "analytic"
    r_ref: float | None = None
    norm: str = "corrected"
    nmax: int | None = None
    buffer: int = 10
    tail_tol: float = 1e-12
    force: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "alpha0", _axis_from(self.alpha0))
        object.__setattr__(self, "alpha1", _axis_from(self.alpha1))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.r0 < 0 or self.r1 < 0:
            raise ValueError("squeezing parameters must be non-negative")
        if self.r_ref is None and self.r0 == self.r1:
            object.__setattr__(self, "r_ref", self.r0)
        if self.mode != "analytic":
            if self.r_ref is None:
                raise ValueError("--r-ref is required when r0 != r1 in numeric mode")
            too_big = (max(abs(self.alpha0.start), abs(self.alpha0.stop),
                           abs(self.alpha1.start), abs(self.alpha1.stop)) > NUMERIC_ALPHA_BOUND
                       or max(self.r0, self.r1, self.r_ref) > NUMERIC_R_BOUND)
            if too_big and not self.force:
                raise ValueError(
                    f"numeric mode is limited to |alpha| <= {NUMERIC_ALPHA_BOUND} and r <= {NUMERIC_R_BOUND}; "
                    "pass --force to override"
                )
            if too_big:
                warnings.warn("numeric scan outside default bounds; truncation may be large", RuntimeWarning)

    def states(self) -> list[MixedStateSpec]:
        return [MixedStateSpec(self.family, self.lam, SCSParams(a0, self.r0), SCSParams(a1, self.r1))
                for a0 in self.alpha0.values() for a1 in self.alpha1.values()]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d["alpha0"] = str(self.alpha0)
        d["alpha1"] = str(self.alpha1)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(**d)


@dataclass(frozen=True)
class LineSpec:
    theta: float
    lam: float
    r0: float
    r1: float
    alpha: Axis
    norm: str = "corrected"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _axis_from(self.alpha))
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.r0 < 0 or self.r1 < 0:
            raise ValueError("squeezing parameters must be non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alpha"] = str(self.alpha)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LineSpec":
        return cls(**d)


@dataclass
class ScanReport:
    command: str
    header: list[str]
    rows: list[list[float]]
    inputs: dict
    truncation: dict | None = None
    summary: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(format_float(x) for x in row) + "\n")
        return buf.getvalue()

    def manifest(self, csv_path: str | os.PathLike | None = None) -> dict:
        from . import __version__

        text = self.csv_text()
        return {
            "command": self.command,
            "inputs": self.inputs,
            "truncation": self.truncation,
            "summary": self.summary,
            "csv": {
                "path": None if csv_path is None else str(csv_path),
                "rows": len(self.rows),
                "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            },
            "environment": {
                "library_version": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "platform": platform.platform(),
            },
            "wall_time_s": self.wall_time_s,
        }

    def write(self, csv_path: str | os.PathLike, manifest_path: str | os.PathLike | None = None) -> Path:
        csv_path = Path(csv_path)
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.csv_text())
        if manifest_path is None:
            manifest_path = csv_path.with_suffix(".json")
        manifest_path = Path(manifest_path)
        with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.manifest(csv_path), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return manifest_path


def _norm_key(norm: str) -> str:
    return norm.replace("-", "_")


def run_scan(grid: GridSpec, workers: int | None = None) -> ScanReport:
    """Evaluate the analytic (and optionally numeric) phase on the grid.

    Rows are ordered by alpha0 then alpha1 regardless of ``workers``.
    """
    t0 = time.perf_counter()
    states = grid.states()
    norm = _norm_key(grid.norm)
    header = list(SCAN_HEADER)
    truncation = None
    summary: dict = {"points": len(states)}

    analytic = [gp_analytic(s, grid.theta, norm) for s in states]
    rows = [[s.p0.alpha, s.p1.alpha, g, wrap_phase(g)] for s, g in zip(states, analytic)]

    if grid.mode != "analytic":
        header += SCAN_NUMERIC_HEADER
        trunc = choose_truncation(states, grid.r_ref, grid.buffer, grid.tail_tol, grid.nmax)
        ctx = build_context(EvolutionSpec(grid.theta, grid.r_ref, trunc))
        truncation = {"n_max": trunc.n_max, "buffer": trunc.buffer, "tail_tol": trunc.tail_tol,
                      "mode_dim": ctx.mode_dim}

        def one(s):
            return geometric_phase_numeric(s, ctx=ctx)

        n_workers = workers or os.cpu_count() or 1
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                results = list(pool.map(one, states))
        else:
            results = [one(s) for s in states]

        errs = []
        for row, g, res in zip(rows, analytic, results):
            err = abs(wrap_phase(g - res.geometric))
            errs.append(err)
            row += [res.geometric, res.total, res.dynamical, err]
        summary.update({
            "max_abs_err_mod2pi": max(errs),
            "max_abs_sin_total": max(abs(math.sin(r.total)) for r in results),
            "min_re_trace": min(r.trace_final.real for r in results),
            "undefined_phase_points": sum(r.diagnostics["undefined_phase"] for r in results),
        })
        summary["total_phase_claim_holds"] = (summary["max_abs_sin_total"] <= 1e-6 and summary["min_re_trace"] > 0)

    return ScanReport("scan", header, rows, grid.to_dict(), truncation, summary, time.perf_counter() - t0)


def run_line(line: LineSpec) -> ScanReport:
    """Moduli of the three unwrapped closed-form phases along alpha0 = alpha1."""
    t0 = time.perf_counter()
    norm = _norm_key(line.norm)
    rows = []
    for a in line.alpha.values():
        p0, p1 = SCSParams(a, line.r0), SCSParams(a, line.r1)
        rows.append([
            a,
            abs(gp_analytic(MixedStateSpec(Family.ENT, line.lam, p0, p1), line.theta, norm)),
            abs(gp_analytic(MixedStateSpec(Family.SEP_UNBAL, line.lam, p0, p1), line.theta)),
            abs(gp_analytic(MixedStateSpec(Family.SEP_BAL, line.lam, p0, p1), line.theta)),
        ])
    return ScanReport("line", list(LINE_HEADER), rows, line.to_dict(), None,
                      {"points": len(rows)}, time.perf_counter() - t0)


def _load(manifest: dict | str | os.PathLike) -> dict:
    if isinstance(manifest, dict):
        return manifest
    with open(manifest, encoding="utf-8") as fh:
        return json.load(fh)


def scan_from_manifest(manifest, workers: int | None = None) -> ScanReport:
    m = _load(manifest)
    if m["command"] != "scan":
        raise ValueError(f"manifest is for {m['command']!r}, not 'scan'")
    return run_scan(GridSpec.from_dict(m["inputs"]), workers)


def line_from_manifest(manifest) -> ScanReport:
    m = _load(manifest)
    if m["command"] != "line":
        raise ValueError(f"manifest is for {m['command']!r}, not 'line'")
    return run_line(LineSpec.from_dict(m["inputs"]))
