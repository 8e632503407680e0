"""Grid scans over T(x,y,z) and its looped variant for Leontovich behaviour.

Each (x, y, z, looped) cell is evaluated by a pure function, so cells can run
in any order on any number of worker processes; results are merged in
lexicographic cell order afterwards.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .certify import A_WINS, StructureError, certify_dominant, certify_parity, exact_compare
from .exactalg import DEFAULT_WIDTH, format_rational, parse_rational
from .graphs import e_family, path_family
from .orbits import structural_orbits_T

FINITE_N = "finite_n"
PARITY_CERTIFICATE = "parity_certificate"
DOMINANT_CERTIFICATE = "dominant_certificate"
MODES = (FINITE_N, PARITY_CERTIFICATE, DOMINANT_CERTIFICATE)

Cell = tuple[int, int, int, bool]


class SearchSpecError(ValueError):
    pass


def _expand(name: str, rng: Sequence[int]) -> tuple[int, ...]:
    if len(rng) == 2:
        rng = (rng[0], rng[1], 1)
    if len(rng) != 3 or not all(isinstance(v, int) and not isinstance(v, bool) for v in rng):
        raise SearchSpecError(f"range {name!r} must be [lo, hi, step] integers")
    lo, hi, step = rng
    if step < 1:
        raise SearchSpecError(f"range {name!r} needs a positive step")
    if lo < 1:
        raise SearchSpecError(f"range {name!r} must hold positive parameters")
    values = tuple(range(lo, hi + 1, step))
    if not values:
        raise SearchSpecError(f"range {name!r} is empty")
    return values


@dataclass(frozen=True)
class SearchSpec:
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    zs: tuple[int, ...]
    looped: tuple[bool, ...] = (False,)
    mode: str = FINITE_N
    n_list: tuple[int, ...] = (3,)
    parity: str = "odd"
    width: Fraction = DEFAULT_WIDTH
    screen_n: tuple[int, ...] = ()

    def __post_init__(self):
        if not (self.xs and self.ys and self.zs and self.looped):
            raise SearchSpecError("every range must be nonempty")
        if min(self.xs + self.ys + self.zs) < 1:
            raise SearchSpecError("parameters must be positive")
        if self.mode not in MODES:
            raise SearchSpecError(f"mode must be one of {', '.join(MODES)}")
        if self.mode == FINITE_N and not self.n_list:
            raise SearchSpecError("finite_n mode needs a nonempty n list")
        if any(n < 0 for n in self.n_list + self.screen_n):
            raise SearchSpecError("family indices must be nonnegative")
        if self.parity not in ("odd", "even"):
            raise SearchSpecError("parity must be 'odd' or 'even'")
        if self.width <= 0:
            raise SearchSpecError("width must be positive")

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchSpec":
        try:
            looped = doc.get("looped", [False])
            if isinstance(looped, bool):
                looped = [looped]
            return cls(
                xs=_expand("x", doc["x"]),
                ys=_expand("y", doc["y"]),
                zs=_expand("z", doc["z"]),
                looped=tuple(sorted({bool(v) for v in looped})),
                mode=doc.get("mode", FINITE_N),
                n_list=tuple(int(n) for n in doc.get("n", [3])),
                parity=doc.get("parity", "odd"),
                width=parse_rational(str(doc.get("width", "1/10000"))),
                screen_n=tuple(int(n) for n in doc.get("screen_n", [])),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, SearchSpecError):
                raise
            raise SearchSpecError(f"bad search spec: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "SearchSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SearchSpecError(f"{exc.msg} (line {exc.lineno}, column {exc.colno})") from None
        if not isinstance(doc, dict):
            raise SearchSpecError("search spec must be an object")
        return cls.from_dict(doc)

    def cells(self) -> list[Cell]:
        return list(itertools.product(self.xs, self.ys, self.zs, self.looped))


@dataclass(frozen=True)
class SearchHit:
    cell: Cell
    mode: str
    margin: Fraction
    evidence: dict

    def to_dict(self) -> dict:
        x, y, z, looped = self.cell
        return {
            "x": x,
            "y": y,
            "z": z,
            "looped": looped,
            "mode": self.mode,
            "margin": format_rational(self.margin),
            "evidence": self.evidence,
        }


def _finite_rows(cell: Cell, n_list: Sequence[int]) -> list:
    x, y, z, looped = cell
    q = structural_orbits_T(x, y, z, looped)
    return exact_compare(path_family(), e_family(), q, n_list)


def evaluate_cell(spec: SearchSpec, cell: Cell) -> SearchHit | None:
    """Pure evaluation of one grid cell."""
    x, y, z, looped = cell
    if spec.screen_n and spec.mode != FINITE_N:
        if not any(r.difference > 0 for r in _finite_rows(cell, spec.screen_n)):
            return None
    if spec.mode == FINITE_N:
        rows = _finite_rows(cell, spec.n_list)
        if not any(r.difference > 0 for r in rows):
            return None
        margin = max(r.difference for r in rows)
        return SearchHit(cell, spec.mode, Fraction(margin), {"counts": [r.to_dict() for r in rows]})
    try:
        if spec.mode == PARITY_CERTIFICATE:
            if looped:
                return None
            cert = certify_parity(x, y, z, spec.parity, spec.width)
        else:
            cert = certify_dominant(x, y, z, looped, spec.width)
    except StructureError:
        return None
    if cert.conclusion != A_WINS:
        return None
    margin = cert.a_lower - cert.b_upper
    return SearchHit(cell, spec.mode, margin, {"certificate": cert.to_dict()})


@dataclass
class ScanResult:
    spec: SearchSpec
    hits: list[SearchHit]
    cells_total: int
    cells_scanned: int
    completed_through: Cell | None

    @property
    def complete(self) -> bool:
        return self.cells_scanned == self.cells_total


def scan(spec: SearchSpec, workers: int = 1, max_seconds: float | None = None) -> ScanResult:
    """Evaluate every cell; on timeout, report the longest finished prefix of the grid."""
    cells = spec.cells()
    done: dict[int, SearchHit | None] = {}
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    if workers <= 1:
        for i, cell in enumerate(cells):
            if deadline is not None and time.monotonic() > deadline:
                break
            done[i] = evaluate_cell(spec, cell)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {pool.submit(evaluate_cell, spec, cell): i for i, cell in enumerate(cells)}
            while pending:
                timeout = None if deadline is None else max(deadline - time.monotonic(), 0)
                finished, _ = wait(pending, timeout=timeout, return_when=FIRST_COMPLETED)
                if not finished:
                    for fut in pending:
                        fut.cancel()
                    break
                for fut in finished:
                    done[pending.pop(fut)] = fut.result()
    prefix = 0
    while prefix in done:
        prefix += 1
    hits = [done[i] for i in range(prefix) if done[i] is not None]
    return ScanResult(
        spec=spec,
        hits=hits,
        cells_total=len(cells),
        cells_scanned=prefix,
        completed_through=cells[prefix - 1] if prefix else None,
    )


def report(result: ScanResult) -> dict[str, Any]:
    return {
        "mode": result.spec.mode,
        "cells_total": result.cells_total,
        "cells_scanned": result.cells_scanned,
        "complete": result.complete,
        "completed_through": list(result.completed_through) if result.completed_through else None,
        "hits": [h.to_dict() for h in result.hits],
    }


def report_table(summary: dict[str, Any]) -> str:
    lines = [
        f"mode: {summary['mode']}",
        f"cells scanned: {summary['cells_scanned']} of {summary['cells_total']}",
    ]
    if not summary["complete"]:
        lines.append(f"stopped early; completed through {summary['completed_through']}")
    lines.append(f"hits: {len(summary['hits'])}")
    if summary["hits"]:
        header = f"{'x':>6} {'y':>6} {'z':>6} {'looped':>7}  margin"
        lines.append(header)
        for h in summary["hits"]:
            lines.append(f"{h['x']:>6} {h['y']:>6} {h['z']:>6} {str(h['looped']):>7}  {_show_margin(h['margin'])}")
    return "\n".join(lines) + "\n"


def _show_margin(text: str) -> str:
    r = parse_rational(text)
    return str(r.numerator) if r.denominator == 1 else f"{text} (~{float(r):.6g})"
