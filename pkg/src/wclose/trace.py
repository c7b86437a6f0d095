"""Machine-readable JSON traces of CLI runs.

Every trace has the same envelope (tool, version, command, input, status,
result).  Keys named ``seconds`` or ``time`` carry wall-clock timings and
are the only fields allowed to differ between two runs on the same input.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any, Dict, Optional

from .closure import ClosureResult
from .groebner import GroebnerBasis
from .parser import ProblemFile
from .weyl import format_element

TRACE_VERSION = "1"
TIMING_KEYS = frozenset({"seconds", "time"})


def schema() -> dict:
    """The JSON schema every trace validates against."""
    text = resources.files("wclose").joinpath("trace.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def problem_dict(pf: ProblemFile, order_text: Optional[str] = None) -> dict:
    return {
        "poly_vars": list(pf.poly_vars),
        "rational_vars": list(pf.rat_vars),
        "rank": pf.rank,
        "field": pf.field_spec,
        "order": order_text or pf.order_text or "grevlex",
        "generators": [format_element(g) for g in pf.generators],
    }


def gb_dict(G: GroebnerBasis) -> dict:
    stats = {k: v for k, v in G.stats.items() if isinstance(v, (int, float))}
    return {
        "generators": [format_element(g) for g in G],
        "size": len(G),
        "order": G.order.describe(G.sig),
        "stats": stats,
    }


def closure_dict(r: ClosureResult) -> dict:
    sig = r.generators[0].sig if r.generators else None
    return {
        "generators": [format_element(g) for g in r.generators],
        "size": len(r.generators),
        "f": r.f.to_str(),
        "order": r.order.describe(sig) if sig is not None else repr(r.order),
        "iterations": [rec.to_dict() for rec in r.trace],
        "fired_criterion": r.fired_criterion,
        "status": r.status,
        "holonomic": r.holonomic,
        "input_membership": list(r.input_membership),
        "saturation_exponents": list(r.saturation_exponents),
        "history": [[format_element(g) for g in Gp] for Gp in r.history],
        "message": r.message,
    }


def envelope(command: str, status: str, result: Any, problem: Optional[dict] = None,
             seconds: Optional[float] = None, error: Optional[str] = None) -> dict:
    from . import __version__

    doc: Dict[str, Any] = {
        "tool": "wclose",
        "version": __version__,
        "trace_version": TRACE_VERSION,
        "command": command,
        "input": problem,
        "status": status,
        "error": error,
        "result": result,
    }
    if seconds is not None:
        doc["seconds"] = seconds
    return doc


def strip_timings(doc):
    """Copy of ``doc`` without timing fields (for determinism comparisons)."""
    if isinstance(doc, dict):
        return {k: strip_timings(v) for k, v in doc.items() if k not in TIMING_KEYS}
    if isinstance(doc, list):
        return [strip_timings(v) for v in doc]
    return doc


def dump(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
