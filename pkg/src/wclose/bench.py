"""Desk-scale benchmark suites.

Each instance yields one row: instance, field, order, time, size, status,
reference.  ``size`` is the number of operators in the output basis and
``reference`` a known reference size where one exists.  Budget overruns are
recorded in the status column; they never abort the suite.
"""

from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .annihilators import annihilator_of_exp, annihilator_of_rational, beukers_style_polynomial, \
    exp1_polynomial, ssw2_denominator
from .closure import ClosureConfig, partial_weyl_closure
from .fields import DEFAULT_PRIME, parse_field
from .groebner import Budget, BudgetExceeded, buchberger
from .orders import default_order
from .weyl import AlgebraSignature

SUITES = ("x2y3", "ssw2", "exp1-fp", "beukers-style-random")
COLUMNS = ("instance", "field", "order", "time", "size", "status", "reference")
FP = f"Fp({DEFAULT_PRIME})"


@dataclass(frozen=True)
class Instance:
    suite: str
    name: str
    field: str
    reference: Optional[int] = None
    seed: int = 0


def _closure_row(inst: Instance, sig: AlgebraSignature, gens, f, budget: Budget) -> dict:
    order = default_order(sig)
    t0 = time.monotonic()
    r = partial_weyl_closure(gens, f, ClosureConfig(order=order, budget=budget, keep_history=False))
    status = r.status
    if status == "completed" and not (r.holonomic and r.certified):
        status = "uncertified"
    return _row(inst, order.describe(sig), time.monotonic() - t0, len(r.generators), status)


def _gb_row(inst: Instance, sig: AlgebraSignature, gens, budget: Budget) -> dict:
    order = default_order(sig)
    t0 = time.monotonic()
    try:
        G = buchberger(gens, order, budget=budget.start())
        size, status = len(G), "completed"
    except BudgetExceeded:
        size, status = None, "budget-exceeded"
    return _row(inst, order.describe(sig), time.monotonic() - t0, size, status)


def _row(inst, order, seconds, size, status) -> dict:
    return {
        "instance": inst.name,
        "field": inst.field,
        "order": order,
        "time": round(seconds, 4),
        "size": size,
        "status": status,
        "reference": inst.reference,
    }


def _run_x2y3(inst: Instance, budget: Budget) -> dict:
    sig = AlgebraSignature(["x", "y"], field=parse_field(inst.field))
    R = sig.function_ring
    x, y = R.gen("x"), R.gen("y")
    return _closure_row(inst, sig, annihilator_of_rational(x**2 - y**3, sig), "auto", budget)


def _run_ssw2(inst: Instance, budget: Budget) -> dict:
    sig = AlgebraSignature(["t", "x", "y"], field=parse_field(inst.field))
    q = ssw2_denominator(sig.function_ring)
    f = sig.loc_ring.convert(q)
    return _closure_row(inst, sig, annihilator_of_rational(q, sig), f, budget)


def _run_exp1(inst: Instance, budget: Budget) -> dict:
    sig = AlgebraSignature(["x1", "x2", "x3"], field=parse_field(inst.field))
    return _gb_row(inst, sig, annihilator_of_exp(exp1_polynomial(sig.function_ring), sig), budget)


def _run_beukers(inst: Instance, budget: Budget) -> dict:
    sig = AlgebraSignature(["x1", "x2", "x3"], field=parse_field(inst.field))
    c = random.Random(inst.seed).randrange(1, 10**4)
    g = beukers_style_polynomial(sig.function_ring, c)
    return _gb_row(inst, sig, annihilator_of_exp(g, sig), budget)


_RUNNERS: Dict[str, Callable[[Instance, Budget], dict]] = {
    "x2y3": _run_x2y3,
    "ssw2": _run_ssw2,
    "exp1-fp": _run_exp1,
    "beukers-style-random": _run_beukers,
}


def instances(suite: str, field: Optional[str] = None, seed: int = 0, count: int = 3) -> List[Instance]:
    if suite == "x2y3":
        return [Instance(suite, "x2y3", field or "QQ")]
    if suite == "ssw2":
        return [Instance(suite, "ssw2", field or "QQ", reference=13)]
    if suite == "exp1-fp":
        return [Instance(suite, "Exp1", field or FP)]
    if suite == "beukers-style-random":
        rng = random.Random(seed)
        return [Instance(suite, f"beukers-style-{i}", field or FP, seed=rng.randrange(2**31))
                for i in range(count)]
    raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")


def run_instance(inst: Instance, budget: Optional[Budget] = None) -> dict:
    # a fresh budget per instance: deadlines must not leak between rows
    b = Budget(**{k: v for k, v in vars(budget or Budget()).items() if k != "deadline"})
    try:
        return _RUNNERS[inst.suite](inst, b.start())
    except BudgetExceeded:
        return _row(inst, "", 0.0, None, "budget-exceeded")


def run_suite(suite: str, field: Optional[str] = None, seed: int = 0, jobs: int = 1,
              budget: Optional[Budget] = None, count: int = 3) -> List[dict]:
    todo = instances(suite, field, seed, count)
    if jobs <= 1 or len(todo) <= 1:
        return [run_instance(i, budget) for i in todo]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_instance, todo, [budget] * len(todo)))


def to_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if r[k] is None else r[k] for k in COLUMNS})
    return buf.getvalue()


def to_markdown(rows: List[dict]) -> str:
    lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    for r in rows:
        lines.append("| " + " | ".join("" if r[k] is None else str(r[k]) for k in COLUMNS) + " |")
    return "\n".join(lines) + "\n"
