"""Juddian-point records and deterministic CSV/JSON serialization.

Numbers are rendered with 17 significant digits so that re-parsing the
output reproduces every float bit-exactly; field order is fixed so that
identical invocations produce byte-identical output.
"""
from __future__ import annotations

from typing import Any

from .errors import DegenerateRoots
from .models import ModelSpec
from .solver import (
    BAE_RESIDUAL_TOL,
    CONSTRAINT_RESIDUAL_TOL,
    ODE_RESIDUAL_TOL,
    Branch,
    QesSolution,
    bae_residual,
    bae_scale,
    constraint_residual,
    ode_residual,
)

SWEEP_COLUMNS = (
    "model", "sector", "degree", "omega", "g", "delta", "delta_squared",
    "energy", "branch", "ode_residual", "bae_residual",
    "constraint_residual", "oracle_gap", "oracle_drift",
)

SPECTRUM_COLUMNS = ("g", "level_index", "energy")

WAVEFUNCTION_COLUMNS = ("z", "psi_plus_re", "psi_plus_im",
                        "psi_minus_re", "psi_minus_im")


def fmt(value: Any) -> str:
    """Fixed textual form: 17 significant digits for floats."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def sector_label(spec: ModelSpec) -> str:
    return "" if spec.sector is None else str(spec.sector)


def build_record(solution: QesSolution, oracle: dict | None = None) -> dict:
    """JuddianPointRecord for one solution, with residuals evaluated.

    ``reject_reason`` is set when the branch is the degenerate-atom case or
    when any residual exceeds its gate; records with a reject reason are
    emitted only on request.
    """
    spec = solution.spec
    ode = ode_residual(solution)
    try:
        bae = bae_residual(solution)
        bae_ok = bae <= BAE_RESIDUAL_TOL * bae_scale(solution)
    except DegenerateRoots:
        # Root equations singular at coincident roots; the polynomial/ODE
        # picture is not, so the branch is judged by the other residuals.
        bae = None
        bae_ok = True
    constraint = constraint_residual(solution)

    reject = None
    if solution.branch is Branch.DEGENERATE_ATOM:
        reject = "degenerate-atom"
    elif (ode > ODE_RESIDUAL_TOL or not bae_ok
          or constraint > CONSTRAINT_RESIDUAL_TOL * max(1.0, solution.delta_squared)):
        reject = "residual"

    record = {
        "model": spec.kind.value,
        "sector": sector_label(spec),
        "degree": solution.degree,
        "omega": spec.omega,
        "g": spec.g,
        "delta": solution.delta,
        "delta_squared": solution.delta_squared,
        "energy": solution.energy,
        "roots": [[float(z.real), float(z.imag)] for z in solution.roots],
        "residuals": {"ode": ode, "bae": bae, "constraint": constraint},
        "branch": solution.branch.value,
        "reject_reason": reject,
    }
    if oracle is not None:
        record["oracle"] = oracle
    return record


def record_csv_row(record: dict, include_rejected: bool) -> list[str]:
    oracle = record.get("oracle") or {}
    row = [
        record["model"],
        record["sector"],
        fmt(record["degree"]),
        fmt(record["omega"]),
        fmt(record["g"]),
        fmt(record["delta"]),
        fmt(record["delta_squared"]),
        fmt(record["energy"]),
        record["branch"],
        fmt(record["residuals"]["ode"]),
        fmt(record["residuals"]["bae"]),
        fmt(record["residuals"]["constraint"]),
        fmt(oracle.get("gap")),
        fmt(oracle.get("drift")),
    ]
    if include_rejected:
        row.append(record["reject_reason"] or "")
    return row


def json_dumps(obj: Any) -> str:
    """Serialize with deterministic float formatting (17 sig. digits)."""
    parts: list[str] = []
    _write_json(obj, parts)
    return "".join(parts)


def _write_json(obj: Any, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, float):
        parts.append(format(obj, ".17g"))
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, str):
        parts.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                parts.append(",")
            _write_json(str(key), parts)
            parts.append(":")
            _write_json(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, value in enumerate(obj):
            if i:
                parts.append(",")
            _write_json(value, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
