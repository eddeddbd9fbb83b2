"""Field specification files: parsing, validation, bundled fixtures.

A field file is JSON with keys `min_poly` (integer coefficients, constant
term first), and optionally `integral_basis`, `field_disc`, `class_number`,
`fundamental_units` (coordinate vectors over the power basis),
`torsion_order`, `ideal_class_reps`, `class_group`, and a `bedocchi` block
{M, epsilon} carrying externally computed refinement inputs.  Supplied units
are validated at load (|N| = 1 and log-independence), so wrong bundled data
fails loudly.  A real quadratic field without units falls back to the
continued-fraction (Pell) computation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import FieldSpecError
from .exactnf import NumberField
from .geometry import UnitSystem, fundamental_unit_real_quadratic, log_lattice


@dataclass
class LoadedField:
    label: str
    field: NumberField
    units: UnitSystem
    class_number: int
    bedocchi: dict | None = None
    class_group: dict | None = None
    ideal_class_reps: list | None = None
    c_mk_reference: int | None = None
    source: str = ""


def _parse_coords(vec) -> list[Fraction]:
    return [Fraction(str(x)) for x in vec]


def load_field_data(data: dict, source: str = "", prec: int = 128) -> LoadedField:
    try:
        min_poly = [int(c) for c in data["min_poly"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldSpecError(f"invalid or missing min_poly: {exc}") from exc
    integral_basis = data.get("integral_basis")
    if integral_basis is not None:
        integral_basis = [_parse_coords(row) for row in integral_basis]
    try:
        field = NumberField(
            min_poly,
            integral_basis=integral_basis,
            field_disc=data.get("field_disc"),
        )
    except Exception as exc:
        raise FieldSpecError(f"invalid field specification: {exc}") from exc
    r1, r2 = field.signature
    rank = r1 + r2 - 1
    raw_units = data.get("fundamental_units")
    if raw_units is None and rank == 1 and field.degree == 2 and r2 == 0:
        units = (fundamental_unit_real_quadratic(field),)
    elif raw_units is None:
        if rank > 0:
            raise FieldSpecError(
                f"field of unit rank {rank} needs fundamental_units in the file"
            )
        units = ()
    else:
        units = tuple(field.element(_parse_coords(vec)) for vec in raw_units)
    torsion = int(data.get("torsion_order", 2))
    unit_system = UnitSystem(units=units, torsion_order=torsion)
    try:
        log_lattice(field, unit_system, prec)  # validates |N|=1 + independence
    except Exception as exc:
        raise FieldSpecError(f"unit validation failed: {exc}") from exc
    bedocchi = data.get("bedocchi")
    if bedocchi is not None:
        bedocchi = {"M": int(bedocchi["M"]), "epsilon": Fraction(str(bedocchi["epsilon"]))}
    class_number = int(data.get("class_number", 1))
    if class_number < 1:
        raise FieldSpecError("class_number must be positive")
    return LoadedField(
        label=str(data.get("label", source or "field")),
        field=field,
        units=unit_system,
        class_number=class_number,
        bedocchi=bedocchi,
        class_group=data.get("class_group"),
        ideal_class_reps=data.get("ideal_class_reps"),
        c_mk_reference=data.get("c_mk_reference"),
        source=source,
    )


def load_field_file(path: str | Path, prec: int = 128) -> LoadedField:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FieldSpecError(f"cannot read field file {path}: {exc}") from exc
    return load_field_data(data, source=str(path), prec=prec)


def bundled_path(name: str) -> Path:
    """Path of a bundled field file, e.g. 'qsqrt14.json' or 'table1/row1.json'."""
    base = resources.files("padiccf") / "data"
    target = base / name
    with resources.as_file(target) as p:
        return Path(p)


def load_bundled(name: str, prec: int = 128) -> LoadedField:
    return load_field_file(bundled_path(name), prec=prec)


def bundled_table1_names() -> list[str]:
    return [f"table1/row{i}.json" for i in range(1, 8)]
