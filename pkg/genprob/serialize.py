"""
JSON documents read and written by genprob. Integers that can grow without
bound (orders) and rationals are written as decimal strings.

Every document has a JSON Schema in ``schema.json`` next to this module,
one entry of ``$defs`` per document: ``group``, ``element``, ``subgroup``,
``phi_value``, ``hsp_instance`` and ``<command>_payload`` for every CLI
subcommand.
"""
from __future__ import annotations

import json
from functools import lru_cache
from numbers import Integral
from pathlib import Path
from typing import Any, List, Union

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from .ahsp import HspInstance
from .base import AbelianGroup, Element, parse_group
from .errors import InvalidInputError
from .subgroup import Subgroup

SCHEMA_PATH = Path(__file__).with_name("schema.json")

SCHEMA: dict = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
"""The published schemas, keyed by document name under ``$defs``."""


@lru_cache(maxsize=None)
def validator(name: str) -> Draft202012Validator:
    """Validator of the document **name** of :data:`SCHEMA`.

    Raises:
        InvalidInputError: if there is no such document
    """
    if name not in SCHEMA["$defs"]:
        raise InvalidInputError(f"no schema for '{name}'")
    return Draft202012Validator({**SCHEMA, "$ref": f"#/$defs/{name}"})


def validate(name: str, data: Any) -> Any:
    """Checks **data** against the document schema **name**.

    Raises:
        InvalidInputError: on the first violation found
    """
    error = best_match(validator(name).iter_errors(data))
    if error is not None:
        where = "/".join(map(str, error.absolute_path)) or "document"
        raise InvalidInputError(f"{name}: {where}: {error.message}")
    return data


def group_to_json(group: AbelianGroup) -> dict:
    return {"divisors": list(group.moduli)}


def group_from_json(data: dict) -> AbelianGroup:
    """Reads ``{"divisors": [12, 2]}``."""
    validate("group", data)
    return parse_group(_as_int(d) for d in data["divisors"])


def element_to_json(element: Element) -> dict:
    return {"coords": list(element)}


def element_from_json(group: AbelianGroup, data: Union[dict, list]) -> Element:
    """Reads ``{"coords": [3, 0, 1]}`` or a bare coordinate list."""
    validate("element", data)
    coords = data["coords"] if isinstance(data, dict) else data
    return group.validate([_as_int(c) for c in coords])


def subgroup_to_json(subgroup: Subgroup) -> dict:
    return {
        "group": group_to_json(subgroup.ambient),
        "generators": [list(g) for g in subgroup.generators],
        "order": str(subgroup.order),
        "basis": [list(row) for row in subgroup.basis],
        "structure": subgroup.structure,
    }


def subgroup_from_json(data: dict) -> Subgroup:
    """Rebuilds a subgroup from the output of :func:`subgroup_to_json`."""
    validate("subgroup", data)
    group = group_from_json(data["group"])
    subgroup = Subgroup.from_generators(
        group, [element_from_json(group, g) for g in data["generators"]]
    )
    if str(subgroup.order) != data["order"]:
        raise InvalidInputError("order does not match the generators")
    return subgroup


def instance_to_json(instance: HspInstance) -> dict:
    return {
        "group": group_to_json(instance.group),
        "hidden_subgroup_generators": [
            list(g) for g in instance.hidden.generators
        ],
    }


def instance_from_json(data: dict) -> HspInstance:
    """Reads ``{"group": {...}, "hidden_subgroup_generators": [...]}``."""
    validate("hsp_instance", data)
    group = group_from_json(data["group"])
    return HspInstance.from_generators(
        group,
        [
            element_from_json(group, g)
            for g in data["hidden_subgroup_generators"]
        ],
    )


def load_instance(path: Union[str, Path]) -> HspInstance:
    """Reads an :class:`HspInstance <genprob.ahsp.HspInstance>` file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise InvalidInputError(f"cannot read instance file {path}: {e}") from e
    return instance_from_json(data)


def validate_payload(command: str, payload: dict) -> dict:
    """Checks a subcommand payload against its ``<command>_payload``
    schema.

    Raises:
        InvalidInputError: if the command is unknown or the payload does
            not match
    """
    validate(f"{command}_payload", payload)
    return payload


def _as_int(value: Any) -> int:
    # JSON Schema accepts 4.0 as an integer
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise InvalidInputError(f"{value!r} is not an integer")
    return int(value)


def dump(payload: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(payload, indent=2, sort_keys=True)


def rows_to_json(rows: List[dict]) -> List[dict]:
    """Makes table rows JSON safe (numpy scalars to Python numbers)."""
    return [
        {key: _plain(value) for key, value in row.items()} for row in rows
    ]


def _plain(value: Any) -> Any:
    return value.item() if isinstance(value, np.generic) else value
