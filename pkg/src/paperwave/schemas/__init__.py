"""Committed JSON schemas for the HTTP API, with local $ref resolution."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

_DIR = Path(__file__).parent


def load_schema(name: str) -> dict:
    return json.loads((_DIR / f"{name}.schema.json").read_text("utf-8"))


def _registry() -> Registry:
    resources = []
    for path in _DIR.glob("*.schema.json"):
        schema = json.loads(path.read_text("utf-8"))
        resources.append((path.name, Resource.from_contents(schema)))
    return Registry().with_resources(resources)


def validate_payload(name: str, payload) -> None:
    """Raise jsonschema.ValidationError when payload breaks the named schema."""
    validator = jsonschema.Draft202012Validator(
        load_schema(name), registry=_registry()
    )
    validator.validate(payload)
