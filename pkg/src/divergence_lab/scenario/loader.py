"""Scenario loading, canonical dumping and the bundled scenario catalogue."""

import hashlib
import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from divergence_lab.errors import ScenarioValidationError
from divergence_lab.scenario.schema import Scenario, scenario_warnings

logger = logging.getLogger(__name__)

_BUNDLED_PACKAGE = "divergence_lab.scenario"
_BUNDLED_DIR = "data"


def _format_loc(loc: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def _from_validation_error(exc: ValidationError) -> ScenarioValidationError:
    """Translate the first pydantic error into a path-carrying error."""
    first = exc.errors()[0]
    original = (first.get("ctx") or {}).get("error")
    if isinstance(original, ScenarioValidationError):
        return original
    return ScenarioValidationError(_format_loc(tuple(first["loc"])), first["msg"])


def parse_scenario(data: Any) -> Scenario:
    """Validate an already-decoded JSON document.

    Raises:
        ScenarioValidationError: Naming the offending key path.
    """
    if not isinstance(data, dict):
        raise ScenarioValidationError("<root>", "scenario must be a JSON object")
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as exc:
        raise _from_validation_error(exc) from exc

    for warning in scenario_warnings(scenario):
        logger.warning("scenario %s: %s", scenario.name, warning)
    return scenario


def parse_scenario_text(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioValidationError(
            "<root>", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_scenario(data)


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario file.

    Raises:
        OSError: The file cannot be read.
        ScenarioValidationError: The content is invalid.
    """
    path = Path(path)
    scenario = parse_scenario_text(path.read_text(encoding="utf-8"))
    logger.info("loaded scenario %s from %s", scenario.name, path)
    return scenario


# ============================================================
# Bundled scenarios
# ============================================================


def list_bundled() -> list[str]:
    """Names of the scenarios shipped with the package."""
    data_dir = resources.files(_BUNDLED_PACKAGE).joinpath(_BUNDLED_DIR)
    return sorted(
        entry.name.removesuffix(".json")
        for entry in data_dir.iterdir()
        if entry.name.endswith(".json")
    )


def load_bundled(name: str) -> Scenario:
    if name not in list_bundled():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    resource = resources.files(_BUNDLED_PACKAGE).joinpath(_BUNDLED_DIR, f"{name}.json")
    return parse_scenario_text(resource.read_text(encoding="utf-8"))


def resolve_scenario(ref: str | Path) -> Scenario:
    """Load ``ref`` as a file path if it exists, else as a bundled scenario name."""
    path = Path(ref)
    if path.is_file():
        return load_scenario(path)
    if isinstance(ref, str) and ref in list_bundled():
        return load_bundled(ref)
    raise FileNotFoundError(f"scenario not found: {ref}")


# ============================================================
# Canonical form
# ============================================================


def dump_scenario(scenario: Scenario) -> str:
    """Canonical JSON text: two-space indent, declaration order, LF newline.

    Floats keep their shortest round-tripping repr, so loading the dump
    yields an equal scenario.
    """
    return json.dumps(scenario.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


def scenario_hash(scenario: Scenario) -> str:
    """SHA-256 hex digest of the canonical dump."""
    return hashlib.sha256(dump_scenario(scenario).encode("utf-8")).hexdigest()
