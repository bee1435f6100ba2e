"""Reference matrices shipped with the package, in the JSON matrix format."""
from importlib import resources
from pathlib import Path

from ..serialize import family_from_dict, load_json, matrix_from_dict


def fixture_path(name: str) -> Path:
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files(__name__).joinpath(name)))


def available() -> list:
    return sorted(p.stem for p in fixture_path("x").parent.glob("*.json"))


def load_matrix(name: str, check: bool = True):
    return matrix_from_dict(load_json(fixture_path(name)), check=check)


def load_family(name: str):
    return family_from_dict(load_json(fixture_path(name)))
