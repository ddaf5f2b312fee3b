"""Load a registry: a directory of standard documents plus a manifest.

Layout::

    <dir>/registry.toml      # simple key = "value" lines; names the
                             # general standard id
    <dir>/*.md               # one document per standard
    <dir>/trees/*.tree       # custom follow-up tree definitions

The bundled fixture corpus ships inside the package under
``reviewflow/data/standards`` and is what the CLI uses by default.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from ..errors import ConfigError
from ..trees import FollowUpTree, load_tree
from .model import Diagnostic, Registry, Standard, validate_registry
from .parser import parse_standard

_MANIFEST_NAME = "registry.toml"
_MANIFEST_LINE = re.compile(r"^(?P<key>[A-Za-z0-9_.-]+)\s*=\s*(?P<value>.*)$")


def parse_manifest(text: str, source: str = _MANIFEST_NAME) -> dict[str, str]:
    """Parse ``key = "value"`` lines; quotes are optional, # starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _MANIFEST_LINE.match(line)
        if not match:
            raise ConfigError(f"{source}:{lineno}: expected key = \"value\", got {raw!r}")
        value = match.group("value").strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        out[match.group("key")] = value
    return out


def load_registry(directory: str | Path) -> Registry:
    directory = Path(directory)
    manifest_path = directory / _MANIFEST_NAME
    if not manifest_path.is_file():
        raise ConfigError(f"no {_MANIFEST_NAME} in {directory}")
    manifest = parse_manifest(manifest_path.read_text(encoding="utf-8"), str(manifest_path))
    general_id = manifest.get("general", "")
    if not general_id:
        raise ConfigError(f"{manifest_path}: manifest must name the general standard, general = \"<id>\"")

    standards: dict[str, Standard] = {}
    for md in sorted(directory.glob("*.md")):
        standard = parse_standard(md.read_text(encoding="utf-8"))
        if standard.id in standards:
            raise ConfigError(f"{md}: duplicate standard id {standard.id!r}")
        standards[standard.id] = standard

    trees: dict[str, FollowUpTree] = {}
    trees_dir = directory / "trees"
    if trees_dir.is_dir():
        for tree_file in sorted(trees_dir.glob("*.tree")):
            tree = load_tree(tree_file)
            if tree.tree_id in trees:
                raise ConfigError(f"{tree_file}: duplicate tree id {tree.tree_id!r}")
            trees[tree.tree_id] = tree

    return Registry(standards=standards, general_id=general_id, trees=trees)


def validate_directory(directory: str | Path) -> list[Diagnostic]:
    """Load and fully validate a standards directory."""
    registry = load_registry(directory)
    return validate_registry(registry)


def builtin_standards_dir() -> Path:
    """Path of the fixture corpus bundled with the package."""
    return Path(str(resources.files("reviewflow").joinpath("data", "standards")))


def load_builtin_registry() -> Registry:
    return load_registry(builtin_standards_dir())
