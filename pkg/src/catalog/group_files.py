"""
Plain-text group files.

    name: S4
    degree: 4
    gens: (1 2), (1 2 3 4)

Blank lines and lines starting with '#' are ignored.
"""
import logging
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.core.errors import CatalogError, PermutationError
from src.core.perm_groups import Group
from src.core.permutations import Permutation
from src.utils.config import get_settings

logger = logging.getLogger(__name__)

GROUP_FILE_SUFFIX = ".grp"
_FIELDS = ("name", "degree", "gens")


@dataclass(frozen=True)
class GroupFile:
    name: str
    degree: int
    gens: Tuple[str, ...] = ()

    def permutations(self) -> List[Permutation]:
        return [Permutation.parse(text, self.degree) for text in self.gens]

    def to_group(self, order_cap: Optional[int] = None) -> Group:
        return Group(self.permutations(), self.degree, name=self.name, order_cap=order_cap)


def parse_group_file(text: str, max_degree: Optional[int] = None) -> GroupFile:
    if max_degree is None:
        max_degree = get_settings().max_degree
    fields = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _FIELDS:
            raise CatalogError(f"line {number}: expected 'name:', 'degree:' or 'gens:', got {raw!r}")
        if key in fields:
            raise CatalogError(f"line {number}: duplicate field {key!r}")
        fields[key] = value.strip()

    for key in _FIELDS:
        if key not in fields:
            raise CatalogError(f"missing field {key!r}")
    name = fields["name"]
    if not name or any(ch.isspace() for ch in name):
        raise CatalogError(f"group name must be a single non-empty word, got {name!r}")
    try:
        degree = int(fields["degree"])
    except ValueError:
        raise CatalogError(f"degree must be an integer, got {fields['degree']!r}")
    if degree < 1:
        raise CatalogError(f"degree must be positive, got {degree}")
    if degree > max_degree:
        raise CatalogError(f"degree {degree} exceeds the maximum {max_degree}")

    gens = []
    for perm in parse_generators(fields["gens"], degree, label=name):
        if not perm.is_identity and str(perm) not in gens:
            gens.append(str(perm))
    return GroupFile(name=name, degree=degree, gens=tuple(gens))


def parse_generators(text: str, degree: int, label: str = "generators") -> List[Permutation]:
    """Comma-separated cycle-notation permutations, e.g. "(1 2), (1 2 3 4)"."""
    perms = []
    for chunk in (c.strip() for c in text.split(",")):
        if not chunk:
            continue
        try:
            perms.append(Permutation.parse(chunk, degree))
        except PermutationError as e:
            raise CatalogError(f"{label}: malformed generator {chunk!r}: {e}")
    return perms


def emit_group_file(group_file: GroupFile) -> str:
    return (f"name: {group_file.name}\n"
            f"degree: {group_file.degree}\n"
            f"gens: {', '.join(group_file.gens)}\n")


def read_group_file(path: str, max_degree: Optional[int] = None) -> GroupFile:
    try:
        with open(path, "r", encoding="ascii") as f:
            text = f.read()
    except (UnicodeDecodeError, OSError) as e:
        raise CatalogError(f"{path}: unreadable group file: {e}")
    return parse_group_file(text, max_degree=max_degree)


def catalog_sources(path: str) -> List[Tuple[str, str]]:
    """
    (source label, text) pairs for a file or every *.grp file of a directory,
    in sorted file-name order. Parsing is left to the caller.
    """
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(GROUP_FILE_SUFFIX))
        paths = [os.path.join(path, n) for n in names]
    elif os.path.isfile(path):
        paths = [path]
    else:
        raise CatalogError(f"no such file or directory: {path}")
    sources = []
    for p in paths:
        try:
            with open(p, "r", encoding="ascii") as f:
                sources.append((p, f.read()))
        except (UnicodeDecodeError, OSError) as e:
            raise CatalogError(f"{p}: unreadable group file: {e}")
    return sources


def write_catalog(group_files: List[GroupFile], out_dir: str) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for group_file in group_files:
        path = os.path.join(out_dir, f"{group_file.name}{GROUP_FILE_SUFFIX}")
        with open(path, "w", encoding="ascii") as f:
            f.write(emit_group_file(group_file))
        written.append(path)
        logger.info(f"Wrote {path}")
    return written
