"""
Built-in group families.

A family spec is a comma-separated list of items:
    S4            symmetric group of degree 4
    A5            alternating group of degree 5
    D12           dihedral group of order 12
    C30           cyclic group of order 30
    Q8, SL23      quaternion group, SL(2,3) on the nonzero vectors of F3^2
    S3xC3         direct product on disjoint supports
    S3..S5        range over one family letter
"""
import logging
import math
import re
from itertools import product
from typing import Dict, List, Optional, Tuple

from src.catalog.group_files import GroupFile
from src.core.errors import CatalogError
from src.core.permutations import Permutation
from src.utils.config import get_settings

logger = logging.getLogger(__name__)

DEFAULT_FAMILIES = "S3, S4, A4, D8, D12, Q8, C12, C30, S3xC3, SL23"

_FAMILY_RE = re.compile(r"^([SADC])(\d+)$")
_RANGE_RE = re.compile(r"^([SADC])(\d+)\.\.([SADC])(\d+)$")

_FIXED: Dict[str, Tuple[int, Tuple[str, ...], int]] = {
    "Q8": (8, ("(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"), 8),
}


def _cycle(points) -> str:
    return "(" + " ".join(map(str, points)) + ")"


def _symmetric(n: int) -> Tuple[int, Tuple[str, ...], int]:
    if n < 1:
        raise CatalogError("S0 is not a group in this catalog")
    gens = []
    if n >= 2:
        gens.append("(1 2)")
    if n >= 3:
        gens.append(_cycle(range(1, n + 1)))
    return n, tuple(gens), math.factorial(n)


def _alternating(n: int) -> Tuple[int, Tuple[str, ...], int]:
    if n < 1:
        raise CatalogError("A0 is not a group in this catalog")
    gens = tuple(_cycle((1, 2, k)) for k in range(3, n + 1))
    return n, gens, max(1, math.factorial(n) // 2)


def _dihedral(order: int) -> Tuple[int, Tuple[str, ...], int]:
    """Dihedral group of the given order acting on order/2 points."""
    if order < 4 or order % 2:
        raise CatalogError(f"dihedral groups need an even order >= 4, got D{order}")
    m = order // 2
    if m == 2:
        return 4, ("(1 2)", "(3 4)"), 4
    reflection = "".join(_cycle((i, m + 2 - i)) for i in range(2, m // 2 + 2) if i < m + 2 - i)
    return m, (_cycle(range(1, m + 1)), reflection), order


def _cyclic(n: int) -> Tuple[int, Tuple[str, ...], int]:
    if n < 1:
        raise CatalogError("C0 is not a group in this catalog")
    if n == 1:
        return 1, (), 1
    return n, (_cycle(range(1, n + 1)),), n


def _sl23() -> Tuple[int, Tuple[str, ...], int]:
    """SL(2,3) acting on the 8 nonzero row vectors of F3^2 by v -> vM."""
    vectors = [v for v in product(range(3), repeat=2) if v != (0, 0)]
    label = {v: i + 1 for i, v in enumerate(vectors)}

    def as_permutation(m) -> str:
        images = []
        for (a, b) in vectors:
            image = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3)
            images.append(label[image])
        return str(Permutation.from_images(images))

    transvections = (((1, 1), (0, 1)), ((1, 0), (1, 1)))
    return 8, tuple(as_permutation(m) for m in transvections), 24


_BUILDERS = {"S": _symmetric, "A": _alternating, "D": _dihedral, "C": _cyclic}


def _single(name: str) -> Tuple[int, Tuple[str, ...], int]:
    if name in _FIXED:
        return _FIXED[name]
    if name == "SL23":
        return _sl23()
    match = _FAMILY_RE.match(name)
    if not match:
        raise CatalogError(f"unknown group family {name!r}")
    return _BUILDERS[match.group(1)](int(match.group(2)))


def _direct_product(name: str) -> Tuple[int, Tuple[str, ...], int]:
    degree, gens, order = 0, [], 1
    for factor in name.split("x"):
        d, factor_gens, factor_order = _single(factor)
        for text in factor_gens:
            gens.append(str(Permutation.parse(text, d).extend(degree + d, offset=degree)))
        degree += d
        order *= factor_order
    # earlier generators were built for a smaller degree; re-embed them at the final one
    gens = [str(Permutation.parse(text, degree)) for text in gens]
    return degree, tuple(gens), order


def _expand(item: str) -> List[str]:
    match = _RANGE_RE.match(item)
    if not match:
        return [item]
    first, lo, last, hi = match.group(1), int(match.group(2)), match.group(3), int(match.group(4))
    if first != last or lo > hi:
        raise CatalogError(f"bad family range {item!r}")
    step = 2 if first == "D" else 1
    return [f"{first}{n}" for n in range(lo, hi + 1, step)]


def builtin_catalog(spec: str = DEFAULT_FAMILIES, order_cap: Optional[int] = None) -> List[GroupFile]:
    if order_cap is None:
        order_cap = get_settings().order_cap
    items = [item for item in "".join(spec.split()).split(",") if item]
    catalog: List[GroupFile] = []
    seen = set()
    for item in items:
        for name in _expand(item):
            degree, gens, order = _direct_product(name) if "x" in name else _single(name)
            if order > order_cap:
                raise CatalogError(f"{name} has order {order}, above the cap {order_cap}")
            if name in seen:
                continue
            seen.add(name)
            catalog.append(GroupFile(name=name, degree=degree, gens=gens))
    logger.debug(f"Built-in catalog {spec!r}: {len(catalog)} groups")
    return catalog
