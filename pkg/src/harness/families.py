from typing import Iterable, List

from sympy.utilities.iterables import multiset_partitions

from src.core.errors import SigmaError
from src.core.sigma import SigmaPartition


def sigma_family(primes: Iterable[int], max_blocks: int) -> List[SigmaPartition]:
    """
    Every partition of `primes` into at most `max_blocks` explicit blocks
    (nothing left for the remainder), finest first, then by text.
    """
    if max_blocks < 1:
        raise SigmaError(f"max_blocks must be >= 1, got {max_blocks}")
    ordered = sorted(set(primes))
    if not ordered:
        return [SigmaPartition(())]
    family = []
    for parts in multiset_partitions(ordered):
        if len(parts) <= max_blocks:
            family.append(SigmaPartition(tuple(frozenset(part) for part in parts)))
    family.sort(key=lambda sigma: (-len(sigma.blocks), sigma.text))
    return family
