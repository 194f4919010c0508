"""
σ-partitions of the primes and the σ-theoretic predicates built on them.

A partition is a list of explicit, pairwise disjoint prime blocks plus one
implicit remainder block holding every other prime. Only the primes dividing
|G| ever matter, so the remainder is never materialized.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import FrozenSet, List, Optional, Tuple

from sympy import isprime, primefactors

from src.core.errors import SigmaError
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Group, SubgroupRef

logger = logging.getLogger(__name__)

_BLOCK_RE = re.compile(r"^\d+(,\d+)*$")


@lru_cache(maxsize=None)
def prime_support(n: int) -> FrozenSet[int]:
    """π(n)."""
    if n < 1:
        raise SigmaError(f"expected a positive integer, got {n}")
    return frozenset(primefactors(n))


@dataclass(frozen=True)
class SigmaBlock:
    """One block σᵢ. The remainder block is stored as the complement of `excluded`."""
    primes: FrozenSet[int] = frozenset()
    remainder: bool = False
    excluded: FrozenSet[int] = frozenset()

    def __contains__(self, p: int) -> bool:
        return p not in self.excluded if self.remainder else p in self.primes

    @property
    def label(self) -> str:
        if self.remainder:
            return "rest" if not self.excluded else "rest(not " + ",".join(map(str, sorted(self.excluded))) + ")"
        return ",".join(map(str, sorted(self.primes)))

    def __str__(self) -> str:
        return "{" + self.label + "}"


def is_sigma_i_number(n: int, block) -> bool:
    """Every prime divisor of n lies in `block` (so 1 always qualifies)."""
    return all(p in block for p in prime_support(n))


def is_sigma_i_group(H: SubgroupRef, block) -> bool:
    return is_sigma_i_number(H.order, block)


def is_hall_order(order: int, whole: int, block) -> bool:
    """π(order) ⊆ block and π(whole/order) ∩ block = ∅."""
    return is_sigma_i_number(order, block) and not any(p in block for p in prime_support(whole // order))


@dataclass(frozen=True)
class SigmaPartition:
    blocks: Tuple[FrozenSet[int], ...] = ()

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            if not block:
                raise SigmaError("empty block in σ-partition")
            for p in block:
                if not isprime(p):
                    raise SigmaError(f"{p} is not a prime")
                if p in seen:
                    raise SigmaError(f"prime {p} appears in more than one block")
                seen.add(p)

    @classmethod
    def parse(cls, text: str) -> "SigmaPartition":
        """
        Parse "2|3|5,7": blocks separated by '|', primes by ','. Whitespace is
        ignored; the empty string is the partition with no explicit blocks.
        """
        compact = "".join(text.split())
        if not compact:
            return cls(())
        blocks = []
        for chunk in compact.split("|"):
            if not _BLOCK_RE.match(chunk) or not chunk.isascii():
                raise SigmaError(f"malformed block {chunk!r} in {text!r}")
            primes = [int(token) for token in chunk.split(",")]
            if len(set(primes)) != len(primes):
                raise SigmaError(f"prime repeated inside block {chunk!r}")
            blocks.append(frozenset(primes))
        return cls(tuple(blocks))

    @property
    def text(self) -> str:
        return "|".join(",".join(map(str, sorted(b))) for b in self.blocks)

    def __str__(self) -> str:
        return self.text

    @property
    def listed_primes(self) -> FrozenSet[int]:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def block(self, i: int) -> SigmaBlock:
        """1-based explicit block; 0 is the remainder."""
        if i == 0:
            return self.remainder
        if not 1 <= i <= len(self.blocks):
            raise SigmaError(f"block index {i} outside 0..{len(self.blocks)}")
        return SigmaBlock(primes=self.blocks[i - 1])

    @property
    def remainder(self) -> SigmaBlock:
        return SigmaBlock(remainder=True, excluded=self.listed_primes)

    def all_blocks(self) -> List[SigmaBlock]:
        return [SigmaBlock(primes=b) for b in self.blocks] + [self.remainder]

    def block_of(self, p: int) -> SigmaBlock:
        for block in self.all_blocks():
            if p in block:
                return block
        raise SigmaError(f"{p} is not covered")  # unreachable: the remainder takes everything

    def profile(self, G: Group) -> "SigmaProfile":
        return SigmaProfile.build(G, self)


@dataclass(frozen=True)
class SigmaProfile:
    """σ(G): the blocks meeting π(|G|), each paired with its primes dividing |G|."""
    group: Group
    partition: SigmaPartition
    active: Tuple[Tuple[SigmaBlock, FrozenSet[int]], ...]

    @classmethod
    def build(cls, G: Group, partition: SigmaPartition) -> "SigmaProfile":
        primes = prime_support(G.order)
        active = []
        for block in partition.all_blocks():
            inside = frozenset(p for p in primes if p in block)
            if inside:
                active.append((block, inside))
        return cls(G, partition, tuple(active))

    @property
    def blocks(self) -> List[SigmaBlock]:
        return [block for block, _ in self.active]

    def primes_of(self, block: SigmaBlock) -> FrozenSet[int]:
        for b, primes in self.active:
            if b == block:
                return primes
        return frozenset()

    def active_for(self, order: int) -> List[SigmaBlock]:
        """σ(X) for a subgroup of the given order."""
        primes = prime_support(order)
        return [b for b, _ in self.active if any(p in b for p in primes)]


@dataclass(frozen=True)
class HallSet:
    """One Hall σᵢ-subgroup per active block (a complete Hall σ-set)."""
    members: Tuple[Tuple[SigmaBlock, SubgroupRef], ...]

    def member(self, block: SigmaBlock) -> SubgroupRef:
        for b, H in self.members:
            if b == block:
                return H
        raise SigmaError(f"no member for block {block}")

    @property
    def subgroups(self) -> List[SubgroupRef]:
        return [H for _, H in self.members]


def hall_subgroups(L: SubgroupLattice, block) -> List[SubgroupRef]:
    whole = L.ambient.order
    return [H for H in L if is_hall_order(H.order, whole, block)]


def complete_hall_sets(L: SubgroupLattice, profile: SigmaProfile) -> List[HallSet]:
    per_block = [hall_subgroups(L, block) for block in profile.blocks]
    return [HallSet(tuple(zip(profile.blocks, choice))) for choice in product(*per_block)]


def is_sigma_full(L: SubgroupLattice, profile: SigmaProfile) -> bool:
    """A Hall σᵢ-subgroup exists for every σᵢ in σ(G)."""
    return all(hall_subgroups(L, block) for block in profile.blocks)


def sylow_type_failure(L: SubgroupLattice, profile: SigmaProfile) -> Optional[dict]:
    """
    First reason G is not σ-full of Sylow type, or None. For each active block
    Hall σᵢ-subgroups must exist, be pairwise conjugate, and contain every σᵢ-subgroup.
    """
    for block in profile.blocks:
        halls = hall_subgroups(L, block)
        if not halls:
            return {"block": block.label, "reason": "no Hall subgroup"}
        conjugates = L.conjugacy_class(halls[0])
        if len(conjugates) != len(halls):
            return {"block": block.label, "reason": "Hall subgroups not conjugate", "hall": halls[0].describe()}
        for U in L:
            if is_sigma_i_group(U, block) and not any(U.indices <= H.indices for H in halls):
                return {"block": block.label, "reason": "σᵢ-subgroup outside every Hall subgroup",
                        "subgroup": U.describe()}
    return None


def is_sigma_full_of_sylow_type(L: SubgroupLattice, profile: SigmaProfile) -> bool:
    return sylow_type_failure(L, profile) is None


def o_upper_sigma(G: Group, L: SubgroupLattice, block) -> SubgroupRef:
    """O^σᵢ(G): normal closure of every element whose order has no prime in block."""
    seeds = [i for i, order in enumerate(G.element_orders.tolist())
             if not any(p in block for p in prime_support(order))]
    return L.find(G.normal_closure_indices(seeds, G.generator_indices))


def o_upper_sigma_by_intersection(L: SubgroupLattice, block) -> SubgroupRef:
    """Same subgroup, as the intersection of all normal N with G/N a σᵢ-group."""
    whole = L.ambient.order
    candidates = [N.indices for N in L.normal_subgroups() if is_sigma_i_number(whole // N.order, block)]
    return L.find(frozenset.intersection(*candidates))
