"""
σᵢ-sylowizers and the permutability predicates.

A σᵢ-sylowizer of a σᵢ-subgroup R is a subgroup S maximal among those that
contain R as a Hall σᵢ-subgroup.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.core.errors import GroupError, SigmaError
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Group, SubgroupRef, product_is_permuting
from src.core.permutations import Permutation
from src.core.sigma import (HallSet, SigmaProfile, complete_hall_sets, is_sigma_i_group,
                            is_sigma_i_number, prime_support)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SylowizerQuery:
    lattice: SubgroupLattice
    R: SubgroupRef
    block: object

    def __post_init__(self):
        if self.R.ambient is not self.lattice.ambient:
            raise GroupError("R is not a subgroup of the lattice's group")
        if not is_sigma_i_group(self.R, self.block):
            raise SigmaError(f"{self.R.describe()} is not a σᵢ-subgroup for block {self.block}")

    @property
    def ambient(self) -> Group:
        return self.lattice.ambient


def is_hall_in(S: SubgroupRef, R: SubgroupRef, block) -> bool:
    """R is a Hall σᵢ-subgroup of S."""
    if not R <= S:
        raise GroupError(f"{R.describe()} is not contained in {S.describe()}")
    return is_sigma_i_number(R.order, block) and not any(p in block for p in prime_support(S.order // R.order))


def sylowizers(q: SylowizerQuery, within: Optional[SubgroupRef] = None) -> List[SubgroupRef]:
    """
    All σᵢ-sylowizers of q.R, in the whole group or inside `within`.
    Never empty: R itself contains R as a Hall σᵢ-subgroup.
    """
    L = q.lattice
    pool = L.subgroups_within(within) if within is not None else L.overgroups(q.R)
    candidates = [S for S in pool if q.R.indices <= S.indices and is_hall_in(S, q.R, q.block)]
    return [S for S in candidates
            if not any(S.order < T.order and S.indices < T.indices for T in candidates)]


def _right_coset_representatives(G: Group, N: SubgroupRef) -> List[int]:
    assigned = np.zeros(G.order, dtype=bool)
    reps = []
    for x in range(G.order):
        if not assigned[x]:
            assigned[G.table[N.index_array, x]] = True
            reps.append(x)
    return reps


def is_c_permutable(G: Group, H: SubgroupRef, T: SubgroupRef,
                    lattice: Optional[SubgroupLattice] = None) -> Tuple[bool, Optional[Permutation]]:
    """
    Is there x in G with H T^x = T^x H? T^x only depends on the right coset
    N_G(T)x, so one representative per coset is tried, identity first.
    """
    if H.ambient is not G or T.ambient is not G:
        raise GroupError("subgroups belong to different ambient groups")
    if lattice is not None:
        N = lattice.normalizer(lattice.canonical(T))
    else:
        from src.core.lattice import normalizer_indices
        N = SubgroupRef(G, normalizer_indices(T))
    for x in _right_coset_representatives(G, N):
        if product_is_permuting(H, T.conjugate(x)):
            return True, G.element(x)
    return False, None


def permutes_with_all_conjugates(A: SubgroupRef, H: SubgroupRef, lattice: SubgroupLattice) -> bool:
    return all(product_is_permuting(A, C) for C in lattice.conjugacy_class(lattice.canonical(H)))


def is_sigma_permutable(G: Group, A: SubgroupRef, profile: SigmaProfile,
                        lattice: SubgroupLattice) -> Tuple[bool, Optional[HallSet]]:
    """
    A permutes with every conjugate of every member of SOME complete Hall
    σ-set; the first such set (in lattice order) is returned as the witness.
    """
    if A.ambient is not G:
        raise GroupError("subgroup is not inside this group")
    hall_sets = complete_hall_sets(lattice, profile)
    if not hall_sets:
        raise SigmaError(f"{G.name} has no complete Hall σ-set for σ = {profile.partition.text!r}")
    verdicts = {}
    for hall_set in hall_sets:
        ok = True
        for H in hall_set.subgroups:
            if H.indices not in verdicts:
                verdicts[H.indices] = permutes_with_all_conjugates(A, H, lattice)
            if not verdicts[H.indices]:
                ok = False
                break
        if ok:
            return True, hall_set
    return False, None
