"""
Per-group cache shared by the statement checkers.

One CheckContext serves every σ-partition and statement run against the same
group, so lattices, quotients and sylowizer lists are computed once.
"""
import logging
from typing import Dict, List, Optional, Tuple

from src.core.classify import ChiefSeriesCertificate, is_supersoluble
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Epimorphism, Group, SubgroupRef, quotient_group
from src.core.permutations import Permutation
from src.core.sigma import SigmaBlock, SigmaProfile, is_sigma_i_group, o_upper_sigma
from src.core.sylowizer import SylowizerQuery, is_c_permutable, is_sigma_permutable, sylowizers
from src.utils.config import Settings, get_settings

logger = logging.getLogger(__name__)


class CheckContext:
    def __init__(self, group: Group, lattice: Optional[SubgroupLattice] = None,
                 settings: Optional[Settings] = None):
        self.group = group
        self.settings = settings or get_settings()
        self.lattice = lattice if lattice is not None else SubgroupLattice.build(group)
        self._sigma_subgroups: Dict[SigmaBlock, List[SubgroupRef]] = {}
        self._sylowizers: Dict[tuple, List[SubgroupRef]] = {}
        self._c_permutable: Dict[tuple, Tuple[bool, Optional[Permutation]]] = {}
        self._sigma_permutable: Dict[tuple, tuple] = {}
        self._o_upper: Dict[SigmaBlock, SubgroupRef] = {}
        self._quotients: Dict[frozenset, Tuple[Group, Epimorphism, SubgroupLattice]] = {}
        self._supersoluble: Optional[Tuple[bool, Optional[ChiefSeriesCertificate]]] = None

    @property
    def name(self) -> str:
        return self.group.name

    def sigma_subgroups(self, block: SigmaBlock) -> List[SubgroupRef]:
        if block not in self._sigma_subgroups:
            self._sigma_subgroups[block] = [H for H in self.lattice if is_sigma_i_group(H, block)]
        return self._sigma_subgroups[block]

    def sylowizers(self, R: SubgroupRef, block: SigmaBlock,
                   within: Optional[SubgroupRef] = None) -> List[SubgroupRef]:
        key = (R.indices, block, within.indices if within is not None else None)
        if key not in self._sylowizers:
            self._sylowizers[key] = sylowizers(SylowizerQuery(self.lattice, R, block), within=within)
        return self._sylowizers[key]

    def c_permutable(self, H: SubgroupRef, T: SubgroupRef) -> Tuple[bool, Optional[Permutation]]:
        key = (H.indices, T.indices)
        if key not in self._c_permutable:
            self._c_permutable[key] = is_c_permutable(self.group, H, T, lattice=self.lattice)
        return self._c_permutable[key]

    def sigma_permutable(self, A: SubgroupRef, profile: SigmaProfile):
        key = (A.indices, profile.partition.text)
        if key not in self._sigma_permutable:
            self._sigma_permutable[key] = is_sigma_permutable(self.group, A, profile, self.lattice)
        return self._sigma_permutable[key]

    def o_upper(self, block: SigmaBlock) -> SubgroupRef:
        if block not in self._o_upper:
            self._o_upper[block] = o_upper_sigma(self.group, self.lattice, block)
        return self._o_upper[block]

    def quotient(self, N: SubgroupRef) -> Tuple[Group, Epimorphism, SubgroupLattice]:
        """G/N, the natural map and the lattice of G/N."""
        if N.indices not in self._quotients:
            Q, epi = quotient_group(self.group, N)
            self._quotients[N.indices] = (Q, epi, SubgroupLattice.build(Q))
        return self._quotients[N.indices]

    def supersoluble(self) -> Tuple[bool, Optional[ChiefSeriesCertificate]]:
        if self._supersoluble is None:
            self._supersoluble = is_supersoluble(self.group, self.lattice)
        return self._supersoluble

    def quotient_supersoluble(self, N: SubgroupRef) -> bool:
        Q, _, QL = self.quotient(N)
        return is_supersoluble(Q, QL)[0]

    def subgroup_as_group(self, K: SubgroupRef) -> Tuple[Group, SubgroupLattice]:
        """K as a group in its own right, with its own lattice."""
        group = Group(K.generators, self.group.degree, name=f"{self.name}.sub{K.order}",
                      order_cap=self.group.order_cap)
        return group, SubgroupLattice.build(group)
