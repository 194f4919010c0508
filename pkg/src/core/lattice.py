"""
Subgroup lattices of materialized groups, built by cyclic extension.
"""
import logging
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List

import networkx as nx
import numpy as np

from src.core.errors import GroupError
from src.core.perm_groups import Group, SubgroupRef

logger = logging.getLogger(__name__)


def normalizer_indices(H: SubgroupRef) -> FrozenSet[int]:
    """{g in ambient : H^g == H}, by an elementwise scan."""
    G = H.ambient
    everything = np.arange(G.order, dtype=np.int64)
    conj = G.table[G.table[G.inverses[everything][:, None], H.index_array[None, :]], everything[:, None]]
    inside = np.zeros(G.order, dtype=bool)
    inside[H.index_array] = True
    return frozenset(np.flatnonzero(inside[conj].all(axis=1)).tolist())


class SubgroupLattice:
    """
    Every subgroup of `ambient`, ordered by (order, sorted element indices).

    `containment` has an edge i -> j whenever subgroups[i] < subgroups[j];
    `hasse` is its transitive reduction (the covering relation).
    """

    def __init__(self, ambient: Group, subgroups: List[SubgroupRef]):
        self.ambient = ambient
        self.subgroups: List[SubgroupRef] = sorted(subgroups, key=lambda H: H.sort_key)
        self._position: Dict[FrozenSet[int], int] = {H.indices: i for i, H in enumerate(self.subgroups)}
        self._conjugacy: Dict[int, List[SubgroupRef]] = {}
        self._normalizers: Dict[int, SubgroupRef] = {}

    @classmethod
    def build(cls, G: Group) -> "SubgroupLattice":
        """
        Seed with all cyclic subgroups, then close {<A, x>} until nothing new
        appears.
        """
        G._require_materialized()
        cyclic: Dict[FrozenSet[int], int] = {}
        for x in range(G.order):
            c = G.closure_indices([x])
            if c not in cyclic:
                cyclic[c] = x
        found: Dict[FrozenSet[int], SubgroupRef] = {}
        for c, x in cyclic.items():
            gens = () if x == G.identity_index else (G.element(x),)
            found[c] = SubgroupRef(G, c, generators=gens)
        queue = list(found.values())
        while queue:
            fresh = []
            for A in queue:
                gen_idx = [G.index_of(g) for g in A.generators]
                for c, x in cyclic.items():
                    if c <= A.indices:
                        continue
                    key = G.closure_indices(gen_idx + [x], start=A.indices)
                    if key not in found:
                        found[key] = SubgroupRef(G, key, generators=A.generators + (G.element(x),))
                        fresh.append(found[key])
            queue = fresh
        lattice = cls(G, list(found.values()))
        logger.debug(f"Lattice of {G.name}: {len(lattice)} subgroups")
        return lattice

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self) -> Iterator[SubgroupRef]:
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> SubgroupRef:
        return self.subgroups[i]

    def index(self, H: SubgroupRef) -> int:
        if H.ambient is not self.ambient or H.indices not in self._position:
            raise GroupError(f"{H.describe()} is not in the lattice of {self.ambient.name}")
        return self._position[H.indices]

    def find(self, indices: FrozenSet[int]) -> SubgroupRef:
        """The listed subgroup with exactly these elements."""
        try:
            return self.subgroups[self._position[frozenset(indices)]]
        except KeyError:
            raise GroupError("element set is not a listed subgroup")

    def canonical(self, H: SubgroupRef) -> SubgroupRef:
        return self.subgroups[self.index(H)]

    @property
    def whole(self) -> SubgroupRef:
        return self.subgroups[-1]

    @property
    def trivial(self) -> SubgroupRef:
        return self.subgroups[0]

    # --- relations ---

    @cached_property
    def containment(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.subgroups)))
        for i, H in enumerate(self.subgroups):
            for j in range(i + 1, len(self.subgroups)):
                K = self.subgroups[j]
                if K.order > H.order and K.order % H.order == 0 and H.indices < K.indices:
                    graph.add_edge(i, j)
        return graph

    @cached_property
    def hasse(self) -> nx.DiGraph:
        return nx.transitive_reduction(self.containment)

    def subgroups_within(self, K: SubgroupRef) -> List[SubgroupRef]:
        """Listed subgroups contained in K (K included)."""
        k = self.index(K)
        return [self.subgroups[i] for i in sorted(nx.ancestors(self.containment, k) | {k})]

    def overgroups(self, H: SubgroupRef) -> List[SubgroupRef]:
        """Listed subgroups containing H (H included)."""
        h = self.index(H)
        return [self.subgroups[i] for i in sorted(nx.descendants(self.containment, h) | {h})]

    def maximal_subgroups_of(self, H: SubgroupRef) -> List[SubgroupRef]:
        h = self.index(H)
        return [self.subgroups[i] for i in sorted(self.hasse.predecessors(h))]

    def conjugacy_class(self, H: SubgroupRef) -> List[SubgroupRef]:
        h = self.index(H)
        if h not in self._conjugacy:
            G = self.ambient
            everything = np.arange(G.order, dtype=np.int64)
            conj = G.table[G.table[G.inverses[everything][:, None], H.index_array[None, :]], everything[:, None]]
            rows = np.unique(np.sort(conj, axis=1), axis=0)
            self._conjugacy[h] = sorted((self.find(frozenset(row.tolist())) for row in rows),
                                        key=lambda S: S.sort_key)
        return self._conjugacy[h]

    # --- distinguished subgroups ---

    @cached_property
    def _normal(self) -> List[SubgroupRef]:
        return [H for H in self.subgroups if H.is_normal_in()]

    def normal_subgroups(self) -> List[SubgroupRef]:
        return list(self._normal)

    def minimal_normal_subgroups(self) -> List[SubgroupRef]:
        if self.ambient.order == 1:
            raise GroupError("the trivial group has no minimal normal subgroups")
        nontrivial = [N for N in self._normal if not N.is_trivial]
        return [N for N in nontrivial if not any(M.indices < N.indices for M in nontrivial)]

    def frattini(self) -> SubgroupRef:
        """Intersection of all maximal subgroups (trivial for the trivial group)."""
        maximal = self.maximal_subgroups_of(self.whole)
        if not maximal:
            return self.trivial
        indices = frozenset.intersection(*(M.indices for M in maximal))
        return self.find(indices)

    def normalizer(self, H: SubgroupRef) -> SubgroupRef:
        h = self.index(H)
        if h not in self._normalizers:
            self._normalizers[h] = self.find(normalizer_indices(H))
        return self._normalizers[h]
