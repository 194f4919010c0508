"""
Permutation groups over a fixed degree.

A Group carries a stabilizer chain (deterministic Schreier-Sims) for order and
membership queries. Below the materialization cap it also enumerates its
elements in lexicographic order and keeps a Cayley table over element
indices; every SubgroupRef is a frozenset of those indices.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import GroupError, NotNormalError, OrderCapExceeded
from src.core.permutations import Permutation

logger = logging.getLogger(__name__)


def _default_order_cap() -> int:
    from src.utils.config import get_settings
    return get_settings().order_cap


def _orbit_transversal(point: int, generators: Sequence[Permutation], identity: Permutation) -> Dict[int, Permutation]:
    """Breadth-first orbit of `point`; value u satisfies u(point) == key."""
    transversal = {point: identity}
    queue = [point]
    for current in queue:
        u = transversal[current]
        for s in generators:
            image = s(current)
            if image not in transversal:
                transversal[image] = u * s
                queue.append(image)
    return transversal


@dataclass(frozen=True, eq=False)
class StabilizerChain:
    """Base points, fundamental orbits and transversals of a permutation group."""
    degree: int
    base: Tuple[int, ...]
    strong_generators: Tuple[Permutation, ...]
    transversals: Tuple[Dict[int, Permutation], ...]

    @property
    def orbits(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(t.keys()) for t in self.transversals)

    @property
    def order(self) -> int:
        order = 1
        for t in self.transversals:
            order *= len(t)
        return order

    def sift(self, p: Permutation) -> Tuple[Permutation, int]:
        """Strip `p` through the chain; returns (residue, depth reached)."""
        return _sift(self.transversals, self.base, p, 0)

    def contains(self, p: Permutation) -> bool:
        residue, depth = self.sift(p)
        return depth == len(self.base) and residue.is_identity

    def enumerate(self) -> List[Permutation]:
        """Every element, as products u_k * ... * u_0 of transversal elements."""
        identity = Permutation.identity(self.degree)
        levels = [list(t.values()) for t in reversed(self.transversals)]
        out = []
        for choice in product(*levels):
            g = identity
            for u in choice:
                g = g * u
            out.append(g)
        return out

    @classmethod
    def build(cls, generators: Sequence[Permutation], degree: int) -> "StabilizerChain":
        """
        Deterministic Schreier-Sims. The first base point is the smallest point
        moved by any generator; later base points are the smallest point moved
        by the residue that forced the new level.
        """
        identity = Permutation.identity(degree)
        strong = [g for g in generators if not g.is_identity]
        base: List[int] = []
        if strong:
            base.append(min(p for g in strong for p in g.moved_points()))
        for g in strong:
            if all(g(b) == b for b in base):
                base.append(g.moved_points()[0])

        def level_generators(i: int) -> List[Permutation]:
            return [s for s in strong if all(s(b) == b for b in base[:i])]

        transversals: Dict[int, Dict[int, Permutation]] = {}

        def transversal(i: int) -> Dict[int, Permutation]:
            if i not in transversals:
                transversals[i] = _orbit_transversal(base[i], level_generators(i), identity)
            return transversals[i]

        i = len(base) - 1
        while i >= 0:
            restart = False
            gens_i = level_generators(i)
            t_i = transversal(i)
            for point, u in list(t_i.items()):
                for s in gens_i:
                    schreier = u * s * t_i[s(point)].inverse()
                    if schreier.is_identity:
                        continue
                    deeper = [transversal(j) for j in range(i + 1, len(base))]
                    residue, depth = _sift(deeper, base[i + 1:], schreier, 0)
                    if residue.is_identity:
                        continue
                    j = i + 1 + depth
                    strong.append(residue)
                    if j == len(base):
                        base.append(residue.moved_points()[0])
                    for level in [k for k in transversals if k <= j]:
                        del transversals[level]
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

        chain = cls(
            degree=degree,
            base=tuple(base),
            strong_generators=tuple(strong),
            transversals=tuple(transversal(k) for k in range(len(base))),
        )
        logger.debug(f"Stabilizer chain: base={chain.base}, orbit sizes={[len(t) for t in chain.transversals]}")
        return chain


def _sift(transversals, base, p: Permutation, depth: int) -> Tuple[Permutation, int]:
    for point, t in zip(base, transversals):
        u = t.get(p(point))
        if u is None:
            return p, depth
        p = p * u.inverse()
        depth += 1
    return p, depth


class Group:
    """
    A permutation group given by generators.
    Order and membership use the stabilizer chain; element-level structure
    (Cayley table, subgroups) is available while order <= order_cap.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int,
                 name: Optional[str] = None, order_cap: Optional[int] = None):
        if degree is None or degree < 1:
            raise GroupError("a group needs a positive degree")
        gens: List[Permutation] = []
        for g in generators:
            if not isinstance(g, Permutation):
                raise GroupError(f"generator {g!r} is not a Permutation")
            if g.degree != degree:
                raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
            if g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators: Tuple[Permutation, ...] = tuple(gens)
        self.name = name or "G"
        self.order_cap = order_cap if order_cap is not None else _default_order_cap()
        self.chain = StabilizerChain.build(self.generators, degree)
        self.order = self.chain.order

    @classmethod
    def from_generators(cls, generators: Iterable[Permutation], degree: int, **kwargs) -> "Group":
        return cls(generators, degree, **kwargs)

    def __repr__(self) -> str:
        return f"Group({self.name}, degree={self.degree}, order={self.order})"

    # --- chain queries ---

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise GroupError(f"degree mismatch: group {self.degree}, permutation {p.degree}")
        return self.chain.contains(p)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    # --- materialized structure ---

    @property
    def materialized(self) -> bool:
        return self.order <= self.order_cap

    def _require_materialized(self):
        if not self.materialized:
            raise OrderCapExceeded(self.order, self.order_cap)

    @cached_property
    def elements(self) -> List[Permutation]:
        """All elements, sorted lexicographically by image sequence."""
        self._require_materialized()
        return sorted(self.chain.enumerate())

    @cached_property
    def _index(self) -> Dict[Permutation, int]:
        return {p: i for i, p in enumerate(self.elements)}

    def index_of(self, p: Permutation) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise GroupError(f"{p} is not an element of {self.name}")

    def element(self, i: int) -> Permutation:
        return self.elements[i]

    @cached_property
    def identity_index(self) -> int:
        return self.index_of(self.identity)

    @cached_property
    def image_matrix(self) -> np.ndarray:
        """Row i holds the (1-based) images of element i."""
        return np.array([p.images for p in self.elements], dtype=np.int64).reshape(self.order, self.degree)

    @cached_property
    def table(self) -> np.ndarray:
        """Cayley table over indices: table[a, b] is the index of element a * element b."""
        n = self.order
        images = self.image_matrix
        base_cols = np.array(self.chain.base, dtype=np.int64) - 1
        table = np.empty((n, n), dtype=np.int64)
        radix = self.degree + 1
        if n == 1:
            table[0, 0] = 0
        elif radix ** len(base_cols) < 2 ** 62:
            # An element is determined by its base images; encode those as one integer.
            weights = radix ** np.arange(len(base_cols), dtype=np.int64)
            codes = images[:, base_cols] @ weights
            order = np.argsort(codes)
            sorted_codes = codes[order]
            for a in range(n):
                product_codes = images[:, images[a, base_cols] - 1] @ weights
                table[a] = order[np.searchsorted(sorted_codes, product_codes)]
        else:
            for a, pa in enumerate(self.elements):
                table[a] = [self._index[pa * pb] for pb in self.elements]
        logger.debug(f"Cayley table built for {self.name} (order {n})")
        return table

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.identity_index, axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([p.order() for p in self.elements], dtype=np.int64)

    def conjugate_indices(self, indices: np.ndarray, g: int) -> np.ndarray:
        """Indices of x^g = g^-1 x g for every x in `indices`."""
        return self.table[self.table[self.inverses[g], indices], g]

    def closure_indices(self, generators: Iterable[int], start: Iterable[int] = ()) -> FrozenSet[int]:
        """Subgroup generated by `generators`; `start` must already lie inside it."""
        gens = np.unique(np.fromiter(generators, dtype=np.int64))
        members = np.zeros(self.order, dtype=bool)
        members[self.identity_index] = True
        members[list(start)] = True
        frontier = np.flatnonzero(members)
        while frontier.size and gens.size:
            products = self.table[np.ix_(frontier, gens)].ravel()
            new = np.unique(products[~members[products]])
            members[new] = True
            frontier = new
        return frozenset(np.flatnonzero(members).tolist())

    def normal_closure_indices(self, seed: Iterable[int], conjugators: Iterable[int],
                               start: FrozenSet[int] = frozenset()) -> FrozenSet[int]:
        """Smallest subgroup containing `seed` and closed under conjugation by `conjugators`."""
        conj = np.unique(np.fromiter(conjugators, dtype=np.int64))
        gens = sorted(set(seed) | set(start))
        members = self.closure_indices(gens)
        pending = np.array(gens, dtype=np.int64)
        while pending.size and conj.size:
            images = self.table[self.table[self.inverses[conj][:, None], pending[None, :]], conj[:, None]]
            fresh = sorted(set(np.unique(images).tolist()) - members)
            if not fresh:
                break
            gens.extend(fresh)
            members = self.closure_indices(gens, start=members)
            pending = np.array(fresh, dtype=np.int64)
        return members

    # --- subgroup constructors ---

    @cached_property
    def generator_indices(self) -> Tuple[int, ...]:
        return tuple(self.index_of(g) for g in self.generators)

    def subgroup(self, generators: Iterable[Permutation]) -> "SubgroupRef":
        gens = list(generators)
        for g in gens:
            if not self.contains(g):
                raise GroupError(f"{g} is not an element of {self.name}")
        indices = self.closure_indices(self.index_of(g) for g in gens)
        return SubgroupRef(self, indices, generators=[g for g in gens if not g.is_identity])

    def subgroup_from_indices(self, indices: Iterable[int]) -> "SubgroupRef":
        return SubgroupRef(self, frozenset(indices))

    def whole(self) -> "SubgroupRef":
        return SubgroupRef(self, frozenset(range(self.order)), generators=self.generators)

    def trivial(self) -> "SubgroupRef":
        return SubgroupRef(self, frozenset([self.identity_index]), generators=())


class SubgroupRef:
    """
    A subgroup of a materialized ambient Group, held as the frozenset of its
    element indices. Equality is element-set equality within the same ambient.
    """

    def __init__(self, ambient: Group, indices: FrozenSet[int],
                 generators: Optional[Sequence[Permutation]] = None):
        self.ambient = ambient
        self.indices = frozenset(indices)
        self.order = len(self.indices)
        if ambient.order % self.order != 0:
            raise GroupError(f"subset of size {self.order} cannot be a subgroup of order {ambient.order}")
        self._generators = tuple(generators) if generators is not None else None

    @cached_property
    def sorted_indices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.indices))

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order, self.sorted_indices)

    @cached_property
    def index_array(self) -> np.ndarray:
        return np.array(self.sorted_indices, dtype=np.int64)

    @property
    def elements(self) -> List[Permutation]:
        return [self.ambient.element(i) for i in self.sorted_indices]

    @cached_property
    def generators(self) -> Tuple[Permutation, ...]:
        """A small generating set, greedily chosen in element order when not given."""
        if self._generators is not None:
            return self._generators
        chosen: List[int] = []
        span = frozenset([self.ambient.identity_index])
        for i in self.sorted_indices:
            if i not in span:
                chosen.append(i)
                span = self.ambient.closure_indices(chosen, start=span)
                if len(span) == self.order:
                    break
        return tuple(self.ambient.element(i) for i in chosen)

    def describe(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self) -> str:
        return f"SubgroupRef({self.describe()}, order={self.order})"

    def _check_ambient(self, other: "SubgroupRef"):
        if not isinstance(other, SubgroupRef) or other.ambient is not self.ambient:
            raise GroupError("subgroups belong to different ambient groups")

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupRef) and other.ambient is self.ambient and other.indices == self.indices

    def __hash__(self) -> int:
        return hash(self.indices)

    def __le__(self, other: "SubgroupRef") -> bool:
        self._check_ambient(other)
        return self.indices <= other.indices

    def __lt__(self, other: "SubgroupRef") -> bool:
        self._check_ambient(other)
        return self.indices < other.indices

    def __and__(self, other: "SubgroupRef") -> "SubgroupRef":
        self._check_ambient(other)
        return SubgroupRef(self.ambient, self.indices & other.indices)

    def __contains__(self, item: Union[int, Permutation]) -> bool:
        if isinstance(item, Permutation):
            if not self.ambient.contains(item):
                return False
            item = self.ambient.index_of(item)
        return item in self.indices

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def index_in(self, other: Optional["SubgroupRef"] = None) -> int:
        whole = other.order if other is not None else self.ambient.order
        return whole // self.order

    def conjugate(self, g: Union[int, Permutation]) -> "SubgroupRef":
        """H^g = {g^-1 h g}."""
        if isinstance(g, Permutation):
            g = self.ambient.index_of(g)
        return SubgroupRef(self.ambient, frozenset(self.ambient.conjugate_indices(self.index_array, g).tolist()))

    def is_normal_in(self, other: Optional["SubgroupRef"] = None) -> bool:
        """Normal in `other` (default: the ambient group); requires self <= other."""
        if other is None:
            conjugators = self.ambient.generator_indices
        else:
            self._check_ambient(other)
            if not self.indices <= other.indices:
                return False
            conjugators = tuple(self.ambient.index_of(g) for g in other.generators)
        for g in conjugators:
            if not set(self.ambient.conjugate_indices(self.index_array, g).tolist()) <= self.indices:
                return False
        return True


def set_product(A: SubgroupRef, B: SubgroupRef) -> FrozenSet[int]:
    """The element set AB (as ambient indices)."""
    A._check_ambient(B)
    return frozenset(np.unique(A.ambient.table[np.ix_(A.index_array, B.index_array)]).tolist())


def product_is_permuting(A: SubgroupRef, B: SubgroupRef) -> bool:
    """True iff AB == BA, i.e. AB is a subgroup."""
    A._check_ambient(B)
    if A.indices <= B.indices or B.indices <= A.indices:
        return True
    return set_product(A, B) == set_product(B, A)


def join(A: SubgroupRef, B: SubgroupRef) -> SubgroupRef:
    """<A, B>."""
    A._check_ambient(B)
    G = A.ambient
    gens = [G.index_of(g) for g in A.generators + B.generators]
    return SubgroupRef(G, G.closure_indices(gens, start=A.indices), generators=A.generators + B.generators)


def normal_closure(G: Group, H: SubgroupRef) -> SubgroupRef:
    """Smallest normal subgroup of G containing H."""
    if H.ambient is not G:
        raise GroupError("subgroup is not inside this group")
    indices = G.normal_closure_indices(
        (G.index_of(h) for h in H.generators), G.generator_indices, start=H.indices)
    return SubgroupRef(G, indices)


class Epimorphism:
    """The natural map G -> G/N given by the action on right cosets of N."""

    def __init__(self, source: Group, target: Group, image_indices: np.ndarray, kernel: SubgroupRef):
        self.source = source
        self.target = target
        self.image_indices = image_indices
        self._kernel = kernel

    def __call__(self, g: Union[Permutation, int]) -> Permutation:
        if isinstance(g, Permutation):
            g = self.source.index_of(g)
        return self.target.element(int(self.image_indices[g]))

    def kernel(self) -> SubgroupRef:
        return self._kernel

    def image(self, H: SubgroupRef) -> SubgroupRef:
        if H.ambient is not self.source:
            raise GroupError("subgroup is not inside the domain of this map")
        return SubgroupRef(self.target, frozenset(self.image_indices[H.index_array].tolist()))

    def preimage(self, K: SubgroupRef) -> SubgroupRef:
        if K.ambient is not self.target:
            raise GroupError("subgroup is not inside the image of this map")
        wanted = np.zeros(self.target.order, dtype=bool)
        wanted[K.index_array] = True
        return SubgroupRef(self.source, frozenset(np.flatnonzero(wanted[self.image_indices]).tolist()))


def quotient_group(G: Group, N: SubgroupRef) -> Tuple[Group, Epimorphism]:
    """
    G/N as the permutation group induced on the right cosets Nx
    (degree |G:N|), with the natural epimorphism.
    """
    if N.ambient is not G:
        raise GroupError("subgroup is not inside this group")
    if not N.is_normal_in():
        raise NotNormalError(f"{N.describe()} is not normal in {G.name}")
    n = G.order
    coset_of = np.full(n, -1, dtype=np.int64)
    reps: List[int] = []
    for x in range(n):
        if coset_of[x] < 0:
            coset_of[G.table[N.index_array, x]] = len(reps)
            reps.append(x)
    rep_array = np.array(reps, dtype=np.int64)
    # action[k, g] = coset of rep_k * g
    action = coset_of[G.table[rep_array][:, np.arange(n)]] + 1
    degree = len(reps)
    generators = [Permutation(tuple(action[:, G.index_of(g)].tolist())) for g in G.generators]
    target = Group([g for g in generators if not g.is_identity], degree,
                   name=f"{G.name}/N{N.order}", order_cap=G.order_cap)
    image_indices = np.array([target.index_of(Permutation(tuple(action[:, x].tolist()))) for x in range(n)],
                             dtype=np.int64)
    logger.debug(f"Quotient {target.name}: degree {degree}, order {target.order}")
    return target, Epimorphism(G, target, image_indices, N)
