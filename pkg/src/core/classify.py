"""
Group-class predicates: cyclic, abelian, nilpotent, soluble, supersoluble,
p-nilpotent.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from sympy import isprime, multiplicity

from src.core.errors import SigmaError
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Group, SubgroupRef
from src.core.sigma import prime_support

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChiefSeriesCertificate:
    """1 = N0 < N1 < ... < Nk = G, each Nj normal in G and each factor a chief factor."""
    series: Tuple[SubgroupRef, ...]
    factor_orders: Tuple[int, ...]

    def describe(self) -> List[str]:
        return [N.describe() for N in self.series]


def is_cyclic(H: SubgroupRef) -> bool:
    return int(H.ambient.element_orders[H.index_array].max()) == H.order


def is_abelian(H: SubgroupRef) -> bool:
    G = H.ambient
    gens = [G.index_of(g) for g in H.generators]
    return all(G.table[a, b] == G.table[b, a] for a in gens for b in gens)


def is_nilpotent(H: SubgroupRef) -> bool:
    """
    Every Sylow subgroup is normal. Equivalent test: for each p the
    p-elements of H number exactly |H|_p (then they form the unique Sylow
    p-subgroup).
    """
    orders = H.ambient.element_orders[H.index_array].tolist()
    for p in prime_support(H.order):
        p_part = p ** multiplicity(p, H.order)
        p_elements = sum(1 for o in orders if prime_support(o) <= {p})
        if p_elements != p_part:
            return False
    return True


def derived_subgroup(K: SubgroupRef) -> SubgroupRef:
    """K' as the normal closure in K of the commutators of K's generators."""
    G = K.ambient
    gens = list(K.generators)
    seeds = [G.index_of(a.commutator(b)) for a in gens for b in gens]
    conjugators = [G.index_of(g) for g in gens]
    return SubgroupRef(G, G.normal_closure_indices(seeds, conjugators))


def derived_series(G: Group, L: SubgroupLattice) -> List[SubgroupRef]:
    series = [L.whole]
    while True:
        nxt = L.find(derived_subgroup(series[-1]).indices)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_soluble(G: Group, L: SubgroupLattice) -> bool:
    return derived_series(G, L)[-1].is_trivial


def chief_series(G: Group, L: SubgroupLattice) -> ChiefSeriesCertificate:
    """
    Greedy chief series: from the current term, step to the first (in lattice
    order) normal subgroup minimal over it.
    """
    normals = L.normal_subgroups()
    series = [L.trivial]
    while series[-1] != L.whole:
        current = series[-1]
        above = [N for N in normals if current.indices < N.indices]
        minimal = [N for N in above if not any(M.indices < N.indices for M in above)]
        series.append(minimal[0])
    factors = tuple(series[j + 1].order // series[j].order for j in range(len(series) - 1))
    return ChiefSeriesCertificate(tuple(series), factors)


def is_supersoluble(G: Group, L: SubgroupLattice) -> Tuple[bool, Optional[ChiefSeriesCertificate]]:
    """Every chief factor has prime order (Jordan-Hölder makes one series enough)."""
    certificate = chief_series(G, L)
    if all(isprime(f) for f in certificate.factor_orders):
        return True, certificate
    return False, None


def huppert_criterion(L: SubgroupLattice) -> bool:
    """Every maximal subgroup has prime index."""
    whole = L.whole
    return all(isprime(whole.order // M.order) for M in L.maximal_subgroups_of(whole))


def is_p_nilpotent(G: Group, L: SubgroupLattice, p: int) -> bool:
    """G has a normal subgroup of order |G| / |G|_p."""
    if not isprime(p):
        raise SigmaError(f"{p} is not a prime")
    complement = G.order // p ** multiplicity(p, G.order)
    return any(N.order == complement for N in L.normal_subgroups())
