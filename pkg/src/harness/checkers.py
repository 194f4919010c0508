"""
Exhaustive checkers for the sylowizer statements.

Each checker instantiates every quantified object of its statement on one
(group, σ) pair and returns a VerificationReport. Statuses:
  verified            every instantiation satisfied the conclusion
  hypothesis-not-met  a global hypothesis on G fails (witness says which)
  counterexample      some instantiation violates the conclusion (witness
                      holds the full tuple)
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

from src.core.classify import is_cyclic, is_nilpotent, is_supersoluble
from src.core.errors import GroupError, NotNormalError
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Group, SubgroupRef, set_product
from src.core.sigma import (HallSet, SigmaBlock, SigmaProfile, complete_hall_sets, hall_subgroups,
                            is_sigma_full, is_sigma_i_number, sylow_type_failure)
from src.core.sylowizer import SylowizerQuery, is_hall_in, sylowizers
from src.harness.context import CheckContext
from src.harness.report import (GroupInfo, ReportStats, Statement, Status, VerificationReport,
                                subgroup_list_witness, subgroup_witness)

logger = logging.getLogger(__name__)


def _report(statement: Statement, G: Group, profile: SigmaProfile, status: Status,
            stats: ReportStats, witness: Optional[Dict[str, Any]] = None) -> VerificationReport:
    return VerificationReport(
        statement=statement,
        group=GroupInfo(name=G.name, order=G.order),
        sigma=profile.partition.text,
        status=status,
        witness=witness or {},
        stats=stats,
    )


def _context(G: Group, L: SubgroupLattice, ctx: Optional[CheckContext]) -> CheckContext:
    if ctx is not None:
        if ctx.group is not G:
            raise GroupError("check context belongs to another group")
        return ctx
    return CheckContext(G, L)


def _checked_blocks(profile: SigmaProfile) -> List[SigmaBlock]:
    """σ(G), or the remainder block alone for the trivial group."""
    return profile.blocks or [profile.partition.remainder]


def _hall_set_witness(hall_set: HallSet) -> List[Dict[str, Any]]:
    return [dict(block=block.label, **subgroup_witness(H)) for block, H in hall_set.members]


# --- L2.1 ---

def _stride_sample(items: Sequence, target: int) -> list:
    stride = max(1, math.ceil(len(items) / target))
    return list(items[::stride])


def check_lemma_2_1(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                    ctx: Optional[CheckContext] = None) -> VerificationReport:
    """Every sylowizer T of H in K is S ∩ K for some sylowizer S of H in G."""
    ctx = _context(G, L, ctx)
    settings = ctx.settings
    stats = ReportStats()
    sample = len(L) > settings.l21_subgroup_limit
    for block in _checked_blocks(profile):
        candidates = ctx.sigma_subgroups(block)
        if sample:
            stats.sampled = True
            stats.population = (stats.population or 0) + len(candidates)
            candidates = _stride_sample(candidates, settings.l21_sample)
        for H in candidates:
            in_G = ctx.sylowizers(H, block)
            for K in L.overgroups(H):
                for T in ctx.sylowizers(H, block, within=K):
                    stats.cases_checked += 1
                    if not any((S & K) == T for S in in_G):
                        return _report(Statement.L2_1, G, profile, Status.COUNTEREXAMPLE, stats, {
                            "block": block.label,
                            "H": subgroup_witness(H),
                            "K": subgroup_witness(K),
                            "T": subgroup_witness(T),
                            "sylowizers_in_G": subgroup_list_witness(in_G),
                        })
                    stats.non_vacuous += 1
    if stats.sampled:
        logger.warning(f"L2.1 on {G.name} sampled {stats.population} σᵢ-subgroups by stride")
    return _report(Statement.L2_1, G, profile, Status.VERIFIED, stats)


# --- L2.2 ---

def check_lemma_2_2(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                    ctx: Optional[CheckContext] = None) -> VerificationReport:
    """
    With R Hall in RN: S is a sylowizer of R in G iff N ≤ S and S/N is a
    sylowizer of RN/N in G/N. Sylowizers are computed on both sides and
    matched through the natural map.
    """
    ctx = _context(G, L, ctx)
    stats = ReportStats()
    for N in L.normal_subgroups():
        Q, epi, QL = ctx.quotient(N)
        for block in _checked_blocks(profile):
            for R in ctx.sigma_subgroups(block):
                stats.cases_checked += 1
                RN = L.find(set_product(R, N))
                if not is_hall_in(RN, R, block):
                    continue
                stats.non_vacuous += 1
                in_G = ctx.sylowizers(R, block)
                image = QL.canonical(epi.image(R))
                in_Q = sylowizers(SylowizerQuery(QL, image, block))
                in_Q_keys = {S.indices for S in in_Q}
                lifted = [epi.preimage(Sbar) for Sbar in in_Q]
                in_G_keys = {S.indices for S in in_G}
                forward = [S for S in in_G if not (N <= S and epi.image(S).indices in in_Q_keys)]
                backward = [P for P in lifted if P.indices not in in_G_keys]
                stats.bump("forward_pairs", len(in_G))
                stats.bump("backward_pairs", len(lifted))
                if forward or backward:
                    return _report(Statement.L2_2, G, profile, Status.COUNTEREXAMPLE, stats, {
                        "block": block.label,
                        "N": subgroup_witness(N),
                        "R": subgroup_witness(R),
                        "sylowizers_in_G": subgroup_list_witness(in_G),
                        "lifted_quotient_sylowizers": subgroup_list_witness(lifted),
                        "direction": "forward" if forward else "backward",
                    })
    return _report(Statement.L2_2, G, profile, Status.VERIFIED, stats)


# --- L2.3 ---

def check_lemma_2_3(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                    ctx: Optional[CheckContext] = None) -> VerificationReport:
    """A σ-permutable sylowizer S of R contains O^σᵢ(G), equals R·O^σᵢ(G) and is unique."""
    ctx = _context(G, L, ctx)
    stats = ReportStats()
    if not is_sigma_full(L, profile):
        missing = [b.label for b in profile.blocks if not hall_subgroups(L, b)]
        return _report(Statement.L2_3, G, profile, Status.HYPOTHESIS_NOT_MET, stats,
                       {"obligation": "sigma-full", "blocks_without_hall": missing})
    for block in _checked_blocks(profile):
        O = ctx.o_upper(block)
        for R in ctx.sigma_subgroups(block):
            found = ctx.sylowizers(R, block)
            for S in found:
                stats.cases_checked += 1
                permutable, hall_set = ctx.sigma_permutable(S, profile)
                if not permutable:
                    continue
                stats.non_vacuous += 1
                failed = []
                if not O <= S:
                    failed.append("contains O^σᵢ(G)")
                if set_product(R, O) != S.indices:
                    failed.append("S = R·O^σᵢ(G)")
                if len(found) != 1:
                    failed.append("unique sylowizer")
                if failed:
                    return _report(Statement.L2_3, G, profile, Status.COUNTEREXAMPLE, stats, {
                        "block": block.label,
                        "R": subgroup_witness(R),
                        "S": subgroup_witness(S),
                        "O_upper": subgroup_witness(O),
                        "sylowizers": subgroup_list_witness(found),
                        "hall_set": _hall_set_witness(hall_set),
                        "failed": failed,
                    })
    return _report(Statement.L2_3, G, profile, Status.VERIFIED, stats)


# --- L2.4 ---

def check_lemma_2_4(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                    ctx: Optional[CheckContext] = None) -> VerificationReport:
    """S is c-permutable with every Hall σⱼ-subgroup iff |G:S| is a σᵢ-number."""
    ctx = _context(G, L, ctx)
    stats = ReportStats(extra={"forward_true": 0, "backward_true": 0})
    failure = sylow_type_failure(L, profile)
    if failure is not None:
        return _report(Statement.L2_4, G, profile, Status.HYPOTHESIS_NOT_MET, stats,
                       dict(obligation="sigma-full-of-sylow-type", **failure))
    halls = [H for block in profile.blocks for H in hall_subgroups(L, block)]
    for block in _checked_blocks(profile):
        for R in ctx.sigma_subgroups(block):
            for S in ctx.sylowizers(R, block):
                stats.cases_checked += 1
                blocker = next((H for H in halls if not ctx.c_permutable(S, H)[0]), None)
                lhs = blocker is None
                index = G.order // S.order
                rhs = is_sigma_i_number(index, block)
                if lhs:
                    stats.bump("forward_true")
                if rhs:
                    stats.bump("backward_true")
                if lhs != rhs:
                    witness = {
                        "block": block.label,
                        "R": subgroup_witness(R),
                        "S": subgroup_witness(S),
                        "index": index,
                        "c_permutable_with_all_halls": lhs,
                        "index_is_sigma_i_number": rhs,
                    }
                    if blocker is not None:
                        witness["not_c_permutable_with"] = subgroup_witness(blocker)
                    return _report(Statement.L2_4, G, profile, Status.COUNTEREXAMPLE, stats, witness)
                stats.non_vacuous += 1
    return _report(Statement.L2_4, G, profile, Status.VERIFIED, stats)


# --- T2.5 / T2.6 ---

def _sylowizer_obligations(ctx: CheckContext, profile: SigmaProfile, stats: ReportStats,
                           blocks: List[SigmaBlock], members=None):
    """
    Search the nilpotent complete Hall σ-sets for one meeting the sylowizer
    condition on every block in `blocks`. `members(hall_set, block)` picks the
    subgroup whose maximal subgroups are examined (Hᵢ by default).

    Returns (hall_set, None) on success or (None, witness of the first failing
    obligation).
    """
    L = ctx.lattice
    failure = sylow_type_failure(L, profile)
    if failure is not None:
        return None, dict(obligation="sigma-full-of-sylow-type", **failure)
    candidates = [hs for hs in complete_hall_sets(L, profile) if all(is_nilpotent(H) for H in hs.subgroups)]
    if not candidates:
        return None, {"obligation": "nilpotent complete Hall σ-set",
                      "hall_sets": len(complete_hall_sets(L, profile))}
    members = members or (lambda hs, block: hs.member(block))
    first_failure = None
    for hall_set in candidates:
        stats.cases_checked += 1
        failure = None
        for block in blocks:
            X = L.canonical(members(hall_set, block))
            if is_cyclic(X):
                continue
            for M in L.maximal_subgroups_of(X):
                stats.bump("obligations")
                found = ctx.sylowizers(M, block)
                if not any(all(ctx.c_permutable(S, H)[0] for H in hall_set.subgroups) for S in found):
                    failure = {
                        "obligation": "sylowizer c-permutable with the Hall σ-set",
                        "hall_set": _hall_set_witness(hall_set),
                        "block": block.label,
                        "member": subgroup_witness(X),
                        "maximal_subgroup": subgroup_witness(M),
                        "sylowizers": subgroup_list_witness(found),
                    }
                    break
            if failure is not None:
                break
        if failure is None:
            return hall_set, None
        first_failure = first_failure or failure
    return None, first_failure


def check_theorem_2_5(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                      ctx: Optional[CheckContext] = None) -> VerificationReport:
    ctx = _context(G, L, ctx)
    stats = ReportStats()
    hall_set, failure = _sylowizer_obligations(ctx, profile, stats, profile.blocks)
    if hall_set is None:
        return _report(Statement.T2_5, G, profile, Status.HYPOTHESIS_NOT_MET, stats, failure)
    stats.non_vacuous += 1
    supersoluble, certificate = ctx.supersoluble()
    witness = {"hall_set": _hall_set_witness(hall_set), "supersoluble": supersoluble}
    if not supersoluble:
        return _report(Statement.T2_5, G, profile, Status.COUNTEREXAMPLE, stats, witness)
    witness["chief_factors"] = list(certificate.factor_orders)
    return _report(Statement.T2_5, G, profile, Status.VERIFIED, stats, witness)


def check_theorem_2_6(G: Group, L: SubgroupLattice, profile: SigmaProfile, E: SubgroupRef,
                      ctx: Optional[CheckContext] = None) -> VerificationReport:
    """
    Theorem 2.5 relativized to a normal subgroup E, with the formation taken
    to be the supersoluble groups: G/E supersoluble and the sylowizer
    condition on the members Hᵢ ∩ E for σᵢ ∈ σ(E) force G supersoluble.
    """
    ctx = _context(G, L, ctx)
    if E.ambient is not G:
        raise GroupError("E is not a subgroup of G")
    if not E.is_normal_in():
        raise NotNormalError(f"{E.describe()} is not normal in {G.name}")
    E = L.canonical(E)
    stats = ReportStats()
    base = {"E": subgroup_witness(E)}
    if not ctx.quotient_supersoluble(E):
        return _report(Statement.T2_6, G, profile, Status.HYPOTHESIS_NOT_MET, stats,
                       dict(base, obligation="G/E supersoluble"))
    hall_set, failure = _sylowizer_obligations(
        ctx, profile, stats, profile.active_for(E.order),
        members=lambda hs, block: hs.member(block) & E)
    if hall_set is None:
        return _report(Statement.T2_6, G, profile, Status.HYPOTHESIS_NOT_MET, stats, dict(base, **failure))
    stats.non_vacuous += 1
    supersoluble, _ = ctx.supersoluble()
    group_E, lattice_E = ctx.subgroup_as_group(E)
    e_supersoluble, _ = is_supersoluble(group_E, lattice_E)
    witness = dict(base, hall_set=_hall_set_witness(hall_set), supersoluble=supersoluble,
                   E_supersoluble=e_supersoluble)
    status = Status.VERIFIED if supersoluble and e_supersoluble else Status.COUNTEREXAMPLE
    return _report(Statement.T2_6, G, profile, status, stats, witness)


def check_theorem_2_6_all_normal(G: Group, L: SubgroupLattice, profile: SigmaProfile,
                                 ctx: Optional[CheckContext] = None) -> VerificationReport:
    """
    Theorem 2.6 for every normal E with G/E supersoluble. Counterexample if
    any E gives one, verified if some E meets the hypothesis, otherwise
    hypothesis-not-met.
    """
    ctx = _context(G, L, ctx)
    stats = ReportStats()
    per_normal = []
    first_counterexample = None
    for E in L.normal_subgroups():
        if not ctx.quotient_supersoluble(E):
            continue
        report = check_theorem_2_6(G, L, profile, E, ctx=ctx)
        stats.cases_checked += report.stats.cases_checked
        stats.non_vacuous += report.stats.non_vacuous
        per_normal.append({"E": subgroup_witness(E), "status": report.status.value})
        if report.status == Status.COUNTEREXAMPLE and first_counterexample is None:
            first_counterexample = report.witness
    statuses = {entry["status"] for entry in per_normal}
    witness: Dict[str, Any] = {"per_normal_subgroup": per_normal}
    if first_counterexample is not None:
        witness["counterexample"] = first_counterexample
        status = Status.COUNTEREXAMPLE
    elif Status.VERIFIED.value in statuses:
        status = Status.VERIFIED
    else:
        status = Status.HYPOTHESIS_NOT_MET
    return _report(Statement.T2_6, G, profile, status, stats, witness)


def run_statement(statement: Statement, ctx: CheckContext, profile: SigmaProfile,
                  E: Optional[SubgroupRef] = None) -> VerificationReport:
    G, L = ctx.group, ctx.lattice
    if statement == Statement.T2_6:
        if E is not None:
            return check_theorem_2_6(G, L, profile, E, ctx=ctx)
        return check_theorem_2_6_all_normal(G, L, profile, ctx=ctx)
    checker = {
        Statement.L2_1: check_lemma_2_1,
        Statement.L2_2: check_lemma_2_2,
        Statement.L2_3: check_lemma_2_3,
        Statement.L2_4: check_lemma_2_4,
        Statement.T2_5: check_theorem_2_5,
    }[statement]
    return checker(G, L, profile, ctx=ctx)
