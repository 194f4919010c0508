import json
import os
import sys
import unittest
from unittest import mock

# Add current directory to path
sys.path.append(os.getcwd())

from src.catalog.builtin import DEFAULT_FAMILIES, builtin_catalog
from src.catalog.group_files import emit_group_file, parse_generators
from src.core.classify import is_nilpotent, is_supersoluble
from src.core.errors import NotNormalError, SigmaError
from src.core.lattice import SubgroupLattice
from src.core.perm_groups import Group
from src.core.permutations import Permutation
from src.core.sigma import SigmaPartition, hall_subgroups, is_sigma_i_number, prime_support
from src.core.sylowizer import SylowizerQuery, is_c_permutable, is_hall_in, sylowizers
from src.harness import checkers
from src.harness.checkers import (check_lemma_2_1, check_lemma_2_2, check_lemma_2_3, check_lemma_2_4,
                                  check_theorem_2_5, check_theorem_2_6, check_theorem_2_6_all_normal)
from src.harness.context import CheckContext
from src.harness.families import sigma_family
from src.harness.report import ALL_STATEMENTS, Statement, Status
from src.harness.runner import run_catalog
from src.utils.config import Settings

LEMMAS = [check_lemma_2_1, check_lemma_2_2, check_lemma_2_3, check_lemma_2_4]


def build(name: str):
    G = builtin_catalog(name)[0].to_group()
    return G, SubgroupLattice.build(G)


def rebuild(G, L, witness):
    """A witnessed subgroup, from its generators."""
    return L.canonical(G.subgroup(parse_generators(", ".join(witness["generators"]), G.degree)))


def witnessed_block(profile, label):
    return next(b for b in profile.blocks if b.label == label)


class TestSigmaFamily(unittest.TestCase):
    def test_two_primes(self):
        self.assertEqual([s.text for s in sigma_family({2, 3}, 2)], ["2|3", "2,3"])

    def test_three_primes(self):
        family = sigma_family({2, 3, 5}, 3)
        self.assertEqual(len(family), 5)
        self.assertEqual(family[0].text, "2|3|5")
        self.assertEqual(family[-1].text, "2,3,5")

    def test_block_limit(self):
        self.assertEqual([s.text for s in sigma_family({2, 3, 5}, 1)], ["2,3,5"])
        self.assertEqual(len(sigma_family({2, 3, 5}, 2)), 4)

    def test_single_and_empty(self):
        self.assertEqual([s.text for s in sigma_family({2}, 3)], ["2"])
        self.assertEqual([s.text for s in sigma_family(set(), 3)], [""])

    def test_rejects_zero_blocks(self):
        with self.assertRaises(SigmaError):
            sigma_family({2}, 0)


class TestLemmaCheckers(unittest.TestCase):
    def test_s3(self):
        G, L = build("S3")
        profile = SigmaPartition.parse("2|3").profile(G)
        for check in LEMMAS:
            report = check(G, L, profile)
            self.assertEqual(report.status, Status.VERIFIED, report.statement)
            self.assertGreaterEqual(report.stats.cases_checked, 1, report.statement)

    def test_s4(self):
        G, L = build("S4")
        profile = SigmaPartition.parse("2|3").profile(G)
        ctx = CheckContext(G, L)
        for check in LEMMAS:
            report = check(G, L, profile, ctx=ctx)
            self.assertEqual(report.status, Status.VERIFIED, report.statement)
            self.assertEqual(report.group.name, "S4")
            self.assertEqual(report.sigma, "2|3")

    def test_trivial_group(self):
        G = Group([], 1, name="1")
        L = SubgroupLattice.build(G)
        profile = SigmaPartition.parse("").profile(G)
        report = check_lemma_2_1(G, L, profile)
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertEqual(report.stats.cases_checked, 1)
        for check in LEMMAS[1:]:
            self.assertEqual(check(G, L, profile).status, Status.VERIFIED)

    def test_lemma_2_1_sampling(self):
        G, L = build("S4")
        ctx = CheckContext(G, L, settings=Settings(l21_subgroup_limit=10, l21_sample=5))
        report = check_lemma_2_1(G, L, SigmaPartition.parse("2|3").profile(G), ctx=ctx)
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertTrue(report.stats.sampled)
        self.assertGreater(report.stats.population, 0)

    def test_lemma_2_3_cyclic_positive_cases(self):
        G, L = build("C6")
        report = check_lemma_2_3(G, L, SigmaPartition.parse("2|3").profile(G))
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertGreaterEqual(report.stats.non_vacuous, 1)

    def test_lemma_2_3_hypothesis(self):
        G, L = build("A5")
        report = check_lemma_2_3(G, L, SigmaPartition.parse("2|3,5").profile(G))
        self.assertEqual(report.status, Status.HYPOTHESIS_NOT_MET)
        self.assertEqual(report.witness["blocks_without_hall"], ["3,5"])

    def test_lemma_2_4_both_directions_fire(self):
        G, L = build("S4")
        report = check_lemma_2_4(G, L, SigmaPartition.parse("2|3").profile(G))
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertGreater(report.stats.extra["forward_true"], 0)
        self.assertGreater(report.stats.cases_checked, report.stats.extra["backward_true"])

    def test_lemma_2_4_hypothesis(self):
        G, L = build("A5")
        report = check_lemma_2_4(G, L, SigmaPartition.parse("2,3|5").profile(G))
        self.assertEqual(report.status, Status.HYPOTHESIS_NOT_MET)
        self.assertEqual(report.witness["obligation"], "sigma-full-of-sylow-type")


class TestTheoremCheckers(unittest.TestCase):
    def test_s3_verified(self):
        G, L = build("S3")
        report = check_theorem_2_5(G, L, SigmaPartition.parse("2|3").profile(G))
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertTrue(report.witness["supersoluble"])

    def test_cyclic_groups_verified(self):
        for name in ["C12", "C30"]:
            G, L = build(name)
            for sigma in sigma_family(prime_support(G.order), 3):
                report = check_theorem_2_5(G, L, sigma.profile(G))
                self.assertEqual(report.status, Status.VERIFIED, f"{name} {sigma.text}")

    def test_s4_hypothesis_not_met(self):
        G, L = build("S4")
        profile = SigmaPartition.parse("2|3").profile(G)
        report = check_theorem_2_5(G, L, profile)
        self.assertEqual(report.status, Status.HYPOTHESIS_NOT_MET)
        witness = report.witness
        self.assertEqual(witness["block"], "2")
        self.assertEqual(witness["member"]["order"], 8)

        # re-check the witness through the public predicates
        M = L.canonical(G.subgroup([Permutation.parse(g, 4) for g in witness["maximal_subgroup"]["generators"]]))
        hall_set = [L.canonical(G.subgroup([Permutation.parse(g, 4) for g in member["generators"]]))
                    for member in witness["hall_set"]]
        self.assertEqual(M.order, 4)
        for S in sylowizers(SylowizerQuery(L, M, profile.partition.block(1))):
            self.assertFalse(all(is_c_permutable(G, S, H, lattice=L)[0] for H in hall_set))

    def test_theorem_2_6_examples(self):
        G, L = build("S3")
        C3 = L.canonical(G.subgroup([Permutation.parse("(1 2 3)", 3)]))
        report = check_theorem_2_6(G, L, SigmaPartition.parse("2|3").profile(G), C3)
        self.assertEqual(report.status, Status.VERIFIED)
        self.assertTrue(report.witness["E_supersoluble"])

        G, L = build("S4")
        A4 = L.canonical(G.subgroup([Permutation.parse("(1 2 3)", 4), Permutation.parse("(1 2)(3 4)", 4)]))
        report = check_theorem_2_6(G, L, SigmaPartition.parse("2|3").profile(G), A4)
        self.assertEqual(report.status, Status.HYPOTHESIS_NOT_MET)
        self.assertEqual(report.witness["member"]["order"], 4)

    def test_theorem_2_6_requires_normal_subgroup(self):
        G, L = build("S3")
        H = L.canonical(G.subgroup([Permutation.parse("(1 2)", 3)]))
        with self.assertRaises(NotNormalError):
            check_theorem_2_6(G, L, SigmaPartition.parse("2|3").profile(G), H)

    def test_theorem_2_6_quotient_hypothesis(self):
        G, L = build("S4")
        report = check_theorem_2_6(G, L, SigmaPartition.parse("2|3").profile(G), L.trivial)
        self.assertEqual(report.status, Status.HYPOTHESIS_NOT_MET)
        self.assertEqual(report.witness["obligation"], "G/E supersoluble")

    def test_whole_group_reduces_to_theorem_2_5(self):
        for group_file in builtin_catalog(DEFAULT_FAMILIES):
            G = group_file.to_group()
            ctx = CheckContext(G)
            L = ctx.lattice
            for sigma in sigma_family(prime_support(G.order), 3):
                profile = sigma.profile(G)
                t25 = check_theorem_2_5(G, L, profile, ctx=ctx)
                t26 = check_theorem_2_6(G, L, profile, L.whole, ctx=ctx)
                self.assertEqual(t25.status, t26.status, f"{G.name} {sigma.text}")

    def test_all_normal_aggregate(self):
        G, L = build("S3")
        report = check_theorem_2_6_all_normal(G, L, SigmaPartition.parse("2|3").profile(G))
        self.assertEqual(report.statement, Statement.T2_6)
        self.assertEqual(report.status, Status.VERIFIED)
        # S3 is supersoluble, so all three normal subgroups have a supersoluble quotient
        self.assertEqual(len(report.witness["per_normal_subgroup"]), 3)


class TestCounterexampleWitnesses(unittest.TestCase):
    """A fault injected into one predicate yields a witness that reproduces the violation."""

    def setUp(self):
        self.G, self.L = build("S3")
        self.profile = SigmaPartition.parse("2|3").profile(self.G)

    def test_lemma_2_4_witness(self):
        G, L, profile = self.G, self.L, self.profile
        with mock.patch("src.harness.checkers.is_sigma_i_number", return_value=False):
            report = check_lemma_2_4(G, L, profile)
        self.assertEqual(report.status, Status.COUNTEREXAMPLE)
        witness = report.witness
        block = witnessed_block(profile, witness["block"])
        R, S = rebuild(G, L, witness["R"]), rebuild(G, L, witness["S"])
        self.assertEqual((R.order, S.order), (witness["R"]["order"], witness["S"]["order"]))
        self.assertIn(S, sylowizers(SylowizerQuery(L, R, block)))
        self.assertEqual(witness["index"], G.order // S.order)

        halls = [H for b in profile.blocks for H in hall_subgroups(L, b)]
        lhs = all(is_c_permutable(G, S, H, lattice=L)[0] for H in halls)
        with mock.patch("src.harness.checkers.is_sigma_i_number", return_value=False):
            rhs = checkers.is_sigma_i_number(witness["index"], block)
        self.assertEqual((lhs, rhs), (witness["c_permutable_with_all_halls"], witness["index_is_sigma_i_number"]))
        self.assertNotEqual(lhs, rhs)
        # the unpatched predicate agrees with the other side
        self.assertEqual(is_sigma_i_number(witness["index"], block), lhs)

    def test_theorem_2_5_witness(self):
        G, L, profile = self.G, self.L, self.profile
        with mock.patch.object(CheckContext, "supersoluble", return_value=(False, None)):
            report = check_theorem_2_5(G, L, profile)
            self.assertFalse(CheckContext(G, L).supersoluble()[0])
        self.assertEqual(report.status, Status.COUNTEREXAMPLE)
        self.assertFalse(report.witness["supersoluble"])
        members = report.witness["hall_set"]
        self.assertEqual(sorted(m["block"] for m in members), sorted(b.label for b in profile.blocks))
        for member in members:
            H = rebuild(G, L, member)
            self.assertTrue(is_hall_in(L.whole, H, witnessed_block(profile, member["block"])))
            self.assertTrue(is_nilpotent(H))
        self.assertTrue(is_supersoluble(G, L)[0])


class TestCatalogRun(unittest.TestCase):
    def test_single_group(self):
        run = run_catalog(builtin_catalog("S3"), max_blocks=2)
        self.assertEqual(len(run.reports), 12)
        self.assertEqual(run.counterexamples, [])
        self.assertEqual(run.exit_code, 0)
        self.assertEqual([r.sort_key for r in run.reports], sorted(r.sort_key for r in run.reports))
        self.assertEqual(int(run.counts.values.sum()), 12)

    def test_empty_catalog(self):
        run = run_catalog([])
        self.assertEqual(run.reports, [])
        self.assertEqual(int(run.counts.values.sum()), 0)
        self.assertEqual(list(run.counts.index), ALL_STATEMENTS)
        self.assertEqual(run.exit_code, 0)

    def test_unparseable_entry_is_skipped(self):
        catalog = [("broken.grp", "name: X\ngens: (1 2)\n"),
                   ("s3.grp", emit_group_file(builtin_catalog("S3")[0]))]
        run = run_catalog(catalog, max_blocks=1, statements=["L2.1"])
        self.assertEqual(len(run.errors), 1)
        self.assertEqual(run.errors[0]["source"], "broken.grp")
        self.assertEqual(len(run.reports), 1)
        self.assertEqual(run.exit_code, 2)
        self.assertIn("broken.grp", run.render())

    def test_duplicate_group_name_is_skipped(self):
        catalog = [("a.grp", "name: G\ndegree: 3\ngens: (1 2 3)\n"),
                   ("b.grp", "name: G\ndegree: 4\ngens: (1 2), (1 2 3 4)\n")]
        run = run_catalog(catalog, max_blocks=1, statements=["L2.1"])
        self.assertEqual([(r.group.name, r.group.order) for r in run.reports], [("G", 3)])
        self.assertEqual(len(run.errors), 1)
        self.assertEqual(run.errors[0]["source"], "b.grp")
        self.assertIn("duplicate group name 'G'", run.errors[0]["error"])
        self.assertIn("a.grp", run.errors[0]["error"])
        self.assertEqual(run.exit_code, 2)

    def test_duplicate_builtin_entries_are_skipped(self):
        s3 = builtin_catalog("S3")[0]
        run = run_catalog([s3, s3], max_blocks=1, statements=["L2.1"])
        self.assertEqual(len(run.reports), 1)
        self.assertEqual(run.errors[0]["source"], "S3")

    def test_unknown_statement(self):
        with self.assertRaises(SigmaError):
            run_catalog(builtin_catalog("S3"), statements=["L9.9"])

    def test_normal_e_option(self):
        run = run_catalog(builtin_catalog("S3"), max_blocks=2, statements=["T2.6"], normal_e="(1 2 3)")
        self.assertEqual([r.witness["E"]["order"] for r in run.reports], [3, 3])

    def test_serial_and_parallel_streams_match(self):
        catalog = builtin_catalog("S3, C6, D8, A4")
        serial = run_catalog(catalog, settings=Settings(workers=1), max_blocks=2)
        parallel = run_catalog(catalog, settings=Settings(workers=4), max_blocks=2)
        self.assertEqual([r.to_line() for r in serial.reports], [r.to_line() for r in parallel.reports])

    def test_report_lines_have_stable_keys(self):
        run = run_catalog(builtin_catalog("S3"), max_blocks=1, statements=["L2.4"])
        record = json.loads(run.reports[0].to_line())
        self.assertEqual(list(record), ["statement", "group", "sigma", "status", "witness", "stats"])
        self.assertEqual(record["statement"], "L2.4")
        self.assertEqual(record["status"], "verified")

    def test_default_catalog_has_no_counterexamples(self):
        run = run_catalog(builtin_catalog(DEFAULT_FAMILIES), max_blocks=3)
        self.assertEqual(run.counterexamples, [])
        self.assertEqual(run.errors, [])
        non_vacuous = run.non_vacuous
        for statement in ["L2.1", "L2.2", "L2.3", "L2.4"]:
            self.assertGreaterEqual(non_vacuous[statement], 50, statement)
        # every hypothesis-holds case of the theorem is supersoluble
        names = {gf.name: gf for gf in builtin_catalog(DEFAULT_FAMILIES)}
        for report in run.reports:
            if report.statement == Statement.T2_5 and report.status == Status.VERIFIED:
                G = names[report.group.name].to_group()
                self.assertTrue(is_supersoluble(G, SubgroupLattice.build(G))[0], report.group.name)


if __name__ == "__main__":
    unittest.main()
