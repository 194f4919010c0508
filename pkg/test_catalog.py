import math
import os
import sys
import tempfile
import unittest

# Add current directory to path
sys.path.append(os.getcwd())

from src.catalog.builtin import DEFAULT_FAMILIES, builtin_catalog
from src.catalog.group_files import (GroupFile, catalog_sources, emit_group_file, parse_generators,
                                     parse_group_file, read_group_file, write_catalog)
from src.core.errors import CatalogError


class TestGroupFiles(unittest.TestCase):
    def test_parse_s4(self):
        gf = parse_group_file("name: S4\ndegree: 4\ngens: (1 2), (1 2 3 4)")
        self.assertEqual(gf, GroupFile(name="S4", degree=4, gens=("(1 2)", "(1 2 3 4)")))
        self.assertEqual(gf.to_group().order, 24)

    def test_parse_q8(self):
        gf = parse_group_file("name: Q8\ndegree: 8\ngens: (1 2 3 4)(5 6 7 8), (1 5 3 7)(2 8 4 6)")
        self.assertEqual(gf.to_group().order, 8)

    def test_comments_and_blank_lines(self):
        gf = parse_group_file("# cyclic\n\nname: C3\n  degree: 3\ngens: (1 2 3)\n")
        self.assertEqual(gf.name, "C3")

    def test_missing_field(self):
        with self.assertRaisesRegex(CatalogError, "degree"):
            parse_group_file("name: S4\ngens: (1 2), (1 2 3 4)")

    def test_malformed_cycles(self):
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\ndegree: 3\ngens: (1 2")
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\ndegree: 3\ngens: (1 5)")

    def test_degree_overflow(self):
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\ndegree: 5\ngens: (1 2)", max_degree=4)
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\ndegree: 0\ngens:")

    def test_unknown_and_duplicate_fields(self):
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\ndegree: 3\ngens: (1 2)\norder: 2")
        with self.assertRaises(CatalogError):
            parse_group_file("name: X\nname: Y\ndegree: 3\ngens: (1 2)")

    def test_empty_generator_list(self):
        gf = parse_group_file("name: One\ndegree: 2\ngens:")
        self.assertEqual(gf.gens, ())
        self.assertEqual(gf.to_group().order, 1)

    def test_emit_is_canonical(self):
        text = "name: G\ndegree: 5\ngens: (3 1 2)(5 4), (), (1 2 3)(4 5)\n"
        once = emit_group_file(parse_group_file(text))
        self.assertEqual(once, "name: G\ndegree: 5\ngens: (1 2 3)(4 5)\n")
        self.assertEqual(emit_group_file(parse_group_file(once)), once)

    def test_parse_emitted_builtins(self):
        for gf in builtin_catalog(DEFAULT_FAMILIES):
            self.assertEqual(parse_group_file(emit_group_file(gf)), gf)

    def test_parse_generators(self):
        perms = parse_generators("(1 2), (2 3)", 3)
        self.assertEqual([str(p) for p in perms], ["(1 2)", "(2 3)"])
        with self.assertRaises(CatalogError):
            parse_generators("(1 2), (2 4)", 3)


class TestBuiltinCatalog(unittest.TestCase):
    ORDERS = {"S3": 6, "S4": 24, "A4": 12, "D8": 8, "D12": 12, "Q8": 8, "C12": 12, "C30": 30,
              "S3xC3": 18, "SL23": 24}

    def test_default_catalog_orders(self):
        catalog = builtin_catalog(DEFAULT_FAMILIES)
        self.assertEqual([gf.name for gf in catalog], list(self.ORDERS))
        for gf in catalog:
            self.assertEqual(gf.to_group().order, self.ORDERS[gf.name], gf.name)

    def test_ranges(self):
        catalog = builtin_catalog("S3..S5, A4, D8, C12, Q8")
        self.assertEqual([gf.name for gf in catalog], ["S3", "S4", "S5", "A4", "D8", "C12", "Q8"])
        self.assertEqual([gf.name for gf in builtin_catalog("D6..D10")], ["D6", "D8", "D10"])

    def test_dihedral_degrees(self):
        (d8,) = builtin_catalog("D8")
        self.assertEqual(d8.degree, 4)
        (d4,) = builtin_catalog("D4")
        self.assertEqual(d4.to_group().order, 4)
        for n in range(6, 21, 2):
            (gf,) = builtin_catalog(f"D{n}")
            self.assertEqual(gf.to_group().order, n)

    def test_families_have_documented_orders(self):
        for n in range(1, 7):
            self.assertEqual(builtin_catalog(f"A{n}")[0].to_group().order, max(1, math.factorial(n) // 2), n)
            self.assertEqual(builtin_catalog(f"S{n}")[0].to_group().order, math.factorial(n), n)
            self.assertEqual(builtin_catalog(f"C{n}")[0].to_group().order, n)

    def test_products(self):
        (gf,) = builtin_catalog("S3xC3")
        self.assertEqual(gf.degree, 6)
        (gf,) = builtin_catalog("C2xC2xC2")
        self.assertEqual(gf.to_group().order, 8)

    def test_order_cap(self):
        with self.assertRaises(CatalogError):
            builtin_catalog("S9")
        with self.assertRaises(CatalogError):
            builtin_catalog("S4", order_cap=10)

    def test_unknown_family(self):
        for spec in ["X3", "D7", "S5..A6", "S5..S3"]:
            with self.assertRaises(CatalogError, msg=spec):
                builtin_catalog(spec)

    def test_write_and_read_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            written = write_catalog(builtin_catalog("S4, C6, A4"), tmp)
            self.assertEqual(len(written), 3)
            sources = catalog_sources(tmp)
            self.assertEqual([os.path.basename(path) for path, _ in sources], ["A4.grp", "C6.grp", "S4.grp"])
            self.assertEqual(read_group_file(os.path.join(tmp, "C6.grp")).to_group().order, 6)

    def test_missing_path(self):
        with self.assertRaises(CatalogError):
            catalog_sources("/nonexistent/catalog")


if __name__ == "__main__":
    unittest.main()
