import argparse
import json
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from tabulate import tabulate

# Load environment variables
load_dotenv()

from src.catalog.builtin import DEFAULT_FAMILIES, builtin_catalog
from src.catalog.group_files import catalog_sources, parse_generators, read_group_file, write_catalog
from src.core.classify import (chief_series, derived_series, huppert_criterion, is_abelian, is_cyclic,
                               is_nilpotent, is_soluble, is_supersoluble)
from src.core.errors import SigmaLabError
from src.core.lattice import SubgroupLattice
from src.core.sigma import SigmaPartition, hall_subgroups, sylow_type_failure
from src.core.sylowizer import SylowizerQuery, sylowizers
from src.harness.report import ALL_STATEMENTS
from src.harness.runner import run_catalog
from src.utils.config import get_settings
from src.utils.logger import redirect_to_stderr, setup_logger

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE = 0, 2


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigmalab",
                                     description="σ-sylowizer verification over finite permutation groups")
    parser.add_argument("--order-cap", type=_positive_int, help="largest group order to materialize")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="σ-profile, Hall subgroups and classifiers of one group")
    analyze.add_argument("path", help="group file")
    analyze.add_argument("--sigma", required=True, help='σ-partition, e.g. "2|3" or "2,3|5"')
    analyze.add_argument("--json", action="store_true")

    syl = sub.add_parser("sylowizers", help="σᵢ-sylowizers of a σᵢ-subgroup")
    syl.add_argument("path", help="group file")
    syl.add_argument("--sigma", required=True)
    syl.add_argument("--block", type=int, required=True, help="1-based explicit block, 0 = remainder")
    syl.add_argument("--subgroup", required=True, help='generators, e.g. "(1 2 3)"')
    syl.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify", help="check the statements over a catalog")
    verify.add_argument("path", nargs="?", help="group file or directory of .grp files")
    verify.add_argument("--families", help=f"built-in families instead of files (default: {DEFAULT_FAMILIES})")
    verify.add_argument("--statements", default=",".join(ALL_STATEMENTS))
    verify.add_argument("--max-blocks", type=_positive_int, default=3)
    verify.add_argument("--normal-e", help="generators of E for T2.6 (default: every normal E)")
    verify.add_argument("--workers", type=_positive_int)
    verify.add_argument("--json", action="store_true", help="line-delimited reports on stdout")
    verify.add_argument("--store", action="store_true", help="archive the run in DATABASE_URL")

    catalog = sub.add_parser("catalog", help="built-in catalog tools")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)
    gen = catalog_sub.add_parser("gen", help="write built-in families as group files")
    gen.add_argument("--families", default=DEFAULT_FAMILIES)
    gen.add_argument("--out", help="output directory (default: DATA_DIR)")

    runs = sub.add_parser("runs", help="list archived verification runs, or show one")
    runs.add_argument("--limit", type=_positive_int, default=10)
    runs.add_argument("--show", type=_positive_int, metavar="ID", help="print the reports of one archived run")
    runs.add_argument("--json", action="store_true", help="with --show: line-delimited reports")
    return parser


def _load_group(path: str, settings):
    group = read_group_file(path, max_degree=settings.max_degree).to_group(order_cap=settings.order_cap)
    return group, SubgroupLattice.build(group)


def _cmd_analyze(args, settings) -> int:
    G, L = _load_group(args.path, settings)
    profile = SigmaPartition.parse(args.sigma).profile(G)
    supersoluble, _ = is_supersoluble(G, L)
    failure = sylow_type_failure(L, profile)
    whole = L.whole
    chief = chief_series(G, L)
    result = {
        "group": G.name,
        "order": G.order,
        "sigma": profile.partition.text,
        "active_blocks": [b.label for b in profile.blocks],
        "hall_subgroups": {b.label: [H.describe() for H in hall_subgroups(L, b)] for b in profile.blocks},
        "sigma_full_of_sylow_type": failure is None,
        "sylow_type_failure": failure,
        "subgroups": len(L),
        "frattini_order": L.frattini().order,
        "chief_factors": list(chief.factor_orders),
        "derived_length": len(derived_series(G, L)) - 1,
        "cyclic": is_cyclic(whole),
        "abelian": is_abelian(whole),
        "nilpotent": is_nilpotent(whole),
        "supersoluble": supersoluble,
        "huppert_criterion": huppert_criterion(L),
        "soluble": is_soluble(G, L),
    }
    if args.json:
        print(json.dumps(result))
        return EXIT_OK
    print(f"{G.name}: order {G.order}, {len(L)} subgroups, σ = {profile.partition.text or '(empty)'}")
    print(f"σ(G): {', '.join('{' + b + '}' for b in result['active_blocks']) or 'none'}")
    for label, halls in result["hall_subgroups"].items():
        print(f"  Hall {{{label}}}-subgroups: {len(halls)}" + (f", e.g. {halls[0]}" if halls else ""))
    verdict = "yes" if failure is None else f"no ({failure['reason']}, block {failure['block']})"
    print(f"σ-full of Sylow type: {verdict}")
    rows = [(k, result[k]) for k in ("cyclic", "abelian", "nilpotent", "supersoluble",
                                     "huppert_criterion", "soluble", "frattini_order",
                                     "derived_length", "chief_factors")]
    print(tabulate(rows, headers=["property", "value"], tablefmt="psql"))
    return EXIT_OK


def _cmd_sylowizers(args, settings) -> int:
    G, L = _load_group(args.path, settings)
    partition = SigmaPartition.parse(args.sigma)
    block = partition.block(args.block)
    R = L.canonical(G.subgroup(parse_generators(args.subgroup, G.degree, label="subgroup")))
    found = sylowizers(SylowizerQuery(L, R, block))
    rows = [{"sylowizer": S.describe(), "order": S.order, "index": G.order // S.order} for S in found]
    if args.json:
        print(json.dumps({"group": G.name, "block": block.label, "R": R.describe(), "sylowizers": rows}))
    else:
        print(f"σᵢ-sylowizers of {R.describe()} in {G.name} for block {block}:")
        print(tabulate(rows, headers="keys", tablefmt="psql"))
    return EXIT_OK


def _cmd_verify(args, settings) -> int:
    if args.path and args.families:
        raise SigmaLabError("give either a path or --families, not both")
    if args.path:
        catalog, label = catalog_sources(args.path), args.path
    else:
        families = args.families or DEFAULT_FAMILIES
        catalog, label = builtin_catalog(families, order_cap=settings.order_cap), families
    statements = [s.strip() for s in args.statements.split(",") if s.strip()]
    run = run_catalog(catalog, settings=settings, max_blocks=args.max_blocks,
                      statements=statements, normal_e=args.normal_e)
    if args.json:
        for report in run.reports:
            sys.stdout.write(report.to_line() + "\n")
        sys.stdout.flush()
        logger.info(f"Summary: {json.dumps(run.summary()['counts'])}")
    else:
        print(run.render())
        for report in run.counterexamples:
            print(f"COUNTEREXAMPLE {report.statement.value} {report.group.name} σ={report.sigma}: "
                  f"{json.dumps(report.witness)}")
    if args.store:
        from src.database.db_manager import ReportStore
        run_id = ReportStore(settings.database_url).save_run(
            run.reports, run.summary(), catalog=label, max_blocks=args.max_blocks, statements=statements)
        logger.info(f"Stored as run {run_id}")
    return run.exit_code


def _cmd_catalog(args, settings) -> int:
    out = args.out or settings.data_dir
    written = write_catalog(builtin_catalog(args.families, order_cap=settings.order_cap), out)
    print(f"Wrote {len(written)} group files to {out}")
    return EXIT_OK


def _cmd_runs(args, settings) -> int:
    from src.database.db_manager import ReportStore
    store = ReportStore(settings.database_url)
    if args.show is not None:
        return _show_run(store, args.show, args.json)
    rows = store.list_runs(limit=args.limit)
    if not rows:
        print("No archived runs.")
    else:
        print(tabulate(rows, headers="keys", tablefmt="psql"))
    return EXIT_OK


def _show_run(store, run_id: int, as_json: bool) -> int:
    reports = store.get_reports(run_id)
    if reports is None:
        raise SigmaLabError(f"no archived run with id {run_id}")
    if as_json:
        for report in reports:
            sys.stdout.write(report.to_line() + "\n")
        return EXIT_OK
    rows = [{"statement": r.statement.value, "group": r.group.name, "sigma": r.sigma,
             "status": r.status.value} for r in reports]
    print(tabulate(rows, headers="keys", tablefmt="psql") if rows else f"Run {run_id} has no reports.")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "sylowizers": _cmd_sylowizers,
    "verify": _cmd_verify,
    "catalog": _cmd_catalog,
    "runs": _cmd_runs,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    for name in ("src", __name__):
        configured = setup_logger(name)
        if getattr(args, "json", False):
            redirect_to_stderr(configured)
    try:
        settings = get_settings().with_overrides(order_cap=args.order_cap,
                                                 workers=getattr(args, "workers", None))
        return _COMMANDS[args.command](args, settings)
    except SigmaLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logger.error("Unexpected failure", exc_info=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
