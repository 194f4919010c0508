"""
Catalog runs: every group × every σ in its family × every selected statement.
"""
import functools
import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from tabulate import tabulate

from src.catalog.group_files import GroupFile, parse_generators, parse_group_file
from src.core.errors import CatalogError, SigmaError, SigmaLabError
from src.core.sigma import prime_support
from src.harness.checkers import run_statement
from src.harness.context import CheckContext
from src.harness.families import sigma_family
from src.harness.report import ALL_STATEMENTS, ALL_STATUSES, Statement, Status, VerificationReport
from src.utils.config import Settings, get_settings

logger = logging.getLogger(__name__)

# A catalog entry is either a parsed group file or a (source label, raw text) pair.
CatalogEntry = Union[GroupFile, Tuple[str, str]]


@dataclass
class CatalogRun:
    reports: List[VerificationReport] = field(default_factory=list)
    errors: List[Dict[str, str]] = field(default_factory=list)
    statements: List[str] = field(default_factory=lambda: list(ALL_STATEMENTS))

    @property
    def counts(self) -> pd.DataFrame:
        """Statement × status crosstab, zero-filled."""
        if self.reports:
            df = pd.DataFrame([{"statement": r.statement.value, "status": r.status.value} for r in self.reports])
            ct = pd.crosstab(df["statement"], df["status"])
        else:
            ct = pd.DataFrame()
        return ct.reindex(index=self.statements, columns=ALL_STATUSES, fill_value=0).astype(int)

    @property
    def non_vacuous(self) -> Dict[str, int]:
        totals = {s: 0 for s in self.statements}
        for r in self.reports:
            totals[r.statement.value] += r.stats.non_vacuous
        return totals

    @property
    def counterexamples(self) -> List[VerificationReport]:
        return [r for r in self.reports if r.status == Status.COUNTEREXAMPLE]

    @property
    def exit_code(self) -> int:
        if self.counterexamples:
            return 1
        return 2 if self.errors else 0

    def summary(self) -> Dict[str, object]:
        counts = self.counts
        return {
            "counts": {s: {k: int(v) for k, v in counts.loc[s].items()} for s in counts.index},
            "non_vacuous": self.non_vacuous,
            "counterexamples": len(self.counterexamples),
            "errors": list(self.errors),
        }

    def render(self) -> str:
        table = self.counts.copy()
        table["non-vacuous"] = pd.Series(self.non_vacuous)
        out = tabulate(table, headers="keys", tablefmt="psql")
        if self.errors:
            out += "\n" + "\n".join(f"skipped {e['source']}: {e['error']}" for e in self.errors)
        return out


def _resolve(entry: CatalogEntry, settings: Settings) -> GroupFile:
    if isinstance(entry, GroupFile):
        return entry
    _, text = entry
    return parse_group_file(text, max_degree=settings.max_degree)


def _label(entry: CatalogEntry) -> str:
    return entry.name if isinstance(entry, GroupFile) else entry[0]


def _skipped(source: str, error: SigmaLabError) -> Dict[str, str]:
    logger.warning(f"Skipping {source}: {error}")
    return {"source": source, "error": str(error)}


def _resolve_catalog(catalog: Sequence[CatalogEntry],
                     settings: Settings) -> Tuple[List[Tuple[str, GroupFile]], List[Dict[str, str]]]:
    """
    (source, group file) for every entry that parses. Unparseable entries and
    repeated group names become error records.
    """
    group_files: List[Tuple[str, GroupFile]] = []
    errors: List[Dict[str, str]] = []
    first_source: Dict[str, str] = {}
    for entry in catalog:
        source = _label(entry)
        try:
            group_file = _resolve(entry, settings)
            if group_file.name in first_source:
                raise CatalogError(f"duplicate group name {group_file.name!r} "
                                   f"(already defined by {first_source[group_file.name]})")
        except SigmaLabError as e:
            errors.append(_skipped(source, e))
            continue
        first_source[group_file.name] = source
        group_files.append((source, group_file))
    return group_files, errors


def _run_group(item: Tuple[str, GroupFile], statements: Sequence[str], max_blocks: int,
               settings: Settings, normal_e: Optional[str]) -> Tuple[List[VerificationReport], List[Dict[str, str]]]:
    """All reports for one group; failures become error records."""
    source, group_file = item
    try:
        G = group_file.to_group(order_cap=settings.order_cap)
        logger.info(f"Checking {G.name} (order {G.order})")
        ctx = CheckContext(G, settings=settings)
        E = None
        if normal_e is not None:
            E = ctx.lattice.canonical(G.subgroup(parse_generators(normal_e, G.degree, label="E")))
        reports = []
        for sigma in sigma_family(prime_support(G.order), max_blocks):
            profile = sigma.profile(G)
            for statement in statements:
                reports.append(run_statement(Statement(statement), ctx, profile, E=E))
        return reports, []
    except SigmaLabError as e:
        return [], [_skipped(source, e)]


def run_catalog(catalog: Sequence[CatalogEntry], settings: Optional[Settings] = None,
                max_blocks: int = 3, statements: Optional[Sequence[str]] = None,
                normal_e: Optional[str] = None) -> CatalogRun:
    settings = settings or get_settings()
    statements = list(statements) if statements else list(ALL_STATEMENTS)
    unknown = [s for s in statements if s not in ALL_STATEMENTS]
    if unknown:
        raise SigmaError(f"unknown statement id(s) {', '.join(unknown)}; expected {', '.join(ALL_STATEMENTS)}")
    sigma_family((), max_blocks)
    func = functools.partial(_run_group, statements=statements, max_blocks=max_blocks,
                             settings=settings, normal_e=normal_e)
    group_files, errors = _resolve_catalog(catalog, settings)
    if settings.workers > 1 and len(group_files) > 1:
        with multiprocessing.Pool(processes=min(settings.workers, len(group_files))) as pool:
            results = pool.map(func, group_files)
    else:
        results = [func(item) for item in group_files]

    run = CatalogRun(statements=statements, errors=errors)
    for reports, group_errors in results:
        run.reports.extend(reports)
        run.errors.extend(group_errors)
    run.reports.sort(key=lambda r: r.sort_key)
    logger.info(f"Catalog run finished: {len(run.reports)} reports, "
                f"{len(run.counterexamples)} counterexamples, {len(run.errors)} skipped")
    return run
