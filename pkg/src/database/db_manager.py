import json
import logging
from typing import Dict, List, Optional

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from src.database.models import Base, VerificationRun, ReportRecord
from src.harness.report import VerificationReport
from src.utils.config import get_settings

logger = logging.getLogger(__name__)


class ReportStore:
    """Archive of verification runs; one instance per database URL."""
    _instances: Dict[str, "ReportStore"] = {}

    def __new__(cls, db_url: Optional[str] = None):
        db_url = db_url or get_settings().database_url
        if db_url not in cls._instances:
            instance = super(ReportStore, cls).__new__(cls)
            instance.db_url = db_url
            instance.engine = create_engine(db_url)
            Base.metadata.create_all(instance.engine)
            instance.Session = sessionmaker(bind=instance.engine)
            cls._instances[db_url] = instance
        return cls._instances[db_url]

    def get_session(self):
        return self.Session()

    def save_run(self, reports: List[VerificationReport], summary: dict, catalog: str,
                 max_blocks: int, statements: List[str]) -> int:
        session = self.get_session()
        try:
            run = VerificationRun(
                catalog=catalog,
                max_blocks=max_blocks,
                statements=",".join(statements),
                counterexamples=int(summary.get("counterexamples", 0)),
            )
            run.set_summary(summary)
            for r in reports:
                run.reports.append(ReportRecord(
                    statement=r.statement.value,
                    group_name=r.group.name,
                    group_order=r.group.order,
                    sigma=r.sigma,
                    status=r.status.value,
                    witness=json.dumps(r.witness),
                    stats=r.stats.model_dump_json(),
                ))
            session.add(run)
            session.commit()
            run_id = run.id
            logger.info(f"Archived run {run_id} with {len(reports)} reports")
            return run_id
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def list_runs(self, limit: int = 10) -> List[dict]:
        session = self.get_session()
        try:
            runs = (session.query(VerificationRun)
                    .order_by(VerificationRun.id.desc())
                    .limit(limit).all())
            return [{
                'id': r.id,
                'started': r.started_at.strftime('%Y-%m-%d %H:%M'),
                'catalog': r.catalog,
                'max_blocks': r.max_blocks,
                'statements': r.statements,
                'reports': len(r.reports),
                'counterexamples': r.counterexamples,
            } for r in runs]
        finally:
            session.close()

    def get_reports(self, run_id: int) -> Optional[List[VerificationReport]]:
        session = self.get_session()
        try:
            run = session.query(VerificationRun).filter(VerificationRun.id == run_id).first()
            if run is None:
                return None
            return [VerificationReport(
                statement=rec.statement,
                group={"name": rec.group_name, "order": rec.group_order},
                sigma=rec.sigma,
                status=rec.status,
                witness=rec.get_witness(),
                stats=rec.get_stats(),
            ) for rec in run.reports]
        finally:
            session.close()
