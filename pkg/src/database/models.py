from sqlalchemy import Column, Integer, String, ForeignKey, DateTime, Text
from sqlalchemy.orm import declarative_base, relationship
from datetime import datetime
import json

Base = declarative_base()


class VerificationRun(Base):
    """One `verify` invocation."""
    __tablename__ = 'verification_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    started_at = Column(DateTime, default=datetime.utcnow)
    catalog = Column(String, nullable=False)
    max_blocks = Column(Integer, nullable=False)
    statements = Column(String, nullable=False)  # comma-separated statement ids
    counterexamples = Column(Integer, default=0)
    summary = Column(Text)  # JSON

    reports = relationship("ReportRecord", back_populates="run", cascade="all, delete-orphan",
                           order_by="ReportRecord.id")

    def set_summary(self, data: dict):
        self.summary = json.dumps(data, sort_keys=True)

    def get_summary(self) -> dict:
        return json.loads(self.summary) if self.summary else {}


class ReportRecord(Base):
    __tablename__ = 'report_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('verification_runs.id'), nullable=False)

    statement = Column(String, nullable=False)
    group_name = Column(String, nullable=False)
    group_order = Column(Integer, nullable=False)
    sigma = Column(String, nullable=False)
    status = Column(String, nullable=False)
    witness = Column(Text)  # JSON
    stats = Column(Text)  # JSON

    run = relationship("VerificationRun", back_populates="reports")

    def get_witness(self) -> dict:
        return json.loads(self.witness) if self.witness else {}

    def get_stats(self) -> dict:
        return json.loads(self.stats) if self.stats else {}
