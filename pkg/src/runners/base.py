import logging
import time
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List
from ..models.run_config import RunConfig
from ..models.params import IonParams
from ..physics.hamiltonians import derive
from ..utils.config import Config
from ..utils.exporters import ResultExporter

logger = logging.getLogger(__name__)

Tables = Dict[str, List[Dict[str, Any]]]


class ModeRunner(ABC):
    """Base class for CLI mode runners"""

    # Table written to the configured output path; other tables get a suffix
    primary_table: str = ""

    def __init__(self, config: RunConfig):
        self.config = config

    @staticmethod
    def derived_columns(params: IonParams) -> Dict[str, float]:
        """epsilon, lambda (with its linearized value) and Delta carried on every row"""
        d = derive(params)
        return {"epsilon": d.epsilon, "lambda": d.lambda_eff, "lambda_linearized": d.lambda_linearized,
                "delta_jcm": d.delta_jcm}

    def output_path(self, table: str) -> Path:
        base = self.config.output or (Config.OUTPUT_DIR / f"{self.config.mode}.{self.config.format}")
        base = Path(base)
        if table == self.primary_table:
            return base
        return base.with_name(f"{base.stem}_{table}{base.suffix}")

    def run(self) -> Dict[str, Path]:
        """Compute and export all tables with timing"""
        start_time = time.time()
        try:
            tables = self._run_impl()
            written = {}
            for table, rows in tables.items():
                path = ResultExporter.export(rows, table, self.config.format, self.output_path(table))
                if path is not None:
                    written[table] = path
            self._after_export(tables)
            logger.info(f"Mode '{self.config.mode}' finished in {time.time() - start_time:.2f}s")
            return written
        except Exception as e:
            logger.error(f"Mode '{self.config.mode}' failed: {e}")
            raise

    def _after_export(self, tables: Tables) -> None:
        """Hook for checks that must run once output is on disk"""

    @abstractmethod
    def _run_impl(self) -> Tables:
        """Rows per table name"""
        pass
