import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional
import pandas as pd
from ..utils.config import Config

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12e"


class ResultExporter:
    """Table export with versioned column sets from conf/csv_headers.yaml"""

    @staticmethod
    def columns(table: str) -> List[str]:
        """Documented column set of a table"""
        return list(Config.csv_headers()["tables"][table])

    @staticmethod
    def frame(rows: List[Dict[str, Any]], table: str) -> pd.DataFrame:
        """Rows as a DataFrame restricted to the table's columns, in order"""
        columns = ResultExporter.columns(table)
        missing = {c for row in rows for c in columns if c not in row}
        if missing:
            raise KeyError(f"rows for table '{table}' lack columns {sorted(missing)}")
        return pd.DataFrame(rows, columns=columns)

    @staticmethod
    def header_lines(table: str) -> List[str]:
        headers = Config.csv_headers()
        return [
            f"# table: {table}, schema version {headers['version']}",
            f"# units: {headers['units']}",
        ]

    @staticmethod
    def render_csv(rows: List[Dict[str, Any]], table: str) -> str:
        """CSV text with '#' header lines and fixed float format"""
        df = ResultExporter.frame(rows, table)
        body = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return "\n".join(ResultExporter.header_lines(table)) + "\n" + body

    @staticmethod
    def to_csv(rows: List[Dict[str, Any]], table: str, path: Optional[Path] = None) -> Optional[Path]:
        """Export rows to CSV"""
        if not rows:
            logger.warning(f"No rows to export for table '{table}'")
            return None

        path = Path(path or (Config.OUTPUT_DIR / f"{table}.csv"))
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(ResultExporter.render_csv(rows, table))
        logger.info(f"Exported {len(rows)} rows to CSV: {path}")
        return path

    @staticmethod
    def to_json(rows: List[Dict[str, Any]], table: str, path: Optional[Path] = None) -> Optional[Path]:
        """Export rows to JSON with the table metadata alongside the records"""
        if not rows:
            logger.warning(f"No rows to export for table '{table}'")
            return None

        path = Path(path or (Config.OUTPUT_DIR / f"{table}.json"))
        path.parent.mkdir(parents=True, exist_ok=True)
        df = ResultExporter.frame(rows, table)
        headers = Config.csv_headers()
        document = {
            "table": table,
            "version": headers["version"],
            "units": headers["units"],
            "records": json.loads(df.to_json(orient="records", double_precision=15)),
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2)
            f.write("\n")
        logger.info(f"Exported {len(rows)} rows to JSON: {path}")
        return path

    @staticmethod
    def export(rows: List[Dict[str, Any]], table: str, fmt: str, path: Optional[Path] = None) -> Optional[Path]:
        exporter = {"csv": ResultExporter.to_csv, "json": ResultExporter.to_json}[fmt]
        return exporter(rows, table, path)
