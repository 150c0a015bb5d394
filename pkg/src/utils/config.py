from pathlib import Path
import os
from functools import lru_cache
from typing import Dict, Any
import yaml
from ..exceptions import ConfigError

class Config:
    """Centralized configuration management"""
    
    # Base paths
    BASE_DIR = Path(__file__).parent.parent.parent
    CONF_DIR = BASE_DIR / "conf"
    DATA_DIR = BASE_DIR / "data"
    
    # File paths
    DEFAULTS_FILE = os.getenv(
        'IONQUBIT_DEFAULTS_FILE',
        str(CONF_DIR / "defaults.yaml")
    )
    SCHEMA_FILE = str(CONF_DIR / "config_schema.yaml")
    CSV_HEADERS_FILE = str(CONF_DIR / "csv_headers.yaml")
    
    # Output directories
    OUTPUT_DIR = Path(os.getenv('IONQUBIT_OUTPUT_DIR', str(DATA_DIR / "out")))
    LOG_DIR = Path(os.getenv('IONQUBIT_LOG_DIR', str(DATA_DIR / "logs")))
    
    # Processing settings
    MAX_WORKERS = os.cpu_count() or 4
    
    @classmethod
    def load_yaml(cls, file_path: str) -> Dict[str, Any]:
        """Load and validate YAML configuration file"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                content = yaml.safe_load(f)
        except Exception as e:
            raise ConfigError(f"Failed to load {file_path}: {e}")
        if not isinstance(content, dict):
            raise ConfigError(f"{file_path} must contain a mapping at top level")
        return content
    
    @classmethod
    def defaults(cls) -> Dict[str, Any]:
        """Defaults document (physical defaults, tolerances, grids)"""
        return _cached_yaml(cls.DEFAULTS_FILE)
    
    @classmethod
    def tolerance(cls, name: str) -> float:
        """Named tolerance from the defaults document"""
        try:
            return float(cls.defaults()["tolerances"][name])
        except KeyError:
            raise ConfigError(f"Unknown tolerance '{name}' in {cls.DEFAULTS_FILE}")
    
    @classmethod
    def schema(cls) -> Dict[str, Any]:
        """Versioned run-config schema"""
        return _cached_yaml(cls.SCHEMA_FILE)
    
    @classmethod
    def csv_headers(cls) -> Dict[str, Any]:
        """Versioned column sets for emitted tables"""
        return _cached_yaml(cls.CSV_HEADERS_FILE)
    
    @classmethod
    def ensure_dirs(cls) -> None:
        """Ensure all required directories exist"""
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
        cls.LOG_DIR.mkdir(parents=True, exist_ok=True)

@lru_cache(maxsize=8)
def _cached_yaml(file_path: str) -> Dict[str, Any]:
    return Config.load_yaml(file_path)
