import logging
from src.utils.logging import LogManager


def test_setup_logging(setup_test_env):
    """File log under LOG_DIR; the worker pool logger is capped at WARNING"""
    LogManager.setup_logging("INFO")
    logging.getLogger("src").debug("written to the file handler only")
    assert (setup_test_env["logs"] / "ionqubit.log").exists()
    assert logging.getLogger("concurrent.futures").level == logging.WARNING
    assert logging.getLogger().level == logging.DEBUG
