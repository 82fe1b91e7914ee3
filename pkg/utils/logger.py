import logging
from logging import Logger
from logging.handlers import RotatingFileHandler
import multiprocessing
from pathlib import Path
from datetime import datetime
from typing import List
from dotenv import load_dotenv
import os

# Load environment variables from .env
load_dotenv()
ROOT_DIR = Path(os.getenv("ROOT_DIR", ".")).resolve()
OUTPUT_DIR = Path(os.getenv("ZENO_OUTPUT_DIR", str(ROOT_DIR / "output"))).resolve()
CONSOLE_LEVEL = os.getenv("ZENO_LOG_LEVEL", "INFO").upper()

# Ensure logs directory exists relative to ROOT_DIR
LOG_DIR: Path = ROOT_DIR / "logs"
LOG_DIR.mkdir(parents=True, exist_ok=True)

# Define log files
timestamp: str = datetime.now().strftime('%Y%m%d_%H%M%S')
TIMED_LOG_FILE: Path = LOG_DIR / f"zeno_sim_{timestamp}.log"
STATIC_LOG_FILE: Path = LOG_DIR / "latest.log"

# Sweep and convergence workers re-import this module; they must not truncate latest.log
IS_WORKER: bool = multiprocessing.parent_process() is not None


class RelativePathFormatter(logging.Formatter):
    """Formatter that prints Path arguments relative to ROOT_DIR or the output directory."""

    def format(self, record: logging.LogRecord) -> str:
        if isinstance(record.args, tuple):
            record.args = tuple(rel_path(arg) if isinstance(arg, Path) else arg for arg in record.args)
        return super().format(record)


# Create logger
logger: Logger = logging.getLogger("zeno_sim")
logger.setLevel(logging.DEBUG)  # Set minimum log level

if not logger.handlers:
    # Create rotating file handler for timestamped log file
    unique_handler: RotatingFileHandler = RotatingFileHandler(
        TIMED_LOG_FILE, maxBytes=10 * 1024 * 1024, backupCount=5
    )
    unique_handler.setLevel(logging.DEBUG)

    # Create file handler for statically named log file
    static_handler: logging.FileHandler = logging.FileHandler(
        STATIC_LOG_FILE, mode='a' if IS_WORKER else 'w'
    )
    static_handler.setLevel(logging.DEBUG)

    # Create console handler
    console_handler: logging.StreamHandler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, CONSOLE_LEVEL, logging.INFO))

    formatter: RelativePathFormatter = RelativePathFormatter(
        "%(asctime)s - %(name)s - %(processName)s - %(levelname)s - %(message)s"
    )
    unique_handler.setFormatter(formatter)
    static_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logger.addHandler(unique_handler)
    logger.addHandler(static_handler)
    logger.addHandler(console_handler)

# Keep only the latest 5 logs
MAX_LOGS: int = 5
if not IS_WORKER:
    log_files: List[Path] = sorted(
        LOG_DIR.glob("zeno_sim_*.log"), key=lambda f: f.stat().st_mtime, reverse=True
    )
    for old_log in log_files[MAX_LOGS:]:
        old_log.unlink(missing_ok=True)


def rel_path(path: Path) -> object:
    """
    Return path relative to ROOT_DIR or the output directory for logging purposes.
    Paths relative to the output directory are prefixed with 'OUT:'.

    Args:
        path: Path to convert to relative form

    Returns:
        Path or str: Relative path with appropriate prefix
    """
    try:
        return f"OUT:{path.resolve().relative_to(OUTPUT_DIR)}"
    except (ValueError, AttributeError):
        try:
            return path.resolve().relative_to(ROOT_DIR)
        except (ValueError, AttributeError):
            return path


logger.debug("Logger initialized. Logs directory: %s", LOG_DIR)
