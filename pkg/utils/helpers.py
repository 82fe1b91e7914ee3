from pathlib import Path
from typing import Optional
from .logger import logger


def ensure_dir(directory_path: Path) -> Optional[Path]:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        directory_path: The path to the directory to ensure exists

    Returns:
        The directory path if successful, None if an error occurred
    """
    try:
        if not directory_path.exists():
            logger.info("Creating directory: %s", directory_path)
            directory_path.mkdir(parents=True, exist_ok=True)
        return directory_path
    except Exception as e:
        logger.error("Error creating directory %s: %s", directory_path, e)
        return None


def format_value(value: float) -> str:
    """
    Format a parameter value for use in a directory name (33.0 -> "33", -16.5 -> "m16p5").

    Args:
        value: The parameter value

    Returns:
        A filesystem-safe string
    """
    text = f"{value:g}"
    return text.replace("-", "m").replace(".", "p").replace("+", "")
