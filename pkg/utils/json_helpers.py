import json
import math
from pathlib import Path
from typing import Dict, Any, Optional
import numpy as np
from .logger import logger


def read_json(file_path: Path) -> Optional[Dict[str, Any]]:
    """
    Read and parse a JSON file.

    Args:
        file_path: Path to the JSON file

    Returns:
        dict: Parsed JSON data or None if an error occurred
    """
    try:
        if not file_path.exists():
            logger.warning("File not found: %s", file_path)
            return None

        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
            return data if isinstance(data, dict) else None

    except Exception as e:
        logger.error("Error reading JSON file %s: %s", file_path, e)
        return None


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy scalars and arrays (and NaN) into plain JSON values.

    Args:
        value: Any nested structure of dicts, lists and numbers

    Returns:
        The same structure with numpy types replaced and NaN/inf mapped to None
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(file_path: Path, data: Any, indent: int = 4) -> bool:
    """
    Write data to a JSON file.

    Args:
        file_path: Path to the JSON file to write
        data: The data to write to the JSON file
        indent: The number of spaces to use for indentation in the JSON file (default is 4)

    Returns:
        bool: True if the file was written successfully, False if an error occurred
    """
    try:
        # Ensure directory exists
        file_path.parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(to_jsonable(data), f, indent=indent)
        return True

    except Exception as e:
        logger.error("Error writing JSON file %s: %s", file_path, e)
        return False
