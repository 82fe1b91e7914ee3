from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple
from .logger import logger


def parse_kv_line(line: str) -> Optional[Tuple[str, str]]:
    """
    Parse one `key = value` line. Blank lines and `#` comments yield None.

    Args:
        line: A raw line from a config file or a `--set` flag

    Returns:
        (key, value) with surrounding whitespace stripped, or None

    Raises:
        ValueError: if a non-comment line has no '=' or an empty key
    """
    stripped = line.split("#", 1)[0].strip()
    if not stripped:
        return None
    if "=" not in stripped:
        raise ValueError(f"Expected 'key = value', got: {line.strip()!r}")
    key, value = stripped.split("=", 1)
    key = key.strip()
    if not key:
        raise ValueError(f"Empty key in line: {line.strip()!r}")
    return key, value.strip()


def read_kv(file_path: Path) -> Dict[str, str]:
    """
    Read a flat key-value text file.

    Args:
        file_path: Path to the file

    Returns:
        Mapping of keys to raw string values, in file order

    Raises:
        ValueError: on malformed lines or repeated keys
        OSError: if the file cannot be read
    """
    result: Dict[str, str] = {}
    with open(file_path, 'r', encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            parsed = parse_kv_line(line)
            if parsed is None:
                continue
            key, value = parsed
            if key in result:
                raise ValueError(f"{file_path}:{number}: duplicate key '{key}'")
            result[key] = value
    logger.debug("Read %d keys from %s", len(result), file_path)
    return result


def write_kv(file_path: Path, values: Mapping[str, str], header: Optional[List[str]] = None) -> bool:
    """
    Write a flat key-value text file, one `key = value` per line.

    Args:
        file_path: Path to the file to write
        values: Mapping of keys to already-formatted values
        header: Optional comment lines written first

    Returns:
        True if successful, False otherwise
    """
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"# {text}" for text in header or []]
        lines.extend(f"{key} = {value}" for key, value in values.items())
        with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write("\n".join(lines) + "\n")
        return True
    except Exception as e:
        logger.error("Error writing config file %s: %s", file_path, e)
        return False
