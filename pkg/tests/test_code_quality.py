"""
Test file for running Vulture and Mypy over the simulator packages.
"""
import os
import sys
import subprocess
import re
import tomllib
from pathlib import Path
from typing import List
import pytest

ROOT_DIR = Path(__file__).parent.parent
PACKAGES = ["config", "constants", "data_analysis", "oracle", "scripts", "utils"]


def python_executable() -> str:
    """Interpreter of the project virtual environment, falling back to the current one."""
    if os.name == 'nt':  # Windows
        candidate = ROOT_DIR / ".venv" / "Scripts" / "python.exe"
    else:  # Unix/Linux/Mac
        candidate = ROOT_DIR / ".venv" / "bin" / "python"
    return str(candidate) if candidate.exists() else sys.executable


def vulture_command() -> List[str]:
    return [python_executable(), "-m", "vulture",
            *(str(ROOT_DIR / package) for package in PACKAGES),
            str(ROOT_DIR / "main.py"),
            "--exclude", "*/__pycache__/*,*/\\.venv/*,*/tests/*",
            "--min-confidence", "80"]


def mypy_command() -> List[str]:
    return [python_executable(), "-m", "mypy",
            *(str(ROOT_DIR / package) for package in PACKAGES),
            str(ROOT_DIR / "main.py"),
            "--ignore-missing-imports"]


def run_vulture() -> bool:
    """Run Vulture to find dead code in the project."""
    print("Running Vulture to find dead code...")
    result = subprocess.run(vulture_command(), capture_output=True, text=True, cwd=ROOT_DIR)
    print("\nVulture Output:")
    print(result.stdout or "No dead code found!")
    if result.stderr:
        print("\nErrors:")
        print(result.stderr)
    return not bool(result.stdout)


def run_mypy() -> bool:
    """Run Mypy for type checking."""
    print("\nRunning Mypy for type checking...")
    result = subprocess.run(mypy_command(), capture_output=True, text=True, cwd=ROOT_DIR)
    print("\nMypy Output:")
    print(result.stdout or "No type errors found!")
    if result.stderr:
        print("\nErrors:")
        print(result.stderr)
    return result.returncode == 0


def main():
    """Run all code quality checks."""
    vulture_success = run_vulture()
    mypy_success = run_mypy()

    if vulture_success and mypy_success:
        print("\nAll code quality checks passed!")
        return 0
    else:
        print("\nSome code quality checks failed.")
        return 1


def test_vulture():
    """Test that there is no dead code in the project using Vulture."""
    pytest.importorskip("vulture")
    result = subprocess.run(vulture_command(), capture_output=True, text=True, cwd=ROOT_DIR)
    if result.stdout:
        print("\nPotential dead code found:")
        print(result.stdout)
    assert not result.stdout, "Dead code found by Vulture"


def test_mypy():
    """Test that there are no type errors using Mypy."""
    pytest.importorskip("mypy")
    result = subprocess.run(mypy_command(), capture_output=True, text=True, cwd=ROOT_DIR)
    if result.stdout:
        print("\nType issues found:")
        print(result.stdout)
    assert result.returncode == 0, "Type errors found by Mypy"


# Distribution name -> import name for runtime dependencies
IMPORT_NAMES = {"python-dotenv": "dotenv"}


def test_runtime_dependencies_are_imported():
    """Every runtime dependency in pyproject.toml is imported by the simulator packages."""
    with open(ROOT_DIR / "pyproject.toml", "rb") as f:
        project = tomllib.load(f)["project"]
    sources = [path.read_text(encoding="utf-8")
               for package in PACKAGES for path in (ROOT_DIR / package).rglob("*.py")]
    sources.append((ROOT_DIR / "main.py").read_text(encoding="utf-8"))
    for requirement in project["dependencies"]:
        name = re.split(r"[<>=!~ ]", requirement, maxsplit=1)[0]
        module = IMPORT_NAMES.get(name, name)
        pattern = re.compile(rf"^\s*(import|from) {re.escape(module)}\b", re.MULTILINE)
        assert any(pattern.search(source) for source in sources), f"{name} is never imported"


if __name__ == "__main__":
    sys.exit(main())
