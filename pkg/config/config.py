"""
Environment settings, read once from .env.

utils.logger reads ROOT_DIR and ZENO_OUTPUT_DIR itself, since config imports utils.
"""
from dotenv import load_dotenv
import os
from pathlib import Path

# Load environment variables from .env file
load_dotenv()

# Export environment variables as constants
ROOT_DIR = Path(os.getenv("ROOT_DIR", ".")).resolve()
OUTPUT_DIR = Path(os.getenv("ZENO_OUTPUT_DIR", str(ROOT_DIR / "output"))).resolve()
# A site-specific preset table can replace the bundled one
PRESETS_FILE = Path(os.getenv("ZENO_PRESETS_FILE", str(Path(__file__).resolve().parent / "presets.json"))).resolve()
