from .logger import logger, rel_path
from .errors import SimulationError, IntegrationError, ModelInconsistencyError, OracleError
from .json_helpers import read_json, write_json
from .kv_helpers import parse_kv_line, read_kv, write_kv
from .helpers import ensure_dir, format_value
