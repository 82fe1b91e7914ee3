from .config import ROOT_DIR, OUTPUT_DIR, PRESETS_FILE
from .scenario import ScenarioConfig, preset, list_presets, load_config, save_config, SWEEP_PARAMETERS
