"""
Scenario configuration: the full parameter set of one simulation run.

Configs come from a named preset, a flat `key = value` file, and `--set`
overrides, applied in that order.
"""
import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping
from utils import logger, read_json, read_kv, write_kv, parse_kv_line
from constants import (
    ATOM_FREQUENCY,
    DEFAULT_GAMMA_FREE,
    DEFAULT_K_MIN,
    DEFAULT_K_MAX,
    DEFAULT_N_MODES,
    DEFAULT_SHARPNESS,
    BANDWIDTH_RATIO,
    ETA_CONVENTION_FACTOR,
    FINITE_KERNEL_AMPLITUDE,
    FINITE_KERNEL_WIDTH_MODES,
    DETECTOR_FWHM,
    DEFAULT_DT,
    DEFAULT_SAMPLE_STRIDE,
    STABILITY_LIMIT,
    RECURRENCE_FRACTION_LIMIT,
    DEFAULT_T_END_FRACTION,
    KERNEL_KINDS,
)
from .config import PRESETS_FILE

# Sweepable parameters and the config field each one sets
SWEEP_PARAMETERS: Dict[str, str] = {
    "x_d": "x_d",
    "eta_peak": "eta_peak",
    "kernel_width": "kernel_width",
    "delta_bw": "delta_bw",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "custom"
    omega: float = ATOM_FREQUENCY
    gamma_free: float = DEFAULT_GAMMA_FREE
    k_min: float = DEFAULT_K_MIN
    k_max: float = DEFAULT_K_MAX
    n_k: int = DEFAULT_N_MODES
    w_min: float = DEFAULT_K_MIN
    w_max: float = DEFAULT_K_MAX
    n_w: int = DEFAULT_N_MODES
    eta_peak: float = 10.0 * DEFAULT_GAMMA_FREE
    delta_bw: float = BANDWIDTH_RATIO * DEFAULT_GAMMA_FREE / (2.0 * math.pi)
    sharpness: int = DEFAULT_SHARPNESS
    kernel_kind: str = "delta"
    kernel_amplitude: float = FINITE_KERNEL_AMPLITUDE
    kernel_width: float = FINITE_KERNEL_WIDTH_MODES * (DEFAULT_K_MAX - DEFAULT_K_MIN) / DEFAULT_N_MODES
    profile_fwhm: float = DETECTOR_FWHM
    profile_peak: float = 1.0
    profile_points: int = 0  # 0 picks a resolution automatically
    x_d: float = 0.0
    t_end: float = 200.0
    dt: float = DEFAULT_DT
    sample_stride: int = DEFAULT_SAMPLE_STRIDE
    interaction_picture: bool = False
    allow_recurrence: bool = False
    ks_eta_convention: bool = False

    @property
    def k_spacing(self) -> float:
        return (self.k_max - self.k_min) / self.n_k

    @property
    def w_spacing(self) -> float:
        return (self.w_max - self.w_min) / self.n_w

    @property
    def recurrence_time(self) -> float:
        """Earliest revival time of the photon and detector discretizations."""
        return 2.0 * math.pi / max(self.k_spacing, self.w_spacing)

    @property
    def max_frequency(self) -> float:
        return max(abs(self.omega), abs(self.k_max), abs(self.w_max))

    @property
    def eta_scale(self) -> float:
        """Factor applied to eta_k in the detector coupling (1 in the KS convention)."""
        return 1.0 if self.ks_eta_convention else ETA_CONVENTION_FACTOR

    def validate(self) -> "ScenarioConfig":
        """
        Check every invariant of a runnable scenario.

        Returns:
            self, for chaining

        Raises:
            ValueError: listing every violated constraint
        """
        problems: List[str] = []
        if not self.gamma_free > 0:
            problems.append(f"gamma_free must be positive (got {self.gamma_free})")
        if self.eta_peak < 0:
            problems.append(f"eta_peak must be >= 0 (got {self.eta_peak})")
        if not self.delta_bw > 0:
            problems.append(f"delta_bw must be positive (got {self.delta_bw})")
        if self.sharpness < 2 or self.sharpness % 2:
            problems.append(f"sharpness must be an even integer >= 2 (got {self.sharpness})")
        for label, low, high, count in (("k", self.k_min, self.k_max, self.n_k),
                                        ("w", self.w_min, self.w_max, self.n_w)):
            if low < 0 or high <= low:
                problems.append(f"{label} grid range [{low}, {high}] is invalid")
            if count < 1:
                problems.append(f"n_{label} must be >= 1 (got {count})")
        if self.kernel_kind not in KERNEL_KINDS:
            problems.append(f"kernel_kind must be delta, gaussian or attenuation (got {self.kernel_kind!r})")
        if self.kernel_kind == "gaussian" and not (self.kernel_amplitude > 0 and self.kernel_width > 0):
            problems.append("gaussian kernel needs positive kernel_amplitude and kernel_width")
        if self.kernel_kind == "attenuation" and not (self.profile_fwhm > 0 and self.profile_peak >= 0):
            problems.append("attenuation kernel needs positive profile_fwhm and nonnegative profile_peak")
        if not self.dt > 0:
            problems.append(f"dt must be positive (got {self.dt})")
        elif self.dt * self.max_frequency >= STABILITY_LIMIT:
            problems.append(
                f"dt = {self.dt} violates the stability guard dt * {self.max_frequency:g} < {STABILITY_LIMIT}; "
                f"try dt <= {0.5 * STABILITY_LIMIT / self.max_frequency:.4g}"
            )
        if not self.t_end > 0:
            problems.append(f"t_end must be positive (got {self.t_end})")
        if self.sample_stride < 1:
            problems.append(f"sample_stride must be >= 1 (got {self.sample_stride})")
        if not problems and not self.allow_recurrence:
            limit = RECURRENCE_FRACTION_LIMIT * self.recurrence_time
            if self.t_end >= limit:
                problems.append(
                    f"t_end = {self.t_end:g} reaches {RECURRENCE_FRACTION_LIMIT} * T_rec = {limit:.4g}; "
                    "shorten the run or set allow_recurrence = true"
                )
        if problems:
            raise ValueError(f"Invalid scenario '{self.name}': " + "; ".join(problems))
        return self

    def to_mapping(self) -> Dict[str, str]:
        """Field values formatted for a key-value file (floats via repr, so they reload exactly)."""
        values: Dict[str, str] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                values[f.name] = "true" if value else "false"
            elif isinstance(value, float):
                values[f.name] = repr(value)
            else:
                values[f.name] = str(value)
        return values

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: "ScenarioConfig | None" = None) -> "ScenarioConfig":
        """
        Build a config from raw values, converting strings to the field types.

        Args:
            values: Mapping of field names to values (strings or already-typed)
            base: Config providing the fields not present in values

        Returns:
            A new ScenarioConfig (not yet validated)

        Raises:
            ValueError: on unknown keys or unparseable values
        """
        field_types = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(values) - set(field_types))
        if unknown:
            raise ValueError(f"Unknown config keys: {', '.join(unknown)}")

        converted: Dict[str, Any] = {}
        for key, raw in values.items():
            converted[key] = _convert(key, raw, field_types[key])
        return dataclasses.replace(base or cls(), **converted)

    def with_overrides(self, assignments: Iterable[str]) -> "ScenarioConfig":
        """Apply `key=value` overrides (the repeatable --set flag)."""
        values: Dict[str, str] = {}
        for assignment in assignments:
            parsed = parse_kv_line(assignment)
            if parsed is None:
                continue
            values[parsed[0]] = parsed[1]
        if not values:
            return self
        logger.debug(f"Applying overrides: {values}")
        return ScenarioConfig.from_mapping(values, base=self)


def _convert(key: str, raw: Any, annotation: Any) -> Any:
    type_name = annotation if isinstance(annotation, str) else getattr(annotation, "__name__", str(annotation))
    try:
        if type_name == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if type_name == "int":
            number = float(raw)
            if not number.is_integer():
                raise ValueError(f"not an integer: {raw!r}")
            return int(number)
        if type_name == "float":
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as e:
        raise ValueError(f"Bad value for '{key}': {e}") from e


def list_presets() -> Dict[str, str]:
    """Return preset names mapped to their descriptions."""
    table = read_json(PRESETS_FILE) or {}
    return {name: str(entry.get("description", "")) for name, entry in table.items()}


def preset(name: str) -> ScenarioConfig:
    """
    Resolve a named preset into a fully populated scenario.

    Rates are fixed ratios of gamma = gamma_free: Delta = 100 gamma / 2pi,
    eta = eta_ratio * gamma. Gaussian kernels use FINITE_KERNEL_AMPLITUDE and width
    5.5 photon-grid spacings; x_D is given in units of the detector FWHM (33),
    negative when the detector lies in the photon's path.

    Args:
        name: Preset name (see list_presets)

    Returns:
        A validated ScenarioConfig

    Raises:
        ValueError: on an unknown name, listing the available presets
    """
    table = read_json(PRESETS_FILE) or {}
    if name not in table:
        raise ValueError(f"Unknown preset '{name}'. Available presets: {', '.join(sorted(table))}")
    entry = dict(table[name])

    base = ScenarioConfig(name=name)
    gamma = base.gamma_free
    values: Dict[str, Any] = {
        "eta_peak": float(entry.pop("eta_ratio")) * gamma,
        "delta_bw": BANDWIDTH_RATIO * gamma / (2.0 * math.pi),
        "kernel_kind": entry.pop("kernel_kind"),
        "kernel_amplitude": FINITE_KERNEL_AMPLITUDE,
        "kernel_width": FINITE_KERNEL_WIDTH_MODES * base.k_spacing,
        "x_d": float(entry.pop("x_d_fwhm")) * DETECTOR_FWHM,
        "t_end": DEFAULT_T_END_FRACTION * base.recurrence_time,
    }
    entry.pop("description", None)
    values.update(entry)
    return ScenarioConfig.from_mapping(values, base=base).validate()


def load_config(file_path: Path, base: "ScenarioConfig | None" = None) -> ScenarioConfig:
    """
    Load a key-value scenario file on top of base (defaults when None).

    Raises:
        ValueError: on malformed content
        OSError: if the file cannot be read
    """
    values = read_kv(file_path)
    config = ScenarioConfig.from_mapping(values, base=base)
    logger.info("Loaded scenario '%s' from %s", config.name, file_path)
    return config


def save_config(config: ScenarioConfig, file_path: Path) -> bool:
    """Write the resolved scenario as a key-value file next to run outputs."""
    header = [
        f"Resolved scenario '{config.name}'",
        "Units: hbar = c = Omega = 1. Keys are ScenarioConfig fields; floats round-trip exactly.",
    ]
    return write_kv(file_path, config.to_mapping(), header=header)
