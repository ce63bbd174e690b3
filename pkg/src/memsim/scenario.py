"""Named, reproducible scenarios: model + drive + solver + analysis bundles.

Scenario files are flat INI-style configs with [scenario], [model], [drive],
[state], [solver], [analysis] and [output] sections; units are stated in
the key names (nm, ohm, Hz, V, A, s).  The shipped files under
``memsim/defaults`` pin every drive amplitude and initial state explicitly
so each run is reproducible without further inputs.
"""

from __future__ import annotations

import configparser
import copy
import hashlib
import json
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .analysis import AnalysisOptions, AnalysisReport, analyze_trace
from .drive import DriveSignal
from .errors import ConfigError, MemsimError
from .models import (DeviceState, Model, PickettModel, PickettParams,
                     StrukovModel, StrukovParams, YangModel, YangParams)
from .solver import SolverConfig, integrate, params_hash
from .trace import Trace

SCENARIO_ENV_VAR = "MEMSIM_SCENARIO_DIR"
PUBLISHED_TRANSFER_RATIO = 160.0

NM = 1e-9


@dataclass
class Scenario:
    name: str
    model: Model
    drive: DriveSignal
    state0: DeviceState
    solver: SolverConfig
    analysis: AnalysisOptions
    stem: str
    description: str = ""
    published_setup: bool = False
    raw: dict = field(default_factory=dict)


@dataclass
class ScenarioResult:
    scenario: Scenario
    trace: Trace
    report: AnalysisReport
    trace_path: Path | None = None
    report_path: Path | None = None


class _Section:
    """One config section with strict key accounting."""

    def __init__(self, name: str, data: dict[str, str]):
        self.name = name
        self.data = dict(data)
        self.seen: set[str] = set()

    def _fetch(self, key: str, default, required: bool):
        self.seen.add(key)
        if key not in self.data:
            if required:
                raise ConfigError(f"[{self.name}] missing required key {key!r}")
            return default
        return self.data[key]

    def text(self, key: str, default: str | None = None, required: bool = False) -> str:
        value = self._fetch(key, default, required)
        return value if isinstance(value, str) else value

    def number(self, key: str, default: float | None = None,
               required: bool = False) -> float:
        value = self._fetch(key, default, required)
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError as exc:
                raise ConfigError(f"[{self.name}] {key} = {value!r}: {exc}") from exc
        return value

    def integer(self, key: str, default: int | None = None,
                required: bool = False) -> int:
        value = self._fetch(key, default, required)
        if isinstance(value, str):
            try:
                return int(value)
            except ValueError as exc:
                raise ConfigError(f"[{self.name}] {key} = {value!r}: {exc}") from exc
        return value

    def flag(self, key: str, default: bool = False) -> bool:
        value = self._fetch(key, default, required=False)
        if isinstance(value, bool):
            return value
        lowered = value.strip().lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"[{self.name}] {key} = {value!r} is not a boolean")

    def finish(self) -> None:
        unknown = set(self.data) - self.seen
        if unknown:
            raise ConfigError(
                f"[{self.name}] unknown key(s): {', '.join(sorted(unknown))}")


def _build_model_and_state(raw: dict) -> tuple[Model, DeviceState]:
    model_sec = _Section("model", raw.get("model", {}))
    state_sec = _Section("state", raw.get("state", {}))
    kind = model_sec.text("type", required=True).strip().lower()
    try:
        if kind == "strukov":
            params = StrukovParams(
                mu_v=model_sec.number("mu_v_m2_per_vs", required=True),
                r_on=model_sec.number("r_on_ohm", required=True),
                r_off=model_sec.number("r_off_ohm", required=True),
                d=model_sec.number("d_nm", required=True) * NM,
            )
            model: Model = StrukovModel(params)
            state = DeviceState(
                w=state_sec.number("w0_nm", required=True) * NM,
                w_min=state_sec.number("w_min_nm", 0.0) * NM,
                w_max=state_sec.number("w_max_nm", params.d / NM) * NM,
            )
        elif kind == "yang":
            params = YangParams(
                alpha=model_sec.number("alpha", required=True),
                m=model_sec.integer("m", required=True),
                beta=model_sec.number("beta_a", required=True),
                delta=model_sec.number("delta_per_v", required=True),
                chi=model_sec.number("chi_a", required=True),
                gamma=model_sec.number("gamma_per_v", required=True),
                n=model_sec.integer("n", required=True),
            )
            model = YangModel(params)
            state = DeviceState(
                w=state_sec.number("w0", required=True),
                w_min=state_sec.number("w_min", 0.0),
                w_max=state_sec.number("w_max", 1.0),
            )
        elif kind == "pickett":
            params = PickettParams(
                f_off=model_sec.number("f_off_nm_per_s", required=True),
                f_on=model_sec.number("f_on_nm_per_s", required=True),
                i_off=model_sec.number("i_off_a", required=True),
                i_on=model_sec.number("i_on_a", required=True),
                a_off=model_sec.number("a_off_nm", required=True),
                a_on=model_sec.number("a_on_nm", required=True),
                b=model_sec.number("b_a", required=True),
                w_c=model_sec.number("w_c_nm", required=True),
                r_s=model_sec.number("r_s_ohm", required=True),
                phi_0=model_sec.number("phi_0_v", 0.95),
                w_1=model_sec.number("w_1_nm", 0.1261),
                current_scale=model_sec.number("current_scale", 1.0),
            )
            model = PickettModel(params)
            state = DeviceState(
                w=state_sec.number("w0_nm", required=True),
                w_min=state_sec.number("w_min_nm", required=True),
                w_max=state_sec.number("w_max_nm", required=True),
            )
            if state.w_min <= params.w_1:
                raise ConfigError(
                    f"w_min_nm = {state.w_min!r} must exceed w_1_nm = {params.w_1!r}")
        else:
            raise ConfigError(f"unknown model type {kind!r}")
    except ValueError as exc:
        raise ConfigError(f"[model] {exc}") from exc
    model_sec.finish()
    state_sec.finish()
    return model, state


def _build_drive(raw: dict) -> DriveSignal:
    sec = _Section("drive", raw.get("drive", {}))
    drive = DriveSignal(
        kind=sec.text("kind", required=True).strip().lower(),
        shape=sec.text("shape", "sine").strip().lower(),
        amplitude=sec.number("amplitude", required=True),
        frequency=sec.number("frequency_hz", required=True),
        phase=sec.number("phase_rad", 0.0),
        offset=sec.number("offset", 0.0),
        low=sec.number("low", 0.0),
        t_high=sec.number("t_high_s", 0.0),
        t_low=sec.number("t_low_s", 0.0),
    )
    sec.finish()
    return drive


def _build_solver(raw: dict) -> SolverConfig:
    sec = _Section("solver", raw.get("solver", {}))
    defaults = SolverConfig()
    cfg = SolverConfig(
        method=sec.text("method", defaults.method).strip().lower(),
        dt=sec.number("dt_s", defaults.dt),
        t_end=sec.number("t_end_s", required=True),
        dt_min=sec.number("dt_min_s", defaults.dt_min),
        dt_max=sec.number("dt_max_s", defaults.dt_max),
        rel_tol=sec.number("rel_tol", defaults.rel_tol),
        abs_tol=sec.number("abs_tol", defaults.abs_tol),
        newton_tol=sec.number("newton_tol", defaults.newton_tol),
        newton_max_iter=sec.integer("newton_max_iter", defaults.newton_max_iter),
    )
    sec.finish()
    return cfg


def _build_analysis(raw: dict) -> AnalysisOptions:
    sec = _Section("analysis", raw.get("analysis", {}))
    defaults = AnalysisOptions()
    options = AnalysisOptions(
        threshold_fraction=sec.number("threshold_fraction", defaults.threshold_fraction),
        band_lo=sec.number("band_lo", defaults.band_lo),
        band_hi=sec.number("band_hi", defaults.band_hi),
        linear_r2_cutoff=sec.number("linear_r2_cutoff", defaults.linear_r2_cutoff),
        symmetric_lo=sec.number("symmetric_lo", defaults.symmetric_lo),
        symmetric_hi=sec.number("symmetric_hi", defaults.symmetric_hi),
        pinched_tol_rel=sec.number("pinched_tol_rel", defaults.pinched_tol_rel),
    )
    sec.finish()
    return options


def build_scenario(raw: dict) -> Scenario:
    """Assemble and validate a Scenario from a dict of config sections."""
    meta = _Section("scenario", raw.get("scenario", {}))
    name = meta.text("name", required=True).strip()
    description = meta.text("description", "")
    published_setup = meta.flag("published_setup", False)
    meta.finish()

    model, state0 = _build_model_and_state(raw)
    drive = _build_drive(raw)
    solver = _build_solver(raw)
    analysis = _build_analysis(raw)

    out = _Section("output", raw.get("output", {}))
    stem = out.text("stem", name).strip()
    out.finish()

    if not state0.w_min <= state0.w <= state0.w_max:
        raise ConfigError(
            f"initial state {state0.w!r} outside [{state0.w_min!r}, {state0.w_max!r}]")
    if published_setup and isinstance(model, StrukovModel):
        ratio = model.params.transfer_ratio
        if abs(ratio - PUBLISHED_TRANSFER_RATIO) > 1e-9:
            warnings.warn(
                f"scenario {name!r}: resistance transfer ratio R_OFF/R_ON = "
                f"{ratio:g} differs from the published 160", stacklevel=2)
    return Scenario(name=name, model=model, drive=drive, state0=state0,
                    solver=solver, analysis=analysis, stem=stem,
                    description=description, published_setup=published_setup,
                    raw=copy.deepcopy(raw))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"scenario file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raw = {section: dict(parser.items(section)) for section in parser.sections()}
    try:
        return build_scenario(raw)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def config_hash(raw: dict) -> str:
    payload = json.dumps(raw, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def run_scenario(scenario: Scenario, out_dir: str | Path | None = None
                 ) -> ScenarioResult:
    """Integrate, analyze, and (optionally) persist trace plus report."""
    try:
        trace = integrate(scenario.model, scenario.drive, scenario.state0,
                          scenario.solver)
    except MemsimError as exc:
        raise type(exc)(f"scenario {scenario.name!r}: {exc}") from exc
    trace.metadata["scenario"] = scenario.name
    trace.metadata["config_hash"] = config_hash(scenario.raw)
    report = analyze_trace(trace, scenario.analysis, label=scenario.name)
    result = ScenarioResult(scenario=scenario, trace=trace, report=report)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        result.trace_path = out_dir / f"{scenario.stem}.csv"
        trace.write_csv(result.trace_path)
        trace.write_metadata(out_dir / f"{scenario.stem}.meta.json")
        result.report_path = out_dir / f"{scenario.stem}.report.json"
        payload = {
            "scenario": scenario.name,
            "description": scenario.description,
            "report": report.to_dict(),
            "run": {
                "config_hash": config_hash(scenario.raw),
                "params_hash": params_hash(scenario.model),
                "memsim_version": __version__,
                # No stochastic inputs anywhere: identical configs produce
                # byte-identical traces.
                "deterministic": True,
            },
        }
        result.report_path.write_text(json.dumps(payload, indent=2) + "\n")
    return result


@dataclass
class SweepEntry:
    value: object
    result: ScenarioResult | None = None
    error: MemsimError | None = None


def set_parameter(raw: dict, param_path: str, value: object) -> dict:
    """Return a copy of `raw` with section.key set to `value`."""
    try:
        section, key = param_path.split(".", 1)
    except ValueError as exc:
        raise ConfigError(
            f"parameter path {param_path!r} must look like section.key") from exc
    if section not in raw:
        raise ConfigError(f"parameter path {param_path!r}: no [{section}] section")
    updated = copy.deepcopy(raw)
    updated[section][key] = str(value)
    return updated


def run_sweep(base: Scenario, param_path: str, values: list,
              out_dir: str | Path | None = None) -> list[SweepEntry]:
    """One independent run per value; per-run failures do not stop the sweep."""
    entries: list[SweepEntry] = []
    _, key = param_path.split(".", 1) if "." in param_path else ("", param_path)
    for value in values:
        raw = set_parameter(base.raw, param_path, value)
        raw.setdefault("output", {})
        raw["output"]["stem"] = f"{base.stem}__{key}={value}"
        try:
            scenario = build_scenario(raw)
            entries.append(SweepEntry(value=value,
                                      result=run_scenario(scenario, out_dir)))
        except MemsimError as exc:
            entries.append(SweepEntry(value=value, error=exc))
    return entries


def scenario_search_dirs() -> list[Path]:
    import os

    dirs = []
    env = os.environ.get(SCENARIO_ENV_VAR)
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("memsim") / "defaults")))
    return dirs


def list_scenarios() -> list[Path]:
    seen: dict[str, Path] = {}
    for directory in scenario_search_dirs():
        if not directory.is_dir():
            continue
        for path in sorted(directory.glob("*.cfg")):
            seen.setdefault(path.stem, path)
    return [seen[name] for name in sorted(seen)]


def find_scenario(name_or_path: str) -> Path:
    """Resolve a CLI argument to a scenario file."""
    direct = Path(name_or_path)
    if direct.is_file():
        return direct
    candidates = [name_or_path] if name_or_path.endswith(".cfg") \
        else [f"{name_or_path}.cfg"]
    for directory in scenario_search_dirs():
        for candidate in candidates:
            path = directory / candidate
            if path.is_file():
                return path
    raise ConfigError(f"scenario not found: {name_or_path}")
