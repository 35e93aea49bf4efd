"""Scenario files: sectioned ``key = value`` text parsed with configparser.

Unknown sections and keys are rejected. Every error names the file, line,
section and key it refers to.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .hom import OpticalSetup, ReductionConfig
from .spectral import (DEFAULT_GRID_POINTS, DEFAULT_GRID_SPAN, GaussianSourceParams,
                       SpectrumError)


class ConfigError(ValueError):
    """Invalid scenario file or value."""


@dataclass(frozen=True)
class SourceConfig:
    model: str = "gaussian"
    wavelength_nm: float = 1550.0
    fwhm_nm: float = 0.5
    convention: str = "intensity"
    flux: float | None = None
    g2_target: float | None = None
    table: str | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    grid_span: float = DEFAULT_GRID_SPAN

    def gaussian_params(self, flux: float | None = None) -> GaussianSourceParams:
        return GaussianSourceParams(self.wavelength_nm, self.fwhm_nm,
                                    flux if flux is not None else (self.flux or 1.0),
                                    self.convention)


@dataclass(frozen=True)
class CorrelationConfig:
    tau_start: float = -40.0
    tau_stop: float = 40.0
    tau_step: float = 0.25


@dataclass(frozen=True)
class SweepConfig:
    g2_targets: tuple = (5, 8, 10, 13, 15, 20, 30, 40, 50, 60, 80, 100)


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "."
    precision: int = 10
    prefix: str = ""


@dataclass(frozen=True)
class ScenarioConfig:
    source: SourceConfig = field(default_factory=SourceConfig)
    source_b: SourceConfig | None = None  # None: identical to source
    setup: OpticalSetup = field(default_factory=OpticalSetup)
    reduction: ReductionConfig = field(default_factory=ReductionConfig)
    correlation: CorrelationConfig = field(default_factory=CorrelationConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


_SOURCE_KEYS = {f.name for f in fields(SourceConfig)}
_SECTIONS = {
    "source": _SOURCE_KEYS,
    "source_b": _SOURCE_KEYS | {"same"},
    "setup": {"T", "eta1", "eta2", "eta3", "eta4"},
    "reduction": {"mode", "window_ps", "quad_points", "dt_start", "dt_stop", "dt_step",
                  "include_multiphoton"},
    "correlation": {f.name for f in fields(CorrelationConfig)},
    "sweep": {"g2_targets"},
    "output": {f.name for f in fields(OutputConfig)},
}

KEY_DOCS = """\
[source]        model = gaussian | tabulated
                wavelength_nm = 1550      degeneracy wavelength (nm)
                fwhm_nm = 0.5             FWHM of the marginal spectrum (nm)
                convention = intensity | amplitude   what the FWHM refers to
                flux = F                  flux scale (photons/ps), or
                g2_target = 20            solve F for this g2_cross(0) (default 20)
                table = PATH              tabulated model: columns detuning (rad/ps), r[, theta]
                grid_points = 4097        odd number of frequency samples
                grid_span = 8             grid half-width in units of the Gaussian width
[source_b]      same = true               or the keys of [source] for a second source
[setup]         T = 0.5, eta1 .. eta4 = 1 transmittance and path efficiencies in [0, 1]
[reduction]     mode = pointwise | windowed, window_ps, quad_points = 16
                dt_start = -40, dt_stop = 40, dt_step = 0.5 (ps)
                include_multiphoton = true
[correlation]   tau_start = -40, tau_stop = 40, tau_step = 0.25 (ps)
[sweep]         g2_targets = 5, 8, 10, 13, ...
[output]        dir = ., precision = 10, prefix =
"""


class _Reader:
    def __init__(self, path: Path, text: str):
        self.path = path
        self.lines = _key_lines(text)

    def where(self, section, key=None) -> str:
        line = self.lines.get((section, key))
        loc = f"{self.path}:{line}" if line else str(self.path)
        return f"{loc}: [{section}]" + (f" {key}" if key else "")

    def fail(self, section, key, msg):
        raise ConfigError(f"{self.where(section, key)}: {msg}")

    def number(self, sec, section, key, cast=float):
        raw = sec[key]
        try:
            return cast(raw)
        except ValueError:
            self.fail(section, key, f"expected a number, got {raw!r}")

    def boolean(self, sec, section, key):
        try:
            return sec.getboolean(key)
        except ValueError:
            self.fail(section, key, f"expected true/false, got {sec[key]!r}")


def _key_lines(text: str) -> dict:
    """Map (section, key) and (section, None) to 1-based line numbers."""
    out = {}
    section = None
    for n, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            section = m.group(1).strip()
            out.setdefault((section, None), n)
        elif section and stripped and stripped[0] not in "#;":
            m = re.match(r"([^=:]+?)\s*[=:]", stripped)
            if m:
                out.setdefault((section, m.group(1).strip()), n)
    return out


def _parse_source(rd: _Reader, sec, section: str, base_dir: Path) -> SourceConfig:
    kw = {}
    for key in ("wavelength_nm", "fwhm_nm", "flux", "g2_target", "grid_span"):
        if key in sec:
            kw[key] = rd.number(sec, section, key)
    if "grid_points" in sec:
        kw["grid_points"] = rd.number(sec, section, "grid_points", int)
    for key in ("model", "convention"):
        if key in sec:
            kw[key] = sec[key].strip()
    if "table" in sec:
        table = Path(sec["table"].strip())
        kw["table"] = str(table if table.is_absolute() else base_dir / table)
    cfg = SourceConfig(**kw)
    if cfg.model not in ("gaussian", "tabulated"):
        rd.fail(section, "model", f"unknown model {cfg.model!r}")
    if cfg.convention not in ("intensity", "amplitude"):
        rd.fail(section, "convention", f"unknown convention {cfg.convention!r}")
    if cfg.model == "tabulated":
        if cfg.table is None:
            rd.fail(section, "table", "tabulated model needs a table path")
        for key in ("flux", "g2_target"):
            if key in sec:
                rd.fail(section, key, "not used by the tabulated model")
        if not Path(cfg.table).is_file():
            rd.fail(section, "table", f"no such file {cfg.table}")
    else:
        if cfg.flux is not None and cfg.g2_target is not None:
            rd.fail(section, "g2_target", "give either flux or g2_target, not both")
        if cfg.flux is not None and not cfg.flux > 0:
            rd.fail(section, "flux", f"must be positive, got {cfg.flux}")
        if cfg.g2_target is not None and not cfg.g2_target > 2:
            rd.fail(section, "g2_target",
                    f"g2_cross(0) must exceed the single-mode bound 2, got {cfg.g2_target}")
        if cfg.flux is None and cfg.g2_target is None:
            cfg = replace(cfg, g2_target=20.0)
        if cfg.grid_points < 3 or cfg.grid_points % 2 == 0:
            rd.fail(section, "grid_points", f"must be odd and >= 3, got {cfg.grid_points}")
        if not cfg.grid_span > 0:
            rd.fail(section, "grid_span", f"must be positive, got {cfg.grid_span}")
        try:
            cfg.gaussian_params()
        except SpectrumError as exc:
            rd.fail(section, None, str(exc))
    return cfg


def parse_config(path) -> ScenarioConfig:
    """Read and validate a scenario file; raises ConfigError on the first problem."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    return parse_config_text(text, path)


def parse_config_text(text: str, path=Path("<config>")) -> ScenarioConfig:
    path = Path(path)
    rd = _Reader(path, text)
    parser = configparser.ConfigParser(interpolation=None, strict=True, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc).replace("\n", " ")) from exc

    for name in parser.sections():
        if name not in _SECTIONS:
            raise ConfigError(f"{rd.where(name)}: unknown section")
        for key in parser[name]:
            if key not in _SECTIONS[name]:
                rd.fail(name, key, "unknown key")

    base_dir = path.parent
    get = lambda name: parser[name] if parser.has_section(name) else {}  # noqa: E731
    cfg = ScenarioConfig()

    if parser.has_section("source"):
        cfg = replace(cfg, source=_parse_source(rd, parser["source"], "source", base_dir))
    elif cfg.source.flux is None and cfg.source.g2_target is None:
        cfg = replace(cfg, source=replace(cfg.source, g2_target=20.0))

    if parser.has_section("source_b"):
        sec = parser["source_b"]
        same = rd.boolean(sec, "source_b", "same") if "same" in sec else len(sec) == 0
        if same:
            if len(sec) > 1:
                rd.fail("source_b", None, "same = true takes no other keys")
        else:
            src_b = _parse_source(rd, sec, "source_b", base_dir)
            if src_b.wavelength_nm != cfg.source.wavelength_nm:
                rd.fail("source_b", "wavelength_nm",
                        "both sources must share the same degeneracy wavelength")
            cfg = replace(cfg, source_b=src_b)

    sec = get("setup")
    kw = {}
    for key in sec:
        kw[key] = rd.number(sec, "setup", key)
        if not 0.0 <= kw[key] <= 1.0:
            rd.fail("setup", key, f"must lie in [0, 1], got {kw[key]}")
    cfg = replace(cfg, setup=OpticalSetup(**kw))

    sec = get("reduction")
    kw = {}
    if "mode" in sec:
        kw["mode"] = sec["mode"].strip()
        if kw["mode"] not in ("pointwise", "windowed"):
            rd.fail("reduction", "mode", f"unknown mode {kw['mode']!r}")
    if "window_ps" in sec:
        kw["window"] = rd.number(sec, "reduction", "window_ps")
    if "quad_points" in sec:
        kw["quad_points"] = rd.number(sec, "reduction", "quad_points", int)
    for key in ("dt_start", "dt_stop", "dt_step"):
        if key in sec:
            kw[key] = rd.number(sec, "reduction", key)
    if "include_multiphoton" in sec:
        kw["include_multiphoton"] = rd.boolean(sec, "reduction", "include_multiphoton")
    try:
        cfg = replace(cfg, reduction=ReductionConfig(**kw))
    except ValueError as exc:
        rd.fail("reduction", None, str(exc))

    sec = get("correlation")
    kw = {key: rd.number(sec, "correlation", key) for key in sec}
    corr = CorrelationConfig(**kw)
    if not corr.tau_step > 0 or corr.tau_stop < corr.tau_start:
        rd.fail("correlation", None, "need tau_step > 0 and tau_stop >= tau_start")
    cfg = replace(cfg, correlation=corr)

    sec = get("sweep")
    if "g2_targets" in sec:
        try:
            targets = tuple(float(x) for x in re.split(r"[,\s]+", sec["g2_targets"].strip()) if x)
        except ValueError:
            rd.fail("sweep", "g2_targets", f"expected a list of numbers, got {sec['g2_targets']!r}")
        if not targets or min(targets) <= 2:
            rd.fail("sweep", "g2_targets", "targets must all exceed 2")
        cfg = replace(cfg, sweep=SweepConfig(targets))

    sec = get("output")
    kw = {}
    if "dir" in sec:
        out = Path(sec["dir"].strip())
        kw["dir"] = str(out if out.is_absolute() else base_dir / out)
    if "prefix" in sec:
        kw["prefix"] = sec["prefix"].strip()
    if "precision" in sec:
        kw["precision"] = rd.number(sec, "output", "precision", int)
        if not 1 <= kw["precision"] <= 17:
            rd.fail("output", "precision", "must lie in 1..17")
    cfg = replace(cfg, output=OutputConfig(**kw))
    return cfg


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_to_text(cfg: ScenarioConfig) -> str:
    """Render a config back to scenario-file syntax (used in output headers)."""
    out = []

    def section(name, items):
        out.append(f"[{name}]")
        out.extend(f"{k} = {_fmt(v)}" for k, v in items if v is not None)

    src_items = lambda s: [(f.name, getattr(s, f.name)) for f in fields(SourceConfig)]  # noqa: E731
    section("source", src_items(cfg.source))
    section("source_b", [("same", True)] if cfg.source_b is None else src_items(cfg.source_b))
    section("setup", [(f.name, getattr(cfg.setup, f.name)) for f in fields(OpticalSetup)])
    red = cfg.reduction
    section("reduction", [("mode", red.mode), ("window_ps", red.window), ("quad_points", red.quad_points),
                          ("dt_start", red.dt_start), ("dt_stop", red.dt_stop), ("dt_step", red.dt_step),
                          ("include_multiphoton", red.include_multiphoton)])
    section("correlation", [(f.name, getattr(cfg.correlation, f.name)) for f in fields(CorrelationConfig)])
    section("sweep", [("g2_targets", tuple(float(g) for g in cfg.sweep.g2_targets))])
    section("output", [("precision", cfg.output.precision), ("prefix", cfg.output.prefix)])
    return "\n".join(out) + "\n"
