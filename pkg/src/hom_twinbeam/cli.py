"""Command-line front end.

    hom-twinbeam [--config PATH | --preset NAME] [--out DIR] [--threads N]
                 [--method {direct,fast}] COMMAND

Commands: spectrum, g2 {marginal,cross}, homdip, sweep, check, preset NAME.
Exit codes: 0 success, 1 failed check, 2 config error, 3 numerical-window error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import (KEY_DOCS, ConfigError, ScenarioConfig, SourceConfig, config_to_text,
                     parse_config)
from .correlations import (coherence_time, coherence_time_from_g2, correlation_trace,
                           mean_flux)
from .hom import (OpticalSetup, flux_for_target_g2, g2_cross_zero, hom_trace, kernels_for,
                  visibility_sweep)
from .kernels import WindowError
from .spectral import (SpectralAmplitude, SpectrumError, default_grid, detuning_to_wavelength,
                       gaussian_amplitude, load_table, wavelength_to_detuning_width)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_WINDOW = 0, 1, 2, 3

CASES = {
    "ideal": OpticalSetup(),
    "case1": OpticalSetup(T=0.45),
    "case2": OpticalSetup(T=0.45, eta2=0.1, eta3=0.05),
    "case3": OpticalSetup(T=0.45, eta2=0.2, eta3=0.05),
}
DIP_TARGETS = (20.0, 40.0, 80.0)
PRESETS = ("fig2", "fig3", "fig4", "case1", "case2", "case3")


def preset_config(name: str) -> ScenarioConfig:
    """Base scenario of a named preset: 1550 nm, 0.5 nm FWHM, g2_cross(0) = 20."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    cfg = ScenarioConfig(source=SourceConfig(g2_target=20.0))
    if name in CASES:
        cfg = replace(cfg, setup=CASES[name])
    return cfg


# -- scenario evaluation --------------------------------------------------

@dataclass
class PreparedSource:
    config: SourceConfig
    amplitude: SpectralAmplitude
    flux_param: float | None
    width: float | None


def prepare_source(src: SourceConfig) -> PreparedSource:
    if src.model == "tabulated":
        return PreparedSource(src, load_table(src.table), None, None)
    params = src.gaussian_params()
    delta = wavelength_to_detuning_width(params)
    grid = default_grid(delta, src.grid_points, src.grid_span)
    flux = src.flux if src.g2_target is None else flux_for_target_g2(params, src.g2_target, grid)
    return PreparedSource(src, gaussian_amplitude(params.with_flux(flux), grid), flux, delta)


def source_summary(prep: PreparedSource, ks) -> dict:
    out = {"mean_flux": mean_flux(ks), "g2_cross0": g2_cross_zero(ks)}
    if prep.flux_param is not None:
        out["flux_param"] = prep.flux_param
    try:
        out["coherence_time"] = coherence_time(ks)
    except WindowError:
        out["coherence_time"] = math.nan
    return out


class Runner:
    def __init__(self, cfg: ScenarioConfig, out_dir: Path, method: str = "fast", threads: int = 1,
                 stream=None):
        self.cfg = cfg
        self.out = out_dir
        self.method = method
        self.threads = threads
        self.stream = stream or sys.stdout
        self.written: list[Path] = []

    # output helpers
    def _fmt(self, x: float) -> str:
        return f"{x:.{self.cfg.output.precision}e}"

    def write_csv(self, name: str, title: str, columns, data, cfg: ScenarioConfig | None = None):
        cfg = cfg or self.cfg
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.cfg.output.prefix}{name}"
        lines = [f"# hom-twinbeam {__version__}: {title}", "# config:"]
        lines += [f"#   {line}" for line in config_to_text(cfg).splitlines()]
        lines.append("# columns: " + ", ".join(f"{c} [{u}]" for c, u in columns))
        lines.append(",".join(c for c, _ in columns))
        data = np.column_stack([np.asarray(col, dtype=float) for col in data])
        lines += [",".join(self._fmt(v) for v in row) for row in data]
        path.write_text("\n".join(lines) + "\n")
        self.written.append(path)
        return path

    def write_summary(self, summary: dict, name: str = "summary.json"):
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.cfg.output.prefix}{name}"
        text = json.dumps(_round(summary, self.cfg.output.precision), indent=2, sort_keys=True)
        path.write_text(text + "\n")
        self.written.append(path)
        print(text, file=self.stream)
        return path

    def sources(self, cfg: ScenarioConfig | None = None):
        cfg = cfg or self.cfg
        prep_a = prepare_source(cfg.source)
        prep_b = None if cfg.source_b is None else prepare_source(cfg.source_b)
        ks_a, ks_b = kernels_for(prep_a.amplitude, None if prep_b is None else prep_b.amplitude,
                                 self.method)
        return prep_a, prep_b, ks_a, ks_b

    # commands
    def spectrum(self, suffix: str = ""):
        prep_a, prep_b, _, _ = self.sources()
        for label, prep in (("", prep_a), ("_b", prep_b)):
            if prep is None:
                continue
            amp = prep.amplitude
            nu = amp.detunings
            intensity = amp.intensity
            peak = intensity.max() if intensity.max() > 0 else 1.0
            cols = [("detuning", "rad/ps"), ("wavelength", "nm"), ("r", "1"), ("theta", "rad"),
                    ("marginal_intensity", "ps"), ("normalized_intensity", "1")]
            data = [nu, detuning_to_wavelength(nu, prep.config.wavelength_nm), amp.r, amp.theta,
                    intensity, intensity / peak]
            self.write_csv(f"spectrum{label}{suffix}.csv", "marginal spectrum |alpha|^2", cols, data)
        return prep_a

    def g2(self, kind: str, cfg: ScenarioConfig | None = None, suffix: str = ""):
        cfg = cfg or self.cfg
        prep_a, _, ks_a, _ = self.sources(cfg)
        corr = cfg.correlation
        tau = _grid(corr.tau_start, corr.tau_stop, corr.tau_step)
        name = {"marginal": "g2_marginal", "cross": "g2_cross"}[kind]
        res = correlation_trace(ks_a, tau, name)
        self.write_csv(f"{name}{suffix}.csv", f"{name} of source a", [("tau", "ps"), (name, "1")],
                       [tau, res.values], cfg)
        return prep_a, ks_a

    def homdip(self, cfg: ScenarioConfig | None = None, suffix: str = ""):
        cfg = cfg or self.cfg
        prep_a, prep_b, ks_a, ks_b = self.sources(cfg)
        trace = hom_trace(ks_a, ks_b, cfg.setup, cfg.reduction)
        cols = [("delta_t", "ps"), ("p_total", "arb. units"), ("p_multiphoton", "arb. units")]
        self.write_csv(f"homdip{suffix}.csv", "four-fold coincidence density vs herald delay",
                       cols, [trace.delays, trace.p_total, trace.p_multiphoton], cfg)
        summary = source_summary(prep_a, ks_a)
        if prep_b is not None:
            summary["source_b"] = source_summary(prep_b, ks_b)
        summary.update(visibility=trace.visibility, p_infinity=trace.p_infinity, p_zero=trace.p_zero)
        return summary

    def sweep(self, cfg: ScenarioConfig | None = None, suffix: str = ""):
        cfg = cfg or self.cfg
        if cfg.source.model != "gaussian" or cfg.source_b is not None:
            raise ConfigError("sweep needs a single Gaussian source model")
        src = cfg.source
        params = src.gaussian_params()
        grid = default_grid(wavelength_to_detuning_width(params), src.grid_points, src.grid_span)
        rows = visibility_sweep(params, cfg.setup, cfg.reduction, cfg.sweep.g2_targets,
                                grid=grid, method=self.method, threads=self.threads)
        cols = [("g2_target", "1"), ("g2_cross0", "1"), ("flux_param", "photons/ps"),
                ("mean_flux", "photons/ps"), ("visibility", "1")]
        data = [[getattr(r, k) for r in rows] for k in ("g2_target", "g2_cross0", "flux_param",
                                                        "mean_flux", "visibility")]
        self.write_csv(f"sweep{suffix}.csv", "dip visibility vs g2_cross(0)", cols, data, cfg)
        return rows

    def preset(self, name: str):
        if name == "fig2":
            prep = self.spectrum()
            _, ks = self.g2("marginal")
            summary = source_summary(prep, ks)
            summary["coherence_time_lowgain"] = math.sqrt(math.pi) / prep.width
            summary["coherence_time_from_g2"] = coherence_time_from_g2(ks)
            return self.write_summary(summary)
        if name == "fig4":
            out = {}
            for case in ("ideal", "case2", "case3"):
                rows = self.sweep(replace(self.cfg, setup=CASES[case]), f"_{case}")
                out[case] = [[r.g2_cross0, r.visibility] for r in rows]
            return self.write_summary(out)
        base = self.cfg if name == "fig3" else replace(self.cfg, setup=CASES[name])
        out = {}
        for target in DIP_TARGETS:
            tag = f"_g{target:g}"
            cfg = replace(base, source=replace(base.source, flux=None, g2_target=target))
            self.g2("cross", cfg, tag)
            out[f"g2_{target:g}"] = self.homdip(cfg, tag)
        return self.write_summary(out)


def _grid(start, stop, step):
    n = int(round((stop - start) / step)) + 1
    return start + step * np.arange(n)


def _round(obj, digits):
    if isinstance(obj, dict):
        return {k: _round(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, digits) for v in obj]
    if isinstance(obj, float):
        return None if math.isnan(obj) else float(f"{obj:.{digits}g}")
    return obj


# -- argument handling ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hom-twinbeam",
        description="HOM interference between heralded photons from two narrowband twin-beam sources.",
        epilog="scenario file keys:\n" + KEY_DOCS,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    base = parser.add_mutually_exclusive_group()
    base.add_argument("--config", type=Path, help="scenario file (key = value sections)")
    base.add_argument("--preset", choices=PRESETS, help="use a preset as the base scenario")
    parser.add_argument("--out", type=Path, help="output directory (overrides [output] dir)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    parser.add_argument("--method", choices=("direct", "fast"), default="fast",
                        help="kernel evaluation method")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", help="marginal spectrum table")
    g2 = sub.add_parser("g2", help="g2 trace of source a")
    g2.add_argument("kind", choices=("marginal", "cross"))
    sub.add_parser("homdip", help="HOM dip trace and visibility")
    sub.add_parser("sweep", help="visibility versus g2_cross(0)")
    sub.add_parser("check", help="oracle-equivalence and identity checks")
    pre = sub.add_parser("preset", help="regenerate a figure data set")
    pre.add_argument("name", choices=PRESETS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return EXIT_CONFIG
    threads = args.threads
    try:
        if args.config is not None:
            cfg = parse_config(args.config)
        elif args.preset is not None:
            cfg = preset_config(args.preset)
        elif args.command == "preset":
            cfg = preset_config(args.name)
        else:
            cfg = ScenarioConfig(source=SourceConfig(g2_target=20.0))
        out = args.out if args.out is not None else Path(cfg.output.dir)
        runner = Runner(cfg, out, args.method, threads)

        if args.command == "spectrum":
            runner.spectrum()
        elif args.command == "g2":
            prep, ks = runner.g2(args.kind)
            runner.write_summary(source_summary(prep, ks))
        elif args.command == "homdip":
            runner.write_summary(runner.homdip())
        elif args.command == "sweep":
            rows = runner.sweep()
            runner.write_summary({"g2_visibility": [[r.g2_cross0, r.visibility] for r in rows]})
        elif args.command == "check":
            from .checks import run_checks
            results = run_checks(method=args.method)
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
            return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_CHECK_FAILED
        elif args.command == "preset":
            runner.preset(args.name)
    except (ConfigError, SpectrumError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WindowError as exc:
        print(f"numerical window error: {exc}\n"
              "hint: widen the frequency grid or add grid points", file=sys.stderr)
        return EXIT_WINDOW
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
