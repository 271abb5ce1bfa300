"""Command-line front end: scenario configs, figure-reproduction runs, and
data export.

Subcommands::

    cat-amp run <config.json> [--out DIR] [--nc INT] [--fast]
    cat-amp reproduce {fig1,fig3b,fig4,fig5} [--out DIR] [--nc INT] [--fast]

Scenario configs are JSON with a ``mode`` key (theory-gain, theory-curve,
simulate, stirap-scan, wigner); unknown keys are rejected.  Every run writes
a ``manifest.json`` recording the config hash, library version and wall
time, CSV data files (RFC 4180, header row, 9 significant digits, written
atomically), and — for the figure-reproduction paths — rendered PNG figures
alongside the delimited data.  All computations are deterministic, so
identical configs produce byte-identical CSV outputs.

Exit codes: 0 success, 2 schema violation, 3 numerical failure, 4 I/O
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from . import MHZ, __version__
from .hilbert import DensityOp, DimensionError, StateInvariantError
from .jc_model import DeviceParams, SweepSchedule
from .lindblad import (IntegrationDivergedError, IntegratorConfig,
                       StiffnessError)
from .protocol import (ProtocolConfig, TruncationAlarm, amplify,
                       default_config, stirap_scan)
from .pulses import ROUND_WIDTH, table1_schedule
from .states import (BracketError, CatSpec, TruncationError, cat_ket,
                     optimal_gain, theory_curve)
from .wigner import GridSpec, wigner

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERICS = 3
EXIT_IO = 4

_NUMERIC_ERRORS = (TruncationError, TruncationAlarm, StiffnessError,
                   IntegrationDivergedError, BracketError, DimensionError,
                   StateInvariantError, np.linalg.LinAlgError,
                   FloatingPointError)


class SchemaError(ValueError):
    """Scenario config violates the published schema."""


# ---------------------------------------------------------------------------
# Config schema


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _positive(v) -> bool:
    return _is_number(v) and v > 0


def _non_negative(v) -> bool:
    return _is_number(v) and v >= 0


def _parity(v) -> bool:
    return v in ("even", "odd")


def _k_value(v) -> bool:
    return v in (1, 2)


def _int_ge2(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 2


# key -> (required, validator, description)
_COMMON_SCHEMA = {
    "mode": (True, lambda v: v in _MODES, "one of the scenario modes"),
    "output_path": (False, lambda v: isinstance(v, str) and v,
                    "output directory"),
}
_MODE_SCHEMA = {
    "theory-gain": {
        "alpha": (True, _positive, "positive number"),
        "parity": (True, _parity, "'even' or 'odd'"),
        "k": (True, _k_value, "1 or 2"),
    },
    "theory-curve": {
        "alpha": (True, _positive, "positive number"),
        "parity": (True, _parity, "'even' or 'odd'"),
        "k": (True, _k_value, "1 or 2"),
        "alpha_prime_min": (False, _positive, "positive number"),
        "alpha_prime_max": (False, _positive, "positive number"),
        "alpha_prime_step": (False, _positive, "positive number"),
    },
    "simulate": {
        "alpha": (True, _positive, "positive number"),
        "parity": (True, _parity, "'even' or 'odd'"),
        "k": (True, _k_value, "1 or 2"),
        "kappa_khz": (False, _non_negative, "kappa/2pi in kHz, >= 0"),
        "gamma_minus_khz": (False, _non_negative, "gamma_-/2pi in kHz"),
        "gamma_phi_khz": (False, _non_negative, "gamma_phi/2pi in kHz"),
        "cavity_dim": (False, _int_ge2, "integer >= 2"),
        "schedule_mode": (False,
                          lambda v: v in ("verbatim", "derived", "calibrated"),
                          "'verbatim', 'derived' or 'calibrated'"),
        "snap_mode": (False, lambda v: v in ("fit", "table", "none"),
                      "'fit', 'table' or 'none'"),
        "rel_tol": (False, _positive, "positive number"),
        "save_state": (False, lambda v: isinstance(v, bool), "boolean"),
    },
    "stirap-scan": {
        "tau_min": (True, _is_number, "number (us)"),
        "tau_max": (True, _is_number, "number (us)"),
        "n_tau": (True, _int_ge2, "integer >= 2"),
        "delta0_mhz": (False, _non_negative, "Delta_0/2pi in MHz"),
        "cavity_dim": (False, _int_ge2, "integer >= 2"),
    },
    "wigner": {
        "alpha": (True, _positive, "positive number"),
        "parity": (True, _parity, "'even' or 'odd'"),
        "cavity_dim": (False, _int_ge2, "integer >= 2"),
        "x_max": (False, _positive, "positive number"),
        "n_points": (False, _int_ge2, "integer >= 2"),
    },
}
_MODES = tuple(_MODE_SCHEMA)


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: mode plus its mode-specific settings."""

    mode: str
    settings: dict = field(default_factory=dict)
    output_path: str | None = None

    @property
    def canonical_json(self) -> str:
        payload = {"mode": self.mode, **self.settings}
        if self.output_path is not None:
            payload["output_path"] = self.output_path
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json.encode()).hexdigest()


def validate_config(raw) -> ScenarioConfig:
    """Validate a parsed JSON object against the scenario schema."""
    if not isinstance(raw, dict):
        raise SchemaError("config root must be a JSON object")
    mode = raw.get("mode")
    if mode not in _MODES:
        raise SchemaError(
            f"mode must be one of {sorted(_MODES)}, got {mode!r}")
    schema = {**_COMMON_SCHEMA, **_MODE_SCHEMA[mode]}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise SchemaError(f"unknown config keys: {unknown}")
    for key, (required, check, desc) in schema.items():
        if key not in raw:
            if required:
                raise SchemaError(f"missing required key {key!r} ({desc})")
            continue
        if key == "mode":
            continue
        if not check(raw[key]):
            raise SchemaError(
                f"invalid value for {key!r}: {raw[key]!r} (expected {desc})")
    settings = {k: v for k, v in raw.items()
                if k not in ("mode", "output_path")}
    return ScenarioConfig(mode, settings, raw.get("output_path"))


# ---------------------------------------------------------------------------
# Output helpers


def _atomic_write(path: str, data: str) -> None:
    """Write text via a temp file + rename so partial files never land."""
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-",
                               suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    """One CSV field: 9 significant digits for floats, quoted text."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if _is_number(value) or isinstance(value, np.floating):
        return "%.9g" % float(value)
    text = str(value)
    if any(ch in text for ch in ',"\r\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path: str, header: list[str], rows) -> None:
    """RFC 4180 CSV: CRLF line endings, header row, 9 significant digits."""
    lines = [",".join(_fmt(h) for h in header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _atomic_write(path, "\r\n".join(lines) + "\r\n")


def write_manifest(out_dir: str, config_payload: dict, outputs: list[str],
                   wall_time: float, extra: dict | None = None) -> str:
    canonical = json.dumps(config_payload, sort_keys=True,
                           separators=(",", ":"))
    manifest = {
        "config": config_payload,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "version": __version__,
        "wall_time_seconds": round(wall_time, 3),
        "outputs": sorted(outputs),
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    _atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


def _progress(label: str):
    def report(frac: float) -> None:
        print(f"{label}: {100.0 * frac:3.0f}%", file=sys.stderr, flush=True)
    return report


def _plot_lines(path: str, curves, xlabel: str, ylabel: str,
                title: str) -> None:
    """Render labelled (x, y) curves to a PNG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, x, y in curves:
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(curves) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_matrix(path: str, matrix: np.ndarray, title: str,
                 extent=None, cmap: str = "RdBu_r",
                 symmetric: bool = False) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    if symmetric:
        vmax = float(np.max(np.abs(matrix))) or 1.0
        kwargs = {"vmin": -vmax, "vmax": vmax}
    else:
        kwargs = {}
    im = ax.imshow(matrix, origin="lower", extent=extent, cmap=cmap,
                   aspect="auto", **kwargs)
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Scenario runners


def _device_from_settings(s: dict, nc_override: int | None,
                          fast: bool) -> DeviceParams:
    nc = s.get("cavity_dim", 20)
    if nc_override is not None:
        nc = nc_override
    elif fast:
        nc = min(nc, 12)
    khz = 1e-3 * MHZ
    return DeviceParams(kappa=s.get("kappa_khz", 0.0) * khz,
                        gamma_minus=s.get("gamma_minus_khz", 0.0) * khz,
                        gamma_phi=s.get("gamma_phi_khz", 0.0) * khz,
                        cavity_dim=nc)


def _run_theory_gain(cfg: ScenarioConfig, out_dir: str, args) -> dict:
    s = cfg.settings
    result = optimal_gain(CatSpec(s["alpha"], s["parity"]), s["k"])
    return {"mode": cfg.mode, "F_max": round(result.fidelity, 9),
            "G": round(result.gain, 9),
            "alpha_prime": round(result.gain * s["alpha"], 9)}


def _run_theory_curve(cfg: ScenarioConfig, out_dir: str, args) -> dict:
    s = cfg.settings
    alpha = s["alpha"]
    lo = s.get("alpha_prime_min", alpha)
    hi = s.get("alpha_prime_max", 2.5 * alpha)
    step = s.get("alpha_prime_step", 0.005)
    if hi <= lo:
        raise SchemaError("alpha_prime_max must exceed alpha_prime_min")
    grid = np.arange(lo, hi + 0.5 * step, step)
    curve = theory_curve(CatSpec(alpha, s["parity"]), s["k"], grid)
    path = os.path.join(out_dir, "theory_curve.csv")
    write_csv(path, ["alpha_prime", "fidelity"], curve)
    best = max(curve, key=lambda row: row[1])
    return {"mode": cfg.mode, "outputs": [path],
            "F_max": round(best[1], 9), "alpha_prime": round(best[0], 9)}


def _run_simulate(cfg: ScenarioConfig, out_dir: str, args) -> dict:
    s = cfg.settings
    device = _device_from_settings(s, args.nc, args.fast)
    decoherent = device.kappa > 0 or device.gamma_minus > 0 \
        or device.gamma_phi > 0
    mode = s.get("schedule_mode", "calibrated")
    rel_tol = s.get("rel_tol", 1e-6 if args.fast else 1e-7)
    integ = IntegratorConfig(method="adaptive_dop853", rel_tol=rel_tol,
                             abs_tol=1e-9, n_samples=9,
                             progress=_progress("simulate"))
    config = ProtocolConfig(
        device=device, sweep=SweepSchedule(),
        schedule_first=table1_schedule("first_edag", device, mode=mode),
        schedule_second=table1_schedule("second_edag", device, mode=mode),
        snap_mode=s.get("snap_mode", "fit"),
        decoherence_on=decoherent, integrator=integ)
    report = amplify(s["alpha"], s["parity"], s["k"], config)
    summary = {
        "mode": cfg.mode,
        "fidelity_vs_target": round(report.fidelity_vs_target, 9),
        "best_alpha_prime": round(report.best_alpha_prime, 9),
        "gain": round(report.gain, 9),
        "parity_expectation": round(report.parity_expectation, 9),
        "runtime_seconds": round(report.runtime_seconds, 3),
    }
    outputs = []
    if s.get("save_state", False):
        rho = report.final_cavity_state.matrix
        path = os.path.join(out_dir, "final_cavity_state.csv")
        write_csv(path, ["n", "m", "re", "im"],
                  [(n, m, rho[n, m].real, rho[n, m].imag)
                   for n in range(rho.shape[0]) for m in range(rho.shape[1])])
        outputs.append(path)
    summary["outputs"] = outputs
    return summary


def _run_stirap_scan(cfg: ScenarioConfig, out_dir: str, args) -> dict:
    s = cfg.settings
    if s["tau_max"] <= s["tau_min"]:
        raise SchemaError("tau_max must exceed tau_min")
    nc = s.get("cavity_dim", 6)
    if args.nc is not None:
        nc = args.nc
    config = default_config(cavity_dim=nc)
    taus = np.linspace(s["tau_min"], s["tau_max"], s["n_tau"])
    delta0 = s.get("delta0_mhz", 10.0) * MHZ
    points = stirap_scan(taus, delta0, config)
    path = os.path.join(out_dir, "stirap_scan.csv")
    write_csv(path, ["tau_us", "efficiency"], points)
    return {"mode": cfg.mode, "outputs": [path],
            "max_efficiency": round(max(e for _, e in points), 9)}


def _wigner_csv_rows(grid):
    for i, p in enumerate(grid.p_axis):
        for j, x in enumerate(grid.x_axis):
            yield (x, p, grid.values[i, j])


def _run_wigner(cfg: ScenarioConfig, out_dir: str, args) -> dict:
    s = cfg.settings
    nc = s.get("cavity_dim", 30)
    if args.nc is not None:
        nc = args.nc
    half = s.get("x_max", 4.0)
    n_pts = s.get("n_points", 41 if args.fast else 81)
    ket = cat_ket(CatSpec(s["alpha"], s["parity"]), nc)
    rho = DensityOp(np.outer(ket.amplitudes, ket.amplitudes.conj()), (1, nc))
    grid = wigner(rho, GridSpec(-half, half, -half, half, n_pts, n_pts))
    path = os.path.join(out_dir, "wigner.csv")
    write_csv(path, ["x", "p", "W"], _wigner_csv_rows(grid))
    meta = {"convention": "beta = x + i p; W = (2/pi) Tr[rho D P D^dag]",
            "x_axis": list(grid.x_axis), "p_axis": list(grid.p_axis)}
    meta_path = os.path.join(out_dir, "wigner_axes.json")
    _atomic_write(meta_path, json.dumps(meta, indent=2) + "\n")
    return {"mode": cfg.mode, "outputs": [path, meta_path],
            "W_origin": round(float(
                grid.values[len(grid.p_axis) // 2,
                            len(grid.x_axis) // 2]), 9)}


_RUNNERS = {
    "theory-gain": _run_theory_gain,
    "theory-curve": _run_theory_curve,
    "simulate": _run_simulate,
    "stirap-scan": _run_stirap_scan,
    "wigner": _run_wigner,
}


def run_scenario(config_path: str, args) -> dict:
    try:
        with open(config_path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc}") from exc
    cfg = validate_config(raw)
    out_dir = args.out or cfg.output_path or "."
    _ensure_dir(out_dir)
    t0 = time.time()
    summary = _RUNNERS[cfg.mode](cfg, out_dir, args)
    outputs = list(summary.get("outputs", []))
    manifest = write_manifest(out_dir, json.loads(cfg.canonical_json),
                              outputs, time.time() - t0)
    summary["manifest"] = manifest
    return summary


# ---------------------------------------------------------------------------
# Figure reproduction


def _reproduce_fig1(out_dir: str, args) -> dict:
    alphas = (1.0, 1.5, 2.0, 2.5)
    rows, curves, maxima = [], [], {}
    for parity in ("even", "odd"):
        for alpha in alphas:
            grid = np.arange(alpha, 2.5 * alpha + 0.0025, 0.005)
            curve = theory_curve(CatSpec(alpha, parity), 2, grid)
            label = f"{parity} alpha={alpha}"
            curves.append((label, [ap for ap, _ in curve],
                           [f for _, f in curve]))
            rows.extend((alpha, parity, ap, f) for ap, f in curve)
            best = max(curve, key=lambda r: r[1])
            maxima[label] = {"alpha_prime": round(best[0], 6),
                             "F_max": round(best[1], 6)}
    csv_path = os.path.join(out_dir, "fig1_fidelity_curves.csv")
    write_csv(csv_path, ["alpha", "parity", "alpha_prime", "fidelity"], rows)
    png_path = os.path.join(out_dir, "fig1_fidelity_curves.png")
    _plot_lines(png_path, curves, "alpha'", "fidelity",
                "Two-photon shift: fidelity vs target cat amplitude")
    return {"figure": "fig1", "outputs": [csv_path, png_path],
            "maxima": maxima}


def _reproduce_fig3b(out_dir: str, args) -> dict:
    alpha = 1.5
    rows, curves, markers = [], [], {}
    for k, parity_out in ((1, "odd"), (2, "even")):
        grid = np.arange(alpha, 2.5 * alpha + 0.0025, 0.005)
        curve = theory_curve(CatSpec(alpha, "even"), k, grid)
        label = f"k={k} theory"
        curves.append((label, [ap for ap, _ in curve],
                       [f for _, f in curve]))
        rows.extend((k, ap, f) for ap, f in curve)
        best = max(curve, key=lambda r: r[1])
        markers[label] = {"alpha_prime": round(best[0], 6),
                          "F_max": round(best[1], 6)}
    csv_path = os.path.join(out_dir, "fig3b_theory_bounds.csv")
    write_csv(csv_path, ["k", "alpha_prime", "fidelity"], rows)
    png_path = os.path.join(out_dir, "fig3b_theory_bounds.png")
    _plot_lines(png_path, curves, "alpha'", "fidelity",
                "Theory bounds for E^dag and (E^dag)^2 on |SC+_1.5>")
    return {"figure": "fig3b", "outputs": [csv_path, png_path],
            "markers": markers}


def _fig4_panel(out_dir: str, name: str, rho: DensityOp,
                outputs: list[str]) -> None:
    mags = np.abs(rho.matrix)
    csv_path = os.path.join(out_dir, f"fig4_{name}_density.csv")
    write_csv(csv_path, ["n", "m", "abs_rho"],
              [(n, m, mags[n, m]) for n in range(mags.shape[0])
               for m in range(mags.shape[1])])
    _plot_matrix(os.path.join(out_dir, f"fig4_{name}_density.png"), mags,
                 f"|rho_nm| ({name})", cmap="viridis")
    grid = wigner(rho)
    wig_path = os.path.join(out_dir, f"fig4_{name}_wigner.csv")
    write_csv(wig_path, ["x", "p", "W"], _wigner_csv_rows(grid))
    _plot_matrix(os.path.join(out_dir, f"fig4_{name}_wigner.png"),
                 grid.values, f"W(x, p) ({name})",
                 extent=(grid.x_axis[0], grid.x_axis[-1],
                         grid.p_axis[0], grid.p_axis[-1]),
                 symmetric=True)
    outputs.extend([csv_path, wig_path,
                    os.path.join(out_dir, f"fig4_{name}_density.png"),
                    os.path.join(out_dir, f"fig4_{name}_wigner.png")])


def _reproduce_fig4(out_dir: str, args) -> dict:
    alpha = 1.5
    nc = args.nc if args.nc is not None else (14 if args.fast else 20)
    rel_tol = 1e-6 if args.fast else 1e-7
    outputs: list[str] = []
    cat = cat_ket(CatSpec(alpha, "even"), nc)
    _fig4_panel(out_dir, "a_initial",
                DensityOp(np.outer(cat.amplitudes, cat.amplitudes.conj()),
                          (1, nc)), outputs)
    summaries = {}
    runs = [("b_single_edag", 1, 0.0), ("c_double_edag", 2, 0.0)]
    if not args.fast:
        runs.append(("d_double_edag_decoherent", 2, 0.25))
    for name, k, kappa_khz in runs:
        khz = 1e-3 * MHZ
        device = DeviceParams(kappa=kappa_khz * khz,
                              gamma_minus=10 * kappa_khz * khz,
                              gamma_phi=10 * kappa_khz * khz,
                              cavity_dim=nc)
        integ = IntegratorConfig(method="adaptive_dop853", rel_tol=rel_tol,
                                 abs_tol=1e-9, n_samples=9,
                                 progress=_progress(name))
        config = ProtocolConfig(
            device=device, sweep=SweepSchedule(),
            schedule_first=table1_schedule("first_edag", device,
                                           mode="calibrated"),
            schedule_second=table1_schedule("second_edag", device,
                                            mode="calibrated"),
            snap_mode="fit", decoherence_on=kappa_khz > 0, integrator=integ)
        report = amplify(alpha, "even", k, config)
        _fig4_panel(out_dir, name, report.final_cavity_state, outputs)
        summaries[name] = {"fidelity": round(report.fidelity_vs_target, 6),
                           "gain": round(report.gain, 6)}
    return {"figure": "fig4", "outputs": outputs, "runs": summaries}


def _reproduce_fig5(out_dir: str, args) -> dict:
    nc = args.nc if args.nc is not None else 6
    config = default_config(cavity_dim=nc)
    width = ROUND_WIDTH
    taus = np.concatenate([
        np.linspace(-5.0 * width, -0.5, 16 if args.fast else 32),
        np.linspace(0.5, 5.0 * width, 16 if args.fast else 32)])
    points = stirap_scan(taus, 10.0 * MHZ, config)
    csv_path = os.path.join(out_dir, "fig5_stirap_efficiency.csv")
    write_csv(csv_path, ["tau_us", "efficiency"], points)
    png_path = os.path.join(out_dir, "fig5_stirap_efficiency.png")
    _plot_lines(png_path,
                [("efficiency", [t for t, _ in points],
                  [e for _, e in points])],
                "tau (us)", "transfer efficiency",
                "STIRAP-type transfer efficiency vs pulse offset")
    return {"figure": "fig5", "outputs": [csv_path, png_path]}


_FIGURES = {
    "fig1": _reproduce_fig1,
    "fig3b": _reproduce_fig3b,
    "fig4": _reproduce_fig4,
    "fig5": _reproduce_fig5,
}


def reproduce_figure(name: str, args) -> dict:
    out_dir = args.out or "."
    _ensure_dir(out_dir)
    t0 = time.time()
    summary = _FIGURES[name](out_dir, args)
    payload = {"reproduce": name, "fast": bool(args.fast),
               "nc": args.nc}
    manifest = write_manifest(out_dir, payload, summary.get("outputs", []),
                              time.time() - t0)
    summary["manifest"] = manifest
    return summary


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cat-amp",
        description="Deterministic cat-state amplification simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a JSON scenario config")
    run_p.add_argument("config", help="path to scenario JSON")
    rep_p = sub.add_parser("reproduce", help="regenerate figure data")
    rep_p.add_argument("figure", choices=sorted(_FIGURES),
                       help="which figure to reproduce")
    for p in (run_p, rep_p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--nc", type=int, default=None,
                       help="cavity truncation override")
        p.add_argument("--fast", action="store_true",
                       help="smoke-test dimensions and tolerances")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            summary = run_scenario(args.config, args)
        else:
            summary = reproduce_figure(args.figure, args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        if getattr(exc, "filename", None) == getattr(args, "config", None):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
