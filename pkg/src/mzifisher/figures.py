"""Static parameter manifest for the reproducible data figures and the code that renders it.

Every figure is described by plain data in :data:`MANIFEST`.  Each entry has
a ``kind`` (``"qfi"`` sweeps ``t^2`` of the first beam splitter, ``"sens"``
sweeps the internal phase) and a list of series.  A series names a state
family and, for sensitivity figures, the detector, scenario and the two beam
splitters.  Beam splitters are either a number (amplitude ``t``),
``"balanced"`` or ``"opt"`` (the ``F^(i)``-optimal first splitter and the
matching second-splitter optimum).
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .closed_forms import (
    DualCoherent,
    SingleCoherent,
    StateFamily,
    best_asym_t,
    coh_sqz_pmc,
    dual_coherent_t_opt,
    family_qfi,
    generic_t_opt,
    high_alpha_t_opt,
    sqzcoh_pmc,
    t_opt_coefficients,
    SQUEEZED_FAMILIES,
)
from .detection import (
    Asym,
    InterferometerConfig,
    Sym,
    bs2_t_opt,
    difference_intensity,
    family_point,
    homodyne,
    optimal_working_point,
)
from .errors import DomainError, MziFisherError
from .fisher import BeamSplitter, QfiMode, qcrb
from .moments import ComplexAmplitude

HALF_PI = math.pi / 2.0

T_SQUARED_POINTS = 101
PHI_POINTS = 721

MANIFEST: Dict[int, dict] = {
    4: {
        "kind": "qfi",
        "series": [{"name": "coh", "family": "single", "alpha": 10.0}],
    },
    5: {
        "kind": "qfi",
        "series": [
            {"name": "dtheta_0", "pmc": "dtheta_0", "family": "dual", "alpha": 10.0, "beta": 5.0, "delta_theta": 0.0},
            {"name": "dtheta_pi_2", "pmc": "dtheta_pi_2", "family": "dual", "alpha": 10.0, "beta": 5.0,
             "delta_theta": HALF_PI},
        ],
    },
    6: {
        "kind": "qfi",
        "series": [
            {"name": "r_0.5", "family": "coh_sqz", "alpha": 10.0, "r": 0.5},
            {"name": "r_1.2", "family": "coh_sqz", "alpha": 10.0, "r": 1.2},
        ],
    },
    7: {
        "kind": "qfi",
        "series": [
            {"name": "z_0.35", "family": "sqzcoh", "alpha": 10.0, "r": 1.2, "z": 0.35},
            {"name": "z_0.75", "family": "sqzcoh", "alpha": 10.0, "r": 1.2, "z": 0.75},
        ],
    },
    9: {
        "kind": "sens",
        "series": [
            {"name": "df", "family": "single", "alpha": 10.0, "detector": "df", "scenario": "asym",
             "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i", "family": "single", "alpha": 10.0, "detector": "hom", "scenario": "asym",
             "t": 0.99, "tprime": 0.01},
            {"name": "hom_ii", "family": "single", "alpha": 10.0, "detector": "hom", "scenario": "sym",
             "t": 0.99, "tprime": 0.01},
        ],
    },
    10: {
        "kind": "sens",
        "series": [
            {"name": "df", "pmc": "dtheta_0", "family": "dual", "alpha": 10.0, "beta": 5.0, "delta_theta": 0.0,
             "detector": "df", "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i", "pmc": "dtheta_pi_2", "family": "dual", "alpha": 10.0, "beta": 5.0,
             "delta_theta": HALF_PI, "detector": "hom", "scenario": "asym", "t": "opt", "tprime": 0.01},
            {"name": "hom_ii", "pmc": "dtheta_pi_2", "family": "dual", "alpha": 10.0, "beta": 5.0,
             "delta_theta": HALF_PI, "detector": "hom", "scenario": "sym", "t": "opt", "tprime": 0.01},
        ],
    },
    11: {
        "kind": "sens",
        "series": [
            {"name": "df", "family": "coh_sqz", "alpha": 10.0, "r": 1.2, "detector": "df", "scenario": "asym",
             "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i", "family": "coh_sqz", "alpha": 10.0, "r": 1.2, "detector": "hom", "scenario": "asym",
             "t": "opt", "tprime": "opt"},
        ],
    },
    12: {
        "kind": "sens",
        "series": [
            {"name": "df_r_0.5", "family": "coh_sqz", "alpha": 1000.0, "r": 0.5, "detector": "df",
             "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i_r_0.5", "family": "coh_sqz", "alpha": 1000.0, "r": 0.5, "detector": "hom",
             "scenario": "asym", "t": "opt", "tprime": "opt"},
            {"name": "df_r_1.2", "family": "coh_sqz", "alpha": 1000.0, "r": 1.2, "detector": "df",
             "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i_r_1.2", "family": "coh_sqz", "alpha": 1000.0, "r": 1.2, "detector": "hom",
             "scenario": "asym", "t": "opt", "tprime": "opt"},
        ],
    },
    13: {
        "kind": "sens",
        "series": [
            {"name": "df", "family": "sqzcoh", "alpha": 10.0, "r": 1.2, "z": 0.75, "detector": "df",
             "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i", "family": "sqzcoh", "alpha": 10.0, "r": 1.2, "z": 0.75, "detector": "hom",
             "scenario": "asym", "t": "opt", "tprime": "opt"},
        ],
    },
    14: {
        "kind": "sens",
        "series": [
            {"name": "df_z_0", "family": "coh_sqz", "alpha": 1000.0, "r": 1.2, "detector": "df",
             "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i_z_0", "family": "coh_sqz", "alpha": 1000.0, "r": 1.2, "detector": "hom",
             "scenario": "asym", "t": "opt", "tprime": "opt"},
            {"name": "df_z_0.75", "family": "sqzcoh", "alpha": 1000.0, "r": 1.2, "z": 0.75, "detector": "df",
             "scenario": "asym", "t": "balanced", "tprime": "balanced"},
            {"name": "hom_i_z_0.75", "family": "sqzcoh", "alpha": 1000.0, "r": 1.2, "z": 0.75, "detector": "hom",
             "scenario": "asym", "t": "opt", "tprime": "opt"},
        ],
    },
}

FIGURE_IDS = tuple(sorted(MANIFEST))
QFI_COLUMNS = ("f_2p", "f_i", "f_ii")
QCRB_COLUMNS = ("qcrb_2p", "qcrb_i", "qcrb_ii")
MODE_COLUMNS = {QfiMode.TWO_PARAM: "f_2p", QfiMode.ASYM_SINGLE: "f_i", QfiMode.SYM_SINGLE: "f_ii"}


# -- table output ------------------------------------------------------------------------

def format_cell(value) -> str:
    """17 significant digits; non-finite or missing numbers become an empty cell."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    value = float(value)
    if not math.isfinite(value):
        return ""
    return format(value, ".17g")


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_json(payload) -> str:
    return json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n"


# -- manifest interpretation ----------------------------------------------------------------

def build_family(series: dict) -> StateFamily:
    kind = series["family"]
    alpha = series["alpha"]
    if kind == "single":
        return SingleCoherent(ComplexAmplitude(alpha, 0.0))
    if kind == "dual":
        return DualCoherent(ComplexAmplitude(alpha, series["delta_theta"]), ComplexAmplitude(series["beta"], 0.0))
    if kind == "coh_sqz":
        return coh_sqz_pmc(alpha, series["r"])
    if kind == "sqzcoh":
        return sqzcoh_pmc(alpha, series["r"], series["z"])
    raise DomainError(f"unknown family {kind!r} in figure manifest")


def safe_qfi(fam: StateFamily, bs: BeamSplitter, mode: QfiMode) -> Optional[float]:
    try:
        return family_qfi(fam, bs, mode)
    except MziFisherError:
        return None


def safe_qcrb(f: Optional[float]) -> Optional[float]:
    if f is None:
        return None
    try:
        return qcrb(f)
    except MziFisherError:
        return None


def _first_splitter(fam: StateFamily, choice) -> BeamSplitter:
    if choice == "balanced":
        return BeamSplitter.balanced()
    if choice == "opt":
        return BeamSplitter(best_asym_t(fam))
    return BeamSplitter(choice)


def _second_splitter(fam: StateFamily, choice, t1: float) -> BeamSplitter:
    if choice == "balanced":
        return BeamSplitter.balanced()
    if choice == "opt":
        return BeamSplitter(bs2_t_opt(fam, t1))
    return BeamSplitter(choice)


def series_config(fam: StateFamily, series: dict) -> InterferometerConfig:
    bs1 = _first_splitter(fam, series["t"])
    bs2 = _second_splitter(fam, series["tprime"], bs1.t)
    scenario = Sym() if series["scenario"] == "sym" else Asym()
    return InterferometerConfig(bs1, bs2, scenario)


def _series_detector(series: dict):
    return difference_intensity() if series["detector"] == "df" else homodyne(0.0)


def _optima(fam: StateFamily) -> dict:
    """Closed-form first-splitter optima of a family, as ``t^2`` values."""
    out: dict = {"best_asym_t_squared": best_asym_t(fam) ** 2}
    if isinstance(fam, DualCoherent):
        try:
            out["t_opt_2p_squared"] = dual_coherent_t_opt(fam.alpha, fam.beta, QfiMode.TWO_PARAM) ** 2
        except MziFisherError:
            out["t_opt_2p_squared"] = None
    if isinstance(fam, SQUEEZED_FAMILIES):
        t = generic_t_opt(t_opt_coefficients(fam))
        out["generic_t_opt_squared"] = None if t is None else t * t
        try:
            out["high_alpha_t_opt_squared"] = high_alpha_t_opt(fam) ** 2
        except MziFisherError:
            out["high_alpha_t_opt_squared"] = None
    return out


def _parameters(series: dict) -> dict:
    return {k: v for k, v in series.items() if k != "name"}


def qfi_table(fig: dict) -> tuple:
    header = ("series", "t_squared") + QFI_COLUMNS
    rows: List[tuple] = []
    sidecar = []
    grid = np.linspace(0.0, 1.0, T_SQUARED_POINTS)
    for series in fig["series"]:
        fam = build_family(series)
        for u in grid:
            bs = BeamSplitter.from_t_squared(float(u))
            rows.append((series["name"], float(u)) + tuple(safe_qfi(fam, bs, m) for m in QfiMode))
        sidecar.append({"name": series["name"], "parameters": _parameters(series), **_optima(fam)})
    return header, rows, sidecar


def sensitivity_table(fig: dict) -> tuple:
    header = ("series", "phi", "delta_phi") + QCRB_COLUMNS
    rows: List[tuple] = []
    sidecar = []
    grid = np.linspace(0.0, 2.0 * math.pi, PHI_POINTS)
    for series in fig["series"]:
        fam = build_family(series)
        cfg = series_config(fam, series)
        det = _series_detector(series)
        bounds = tuple(safe_qcrb(safe_qfi(fam, cfg.bs1, m)) for m in QfiMode)
        for phi in grid:
            rows.append((series["name"], float(phi), family_point(fam, cfg, det, float(phi)).delta_phi) + bounds)
        phi_opt = optimal_working_point(fam, det, cfg)
        sidecar.append({
            "name": series["name"],
            "parameters": _parameters(series),
            "t_squared": cfg.bs1.t_squared,
            "tprime_squared": cfg.bs2.t_squared,
            "phi_opt": phi_opt,
            "best_delta_phi": family_point(fam, cfg, det, phi_opt).delta_phi,
            **dict(zip(QCRB_COLUMNS, bounds)),
            **_optima(fam),
        })
    return header, rows, sidecar


def figure_outputs(fid: int) -> Dict[str, str]:
    """File name to file content for one figure; purely computed, nothing written."""
    if fid not in MANIFEST:
        raise DomainError(f"figure {fid} is not reproducible; choose one of {list(FIGURE_IDS)}")
    fig = MANIFEST[fid]
    builder = qfi_table if fig["kind"] == "qfi" else sensitivity_table
    header, rows, sidecar = builder(fig)
    files = {f"figure{fid}.csv": render_csv(header, rows)}
    # one table per phase-matching setting when a panel mixes several
    settings = sorted({s["pmc"] for s in fig["series"] if "pmc" in s})
    for setting in settings:
        names = {s["name"] for s in fig["series"] if s.get("pmc") == setting}
        files[f"figure{fid}_{setting}.csv"] = render_csv(header, (r for r in rows if r[0] in names))
    files[f"figure{fid}.json"] = render_json({
        "figure": fid,
        "kind": fig["kind"],
        "files": sorted(files),
        "series": sidecar,
    })
    return files


def write_figure(fid: int, outdir: Path) -> List[Path]:
    outdir = Path(outdir)
    files = figure_outputs(fid)
    written = []
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            path = outdir / name
            path.write_text(content)
            written.append(path)
    except OSError as exc:
        raise OSError(f"cannot write figure data to {outdir}: {exc}") from exc
    return written
