"""Command-line front end: ``qfi``, ``sens``, ``figure`` and ``oracle``.

Exit codes: 0 success, 2 usage or parse error, 3 numeric failure (oracle
disagreement, under-truncation or an undefined quantity).  Every failure
prints a single JSON line ``{"error": ..., "message": ...}`` on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .detection import (
    Asym,
    DetectorConfig,
    DetectorKind,
    InterferometerConfig,
    Sym,
    TwoPhase,
    sensitivity_point,
)
from .errors import DomainError, MziFisherError, StateParseError, UnderTruncationError
from .figures import (
    FIGURE_IDS,
    MODE_COLUMNS,
    QCRB_COLUMNS,
    render_csv,
    render_json,
    write_figure,
)
from .fisher import BeamSplitter, QfiMode, fisher_matrix, qcrb, qfi
from .moments import PortState, coherent, moments_of, squeezed_coherent, squeezed_vacuum, vacuum
from .oracle import build_state, numeric_fisher, numeric_moments

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
ORACLE_TOLERANCE = 1e-5
MAX_POINTS = 10 ** 6

_STATE_ARITY = {"vac": 0, "coh": 2, "sqz": 2, "sqzcoh": 4}


# -- parsing ------------------------------------------------------------------------------

def parse_state(text: str) -> PortState:
    """Parse ``vac``, ``coh:m:p``, ``sqz:f:p`` or ``sqzcoh:m:p:f:p``."""
    fields = text.split(":")
    starts = [0]
    for f in fields[:-1]:
        starts.append(starts[-1] + len(f) + 1)
    tag = fields[0]
    if tag not in _STATE_ARITY:
        raise StateParseError(text, 0, f"unknown state tag {tag!r}; expected one of {sorted(_STATE_ARITY)}")
    arity = _STATE_ARITY[tag]
    if len(fields) - 1 != arity:
        pos = starts[arity + 1] - 1 if len(fields) - 1 > arity else len(text)
        raise StateParseError(text, pos, f"{tag!r} takes {arity} numeric fields, got {len(fields) - 1}")
    values = []
    for field, pos in zip(fields[1:], starts[1:]):
        try:
            value = float(field)
        except ValueError:
            raise StateParseError(text, pos, f"not a decimal number: {field!r}") from None
        if not math.isfinite(value):
            raise StateParseError(text, pos, f"not a finite number: {field!r}")
        values.append(value)
    if tag == "vac":
        return vacuum()
    if tag == "coh":
        return coherent(*values)
    if tag == "sqz":
        return squeezed_vacuum(*values)
    return squeezed_coherent(*values)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.variable not in ("t_squared", "phi"):
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if not self.start < self.stop:
            raise DomainError(f"sweep needs start < stop, got {self.start} >= {self.stop}")
        if not 2 <= self.points <= MAX_POINTS:
            raise DomainError(f"sweep points must lie in [2, {MAX_POINTS}], got {self.points}")
        if self.variable == "t_squared" and not (0.0 <= self.start and self.stop <= 1.0):
            raise DomainError("t_squared sweep must stay inside [0, 1]")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def parse_sweep(variable: str, text: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"sweep must be start:stop:points, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError:
        raise DomainError(f"sweep must be start:stop:points, got {text!r}") from None
    return SweepSpec(variable, start, stop, points)


def parse_scenario(text: str):
    if text == "asym":
        return Asym()
    if text == "sym":
        return Sym()
    parts = text.split(":")
    if parts[0] == "two" and len(parts) == 3:
        try:
            return TwoPhase(float(parts[1]), float(parts[2]))
        except ValueError:
            pass
    raise DomainError(f"scenario must be asym, sym or two:<phi1>:<phi2>, got {text!r}")


def parse_modes(text: str) -> List[QfiMode]:
    try:
        modes = {QfiMode(m.strip()) for m in text.split(",") if m.strip()}
    except ValueError:
        raise DomainError(f"modes must be a comma list of 2p, i, ii; got {text!r}") from None
    if not modes:
        raise DomainError("at least one QFI mode is required")
    return [m for m in QfiMode if m in modes]


# -- computations ---------------------------------------------------------------------------

def _safe(fn, *args) -> Optional[float]:
    try:
        return fn(*args)
    except MziFisherError:
        return None


def run_qfi(port0: PortState, port1: PortState, sweep: SweepSpec, modes: Iterable[QfiMode]) -> str:
    """CSV of the requested QFIs against ``t^2``; undefined entries are blank."""
    modes = [QfiMode(m) for m in modes]
    m0, m1 = moments_of(port0), moments_of(port1)
    rows = []
    for u in sweep.grid():
        bs = BeamSplitter.from_t_squared(float(u))
        rows.append([float(u)] + [_safe(qfi, m0, m1, bs, m) for m in modes])
    return render_csv(["t_squared"] + [MODE_COLUMNS[m] for m in modes], rows)


def run_sensitivity(
    port0: PortState, port1: PortState, cfg: InterferometerConfig, det: DetectorConfig, sweep: SweepSpec
) -> str:
    """CSV of the sensitivity against the internal phase with constant QCRB reference columns."""
    m0, m1 = moments_of(port0), moments_of(port1)
    bounds = [_safe(lambda m: qcrb(qfi(m0, m1, cfg.bs1, m)), mode) for mode in QfiMode]
    rows = [
        [float(phi), sensitivity_point(m0, m1, cfg, det, float(phi)).delta_phi] + bounds
        for phi in sweep.grid()
    ]
    return render_csv(["phi", "delta_phi"] + list(QCRB_COLUMNS), rows)


def run_figure(fid: int, outdir: Path) -> List[Path]:
    return write_figure(int(fid), Path(outdir))


def relative_error(analytic: complex, numeric: complex) -> float:
    """``|a - n| / max(|a|, 1)``: relative for large values, absolute below one photon."""
    return abs(analytic - numeric) / max(abs(analytic), 1.0)


def _compare(analytic, numeric) -> dict:
    entry = {"rel_error": relative_error(analytic, numeric)}
    if isinstance(analytic, complex) or isinstance(numeric, complex):
        a, n = complex(analytic), complex(numeric)
        entry.update(analytic=[a.real, a.imag], numeric=[n.real, n.imag])
    else:
        entry.update(analytic=float(analytic), numeric=float(numeric))
    return entry


MOMENT_FIELDS = ("mean_a", "mean_a2", "mean_n", "var_n", "cov_na")


def oracle_report(port0: PortState, port1: PortState, bs: BeamSplitter, nmax: int) -> dict:
    """Analytic versus Fock-space values for moments, Fisher elements and all three QFIs."""
    report: dict = {"nmax": nmax, "t": bs.t, "tolerance": ORACLE_TOLERANCE, "ports": {}}
    for label, port in (("port0", port0), ("port1", port1)):
        am, nm = moments_of(port), numeric_moments(build_state(port, nmax))
        report["ports"][label] = {f: _compare(getattr(am, f), getattr(nm, f)) for f in MOMENT_FIELDS}
    m0, m1 = moments_of(port0), moments_of(port1)
    nf = numeric_fisher(port0, port1, bs, nmax)
    fm = fisher_matrix(m0, m1, bs)
    report["fisher"] = {
        "f_ss": _compare(fm.f_ss, nf.f_ss),
        "f_dd": _compare(fm.f_dd, nf.f_dd),
        "f_sd": _compare(fm.f_sd, nf.f_sd),
    }
    qfis = {
        "f_i": _compare(qfi(m0, m1, bs, QfiMode.ASYM_SINGLE), nf.asym_single),
        "f_ii": _compare(qfi(m0, m1, bs, QfiMode.SYM_SINGLE), nf.sym_single),
    }
    f2p = _safe(qfi, m0, m1, bs, QfiMode.TWO_PARAM)
    if f2p is not None and nf.var_sum > 0.0:
        qfis["f_2p"] = _compare(f2p, nf.two_param)
    report["qfi"] = qfis
    report["sym_single"] = {
        "arm_variance_sum": nf.sym_single,
        "generator_variance": nf.sym_generator,
        "difference": nf.sym_single - nf.sym_generator,
    }
    errors = [e["rel_error"] for p in report["ports"].values() for e in p.values()]
    errors += [e["rel_error"] for e in report["fisher"].values()]
    errors += [e["rel_error"] for e in qfis.values()]
    report["max_rel_error"] = max(errors)
    report["passed"] = report["max_rel_error"] <= ORACLE_TOLERANCE
    return report


def run_oracle_report(port0: PortState, port1: PortState, bs: BeamSplitter, nmax: int) -> tuple:
    """``(json_text, exit_code)``; the code is 3 when any relative error exceeds the tolerance."""
    report = oracle_report(port0, port1, bs, nmax)
    return render_json(report), EXIT_OK if report["passed"] else EXIT_NUMERIC


# -- argument handling --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, EXIT_USAGE)


def _fail(kind: str, message: str, code: int):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    raise SystemExit(code)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mzifisher", description="Fisher information and phase sensitivity of a Mach-Zehnder interferometer.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, sweep_flag: str, default_sweep: str):
        p.add_argument("--port0", default="vac", help="state in port 0 (default: vac)")
        p.add_argument("--port1", default="coh:1:0", help="state in port 1 (default: coh:1:0)")
        p.add_argument(sweep_flag, default=default_sweep, help="start:stop:points")
        p.add_argument("--out", type=Path, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    q = sub.add_parser("qfi", help="QFIs against the first beam splitter's t^2")
    common(q, "--t-scan", "0:1:101")
    q.add_argument("--mode", default="2p,i,ii")

    s = sub.add_parser("sens", help="phase sensitivity against the internal phase")
    common(s, "--phi-scan", f"0:{2 * math.pi!r}:721")
    s.add_argument("--t", type=float, default=1 / math.sqrt(2), help="first beam splitter amplitude t")
    s.add_argument("--tprime", type=float, default=1 / math.sqrt(2), help="second beam splitter amplitude t'")
    s.add_argument("--scenario", default="asym")
    s.add_argument("--detector", choices=("df", "hom"), default="df")
    s.add_argument("--phi-l", type=float, default=0.0, help="local-oscillator phase (absolute)")

    f = sub.add_parser("figure", help="write the data behind one figure")
    f.add_argument("id", type=int, choices=FIGURE_IDS)
    f.add_argument("--out", type=Path, default=Path("."), help="output directory")

    o = sub.add_parser("oracle", help="compare closed forms with the Fock-space simulation")
    o.add_argument("--port0", default="vac")
    o.add_argument("--port1", default="coh:1:0")
    o.add_argument("--t", type=float, default=1 / math.sqrt(2))
    o.add_argument("--nmax", type=int, default=60)
    o.add_argument("--out", type=Path)
    return parser


def _csv_to_json(text: str) -> str:
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        rows.append({h: (float(c) if c else None) for h, c in zip(header, cells)})
    return json.dumps(rows, indent=2) + "\n"


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc}") from exc


def _dispatch(args) -> int:
    if args.command == "figure":
        for path in run_figure(args.id, args.out):
            sys.stdout.write(f"{path}\n")
        return EXIT_OK
    port0, port1 = parse_state(args.port0), parse_state(args.port1)
    if args.command == "oracle":
        text, code = run_oracle_report(port0, port1, BeamSplitter(args.t), args.nmax)
        _emit(text, args.out)
        return code
    if args.command == "qfi":
        text = run_qfi(port0, port1, parse_sweep("t_squared", args.t_scan), parse_modes(args.mode))
    else:
        cfg = InterferometerConfig(BeamSplitter(args.t), BeamSplitter(args.tprime), parse_scenario(args.scenario))
        det = DetectorConfig(DetectorKind(args.detector), args.phi_l)
        text = run_sensitivity(port0, port1, cfg, det, parse_sweep("phi", args.phi_scan))
    _emit(_csv_to_json(text) if args.format == "json" else text, args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (StateParseError, DomainError) as exc:
        _fail(type(exc).__name__, str(exc), EXIT_USAGE)
    except UnderTruncationError as exc:
        _fail(type(exc).__name__, str(exc), EXIT_NUMERIC)
    except MziFisherError as exc:
        _fail(type(exc).__name__, str(exc), EXIT_NUMERIC)
    except OSError as exc:
        _fail("IOError", str(exc), EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
