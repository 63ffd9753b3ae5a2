"""Config-driven command line front end.

A run is described by a small key/value file with ``section.key = value``
lines ('#' starts a comment line).  The ``system`` section selects and
parameterizes a single-mode model, the ``task`` section says what to compute,
``tolerance`` holds the pass/fail gate, and ``output`` holds formatting
switches.  Example::

    system.kind = oscillator
    system.m = 1.0
    system.omega = const:1.0
    task.kind = propagate
    task.t_end = 10.0
    task.dt = 1e-3
    task.stride = 100

Time-dependent coefficients use function specs: ``const:v``, a bare number
(same as const), ``poly:c0,c1,...`` for c0 + c1 t + ..., or ``table:file``
for linear interpolation of a two-column file (clamped at the ends).

Exit codes: 0 run completed and the gate passed, 1 configuration problem,
2 numerical failure inside the run, 3 run completed but the gate failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.integrate import simpson

from .errors import ParseError, QtomoError, ValidationError
from .hamiltonian_dynamics import (
    LadderFrame,
    QuadraticHamiltonian,
    check_symplectic_properties,
    propagate_modes,
)
from .model_library import (
    ChargedParticle,
    ParametricOscillator,
    oscillator_invariants,
    particle_invariants,
)
from .tomography import TomogramFrame, coherent_tomogram, fock_tomogram, tomogram_density
from .transitions import amplitude_cnm, squeeze_transform, sum_rule_check

_MISSING = object()


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: a flat map from 'section.key' to raw strings."""

    entries: dict
    base_dir: str = field(default=".", compare=False)

    def get_str(self, key, default=_MISSING) -> str:
        if key not in self.entries:
            if default is _MISSING:
                raise ValidationError(f"missing required key '{key}'")
            return default
        return self.entries[key]

    def get_float(self, key, default=_MISSING) -> float:
        raw = self.get_str(key, default)
        if raw is default and key not in self.entries:
            return default
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ValidationError(f"{key}: expected a number, got '{raw}'")

    def get_int(self, key, default=_MISSING) -> int:
        raw = self.get_str(key, default)
        if raw is default and key not in self.entries:
            return default
        try:
            return int(str(raw).strip())
        except (TypeError, ValueError):
            raise ValidationError(f"{key}: expected an integer, got '{raw}'")

    def get_bool(self, key, default=_MISSING) -> bool:
        raw = self.get_str(key, default)
        if raw is default and key not in self.entries:
            return default
        low = str(raw).strip().lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValidationError(f"{key}: expected a boolean, got '{raw}'")

    def get_complex(self, key, default=_MISSING) -> complex:
        raw = self.get_str(key, default)
        if raw is default and key not in self.entries:
            return default
        try:
            return complex(str(raw).replace(" ", ""))
        except (TypeError, ValueError):
            raise ValidationError(f"{key}: expected a complex number, got '{raw}'")

    def get_floats(self, key, default=_MISSING) -> list:
        raw = self.get_str(key, default)
        if raw is default and key not in self.entries:
            return list(default)
        try:
            return [float(p) for p in str(raw).split(",")]
        except ValueError:
            raise ValidationError(f"{key}: expected comma-separated numbers, got '{raw}'")

    def get_frames(self, key) -> list:
        """Parse 'mu,nu; mu,nu; ...' into a list of (mu, nu) pairs."""
        raw = self.get_str(key)
        frames = []
        for part in raw.split(";"):
            bits = part.split(",")
            if len(bits) != 2:
                raise ValidationError(f"{key}: each frame needs 'mu,nu', got '{part.strip()}'")
            try:
                mu, nu = float(bits[0]), float(bits[1])
            except ValueError:
                raise ValidationError(f"{key}: bad frame '{part.strip()}'")
            if mu == 0.0 and nu == 0.0:
                raise ValidationError(f"{key}: frame (0, 0) is degenerate")
            frames.append((mu, nu))
        if not frames:
            raise ValidationError(f"{key}: no frames given")
        return frames

    def get_func(self, key, default=_MISSING) -> Optional[Callable[[float], float]]:
        if key not in self.entries:
            if default is _MISSING:
                raise ValidationError(f"missing required key '{key}'")
            return default
        return _parse_funcspec(self.entries[key], key, self.base_dir)


def _parse_funcspec(spec: str, key: str, base_dir: str):
    s = spec.strip()
    if s.startswith("const:"):
        try:
            v = float(s[len("const:"):])
        except ValueError:
            raise ValidationError(f"{key}: bad const spec '{s}'")
        return lambda t, _v=v: _v
    if s.startswith("poly:"):
        try:
            coeffs = [float(p) for p in s[len("poly:"):].split(",")]
        except ValueError:
            raise ValidationError(f"{key}: bad poly spec '{s}'")
        return lambda t, _c=coeffs: float(np.polynomial.polynomial.polyval(t, _c))
    if s.startswith("table:"):
        path = os.path.join(base_dir, s[len("table:"):].strip())
        return _load_table(path, key)
    try:
        v = float(s)
    except ValueError:
        raise ValidationError(f"{key}: unrecognized function spec '{s}'")
    return lambda t, _v=v: _v


def _load_table(path: str, key: str):
    if not os.path.isfile(path):
        raise ValidationError(f"{key}: table file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    delim = "," if "," in text else None
    try:
        data = np.loadtxt(io.StringIO(text), delimiter=delim, ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"{key}: cannot parse table file {path}: {exc}")
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise ValidationError(f"{key}: table file {path} must have two columns and at least two rows")
    ts, vs = data[:, 0].copy(), data[:, 1].copy()
    if np.any(np.diff(ts) <= 0.0):
        raise ValidationError(f"{key}: table abscissae in {path} must strictly increase")
    return lambda t, _t=ts, _v=vs: float(np.interp(t, _t, _v))


def parse_config(text: str, *, base_dir: str = ".") -> RunConfig:
    """Parse configuration text; raises ParseError with line numbers."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'section.key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or "." not in key or any(ch.isspace() for ch in key):
            raise ParseError(f"line {lineno}: malformed key '{key}'")
        if not value:
            raise ParseError(f"line {lineno}: empty value for '{key}'")
        if key in entries:
            raise ParseError(f"line {lineno}: duplicate key '{key}'")
        entries[key] = value
    return RunConfig(entries=entries, base_dir=base_dir)


def serialize(config: RunConfig) -> str:
    """Inverse of parse_config up to key order and comments."""
    lines = [f"{k} = {v}" for k, v in sorted(config.entries.items())]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ResultTable:
    """Column-oriented numeric result with string metadata."""

    columns: tuple
    rows: tuple
    metadata: dict

    def to_csv(self) -> str:
        out = [f"# {k} = {self.metadata[k]}" for k in sorted(self.metadata)]
        out.append(",".join(self.columns))
        for row in self.rows:
            out.append(",".join("%.17g" % v for v in row))
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        payload = {
            "metadata": dict(sorted(self.metadata.items())),
            "columns": list(self.columns),
            "rows": [[float(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class RunResult(NamedTuple):
    table: ResultTable
    status: int


class _Built(NamedTuple):
    kind: str
    system: object
    H: QuadraticHamiltonian
    frame: LadderFrame
    frame_pair: tuple
    hbar: float


def _build_system(config: RunConfig) -> _Built:
    kind_raw = config.get_str("system.kind")
    kind = kind_raw.replace("-", "_")
    hbar = config.get_float("system.hbar", 1.0)
    if hbar <= 0.0:
        raise ValidationError("system.hbar must be positive")
    if kind == "oscillator":
        m = config.get_float("system.m", 1.0)
        if m <= 0.0:
            raise ValidationError("system.m must be positive")
        omega = config.get_func("system.omega")
        f = config.get_func("system.f", None)
        w0 = float(omega(0.0))
        if w0 <= 0.0:
            raise ValidationError("system.omega must be positive at t = 0")
        system = ParametricOscillator(m=m, omega=omega, f=f, hbar=hbar)
        ap_default = 1j / math.sqrt(2.0 * m * w0 * hbar)
        ax_default = math.sqrt(m * w0 / (2.0 * hbar))

        def B(t, _m=m, _w=omega):
            return np.array([[1.0 / _m, 0.0], [0.0, _m * float(_w(t)) ** 2]])

        c = None if f is None else (lambda t, _f=f: np.array([0.0, float(_f(t))]))
    elif kind == "charged_particle":
        m = config.get_float("system.m", 1.0)
        if m <= 0.0:
            raise ValidationError("system.m must be positive")
        force = config.get_func("system.force", None)
        ap_default = 1j / math.sqrt(2.0 * hbar)
        ax_default = 1.0 / math.sqrt(2.0 * hbar)

        def B(t, _m=m):
            return np.array([[1.0 / _m, 0.0], [0.0, 0.0]])

        c = None if force is None else (lambda t, _f=force: np.array([0.0, float(_f(t))]))
        system = None
    elif kind == "custom_quadratic":
        b_pp = config.get_func("system.b_pp")
        b_xx = config.get_func("system.b_xx")
        b_px = config.get_func("system.b_px", None)
        c_p = config.get_func("system.c_p", None)
        c_x = config.get_func("system.c_x", None)
        ap_default = 1j / math.sqrt(2.0 * hbar)
        ax_default = 1.0 / math.sqrt(2.0 * hbar)

        def B(t, _pp=b_pp, _px=b_px, _xx=b_xx):
            off = float(_px(t)) if _px is not None else 0.0
            return np.array([[float(_pp(t)), off], [off, float(_xx(t))]])

        if c_p is None and c_x is None:
            c = None
        else:

            def c(t, _p=c_p, _x=c_x):
                return np.array(
                    [
                        float(_p(t)) if _p is not None else 0.0,
                        float(_x(t)) if _x is not None else 0.0,
                    ]
                )

        system = None
    else:
        raise ValidationError(f"unknown system.kind '{kind_raw}'")

    a_p = config.get_complex("system.a_p", complex(ap_default))
    a_x = config.get_complex("system.a_x", complex(ax_default))
    if kind == "charged_particle":
        system = ChargedParticle(
            m=m,
            F=force,
            hbar=hbar,
            A_p=a_p,
            A_x=a_x,
        )
    H = QuadraticHamiltonian(n_modes=1, B=B, c=c, hbar=hbar)
    frame = LadderFrame(A_p=[[a_p]], A_x=[[a_x]], hbar=hbar)
    return _Built(kind, system, H, frame, (a_p, a_x), hbar)


def _invariants_at(built: _Built, t: float, dt: float):
    if built.kind == "oscillator":
        return oscillator_invariants(built.system, t, dt=dt, frame=built.frame_pair)
    if built.kind == "charged_particle":
        return particle_invariants(built.system, t)
    series = propagate_modes(built.H, built.frame, t, dt)
    return series.final


def _positive(config, key, default):
    v = config.get_float(key, default)
    if v <= 0.0:
        raise ValidationError(f"{key} must be positive")
    return v


def _task_propagate(config: RunConfig, tol: float) -> RunResult:
    built = _build_system(config)
    t_end = config.get_float("task.t_end")
    if t_end < 0.0:
        raise ValidationError("task.t_end must be non-negative")
    dt = _positive(config, "task.dt", 1e-3)
    stride = config.get_int("task.stride", 1)
    if stride < 1:
        raise ValidationError("task.stride must be at least 1")
    series = propagate_modes(built.H, built.frame, t_end, dt)
    n_samples = len(series)
    idx = list(range(0, n_samples, stride))
    if idx[-1] != n_samples - 1:
        idx.append(n_samples - 1)
    rows = []
    for k in idx:
        rows.append(
            (
                float(series.times[k]),
                float(series.lambda_p[k, 0, 0].real),
                float(series.lambda_p[k, 0, 0].imag),
                float(series.lambda_x[k, 0, 0].real),
                float(series.lambda_x[k, 0, 0].imag),
                float(series.delta[k, 0].real),
                float(series.delta[k, 0].imag),
                float(series.phase[k]),
                float(series.residuals[k]),
            )
        )
    worst = float(np.max(series.residuals))
    passed = worst <= tol
    table = ResultTable(
        columns=(
            "time",
            "lambda_p_re",
            "lambda_p_im",
            "lambda_x_re",
            "lambda_x_im",
            "delta_re",
            "delta_im",
            "phase",
            "residual",
        ),
        rows=tuple(rows),
        metadata={
            "task": "propagate",
            "system": built.kind,
            "t_end": "%.17g" % t_end,
            "dt": "%.17g" % dt,
            "residual_max": "%.17g" % worst,
            "gate": "residual_max <= %.3g" % tol,
            "gate_passed": "true" if passed else "false",
        },
    )
    return RunResult(table, 0 if passed else 3)


def _task_verify(config: RunConfig, tol: float) -> RunResult:
    built = _build_system(config)
    times = config.get_floats("task.times", [0.0])
    dt = _positive(config, "task.dt", 1e-3)
    rows = []
    all_ok = True
    for t in times:
        if t < 0.0:
            raise ValidationError("task.times must be non-negative")
        rep = check_symplectic_properties(_invariants_at(built, t, dt), tol=tol)
        all_ok = all_ok and rep.passed
        rows.append(
            (
                t,
                rep.margin_p,
                rep.margin_x,
                rep.pairing_residual,
                rep.commutator_residual,
                rep.hermitian_product_residual,
                rep.cross_pairing_residual,
                1.0 if rep.passed else 0.0,
            )
        )
    table = ResultTable(
        columns=(
            "time",
            "margin_p",
            "margin_x",
            "pairing",
            "commutator",
            "herm_product",
            "cross_pairing",
            "ok",
        ),
        rows=tuple(rows),
        metadata={
            "task": "verify",
            "system": built.kind,
            "gate": "all properties within %.3g" % tol,
            "gate_passed": "true" if all_ok else "false",
        },
    )
    return RunResult(table, 0 if all_ok else 3)


def _tomogram_grid(config: RunConfig):
    x_min = config.get_float("task.x_min", -6.0)
    x_max = config.get_float("task.x_max", 6.0)
    points = config.get_int("task.points", 601)
    if x_max <= x_min:
        raise ValidationError("task.x_max must exceed task.x_min")
    if points < 3:
        raise ValidationError("task.points must be at least 3")
    return np.linspace(x_min, x_max, points)


def _tomogram_common(config: RunConfig, tol: float, fock_index):
    built = _build_system(config)
    t = config.get_float("task.t", 0.0)
    dt = _positive(config, "task.dt", 1e-3)
    frames = config.get_frames("task.frames")
    grid = _tomogram_grid(config)
    inv = _invariants_at(built, t, dt)
    columns = ["x"] + [f"w_f{i + 1}" for i in range(len(frames))]
    data = [grid]
    metadata = {
        "system": built.kind,
        "t": "%.17g" % t,
        "gate": "normalization defect <= %.3g" % tol,
    }
    passed = True
    for i, (mu, nu) in enumerate(frames):
        fr = TomogramFrame(mu=[mu], nu=[nu])
        if fock_index is None:
            alpha = config.get_complex("task.alpha", 0j)
            g = coherent_tomogram(inv, fr, [alpha])
            w = tomogram_density(g, grid[:, None])
        else:
            w = fock_tomogram(inv, fr, (fock_index,), grid[:, None])
        w = np.asarray(w, dtype=float)
        defect = abs(float(simpson(w, x=grid)) - 1.0)
        passed = passed and defect <= tol
        data.append(w)
        metadata[f"frame_f{i + 1}"] = "%.17g,%.17g" % (mu, nu)
        metadata[f"normalization_defect_f{i + 1}"] = "%.17g" % defect
    metadata["gate_passed"] = "true" if passed else "false"
    rows = tuple(tuple(col[k] for col in data) for k in range(grid.size))
    return RunResult(
        ResultTable(columns=tuple(columns), rows=rows, metadata=metadata),
        0 if passed else 3,
    )


def _task_tomogram(config: RunConfig, tol: float) -> RunResult:
    result = _tomogram_common(config, tol, None)
    result.table.metadata["task"] = "tomogram"
    result.table.metadata["alpha"] = config.get_str("task.alpha", "0")
    return result


def _task_fock_tomogram(config: RunConfig, tol: float) -> RunResult:
    n = config.get_int("task.n")
    if n < 0:
        raise ValidationError("task.n must be non-negative")
    result = _tomogram_common(config, tol, n)
    result.table.metadata["task"] = "fock_tomogram"
    result.table.metadata["n"] = str(n)
    return result


def _task_sumrule(config: RunConfig, tol: float) -> RunResult:
    theta = config.get_float("task.theta")
    n = config.get_int("task.n", 0)
    max_m = config.get_int("task.max_m", 60)
    if n < 0 or max_m < 0:
        raise ValidationError("task.n and task.max_m must be non-negative")
    S = squeeze_transform(theta)
    res = sum_rule_check(S, (n,), max_m)
    passed = res.residual <= tol * max(1.0, abs(res.target))
    rows = []
    previous = 0.0
    for k, running in enumerate(res.shell_sums):
        rows.append((float(k), float(running) - previous, float(running)))
        previous = float(running)
    table = ResultTable(
        columns=("shell", "shell_sum", "cumulative"),
        rows=tuple(rows),
        metadata={
            "task": "sumrule",
            "theta": "%.17g" % theta,
            "n": str(n),
            "target": "%.17g" % res.target,
            "partial_sum": "%.17g" % res.partial_sum,
            "residual": "%.17g" % res.residual,
            "tail_estimate": "%.17g" % res.tail_estimate,
            "shells_used": str(res.shells_used),
            "gate": "residual <= %.3g * max(1, target)" % tol,
            "gate_passed": "true" if passed else "false",
        },
    )
    return RunResult(table, 0 if passed else 3)


def _task_transitions(config: RunConfig, tol: float) -> RunResult:
    theta = config.get_float("task.theta")
    max_n = config.get_int("task.max_n", 2)
    max_m = config.get_int("task.max_m", 40)
    if max_n < 0 or max_m < 0:
        raise ValidationError("task.max_n and task.max_m must be non-negative")
    S = squeeze_transform(theta)
    cap = max(32, max_n + max_m)
    rows = []
    metadata = {
        "task": "transitions",
        "theta": "%.17g" % theta,
        "gate": "row sum within %.3g of 1" % tol,
    }
    passed = True
    for n in range(max_n + 1):
        row_sum = 0.0
        for m in range(max_m + 1):
            c = amplitude_cnm(S, (n,), (m,), max_order=cap)
            prob = abs(c) ** 2
            row_sum += prob
            rows.append((float(n), float(m), c.real, c.imag, prob))
        defect = abs(row_sum - 1.0)
        passed = passed and defect <= tol
        metadata[f"row_sum_n{n}"] = "%.17g" % row_sum
    metadata["gate_passed"] = "true" if passed else "false"
    table = ResultTable(
        columns=("n", "m", "c_re", "c_im", "prob"),
        rows=tuple(rows),
        metadata=metadata,
    )
    return RunResult(table, 0 if passed else 3)


_TASKS = {
    "propagate": (_task_propagate, "tolerance.residual", 1e-8),
    "verify": (_task_verify, "tolerance.residual", 1e-10),
    "tomogram": (_task_tomogram, "tolerance.normalization", 1e-6),
    "fock_tomogram": (_task_fock_tomogram, "tolerance.normalization", 1e-6),
    "sumrule": (_task_sumrule, "tolerance.sumrule", 1e-9),
    "transitions": (_task_transitions, "tolerance.unitarity", 1e-8),
}


def run(config: RunConfig, *, tol_override: Optional[float] = None) -> RunResult:
    """Execute the configured task; returns the table and the gate status."""
    kind = config.get_str("task.kind").replace("-", "_")
    if kind not in _TASKS:
        raise ValidationError(f"unknown task.kind '{config.get_str('task.kind')}'")
    handler, tol_key, tol_default = _TASKS[kind]
    tol = tol_override if tol_override is not None else config.get_float(tol_key, tol_default)
    if tol <= 0.0:
        raise ValidationError(f"{tol_key} must be positive")
    return handler(config, tol)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qtomo",
        description="Tomographic-probability runs for quadratic single-mode systems.",
    )
    parser.add_argument("config", help="path to a run configuration file")
    parser.add_argument("--out", default=None, help="write the result table to this file")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--tol", type=float, default=None, help="override the task's gate tolerance")
    parser.add_argument("--quiet", action="store_true", help="suppress table and status output")
    args = parser.parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
        config = parse_config(
            text, base_dir=os.path.dirname(os.path.abspath(args.config))
        )
        result = run(config, tol_override=args.tol)
        table = result.table
        if config.get_bool("output.timestamp", False):
            stamped = dict(table.metadata)
            stamped["generated_at"] = datetime.now(timezone.utc).isoformat()
            table = dataclasses.replace(table, metadata=stamped)
        payload = table.to_json() if args.format == "json" else table.to_csv()
        if args.out is not None:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        elif not args.quiet:
            sys.stdout.write(payload)
        if not args.quiet:
            label = "ok" if result.status == 0 else "gate failed"
            print(f"{config.get_str('task.kind')}: {label}", file=sys.stderr)
        return result.status
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QtomoError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
