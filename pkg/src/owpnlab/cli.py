"""Sweep driver and export layer: evaluate bounds, GDoF regions, regime
classifications and the Monte-Carlo-vs-closed-form verification suite over
parameter grids, and write the results as CSV.

Subcommands: bounds, gdof, verify, riccati, regimes.

Axes are given as comma lists (``--P 1,10,100``) or log ranges
(``--P log:1:1e6:7``); grids are emitted in ascending lexicographic order of
the axes, one row per point, with a mandatory header, LF line endings and
17-significant-digit decimals.  Output is bit-identical for a given sweep and
seed, independent of ``--threads``.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import bounds as bounds_mod
from . import gdof as gdof_mod
from . import mioracle, riccati, sim
from .model import ChannelParams, GdofPoint, Units, convert_rate, derive_constants

GRID_CAP = 10**7

_DEFAULTS = {
    "seed": 42,
    "samples": 100_000,
    "units": "nats",
    "threads": 1,
    "max_iter": 10**6,
    "tolerance_scale": 1.0,
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAIL = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse hook
        raise UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def parse_axis(text: str, name: str, integer: bool = False) -> list:
    """Parse one axis spec: 'v1,v2,...' or 'log:start:stop:n'."""
    text = text.strip()
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError(f"axis {name}: log range must be log:start:stop:n, got {text!r}")
        try:
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise UsageError(f"axis {name}: bad log range {text!r}") from exc
        if start <= 0.0 or stop <= 0.0:
            raise UsageError(f"axis {name}: log range requires positive endpoints")
        if count < 1:
            raise UsageError(f"axis {name}: log range needs n >= 1")
        if count == 1:
            values = [start]
        else:
            ratio = math.log(stop / start)
            values = [start * math.exp(ratio * i / (count - 1)) for i in range(count)]
    else:
        try:
            values = [float(v) for v in text.split(",") if v.strip() != ""]
        except ValueError as exc:
            raise UsageError(f"axis {name}: bad value list {text!r}") from exc
    if not values:
        raise UsageError(f"axis {name}: empty")
    if integer:
        out = []
        for v in values:
            iv = int(round(v))
            if abs(v - iv) > 1e-9 * max(abs(v), 1.0) or iv < 1:
                raise UsageError(f"axis {name}: values must be integers >= 1, got {v}")
            out.append(iv)
        return sorted(out)
    return sorted(values)


def _write_rows(out_path: str | None, header: list[str], rows: list[list[str]]) -> None:
    text = "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _map_rows(fn, tasks: list, threads: int) -> list:
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    return [fn(t) for t in tasks]


# ---------------------------------------------------------------------------
# grid workers (module level so they pickle for the process pool)

def _bounds_task(task: tuple[float, int, float]) -> tuple[float, ...]:
    p, big_l, s2 = task
    params = ChannelParams(p, big_l, s2)
    up = bounds_mod.upper_outer(params)
    pc = bounds_mod.lower_partially_coherent(params)
    cc = bounds_mod.lower_coherent_combining(params)
    return (
        up.total, up.rate_split.amplitude_rate, up.rate_split.phase_rate,
        pc.total, pc.rate_split.amplitude_rate, pc.rate_split.phase_rate,
        cc.total, cc.rate_split.amplitude_rate, cc.rate_split.phase_rate,
    )


def _gdof_task(task: tuple[float, float]) -> tuple:
    point = GdofPoint(*task)
    outer = gdof_mod.gdof_outer(point)
    pc = gdof_mod.gdof_inner_pc(point)
    cc = gdof_mod.gdof_inner_cc(point)
    combined = gdof_mod.gdof_inner_combined(point)
    exact = gdof_mod.gdof_exact_if_known(point)
    return (
        outer.total, pc.total, cc.total, combined.total,
        None if exact is None else exact.total,
        "" if exact is None else exact.regime,
    )


def _regime_task(task: tuple[float, int, float]) -> tuple[str, float]:
    params = ChannelParams(*task)
    regime = gdof_mod.classify_regime(params)
    return regime.value, gdof_mod.regime_gap_nats(regime)


# ---------------------------------------------------------------------------
# subcommands

def _grid(axes: list[list]) -> list[tuple]:
    total = 1
    for axis in axes:
        total *= len(axis)
    if total > GRID_CAP:
        raise UsageError(f"grid size {total} exceeds the cap {GRID_CAP}")
    return list(itertools.product(*axes))


def cmd_bounds(args) -> int:
    ps = parse_axis(args.P, "P")
    ls = parse_axis(args.L, "L", integer=True)
    s2s = parse_axis(args.sigma2, "sigma2")
    units = Units(args.units)
    tasks = _grid([ps, ls, s2s])
    values = _map_rows(_bounds_task, tasks, args.threads)
    header = [
        "P", "L", "sigma2",
        "upper_total", "upper_amp", "upper_phase",
        "pc_total", "pc_amp", "pc_phase",
        "cc_total", "cc_amp", "cc_phase",
        "units",
    ]
    rows = []
    for (p, big_l, s2), vals in zip(tasks, values):
        converted = [convert_rate(v, units) for v in vals]
        rows.append([_fmt(p), _fmt(big_l), _fmt(s2)] + [_fmt(v) for v in converted] + [units.value])
    _write_rows(args.out, header, rows)
    return EXIT_OK


def cmd_gdof(args) -> int:
    alphas = parse_axis(args.alpha, "alpha")
    betas = parse_axis(args.beta, "beta")
    tasks = _grid([alphas, betas])
    values = _map_rows(_gdof_task, tasks, args.threads)
    header = [
        "alpha", "beta",
        "d_outer", "d_inner_pc", "d_inner_cc", "d_inner_combined",
        "d_exact", "regime_of_exactness",
    ]
    rows = []
    for (a, b), vals in zip(tasks, values):
        d_outer, d_pc, d_cc, d_comb, d_exact, regime = vals
        rows.append(
            [_fmt(a), _fmt(b), _fmt(d_outer), _fmt(d_pc), _fmt(d_cc), _fmt(d_comb),
             "" if d_exact is None else _fmt(d_exact), regime]
        )
    _write_rows(args.out, header, rows)
    return EXIT_OK


def cmd_regimes(args) -> int:
    ps = parse_axis(args.P, "P")
    ls = parse_axis(args.L, "L", integer=True)
    s2s = parse_axis(args.sigma2, "sigma2")
    units = Units(args.units)
    tasks = _grid([ps, ls, s2s])
    values = _map_rows(_regime_task, tasks, args.threads)
    header = ["P", "L", "sigma2", "regime", "gap", "units"]
    rows = []
    for (p, big_l, s2), (regime, gap) in zip(tasks, values):
        gap_txt = "" if math.isnan(gap) else _fmt(convert_rate(gap, units))
        rows.append([_fmt(p), _fmt(big_l), _fmt(s2), regime, gap_txt, units.value])
    _write_rows(args.out, header, rows)
    return EXIT_OK


def cmd_riccati(args) -> int:
    x = float(args.x)
    ratio = float(args.ratio)
    closed = riccati.riccati_fixed_point(x, ratio)
    lines = [f"x (input second moment)  : {_fmt(x)}", f"r (L / sigma2)           : {_fmt(ratio)}"]
    state = riccati.FisherState(0.0, x, ratio)
    trace = [state.J]
    steps = 0
    try:
        for _ in range(args.max_iter):
            nxt = riccati.riccati_step(state)
            steps += 1
            trace.append(nxt.J)
            if abs(nxt.J - state.J) <= 1e-12 * (1.0 + abs(nxt.J)):
                state = nxt
                break
            state = nxt
        else:
            raise RuntimeError(f"no convergence within {args.max_iter} iterations")
    except RuntimeError as exc:
        sys.stderr.write(f"riccati: {exc}\n")
        return EXIT_VERIFY_FAIL
    lines.append("iteration trace (first 10):")
    for i, j in enumerate(trace[:10]):
        lines.append(f"  {i:4d}  {_fmt(j)}")
    lines.append(f"converged after {steps} steps: J = {_fmt(state.J)}")
    lines.append(f"closed-form fixed point     : {_fmt(closed)}")
    if x > 0.0:
        crb = riccati.posterior_crb_entropy_lower(x, ratio)
        lines.append(f"posterior-CRB entropy bound : {_fmt(crb)} nats")
    else:
        lines.append("posterior-CRB entropy bound : undefined at x = 0")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suite

@dataclass(frozen=True)
class CheckRow:
    check: str
    point: str
    measured: float
    expected: float
    deviation: float
    tolerance: float
    passed: bool
    note: str = ""


def _direct_phi_kappa(big_l: int, s2: float) -> tuple[float, float]:
    # independent oracle: direct double sum over xi^{|i-k|}
    if s2 == 0.0:
        return 1.0, 1.0
    xi = math.exp(-s2 / (2.0 * big_l))
    kappa = math.fsum(xi**d for d in range(big_l)) / big_l
    phi = (big_l + 2.0 * math.fsum((big_l - d) * xi**d for d in range(1, big_l))) / big_l**2
    return kappa, phi


def verify_rows(seed: int, n_samples: int, tolerance_scale: float = 1.0) -> list[CheckRow]:
    """Run the MC-vs-closed-form suite; deterministic for a given seed."""
    rows: list[CheckRow] = []
    scale = tolerance_scale

    def add(check, point, measured, expected, tolerance, note=""):
        deviation = abs(measured - expected)
        rows.append(
            CheckRow(check, point, measured, expected, deviation, tolerance * scale,
                     deviation <= tolerance * scale, note)
        )

    def add_one_sided(check, point, measured, bound, tolerance, note=""):
        # the bound must not exceed the measurement by more than the tolerance
        deviation = bound - measured
        rows.append(
            CheckRow(check, point, measured, bound, deviation, tolerance * scale,
                     deviation <= tolerance * scale, note)
        )

    const_grid = [(2, 4.0 * math.log(2.0)), (4, 1.0), (16, 0.1), (256, 1e-4), (8, 0.0)]
    for big_l, s2 in const_grid:
        params = ChannelParams(1.0, big_l, s2)
        _, kappa, phi = derive_constants(params)
        kap_o, phi_o = _direct_phi_kappa(big_l, s2)
        note = "analytic-limit" if s2 == 0.0 else ""
        point = f"L={big_l};sigma2={_fmt(s2)}"
        add("kappa-closed-vs-sum", point, kappa, kap_o, 1e-12, note)
        add("phi-closed-vs-sum", point, phi, phi_o, 1e-12, note)

    mc_grid = [(2, 4.0 * math.log(2.0)), (4, 1.0), (16, 0.1)]
    for idx, (big_l, s2) in enumerate(mc_grid):
        params = ChannelParams(1.0, big_l, s2)
        _, kappa, phi = derive_constants(params)
        moments = sim.estimate_F_moments(params, n_samples, seed + 100 + idx)
        point = f"L={big_l};sigma2={_fmt(s2)}"
        add("kappa-mc", point, moments.mean_real.mean, kappa, 4.0 * moments.mean_real.std_error)
        add("phi-mc", point, moments.m2.mean, phi, 4.0 * moments.m2.std_error)
        if big_l == 2:
            # at L=2, |F|^4 = ((1+cos N)/2)^2 has the closed mean
            # (3/2 + 2 e^{-v/2} + e^{-2v}/2)/4 with v = sigma2/L
            v = s2 / big_l
            m4_closed = (1.5 + 2.0 * math.exp(-v / 2.0) + 0.5 * math.exp(-2.0 * v)) / 4.0
            add("f-fourth-moment-mc", point, moments.m4.mean, m4_closed,
                4.0 * moments.m4.std_error)

    n_steps = 1000
    ratio = 2.0  # sigma2 / L
    re_est, im_est = sim.simulate_fading_integral(ratio, n_steps, n_samples, seed + 200)
    target = (2.0 / ratio) * -math.expm1(-ratio / 2.0)  # (2L/sigma2)(1 - e^{-sigma2/(2L)})
    add("fading-integral-re", "sigma2/L=2", re_est.mean, target,
        4.0 * re_est.std_error + 1.0 / n_steps, note="bias O(1/n_time_steps)")
    add("fading-integral-im", "sigma2/L=2", im_est.mean, 0.0, 4.0 * im_est.std_error)
    re0, _ = sim.simulate_fading_integral(0.0, n_steps, max(n_samples // 10, 1000), seed + 201)
    add("fading-integral-re", "sigma2/L=0", re0.mean, 1.0, 1e-15, note="analytic-limit")

    for idx, power in enumerate((1.0, 4.0)):
        est = sim.estimate_log_abs_sq(power, n_samples, seed + 300 + idx)
        add("log-abs-sq", f"power={_fmt(power)}", est.mean,
            math.log(power) - bounds_mod.EULER_MASCHERONI, 4.0 * est.std_error)

    for x, noise_ratio in ((3.0, 1.0), (1.0, 1e6), (0.1, 1e-3)):
        iterated, _ = riccati.iterate_fixed_point(x, noise_ratio)
        closed = riccati.riccati_fixed_point(x, noise_ratio)
        add("riccati-fixed-point", f"x={_fmt(x)};r={_fmt(noise_ratio)}",
            iterated, closed, 1e-9 * max(abs(closed), 1.0))

    quad = riccati.immse_entropy_quadrature(1.0)
    add("immse-gaussian", "s=1", quad, 0.5 * math.log(2.0 * math.pi * math.e), 1e-3)

    mi_points = [(20.0, 4, 0.5), (100.0, 1, 0.01)]
    for idx, (p, big_l, s2) in enumerate(mi_points):
        params = ChannelParams(p, big_l, s2)
        pc = bounds_mod.lower_partially_coherent(params)
        outer = bounds_mod.upper_outer(params)
        amp_mi = mioracle.amplitude_channel_mi(params, n_samples, seed + 400 + idx)
        ph_mi = mioracle.phase_channel_mi(params, n_samples, seed + 500 + idx)
        point = f"P={_fmt(p)};L={big_l};sigma2={_fmt(s2)}"
        add_one_sided("mi-amplitude-lb", point, amp_mi.value, pc.rate_split.amplitude_rate,
                      mioracle.MI_ALLOWANCE_NATS + 4.0 * amp_mi.std_error)
        add_one_sided("mi-phase-lb", point, ph_mi.value, pc.rate_split.phase_rate,
                      mioracle.MI_ALLOWANCE_NATS + 4.0 * ph_mi.std_error)
        add_one_sided("mi-total-vs-outer", point, outer.total,
                      amp_mi.value + ph_mi.value, 0.1,
                      note="achievable <= outer + 0.1")
    return rows


def cmd_verify(args) -> int:
    if args.samples < 10_000:
        raise UsageError("verify needs --samples >= 10000")
    rows = verify_rows(args.seed, args.samples, args.tolerance_scale)
    header = ["check", "point", "measured", "expected", "deviation", "tolerance", "status", "note"]
    out_rows = [
        [r.check, r.point, _fmt(r.measured), _fmt(r.expected), _fmt(r.deviation),
         _fmt(r.tolerance), "pass" if r.passed else "fail", r.note]
        for r in rows
    ]
    _write_rows(args.out, header, out_rows)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# argument plumbing

def _add_common(sub: argparse.ArgumentParser, axes: list[str]) -> None:
    for axis in axes:
        sub.add_argument(f"--{axis}", help=f"{axis} axis: 'v1,v2,...' or 'log:start:stop:n'")
    sub.add_argument("--units", choices=["nats", "bits"], default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--out", default=None, help="output path (default: stdout)")
    sub.add_argument("--config", default=None, help="key=value config file; flags win")
    sub.add_argument("--threads", type=int, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="owpnlab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("bounds", help="capacity bounds over a (P, L, sigma2) grid")
    _add_common(b, ["P", "L", "sigma2"])

    g = subs.add_parser("gdof", help="GDoF regions over an (alpha, beta) grid")
    _add_common(g, ["alpha", "beta"])

    v = subs.add_parser("verify", help="Monte-Carlo vs closed-form verification suite")
    _add_common(v, [])
    v.add_argument("--tolerance-scale", type=float, default=None, dest="tolerance_scale",
                   help="multiply every tolerance (0 gives a deterministic failure)")

    r = subs.add_parser("riccati", help="Fisher-information recursion report")
    r.add_argument("--x", type=float, required=True, help="input second moment E|X|^2")
    r.add_argument("--ratio", type=float, required=True, help="L / sigma2")
    r.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    r.add_argument("--out", default=None)
    r.add_argument("--config", default=None)

    m = subs.add_parser("regimes", help="regime classification over a (P, L, sigma2) grid")
    _add_common(m, ["P", "L", "sigma2"])
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None) is None:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    converters = {
        "seed": int, "samples": int, "threads": int, "max_iter": int,
        "tolerance_scale": float, "x": float, "ratio": float,
    }
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{args.config}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not hasattr(args, key) or key == "config":
            raise UsageError(f"{args.config}:{lineno}: unknown key {key!r}")
        if getattr(args, key) is None:  # flags take precedence
            setattr(args, key, converters.get(key, str)(value))


def _fill_defaults(args: argparse.Namespace) -> None:
    for key, value in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    for axis in ("P", "L", "sigma2", "alpha", "beta"):
        if hasattr(args, axis) and getattr(args, axis) is None:
            raise UsageError(f"missing required axis --{axis}")
    if hasattr(args, "threads") and args.threads < 1:
        raise UsageError("--threads must be >= 1")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        _fill_defaults(args)
        dispatch = {
            "bounds": cmd_bounds,
            "gdof": cmd_gdof,
            "verify": cmd_verify,
            "riccati": cmd_riccati,
            "regimes": cmd_regimes,
        }
        return dispatch[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"owpnlab: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"owpnlab: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
