"""Steady-state sweep engines and derived spectral observables.

All spectra are stationary quantities: each sweep point is an independent
constrained linear solve of the vectorized master equation.  The probe
absorption column ``im_rho24`` uses the absorption-positive sign, i.e. the
imaginary part of the excited-ground coherence rho_42 in this rotating
frame, so bright (absorbing) features are maxima and dark (transparent)
features are minima.  Real parts of the coherences are sign-convention
free.

Sweep points are independent; the engine may evaluate contiguous chunks
on worker threads (capped by the TRIPOD_SIM_THREADS environment
variable) and assembles results in axis order, so output is identical to
a serial run.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NoFeatures, SingularSystem
from .model import (RESIDUAL_TOL, _keep_indices, _restrict, _vec_index,
                    build_superoperator, null_space_dimension, solve_steady_vec)
from .params import LAMBDA_BRANCHING, SystemParams

_MIN_CHUNK = 64


def default_probe_axis(params: SystemParams, points: int = 401) -> np.ndarray:
    """Probe-detuning axis spanning +-3 Omega_c, wide enough for both bright peaks."""
    span = 3.0 * params.omega_c if params.omega_c > 0 else 30.0
    return np.linspace(-span, span, points)


def resolve_thread_count() -> int:
    """Worker threads for sweeps; TRIPOD_SIM_THREADS caps it (0 = auto)."""
    raw = os.environ.get("TRIPOD_SIM_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(os.cpu_count() or 1, 8)
    return n


def decoupled_ground_states(params: SystemParams) -> tuple[int, ...]:
    """Ground states (1-based) with no field, no decay feed and no mixing.

    Such states are exactly conserved, so steady-state sweeps solve the
    reduced model without them; their matrix elements are identically zero.
    """
    if params.decay.ground_mix != 0:
        return ()
    labels = []
    for label, (omega, beta) in enumerate(zip(params.rabi, params.decay.branching), start=1):
        if omega == 0 and beta == 0:
            labels.append(label)
    return tuple(labels)


def lambda_reference(params: SystemParams, coupling_detuning: float | None = None) -> SystemParams:
    """Three-level reference: control field off, branching (1/2, 1/2, 0).

    The branching change keeps population out of the decoupled state |3>.
    coupling_detuning overrides delta_c when given.
    """
    changes = dict(omega_a=0.0, delta_a=0.0,
                   decay=replace(params.decay, branching=LAMBDA_BRANCHING))
    if coupling_detuning is not None:
        changes["delta_c"] = coupling_detuning
    return params.replace(**changes)


# ---------------------------------------------------------------------------
# batched steady-state core


def _affine_generators(params: SystemParams, kept):
    """Generator at delta_p = 0 and its exact slope in delta_p."""
    base = params.replace(delta_p=0.0)
    l0 = _restrict(build_superoperator(base), kept)
    l1 = _restrict(build_superoperator(base.replace(delta_p=1.0)), kept)
    return l0, l1 - l0


def _solve_stack(l0, dslope, dp_values, kept, context):
    """Steady states for every delta_p on the axis; returns (n, 4, 4) array.

    context carries extra SingularSystem attributes (e.g. the map row's
    delta) for error reports.
    """
    n = len(kept)
    npts = len(dp_values)
    stack = l0[None, :, :] + dp_values[:, None, None] * dslope[None, :, :]
    a = stack.copy()
    a[:, 0, :] = 0.0
    for k in range(n):
        a[:, 0, n * k + k] = 1.0
    b = np.zeros((npts, n * n, 1), dtype=complex)
    b[:, 0, 0] = 1.0

    def diagnose(point):
        null_dim = null_space_dimension(stack[point])
        raise SingularSystem(
            f"steady state not unique at delta_p = {dp_values[point]:.6g} "
            f"(null space dimension {null_dim}); enable decay.ground_mix or "
            "gamma_ground, or drop the decoupled state",
            null_dim=null_dim, delta_p=float(dp_values[point]), **context)

    try:
        x = np.linalg.solve(a, b)[:, :, 0]
    except np.linalg.LinAlgError:
        for point in range(npts):
            try:
                solve_steady_vec(stack[point], n)
            except np.linalg.LinAlgError:
                diagnose(point)
        raise
    residual = np.abs(np.einsum("pij,pj->pi", stack, x)).max(axis=1)
    if residual.max() > RESIDUAL_TOL:
        diagnose(int(residual.argmax()))

    rho = np.zeros((npts, 4, 4), dtype=complex)
    block = x.reshape(npts, n, n)
    for a_, ia in enumerate(kept):
        for b_, ib in enumerate(kept):
            rho[:, ia, ib] = block[:, a_, b_]
    rho = (rho + np.conj(np.transpose(rho, (0, 2, 1)))) / 2

    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -1e-9:
        raise SingularSystem(
            f"steady state has negative eigenvalue {eigs.min():.3e}; "
            "the decay model is not completely positive at these rates",
            delta_p=float(dp_values[int(np.argmin(eigs.min(axis=1)))]), **context)
    return rho, float(residual.max())


def _steady_sweep(params: SystemParams, dp_values: np.ndarray, context=None):
    """Threaded sweep over delta_p; deterministic chunk assembly."""
    context = context or {}
    kept = _keep_indices(decoupled_ground_states(params))
    l0, dslope = _affine_generators(params, kept)
    npts = len(dp_values)
    threads = resolve_thread_count()

    if threads <= 1 or npts < _MIN_CHUNK * 2:
        return _solve_stack(l0, dslope, dp_values, kept, context)

    chunk = max(_MIN_CHUNK, math.ceil(npts / threads))
    spans = [(s, min(s + chunk, npts)) for s in range(0, npts, chunk)]
    out = np.empty((npts, 4, 4), dtype=complex)
    residuals = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [(s, e, pool.submit(_solve_stack, l0, dslope, dp_values[s:e], kept, context))
                   for s, e in spans]
        for s, e, fut in futures:
            rho, res = fut.result()
            out[s:e] = rho
            residuals.append(res)
    return out, max(residuals)


# ---------------------------------------------------------------------------
# result containers

_CANONICAL_COLUMNS = ("im_rho24", "re_rho24", "re_rho12", "re_rho13", "re_rho23", "rho44")


@dataclass
class SpectrumSeries:
    """A sweep axis plus named observable columns of equal length."""

    axis_name: str
    axis: np.ndarray
    im_rho24: np.ndarray
    re_rho24: np.ndarray
    re_rho12: np.ndarray
    re_rho13: np.ndarray
    re_rho23: np.ndarray
    rho44: np.ndarray
    extras: dict = field(default_factory=dict)
    residual_max: float = 0.0

    def __post_init__(self):
        if len(self.axis) == 0:
            raise ValueError("axis must be nonempty")
        if len(self.axis) > 1 and not np.all(np.diff(self.axis) > 0):
            raise ValueError("axis must be strictly increasing")
        for name in _CANONICAL_COLUMNS:
            if len(getattr(self, name)) != len(self.axis):
                raise ValueError(f"column {name} length mismatch")
        for name, col in self.extras.items():
            if len(col) != len(self.axis):
                raise ValueError(f"extra column {name} length mismatch")

    def column(self, name: str) -> np.ndarray:
        if name in _CANONICAL_COLUMNS:
            return getattr(self, name)
        return self.extras[name]

    @property
    def columns(self) -> dict:
        out = {name: getattr(self, name) for name in _CANONICAL_COLUMNS}
        out.update(self.extras)
        return out


@dataclass
class Map2D:
    """Probe absorption on a (delta, delta_p) grid, one row per delta."""

    delta_axis: np.ndarray
    dp_axis: np.ndarray
    grid: np.ndarray
    residual_max: float = 0.0

    def __post_init__(self):
        if self.grid.shape != (len(self.delta_axis), len(self.dp_axis)):
            raise ValueError(f"grid shape {self.grid.shape} does not match axes")
        for ax in (self.delta_axis, self.dp_axis):
            if len(ax) == 0:
                raise ValueError("axes must be nonempty")
            if len(ax) > 1 and not np.all(np.diff(ax) > 0):
                raise ValueError("axes must be strictly increasing")


@dataclass(frozen=True)
class SpectralFeature:
    """A local extremum of the absorption column.

    Bright features are absorption maxima (with a FWHM from linear
    interpolation at half prominence); dark features are minima.
    """

    kind: str                  # "dark" | "bright"
    position: float            # kHz, sub-grid refined
    value: float               # refined im_rho24 at the extremum
    fwhm: float | None = None  # kHz, bright only


# ---------------------------------------------------------------------------
# observables


def _series_from_states(axis, states, residual_max, axis_name="delta_p_khz"):
    return SpectrumSeries(
        axis_name=axis_name,
        axis=np.asarray(axis, dtype=float),
        im_rho24=states[:, 3, 1].imag.copy(),
        re_rho24=states[:, 1, 3].real.copy(),
        re_rho12=states[:, 0, 1].real.copy(),
        re_rho13=states[:, 0, 2].real.copy(),
        re_rho23=states[:, 1, 2].real.copy(),
        rho44=states[:, 3, 3].real.copy(),
        residual_max=residual_max,
    )


def _validated_axis(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    if axis.size == 0:
        raise ValueError("sweep axis must be nonempty")
    if axis.size > 1 and not np.all(np.diff(axis) > 0):
        raise ValueError("sweep axis must be strictly increasing")
    return axis


def two_level_reference_peak(params: SystemParams) -> float:
    """Resonant absorption of the bare two-level probe transition."""
    bare = params.replace(omega_c=0.0, omega_a=0.0, delta_p=0.0,
                          decay=replace(params.decay, branching=(0.0, 1.0, 0.0)))
    states, _ = _steady_sweep(bare, np.zeros(1))
    return float(states[0, 3, 1].imag)


def probe_sweep(params: SystemParams, dp_axis, *, normalize: bool = False) -> SpectrumSeries:
    """Steady-state observables for each probe detuning on the axis.

    With normalize=True an extra column ``im_rho24_normalized`` divides the
    absorption by the bare two-level resonant peak.
    """
    axis = _validated_axis(dp_axis)
    states, residual = _steady_sweep(params, axis)
    series = _series_from_states(axis, states, residual)
    if normalize:
        series.extras["im_rho24_normalized"] = series.im_rho24 / two_level_reference_peak(params)
    return series


def coherence_traces(params: SystemParams, dp_axis) -> SpectrumSeries:
    """Probe sweep with the derived two-photon coherence sum column."""
    series = probe_sweep(params, dp_axis)
    series.extras["re_rho12_plus_re_rho13"] = series.re_rho12 + series.re_rho13
    return series


def detuning_map(params: SystemParams, dp_axis, d_axis) -> Map2D:
    """Absorption grid with delta_c = delta and delta_a = -delta per row."""
    dp_axis = _validated_axis(dp_axis)
    d_axis = _validated_axis(d_axis)
    kept = _keep_indices(decoupled_ground_states(params))

    base = params.replace(delta_c=0.0, delta_a=0.0, delta_p=0.0)
    l00 = _restrict(build_superoperator(base), kept)
    ld = _restrict(build_superoperator(base.replace(delta_c=1.0, delta_a=-1.0)), kept) - l00
    lp = _restrict(build_superoperator(base.replace(delta_p=1.0)), kept) - l00

    def row(i):
        delta = d_axis[i]
        states, res = _solve_stack(l00 + delta * ld, lp, dp_axis, kept,
                                   {"delta": float(delta)})
        return states[:, 3, 1].imag.copy(), res

    threads = resolve_thread_count()
    grid = np.empty((len(d_axis), len(dp_axis)))
    residuals = []
    if threads <= 1:
        for i in range(len(d_axis)):
            grid[i], res = row(i)
            residuals.append(res)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, (vals, res) in enumerate(pool.map(row, range(len(d_axis)))):
                grid[i] = vals
                residuals.append(res)
    return Map2D(delta_axis=d_axis, dp_axis=dp_axis, grid=grid,
                 residual_max=max(residuals))


@dataclass
class DecompositionResult:
    """Tripod spectrum next to its two detuned three-level parts.

    lambda_c keeps the coupling detuning, lambda_a replaces it with the
    control detuning; average is their pointwise mean.
    """

    tripod: SpectrumSeries
    lambda_c: SpectrumSeries
    lambda_a: SpectrumSeries
    average: SpectrumSeries


def decomposition_compare(tripod: SystemParams, dp_axis) -> DecompositionResult:
    """Compare the tripod response with the sum of two detuned EIT systems."""
    scale = max(abs(tripod.delta_c), abs(tripod.delta_a), 1.0)
    if abs(tripod.delta_c + tripod.delta_a) > 1e-9 * scale or tripod.delta_c == 0:
        raise ValueError(
            "decomposition requires a symmetric nonzero detuning delta_c = -delta_a != 0")
    axis = _validated_axis(dp_axis)
    series_a = probe_sweep(tripod, axis)
    series_b = probe_sweep(lambda_reference(tripod, coupling_detuning=tripod.delta_c), axis)
    series_c = probe_sweep(lambda_reference(tripod, coupling_detuning=tripod.delta_a), axis)
    avg = SpectrumSeries(
        axis_name=series_b.axis_name,
        axis=axis.copy(),
        im_rho24=(series_b.im_rho24 + series_c.im_rho24) / 2,
        re_rho24=(series_b.re_rho24 + series_c.re_rho24) / 2,
        re_rho12=(series_b.re_rho12 + series_c.re_rho12) / 2,
        re_rho13=(series_b.re_rho13 + series_c.re_rho13) / 2,
        re_rho23=(series_b.re_rho23 + series_c.re_rho23) / 2,
        rho44=(series_b.rho44 + series_c.rho44) / 2,
        residual_max=max(series_b.residual_max, series_c.residual_max),
    )
    return DecompositionResult(tripod=series_a, lambda_c=series_b,
                               lambda_a=series_c, average=avg)


@dataclass(frozen=True)
class SwitchingContrast:
    """Absorption switched on by the control field.

    ratio = absorption at the central bright feature with the control on,
    over the line-center absorption of the transparent three-level
    reference (control off, coupling detuning zero).  When the reference
    is perfectly transparent the ratio is reported as the inf sentinel
    with both raw values retained.
    """

    ratio: float
    on_value: float
    off_value: float
    on_position: float
    guarded: bool = False


def switching_contrast(params: SystemParams, dp_axis=None) -> SwitchingContrast:
    """Quantify control-induced absorption at line center."""
    scale = max(abs(params.delta_c), abs(params.delta_a), 1.0)
    if abs(params.delta_c + params.delta_a) > 1e-9 * scale:
        raise ValueError("switching contrast requires delta_c = -delta_a")

    off_params = lambda_reference(params, coupling_detuning=0.0).replace(delta_p=0.0)
    off_states, _ = _steady_sweep(off_params, np.zeros(1))
    off_value = float(off_states[0, 3, 1].imag)

    if params.omega_a == 0:
        # control already off: both branches are the same measurement
        return SwitchingContrast(ratio=1.0, on_value=off_value, off_value=off_value,
                                 on_position=0.0)

    axis = default_probe_axis(params) if dp_axis is None else _validated_axis(dp_axis)
    series = probe_sweep(params, axis)

    lo = min(params.delta_c, params.delta_a)
    hi = max(params.delta_c, params.delta_a)
    central = None
    try:
        bright = [f for f in find_features(series)
                  if f.kind == "bright" and lo < f.position < hi]
        if bright:
            central = min(bright, key=lambda f: abs(f.position))
    except NoFeatures:
        pass

    if central is not None:
        on_value, on_position = central.value, central.position
    else:
        # no enhancement between the dark resonances: read line center
        mid = int(np.abs(axis).argmin())
        on_value, on_position = float(series.im_rho24[mid]), float(axis[mid])

    if on_value == off_value:
        return SwitchingContrast(ratio=1.0, on_value=on_value, off_value=off_value,
                                 on_position=on_position)
    if abs(off_value) < 1e-15:
        return SwitchingContrast(ratio=math.inf, on_value=on_value, off_value=off_value,
                                 on_position=on_position, guarded=True)
    return SwitchingContrast(ratio=on_value / off_value, on_value=on_value,
                             off_value=off_value, on_position=on_position)


# ---------------------------------------------------------------------------
# feature extraction


def _refine(axis, y, i):
    """Quadratic sub-grid refinement of extremum (position, value)."""
    y1, y2, y3 = y[i - 1], y[i], y[i + 1]
    denom = y1 - 2 * y2 + y3
    if denom == 0:
        return float(axis[i]), float(y2)
    shift = 0.5 * (y1 - y3) / denom
    shift = max(-1.0, min(1.0, shift))
    step = (axis[i + 1] - axis[i - 1]) / 2
    value = y2 - 0.25 * (y1 - y3) * shift
    return float(axis[i] + shift * step), float(value)


def _half_crossing(axis, y, start, stop, half):
    """Scan from start toward stop for the half-level crossing."""
    step = 1 if stop >= start else -1
    for i in range(start, stop, step):
        a, b = y[i], y[i + step]
        if (a - half) * (b - half) <= 0 and a != b:
            t = (half - a) / (b - a)
            return float(axis[i] + t * (axis[i + step] - axis[i]))
    return None


def _fwhm(axis, y, i, minima_idx):
    """Width at half prominence, base taken from the flanking minima."""
    left_minima = [m for m in minima_idx if m < i]
    right_minima = [m for m in minima_idx if m > i]
    li = max(left_minima) if left_minima else 0
    ri = min(right_minima) if right_minima else len(y) - 1
    base = max(y[li], y[ri])
    half = (y[i] + base) / 2
    left = _half_crossing(axis, y, i, li, half)
    right = _half_crossing(axis, y, i, ri, half)
    if left is None or right is None:
        return None
    return right - left


def find_features(series: SpectrumSeries) -> list[SpectralFeature]:
    """Local maxima (bright) and minima (dark) of the absorption column.

    Three-point comparison with quadratic sub-grid refinement; bright
    features carry a FWHM interpolated at half prominence.  Raises
    NoFeatures when the spectrum is monotone.
    """
    if len(series.axis) < 5:
        raise ValueError("need at least 5 points to locate features")
    axis, y = series.axis, series.im_rho24
    maxima = [i for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] > y[i + 1]]
    minima = [i for i in range(1, len(y) - 1) if y[i] < y[i - 1] and y[i] < y[i + 1]]
    if not maxima and not minima:
        raise NoFeatures("spectrum is monotone; no local extrema")

    features = []
    for i in maxima:
        pos, val = _refine(axis, y, i)
        features.append(SpectralFeature(kind="bright", position=pos, value=val,
                                        fwhm=_fwhm(axis, y, i, minima)))
    for i in minima:
        pos, val = _refine(axis, y, i)
        features.append(SpectralFeature(kind="dark", position=pos, value=val))
    features.sort(key=lambda f: f.position)
    return features
