"""Projected gradient flow for the discrete Ericksen energy.

The descent is a backtracking projected gradient method: the scalar field
steps along the exact gradient of the discrete energy (Dirichlet cells
frozen), the director steps in its tangent plane and is renormalized, and a
volume constraint is enforced either by an exact rescale projection after
every step or through a quadratic penalty.  Accepted steps never increase
the energy.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .energy import CaseTag, ElasticConstants, EnergyBreakdown, density_parts, total_energy
from .fields import (
    BoundaryData,
    FaceKind,
    FieldState,
    Grid,
    SignedDistanceField,
    gradient,
    jacobian,
    project_unit,
    signed_distance,
    write_vtk,
)
from .orbit1d import OrbitProfile, build_truncated_orbit, solve_exact_orbit
from .potential import PotentialSpec, w_eval

__all__ = [
    "VolumeConstraint",
    "SolveConfig",
    "SolveReport",
    "variational_gradient",
    "step",
    "minimize_energy",
    "init_comparison_map",
    "enforce_volume",
    "smoothed_volume",
    "rescale_to_volume",
]


@dataclass(frozen=True)
class VolumeConstraint:
    """Target measure of the nematic region {s >= s_plus/2}, enforced per step."""

    v0: float
    mode: str = "rescale"          # "rescale" (exact projection) or "penalty"
    mu_vol: float = 1e4
    h_smooth: float = 0.1          # width of the smoothed Heaviside, in s units

    def __post_init__(self):
        if self.mode not in ("rescale", "penalty"):
            raise ValueError("volume mode must be 'rescale' or 'penalty'")


@dataclass
class SolveConfig:
    eps: float
    gamma: float = 0.55
    step0: Optional[float] = None       # functional-gradient time step; None = stability heuristic
    backtrack_factor: float = 0.5
    backtrack_max: int = 40
    tol_grad: float = 1e-5
    max_iters: int = 2000
    constraint: Optional[VolumeConstraint] = None
    seed: int = 0
    recenter_every: int = 0             # droplet translation pinning; 0 disables
    record_every: int = 1
    checkpoint_every: int = 0           # write VTK snapshots every k accepted steps
    checkpoint_path: Optional[str] = None   # template, formatted with the iteration

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0.5 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (1/2, 1)")
        if self.tol_grad <= 0:
            raise ValueError("tol_grad must be positive")


@dataclass
class SolveReport:
    iterations: int
    final: EnergyBreakdown
    energy_history: list = field(default_factory=list)
    grad_history: list = field(default_factory=list)
    volume_history: list = field(default_factory=list)
    wall_time: float = 0.0
    converged: bool = False
    final_grad_norm: float = float("inf")


def _dirichlet_masks(state: FieldState):
    """(s_mask, s_values, n_mask, n_values) for the frozen boundary cell layers."""
    grid = state.grid
    s_mask = np.zeros(grid.shape, dtype=bool)
    s_vals = np.zeros(grid.shape)
    n_mask = np.zeros(grid.shape, dtype=bool)
    n_vals = np.zeros(grid.shape + (3,))
    for (axis, side), bc in state.bc.faces.items():
        if bc.kind != FaceKind.DIRICHLET_PAIR:
            continue
        if grid.periodic[axis]:
            raise ValueError(f"axis {axis} is periodic; Dirichlet faces are not allowed there")
        idx = [slice(None)] * grid.dims
        idx[axis] = 0 if side == 0 else grid.shape[axis] - 1
        idx = tuple(idx)
        s_mask[idx] = True
        s_vals[idx] = bc.t_eps
        n_mask[idx] = True
        n_vals[idx] = bc.g_eps
    return s_mask, s_vals, n_mask, n_vals


def impose_traces(state: FieldState) -> None:
    s_mask, s_vals, n_mask, n_vals = _dirichlet_masks(state)
    state.s[s_mask] = s_vals[s_mask]
    state.n[n_mask] = n_vals[n_mask]


def variational_gradient(
    state: FieldState,
    c: ElasticConstants,
    eps: float,
    case: CaseTag,
    spec: PotentialSpec,
):
    """Exact gradient of the discrete energy w.r.t. the cell values.

    Returns (ds, dn): ds[cell] = dE/ds_cell, dn[cell] = tangential part of
    dE/dn_cell (both include the cell-volume factor).  The stencil chain rule
    is applied through the transposed sparse axis operators, so the result
    matches central finite differences of total_energy at every cell,
    boundary rows included.
    """
    grid = state.grid
    g = gradient(state.s, grid)
    J = jacobian(state.n, grid)
    _parts, partials = density_parts(c, case, spec, eps, state.s, state.n, g, J, want_partials=True)
    Fs, Fn, Fg, FJ = partials
    ds = Fs
    dn = Fn
    for k in range(grid.dims):
        ds = ds + grid.apply_diff_adjoint(Fg[..., k], k)
        dn = dn + grid.apply_diff_adjoint(FJ[..., :, k], k)
    vol = grid.cell_volume
    ds = ds * vol
    dn = dn * vol
    dn = dn - np.einsum("...i,...i->...", dn, state.n)[..., None] * state.n
    return ds, dn


def step(state: FieldState, grads, step_size: float) -> FieldState:
    """One explicit step: s <- s - step*ds (Dirichlet cells frozen), n renormalized."""
    if step_size <= 0:
        raise ValueError("step_size must be positive")
    ds, dn = grads
    new = state.copy()
    new.s = state.s - step_size * ds
    new.n = project_unit(state.n - step_size * dn)
    impose_traces(new)
    return new


def smoothed_volume(s: np.ndarray, grid: Grid, s_plus: float, h_smooth: float) -> float:
    """Vol_h(s): smoothed-Heaviside measure of {s >= s_plus/2}."""
    H = 0.5 * (1.0 + np.tanh((s - 0.5 * s_plus) / h_smooth))
    return float(np.sum(H)) * grid.cell_volume


def _volume_gradient(s: np.ndarray, grid: Grid, s_plus: float, h_smooth: float) -> np.ndarray:
    t = (s - 0.5 * s_plus) / h_smooth
    return (0.5 / h_smooth) / np.cosh(t) ** 2 * grid.cell_volume


def rescale_to_volume(
    s: np.ndarray, grid: Grid, v0: float, s_plus: float, h_smooth: float,
    free_mask: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Shift s by the constant restoring Vol_h = v0 (free cells only)."""
    box = grid.cell_volume * np.prod(grid.shape)
    if not 0 < v0 < box:
        raise ValueError(f"target volume {v0} outside the domain volume {box}")
    free = np.ones_like(s, dtype=bool) if free_mask is None else free_mask

    def track(c):
        sc = np.where(free, s + c, s)
        return smoothed_volume(sc, grid, s_plus, h_smooth) - v0

    lo, hi = -1.5 * s_plus, 1.5 * s_plus
    flo, fhi = track(lo), track(hi)
    if flo > 0 or fhi < 0:
        raise ValueError("volume target unreachable by a uniform shift")
    c = brentq(track, lo, hi, xtol=1e-14)
    return np.where(free, s + c, s)


def enforce_volume(
    state: FieldState,
    v0: float,
    mode: str,
    spec: PotentialSpec,
    h_smooth: float = 0.1,
    mu_vol: float = 1e4,
):
    """Volume constraint surrogate.

    mode 'rescale': returns a new state with s shifted so Vol_h = v0 exactly.
    mode 'penalty': returns (penalty_energy, penalty_ds) evaluated at the state,
    the quadratic term mu_vol*(Vol_h - v0)^2 and its cell gradient.
    """
    if mode == "rescale":
        new = state.copy()
        s_mask, _, _, _ = _dirichlet_masks(state)
        new.s = rescale_to_volume(new.s, state.grid, v0, spec.s_plus, h_smooth, ~s_mask)
        return new
    if mode == "penalty":
        v = smoothed_volume(state.s, state.grid, spec.s_plus, h_smooth)
        pen = mu_vol * (v - v0) ** 2
        ds = 2.0 * mu_vol * (v - v0) * _volume_gradient(state.s, state.grid, spec.s_plus, h_smooth)
        return pen, ds
    raise ValueError("mode must be 'rescale' or 'penalty'")


def _auto_step(grid: Grid, c: ElasticConstants, eps: float, spec: PotentialSpec) -> float:
    # explicit-flow stability: diffusion from the quadratic gradient terms,
    # reaction from W''/eps^2
    s_scale = spec.s_plus**2
    diff = 2.0 * (c.beta + c.L1 + c.L2) + 2.0 * (c.k1 + c.k2 + c.k3 + abs(c.k4) + c.alpha) * s_scale
    dt_diff = grid.h**2 / (grid.dims * max(diff, 1e-12))
    ss = np.linspace(-0.2, spec.s_plus + 0.2, 101)
    h = 1e-4
    wpp = np.max(np.abs(w_eval(spec, ss + h) - 2 * w_eval(spec, ss) + w_eval(spec, ss - h))) / h**2
    dt_react = eps**2 / max(2.0 * wpp, 1e-12)
    return 0.45 * min(dt_diff, dt_react)


def _recenter(state: FieldState, s_plus: float, h_smooth: float) -> None:
    """Roll the droplet so its smoothed barycenter sits at the box center (periodic axes)."""
    grid = state.grid
    H = 0.5 * (1.0 + np.tanh((state.s - 0.5 * s_plus) / h_smooth))
    total = np.sum(H)
    if total <= 0:
        return
    shifts = []
    for ax in range(grid.dims):
        if not grid.periodic[ax]:
            shifts.append(0)
            continue
        nax = grid.shape[ax]
        theta = 2.0 * np.pi * np.arange(nax) / nax
        axes = tuple(i for i in range(grid.dims) if i != ax)
        w = np.sum(H, axis=axes)
        ang = math.atan2(float(np.sum(w * np.sin(theta))), float(np.sum(w * np.cos(theta))))
        center_idx = (ang % (2.0 * np.pi)) / (2.0 * np.pi) * nax
        shifts.append(int(round(nax / 2.0 - center_idx)))
    if any(shifts):
        state.s = np.roll(state.s, shifts, axis=tuple(range(grid.dims)))
        state.n = np.roll(state.n, shifts, axis=tuple(range(grid.dims)))


def minimize_energy(
    state0: FieldState,
    c: ElasticConstants,
    config: SolveConfig,
    case: CaseTag,
    spec: PotentialSpec,
    callback=None,
):
    """Backtracking projected gradient descent on the discrete energy.

    Runs until the sup norm of the functional gradient falls below tol_grad
    or max_iters is reached; accepted steps never increase the (constrained)
    energy beyond a 1e-12 slack.  An optional callback(iteration, state) is
    invoked every record_every accepted steps.  Returns (state, SolveReport).
    """
    t0 = time.perf_counter()
    grid = state0.grid
    vol = grid.cell_volume
    state = state0.copy()
    impose_traces(state)
    s_mask, _sv, n_mask, _nv = _dirichlet_masks(state)
    vc = config.constraint
    penalty = vc is not None and vc.mode == "penalty"
    rescale = vc is not None and vc.mode == "rescale"
    if rescale:
        state.s = rescale_to_volume(state.s, grid, vc.v0, spec.s_plus, vc.h_smooth, ~s_mask)

    def energy_of(st: FieldState) -> float:
        e = total_energy(st, c, config.eps, case, spec).total
        if penalty:
            e += vc.mu_vol * (smoothed_volume(st.s, grid, spec.s_plus, vc.h_smooth) - vc.v0) ** 2
        return e

    dt = config.step0 if config.step0 is not None else _auto_step(grid, c, config.eps, spec)
    dt_cap = dt * 1024.0
    energy = energy_of(state)
    report = SolveReport(iterations=0, final=None)
    report.energy_history.append(energy)
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        ds, dn = variational_gradient(state, c, config.eps, case, spec)
        if penalty:
            dv = 2.0 * vc.mu_vol * (
                smoothed_volume(state.s, grid, spec.s_plus, vc.h_smooth) - vc.v0
            )
            ds = ds + dv * _volume_gradient(state.s, grid, spec.s_plus, vc.h_smooth)
        ds[s_mask] = 0.0
        dn[n_mask] = 0.0
        if rescale:
            # move tangentially to {Vol_h = v0}: subtracting the component along
            # the volume gradient keeps the step a descent direction, and the
            # exact rescale after the step is then a second-order correction
            m = _volume_gradient(state.s, grid, spec.s_plus, vc.h_smooth)
            m[s_mask] = 0.0
            mm = float(np.sum(m * m))
            if mm > 0.0:
                ds = ds - (float(np.sum(ds * m)) / mm) * m
        gnorm = max(float(np.max(np.abs(ds))), float(np.max(np.abs(dn)))) / vol
        if it % config.record_every == 0 or it == 1:
            report.grad_history.append(gnorm)
        if gnorm <= config.tol_grad:
            converged = True
            break

        accepted = False
        for _try in range(config.backtrack_max):
            cand = FieldState(grid, state.s - (dt / vol) * ds,
                              project_unit(state.n - (dt / vol) * dn), state.bc)
            impose_traces(cand)
            if rescale:
                cand.s = rescale_to_volume(cand.s, grid, vc.v0, spec.s_plus, vc.h_smooth, ~s_mask)
            e_new = energy_of(cand)
            if e_new <= energy + 1e-12 * max(1.0, abs(energy)):
                accepted = True
                break
            dt *= config.backtrack_factor
        if not accepted:
            break
        state, energy = cand, e_new
        dt = min(dt * 1.3, dt_cap)
        if config.recenter_every and it % config.recenter_every == 0 and vc is not None:
            _recenter(state, spec.s_plus, vc.h_smooth)
            energy = energy_of(state)
        if it % config.record_every == 0:
            report.energy_history.append(energy)
            if vc is not None:
                report.volume_history.append(
                    smoothed_volume(state.s, grid, spec.s_plus, vc.h_smooth)
                )
            if callback is not None:
                callback(it, state)
        if config.checkpoint_every and it % config.checkpoint_every == 0 and config.checkpoint_path:
            write_vtk(config.checkpoint_path.format(it), grid, state.s, state.n)

    ds, dn = variational_gradient(state, c, config.eps, case, spec)
    ds[s_mask] = 0.0
    dn[n_mask] = 0.0
    report.final_grad_norm = max(float(np.max(np.abs(ds))), float(np.max(np.abs(dn)))) / vol
    report.iterations = it
    report.converged = converged
    report.final = total_energy(state, c, config.eps, case, spec)
    report.wall_time = time.perf_counter() - t0
    return state, report


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def init_comparison_map(
    grid: Grid,
    interface,
    eps: float,
    gamma: float,
    anchoring: str,
    spec: PotentialSpec = PotentialSpec(),
    beta: float = 1.0,
    director_far=(0.0, 0.0, 1.0),
    exact_orbit: Optional[OrbitProfile] = None,
) -> FieldState:
    """Near-optimal trial state: truncated orbit across the interface, anchored director.

    interface : SignedDistanceField, callable sdf, or 2D polyline.
    anchoring : 'planar' (tangential on the interface, escaping to the far
        director away from it), 'homeotropic' (along grad d), 'free' or
        'constant' (uniform director_far).
    """
    if anchoring not in ("planar", "homeotropic", "free", "constant"):
        raise ValueError(f"unknown anchoring '{anchoring}'")
    sdf = interface if isinstance(interface, SignedDistanceField) else signed_distance(interface, grid)
    halfwidth = eps**gamma
    if halfwidth >= 0.5 * max(grid.extent(a) for a in range(grid.dims)):
        raise ValueError("transition window eps^gamma does not fit in the domain")

    if exact_orbit is None:
        rate_window = max(16.0, 2.0 * eps ** (gamma - 1.0))
        exact_orbit = solve_exact_orbit(spec, beta, rate_window, 4097)
    trunc = build_truncated_orbit(exact_orbit, eps, gamma)
    s = trunc.interp(sdf.d / eps)
    if np.min(s) > 0.05 * spec.s_plus or np.max(s) < 0.95 * spec.s_plus:
        raise ValueError("transition window exceeds the domain: profile never reaches the wells")

    e = np.asarray(director_far, dtype=float)
    e = e / np.linalg.norm(e)
    n = np.zeros(grid.shape + (3,))
    if anchoring in ("free", "constant"):
        n[...] = e
    else:
        gd = gradient(sdf.d, grid)
        nu = gd / np.maximum(np.linalg.norm(gd, axis=-1, keepdims=True), 1e-12)
        if anchoring == "homeotropic":
            if grid.dims == 2:
                # blend to the vertical escape direction away from the interface
                eta = _smoothstep((np.abs(sdf.d) - halfwidth) / max(halfwidth, 4 * grid.h))
                zhat = np.zeros_like(nu)
                zhat[..., 2] = 1.0
                n = (1.0 - eta)[..., None] * nu + eta[..., None] * zhat
                n = project_unit(n)
            else:
                n = nu
        else:  # planar, 2D cross-section: tangential + vertical escape, always normal-free
            if grid.dims != 2:
                raise ValueError("planar comparison maps are built on 2D cross-sections")
            tau = np.zeros_like(nu)
            tau[..., 0] = -nu[..., 1]
            tau[..., 1] = nu[..., 0]
            chi = 0.5 * np.pi * _smoothstep(np.abs(sdf.d) / max(2.0 * halfwidth, 8 * grid.h))
            zhat = np.zeros_like(nu)
            zhat[..., 2] = 1.0
            n = np.cos(chi)[..., None] * tau + np.sin(chi)[..., None] * zhat
            n = project_unit(n)
    return FieldState(grid, s, n, BoundaryData())
