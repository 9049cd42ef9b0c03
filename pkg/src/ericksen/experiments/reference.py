"""Sharp-interface Oseen-Frank reference minimization on the nematic region.

Minimizes s_plus^2 * integral over Omega+ of (W_OF(n, grad n) + alpha |grad n|^2)
over unit director fields, with the case anchoring imposed as a hard
constraint on the interface band and the outer trace pinned.  The isotropic
gradient term uses face-staggered differences with partial-volume weights
(much better behaved against the hedgehog core singularity than cell-centered
stencils), while W_OF keeps the cell-centered evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..energy import ElasticConstants, density_oseen_frank, oseen_frank_partials
from ..fields import Grid, jacobian, project_unit
from .config import ExperimentConfig

__all__ = ["ReferenceResult", "compute_reference_d"]


@dataclass
class ReferenceResult:
    d_value: float
    alpha_term: float
    frank_term: float
    iterations: int
    converged: bool
    restart_values: List[float] = field(default_factory=list)
    restart_scatter: float = 0.0

    def as_dict(self) -> dict:
        return {
            "d_value": self.d_value,
            "alpha_term": self.alpha_term,
            "frank_term": self.frank_term,
            "iterations": self.iterations,
            "converged": self.converged,
            "restart_values": self.restart_values,
            "restart_scatter": self.restart_scatter,
        }


class _Domain:
    """Geometry masks and weights for the reference problem."""

    def __init__(self, cfg: ExperimentConfig):
        ref = cfg.reference
        self.kind = ref.domain
        if ref.domain == "half_square":
            # the outer trace is the tilted boundary director
            t = math.radians(ref.tilt_deg)
            self.g_far = np.array([math.sin(t), 0.0, math.cos(t)])
        else:
            self.g_far = np.asarray(ref.g_far, dtype=float)
            self.g_far /= np.linalg.norm(self.g_far)
        if self.kind in ("disk", "ball"):
            d = 2 if self.kind == "disk" else 3
            L = 1.0 + ref.box_pad
            n = ref.shape
            self.grid = Grid(shape=(n,) * d, h=2 * L / n, origin=(-L,) * d,
                             periodic=(False,) * d)
            centers = self.grid.centers()
            r = np.linalg.norm(centers, axis=-1)
            self.w = np.clip(0.5 + (1.0 - r) / self.grid.h, 0.0, 1.0)
            self.nu = np.zeros(self.grid.shape + (3,))
            self.nu[..., :d] = centers / np.maximum(r[..., None], 1e-12)
            self.band = np.abs(r - 1.0) <= 1.0 * self.grid.h
            self.frozen = r > 1.0 + self.grid.h
            self.sigma_plus = np.zeros(self.grid.shape, dtype=bool)
            self.r = r
        elif self.kind == "half_square":
            n = ref.shape
            self.grid = Grid(shape=(n, n), h=1.0 / n, origin=(0.0, 0.0),
                             periodic=(False, True))
            centers = self.grid.centers()
            x = centers[..., 0]
            self.w = np.clip(0.5 + (x - 0.5) / self.grid.h, 0.0, 1.0)
            self.nu = np.zeros(self.grid.shape + (3,))
            self.nu[..., 0] = -1.0   # outward normal of the nematic region at the interface
            self.band = np.abs(x - 0.5) <= 1.0 * self.grid.h
            self.frozen = x < 0.5 - self.grid.h
            self.sigma_plus = np.zeros(self.grid.shape, dtype=bool)
            self.sigma_plus[-1, :] = True
            self.r = None
        else:
            raise ValueError(f"unknown reference domain {self.kind}")

    def initial_director(self, anchoring: str, tilt_deg: float) -> np.ndarray:
        n = np.zeros(self.grid.shape + (3,))
        if anchoring == "free":
            n[...] = self.g_far
            return n
        if self.kind in ("disk", "ball"):
            if anchoring == "homeotropic":
                return self.nu.copy()
            if self.kind == "ball":
                raise ValueError("planar reference runs use the disk or half_square domain")
            tau = np.zeros_like(self.nu)
            tau[..., 0] = -self.nu[..., 1]
            tau[..., 1] = self.nu[..., 0]
            chi = 0.5 * np.pi * np.clip(1.0 - self.r, 0.0, 1.0) ** 2
            zhat = np.zeros_like(tau)
            zhat[..., 2] = 1.0
            return project_unit(np.cos(chi)[..., None] * tau + np.sin(chi)[..., None] * zhat)
        # half_square: tilt profile from the anchoring angle at the interface to g at x=1
        x = self.grid.centers()[..., 0]
        phi_anchor = 0.5 * np.pi if anchoring == "planar" else 0.0
        phi_g = 0.5 * np.pi - math.radians(tilt_deg)
        tri = np.clip(1.0 - np.abs(x - 0.5) / 0.5, 0.0, 1.0)
        phi = phi_g + (phi_anchor - phi_g) * tri
        n[..., 0] = np.cos(phi)
        n[..., 2] = np.sin(phi)
        return n

    def apply_constraints(self, n: np.ndarray, n_init: np.ndarray, anchoring: str) -> np.ndarray:
        if np.any(self.frozen):
            n[self.frozen] = n_init[self.frozen]
        if np.any(self.sigma_plus):
            n[self.sigma_plus] = self.g_far
        if anchoring == "homeotropic":
            nu = self.nu[self.band]
            sgn = np.sign(np.einsum("mi,mi->m", n[self.band], nu))
            sgn[sgn == 0.0] = 1.0
            n[self.band] = sgn[:, None] * nu
        elif anchoring == "planar":
            nu = self.nu[self.band]
            nb = n[self.band]
            nb = nb - np.einsum("mi,mi->m", nb, nu)[:, None] * nu
            norms = np.linalg.norm(nb, axis=-1)
            bad = norms < 1e-8
            if np.any(bad):
                fallback = np.zeros_like(nb[bad])
                fallback[:, 2] = 1.0
                fallback -= np.einsum("mi,mi->m", fallback, nu[bad])[:, None] * nu[bad]
                nb[bad] = fallback
                norms = np.linalg.norm(nb, axis=-1)
            n[self.band] = nb / norms[:, None]
        return n


def _staggered_alpha(dom: _Domain, n: np.ndarray, want_grad: bool):
    """alpha-free staggered Dirichlet energy sum w_f |dn/dx|^2 and its gradient."""
    grid = dom.grid
    h = grid.h
    total = 0.0
    grad = np.zeros_like(n) if want_grad else None
    vol = grid.cell_volume
    for ax in range(grid.dims):
        if grid.periodic[ax]:
            d = (np.roll(n, -1, axis=ax) - n) / h
            wf = 0.5 * (dom.w + np.roll(dom.w, -1, axis=ax))
            total += float(np.sum(wf * np.einsum("...i,...i->...", d, d))) * vol
            if want_grad:
                q = (2.0 * wf[..., None]) * d / h * vol
                grad -= q
                grad += np.roll(q, 1, axis=ax)
        else:
            sl_lo = [slice(None)] * grid.dims
            sl_hi = [slice(None)] * grid.dims
            sl_lo[ax] = slice(0, -1)
            sl_hi[ax] = slice(1, None)
            sl_lo, sl_hi = tuple(sl_lo), tuple(sl_hi)
            d = (n[sl_hi] - n[sl_lo]) / h
            wf = 0.5 * (dom.w[sl_lo] + dom.w[sl_hi])
            total += float(np.sum(wf * np.einsum("...i,...i->...", d, d))) * vol
            if want_grad:
                q = (2.0 * wf[..., None]) * d / h * vol
                grad[sl_lo] -= q
                grad[sl_hi] += q
    return total, grad


def _frank_energy(dom: _Domain, c: ElasticConstants, n: np.ndarray, want_grad: bool):
    grid = dom.grid
    J = jacobian(n, grid)
    vol = grid.cell_volume
    if not want_grad:
        of = density_oseen_frank(c, n, J)
        return float(np.sum(dom.w * of)) * vol, None
    of, of_n, of_J = oseen_frank_partials(c, n, J)
    total = float(np.sum(dom.w * of)) * vol
    grad = dom.w[..., None] * of_n
    for k in range(grid.dims):
        grad += grid.apply_diff_adjoint(dom.w[..., None] * of_J[..., :, k], k)
    return total, grad * vol


def compute_reference_d(cfg: ExperimentConfig) -> ReferenceResult:
    """Minimize the sharp-interface director energy; returns the reference D value.

    Runs cfg.reference.restarts seeded descents (the first from the analytic
    initial guess, the rest from tangent-perturbed copies) and reports the
    best energy together with the across-restart scatter.
    """
    ref = cfg.reference
    c = cfg.constants.build()
    spec = cfg.potential.build()
    dom = _Domain(cfg)
    s_plus2 = spec.s_plus**2
    anchoring = ref.anchoring
    n_init = dom.initial_director(anchoring, ref.tilt_deg)
    n_init = dom.apply_constraints(n_init.copy(), n_init, anchoring)

    def energy(nf, want_grad=False):
        ea, ga = _staggered_alpha(dom, nf, want_grad)
        ef, gf = _frank_energy(dom, c, nf, want_grad)
        e = s_plus2 * (c.alpha * ea + ef)
        if not want_grad:
            return e, None
        g = s_plus2 * (c.alpha * ga + gf)
        g -= np.einsum("...i,...i->...", g, nf)[..., None] * nf
        g[dom.frozen] = 0.0
        g[dom.sigma_plus] = 0.0
        return e, g

    results = []
    best = None
    rng = np.random.default_rng(cfg.seed)
    for k in range(max(1, ref.restarts)):
        nf = n_init.copy()
        if k > 0:
            noise = rng.normal(size=nf.shape) * 0.3
            nf = project_unit(nf + noise - np.einsum("...i,...i->...", noise, nf)[..., None] * nf)
            nf = dom.apply_constraints(nf, n_init, anchoring)
        diff = 2.0 * (c.k1 + c.k2 + c.k3 + abs(c.k4) + c.alpha) * s_plus2
        dt = 0.45 * dom.grid.h**2 / (dom.grid.dims * diff)
        vol = dom.grid.cell_volume
        e, _ = energy(nf)
        it = 0
        converged = False
        for it in range(1, ref.max_iters + 1):
            e, g = energy(nf, want_grad=True)
            gnorm = float(np.max(np.abs(g))) / vol
            if gnorm <= cfg.solve.tol_grad:
                converged = True
                break
            accepted = False
            for _try in range(30):
                cand = project_unit(nf - (dt / vol) * g)
                cand = dom.apply_constraints(cand, n_init, anchoring)
                e_new, _ = energy(cand)
                if e_new <= e + 1e-12:
                    accepted = True
                    break
                dt *= 0.5
            if not accepted:
                break
            nf, e = cand, e_new
            dt = min(dt * 1.3, 1e6 * dom.grid.h**2)
        ea, _ = _staggered_alpha(dom, nf, False)
        ef, _ = _frank_energy(dom, c, nf, False)
        res = ReferenceResult(
            d_value=s_plus2 * (c.alpha * ea + ef),
            alpha_term=s_plus2 * c.alpha * ea,
            frank_term=s_plus2 * ef,
            iterations=it,
            converged=converged,
        )
        results.append(res)
        if best is None or res.d_value < best.d_value:
            best = res
    vals = [r.d_value for r in results]
    best.restart_values = vals
    span = max(vals) - min(vals)
    best.restart_scatter = span / max(abs(np.mean(vals)), 1e-30)
    return best
