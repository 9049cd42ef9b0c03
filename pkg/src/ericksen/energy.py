"""Ericksen energy density: raw and reorganized forms, validation, discrete total.

Density conventions: grad_s is a 3-vector (zero third component on 2D grids),
grad_n is the full 3x3 Jacobian J[i, j] = d n_i / d x_j.  The reorganized
form completes the squares

    k6 (grad_s . n - sigma s div n)^2   and
    k5 |grad_s - (grad_s . n) n - nu s (grad_n) n|^2,

with k6 = beta + L1 and k5 = beta + L2 consuming the (grad s . n)^2 and
|grad s ^ n|^2 coefficients entirely; there is no residual standalone
|grad s|^2 term.  Pointwise agreement of the two forms requires |n| = 1 and
the differentiated constraint J^T n = 0, both of which hold for actual
director fields.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
import numpy as np

from .fields import FieldState, gradient, jacobian
from .potential import PotentialSpec, w_deriv, w_eval

__all__ = [
    "CaseTag",
    "ElasticConstants",
    "DerivedConstants",
    "EnergyBreakdown",
    "ConstantsRejected",
    "derive_constants",
    "validate",
    "density_w2",
    "density_w2_reorganized",
    "density_oseen_frank",
    "oseen_frank_partials",
    "null_lagrangian_divergence",
    "reduce_case",
    "total_energy",
    "density_parts",
]


class CaseTag(str, Enum):
    A = "A"
    B = "B"
    C = "C"


class ConstantsRejected(ValueError):
    """Raised by validate; .inequality names the first violated condition."""

    def __init__(self, inequality: str, message: str = ""):
        self.inequality = inequality
        super().__init__(message or f"constants rejected: {inequality}")


@dataclass(frozen=True)
class ElasticConstants:
    k1: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    k4: float = 0.0
    alpha: float = 1.0
    beta: float = 1.0
    L1: float = 0.0
    L2: float = 0.0
    L3: float = 0.0
    L4: float = 0.0


@dataclass(frozen=True)
class DerivedConstants:
    sigma: float
    nu: float
    kbar1: float
    kbar3: float
    k5: float
    k6: float


def derive_constants(c: ElasticConstants) -> DerivedConstants:
    """sigma, nu, kbar1, kbar3, k5, k6 from the completed-square reorganization."""
    if c.beta + c.L1 <= 0:
        raise ConstantsRejected("beta+L1>0", "beta + L1 must be positive")
    if c.beta + c.L2 <= 0:
        raise ConstantsRejected("beta+L2>0", "beta + L2 must be positive")
    return DerivedConstants(
        sigma=-c.L3 / (2.0 * (c.beta + c.L1)),
        nu=-c.L4 / (2.0 * (c.beta + c.L2)),
        kbar1=c.k1 - c.L3**2 / (4.0 * (c.beta + c.L1)),
        kbar3=c.k3 - c.L4**2 / (4.0 * (c.beta + c.L2)),
        k5=c.beta + c.L2,
        k6=c.beta + c.L1,
    )


def _base_checks(c: ElasticConstants):
    checks = [
        ("alpha>0", c.alpha > 0),
        ("beta>0", c.beta > 0),
        ("k1>=0", c.k1 >= 0),
        ("k2>=0", c.k2 >= 0),
        ("k3>=0", c.k3 >= 0),
        ("k2>=|k4|", c.k2 >= abs(c.k4)),
        ("2k1>=k2+k4", 2 * c.k1 >= c.k2 + c.k4),
        ("L1>=0", c.L1 >= 0),
        ("L2>=0", c.L2 >= 0),
    ]
    for name, ok in checks:
        if not ok:
            raise ConstantsRejected(name)
    d = derive_constants(c)
    for name, ok in [
        ("positivity:kbar1>=0", d.kbar1 >= 0),
        ("positivity:kbar3>=0", d.kbar3 >= 0),
        ("positivity:k5>=0", d.k5 >= 0),
        ("positivity:k6>=0", d.k6 >= 0),
        ("positivity:beta>L2", c.beta > c.L2),
    ]:
        if not ok:
            raise ConstantsRejected(name)


def _case_checks(c: ElasticConstants, case: CaseTag):
    if case == CaseTag.A:
        for name, ok in [
            ("case_A:L1>0", c.L1 > 0),
            ("case_A:L2=0", c.L2 == 0),
            ("case_A:L4=0", c.L4 == 0),
            ("cond1", 3 * c.L3**2 < 4 * c.L1 * c.alpha),
        ]:
            if not ok:
                raise ConstantsRejected(name)
    elif case == CaseTag.B:
        for name, ok in [
            ("case_B:L2>0", c.L2 > 0),
            ("case_B:L1=0", c.L1 == 0),
            ("case_B:L3=0", c.L3 == 0),
            ("cond2", c.L4**2 < 4 * c.L2 * c.alpha),
        ]:
            if not ok:
                raise ConstantsRejected(name)
    else:
        for name, ok in [
            ("case_C:L1=0", c.L1 == 0),
            ("case_C:L2=0", c.L2 == 0),
            ("case_C:L3=0", c.L3 == 0),
            ("case_C:L4=0", c.L4 == 0),
        ]:
            if not ok:
                raise ConstantsRejected(name)


def random_configs(rng, m: int):
    """Random pointwise configurations on the constraint manifold, |g|^2 + s^2|J|^2 = 1."""
    n = rng.normal(size=(m, 3))
    n /= np.linalg.norm(n, axis=-1, keepdims=True)
    J = rng.normal(size=(m, 3, 3))
    J -= n[:, :, None] * np.einsum("mi,mij->mj", n, J)[:, None, :]
    g = rng.normal(size=(m, 3))
    s = rng.uniform(-0.5, 1.0, size=m)
    q = np.sqrt(np.einsum("mi,mi->m", g, g) + s**2 * np.einsum("mij,mij->m", J, J))
    g /= q[:, None]
    J /= q[:, None, None]
    return s, n, g, J


def validate(c: ElasticConstants, case: CaseTag, n_samples: int = 100_000, seed: int = 0):
    """Accept constants for a case and certify a sampled coercivity sandwich.

    Returns (lam, Lam) such that lam*(|grad s|^2 + s^2 |grad n|^2) <= W2 <=
    Lam*(...) on the sampled configurations.  The pair is a sampling-based
    certificate (min/max of the Rayleigh quotient over n_samples random
    configurations, widened by 2%), not a symbolic bound.
    """
    _case_checks(c, case)
    _base_checks(c)
    rng = np.random.default_rng(seed)
    s, n, g, J = random_configs(rng, n_samples)
    vals = density_w2(c, s, n, g, J)
    lam = float(np.min(vals))
    Lam = float(np.max(vals))
    if lam <= 0:
        raise ConstantsRejected("coercivity:lambda>0", f"sampled quotient reached {lam}")
    return 0.98 * lam, 1.02 * Lam


def _curl(J):
    return np.stack(
        [J[..., 2, 1] - J[..., 1, 2], J[..., 0, 2] - J[..., 2, 0], J[..., 1, 0] - J[..., 0, 1]],
        axis=-1,
    )


def _check_unit(n):
    norms = np.linalg.norm(n, axis=-1)
    if np.max(np.abs(norms - 1.0)) > 1e-10:
        raise ValueError("director must be unit length")


def density_oseen_frank(c: ElasticConstants, n, grad_n):
    """W_OF = k1(div n)^2 + k2(n.curl n)^2 + k3|n^curl n|^2 + (k2+k4)(tr(grad n)^2-(div n)^2)."""
    n = np.asarray(n, float)
    J = np.asarray(grad_n, float)
    _check_unit(n)
    div = np.trace(J, axis1=-2, axis2=-1)
    curl = _curl(J)
    nc = np.einsum("...i,...i->...", n, curl)
    wedge = np.cross(n, curl)
    tr2 = np.einsum("...ij,...ji->...", J, J)
    return (
        c.k1 * div**2
        + c.k2 * nc**2
        + c.k3 * np.einsum("...i,...i->...", wedge, wedge)
        + (c.k2 + c.k4) * (tr2 - div**2)
    )


def oseen_frank_partials(c: ElasticConstants, n, J, precomputed=None):
    """(W_OF, dW_OF/dn, dW_OF/dJ) assembled from the div / curl / tr(J^2) channels."""
    if precomputed is None:
        div = np.trace(J, axis1=-2, axis2=-1)
        curl = _curl(J)
        nc = np.einsum("...i,...i->...", n, curl)
        tr2 = np.einsum("...ij,...ji->...", J, J)
    else:
        div, curl, nc, tr2 = precomputed
    k24 = c.k2 + c.k4
    c2 = np.einsum("...i,...i->...", curl, curl)
    of = c.k1 * div**2 + c.k2 * nc**2 + c.k3 * (c2 - nc**2) + k24 * (tr2 - div**2)
    of_n = 2.0 * (c.k2 - c.k3) * nc[..., None] * curl
    dof_ddiv = 2.0 * (c.k1 - k24) * div
    q = (2.0 * (c.k2 - c.k3) * nc)[..., None] * n + 2.0 * c.k3 * curl
    of_J = np.zeros_like(J)
    of_J[..., 0, 0] += dof_ddiv
    of_J[..., 1, 1] += dof_ddiv
    of_J[..., 2, 2] += dof_ddiv
    of_J[..., 2, 1] += q[..., 0]
    of_J[..., 1, 2] -= q[..., 0]
    of_J[..., 0, 2] += q[..., 1]
    of_J[..., 2, 0] -= q[..., 1]
    of_J[..., 1, 0] += q[..., 2]
    of_J[..., 0, 1] -= q[..., 2]
    of_J += 2.0 * k24 * np.swapaxes(J, -1, -2)
    return of, of_n, of_J


def density_w2(c: ElasticConstants, s, n, grad_s, grad_n):
    """The eight-term Ericksen density (raw form)."""
    s = np.asarray(s, float)
    n = np.asarray(n, float)
    g = np.asarray(grad_s, float)
    J = np.asarray(grad_n, float)
    _check_unit(n)
    div = np.trace(J, axis1=-2, axis2=-1)
    gn = np.einsum("...i,...i->...", g, n)
    gwn = np.cross(g, n)
    Jn = np.einsum("...ij,...j->...i", J, n)
    frank = density_oseen_frank(c, n, J)
    return (
        s**2 * frank
        + c.alpha * s**2 * np.einsum("...ij,...ij->...", J, J)
        + c.beta * np.einsum("...i,...i->...", g, g)
        + c.L1 * gn**2
        + c.L2 * np.einsum("...i,...i->...", gwn, gwn)
        + c.L3 * gn * s * div
        + c.L4 * s * np.einsum("...i,...i->...", g, Jn)
    )


def density_w2_reorganized(c: ElasticConstants, d: DerivedConstants, s, n, grad_s, grad_n):
    """Completed-square form; equals density_w2 on the director constraint manifold."""
    s = np.asarray(s, float)
    n = np.asarray(n, float)
    g = np.asarray(grad_s, float)
    J = np.asarray(grad_n, float)
    _check_unit(n)
    div = np.trace(J, axis1=-2, axis2=-1)
    curl = _curl(J)
    nc = np.einsum("...i,...i->...", n, curl)
    wedge = np.cross(n, curl)
    tr2 = np.einsum("...ij,...ji->...", J, J)
    frank = (
        d.kbar1 * div**2
        + c.k2 * nc**2
        + d.kbar3 * np.einsum("...i,...i->...", wedge, wedge)
        + (c.k2 + c.k4) * (tr2 - div**2)
    )
    gn = np.einsum("...i,...i->...", g, n)
    Jn = np.einsum("...ij,...j->...i", J, n)
    v = g - gn[..., None] * n - d.nu * s[..., None] * Jn
    return (
        s**2 * frank
        + c.alpha * s**2 * np.einsum("...ij,...ij->...", J, J)
        + d.k5 * np.einsum("...i,...i->...", v, v)
        + d.k6 * (gn - d.sigma * s * div) ** 2
    )


def null_lagrangian_divergence(s_field: np.ndarray, n_field: np.ndarray, grid):
    """Both sides of the pointwise identity

        div(s^2 ((grad n) n - (div n) n))
            = s^2 (tr(grad n)^2 - (div n)^2) + 2 s grad s . ((grad n) n - (div n) n),

    evaluated with the grid stencils.  Returns (lhs, rhs) cell fields; they
    agree to O(h^2) for smooth fields, and the integral of either side over a
    periodic box vanishes (boundary dependence only).
    """
    J = jacobian(n_field, grid)
    div = J[..., 0, 0] + J[..., 1, 1] + J[..., 2, 2]
    Jn = np.einsum("...ij,...j->...i", J, n_field)
    v = (s_field**2)[..., None] * (Jn - div[..., None] * n_field)
    lhs = np.zeros(grid.shape)
    for k in range(grid.dims):
        lhs += grid.apply_diff(v[..., k], k)
    g = gradient(s_field, grid)
    tr2 = np.einsum("...ij,...ji->...", J, J)
    rhs = s_field**2 * (tr2 - div**2) + 2.0 * s_field * np.einsum(
        "...i,...i->...", g, Jn - div[..., None] * n_field
    )
    return lhs, rhs


def reduce_case(c: ElasticConstants):
    """Rewrite arbitrary couplings into one of the cases A / B / C.

    L1 > L2 lowers to case A by folding L2 into beta and absorbing L4 with the
    null Lagrangian -(L4/2) div(s^2((grad n)n - (div n)n)); the absorbed
    couplings reappear as L3 -> L3 + L4 and k4 -> k4 - L4/2.  L1 < L2 is the
    mirrored reduction to case B (L4 -> L4 + L3, k4 -> k4 + L3/2).  L1 = L2
    folds into beta and requires L3 = L4 = 0 or L4 = -L3 (absorbed the same
    way); anything else fits no case.  Bulk integrals are preserved up to
    boundary terms, which is the null-Lagrangian property.
    """
    if c.L1 > c.L2:
        return CaseTag.A, replace(
            c,
            beta=c.beta + c.L2,
            L1=c.L1 - c.L2,
            L2=0.0,
            L3=c.L3 + c.L4,
            L4=0.0,
            k4=c.k4 - c.L4 / 2.0,
        )
    if c.L1 < c.L2:
        return CaseTag.B, replace(
            c,
            beta=c.beta + c.L1,
            L2=c.L2 - c.L1,
            L1=0.0,
            L4=c.L4 + c.L3,
            L3=0.0,
            k4=c.k4 + c.L3 / 2.0,
        )
    base = replace(c, beta=c.beta + c.L1, L1=0.0, L2=0.0)
    if c.L3 == 0.0 and c.L4 == 0.0:
        return CaseTag.C, base
    if c.L4 == -c.L3:
        return CaseTag.C, replace(base, L3=0.0, L4=0.0, k4=c.k4 + c.L3 / 2.0)
    raise ConstantsRejected(
        "case:none", "L1 = L2 with L4 != -L3 and L3 != 0 fits none of the cases"
    )


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-term split of the discrete energy at a given eps; total = sum of parts."""

    eps: float
    dirichlet_s: float
    potential: float
    frank: float
    iso_director: float
    coupling: float

    @property
    def total(self) -> float:
        return self.dirichlet_s + self.potential + self.frank + self.iso_director + self.coupling

    def as_dict(self) -> dict:
        return {
            "eps": self.eps,
            "dirichlet_s": self.dirichlet_s,
            "potential": self.potential,
            "frank": self.frank,
            "iso_director": self.iso_director,
            "coupling": self.coupling,
            "total": self.total,
        }


def density_parts(
    c: ElasticConstants,
    case: CaseTag,
    spec: PotentialSpec,
    eps: float,
    s: np.ndarray,
    n: np.ndarray,
    g: np.ndarray,
    J: np.ndarray,
    want_partials: bool = False,
):
    """Pointwise energy split and (optionally) its partial derivatives.

    Returns (parts, partials) where parts maps term name to the per-cell
    density field and partials is (F_s, F_n, F_g, F_J) for the summed density,
    or None.  Couplings are evaluated in the reduced-case form: case A keeps
    L1, L3; case B keeps L2, L4; case C has none.
    """
    div = np.trace(J, axis1=-2, axis2=-1)
    curl = _curl(J)
    nc = np.einsum("...i,...i->...", n, curl)
    c2 = np.einsum("...i,...i->...", curl, curl)
    wedge2 = c2 - nc**2          # |n ^ curl n|^2 for unit n
    tr2 = np.einsum("...ij,...ji->...", J, J)
    J2 = np.einsum("...ij,...ij->...", J, J)
    g2 = np.einsum("...i,...i->...", g, g)
    gn = np.einsum("...i,...i->...", g, n)
    s2 = s * s
    k24 = c.k2 + c.k4

    of = c.k1 * div**2 + c.k2 * nc**2 + c.k3 * wedge2 + k24 * (tr2 - div**2)
    parts = {
        "dirichlet_s": c.beta * g2,
        "potential": w_eval(spec, s) / eps**2,
        "frank": s2 * of,
        "iso_director": c.alpha * s2 * J2,
    }
    Jn = None
    if case == CaseTag.A:
        u, v = gn, s * div
        parts["coupling"] = c.L1 * u**2 + c.L3 * u * v
    elif case == CaseTag.B:
        Jn = np.einsum("...ij,...j->...i", J, n)
        gJn = np.einsum("...i,...i->...", g, Jn)
        parts["coupling"] = c.L2 * (g2 - gn**2) + c.L4 * s * gJn
    else:
        parts["coupling"] = np.zeros_like(s)

    if not want_partials:
        return parts, None

    Fs = w_deriv(spec, s) / eps**2 + 2.0 * s * (of + c.alpha * J2)
    _of, of_n, of_J = oseen_frank_partials(c, n, J, precomputed=(div, curl, nc, tr2))
    Fn = s2[..., None] * of_n
    Fg = 2.0 * c.beta * g
    FJ = s2[..., None, None] * of_J
    FJ += (2.0 * c.alpha * s2)[..., None, None] * J

    if case == CaseTag.A:
        u, v = gn, s * div
        w = 2.0 * c.L1 * u + c.L3 * v
        Fg = Fg + w[..., None] * n
        Fn = Fn + w[..., None] * g
        Fs = Fs + c.L3 * u * div
        sl3u = c.L3 * u * s
        FJ[..., 0, 0] += sl3u
        FJ[..., 1, 1] += sl3u
        FJ[..., 2, 2] += sl3u
    elif case == CaseTag.B:
        gJn = np.einsum("...i,...i->...", g, Jn)
        Fg = Fg + 2.0 * c.L2 * (g - gn[..., None] * n) + (c.L4 * s)[..., None] * Jn
        Fn = Fn - (2.0 * c.L2 * gn)[..., None] * g + (c.L4 * s)[..., None] * np.einsum(
            "...ij,...i->...j", J, g
        )
        Fs = Fs + c.L4 * gJn
        FJ += (c.L4 * s)[..., None, None] * g[..., :, None] * n[..., None, :]

    return parts, (Fs, Fn, Fg, FJ)


def total_energy(
    state: FieldState,
    c: ElasticConstants,
    eps: float,
    case: CaseTag,
    spec: PotentialSpec,
) -> EnergyBreakdown:
    """Midpoint-rule discrete energy with the per-term breakdown.

    Expects constants already in reduced-case form (see reduce_case).
    """
    state.validate()
    g = gradient(state.s, state.grid)
    J = jacobian(state.n, state.grid)
    parts, _ = density_parts(c, case, spec, eps, state.s, state.n, g, J)
    vol = state.grid.cell_volume
    return EnergyBreakdown(
        eps=eps,
        dirichlet_s=float(np.sum(parts["dirichlet_s"])) * vol,
        potential=float(np.sum(parts["potential"])) * vol,
        frank=float(np.sum(parts["frank"])) * vol,
        iso_director=float(np.sum(parts["iso_director"])) * vol,
        coupling=float(np.sum(parts["coupling"])) * vol,
    )
