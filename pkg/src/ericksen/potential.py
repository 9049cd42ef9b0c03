"""Double-well bulk potential for the scalar order parameter.

The default family is the symmetric quartic

    W(s) = w0 * s^2 * (s_plus - s)^2,

which has wells of depth zero at s = 0 (isotropic) and s = s_plus (nematic),
is symmetric under s -> s_plus - s on [0, s_plus], and grows quadratically
out of both wells.  An optional barrier factor makes W blow up at the
physical limits s = -1/2 and s = 1 while leaving the quartic untouched on
[0, s_plus], so the well symmetry is preserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PotentialSpec", "w_eval", "w_deriv", "w_sqrt"]


@dataclass(frozen=True)
class PotentialSpec:
    """Parameters of the double-well potential.

    s_plus : location of the nematic well, in (0, 1].
    w0 : overall amplitude, > 0.
    barrier_enabled : multiply by a smooth factor that blows up at
        s = -1/2 and s = 1.  Requires s_plus < 1 so the nematic well
        stays clear of the blow-up point.
    """

    s_plus: float = 1.0
    w0: float = 1.0
    barrier_enabled: bool = False

    def __post_init__(self):
        if not 0.0 < self.s_plus <= 1.0:
            raise ValueError(f"s_plus must lie in (0, 1], got {self.s_plus}")
        if self.w0 <= 0.0:
            raise ValueError(f"w0 must be positive, got {self.w0}")
        if self.barrier_enabled and self.s_plus >= 1.0:
            raise ValueError("barrier requires s_plus < 1 (well must stay below the blow-up point)")


def _check_domain(spec: PotentialSpec, s: np.ndarray) -> None:
    if spec.barrier_enabled:
        if np.any(s <= -0.5) or np.any(s >= 1.0):
            raise ValueError("s outside the physical range (-1/2, 1) with barrier enabled")


def _barrier_log(spec: PotentialSpec, s: np.ndarray) -> np.ndarray:
    """Log of the barrier factor: 0 on [0, s_plus], C-infinity, -> +inf at -1/2 and 1.

    Glued with exp(-1/x^2) factors so every derivative vanishes at the junctions,
    keeping the quartic (and its well symmetry) exact on [0, s_plus].
    """
    out = np.zeros_like(s)
    left = s < 0.0
    if np.any(left):
        sl = s[left]
        out[left] = np.exp(-1.0 / sl**2) / (sl + 0.5)
    right = s > spec.s_plus
    if np.any(right):
        sr = s[right]
        out[right] = np.exp(-1.0 / (sr - spec.s_plus) ** 2) / (1.0 - sr)
    return out


def _barrier_log_deriv(spec: PotentialSpec, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    left = s < 0.0
    if np.any(left):
        sl = s[left]
        e = np.exp(-1.0 / sl**2)
        out[left] = e * (2.0 / sl**3) / (sl + 0.5) - e / (sl + 0.5) ** 2
    right = s > spec.s_plus
    if np.any(right):
        sr = s[right]
        u = sr - spec.s_plus
        e = np.exp(-1.0 / u**2)
        out[right] = e * (2.0 / u**3) / (1.0 - sr) + e / (1.0 - sr) ** 2
    return out


def w_eval(spec: PotentialSpec, s):
    """Evaluate W(s).  Accepts scalars or arrays; raises outside (-1/2, 1) when the barrier is on."""
    s = np.asarray(s, dtype=float)
    _check_domain(spec, s)
    w = spec.w0 * s**2 * (spec.s_plus - s) ** 2
    if spec.barrier_enabled:
        # overflow to +inf right at the blow-up points is the intended limit
        with np.errstate(over="ignore"):
            w = w * np.exp(_barrier_log(spec, s))
    return w if w.ndim else float(w)


def w_deriv(spec: PotentialSpec, s):
    """dW/ds, analytic."""
    s = np.asarray(s, dtype=float)
    _check_domain(spec, s)
    core = spec.w0 * (2.0 * s * (spec.s_plus - s) ** 2 - 2.0 * s**2 * (spec.s_plus - s))
    if spec.barrier_enabled:
        b = np.exp(_barrier_log(spec, s))
        core = b * (core + spec.w0 * s**2 * (spec.s_plus - s) ** 2 * _barrier_log_deriv(spec, s))
    return core if core.ndim else float(core)


def w_sqrt(spec: PotentialSpec, s):
    """sqrt(W(s)), used by the connecting-energy quadrature and the co-area weight."""
    return np.sqrt(w_eval(spec, s))
