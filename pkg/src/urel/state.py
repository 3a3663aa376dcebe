"""Exact state algebra for the ultra-relativistic ideal gas.

The gas is described either by the primitive pair ``(p, u)`` -- pressure and
the spatial part of the dimensionless four-velocity -- or by the conserved
vector ``w = (w_1, ..., w_d, w_{d+1})`` holding the ``d`` momentum densities
and the energy density.  The equation of state ``e = 3 p`` is built into the
transforms:

    w_j     = 4 p u_j sqrt(1 + |u|^2),      j = 1..d,
    w_{d+1} = p (3 + 4 |u|^2),

    p   = (sqrt(4 w_{d+1}^2 - 3 |wb|^2) - w_{d+1}) / 3,
    u_j = w_j / sqrt(4 p (w_{d+1} + p)),

with ``wb`` the momentum part of ``w``.  The concave entropy
``eta = p^{3/4} sqrt(1 + |u|^2)`` with flux ``q = p^{3/4} u`` generates the
entropy variables (main field), the flux potentials
``psi_k = omega . F_k - q_k = -eta u_k / (4 sqrt(1 + |u|^2))`` and the
entropy potential ``phi = omega . w - eta = -eta / 4``.

The array functions broadcast over leading axes; the trailing axis carries
vector components (length ``d`` for velocities, ``d + 1`` for conserved
states).  Scalar states are wrapped in :class:`PrimState` /
:class:`ConsState`, which validate once at construction; the kernels assume
valid input and stay branch-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateState(ValueError):
    """Conserved vector outside the image of the primitive chart."""


def _usq(u: np.ndarray) -> np.ndarray:
    return np.sum(u * u, axis=-1)


def cons_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Conserved vector(s) from pressure and four-velocity arrays."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    usq = _usq(u)
    u0 = np.sqrt(1.0 + usq)
    wb = 4.0 * p[..., None] * u * u0[..., None]
    we = p * (3.0 + 4.0 * usq)
    return np.concatenate([wb, we[..., None]], axis=-1)


def pressure_from_cons(w: np.ndarray) -> np.ndarray:
    """Pressure root of the inverse transform.

    Raises :class:`DegenerateState` if any input lies outside the admissible
    cone (``w_{d+1} > 0`` and ``|wb| < w_{d+1}``), where the root is not a
    positive pressure.
    """
    w = np.asarray(w, dtype=float)
    wb = w[..., :-1]
    we = w[..., -1]
    rad = 4.0 * we * we - 3.0 * _usq(wb)
    if np.any(we <= 0.0) or np.any(rad <= 0.0):
        raise DegenerateState("energy density or pressure radicand not positive")
    p = (np.sqrt(rad) - we) / 3.0
    if np.any(p <= 0.0):
        raise DegenerateState("non-positive pressure root")
    return p


def velocity_from_cons(w: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Four-velocity from the conserved vector, given the pressure root."""
    w = np.asarray(w, dtype=float)
    we = w[..., -1]
    return w[..., :-1] / np.sqrt(4.0 * p * (we + p))[..., None]


def prim_arrays_from_cons(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pressure and four-velocity arrays from conserved arrays."""
    p = pressure_from_cons(w)
    return p, velocity_from_cons(w, p)


def admissible_pressure(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Non-raising admissibility check used by the positivity limiter.

    Returns ``(ok, p)`` where ``ok`` flags entries with a valid positive
    pressure root; ``p`` is meaningful only where ``ok`` holds.
    """
    w = np.asarray(w, dtype=float)
    wb = w[..., :-1]
    we = w[..., -1]
    rad = 4.0 * we * we - 3.0 * _usq(wb)
    ok = (we > 0.0) & (rad > 0.0)
    p = np.where(ok, (np.sqrt(np.where(rad > 0.0, rad, 1.0)) - we) / 3.0, -np.inf)
    return (ok & (p > 0.0)), p


def entropy_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Physical entropy eta = p^{3/4} sqrt(1 + |u|^2)."""
    return np.asarray(p, dtype=float) ** 0.75 * np.sqrt(1.0 + _usq(np.asarray(u, dtype=float)))


def entropy_flux_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Entropy flux q = p^{3/4} u."""
    return np.asarray(p, dtype=float)[..., None] ** 0.75 * np.asarray(u, dtype=float)


def entropy_variables_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Main field omega = grad_w eta.

    ``omega_j = -(eta / 4p) u_j / sqrt(1 + |u|^2)`` for the momentum slots and
    ``omega_{d+1} = (eta / 4p)``.
    """
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    u0 = np.sqrt(1.0 + _usq(u))
    eta_over_4p = 0.25 * p**-0.25 * u0
    om_b = -(eta_over_4p / u0)[..., None] * u
    return np.concatenate([om_b, eta_over_4p[..., None]], axis=-1)


def flux_potential_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Flux potentials psi_k = -eta u_k / (4 sqrt(1 + |u|^2)), k = 1..d."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    return -0.25 * p[..., None] ** 0.75 * u


def entropy_potential_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Entropy potential phi = omega . w - eta = -eta / 4."""
    return -0.25 * entropy_array(p, u)


def lorentz_from_four(u: np.ndarray) -> np.ndarray:
    """Physical velocity v = u / sqrt(1 + |u|^2), componentwise |v| < 1."""
    u = np.asarray(u, dtype=float)
    return u / np.sqrt(1.0 + _usq(u))[..., None]


def four_from_lorentz(v: np.ndarray) -> np.ndarray:
    """Inverse map u = v / sqrt(1 - |v|^2); requires |v| < 1."""
    v = np.asarray(v, dtype=float)
    vsq = _usq(v)
    if np.any(vsq >= 1.0):
        raise ValueError("Lorentz velocity magnitude must be below 1")
    return v / np.sqrt(1.0 - vsq)[..., None]


# --- analytic derivatives -------------------------------------------------

def prim_gradient_arrays(p: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Jacobian of the chart w -> (p, u).

    Returns ``dp_dw`` with trailing axis d+1 and ``du_dw`` with trailing axes
    (d, d+1):

        dp/dw_j     = -2 u_j sqrt(1 + |u|^2) / (3 + 2|u|^2)
        dp/dw_{d+1} = (1 + 2|u|^2) / (3 + 2|u|^2)
        du_i/dw_j     = [delta_ij + u_i u_j (5 + 4|u|^2) / (3 + 2|u|^2)]
                        / (4 p sqrt(1 + |u|^2))
        du_i/dw_{d+1} = -(u_i / p) (1 + |u|^2) / (3 + 2|u|^2)
    """
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    d = u.shape[-1]
    usq = _usq(u)
    u0 = np.sqrt(1.0 + usq)
    denom = 3.0 + 2.0 * usq

    dp_b = -2.0 * u * (u0 / denom)[..., None]
    dp_e = (1.0 + 2.0 * usq) / denom
    dp_dw = np.concatenate([dp_b, dp_e[..., None]], axis=-1)

    eye = np.eye(d)
    uu = u[..., :, None] * u[..., None, :]
    du_b = (eye + uu * ((5.0 + 4.0 * usq) / denom)[..., None, None]) \
        / (4.0 * p * u0)[..., None, None]
    du_e = -(u / p[..., None]) * ((1.0 + usq) / denom)[..., None]
    du_dw = np.concatenate([du_b, du_e[..., None]], axis=-1)
    return dp_dw, du_dw


def entropy_hessian_array(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Hessian of eta with respect to w; symmetric and negative definite.

    Assembled from the closed forms of the second derivatives, with the
    common prefactor 1 / (16 p^{5/4} sqrt(1 + |u|^2) (3 + 2|u|^2)).
    """
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    d = u.shape[-1]
    usq = _usq(u)
    u0 = np.sqrt(1.0 + usq)
    pref = -1.0 / (16.0 * p**1.25 * u0 * (3.0 + 2.0 * usq))

    shape = np.broadcast_shapes(p.shape, u.shape[:-1])
    hess = np.zeros(shape + (d + 1, d + 1))
    uu = u[..., :, None] * u[..., None, :]
    block = (3.0 + 2.0 * usq)[..., None, None] * np.eye(d) \
        + (4.0 + 3.0 * usq)[..., None, None] * uu
    hess[..., :d, :d] = block
    cross = u * ((5.0 + 6.0 * usq) * u0)[..., None]
    hess[..., :d, d] = cross
    hess[..., d, :d] = cross
    hess[..., d, d] = (1.0 + usq) * (1.0 + 6.0 * usq)
    return pref[..., None, None] * hess


def entropy_flux_gradient_arrays(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Gradient of the entropy flux, dq_i/dw_j, trailing axes (d, d+1)."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    d = u.shape[-1]
    usq = _usq(u)
    u0 = np.sqrt(1.0 + usq)
    denom = 3.0 + 2.0 * usq
    p14 = p**0.25

    uu = u[..., :, None] * u[..., None, :]
    grad_b = (denom[..., None, None] * np.eye(d)
              - uu * (1.0 + 2.0 * usq)[..., None, None]) \
        / (4.0 * p14 * u0 * denom)[..., None, None]
    grad_e = -u * ((1.0 - 2.0 * usq) / (4.0 * p14 * denom))[..., None]
    return np.concatenate([grad_b, grad_e[..., None]], axis=-1)


# --- scalar state wrappers ------------------------------------------------

@dataclass(frozen=True)
class PrimState:
    """Primitive state: pressure > 0 and four-velocity of fixed dimension.

    Treated as immutable after construction; safe to share between threads.
    """

    p: float
    u: np.ndarray

    def __post_init__(self) -> None:
        u = np.atleast_1d(np.asarray(self.u, dtype=float))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "u", u)
        if not np.isfinite(self.p) or self.p <= 0.0:
            raise DegenerateState(f"pressure must be positive, got {self.p}")
        if u.ndim != 1 or u.shape[0] not in (1, 2, 3):
            raise ValueError("four-velocity must be a vector of dimension 1, 2 or 3")
        if not np.all(np.isfinite(u)):
            raise ValueError("four-velocity components must be finite")

    @property
    def d(self) -> int:
        return self.u.shape[0]

    @property
    def u0(self) -> float:
        """Time component sqrt(1 + |u|^2) of the four-velocity."""
        return float(np.sqrt(1.0 + np.dot(self.u, self.u)))


@dataclass(frozen=True)
class ConsState:
    """Conserved vector (momentum densities, energy density)."""

    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        object.__setattr__(self, "w", w)
        if w.ndim != 1 or w.shape[0] not in (2, 3, 4):
            raise ValueError("conserved vector must have d + 1 components, d in {1, 2, 3}")
        we = w[-1]
        if not (we > 0.0):
            raise DegenerateState("energy density must be positive")
        if not (3.0 * np.dot(w[:-1], w[:-1]) < 4.0 * we * we):
            raise DegenerateState("pressure radicand must be positive")

    @property
    def d(self) -> int:
        return self.w.shape[0] - 1

    @property
    def wb(self) -> np.ndarray:
        """Momentum part of the conserved vector."""
        return self.w[:-1]


@dataclass(frozen=True)
class EntropyState:
    """Entropy eta, main field omega, flux potentials psi, potential phi."""

    eta: float
    omega: np.ndarray
    psi: np.ndarray
    phi: float


def cons_from_prim(s: PrimState) -> ConsState:
    return ConsState(cons_array(s.p, s.u))


def prim_from_cons(w: ConsState | np.ndarray) -> PrimState:
    wv = w.w if isinstance(w, ConsState) else np.asarray(w, dtype=float)
    p = pressure_from_cons(wv)
    return PrimState(float(p), velocity_from_cons(wv, p))


def entropy(s: PrimState) -> float:
    return float(entropy_array(s.p, s.u))


def entropy_flux(s: PrimState) -> np.ndarray:
    return entropy_flux_array(s.p, s.u)


def entropy_variables(s: PrimState) -> np.ndarray:
    return entropy_variables_array(s.p, s.u)


def flux_potential(s: PrimState) -> np.ndarray:
    return flux_potential_array(s.p, s.u)


def entropy_state(s: PrimState) -> EntropyState:
    return EntropyState(
        eta=entropy(s),
        omega=entropy_variables(s),
        psi=flux_potential(s),
        phi=float(entropy_potential_array(s.p, s.u)),
    )


def prim_gradients(s: PrimState) -> tuple[np.ndarray, np.ndarray]:
    return prim_gradient_arrays(s.p, s.u)


def entropy_hessian(s: PrimState) -> np.ndarray:
    return entropy_hessian_array(s.p, s.u)


def entropy_flux_gradient(s: PrimState) -> np.ndarray:
    return entropy_flux_gradient_arrays(s.p, s.u)


def lorentz_velocity(s: PrimState) -> np.ndarray:
    return lorentz_from_four(s.u)
