"""Concrete T-matrix kernels in the rapidity basis.

Half-plates, the infinite plate (RL channel), perfect plates, and the
small-needle multipole matrix with conversion to the planar basis.

Conventions (frozen by the closed-form cross-checks, see the test
suite): evanescent waves are labeled by the complex angle a = i*alpha
measured from the vertical axis; a half-plate tilted by phi from the
decay axis scatters with

    T(a_out, a_in) = 1/2 [ -sech((a_out+a_in)/2)
                           + s * sec(i(a_out-a_in)/2 + phi) ]

where s = -1 (Dirichlet) / +1 (Neumann).  The kernel is analytic for
|phi| < pi/2 and Hermitian, T(a',a) = conj(T(a,a')).  At phi = pi/2 the
sec term degenerates into the csch singularity; it is regulated by
evaluating at phi = pi/2 - epsilon with the grid's epsilon.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError, ValidationError
from .quadrature import Kernel, QuadratureGrid, identity_kernel

__all__ = [
    "BoundaryCondition",
    "Channel",
    "PerfectPlate",
    "HalfPlate",
    "InfinitePlate",
    "Needle",
    "halfplate_kernel",
    "infinite_plate_rl",
    "needle_T_multipole",
    "needle_kernel_planar",
    "perfect_plate_eigenvalues",
]


class BoundaryCondition(enum.Enum):
    DIRICHLET = "D"
    NEUMANN = "N"
    EM2D = "EM"

    @property
    def sign(self) -> int:
        """s in the half-plate kernel: -1 Dirichlet, +1 Neumann."""
        if self is BoundaryCondition.DIRICHLET:
            return -1
        if self is BoundaryCondition.NEUMANN:
            return +1
        raise ValidationError(
            "EM2D is a sum rule over D and N, not a kernel sign"
        )

    @classmethod
    def parse(cls, s) -> "BoundaryCondition":
        if isinstance(s, cls):
            return s
        key = str(s).strip().upper()
        table = {"D": cls.DIRICHLET, "DIRICHLET": cls.DIRICHLET,
                 "N": cls.NEUMANN, "NEUMANN": cls.NEUMANN,
                 "EM": cls.EM2D, "EM2D": cls.EM2D}
        if key not in table:
            raise ValidationError(f"unknown boundary condition {s!r}")
        return table[key]


class Channel(enum.Enum):
    """Half-plate scattering channels: same side (LL) or through (RL).

    RR = LL and LR = RL by symmetry, so two labels suffice.
    """

    LL = "LL"
    RL = "RL"


# --- scatterer descriptors -------------------------------------------------

@dataclass(frozen=True)
class PerfectPlate:
    """Infinite perfectly reflecting plate (translation invariant)."""


@dataclass(frozen=True)
class HalfPlate:
    """Half-plate tilted by phi (radians) from the edge-to-edge axis."""

    tilt: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.tilt):
            raise ValidationError("tilt must be finite")


@dataclass(frozen=True)
class InfinitePlate:
    """Infinite plate used as a blocking wall (RL channel only)."""


@dataclass(frozen=True)
class Needle:
    """Small scatterer with quadratic-in-frequency multipole strengths.

    t00, txx, tyy are polarizability-like coefficients (length^2,
    multiplying p^2); theta0 is the orientation angle.
    """

    t00: float = 0.0
    txx: float = 0.0
    tyy: float = 0.0
    theta0: float = 0.0

    def __post_init__(self):
        for name in ("t00", "txx", "tyy", "theta0"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.txx < 0 or self.tyy < 0:
            raise ValidationError("txx and tyy must be nonnegative")


# --- kernels ---------------------------------------------------------------

def _effective_tilt(phi: float, grid: QuadratureGrid) -> float | None:
    """Map phi to the analytic domain; None flags the vertical case.

    Exactly vertical plates (|phi| = pi/2) are evaluated by the exact
    eps -> 0 limit of the sec term (principal value plus a delta part,
    see _vertical_halfplate_ll), signalled by returning None.  Angles
    strictly inside the forbidden collar (pi/2 - eps, pi/2) would put
    the sec pole within resolution of the grid and are refused.
    """
    half_pi = 0.5 * np.pi
    mag = abs(phi)
    if mag > half_pi + 1e-12:
        raise ValidationError(
            f"half-plate tilt {phi:.6f} outside |phi| <= pi/2"
        )
    if mag >= half_pi - 1e-12:
        return None
    if mag > half_pi - grid.epsilon:
        # the diagonal node closest to the pole is alpha = alpha', i.e.
        # every diagonal entry; name the central one
        j = grid.n_alpha // 2
        raise ResolutionError(
            f"sec pole at tilt {phi:.6f} within grid resolution near node "
            f"alpha={grid.alpha_nodes[j]:.6f} (epsilon={grid.epsilon:.3e})"
        )
    return phi


def _differentiation_matrix(grid: QuadratureGrid) -> np.ndarray:
    """Spectral d/d(alpha) on the mapped Gauss-Legendre grid.

    Barycentric differentiation at the Legendre points t = tanh(alpha/m)
    with weights lambda_k = (-1)^k sqrt((1-t_k^2) w_k), then the chain
    rule d/d(alpha) = ((1-t^2)/m) d/dt.
    """
    m = grid.map_scale
    t = np.tanh(grid.alpha_nodes / m)
    # recover the plain Legendre weights from the folded alpha weights
    wt = grid.alpha_weights * (2.0 * np.pi) * (1.0 - t * t) / m
    lam = (-1.0) ** np.arange(t.size) * np.sqrt((1.0 - t * t) * wt)
    D = np.zeros((t.size, t.size))
    off = ~np.eye(t.size, dtype=bool)
    tt = t[:, None] - t[None, :]
    D[off] = (lam[None, :] / lam[:, None])[off] / tt[off]
    np.fill_diagonal(D, -D.sum(axis=1))
    return ((1.0 - t * t) / m)[:, None] * D


def _pv_csch_half(grid: QuadratureGrid) -> np.ndarray:
    """Raw kernel entries of the operator f -> PV int (dalpha'/2pi)
    f(alpha') / sinh((alpha-alpha')/2), by singularity subtraction.

    PV int 1/sinh over the line vanishes, so
        (Kf)_j = sum_k w_k [f(a_k) - f(a_j)] / sinh(y_jk)
    with the k = j term taken at its removable limit -2 f'(a_j),
    realized through the spectral differentiation matrix.
    """
    a = grid.alpha_nodes
    w = grid.alpha_weights
    y = 0.5 * (a[:, None] - a[None, :])
    pv = np.zeros_like(y)
    off = ~np.eye(grid.n_alpha, dtype=bool)
    pv[off] = 1.0 / np.sinh(y[off])
    np.fill_diagonal(pv, -(pv * w[None, :]).sum(axis=1) / w)
    D = _differentiation_matrix(grid)
    # raw-entry convention: operator = entries @ diag(w)
    return pv - 2.0 * (w[:, None] * D) / w[None, :]


def _vertical_halfplate_ll(s: int, up: bool,
                           grid: QuadratureGrid) -> np.ndarray:
    """LL entries at tilt pi/2, as the exact eps -> 0 limit.

    With phi = pi/2 - eps the sec term degenerates,
        sec(i y + pi/2 - eps) -> i PV(1/sinh y) + pi delta(y),
    so the kernel splits into the smooth -sech/2 part, an odd
    principal-value part, and an exact identity part (s/2) * I.  A
    plate extending the other way (phi = -pi/2) flips the sign of the
    PV part only.
    """
    a = grid.alpha_nodes
    z = 0.5 * (a[:, None] + a[None, :])
    sign_pv = 1.0 if up else -1.0
    entries = (-0.5 / np.cosh(z)
               + 0.5 * s * sign_pv * 1j * _pv_csch_half(grid)
               ).astype(complex)
    # pi*delta(y) = 2*pi*delta(alpha-alpha'): the measure-consistent
    # identity, entries delta_jk / w_j
    entries[np.eye(grid.n_alpha, dtype=bool)] += \
        0.5 * s / grid.alpha_weights
    return entries


def halfplate_kernel(bc: BoundaryCondition, channel: Channel, phi: float,
                     grid: QuadratureGrid) -> Kernel:
    """Half-plate T kernel, LL or RL channel, tilt phi from the axis.

    Frequency independent: the same kernel serves every p node.
    RL = +LL for Dirichlet, -LL for Neumann.
    """
    bc = BoundaryCondition.parse(bc)
    s = bc.sign
    phi_eff = _effective_tilt(float(phi), grid)
    a = grid.alpha_nodes
    if phi_eff is None:
        entries = _vertical_halfplate_ll(s, phi > 0, grid)
    else:
        z = 0.5 * (a[:, None] + a[None, :])
        y = 0.5 * (a[:, None] - a[None, :])
        entries = 0.5 * (-1.0 / np.cosh(z) + s / np.cos(1j * y + phi_eff))
    if channel is Channel.RL:
        entries = -s * entries  # + for Dirichlet, - for Neumann
    return Kernel(entries, grid)


def infinite_plate_rl(grid: QuadratureGrid) -> Kernel:
    """Infinite blocking plate: minus the measure-consistent identity,
    for both Dirichlet and Neumann."""
    ident = identity_kernel(grid)
    return Kernel(-ident.entries, grid)


_M_ORDER = (-1, 0, 1)


def needle_T_multipole(desc: Needle, p: float) -> np.ndarray:
    """3x3 multipole T matrix over m, m' in {-1, 0, 1}.

    Indexed [m_in, m_out] in the order (-1, 0, 1).  Entries with
    m + m' odd vanish for the symmetric needle.  The dipole block is the
    theta0-rotation of the principal strengths; its normalization is
    fixed by reproducing the tilted-needle closed forms.
    """
    if p <= 0:
        raise ValidationError("p must be positive")
    p2 = p * p
    T = np.zeros((3, 3), dtype=complex)
    iy = {m: k for k, m in enumerate(_M_ORDER)}
    T[iy[0], iy[0]] = p2 * desc.t00
    diag = 2.0 * p2 * (desc.txx + desc.tyy)
    for m in (-1, 1):
        T[iy[m], iy[m]] = diag
        T[iy[m], iy[-m]] = (
            2.0 * p2 * (desc.txx - desc.tyy) * np.exp(2j * m * desc.theta0)
        )
    return T


def needle_kernel_planar(desc: Needle, p: float,
                         grid: QuadratureGrid) -> Kernel:
    """Needle kernel in the planar (rapidity) basis.

    T(a', a) = pi * sum_{m,m'} (-1)^{m+m'} e^{i m' a'* - i m a} T_{m,m'}
    at a = i*alpha (vertical-axis convention), a' the outgoing angle.
    """
    T = needle_T_multipole(desc, p)
    a_in = grid.alpha_nodes[None, :]
    a_out = grid.alpha_nodes[:, None]
    entries = np.zeros((grid.n_alpha, grid.n_alpha), dtype=complex)
    for ki, m in enumerate(_M_ORDER):
        for ko, mp in enumerate(_M_ORDER):
            t = T[ki, ko]
            if t == 0:
                continue
            phase = (-1.0) ** (m + mp)
            # e^{i m' a'* - i m a} at a = i alpha_in, a' = i alpha_out
            entries = entries + (
                phase * t * np.exp(mp * a_out + m * a_in)
            )
    return Kernel(np.pi * entries, grid)


def perfect_plate_eigenvalues(bc) -> float:
    """Perfect-plate T eigenvalue: -1 for M/Dirichlet, +1 for E/Neumann."""
    if isinstance(bc, str) and bc.strip().upper() in ("M", "E"):
        return -1.0 if bc.strip().upper() == "M" else +1.0
    bc = BoundaryCondition.parse(bc)
    return float(bc.sign)
