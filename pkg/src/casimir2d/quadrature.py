"""Quadrature grids and discretized kernel algebra.

The continuous objects of the reflection expansion are operators
K(alpha_out, alpha_in) acting on functions of the rapidity alpha with
measure d(alpha)/(2 pi).  We discretize on a Gauss-Legendre grid mapped
to the real line by alpha = map_scale * atanh(t); the 1/(2 pi) measure
factor is folded into the alpha weights, so every operator composition
and trace applies the measure exactly once.

The radial frequency integral int_0^infty p dp (the (kappa, k_z)
half-plane folded to polar form) uses an exp-sinh (double-exponential)
rule, p = scale * exp((pi/2) sinh t) with a trapezoid in t: the
rapidity integral generates log(p) endpoint behavior at p -> 0, which
defeats Gauss-Laguerre (algebraic convergence) but is handled
spectrally by the double-exponential clustering.  The weights include
the p factor, so sum(w * f(p)) ~ int p f(p) dp.  A plain
int_0^infty dkappa grid is provided for the pure-2D scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .errors import ValidationError

__all__ = [
    "QuadratureGrid",
    "Kernel",
    "build_alpha_grid",
    "build_p_grid",
    "build_kappa_grid",
    "build_grid",
    "kernel_product",
    "kernel_trace",
    "identity_kernel",
]


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights for the rapidity and radial-frequency integrals.

    ``alpha_weights`` include the 1/(2 pi) measure; ``p_weights`` include
    the radial p factor (or realize plain dkappa, see ``build_kappa_grid``).
    ``epsilon`` is the regulator used by singular (csch-type) kernels,
    tied to the grid spacing.
    """

    alpha_nodes: np.ndarray
    alpha_weights: np.ndarray
    p_nodes: np.ndarray = field(default_factory=lambda: np.empty(0))
    p_weights: np.ndarray = field(default_factory=lambda: np.empty(0))
    epsilon: float = 0.0
    map_scale: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.alpha_nodes, dtype=float)
        w = np.asarray(self.alpha_weights, dtype=float)
        if a.size:
            if np.any(np.diff(a) <= 0):
                raise ValidationError("alpha nodes must be strictly increasing")
            if np.any(w <= 0):
                raise ValidationError("alpha weights must be positive")
            # symmetric about zero
            if not np.allclose(a, -a[::-1], atol=1e-13):
                raise ValidationError("alpha grid must be symmetric about 0")
            spacing = np.min(np.diff(a))
            if self.epsilon <= 0 or self.epsilon > 0.5 * spacing + 1e-15:
                raise ValidationError(
                    "epsilon must be positive and at most half the minimum "
                    "alpha spacing"
                )
        p = np.asarray(self.p_nodes, dtype=float)
        if p.size and (np.any(p <= 0) or np.any(np.diff(p) <= 0)):
            raise ValidationError("p nodes must be positive and increasing")

    @property
    def n_alpha(self) -> int:
        return self.alpha_nodes.size

    @property
    def n_p(self) -> int:
        return self.p_nodes.size

    def with_p(self, p_nodes, p_weights) -> "QuadratureGrid":
        return QuadratureGrid(
            self.alpha_nodes, self.alpha_weights,
            np.asarray(p_nodes, float), np.asarray(p_weights, float),
            self.epsilon, self.map_scale,
        )


@dataclass(frozen=True)
class Kernel:
    """Discretized operator K(alpha_out, alpha_in) on a grid.

    Entries are the raw kernel values; the alpha measure lives in the
    grid weights and is applied by kernel_product / kernel_trace
    (measure_absorbed stays False for all kernels built here, the flag
    records the convention).
    """

    entries: np.ndarray
    grid: QuadratureGrid
    measure_absorbed: bool = False

    def __post_init__(self):
        e = self.entries
        n = self.grid.n_alpha
        if e.shape != (n, n):
            raise ValidationError(
                f"kernel entries must be {n}x{n}, got {e.shape}"
            )
        if not np.all(np.isfinite(e)):
            raise ValidationError("kernel entries must be finite")


def build_alpha_grid(n_nodes: int, map_scale: float = 3.0) -> QuadratureGrid:
    """Symmetric rapidity grid for int d(alpha)/(2 pi).

    alpha = map_scale * atanh(t) with t on Gauss-Legendre nodes in
    (-1, 1).  Integrands with sech-type decay become doubly-exponentially
    small at the endpoints under this map.
    """
    if n_nodes < 8 or n_nodes % 2:
        raise ValidationError("n_nodes must be even and >= 8")
    if map_scale <= 0:
        raise ValidationError("map_scale must be positive")
    t, wt = roots_legendre(n_nodes)
    # enforce exact symmetry of the node set under negation
    t = 0.5 * (t - t[::-1])
    wt = 0.5 * (wt + wt[::-1])
    alpha = map_scale * np.arctanh(t)
    w = wt * map_scale / (1.0 - t * t) / (2.0 * np.pi)
    eps = 0.5 * float(np.min(np.diff(alpha)))
    return QuadratureGrid(alpha, w, epsilon=eps, map_scale=map_scale)


def _expsinh_grid(n_nodes: int, scale: float, order: float):
    """Nodes/weights for int_0^infty p^order f(p) dp, f ~ exp(-p/scale).

    Exp-sinh map p = scale * exp((pi/2) sinh t), trapezoid in t over
    [t_min, t_max] chosen so the omitted tails are below double
    precision for integrands with the stated decay; robust to log(p)
    endpoint singularities at p -> 0.
    """
    if n_nodes < 8:
        raise ValidationError("n_nodes must be >= 8")
    if scale <= 0:
        raise ValidationError("scale must be positive")
    two_over_pi = 2.0 / np.pi
    t_min = np.arcsinh(two_over_pi * np.log(1e-12))   # p_min = 1e-12*scale
    t_max = np.arcsinh(two_over_pi * np.log(690.0))   # e^{-690} ~ 1e-300
    t = np.linspace(t_min, t_max, n_nodes)
    h = t[1] - t[0]
    p = scale * np.exp(0.5 * np.pi * np.sinh(t))
    weights = p ** order * p * 0.5 * np.pi * np.cosh(t) * h
    weights[0] *= 0.5
    weights[-1] *= 0.5
    if not np.all(np.isfinite(weights)):
        raise ValidationError("p-grid weights overflow; reduce n_nodes")
    return p, weights


def build_p_grid(n_nodes: int, scale: float = 1.0):
    """Radial-frequency grid realizing int_0^infty p dp.

    Weights contain the p factor: sum(w * exp(-p)) -> Gamma(2) = 1 at
    scale 1 (to quadrature accuracy).  ``scale`` should track the decay
    length of the integrand (for a round trip across gap d,
    scale ~ 1/(2 d)).  Returns (p_nodes, p_weights).
    """
    return _expsinh_grid(n_nodes, scale, 1.0)


def build_kappa_grid(n_nodes: int, scale: float = 1.0):
    """Plain int_0^infty dkappa grid for the pure-2D scenarios."""
    return _expsinh_grid(n_nodes, scale, 0.0)


def build_grid(n_alpha: int, n_p: int, *, map_scale: float = 3.0,
               p_scale: float = 1.0, radial: str = "p") -> QuadratureGrid:
    """Convenience: combined alpha + radial grid.

    radial="p" folds (kappa, k_z) to int p dp (2.5D scenes);
    radial="kappa" gives int dkappa (pure-2D scenes).
    """
    g = build_alpha_grid(n_alpha, map_scale)
    if radial == "p":
        pn, pw = build_p_grid(n_p, p_scale)
    elif radial == "kappa":
        pn, pw = build_kappa_grid(n_p, p_scale)
    else:
        raise ValidationError(f"unknown radial mode {radial!r}")
    return g.with_p(pn, pw)


def _check_same_grid(a: Kernel, b: Kernel):
    if a.grid is not b.grid and not (
        np.array_equal(a.grid.alpha_nodes, b.grid.alpha_nodes)
        and np.array_equal(a.grid.alpha_weights, b.grid.alpha_weights)
    ):
        raise ValidationError("kernels live on different grids")


def kernel_product(a: Kernel, b: Kernel) -> Kernel:
    """Operator composition int d(alpha'')/(2 pi) a(.,alpha'') b(alpha'',.)."""
    _check_same_grid(a, b)
    w = a.grid.alpha_weights
    return Kernel(a.entries @ (w[:, None] * b.entries), a.grid)


def kernel_trace(k: Kernel) -> complex:
    """Trace with measure: sum_j w_j K_jj."""
    return complex(np.dot(k.grid.alpha_weights, np.diag(k.entries)))


def identity_kernel(grid: QuadratureGrid) -> Kernel:
    """Measure-consistent discrete identity: kernel_product(I, K) == K."""
    return Kernel(np.diag(1.0 / grid.alpha_weights).astype(complex), grid)
