"""Translation kernels between object frames.

In the rapidity basis a translation by (Delta_par, Delta_perp) --
longitudinal along the decay axis, lateral across it -- is diagonal:

    U(alpha) = exp(-p Delta_par cosh(alpha) - i p Delta_perp sinh(alpha))

(evanescent waves e^{-p cosh(alpha) x + i k_y y} with k_y = -p sinh(alpha);
the decay axis is global x, the lateral axis y).
Rotations are not represented here: they are absorbed into the T-kernel
angle arguments (a = i alpha - phi), keeping U trivially composable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .quadrature import Kernel, QuadratureGrid, identity_kernel

__all__ = ["FramePose", "TranslationSpec", "translation_kernel",
           "translation_diagonal"]


@dataclass(frozen=True)
class FramePose:
    """Object frame: 2D origin and tilt from the global decay axis.

    The tilt is bookkeeping for the scattering kernels (rotations live
    in the T evaluation); translation kernels only use the origins.
    """

    origin: tuple
    tilt: float = 0.0

    def __post_init__(self):
        x, y = self.origin
        if not (np.isfinite(x) and np.isfinite(y) and np.isfinite(self.tilt)):
            raise GeometryError("pose coordinates must be finite")


@dataclass(frozen=True)
class TranslationSpec:
    """Translation from `from_pose` to `to_pose` at radial frequency p.

    The decay axis is global x: Delta_par = |x_to - x_from| must be
    positive between distinct objects (waves must decay between them);
    Delta_perp = y_to - y_from is signed, so that displacements compose:
    U_13 U_32 = U_12.
    """

    from_pose: FramePose
    to_pose: FramePose
    p: float

    @property
    def delta_par(self) -> float:
        return abs(self.to_pose.origin[0] - self.from_pose.origin[0])

    @property
    def delta_perp(self) -> float:
        return self.to_pose.origin[1] - self.from_pose.origin[1]


def translation_diagonal(spec: TranslationSpec,
                         grid: QuadratureGrid) -> np.ndarray:
    """Diagonal entries of the translation kernel (length n_alpha)."""
    dpar = spec.delta_par
    dperp = spec.delta_perp
    if dpar == 0.0 and dperp == 0.0:
        raise GeometryError("identical poses: use the identity kernel")
    if dpar <= 0.0:
        raise GeometryError(
            "objects are not separated along the decay axis "
            f"(delta_par={dpar:g})"
        )
    a = grid.alpha_nodes
    return np.exp(-spec.p * (dpar * np.cosh(a) + 1j * dperp * np.sinh(a)))


def translation_kernel(spec: TranslationSpec, grid: QuadratureGrid) -> Kernel:
    """Dense (diagonal) translation kernel.

    Every entry magnitude is bounded by e^{-p Delta_par}, which makes
    the reflection series geometrically convergent at fixed p.
    Coincident poses return the measure-consistent identity.
    """
    if spec.from_pose.origin == spec.to_pose.origin:
        return identity_kernel(grid)
    d = translation_diagonal(spec, grid)
    # diagonal operator with continuous symbol d(alpha): entries carry
    # 1/weight so that products apply the measure exactly once
    return Kernel(np.diag(d / grid.alpha_weights), grid)
