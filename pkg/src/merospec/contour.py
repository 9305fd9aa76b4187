"""Discretized circular contours and spectrally accurate quadrature.

The trapezoid rule on equispaced angles converges exponentially for
integrands analytic in an annulus around the circle, which makes a plain
node average the method of choice for every Cauchy-type integral here.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContourError
from .tolerances import DEFAULT_NODES, WINDING_FLOOR

__all__ = ["Contour", "make_circle", "cauchy_integral", "scalar_winding"]

# Phase guard: adjacent winding samples must not jump by more than this.
_PHASE_GUARD = np.pi / 2


@dataclass(frozen=True)
class Contour:
    """Counterclockwise circle ``|z - center| = radius`` sampled at
    ``node_count`` equispaced angles starting at angle 0."""

    center: complex
    radius: float
    node_count: int
    nodes: np.ndarray = field(repr=False)

    @property
    def weights(self):
        """Quadrature weights w_j with (1/2pi i) oint f = sum_j w_j f(z_j)."""
        return (self.nodes - self.center) / self.node_count


def make_circle(z0, eps, n=DEFAULT_NODES):
    """Build the counterclockwise circle C(z0; eps) with n trapezoid nodes.

    Parameters
    ----------
    z0 : complex
        Center of the circle.
    eps : float
        Radius, strictly positive.
    n : int
        Number of nodes, at least 8.
    """
    if eps <= 0:
        raise ValueError(f"radius must be positive, got {eps}")
    if n < 8:
        raise ValueError(f"need at least 8 nodes, got {n}")
    angles = 2.0 * np.pi * np.arange(n) / n
    nodes = z0 + eps * np.exp(1j * angles)
    return Contour(center=complex(z0), radius=float(eps), node_count=int(n),
                   nodes=nodes)


def cauchy_integral(f, c):
    """Trapezoid approximation of (1/2pi i) oint_C f(zeta) d zeta.

    ``f`` maps a contour point to a complex matrix (or scalar).  The result
    is ``(1/N) sum_j f(zeta_j) (zeta_j - z0)``; for f analytic in an annulus
    around the circle the error decays exponentially in N.

    An evaluation failure at a node is re-raised as a ContourError carrying
    the offending node.
    """
    acc = None
    for j, zeta in enumerate(c.nodes):
        try:
            val = f(zeta)
        except Exception as exc:
            raise ContourError(
                f"integrand evaluation failed at node {j} (zeta={zeta}): {exc}",
                node_index=j, node=zeta) from exc
        term = np.asarray(val, dtype=complex) * (zeta - c.center)
        acc = term if acc is None else acc + term
    return acc / c.node_count


def winding_from_samples(values, floor=WINDING_FLOOR):
    """Winding number of a closed loop of nonzero complex samples.

    The samples are assumed to traverse the loop once in order; the phase
    increment between consecutive samples (including the wrap-around) must
    stay below pi/2, otherwise the loop is declared under-resolved.
    """
    values = np.asarray(values, dtype=complex)
    mags = np.abs(values)
    if np.any(mags <= floor):
        j = int(np.argmin(mags))
        raise ContourError(
            f"zero/pole on contour: |h| = {mags[j]:.3e} at node {j}",
            node_index=j)
    closed = np.concatenate([values, values[:1]])
    steps = np.angle(closed[1:] / closed[:-1])
    worst = int(np.argmax(np.abs(steps)))
    if abs(steps[worst]) > _PHASE_GUARD:
        raise ContourError(
            "under-resolved contour, increase N: phase jump "
            f"{steps[worst]:.3f} rad at node {worst}",
            node_index=worst)
    total = steps.sum() / (2.0 * np.pi)
    return int(np.rint(total))


def scalar_winding(h, c, floor=WINDING_FLOOR):
    """Net winding of the scalar function h around the contour c.

    Computed by unwrapping the phase of the node samples, which is
    integer-exact as long as the per-step phase increment stays below the
    pi/2 guard; no derivative of h is needed.
    """
    samples = []
    for j, zeta in enumerate(c.nodes):
        try:
            samples.append(complex(h(zeta)))
        except Exception as exc:
            raise ContourError(
                f"winding sample failed at node {j} (zeta={zeta}): {exc}",
                node_index=j, node=zeta) from exc
    return winding_from_samples(np.array(samples), floor=floor)
