"""B-spline radial basis on [0, R] with per-interval Gauss-Legendre quadrature.

The basis functions B_{i,k}(r), i = 1..N, of order k live on a clamped knot
sequence with k-fold endpoint multiplicity.  Evaluation uses the Cox-de Boor
recurrence with the zero-denominator terms dropped.  All radial integrals in
the package are taken on the per-breakpoint-interval Gauss-Legendre grid
cached here, which is exact for products of two splines against polynomial
weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class KnotSequence:
    """Clamped non-decreasing knot sequence on [0, r_max].

    len(points) == n_splines + order; the first and last `order` entries
    coincide with the endpoints.
    """

    points: np.ndarray
    order: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        k = self.order
        if np.any(np.diff(pts) < 0):
            raise InvalidParameterError("knot points must be non-decreasing")
        if not (np.all(pts[:k] == pts[0]) and np.all(pts[-k:] == pts[-1])):
            raise InvalidParameterError(
                f"endpoints must have multiplicity {k}"
            )
        if pts[-1] <= pts[0]:
            raise InvalidParameterError("knot range must have positive length")

    @property
    def n_splines(self) -> int:
        return len(self.points) - self.order

    @property
    def r_min(self) -> float:
        return float(self.points[0])

    @property
    def r_max(self) -> float:
        return float(self.points[-1])

    @property
    def breakpoints(self) -> np.ndarray:
        """Distinct knot values (the quadrature cell boundaries)."""
        return np.unique(self.points)


def make_knots(r_max, n_splines, order, grid="exponential", gamma=6.0):
    """Build a clamped knot sequence on [0, r_max].

    grid selects the interior-knot distribution:
      * "linear":       uniform spacing;
      * "exponential":  t = r_max * (exp(gamma*x) - 1) / (exp(gamma) - 1)
                        with x uniform, clustering knots near the origin.
    """
    if r_max <= 0:
        raise InvalidParameterError(f"r_max must be positive, got {r_max}")
    if order < 2:
        raise InvalidParameterError(f"order must be >= 2, got {order}")
    if n_splines <= order:
        raise InvalidParameterError(
            f"n_splines ({n_splines}) must exceed order ({order})"
        )
    n_interior = n_splines - order
    x = np.linspace(0.0, 1.0, n_interior + 2)
    if grid == "linear":
        interior = r_max * x[1:-1]
    elif grid == "exponential":
        interior = r_max * np.expm1(gamma * x[1:-1]) / np.expm1(gamma)
    else:
        raise InvalidParameterError(f"unknown grid spec {grid!r}")
    points = np.concatenate(
        [np.zeros(order), interior, np.full(order, float(r_max))]
    )
    return KnotSequence(points=points, order=order)


def _find_cell(knots: KnotSequence, r: float) -> int:
    """Index mu into knots.points with t[mu] <= r < t[mu+1] (last cell closed)."""
    t = knots.points
    k = knots.order
    n = knots.n_splines
    if r >= t[-1]:
        mu = n - 1
    else:
        mu = int(np.searchsorted(t, r, side="right") - 1)
        mu = min(max(mu, k - 1), n - 1)
    return mu


def _nonzero_values(knots: KnotSequence, r: float) -> tuple[int, np.ndarray]:
    """Values of the k B-splines that are nonzero at r.

    Returns (first, vals) with vals[j] = B_{first+j, k}(r), 0-based spline
    indices.  Cox-de Boor triangle; zero-denominator terms are dropped.
    """
    t = knots.points
    k = knots.order
    mu = _find_cell(knots, r)
    vals = np.zeros(k)
    vals[k - 1] = 1.0
    for ord_ in range(2, k + 1):
        # splines mu-ord_+1 .. mu of order ord_ live in vals[k-ord_ .. k-1]
        new = np.zeros(k)
        for j in range(ord_):
            i = mu - ord_ + 1 + j
            acc = 0.0
            d1 = t[i + ord_ - 1] - t[i]
            if d1 > 0.0 and j > 0:
                acc += (r - t[i]) / d1 * vals[k - ord_ + j]
            d2 = t[i + ord_] - t[i + 1]
            if d2 > 0.0 and j < ord_ - 1:
                acc += (t[i + ord_] - r) / d2 * vals[k - ord_ + 1 + j]
            new[k - ord_ + j] = acc
        vals = new
    return mu - k + 1, vals


def _nonzero_derivs(knots: KnotSequence, r: float) -> tuple[int, np.ndarray]:
    """First derivatives of the k B-splines nonzero at r.

    Uses dB_{i,k}/dr = (k-1) [B_{i,k-1}/(t_{i+k-1}-t_i)
                              - B_{i+1,k-1}/(t_{i+k}-t_{i+1})].
    """
    t = knots.points
    k = knots.order
    mu = _find_cell(knots, r)
    if k == 1:
        return mu, np.zeros(1)
    # order-(k-1) values at r: recompute the triangle up to order k-1
    vals = np.zeros(k)
    vals[k - 1] = 1.0
    for ord_ in range(2, k):
        new = np.zeros(k)
        for j in range(ord_):
            i = mu - ord_ + 1 + j
            acc = 0.0
            d1 = t[i + ord_ - 1] - t[i]
            if d1 > 0.0 and j > 0:
                acc += (r - t[i]) / d1 * vals[k - ord_ + j]
            d2 = t[i + ord_] - t[i + 1]
            if d2 > 0.0 and j < ord_ - 1:
                acc += (t[i + ord_] - r) / d2 * vals[k - ord_ + 1 + j]
            new[k - ord_ + j] = acc
        vals = new
    lower = vals[1:]  # B_{mu-k+2+j, k-1}, j = 0..k-2
    derivs = np.zeros(k)
    for j in range(k):
        i = mu - k + 1 + j
        acc = 0.0
        d1 = t[i + k - 1] - t[i]
        if d1 > 0.0 and j > 0:
            acc += lower[j - 1] / d1
        d2 = t[i + k] - t[i + 1]
        if d2 > 0.0 and j < k - 1:
            acc -= lower[j] / d2
        derivs[j] = (k - 1) * acc
    return mu - k + 1, derivs


class BSplineBasis:
    """B-spline basis with a cached Gauss-Legendre grid per breakpoint cell.

    quad_order defaults to order + 1 points per cell, exact for polynomial
    integrands up to degree 2*order + 1 (covers spline pairs against smooth
    polynomial weights of low degree).
    """

    def __init__(self, knots: KnotSequence, quad_order: int | None = None):
        self.knots = knots
        self.order = knots.order
        self.n_splines = knots.n_splines
        p = knots.order + 1 if quad_order is None else int(quad_order)
        if p < knots.order:
            raise InvalidParameterError(
                f"quad_order ({p}) must be at least the spline order"
            )
        self.quad_order = p
        bp = knots.breakpoints
        self.breakpoints = bp
        self.n_cells = len(bp) - 1
        x, w = np.polynomial.legendre.leggauss(p)
        lo = bp[:-1][:, None]
        hi = bp[1:][:, None]
        half = 0.5 * (hi - lo)
        # shape (n_cells, p), flattened ascending
        self.quad_points = (lo + half * (x[None, :] + 1.0)).ravel()
        self.quad_weights = (half * w[None, :]).ravel()
        self.quad_cell = np.repeat(np.arange(self.n_cells), p)

    @property
    def r_max(self) -> float:
        return self.knots.r_max

    def _check_index(self, i: int):
        if not 0 <= i < self.n_splines:
            raise IndexError(
                f"spline index {i} out of range [0, {self.n_splines})"
            )

    def evaluate(self, i: int, r: float) -> float:
        """B_{i,order}(r) for one 0-based spline index."""
        self._check_index(i)
        if r < self.knots.r_min or r > self.knots.r_max:
            return 0.0
        first, vals = _nonzero_values(self.knots, r)
        j = i - first
        return float(vals[j]) if 0 <= j < self.order else 0.0

    def evaluate_deriv(self, i: int, r: float) -> float:
        """dB_{i,order}/dr at r for one 0-based spline index."""
        self._check_index(i)
        if r < self.knots.r_min or r > self.knots.r_max:
            return 0.0
        first, vals = _nonzero_derivs(self.knots, r)
        j = i - first
        return float(vals[j]) if 0 <= j < self.order else 0.0

    def eval_matrix(self, points) -> np.ndarray:
        """Dense (len(points), n_splines) matrix of basis values."""
        pts = np.asarray(points, dtype=float).ravel()
        out = np.zeros((len(pts), self.n_splines))
        for row, r in enumerate(pts):
            first, vals = _nonzero_values(self.knots, r)
            out[row, first:first + self.order] = vals
        return out

    def deriv_matrix(self, points) -> np.ndarray:
        """Dense (len(points), n_splines) matrix of basis first derivatives."""
        pts = np.asarray(points, dtype=float).ravel()
        out = np.zeros((len(pts), self.n_splines))
        for row, r in enumerate(pts):
            first, vals = _nonzero_derivs(self.knots, r)
            out[row, first:first + self.order] = vals
        return out

    @cached_property
    def quad_values(self) -> np.ndarray:
        """Basis values at the cached quadrature points, shape (nq, N)."""
        return self.eval_matrix(self.quad_points)

    @cached_property
    def quad_derivs(self) -> np.ndarray:
        """Basis derivatives at the cached quadrature points, shape (nq, N)."""
        return self.deriv_matrix(self.quad_points)

    def integrate(self, values_at_quad) -> float:
        """Quadrature of a sampled integrand over [0, R]."""
        return float(np.dot(self.quad_weights, values_at_quad))

    def overlap_matrix(self) -> np.ndarray:
        """S_ij = integral of B_i B_j over [0, R]; exactly symmetric."""
        B = self.quad_values
        S = (B * self.quad_weights[:, None]).T @ B
        return 0.5 * (S + S.T)
