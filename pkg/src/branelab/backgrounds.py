"""Ambient metrics with their connection and curvature.

A :class:`BackgroundMetric` describes the space an embedded worldvolume
lives in: a metric component function plus, optionally, closed-form
connection and curvature functions.  When closed forms are missing they are
extracted from the metric function itself by reseeding the coordinates as
truncated Taylor jets, so coordinate derivatives of the metric are exact;
an alternative central-difference mode exists for spot checks of point
values.

All tensor-returning methods accept coordinates that are plain numbers,
arrays, or jets (the geometry pipeline passes worldvolume-parameter jets),
and return tensor jets whose leading axes are the tensor indices.  Metric
component functions must build their output from the coordinate arguments
they receive; closures over pre-built jets are not supported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import jets
from .errors import ParameterError, PreconditionError, UnsupportedConfigurationError
from .jets import (
    Jet,
    jet_einsum,
    jet_matinv,
    jet_stack,
    jet_transpose,
)

__all__ = [
    "BackgroundMetric",
    "minkowski",
    "euclidean",
    "round_sphere_background",
    "christoffel_from_metric",
    "riemann_from_metric",
    "assemble_tensor",
]


def _normalize_coords(coords):
    """Lift all coordinates to jets sharing one (nvars, order); return template."""
    template = None
    for c in coords:
        if isinstance(c, Jet):
            if template is not None and (c.nvars, c.order) != (
                template.nvars,
                template.order,
            ):
                raise PreconditionError("coordinate jets must share nvars and order")
            template = c
    if template is None:
        template = Jet.constant(0.0, 1, 0)
    out = [
        c
        if isinstance(c, Jet)
        else Jet.constant(np.asarray(c, float), template.nvars, template.order)
        for c in coords
    ]
    return out, template


def assemble_tensor(entries, template):
    """Recursively stack nested sequences of scalars/jets into one tensor jet.

    Every leaf is broadcast onto the template's grid shape first so that
    constant components and grid-valued components stack consistently.
    """
    grid = np.shape(template.c[0])

    def norm_leaf(e):
        if isinstance(e, Jet):
            return e.map_coeffs(
                lambda x: np.broadcast_to(
                    np.asarray(x, float),
                    np.broadcast_shapes(np.shape(x), grid),
                )
            )
        return Jet.constant(
            np.broadcast_to(np.asarray(e, float), grid).copy(),
            template.nvars,
            template.order,
        )

    def rec(e):
        if isinstance(e, (list, tuple)):
            return jet_stack([rec(x) for x in e], template=template)
        return norm_leaf(e)

    return rec(entries)


def _zeros_jet(tensor_shape, template):
    base = np.zeros(tuple(tensor_shape) + np.shape(template.c[0]))
    return Jet.constant(base, template.nvars, template.order)


def _extract(entry, alpha, dim, order):
    """Ambient-derivative coefficient of one metric component."""
    if isinstance(entry, Jet):
        if entry.nvars != dim or entry.order != order:
            raise PreconditionError(
                "metric components must be built from the coordinate arguments"
            )
        return entry.derivative(alpha)
    return entry if sum(alpha) == 0 else 0.0


@dataclass
class BackgroundMetric:
    """Ambient space: metric components plus optional closed-form geometry.

    metric_fn(*coords) returns a dim x dim nested sequence of components;
    christoffel_fn returns [rho][mu][nu] (upper first index); riemann_fn
    returns the all-lower R_{a b m n}.  ``lorentzian`` marks a (-,+,...,+)
    signature, ``flat`` short-circuits connection and curvature to zero.
    ``mode`` selects how missing closed forms are produced: "jet" (exact,
    default) or "fd" (central differences, point evaluation only).
    """

    name: str
    dim: int
    metric_fn: Callable
    christoffel_fn: Optional[Callable] = None
    riemann_fn: Optional[Callable] = None
    lorentzian: bool = False
    flat: bool = False
    mode: str = "jet"
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError("background dimension must be positive")
        if self.mode not in ("jet", "fd"):
            raise ParameterError("mode must be 'jet' or 'fd'")

    # -- tensor-jet interface (used by the geometry pipeline) ------------
    def metric_tensor(self, coords):
        coords, template = _normalize_coords(coords)
        return assemble_tensor(self.metric_fn(*coords), template)

    def inverse_metric_tensor(self, coords):
        return jet_matinv(self.metric_tensor(coords))

    def christoffel_tensor(self, coords):
        """Connection G^r_{m n}(x) with axes (r, m, n)."""
        coords, template = _normalize_coords(coords)
        if self.flat:
            return _zeros_jet((self.dim,) * 3, template)
        if self.christoffel_fn is not None:
            return assemble_tensor(self.christoffel_fn(*coords), template)
        if self.mode != "jet":
            raise UnsupportedConfigurationError(
                "fd-mode backgrounds only support point evaluation; "
                "use christoffel_at"
            )
        g, dg, _ = self._metric_derivs(coords, template, nderiv=1)
        return christoffel_from_metric(g, dg)

    def riemann_tensor(self, coords):
        """All-lower curvature R_{a b m n}(x)."""
        coords, template = _normalize_coords(coords)
        if self.flat:
            return _zeros_jet((self.dim,) * 4, template)
        if self.riemann_fn is not None:
            return assemble_tensor(self.riemann_fn(*coords), template)
        if self.mode != "jet":
            raise UnsupportedConfigurationError(
                "fd-mode backgrounds only support point evaluation; "
                "use riemann_at"
            )
        g, dg, ddg = self._metric_derivs(coords, template, nderiv=2)
        return riemann_from_metric(g, dg, ddg)

    def _metric_derivs(self, coords, template, nderiv):
        """Metric and its ambient partials at jet coordinates.

        Returns (g, dg, ddg) as tensor jets with axes (m,n), (a,m,n) and
        (a,b,m,n); dg[a] = d_a g, ddg[a,b] = d_a d_b g.  ddg is None for
        nderiv < 2.  Works by reseeding each coordinate as a jet variable
        whose value is the incoming (possibly jet-valued) coordinate, so
        parameter dependence rides along in the coefficients.
        """
        D = self.dim
        ys = [Jet.variable(mu, c, D, nderiv) for mu, c in enumerate(coords)]
        rows = self.metric_fn(*ys)

        def comp(alpha):
            nested = [
                [_extract(rows[m][n], alpha, D, nderiv) for n in range(D)]
                for m in range(D)
            ]
            return assemble_tensor(nested, template)

        def e(a):
            return tuple(1 if i == a else 0 for i in range(D))

        def esum(a, b):
            return tuple(x + y for x, y in zip(e(a), e(b)))

        g = comp((0,) * D)
        dg = jet_stack([comp(e(a)) for a in range(D)], template=template)
        ddg = None
        if nderiv >= 2:
            ddg = jet_stack(
                [
                    jet_stack([comp(esum(a, b)) for b in range(D)], template=template)
                    for a in range(D)
                ],
                template=template,
            )
        return g, dg, ddg

    # -- point-value interface -------------------------------------------
    def metric_at(self, point):
        return np.asarray(self.metric_tensor(list(np.asarray(point, float))).value,
                          float)

    def christoffel_at(self, point):
        point = np.asarray(point, float)
        if self.flat:
            return np.zeros((self.dim,) * 3)
        if self.christoffel_fn is not None or self.mode == "jet":
            return np.asarray(self.christoffel_tensor(list(point)).value, float)
        g = self.metric_at(point)
        ginv = np.linalg.inv(g)
        dg = self._fd_metric_grad(point)
        low = 0.5 * (
            np.einsum("mrn->rmn", dg)
            + np.einsum("nrm->rmn", dg)
            - np.einsum("rmn->rmn", dg)
        )
        return np.einsum("rl,lmn->rmn", ginv, low)

    def riemann_at(self, point):
        point = np.asarray(point, float)
        if self.flat:
            return np.zeros((self.dim,) * 4)
        if self.riemann_fn is not None or self.mode == "jet":
            return np.asarray(self.riemann_tensor(list(point)).value, float)
        dG = self._fd_christoffel_grad(point)
        G = self.christoffel_at(point)
        upper = (
            np.einsum("mrns->rsmn", dG)
            - np.einsum("nrms->rsmn", dG)
            + np.einsum("rml,lns->rsmn", G, G)
            - np.einsum("rnl,lms->rsmn", G, G)
        )
        return np.einsum("rk,ksmn->rsmn", self.metric_at(point), upper)

    def _fd_metric_grad(self, point):
        out = np.zeros((self.dim,) * 3)
        for a in range(self.dim):
            h = self.fd_step * (1.0 + abs(point[a]))
            pp, pm = point.copy(), point.copy()
            pp[a] += h
            pm[a] -= h
            out[a] = (self.metric_at(pp) - self.metric_at(pm)) / (2 * h)
        return out

    def _fd_christoffel_grad(self, point):
        out = np.zeros((self.dim,) * 4)
        for a in range(self.dim):
            h = self.fd_step * (1.0 + abs(point[a]))
            pp, pm = point.copy(), point.copy()
            pp[a] += h
            pm[a] -= h
            out[a] = (self.christoffel_at(pp) - self.christoffel_at(pm)) / (2 * h)
        return out


# -- metric -> connection -> curvature (shared with intrinsic geometry) ---

def _gamma_lower(dg):
    # G_{r m n} = (d_m g_{rn} + d_n g_{rm} - d_r g_{mn}) / 2, dg[a] = d_a g
    return 0.5 * (
        jet_transpose(dg, (1, 0, 2))
        + jet_transpose(dg, (1, 2, 0))
        - dg
    )


def christoffel_from_metric(g, dg):
    """G^r_{m n} from a metric jet g (m,n) and its gradient dg (a,m,n)."""
    return jet_einsum("rl...,lmn...->rmn...", jet_matinv(g), _gamma_lower(dg))


def riemann_from_metric(g, dg, ddg):
    """All-lower R_{a b m n} from metric, gradient and hessian jets."""
    ginv = jet_matinv(g)
    low = _gamma_lower(dg)
    gamma = jet_einsum("rl...,lmn...->rmn...", ginv, low)
    # d_a G_{l m n} with ddg[a,b] = d_a d_b g
    dlow = 0.5 * (
        jet_transpose(ddg, (0, 2, 1, 3))
        + jet_transpose(ddg, (0, 2, 3, 1))
        - ddg
    )
    # d_a g^{r l} = -g^{r p} (d_a g_{p q}) g^{q l}
    dginv = -jet_einsum(
        "rp...,apql...->arl...",
        ginv,
        jet_einsum("apq...,ql...->apql...", dg, ginv),
    )
    dgamma = jet_einsum("arl...,lmn...->armn...", dginv, low) + jet_einsum(
        "rl...,almn...->armn...", ginv, dlow
    )
    gg = jet_einsum("rml...,lns...->rmns...", gamma, gamma)
    dg_term = jet_transpose(dgamma, (1, 3, 0, 2))    # d_m G^r_{n s} -> (r,s,m,n)
    gg_term = jet_transpose(gg, (0, 3, 1, 2))        # G^r_{m l} G^l_{n s} -> (r,s,m,n)
    upper = (
        dg_term
        - jet_transpose(dg_term, (0, 1, 3, 2))
        + gg_term
        - jet_transpose(gg_term, (0, 1, 3, 2))
    )
    return jet_einsum("rk...,ksmn...->rsmn...", g, upper)


# -- catalog ---------------------------------------------------------------

def minkowski(dim: int) -> BackgroundMetric:
    """Flat (-,+,...,+) space in inertial coordinates."""
    eta = np.diag([-1.0] + [1.0] * (dim - 1))

    def metric_fn(*coords):
        return [[eta[m, n] for n in range(dim)] for m in range(dim)]

    return BackgroundMetric(
        name=f"minkowski{dim}", dim=dim, metric_fn=metric_fn,
        lorentzian=True, flat=True,
    )


def euclidean(dim: int) -> BackgroundMetric:
    """Flat euclidean space in cartesian coordinates."""

    def metric_fn(*coords):
        return [[1.0 if m == n else 0.0 for n in range(dim)] for m in range(dim)]

    return BackgroundMetric(
        name=f"euclidean{dim}", dim=dim, metric_fn=metric_fn,
        lorentzian=False, flat=True,
    )


def round_sphere_background(dim: int, radius: float = 1.0) -> BackgroundMetric:
    """Round sphere of the given radius in hyperspherical angles.

    Coordinates (x_1, ..., x_dim) with metric
    g_ii = radius^2 * prod_{k<i} sin^2(x_k); the final angle is periodic.
    """
    if dim < 2:
        raise ParameterError("round sphere background needs dim >= 2")
    if radius <= 0:
        raise ParameterError("radius must be positive")
    r2 = float(radius) ** 2

    def metric_fn(*coords):
        rows = [[0.0] * dim for _ in range(dim)]
        f = 1.0
        for i in range(dim):
            rows[i][i] = r2 * f if i else r2
            if i < dim - 1:
                s = jets.sin(coords[i])
                f = f * s * s
        return rows

    def christoffel_fn(*coords):
        # G^i_{jj} = -sin x_i cos x_i * prod_{i<k<j} sin^2 x_k   (i < j)
        # G^j_{ij} = G^j_{ji} = cos x_i / sin x_i                (i < j)
        rows = [[[0.0] * dim for _ in range(dim)] for _ in range(dim)]
        sins = [jets.sin(c) for c in coords[: dim - 1]]
        coss = [jets.cos(c) for c in coords[: dim - 1]]
        for i in range(dim - 1):
            for j in range(i + 1, dim):
                prod = -1.0 * sins[i] * coss[i]
                for k in range(i + 1, j):
                    prod = prod * sins[k] * sins[k]
                rows[i][j][j] = prod
                cot = coss[i] / sins[i]
                rows[j][i][j] = cot
                rows[j][j][i] = cot
        return rows

    def riemann_fn(*coords):
        g = metric_fn(*coords)
        rows = [
            [
                [
                    [
                        (g[a][m] * g[b][n] - g[a][n] * g[b][m]) / r2
                        for n in range(dim)
                    ]
                    for m in range(dim)
                ]
                for b in range(dim)
            ]
            for a in range(dim)
        ]
        return rows

    return BackgroundMetric(
        name=f"sphere{dim}(r={radius})",
        dim=dim,
        metric_fn=metric_fn,
        christoffel_fn=christoffel_fn,
        riemann_fn=riemann_fn,
        lorentzian=False,
        flat=False,
    )


def product_spheres_background(r1: float = 1.0, r2: float = 1.0) -> BackgroundMetric:
    """S^2(r1) x S^2(r2) in angles (t1, p1, t2, p2).

    Product of two round spheres.  Unlike a single sphere this is not a
    constant-curvature space: the Riemann tensor is block diagonal per
    factor, so mixed contractions that cancel identically on maximally
    symmetric backgrounds survive here.  Useful for exercising curvature
    couplings that constant-curvature catalogs cannot see.
    """
    if r1 <= 0 or r2 <= 0:
        raise ParameterError("sphere radii must be positive")
    a2, b2 = float(r1) ** 2, float(r2) ** 2

    def metric_fn(t1, p1, t2, p2):
        s1 = jets.sin(t1)
        s2 = jets.sin(t2)
        return [
            [a2, 0.0, 0.0, 0.0],
            [0.0, a2 * s1 * s1, 0.0, 0.0],
            [0.0, 0.0, b2, 0.0],
            [0.0, 0.0, 0.0, b2 * s2 * s2],
        ]

    return BackgroundMetric(
        name=f"s2xs2(r1={r1},r2={r2})",
        dim=4,
        metric_fn=metric_fn,
        lorentzian=False,
        flat=False,
    )
