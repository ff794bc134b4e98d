"""Worldsheet-specific structures: orthonormal tangent frames, the internal
rotation connection, and canonical variables of the area-plus-curvature
string.

Everything here is restricted to two-dimensional worldsheets.  On a
Lorentzian sheet the frame consists of a unit timelike tangent iota0 and
its spacelike orthogonal complement iota1; the gauge freedom is a local
boost.  For testing on compact surfaces a Riemannian surrogate frame is
provided, where the gauge freedom is a genuine rotation.

The rotation connection is the frame component

    rho_a = -g(iota1, D_a iota0)

with D the pulled-back background covariant derivative.  The sign is
anchored so that the antisymmetrized derivative d(rho) reproduces the
curvature density sqrt(g) R / 2 pointwise (total 2 pi chi on a closed
surface); a local gauge angle theta(xi) then shifts rho_a by -d_a theta.

The curvature-coupled momentum flux on a deformation with connection
response drho is

    Psi^mu = sigma1 sqrt(-gamma) eps^{mu nu} drho_nu

with eps^{mu nu} = iota0^mu iota1^nu - iota1^mu iota0^nu.  Since eps is
boost-invariant and drho_a is unchanged by configuration-independent
gauge angles, Psi is frame-gauge invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import deformation as dfm
from .embeddings import Embedding, Geometry, Grid, integrate, make_grid
from .errors import (
    DegenerateGeometryError,
    ParameterError,
    PreconditionError,
    UnsupportedConfigurationError,
)
from .jets import jet_einsum, jet_partial_stack
from .models import _resolve_geometry
from .symplectic import (
    CanonicalPair,
    CauchySlice,
    _resolve_field,
    _slice_geometry,
    dng_momentum_density,
)

__all__ = [
    "TangentFramePair",
    "RotationConnection",
    "tangent_frame",
    "rotation_connection",
    "rotation_connection_delta",
    "gb_potential",
    "gb_canonical",
    "gb_symplectic_form",
    "dnggb_eom_residual",
    "dnggb_potential",
    "dnggb_canonical",
    "dnggb_symplectic_form",
    "euler_characteristic",
    "two_d_einstein_identity",
]


def _require_worldsheet(geom: Geometry):
    if geom.dim != 2:
        raise UnsupportedConfigurationError(
            "tangent-frame structures need a two-parameter worldsheet"
        )


def _sheet_signature(geom: Geometry) -> int:
    """-1 for a Lorentzian sheet, +1 for the Riemannian surrogate."""
    s = geom.metric_sign
    if np.all(s < 0):
        return -1
    if np.all(s > 0):
        return +1
    raise DegenerateGeometryError("induced metric changes signature on grid")


def _resolve_gauge(theta, geom: Geometry):
    """Gauge angle as a jet/scalar over the grid; callables get the chart
    parameters (held fixed under any later embedding deformation)."""
    if theta is None:
        return None
    if callable(theta):
        if geom.params is None:
            raise PreconditionError(
                "a parameter-dependent gauge angle needs chart parameters"
            )
        return theta(*geom.params)
    return theta


def _ambient_grad_vec(geom: Geometry, W):
    """Pulled-back covariant derivative of an ambient vector field: (a, mu)."""
    dW = jet_partial_stack(W)
    t = jet_einsum("mrs...,ar...->mas...", geom.ambient_christoffel,
                   geom.tangents)
    corr = jet_einsum("mas...,s...->am...", t, W)
    return dW + corr


def _dot(geom: Geometry, U, W):
    gU = jet_einsum("mn...,n...->m...", geom.ambient_metric, U)
    return jet_einsum("m...,m...->...", gU, W)


@dataclass
class TangentFramePair:
    """Orthonormal tangent frame (iota0, iota1) and its area bivector."""

    iota0: object
    iota1: object
    signature: int

    @property
    def epsilon(self):
        """eps^{mu nu} = iota0^mu iota1^nu - iota1^mu iota0^nu."""
        outer = jet_einsum("m...,n...->mn...", self.iota0, self.iota1)
        flip = jet_einsum("m...,n...->mn...", self.iota1, self.iota0)
        return outer - flip

    def sheet_components(self, geom: Geometry):
        """Frame legs in the chart basis: iota^a = gamma^{ab} g(e_b, iota)."""
        out = []
        for leg in (self.iota0, self.iota1):
            low = jet_einsum("bm...,m...->b...", geom.tangents,
                             jet_einsum("mn...,n...->m...",
                                        geom.ambient_metric, leg))
            out.append(jet_einsum("ab...,b...->a...",
                                  geom.inverse_induced_metric, low))
        return tuple(out)


def tangent_frame(target, theta=None, grid: Grid | None = None,
                  order: int | None = None) -> TangentFramePair:
    """Orthonormalized frame from the first chart direction and its
    complement, then gauge-rotated (boosted, on Lorentzian sheets) by theta.
    """
    geom = _resolve_geometry(target, grid, order or 3)
    _require_worldsheet(geom)
    sig = _sheet_signature(geom)
    e0 = geom.tangents.map_coeffs(lambda x: x[0])
    e1 = geom.tangents.map_coeffs(lambda x: x[1])
    n00 = _dot(geom, e0, e0)
    if sig < 0:
        if np.any(np.asarray(n00.value, float) >= 0.0):
            raise DegenerateGeometryError(
                "first chart direction is not timelike; cannot seed the frame"
            )
        i0 = jet_einsum("...,m...->m...", 1.0 / (-1.0 * n00).sqrt(), e0)
        # g(i0, i0) = -1, so subtracting the projection adds +g(e1,i0) i0
        w = e1 + jet_einsum("...,m...->m...", _dot(geom, e1, i0), i0)
    else:
        i0 = jet_einsum("...,m...->m...", 1.0 / n00.sqrt(), e0)
        w = e1 - jet_einsum("...,m...->m...", _dot(geom, e1, i0), i0)
    n11 = _dot(geom, w, w)
    if np.any(np.asarray(n11.value, float) <= 0.0):
        raise DegenerateGeometryError("frame complement is not spacelike")
    i1 = jet_einsum("...,m...->m...", 1.0 / n11.sqrt(), w)
    th = _resolve_gauge(theta, geom)
    if th is not None:
        if sig < 0:
            ch, sh = _cosh(th), _sinh(th)
            i0, i1 = ch * i0 + sh * i1, sh * i0 + ch * i1
        else:
            c, s = _cos(th), _sin(th)
            i0, i1 = c * i0 + s * i1, c * i1 - s * i0
    return TangentFramePair(iota0=i0, iota1=i1, signature=sig)


def _cosh(x):
    return np.cosh(x) if np.isscalar(x) else x.cosh()


def _sinh(x):
    return np.sinh(x) if np.isscalar(x) else x.sinh()


def _cos(x):
    return np.cos(x) if np.isscalar(x) else x.cos()


def _sin(x):
    return np.sin(x) if np.isscalar(x) else x.sin()


@dataclass
class RotationConnection:
    """Frame gauge connection rho_a over the grid (chart covector)."""

    jet: object
    values: np.ndarray

    def curl(self) -> np.ndarray:
        """Antisymmetrized plain derivative d_0 rho_1 - d_1 rho_0.

        On a closed Riemannian surface this equals the curvature density
        sqrt(g) R / 2 (Gauss-Bonnet anchoring of the sign of rho).
        """
        r0 = self.jet.map_coeffs(lambda x: x[0])
        r1 = self.jet.map_coeffs(lambda x: x[1])
        return np.asarray((r1.partial(0) - r0.partial(1)).value, float)


def rotation_connection(target, theta=None, grid: Grid | None = None,
                        order: int | None = None) -> RotationConnection:
    """rho_a = -g(iota1, D_a iota0) for the gauge-rotated frame."""
    geom = _resolve_geometry(target, grid, order or 3)
    frame = tangent_frame(geom, theta)
    Di0 = _ambient_grad_vec(geom, frame.iota0)
    gi1 = jet_einsum("mn...,n...->m...", geom.ambient_metric, frame.iota1)
    rho = -1.0 * jet_einsum("am...,m...->a...", Di0, gi1)
    return RotationConnection(jet=rho, values=np.asarray(rho.value, float))


def rotation_connection_delta(target, vfield, theta=None,
                              grid: Grid | None = None,
                              eps_list=dfm.EPS_SCHEDULE) -> np.ndarray:
    """Phase-space variation of rho_a along an embedding deformation.

    The gauge angle is resolved once on the base chart and held fixed as
    a function of the parameters while the embedding moves.
    """
    geom = _resolve_geometry(target, grid, 4)
    th = _resolve_gauge(theta, geom)
    V = _resolve_field(vfield, geom)

    def extract(g2):
        return rotation_connection(g2, th).values

    return dfm.finite_difference_delta(geom, V, extract, eps_list).estimate


def gb_potential(target, theta, drho: np.ndarray, sigma1: float,
                 grid: Grid | None = None,
                 order: int | None = None) -> np.ndarray:
    """Flux vector sigma1 sqrt(-gamma) eps^{mu nu} drho_nu.

    ``drho`` is the connection response of a phase-space deformation,
    as produced by `rotation_connection_delta`; its chart index is
    contracted through the frame legs.
    """
    geom = _resolve_geometry(target, grid, order or 3)
    frame = tangent_frame(geom, theta)
    c0, c1 = frame.sheet_components(geom)
    dens = np.asarray(geom.sqrt_abs_det.value, float)
    i0 = np.asarray(frame.iota0.value, float)
    i1 = np.asarray(frame.iota1.value, float)
    dr = np.asarray(drho, float)
    p1 = np.einsum("a...,a...->...", np.asarray(c1.value, float), dr)
    p0 = np.einsum("a...,a...->...", np.asarray(c0.value, float), dr)
    return float(sigma1) * dens * (i0 * p1 - i1 * p0)


def gb_canonical(embedding: Embedding, slc: CauchySlice, sigma1: float,
                 theta=None) -> CanonicalPair:
    """Canonical pair of the curvature term: q^nu = rho^nu with the chart
    index pushed to the ambient tangent, p_nu = sigma1 sqrt(-gamma)
    eps^{mu}{}_{nu} tau_mu = -sigma1 sqrt(-gamma) (iota1)_nu.
    """
    geom, _grid, _k = _slice_geometry(embedding, slc, 3)
    frame = tangent_frame(geom, theta)
    rho = rotation_connection(geom, theta)
    tau = jet_einsum("mn...,n...->m...", geom.ambient_metric, frame.iota0)
    eps_low = jet_einsum("mn...,nl...->ml...", frame.epsilon,
                         geom.ambient_metric)
    p = jet_einsum("ml...,m...->l...", eps_low, tau)
    p = float(sigma1) * jet_einsum("...,l...->l...", geom.sqrt_abs_det, p)
    rho_up = jet_einsum("ab...,b...->a...", geom.inverse_induced_metric,
                        rho.jet)
    q = jet_einsum("am...,a...->m...", geom.tangents, rho_up)
    return CanonicalPair(position=np.asarray(q.value, float),
                         momentum=np.asarray(p.value, float),
                         coupling=float(sigma1))


def gb_symplectic_form(embedding: Embedding, slc: CauchySlice, vf1, vf2,
                       sigma1: float, theta=None,
                       eps_list=dfm.EPS_SCHEDULE) -> float:
    """Slice integral of the antisymmetrized second variation of the
    curvature flux, D2 Psi[phi1] - D1 Psi[phi2], contracted with the dual
    chart covector of the slice axis.

    In chart components the flux is sigma1 eps~^{ab} drho_b with the bare
    permutation symbol, so commuting second variations cancel and only
    the variation of the frame legs e_a^mu survives: deformations without
    an ambient time component give exactly zero here.
    """
    geom, grid, k = _slice_geometry(embedding, slc, 5)
    th = _resolve_gauge(theta, geom)
    V1 = _resolve_field(vf1, geom)
    V2 = _resolve_field(vf2, geom)
    low = jet_einsum("am...,mn...->an...", geom.tangents, geom.ambient_metric)
    dual = jet_einsum("ab...,bn...->an...", geom.inverse_induced_metric, low)
    conormal = np.asarray(dual.value, float)[k]

    def flux_along(V_inner):
        def values(g2):
            dr = dfm.finite_difference_delta(
                g2, V_inner, lambda g3: rotation_connection(g3, th).values,
                eps_list).estimate
            return gb_potential(g2, th, dr, sigma1)
        return values

    d2 = dfm.finite_difference_delta(geom, V2, flux_along(V1), eps_list)
    d1 = dfm.finite_difference_delta(geom, V1, flux_along(V2), eps_list)
    J = d2.estimate - d1.estimate
    dens = np.einsum("m...,m...->...", conormal, J)
    return float(integrate(dens, grid))


# -- combined area + curvature system -----------------------------------------

def dnggb_eom_residual(target, grid: Grid | None = None,
                       order: int | None = None) -> np.ndarray:
    """Ambient mean-curvature vector K^mu = K^i n_i^mu.

    The topological term drops out of the bulk field equations, so the
    combined system is extremal exactly where the minimal-area string is.
    """
    geom = _resolve_geometry(target, grid, order or 2)
    _require_worldsheet(geom)
    k = jet_einsum("i...,im...->m...", geom.mean_curvature, geom.normals)
    return np.asarray(k.value, float)


def dnggb_potential(target, vfield, sigma0: float, sigma1: float,
                    theta=None, grid: Grid | None = None,
                    eps_list=dfm.EPS_SCHEDULE) -> np.ndarray:
    """Total flux of the combined system on one deformation:

        Psi^mu = sqrt(-gamma) [ -sigma0 (tangential projection of V)^mu
                                + sigma1 eps^{mu nu} drho_nu ].
    """
    geom = _resolve_geometry(target, grid, 4)
    _require_worldsheet(geom)
    V = _resolve_field(vfield, geom)
    proj_up = jet_einsum("ab...,bm...->am...", geom.inverse_induced_metric,
                         geom.tangents)
    low = jet_einsum("mn...,n...->m...", geom.ambient_metric, V)
    comp = jet_einsum("am...,m...->a...", geom.tangents, low)
    tangential = jet_einsum("am...,a...->m...", proj_up, comp)
    dens = np.asarray(geom.sqrt_abs_det.value, float)
    dng_part = -float(sigma0) * dens * np.asarray(tangential.value, float)
    drho = rotation_connection_delta(geom, V, theta, eps_list=eps_list)
    return dng_part + gb_potential(geom, theta, drho, sigma1)


def dnggb_canonical(embedding: Embedding, slc: CauchySlice, sigma0: float,
                    sigma1: float, theta=None) -> CanonicalPair:
    """Canonical pair of the combined system:

        Phat_nu = sigma0 sqrt(-gamma) tau_nu
        Q^nu    = -(sigma1/sigma0) eps^{nu a} rho_a + X^nu

    Setting sigma1 = 0 recovers the minimal-area pair exactly.
    """
    if sigma0 == 0.0:
        raise ParameterError(
            "sigma0 = 0 leaves the position variable undefined"
        )
    geom, _grid, _k = _slice_geometry(embedding, slc, 3)
    phat = dng_momentum_density(geom, sigma0)
    X = np.asarray(geom.X.value, float)
    if sigma1 == 0.0:
        Q = X
    else:
        frame = tangent_frame(geom, theta)
        rho = rotation_connection(geom, theta)
        c0, c1 = frame.sheet_components(geom)
        p1 = jet_einsum("a...,a...->...", c1, rho.jet)
        p0 = jet_einsum("a...,a...->...", c0, rho.jet)
        shift = jet_einsum("...,m...->m...", p1, frame.iota0) \
            - jet_einsum("...,m...->m...", p0, frame.iota1)
        Q = X - (float(sigma1) / float(sigma0)) * np.asarray(shift.value,
                                                             float)
    return CanonicalPair(position=Q,
                         momentum=np.asarray(phat.value, float),
                         coupling=float(sigma0))


def dnggb_symplectic_form(embedding: Embedding, slc: CauchySlice, vf1, vf2,
                          sigma0: float, sigma1: float, theta=None,
                          eps_list=dfm.EPS_SCHEDULE) -> float:
    """Darboux form of the combined pair:

        integral of (delta1 Q . delta2 Phat - delta2 Q . delta1 Phat)

    with both variations taken by the phase-space finite difference.
    Position-first ordering keeps the sigma1 -> 0 limit equal to the
    minimal-area slice form.
    """
    if sigma0 == 0.0:
        raise ParameterError("sigma0 = 0 leaves the pair undefined")
    geom, grid, _k = _slice_geometry(embedding, slc, 4)
    th = _resolve_gauge(theta, geom)
    V1 = _resolve_field(vf1, geom)
    V2 = _resolve_field(vf2, geom)

    def pq(g2):
        phat = np.asarray(dng_momentum_density(g2, sigma0).value, float)
        X = np.asarray(g2.X.value, float)
        if sigma1 == 0.0:
            return np.stack([phat, X])
        frame = tangent_frame(g2, th)
        rho = rotation_connection(g2, th)
        c0, c1 = frame.sheet_components(g2)
        p1 = jet_einsum("a...,a...->...", c1, rho.jet)
        p0 = jet_einsum("a...,a...->...", c0, rho.jet)
        shift = jet_einsum("...,m...->m...", p1, frame.iota0) \
            - jet_einsum("...,m...->m...", p0, frame.iota1)
        Q = X - (float(sigma1) / float(sigma0)) * np.asarray(shift.value,
                                                             float)
        return np.stack([phat, Q])

    d1 = dfm.finite_difference_delta(geom, V1, pq, eps_list).estimate
    d2 = dfm.finite_difference_delta(geom, V2, pq, eps_list).estimate
    dens = np.einsum("m...,m...->...", d1[1], d2[0]) \
        - np.einsum("m...,m...->...", d2[1], d1[0])
    return float(integrate(dens, grid))


# -- topology and the two-dimensional identity ---------------------------------

def _require_closed(embedding: Embedding, n_probe: int = 33):
    """Closed surface: every chart axis periodic, or capped by a degenerate
    metric at its endpoints (polar charts)."""
    for k, ax in enumerate(embedding.axes):
        if ax.periodic:
            continue
        other = embedding.axes[1 - k]
        sweep = np.linspace(other.lo, other.hi, n_probe)
        for edge in (ax.lo, ax.hi):
            pts = [None, None]
            pts[k] = np.full_like(sweep, edge)
            pts[1 - k] = sweep
            geom = embedding.geometry(tuple(pts), 1)
            dets = np.abs(np.asarray(geom.det_induced_metric.value, float))
            if np.max(dets) > 1e-10:
                raise PreconditionError(
                    f"{embedding.name}: axis {ax.name} ends at {edge} with a "
                    "nondegenerate boundary; surface is not closed"
                )


def euler_characteristic(embedding: Embedding, n: int = 128) -> float:
    """(1/4 pi) integral of sqrt(g) R over a closed Riemannian surface."""
    if embedding.dim != 2:
        raise UnsupportedConfigurationError(
            "the Euler characteristic integral needs a two-parameter surface"
        )
    _require_closed(embedding)
    grid = make_grid(embedding, n)
    geom = embedding.geometry(grid.mesh, 3)
    if _sheet_signature(geom) < 0:
        raise UnsupportedConfigurationError(
            "Gauss-Bonnet quadrature is for Riemannian surfaces"
        )
    dens = geom.sqrt_abs_det * geom.intrinsic_scalar_curvature
    return float(integrate(np.asarray(dens.value, float), grid)) / (4 * np.pi)


def two_d_einstein_identity(target, grid: Grid | None = None) -> float:
    """Max norm of the intrinsic Einstein tensor R_ab - (1/2) gamma_ab R.

    Identically zero in two dimensions; the return value is the numerical
    residual of the jet-assembled curvature.
    """
    geom = _resolve_geometry(target, grid, 3)
    _require_worldsheet(geom)
    gi = geom.inverse_induced_metric
    ricci = jet_einsum("am...,abmn...->bn...", gi, geom.intrinsic_riemann)
    scal = jet_einsum("bn...,bn...->...", gi, ricci)
    einstein = ricci - 0.5 * jet_einsum("...,bn...->bn...", scal,
                                        geom.induced_metric)
    return float(np.max(np.abs(np.asarray(einstein.value, float))))
