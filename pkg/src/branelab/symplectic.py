"""Symplectic potentials, currents, and canonical pairings for worldvolumes.

The first variation of a model action splits as

    delta(sqrt|gamma| L) = sqrt|gamma| E_i phi^i + d_a Psi^a,

where E_i is the bulk density assembled in `models` and Psi^a is a vector
density built pointwise from the deformation.  This module evaluates Psi
from a fixed 13-entry kernel table (t indexes the deformation's tangential
part, phi its normal part; HK/HG as in `models`):

    T00  + L t^a
    T01  - HK^{ab}_i grad_b phi^i
    T02  + (grad_b HK^{ba}_i) phi^i
    T03  - HG^{abc}_i grad_b grad_c phi^i
    T04  + HG^{abc}_i K_{db}^i K^d_{c j} phi^j
    T05  + HG^{abc}_i R(n_j, e_b, e_c, n^i) phi^j
    T06  + (grad_b HG^{bac}_i) grad_c phi^i
    T07  - (grad_b grad_c HG^{cba}_i) phi^i
    T08  - 2 HG^{abc}_l K^g_c^l K_{gb}^j phi_j
    T09  - 2 HG^{bac}_l K^g_c^l K_{gb}^j phi_j
    T10  + 2 HG^{gbc}_l K^a_c^l K_{gb}^j phi_j
    T11  + HG^{dbc}_i K_{bc j} K_d^{a i} phi^j
    T12  - HG^{dbc}_i K_{bc j} K_d^{a j} phi^i

The pointwise identity above is itself a test (`variation_identity_residual`)
driven by the re-embedding finite-difference oracle, which pins every entry.

On top of Psi sit the phase-space structures: the two-argument current

    J[phi1, phi2] = D_{phi2} Psi[X; phi1] - D_{phi1} Psi[X; phi2],

with D the finite-difference derivative along a deformation of the
embedding (argument order anchored by the closed-form value of the static
string below), the Cauchy-slice symplectic form, and the canonical
position/momentum pairing of the minimal-area model with momentum density
p_hat_alpha = sqrt(-gamma) sigma0 tau_alpha.

Deformation arguments follow one convention package-wide: a callable
mapping a Geometry to an ambient vector jet over its grid (`chart_field`
adapts plain component functions of the parameters).  The callable is
evaluated once on the base geometry; the resulting components are held
fixed while the embedding is finite-differenced.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import deformation as dfm
from .embeddings import Embedding, Geometry, integrate, line_grid
from .errors import (
    DegenerateGeometryError,
    DomainError,
    ParameterError,
    UnsupportedConfigurationError,
)
from .jets import Jet, jet_einsum, jet_stack
from .models import LagrangianModel, _lower2, _lower3, eom_density

__all__ = [
    "SymplecticPotentialField",
    "CauchySlice",
    "CanonicalPair",
    "chart_field",
    "symplectic_potential",
    "variation_identity_residual",
    "symplectic_current",
    "symplectic_form",
    "unit_timelike_tangent",
    "dng_momentum_density",
    "dng_canonical_pair",
    "dng_canonical_pairing",
    "mass_shell_check",
]


def chart_field(fn):
    """Adapt fn(*params) -> ambient components into a geometry callable."""

    def build(geom: Geometry):
        comps = list(fn(*geom.params))
        return jet_stack(comps, template=geom.X)

    return build


def _resolve_field(vfield, geom: Geometry):
    return vfield(geom) if callable(vfield) else vfield


def _smul(scalar, vec):
    if isinstance(scalar, Jet):
        return jet_einsum("...,a...->a...", scalar, vec)
    return scalar * vec


@dataclass
class SymplecticPotentialField:
    """Boundary-kernel vector density Psi^a for one deformation."""

    jet: Jet
    values: np.ndarray        # (dim,) + grid
    deformation: np.ndarray   # ambient components of the deformation
    model: str

    def divergence(self) -> np.ndarray:
        """Plain coordinate divergence d_a Psi^a (exact jet partials)."""
        dim = self.values.shape[0]
        out = None
        for a in range(dim):
            comp = self.jet.map_coeffs(lambda x, a=a: x[a]).partial(a)
            term = np.asarray(comp.value, float)
            out = term if out is None else out + term
        return out


def symplectic_potential(model: LagrangianModel, geom: Geometry,
                         vfield) -> SymplecticPotentialField:
    """Evaluate the kernel table for one deformation on one geometry."""
    model.check_geometry(geom)
    V = _resolve_field(vfield, geom)
    t, phi = dfm.decompose_vector(geom, V)
    gi = geom.inverse_induced_metric
    d = geom.dim

    psi = _smul(model.lagrangian(geom), t)                             # T00

    HK = model.h_k(geom)
    HG = model.h_gradk(geom)
    if HK is not None or HG is not None:
        K = geom.extrinsic_curvature
        Kmix = jet_einsum("ad...,dbi...->abi...", gi, K)
        gphi = geom.covariant_grad(phi, 0, 1)                          # (b,i)
    if HK is not None:
        psi = psi - jet_einsum("abi...,bi...->a...", HK, gphi)         # T01
        g1 = geom.covariant_grad(_lower2(geom, HK), 2, 1)              # (e,b,a,i)
        s = jet_einsum("eb...,ebai...->ai...", gi, g1)
        div_up = jet_einsum("ac...,ci...->ai...", gi, s)
        psi = psi + jet_einsum("ai...,i...->a...", div_up, phi)        # T02

    if HG is not None:
        gg2 = geom.covariant_grad(gphi, 1, 1)                          # (b,c,i)
        psi = psi - jet_einsum("abci...,bci...->a...", HG, gg2)        # T03
        u = jet_einsum("abci...,dbi...->adc...", HG, K)
        w = jet_einsum("adc...,dcj...->aj...", u, Kmix)
        psi = psi + jet_einsum("aj...,j...->a...", w, phi)             # T04
        blk = geom.rframe.map_coeffs(lambda x: x[d:, :d, :d, d:])      # (j,b,c,i)
        rlam = jet_einsum("jbci...,j...->bci...", blk, phi)
        psi = psi + jet_einsum("abci...,bci...->a...", HG, rlam)       # T05

        gA = geom.covariant_grad(_lower3(geom, HG), 3, 1)              # (e,b,a,c,i)
        s = jet_einsum("eb...,ebaci...->aci...", gi, gA)  # grad_b HG_{b..}
        su = jet_einsum("am...,mci...->aci...", gi, s)
        su = jet_einsum("cn...,ani...->aci...", gi, su)
        psi = psi + jet_einsum("aci...,ci...->a...", su, gphi)         # T06
        gB = geom.covariant_grad(s, 2, 1)                              # (e,b,a,i)
        divB = jet_einsum("eb...,ebai...->ai...", gi, gB)
        divB_up = jet_einsum("ac...,ci...->ai...", gi, divB)
        psi = psi - jet_einsum("ai...,i...->a...", divB_up, phi)       # T07

        u8 = jet_einsum("abcl...,gcl...->abg...", HG, Kmix)
        w8 = jet_einsum("abg...,gbj...->aj...", u8, K)
        psi = psi - 2.0 * jet_einsum("aj...,j...->a...", w8, phi)      # T08
        u9 = jet_einsum("bacl...,gcl...->abg...", HG, Kmix)
        w9 = jet_einsum("abg...,gbj...->aj...", u9, K)
        psi = psi - 2.0 * jet_einsum("aj...,j...->a...", w9, phi)      # T09
        u10 = jet_einsum("gbcl...,acl...->gba...", HG, Kmix)
        w10 = jet_einsum("gba...,gbj...->aj...", u10, K)
        psi = psi + 2.0 * jet_einsum("aj...,j...->a...", w10, phi)     # T10

        m11 = jet_einsum("dbci...,bcj...->dij...", HG, K)
        w11 = jet_einsum("dij...,adi...->aj...", m11, Kmix)
        psi = psi + jet_einsum("aj...,j...->a...", w11, phi)           # T11
        w12 = jet_einsum("dij...,adj...->ai...", m11, Kmix)
        psi = psi - jet_einsum("ai...,i...->a...", w12, phi)           # T12

    psi = jet_einsum("...,a...->a...", geom.sqrt_abs_det, psi)
    return SymplecticPotentialField(
        jet=psi,
        values=np.asarray(psi.value, float),
        deformation=np.asarray(V.value, float),
        model=model.name,
    )


def variation_identity_residual(model: LagrangianModel, geom: Geometry,
                                vfield, eps_list=dfm.EPS_SCHEDULE):
    """Pointwise residual of delta(sqrt(g)L) = sqrt(g)E.phi + div Psi.

    The left side is a re-embedding finite difference; the right side uses
    the assembled bulk density and exact jet partials of Psi.  The max-abs
    residual over the grid checks every kernel entry at once.
    """
    V = _resolve_field(vfield, geom)
    pot = symplectic_potential(model, geom, V)
    _t, phi = dfm.decompose_vector(geom, V)
    E = eom_density(model, geom)
    bulk = jet_einsum("...,i...->i...", geom.sqrt_abs_det, E)
    bulk = np.asarray(jet_einsum("i...,i...->...", bulk, phi).value, float)
    assembled = bulk + pot.divergence()

    def dens(g2):
        s = g2.sqrt_abs_det * model.lagrangian(g2)
        return np.asarray(s.value, float)

    res = dfm.finite_difference_delta(geom, V, dens, eps_list)
    numeric = np.asarray(res.estimate, float)
    return numeric - assembled, numeric


# -- phase-space structures ---------------------------------------------------

def symplectic_current(model: LagrangianModel, geom: Geometry, vf1, vf2,
                       eps_list=dfm.EPS_SCHEDULE) -> np.ndarray:
    """Two-deformation current J^a[phi1, phi2] on the geometry's grid.

    Each side is the Richardson finite difference of the potential of one
    fixed deformation while the embedding moves along the other.
    """
    V1 = _resolve_field(vf1, geom)
    V2 = _resolve_field(vf2, geom)

    def pot_of(V_fixed):
        return lambda g2: symplectic_potential(model, g2, V_fixed).values

    d1 = dfm.finite_difference_delta(geom, V1, pot_of(V2), eps_list)
    d2 = dfm.finite_difference_delta(geom, V2, pot_of(V1), eps_list)
    return np.asarray(d2.estimate, float) - np.asarray(d1.estimate, float)


@dataclass(frozen=True)
class CauchySlice:
    """Constant-coordinate cross-section of a two-axis worldsheet chart."""

    coord: str = "tau"
    value: float = 0.0
    n: int = 256

    def axis_index(self, embedding: Embedding) -> int:
        for k, ax in enumerate(embedding.axes):
            if ax.name == self.coord:
                return k
        raise ParameterError(
            f"no axis named {self.coord!r} on {embedding.name}"
        )


def _slice_geometry(embedding: Embedding, slc: CauchySlice, order: int):
    if embedding.dim != 2:
        raise UnsupportedConfigurationError(
            "Cauchy-slice integrals are defined for two-axis worldsheets"
        )
    k = slc.axis_index(embedding)
    ax = embedding.axes[k]
    if not ax.periodic and not (ax.lo < slc.value < ax.hi):
        raise DomainError(
            f"slice {ax.name}={slc.value} lies outside ({ax.lo}, {ax.hi})"
        )
    along = 1 - k
    grid = line_grid(embedding, along, slc.n, {ax.name: slc.value})
    geom = embedding.geometry(grid.mesh, order)
    return geom, grid, k


def symplectic_form(model: LagrangianModel, embedding: Embedding,
                    slc: CauchySlice, vf1, vf2,
                    eps_list=dfm.EPS_SCHEDULE) -> float:
    """Quadrature of the current's slice component over the cross-section."""
    # one order above the assembly need keeps the finite-difference side's
    # deformation jets full rank
    geom, grid, k = _slice_geometry(embedding, slc, model.jet_order + 1)
    J = symplectic_current(model, geom, vf1, vf2, eps_list)
    return float(integrate(J[k], grid))


# -- canonical variables of the minimal-area string ---------------------------

def unit_timelike_tangent(geom: Geometry, axis: int = 0):
    """Normalized timelike tangent along one chart axis (usually tau)."""
    gl = geom.induced_metric
    norm2 = gl.map_coeffs(lambda x: x[axis, axis])
    if np.any(np.asarray(norm2.value, float) >= 0.0):
        raise DegenerateGeometryError(
            "slice tangent is not timelike everywhere; cannot normalize"
        )
    e = geom.tangents.map_coeffs(lambda x: x[axis])
    inv = 1.0 / (-1.0 * norm2).sqrt()
    return jet_einsum("...,m...->m...", inv, e)


def dng_momentum_density(geom: Geometry, sigma0: float):
    """Covector density p_hat_alpha = sqrt(-gamma) sigma0 tau_alpha."""
    iota0 = unit_timelike_tangent(geom)
    tau = jet_einsum("mn...,n...->m...", geom.ambient_metric, iota0)
    return float(sigma0) * jet_einsum("...,m...->m...",
                                      geom.sqrt_abs_det, tau)


@dataclass
class CanonicalPair:
    """Position components and conjugate momentum density over a slice."""

    position: np.ndarray
    momentum: np.ndarray
    coupling: float


def dng_canonical_pair(embedding: Embedding, slc: CauchySlice,
                       sigma0: float, order: int = 3) -> CanonicalPair:
    geom, _grid, _k = _slice_geometry(embedding, slc, order)
    phat = dng_momentum_density(geom, sigma0)
    return CanonicalPair(
        position=np.asarray(geom.X.value, float),
        momentum=np.asarray(phat.value, float),
        coupling=float(sigma0),
    )


def dng_canonical_pairing(embedding: Embedding, slc: CauchySlice, vf1, vf2,
                          sigma0: float,
                          eps_list=dfm.EPS_SCHEDULE) -> float:
    """Darboux pairing of two deformations against the momentum density:

        integral over the slice of
        (delta1 X^alpha delta2 phat_alpha - delta2 X^alpha delta1 phat_alpha)

    with delta(phat) taken by the same re-embedding finite difference as
    the current; equals the symplectic form of the minimal-area model.
    """
    geom, grid, _k = _slice_geometry(embedding, slc, 3)
    V1 = _resolve_field(vf1, geom)
    V2 = _resolve_field(vf2, geom)

    def phat_values(g2):
        return np.asarray(dng_momentum_density(g2, sigma0).value, float)

    d1 = dfm.finite_difference_delta(geom, V1, phat_values, eps_list)
    d2 = dfm.finite_difference_delta(geom, V2, phat_values, eps_list)
    x1 = np.asarray(V1.value, float)
    x2 = np.asarray(V2.value, float)
    dens = np.einsum("m...,m...->...", x1, np.asarray(d2.estimate, float)) \
        - np.einsum("m...,m...->...", x2, np.asarray(d1.estimate, float))
    return float(integrate(dens, grid))


def mass_shell_check(embedding: Embedding, slc: CauchySlice,
                     sigma0: float) -> np.ndarray:
    """Per-point p.p + sigma0^2 for the unit momentum p = sigma0 tau_alpha.

    Zero everywhere by the unit-timelike normalization; the residual
    reports rounding only.  Degenerate (non-timelike) slices raise.
    """
    geom, _grid, _k = _slice_geometry(embedding, slc, 2)
    iota0 = unit_timelike_tangent(geom)
    tau = jet_einsum("mn...,n...->m...", geom.ambient_metric, iota0)
    pp = jet_einsum("m...,m...->...", tau, iota0)  # = g(iota0, iota0)
    return float(sigma0) ** 2 * (np.asarray(pp.value, float) + 1.0)
