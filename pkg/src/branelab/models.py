"""Worldvolume Lagrangian models and their field equations.

A model is a pointwise scalar L built from the inverse induced metric
gamma^{ab}, the extrinsic curvature K_ab^i and its tangential covariant
derivative grad_a K_bc^i.  Its constitutive data are the three partials

    H_ab       = dL / d gamma^{ab}        (lower indices)
    HK^{ab}_i  = dL / d K_ab^i            (upper worldvolume indices)
    HG^{abc}_i = dL / d (grad_a K_bc^i)

evaluated holding the other, lower-index arguments fixed.  Each evaluator
is checked against entrywise finite differences of the density in the
tests.

The first variation of S = integral sqrt|gamma| L under a normal
deformation phi^i splits into a bulk density and a divergence,

    delta S = int sqrt|gamma| E_i phi^i + int d_a (sqrt|gamma| Theta^a),

and `eom_density` assembles E_i from a fixed 14-entry table, one entry per
integration-by-parts product of the anchored variation formulas in
`deformation` (R(u, v, w, z) is the ambient pairing of Geometry.rframe):

    E01  + L K_i
    E02  - 2 K^{ab}_i H_ab
    E03  - grad_a grad_b HK^{ab}_i
    E04  + HK^{ab}_j K_{ad}^j K^d_{b i}
    E05  + HK^{ab}_j R(n_i, e_a, e_b, n^j)
    E06  + grad_c grad_b grad_a HG^{abc}_i
    E07  - (grad_a HG^{abc}_j) K_{bd}^j K^d_{c i}
    E08  - (grad_a HG^{abc}_j) R(n_i, e_b, e_c, n^j)
    E09  + 2 grad_a (HG^{abc}_l K^e_c^l) K_{eb i}
    E10  + 2 grad_b (HG^{abc}_l K^e_c^l) K_{ea i}
    E11  - 2 grad_e (HG^{abc}_l K^e_c^l) K_{ab i}
    E12  - grad_d (HG^{abc}_j K_{bc i} K_a^{d j})
    E13  + grad_d (HG^{abc}_i K_{bc j} K_a^{d j})
    E14  + HG^{abc}_l K_bc^j R(e_a, n_i, n_j, n_l)

Every sign is pinned by the finite-difference action oracle in the tests;
the curvature couplings E05/E08/E14 are only visible on a product
background, which the test battery includes.  The divergence kernel
Theta^a lives in `symplectic`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import deformation as dfm
from .embeddings import Embedding, Geometry, Grid, integrate
from .errors import (
    DegenerateGeometryError,
    ParameterError,
    PreconditionError,
    UnsupportedConfigurationError,
)
from .jets import Jet, jet_einsum

__all__ = [
    "LagrangianModel",
    "DNG",
    "QuadraticK",
    "EinsteinHilbert",
    "SyntheticGradK",
    "h_tensors",
    "action",
    "eom_density",
    "eom_residual",
    "EomResidualField",
    "quadratic_eom_direct",
    "action_variation_check",
    "VariationReport",
]


# -- model interface ---------------------------------------------------------

class LagrangianModel:
    """Base interface: a scalar density of (gamma^{ab}, K, grad K).

    Subclasses set the couplings and override the evaluators; ``h_*``
    return None when the corresponding tensor vanishes identically, which
    lets the assembly skip whole term groups.
    """

    name = "model"
    jet_order = 4       # jet order needed by the field equations
    action_order = 2    # jet order needed by plain action quadrature
    uses_gradk = False

    def check_geometry(self, geom: Geometry) -> None:
        pass

    def lagrangian(self, geom: Geometry):
        raise NotImplementedError

    def density_values(self, ginv, k, gradk):
        """L from raw value arrays; the reference for the H finite-diff tests."""
        raise NotImplementedError

    def h_gamma(self, geom: Geometry):
        return None

    def h_k(self, geom: Geometry):
        return None

    def h_gradk(self, geom: Geometry):
        return None

    @property
    def eom_scale(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class DNG(LagrangianModel):
    """Constant density L = -mu: the action is -mu times the worldvolume
    area, extremized by vanishing mean curvature."""

    mu: float = 1.0
    name = "dng"
    jet_order = 2  # the field equations stop at the mean curvature

    def __post_init__(self):
        if self.mu <= 0:
            raise ParameterError("tension mu must be positive")

    def lagrangian(self, geom):
        return -self.mu

    def density_values(self, ginv, k, gradk):
        grid = np.asarray(ginv).shape[2:]
        return np.full(grid, -self.mu)

    @property
    def eom_scale(self):
        # residual = raw / scale = mu K^i
        return -1.0


@dataclass(frozen=True)
class QuadraticK(LagrangianModel):
    """Squared mean curvature (rigidity) density L = alpha K^i K_i."""

    alpha: float = 1.0
    name = "quadratic-k"

    def __post_init__(self):
        if self.alpha == 0:
            raise ParameterError("rigidity alpha must be nonzero")

    def lagrangian(self, geom):
        return self.alpha * geom.k_squared_scalar

    def density_values(self, ginv, k, gradk):
        m = np.einsum("ab...,abi...->i...", ginv, k)
        return self.alpha * np.einsum("i...,i...->...", m, m)

    def h_gamma(self, geom):
        return 2.0 * self.alpha * jet_einsum(
            "i...,abi...->ab...", geom.mean_curvature, geom.extrinsic_curvature
        )

    def h_k(self, geom):
        return 2.0 * self.alpha * jet_einsum(
            "ab...,i...->abi...",
            geom.inverse_induced_metric,
            geom.mean_curvature,
        )

    @property
    def eom_scale(self):
        # residual = raw / scale = lap K^i - R-coupling + K K K combinations
        return -2.0 * self.alpha


@dataclass(frozen=True)
class EinsteinHilbert(LagrangianModel):
    """L = sigma1 (K^iK_i - K_ab^i K^{ab}_i), which on a flat background
    equals sigma1 times the intrinsic curvature scalar (structure
    equation); restricted to flat backgrounds for exactly that reason.
    Topological for two-dimensional worldvolumes: E_i vanishes there."""

    sigma1: float = 1.0
    name = "einstein-hilbert"

    def __post_init__(self):
        if self.sigma1 == 0:
            raise ParameterError("coupling sigma1 must be nonzero")

    def check_geometry(self, geom):
        if not geom.background.flat:
            raise UnsupportedConfigurationError(
                "EinsteinHilbert model needs a flat background; the"
                " equality with the intrinsic curvature scalar fails on"
                " curved ones"
            )

    def lagrangian(self, geom):
        return self.sigma1 * (geom.k_squared_scalar - geom.k_dot_k_scalar)

    def density_values(self, ginv, k, gradk):
        m = np.einsum("ab...,abi...->i...", ginv, k)
        ksq = np.einsum("i...,i...->...", m, m)
        kup = np.einsum("ac...,bd...,cdi...->abi...", ginv, ginv, k)
        kdk = np.einsum("abi...,abi...->...", kup, k)
        return self.sigma1 * (ksq - kdk)

    def h_gamma(self, geom):
        t1 = jet_einsum("i...,abi...->ab...", geom.mean_curvature,
                        geom.extrinsic_curvature)
        kmix = jet_einsum("cd...,dbi...->cbi...", geom.inverse_induced_metric,
                          geom.extrinsic_curvature)
        t2 = jet_einsum("aci...,cbi...->ab...", geom.extrinsic_curvature, kmix)
        return 2.0 * self.sigma1 * (t1 - t2)

    def h_k(self, geom):
        t1 = jet_einsum("ab...,i...->abi...", geom.inverse_induced_metric,
                        geom.mean_curvature)
        return 2.0 * self.sigma1 * (t1 - geom.k_raised)

    @property
    def eom_scale(self):
        return -2.0 * self.sigma1


@dataclass(frozen=True)
class SyntheticGradK(LagrangianModel):
    """Gradient density L = beta grad_a K^i grad^a K_i on the mean
    curvature vector; exercises the HG^{abc} path of the assembly."""

    beta: float = 1.0
    name = "synthetic-gradk"
    jet_order = 6
    action_order = 3
    uses_gradk = True

    def __post_init__(self):
        if self.beta == 0:
            raise ParameterError("coupling beta must be nonzero")

    def lagrangian(self, geom):
        return self.beta * geom.gradk_squared_scalar

    def density_values(self, ginv, k, gradk):
        m = np.einsum("bc...,abci...->ai...", ginv, gradk)
        up = np.einsum("ad...,di...->ai...", ginv, m)
        return self.beta * np.einsum("ai...,ai...->...", m, up)

    def _grad_mean_up(self, geom):
        gm = geom.covariant_grad(geom.mean_curvature, 0, 1)  # (a, i)
        return jet_einsum("ab...,bi...->ai...", geom.inverse_induced_metric, gm)

    def h_gamma(self, geom):
        gm = geom.covariant_grad(geom.mean_curvature, 0, 1)
        up = self._grad_mean_up(geom)
        t1 = jet_einsum("ai...,bi...->ab...", gm, gm)
        t2 = jet_einsum("pi...,pabi...->ab...", up, geom.grad_extrinsic)
        return self.beta * (t1 + 2.0 * t2)

    def h_gradk(self, geom):
        return 2.0 * self.beta * jet_einsum(
            "bc...,ai...->abci...",
            geom.inverse_induced_metric,
            self._grad_mean_up(geom),
        )

    @property
    def eom_scale(self):
        return -2.0 * self.beta


# -- assembly ----------------------------------------------------------------

def _zero_jet(geom: Geometry, shape):
    base = np.zeros(shape + geom.grid_shape)
    return Jet.constant(base, geom.X.nvars, geom.X.order)


def h_tensors(model: LagrangianModel, geom: Geometry):
    """The (H_ab, HK^{ab}_i, HG^{abc}_i) triple, zeros materialized."""
    model.check_geometry(geom)
    d, k = geom.dim, geom.codim
    h = model.h_gamma(geom)
    hk = model.h_k(geom)
    hg = model.h_gradk(geom)
    return (
        h if h is not None else _zero_jet(geom, (d, d)),
        hk if hk is not None else _zero_jet(geom, (d, d, k)),
        hg if hg is not None else _zero_jet(geom, (d, d, d, k)),
    )


def _require_order(geom: Geometry, need: int, what: str):
    if geom.X.order < need:
        raise PreconditionError(
            f"{what} needs jet order >= {need}, geometry has {geom.X.order}"
        )


def _lower2(geom, T):
    # T^{ab}_i -> T_{ab}^i
    gl = geom.induced_metric
    t = jet_einsum("ae...,ebi...->abi...", gl, T)
    return jet_einsum("bf...,afi...->abi...", gl, t)


def _lower3(geom, T, normal=True):
    gl = geom.induced_metric
    spec_tail = "i..." if normal else "..."
    t = jet_einsum(f"ae...,ebc{spec_tail}->abc{spec_tail}", gl, T)
    t = jet_einsum(f"bf...,afc{spec_tail}->abc{spec_tail}", gl, t)
    return jet_einsum(f"cg...,abg{spec_tail}->abc{spec_tail}", gl, t)


def eom_density(model: LagrangianModel, geom: Geometry):
    """Raw Euler-Lagrange density E_i (a jet over the geometry's grid)."""
    model.check_geometry(geom)
    _require_order(geom, model.jet_order, f"{model.name} field equations")
    d = geom.dim
    gi = geom.inverse_induced_metric
    K = geom.extrinsic_curvature
    Kup = geom.k_raised
    Kmix = jet_einsum("ad...,dbi...->abi...", gi, K)  # K^a_b^i
    mean = geom.mean_curvature
    block_tn = geom.rframe.map_coeffs(lambda x: x[d:, :d, :d, d:])  # (i,a,b,j)

    E = model.lagrangian(geom) * mean                               # E01

    H = model.h_gamma(geom)
    if H is not None:
        E = E - 2.0 * jet_einsum("abi...,ab...->i...", Kup, H)      # E02

    HK = model.h_k(geom)
    if HK is not None:
        hk_low = _lower2(geom, HK)
        g1 = geom.covariant_grad(hk_low, 2, 1)                      # (c,a,b,i)
        s1 = jet_einsum("cb...,cabi...->ai...", gi, g1)
        g2 = geom.covariant_grad(s1, 1, 1)                          # (e,a,i)
        E = E - jet_einsum("ea...,eai...->i...", gi, g2)            # E03
        u4 = jet_einsum("abj...,adj...->bd...", HK, K)
        E = E + jet_einsum("bd...,dbi...->i...", u4, Kmix)          # E04
        E = E + jet_einsum("iabj...,abj...->i...", block_tn, HK)    # E05

    HG = model.h_gradk(geom)
    if HG is not None:
        hg_low = _lower3(geom, HG)
        g1 = geom.covariant_grad(hg_low, 3, 1)                      # (e,a,b,c,i)
        a_low = jet_einsum("ea...,eabci...->bci...", gi, g1)        # grad.HG
        t = jet_einsum("be...,eci...->bci...", gi, a_low)
        a_up = jet_einsum("cf...,bfi...->bci...", gi, t)
        g2 = geom.covariant_grad(a_low, 2, 1)                       # (e,b,c,i)
        s2 = jet_einsum("eb...,ebci...->ci...", gi, g2)
        g3 = geom.covariant_grad(s2, 1, 1)                          # (e,c,i)
        E = E + jet_einsum("ec...,eci...->i...", gi, g3)            # E06
        u7 = jet_einsum("bcj...,bdj...->cd...", a_up, K)
        E = E - jet_einsum("cd...,dci...->i...", u7, Kmix)          # E07
        E = E - jet_einsum("ibcj...,bcj...->i...", block_tn, a_up)  # E08

        W = jet_einsum("abcl...,ecl...->abe...", HG, Kmix)
        w_low = _lower3(geom, W, normal=False)
        gw = geom.covariant_grad(w_low, 3, 0)                       # (f,a,b,e)
        d1 = jet_einsum("fa...,fabe...->be...", gi, gw)
        d2 = jet_einsum("fb...,fabe...->ae...", gi, gw)
        d3 = jet_einsum("fe...,fabe...->ab...", gi, gw)
        E = E + 2.0 * jet_einsum("be...,bei...->i...", d1, Kup)     # E09
        E = E + 2.0 * jet_einsum("ae...,aei...->i...", d2, Kup)     # E10
        E = E - 2.0 * jet_einsum("ab...,abi...->i...", d3, Kup)     # E11

        v12 = jet_einsum("abcj...,daj...->dbc...", HG, Kmix)
        f12 = jet_einsum("dbc...,bci...->di...", v12, K)
        f12_low = jet_einsum("de...,ei...->di...", geom.induced_metric, f12)
        gf = geom.covariant_grad(f12_low, 1, 1)                     # (e,d,i)
        E = E - jet_einsum("ed...,edi...->i...", gi, gf)            # E12

        v13 = jet_einsum("abci...,bcj...->aij...", HG, K)
        f13 = jet_einsum("aij...,daj...->di...", v13, Kmix)
        f13_low = jet_einsum("de...,ei...->di...", geom.induced_metric, f13)
        gf = geom.covariant_grad(f13_low, 1, 1)
        E = E + jet_einsum("ed...,edi...->i...", gi, gf)            # E13

        block_tnnn = geom.rframe.map_coeffs(lambda x: x[:d, d:, d:, d:])
        m14 = jet_einsum("abcl...,bcj...->ajl...", HG, K)
        E = E + jet_einsum("aijl...,ajl...->i...", block_tnnn, m14)  # E14

    return E


@dataclass
class EomResidualField:
    """Per-point field equations: raw density and coupling-normalized values."""

    values: np.ndarray   # raw / scale
    raw: np.ndarray
    scale: float
    model: str

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def _resolve_geometry(target, grid, order):
    if isinstance(target, Geometry):
        return target
    if isinstance(target, Embedding):
        if grid is None:
            raise ParameterError("a grid is required with an embedding")
        return target.geometry(grid.mesh, order)
    raise ParameterError("target must be an Embedding or a Geometry")


def eom_residual(model: LagrangianModel, target, grid: Grid | None = None,
                 order: int | None = None) -> EomResidualField:
    """Field-equation residual of the model on a grid or prebuilt geometry.

    ``values`` divides out the model's leading coupling normalization
    (DNG: residual = mu K^i; QuadraticK: the closed quartic form of
    `quadratic_eom_direct`).
    """
    geom = _resolve_geometry(target, grid, order or model.jet_order)
    E = eom_density(model, geom)
    raw = np.asarray(E.value, float)
    return EomResidualField(
        values=raw / model.eom_scale,
        raw=raw,
        scale=model.eom_scale,
        model=model.name,
    )


def quadratic_eom_direct(geom: Geometry) -> np.ndarray:
    """Closed-form normalized field equations of the rigidity model:

        lap K^i - R(n^i, e_a, e^a, n^j) K_j
        + (gamma^{ac} gamma^{bd} - gamma^{ab} gamma^{cd} / 2)
          K_ab^j K_cd^i K_j

    used as an independent cross-check of the generic assembly.
    """
    _require_order(geom, 4, "quartic closed form")
    gi = geom.inverse_induced_metric
    mean = geom.mean_curvature
    g1 = geom.covariant_grad(mean, 0, 1)                 # (a, i)
    g2 = geom.covariant_grad(g1, 1, 1)                   # (b, a, i)
    lap = jet_einsum("ba...,bai...->i...", gi, g2)
    d = geom.dim
    block_tn = geom.rframe.map_coeffs(lambda x: x[d:, :d, :d, d:])
    m = jet_einsum("ab...,iabj...->ij...", gi, block_tn)
    rterm = jet_einsum("ij...,j...->i...", m, mean)
    s = jet_einsum("abj...,abi...->ij...", geom.k_raised,
                   geom.extrinsic_curvature)
    kkk = jet_einsum("ij...,j...->i...", s, mean)
    ksq = jet_einsum("j...,j...->...", mean, mean)
    out = lap - rterm + kkk - 0.5 * (mean * ksq)
    return np.asarray(out.value, float)


# -- action and its variation -------------------------------------------------

def _check_nondegenerate(geom: Geometry):
    det = np.asarray(geom.det_induced_metric.value, float)
    bad = ~np.isfinite(det) | (np.abs(det) < 1e-14)
    if np.any(bad):
        idx = np.argwhere(bad)[:8].tolist()
        raise DegenerateGeometryError(
            f"degenerate induced metric at grid indices {idx}"
            + ("" if np.count_nonzero(bad) <= 8 else " (truncated)")
        )


def action(model: LagrangianModel, embedding: Embedding, grid: Grid,
           order: int | None = None) -> float:
    """Quadrature of sqrt|gamma| L over the grid."""
    geom = embedding.geometry(grid.mesh, order or model.action_order)
    model.check_geometry(geom)
    _check_nondegenerate(geom)
    dens = geom.sqrt_abs_det * model.lagrangian(geom)
    return float(integrate(np.asarray(dens.value, float), grid))


def _require_interior_support(embedding: Embedding, grid: Grid, V):
    vals = np.abs(np.asarray(V.value, float))
    amp = float(np.max(vals))
    if amp == 0.0:
        return
    for k, axis in enumerate(embedding.axes):
        if axis.periodic:
            continue
        edge = max(
            float(np.max(np.take(vals, [0], axis=1 + k))),
            float(np.max(np.take(vals, [-1], axis=1 + k))),
        )
        if edge > 1e-8 * amp:
            raise PreconditionError(
                f"deformation support touches the clamped axis '{axis.name}'"
                f" boundary (edge amplitude {edge:.2e} vs peak {amp:.2e})"
            )


@dataclass
class VariationReport:
    """Finite-difference action derivative vs the assembled bulk integral."""

    numeric: float
    assembled: float
    gap: float
    diffs: np.ndarray
    eps: tuple

    def tolerance(self) -> float:
        return max(1e-5, 10.0 * min(self.eps) ** 2)


def action_variation_check(model: LagrangianModel, embedding: Embedding,
                           grid: Grid, vfield,
                           eps_list=dfm.EPS_SCHEDULE) -> VariationReport:
    """Check delta S = int sqrt|gamma| E_i phi^i for a compactly supported
    deformation.

    ``vfield`` maps a geometry to an ambient vector jet over the grid (or
    is such a jet); its normal part drives the assembled side, the full
    vector drives the re-embedding finite difference.  The divergence term
    integrates to zero precisely because the support stays interior, which
    is enforced as a precondition.
    """
    geom = embedding.geometry(grid.mesh, model.jet_order)
    model.check_geometry(geom)
    V = vfield(geom) if callable(vfield) else vfield
    _require_interior_support(embedding, grid, V)
    _t, phi = dfm.decompose_vector(geom, V)
    E = eom_density(model, geom)
    integrand = geom.sqrt_abs_det * jet_einsum("i...,i...->...", E, phi)
    assembled = float(integrate(np.asarray(integrand.value, float), grid))

    # the finite-difference side only needs action values, so it runs on a
    # cheaper low-order geometry over the same nodes; one extra order pays
    # for the normal frame inside the deformation jet
    geom_fd = embedding.geometry(grid.mesh, model.action_order + 1)
    V_fd = vfield(geom_fd) if callable(vfield) else vfield

    def action_of(g2):
        dens = g2.sqrt_abs_det * model.lagrangian(g2)
        return np.asarray(integrate(np.asarray(dens.value, float), grid))

    res = dfm.finite_difference_delta(geom_fd, V_fd, action_of, eps_list)
    numeric = float(res.estimate)
    return VariationReport(
        numeric=numeric,
        assembled=assembled,
        gap=abs(numeric - assembled),
        diffs=np.asarray(res.diffs, float),
        eps=tuple(res.eps),
    )
