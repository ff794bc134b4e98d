"""Normal deformation calculus for embedded worldvolumes.

Given a worldvolume with normal frame n_i and a deformation with normal
components phi^i, the first variations of the induced objects are:

  delta gamma_ab        = +2 K_ab^i phi_i
  delta gamma^{ab}      = -2 K^{ab}_i phi^i
  delta sqrt|gamma|     = sqrt|gamma| K^i phi_i
  covariant delta K_bc^i (frame-covariant part):
      L_bc^i = -grad_b grad_c phi^i + K_bd^i K^d_c_j phi^j
               + rpair(e_b, n_j; e_c, n^i) phi^j
  delta twist w_a^{ij}  = K_a^{d i} grad_d phi^j - K_a^{d j} grad_d phi^i
               + rpair(n_k, e_a; n^j, n^i) phi^k
  delta wv connection   dG^d_{ab} = gamma^{de}(grad_a P_eb + grad_b P_ea
               - grad_e P_ab),  P_ab = K_ab^j phi_j
  covariant delta of grad_a K_bc^i:
      grad_a L_bc^i - dG^d_{ab} K_dc^i - dG^d_{ac} K_bd^i
      + dw_a^i_j K_bc^j

Every formula is pinned by finite-difference oracles in the test suite:
scalars are compared directly, frame-carried tensors on codimension-1
worldvolumes (where the normal is selection-stable), and the twist signs on
codimension-2 worldvolumes through gauge-invariant scalar contractions.

The finite-difference side deforms the embedding map in background chart
components, X_eps = X + eps * V with V = phi^i n_i frozen on the base
worldvolume; first derivatives in eps agree with covariant deformation
families.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conventions import S_DOMEGA_K, S_DOMEGA_R
from .embeddings import Geometry
from .errors import ParameterError, PreconditionError
from .jets import jet_einsum, jet_rearrange, jet_stack

__all__ = [
    "normal_field",
    "deformation_vector",
    "decompose_vector",
    "deformed_geometry",
    "bump",
    "delta_induced_metric",
    "delta_inverse_metric",
    "delta_sqrt_det",
    "delta_extrinsic",
    "delta_twist",
    "delta_wv_christoffel",
    "delta_grad_extrinsic",
    "scalar_invariant",
    "predicted_delta_scalar",
    "OracleResult",
    "finite_difference_delta",
]

EPS_SCHEDULE = (1e-3, 5e-4, 2.5e-4)


def normal_field(geom: Geometry, *fns):
    """Stack per-normal scalar functions of the parameters into one jet."""
    if len(fns) != geom.codim:
        raise ParameterError(
            f"need {geom.codim} normal components, got {len(fns)}"
        )
    if geom.params is None:
        raise PreconditionError("geometry carries no parameter jets")
    comps = [f(*geom.params) for f in fns]
    return jet_stack(comps, template=geom.X)


def deformation_vector(geom: Geometry, phi):
    """Ambient components of the deformation: V^mu = phi^i n_i^mu."""
    return jet_einsum("i...,im...->m...", phi, geom.normals)


def decompose_vector(geom: Geometry, V):
    """Split an ambient vector jet into tangential and normal components.

    Returns (t, phi) with t^a = gamma^{ab} <V, e_b> and phi^i = <V, n^i>.
    """
    gV = jet_einsum("mn...,n...->m...", geom.ambient_metric, V)
    t_low = jet_einsum("am...,m...->a...", geom.tangents, gV)
    t = jet_einsum("ab...,b...->a...", geom.inverse_induced_metric, t_low)
    phi = jet_einsum("im...,m...->i...", geom.normals, gV)
    return t, phi


def deformed_geometry(geom: Geometry, V, eps: float) -> Geometry:
    """Geometry of the chart-shifted embedding X + eps V."""
    return Geometry(geom.background, geom.X + eps * V)


def bump(u):
    """Smooth compactly supported profile of one scalar jet.

    Equals exp(1 - 1/(1 - u^2)) for |u| < 1 and 0 outside; the evaluation is
    masked at |u| >= 0.99 where the true value is below 5e-22, so the cutoff
    is invisible at double precision while keeping the pole off the grid.
    """
    mask = (np.abs(np.asarray(u.value, float)) < 0.99).astype(float)
    um = u * mask
    core = (1.0 - 1.0 / (1.0 - um * um)).exp()
    return core * mask


def poly_window(u, power: int = 10):
    """Polynomial window (1 - u^2)^power on [-1, 1].

    Vanishes at u = +-1 together with its first power-1 derivatives, so
    midpoint quadrature of windowed integrands converges at high order;
    `bump` has exactly compact support but its steep shoulders dominate the
    quadrature error on coarse grids.
    """
    if power < 3:
        raise ParameterError("window power below 3 leaks boundary flux")
    w = 1.0 - u * u
    out = w
    for _ in range(power - 1):
        out = out * w
    return out


# -- predicted first variations -------------------------------------------

def delta_induced_metric(geom: Geometry, phi):
    return 2.0 * jet_einsum("abi...,i...->ab...", geom.extrinsic_curvature, phi)


def delta_inverse_metric(geom: Geometry, phi):
    return -2.0 * jet_einsum("abi...,i...->ab...", geom.k_raised, phi)


def delta_sqrt_det(geom: Geometry, phi):
    kphi = jet_einsum("i...,i...->...", geom.mean_curvature, phi)
    return geom.sqrt_abs_det * kphi


def _rpair_tan_nor(geom):
    """rpair(e_b, n_j; e_c, n^i) as a jet with axes (b, j, c, i)."""
    d = geom.dim
    # rpair(u=e_b, v=n_j; w=e_c, z=n_i) = rframe[n_j, e_b, e_c, n_i]
    block = geom.rframe.map_coeffs(lambda x: x[d:, :d, :d, d:])
    return jet_rearrange("jbci...->bjci...", block)


def delta_extrinsic(geom: Geometry, phi):
    """Frame-covariant first variation of K_bc^i."""
    ddphi = geom.covariant_grad(geom.covariant_grad(phi, 0, 1), 1, 1)
    kk = jet_einsum("bdi...,dcj...->bcij...", geom.extrinsic_curvature,
                    jet_einsum("de...,ecj...->dcj...",
                               geom.inverse_induced_metric,
                               geom.extrinsic_curvature))
    kk_term = jet_einsum("bcij...,j...->bci...", kk, phi)
    r_term = jet_einsum("bjci...,j...->bci...", _rpair_tan_nor(geom), phi)
    return -1.0 * ddphi + kk_term + r_term


def delta_twist(geom: Geometry, phi):
    """First variation of the twist connection w_a^{ij}."""
    gphi = geom.covariant_grad(phi, 0, 1)           # (d, i)
    k_mixed = jet_einsum("ae...,ebi...->abi...", geom.inverse_induced_metric,
                         geom.extrinsic_curvature)
    k_up = jet_rearrange("abi...->bai...", k_mixed)  # K_a^{b i} -> axes (a, b, i)
    kg = jet_einsum("adi...,dj...->aij...", k_up, gphi)
    k_term = kg - jet_rearrange("aij...->aji...", kg)
    d = geom.dim
    # rpair(n_k, e_a; n^j, n^i) = rframe[e_a, n_k, n_j, n_i]
    block = geom.rframe.map_coeffs(lambda x: x[:d, d:, d:, d:])
    r_term = jet_einsum("akji...,k...->aij...", block, phi)
    return S_DOMEGA_K * k_term + S_DOMEGA_R * r_term


def delta_wv_christoffel(geom: Geometry, phi):
    """First variation of the worldvolume connection, dG^d_{ab}."""
    P = jet_einsum("abj...,j...->ab...", geom.extrinsic_curvature, phi)
    gP = geom.covariant_grad(P, 2, 0)               # (e, a, b) = grad_e P_ab
    combo = (jet_rearrange("aeb...->eab...", gP)
             + jet_rearrange("bea...->eab...", gP)
             - gP)
    return jet_einsum("de...,eab...->dab...", geom.inverse_induced_metric, combo)


def delta_grad_extrinsic(geom: Geometry, phi):
    """Frame-covariant first variation of grad_a K_bc^i."""
    lam = delta_extrinsic(geom, phi)
    out = geom.covariant_grad(lam, 2, 1)            # (a, b, c, i)
    dG = delta_wv_christoffel(geom, phi)
    K = geom.extrinsic_curvature
    out = out - jet_einsum("dab...,dci...->abci...", dG, K)
    out = out - jet_einsum("dac...,bdi...->abci...", dG, K)
    dw = delta_twist(geom, phi)
    out = out + jet_einsum("aij...,bcj...->abci...", dw, K)
    return out


# -- scalar invariants and their predicted variations ----------------------

def scalar_invariant(geom: Geometry, name: str):
    """Pointwise scalar invariants used by the oracle tests."""
    if name == "k_dot_k":
        return geom.k_dot_k_scalar
    if name == "k_squared":
        return geom.k_squared_scalar
    if name == "det_metric":
        return geom.det_induced_metric
    if name == "sqrt_det":
        return geom.sqrt_abs_det
    if name == "gradk_full":
        gk = geom.grad_extrinsic
        up = _raise_gradk(geom, gk)
        return jet_einsum("abci...,abci...->...", gk, up)
    if name == "gradk_mean":
        return geom.gradk_squared_scalar
    raise ParameterError(f"unknown scalar invariant '{name}'")


def _raise_gradk(geom, gk):
    gi = geom.inverse_induced_metric
    up = jet_einsum("ad...,dbci...->abci...", gi, gk)
    up = jet_einsum("be...,aeci...->abci...", gi, up)
    return jet_einsum("cf...,abfi...->abci...", gi, up)


def predicted_delta_scalar(geom: Geometry, phi, name: str):
    """Chain-rule variation of a named scalar from the table above."""
    if name == "det_metric":
        kphi = jet_einsum("i...,i...->...", geom.mean_curvature, phi)
        return 2.0 * geom.det_induced_metric * kphi
    if name == "sqrt_det":
        return delta_sqrt_det(geom, phi)
    if name == "k_dot_k":
        lam = delta_extrinsic(geom, phi)
        kup = geom.k_raised
        term = 2.0 * jet_einsum("abi...,abi...->...", kup, lam)
        dginv = delta_inverse_metric(geom, phi)
        kk = jet_einsum("abi...,cbi...->ac...", geom.extrinsic_curvature,
                        jet_einsum("bd...,cdi...->cbi...",
                                   geom.inverse_induced_metric,
                                   geom.extrinsic_curvature))
        return term + 2.0 * jet_einsum("ac...,ac...->...", dginv, kk)
    if name == "k_squared":
        lam = delta_extrinsic(geom, phi)
        dginv = delta_inverse_metric(geom, phi)
        dmean = (jet_einsum("ab...,abi...->i...", geom.inverse_induced_metric, lam)
                 + jet_einsum("ab...,abi...->i...", dginv,
                              geom.extrinsic_curvature))
        return 2.0 * jet_einsum("i...,i...->...", geom.mean_curvature, dmean)
    if name == "gradk_full":
        gk = geom.grad_extrinsic
        gi = geom.inverse_induced_metric
        up = _raise_gradk(geom, gk)
        dgk = delta_grad_extrinsic(geom, phi)
        term = 2.0 * jet_einsum("abci...,abci...->...", up, dgk)
        dginv = delta_inverse_metric(geom, phi)
        # one dginv factor per raised slot; partially raised partners
        up_bc = jet_einsum("cf...,abfi...->abci...",
                           gi, jet_einsum("be...,aeci...->abci...", gi, gk))
        up_ac = jet_einsum("cf...,abfi...->abci...",
                           gi, jet_einsum("ad...,dbci...->abci...", gi, gk))
        up_ab = jet_einsum("be...,aeci...->abci...",
                           gi, jet_einsum("ad...,dbci...->abci...", gi, gk))
        pair_a = jet_einsum("abci...,dbci...->ad...", up_bc, gk)
        pair_b = jet_einsum("abci...,aeci...->be...", up_ac, gk)
        pair_c = jet_einsum("abci...,abfi...->cf...", up_ab, gk)
        for pair in (pair_a, pair_b, pair_c):
            term = term + jet_einsum("xy...,xy...->...", dginv, pair)
        return term
    if name == "gradk_mean":
        gi = geom.inverse_induced_metric
        gm = geom.covariant_grad(geom.mean_curvature, 0, 1)    # (a, i)
        gk = geom.grad_extrinsic
        dgk = delta_grad_extrinsic(geom, phi)
        dginv = delta_inverse_metric(geom, phi)
        # grad_a K^i = gamma^{bc} grad_a K_bc^i, so its variation chains
        # through the table for grad K plus the inverse-metric response
        dgm = (jet_einsum("bc...,abci...->ai...", dginv, gk)
               + jet_einsum("bc...,abci...->ai...", gi, dgk))
        up = jet_einsum("ab...,bi...->ai...", gi, gm)
        term = 2.0 * jet_einsum("ai...,ai...->...", up, dgm)
        pair = jet_einsum("ai...,bi...->ab...", gm, gm)
        return term + jet_einsum("ab...,ab...->...", dginv, pair)
    raise ParameterError(f"no predicted variation for '{name}'")


# -- finite-difference oracle ----------------------------------------------

@dataclass
class OracleResult:
    """Central-difference estimates at a halving eps schedule."""

    estimate: np.ndarray          # Richardson-extrapolated derivative
    diffs: tuple                  # raw central differences per eps
    eps: tuple

    def convergence_ratio(self, floor: float = 1e-12):
        """(D1-D2)/(D2-D3); ~4 for clean quadratic convergence."""
        d1, d2, d3 = [np.asarray(d, float) for d in self.diffs]
        num, den = d1 - d2, d2 - d3
        ratio = np.where(np.abs(den) > floor, num / np.where(den == 0, 1, den),
                         np.nan)
        return ratio


def finite_difference_delta(geom: Geometry, V, extract, eps_list=EPS_SCHEDULE):
    """Oracle derivative of ``extract(geometry)`` along the deformation V.

    ``extract`` maps a Geometry to an ndarray; eps_list must halve.
    """
    diffs = []
    for eps in eps_list:
        sp = np.asarray(extract(deformed_geometry(geom, V, +eps)), float)
        sm = np.asarray(extract(deformed_geometry(geom, V, -eps)), float)
        diffs.append((sp - sm) / (2.0 * eps))
    d2, d3 = diffs[-2], diffs[-1]
    estimate = (4.0 * d3 - d2) / 3.0
    return OracleResult(estimate=estimate, diffs=tuple(diffs), eps=tuple(eps_list))
