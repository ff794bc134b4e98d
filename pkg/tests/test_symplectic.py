import numpy as np
import pytest

from branelab import deformation as dfm
from branelab import embeddings as emb
from branelab import jets
from branelab import models as mdl
from branelab import symplectic as sym
from branelab.errors import (
    DegenerateGeometryError,
    DomainError,
    ParameterError,
    UnsupportedConfigurationError,
)
from branelab.jets import jet_einsum


def torus_geometry(order, n=16):
    E = emb.torus_e3(2.0, 0.5)
    grid = emb.make_grid(E, n)
    return E.geometry(grid.mesh, order), grid


GENERIC_E3 = sym.chart_field(lambda u, v: (
    0.2 * jets.sin(v) + 0.1 * jets.cos(u),
    0.3 * jets.cos(u) - 0.1,
    0.15 + 0.2 * jets.sin(u) * jets.cos(v),
))

GENERIC_E4 = sym.chart_field(lambda u, v: (
    0.2 * jets.sin(u),
    0.1 * jets.cos(v) - 0.2,
    0.25 * jets.cos(u) * jets.sin(v),
    0.1 + 0.3 * jets.sin(v),
))


# -- potential kernels against closed forms ------------------------------------

def test_minimal_model_flux_is_tangential():
    """With a constant Lagrangian the only boundary term is L t^a."""
    E = emb.static_string(1.4)
    grid = emb.make_grid(E, (10, 16))
    geom = E.geometry(grid.mesh, 3)
    model = mdl.DNG(mu=1.3)
    V = GENERIC_E4(geom)
    field = sym.symplectic_potential(model, geom, V)
    t, _phi = dfm.decompose_vector(geom, V)
    dens = np.asarray(geom.sqrt_abs_det.value, float)
    expected = -1.3 * dens * np.asarray(t.value, float)
    np.testing.assert_allclose(field.values, expected, atol=1e-13)


def test_quadratic_potential_matches_closed_form():
    # for L = alpha K.K the kernel table collapses to
    #   Psi^a / sqrt(g) = alpha K.K t^a + 2 alpha (phi.grad^a K - K.grad^a phi)
    geom, _ = torus_geometry(4, n=12)
    alpha = 0.8
    model = mdl.QuadraticK(alpha=alpha)
    rng = np.random.default_rng(7)
    for _ in range(4):
        a, b, c = rng.uniform(-0.5, 0.5, size=3)

        def fn(u, v, a=a, b=b, c=c):
            return (a * jets.sin(u), b + c * jets.cos(v), a * b + 0.0 * u)

        V = sym.chart_field(fn)(geom)
        field = sym.symplectic_potential(model, geom, V)
        t, phi = dfm.decompose_vector(geom, V)
        ginv = geom.inverse_induced_metric
        K = geom.mean_curvature
        gradk_up = jet_einsum("ab...,bi...->ai...", ginv,
                              geom.covariant_grad(K, 0, 1))
        gphi_up = jet_einsum("ab...,bi...->ai...", ginv,
                             geom.covariant_grad(phi, 0, 1))
        ksq = jet_einsum("i...,i...->...", K, K)
        tang = jet_einsum("...,a...->a...", ksq, t)
        cross = jet_einsum("i...,ai...->a...", phi, gradk_up) \
            - jet_einsum("i...,ai...->a...", K, gphi_up)
        kernel = alpha * tang + (2.0 * alpha) * cross
        expected = np.asarray(
            jet_einsum("...,a...->a...", geom.sqrt_abs_det, kernel).value,
            float)
        np.testing.assert_allclose(field.values, expected, atol=5e-12)


def test_flat_sheet_normal_deformation_has_no_flux():
    # every kernel term carries at least one curvature factor
    E = emb.plane()
    grid = emb.make_grid(E, 8)
    geom = E.geometry(grid.mesh, 4)

    def normal(geom):
        phi = dfm.normal_field(
            geom, lambda u, v: jets.sin(u) * jets.cos(v) + 0.2 * u)
        return dfm.deformation_vector(geom, phi)

    field = sym.symplectic_potential(mdl.QuadraticK(alpha=0.8), geom, normal)
    np.testing.assert_allclose(field.values, 0.0, atol=1e-13)


def test_potential_linear_in_deformation():
    geom, _ = torus_geometry(7, n=10)
    model = mdl.SyntheticGradK(beta=0.6)
    w1 = GENERIC_E3(geom)
    w2 = sym.chart_field(
        lambda u, v: (0.1 * jets.cos(u + v), 0.3 * u, 0.2 * jets.sin(v)))(geom)
    lhs = sym.symplectic_potential(model, geom, 1.3 * w1 + 0.7 * w2).values
    p1 = sym.symplectic_potential(model, geom, w1).values
    p2 = sym.symplectic_potential(model, geom, w2).values
    np.testing.assert_allclose(lhs, 1.3 * p1 + 0.7 * p2, atol=1e-11)


# -- pointwise first-variation identity ---------------------------------------

IDENT_CASES = [
    (emb.torus_e3(2.0, 0.5), mdl.DNG(mu=1.3), GENERIC_E3, 16),
    (emb.torus_e3(2.0, 0.5), mdl.QuadraticK(alpha=0.8), GENERIC_E3, 16),
    (emb.torus_e3(2.0, 0.5), mdl.EinsteinHilbert(sigma1=1.1), GENERIC_E3, 16),
    (emb.torus_e3(2.0, 0.5), mdl.SyntheticGradK(beta=0.6), GENERIC_E3, 12),
    (emb.surface_s2xs2(), mdl.QuadraticK(alpha=0.8), GENERIC_E4, 12),
    (emb.surface_s2xs2(), mdl.SyntheticGradK(beta=0.6), GENERIC_E4, 10),
]


@pytest.mark.parametrize("E, model, vfield, n", IDENT_CASES,
                         ids=lambda c: getattr(c, "name", None))
def test_variation_identity_pointwise(E, model, vfield, n):
    """delta(density) must equal sqrt(g) E.phi + div(Psi) at every node."""
    grid = emb.make_grid(E, n)
    geom = E.geometry(grid.mesh, model.jet_order + 1)
    res, num = sym.variation_identity_residual(model, geom, vfield)
    scale = np.max(np.abs(num))
    assert scale > 1e-3
    assert np.max(np.abs(res)) / scale < 1e-9


# -- the current and its slice integrals --------------------------------------

def zmode(fn):
    return sym.chart_field(lambda t, s: (0.0 * t, 0.0 * t, 0.0 * t, fn(t, s)))


FZ1 = zmode(lambda t, s: jets.sin(s) * jets.cos(t))
FZ2 = zmode(lambda t, s: jets.sin(s) * jets.sin(t))
FZ3 = zmode(lambda t, s: 0.3 * jets.sin(2 * s) * jets.cos(2 * t))

FRAD1 = sym.chart_field(lambda t, s: (
    0.0 * t,
    (0.2 + 0.1 * jets.sin(t)) * jets.cos(s),
    (0.2 + 0.1 * jets.sin(t)) * jets.sin(s),
    0.0 * t,
))
FRAD2 = sym.chart_field(lambda t, s: (
    0.0 * t,
    (0.3 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.cos(s),
    (0.3 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.sin(s),
    0.0 * t,
))


def tangential_string_field(geom):
    t, s = geom.params
    comp = jets.jet_stack(
        [0.2 + 0.1 * jets.sin(s), -0.3 + 0.1 * jets.cos(t)],
        template=geom.X)
    return jet_einsum("am...,a...->m...", geom.tangents, comp)


def test_current_antisymmetry():
    E = emb.static_string(1.0)
    grid = emb.make_grid(E, (6, 12))
    geom = E.geometry(grid.mesh, 3)
    model = mdl.DNG(mu=1.0)
    j12 = sym.symplectic_current(model, geom, FZ1, FRAD1)
    j21 = sym.symplectic_current(model, geom, FRAD1, FZ1)
    np.testing.assert_allclose(j12, -j21, atol=1e-15)
    jself = sym.symplectic_current(model, geom, FZ1, FZ1)
    np.testing.assert_allclose(jself, 0.0, atol=1e-15)


def test_static_string_current_time_component():
    """Transverse waves reproduce the Klein-Gordon style current density."""
    E = emb.static_string(1.0)
    grid = emb.make_grid(E, (10, 24))
    geom = E.geometry(grid.mesh, 3)
    J = sym.symplectic_current(mdl.DNG(mu=1.0), geom, FZ1, FZ2)
    tmesh, smesh = grid.mesh
    # phi1 d_t phi2 - phi2 d_t phi1 with the unit radius collapses to sin^2
    np.testing.assert_allclose(J[0], np.sin(smesh) ** 2, atol=1e-12)


def test_form_constant_on_slices():
    E = emb.static_string(1.0)
    model = mdl.DNG(mu=1.0)
    vals = [sym.symplectic_form(model, E, sym.CauchySlice("tau", tv, 256),
                                FZ1, FZ2)
            for tv in (0.3, 1.1, 2.0)]
    for v in vals:
        assert abs(v - np.pi) < 1e-9
    assert max(vals) - min(vals) < 1e-12


def test_form_antisymmetric_and_homogeneous():
    E = emb.static_string(1.0)
    model = mdl.DNG(mu=1.0)
    slc = sym.CauchySlice("tau", 0.7, 96)
    w12 = sym.symplectic_form(model, E, slc, FZ1, FRAD2)
    w21 = sym.symplectic_form(model, E, slc, FRAD2, FZ1)
    assert abs(w12 + w21) < 1e-14
    assert sym.symplectic_form(model, E, slc, FZ1, FZ1) == 0.0
    half = sym.symplectic_form(
        model, E, slc, lambda g: 0.5 * FZ1(g), FRAD2)
    np.testing.assert_allclose(half, 0.5 * w12, rtol=1e-8)


def test_traveling_wave_form_conserved():
    # differences of nearby left-movers solve the linearized equations
    # exactly, so the slice integral cannot depend on the slice
    E = emb.traveling_wave(0.3)
    model = mdl.DNG(mu=1.0)
    g1 = sym.chart_field(
        lambda t, s: (0.0 * t, 0.0 * t, 0.2 * jets.cos(s - t)))
    g2 = sym.chart_field(
        lambda t, s: (0.0 * t, 0.0 * t, 0.2 * jets.sin(s - t)))
    vals = [sym.symplectic_form(model, E, sym.CauchySlice("tau", tv, 128),
                                g1, g2)
            for tv in (0.3, 1.1, 2.0)]
    assert abs(vals[0]) > 1e-3
    assert max(vals) - min(vals) < 1e-8


# -- canonical variables -------------------------------------------------------

TRANSVERSE_PAIRS = [
    ("z-waves", FZ1, FZ2),
    ("radial", FRAD1, FRAD2),
    ("z-then-radial", FZ1, FRAD2),
    ("radial-then-z", FRAD1, FZ2),
    ("second-harmonic", FZ3, FZ1),
]


@pytest.mark.parametrize("label, f1, f2", TRANSVERSE_PAIRS,
                         ids=[p[0] for p in TRANSVERSE_PAIRS])
def test_form_equals_canonical_pairing(label, f1, f2):
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 160)
    w = sym.symplectic_form(mdl.DNG(mu=1.0), E, slc, f1, f2)
    p = sym.dng_canonical_pairing(E, slc, f1, f2, sigma0=1.0)
    assert abs(w - p) < 1e-9


def test_tangential_deformations_drop_out():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 96)
    w = sym.symplectic_form(mdl.DNG(mu=1.0), E, slc,
                            tangential_string_field, FZ1)
    p = sym.dng_canonical_pairing(E, slc, tangential_string_field, FZ1,
                                  sigma0=1.0)
    assert abs(w) < 1e-10
    assert abs(p) < 1e-10


def test_canonical_pair_on_static_string():
    r, sig = 1.4, 2.0
    n = 32
    pair = sym.dng_canonical_pair(emb.static_string(r),
                                  sym.CauchySlice("tau", 0.7, n), sig)
    s = 2 * np.pi * np.arange(n) / n
    np.testing.assert_allclose(pair.position[0], 0.7, atol=1e-14)
    np.testing.assert_allclose(pair.position[1], r * np.cos(s), atol=1e-13)
    np.testing.assert_allclose(pair.position[2], r * np.sin(s), atol=1e-13)
    # momentum density sigma0 sqrt(-g) tau_alpha = sigma0 r (-1, 0, 0, 0)
    np.testing.assert_allclose(pair.momentum[0], -sig * r, atol=1e-13)
    np.testing.assert_allclose(pair.momentum[1:], 0.0, atol=1e-13)


def test_mass_shell_residuals():
    slc = sym.CauchySlice("tau", 0.9, 64)
    res = sym.mass_shell_check(emb.static_string(1.0), slc, sigma0=2.0)
    np.testing.assert_allclose(res, 0.0, atol=1e-14)
    res = sym.mass_shell_check(emb.traveling_wave(0.3), slc, sigma0=1.7)
    assert np.max(np.abs(res)) < 1e-10
    res = sym.mass_shell_check(emb.static_string(1.0), slc, sigma0=0.0)
    np.testing.assert_allclose(res, 0.0, atol=0.0)


def test_mass_shell_rejects_spacelike_slicing():
    sideways = emb.Embedding(
        name="sideways-sheet",
        background=emb.minkowski(3),
        axes=(emb.ParamAxis("tau", 0.0, 2.5),
              emb.ParamAxis("sigma", 0.0, 2 * np.pi, periodic=True)),
        map_fn=lambda u, v: (v, u, 0.0 * u),
    )
    with pytest.raises(DegenerateGeometryError):
        sym.mass_shell_check(sideways, sym.CauchySlice("tau", 0.9, 16), 1.0)


def test_slice_validation():
    E = emb.static_string(1.0)
    with pytest.raises(DomainError):
        sym.symplectic_form(mdl.DNG(mu=1.0), E,
                            sym.CauchySlice("tau", 3.0, 16), FZ1, FZ2)
    with pytest.raises(ParameterError):
        sym.CauchySlice("lambda", 0.5, 16).axis_index(E)
    with pytest.raises(UnsupportedConfigurationError):
        sym.mass_shell_check(emb.s3_curve(), sym.CauchySlice("xi", 0.5, 16),
                             1.0)
