import numpy as np
import pytest

from branelab import embeddings as emb
from branelab import jets
from branelab import models as mdl
from branelab import strings_gb as sgb
from branelab import symplectic as sym
from branelab.errors import (
    DegenerateGeometryError,
    ParameterError,
    PreconditionError,
    UnsupportedConfigurationError,
)


def string_geometry(n=(8, 20), order=4, radius=1.0):
    E = emb.static_string(radius)
    grid = emb.make_grid(E, n)
    return E.geometry(grid.mesh, order), grid


def frame_dots(geom, frame):
    g = np.asarray(geom.ambient_metric.value, float)
    i0 = np.asarray(frame.iota0.value, float)
    i1 = np.asarray(frame.iota1.value, float)
    d00 = np.einsum("mn...,m...,n...->...", g, i0, i0)
    d11 = np.einsum("mn...,m...,n...->...", g, i1, i1)
    d01 = np.einsum("mn...,m...,n...->...", g, i0, i1)
    return d00, d11, d01


RADIAL = sym.chart_field(lambda t, s: (
    0.0 * t,
    (0.2 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.cos(s),
    (0.2 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.sin(s),
    0.0 * t,
))

ZMODE = sym.chart_field(lambda t, s: (
    0.0 * t, 0.0 * t, 0.0 * t, jets.sin(s) * jets.cos(t)))

TIMEMODE = sym.chart_field(lambda t, s: (
    0.2 * jets.sin(2 * s) * jets.cos(t), 0.0 * t, 0.0 * t, 0.0 * t))

MATCHED_RADIAL = sym.chart_field(lambda t, s: (
    0.0 * t,
    0.2 * jets.sin(2 * s) * jets.sin(t) * jets.cos(s),
    0.2 * jets.sin(2 * s) * jets.sin(t) * jets.sin(s),
    0.0 * t,
))


def gauge_angle(t, s):
    return 0.4 * jets.sin(s) - 0.2 * jets.cos(t)


# -- tangent frames ------------------------------------------------------------

@pytest.mark.parametrize("builder, theta", [
    (emb.static_string, None),
    (emb.static_string, 0.7),
    (emb.traveling_wave, None),
    (emb.traveling_wave, gauge_angle),
])
def test_frame_orthonormal(builder, theta):
    E = builder()
    geom = E.geometry(emb.make_grid(E, (8, 20)).mesh, 3)
    fr = sgb.tangent_frame(geom, theta)
    d00, d11, d01 = frame_dots(geom, fr)
    np.testing.assert_allclose(d00, -1.0, atol=1e-10)
    np.testing.assert_allclose(d11, 1.0, atol=1e-10)
    np.testing.assert_allclose(d01, 0.0, atol=1e-10)
    eps = np.asarray(fr.epsilon.value, float)
    np.testing.assert_allclose(eps, -np.swapaxes(eps, 0, 1), atol=1e-15)


def test_static_frame_components():
    geom, grid = string_geometry()
    fr = sgb.tangent_frame(geom)
    _t, s = grid.mesh
    i0 = np.asarray(fr.iota0.value, float)
    i1 = np.asarray(fr.iota1.value, float)
    np.testing.assert_allclose(i0[0], 1.0, atol=1e-14)
    np.testing.assert_allclose(i0[1:], 0.0, atol=1e-14)
    np.testing.assert_allclose(i1[1], -np.sin(s), atol=1e-14)
    np.testing.assert_allclose(i1[2], np.cos(s), atol=1e-14)


def test_boost_mixes_legs_but_fixes_epsilon():
    geom, _ = string_geometry()
    fr = sgb.tangent_frame(geom)
    frb = sgb.tangent_frame(geom, 0.7)
    i0 = np.asarray(fr.iota0.value, float)
    i0b = np.asarray(frb.iota0.value, float)
    assert np.max(np.abs(i0b - i0)) > 0.1
    np.testing.assert_allclose(
        np.asarray(frb.epsilon.value, float),
        np.asarray(fr.epsilon.value, float), atol=1e-14)


def test_riemannian_surrogate_rotation():
    E = emb.sphere_polar(1.0)
    geom = E.geometry(emb.make_grid(E, 16).mesh, 3)
    fr = sgb.tangent_frame(geom, 0.5)
    d00, d11, d01 = frame_dots(geom, fr)
    np.testing.assert_allclose(d00, 1.0, atol=1e-12)
    np.testing.assert_allclose(d11, 1.0, atol=1e-12)
    np.testing.assert_allclose(d01, 0.0, atol=1e-12)
    np.testing.assert_allclose(
        np.asarray(fr.epsilon.value, float),
        np.asarray(sgb.tangent_frame(geom).epsilon.value, float), atol=1e-14)


def test_frame_rejects_spacelike_seed():
    sideways = emb.Embedding(
        name="sideways-sheet",
        background=emb.minkowski(3),
        axes=(emb.ParamAxis("tau", 0.0, 2.5),
              emb.ParamAxis("sigma", 0.0, 2 * np.pi, periodic=True)),
        map_fn=lambda u, v: (v, u, 0.0 * u),
    )
    geom = sideways.geometry(emb.make_grid(sideways, (6, 8)).mesh, 3)
    with pytest.raises(DegenerateGeometryError):
        sgb.tangent_frame(geom)


def test_frame_needs_two_axes():
    E = emb.s3_curve()
    geom = E.geometry(emb.make_grid(E, 12).mesh, 3)
    with pytest.raises(UnsupportedConfigurationError):
        sgb.tangent_frame(geom)


# -- rotation connection -------------------------------------------------------

def test_connection_vanishes_on_static_string():
    geom, _ = string_geometry()
    rho = sgb.rotation_connection(geom)
    np.testing.assert_allclose(rho.values, 0.0, atol=1e-15)


def test_gauge_angle_shifts_connection_by_gradient():
    geom, grid = string_geometry()
    tm, sm = grid.mesh
    rho0 = sgb.rotation_connection(geom)
    rho1 = sgb.rotation_connection(
        geom, lambda t, s: 0.3 * jets.sin(s) + 0.1 * jets.cos(t))
    shift = rho1.values - rho0.values
    np.testing.assert_allclose(shift[0], 0.1 * np.sin(tm), atol=1e-13)
    np.testing.assert_allclose(shift[1], -0.3 * np.cos(sm), atol=1e-13)


def test_connection_curl_is_curvature_density():
    # the sign anchor: d rho equals sqrt(g) R / 2 pointwise
    E = emb.sphere_polar(1.0)
    grid = emb.make_grid(E, 48)
    geom = E.geometry(grid.mesh, 3)
    curl = sgb.rotation_connection(geom).curl()
    half_density = np.asarray(
        (geom.sqrt_abs_det * geom.intrinsic_scalar_curvature).value,
        float) / 2.0
    np.testing.assert_allclose(curl, half_density, atol=1e-12)
    assert abs(emb.integrate(curl, grid) - 4 * np.pi) < 5e-3


def test_connection_response_sectors():
    geom, _ = string_geometry()
    dr_rad = sgb.rotation_connection_delta(geom, RADIAL)
    assert np.max(np.abs(dr_rad)) > 1e-2
    # zero-curvature normal direction and pure reparameterizations leave
    # the induced geometry unchanged at first order
    dr_z = sgb.rotation_connection_delta(geom, ZMODE)
    np.testing.assert_allclose(dr_z, 0.0, atol=1e-12)
    dr_t = sgb.rotation_connection_delta(geom, TIMEMODE)
    np.testing.assert_allclose(dr_t, 0.0, atol=1e-12)


def test_connection_response_gauge_invariant():
    geom, _ = string_geometry()
    dr = sgb.rotation_connection_delta(geom, RADIAL)
    dr_g = sgb.rotation_connection_delta(geom, RADIAL, theta=gauge_angle)
    np.testing.assert_allclose(dr, dr_g, atol=1e-10)


# -- curvature flux ------------------------------------------------------------

def test_gb_potential_zero_response():
    geom, _ = string_geometry()
    drho = np.zeros((2,) + geom.grid_shape)
    np.testing.assert_allclose(
        sgb.gb_potential(geom, None, drho, 0.9), 0.0, atol=0.0)


def test_gb_potential_nonzero_and_gauge_invariant():
    geom, _ = string_geometry()
    drho = sgb.rotation_connection_delta(geom, RADIAL)
    psi = sgb.gb_potential(geom, None, drho, sigma1=0.9)
    assert np.max(np.abs(psi)) > 1e-2
    drho_g = sgb.rotation_connection_delta(geom, RADIAL, theta=gauge_angle)
    psi_g = sgb.gb_potential(geom, gauge_angle, drho_g, sigma1=0.9)
    np.testing.assert_allclose(psi, psi_g, atol=1e-10)


def test_gb_canonical_static_string():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 48)
    pair = sgb.gb_canonical(E, slc, sigma1=0.9)
    s = 2 * np.pi * np.arange(48) / 48
    np.testing.assert_allclose(pair.position, 0.0, atol=1e-14)
    # p_nu = -sigma1 sqrt(-g) (iota1)_nu picks the orthogonal tangent leg
    np.testing.assert_allclose(pair.momentum[1], 0.9 * np.sin(s), atol=1e-13)
    np.testing.assert_allclose(pair.momentum[2], -0.9 * np.cos(s), atol=1e-13)
    np.testing.assert_allclose(pair.momentum[[0, 3]], 0.0, atol=1e-14)
    boosted = sgb.gb_canonical(E, slc, sigma1=0.9, theta=0.6)
    np.testing.assert_allclose(boosted.position, 0.0, atol=1e-14)
    zero = sgb.gb_canonical(E, slc, sigma1=0.0)
    np.testing.assert_allclose(zero.momentum, 0.0, atol=0.0)


def test_gb_form_needs_time_sector():
    # chart components of the flux use the bare permutation symbol, so
    # commuting second variations cancel; only frame-leg variations with
    # an ambient time component survive
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 48)
    w_spatial = sgb.gb_symplectic_form(E, slc, RADIAL, MATCHED_RADIAL, 0.9)
    assert abs(w_spatial) < 1e-10
    w = sgb.gb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL, 0.9)
    assert abs(w) > 1e-3
    w_g = sgb.gb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL, 0.9,
                                 theta=gauge_angle)
    assert abs(w - w_g) < 1e-10


# -- combined system -----------------------------------------------------------

def test_combined_eom_is_mean_curvature():
    E = emb.traveling_wave(0.3)
    res = sgb.dnggb_eom_residual(E, emb.make_grid(E, 48))
    assert np.max(np.abs(res)) < 1e-8
    S = emb.sphere_polar(0.5)
    res = sgb.dnggb_eom_residual(S, emb.make_grid(S, 24))
    norms = np.sqrt(np.einsum("m...,m...->...", res, res))
    np.testing.assert_allclose(norms, 4.0, atol=1e-10)
    P = emb.plane()
    res = sgb.dnggb_eom_residual(P, emb.make_grid(P, 8))
    np.testing.assert_allclose(res, 0.0, atol=1e-14)


@pytest.mark.parametrize("vfield", [ZMODE, RADIAL, TIMEMODE],
                         ids=["z-mode", "radial", "time"])
def test_combined_potential_decomposes(vfield):
    geom, _ = string_geometry()
    V = vfield(geom)
    total = sgb.dnggb_potential(geom, V, sigma0=1.2, sigma1=0.9)
    sheet = sym.symplectic_potential(mdl.DNG(mu=1.2), geom, V)
    push = np.einsum("am...,a...->m...",
                     np.asarray(geom.tangents.value, float), sheet.values)
    drho = sgb.rotation_connection_delta(geom, V)
    gb = sgb.gb_potential(geom, None, drho, 0.9)
    np.testing.assert_allclose(total, push + gb, atol=1e-12)


def test_combined_pair_reduces_to_minimal_pair():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 48)
    red = sgb.dnggb_canonical(E, slc, sigma0=1.2, sigma1=0.0)
    ref = sym.dng_canonical_pair(E, slc, 1.2)
    np.testing.assert_allclose(red.position, ref.position, atol=1e-12)
    np.testing.assert_allclose(red.momentum, ref.momentum, atol=1e-12)


def test_combined_pair_gauge_response():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 48)
    base = sgb.dnggb_canonical(E, slc, sigma0=1.2, sigma1=0.9)
    np.testing.assert_allclose(base.position,
                               sym.dng_canonical_pair(E, slc, 1.2).position,
                               atol=1e-14)
    shifted = sgb.dnggb_canonical(E, slc, sigma0=1.2, sigma1=0.9,
                                  theta=lambda t, s: 0.3 * jets.sin(s))
    s = 2 * np.pi * np.arange(48) / 48
    dq = shifted.position - base.position
    # rho = -d theta, and eps contracts it onto the timelike leg
    np.testing.assert_allclose(dq[0], (0.9 / 1.2) * 0.3 * np.cos(s),
                               atol=1e-12)
    np.testing.assert_allclose(dq[1:], 0.0, atol=1e-12)
    np.testing.assert_allclose(shifted.momentum, base.momentum, atol=1e-14)


def test_combined_pair_needs_tension():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 16)
    with pytest.raises(ParameterError):
        sgb.dnggb_canonical(E, slc, sigma0=0.0, sigma1=0.9)


def test_combined_form_reduction_and_split():
    E = emb.static_string(1.0)
    slc = sym.CauchySlice("tau", 0.9, 48)
    w_red = sgb.dnggb_symplectic_form(E, slc, RADIAL, MATCHED_RADIAL,
                                      sigma0=1.2, sigma1=0.0)
    w_dng = sym.symplectic_form(mdl.DNG(mu=1.2), E, slc,
                                RADIAL, MATCHED_RADIAL)
    assert abs(w_red - w_dng) < 1e-9
    # the curvature contribution matches the stand-alone flux form
    w_full = sgb.dnggb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL,
                                       sigma0=1.2, sigma1=0.9)
    w_zero = sgb.dnggb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL,
                                       sigma0=1.2, sigma1=0.0)
    w_gb = sgb.gb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL, 0.9)
    assert abs((w_full - w_zero) - w_gb) < 1e-9
    w_gauge = sgb.dnggb_symplectic_form(E, slc, TIMEMODE, MATCHED_RADIAL,
                                        sigma0=1.2, sigma1=0.9,
                                        theta=gauge_angle)
    assert abs(w_full - w_gauge) < 1e-10


# -- topology and the 2d identity ----------------------------------------------

def test_euler_characteristic_values():
    assert abs(sgb.euler_characteristic(emb.sphere_polar(1.0), 128) - 2.0) \
        < 2e-3
    assert abs(sgb.euler_characteristic(emb.flat_torus_e4(), 64)) < 1e-6
    assert abs(sgb.euler_characteristic(emb.bumpy_torus_e4(), 96)) < 1e-3


def test_euler_characteristic_rejects_open_surfaces():
    with pytest.raises(PreconditionError):
        sgb.euler_characteristic(emb.plane(), 16)
    with pytest.raises(PreconditionError):
        sgb.euler_characteristic(emb.static_string(1.0), 16)
    with pytest.raises(UnsupportedConfigurationError):
        sgb.euler_characteristic(emb.s3_curve(), 16)


@pytest.mark.parametrize("builder, n", [
    (emb.traveling_wave, 128),
    (emb.sphere_polar, 64),
    (emb.surface_s2xs2, 32),
])
def test_two_d_einstein_identity(builder, n):
    E = builder()
    res = sgb.two_d_einstein_identity(E, emb.make_grid(E, n))
    assert res < 1e-6


def test_two_d_einstein_identity_flat_plane():
    E = emb.plane()
    assert sgb.two_d_einstein_identity(E, emb.make_grid(E, 8)) < 1e-15
