"""Command-line scenario runner for the verification suite.

Each scenario wires a small number of library calls into named checks
with pinned tolerances and renders a deterministic plain-text report:
identical configuration gives a byte-identical report body (the trailing
duration line is the only nondeterministic field).

Exit status: 0 when every check passes, 1 when any check fails, 2 for
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import conventions
from . import deformation as dfm
from . import embeddings as emb
from . import jets
from . import models as mdl
from . import strings_gb as sgb
from . import symplectic as sym
from .errors import BranelabError


class ConfigError(Exception):
    """Bad scenario configuration; maps to exit status 2."""


# -- registries ----------------------------------------------------------------

EMBEDDINGS = {
    "plane": (emb.plane, ("size",)),
    "sphere": (emb.sphere_polar, ("radius",)),
    "cylinder": (emb.cylinder, ("radius", "height")),
    "ellipsoid": (emb.ellipsoid, ("ax", "ay", "az")),
    "torus": (emb.torus_e3, ("big_radius", "small_radius")),
    "flat-torus": (emb.flat_torus_e4, ("r1", "r2")),
    "bumpy-torus": (emb.bumpy_torus_e4, ("r1", "r2", "amp")),
    "graph-surface": (emb.graph_surface_e4, ("f_amp", "g_amp")),
    "perturbed-sphere": (emb.perturbed_sphere, ("radius", "amp")),
    "static-string": (emb.static_string, ("radius",)),
    "traveling-wave": (emb.traveling_wave, ("amplitude",)),
    "s2xs2": (emb.surface_s2xs2, ("r1", "r2")),
    "s3-curve": (emb.s3_curve, ("chi0", "theta0", "a", "b", "radius")),
}

MODELS = {
    "dng": (mdl.DNG, ("mu",)),
    "quadratic-k": (mdl.QuadraticK, ("alpha",)),
    "einstein-hilbert": (mdl.EinsteinHilbert, ("sigma1",)),
    "synthetic-gradk": (mdl.SyntheticGradK, ("beta",)),
}

COUPLING_KEYS = ("mu", "alpha", "beta", "sigma0", "sigma1")

EULER_NUMBERS = {
    "sphere": 2.0,
    "perturbed-sphere": 2.0,
    "torus": 0.0,
    "flat-torus": 0.0,
    "bumpy-torus": 0.0,
}


# -- configuration -------------------------------------------------------------

@dataclass
class ScenarioConfig:
    scenario: str
    embedding: str
    emb_params: dict = field(default_factory=dict)
    model: str | None = None
    couplings: dict = field(default_factory=dict)
    grid: tuple = ()
    eps: tuple = dfm.EPS_SCHEDULE
    tol: float | None = None
    seed: int = 7
    slices: tuple = ()
    trials: int = 4

    def build_embedding(self):
        factory, names = EMBEDDINGS[self.embedding]
        bad = sorted(set(self.emb_params) - set(names))
        if bad:
            raise ConfigError(
                f"embedding '{self.embedding}' does not take {', '.join(bad)}"
            )
        return factory(**self.emb_params)

    def build_model(self):
        if self.model is None:
            return None
        cls, names = MODELS[self.model]
        args = {k: v for k, v in self.couplings.items() if k in names}
        return cls(**args)

    def coupling(self, name, default):
        return float(self.couplings.get(name, default))


@dataclass
class Check:
    name: str
    computed: float
    expected: object
    tol: float
    source: str

    @property
    def passed(self) -> bool:
        if self.expected == "nonzero":
            return abs(self.computed) > self.tol
        return abs(self.computed - float(self.expected)) <= self.tol

    def render(self) -> str:
        exp = self.expected if isinstance(self.expected, str) \
            else repr(float(self.expected))
        flag = "true" if self.passed else "false"
        return (f"check: name={self.name} computed={self.computed!r} "
                f"expected={exp} tol={self.tol!r} source={self.source} "
                f"pass={flag}")


@dataclass
class Report:
    header: list
    notes: list
    checks: list
    duration: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def body(self) -> str:
        lines = [f"{k}: {v}" for k, v in self.header]
        lines += [f"note: {k}={v}" for k, v in self.notes]
        lines += [c.render() for c in self.checks]
        lines.append(f"result: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        return self.body() + f"duration-s: {self.duration:.3f}\n"


def _conventions_line() -> str:
    return ("signature=-+++ extrinsic-sign=-1 "
            f"twist-curvature={conventions.S_DOMEGA_K:+.0f} "
            f"twist-riemann={conventions.S_DOMEGA_R:+.0f}")


# -- deterministic deformation fields -------------------------------------------

def _zwave(fn):
    return sym.chart_field(
        lambda t, s: (0.0 * t, 0.0 * t, 0.0 * t, fn(t, s)))


WAVE_PAIRS = [
    ("z-waves",
     _zwave(lambda t, s: jets.sin(s) * jets.cos(t)),
     _zwave(lambda t, s: jets.sin(s) * jets.sin(t))),
    ("radial",
     sym.chart_field(lambda t, s: (
         0.0 * t,
         (0.2 + 0.1 * jets.sin(t)) * jets.cos(s),
         (0.2 + 0.1 * jets.sin(t)) * jets.sin(s),
         0.0 * t)),
     sym.chart_field(lambda t, s: (
         0.0 * t,
         (0.3 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.cos(s),
         (0.3 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.sin(s),
         0.0 * t))),
    ("second-harmonic",
     _zwave(lambda t, s: 0.3 * jets.sin(2 * s) * jets.cos(2 * t)),
     _zwave(lambda t, s: jets.sin(s) * jets.cos(t))),
]

LEFT_MOVERS = (
    sym.chart_field(lambda t, s: (0.0 * t, 0.0 * t, 0.2 * jets.cos(s - t))),
    sym.chart_field(lambda t, s: (0.0 * t, 0.0 * t, 0.2 * jets.sin(s - t))),
)

RADIAL_WAVE = sym.chart_field(lambda t, s: (
    0.0 * t,
    (0.2 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.cos(s),
    (0.2 * jets.cos(t) + 0.1 * jets.sin(2 * s)) * jets.sin(s),
    0.0 * t))


def _gauge_angle(t, s):
    return 0.4 * jets.sin(s) - 0.2 * jets.cos(t)


def _tangential_string_field(geom):
    t, s = geom.params
    comp = jets.jet_stack(
        [0.2 + 0.1 * jets.sin(s), -0.3 + 0.1 * jets.cos(t)],
        template=geom.X)
    return jets.jet_einsum("am...,a...->m...", geom.tangents, comp)


def _windowed_field(geom):
    """Boundary-localized two-sided window times a generic normal profile."""
    wins = []
    for k, p in enumerate(geom.params):
        ax = geom.embedding.axes[k]
        if ax.periodic:
            continue
        mid, half = 0.5 * (ax.hi + ax.lo), 0.5 * (ax.hi - ax.lo)
        wins.append(dfm.poly_window((p - mid) * (1.0 / half)))
    fns = [
        lambda *ps: 0.4 + 0.3 * jets.sin(ps[0]) + 0.2 * jets.cos(ps[-1]),
        lambda *ps: 0.1 - 0.2 * jets.sin(ps[-1]) + 0.3 * jets.cos(ps[0]),
    ]
    phi = dfm.normal_field(geom,
                           *[fns[k % 2] for k in range(geom.codim)])
    for w in wins:
        phi = w * phi
    return dfm.deformation_vector(geom, phi)


# -- scenario runners -----------------------------------------------------------

def _grid(cfg, E, default):
    shape = cfg.grid or default
    if len(shape) == 1:
        shape = shape[0]
    return emb.make_grid(E, shape)


def _slice_nodes(cfg, default_n):
    return cfg.grid[0] if cfg.grid else default_n


def _coord_columns(grid):
    names = [f"param{k}" for k in range(len(grid.mesh))]
    cols = [np.ravel(m) for m in np.broadcast_arrays(*grid.mesh)] \
        if len(grid.mesh) > 1 else [np.ravel(grid.mesh[0])]
    return names, cols


def run_eom_check(cfg):
    E = cfg.build_embedding()
    model = cfg.build_model() or mdl.DNG(mu=1.0)
    grid = _grid(cfg, E, (48, 48))
    res = mdl.eom_residual(model, E, grid)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    checks = [Check("field-equation-residual", float(res.max_abs()), 0.0,
                    tol, "extremal-surface")]
    names, cols = _coord_columns(grid)
    norm = np.sqrt(np.einsum("i...,i...->...", res.values, res.values))
    fields = (names + ["residual-norm"], cols + [np.ravel(norm)])
    return checks, [("model", model.name)], fields


def run_deformation_oracle(cfg):
    """One random interior chart point and one random normal field per
    trial, batched along a single point axis.  Non-periodic axes are
    sampled away from their ends, where chart degeneracy (poles) makes the
    finite-difference side ill-conditioned; the formulas themselves are
    pointwise."""
    E = cfg.build_embedding()
    rng = np.random.default_rng(cfg.seed)
    pts = []
    for ax in E.axes:
        span = ax.hi - ax.lo
        lo = ax.lo if ax.periodic else ax.lo + 0.12 * span
        hi = ax.hi if ax.periodic else ax.hi - 0.12 * span
        pts.append(rng.uniform(lo, hi, cfg.trials))
    coefs = rng.uniform(-0.6, 0.6, size=(E.codim, 4, cfg.trials))

    def maker(row):
        a, b, c, d = row

        def fn(*ps):
            out = a + b * jets.sin(ps[0] + c)
            if len(ps) > 1:
                out = out + d * jets.cos(ps[1] - c)
            return out
        return fn

    tol = cfg.tol if cfg.tol is not None else max(1e-6,
                                                  10.0 * min(cfg.eps) ** 2)
    checks = []
    gap_cols = []
    for name, order in (("k_squared", 3), ("k_dot_k", 3), ("gradk_full", 4)):
        geom = E.geometry(pts, order + 1)
        phi = dfm.normal_field(geom, *[maker(row) for row in coefs])
        V = dfm.deformation_vector(geom, phi)
        pred = np.asarray(
            dfm.predicted_delta_scalar(geom, phi, name).value, float)
        got = dfm.finite_difference_delta(
            geom, V,
            lambda g2: np.asarray(dfm.scalar_invariant(g2, name).value,
                                  float),
            cfg.eps)
        gaps = np.abs(np.asarray(got.estimate, float) - pred)
        checks.append(Check(f"{name}-max-gap", float(np.max(gaps)), 0.0, tol,
                            "chain-rule-oracle"))
        checks.append(Check(f"{name}-convergence",
                            float(np.nanmedian(got.convergence_ratio())),
                            4.0, 2.0, "difference-ratio"))
        gap_cols.append((f"{name}-gap", gaps))
    names = [f"param{k}" for k in range(E.dim)] + [n for n, _g in gap_cols]
    cols = pts + [g for _n, g in gap_cols]
    return checks, [("trials", cfg.trials), ("seed", cfg.seed)], \
        (names, cols)


def run_action_variation(cfg):
    E = cfg.build_embedding()
    model = cfg.build_model() or mdl.QuadraticK(alpha=0.8)
    grid = _grid(cfg, E, (24, 24))
    rep = mdl.action_variation_check(model, E, grid, _windowed_field,
                                     eps_list=cfg.eps)
    tol = cfg.tol if cfg.tol is not None else rep.tolerance()
    checks = [Check("first-variation-gap", float(rep.gap), 0.0, tol,
                    "finite-difference-oracle")]
    notes = [("model", model.name),
             ("numeric", repr(float(rep.numeric))),
             ("assembled", repr(float(rep.assembled)))]
    geom = E.geometry(grid.mesh, model.jet_order)
    V = _windowed_field(geom)
    _t, phi = dfm.decompose_vector(geom, V)
    dens = mdl.eom_residual(model, geom)
    integrand = np.einsum(
        "i...,i...->...", dens.raw, np.asarray(phi.value, float))
    integrand = integrand * np.asarray(geom.sqrt_abs_det.value, float)
    names, cols = _coord_columns(grid)
    return checks, notes, (names + ["variation-density"],
                           cols + [np.ravel(integrand)])


def run_gauss_bonnet(cfg):
    E = cfg.build_embedding()
    if cfg.embedding not in EULER_NUMBERS:
        raise ConfigError(
            f"no pinned Euler number for embedding '{cfg.embedding}'"
        )
    n = cfg.grid[0] if cfg.grid else 128
    chi = sgb.euler_characteristic(E, n)
    tol = cfg.tol if cfg.tol is not None else 1e-3
    checks = [Check("euler-characteristic", chi,
                    EULER_NUMBERS[cfg.embedding], tol, "topological")]
    grid = emb.make_grid(E, n)
    geom = E.geometry(grid.mesh, 3)
    dens = np.asarray(
        (geom.sqrt_abs_det * geom.intrinsic_scalar_curvature).value, float)
    names, cols = _coord_columns(grid)
    return checks, [("nodes", n)], (names + ["curvature-density"],
                                    cols + [np.ravel(dens)])


def _conservation_setup(cfg):
    E = cfg.build_embedding()
    if cfg.embedding == "static-string":
        f1, f2 = WAVE_PAIRS[0][1], WAVE_PAIRS[0][2]
    elif cfg.embedding == "traveling-wave":
        f1, f2 = LEFT_MOVERS
    else:
        raise ConfigError(
            "symplectic-conservation runs on static-string or traveling-wave"
        )
    return E, f1, f2


def run_symplectic_conservation(cfg):
    E, f1, f2 = _conservation_setup(cfg)
    model = cfg.build_model() or mdl.DNG(mu=1.0)
    n = _slice_nodes(cfg, 256)
    slices = cfg.slices or (0.3, 1.1, 2.0)
    tol = cfg.tol if cfg.tol is not None else 1e-6
    vals = [sym.symplectic_form(model, E, sym.CauchySlice("tau", tv, n),
                                f1, f2, eps_list=cfg.eps)
            for tv in slices]
    checks = [Check("slice-independence", max(vals) - min(vals), 0.0, tol,
                    "conserved-current")]
    if cfg.embedding == "static-string" and isinstance(model, mdl.DNG):
        checks.append(Check("wave-pair-form", vals[0], model.mu * np.pi,
                            tol, "separable-wave-closed-form"))
    notes = [("model", model.name), ("slices", ",".join(repr(v)
                                                        for v in slices))]
    geom, grid, k = sym._slice_geometry(E, sym.CauchySlice(
        "tau", slices[0], n), model.jet_order + 1)
    J = sym.symplectic_current(model, geom, f1, f2, cfg.eps)
    names, cols = _coord_columns(grid)
    return checks, notes, (names + ["current-density"],
                           cols + [np.ravel(J[k])])


def run_canonical_darboux(cfg):
    if cfg.embedding != "static-string":
        raise ConfigError("canonical-darboux runs on static-string")
    E = cfg.build_embedding()
    sigma0 = cfg.coupling("mu", cfg.coupling("sigma0", 1.0))
    model = mdl.DNG(mu=sigma0)
    n = _slice_nodes(cfg, 160)
    slc = sym.CauchySlice("tau", (cfg.slices or (0.9,))[0], n)
    tol = cfg.tol if cfg.tol is not None else 1e-6
    checks = []
    for label, f1, f2 in WAVE_PAIRS:
        w = sym.symplectic_form(model, E, slc, f1, f2, eps_list=cfg.eps)
        p = sym.dng_canonical_pairing(E, slc, f1, f2, sigma0, cfg.eps)
        checks.append(Check(f"pairing-match-{label}", w - p, 0.0, tol,
                            "position-momentum-pairing"))
    w_tan = sym.symplectic_form(model, E, slc, _tangential_string_field,
                                WAVE_PAIRS[0][1], eps_list=cfg.eps)
    checks.append(Check("tangential-drop-out", w_tan, 0.0, tol,
                        "reparameterization"))
    geom, grid, k = sym._slice_geometry(E, slc, model.jet_order + 1)
    J = sym.symplectic_current(model, geom, WAVE_PAIRS[0][1],
                               WAVE_PAIRS[0][2], cfg.eps)
    names, cols = _coord_columns(grid)
    return checks, [("sigma0", repr(sigma0))], \
        (names + ["current-density"], cols + [np.ravel(J[k])])


def run_gb_gauge_invariance(cfg):
    # the pinned radial probe lives in the four-component chart
    if cfg.embedding != "static-string":
        raise ConfigError("gb-gauge-invariance runs on static-string")
    E = cfg.build_embedding()
    sigma1 = cfg.coupling("sigma1", 0.9)
    grid = _grid(cfg, E, (8, 24))
    geom = E.geometry(grid.mesh, 4)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    dr = sgb.rotation_connection_delta(geom, RADIAL_WAVE, eps_list=cfg.eps)
    psi = sgb.gb_potential(geom, None, dr, sigma1)
    dr_g = sgb.rotation_connection_delta(geom, RADIAL_WAVE,
                                         theta=_gauge_angle,
                                         eps_list=cfg.eps)
    psi_g = sgb.gb_potential(geom, _gauge_angle, dr_g, sigma1)
    checks = [
        Check("connection-response-shift", float(np.max(np.abs(dr - dr_g))),
              0.0, tol, "fixed-angle-cancellation"),
        Check("flux-shift", float(np.max(np.abs(psi - psi_g))), 0.0, tol,
              "fixed-angle-cancellation"),
        Check("flux-magnitude", float(np.max(np.abs(psi))), "nonzero",
              1e-2, "curvature-response"),
    ]
    names, cols = _coord_columns(grid)
    shift = np.sqrt(np.einsum("m...,m...->...", psi - psi_g, psi - psi_g))
    return checks, [("sigma1", repr(sigma1))], \
        (names + ["flux-shift-norm"], cols + [np.ravel(shift)])


def run_dnggb_reduction(cfg):
    if cfg.embedding not in ("static-string", "traveling-wave"):
        raise ConfigError(
            "dnggb-reduction runs on static-string or traveling-wave"
        )
    E = cfg.build_embedding()
    sigma0 = cfg.coupling("sigma0", 1.2)
    n = _slice_nodes(cfg, 64)
    slc = sym.CauchySlice("tau", (cfg.slices or (0.9,))[0], n)
    tol = cfg.tol if cfg.tol is not None else 1e-12
    red = sgb.dnggb_canonical(E, slc, sigma0=sigma0, sigma1=0.0)
    ref = sym.dng_canonical_pair(E, slc, sigma0)
    dq = float(np.max(np.abs(red.position - ref.position)))
    dp = float(np.max(np.abs(red.momentum - ref.momentum)))
    checks = [
        Check("position-reduces-to-chart", dq, 0.0, tol, "limit-reduction"),
        Check("momentum-reduces", dp, 0.0, tol, "limit-reduction"),
    ]
    geom, grid, _k = sym._slice_geometry(E, slc, 3)
    names, cols = _coord_columns(grid)
    gap = np.max(np.abs(red.position - ref.position), axis=0)
    return checks, [("sigma0", repr(sigma0))], \
        (names + ["position-gap"], cols + [np.ravel(gap)])


def run_mass_shell(cfg):
    E = cfg.build_embedding()
    if E.dim != 2:
        raise ConfigError("mass-shell needs a two-axis worldsheet")
    sigma0 = cfg.coupling("sigma0", 2.0)
    n = _slice_nodes(cfg, 64)
    slc = sym.CauchySlice("tau", (cfg.slices or (0.9,))[0], n)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    res = sym.mass_shell_check(E, slc, sigma0)
    checks = [Check("mass-shell-residual", float(np.max(np.abs(res))), 0.0,
                    tol, "unit-normalization")]
    geom, grid, _k = sym._slice_geometry(E, slc, 2)
    names, cols = _coord_columns(grid)
    return checks, [("sigma0", repr(sigma0))], \
        (names + ["residual"], cols + [np.ravel(res)])


SCENARIOS = {
    "eom-check": (
        run_eom_check,
        "field-equation residual of a model on an embedding",
        "bulk term of the first variation",
        {"embedding": "traveling-wave", "model": "dng"},
    ),
    "deformation-oracle": (
        run_deformation_oracle,
        "finite-difference check of curvature-invariant variations",
        "normal-deformation response of K.K, K_ab.K^ab, gradK.gradK",
        {"embedding": "sphere"},
    ),
    "action-variation": (
        run_action_variation,
        "integrated first variation against the assembled bulk density",
        "equality of numeric and assembled action derivatives",
        {"embedding": "torus", "model": "quadratic-k"},
    ),
    "gauss-bonnet": (
        run_gauss_bonnet,
        "curvature quadrature over a closed surface",
        "Euler characteristic from the induced metric",
        {"embedding": "sphere"},
    ),
    "symplectic-conservation": (
        run_symplectic_conservation,
        "slice independence of the boundary-current form",
        "conservation of the symplectic current",
        {"embedding": "static-string", "model": "dng"},
    ),
    "canonical-darboux": (
        run_canonical_darboux,
        "slice form against the position-momentum pairing",
        "canonical conjugacy of chart position and momentum density",
        {"embedding": "static-string"},
    ),
    "gb-gauge-invariance": (
        run_gb_gauge_invariance,
        "frame-gauge shift of the curvature flux",
        "gauge invariance of the rotation-connection response",
        {"embedding": "static-string"},
    ),
    "dnggb-reduction": (
        run_dnggb_reduction,
        "combined-system pair at vanishing curvature coupling",
        "reduction of the combined canonical pair to the minimal one",
        {"embedding": "static-string"},
    ),
    "mass-shell": (
        run_mass_shell,
        "momentum normalization on a spacelike slice",
        "p.p + sigma0^2 = 0 for the unit timelike momentum",
        {"embedding": "static-string"},
    ),
}


def list_scenarios() -> str:
    lines = ["available scenarios:"]
    for name in SCENARIOS:
        _run, desc, capability, defaults = SCENARIOS[name]
        lines.append(f"  {name}")
        lines.append(f"    {desc}")
        lines.append(f"    exercises: {capability}")
        pairs = " ".join(f"{k}={v}" for k, v in sorted(defaults.items()))
        lines.append(f"    defaults: {pairs}")
    lines.append("")
    lines.append("config sections: [scenario] name; [embedding] id + "
                 "parameters; [model] id + couplings; [run] grid, eps, tol, "
                 "seed, slices, trials")
    return "\n".join(lines) + "\n"


# -- config parsing -------------------------------------------------------------

def _as_float(key, text):
    try:
        return float(text)
    except ValueError as ex:
        raise ConfigError(f"{key} must be a number, got {text!r}") from ex


def _as_int(key, text):
    try:
        return int(text)
    except ValueError as ex:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from ex


def _parse_floats(text):
    try:
        return tuple(float(x) for x in str(text).split(","))
    except ValueError as ex:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") \
            from ex


def _parse_grid(text):
    try:
        return tuple(int(x) for x in str(text).split(","))
    except ValueError as ex:
        raise ConfigError(f"expected n or n,m grid, got {text!r}") from ex


RUN_KEYS = ("grid", "eps", "tol", "seed", "slices", "trials")


def load_config(path) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as ex:
        raise ConfigError(f"cannot read config: {ex}") from ex
    except configparser.Error as ex:
        raise ConfigError(f"malformed config: {ex}") from ex
    out = {}
    for section in parser.sections():
        if section not in ("scenario", "embedding", "model", "run"):
            raise ConfigError(f"unknown config section [{section}]")
        for key, val in parser.items(section):
            if section == "scenario":
                if key != "name":
                    raise ConfigError(f"unknown key '{key}' in [scenario]")
                out["scenario"] = val
            elif section == "embedding":
                if key == "id":
                    out["embedding"] = val
                else:
                    out.setdefault("emb_params", {})[key] = _as_float(key, val)
            elif section == "model":
                if key == "id":
                    out["model"] = val
                elif key in COUPLING_KEYS:
                    out.setdefault("couplings", {})[key] = _as_float(key, val)
                else:
                    raise ConfigError(f"unknown key '{key}' in [model]")
            else:
                if key not in RUN_KEYS:
                    raise ConfigError(f"unknown key '{key}' in [run]")
                out[key] = val
    return out


def resolve_config(args) -> ScenarioConfig:
    raw = load_config(args.config) if args.config else {}
    scenario = args.scenario or raw.get("scenario")
    if not scenario:
        raise ConfigError("no scenario given (use --scenario or a config)")
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario '{scenario}'; try --list"
        )
    defaults = SCENARIOS[scenario][3]
    embedding = raw.get("embedding", defaults["embedding"])
    if embedding not in EMBEDDINGS:
        raise ConfigError(f"unknown embedding '{embedding}'")
    model = raw.get("model", defaults.get("model"))
    if model is not None and model not in MODELS:
        raise ConfigError(f"unknown model '{model}'")
    bad = sorted(set(raw.get("couplings", {})) - set(COUPLING_KEYS))
    if bad:
        raise ConfigError(f"unknown couplings: {', '.join(bad)}")
    cfg = ScenarioConfig(
        scenario=scenario,
        embedding=embedding,
        emb_params=raw.get("emb_params", {}),
        model=model,
        couplings=raw.get("couplings", {}),
    )
    if args.grid:
        cfg.grid = _parse_grid(args.grid)
    elif "grid" in raw:
        cfg.grid = _parse_grid(raw["grid"])
    if args.eps:
        cfg.eps = _parse_floats(args.eps)
    elif "eps" in raw:
        cfg.eps = _parse_floats(raw["eps"])
    if len(cfg.eps) < 3:
        raise ConfigError("the eps schedule needs at least three entries")
    if args.tol is not None:
        cfg.tol = args.tol
    elif "tol" in raw:
        cfg.tol = _as_float("tol", raw["tol"])
    if "seed" in raw:
        cfg.seed = _as_int("seed", raw["seed"])
    if "slices" in raw:
        cfg.slices = _parse_floats(raw["slices"])
    if "trials" in raw:
        cfg.trials = _as_int("trials", raw["trials"])
    try:
        cfg.build_embedding()
        cfg.build_model()
    except (TypeError, BranelabError) as ex:
        raise ConfigError(str(ex)) from ex
    return cfg


# -- orchestration ---------------------------------------------------------------

def run_scenario(cfg: ScenarioConfig) -> tuple:
    runner = SCENARIOS[cfg.scenario][0]
    start = time.perf_counter()
    try:
        checks, notes, fields = runner(cfg)
    except BranelabError as ex:
        checks = [Check("execution", float("nan"), 0.0, 0.0,
                        f"aborted:{type(ex).__name__}")]
        notes = [("error", str(ex))]
        fields = None
    duration = time.perf_counter() - start
    header = [
        ("scenario", cfg.scenario),
        ("embedding", cfg.build_embedding().name),
        ("model", cfg.model or "-"),
        ("grid", ",".join(str(n) for n in cfg.grid) if cfg.grid else "default"),
        ("eps", ",".join(repr(e) for e in cfg.eps)),
        ("conventions", _conventions_line()),
    ]
    return Report(header=header, notes=notes, checks=checks,
                  duration=duration), fields


def write_fields(path, fields):
    if fields is None:
        raise ConfigError("this scenario produced no per-point fields")
    names, cols = fields
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*[np.asarray(c, float) for c in cols]):
            writer.writerow([repr(float(x)) for x in row])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="branelab",
        description="scenario runner for the worldvolume verification suite",
    )
    parser.add_argument("--scenario", help="scenario name (see --list)")
    parser.add_argument("--config", help="key-value config file")
    parser.add_argument("--grid", help="grid size n or n,m")
    parser.add_argument("--eps", help="comma-separated step schedule")
    parser.add_argument("--tol", type=float, help="override check tolerance")
    parser.add_argument("--out", help="write the report to this path")
    parser.add_argument("--dump-fields", metavar="PATH.CSV",
                        help="write per-point fields as CSV")
    parser.add_argument("--list", action="store_true",
                        help="print the scenario catalog and exit")
    args = parser.parse_args(argv)

    if args.list:
        sys.stdout.write(list_scenarios())
        return 0
    try:
        cfg = resolve_config(args)
        report, fields = run_scenario(cfg)
        if args.dump_fields:
            write_fields(args.dump_fields, fields)
    except ConfigError as ex:
        sys.stderr.write(f"error: {ex}\n")
        return 2
    text = report.render()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
