"""Embedded worldvolumes and their induced geometry.

An :class:`Embedding` is a map from worldvolume parameters into a background
space.  Calling :meth:`Embedding.geometry` seeds the parameters as truncated
Taylor jets and returns a :class:`Geometry` whose properties (tangents,
orthonormal normal frame, induced metric, extrinsic curvature, twist
connection, covariant derivatives, intrinsic and pulled-back ambient
curvature) are computed lazily and exactly at the chosen expansion order.

Grids pair parameter meshes with quadrature weights: midpoint rule on
bounded directions (which keeps chart-boundary points such as sphere poles
off the stencil) and uniform weights on periodic ones, so smooth periodic
or compactly supported integrands converge superalgebraically.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from . import jets
from .backgrounds import (
    BackgroundMetric,
    christoffel_from_metric,
    riemann_from_metric,
)
from .errors import (
    DegenerateGeometryError,
    DomainError,
    ParameterError,
    PreconditionError,
)
from .jets import (
    Jet,
    jet_concat,
    jet_einsum,
    jet_det,
    jet_matinv,
    jet_partial_stack,
    jet_rearrange,
    jet_stack,
)

__all__ = [
    "ParamAxis",
    "Embedding",
    "Grid",
    "Geometry",
    "make_grid",
    "line_grid",
    "integrate",
    "plane",
    "sphere_polar",
    "cylinder",
    "torus_e3",
    "flat_torus_e4",
    "bumpy_torus_e4",
    "graph_surface_e4",
    "static_string",
    "traveling_wave",
    "perturbed_sphere",
    "s3_curve",
    "s2_latitude",
    "catalog",
]

_RESIDUAL_FLOOR = 1e-10


@dataclass(frozen=True)
class ParamAxis:
    """One worldvolume parameter: name, range and periodicity."""

    name: str
    lo: float
    hi: float
    periodic: bool = False


@dataclass(frozen=True)
class Embedding:
    """A parameterized worldvolume inside a background space.

    map_fn(*params) must return a sequence of ``background.dim`` components
    built from its arguments with jet-safe operations.
    """

    name: str
    background: BackgroundMetric
    axes: tuple
    map_fn: Callable

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def codim(self) -> int:
        return self.background.dim - self.dim

    def __post_init__(self):
        if self.codim < 1:
            raise ParameterError("embedding needs at least one normal direction")

    def validate_params(self, params):
        for ax, p in zip(self.axes, params):
            if ax.periodic:
                continue
            vals = np.asarray(p, float)
            if np.any(vals < ax.lo - 1e-12) or np.any(vals > ax.hi + 1e-12):
                raise DomainError(
                    f"{self.name}: parameter {ax.name} outside [{ax.lo}, {ax.hi}]"
                )

    def embedding_jet(self, params, order):
        """The embedding map as a tensor jet (ambient axis leading)."""
        if len(params) != self.dim:
            raise ParameterError(
                f"{self.name} expects {self.dim} parameters, got {len(params)}"
            )
        self.validate_params(params)
        xi = [
            Jet.variable(a, np.asarray(p, float), self.dim, order)
            for a, p in enumerate(params)
        ]
        comps = list(self.map_fn(*xi))
        if len(comps) != self.background.dim:
            raise PreconditionError(
                f"{self.name}: map returned {len(comps)} components, "
                f"background has dimension {self.background.dim}"
            )
        return jet_stack(comps, template=xi[0]), xi

    def geometry(self, params, order):
        X, xi = self.embedding_jet(params, order)
        return Geometry(self.background, X, params=xi, embedding=self)


# -- quadrature grids -------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Parameter mesh plus quadrature weights (midpoint/periodic-uniform)."""

    points: tuple          # per-axis 1-d node arrays
    mesh: tuple            # broadcast grid arrays, indexing="ij"
    weight: np.ndarray     # full quadrature weight array
    spacing: tuple

    @property
    def shape(self):
        return self.weight.shape


def _axis_nodes(ax: ParamAxis, n: int):
    if n < 1:
        raise ParameterError("grid needs at least one point per axis")
    h = (ax.hi - ax.lo) / n
    if ax.periodic:
        pts = ax.lo + h * np.arange(n)
    else:
        pts = ax.lo + h * (np.arange(n) + 0.5)
    return pts, h


def make_grid(embedding: Embedding, shape) -> Grid:
    if isinstance(shape, int):
        shape = (shape,) * embedding.dim
    if len(shape) != embedding.dim:
        raise ParameterError("grid shape rank must match worldvolume dimension")
    pts, hs = zip(*[_axis_nodes(ax, n) for ax, n in zip(embedding.axes, shape)])
    mesh = np.meshgrid(*pts, indexing="ij") if len(pts) > 1 else [pts[0]]
    w = np.ones(tuple(len(p) for p in pts))
    for h in hs:
        w = w * h
    return Grid(points=tuple(pts), mesh=tuple(mesh), weight=w, spacing=tuple(hs))


def line_grid(embedding: Embedding, axis: int, n: int, fixed: dict) -> Grid:
    """1-d grid along one axis with the remaining parameters held fixed."""
    ax = embedding.axes[axis]
    pts, h = _axis_nodes(ax, n)
    mesh = []
    for a, axx in enumerate(embedding.axes):
        if a == axis:
            mesh.append(pts)
        else:
            if axx.name not in fixed:
                raise ParameterError(f"line_grid: missing fixed value for {axx.name}")
            mesh.append(np.full_like(pts, float(fixed[axx.name])))
    return Grid(points=(pts,), mesh=tuple(mesh), weight=np.full(pts.shape, h),
                spacing=(h,))


def integrate(values, grid: Grid):
    """Quadrature sum of pointwise values over the grid."""
    vals = np.asarray(values, float)
    axes = tuple(range(vals.ndim - grid.weight.ndim, vals.ndim))
    return (vals * grid.weight).sum(axis=axes)


# -- induced geometry -------------------------------------------------------


class Geometry:
    """Lazily evaluated induced geometry of one embedded worldvolume.

    Tensor index layout (leading axes before the grid axes):
      tangents[a, mu], normals[i, mu], induced_metric[a, b],
      extrinsic_curvature[a, b, i], twist[a, i, j],
      grad_extrinsic[a, b, c, i] (worldvolume-covariant derivative),
      rframe[A, B, C, D] (all-lower ambient curvature projected on the
      combined frame: indices 0..dim-1 are tangents, dim.. are normals).
    """

    def __init__(self, background, X, params=None, embedding=None):
        self.background = background
        self.X = X
        self.params = params
        self.embedding = embedding
        self.dim = X.nvars
        self.ambient_dim = int(np.asarray(X.value).shape[0])
        self.codim = self.ambient_dim - self.dim
        if self.codim < 1:
            raise PreconditionError("worldvolume must have positive codimension")

    @property
    def order(self):
        return self.X.order

    @cached_property
    def grid_shape(self):
        return tuple(np.asarray(self.X.value).shape[1:])

    @cached_property
    def _x_components(self):
        return [self.X[mu] for mu in range(self.ambient_dim)]

    @cached_property
    def ambient_metric(self):
        return self.background.metric_tensor(self._x_components)

    @cached_property
    def ambient_christoffel(self):
        return self.background.christoffel_tensor(self._x_components)

    @cached_property
    def ambient_riemann(self):
        return self.background.riemann_tensor(self._x_components)

    @cached_property
    def tangents(self):
        return jet_partial_stack(self.X)

    def _dot(self, u, v):
        """Ambient inner product of two vector jets (mu leading)."""
        gv = jet_einsum("mn...,n...->m...", self.ambient_metric, v)
        return jet_einsum("m...,m...->...", u, gv)

    @cached_property
    def induced_metric(self):
        e = self.tangents
        ge = jet_einsum("mn...,bn...->bm...", self.ambient_metric, e)
        return jet_einsum("am...,bm...->ab...", e, ge)

    @cached_property
    def inverse_induced_metric(self):
        det = np.asarray(self.det_induced_metric.value, float)
        if not np.all(np.isfinite(det)) or np.any(np.abs(det) < 1e-14):
            raise DegenerateGeometryError("induced metric is singular")
        try:
            return jet_matinv(self.induced_metric)
        except np.linalg.LinAlgError as exc:
            raise DegenerateGeometryError("induced metric is singular") from exc

    @cached_property
    def det_induced_metric(self):
        return jet_det(self.induced_metric)

    @cached_property
    def metric_sign(self):
        """Sign of det(induced metric): -1 on Lorentzian worldvolumes."""
        s = np.sign(np.asarray(self.det_induced_metric.value, float))
        if np.any(s == 0):
            raise DegenerateGeometryError("induced metric is singular")
        return s

    @cached_property
    def sqrt_abs_det(self):
        return (self.metric_sign * self.det_induced_metric).sqrt()

    @cached_property
    def normals(self):
        """Orthonormal spacelike normal frame, orientation-fixed."""
        D, d, k = self.ambient_dim, self.dim, self.codim
        e = self.tangents
        ginv = self.inverse_induced_metric
        grid = self.grid_shape
        template = self.X

        def const_vec(arr):
            return Jet.constant(
                np.broadcast_to(np.asarray(arr, float).reshape((D,) + (1,) * len(grid)),
                                (D,) + grid).copy(),
                self.X.nvars, self.X.order,
            )

        normals = []
        for _ in range(k):
            residuals, norms = [], []
            for mu in range(D):
                seed = np.zeros(D)
                seed[mu] = 1.0
                u = const_vec(seed)
                # remove tangential part with the inverse induced metric
                t = jet_einsum("mn...,n...->m...", self.ambient_metric, u)
                t = jet_einsum("am...,m...->a...", e, t)
                proj = jet_einsum("ab...,b...->a...", ginv, t)
                r = u - jet_einsum("a...,am...->m...", proj, e)
                for n_prev in normals:
                    r = r - self._dot(n_prev, r) * n_prev
                residuals.append(r)
                norms.append(
                    np.broadcast_to(np.asarray(self._dot(r, r).value, float), grid)
                )
            norm_arr = np.stack(norms)
            sel = np.argmax(norm_arr, axis=0)
            best = np.max(norm_arr, axis=0)
            if np.any(best <= _RESIDUAL_FLOOR):
                raise DegenerateGeometryError(
                    "no spacelike normal direction found (degenerate frame)"
                )
            blended = None
            for mu in range(D):
                mask = (sel == mu).astype(float)
                if not mask.any():
                    continue
                piece = residuals[mu] * mask
                blended = piece if blended is None else blended + piece
            n = blended / (self._dot(blended, blended)).sqrt()
            normals.append(n)

        frame_vals = [np.broadcast_to(np.asarray(v.value, float), (D,) + grid)
                      for v in (e[a] for a in range(d))]
        frame_vals += [np.broadcast_to(np.asarray(n.value, float), (D,) + grid)
                       for n in normals]
        M = np.stack(frame_vals, axis=-1)          # (mu, grid..., A)
        M = np.moveaxis(M, 0, -2)                  # (grid..., mu, A)
        det = np.linalg.det(M)
        if np.any(det == 0):
            raise DegenerateGeometryError("combined frame is singular")
        normals[-1] = normals[-1] * np.sign(det)
        return jet_stack(normals, template=self.X)

    @cached_property
    def frame(self):
        """Tangents then normals, stacked: (A, mu)."""
        return jet_concat([self.tangents, self.normals])

    @cached_property
    def second_fundamental(self):
        """Ambient-covariant second derivative of the map: (a, b, mu)."""
        ddX = jet_partial_stack(jet_partial_stack(self.X))
        e = self.tangents
        t = jet_einsum("mrs...,ar...->mas...", self.ambient_christoffel, e)
        corr = jet_einsum("mas...,bs...->abm...", t, e)
        return ddX + corr

    @cached_property
    def extrinsic_curvature(self):
        """K[a, b, i] = -<n^i, D_a e_b>."""
        gn = jet_einsum("mn...,in...->im...", self.ambient_metric, self.normals)
        return -1.0 * jet_einsum("abm...,im...->abi...", self.second_fundamental, gn)

    @cached_property
    def mean_curvature(self):
        return jet_einsum("ab...,abi...->i...", self.inverse_induced_metric,
                          self.extrinsic_curvature)

    @cached_property
    def twist(self):
        """Normal-bundle connection w[a, i, j] = <n^i, D_a n^j>."""
        dn = jet_partial_stack(self.normals)         # (a, j, mu)
        t = jet_einsum("mrs...,ar...->mas...", self.ambient_christoffel,
                       self.tangents)
        corr = jet_einsum("mas...,js...->ajm...", t, self.normals)
        Dn = dn + corr
        gn = jet_einsum("mn...,in...->im...", self.ambient_metric, self.normals)
        return jet_einsum("ajm...,im...->aij...", Dn, gn)

    @cached_property
    def wv_christoffel(self):
        dgamma = jet_partial_stack(self.induced_metric)
        return christoffel_from_metric(self.induced_metric, dgamma)

    @cached_property
    def intrinsic_riemann(self):
        g = self.induced_metric
        dg = jet_partial_stack(g)
        ddg = jet_partial_stack(dg)
        return riemann_from_metric(g, dg, ddg)

    @cached_property
    def intrinsic_scalar_curvature(self):
        gi = self.inverse_induced_metric
        t = jet_einsum("am...,abmn...->bn...", gi, self.intrinsic_riemann)
        return jet_einsum("bn...,bn...->...", gi, t)

    @cached_property
    def rframe(self):
        """Ambient curvature fully projected on the combined frame.

        rframe[A, B, C, E] = R_{a b m n} F_A^a F_B^b F_C^m F_E^n with
        tangent slots first (0..dim-1), then normals.
        """
        F = self.frame
        R = self.ambient_riemann
        R = jet_einsum("abmn...,Aa...->Abmn...", R, F)
        R = jet_einsum("Abmn...,Bb...->ABmn...", R, F)
        R = jet_einsum("ABmn...,Cm...->ABCn...", R, F)
        return jet_einsum("ABCn...,En...->ABCE...", R, F)

    def rpair(self, A, B, C, E):
        """Curvature pairing rpair(F_A, F_B; F_C, F_E) = R(v=F_B, u=F_A, w, z).

        Frame labels: 0..dim-1 tangents, dim..ambient_dim-1 normals.
        Equals rframe[B, A, C, E] per the package conventions.
        """
        return self.rframe[B, A, C, E]

    def covariant_grad(self, fld, n_wv, n_nor):
        """Worldvolume-covariant derivative, new lower index first.

        ``fld`` has ``n_wv`` leading worldvolume (lower) indices followed by
        ``n_nor`` normal-frame indices; grid axes trail.
        """
        letters = list(string.ascii_lowercase[:n_wv + n_nor])
        if "z" in letters or "y" in letters:
            raise PreconditionError("field rank too large")
        base = "".join(letters)
        out = jet_partial_stack(fld)
        for p in range(n_wv):
            repl = letters.copy()
            repl[p] = "z"
            spec = f"zy{letters[p]}...,{''.join(repl)}...->y{base}..."
            out = out - jet_einsum(spec, self.wv_christoffel, fld)
        for q in range(n_wv, n_wv + n_nor):
            repl = letters.copy()
            repl[q] = "z"
            spec = f"y{letters[q]}z...,{''.join(repl)}...->y{base}..."
            out = out + jet_einsum(spec, self.twist, fld)
        return out

    @cached_property
    def grad_extrinsic(self):
        """grad K[a, b, c, i]."""
        return self.covariant_grad(self.extrinsic_curvature, 2, 1)

    def codazzi_residual(self):
        """grad_a K_bc^i - grad_b K_ac^i + rframe[n_i, c, a, b]; zero by the
        structure equations."""
        gk = self.grad_extrinsic
        anti = gk - jet_rearrange("abci...->baci...", gk)
        d = self.dim
        rterm = jet_rearrange("icab...->abci...", self.rframe)
        rterm = rterm.map_coeffs(lambda x: x[:d, :d, :d, d:])
        return anti + rterm

    # -- scalar invariants used by the action models ----------------------
    @cached_property
    def k_raised(self):
        """K with both worldvolume indices raised: K^{ab}_i."""
        gi = self.inverse_induced_metric
        t = jet_einsum("ac...,cbi...->abi...", gi, self.extrinsic_curvature)
        return jet_einsum("bd...,adi...->abi...", gi, t)

    @cached_property
    def k_squared_scalar(self):
        """K^i K_i (mean curvature squared)."""
        m = self.mean_curvature
        return jet_einsum("i...,i...->...", m, m)

    @cached_property
    def k_dot_k_scalar(self):
        """K_{ab}^i K^{ab}_i."""
        return jet_einsum("abi...,abi...->...", self.extrinsic_curvature,
                          self.k_raised)

    @cached_property
    def gradk_squared_scalar(self):
        """grad_a K^i grad^a K_i of the mean curvature vector."""
        gm = self.covariant_grad(self.mean_curvature, 0, 1)
        gi = self.inverse_induced_metric
        up = jet_einsum("ab...,bi...->ai...", gi, gm)
        return jet_einsum("ai...,ai...->...", gm, up)

    def gauss_scalar_residual(self):
        """Twice-traced structure-equation residual tying the intrinsic
        curvature scalar to K^iK_i - K.K plus the projected ambient
        curvature; zero pointwise for any consistent geometry."""
        gi = self.inverse_induced_metric
        d = self.dim
        blk = self.rframe.map_coeffs(lambda x: x[:d, :d, :d, :d])
        t = jet_einsum("am...,abmn...->bn...", gi, blk)
        amb = jet_einsum("bn...,bn...->...", gi, t)
        return (self.intrinsic_scalar_curvature
                - (self.k_squared_scalar - self.k_dot_k_scalar)
                - amb)

    def rotated_normals_copy(self, theta):
        """Copy of this geometry with the 2-normal frame rotated by theta.

        ``theta`` is a scalar jet on the same parameters (or a constant).
        """
        if self.codim != 2:
            raise PreconditionError("normal frame rotation needs codimension 2")
        n = self.normals
        c, s = jets.cos(theta), jets.sin(theta)
        n0 = c * n[0] - s * n[1]
        n1 = s * n[0] + c * n[1]
        new = Geometry(self.background, self.X, params=self.params,
                       embedding=self.embedding)
        new.__dict__["normals"] = jet_stack([n0, n1], template=self.X)
        return new


# -- embedding catalog ------------------------------------------------------

from .backgrounds import (  # noqa: E402
    euclidean,
    minkowski,
    product_spheres_background,
    round_sphere_background,
)


def plane(size: float = 1.0) -> Embedding:
    return Embedding(
        name="plane",
        background=euclidean(3),
        axes=(ParamAxis("u", -size, size), ParamAxis("v", -size, size)),
        map_fn=lambda u, v: (u, v, 0.0 * u),
    )


def sphere_polar(radius: float = 1.0) -> Embedding:
    r = float(radius)
    return Embedding(
        name=f"sphere(r={radius})",
        background=euclidean(3),
        axes=(
            ParamAxis("theta", 0.0, np.pi),
            ParamAxis("phi", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda t, p: (
            r * jets.sin(t) * jets.cos(p),
            r * jets.sin(t) * jets.sin(p),
            r * jets.cos(t),
        ),
    )


def cylinder(radius: float = 1.0, height: float = 1.0) -> Embedding:
    r = float(radius)
    return Embedding(
        name=f"cylinder(r={radius})",
        background=euclidean(3),
        axes=(
            ParamAxis("phi", 0.0, 2 * np.pi, periodic=True),
            ParamAxis("z", -height, height),
        ),
        map_fn=lambda p, z: (r * jets.cos(p), r * jets.sin(p), z),
    )


def ellipsoid(ax: float = 1.0, ay: float = 1.15, az: float = 1.3) -> Embedding:
    """Triaxial ellipsoid: nonconstant curvature, so grad K is nonzero."""
    a, b, c = float(ax), float(ay), float(az)
    return Embedding(
        name=f"ellipsoid({a},{b},{c})",
        background=euclidean(3),
        axes=(
            ParamAxis("theta", 0.0, np.pi),
            ParamAxis("phi", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda t, p: (
            a * jets.sin(t) * jets.cos(p),
            b * jets.sin(t) * jets.sin(p),
            c * jets.cos(t),
        ),
    )


def torus_e3(big_radius: float = 2.0, small_radius: float = 0.5) -> Embedding:
    R, r = float(big_radius), float(small_radius)
    return Embedding(
        name=f"torus(R={R},r={r})",
        background=euclidean(3),
        axes=(
            ParamAxis("u", 0.0, 2 * np.pi, periodic=True),
            ParamAxis("v", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda u, v: (
            (R + r * jets.cos(v)) * jets.cos(u),
            (R + r * jets.cos(v)) * jets.sin(u),
            r * jets.sin(v),
        ),
    )


def flat_torus_e4(r1: float = 1.0, r2: float = 1.0) -> Embedding:
    a, b = float(r1), float(r2)
    return Embedding(
        name=f"flat-torus(r1={a},r2={b})",
        background=euclidean(4),
        axes=(
            ParamAxis("u", 0.0, 2 * np.pi, periodic=True),
            ParamAxis("v", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda u, v: (
            a * jets.cos(u), a * jets.sin(u), b * jets.cos(v), b * jets.sin(v),
        ),
    )


def bumpy_torus_e4(r1: float = 1.0, r2: float = 1.0, amp: float = 0.3) -> Embedding:
    a, b, c = float(r1), float(r2), float(amp)
    return Embedding(
        name=f"bumpy-torus(amp={c})",
        background=euclidean(4),
        axes=(
            ParamAxis("u", 0.0, 2 * np.pi, periodic=True),
            ParamAxis("v", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda u, v: (
            (a + c * jets.cos(v)) * jets.cos(u),
            (a + c * jets.cos(v)) * jets.sin(u),
            b * jets.cos(v),
            b * jets.sin(v),
        ),
    )


def graph_surface_e4(f_amp: float = 0.3, g_amp: float = 0.2) -> Embedding:
    fa, ga = float(f_amp), float(g_amp)
    return Embedding(
        name="graph-surface",
        background=euclidean(4),
        axes=(ParamAxis("u", -1.0, 1.0), ParamAxis("v", -1.0, 1.0)),
        map_fn=lambda u, v: (
            u,
            v,
            fa * jets.sin(u) * jets.cos(v),
            ga * jets.cos(2.0 * u) * jets.sin(v),
        ),
    )


def static_string(radius: float = 1.0) -> Embedding:
    r = float(radius)
    return Embedding(
        name=f"static-string(r={radius})",
        background=minkowski(4),
        axes=(
            ParamAxis("tau", 0.0, 2.5),
            ParamAxis("sigma", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda t, s: (t, r * jets.cos(s), r * jets.sin(s), 0.0 * t),
    )


def traveling_wave(amplitude: float = 0.3) -> Embedding:
    A = float(amplitude)
    return Embedding(
        name=f"traveling-wave(A={A})",
        background=minkowski(3),
        axes=(
            ParamAxis("tau", 0.0, 2.5),
            ParamAxis("sigma", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda t, s: (t, s, A * jets.sin(s - t)),
    )


def perturbed_sphere(radius: float = 1.0, amp: float = 0.05) -> Embedding:
    r, a = float(radius), float(amp)
    return Embedding(
        name=f"perturbed-sphere(amp={a})",
        background=euclidean(3),
        axes=(
            ParamAxis("theta", 0.0, np.pi),
            ParamAxis("phi", 0.0, 2 * np.pi, periodic=True),
        ),
        map_fn=lambda t, p: tuple(
            (r * (1.0 + a * jets.cos(2.0 * t)) )* comp
            for comp in (
                jets.sin(t) * jets.cos(p),
                jets.sin(t) * jets.sin(p),
                jets.cos(t),
            )
        ),
    )


def s3_curve(chi0: float = 1.0, theta0: float = 1.1, a: float = 0.2,
             b: float = 0.3, radius: float = 1.0) -> Embedding:
    """Closed curve inside a round 3-sphere: codimension 2, curved ambient."""
    return Embedding(
        name="s3-curve",
        background=round_sphere_background(3, radius),
        axes=(ParamAxis("xi", 0.0, 2 * np.pi, periodic=True),),
        map_fn=lambda x: (
            chi0 + a * jets.cos(x),
            theta0 + b * jets.sin(x),
            x,
        ),
    )


def s2_latitude(theta0: float = 0.8, radius: float = 1.0) -> Embedding:
    """Latitude circle inside a round 2-sphere: codimension 1, curved ambient."""
    return Embedding(
        name=f"s2-latitude(theta0={theta0})",
        background=round_sphere_background(2, radius),
        axes=(ParamAxis("xi", 0.0, 2 * np.pi, periodic=True),),
        map_fn=lambda x: (theta0 + 0.0 * x, x),
    )


def surface_s2xs2(r1: float = 1.0, r2: float = 1.3) -> Embedding:
    """Generic surface patch in S^2 x S^2: codimension 2, non-maximally-
    symmetric ambient.

    On a product of spheres the tangent/normal/normal/normal block of the
    ambient Riemann tensor does not cancel, so this patch exercises
    curvature couplings that are invisible on flat or single-sphere
    backgrounds.  The map is deliberately generic (no isometries left).
    """
    return Embedding(
        name="s2xs2-patch",
        background=product_spheres_background(r1, r2),
        axes=(
            ParamAxis("u", -1.0, 1.0),
            ParamAxis("v", -1.0, 1.0),
        ),
        map_fn=lambda u, v: (
            1.10 + 0.30 * u + 0.10 * jets.sin(v),
            0.40 + 0.50 * v + 0.15 * jets.sin(u),
            1.30 + 0.20 * jets.sin(u) + 0.25 * v,
            0.90 + 0.40 * u + 0.20 * jets.cos(v),
        ),
    )


def catalog():
    """Name -> zero-argument constructor for the built-in embeddings."""
    return {
        "plane": plane,
        "sphere": sphere_polar,
        "ellipsoid": ellipsoid,
        "cylinder": cylinder,
        "torus": torus_e3,
        "flat-torus": flat_torus_e4,
        "bumpy-torus": bumpy_torus_e4,
        "graph-surface": graph_surface_e4,
        "static-string": static_string,
        "traveling-wave": traveling_wave,
        "perturbed-sphere": perturbed_sphere,
        "s3-curve": s3_curve,
        "s2-latitude": s2_latitude,
        "s2xs2-patch": surface_s2xs2,
    }
