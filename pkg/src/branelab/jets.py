"""Truncated multivariate Taylor-series ("jet") arithmetic.

Forward-mode differentiation engine used throughout the package.  A ``Jet``
stores the Taylor coefficients (partial derivatives divided by multi-index
factorials) of a smooth function of ``nvars`` variables, truncated at total
degree ``order``.  Evaluating an analytic map with jet-valued inputs yields
all its partial derivatives at once, to machine precision, with no
finite-difference noise.

Coefficients may be scalars or numpy arrays.  Array coefficients are how the
geometry pipeline vectorizes: a single scalar jet can carry one coefficient
array per Taylor term, shaped ``(tensor indices..., grid...)``, so one jet
multiplication sweeps a whole grid.  Coefficients may even be Jets themselves
(nested jets), which is how metric derivatives are extracted when a
background provides no closed-form connection.

Conventions: coefficients are stored in graded order (total degree, then
lexicographic), so truncating to a lower order is a prefix slice.
"""
from __future__ import annotations

import math
from functools import lru_cache
from itertools import product

import numpy as np

__all__ = [
    "Jet",
    "constant",
    "variable",
    "variables",
    "sin",
    "cos",
    "sqrt",
    "exp",
    "log",
    "sinh",
    "cosh",
    "jet_einsum",
    "jet_rearrange",
    "jet_stack",
    "jet_matinv",
    "jet_det",
    "jet_transpose",
    "jet_partial_stack",
    "jet_concat",
    "eval_map",
]


@lru_cache(maxsize=None)
def _tables(nvars: int, order: int):
    """Multi-index bookkeeping for (nvars, order), cached.

    Returns (indices, position, prefix_counts, mult_triples, partial_maps):
      indices: tuple of multi-index tuples in graded order
      position: dict multi-index -> coefficient slot
      prefix_counts[k]: number of coefficients of a jet of order k
      mult_triples: tuple of (i, j, k) with indices[i]+indices[j] == indices[k]
      partial_maps[d]: tuple of (dst, src, factor) for d/dx_d
    """
    if nvars < 1 or order < 0:
        raise ValueError("need nvars >= 1 and order >= 0")
    raw = [a for a in product(range(order + 1), repeat=nvars) if sum(a) <= order]
    raw.sort(key=lambda a: (sum(a), a))
    indices = tuple(raw)
    position = {a: i for i, a in enumerate(indices)}
    prefix_counts = tuple(
        sum(1 for a in indices if sum(a) <= k) for k in range(order + 1)
    )
    triples = []
    for i, a in enumerate(indices):
        for j, b in enumerate(indices):
            s = tuple(x + y for x, y in zip(a, b))
            if sum(s) <= order:
                triples.append((i, j, position[s]))
    partial_maps = []
    for d in range(nvars):
        ops = []
        for a in indices:
            if sum(a) >= order:
                continue  # target slot must exist at order-1
            src = list(a)
            src[d] += 1
            ops.append((position[a], position[tuple(src)], float(a[d] + 1)))
        partial_maps.append(tuple(ops))
    return indices, position, prefix_counts, tuple(triples), tuple(partial_maps)


def _is_jet(x) -> bool:
    return isinstance(x, Jet)


def _sqrt(x):
    return x.sqrt() if _is_jet(x) else np.sqrt(x)


def _sin(x):
    return x.sin() if _is_jet(x) else np.sin(x)


def _cos(x):
    return x.cos() if _is_jet(x) else np.cos(x)


def _exp(x):
    return x.exp() if _is_jet(x) else np.exp(x)


def _log(x):
    return x.log() if _is_jet(x) else np.log(x)


class Jet:
    """Truncated Taylor expansion of a scalar in ``nvars`` variables."""

    __slots__ = ("nvars", "order", "c")

    # keep numpy from absorbing jets into object arrays; arithmetic with
    # ndarrays then falls through to the __r*__ methods below
    __array_ufunc__ = None

    def __init__(self, nvars, order, coeffs):
        self.nvars = nvars
        self.order = order
        self.c = coeffs

    # -- constructors -------------------------------------------------
    @staticmethod
    def constant(value, nvars, order):
        n = _tables(nvars, order)[2][order]
        c = [value] + [_zero_like(value)] * (n - 1)
        return Jet(nvars, order, c)

    @staticmethod
    def variable(i, value, nvars, order):
        j = Jet.constant(value, nvars, order)
        if order >= 1:
            seed = tuple(1 if k == i else 0 for k in range(nvars))
            pos = _tables(nvars, order)[1][seed]
            j.c[pos] = _one_like(value)
        return j

    # -- basic queries -------------------------------------------------
    @property
    def value(self):
        return self.c[0]

    def coefficient(self, alpha):
        """Taylor coefficient for multi-index alpha (zero if above order)."""
        if sum(alpha) > self.order:
            return _zero_like(self.c[0])
        return self.c[_tables(self.nvars, self.order)[1][tuple(alpha)]]

    def derivative(self, alpha):
        """Partial derivative d^alpha f for multi-index alpha."""
        fact = 1.0
        for a in alpha:
            fact *= math.factorial(a)
        return self.coefficient(alpha) * fact

    def truncated(self, order):
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        if order == self.order:
            return self
        n = _tables(self.nvars, self.order)[2][order]
        return Jet(self.nvars, order, self.c[:n])

    def partial(self, d):
        """d/dx_d as a jet of one order less."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        tab = _tables(self.nvars, self.order)
        n_out = tab[2][self.order - 1]
        out = [0.0] * n_out
        for dst, src, fct in tab[4][d]:
            out[dst] = self.c[src] * fct
        return Jet(self.nvars, self.order - 1, out)

    # -- arithmetic ----------------------------------------------------
    def _align(self, other):
        if self.nvars != other.nvars:
            raise ValueError("jet variable-count mismatch")
        m = min(self.order, other.order)
        return self.truncated(m), other.truncated(m)

    def __add__(self, other):
        if _is_jet(other):
            a, b = self._align(other)
            return Jet(a.nvars, a.order, [x + y for x, y in zip(a.c, b.c)])
        c = list(self.c)
        c[0] = c[0] + other
        return Jet(self.nvars, self.order, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.nvars, self.order, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other if _is_jet(other) else -1.0 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_jet(other):
            a, b = self._align(other)
            tab = _tables(a.nvars, a.order)
            out = [0.0] * len(a.c)
            ac, bc = a.c, b.c
            for i, j, k in tab[3]:
                out[k] = out[k] + ac[i] * bc[j]
            return Jet(a.nvars, a.order, out)
        return Jet(self.nvars, self.order, [x * other for x in self.c])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_jet(other):
            return self * other._reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int):
            if p == 0:
                return Jet.constant(_one_like(self.c[0]), self.nvars, self.order)
            if p > 0:
                out = self
                for _ in range(p - 1):
                    out = out * self
                return out
        # real or negative powers through the composition rule
        derivs = []
        x0 = self.c[0]
        coef = 1.0
        for k in range(self.order + 1):
            derivs.append(coef * x0 ** (p - k) if k else x0**p)
            coef *= p - k
        return self._compose(derivs)

    # -- analytic functions, via f(x0 + h) = sum f^(k)(x0) h^k / k! ----
    def _compose(self, derivs):
        """Horner evaluation given derivs[k] = f^(k)(value).

        Each Taylor coefficient of f is lifted to a constant jet before it
        enters the outer arithmetic, so nested (jet-valued) coefficients stay
        at their own level.
        """
        h = Jet(self.nvars, self.order, list(self.c))
        h.c[0] = _zero_like(self.c[0])
        lift = lambda v: Jet.constant(v, self.nvars, self.order)  # noqa: E731
        out = lift(derivs[self.order] / math.factorial(self.order))
        for k in range(self.order - 1, -1, -1):
            out = out * h + lift(derivs[k] / math.factorial(k))
        return out

    def _reciprocal(self):
        x0 = self.c[0]
        derivs, sign = [], 1.0
        for k in range(self.order + 1):
            derivs.append(sign * math.factorial(k) / x0 ** (k + 1))
            sign = -sign
        return self._compose(derivs)

    def sqrt(self):
        x0 = self.c[0]
        derivs, coef = [_sqrt(x0)], 0.5
        for k in range(1, self.order + 1):
            derivs.append(coef * x0 ** (0.5 - k))
            coef *= 0.5 - k
        return self._compose(derivs)

    def exp(self):
        e0 = _exp(self.c[0])
        return self._compose([e0] * (self.order + 1))

    def log(self):
        x0 = self.c[0]
        derivs = [_log(x0)]
        for k in range(1, self.order + 1):
            derivs.append((-1.0) ** (k - 1) * math.factorial(k - 1) / x0**k)
        return self._compose(derivs)

    def sin(self):
        s0, c0 = _sin(self.c[0]), _cos(self.c[0])
        cycle = (s0, c0, -s0, -c0)
        return self._compose([cycle[k % 4] for k in range(self.order + 1)])

    def cos(self):
        s0, c0 = _sin(self.c[0]), _cos(self.c[0])
        cycle = (c0, -s0, -c0, s0)
        return self._compose([cycle[k % 4] for k in range(self.order + 1)])

    def sinh(self):
        s0 = np.sinh(self.c[0]) if not _is_jet(self.c[0]) else self.c[0].sinh()
        c0 = np.cosh(self.c[0]) if not _is_jet(self.c[0]) else self.c[0].cosh()
        pair = (s0, c0)
        return self._compose([pair[k % 2] for k in range(self.order + 1)])

    def cosh(self):
        s0 = np.sinh(self.c[0]) if not _is_jet(self.c[0]) else self.c[0].sinh()
        c0 = np.cosh(self.c[0]) if not _is_jet(self.c[0]) else self.c[0].cosh()
        pair = (c0, s0)
        return self._compose([pair[k % 2] for k in range(self.order + 1)])

    # -- structural helpers for array-valued coefficients ---------------
    def map_coeffs(self, fn):
        return Jet(self.nvars, self.order, [fn(x) for x in self.c])

    def __getitem__(self, idx):
        """Slice the leading (tensor) axes of every coefficient array."""
        return self.map_coeffs(lambda x: x[idx])

    def broadcast_to(self, shape):
        return self.map_coeffs(lambda x: np.broadcast_to(np.asarray(x, float), shape))

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, value={self.value!r})"


def _zero_like(v):
    if _is_jet(v):
        return Jet.constant(_zero_like(v.c[0]), v.nvars, v.order)
    if isinstance(v, np.ndarray):
        return np.zeros_like(v, dtype=float)
    return 0.0


def _one_like(v):
    if _is_jet(v):
        return Jet.constant(_one_like(v.c[0]), v.nvars, v.order)
    if isinstance(v, np.ndarray):
        return np.ones_like(v, dtype=float)
    return 1.0


# -- module-level functional forms (safe on floats, arrays and jets) ----

def constant(value, nvars, order):
    return Jet.constant(value, nvars, order)


def variable(i, value, nvars, order):
    return Jet.variable(i, value, nvars, order)


def variables(values, order):
    """Seed one jet variable per entry of ``values``."""
    n = len(values)
    return [Jet.variable(i, np.asarray(v, float), n, order) for i, v in enumerate(values)]


def sin(x):
    return x.sin() if _is_jet(x) else np.sin(x)


def cos(x):
    return x.cos() if _is_jet(x) else np.cos(x)


def sqrt(x):
    return x.sqrt() if _is_jet(x) else np.sqrt(x)


def exp(x):
    return x.exp() if _is_jet(x) else np.exp(x)


def log(x):
    return x.log() if _is_jet(x) else np.log(x)


def sinh(x):
    return x.sinh() if _is_jet(x) else np.sinh(x)


def cosh(x):
    return x.cosh() if _is_jet(x) else np.cosh(x)


# -- tensor-valued jets ---------------------------------------------------
#
# A "tensor jet" is a Jet whose coefficients are arrays shaped
# (tensor axes..., grid axes...).  The helpers below contract and stack
# them; einsum specs must route grid axes through '...'.

def jet_stack(jets, template=None):
    """Stack scalar jets along a new leading tensor axis.

    Plain numbers are promoted to constant jets matching the first Jet found
    (or ``template``).
    """
    proto = None
    for j in jets:
        if _is_jet(j):
            proto = j
            break
    if proto is None:
        proto = template
    if proto is None:
        raise ValueError("jet_stack needs at least one Jet or a template")
    m = min((j.order for j in jets if _is_jet(j)), default=proto.order)
    lifted = []
    for j in jets:
        if _is_jet(j):
            lifted.append(j.truncated(m))
        else:
            lifted.append(Jet.constant(np.asarray(j, float), proto.nvars, m))
    ncoef = len(lifted[0].c)
    out = []
    for k in range(ncoef):
        layers = [np.asarray(j.c[k], float) for j in lifted]
        shape = np.broadcast_shapes(*[a.shape for a in layers])
        out.append(np.stack([np.broadcast_to(a, shape) for a in layers]))
    return Jet(proto.nvars, m, out)


def jet_rearrange(spec, a):
    """Single-operand einsum on the tensor axes (relabel, trace, transpose)."""
    return a.map_coeffs(lambda x: np.einsum(spec, np.asarray(x, float)))


def jet_einsum(spec, a, b):
    """einsum over the tensor axes of two jets (or a jet and an array)."""
    if not _is_jet(a):
        a_arr, bj = np.asarray(a, float), b
        return bj.map_coeffs(lambda x: np.einsum(spec, a_arr, np.asarray(x, float)))
    if not _is_jet(b):
        b_arr = np.asarray(b, float)
        return a.map_coeffs(lambda x: np.einsum(spec, np.asarray(x, float), b_arr))
    aj, bj = a._align(b)
    tab = _tables(aj.nvars, aj.order)
    out = [0.0] * len(aj.c)
    for i, j, k in tab[3]:
        out[k] = out[k] + np.einsum(spec, np.asarray(aj.c[i], float),
                                    np.asarray(bj.c[j], float))
    return Jet(aj.nvars, aj.order, out)


def jet_partial_stack(j):
    """All first partials of a tensor jet, stacked on a new leading axis."""
    return jet_stack([j.partial(d) for d in range(j.nvars)])


def jet_concat(parts):
    """Concatenate tensor jets along their existing leading axis."""
    m = min(p.order for p in parts)
    parts = [p.truncated(m) for p in parts]
    out = []
    for k in range(len(parts[0].c)):
        layers = [np.asarray(p.c[k], float) for p in parts]
        tail = np.broadcast_shapes(*[a.shape[1:] for a in layers])
        out.append(
            np.concatenate([np.broadcast_to(a, a.shape[:1] + tail) for a in layers])
        )
    return Jet(parts[0].nvars, m, out)


def jet_transpose(j, perm):
    """Permute the leading len(perm) tensor axes of every coefficient."""
    k = len(perm)

    def f(x):
        x = np.asarray(x, float)
        return x.transpose(tuple(perm) + tuple(range(k, x.ndim)))

    return j.map_coeffs(f)


def jet_matinv(g):
    """Inverse of a matrix-valued jet with leading axes (n, n).

    Newton iteration X <- X (2 I - g X); exact after ceil(log2(order+1))
    steps because the non-constant part of a jet is nilpotent.
    """
    val = np.asarray(g.value, float)
    n = val.shape[0]
    v = np.moveaxis(np.linalg.inv(np.moveaxis(val, (0, 1), (-2, -1))), (-2, -1), (0, 1))
    x = Jet.constant(v, g.nvars, g.order)
    eye = np.zeros(val.shape)
    for i in range(n):
        eye[i, i] = 1.0
    steps = max(1, math.ceil(math.log2(g.order + 1))) if g.order else 1
    for _ in range(steps):
        gx = jet_einsum("ab...,bc...->ac...", g, x)
        x = jet_einsum("ab...,bc...->ac...", x, 2.0 * eye - gx)
    return x


def jet_det(g):
    """Determinant of a matrix jet with leading axes (n, n), n <= 3."""
    n = np.asarray(g.value).shape[0]
    if n == 1:
        return g[0, 0]
    if n == 2:
        return g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if n == 3:
        return (
            g[0, 0] * (g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1])
            - g[0, 1] * (g[1, 0] * g[2, 2] - g[1, 2] * g[2, 0])
            + g[0, 2] * (g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0])
        )
    raise ValueError("jet_det supports matrices up to 3x3")


def eval_map(fn, values, order):
    """Evaluate a python map component-wise on jet variables.

    ``fn`` takes ``len(values)`` scalar arguments and returns a sequence of
    outputs; the result is a tensor jet with the outputs stacked on the
    leading axis.
    """
    xs = variables(values, order)
    out = fn(*xs)
    if _is_jet(out):
        out = (out,)
    template = next((o for o in out if _is_jet(o)), None)
    if template is None:
        template = xs[0]
    return jet_stack(list(out), template=template)
