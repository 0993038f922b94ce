"""Radial fields on log-spaced grids: quadrature, differentiation, inner products.

A field stores node values together with a declared far-field decay exponent
(`tail_exponent`: the field behaves like values[-1] * (r/r_max)^{-tail_exponent}
beyond the grid) and the extrapolated value at the origin (`head_value`).
Integrals carry closed-form head/tail corrections, which matters because the
extremal bubbles have power-law tails whose truncation error would otherwise
dominate everything.

Fields may additionally carry jump markers: `jumps` is a tuple of
(node_index, drop) pairs recording that the field falls by `drop` immediately
to the right of that node.  The stored node value is the left limit.  Markers
are consumed by the Riesz convolution to integrate piecewise-smooth fields
(such as ball indicators) exactly; they are not serialized to CSV.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from ._quadrature import derivative_matrix, uniform_weights
from .errors import DivergentTailError, ValidationError
from .params import sphere_area

__all__ = [
    "RadialGrid", "RadialField", "make_log_grid", "integrate", "integrate_from",
    "differentiate", "h1_inner", "field_abs_pow", "field_signed_pow", "dilate",
    "indicator_field", "write_field_csv", "read_field_csv",
]


@dataclass(eq=False)
class RadialGrid:
    """Log-spaced nodes plus Gregory-corrected log-measure quadrature weights."""
    r_min: float
    r_max: float
    nodes: np.ndarray
    log_weights: np.ndarray   # weights for int g(x) dx, x = log r

    def __post_init__(self):
        if not (np.all(np.diff(self.nodes) > 0) and self.nodes[0] > 0):
            raise ValidationError("grid nodes must be positive and strictly increasing")
        if self.log_weights.min() <= 0:
            raise ValidationError("quadrature weights must be positive")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def x(self) -> np.ndarray:
        return np.log(self.nodes)

    @property
    def h(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.n - 1)

    def weights(self, N: int) -> np.ndarray:
        """Quadrature weights for int_{r_min}^{r_max} f(r) r^{N-1} dr."""
        return self.log_weights * self.nodes ** N

    def key(self) -> tuple:
        return (self.n, round(math.log(self.r_min), 12), round(math.log(self.r_max), 12))

    def index_of(self, r: float) -> int:
        """Index of the node at radius r (must match to 1e-9 in log)."""
        i = int(np.argmin(np.abs(self.x - math.log(r))))
        if abs(self.x[i] - math.log(r)) > 1e-9:
            raise ValidationError(f"radius {r} does not coincide with a grid node")
        return i


@dataclass(eq=False)
class RadialField:
    """Node values of a radial function plus head/tail extrapolation data."""
    grid: RadialGrid
    values: np.ndarray
    tail_exponent: float   # decay exponent beyond r_max; np.inf for hard truncation
    head_value: float      # extrapolated value at r -> 0
    jumps: tuple = dc_field(default_factory=tuple)   # ((node_index, drop), ...)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValidationError("values must have one entry per grid node")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("field values must be finite at every node")

    def tail_value(self, r: np.ndarray) -> np.ndarray:
        v = self.values[-1]
        if v == 0.0 or np.isinf(self.tail_exponent):
            return np.zeros_like(r)
        return v * (r / self.grid.r_max) ** (-self.tail_exponent)


def make_log_grid(r_min: float, r_max: float, n: int) -> RadialGrid:
    """Log-spaced grid with composite quadrature weights in the log variable."""
    if not (0 < r_min < r_max):
        raise ValidationError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    if n < 16:
        raise ValidationError(f"need n >= 16 nodes, got {n}")
    x = np.linspace(math.log(r_min), math.log(r_max), int(n))
    h = x[1] - x[0]
    return RadialGrid(r_min=float(r_min), r_max=float(r_max),
                      nodes=np.exp(x), log_weights=uniform_weights(int(n), h))


def _tail_correction(f: RadialField, moment: int) -> float:
    """Closed form of int_{r_max}^inf f(r) r^{moment-1} dr for the declared tail."""
    v = f.values[-1]
    if v == 0.0 or np.isinf(f.tail_exponent):
        return 0.0
    margin = f.tail_exponent - moment
    if margin <= 0:
        raise DivergentTailError(
            f"tail exponent {f.tail_exponent} too small for the r^{moment - 1} moment")
    return v * f.grid.r_max ** moment / margin


def integrate(f: RadialField, N: int) -> float:
    """omega_{N-1} * int_0^inf f(r) r^{N-1} dr with head/tail extensions."""
    core = float(f.grid.weights(N) @ f.values)
    head = f.head_value * f.grid.r_min ** N / N
    return sphere_area(N) * (core + head + _tail_correction(f, N))


def integrate_from(f: RadialField, N: int, i0: int) -> float:
    """Same as integrate but over [nodes[i0], infinity) only."""
    g = f.grid
    w = uniform_weights(g.n, g.h, i0=i0) * g.nodes ** N
    return sphere_area(N) * (float(w @ f.values) + _tail_correction(f, N))


@lru_cache(maxsize=32)
def _dmat(n: int, h: float, order: int) -> np.ndarray:
    return derivative_matrix(n, h, order)


def differentiate(f: RadialField) -> RadialField:
    """Radial derivative df/dr via centered differences in the log variable."""
    g = f.grid
    if g.n < 9:
        raise ValidationError("differentiate needs at least 9 nodes")
    dx = _dmat(g.n, g.h, 1) @ f.values
    return RadialField(grid=g, values=dx / g.nodes,
                       tail_exponent=f.tail_exponent + 1.0, head_value=0.0)


def h1_inner(u: RadialField, v: RadialField, ell: int, N: int) -> float:
    """Dirichlet form of degree-ell modes:
    omega_{N-1} * int (u'v' + ell(ell+N-2) u v / r^2) r^{N-1} dr."""
    g = u.grid
    if v.grid is not g and v.grid.key() != g.key():
        raise ValidationError("h1_inner requires both fields on the same grid")
    if ell < 0:
        raise ValidationError("ell must be nonnegative")
    D = _dmat(g.n, g.h, 1)
    ux, vx = D @ u.values, D @ v.values
    ew = g.log_weights * np.exp((N - 2) * g.x)
    total = float(ew @ (ux * vx))
    # gradient tail: u' ~ u'(r_max) (r/r_max)^{-(p_u+1)}
    pu, pv = u.tail_exponent + 1, v.tail_exponent + 1
    du_end, dv_end = ux[-1] / g.r_max, vx[-1] / g.r_max
    if du_end != 0.0 and dv_end != 0.0 and not (np.isinf(pu) or np.isinf(pv)):
        margin = pu + pv - N
        if margin <= 0:
            raise DivergentTailError("gradient tail not integrable")
        total += du_end * dv_end * g.r_max ** N / margin
    if ell > 0:
        cf = ell * (ell + N - 2)
        total += cf * float(ew @ (u.values * v.values))
        total += cf * u.head_value * v.head_value * g.r_min ** (N - 2) / (N - 2)
        if u.values[-1] != 0.0 and v.values[-1] != 0.0 \
                and not (np.isinf(u.tail_exponent) or np.isinf(v.tail_exponent)):
            margin = u.tail_exponent + v.tail_exponent - (N - 2)
            if margin <= 0:
                raise DivergentTailError("centrifugal tail not integrable")
            total += cf * u.values[-1] * v.values[-1] * g.r_max ** (N - 2) / margin
    return sphere_area(N) * total


def field_abs_pow(f: RadialField, q: float) -> RadialField:
    """|f|^q with the tail exponent scaled accordingly."""
    return RadialField(grid=f.grid, values=np.abs(f.values) ** q,
                       tail_exponent=f.tail_exponent * q,
                       head_value=abs(f.head_value) ** q)


def field_signed_pow(f: RadialField, q: float) -> RadialField:
    """|f|^{q-1} f, the sign-preserving power used by the Euler-Lagrange map."""
    return RadialField(grid=f.grid, values=np.sign(f.values) * np.abs(f.values) ** q,
                       tail_exponent=f.tail_exponent * q,
                       head_value=math.copysign(abs(f.head_value) ** q, f.head_value))


def _resample_uniform(x: np.ndarray, values: np.ndarray, xq: np.ndarray,
                      order: int = 8) -> np.ndarray:
    """Local Lagrange interpolation of degree order-1 on a uniform grid.

    Smoother than a cubic spline (whose knot-scale noise pollutes subsequent
    high-order differentiation)."""
    n = len(x)
    h = x[1] - x[0]
    t = (xq - x[0]) / h
    j0 = np.clip(np.floor(t).astype(int) - order // 2 + 1, 0, n - order)
    loc = t - j0
    out = np.zeros(len(xq))
    for k in range(order):
        lk = np.ones(len(xq))
        for m in range(order):
            if m != k:
                lk *= (loc - m) / (k - m)
        out += lk * values[j0 + k]
    return out


def dilate(f: RadialField, lam: float, N: int) -> RadialField:
    """Energy-normalized dilation lam^{(N-2)/2} f(lam r), resampled on the grid."""
    if lam <= 0:
        raise ValidationError("dilation parameter must be positive")
    g = f.grid
    xq = g.x + math.log(lam)
    vals = np.empty(g.n)
    inside = (xq >= g.x[0]) & (xq <= g.x[-1])
    vals[inside] = _resample_uniform(g.x, f.values, xq[inside])
    vals[xq < g.x[0]] = f.head_value
    above = xq > g.x[-1]
    if np.any(above):
        vals[above] = f.tail_value(np.exp(xq[above]))
    scale = lam ** ((N - 2) / 2.0)
    return RadialField(grid=g, values=scale * vals, tail_exponent=f.tail_exponent,
                       head_value=scale * f.head_value)


def indicator_field(grid: RadialGrid, r_cut: float) -> RadialField:
    """Indicator of the centered ball of radius r_cut (r_cut must be a node)."""
    b = grid.index_of(r_cut)
    vals = np.zeros(grid.n)
    vals[:b + 1] = 1.0
    return RadialField(grid=grid, values=vals, tail_exponent=np.inf,
                       head_value=1.0, jumps=((b, 1.0),))


def write_field_csv(f: RadialField, path: str) -> None:
    """CSV format: header r,value; 17 significant digits; footer metadata rows."""
    with open(path, "w") as fh:
        fh.write("r,value\n")
        for r, v in zip(f.grid.nodes, f.values):
            fh.write(f"{r:.17g},{v:.17g}\n")
        fh.write(f"#tail_exponent={f.tail_exponent:.17g}\n")
        fh.write(f"#head_value={f.head_value:.17g}\n")


def read_field_csv(path: str) -> RadialField:
    """Read a field written by write_field_csv (bit-exact round trip)."""
    rs, vs = [], []
    meta = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "r,value":
            raise ValidationError(f"unexpected CSV header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key] = float(val)
                continue
            a, _, b = line.partition(",")
            rs.append(float(a))
            vs.append(float(b))
    if "tail_exponent" not in meta or "head_value" not in meta:
        raise ValidationError("CSV missing tail_exponent/head_value footer rows")
    nodes = np.array(rs)
    if len(nodes) < 16:
        raise ValidationError("CSV field has too few nodes")
    x = np.log(nodes)
    h = (x[-1] - x[0]) / (len(x) - 1)
    if np.max(np.abs(np.diff(x) - h)) > 1e-9 * abs(h):
        raise ValidationError("CSV nodes are not log-uniform")
    grid = RadialGrid(r_min=float(nodes[0]), r_max=float(nodes[-1]), nodes=nodes,
                      log_weights=uniform_weights(len(nodes), h))
    return RadialField(grid=grid, values=np.array(vs),
                       tail_exponent=meta["tail_exponent"], head_value=meta["head_value"])
