"""The extremal manifold {c U_{lambda,0}}: bubbles, tangent directions,
orthogonal projection, and distance minimization.

The center z is pinned to the origin: the whole pipeline is radial, and
translating a radial target away from the origin only increases the gradient
distance in the near-manifold regime, so the two translation parameters are
frozen and the translation direction enters only as the ell = 1 tangent
profile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketingError, ValidationError
from .grid import RadialField, RadialGrid, h1_inner
from .params import Params, hls_sobolev_constant

__all__ = ["BubbleParams", "Decomposition", "bubble", "tangent_basis",
           "dist_to_manifold", "project_orthogonal"]


@dataclass(frozen=True)
class BubbleParams:
    """Coordinates (c, lambda, z) on the extremal manifold; z pinned to 0."""
    c: float
    lam: float
    z: float = 0.0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValidationError("bubble scale lambda must be positive")
        if self.z != 0.0:
            raise ValidationError("the radial pipeline pins the bubble center at z = 0")


@dataclass(eq=False)
class Decomposition:
    """u = c U_{lambda,0} + d w with w a unit-norm tangent-orthogonal direction."""
    best: BubbleParams
    d: float
    w: RadialField

    def to_json_dict(self, w_csv_path: str | None = None) -> dict:
        return {"c": self.best.c, "lambda": self.best.lam, "d": self.d,
                "w_csv_path": w_csv_path}


def bubble(p: Params, bp: BubbleParams, grid: RadialGrid) -> RadialField:
    """c lambda^{(N-2)/2} a (1 + lambda^2 r^2)^{-(N-2)/2} on the grid."""
    amp = hls_sobolev_constant(p).bubble_amp
    e = (p.N - 2) / 2.0
    pref = bp.c * bp.lam ** e * amp
    vals = pref * (1.0 + (bp.lam * grid.nodes) ** 2) ** (-e)
    return RadialField(grid=grid, values=vals, tail_exponent=float(p.N - 2),
                       head_value=pref)


def _dlam_bubble(p: Params, lam: float, grid: RadialGrid) -> RadialField:
    """Analytic d/dlambda of the unit bubble at scale lam (ell = 0 profile)."""
    amp = hls_sobolev_constant(p).bubble_amp
    N = p.N
    r2 = (lam * grid.nodes) ** 2
    vals = ((N - 2) / (2 * lam) * amp * lam ** ((N - 2) / 2.0)
            * (1.0 - r2) * (1.0 + r2) ** (-N / 2.0))
    head = (N - 2) / (2 * lam) * amp * lam ** ((N - 2) / 2.0)
    return RadialField(grid=grid, values=vals, tail_exponent=float(N - 2), head_value=head)


def _dr_bubble(p: Params, lam: float, grid: RadialGrid) -> RadialField:
    """Analytic radial derivative of the bubble (the ell = 1 translation profile)."""
    amp = hls_sobolev_constant(p).bubble_amp
    N = p.N
    r2 = (lam * grid.nodes) ** 2
    vals = (-(N - 2) * amp * lam ** ((N + 2) / 2.0) * grid.nodes
            * (1.0 + r2) ** (-N / 2.0))
    return RadialField(grid=grid, values=vals, tail_exponent=float(N - 1), head_value=0.0)


def tangent_basis(p: Params, lam: float, grid: RadialGrid) -> list[tuple[int, RadialField]]:
    """Radial profiles of the tangent directions at U_{lam,0}, unit-normalized
    in the Dirichlet form of their sector: (0, U), (0, d/dlam U), (1, d/dr U)."""
    if lam <= 0:
        raise ValidationError("lambda must be positive")
    out = []
    for ell, f in ((0, bubble(p, BubbleParams(c=1.0, lam=lam), grid)),
                   (0, _dlam_bubble(p, lam, grid)),
                   (1, _dr_bubble(p, lam, grid))):
        nrm = math.sqrt(h1_inner(f, f, ell, p.N))
        f = RadialField(grid=grid, values=f.values / nrm,
                        tail_exponent=f.tail_exponent, head_value=f.head_value / nrm)
        out.append((ell, f))
    return out


def _half_height_scale(p: Params, u: RadialField) -> float:
    """Initial lambda guess matching the half-height radius of |u| to the bubble's."""
    absu = np.abs(u.values)
    peak = float(absu.max())
    if peak == 0.0:
        return 1.0
    below = np.nonzero(absu <= 0.5 * peak)[0]
    start = int(np.argmax(absu))
    below = below[below > start]
    if len(below) == 0:
        return 1.0
    r_half_u = u.grid.nodes[below[0]]
    r_half_bubble = math.sqrt(2.0 ** (2.0 / (p.N - 2)) - 1.0)
    return r_half_bubble / r_half_u


def dist_to_manifold(u: RadialField, p: Params) -> Decomposition:
    """Minimize ||u - c U_{lambda,0}|| in the gradient norm.

    For fixed lambda the optimal coefficient is closed-form,
    c(lambda) = <u, U_lambda>_{D^{1,2}} / ||U||^2, so the problem reduces to a
    one-dimensional minimization over log lambda: a coarse multistart scan
    followed by golden-section refinement of the best local minima.  A scan
    whose minimum sits on the boundary is reported as a bracketing failure.
    """
    grid = u.grid
    uu = h1_inner(u, u, 0, p.N)
    if uu <= 0.0:
        raise ValidationError("distance to the manifold is undefined for the zero field")
    U1 = bubble(p, BubbleParams(c=1.0, lam=1.0), grid)
    EU = h1_inner(U1, U1, 0, p.N)

    def d2_and_c(loglam: float) -> tuple[float, float]:
        Ul = bubble(p, BubbleParams(c=1.0, lam=math.exp(loglam)), grid)
        c = h1_inner(u, Ul, 0, p.N) / EU
        return uu - c * c * EU, c

    def stationarity(loglam: float) -> float:
        # d(d^2)/d(log lam) is proportional to -c <u, d/dlam U>; the inner
        # product form has no cancellation, unlike d^2 itself
        return h1_inner(u, _dlam_bubble(p, math.exp(loglam), grid), 0, p.N)

    lam0 = _half_height_scale(p, u)
    lo, hi = math.log(lam0) - math.log(100.0), math.log(lam0) + math.log(100.0)
    xs = np.linspace(lo, hi, 121)
    vals = np.array([d2_and_c(x)[0] for x in xs])
    interior = [j for j in range(1, len(xs) - 1)
                if vals[j] <= vals[j - 1] and vals[j] <= vals[j + 1]]
    if not interior:
        raise BracketingError("no interior minimum over lambda; distance not bracketed")
    interior.sort(key=lambda j: vals[j])
    best = None
    phi = (math.sqrt(5) - 1) / 2
    for j in interior[:3]:
        a, b = xs[j - 1], xs[j + 1]
        c1, d1 = b - phi * (b - a), a + phi * (b - a)
        fc, fd = d2_and_c(c1)[0], d2_and_c(d1)[0]
        while b - a > 1e-10:
            if fc < fd:
                b, d1, fd = d1, c1, fc
                c1 = b - phi * (b - a)
                fc = d2_and_c(c1)[0]
            else:
                a, c1, fc = c1, d1, fd
                d1 = a + phi * (b - a)
                fd = d2_and_c(d1)[0]
        ll = 0.5 * (a + b)
        # polish: the cancellation noise of d^2 limits the golden-section
        # minimum to ~sqrt(eps); the stationarity root does not
        width = max(b - a, 1e-9)
        sa, sb = ll - 64 * width, ll + 64 * width
        ga, gb = stationarity(sa), stationarity(sb)
        if ga * gb < 0:
            ll = brentq(stationarity, sa, sb, xtol=1e-14)
        f2, c = d2_and_c(ll)
        if best is None or f2 < best[0]:
            best = (f2, c, ll)
    d2min, c, ll = best
    lam = math.exp(ll)
    d = math.sqrt(max(d2min, 0.0))
    Ub = bubble(p, BubbleParams(c=c, lam=lam), grid)
    resid = u.values - Ub.values
    if d > 1e-9 * math.sqrt(uu):
        w = RadialField(grid=grid, values=resid / d,
                        tail_exponent=min(u.tail_exponent, p.N - 2.0),
                        head_value=(u.head_value - Ub.head_value) / d)
    else:
        d = 0.0
        w = RadialField(grid=grid, values=np.zeros(grid.n),
                        tail_exponent=np.inf, head_value=0.0)
    return Decomposition(best=BubbleParams(c=c, lam=lam), d=d, w=w)


def project_orthogonal(w: RadialField, p: Params, lam: float, ell: int) -> RadialField:
    """Remove the sector-ell tangent components of w (in the Dirichlet form)
    and renormalize to unit norm."""
    if lam <= 0:
        raise ValidationError("lambda must be positive")
    if ell < 0:
        raise ValidationError("ell must be nonnegative")
    if ell == 0:
        dirs = [bubble(p, BubbleParams(c=1.0, lam=lam), w.grid), _dlam_bubble(p, lam, w.grid)]
    elif ell == 1:
        dirs = [_dr_bubble(p, lam, w.grid)]
    else:
        dirs = []
    nrm0 = math.sqrt(h1_inner(w, w, ell, p.N))
    if nrm0 == 0.0:
        raise ValidationError("cannot project the zero field")
    vals = w.values.copy()
    out = RadialField(grid=w.grid, values=vals, tail_exponent=w.tail_exponent,
                      head_value=w.head_value)
    for _ in range(2):   # re-orthogonalize once for 1e-12 residuals
        for t in dirs:
            coef = h1_inner(out, t, ell, p.N) / h1_inner(t, t, ell, p.N)
            out = RadialField(grid=w.grid, values=out.values - coef * t.values,
                              tail_exponent=min(out.tail_exponent, t.tail_exponent),
                              head_value=out.head_value - coef * t.head_value)
    nrm = math.sqrt(max(h1_inner(out, out, ell, p.N), 0.0))
    if nrm < 1e-10 * nrm0:
        raise ValidationError("direction lies entirely inside the tangent space")
    return RadialField(grid=w.grid, values=out.values / nrm,
                       tail_exponent=out.tail_exponent, head_value=out.head_value / nrm)
