"""Doubly-adaptive tanh-sinh quadrature over ball arithmetic.

The 2D driver integrates over a truncated modular fundamental-domain
strip {x0 <= x <= x1, x^2 + y^2 >= r^2, y <= y_cut} with an
analytic tail bound for y > y_cut supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpf

from .balls import RUP, BallReal, ball_sum


class QuadratureError(ArithmeticError):
    """Refinement stalled before reaching the requested tolerance."""


def _tanh_sinh_nodes(level: int, prec_digits: float, odd_only: bool):
    """Nodes/weights on [-1, 1] at mesh h = 2^-level (h-weight included).

    With odd_only, only the nodes new at this level (odd multiples of h)
    are returned, so refinements can reuse previous sums.  Cached per
    (level, digits bucket, parity, precision).
    """
    key = (level, int(prec_digits), odd_only, mp.prec)
    cached = _NODE_CACHE.get(key)
    if cached is not None:
        return cached
    h = mpf(2) ** (-level)
    t_max = math.asinh(2.0 / math.pi * math.log(4.0 * 10.0 ** (prec_digits + 4)))
    kmax = int(t_max / float(h)) + 1
    half = mp.pi / 2
    nodes = []
    for kk in range(-kmax, kmax + 1):
        if odd_only and kk % 2 == 0:
            continue
        t = kk * h
        sh = mp.sinh(t)
        ch = mp.cosh(t)
        x = mp.tanh(half * sh)
        w = half * ch / mp.cosh(half * sh) ** 2 * h
        nodes.append((x, w))
    _NODE_CACHE[key] = nodes
    return nodes


_NODE_CACHE: dict = {}


def integrate_1d(f, a, b, tol: float, max_level: int = 10, min_level: int = 3) -> BallReal:
    """Adaptive tanh-sinh integral of a ball-valued integrand on [a, b].

    Each refinement halves the mesh and evaluates only the new nodes.
    The returned radius combines the integrand-ball radii, a Richardson
    difference between the last two refinement levels, and float slack.
    """
    a = a if isinstance(a, BallReal) else BallReal(a)
    b = b if isinstance(b, BallReal) else BallReal(b)
    scale = (b - a) * BallReal(mpf(1) / 2)
    center = (a + b) * BallReal(mpf(1) / 2)
    digits = max(2.0, -math.log10(tol) + 2)
    half_ball = BallReal(mpf(1) / 2)
    prev = None
    total = None
    for level in range(min_level, max_level + 1):
        odd_only = total is not None
        nodes = _tanh_sinh_nodes(level, digits, odd_only)
        partial = None
        for x, w in nodes:
            xb = center + scale * BallReal(x)
            wb = scale * BallReal(w)
            val = f(xb) * wb
            partial = val if partial is None else partial + val
        prev = total
        total = partial if total is None else total * half_ball + partial
        if prev is not None:
            # Richardson difference, doubled: successive tanh-sinh sums can
            # land close enough together that the raw difference underestimates
            step_err = 2.0 * abs(float(total.mid - prev.mid)) * RUP
            if step_err + total.rad <= tol:
                return BallReal(total.mid, (total.rad + step_err) * RUP)
    raise QuadratureError(
        f"tanh-sinh refinement stalled: last radius {total.rad:.3e}, tol {tol:.3e}"
    )


@dataclass(frozen=True)
class FundamentalDomainStrip:
    """Truncated region {x_min <= x <= x_max, x^2+y^2 >= circle_radius^2, y <= y_cut}."""

    x_min: object
    x_max: object
    y_cut: object
    circle_radius: object = 1

    def lower_boundary(self, x: BallReal) -> BallReal:
        r2 = BallReal(self.circle_radius) ** 2
        gap = r2 - x * x
        if float(gap.mid) <= gap.rad:
            return BallReal(0)
        return gap.sqrt()


def integrate_2d(f, region: FundamentalDomainStrip, tol, tail=None,
                 max_level: int = 9) -> BallReal:
    """Integral of f(x, y) (ball-valued) over the truncated strip, plus tail.

    tail: BallReal bound for the part of the integral above y_cut; it is
    added to the result with its own radius (pass None for a zero tail).
    """
    tol = float(tol if not isinstance(tol, BallReal) else tol.mid)
    inner_tol = tol / 4.0

    def outer(xb: BallReal) -> BallReal:
        y0 = region.lower_boundary(xb)
        return integrate_1d(lambda yb: f(xb, yb), y0, BallReal(region.y_cut),
                            inner_tol, max_level=max_level)

    result = integrate_1d(outer, BallReal(region.x_min), BallReal(region.x_max),
                          tol / 2.0, max_level=max_level)
    if tail is not None:
        tail_ball = tail if isinstance(tail, BallReal) else BallReal(tail)
        result = result + BallReal(tail_ball.mid, tail_ball.rad)
    return result


def truncated_domain_area(y_cut) -> BallReal:
    """Closed-form Euclidean area of the standard strip truncated at y_cut.

    area = y_cut - sqrt(3)/4 - pi/6  (for x in [-1/2, 1/2], unit circle).
    """
    y = BallReal(y_cut) if not isinstance(y_cut, BallReal) else y_cut
    root3 = BallReal(3).sqrt()
    return y - root3 * BallReal(mpf(1) / 4) - BallReal.pi() * BallReal(mpf(1) / 6)
