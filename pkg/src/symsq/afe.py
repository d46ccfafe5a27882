"""Approximate-functional-equation evaluation of the completed
symmetric-square L-function, valid inside the critical strip.

Write gamma_full(s) = Q^(s/2) Gamma_R(s-k+2) Gamma_C(s) and let phi be its
inverse Mellin transform.  Splitting the Mellin integral of the theta
series at a free parameter t and applying the functional equation
Lambda(s) = w Lambda~(2k-1-s) (dual twist) gives

    Lambda(s) = sum_n b_n n^-s K_s(n t) + w sum_n b~_n n^-(2k-1-s) K_(2k-1-s)(n/t)

with the incomplete Mellin kernel K_sigma(y) = (1/2pi i) int gamma_full(
sigma+z) y^-z dz/z evaluated on a vertical contour by the trapezoid rule.

The sign w is solved from the requirement that the split point t drop out;
every configuration must pass a two-parameter consistency test before any
value is reported, and kernels carry an uncertainty measured by halving
the contour step.  Radii here are validated rather than certified; the
cross-check against direct summation is part of the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpc, mpf, workprec

from .balls import BallComplex, BallReal, gamma as ball_gamma
from .dirichlet import embed_cyclotomic_complex
from .symsq_l import SymSqDescriptor, symsq_dirichlet_coeffs


class AfeInconsistencyError(ArithmeticError):
    """The two-parameter consistency test failed (wrong conductor, gamma
    shifts, or sign); carries the measured residual."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


@dataclass
class AfeConfig:
    weight: int
    conductor: int
    sign: complex | None = None          # solved from consistency when None
    target_digits: int = 18
    t_pair: tuple = (1.0, 1.25)
    contour_height: float | None = None  # T; derived from digits when None
    contour_step: float | None = None    # h; derived from digits when None
    max_terms: int = 4000
    validated: bool = field(default=False, repr=False)
    validation_residual: float = field(default=float("nan"), repr=False)


def _gamma_full_mid(s, k: int, Q: int):
    """gamma_full(s) as a raw mpmath value (s may be complex)."""
    return (
        mpf(Q) ** (s / 2)
        * mp.pi ** (-(s - k + 2) / 2) * mp.gamma((s - k + 2) / 2)
        * 2 * (2 * mp.pi) ** (-s) * mp.gamma(s)
    )


def gamma_full_ball(s: int, k: int, Q: int) -> BallComplex:
    """gamma_full at an exact integer point, as a ball."""
    q_pow = BallReal(Q).power(BallReal(mpf(s) / 2))
    g1 = ball_gamma(BallComplex.exact(mpf(s - k + 2) / 2))
    g2 = ball_gamma(BallComplex.exact(s))
    pi = BallReal.pi()
    pi_pow = BallComplex.from_real(pi.power(BallReal(mpf(-(s - k + 2)) / 2)))
    two_pi_pow = BallComplex.from_real((pi * 2).power(BallReal(-s)))
    return BallComplex.from_real(q_pow) * pi_pow * g1 * two_pi_pow * g2 * 2


class _KernelTable:
    """Contour data for K_sigma(y) at a fixed sigma, c, step h.

    The truncation height grows until the edge of the contour is
    negligible against the peak (the integrand decays like e^(-5 pi t/4)
    but carries substantial polynomial growth, so a fixed height is
    unreliable).  `uncertainty` is the relative error measured by halving
    h at probe points plus the contour-edge residual.
    """

    T_CAP = 700.0

    def __init__(self, sigma: float, c: float, k: int, Q: int,
                 h: float, edge_goal: float):
        self.sigma = sigma
        self.c = c
        self.h = h
        self._k, self._Q = k, Q
        self.nodes, self.T = self._build(sigma, c, k, Q, h, edge_goal)
        self.edge_goal = edge_goal
        self.uncertainty = None  # filled by calibrate()

    @staticmethod
    def _build(sigma, c, k, Q, h, edge_goal):
        # node at t = 0 first, then grow outward until the edge is negligible
        pos = [_gamma_full_mid(sigma + mpc(c, 0), k, Q) / mpc(c)]
        peak = float(abs(pos[0]))
        i = 1
        while True:
            t = i * h
            g = _gamma_full_mid(sigma + mpc(c, t), k, Q) / mpc(c, t)
            pos.append(g)
            mag = float(abs(g))
            peak = max(peak, mag)
            if mag <= peak * edge_goal and t > 8.0:
                break
            if t > _KernelTable.T_CAP:
                raise AfeInconsistencyError(
                    "contour failed to decay below the edge goal", mag / peak)
            i += 1
        # integrand at -t is the conjugate (real sigma, c): mirror it
        nodes = [mp.conj(g) for g in reversed(pos[1:])] + pos
        return nodes, i * h

    def eval_with(self, nodes, h, y):
        ly = mp.log(y)
        rot = mp.exp(mpc(0, -h * ly))
        n_steps = (len(nodes) - 1) // 2
        # powers rot^i for i = -n..n by recurrence from the left edge
        acc = mpc(0)
        pw = mp.exp(mpc(0, n_steps * h * ly))  # rot^(-n)
        for g in nodes:
            acc += g * pw
            pw *= rot
        return acc * h / (2 * mp.pi) * y ** mpf(-self.c)

    def eval(self, y):
        return self.eval_with(self.nodes, self.h, y)

    def calibrate(self, probe_ys, k, Q):
        """Absolute kernel uncertainty, bucketed by y.

        The h-halving residual measures discretization; the tail beyond T
        is bounded by a geometric envelope read off the observed per-node
        decay at the contour edge.
        """
        fine, _ = self._build(self.sigma, self.c, k, Q, self.h / 2, self.edge_goal)
        mid = (len(self.nodes) - 1) // 2
        g_edge = float(abs(self.nodes[-1]))
        g_prev = float(abs(self.nodes[-2]))
        ratio = min(g_edge / max(g_prev, 1e-300), 0.95)
        tail_abs = g_edge * self.h / (2 * math.pi) * ratio / (1 - ratio) * 4.0
        peak = max(float(abs(g)) for g in self.nodes)
        buckets = []
        for y in sorted(probe_ys):
            a = self.eval(y)
            b = self.eval_with(fine, self.h / 2, y)
            resid = float(abs(a - b)) * 2.0
            floor = peak * 2.0 ** (10 - mp.prec)
            buckets.append((float(y), resid + tail_abs + floor))
        self.abs_uncertainty = buckets
        self.uncertainty = max(u for _, u in buckets)  # absolute, worst bucket
        return self.uncertainty

    def eps_abs(self, y: float) -> float:
        """Absolute uncertainty bound for K(y), from the calibration buckets."""
        out = self.abs_uncertainty[-1][1]
        for ylim, u in self.abs_uncertainty:
            if y <= ylim * 4.0:
                return u
        return out


class AfeEngine:
    """Evaluator bound to one descriptor and configuration."""

    def __init__(self, desc: SymSqDescriptor, cfg: AfeConfig):
        self.desc = desc
        self.cfg = cfg
        self.k = desc.weight
        self._coeffs: list = []          # embedded b_n as mpc, 1-based storage
        self._tables: dict = {}
        self._mag_cache: dict = {}
        digits = cfg.target_digits
        self.prec = int((digits + 12) * 3.33) + 48
        self.edge_goal = 10.0 ** (-(digits + 10))
        # h must be exactly dyadic: the phase recurrence in the kernel
        # evaluation assumes node positions are exact multiples of h, and
        # the contour sum cancels heavily enough that even 1-ulp position
        # jitter pollutes the result
        h_target = cfg.contour_step or (2 * math.pi * 1.4 / ((digits + 16) * math.log(10)))
        self.h = 2.0 ** (-math.ceil(-math.log2(h_target)))

    # -- coefficients -----------------------------------------------------
    def _ensure_coeffs(self, n: int):
        if len(self._coeffs) >= n:
            return
        with workprec(self.prec):
            exact = symsq_dirichlet_coeffs(self.desc, n)
            order = exact[0].n
            zetas = [mp.exp(2j * mp.pi * j / order) for j in range(len(exact[0].coeffs))]
            vals = []
            for b in exact:
                acc = mpc(0)
                for j, cc in enumerate(b.coeffs):
                    if cc:
                        acc += mpf(cc.numerator) / cc.denominator * zetas[j]
                vals.append(acc)
            self._coeffs = vals

    def coeff(self, n: int, conjugate: bool) -> mpc:
        b = self._coeffs[n - 1]
        return mp.conj(b) if conjugate else b

    # -- kernels -----------------------------------------------------------
    def table(self, sigma: float) -> _KernelTable:
        key = round(sigma, 6)
        tab = self._tables.get(key)
        if tab is None:
            k = self.k
            c = max(2.5, (k - 2) - sigma + 2.5)
            with workprec(self.prec):
                tab = _KernelTable(sigma, c, k, self.cfg.conductor, self.h,
                                   self.edge_goal)
                probes = [mpf(3) / 2, mpf(40), mpf(400)]
                tab.calibrate(probes, k, self.cfg.conductor)
            self._tables[key] = tab
        return tab

    def _mag_bound(self, sigma: float, c: float) -> float:
        """Numeric bound for (1/2pi) int |gamma_full(sigma+c+it)/(c+it)| dt."""
        key = (round(sigma, 6), round(c, 3))
        v = self._mag_cache.get(key)
        if v is None:
            with workprec(self.prec):
                h = 0.5
                total = abs(_gamma_full_mid(sigma + mpc(c, 0), self.k,
                                            self.cfg.conductor) / mpc(c))
                peak = float(total)
                i = 1
                while True:
                    z = mpc(c, i * h)
                    mag = abs(_gamma_full_mid(sigma + z, self.k,
                                              self.cfg.conductor) / z)
                    total += 2 * mag
                    peak = max(peak, float(mag))
                    if float(mag) < peak * 1e-22 and i * h > 8:
                        break
                    if i * h > _KernelTable.T_CAP:
                        break
                    i += 1
                v = float(total * h / (2 * math.pi)) * 1.2
            self._mag_cache[key] = v
        return v

    def _tail_bound(self, sigma: float, M: int, t: float) -> float:
        """Upper bound for |sum_{n>M} b_n n^-sigma K_sigma(n t)| using
        |b_n| <= sqrt(3) zeta(2) n^k and |K(y)| <= y^-c MagBound(c),
        minimized over a grid of contour offsets c."""
        k = self.k
        best = math.inf
        for c in (2.5, 6.0, 12.0, 20.0, 30.0, 42.0, 56.0, 72.0, 90.0):
            if sigma + c <= k + 2.0:
                continue
            mb = self._mag_bound(sigma, c)
            expo = k + 1 - sigma - c
            try:
                val = (math.sqrt(3) * (math.pi**2 / 6) * mb * t ** (-c)
                       * M**expo / (sigma + c - k - 1))
            except OverflowError:
                continue
            best = min(best, val)
        return best * 1.01

    # -- the two half-sums --------------------------------------------------
    def half_sums(self, s: float, t: float, M: int):
        """(A, B, err) with Lambda(s) = A + w B up to err (absolute)."""
        sig2 = 2 * self.k - 1 - s
        self._ensure_coeffs(M)
        t1 = self.table(s)
        t2 = self.table(sig2)
        with workprec(self.prec):
            A = mpc(0)
            B = mpc(0)
            absA = 0.0
            absB = 0.0
            err = 0.0
            tm = mpf(t)
            for n in range(1, M + 1):
                cA = self.coeff(n, False) * mpf(n) ** mpf(-s)
                cB = self.coeff(n, True) * mpf(n) ** mpf(-sig2)
                termA = cA * t1.eval(n * tm)
                termB = cB * t2.eval(n / tm)
                A += termA
                B += termB
                absA += float(abs(termA))
                absB += float(abs(termB))
                err += (float(abs(cA)) * t1.eps_abs(n * t)
                        + float(abs(cB)) * t2.eps_abs(n / t))
            err += (self._tail_bound(s, M, t)
                    + self._tail_bound(sig2, M, 1.0 / t)
                    + (absA + absB) * 2.0 ** (6 - self.prec))
        return A, B, err

    def _choose_terms(self, s: float) -> int:
        sig2 = 2 * self.k - 1 - s
        target = 10.0 ** (-(self.cfg.target_digits + 2))
        scale = float(abs(_gamma_full_mid(mpf(s), self.k, self.cfg.conductor)))
        M = 40
        while M <= self.cfg.max_terms:
            worst = max(self._tail_bound(s, M, min(self.cfg.t_pair)),
                        self._tail_bound(sig2, M, 1.0 / max(self.cfg.t_pair)))
            if worst <= target * scale:
                return M
            M = int(M * 1.5) + 10
        return self.cfg.max_terms

    # -- validation ----------------------------------------------------------
    def validate(self):
        if self.cfg.validated:
            return
        k = self.k
        # solve the sign near the center of the functional equation, where
        # the two half-sums have comparable size and the solve is conditioned
        s_solve = k - 0.25
        s_check = k + 1.3
        t1, t2 = self.cfg.t_pair
        M = self._choose_terms(s_solve)
        A1, B1, e1 = self.half_sums(s_solve, t1, M)
        A2, B2, e2 = self.half_sums(s_solve, t2, M)
        with workprec(self.prec):
            if self.cfg.sign is None:
                denom = B2 - B1
                if abs(denom) < 1e-30 * max(abs(B1), abs(B2), mpf(1)):
                    raise AfeInconsistencyError("degenerate sign solve", float("inf"))
                w = (A1 - A2) / denom
                if abs(float(abs(w)) - 1.0) > 1e-4:
                    raise AfeInconsistencyError(
                        f"solved sign has |w| = {float(abs(w)):.6f} != 1",
                        abs(float(abs(w)) - 1.0))
                self.cfg.sign = complex(w)
            w = mpc(self.cfg.sign)
            Mc = self._choose_terms(s_check)
            C1, D1, f1 = self.half_sums(s_check, t1, Mc)
            C2, D2, f2 = self.half_sums(s_check, t2, Mc)
            v1, v2 = C1 + w * D1, C2 + w * D2
            scale = max(float(abs(v1)), float(abs(v2)), 1e-300)
            residual = float(abs(v1 - v2)) / scale
            budget = (f1 + f2) / scale + 10.0 ** (-(self.cfg.target_digits - 2))
        if residual > budget:
            raise AfeInconsistencyError(
                "two-parameter consistency failed: wrong conductor, gamma "
                "shifts, or sign", residual)
        self.cfg.validated = True
        self.cfg.validation_residual = residual

    # -- values ----------------------------------------------------------------
    def completed_value(self, s) -> BallComplex:
        self.validate()
        t1, t2 = self.cfg.t_pair
        M = self._choose_terms(float(s))
        A1, B1, e1 = self.half_sums(s, t1, M)
        A2, B2, e2 = self.half_sums(s, t2, M)
        with workprec(self.prec):
            w = mpc(self.cfg.sign)
            v1 = A1 + w * B1
            v2 = A2 + w * B2
            mid = (v1 + v2) / 2
            rad = (float(abs(v1 - v2)) + e1 + e2) * 1.01 + \
                float(abs(mid)) * 2.0 ** (8 - self.prec)
        return BallComplex(mid, rad)

    def l_value(self, s: int) -> BallComplex:
        """L(s) = Lambda(s) / gamma_full(s), in the strip 0 < Re(s) < 2k-1."""
        if not (0 < s < 2 * self.k - 1):
            raise ValueError("functional-equation evaluation valid for 0 < Re(s) < 2k-1")
        with workprec(self.prec):
            lam = self.completed_value(s)
            gam = gamma_full_ball(s, self.k, self.cfg.conductor)
            return lam / gam


def l_afe(desc: SymSqDescriptor, cfg: AfeConfig, s: int,
          engine_cache: dict | None = None) -> BallComplex:
    """Ball containing L^imp(Sym^2 f, chi, s) via the functional equation."""
    if engine_cache is not None:
        key = (id(desc), cfg.conductor, cfg.target_digits)
        eng = engine_cache.get(key)
        if eng is None:
            eng = AfeEngine(desc, cfg)
            engine_cache[key] = eng
    else:
        eng = AfeEngine(desc, cfg)
    return eng.l_value(s)
