"""Representation-theoretic bookkeeping at finite (mod-p) level:
graded filtration characters, criticality and exceptional/unfortunate
classification, Selmer-rank tables and order predictions, hypothesis
checking, the tau-witness search, Kolyvagin-prime scans, and finite
group-cohomology brute force.

Everything here certifies only finite-level shadows of statements about
Z_p-lattices and infinite extensions; reports say so explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dirichlet import DirichletCharacter
from .padics import PadicNumber, sqrt_mod_prime


# ---------------------------------------------------------------------------
# Criticality and the Bloch-Kato step function
# ---------------------------------------------------------------------------

def is_critical_point(s: int, k: int, twist_parity: int) -> bool:
    """Critical values of the twisted symmetric square in weight k:
    1 <= s <= k-1 with (-1)^s = -parity, or k <= s <= 2k-2 with
    (-1)^s = parity."""
    sign = 1 if s % 2 == 0 else -1
    if 1 <= s <= k - 1:
        return sign == -twist_parity
    if k <= s <= 2 * k - 2:
        return sign == twist_parity
    return False


def bk_filtration_step(j: int, k: int) -> int:
    """The integer m cutting out the Bloch-Kato local condition at twist j."""
    if j <= 0:
        return 0
    if j <= k - 1:
        return 1
    if j <= 2 * k - 2:
        return 2
    return 3


def rank_table(i: int, same_parity: bool) -> int:
    """Generic rank difference of the two Iwasawa-theoretic Selmer modules
    at filtration step i (table transcription: 2-i for equal parity of the
    component and the twist, 1-i for opposite)."""
    if i not in (0, 1, 2, 3):
        raise ValueError("filtration step must be in 0..3")
    return (2 - i) if same_parity else (1 - i)


def predict_selmer_order(p: int, n: int, c: int = 1, h0: int = 1) -> int:
    """Predicted Selmer order p^(c n) / h0 from the descent formula
    #H^1 * #H^0 = p^(c n); raises if h0 does not divide p^(c n).

    n = 0 predicts the trivial group; n = 1, c = 1, h0 = 1 predicts
    "trivial or cyclic of order p" as the upper bound p.
    """
    if n < 0 or c < 1 or h0 < 1:
        raise ValueError("need n >= 0, c >= 1, h0 >= 1")
    total = p ** (c * n)
    if total % h0:
        raise ValueError(f"h0 = {h0} does not divide p^(cn) = {total}")
    return total // h0


# ---------------------------------------------------------------------------
# Graded filtration characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedCharacter:
    """kappa^r x unram(lambda) acting on one graded piece of the filtration."""

    cyclotomic_exponent: int
    frobenius_value: PadicNumber
    h0_vanishes: bool
    reason: str


def graded_characters(k: int, alpha: PadicNumber, beta: PadicNumber,
                      psi_p: PadicNumber, eps_p: PadicNumber):
    """The filtration's three graded characters and the vanishing verdicts
    for invariants over the cyclotomic tower:

        Gr0 = kappa   x unram(alpha^2 psi(p)),
        Gr1 = kappa^k x unram(eps(p) psi(p)),
        Gr2 = kappa^(2k-1) x unram(beta^2 psi(p) / p^(2k-2)).

    Gr0 and Gr2 invariants always vanish (the unramified values have
    archimedean size p^(k-1), so cannot be 1; verified here through the
    valuation bookkeeping v(alpha)=0, v(beta)=k-1).  Gr1 vanishes iff
    eps(p) psi(p) != 1, an exact root-of-unity comparison.
    """
    if not alpha.is_unit():
        raise ValueError("ordinary pair required: v(alpha) = 0")
    if beta.valuation() != k - 1:
        raise ValueError(f"expected v(beta) = k - 1 = {k - 1}, got {beta.valuation()}")
    p = alpha.p
    pk = PadicNumber.from_rational(p ** (2 * k - 2), p, beta.prec + 2 * k)
    lam0 = alpha * alpha * psi_p
    lam1 = eps_p * psi_p
    lam2 = beta * beta * psi_p / pk
    one = PadicNumber.from_rational(1, p, lam1.prec)
    gr1_nonvanishing = (lam1 - one).is_zero()
    weight_reason = ("unramified value has archimedean size p^(k-1) != 1 "
                     "(Weil weight), k >= 2")
    return (
        GradedCharacter(1, lam0, True, weight_reason),
        GradedCharacter(k, lam1, not gr1_nonvanishing,
                        "eps(p) psi(p) != 1" if not gr1_nonvanishing
                        else "eps(p) psi(p) = 1: invariants do not vanish"),
        GradedCharacter(2 * k - 1, lam2, True, weight_reason),
    )


# ---------------------------------------------------------------------------
# Point classification
# ---------------------------------------------------------------------------

@dataclass
class PointClassification:
    j: int
    critical: bool
    delta: int | None                  # 0 for low range, 1 for high range
    bk_step: int                       # m(j)
    multiplier_vanishes: bool          # E (low) / Eprime (high) at this point
    exceptional_zero: bool
    unfortunate: bool
    witness_c: int | None
    obstruction: str | None
    schneider_caveat: bool


def classify_point(j: int, chi: DirichletCharacter, k: int,
                   psi: DirichletCharacter,
                   eps: DirichletCharacter | None, p: int,
                   regular_p: bool | None = None,
                   c_search_bound: int = 200) -> PointClassification:
    """Full classification of the twist point j + chi.

    chi is the finite-order cyclotomic-direction character (modulus a power
    of p; modulus 1 for trivial).  psi is the fixed twist and eps the
    nebentypus (None = trivial).
    """
    epspsi = psi if eps is None else psi * eps
    twist_parity = psi.parity() * chi.parity()
    critical = is_critical_point(j, k, twist_parity)
    delta = None
    if critical:
        delta = 0 if j <= k - 1 else 1
    step = bk_filtration_step(j, k)

    chi_trivial = chi.is_trivial()
    epspsi_p_is_one = _char_value_is_one(epspsi, p)
    vanishes = chi_trivial and epspsi_p_is_one and (
        j == k - 1 if (delta == 0) else j == k if (delta == 1) else False)
    exceptional = chi_trivial and epspsi_p_is_one and j == k

    unfortunate, witness, obstruction, schneider = _junk_factor_analysis(
        j, chi, k, epspsi, p, regular_p, c_search_bound)
    return PointClassification(
        j=j, critical=critical, delta=delta, bk_step=step,
        multiplier_vanishes=vanishes, exceptional_zero=exceptional,
        unfortunate=unfortunate, witness_c=witness, obstruction=obstruction,
        schneider_caveat=schneider)


def _char_value_is_one(chi: DirichletCharacter, n: int) -> bool:
    t = chi.exponent(n)
    return t == 0


def _junk_factor_analysis(j, chi, k, epspsi, p, regular_p, bound):
    """Decide whether the smoothing factor times the parasitic Dirichlet
    value can be made non-vanishing at s = j + chi.

    Case analysis:
      * j = k with eps psi and chi both quadratic but not both trivial:
        the c-factor vanishes identically and there is no pole to cancel;
        the point is unfortunate.
      * j = k, eps psi = chi = 1: the zeta pole cancels the forced zero of
        the c-factor; never unfortunate.
      * otherwise a witness c with nonzero smoothing factor exists; the
        Dirichlet-value side is unconditional at j = k (Leopoldt), needs
        regularity or same-component transport when eps psi = 1 and j > k,
        and is conditional (Schneider) for nontrivial eps psi at j > k.
    """
    epspsi_quadratic = (epspsi.order <= 2)
    chi_quadratic = (chi.order <= 2)
    both_trivial = epspsi.is_trivial() and chi.is_trivial()

    if j == k and epspsi_quadratic and chi_quadratic and not both_trivial:
        return True, None, ("j = k with eps*psi and chi quadratic, not both "
                            "trivial: c-factor vanishes with no pole to cancel"), False
    if j == k and both_trivial:
        return False, 2, None, False  # pole cancellation; any c > 1 works

    witness = _find_smoothing_witness(j, chi, k, epspsi, p, bound)
    if witness is None:
        return True, None, "no smoothing witness c below the search bound", False

    schneider = False
    if j > k:
        if epspsi.is_trivial():
            same_component = (j % (p - 1)) == (k % (p - 1))
            if not (regular_p or same_component):
                schneider = True
        else:
            schneider = True
    return False, witness, None, schneider


def _find_smoothing_witness(j, chi, k, epspsi, p, bound):
    """Smallest c > 1 coprime to 6 p N with
    c^2 - c^(2j-2k+2) chi(c)^2 epspsi(c)^-2 != 0 (exact)."""
    from .cyclotomic import Cyclotomic

    N = epspsi.modulus * max(chi.modulus, 1)
    for c in range(2, bound):
        if math.gcd(c, 6 * p * N) != 1:
            continue
        pec = epspsi.value(c)
        if pec.is_zero():
            continue
        chic = chi.value(c) if not chi.is_trivial() else Cyclotomic.one(1)
        if chic.is_zero():
            continue
        expo = 2 * j - 2 * k + 2
        val = Cyclotomic.from_rational(c * c) - (
            Cyclotomic.from_rational(int(c) ** expo) * chic * chic * pec.inverse() ** 2)
        if not val.is_zero():
            return c
    return None


# ---------------------------------------------------------------------------
# Hypothesis checking
# ---------------------------------------------------------------------------

@dataclass
class HypothesisReport:
    p: int
    p_at_least_7: bool
    degree_one_prime: bool
    big_image: bool
    u_witness: int | None
    epspsi_p_nontrivial: bool
    details: dict = field(default_factory=dict)

    def all_pass(self) -> bool:
        return (self.p_at_least_7 and self.degree_one_prime and self.big_image
                and self.u_witness is not None and self.epspsi_p_nontrivial)


def hypothesis_check(p: int, k: int, level: int, psi: DirichletCharacter,
                     eps: DirichletCharacter | None,
                     exceptional_primes: frozenset,
                     zeta_residue: int | None = None) -> HypothesisReport:
    """Machine-checkable shadows of the Euler-system hypotheses.

    * p >= 7;
    * the coefficient prime has degree 1 (here: the values of psi lie in
      Q_p, i.e. ord(psi) divides p - 1);
    * big image (p outside the ingested exceptional-prime set);
    * existence of u in (Z/(N_f N_psi))^* with eps psi(u) != +-1 mod p and
      psi(u) a square mod p (exhaustive search, using the mod-p residue of
      the character values);
    * eps psi(p) != 1.
    """
    epspsi = psi if eps is None else psi * eps
    degree_one = (p - 1) % max(psi.order, 1) == 0 and \
        (eps is None or (p - 1) % max(eps.order, 1) == 0)
    big_image = p not in exceptional_primes
    u_witness = None
    details = {}
    if degree_one:
        residues = _character_residues_mod_p(psi, p, zeta_residue)
        eps_res = _character_residues_mod_p(eps, p, None) if eps is not None else None
        N = level * psi.modulus * (eps.modulus if eps is not None else 1)
        for u in range(2, N + 1):
            if math.gcd(u, N) != 1:
                continue
            pu = residues.get(u % psi.modulus if psi.modulus > 1 else 0)
            if pu is None:
                continue
            eu = 1 if eps_res is None else eps_res.get(u % eps.modulus)
            if eu is None:
                continue
            val = pu * eu % p
            if val in (1, p - 1):
                continue
            if sqrt_mod_prime(pu, p) is None:
                continue
            u_witness = u
            break
        details["u_search_modulus"] = N
    epspsi_p = _char_value_is_one(epspsi, p)
    return HypothesisReport(
        p=p,
        p_at_least_7=(p >= 7),
        degree_one_prime=degree_one,
        big_image=big_image,
        u_witness=u_witness,
        epspsi_p_nontrivial=not epspsi_p,
        details=details,
    )


def _character_residues_mod_p(chi: DirichletCharacter | None, p: int,
                              zeta_residue: int | None) -> dict:
    """Map a -> chi(a) mod p, for characters of order dividing p - 1.

    The image of zeta_ord is the power of a fixed primitive root chosen by
    zeta_residue when supplied (to match an embedding convention); else
    the lexicographically smallest residue of the right order.
    """
    if chi is None:
        return {0: 1}
    ord_ = max(chi.order, 1)
    if (p - 1) % ord_:
        raise ValueError("character order does not divide p - 1")
    if ord_ == 1:
        root = 1
    elif zeta_residue is not None:
        root = zeta_residue % p
        if pow(root, ord_, p) != 1 or any(pow(root, d, p) == 1
                                          for d in range(1, ord_)):
            raise ValueError("zeta_residue is not a primitive ord-th root mod p")
    else:
        root = next(r for r in range(2, p)
                    if pow(r, ord_, p) == 1
                    and all(pow(r, d, p) != 1 for d in range(1, ord_)))
    out = {}
    for a in range(chi.modulus if chi.modulus > 1 else 1):
        t = chi.exponent(a)
        if t is not None:
            out[a] = pow(root, int(t * ord_), p)
    if chi.modulus == 1:
        out[0] = 1
    return out


# ---------------------------------------------------------------------------
# tau witness
# ---------------------------------------------------------------------------

@dataclass
class TauWitness:
    u: int
    diag_model: tuple          # 2x2 diagonal entries mod p
    sym_action: tuple          # 3 diagonal values on the symmetric side
    tprime_action: int         # scalar on the alternating side
    rank_A_minus_I: int
    cokernel_cyclic: bool
    tprime_invertible: bool


class NoWitnessError(ValueError):
    pass


def find_tau(p: int, k: int, level: int, psi: DirichletCharacter,
             eps: DirichletCharacter | None,
             exceptional_primes: frozenset,
             zeta_residue: int | None = None) -> TauWitness:
    """A 2x2 diagonal model diag(eps(u) sqrt(psi(u)), sqrt(psi(u))^-1) whose
    symmetric-square twist has cokernel of (tau - 1) free of rank 1, while
    tau - 1 is invertible on the alternating line (value eps psi(u))."""
    rep = hypothesis_check(p, k, level, psi, eps, exceptional_primes, zeta_residue)
    if rep.u_witness is None:
        raise NoWitnessError("hypotheses fail: no u with eps psi(u) != +-1 "
                             "and psi(u) a square mod p")
    u = rep.u_witness
    residues = _character_residues_mod_p(psi, p, zeta_residue)
    psi_u = residues[u % psi.modulus if psi.modulus > 1 else 0]
    eps_u = 1
    if eps is not None:
        eps_u = _character_residues_mod_p(eps, p, None)[u % eps.modulus]
    s = sqrt_mod_prime(psi_u, p)
    d1 = eps_u * s % p
    d2 = pow(s, -1, p)
    # symmetric square of diag(d1, d2), twisted by psi(u) (cyclotomic part trivial)
    sym = (d1 * d1 % p, d1 * d2 % p, d2 * d2 % p)
    sym = tuple(v * psi_u % p for v in sym)
    tprime = eps_u * psi_u % p  # det(diag) * psi(u) = eps(u) psi(u)
    A_minus_I = [[(sym[i] - 1) % p if i == j else 0 for j in range(3)] for i in range(3)]
    rank = rank_mod_p(A_minus_I, p)
    return TauWitness(
        u=u, diag_model=(d1, d2), sym_action=sym, tprime_action=tprime,
        rank_A_minus_I=rank, cokernel_cyclic=(rank >= 2),
        tprime_invertible=(tprime != 1),
    )


def verify_tau_matrix(A, tprime: int, p: int) -> bool:
    """Conjugation-invariant verification of a 3x3 tau-model."""
    m = [[(A[i][j] - (1 if i == j else 0)) % p for j in range(3)] for i in range(3)]
    return rank_mod_p(m, p) >= 2 and tprime % p != 1


# ---------------------------------------------------------------------------
# Linear algebra mod p and Smith form over Z
# ---------------------------------------------------------------------------

def rank_mod_p(mat, p: int) -> int:
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(rows):
            if r != rank and m[r][c] % p:
                f = m[r][c]
                m[r] = [(v - f * w) % p for v, w in zip(m[r], m[rank])]
        rank += 1
    return rank


def smith_normal_form(mat):
    """Smith normal form over Z of a small integer matrix; returns the
    diagonal invariant factors (nonnegative)."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    diag = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero pivot with smallest absolute value
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        m[top], m[i0] = m[i0], m[top]
        for r in range(rows):
            m[r][top], m[r][j0] = m[r][j0], m[r][top]
        # clear the row and column
        dirty = False
        for i in range(top + 1, rows):
            if m[i][top]:
                q = m[i][top] // m[top][top]
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
                if m[i][top]:
                    dirty = True
        for j in range(top + 1, cols):
            if m[top][j]:
                q = m[top][j] // m[top][top]
                for r in range(rows):
                    m[r][j] -= q * m[r][top]
                if m[top][j]:
                    dirty = True
        if dirty:
            continue
        # ensure divisibility of later entries
        pivot = abs(m[top][top])
        fixup = False
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if m[i][j] % pivot:
                    m[top] = [a + b for a, b in zip(m[top], m[i])]
                    fixup = True
                    break
            if fixup:
                break
        if fixup:
            continue
        diag.append(pivot)
        top += 1
    while len(diag) < min(rows, cols):
        diag.append(0)
    return diag


# ---------------------------------------------------------------------------
# Kolyvagin-prime scan
# ---------------------------------------------------------------------------

@dataclass
class FrobeniusModel:
    ell: int
    companion: tuple               # 2x2 matrix of Frobenius on the standard side, mod p
    sym_matrix: tuple              # 3x3 matrix on the symmetric-square twist, mod p
    tprime: int                    # scalar on the alternating line, mod p
    regular_semisimple: bool
    rank_A_minus_I: int
    cokernel_cyclic: bool
    tprime_invertible: bool


@dataclass
class PrimeScanResult:
    accepted: list
    ambiguous: list
    rejected_count: int


def _sym_square_3x3(g, p: int):
    """Matrix of Sym^2 on basis (e1^2, e1 e2, e2^2) for 2x2 g mod p."""
    a, b = g[0]
    c, d = g[1]
    return [
        [a * a % p, a * b % p, b * b % p],
        [2 * a * c % p, (a * d + b * c) % p, 2 * b * d % p],
        [c * c % p, c * d % p, d * d % p],
    ]


def _mat_inv_2x2(g, p: int):
    a, b = g[0]
    c, d = g[1]
    det = (a * d - b * c) % p
    inv = pow(det, -1, p)
    return [[d * inv % p, -b * inv % p], [-c * inv % p, a * inv % p]]


def frobenius_model(ell: int, a_ell: int, k: int, p: int, psi_ell: int,
                    eps_ell: int = 1) -> FrobeniusModel:
    """Mod-p model of Frobenius at ell on the twisted symmetric square.

    The standard 2x2 side is the companion matrix of the Hecke polynomial;
    the lattice side acts through ell * psi(ell) * Sym^2(g^-1), and the
    alternating line through ell^(2-k) psi(ell) eps(ell)^-1.
    """
    norm = pow(ell, k - 1, p) * eps_ell % p
    g = [[0, (-norm) % p], [1, a_ell % p]]
    ginv = _mat_inv_2x2(g, p)
    S = _sym_square_3x3(ginv, p)
    scal = ell % p * psi_ell % p
    A = [[v * scal % p for v in row] for row in S]
    det_g = norm
    tprime = ell % p * psi_ell % p * pow(det_g, -1, p) % p
    disc = (a_ell * a_ell - 4 * norm) % p
    regular_ss = disc != 0
    AmI = [[(A[i][j] - (1 if i == j else 0)) % p for j in range(3)] for i in range(3)]
    rank = rank_mod_p(AmI, p)
    return FrobeniusModel(
        ell=ell, companion=tuple(tuple(r) for r in g),
        sym_matrix=tuple(tuple(r) for r in A), tprime=tprime,
        regular_semisimple=regular_ss, rank_A_minus_I=rank,
        cokernel_cyclic=(rank >= 2), tprime_invertible=(tprime != 1),
    )


def smith_verify_witness(model: FrobeniusModel, p: int) -> bool:
    """Independent re-verification: Smith form over Z of (A - I) must have
    at most one invariant factor divisible by p, and the alternating scalar
    must differ from 1 mod p."""
    A = [list(r) for r in model.sym_matrix]
    AmI = [[A[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
    diag = smith_normal_form(AmI)
    p_divisible = sum(1 for d_ in diag if d_ % p == 0)
    return p_divisible <= 1 and model.tprime % p != 1


def prime_scan(p: int, k: int, hecke, psi: DirichletCharacter, ell_max: int,
               eps: DirichletCharacter | None = None,
               zeta_residue: int | None = None) -> PrimeScanResult:
    """Scan primes ell <= ell_max for the Kolyvagin conditions at mod-p level:
    ell = 1 mod p, cyclic cokernel of (Frob_ell - 1) on the twisted
    symmetric square, invertibility on the alternating line.  Primes whose
    mod-p Frobenius class is not determined by the characteristic
    polynomial (eigenvalue collisions) are reported separately."""
    residues = _character_residues_mod_p(psi, p, zeta_residue)
    eps_res = _character_residues_mod_p(eps, p, None) if eps is not None else None
    accepted, ambiguous = [], []
    rejected = 0
    ell = 2
    from .modforms import _next_prime

    while ell <= ell_max:
        if ell % p == 1 and ell != p:
            psi_ell = residues.get(ell % psi.modulus if psi.modulus > 1 else 0)
            eps_ell = 1 if eps_res is None else eps_res.get(ell % eps.modulus)
            if psi_ell is None or eps_ell is None:
                rejected += 1
            else:
                a_ell = hecke.prime_eigenvalues.get(ell)
                if a_ell is None:
                    from .modforms import MissingPrimeError

                    raise MissingPrimeError([ell])
                model = frobenius_model(ell, a_ell % p, k, p, psi_ell, eps_ell)
                if not model.regular_semisimple:
                    ambiguous.append(model)
                elif model.cokernel_cyclic and model.tprime_invertible:
                    accepted.append(model)
                else:
                    rejected += 1
        ell = _next_prime(ell)
    return PrimeScanResult(accepted=accepted, ambiguous=ambiguous,
                           rejected_count=rejected)


# ---------------------------------------------------------------------------
# Finite group cohomology
# ---------------------------------------------------------------------------

class GroupTooLargeError(ValueError):
    pass


def h1_brute_force(generators, p: int, max_order: int = 10**4) -> int:
    """dim H^1(G, F_p^3) for G = <generators> acting on column vectors.

    Closes the generating set, expresses every 1-cocycle by its values on
    the generators (the cocycle rule f(gh) = f(g) + g f(h) propagates
    values along a spanning tree of the Cayley graph and every remaining
    edge yields a linear constraint), and subtracts the coboundaries.
    """
    gens = [tuple(tuple(v % p for v in row) for row in g) for g in generators]
    gens = [g for g in gens if g != _identity3()]
    if not gens:
        return 0  # trivial group: H^1 = Hom(1, M) = 0
    elements, words = _close_group(gens, p, max_order)
    d = len(gens)
    nvar = 3 * d
    # expr[g] = 3 x nvar matrix with f(g) = expr[g] @ x
    expr = {_identity3(): _zero_matrix(3, nvar)}
    order = [_identity3()]
    constraints = []
    queue = [_identity3()]
    while queue:
        g = queue.pop(0)
        Eg = expr[g]
        gm = _mat3_of(g)
        for idx, s in enumerate(gens):
            gs = _mat_mul3(gm, _mat3_of(s), p)
            key = tuple(tuple(r) for r in gs)
            # f(g s) = f(g) + g f(s)
            new_expr = [row[:] for row in Eg]
            for i in range(3):
                for jj in range(3):
                    coef = gm[i][jj]
                    if coef:
                        col = 3 * idx + jj
                        new_expr[i][col] = (new_expr[i][col] + coef) % p
            if key not in expr:
                expr[key] = new_expr
                order.append(key)
                queue.append(key)
            else:
                old = expr[key]
                for i in range(3):
                    row = [(new_expr[i][c] - old[i][c]) % p for c in range(nvar)]
                    if any(row):
                        constraints.append(row)
    dim_z1 = nvar - rank_mod_p(constraints, p) if constraints else nvar
    # B^1: dim = 3 - dim of the fixed space
    fixed_rows = []
    for s in gens:
        sm = _mat3_of(s)
        for i in range(3):
            fixed_rows.append([(sm[i][j] - (1 if i == j else 0)) % p for j in range(3)])
    dim_fixed = 3 - rank_mod_p(fixed_rows, p)
    dim_b1 = 3 - dim_fixed
    return dim_z1 - dim_b1


def _identity3():
    return ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _zero_matrix(r, c):
    return [[0] * c for _ in range(r)]


def _mat3_of(t):
    return [list(row) for row in t]


def _mat_mul3(a, b, p):
    return [[sum(a[i][t] * b[t][j] for t in range(3)) % p for j in range(3)]
            for i in range(3)]


def _close_group(gens, p, max_order):
    elements = {_identity3()}
    frontier = [_identity3()]
    words = {_identity3(): ()}
    while frontier:
        nxt = []
        for g in frontier:
            for idx, s in enumerate(gens):
                prod = _mat_mul3(_mat3_of(g), _mat3_of(s), p)
                key = tuple(tuple(r) for r in prod)
                if key not in elements:
                    if len(elements) >= max_order:
                        raise GroupTooLargeError(
                            f"group closure exceeded {max_order} elements")
                    elements.add(key)
                    words[key] = words[g] + (idx,)
                    nxt.append(key)
        frontier = nxt
    return elements, words


def sl2_sym_square_generators(p: int):
    """Generators of the symmetric-square image of SL_2(F_p) in GL_3(F_p)."""
    S = [[0, (-1) % p], [1, 0]]
    T = [[1, 1], [0, 1]]
    return [_sym_square_3x3(g, p) for g in (S, T)]
