"""Problem instances and the exact verification layer.

A ProblemInstance fixes the Cartan data, a diagram automorphism sigma of
order M with a declared primitive root omega, marked points z_s with
dominant integral weights, and the sigma-invariant weight at the origin.
On top of that this module provides:

  * the frame polynomials T_i and T~_i,
  * exact genericity, cyclotomy and criticality tests for tuples,
  * weight-at-infinity bookkeeping,
  * validation of the conditions on the weight at the origin,
  * exact Gaudin eigenvalues for both the cyclotomic and the extended
    pictures, and the equality between them,
  * the canonical weight at the origin for type A involutions.

Criticality is tested by residue divisibility: with gamma = <L0, a_i^vee>
and P = T_i prod_{j != i} y_j^{-<alpha_j, alpha_i^vee>}, the tuple is
critical in direction i iff y_i divides (gamma P + x P') y_i' - x P y_i''.
That polynomial identity is exactly the statement that the logarithmic
derivative of x^gamma T_i (x - t)^2 prod y_j^... vanishes at every root t
of y_i, i.e. the Bethe equations hold at all roots simultaneously, without
ever leaving the coefficient field.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cartan import (CartanData, DiagramAut, Weight, inner_product,
                     sigma_on_weight)
from .errors import (InexactDivision, InputError, NegativeExponent, NotGeneric,
                     SingularCartan, UnsupportedType)
from .qpoly import QPoly, divide_exact, is_squarefree, proportional, qgcd
from .scalars import Cyc


@dataclass(frozen=True)
class ProblemInstance:
    cartan: CartanData
    aut: DiagramAut
    omega: Cyc
    points: tuple          # nonzero Cyc scalars z_s
    site_weights: tuple    # dominant integral Weight per point
    lambda0: Weight

    def __post_init__(self):
        self.aut.validate_for(self.cartan)
        M = self.aut.order
        if self.omega ** M != 1:
            raise InputError("omega^M != 1")
        for k in range(1, M):
            if self.omega ** k == 1:
                raise InputError("omega is not a primitive M-th root")
        if len(self.points) != len(self.site_weights):
            raise InputError("points and site weights differ in length")
        for z in self.points:
            if z.is_zero():
                raise InputError("marked points must be nonzero")
        for s, lam in enumerate(self.site_weights):
            if len(lam) != self.cartan.n:
                raise InputError("weight length mismatch")
            if not lam.is_dominant_integral():
                raise InputError(f"site weight {s} is not dominant integral")
        for i, zi in enumerate(self.points):
            for j, zj in enumerate(self.points):
                if i < j:
                    for k in range(M):
                        if zi == self.omega ** k * zj:
                            raise InputError(
                                f"omega-orbits of z_{i} and z_{j} meet")
        if len(self.lambda0) != self.cartan.n:
            raise InputError("lambda0 length mismatch")
        if sigma_on_weight(self.aut, self.lambda0) != self.lambda0:
            raise InputError("lambda0 is not sigma-invariant")

    @property
    def M(self):
        return self.aut.order

    @property
    def n_points(self):
        return len(self.points)

    def gamma(self, i):
        """<Lambda_0, alpha_i^vee>."""
        return self.lambda0[i]


class BetheTuple:
    """Tuple of monic ordinary polynomials y_i, one per node."""

    __slots__ = ("polys",)

    def __init__(self, polys):
        polys = tuple(polys)
        for y in polys:
            if y.is_zero():
                raise InputError("tuple components must be nonzero")
            if not y.is_polynomial():
                raise InputError("tuple components must be ordinary polynomials")
            if y.leading_coeff() != 1:
                raise InputError("tuple components must be monic")
        self.polys = polys

    @staticmethod
    def trivial(n):
        return BetheTuple([QPoly.one()] * n)

    @staticmethod
    def monic_of(polys):
        return BetheTuple([p.monic() for p in polys])

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        return isinstance(other, BetheTuple) and all(
            a == b for a, b in zip(self.polys, other.polys)) \
            and len(self) == len(other)

    def degrees(self):
        return tuple(int(y.degree) for y in self.polys)

    def __repr__(self):
        return "BetheTuple(" + "; ".join(str(y) for y in self.polys) + ")"


def frame_polys(inst):
    """T_i(x) = prod_s prod_k (x - omega^k z_s)^<sigma^k Lambda_s, alpha_i^vee>."""
    out = {}
    for i in range(inst.cartan.n):
        acc = QPoly.one()
        for s, z in enumerate(inst.points):
            lam = inst.site_weights[s]
            for k in range(inst.M):
                power = sigma_on_weight_power(inst.aut, lam, k)[i]
                if power < 0 or power.denominator != 1:
                    raise NegativeExponent(
                        f"<sigma^{k} Lambda_{s}, alpha_{i}^vee> = {power}")
                if power:
                    root = inst.omega ** k * z
                    factor = QPoly({Fraction(1): 1, Fraction(0): -root})
                    acc = acc * factor ** int(power)
        out[i] = acc
    return out


def sigma_on_weight_power(aut, weight, k):
    cur = weight
    for _ in range(k % aut.order):
        cur = sigma_on_weight(aut, cur)
    return cur


def t_tilde(inst, i, t=None):
    """T~_i = x^<L0, alpha_i^vee> T_i; Laurent when the pairing is negative."""
    base = (t or frame_polys(inst))[i]
    return QPoly.x_power(inst.gamma(i)) * base


def is_generic(inst, y, t=None):
    """Genericity of the tuple with respect to the frame polynomials.

    Returns (ok, witness); the witness names the first failing condition.
    """
    t = t or frame_polys(inst)
    a = inst.cartan.a
    for i, yi in enumerate(y):
        if yi.degree == 0:
            continue
        if yi.coeff(0).is_zero():
            return False, f"y_{i} vanishes at the origin"
        if not is_squarefree(yi):
            return False, f"y_{i} is not squarefree"
        g = qgcd(yi, t[i])
        if g.degree != 0:
            return False, f"y_{i} shares a root with T_{i}"
        for j, yj in enumerate(y):
            if j != i and a[i][j] != 0:
                g = qgcd(yi, yj)
                if g.degree != 0:
                    return False, f"y_{i} shares a root with y_{j}"
    return True, None


def interaction_product(inst, y, i, t=None):
    """P = T_i prod_{j != i} y_j^{-<alpha_j, alpha_i^vee>} (a polynomial)."""
    t = t or frame_polys(inst)
    acc = t[i]
    for j, yj in enumerate(y):
        if j == i:
            continue
        power = -inst.cartan.a[i][j]
        if power:
            acc = acc * yj ** power
    return acc


def is_critical_exact(inst, y, mode="extended", t=None, lambda0_override=None):
    """Residue-divisibility criticality test.

    Returns (ok, report) with a per-colour record {divides, witness}.
    `mode` is informational: the cyclotomic equations are equivalent to the
    extended ones on the same tuple, so both run the identical test.
    `lambda0_override` substitutes a different weight at the origin in the
    equations (used for the shifted equations satisfied by the L = 2
    intermediate tuples); it need not be sigma-invariant.
    """
    if mode not in ("extended", "cyclotomic"):
        raise InputError(f"unknown mode {mode!r}")
    t = t or frame_polys(inst)
    ok, witness = is_generic(inst, y, t=t)
    if not ok:
        raise NotGeneric(witness)
    report = {}
    overall = True
    for i, yi in enumerate(y):
        if yi.degree == 0:
            report[i] = {"divides": True, "witness": None}
            continue
        gamma = inst.gamma(i) if lambda0_override is None \
            else lambda0_override[i]
        p = interaction_product(inst, y, i, t=t)
        x = QPoly.x_power(1)
        expr = (p.scale(gamma) + x * p.derivative()) * yi.derivative() \
            - x * p * yi.derivative().derivative()
        if expr.is_zero():
            report[i] = {"divides": True, "witness": None}
            continue
        try:
            quotient = divide_exact(expr, yi)
            report[i] = {"divides": True, "witness": quotient}
        except InexactDivision:
            report[i] = {"divides": False, "witness": None}
        overall = overall and report[i]["divides"]
    return overall, report


def is_cyclotomic_tuple(inst, y):
    """y_{sigma j}(omega x) proportional to y_j(x) for all j."""
    for j in range(len(y)):
        target = y[inst.aut(j)]
        scaled = target.substitute_scale(inst.omega)
        if not proportional(scaled, y[j]):
            return False
    return True


def weight_at_infinity(inst, y):
    """Lambda_inf = L0 + sum_s sum_k sigma^k Lambda_s - sum_j deg(y_j) alpha_j."""
    total = inst.lambda0
    for lam in inst.site_weights:
        cur = lam
        for _ in range(inst.M):
            total = total + cur
            cur = sigma_on_weight(inst.aut, cur)
    a = inst.cartan.a
    degs = [int(p.degree) for p in y]
    adjust = [sum(a[i][j] * degs[j] for j in range(inst.cartan.n))
              for i in range(inst.cartan.n)]
    return Weight([total[i] - adjust[i] for i in range(inst.cartan.n)])


def validate_lambda0(inst, fold, typea_p=None):
    """Check the admissibility conditions on the weight at the origin.

    For L_i = 1: <L0, a_i^vee> in Z>=0 and <L0, a_i^vee> + 1 = 0 mod M/M_i.
    For L_i = 2: <L0, a_i^vee> in Z + 1/2 with 2<L0, a_i^vee> + 1 >= 0
    (the half-odd strengthening used by the L = 2 generation).
    With `typea_p` given, also the type-A conditions for that p.
    Report-valued: returns (ok, [violations]).
    """
    violations = []
    lam0 = inst.lambda0
    if sigma_on_weight(inst.aut, lam0) != lam0:
        violations.append("lambda0 is not sigma-invariant")
    M = inst.M
    for i in range(inst.cartan.n):
        v = lam0[i]
        if fold.linking[i] == 1:
            if not (v.denominator == 1 and v >= 0):
                violations.append(
                    f"node {i}: L=1 needs <L0,a^vee> in Z>=0, got {v}")
            elif (int(v) + 1) % (M // fold.orbit_len[i]) != 0:
                violations.append(
                    f"node {i}: L=1 needs <L0,a^vee>+1 = 0 mod "
                    f"{M // fold.orbit_len[i]}, got {v}")
        else:
            if v.denominator != 2:
                violations.append(
                    f"node {i}: L=2 needs a half-odd pairing, got {v}")
            elif 2 * v + 1 < 0:
                violations.append(
                    f"node {i}: L=2 needs 2<L0,a^vee>+1 >= 0, got {v}")
    if typea_p is not None:
        violations.extend(_typea_lambda0_violations(inst, typea_p))
    return (not violations), violations


def _typea_lambda0_violations(inst, p):
    r = inst.cartan.n
    n_half = (r + 1) // 2
    lam0 = inst.lambda0
    out = []
    if not (0 <= p <= n_half):
        out.append(f"p = {p} out of range 0..{n_half}")
        return out
    m_i = [2 if inst.aut(i) != i else 1 for i in range(r)]
    for i in range(r):
        if i in (p - 1, r - p):  # 0-based nodes p and R+1-p
            continue
        v = lam0[i]
        lim = Fraction(2, m_i[i])
        if not (v >= 0 and (v / lim).denominator == 1):
            out.append(f"node {i}: type-A needs pairing in {lim}*Z>=0, got {v}")
    if p > 0:
        v = lam0[p - 1]
        if r == 2 * n_half - 1 and p == n_half:
            if not (v.denominator == 1 and v >= 1 and int(v) % 2 == 1):
                out.append(f"node {p - 1}: p=n on odd rank needs odd integer "
                           f">= 1, got {v}")
        else:
            if not (v.denominator == 2 and 2 * v >= -1):
                out.append(f"node {p - 1}: needs half-odd >= -1/2, got {v}")
    return out


# --- eigenvalues ---------------------------------------------------------


def _alpha_weight(cartan, j):
    return Weight.simple_root(cartan, j)


def _log_deriv_at(poly, point):
    """y'(z)/y(z) as an exact scalar; the point must avoid the roots."""
    val = poly.eval_at(point)
    if val.is_zero():
        raise InputError("eigenvalue evaluation hits a Bethe root at a site")
    return poly.derivative().eval_at(point) / val


def extended_sites(inst):
    """The extended configuration: [(index, z, weight)] with the origin first."""
    sites = [(0, Cyc.of(0), inst.lambda0)]
    idx = 1
    for s, z in enumerate(inst.points):
        lam = inst.site_weights[s]
        cur = lam
        for k in range(inst.M):
            sites.append((idx, inst.omega ** k * z, cur))
            idx += 1
            cur = sigma_on_weight(inst.aut, cur)
    return sites


def eigenvalues(inst, y, check_critical=True):
    """Exact Gaudin eigenvalues in both pictures, plus the match verdict.

    E^(i) (cyclotomic picture, one per marked point) and E~ (extended
    picture, one per extended site, origin included).  Root sums are
    evaluated through logarithmic derivatives y'(z)/y(z), which is exactly
    the symmetric-function elimination of the Bethe roots.

    The match verdict asserts E~ at the site carrying sigma^k Lambda_s at
    omega^k z_s equals omega^-k E^(s), and that the origin eigenvalue is
    zero (for M > 1).
    """
    cartan = inst.cartan
    rows = [[Fraction(x) for x in row] for row in cartan.a]
    from . import linalg as _la
    if _la.nullspace(rows):
        raise SingularCartan("eigenvalues need an invertible Cartan matrix")
    warn_not_critical = False
    if check_critical:
        try:
            ok, _ = is_critical_exact(inst, y)
            warn_not_critical = not ok
        except NotGeneric:
            warn_not_critical = True

    def ip(lam, mu):
        return inner_product(cartan, lam, mu)

    alpha = [_alpha_weight(cartan, j) for j in range(cartan.n)]
    M, omega = inst.M, inst.omega

    cyc = []
    for i, zi in enumerate(inst.points):
        lam_i = inst.site_weights[i]
        acc = Cyc.of(0)
        for j, zj in enumerate(inst.points):
            if j == i:
                continue
            cur = inst.site_weights[j]
            for s in range(M):
                acc = acc + Cyc.of(ip(lam_i, cur)) / (zi - omega ** s * zj)
                cur = sigma_on_weight(inst.aut, cur)
        for c, yc in enumerate(y):
            if yc.degree == 0:
                continue
            cur_alpha = alpha[c]
            for s in range(M):
                u = omega ** (-s) * zi
                term = Cyc.of(ip(lam_i, cur_alpha)) * omega ** (-s) \
                    * _log_deriv_at(yc, u)
                acc = acc - term
                cur_alpha = sigma_on_weight(inst.aut, cur_alpha)
        tail = Cyc.of(ip(lam_i, inst.lambda0))
        cur = lam_i
        for s in range(1, M):
            cur = sigma_on_weight(inst.aut, cur)
            tail = tail + Cyc.of(ip(lam_i, cur)) / (1 - omega ** s)
        acc = acc + tail / zi
        cyc.append(acc)

    sites = extended_sites(inst)
    ext = []
    for idx, z, lam in sites:
        acc = Cyc.of(0)
        for jdx, zj, lamj in sites:
            if jdx == idx:
                continue
            acc = acc + Cyc.of(ip(lam, lamj)) / (z - zj)
        for c, yc in enumerate(y):
            if yc.degree == 0:
                continue
            acc = acc - Cyc.of(ip(lam, alpha[c])) * _log_deriv_at(yc, z)
        ext.append(acc)

    match = True
    origin_zero = True
    if M > 1:
        origin_zero = ext[0].is_zero()
        match = origin_zero
    pos = 1
    for s in range(len(inst.points)):
        for k in range(M):
            if ext[pos] != omega ** (-k) * cyc[s]:
                match = False
            pos += 1
    return {"cyclotomic": cyc, "extended": ext, "match": match,
            "origin_zero": origin_zero, "not_critical": warn_not_critical}


# --- canonical weight at the origin (type A, M = 2) ----------------------


def canonical_lambda0(rank, M=2):
    """L0(a_j^vee) = tr_n(sigma^-1 ad_{a_j^vee}) / (1 - omega) for type A.

    The involution is realized on sl_{rank+1} as sigma(X) = -J X^T J^{-1}
    with J the anti-diagonal unit matrix with alternating signs.  For
    M = 1 the sum is empty and the weight is zero.
    """
    if M == 1:
        return Weight.zero(rank)
    if M != 2:
        raise UnsupportedType("canonical lambda0 implemented for M in {1, 2}")
    size = rank + 1
    jmat = [[Fraction(0)] * size for _ in range(size)]
    for k in range(size):
        jmat[k][size - 1 - k] = Fraction((-1) ** k)
    jinv = _mat_inv(jmat)

    def sigma_mat(x):
        xt = [[x[b][a] for b in range(size)] for a in range(size)]
        return _mat_scale(_mat_mul(_mat_mul(jmat, xt), jinv), Fraction(-1))

    pairings = []
    for j in range(rank):
        h = [[Fraction(0)] * size for _ in range(size)]
        # alpha_j^vee = [E_j, F_j] = E_jj - E_(j+1)(j+1)
        h[j][j] = Fraction(1)
        h[j + 1][j + 1] = Fraction(-1)
        total = Fraction(0)
        for a in range(size):
            for b in range(a + 1, size):
                # ad_h E_ab = (h_a - h_b) E_ab
                factor = h[a][a] - h[b][b]
                if not factor:
                    continue
                e = [[Fraction(0)] * size for _ in range(size)]
                e[a][b] = Fraction(1)
                img = sigma_mat(e)
                total += factor * img[a][b]
        pairings.append(total / 2)  # 1 - omega = 2 for omega = -1
    return Weight(pairings)


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def _mat_inv(a):
    from . import linalg as _la
    inv = _la.invert([list(row) for row in a])
    if inv is None:
        raise SingularCartan("matrix not invertible")
    return inv


def hl_identity_check(cartan, aut, omega, lam):
    """Exact check of sum_k (l, s^k l)/(1 - w^k) = (1/2) sum_k (l, s^k l)."""
    M = aut.order
    lhs = Cyc.of(0)
    rhs = Fraction(0)
    cur = lam
    for k in range(1, M):
        cur = sigma_on_weight(aut, cur)
        val = inner_product(cartan, lam, cur)
        lhs = lhs + Cyc.of(val) / (1 - omega ** k)
        rhs += val
    return lhs == Cyc.of(rhs / 2)
