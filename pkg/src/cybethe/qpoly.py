"""Exact quasi-polynomial algebra.

A quasi-polynomial is a finite sum of terms c * x^e with exact cyclotomic
coefficients c and exponents e in (1/D)Z.  Negative exponents are allowed
in intermediate (Laurent) values; `is_quasi` reports whether all exponents
are nonnegative.  Division, gcd and squarefree tests work through the
substitution x = s^D, which turns everything into ordinary dense
polynomials over the coefficient field.

The Wronskian first-order solver `wronskian_ode_solve` is the primitive
behind every generation step: it finds Y with Wr(f, Y) = W by a bounded
linear solve on the coefficient vector of Y, never by integrating rational
functions.
"""

from fractions import Fraction
from math import lcm

from . import linalg
from .errors import (AmbiguousNormalization, BranchUndefined, InexactDivision,
                     NoSolution)
from .scalars import Cyc


def _frac(e):
    return e if isinstance(e, Fraction) else Fraction(e)


class QPoly:
    """Immutable quasi-polynomial with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for e, c in terms.items():
            if not isinstance(c, Cyc):
                c = Cyc.of(c)
            if not c.is_zero():
                clean[_frac(e)] = c
        self.terms = clean

    # construction -----------------------------------------------------

    @staticmethod
    def zero():
        return QPoly({})

    @staticmethod
    def one():
        return QPoly({Fraction(0): 1})

    @staticmethod
    def x_power(e, coeff=1):
        return QPoly({_frac(e): coeff})

    @staticmethod
    def constant(c):
        return QPoly({Fraction(0): c})

    @staticmethod
    def from_coeffs(coeffs):
        """Ordinary polynomial from a low-to-high coefficient list."""
        return QPoly({Fraction(k): c for k, c in enumerate(coeffs)})

    # structure --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        """Maximal exponent; None for the zero quasi-polynomial."""
        return max(self.terms) if self.terms else None

    @property
    def low_exponent(self):
        return min(self.terms) if self.terms else None

    @property
    def denom(self):
        """Minimal common exponent denominator of the support."""
        if not self.terms:
            return 1
        return lcm(*(e.denominator for e in self.terms))

    def coeff(self, e):
        return self.terms.get(_frac(e), Cyc.of(0))

    def leading_coeff(self):
        if not self.terms:
            raise ValueError("zero quasi-polynomial has no leading coefficient")
        return self.terms[self.degree]

    def is_quasi(self):
        """True iff all exponents are >= 0."""
        return all(e >= 0 for e in self.terms)

    def is_polynomial(self):
        return all(e >= 0 and e.denominator == 1 for e in self.terms)

    def field_order(self):
        order = 1
        for c in self.terms.values():
            order = lcm(order, c.order)
        return order

    def exponent_classes(self):
        """Support split by exponent residue mod 1: {residue: QPoly}."""
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(e - e.__floor__(), {})[e] = c
        return {r: QPoly(t) for r, t in sorted(parts.items())}

    def is_monomial(self):
        return len(self.terms) == 1

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Cyc.of(0)) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            return self.scale(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, Cyc.of(0)) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return QPoly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = c if isinstance(c, Cyc) else Cyc.of(c)
        if c.is_zero():
            return QPoly.zero()
        return QPoly({e: v * c for e, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a quasi-polynomial")
        out = QPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        return hash(frozenset((e, str(c)) for e, c in self.terms.items()))

    # calculus and evaluation -------------------------------------------

    def derivative(self):
        return QPoly({e - 1: c * e for e, c in self.terms.items() if e != 0})

    def eval_at(self, point):
        """Evaluate at an exact scalar; requires integer exponents >= 0."""
        if not self.is_polynomial():
            raise BranchUndefined("evaluation needs integer exponents >= 0")
        point = point if isinstance(point, Cyc) else Cyc.of(point)
        acc = Cyc.of(0)
        for e, c in self.terms.items():
            acc = acc + c * point ** int(e)
        return acc

    def monic(self):
        if self.is_zero():
            return self
        lead = self.leading_coeff()
        return self.scale(lead.inverse())

    def substitute_scale(self, s):
        """f(s*x) for an exact scalar s.

        Integer exponents admit any nonzero s.  On fractional support only
        s = -1 is defined, through the fixed branch of `negate_argument`.
        """
        s = s if isinstance(s, Cyc) else Cyc.of(s)
        if any(e.denominator != 1 for e in self.terms):
            if s == Cyc.of(-1):
                return self.negate_argument()
            raise BranchUndefined(
                "substitute_scale with fractional exponents is only fixed "
                "for s = -1 (branch (-1)^m = e^(i pi m))")
        return QPoly({e: c * s ** int(e) for e, c in self.terms.items()})

    def negate_argument(self):
        """f(-x) with the branch (-1)^m = e^(i pi m) for m in (1/2)Z.

        For half-integer exponents this adjoins i = zeta_4, promoting the
        coefficient field to Q(zeta_lcm(order, 4)).
        """
        out = {}
        for e, c in self.terms.items():
            if e.denominator == 1:
                out[e] = c if int(e) % 2 == 0 else -c
            elif e.denominator == 2:
                # (-1)^(k + 1/2) = i * (-1)^k
                i_unit = Cyc.root_of_unity(4, 1)
                half = e - Fraction(1, 2)
                sign = i_unit if int(half) % 2 == 0 else -i_unit
                out[e] = c * sign
            else:
                raise BranchUndefined(
                    f"no branch fixed for exponent denominator {e.denominator}")
        return QPoly(out)

    # dense view through x = s^D ----------------------------------------

    def _dense(self, D=None):
        """(offset, coeff list) with f = x^offset * sum coeffs[k] s^k, s = x^(1/D)."""
        if self.is_zero():
            return Fraction(0), []
        D = D or self.denom
        low = self.low_exponent
        size = int((self.degree - low) * D) + 1
        coeffs = [Cyc.of(0)] * size
        for e, c in self.terms.items():
            coeffs[int((e - low) * D)] = c
        return low, coeffs

    @staticmethod
    def _from_dense(low, coeffs, D):
        return QPoly({low + Fraction(k, D): c for k, c in enumerate(coeffs)})

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            cs = str(c)
            needs_parens = ("+" in cs[1:] or "-" in cs[1:] or "w" in cs)
            if e == 0:
                bits.append(f"({cs})" if needs_parens else cs)
                continue
            xs = "x" if e == 1 else f"x^{e}"
            if cs == "1":
                bits.append(xs)
            elif cs == "-1":
                bits.append(f"-{xs}")
            else:
                bits.append((f"({cs})" if needs_parens else cs) + "*" + xs)
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self):
        return f"QPoly({self})"


def proportional(f, g):
    """True iff f = k*g for some nonzero scalar k (zero ~ zero)."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    if set(f.terms) != set(g.terms):
        return False
    e0 = next(iter(f.terms))
    k = f.terms[e0] / g.terms[e0]
    return all(f.terms[e] == k * g.terms[e] for e in f.terms)


# --- dense helpers over the scalar field -------------------------------

def _dense_divmod(num, den):
    num = list(num)
    dn = len(den) - 1
    while den and den[-1].is_zero():
        den = den[:-1]
        dn -= 1
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    inv_lead = den[-1].inverse()
    q = [Cyc.of(0)] * max(0, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + dn] * inv_lead
        if not c.is_zero():
            q[k] = c
            for j, d in enumerate(den):
                num[k + j] = num[k + j] - c * d
    while num and num[-1].is_zero():
        num.pop()
    return q, num


def _dense_gcd(a, b):
    a = [c for c in a]
    b = [c for c in b]
    while b and all(not c.is_zero() for c in [b[-1]]):
        _, r = _dense_divmod(a, b)
        a, b = b, r
        while a and a[-1].is_zero():
            a.pop()
    if not a:
        return [Cyc.of(1)]  # gcd(0,0) treated as 1 upstream; guarded by callers
    inv = a[-1].inverse()
    return [c * inv for c in a]


# --- public operations --------------------------------------------------

def divide_exact(f, g):
    """Exact quotient f / g as a Laurent quasi-polynomial.

    Raises InexactDivision when the remainder after x = s^D substitution
    is nonzero.  The result may have negative exponents; the caller checks
    `is_quasi` where that matters.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero quasi-polynomial")
    if f.is_zero():
        return QPoly.zero()
    D = lcm(f.denom, g.denom)
    flow, fc = f._dense(D)
    glow, gc = g._dense(D)
    q, r = _dense_divmod(fc, gc)
    if r:
        raise InexactDivision(f"({f}) is not divisible by ({g})")
    return QPoly._from_dense(flow - glow, q, D)


def qgcd(f, g):
    """Monic gcd computed after the substitution x = s^D."""
    if f.is_zero():
        return g.monic() if g else QPoly.one()
    if g.is_zero():
        return f.monic()
    D = lcm(f.denom, g.denom)
    flow, fc = f._dense(D)
    glow, gc = g._dense(D)
    # common pure power of x
    shared = min(flow, glow)
    core = _dense_gcd(fc, gc)
    lowpow = QPoly.x_power(shared) if shared else QPoly.one()
    return (QPoly._from_dense(Fraction(0), core, D) * lowpow).monic()


def is_squarefree(f):
    """Squarefree test via gcd(f, f') on the dense representative."""
    if f.is_zero():
        return False
    D = f.denom
    _, fc = f._dense(D)
    if len(fc) <= 1:
        return True
    dfc = [fc[k] * k for k in range(1, len(fc))]
    g = _dense_gcd(fc, dfc)
    return len(g) == 1


def wronskian(fs):
    """Wronskian determinant Wr(f_1, ..., f_n) by exact minor expansion."""
    fs = list(fs)
    if not fs:
        raise ValueError("wronskian of an empty list")
    n = len(fs)
    rows = []
    for f in fs:
        row = [f]
        for _ in range(n - 1):
            row.append(row[-1].derivative())
        rows.append(row)
    return _det(rows)


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = QPoly.zero()
    for i in range(n):
        if rows[i][0].is_zero():
            continue
        minor = [r[1:] for j, r in enumerate(rows) if j != i]
        term = rows[i][0] * _det(minor)
        acc = acc + (term if i % 2 == 0 else -term)
    return acc


def divided_wronskian(fs, divisors):
    """Wr(fs) divided exactly by the product of `divisors`."""
    w = wronskian(fs)
    den = QPoly.one()
    for d in divisors:
        den = den * d
    return divide_exact(w, den)


def wronskian_ode_solve(f, w_target, norm):
    """Solve Wr(f, Y) = W for Y by a bounded-degree exact linear solve.

    `norm` selects the canonical member of the affine solution set
    Y_particular + span(f):

      ("coeff_zero", e)         -- the coefficient of x^e in Y is zero;
      ("holomorphic_at_zero", e0) -- Y supported on exponents e0 + Z>=0,
                                   a class disjoint from the support of f.

    Returns (particular, homogeneous) where homogeneous = f spans the
    kernel.  Raises NoSolution when the linear system is inconsistent and
    AmbiguousNormalization when the rule does not pin a unique solution.
    """
    if f.is_zero():
        raise NoSolution("kernel function f must be nonzero")
    kind, pin = norm[0], _frac(norm[1])
    if w_target.is_zero():
        return QPoly.zero(), f

    D = lcm(f.denom, w_target.denom, pin.denominator)
    hi = max(w_target.degree - f.degree + 1, f.degree)
    if kind == "coeff_zero":
        lo = Fraction(0)
        support = []
        e = lo
        while e <= hi:
            support.append(e)
            e += Fraction(1, D)
    elif kind == "holomorphic_at_zero":
        f_classes = {e - e.__floor__() for e in f.terms}
        if (pin - pin.__floor__()) in f_classes:
            raise AmbiguousNormalization(
                "holomorphic normalization needs a pinned exponent class "
                "disjoint from the support of f")
        support = []
        e = pin
        while e <= max(hi, pin):
            support.append(e)
            e += 1
    else:
        raise ValueError(f"unknown normalization rule {kind!r}")

    # Wr(f, x^e) = sum_a f_a (e - a) x^(a + e - 1)
    out_exps = sorted(set(
        [a + e - 1 for a in f.terms for e in support] + list(w_target.terms)))
    row_of = {e: i for i, e in enumerate(out_exps)}
    matrix = [[Cyc.of(0)] * len(support) for _ in out_exps]
    for j, e in enumerate(support):
        for a, ca in f.terms.items():
            fac = e - a
            if fac:
                matrix[row_of[a + e - 1]][j] = \
                    matrix[row_of[a + e - 1]][j] + ca * fac
    rhs = [w_target.coeff(e) for e in out_exps]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise NoSolution("Wr(f, Y) = W has no quasi-polynomial solution")
    particular = QPoly({e: c for e, c in zip(support, sol)})

    if kind == "coeff_zero":
        fpin = f.coeff(pin)
        if fpin.is_zero():
            raise AmbiguousNormalization(
                f"f has zero coefficient at x^{pin}; cannot pin there")
        c = particular.coeff(pin) / fpin
        particular = particular - f.scale(c)
    # verification is cheap and guards the exactness contract
    check = f * particular.derivative() - f.derivative() * particular
    if check != w_target:
        raise NoSolution("linear solve produced an inexact Wronskian solution")
    return particular, f


class RatQP:
    """Reduced ratio of quasi-polynomials; just enough for operator work."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = QPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("rational quasi-polynomial with zero denominator")
        if num.is_zero():
            self.num, self.den = QPoly.zero(), QPoly.one()
            return
        g = qgcd(num, den)
        if not (g.is_monomial() and g.degree == 0):
            num = divide_exact(num, g)
            den = divide_exact(den, g)
        lead = den.leading_coeff()
        self.num = num.scale(lead.inverse())
        self.den = den.scale(lead.inverse())

    @staticmethod
    def of(p):
        return p if isinstance(p, RatQP) else RatQP(p)

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = RatQP.of(other)
        return RatQP(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self):
        return RatQP(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatQP.of(other))

    def __mul__(self, other):
        other = RatQP.of(other)
        return RatQP(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = RatQP.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational quasi-polynomial")
        return RatQP(self.num * other.den, self.den * other.num)

    def derivative(self):
        return RatQP(self.num.derivative() * self.den
                     - self.num * self.den.derivative(),
                     self.den * self.den)

    def __eq__(self, other):
        other = RatQP.of(other)
        return self.num * other.den == other.num * self.den

    def __repr__(self):
        return f"RatQP(({self.num}) / ({self.den}))"


def log_derivative(p):
    """f'/f as a reduced rational quasi-polynomial."""
    return RatQP(p.derivative(), p)
