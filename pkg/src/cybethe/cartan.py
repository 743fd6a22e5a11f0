"""Generalized Cartan matrices, weights, shifted Weyl actions, diagram
automorphisms, the linking condition, and folded Cartan data.

Node indices are 0-based internally; the JSON/CLI layer converts from the
1-based convention used in input files.  Weights are stored purely by
their coroot pairings <lambda, alpha_i^vee>.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .errors import (InputError, LinkingViolation, NonRegular, NonTerminating,
                     SingularCartan)

_REFLECTION_CAP = 10 ** 6  # guards dominant-reduction on non-finite inputs


def _symmetrizers(a):
    """Coprime positive integers d with diag(d) a symmetric, or None."""
    n = len(a)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if a[i][j] == 0 and a[j][i] == 0:
                    continue
                if (a[i][j] == 0) != (a[j][i] == 0):
                    return None
                if i == j:
                    continue
                want = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    mult = lcm(*(x.denominator for x in d))
    ints = [int(x * mult) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class CartanData:
    """Symmetrizable generalized Cartan matrix with symmetrizers d."""

    a: tuple
    d: tuple

    def __post_init__(self):
        n = len(self.a)
        for i in range(n):
            if len(self.a[i]) != n:
                raise InputError("Cartan matrix must be square")
            if self.a[i][i] != 2:
                raise InputError(f"diagonal entry a[{i}][{i}] != 2")
            for j in range(n):
                if i != j and self.a[i][j] > 0:
                    raise InputError(f"off-diagonal a[{i}][{j}] > 0")
                if (self.a[i][j] == 0) != (self.a[j][i] == 0):
                    raise InputError(f"zero pattern not symmetric at ({i},{j})")
        if len(self.d) != n or any(x <= 0 for x in self.d):
            raise InputError("symmetrizers must be positive")
        for i in range(n):
            for j in range(n):
                if self.d[i] * self.a[i][j] != self.d[j] * self.a[j][i]:
                    raise InputError("diag(d) a is not symmetric")

    @property
    def n(self):
        return len(self.a)

    @staticmethod
    def from_matrix(rows, d=None):
        a = tuple(tuple(int(x) for x in row) for row in rows)
        if d is None:
            d = _symmetrizers(a)
            if d is None:
                raise InputError("Cartan matrix is not symmetrizable")
        return CartanData(a=a, d=tuple(int(x) for x in d))

    @staticmethod
    def series(name, rank):
        """Named series; only type A is needed in this artifact."""
        if name.upper() != "A" or rank < 1:
            raise InputError(f"unsupported series {name}_{rank}")
        a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
              for j in range(rank)] for i in range(rank)]
        return CartanData.from_matrix(a, d=[1] * rank)

    @staticmethod
    def affine_a(n):
        """Affine A_n^(1) cycle on n+1 nodes (n >= 2), used in fold tests."""
        if n < 2:
            raise InputError("affine A_n^(1) here needs n >= 2")
        size = n + 1
        a = [[2 if i == j else (-1 if (i - j) % size in (1, size - 1) else 0)
              for j in range(size)] for i in range(size)]
        return CartanData.from_matrix(a)


@dataclass(frozen=True)
class DiagramAut:
    """Permutation of the nodes preserving the Cartan matrix."""

    perm: tuple  # images, 0-based

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise InputError("not a permutation")

    @property
    def order(self):
        seen = 1
        for i in range(len(self.perm)):
            length, j = 1, self.perm[i]
            while j != i:
                j = self.perm[j]
                length += 1
            seen = lcm(seen, length)
        return seen

    def __call__(self, i):
        return self.perm[i]

    def inverse(self, i):
        return self.perm.index(i)

    def power(self, i, k):
        k %= self.order
        for _ in range(k):
            i = self.perm[i]
        return i

    def validate_for(self, cartan):
        for i in range(cartan.n):
            for j in range(cartan.n):
                if cartan.a[self.perm[i]][self.perm[j]] != cartan.a[i][j]:
                    raise InputError(
                        f"permutation does not preserve the Cartan matrix "
                        f"at ({i},{j})")

    @staticmethod
    def identity(n):
        return DiagramAut(tuple(range(n)))

    def orbits(self):
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            orbit, j = [i], self.perm[i]
            while j != i:
                orbit.append(j)
                j = self.perm[j]
            seen.update(orbit)
            out.append(tuple(orbit))
        return out


class Weight:
    """Weight recorded by its coroot pairings (exact rationals)."""

    __slots__ = ("pairings",)

    def __init__(self, pairings):
        self.pairings = tuple(Fraction(p) for p in pairings)

    def __len__(self):
        return len(self.pairings)

    def __getitem__(self, i):
        return self.pairings[i]

    def __iter__(self):
        return iter(self.pairings)

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self.pairings, other.pairings))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self.pairings, other.pairings))

    def __neg__(self):
        return Weight(-a for a in self.pairings)

    def scale(self, k):
        k = Fraction(k)
        return Weight(a * k for a in self.pairings)

    def __eq__(self, other):
        return isinstance(other, Weight) and self.pairings == other.pairings

    def __hash__(self):
        return hash(self.pairings)

    def is_dominant_integral(self):
        return all(p >= 0 and p.denominator == 1 for p in self.pairings)

    def __repr__(self):
        return "Weight(" + ", ".join(str(p) for p in self.pairings) + ")"

    @staticmethod
    def zero(n):
        return Weight([0] * n)

    @staticmethod
    def rho(n):
        return Weight([1] * n)

    @staticmethod
    def simple_root(cartan, j):
        """alpha_j as a weight: pairings <alpha_j, alpha_i^vee> = a[i][j]."""
        return Weight([cartan.a[i][j] for i in range(cartan.n)])


@dataclass(frozen=True)
class FoldedData:
    """Orbit data and the folded Cartan matrix A^sigma on representatives."""

    reps: tuple          # chosen orbit representatives, ascending
    orbit_len: tuple     # M_i for every node i
    linking: tuple       # L_i for every node i
    a_fold: CartanData
    orbits: tuple        # full orbits, one per representative

    def rep_index(self, i):
        return self.reps.index(i)


def orbit_data(cartan, aut):
    """Fold the diagram; raises LinkingViolation when some L_i > 2."""
    aut.validate_for(cartan)
    n = cartan.n
    orbit_of = {}
    orbits = []
    for orbit in aut.orbits():
        key = tuple(sorted(orbit))
        orbits.append(key)
        for i in orbit:
            orbit_of[i] = key
    orbits.sort()
    reps = tuple(min(o) for o in orbits)

    m_len = [len(orbit_of[i]) for i in range(n)]
    linking = []
    for i in range(n):
        total = 0
        j = aut(i)
        seen = {i}
        while j not in seen:
            total += cartan.a[j][i]
            seen.add(j)
            j = aut(j)
        linking.append(1 - total)
    for i in range(n):
        if linking[i] > 2:
            raise LinkingViolation(i, linking[i])

    a_fold_rows = []
    for i in reps:
        row = []
        orbit_i = sorted(set(aut.power(i, k) for k in range(m_len[i])))
        for j in reps:
            row.append(linking[i] * sum(cartan.a[k][j] for k in orbit_i))
        a_fold_rows.append(row)
    a_fold = CartanData.from_matrix(a_fold_rows)
    return FoldedData(reps=reps, orbit_len=tuple(m_len),
                      linking=tuple(linking), a_fold=a_fold,
                      orbits=tuple(tuple(sorted(o)) for o in orbits))


def sigma_on_weight(aut, weight):
    """(sigma lambda)_i = lambda_(sigma^-1 i)."""
    return Weight([weight[aut.inverse(i)] for i in range(len(weight))])


def shifted_reflect(cartan, i, weight):
    """Shifted reflection s_i . lambda = s_i(lambda + rho) - rho."""
    shift = weight[i] + 1
    return Weight([weight[j] - cartan.a[j][i] * shift for j in range(cartan.n)])


def folded_reflect(cartan, aut, fold, i, weight):
    """Apply s_i^sigma in the shifted action via its reflection word."""
    if i not in fold.reps:
        raise InputError(f"{i} is not an orbit representative")
    m = fold.orbit_len[i]
    li = fold.linking[i]
    chain = [aut.power(i, k) for k in range(m)]
    if li == 1:
        word = chain
    else:
        half = m // 2
        first = chain[:half]
        second = chain[half:]
        word = first + second + first
    out = weight
    for node in reversed(word):
        out = shifted_reflect(cartan, node, out)
    return out


def dominant_shifted_rep(cartan, weight):
    """Dominant representative of the shifted Weyl orbit, with the word used.

    Repeatedly reflects at any node where <lambda + rho, alpha_i^vee> < 0.
    Raises NonRegular on a zero pairing and NonTerminating past the guard.
    """
    current = weight
    word = []
    for _ in range(_REFLECTION_CAP):
        neg = None
        for i in range(cartan.n):
            val = current[i] + 1
            if val == 0:
                raise NonRegular(
                    f"lambda + rho has zero pairing at node {i}: {current}")
            if val < 0:
                neg = i
                break
        if neg is None:
            return current, word
        current = shifted_reflect(cartan, neg, current)
        word.append(neg)
    raise NonTerminating("dominant reduction did not terminate "
                         f"within {_REFLECTION_CAP} reflections")


def inner_product(cartan, lam, mu):
    """Symmetric bilinear form (lambda, mu) on the fundamental-weight span.

    (lambda, mu) = sum_i <lambda, alpha_i^vee> d_i (A^{-1} mu)_i, which is
    the Gram matrix d_i (a^{-1})_{ij} of the fundamental weights.
    """
    rhs = [Fraction(p) for p in mu.pairings]
    rows = [[Fraction(x) for x in row] for row in cartan.a]
    sol = linalg.solve(rows, rhs)
    if sol is None or linalg.nullspace(rows):
        raise SingularCartan("inner product needs an invertible Cartan matrix")
    return sum(Fraction(lam[i]) * cartan.d[i] * sol[i] for i in range(cartan.n))
