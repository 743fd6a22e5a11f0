"""Floating-point cross-validation of exact critical points.

Bethe roots are extracted by Aberth simultaneous iteration with a Newton
polish, residuals are the extended Bethe equations evaluated at the roots,
and gradients of the master function are checked against central finite
differences of its real part.  Differentiating Re(Phi) with respect to the
real and imaginary parts of each root recovers the holomorphic derivative
through the Cauchy-Riemann equations while staying on a single-valued
function (Re log = log |.|), so logarithm branches never enter.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cartan import inner_product
from .errors import (BranchCollision, DivisionNearZero, IllConditioned,
                     NoConvergence, SingularJacobian)
from .frame import extended_sites, sigma_on_weight_power


@dataclass(frozen=True)
class Tolerances:
    root_residual: float = 1e-8
    pair_min: float = 1e-12
    branch_min: float = 1e-10
    fd_step: float = 1e-5
    fd_tol: float = 1e-6
    newton_tol: float = 1e-10
    newton_iters: int = 50


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class FloatPoint:
    roots: tuple      # complex Bethe roots
    colours: tuple    # node index per root


def _poly_complex_coeffs(p):
    """Low-to-high complex coefficient list of an ordinary polynomial."""
    deg = int(p.degree)
    out = [0j] * (deg + 1)
    for e, c in p.terms.items():
        out[int(e)] = complex(c)
    return out


def _aberth_roots(coeffs, tol):
    """All roots of the polynomial given by low-to-high coefficients."""
    deg = len(coeffs) - 1
    if deg == 0:
        return []
    c = np.array(coeffs, dtype=complex)
    c = c / c[-1]
    poly = np.polynomial.Polynomial(c)
    dpoly = poly.deriv()
    radius = 1.0 + max(abs(x) for x in c[:-1]) if deg else 1.0
    # deterministic initialization on a scaled circle, irrational offset
    ks = np.arange(deg)
    z = radius * np.exp(2j * np.pi * (ks + 0.354) / deg)
    for _ in range(200):
        pv = poly(z)
        dv = dpoly(z)
        newton = np.where(dv != 0, pv / np.where(dv == 0, 1, dv), 0)
        pair = z[:, None] - z[None, :]
        np.fill_diagonal(pair, np.inf)
        repulse = np.sum(1.0 / pair, axis=1)
        denom = 1.0 - newton * repulse
        step = np.where(denom != 0, newton / np.where(denom == 0, 1, denom),
                        newton)
        z = z - step
        if np.max(np.abs(step)) < 1e-14:
            break
    # one Newton polish pass
    for _ in range(3):
        dv = dpoly(z)
        z = z - np.where(dv != 0, poly(z) / np.where(dv == 0, 1, dv), 0)
    return list(z)


def embed(y, tol=DEFAULT_TOL):
    """Numerically extract all roots of each component, with colours."""
    roots = []
    colours = []
    for i, p in enumerate(y):
        coeffs = _poly_complex_coeffs(p)
        scale = max(abs(c) for c in coeffs)
        for z in _aberth_roots(coeffs, tol):
            val = sum(c * z ** k for k, c in enumerate(coeffs))
            if abs(val) > tol.root_residual * max(scale, 1.0):
                raise IllConditioned(
                    f"root of y_{i} has residual {abs(val):.3e}")
            roots.append(complex(z))
            colours.append(i)
    return FloatPoint(roots=tuple(roots), colours=tuple(colours))


def _site_data(inst):
    """[(z complex, weight)] for the extended configuration."""
    return [(complex(z), lam) for _, z, lam in extended_sites(inst)]


def _pair_matrix(inst):
    cartan = inst.cartan
    n = cartan.n
    alpha = [[Fraction(cartan.a[i][j]) for i in range(n)] for j in range(n)]
    return alpha


def _ip_weight_alpha(inst, lam, j):
    from .cartan import Weight
    alpha_j = Weight([inst.cartan.a[i][j] for i in range(inst.cartan.n)])
    return float(inner_product(inst.cartan, lam, alpha_j))


def _ip_alpha_alpha(inst, i, j):
    return float(inst.cartan.d[i] * inst.cartan.a[i][j])


def residuals(inst, point, tol=DEFAULT_TOL):
    """LHS of the extended Bethe equations at every root."""
    sites = _site_data(inst)
    out = []
    for j, (tj, cj) in enumerate(zip(point.roots, point.colours)):
        acc = 0j
        for z, lam in sites:
            d = tj - z
            if abs(d) < tol.pair_min:
                raise DivisionNearZero(
                    f"root {j} collides with a marked point")
            acc += _ip_weight_alpha(inst, lam, cj) / d
        for i, (ti, ci) in enumerate(zip(point.roots, point.colours)):
            if i == j:
                continue
            d = tj - ti
            if abs(d) < tol.pair_min:
                raise DivisionNearZero(f"roots {i} and {j} collide")
            acc -= _ip_alpha_alpha(inst, cj, ci) / d
        out.append(acc)
    return out


def residual_norm(inst, point, tol=DEFAULT_TOL):
    """max_j |extended Bethe equation j| at the embedded roots."""
    if not point.roots:
        return 0.0
    return max(abs(r) for r in residuals(inst, point, tol))


def _jacobian(inst, point, tol):
    m = len(point.roots)
    sites = _site_data(inst)
    jac = np.zeros((m, m), dtype=complex)
    for j, (tj, cj) in enumerate(zip(point.roots, point.colours)):
        diag = 0j
        for z, lam in sites:
            diag -= _ip_weight_alpha(inst, lam, cj) / (tj - z) ** 2
        for i, (ti, ci) in enumerate(zip(point.roots, point.colours)):
            if i == j:
                continue
            val = _ip_alpha_alpha(inst, cj, ci) / (tj - ti) ** 2
            diag += val
            jac[j, i] = -val
        jac[j, j] = diag
    return jac


def newton_refine(inst, point, iters=None, tol=DEFAULT_TOL):
    """Damped Newton iteration on the residual system."""
    iters = iters if iters is not None else tol.newton_iters
    z = np.array(point.roots, dtype=complex)
    colours = point.colours
    cur = FloatPoint(roots=tuple(z), colours=colours)
    norm = residual_norm(inst, cur, tol)
    for _ in range(iters):
        if norm < tol.newton_tol:
            return cur, norm
        res = np.array(residuals(inst, cur, tol))
        jac = _jacobian(inst, cur, tol)
        try:
            step = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc))
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        damp = 1.0
        for _ in range(30):
            trial = FloatPoint(roots=tuple(z - damp * step), colours=colours)
            try:
                trial_norm = residual_norm(inst, trial, tol)
            except DivisionNearZero:
                damp /= 2
                continue
            if trial_norm < norm:
                break
            damp /= 2
        else:
            raise NoConvergence(f"no descent direction, norm {norm:.3e}")
        z = z - damp * step
        cur = FloatPoint(roots=tuple(z), colours=colours)
        norm = trial_norm
    if norm < tol.newton_tol:
        return cur, norm
    raise NoConvergence(f"residual {norm:.3e} after {iters} iterations")


def master_value_real(inst, roots, colours, tol=DEFAULT_TOL):
    """Re of the extended master function (single-valued via log |.|)."""
    sites = _site_data(inst)
    total = 0.0
    for a in range(len(sites)):
        za, la = sites[a]
        for b in range(a + 1, len(sites)):
            zb, lb = sites[b]
            d = za - zb
            if abs(d) < tol.branch_min:
                raise BranchCollision("marked points collide")
            total += float(inner_product(inst.cartan, la, lb)) \
                * np.log(abs(d))
    for j, (tj, cj) in enumerate(zip(roots, colours)):
        for z, lam in sites:
            d = tj - z
            if abs(d) < tol.branch_min:
                raise BranchCollision("log argument near zero")
            total -= _ip_weight_alpha(inst, lam, cj) * np.log(abs(d))
        for i in range(j + 1, len(roots)):
            d = tj - roots[i]
            if abs(d) < tol.branch_min:
                raise BranchCollision("log argument near zero")
            total += _ip_alpha_alpha(inst, cj, colours[i]) * np.log(abs(d))
    return total


def grad_check(inst, point, h=None, tol=DEFAULT_TOL):
    """Analytic gradient of the extended master function vs central finite
    differences of its real part; reports the maximum mismatch and, for
    critical points, the maximum analytic gradient magnitude."""
    h = h if h is not None else tol.fd_step
    roots = list(point.roots)
    colours = point.colours
    if not roots:
        return {"max_mismatch": 0.0, "max_gradient": 0.0, "per_root": []}
    analytic = residuals(inst, point, tol)
    per_root = []
    max_mismatch = 0.0
    for j in range(len(roots)):
        def value(shift):
            moved = list(roots)
            moved[j] = moved[j] + shift
            return master_value_real(inst, moved, colours, tol)

        da = (value(h) - value(-h)) / (2 * h)
        db = (value(1j * h) - value(-1j * h)) / (2 * h)
        fd = da - 1j * db
        # d Phi / dt_j = -(extended Bethe LHS at j)
        mismatch = abs(fd + analytic[j])
        per_root.append({"root": roots[j], "analytic": -analytic[j],
                         "fd": fd, "mismatch": mismatch})
        max_mismatch = max(max_mismatch, mismatch)
    return {"max_mismatch": max_mismatch,
            "max_gradient": max(abs(r) for r in analytic),
            "per_root": per_root}


def eigenvalues_numeric(inst, point, tol=DEFAULT_TOL):
    """E^(i) of the cyclotomic picture evaluated in floating point.

    The root sum runs over all extended roots directly (the double sum
    over fundamental roots and powers of omega enumerates exactly the
    extended root multiset of a cyclotomic point).
    """
    M = inst.M
    omega = complex(inst.omega)
    out = []
    for i, zi_exact in enumerate(inst.points):
        zi = complex(zi_exact)
        lam_i = inst.site_weights[i]
        acc = 0j
        for jdx, zj_exact in enumerate(inst.points):
            if jdx == i:
                continue
            zj = complex(zj_exact)
            for s in range(M):
                lam_s = sigma_on_weight_power(inst.aut,
                                              inst.site_weights[jdx], s)
                acc += float(inner_product(inst.cartan, lam_i, lam_s)) \
                    / (zi - omega ** s * zj)
        for (tj, cj) in zip(point.roots, point.colours):
            acc -= _ip_weight_alpha(inst, lam_i, cj) / (zi - tj)
        tail = complex(float(inner_product(inst.cartan, lam_i, inst.lambda0)))
        for s in range(1, M):
            cur = sigma_on_weight_power(inst.aut, lam_i, s)
            tail += float(inner_product(inst.cartan, lam_i, cur)) \
                / (1 - omega ** s)
        acc += tail / zi
        out.append(acc)
    return out