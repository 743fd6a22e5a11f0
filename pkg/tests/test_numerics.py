import random

import numpy as np
import pytest

from fractions import Fraction as F

from conftest import poly
from cybethe.errors import DivisionNearZero, NoConvergence
from cybethe.frame import BetheTuple, eigenvalues
from cybethe.numerics import (FloatPoint, embed,
                              eigenvalues_numeric, grad_check, newton_refine,
                              residual_norm)
from cybethe.cartan import CartanData, DiagramAut, Weight
from cybethe.frame import ProblemInstance
from cybethe.scalars import Cyc


def test_embed_cube_roots(a2_tuple):
    pt = embed(a2_tuple)
    assert len(pt.roots) == 6
    got = sorted((z for z, c in zip(pt.roots, pt.colours) if c == 0),
                 key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    want = sorted((np.exp(2j * np.pi * k / 3) for k in range(3)),
                  key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    assert all(abs(a - b) < 1e-10 for a, b in zip(got, want))


def test_embed_trivial_and_pair():
    pt = embed(BetheTuple.trivial(3))
    assert pt.roots == ()
    pt2 = embed(BetheTuple([poly(-1, 0, 1)]))
    assert sorted(round(z.real) for z in pt2.roots) == [-1, 1]


def test_residual_exact_point(a2, a2_tuple):
    inst, _ = a2
    assert residual_norm(inst, embed(a2_tuple)) < 1e-8


def test_residual_empty(a2):
    inst, _ = a2
    assert residual_norm(inst, embed(BetheTuple.trivial(2))) == 0.0


def test_residual_sensitivity(a2, a2_tuple):
    inst, _ = a2
    pt = embed(a2_tuple)
    rng = random.Random(12)
    moved = FloatPoint(
        roots=tuple(z + 1e-2 * complex(rng.random(), rng.random())
                    for z in pt.roots),
        colours=pt.colours)
    assert residual_norm(inst, moved) > 1e-4


def test_newton_fixed_point(a2, a2_tuple):
    inst, _ = a2
    pt = embed(a2_tuple)
    refined, norm = newton_refine(inst, pt)
    assert norm < 1e-12
    assert max(abs(a - b) for a, b in zip(refined.roots, pt.roots)) < 1e-12


def test_newton_basin(a2, a2_tuple):
    inst, _ = a2
    pt = embed(a2_tuple)
    rng = random.Random(7)
    start = FloatPoint(
        roots=tuple(z + 1e-3 * complex(rng.random() - .5, rng.random() - .5)
                    for z in pt.roots),
        colours=pt.colours)
    refined, norm = newton_refine(inst, start)
    assert norm < 1e-10


def test_newton_divergence(a2):
    inst, _ = a2
    # a single far-away root of each colour has no nearby critical point
    start = FloatPoint(roots=(37.0 + 11j, -54.0 + 3j), colours=(0, 1))
    with pytest.raises((NoConvergence, DivisionNearZero)):
        newton_refine(inst, start, iters=8)


def test_grad_check_critical(a2, a2_tuple):
    inst, _ = a2
    rep = grad_check(inst, embed(a2_tuple))
    assert rep["max_mismatch"] < 1e-7
    assert rep["max_gradient"] < 1e-8


def test_grad_check_generic_point(a2):
    inst, _ = a2
    pt = FloatPoint(roots=(0.7 + 0.2j, -1.3 + 0.9j), colours=(0, 1))
    rep = grad_check(inst, pt)
    assert rep["max_mismatch"] < 1e-6
    assert rep["max_gradient"] > 1e-2


def test_grad_check_empty(a2):
    inst, _ = a2
    rep = grad_check(inst, embed(BetheTuple.trivial(2)))
    assert rep["max_mismatch"] == 0.0


def test_numeric_eigenvalues_match_exact():
    cartan = CartanData.series("A", 2)
    aut = DiagramAut((1, 0))
    inst = ProblemInstance(cartan=cartan, aut=aut,
                           omega=Cyc.root_of_unity(2),
                           points=(Cyc.of(1),),
                           site_weights=(Weight([1, 1]),),
                           lambda0=Weight([F(1, 2), F(1, 2)]))
    from cybethe.genengine import cyclotomic_generate
    from cybethe.cartan import orbit_data
    fold = orbit_data(cartan, aut)
    y, _ = cyclotomic_generate(inst, fold, BetheTuple.trivial(2), 0, F(1, 2))
    exact = eigenvalues(inst, y)
    numeric = eigenvalues_numeric(inst, embed(y))
    for ev_exact, ev_num in zip(exact["cyclotomic"], numeric):
        assert abs(complex(ev_exact) - ev_num) < 1e-8
