"""Elementary and cyclotomic generation of critical points.

Generation in direction i replaces y_i by a solution of the first-order
Wronskian equation Wr(y_i, Y) = T~-type product.  Cyclotomic generation
composes elementary steps across a sigma-orbit so that cyclotomic symmetry
survives:

  L_i = 1: one solve at the representative, then symmetry transport
           y_{sigma^k i}(x) = omega^(k deg Y) Y(omega^-k x) across the
           orbit; an assertion cross-checks one transported component
           against an independent solve.
  L_i = 2: the three-step sequence at the A_2 block (i, ibar = sigma i):
           a holomorphic solve for y_i^(i), a pinned-coefficient solve
           plus c y_ibar for the middle step, and a final holomorphic
           solve that carries the parameter c through.

Parameter convention: the emitted tuples are monic; the step-1 result is
monic-normalized before it enters step 2, which makes the A_2 family from
the trivial tuple come out as exactly (x^3 - 3c, x^3 + 3c).

`explore_population` runs a bounded, deterministic BFS over directions and
parameters, re-verifying every node and checking the weight-at-infinity
dichotomy along each edge.
"""

from dataclasses import dataclass, field

from .cartan import Weight, folded_reflect
from .errors import (ExceptionalParameter, InputError,
                     InternalInvariantError, NoSolution, SeedInvalid,
                     UnsupportedType)
from .frame import (BetheTuple, frame_polys, interaction_product,
                    is_critical_exact, is_cyclotomic_tuple, is_generic,
                    weight_at_infinity)
from .qpoly import QPoly, wronskian_ode_solve
from .scalars import Cyc
from .serialize import tuple_doc_json


@dataclass(frozen=True)
class GenerationStep:
    direction: int          # orbit representative
    c: Cyc
    kind: str               # "L1" or "L2"
    intermediates: tuple = ()   # (name, QPoly) pairs for L2


def _rhs_l1(inst, y, i, t):
    """x^<L0,a_i^vee> T_i prod_{j != i} y_j^{-a_ij}."""
    return QPoly.x_power(inst.gamma(i)) * interaction_product(inst, y, i, t=t)


def elementary_generate_L1(inst, y, i, c, t=None):
    """One elementary generation step at node i (integral <L0, a_i^vee>).

    Returns (tuple, base, generic) where `base` is the pinned particular
    solution (zero coefficient at x^deg y_i), the emitted component is
    monic(base + c*y_i), and `generic` flags whether the result passes the
    genericity test for this parameter value.
    """
    t = t or frame_polys(inst)
    gamma = inst.gamma(i)
    if gamma.denominator != 1 or gamma < 0:
        raise InputError(f"elementary L1 step needs <L0,a_{i}^vee> in Z>=0")
    rhs = _rhs_l1(inst, y, i, t)
    base, _ = wronskian_ode_solve(y[i], rhs, ("coeff_zero", y[i].degree))
    new = base + y[i].scale(c)
    if new.is_zero():
        raise ExceptionalParameter(c, f"component y_{i} degenerates to zero")
    polys = list(y)
    polys[i] = new.monic()
    out = BetheTuple(polys)
    ok, _ = is_generic(inst, out, t=t)
    return out, base, ok


def _transport(poly, omega, k):
    """omega^(k deg) * poly(omega^-k x) for an ordinary polynomial."""
    if poly.is_zero():
        return poly
    deg = poly.degree
    return QPoly({e: c * omega ** (int(k * (deg - e)))
                  for e, c in poly.terms.items()})


def cyclotomic_generate_L1(inst, fold, y, i, c, t=None):
    """Cyclotomic generation at an L=1 orbit representative.

    One solve at the representative, then transport across the orbit;
    returns (BetheTuple, GenerationStep).
    """
    t = t or frame_polys(inst)
    if i not in fold.reps:
        raise InputError(f"{i} is not an orbit representative")
    if fold.linking[i] != 1:
        raise InputError(f"node {i} has L = {fold.linking[i]}, expected 1")
    c = c if isinstance(c, Cyc) else Cyc.of(c)
    rhs = _rhs_l1(inst, y, i, t)
    base, _ = wronskian_ode_solve(y[i], rhs, ("coeff_zero", y[i].degree))
    member = base + y[i].scale(c)
    if member.is_zero():
        raise ExceptionalParameter(c, "generated component vanishes")

    m_i = fold.orbit_len[i]
    polys = list(y)
    for k in range(m_i):
        node = inst.aut.power(i, k)
        polys[node] = _transport(member, inst.omega, k)
    if m_i > 1:
        node = inst.aut(i)
        rhs_node = _rhs_l1(inst, y, node, t)
        ind_base, _ = wronskian_ode_solve(y[node], rhs_node,
                                          ("coeff_zero", y[node].degree))
        if _transport(base, inst.omega, 1) != ind_base:
            raise InternalInvariantError(
                "transported L1 component disagrees with an independent solve")
    out = BetheTuple.monic_of(polys)
    ok, witness = is_generic(inst, out, t=t)
    if not ok:
        raise ExceptionalParameter(c, witness)
    if not is_cyclotomic_tuple(inst, out):
        raise InternalInvariantError("L1 generation lost cyclotomic symmetry")
    step = GenerationStep(direction=i, c=c, kind="L1")
    return out, step


def cyclotomic_generate_L2(inst, fold, y, i, c, t=None):
    """Cyclotomic generation at an L=2 orbit representative.

    Runs the three-step sequence (holomorphic solve, pinned solve + c*y,
    holomorphic solve) on the A_2 block {i, ibar} and assembles the new
    tuple.  Only M_i = 2 occurs for finite and affine diagrams.
    """
    t = t or frame_polys(inst)
    if fold.linking[i] != 2:
        raise InputError(f"node {i} has L = {fold.linking[i]}, expected 2")
    if fold.orbit_len[i] != 2:
        raise UnsupportedType("L=2 generation implemented for orbit length 2")
    c = c if isinstance(c, Cyc) else Cyc.of(c)
    ibar = inst.aut(i)
    gamma = inst.gamma(i)
    if gamma.denominator != 2:
        raise InputError(f"<L0,a_{i}^vee> must be half-odd for an L=2 step")

    # step 1: Wr(y_i, x^(gamma+1) Y) = x^gamma T_i prod_{j!=i} y_j^(-a_ij)
    rhs1 = _rhs_l1(inst, y, i, t)
    lifted, _ = wronskian_ode_solve(y[i], rhs1,
                                    ("holomorphic_at_zero", gamma + 1))
    y_i_1 = QPoly({e - (gamma + 1): v for e, v in lifted.terms.items()})
    if not y_i_1.is_polynomial():
        raise NoSolution("step-1 component is not an ordinary polynomial")
    y_i_1 = y_i_1.monic()

    # step 2: Wr(y_ibar, Y) = x^(1+2 gamma) T_ibar y^(i)_i prod y_j^(-a_ibar,j)
    rhs2 = QPoly.x_power(1 + 2 * gamma) * t[ibar] * y_i_1
    for j in range(inst.cartan.n):
        if j in (i, ibar):
            continue
        power = -inst.cartan.a[ibar][j]
        if power:
            rhs2 = rhs2 * y[j] ** power
    base2, _ = wronskian_ode_solve(y[ibar], rhs2,
                                   ("coeff_zero", y[ibar].degree))
    y_ibar_2 = base2 + y[ibar].scale(c)
    if y_ibar_2.is_zero():
        raise ExceptionalParameter(c, "middle step component vanishes")

    # step 3: Wr(x^(gamma+1) y^(i)_i, Y) = x^gamma T_i y^(ibar,i) prod ...
    f3 = QPoly.x_power(gamma + 1) * y_i_1
    rhs3 = QPoly.x_power(gamma) * t[i] * y_ibar_2
    for j in range(inst.cartan.n):
        if j in (i, ibar):
            continue
        power = -inst.cartan.a[i][j]
        if power:
            rhs3 = rhs3 * y[j] ** power
    y_i_3, _ = wronskian_ode_solve(f3, rhs3, ("holomorphic_at_zero", 0))
    if not y_i_3.is_polynomial():
        raise NoSolution("step-3 component is not an ordinary polynomial")

    polys = list(y)
    polys[i] = y_i_3
    polys[ibar] = y_ibar_2
    out = BetheTuple.monic_of(polys)
    ok, witness = is_generic(inst, out, t=t)
    if not ok:
        raise ExceptionalParameter(c, witness)
    if not is_cyclotomic_tuple(inst, out):
        raise InternalInvariantError("L2 generation lost cyclotomic symmetry")
    step = GenerationStep(direction=i, c=c, kind="L2", intermediates=(
        ("y_i_step1", y_i_1), ("y_ibar_step2", y_ibar_2),
        ("y_i_step3", y_i_3)))
    return out, step


def cyclotomic_generate(inst, fold, y, i, c, t=None):
    if fold.linking[i] == 1:
        return cyclotomic_generate_L1(inst, fold, y, i, c, t=t)
    return cyclotomic_generate_L2(inst, fold, y, i, c, t=t)


def generation_family(inst, fold, y, i, t=None):
    """Linear structure of the generated family at the representative i.

    Returns (index, base, direction): before monic normalization the moved
    component at `index` is base + c * direction.  For L = 1 that is the
    pinned particular solution and y_i; for L = 2 it is the middle-step
    pair (the component at ibar), which fixes the parameterization of the
    whole step.
    """
    t = t or frame_polys(inst)
    if fold.linking[i] == 1:
        rhs = _rhs_l1(inst, y, i, t)
        base, _ = wronskian_ode_solve(y[i], rhs, ("coeff_zero", y[i].degree))
        return i, base, y[i]
    ibar = inst.aut(i)
    gamma = inst.gamma(i)
    rhs1 = _rhs_l1(inst, y, i, t)
    lifted, _ = wronskian_ode_solve(y[i], rhs1,
                                    ("holomorphic_at_zero", gamma + 1))
    y_i_1 = QPoly({e - (gamma + 1): v for e, v in lifted.terms.items()}).monic()
    rhs2 = QPoly.x_power(1 + 2 * gamma) * t[ibar] * y_i_1
    for j in range(inst.cartan.n):
        if j not in (i, ibar) and inst.cartan.a[ibar][j]:
            rhs2 = rhs2 * y[j] ** (-inst.cartan.a[ibar][j])
    base2, _ = wronskian_ode_solve(y[ibar], rhs2,
                                   ("coeff_zero", y[ibar].degree))
    return ibar, base2, y[ibar]


@dataclass
class PopulationNode:
    node_id: int
    tuple_: BetheTuple
    parent: int | None
    step: GenerationStep | None
    lambda_inf: Weight
    flags: dict = field(default_factory=dict)


class PopulationGraph:
    def __init__(self):
        self.nodes = []
        self._index = {}

    def key(self, y):
        return tuple_doc_json(y)

    def find(self, y):
        return self._index.get(self.key(y))

    def add(self, node):
        self._index[self.key(node.tuple_)] = node.node_id
        self.nodes.append(node)

    def __len__(self):
        return len(self.nodes)


def explore_population(inst, fold, seed, depth, samples, retry_budget=4):
    """Bounded BFS over cyclotomic generation directions and parameters.

    Every emitted node is re-verified (generic, cyclotomic, critical) and
    its weight at infinity checked against the dichotomy: equal to the
    parent's or to its folded shifted reflection.  Deduplication is by the
    canonical serialized monic tuple.
    """
    t = frame_polys(inst)
    ok, witness = is_generic(inst, seed, t=t)
    if not ok:
        raise SeedInvalid(f"seed not generic: {witness}")
    if not is_cyclotomic_tuple(inst, seed):
        raise SeedInvalid("seed is not cyclotomic")
    crit, _ = is_critical_exact(inst, seed, t=t)
    if not crit:
        raise SeedInvalid("seed is not an exact critical point")

    samples = [s if isinstance(s, Cyc) else Cyc.of(s) for s in samples]
    graph = PopulationGraph()
    root = PopulationNode(node_id=0, tuple_=seed, parent=None, step=None,
                          lambda_inf=weight_at_infinity(inst, seed),
                          flags={"generic": True, "cyclotomic": True,
                                 "critical": True})
    graph.add(root)
    frontier = [root]
    for _ in range(depth):
        next_frontier = []
        for node in frontier:
            for i in fold.reps:
                skipped = []
                for c in samples:
                    try:
                        child, step = cyclotomic_generate(
                            inst, fold, node.tuple_, i, c, t=t)
                    except ExceptionalParameter as exc:
                        skipped.append((c, exc.reason))
                        if len(skipped) > retry_budget:
                            break
                        continue
                    if graph.find(child) is not None:
                        continue
                    flags = _verify_node(inst, fold, node, child, i, t)
                    new = PopulationNode(
                        node_id=len(graph.nodes), tuple_=child,
                        parent=node.node_id, step=step,
                        lambda_inf=weight_at_infinity(inst, child),
                        flags=flags)
                    graph.add(new)
                    next_frontier.append(new)
        frontier = next_frontier
    return graph


def _verify_node(inst, fold, parent, child, i, t):
    ok_g, _ = is_generic(inst, child, t=t)
    ok_cyc = is_cyclotomic_tuple(inst, child)
    ok_cr, _ = is_critical_exact(inst, child, t=t)
    linf = weight_at_infinity(inst, child)
    reflected = folded_reflect(inst.cartan, inst.aut, fold, i,
                               parent.lambda_inf)
    if linf == parent.lambda_inf:
        edge = "unchanged"
    elif linf == reflected:
        edge = "reflected"
    else:
        raise InternalInvariantError(
            f"weight at infinity {linf} is neither the parent's "
            f"{parent.lambda_inf} nor its folded reflection {reflected}")
    if not (ok_g and ok_cyc and ok_cr):
        raise InternalInvariantError(
            f"generated node fails verification: generic={ok_g} "
            f"cyclotomic={ok_cyc} critical={ok_cr}")
    return {"generic": ok_g, "cyclotomic": ok_cyc, "critical": ok_cr,
            "edge": edge}
