"""JSON document layer.

All exact scalars travel as strings: rationals as "p/q", cyclotomic values
in the field generator w as e.g. "2/3*w^2 - w + 1" (with the field order
recorded once per document where it is not implied by the instance).
Serialization is canonical: exponent keys sorted numerically, dict keys
emitted in a fixed order, so equal values produce identical bytes.
"""

import json
import re
from fractions import Fraction
from math import lcm

from .cartan import CartanData, DiagramAut, Weight
from .errors import InputError
from .qpoly import QPoly
from .scalars import Cyc


# --- scalars -------------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(?:w(?:\^(\d+))?)?\s*$")


def scalar_str(value):
    if isinstance(value, Cyc):
        return str(value)
    return str(Fraction(value))


def parse_scalar(text, order=1):
    """Parse "p/q" or a polynomial in w into a Cyc of at least `order`."""
    text = text.strip()
    if not text:
        raise InputError("empty scalar string")
    chunks = re.split(r"(?=[+-])(?![^(]*\))", text.replace(" ", ""))
    total = Cyc.of(0, order)
    parsed_any = False
    for chunk in chunks:
        if not chunk:
            continue
        m = _TERM_RE.match(chunk)
        if not m or (m.group(2) is None and "w" not in chunk):
            if re.fullmatch(r"[+-]?\d+(/\d+)?", chunk):
                total = total + Cyc.of(Fraction(chunk), order)
                parsed_any = True
                continue
            raise InputError(f"cannot parse scalar term {chunk!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if "w" in chunk:
            power = int(m.group(3)) if m.group(3) else 1
            if order < 2:
                raise InputError("cyclotomic generator in a rational context")
            total = total + Cyc.root_of_unity(order, power) * (sign * coeff)
        else:
            total = total + Cyc.of(sign * coeff, order)
        parsed_any = True
    if not parsed_any:
        raise InputError(f"cannot parse scalar {text!r}")
    return total


# --- quasi-polynomials ---------------------------------------------------

def qpoly_doc(p):
    """{"denom": D, "terms": {"e*D": scalar string}} with sorted keys."""
    d = p.denom
    terms = {str(int(e * d)): scalar_str(c)
             for e, c in sorted(p.terms.items())}
    return {"denom": d, "terms": terms}


def qpoly_from_doc(doc, order=1):
    d = int(doc["denom"])
    return QPoly({Fraction(int(k), d): parse_scalar(v, order)
                  for k, v in doc["terms"].items()})


# --- weights and cartan data ----------------------------------------------

def weight_doc(w):
    return [str(p) for p in w.pairings]


def weight_from_doc(doc):
    return Weight([Fraction(p) for p in doc])


def cartan_doc(c):
    return {"matrix": [list(row) for row in c.a], "d": list(c.d)}


def cartan_from_doc(doc):
    if isinstance(doc, str):
        series, rank = doc[0], int(doc[1:])
        return CartanData.series(series, rank)
    if "series" in doc:
        return CartanData.series(doc["series"], int(doc["rank"]))
    return CartanData.from_matrix(doc["matrix"], doc.get("d"))


def perm_from_doc(doc, n):
    """1-based image array or cycle notation like "(1 4)(2 3)"."""
    if isinstance(doc, str):
        perm = list(range(n))
        for cycle in re.findall(r"\(([^)]*)\)", doc):
            nodes = [int(x) - 1 for x in re.split(r"[,\s]+", cycle.strip())
                     if x]
            if any(not 0 <= v < n for v in nodes):
                raise InputError(f"cycle {cycle!r} out of range")
            for a, b in zip(nodes, nodes[1:] + nodes[:1]):
                perm[a] = b
        return DiagramAut(tuple(perm))
    images = [int(v) - 1 for v in doc]
    if len(images) != n or sorted(images) != list(range(n)):
        raise InputError(
            f"sigma must be a 1-based permutation of 1..{n}, got {doc}")
    return DiagramAut(tuple(images))


def perm_doc(aut):
    return [i + 1 for i in aut.perm]


# --- instances -------------------------------------------------------------

def instance_doc(inst):
    return {
        "cartan": cartan_doc(inst.cartan),
        "sigma": perm_doc(inst.aut),
        "M": inst.M,
        "omega": scalar_str(inst.omega),
        "points": [scalar_str(z) for z in inst.points],
        "site_weights": [weight_doc(w) for w in inst.site_weights],
        "lambda0": weight_doc(inst.lambda0),
    }


def instance_from_doc(doc):
    from .frame import ProblemInstance
    cartan = cartan_from_doc(doc["cartan"])
    aut = perm_from_doc(doc["sigma"], cartan.n)
    M = int(doc.get("M", aut.order))
    if M != aut.order:
        raise InputError(f"declared M = {M} but sigma has order {aut.order}")
    omega_power = int(doc.get("omega_power", 1))
    if "omega" in doc:
        omega = parse_scalar(doc["omega"], M)
    else:
        omega = Cyc.root_of_unity(M, omega_power)
    points = tuple(parse_scalar(z, M) for z in doc.get("points", []))
    site_weights = tuple(weight_from_doc(w)
                         for w in doc.get("site_weights", []))
    lambda0 = weight_from_doc(doc["lambda0"]) if "lambda0" in doc \
        else Weight.zero(cartan.n)
    return ProblemInstance(cartan=cartan, aut=aut, omega=omega,
                           points=points, site_weights=site_weights,
                           lambda0=lambda0)


# --- tuples ----------------------------------------------------------------

def tuple_doc(y):
    return {"polys": [qpoly_doc(p) for p in y]}


def tuple_from_doc(doc, order=1):
    from .frame import BetheTuple
    return BetheTuple([qpoly_from_doc(p, order) for p in doc["polys"]])


def tuple_doc_json(y):
    return dumps(tuple_doc(y))


# --- population catalogs ----------------------------------------------------

def catalog_doc(graph):
    nodes = []
    for node in graph.nodes:
        entry = {
            "id": node.node_id,
            "parent": node.parent,
            "direction": None if node.step is None
            else node.step.direction + 1,
            "c": None if node.step is None else scalar_str(node.step.c),
            "tuple": tuple_doc(node.tuple_),
            "lambda_infinity": weight_doc(node.lambda_inf),
            "flags": dict(sorted(node.flags.items())),
        }
        nodes.append(entry)
    return {"nodes": nodes}


# --- spaces -----------------------------------------------------------------

def space_doc(space):
    order = 1
    for u in space.basis:
        order = lcm(order, u.field_order())
    return {
        "field": order,
        "p": space.frame.p,
        "exponents": [str(d) for d in space.frame.d],
        "dual_exponents": [str(d) for d in space.frame.ddag],
        "basis": [qpoly_doc(u) for u in space.basis],
    }


def dumps(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
