"""JSON artifact files: curves, torsion tables, twist data, algebras,
trivialisations, quadrics, and descent outputs.

Every element is stored as its rational coordinate vector over the
declared tower (strings "p/q", never decimals).  Every file carries the
content hash of the curve it belongs to, so artifacts from different
curves cannot be mixed.  Dumps are canonical: sorted keys, fixed
separators, one trailing newline.
"""

import hashlib
import json
from fractions import Fraction

from .fields import FieldTower
from .curve import Curve, Point, TorsionTable, torsion_table
from .linalg import ExactMatrix
from .algebra import RhoTable, CSA, Trivialisation
from .geometry import QuadricSystem, PlaneCurveEquation, plane_monomials


class ParseError(ValueError):
    """The file does not have the expected shape."""


def dumps_canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def save(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")


def load(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError("not valid JSON: %s" % e)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("artifact files are objects with a 'kind' field")
    return obj


def _data_to_json(d):
    if isinstance(d, Fraction):
        return str(d)
    return [_data_to_json(c) for c in d]


def _data_from_json(j):
    if isinstance(j, str):
        try:
            return Fraction(j)
        except ValueError:
            raise ParseError("bad rational %r" % j)
    if not isinstance(j, list):
        raise ParseError("coefficient data must be strings or lists")
    return [_data_from_json(c) for c in j]


def tower_to_json(tower):
    return [{"name": name, "minpoly": [_data_to_json(c) for c in mp]}
            for name, mp in tower.levels]


def tower_from_json(j):
    """Rebuild a tower without re-certifying irreducibility; artifact
    files are trusted as the user's own prior output."""
    levels = []
    for lvl in j:
        if not isinstance(lvl, dict) or "name" not in lvl or "minpoly" not in lvl:
            raise ParseError("tower levels need 'name' and 'minpoly'")
        levels.append((lvl["name"], tuple(_data_from_json(c) for c in lvl["minpoly"])))
    return FieldTower(levels, _trusted=True)


def elem_to_json(e):
    return [str(c) for c in e.flatten()]


def elem_from_json(tower, j):
    if not isinstance(j, list) or len(j) != tower.degree:
        raise ParseError("coordinate vector has wrong length for the tower")
    return tower.element([Fraction(c) for c in j])


def _ij_key(ij):
    return "%d,%d" % ij


def _ij_unkey(s):
    try:
        i, j = s.split(",")
        return (int(i), int(j))
    except ValueError:
        raise ParseError("bad index key %r" % s)


def _pair_key(ab):
    return _ij_key(ab[0]) + "|" + _ij_key(ab[1])


def _pair_unkey(s):
    parts = s.split("|")
    if len(parts) != 2:
        raise ParseError("bad pair key %r" % s)
    return (_ij_unkey(parts[0]), _ij_unkey(parts[1]))


def curve_to_json(curve):
    body = {"field": tower_to_json(curve.field),
            "a": elem_to_json(curve.a), "b": elem_to_json(curve.b)}
    return {"kind": "curve", "hash": _hash_body(body), **body}


def _hash_body(body):
    return hashlib.sha256(dumps_canonical(body).encode()).hexdigest()[:16]


def curve_hash(curve):
    return curve_to_json(curve)["hash"]


def curve_from_json(j):
    if j.get("kind") != "curve":
        raise ParseError("not a curve file")
    field = tower_from_json(j["field"])
    curve = Curve(field, elem_from_json(field, j["a"]), elem_from_json(field, j["b"]))
    if curve_hash(curve) != j.get("hash"):
        raise ParseError("curve hash does not match its contents")
    return curve


def _check_hash(j, curve):
    if j.get("hash") != curve_hash(curve):
        raise ParseError("artifact belongs to a different curve")


def torsion_to_json(table):
    h = curve_hash(table.curve)
    pts = []
    for p in table:
        pts.append(None if p.is_infinity else
                   {"x": elem_to_json(p.x), "y": elem_to_json(p.y)})
    return {"kind": "torsion", "hash": h, "n": table.n, "points": pts}


def torsion_from_json(j, curve):
    if j.get("kind") != "torsion":
        raise ParseError("not a torsion file")
    _check_hash(j, curve)
    n = j["n"]
    pts = j["points"]
    if len(pts) != n * n or pts[0] is not None:
        raise ParseError("torsion file needs n^2 points starting at O")
    t1 = point_from_json(pts[n], curve)
    t2 = point_from_json(pts[1], curve)
    table = TorsionTable(curve, n, t1, t2)
    for k, pj in enumerate(pts):
        p = table.points[k]
        q = Point.at_infinity(curve) if pj is None else point_from_json(pj, curve)
        if not (p == q):
            raise ParseError("torsion file is not a basis table")
    return table


def point_to_json(p):
    assert not p.is_infinity
    return {"kind": "point", "hash": curve_hash(p.curve),
            "x": elem_to_json(p.x), "y": elem_to_json(p.y)}


def point_from_json(j, curve):
    K = curve.field
    x = elem_from_json(K, j["x"])
    y = elem_from_json(K, j["y"])
    if not curve.contains(x, y):
        raise ParseError("point is not on the curve")
    return Point(curve, x, y)


def point_file_from_json(j, curve):
    if j.get("kind") != "point":
        raise ParseError("not a point file")
    _check_hash(j, curve)
    return point_from_json(j, curve)


def rho_to_json(rho):
    table = rho.table
    vals = {_pair_key(k): elem_to_json(v) for k, v in rho.values.items()}
    return {"kind": "rho", "hash": curve_hash(table.curve), "n": table.n,
            "values": vals}


def rho_from_json(j, table):
    if j.get("kind") != "rho":
        raise ParseError("not a rho file")
    _check_hash(j, table.curve)
    K = table.curve.field
    values = {_pair_unkey(k): elem_from_json(K, v) for k, v in j["values"].items()}
    if len(values) != len(table) ** 2:
        raise ParseError("rho file needs one value per pair of torsion points")
    return RhoTable(table, values)


def csa_to_json(csa):
    table = csa.table
    return {"kind": "csa", "hash": curve_hash(table.curve), "n": table.n,
            "rho": {_pair_key(k): elem_to_json(v) for k, v in csa.rho.values.items()},
            "structure": {_pair_key(k): elem_to_json(v)
                          for k, v in csa.structure.items()}}


def csa_from_json(j, table):
    if j.get("kind") != "csa":
        raise ParseError("not a csa file")
    _check_hash(j, table.curve)
    K = table.curve.field
    rho = RhoTable(table, {_pair_unkey(k): elem_from_json(K, v)
                           for k, v in j["rho"].items()})
    structure = {_pair_unkey(k): elem_from_json(K, v)
                 for k, v in j["structure"].items()}
    return CSA(table, rho, structure)


def matrix_to_json(m):
    return [[elem_to_json(e) for e in row] for row in m.rows]


def matrix_from_json(tower, j):
    return ExactMatrix([[elem_from_json(tower, e) for e in row] for row in j], tower)


def triv_to_json(triv):
    out = {"kind": "trivialisation", "hash": curve_hash(triv.table.curve),
           "n": triv.n, "mode": triv.mode, "field": tower_to_json(triv.field),
           "rho": {_pair_key(k): elem_to_json(v) for k, v in triv.rho.values.items()},
           "matrices": {_ij_key(ij): matrix_to_json(m)
                        for ij, m in triv.matrices.items()}}
    if triv.gamma is not None:
        out["gamma"] = {_ij_key(ij): elem_to_json(g) for ij, g in triv.gamma.items()}
    else:
        out["gamma"] = None
    return out


def triv_from_json(j, table):
    if j.get("kind") != "trivialisation":
        raise ParseError("not a trivialisation file")
    _check_hash(j, table.curve)
    K = table.curve.field
    L = tower_from_json(j["field"])
    rho = RhoTable(table, {_pair_unkey(k): elem_from_json(K, v)
                           for k, v in j["rho"].items()})
    matrices = {_ij_unkey(k): matrix_from_json(L, m)
                for k, m in j["matrices"].items()}
    gamma = None
    if j.get("gamma") is not None:
        gamma = {_ij_unkey(k): elem_from_json(L, g) for k, g in j["gamma"].items()}
    return Trivialisation(table, rho, L, matrices, j["mode"], gamma)


def quadrics_to_json_forms(qs):
    forms = []
    for f in qs.forms:
        forms.append([[a, b, elem_to_json(c)] for (a, b), c in sorted(f.items())])
    return forms


def quadrics_from_json_forms(field, n, forms):
    out = []
    for f in forms:
        d = {}
        for term in f:
            if len(term) != 3:
                raise ParseError("quadric terms are [i, j, coeff]")
            a, b, c = term
            d[(a, b)] = elem_from_json(field, c)
        out.append(d)
    return QuadricSystem(field, n, out)


def quadrics_to_json(qs, curve, rho):
    return {"kind": "quadrics", "hash": curve_hash(curve), "n": qs.n,
            "rho": {_pair_key(k): elem_to_json(v) for k, v in rho.values.items()},
            "forms": quadrics_to_json_forms(qs)}


def quadrics_from_json(j, curve):
    if j.get("kind") != "quadrics":
        raise ParseError("not a quadrics file")
    _check_hash(j, curve)
    return quadrics_from_json_forms(curve.field, j["n"], j["forms"])


def quadrics_rho_from_json(j, table):
    K = table.curve.field
    return RhoTable(table, {_pair_unkey(k): elem_from_json(K, v)
                            for k, v in j["rho"].items()})


def plane_to_json(cub):
    return {"monomials": [list(m) for m in cub.monomials],
            "coeffs": [elem_to_json(c) for c in cub.coeffs]}


def plane_from_json(j, field, n):
    mono = [tuple(m) for m in j["monomials"]]
    if mono != plane_monomials(n):
        raise ParseError("monomial list is not the graded lex basis")
    coeffs = [elem_from_json(field, c) for c in j["coeffs"]]
    return PlaneCurveEquation(field, n, mono, coeffs)


def descent_to_json(out, curve):
    triv = out["trivialisation"]
    gamma = out["gamma"]
    gfield = next(iter(gamma.values())).tower
    return {"kind": "descent", "hash": curve_hash(curve),
            "n": out["report"]["n"], "seed": out["seed"],
            "quadrics": quadrics_to_json_forms(out["quadrics"]),
            "csa": csa_to_json(out["csa"]),
            "trivialisation": triv_to_json(triv),
            "gamma": {"field": tower_to_json(gfield),
                      "values": {_ij_key(ij): elem_to_json(g)
                                 for ij, g in gamma.items()}},
            "plane_curve": plane_to_json(out["plane_curve"]),
            "report": out["report"]}


def descent_from_json(j, curve):
    if j.get("kind") != "descent":
        raise ParseError("not a descent output file")
    _check_hash(j, curve)
    n = j["n"]
    table = torsion_table(curve, n)
    K = curve.field
    gfield = tower_from_json(j["gamma"]["field"])
    gamma = {_ij_unkey(k): elem_from_json(gfield, g)
             for k, g in j["gamma"]["values"].items()}
    return {"quadrics": quadrics_from_json_forms(K, n, j["quadrics"]),
            "csa": csa_from_json(j["csa"], table),
            "trivialisation": triv_from_json(j["trivialisation"], table),
            "gamma": gamma,
            "plane_curve": plane_from_json(j["plane_curve"], K, n),
            "report": j["report"], "seed": j["seed"]}
