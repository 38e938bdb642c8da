"""JSON interchange for structures, maps, automorphisms and points.

Rationals are strings "p/q" (input also accepts "p"); complex numbers are
[re, im] pairs; polynomials are lists of {alpha, beta, re, im} records.

Structure files take one of three shapes:

    {"n": 3, "B": [[c, c], [c, c]]}                      simple J^B
    {"n": 3, "alpha": [[..]], "beta": [[..]]}            general model structure
    {"n": 3, "J": [[poly, ..], ..]}                      explicit complexified matrix
                                                          (frame dz1, dzb1, dz2, ...)
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import ComplexRational, Poly, format_rational, parse_rational
from .autgroup import Automorphism
from .errors import ParseError
from .maps import PolyMap
from .structures import ModelStructure, SimpleModelStructure, complexify


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dumps(obj: Any) -> str:
    """Canonical rendering: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(d: Any, keys: tuple[str, ...], what: str) -> None:
    if not isinstance(d, dict):
        raise ParseError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise ParseError(f"{what} is missing {', '.join(missing)}")


def _dimension(d: dict) -> int:
    n = d.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ParseError(f"dimension n must be an integer >= 2, got {n!r}")
    return n


def complex_matrix(rows: Any, what: str) -> list[list[ComplexRational]]:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a list of rows")
    return [[ComplexRational.from_json(x) for x in r] for r in rows]


def complex_vector(items: Any, what: str) -> list[ComplexRational]:
    if not isinstance(items, list):
        raise ParseError(f"{what} must be a list")
    return [ComplexRational.from_json(x) for x in items]


# structures ----------------------------------------------------------------------

def structure_from_json(d: Any):
    """A SimpleModelStructure, a ModelStructure, or (for "J") the raw complexified matrix."""
    _require(d, ("n",), "structure")
    n = _dimension(d)
    if "B" in d:
        return SimpleModelStructure(n, complex_matrix(d["B"], "B"))
    if "alpha" in d or "beta" in d:
        _require(d, ("alpha", "beta"), "structure")
        return ModelStructure(n, complex_matrix(d["alpha"], "alpha"), complex_matrix(d["beta"], "beta"))
    if "J" in d:
        rows = d["J"]
        if not isinstance(rows, list) or len(rows) != 2 * n or any(not isinstance(r, list) or len(r) != 2 * n for r in rows):
            raise ParseError(f"J must be a {2 * n}x{2 * n} matrix of polynomials")
        return [[Poly.from_json(e, n) for e in r] for r in rows]
    raise ParseError("structure needs one of B, alpha/beta, or J")


def structure_to_json(J, explicit: bool = False) -> dict:
    if explicit:
        return {"n": J.n, "J": [[e.to_json() for e in row] for row in complexify(J)]}
    if isinstance(J, SimpleModelStructure):
        return {"n": J.n, "B": [[x.to_json() for x in row] for row in J.B]}
    return {"n": J.n, "alpha": [[x.to_json() for x in row] for row in J.alpha],
            "beta": [[x.to_json() for x in row] for row in J.beta]}


# maps ----------------------------------------------------------------------------

def map_from_json(d: Any) -> PolyMap:
    _require(d, ("n", "components"), "map")
    n = _dimension(d)
    comps = d["components"]
    if not isinstance(comps, list) or len(comps) != n:
        raise ParseError(f"map needs {n} components")
    k = d.get("truncation_order")
    if k is not None and (not isinstance(k, int) or isinstance(k, bool) or k < 0):
        raise ParseError(f"truncation_order must be a non-negative integer or null, got {k!r}")
    return PolyMap(n, tuple(Poly.from_json(c, n) for c in comps), k)


def map_to_json(F: PolyMap) -> dict:
    return {"n": F.n, "truncation_order": F.truncation_order, "components": [p.to_json() for p in F.components]}


# automorphisms ---------------------------------------------------------------------

def automorphism_from_json(d: Any, B: SimpleModelStructure) -> Automorphism:
    """Parse and validate; raises AutomorphismError listing every failed invariant."""
    _require(d, ("A", "c", "zeta"), "automorphism")
    c = d["c"]
    if not isinstance(c, str):
        raise ParseError("c must be a rational string")
    return Automorphism(B, complex_matrix(d["A"], "A"), parse_rational(c), complex_vector(d["zeta"], "zeta"))


def automorphism_to_json(G: Automorphism) -> dict:
    return {"A": [[x.to_json() for x in row] for row in G.A], "c": format_rational(G.c),
            "zeta": [x.to_json() for x in G.zeta]}


# points ----------------------------------------------------------------------------

def point_from_json(d: Any, n: int) -> list[ComplexRational]:
    if d == "origin":
        return [ComplexRational(0)] * n
    pt = complex_vector(d, "point")
    if len(pt) != n:
        raise ParseError(f"point must have {n} coordinates, got {len(pt)}")
    return pt


def point_to_json(p) -> list:
    return [ComplexRational.coerce(x).to_json() for x in p]


def fraction_to_json(x: Fraction) -> str:
    return format_rational(x)
