"""JSON job documents: rings, filtrations, tori and options.

A document looks like::

    {
      "ring": {"variables": ["x", "y"], "relations": [], "dimension": 1},
      "filtration": {"type": "rees", "generators": [{"t": 1, "poly": "x+y"}, {"t": 2, "poly": "y"}]},
      "torus": {"cocharacters": [[0, 1]]},
      "options": {"kmax": 24, "seed": 0}
    }

``ring`` may also be ``{"projective": m}``. Filtrations are ``rees``,
``product`` (with ``weights``) or ``trivial``; a second filtration goes in
``filtrations`` as a two-element list. ``torus`` may be the string
``"diagonal"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .errors import ParseError, ValidationError
from .parser import parse_poly
from .filtration import ReesPresentation, product_filtration, trivial_filtration
from .ring import GradedRing, projective_space
from .torus import OneParamSubgroup, Torus

OPTION_KEYS = ("kmax", "window", "seed", "rmax")


@dataclass
class JobDocument:
    ring: GradedRing
    filtrations: List[ReesPresentation]
    torus: Optional[Torus] = None
    lam: Optional[OneParamSubgroup] = None
    options: Dict[str, int] = field(default_factory=dict)
    raw: Dict[str, Any] = field(default_factory=dict)
    source: str = ""


def _line_of(text: str, needle: str) -> Optional[int]:
    """1-based line of the first occurrence of the JSON literal ``needle`` in ``text``."""
    pos = text.find(json.dumps(needle))
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def _require(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def _int_list(value, what: str) -> List[int]:
    _require(isinstance(value, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in value),
             f"{what} must be a list of integers")
    return list(value)


def parse_ring(block: Any, text: str = "") -> GradedRing:
    _require(isinstance(block, dict), "ring must be an object")
    if "projective" in block:
        m = block["projective"]
        _require(isinstance(m, int) and m >= 1, "ring.projective must be a positive integer")
        return projective_space(m)
    names = block.get("variables")
    _require(isinstance(names, list) and names and all(isinstance(v, str) for v in names),
             "ring.variables must be a non-empty list of names")
    rels = block.get("relations", [])
    _require(isinstance(rels, list) and all(isinstance(r, str) for r in rels), "ring.relations must be strings")
    dim = block.get("dimension")
    _require(dim is None or (isinstance(dim, int) and dim >= 0), "ring.dimension must be a non-negative integer")
    parsed = []
    for idx, r in enumerate(rels):
        try:
            parsed.append(parse_poly(r, names, line=_line_of(text, r)))
        except ParseError as exc:
            raise ParseError(f"ring.relations[{idx}]: {exc}", r, None, None) from None
    return GradedRing(names, parsed, dim)


def parse_filtration(block: Any, ring: GradedRing, where: str, text: str = "") -> ReesPresentation:
    _require(isinstance(block, dict), f"{where} must be an object")
    kind = block.get("type", "rees")
    label = block.get("label")
    if kind == "trivial":
        f = trivial_filtration(ring)
        if label:
            f.label = label
        return f
    if kind == "product":
        return product_filtration(ring, _int_list(block.get("weights"), f"{where}.weights"), label)
    _require(kind == "rees", f"{where}.type must be rees, product or trivial")
    gens = block.get("generators")
    _require(isinstance(gens, list) and gens, f"{where}.generators must be a non-empty list")
    parsed = []
    for idx, g in enumerate(gens):
        _require(isinstance(g, dict) and isinstance(g.get("t"), int) and isinstance(g.get("poly"), str),
                 f"{where}.generators[{idx}] needs an integer 't' and a string 'poly'")
        try:
            poly = ring.parse(g["poly"], line=_line_of(text, g["poly"]))
        except ParseError as exc:
            raise ParseError(f"{where}.generators[{idx}].poly: {exc}", g["poly"], None, None) from None
        parsed.append((g["t"], poly))
    return ReesPresentation(ring, parsed, label=label or where)


def parse_torus(block: Any, ring: GradedRing) -> Torus:
    if block == "diagonal" or (isinstance(block, dict) and block.get("type") == "diagonal"):
        return Torus.diagonal(ring)
    if block == "trivial" or (isinstance(block, dict) and block.get("type") == "trivial"):
        return Torus.trivial(ring)
    _require(isinstance(block, dict) and isinstance(block.get("cocharacters"), list),
             "torus must be \"diagonal\", \"trivial\" or an object with cocharacters")
    cochars = [_int_list(c, "torus.cocharacters[]") for c in block["cocharacters"]]
    return Torus(ring, cochars)


def parse_document(text: str, source: str = "") -> JobDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.colno - 1, exc.lineno) from None
    _require(isinstance(raw, dict), "a job document must be a JSON object")
    _require("ring" in raw, "document has no ring block")
    ring = parse_ring(raw["ring"], text)
    blocks = []
    if "filtration" in raw:
        blocks.append(("filtration", raw["filtration"]))
    if "filtrations" in raw:
        _require(isinstance(raw["filtrations"], list), "filtrations must be a list")
        blocks.extend((f"filtrations[{i}]", b) for i, b in enumerate(raw["filtrations"]))
    filts = [parse_filtration(b, ring, where, text) for where, b in blocks]
    torus = parse_torus(raw["torus"], ring) if "torus" in raw else None
    lam = None
    if "lambda" in raw:
        lb = raw["lambda"]
        _require(isinstance(lb, dict), "lambda must be an object with weights")
        lam = OneParamSubgroup(ring, tuple(_int_list(lb.get("weights"), "lambda.weights")))
    opts = raw.get("options", {})
    _require(isinstance(opts, dict), "options must be an object")
    options = {}
    for key, value in opts.items():
        _require(key in OPTION_KEYS, f"unknown option {key!r}")
        _require(isinstance(value, int) and not isinstance(value, bool), f"option {key} must be an integer")
        options[key] = value
    return JobDocument(ring, filts, torus, lam, options, raw, source)


def load_document(path: str) -> JobDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), path)
