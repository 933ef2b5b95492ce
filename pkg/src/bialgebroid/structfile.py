"""JSON structure files: loading with located errors, and emitting."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .algebroid import Algebroid, AlgebroidError
from .exterior import ExteriorError, MultiForm, Multivector
from .glb import GLBPair, YBData, gl2, heisenberg, su2_u2
from .jacobi import JacobiStructure, contact_r3
from .scalar import ParseError, Ring, ScalarError

KINDS = ("lie_algebra", "algebroid", "jacobi", "glb_pair", "yb_data")
TOP_FIELDS = {"kind", "ring", "rank", "anchor", "bracket", "cocycle_form", "cocycle_vector",
              "bivector", "vector", "dual"}
DUAL_FIELDS = {"anchor", "bracket"}
RING_FIELDS = {"vars", "time_extended"}


class SchemaError(ValueError):
    """Invalid structure file; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class StructureFile:
    kind: str
    ring: Ring
    rank: int
    raw: dict
    algebroid: Algebroid | None = None
    dual: Algebroid | None = None
    cocycle_form: MultiForm | None = None
    cocycle_vector: Multivector | None = None
    bivector: Multivector | None = None
    vector: Multivector | None = None

    def jacobi(self) -> JacobiStructure:
        m = len(self.ring.directions)
        lam = self.bivector if self.bivector is not None else Multivector.zero(self.ring, m, 2)
        E = self.vector if self.vector is not None else Multivector.zero(self.ring, m, 1)
        return JacobiStructure(self.ring, lam, E)

    def yb(self) -> YBData:
        n = self.rank
        r = self.bivector if self.bivector is not None else Multivector.zero(self.ring, n, 2)
        x = self.vector if self.vector is not None else Multivector.zero(self.ring, n, 1)
        return YBData(self.algebroid, r, x)

    def pair(self) -> GLBPair:
        n = self.rank
        phi0 = self.cocycle_form if self.cocycle_form is not None else MultiForm.zero(self.ring, n, 1)
        X0 = self.cocycle_vector if self.cocycle_vector is not None else Multivector.zero(self.ring, n, 1)
        return GLBPair(self.algebroid, self.dual, phi0, X0)


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise SchemaError(path, message)


def _poly(ring: Ring, value: Any, path: str):
    if isinstance(value, bool):
        raise SchemaError(path, "expected a polynomial string")
    if isinstance(value, int):
        return ring.const(value)
    _expect(isinstance(value, str), path, "expected a polynomial string")
    try:
        return ring.parse(value)
    except ParseError as e:
        raise SchemaError(path, f"parse error at position {e.pos}: {e}") from None
    except ScalarError as e:
        raise SchemaError(path, str(e)) from None


def _poly_list(ring: Ring, value: Any, n: int, path: str) -> list:
    _expect(isinstance(value, list), path, "expected a list")
    _expect(len(value) == n, path, f"expected {n} entries, got {len(value)}")
    return [_poly(ring, v, f"{path}[{k}]") for k, v in enumerate(value)]


def _index(value: Any, n: int, path: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer index")
    _expect(1 <= value <= n, path, f"index must be between 1 and {n}")
    return value - 1


def _check_fields(doc: dict, allowed: set, path: str):
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown field")


def _algebroid(doc: dict, ring: Ring, rank: int, path: str, need_anchor: bool) -> Algebroid:
    m = len(ring.directions)
    if "anchor" in doc:
        anchor = doc["anchor"]
        _expect(isinstance(anchor, list), f"{path}.anchor", "expected a list of rows")
        _expect(len(anchor) == rank, f"{path}.anchor", f"expected {rank} rows, got {len(anchor)}")
        rows = [_poly_list(ring, row, m, f"{path}.anchor[{i}]") for i, row in enumerate(anchor)]
    else:
        _expect(not need_anchor or m == 0, f"{path}.anchor", "missing anchor")
        rows = [[ring.zero()] * m for _ in range(rank)]
    brackets = {}
    entries = doc.get("bracket", [])
    _expect(isinstance(entries, list), f"{path}.bracket", "expected a list")
    for k, ent in enumerate(entries):
        p = f"{path}.bracket[{k}]"
        _expect(isinstance(ent, dict), p, "expected an object")
        _check_fields(ent, {"i", "j", "coeffs"}, p)
        for key in ("i", "j", "coeffs"):
            _expect(key in ent, f"{p}.{key}", "missing field")
        i = _index(ent["i"], rank, f"{p}.i")
        j = _index(ent["j"], rank, f"{p}.j")
        _expect(i != j, p, "i and j must differ")
        key = (min(i, j), max(i, j))
        _expect(key not in brackets, p, "duplicate bracket entry")
        coeffs = _poly_list(ring, ent["coeffs"], rank, f"{p}.coeffs")
        if i > j:
            coeffs = [-c for c in coeffs]
        brackets[key] = coeffs
    try:
        return Algebroid(ring, rank, rows, brackets)
    except AlgebroidError as e:
        raise SchemaError(path, str(e)) from None


def _records(ring: Ring, rank: int, value: Any, degree: int, path: str) -> Multivector:
    _expect(isinstance(value, list), path, "expected a list of {indices, coeff} records")
    recs = []
    for k, rec in enumerate(value):
        p = f"{path}[{k}]"
        _expect(isinstance(rec, dict), p, "expected an object")
        _check_fields(rec, {"indices", "coeff"}, p)
        _expect("indices" in rec and "coeff" in rec, p, "records need indices and coeff")
        idx = rec["indices"]
        _expect(isinstance(idx, list) and len(idx) == degree, f"{p}.indices", f"expected {degree} indices")
        ids = [_index(v, rank, f"{p}.indices[{q}]") + 1 for q, v in enumerate(idx)]
        recs.append({"indices": ids, "coeff": _poly(ring, rec["coeff"], f"{p}.coeff")})
    try:
        return Multivector.from_records(ring, rank, recs, degree=degree)
    except ExteriorError as e:
        raise SchemaError(path, str(e)) from None


def load(doc: Any) -> StructureFile:
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    _check_fields(doc, TOP_FIELDS, "$")
    _expect("kind" in doc, "$.kind", "missing field")
    kind = doc["kind"]
    _expect(kind in KINDS, "$.kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")

    rd = doc.get("ring", {"vars": [], "time_extended": False})
    _expect(isinstance(rd, dict), "$.ring", "expected an object")
    _check_fields(rd, RING_FIELDS, "$.ring")
    vars_ = rd.get("vars", [])
    _expect(isinstance(vars_, list) and all(isinstance(v, str) for v in vars_), "$.ring.vars",
            "expected a list of names")
    te = rd.get("time_extended", False)
    _expect(isinstance(te, bool), "$.ring.time_extended", "expected a boolean")
    try:
        ring = Ring(vars_, te)
    except ScalarError as e:
        raise SchemaError("$.ring", str(e)) from None
    m = len(ring.directions)

    if kind == "jacobi":
        rank = doc.get("rank", m)
        _expect(rank == m, "$.rank", f"a Jacobi structure lives on the coordinate frame of rank {m}")
    else:
        _expect("rank" in doc, "$.rank", "missing field")
        rank = doc["rank"]
        _expect(isinstance(rank, int) and not isinstance(rank, bool) and rank >= 0, "$.rank",
                "expected a non-negative integer")

    sf = StructureFile(kind, ring, rank, doc)
    if kind in ("lie_algebra", "yb_data"):
        _expect(not ring.variables and not ring.time_extended, "$.ring", f"a {kind} lives over a point")
        _expect("anchor" not in doc, "$.anchor", f"a {kind} has no anchor")
    if kind != "jacobi":
        sf.algebroid = _algebroid(doc, ring, rank, "$", need_anchor=kind in ("algebroid", "glb_pair"))
    else:
        for key in ("anchor", "bracket", "dual"):
            _expect(key not in doc, f"$.{key}", "not used by a Jacobi structure")
    if kind == "glb_pair":
        _expect("dual" in doc, "$.dual", "missing field")
        dd = doc["dual"]
        _expect(isinstance(dd, dict), "$.dual", "expected an object")
        _check_fields(dd, DUAL_FIELDS, "$.dual")
        sf.dual = _algebroid(dd, ring, rank, "$.dual", need_anchor=True)
    elif "dual" in doc:
        raise SchemaError("$.dual", f"not used by kind {kind}")
    if "cocycle_form" in doc:
        sf.cocycle_form = MultiForm.linear(ring, _poly_list(ring, doc["cocycle_form"], rank, "$.cocycle_form"))
    if "cocycle_vector" in doc:
        sf.cocycle_vector = Multivector.linear(ring, _poly_list(ring, doc["cocycle_vector"], rank,
                                                                "$.cocycle_vector"))
    if "bivector" in doc:
        sf.bivector = _records(ring, rank, doc["bivector"], 2, "$.bivector")
    if "vector" in doc:
        sf.vector = Multivector.linear(ring, _poly_list(ring, doc["vector"], rank, "$.vector"))
    if kind == "jacobi":
        _expect("bivector" in doc, "$.bivector", "missing field")
    if kind == "yb_data":
        _expect("bivector" in doc, "$.bivector", "missing field")
        _expect("vector" in doc, "$.vector", "missing field")
    return sf


def load_text(text: str) -> StructureFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", f"invalid JSON: {e.msg}") from None
    return load(doc)


def load_file(path: str) -> StructureFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SchemaError(path, f"cannot read file: {e.strerror}") from None
    return load_text(text)


# emitting ---------------------------------------------------------------------------
def _ring_doc(ring: Ring) -> dict:
    return {"vars": list(ring.variables), "time_extended": ring.time_extended}


def _bracket_doc(A: Algebroid) -> list:
    out = []
    for (i, j), v in sorted(A.brackets().items()):
        out.append({"i": i + 1, "j": j + 1, "coeffs": [str(c) for c in v.components()]})
    return out


def algebroid_doc(A: Algebroid, kind: str = "algebroid") -> dict:
    doc: dict = {"kind": kind, "ring": _ring_doc(A.ring), "rank": A.rank}
    if kind != "lie_algebra" and kind != "yb_data":
        doc["anchor"] = [[str(c) for c in row] for row in A.anchor]
    doc["bracket"] = _bracket_doc(A)
    return doc


def yb_doc(data: YBData) -> dict:
    doc = algebroid_doc(data.h, "yb_data")
    doc["bivector"] = data.r.to_records()
    doc["vector"] = [str(c) for c in data.xbar0.components()]
    return doc


def jacobi_doc(J: JacobiStructure) -> dict:
    return {"kind": "jacobi", "ring": _ring_doc(J.ring), "bivector": J.Lambda.to_records(),
            "vector": [str(c) for c in J.E.components()]}


def glb_doc(p: GLBPair) -> dict:
    doc = algebroid_doc(p.A, "glb_pair")
    doc["cocycle_form"] = [str(c) for c in p.phi0.components()]
    doc["cocycle_vector"] = [str(c) for c in p.X0.components()]
    doc["dual"] = {"anchor": [[str(c) for c in row] for row in p.Astar.anchor],
                   "bracket": _bracket_doc(p.Astar)}
    return doc


EXAMPLES = {
    "heisenberg": lambda: yb_doc(heisenberg()),
    "su2_u2": lambda: yb_doc(su2_u2()),
    "gl2": lambda: yb_doc(gl2()),
    "contact_r3": lambda: jacobi_doc(contact_r3()),
}


def emit_example(name: str) -> dict:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; expected one of {', '.join(EXAMPLES)}") from None


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


__all__ = ["SchemaError", "StructureFile", "load", "load_text", "load_file", "emit_example", "dumps",
           "algebroid_doc", "yb_doc", "jacobi_doc", "glb_doc", "EXAMPLES"]
