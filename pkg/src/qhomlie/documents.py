"""JSON documents for algebras and check reports.

Algebra document (``"format": 1``)::

    {"format": 1, "name": "...", "dim": n, "basis": ["e0", ...],
     "bracket": [{"i": 0, "j": 1, "coeffs": [{"k": 2, "c": "1/2"}]}, ...],
     "twist": [["1", "0"], ["0", "1"]],      # optional, identity if absent
     "form":  [["0", "1"], ["1", "0"]]}      # optional

Rationals are strings ``"p"`` or ``"p/q"``.  Matrices list rows, and the
column ``j`` of a linear map is the image of basis vector ``j``.  Output is
canonical: sorted keys, sorted bracket entries, reduced rationals, so the
same input always produces the same bytes.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from .algebra import AlgebraError, Check, CheckReport, HomLieAlgebra, StructureTensor
from .linalg import LinalgError, Mat, format_rat, parse_rat

FORMAT = 1


class DocumentError(ValueError):
    """Malformed or inconsistent document."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _rat(x, where: str):
    if not isinstance(x, (str, int)) or isinstance(x, bool):
        raise DocumentError(f"{where}: rational must be a string like \"p/q\"")
    try:
        return parse_rat(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{where}: unparseable rational {x!r}") from exc


def _index(x, n: int, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise DocumentError(f"{where}: index must be an integer")
    if not 0 <= x < n:
        raise DocumentError(f"{where}: index {x} out of range")
    return x


def grid_to_doc(M: Mat) -> List[List[str]]:
    return [[format_rat(x) for x in row] for row in M.row_vectors()]


def doc_to_grid(obj, where: str, rows: Optional[int] = None, cols: Optional[int] = None) -> Mat:
    if isinstance(obj, Mapping) and "entries" in obj:
        obj = obj["entries"]
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise DocumentError(f"{where}: expected a list of rows")
    width = cols if cols is not None else (len(obj[0]) if obj else 0)
    if rows is not None and len(obj) != rows:
        raise DocumentError(f"{where}: expected {rows} rows, got {len(obj)}")
    for r in obj:
        if len(r) != width:
            raise DocumentError(f"{where}: ragged rows")
    return Mat([[_rat(x, where) for x in r] for r in obj], cols=width)


def vector_to_doc(v: Sequence) -> List[str]:
    return [format_rat(x) for x in v]


def parse_vector(text: str, n: Optional[int] = None, where: str = "vector") -> tuple:
    """``"1,0,-1/2"`` (an empty string is the empty vector)."""
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    v = tuple(_rat(p, where) for p in parts)
    if n is not None and len(v) != n:
        raise DocumentError(f"{where}: expected {n} entries, got {len(v)}")
    return v


# --------------------------------------------------------------------------
# algebras


def algebra_to_doc(A: HomLieAlgebra) -> Dict[str, Any]:
    bracket = []
    for (i, j), coeffs in sorted(A.bracket.entries().items()):
        bracket.append({"i": i, "j": j, "coeffs": [{"k": k, "c": format_rat(c)} for k, c in coeffs]})
    doc = {
        "format": FORMAT,
        "name": A.name,
        "dim": A.dim,
        "basis": list(A.basis_names),
        "bracket": bracket,
        "twist": grid_to_doc(A.twist),
    }
    if A.form is not None:
        doc["form"] = grid_to_doc(A.form)
    return doc


def doc_to_algebra(doc: Mapping[str, Any]) -> HomLieAlgebra:
    if not isinstance(doc, Mapping):
        raise DocumentError("document must be a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise DocumentError(f"unsupported format {fmt!r}")
    n = doc.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DocumentError("dim must be a non-negative integer")
    basis = doc.get("basis", [f"e{i}" for i in range(n)])
    if not isinstance(basis, list) or len(basis) != n or not all(isinstance(b, str) for b in basis):
        raise DocumentError(f"basis must list {n} names")
    entries = {}
    for pos, rec in enumerate(doc.get("bracket", [])):
        where = f"bracket[{pos}]"
        if not isinstance(rec, Mapping):
            raise DocumentError(f"{where}: expected an object")
        i = _index(rec.get("i"), n, where)
        j = _index(rec.get("j"), n, where)
        if i >= j:
            raise DocumentError(f"{where}: entries need i < j, got ({i}, {j})")
        if (i, j) in entries:
            raise DocumentError(f"{where}: duplicate entry ({i}, {j})")
        coeffs = {}
        for term in rec.get("coeffs", []):
            if isinstance(term, Mapping):
                k, c = term.get("k"), term.get("c")
            elif isinstance(term, list) and len(term) == 2:
                k, c = term
            else:
                raise DocumentError(f"{where}: coefficient must be {{k, c}}")
            k = _index(k, n, where)
            coeffs[k] = coeffs.get(k, 0) + _rat(c, where)
        entries[(i, j)] = coeffs
    twist = doc_to_grid(doc["twist"], "twist", n, n) if doc.get("twist") is not None else Mat.identity(n)
    form = doc_to_grid(doc["form"], "form", n, n) if doc.get("form") is not None else None
    if form is not None and not form.is_symmetric():
        raise DocumentError("asymmetric form")
    try:
        return HomLieAlgebra(str(doc.get("name", "algebra")), tuple(basis), StructureTensor(n, entries), twist, form)
    except (AlgebraError, LinalgError) as exc:
        raise DocumentError(str(exc)) from exc


def parse(data: Union[bytes, str]) -> HomLieAlgebra:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    return doc_to_algebra(doc)


def serialize(A: HomLieAlgebra) -> str:
    return dumps(algebra_to_doc(A))


def load_algebra(path: Union[str, Path]) -> HomLieAlgebra:
    return parse(Path(path).read_bytes())


def save_algebra(A: HomLieAlgebra, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(A), encoding="utf-8")


# --------------------------------------------------------------------------
# reports


def check_to_doc(c: Check) -> Dict[str, Any]:
    out: Dict[str, Any] = {"name": c.name, "passed": c.passed}
    if c.skipped:
        out["skipped"] = True
    if c.detail:
        out["detail"] = c.detail
    if c.witness is not None:
        w = c.witness
        out["witness"] = {
            "indices": [format_rat(x) if not isinstance(x, int) else x for x in w.indices],
            "defect": vector_to_doc(w.defect),
        }
        if w.note:
            out["witness"]["note"] = w.note
    return out


def report_doc(command: str, inputs: Mapping[str, str], report: Optional[CheckReport] = None,
               outputs: Optional[Mapping[str, Any]] = None, data: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "format": FORMAT,
        "command": command,
        "inputs": dict(inputs),
        "checks": [check_to_doc(c) for c in report.checks] if report is not None else [],
        "passed": report.passed if report is not None else True,
    }
    if outputs:
        doc["outputs"] = dict(outputs)
    if data:
        doc["data"] = dict(data)
    return doc


__all__ = [
    "DocumentError", "FORMAT", "algebra_to_doc", "check_to_doc", "digest", "doc_to_algebra",
    "doc_to_grid", "dumps", "grid_to_doc", "load_algebra", "parse", "parse_vector",
    "load_shipped", "report_doc", "save_algebra", "serialize", "vector_to_doc",
]


def load_shipped(name: str = "sl2_example") -> HomLieAlgebra:
    """One of the frozen documents bundled with the package."""
    from importlib.resources import files

    return parse(files("qhomlie").joinpath("data", f"{name}.json").read_bytes())
