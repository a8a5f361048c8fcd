"""Multiplication spec files and shared JSON encoding.

A spec file is a JSON document ``{version, label, dim, kind, payload}`` with
kind one of ``polynomial`` (payload ``{"coefficients": [...]}``, lowest degree
first, ending in 1), ``quaternion``, ``scaled_z`` (``{"n": n}``), ``raw``
(``{"tensor": sc}``) or ``acted`` (``{"base": <spec>, "matrix": rows}``).
Its hash is the sha256 of the canonical encoding (sorted keys, no spaces).
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from fractions import Fraction
from typing import Any

from .algebra import Multiplication, act, make_multiplication
from .catalog import from_polynomial, quaternion, scaled_z, shipped_catalog
from .linalg import RatMatrix

SPEC_VERSION = 1
KINDS = ("polynomial", "quaternion", "scaled_z", "raw", "acted")


class SpecError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalar / vector / matrix encoding


def encode(obj: Any) -> Any:
    """JSON-ready copy: Fractions become ``"a/b"`` strings, tuples lists,
    matrices row lists."""
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, RatMatrix):
        return encode(obj.rows)
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    return obj


def decode_scalar(x: Any):
    if isinstance(x, bool):
        raise SpecError("booleans are not numbers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            q = Fraction(x)
        except ValueError:
            raise SpecError(f"not a rational number: {x!r}") from None
        return q.numerator if q.denominator == 1 else q
    raise SpecError(f"not an exact number: {x!r}")


def decode_nested(obj: Any):
    if isinstance(obj, list):
        return [decode_nested(x) for x in obj]
    return decode_scalar(obj)


_RATIONAL = re.compile(r"(-?\d+)\s*/\s*(\d+)")


def parse_numbers(text: str):
    """Parse bracketed row-major syntax such as ``[[1,-1/2],[0,1]]``, a bare
    ``1,2`` vector, or a single number; a path to an existing JSON file wins."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    quoted = _RATIONAL.sub(lambda m: f'"{m.group(1)}/{m.group(2)}"', text.strip())
    if not quoted.startswith("["):
        quoted = f"[{quoted}]"
    try:
        raw = json.loads(quoted)
    except json.JSONDecodeError as exc:
        raise SpecError(f"cannot parse {text!r}: {exc.msg}") from None
    return decode_nested(raw)


def parse_vector(text: str) -> tuple:
    v = parse_numbers(text)
    if not isinstance(v, list) or any(isinstance(x, list) for x in v):
        raise SpecError(f"expected a vector, got {text!r}")
    return tuple(v)


def parse_matrix(text: str) -> RatMatrix:
    M = parse_numbers(text)
    if isinstance(M, list) and M and not isinstance(M[0], list):
        if len(M) == 1:
            M = [M]
        else:
            raise SpecError("matrices use nested rows, e.g. [[0,1],[1,0]]")
    if not M or any(not isinstance(r, list) or len(r) != len(M[0]) for r in M):
        raise SpecError("ragged or empty matrix")
    return RatMatrix(M)


def parse_vector_list(text: str) -> list[tuple]:
    """``[[1,0],[0,1]]`` (or ``[1,2,3]`` for one-dimensional vectors)."""
    vs = parse_numbers(text)
    if not isinstance(vs, list):
        raise SpecError("expected a list of vectors")
    return [tuple(v) if isinstance(v, list) else (v,) for v in vs]


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dumps(obj: Any, compact: bool = False) -> str:
    if compact:
        return canonical(encode(obj))
    return json.dumps(encode(obj), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# spec documents


def spec_hash(doc: dict) -> str:
    return hashlib.sha256(canonical(doc).encode("utf-8")).hexdigest()


def make_spec(kind: str, payload: dict, dim: int, label: str = "") -> dict:
    if kind not in KINDS:
        raise SpecError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return {"version": SPEC_VERSION, "label": label, "dim": dim, "kind": kind, "payload": encode(payload)}


def _payload_from_provenance(prov: tuple, sc) -> tuple[str, dict]:
    kind = prov[0]
    if kind == "polynomial":
        return "polynomial", {"coefficients": list(prov[1])}
    if kind == "quaternion":
        return "quaternion", {}
    if kind == "scaled_z":
        return "scaled_z", {"n": prov[1]}
    return "raw", {"tensor": encode(sc)}


def spec_of(m: Multiplication) -> dict:
    """Spec document reproducing ``m`` (acted multiplications keep their
    base and matrix, anything else unrecognized is stored as a raw tensor)."""
    prov = m.provenance
    if prov[0] == "acted":
        T, base_prov = prov[1], prov[2]
        kind, payload = _payload_from_provenance(base_prov, None)
        if kind == "raw":
            return make_spec("raw", {"tensor": encode(m.sc)}, m.dim, m.label)
        base = make_spec(kind, payload, m.dim, "")
        return make_spec("acted", {"base": base, "matrix": encode(T)}, m.dim, m.label)
    kind, payload = _payload_from_provenance(prov, m.sc)
    return make_spec(kind, payload, m.dim, m.label)


def multiplication_of(doc: dict) -> Multiplication:
    """Build and check the multiplication described by a spec document."""
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    missing = {"version", "dim", "kind", "payload"} - set(doc)
    if missing:
        raise SpecError(f"spec lacks field(s): {', '.join(sorted(missing))}")
    if doc["version"] != SPEC_VERSION:
        raise SpecError(f"unsupported spec version {doc['version']!r}")
    kind, payload, dim = doc["kind"], doc["payload"], doc["dim"]
    label = doc.get("label", "") or ""
    if kind == "polynomial":
        m = from_polynomial([int(c) for c in payload["coefficients"]], label=label)
    elif kind == "quaternion":
        m = quaternion()
    elif kind == "scaled_z":
        m = scaled_z(int(payload["n"]))
    elif kind == "raw":
        m = make_multiplication(decode_nested(payload["tensor"]), ("raw",), label=label)
    elif kind == "acted":
        base = multiplication_of(payload["base"])
        m = act(base, RatMatrix(decode_nested(payload["matrix"])))
    else:
        raise SpecError(f"unknown kind {kind!r}")
    if m.dim != dim:
        raise SpecError(f"spec says dim {dim} but the payload has dimension {m.dim}")
    if not m.assoc_checked:
        raise SpecError("the structure constants are not associative")
    if label and m.label != label:
        m = _relabel(m, label)
    return m


def _relabel(m: Multiplication, label: str) -> Multiplication:
    from dataclasses import replace

    return replace(m, label=label)


def catalog_spec(name: str) -> dict:
    cat = shipped_catalog()
    if name not in cat:
        raise SpecError(f"unknown catalog ring {name!r}")
    doc = spec_of(cat[name])
    doc["label"] = name
    return doc


def load_spec(arg: str) -> tuple[Multiplication, dict]:
    """Read a spec file; a name from the shipped catalog is accepted when no
    such file exists."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SpecError(f"{arg}: not JSON ({exc.msg})") from None
    elif arg in shipped_catalog():
        doc = catalog_spec(arg)
    else:
        raise SpecError(f"no spec file or catalog ring named {arg!r}")
    return multiplication_of(doc), doc
