"""JSON loaders and dumpers for the command line.

A source may be a file path, an inline JSON document, or (for groups) a
library name such as ``Z3``, ``S3`` or ``K4``.
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional

import numpy as np

from . import smallgroups
from .cohomology import CoefficientModule, coefficient_module
from .errors import ParseError, ValidationError
from .extensions import FactorSet, GroupExtension, QuasiAction, build_extension, make_factor_set, make_quasi_action
from .groups import FiniteGroup, from_table
from .topology import FiniteSpace, finite_space


def read_source(source, base_dir: Optional[str] = None) -> tuple:
    """Return ``(parsed JSON or None, label)``; ``None`` means the text is not JSON-shaped."""
    if isinstance(source, (dict, list)):
        return source, "<inline>"
    text = str(source).strip()
    if text.startswith("{") or text.startswith("["):
        label = "<inline>"
    else:
        path = text if base_dir is None or os.path.isabs(text) else os.path.join(base_dir, text)
        if not os.path.exists(path):
            return None, text
        label = path
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text), label
    except json.JSONDecodeError as e:
        raise ParseError(f"{label}: line {e.lineno} column {e.colno}: {e.msg}") from e


def _wrap(label: str, fn, *args):
    try:
        return fn(*args)
    except ValidationError as e:
        raise type(e)(f"{label}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{label}: malformed data ({e!r})") from e


def _dir_of(label: str) -> Optional[str]:
    return None if label.startswith("<") else os.path.dirname(os.path.abspath(label))


# --------------------------------------------------------------------------- groups


def group_from_json(data: dict) -> FiniteGroup:
    if not isinstance(data, dict) or "table" not in data:
        raise ParseError("group JSON needs a 'table' field")
    table = data["table"]
    if "order" in data and int(data["order"]) != len(table):
        raise ValidationError(f"declared order {data['order']} but table has {len(table)} rows")
    if any(not isinstance(row, list) or len(row) != len(table) for row in table):
        raise ValidationError("group table must be square")
    names = data.get("names")
    return from_table(table, tuple(names) if names else None)


def load_group(source, base_dir: Optional[str] = None) -> FiniteGroup:
    data, label = read_source(source, base_dir)
    if data is None:
        try:
            return smallgroups.by_name(label)
        except KeyError:
            raise ParseError(f"{label}: no such file or library group") from None
    return _wrap(label, group_from_json, data)


def dump_group(G: FiniteGroup) -> dict:
    return G.to_json()


# --------------------------------------------------------------------------- extensions


def load_extension(source) -> GroupExtension:
    data, label = read_source(source)
    if data is None:
        raise ParseError(f"{label}: no such file")
    base = _dir_of(label)
    try:
        N, E, G = (load_group(data[k], base) for k in ("N", "E", "G"))
        j, p = data["j"], data["p"]
    except KeyError as e:
        raise ParseError(f"{label}: extension JSON is missing {e}") from e
    return _wrap(label, build_extension, N, E, G, j, p)


# --------------------------------------------------------------------------- coefficients


def _ilog(q: int, p: int) -> int:
    k = 0
    while q > 1:
        q //= p
        k += 1
    return k


def abelian_invariants(A: FiniteGroup) -> list:
    """Cyclic decomposition of an abelian group in invariant-factor form."""
    if not A.is_abelian():
        raise ValidationError("coefficient group must be abelian")
    n = A.order
    counts = {}
    p = 2
    m = n
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e
        p += 1
    elems = range(n)
    blocks = {}
    for p, e in counts.items():
        sizes = [sum(1 for x in elems if A.power(x, p ** i) == 0) for i in range(e + 1)]
        # number of cyclic p-factors of order at least p^i
        at_least = [_ilog(sizes[i] // sizes[i - 1], p) for i in range(1, e + 1)]
        exps = []
        for i in range(e, 0, -1):
            already = len(exps)
            exps += [i] * (at_least[i - 1] - already)
        blocks[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in blocks.values()), default=0)
    factors = []
    for k in range(width):
        d = 1
        for p, exps in blocks.items():
            if k < len(exps):
                d *= p ** exps[k]
        factors.append(d)
    return sorted(factors)


def load_coefficients(source, G: FiniteGroup) -> CoefficientModule:
    """``{"cyclic_orders": [...], "action": [...]}``, or any abelian group source (trivial action)."""
    data, label = read_source(source)
    if data is None or (isinstance(data, dict) and "table" in data):
        A = load_group(source)
        return coefficient_module(G, abelian_invariants(A) or [1])
    if not isinstance(data, dict) or "cyclic_orders" not in data:
        raise ParseError(f"{label}: coefficient JSON needs 'cyclic_orders'")
    return _wrap(label, coefficient_module, G, data["cyclic_orders"], data.get("action"))


# --------------------------------------------------------------------------- spaces


def load_space(source) -> FiniteSpace:
    data, label = read_source(source)
    if data is None:
        raise ParseError(f"{label}: no such file")
    if not isinstance(data, dict) or "points" not in data or "opens" not in data:
        raise ParseError(f"{label}: space JSON needs 'points' and 'opens'")
    return _wrap(label, finite_space, int(data["points"]), data["opens"])


# --------------------------------------------------------------------------- factor-set pairs


def load_pair(source, G: Optional[FiniteGroup] = None, N: Optional[FiniteGroup] = None) -> tuple:
    """``{"G": group, "N": group, "L": [[...]], "f": [[...]]}``; ``L`` defaults to the trivial action."""
    data, label = read_source(source)
    if data is None:
        raise ParseError(f"{label}: no such file")
    base = _dir_of(label)
    try:
        G = load_group(data["G"], base) if "G" in data else G
        N = load_group(data["N"], base) if "N" in data else N
        if G is None or N is None:
            raise ParseError(f"{label}: pair JSON needs 'G' and 'N'")
        L = data.get("L", np.tile(np.arange(N.order), (G.order, 1)).tolist())
        f = data["f"]
    except KeyError as e:
        raise ParseError(f"{label}: pair JSON is missing {e}") from e
    return _wrap(label, make_quasi_action, G, N, L), _wrap(label, make_factor_set, G, N, f)


def dump_pair(L: QuasiAction, f: FactorSet) -> dict:
    return {"G": L.G.to_json(), "N": L.N.to_json(), "L": L.maps.tolist(), "f": f.table.tolist()}


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
