"""Exact file formats: curve specs, correlator tables, tensors, reports.

All rationals travel as strings ("-3/7"); documents are canonical JSON
(sorted keys, fixed separators, trailing newline) so that identical data
produces byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .curves import CurveData, GlobalCurve, RationalFunction, validate_local_curve
from .recursion import OmegaTable


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def scalar_to_str(field, value) -> str:
    return str(field.as_fraction(value))


def str_to_fraction(text) -> Fraction:
    return Fraction(str(text))


def curve_hash(curve: CurveData) -> str:
    doc = canonical_json(curve.canonical_dict())
    return hashlib.sha256(doc.encode()).hexdigest()


# -- curve specs --------------------------------------------------------------

def dump_curve_spec(curve: CurveData) -> str:
    return canonical_json(curve.canonical_dict())


def dump_global_spec(g: GlobalCurve) -> str:
    doc = {
        "version": 1,
        "kind": "global",
        "x": {"num": [str(Fraction(c)) for c in g.x.num],
              "den": [str(Fraction(c)) for c in g.x.den]},
        "y": {"num": [str(Fraction(c)) for c in g.y.num],
              "den": [str(Fraction(c)) for c in g.y.den]},
        "declared_ramification": [[str(Fraction(a)), int(r)]
                                  for a, r in g.declared_ramification],
    }
    return canonical_json(doc)


def parse_curve_spec(text: str):
    """Parse a curve-spec document; returns CurveData or GlobalCurve."""
    doc = json.loads(text)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("curve spec must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind == "local":
        points = []
        for p in doc.get("points", []):
            times = {int(k): str_to_fraction(v)
                     for k, v in p.get("times", {}).items()}
            points.append((str(p["label"]), int(p["order"]), times))
        phi = {}
        for entry in doc.get("phi", []):
            (al, ak), (bl, bk), v = entry
            phi[((str(al), int(ak)), (str(bl), int(bk)))] = str_to_fraction(v)
        return validate_local_curve(points, phi=phi,
                                    n_max=doc.get("n_max"))
    if kind == "global":
        def rf(key):
            spec = doc[key]
            num = tuple(str_to_fraction(c) for c in spec["num"])
            den = tuple(str_to_fraction(c) for c in spec.get("den", ["1"]))
            return RationalFunction(num, den)
        decls = tuple((str_to_fraction(a), int(r))
                      for a, r in doc["declared_ramification"])
        return GlobalCurve(x=rf("x"), y=rf("y"),
                           declared_ramification=decls)
    raise ValueError(f"unknown curve kind {kind!r}")


# -- correlator tables ---------------------------------------------------------

def dump_omega_table(table: OmegaTable, chash: str) -> str:
    fld = table.field
    entries = []
    for (g, n) in table.gn_list():
        for key in sorted(table.entries(g, n)):
            entries.append({
                "g": g, "n": n,
                "indices": [[lb, k] for lb, k in key],
                "value": scalar_to_str(fld, table.entries(g, n)[key]),
            })
    doc = {"version": 1, "curve_hash": chash,
           "chi_max": table.chi_max, "entries": entries}
    return canonical_json(doc)


def parse_omega_table(text: str, curve: CurveData) -> OmegaTable:
    doc = json.loads(text)
    table = OmegaTable(curve, int(doc.get("chi_max", 0)))
    for e in doc["entries"]:
        indices = tuple((str(lb), int(k)) for lb, k in e["indices"])
        value = curve.field.coerce(str_to_fraction(e["value"]))
        table.set_entry(int(e["g"]), int(e["n"]), indices, value)
    return table


def dump_results(curve: CurveData, table: OmegaTable, tensors=None,
                 fg: dict | None = None) -> str:
    fld = curve.field
    doc = {
        "version": 1,
        "curve_hash": curve_hash(curve),
        "omega": json.loads(dump_omega_table(table, curve_hash(curve))),
    }
    if tensors is not None:
        doc["airy_tensors"] = tensors.canonical_entries()
    if fg:
        doc["F"] = {str(g): scalar_to_str(fld, v) for g, v in fg.items()}
    return canonical_json(doc)


def format_table(table: OmegaTable) -> str:
    """Human-readable aligned table of the correlator tensors."""
    fld = table.field
    rows = []
    for (g, n) in table.gn_list():
        for key in sorted(table.entries(g, n)):
            idx = " ".join(f"({lb},{k})" for lb, k in key)
            rows.append((f"F[{g},{n}]", idx,
                         scalar_to_str(fld, table.entries(g, n)[key])))
    if not rows:
        return "(empty table)\n"
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = [f"{r[0]:<{w0}}  {r[1]:<{w1}}  {r[2]}" for r in rows]
    return "\n".join(lines) + "\n"
