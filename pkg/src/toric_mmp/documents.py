"""JSON documents for fans with foliations and for MMP traces.

Rationals are written as reduced ``"p/q"`` strings (``"1"``, ``"-3/2"``) so
no floating point ever enters a file.  Serialisation is canonical: cones are
sorted, keys are sorted, and the same object always yields the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from ._version import __version__
from .errors import ParseError, ValidationError
from .fan import Fan, validate_fan
from .foliation import FoliationForm
from .mmp import Divisorial, FibreType, Flipping, MmpTrace, run_mmp

_KNOWN_KEYS = {"dim", "rays", "cones", "lambda", "boundary", "name", "notes"}


@dataclass
class FanDocument:
    fan: Fan
    form: Optional[FoliationForm] = None
    boundary: dict[int, Fraction] = field(default_factory=dict)
    name: Optional[str] = None
    notes: Optional[str] = None

    def boundary_list(self) -> list[Fraction]:
        return [self.boundary.get(i, Fraction(0)) for i in range(len(self.fan.rays))]

    def validate(self) -> "FanDocument":
        bad = validate_fan(self.fan)
        if bad:
            raise ValidationError(bad)
        return self


def fraction_str(x) -> str:
    return str(Fraction(x))


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"expected an integer or a 'p/q' string, got {x!r}", where)
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {x!r}", where) from None


def _integer(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", where)
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"expected a list, got {type(x).__name__}", where)
    return x


def _load_json(text: str, source: Optional[str]):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        loc = f"{source or '<input>'}:{e.lineno}:{e.colno}"
        raise ParseError(e.msg, loc) from None


def document_from_dict(data: Any, source: Optional[str] = None) -> FanDocument:
    """Build a document from decoded JSON; errors name the offending field."""
    pre = f"{source}: " if source else ""
    if not isinstance(data, dict):
        raise ParseError("the document must be a JSON object", pre + "$")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ParseError(f"unknown field(s) {unknown}", pre + "$")
    for key in ("dim", "rays", "cones"):
        if key not in data:
            raise ParseError("missing field", pre + key)
    dim = _integer(data["dim"], pre + "dim")
    if dim < 1:
        raise ParseError("dimension must be positive", pre + "dim")
    rays = []
    for i, r in enumerate(_list(data["rays"], pre + "rays")):
        r = _list(r, pre + f"rays[{i}]")
        if len(r) != dim:
            raise ParseError(f"ray has length {len(r)}, expected {dim}", pre + f"rays[{i}]")
        rays.append(tuple(_integer(x, pre + f"rays[{i}][{j}]") for j, x in enumerate(r)))
    cones = []
    for i, c in enumerate(_list(data["cones"], pre + "cones")):
        c = _list(c, pre + f"cones[{i}]")
        idx = []
        for j, x in enumerate(c):
            x = _integer(x, pre + f"cones[{i}][{j}]")
            if not 0 <= x < len(rays):
                raise ParseError(f"ray index {x} out of range", pre + f"cones[{i}][{j}]")
            idx.append(x)
        if len(set(idx)) != len(idx):
            raise ParseError("repeated ray index", pre + f"cones[{i}]")
        cones.append(idx)
    fan = Fan(dim, rays, cones)

    form = None
    if data.get("lambda") is not None:
        lam = data["lambda"]
        if not isinstance(lam, dict):
            raise ParseError("expected an object with 'rational' and 'tau'", pre + "lambda")
        extra = sorted(set(lam) - {"rational", "tau"})
        if extra:
            raise ParseError(f"unknown field(s) {extra}", pre + "lambda")
        parts = {}
        for key in ("rational", "tau"):
            vals = _list(lam.get(key, ["0"] * dim), pre + f"lambda.{key}")
            if len(vals) != dim:
                raise ParseError(f"has length {len(vals)}, expected {dim}", pre + f"lambda.{key}")
            parts[key] = [_rational(x, pre + f"lambda.{key}[{j}]") for j, x in enumerate(vals)]
        if not any(parts["rational"]) and not any(parts["tau"]):
            raise ParseError("the functional is zero", pre + "lambda")
        form = FoliationForm(parts["rational"], parts["tau"])

    boundary = {}
    if data.get("boundary") is not None:
        b = data["boundary"]
        if not isinstance(b, dict):
            raise ParseError("expected an object {ray_index: rational}", pre + "boundary")
        for k, v in b.items():
            where = pre + f"boundary[{k}]"
            try:
                i = int(k)
            except ValueError:
                raise ParseError("ray index must be an integer", where) from None
            if not 0 <= i < len(rays):
                raise ParseError(f"ray index {i} out of range", where)
            val = _rational(v, where)
            if val != 0:
                boundary[i] = val

    for key in ("name", "notes"):
        if data.get(key) is not None and not isinstance(data[key], str):
            raise ParseError("expected a string", pre + key)
    return FanDocument(fan, form, boundary, data.get("name"), data.get("notes"))


def parse_document(text: str, source: Optional[str] = None) -> FanDocument:
    return document_from_dict(_load_json(text, source), source)


def load_document(path, validate: bool = True) -> FanDocument:
    with open(path, encoding="utf-8") as fh:
        doc = parse_document(fh.read(), str(path))
    return doc.validate() if validate else doc


def fan_to_dict(fan: Fan) -> dict:
    return {"dim": fan.dim, "rays": [list(r) for r in fan.rays], "cones": [list(c) for c in fan.cones]}


def form_to_dict(form: FoliationForm) -> dict:
    return {"rational": [fraction_str(x) for x in form.rat], "tau": [fraction_str(x) for x in form.tau]}


def document_to_dict(doc: FanDocument) -> dict:
    out = fan_to_dict(doc.fan)
    if doc.form is not None:
        out["lambda"] = form_to_dict(doc.form)
    if doc.boundary:
        out["boundary"] = {str(i): fraction_str(v) for i, v in sorted(doc.boundary.items()) if v != 0}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.notes is not None:
        out["notes"] = doc.notes
    return out


def dumps(obj) -> str:
    """Canonical JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_document(doc: FanDocument) -> str:
    return dumps(document_to_dict(doc))


# -- traces ----------------------------------------------------------------------


def contraction_to_dict(kind) -> dict:
    if isinstance(kind, FibreType):
        out = {
            "type": "fibre",
            "circuit": list(kind.circuit),
            "fibre_lattice": [list(v) for v in kind.fibre_lattice],
            "base_dim": kind.base_dim,
            "kernel": [list(v) for v in kind.kernel],
            "pulled_back": kind.pulled_back,
        }
        if kind.base_form is not None:
            out["base_basis"] = [list(v) for v in kind.base_basis]
            out["base_lambda"] = form_to_dict(kind.base_form)
        return out
    if isinstance(kind, Divisorial):
        return {"type": "divisorial", "ray": list(kind.vector), "circuit": list(kind.circuit)}
    if isinstance(kind, Flipping):
        return {"type": "flip", "circuit": list(kind.circuit), "positive": list(kind.positive), "negative": list(kind.negative)}
    raise TypeError(kind)


def trace_to_dict(trace: MmpTrace) -> dict:
    steps = []
    for s in trace.steps:
        item = {
            "index": s.index,
            "direction": list(s.direction),
            "curve_class": [fraction_str(x) for x in s.curve_class],
            "walls": [list(w) for w in s.walls],
            "kf_degree": fraction_str(s.kf_degree),
            "tangency": list(s.tangency),
            "contraction": contraction_to_dict(s.contraction),
        }
        if s.after is not None:
            before = {frozenset(s.before.rays[i] for i in c) for c in s.before.cones}
            after = {frozenset(s.after.rays[i] for i in c) for c in s.after.cones}
            item["surgery"] = {
                "removed_cones": sorted(sorted(list(v) for v in c) for c in before - after),
                "added_cones": sorted(sorted(list(v) for v in c) for c in after - before),
                "removed_rays": sorted(list(r) for r in set(s.before.rays) - set(s.after.rays)),
            }
            item["monitors"] = [
                {"point": list(p), "before": fraction_str(s.monitors_before[p]), "after": fraction_str(s.monitors_after[p])}
                for p in sorted(s.monitors_before)
            ]
        steps.append(item)
    outcome = {"type": trace.outcome}
    if trace.final is not None:
        outcome["fan"] = fan_to_dict(trace.final)
    if trace.fibre is not None:
        outcome["fibre"] = contraction_to_dict(trace.fibre)
    return {
        "tool": "toric_mmp",
        "version": __version__,
        "input": {**fan_to_dict(trace.initial), "lambda": form_to_dict(trace.form)},
        "strategy": trace.strategy,
        "seed": trace.seed,
        "step_cap": trace.step_cap,
        "certified": trace.certified,
        "warnings": list(trace.warnings),
        "steps": steps,
        "outcome": outcome,
    }


def serialize_trace(trace: MmpTrace) -> str:
    return dumps(trace_to_dict(trace))


def parse_trace(text: str, source: Optional[str] = None) -> dict:
    data = _load_json(text, source)
    for key in ("input", "strategy", "steps", "outcome"):
        if not isinstance(data, dict) or key not in data:
            raise ParseError("missing field", f"{source + ': ' if source else ''}{key}")
    return data


def replay_trace(text: str, source: Optional[str] = None) -> bool:
    """Re-run the recorded input and strategy; True iff the bytes agree."""
    data = parse_trace(text, source)
    doc = document_from_dict(data["input"], source)
    trace = run_mmp(doc.fan, doc.form, data["strategy"], data.get("step_cap"), data.get("seed"))
    return serialize_trace(trace) == text


__all__ = [
    "FanDocument",
    "document_from_dict",
    "document_to_dict",
    "dumps",
    "fan_to_dict",
    "form_to_dict",
    "fraction_str",
    "load_document",
    "parse_document",
    "parse_trace",
    "replay_trace",
    "serialize_document",
    "serialize_trace",
    "trace_to_dict",
]
