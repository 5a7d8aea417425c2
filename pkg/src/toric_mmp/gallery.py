"""Bundled example cases and their golden reports.

Cases live as ``NAME.json`` next to ``NAME.expected.json`` in the gallery
directory.  Set ``TORIC_MMP_GALLERY`` to use another directory.  Anywhere a
path is accepted, ``gallery:NAME`` refers to a case.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Optional

from .documents import FanDocument, dumps, load_document
from .errors import StepCapExceeded, TheoremViolation
from .fan import has_convex_support, validate_fan
from .mmp import run_mmp
from .reports import analysis_report, foliation_report, mmp_report, negative_rays_report

ENV_VAR = "TORIC_MMP_GALLERY"
PREFIX = "gallery:"


def gallery_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else Path(__file__).resolve().parent / "gallery"


def gallery_names() -> list[str]:
    return sorted(p.name[: -len(".json")] for p in gallery_dir().glob("*.json") if not p.name.endswith(".expected.json"))


def resolve(ref: str) -> Path:
    """Map ``gallery:NAME`` to the case file; other strings are plain paths."""
    if ref.startswith(PREFIX):
        name = ref[len(PREFIX):]
        path = gallery_dir() / f"{name}.json"
        if not path.is_file():
            raise FileNotFoundError(f"no gallery case {name!r} in {gallery_dir()}")
        return path
    return Path(ref)


def load_case(name: str) -> FanDocument:
    return load_document(resolve(PREFIX + name))


def case_report(doc: FanDocument) -> dict:
    """Everything the golden files pin down for one case."""
    out = {"name": doc.name, "analysis": analysis_report(doc.fan)}
    if validate_fan(doc.fan) or doc.form is None:
        return out
    out["foliation"] = foliation_report(doc.fan, doc.form, doc.boundary_list())
    out["negative_rays"] = negative_rays_report(doc.fan, doc.form)
    if has_convex_support(doc.fan):
        try:
            out["mmp"] = mmp_report(run_mmp(doc.fan, doc.form))
        except (TheoremViolation, StepCapExceeded) as e:
            out["mmp"] = {"error": f"{type(e).__name__}: {e}"}
    return out


def golden_path(name: str) -> Path:
    return gallery_dir() / f"{name}.expected.json"


def check_case(name: str) -> Optional[str]:
    """None when the case matches its golden report, else a description."""
    golden = golden_path(name)
    if not golden.is_file():
        return "missing golden report"
    expected = json.loads(golden.read_text(encoding="utf-8"))
    actual = json.loads(dumps(case_report(load_case(name))))
    if actual == expected:
        return None
    diffs = [k for k in sorted(set(actual) | set(expected)) if actual.get(k) != expected.get(k)]
    return "differs in " + ", ".join(diffs)


def check_gallery() -> dict[str, Optional[str]]:
    return {name: check_case(name) for name in gallery_names()}


def write_goldens(names=None) -> list[Path]:
    written = []
    for name in names or gallery_names():
        path = golden_path(name)
        path.write_text(dumps(case_report(load_case(name))), encoding="utf-8")
        written.append(path)
    return written


__all__ = [
    "ENV_VAR",
    "case_report",
    "check_case",
    "check_gallery",
    "gallery_dir",
    "gallery_names",
    "golden_path",
    "load_case",
    "resolve",
    "write_goldens",
]
