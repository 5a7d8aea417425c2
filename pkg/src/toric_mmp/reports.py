"""Structured reports behind the command-line tool and the gallery goldens.

Every report is a plain JSON-ready dict (rationals as strings) plus a
``summary`` list of human-readable lines.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .documents import contraction_to_dict, fan_to_dict, fraction_str
from .errors import NoCompactCurves, UnboundedWithBoundary
from .fan import (
    Fan,
    has_convex_support,
    is_complete,
    is_pure,
    is_smooth,
    multiplicity,
    validate_fan,
    walls,
)
from .foliation import (
    FoliationForm,
    SingularityClass,
    check_non_dicritical,
    check_singularity_class,
    classify_fixed_point,
    detect_pullback,
    epsilons,
    foliated_canonical_divisor,
    wall_tangency,
)
from .intersection import canonical_divisor, curve_class, intersect, is_nef, picard_rank, prime_divisor, wall_relation
from .mmp import MmpTrace, negative_extremal_rays


def _vec(v) -> list:
    return [fraction_str(x) for x in v]


def _plural(n: int, word: str) -> str:
    return f"{n} {word}{'' if n == 1 else 's'}"


def analysis_report(fan: Fan) -> dict:
    bad = validate_fan(fan)
    if bad:
        return {"valid": False, "violations": [str(v) for v in bad], "summary": [str(v) for v in bad]}
    complete = is_complete(fan)
    convex = has_convex_support(fan)
    smooth = is_smooth(fan)
    ws = walls(fan)
    rank = picard_rank(fan, relative=True)
    wall_data = []
    for w in ws:
        rel = wall_relation(fan, w)
        wall_data.append(
            {
                "rays": list(w.rays),
                "cones": [list(fan.cones[i]) for i in w.cones],
                "relation": {str(i): b for i, b in sorted(rel.coeffs.items())},
                "class": _vec(curve_class(fan, w)),
            }
        )
    shape = "complete" if complete else ("non-complete convex-support" if convex else "non-complete")
    rank_label = f"rank {rank}" if complete else f"relative rank {rank}"
    return {
        "valid": True,
        "rays": len(fan.rays),
        "cones": len(fan.cones),
        "pure": is_pure(fan),
        "smooth": smooth,
        "complete": complete,
        "convex_support": convex,
        "multiplicities": [{"cone": list(c), "multiplicity": multiplicity(fan, c)} for c in fan.cones],
        "walls": wall_data,
        "canonical_divisor": _vec(canonical_divisor(fan)),
        "picard_rank": rank if complete else None,
        "relative_rank": rank,
        "summary": [f"{shape} {'smooth' if smooth else 'simplicial'}, {rank_label}, {_plural(len(ws), 'wall')}"],
    }


def _point(v) -> Optional[list]:
    return None if v is None else list(v)


def foliation_report(fan: Fan, form: FoliationForm, boundary: Optional[Sequence] = None) -> dict:
    eps = epsilons(fan, form)
    kf = foliated_canonical_divisor(fan, form)
    kx = canonical_divisor(fan)
    identity = kx
    for i, e in enumerate(eps):
        if e == 0:
            identity = identity + prime_divisor(fan, i)
    wall_data = []
    for w in walls(fan):
        wall_data.append(
            {"rays": list(w.rays), "K_F": fraction_str(intersect(fan, kf, w)), "tangent": wall_tangency(fan, form, w)}
        )
    lines = []
    try:
        verdict = check_singularity_class(fan, form, boundary)
        sing = {
            "class": verdict.label,
            "witness": _point(verdict.witness),
            "discrepancy": None if verdict.discrepancy is None else fraction_str(verdict.discrepancy),
        }
        canonical = verdict.cls >= SingularityClass.CANONICAL
        if canonical:
            lines.append(f"canonical: yes ({verdict.label})")
        else:
            lines.append(
                f"canonical: no ({verdict.label}, witness {tuple(verdict.witness)}, a = {verdict.discrepancy})"
            )
    except UnboundedWithBoundary as e:
        sing = {"class": "unbounded", "error": str(e)}
        canonical = False
        lines.append(f"canonical: no ({e})")
    nd = check_non_dicritical(fan, form, certificates=False)
    if nd:
        lines.append("non-dicritical: yes")
    else:
        lines.append(f"non-dicritical: no, dicritical with witness {tuple(nd.witness)} in cone {list(nd.cone)}")
    rank, basis = detect_pullback(form, fan.dim)
    lines.append(f"pullback rank {rank}")
    kf_lines = [f"K_F.V({w['rays']}) = {w['K_F']}" for w in wall_data]
    fixed = []
    for c in fan.cones:
        if len(c) == fan.dim:
            fixed.append({"cone": list(c), "type": classify_fixed_point(fan, form, c).value})
    return {
        "lambda": str(form),
        "epsilon": list(eps),
        "K_F": _vec(kf),
        "K_F_identity": list(identity) == list(kf),
        "walls": wall_data,
        "K_F_nef": is_nef(fan, kf).nef,
        "singularity": sing,
        "canonical": canonical,
        "non_dicritical": {"value": bool(nd), "witness": _point(nd.witness), "cone": _point(nd.cone)},
        "fixed_points": fixed,
        "pullback": {"rank": rank, "basis": [list(b) for b in basis]},
        "summary": kf_lines + lines,
    }


def negative_rays_report(fan: Fan, form: FoliationForm) -> list:
    try:
        rays = negative_extremal_rays(fan, form, strict=False)
    except NoCompactCurves:
        return []
    return [
        {
            "direction": list(r.direction),
            "K_F": fraction_str(r.degree),
            "walls": [list(w.rays) for w in r.walls],
            "tangent": list(r.tangency),
        }
        for r in rays
    ]


def mmp_report(trace: MmpTrace) -> dict:
    counts = trace.counts
    final = trace.final
    kf = foliated_canonical_divisor(final, trace.form)
    final_walls = [{"rays": list(w.rays), "K_F": fraction_str(intersect(final, kf, w))} for w in walls(final)]
    steps = [
        {"kind": s.kind, "direction": list(s.direction), "K_F": fraction_str(s.kf_degree)} for s in trace.steps
    ]
    summary = [
        f"outcome: {trace.outcome} after {_plural(len(trace.steps), 'step')} "
        f"({counts['divisorial']} divisorial, {_plural(counts['flip'], 'flip')}, {counts['fibre']} fibre)",
        f"certified: {'yes' if trace.certified else 'no'}",
    ]
    summary += [f"final K_F.V({w['rays']}) = {w['K_F']}" for w in final_walls]
    summary += [f"warning: {w}" for w in trace.warnings]
    out = {
        "outcome": trace.outcome,
        "strategy": trace.strategy,
        "certified": trace.certified,
        "steps": steps,
        "counts": counts,
        "final_fan": fan_to_dict(final),
        "final_walls": final_walls,
        "warnings": list(trace.warnings),
        "summary": summary,
    }
    if trace.fibre is not None:
        out["fibre"] = contraction_to_dict(trace.fibre)
    return out


def render(report: dict, title: Optional[str] = None) -> str:
    lines = [title] if title else []
    lines += [f"  {s}" if title else s for s in report.get("summary", [])]
    return "\n".join(lines)


__all__ = ["analysis_report", "foliation_report", "mmp_report", "negative_rays_report", "render"]
