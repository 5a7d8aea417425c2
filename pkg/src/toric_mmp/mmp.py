"""The toric foliated minimal model program.

Each step picks a K_F-negative extremal ray of the cone of curves, reads
the contraction type off the sign pattern of its wall relations and performs
the matching fan surgery.  Structural statements of the theory are checked
as the run proceeds; inputs violating the hypotheses (non-canonical or
dicritical) still run, but assertions become warnings and the trace is
marked non-certified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    InconsistentRay,
    NonSimplicialResult,
    StepCapExceeded,
    TheoremViolation,
    UnsupportedCircuit,
    ValidationError,
)
from .fan import Cone, Fan, Violation, Wall, has_convex_support, validate_fan
from .foliation import (
    FoliationForm,
    SingularityClass,
    check_non_dicritical,
    check_singularity_class,
    detect_pullback,
    foliated_canonical_divisor,
    foliated_discrepancy,
    wall_tangency,
)
from .intersection import CurveRay, WallRelation, is_nef, pair, picard_rank, wall_classes, wall_relation
from .lattice import IntVector, integer_kernel, primitive_part, solve

STRATEGIES = ("first", "lex", "random")


# -- contraction types -----------------------------------------------------------


@dataclass(frozen=True)
class FibreType:
    """Contraction onto a lower-dimensional base: the projection ``N -> N/L``.

    ``fibre_lattice`` is a basis of L, the saturated span of the circuit rays;
    ``kernel`` is ``ker(lambda)`` from ``detect_pullback``.  When L lies in
    the kernel the foliation descends to the base, where it is given by
    ``base_form`` in the dual basis ``base_basis`` of ``(N/L)^*``.
    """

    circuit: tuple[int, ...]
    fibre_lattice: tuple[IntVector, ...]
    base_dim: int
    kernel: tuple[IntVector, ...]
    pulled_back: bool
    base_basis: tuple[IntVector, ...] = ()
    base_form: Optional[FoliationForm] = None

    kind = "fibre"


@dataclass(frozen=True)
class Divisorial:
    ray: int
    vector: IntVector
    circuit: tuple[int, ...]
    positive: tuple[int, ...]

    kind = "divisorial"


@dataclass(frozen=True)
class Flipping:
    circuit: tuple[int, ...]
    positive: tuple[int, ...]
    negative: tuple[int, ...]

    kind = "flip"


ContractionType = Union[FibreType, Divisorial, Flipping]


@dataclass(frozen=True)
class NegativeRay:
    """A K_F-negative extremal ray with per-wall tangency flags."""

    ray: CurveRay
    degree: Fraction
    tangency: tuple[bool, ...]

    @property
    def walls(self) -> tuple[Wall, ...]:
        return self.ray.walls

    @property
    def direction(self) -> tuple[int, ...]:
        return self.ray.direction

    @property
    def tangent(self) -> bool:
        return all(self.tangency)


def _walls_of(ray) -> tuple[Wall, ...]:
    if isinstance(ray, (NegativeRay, CurveRay)):
        return tuple(ray.walls)
    if isinstance(ray, Wall):
        return (ray,)
    return tuple(ray)


def negative_extremal_rays(fan: Fan, lam: FoliationForm, strict: bool = True) -> list[NegativeRay]:
    """Extremal rays of the cone of curves on which K_F is negative.

    With ``strict`` a ray containing a wall transverse to the foliation
    raises ``TheoremViolation``; otherwise it is returned with its flags.
    """
    kf = foliated_canonical_divisor(fan, lam)
    rays = wall_classes(fan, only=lambda k, cs: pair(kf, cs[0]) < 0)
    out = []
    for r in rays:
        if not r.extremal:
            continue
        deg = r.degree(kf)
        flags = tuple(wall_tangency(fan, lam, w) for w in r.walls)
        if strict and not all(flags):
            bad = [w.rays for w, t in zip(r.walls, flags) if not t]
            raise TheoremViolation(
                "K_F-negative extremal ray contains a transverse wall",
                {"fan": fan, "lambda": lam, "direction": r.direction, "degree": deg, "walls": bad},
            )
        out.append(NegativeRay(r, deg, flags))
    return out


def _signs(rel: WallRelation) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    return rel.circuit, rel.positive, rel.negative


def _saturated_span(vectors: Sequence[Sequence[int]], n: int) -> tuple[IntVector, ...]:
    annihilator = integer_kernel([list(v) for v in vectors], ncols=n) if vectors else None
    if annihilator is None:
        return ()
    if not annihilator:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return tuple(integer_kernel(annihilator, ncols=n))


def _fibre_data(fan: Fan, lam: FoliationForm, circuit: tuple[int, ...]) -> FibreType:
    n = fan.dim
    L = _saturated_span(fan.ray_vectors(circuit), n)
    rank_k, kernel = detect_pullback(lam, n)
    pulled = all(lam.vanishes(v) for v in L)
    base_basis: tuple = ()
    base_form = None
    if n - len(L) > 0:
        base_basis = tuple(integer_kernel([list(v) for v in L], ncols=n)) if L else tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n)
        )
        if pulled:
            # lambda vanishes on L, so it is a combination of the base covectors
            cols = [list(m) for m in base_basis]
            rat = solve(cols, lam.rat)
            tau = solve(cols, lam.tau)
            base_form = FoliationForm(rat, tau)
    return FibreType(circuit, L, n - len(L), tuple(kernel), pulled, base_basis, base_form)


def classify_contraction(fan: Fan, ray, lam: Optional[FoliationForm] = None) -> ContractionType:
    """Trichotomy by the negative part J- of the wall relations of the ray.

    All walls of the ray must give the same circuit and sign split;
    otherwise ``InconsistentRay`` is raised.
    """
    ws = _walls_of(ray)
    if not ws:
        raise ValueError("empty ray")
    signs = {_signs(wall_relation(fan, w)) for w in ws}
    negs = {s[2] for s in signs}
    if len(negs) != 1:
        raise InconsistentRay(f"walls {[w.rays for w in ws]} disagree on the negative part: {sorted(negs)}")
    (neg,) = negs
    if not neg:
        circuit = tuple(sorted(set().union(*(s[0] for s in signs))))
        if lam is None:
            L = _saturated_span(fan.ray_vectors(circuit), fan.dim)
            return FibreType(circuit, L, fan.dim - len(L), (), False)
        return _fibre_data(fan, lam, circuit)
    if len(signs) != 1:
        raise InconsistentRay(f"walls {[w.rays for w in ws]} have different circuits: {sorted(signs)}")
    ((circuit, pos, neg),) = signs
    if len(neg) == 1:
        return Divisorial(neg[0], fan.rays[neg[0]], circuit, pos)
    return Flipping(circuit, pos, neg)


def _circuit_surgery(fan: Fan, circuit, pos, neg, error) -> list[Cone]:
    """Swap the triangulation of the circuit: cones ``(Z - j) + t`` for j in
    J+ become ``(Z - i) + t`` for i in J-, for every link face t."""
    Z = set(circuit)
    jneg = set(neg)
    links: dict[Cone, set] = {}
    keep = []
    for c in fan.cones:
        if not jneg <= set(c):
            keep.append(c)
            continue
        missing = Z - set(c)
        if len(missing) != 1 or not missing <= set(pos):
            raise error(f"cone {c} contains the negative part {sorted(jneg)} but is not of the form (Z - j) + t")
        t = tuple(sorted(set(c) - Z))
        links.setdefault(t, set()).update(missing)
    for t, js in links.items():
        if js != set(pos):
            raise error(f"link {t} is adjacent to only {sorted(js)} of the positive part {list(pos)}")
    new = [tuple(sorted((Z - {i}) | set(t))) for t in links for i in neg]
    return keep + new


def _checked(fan: Fan, error, context) -> Fan:
    bad = validate_fan(fan)
    if bad:
        raise error(f"surgery produced an invalid fan ({context}): " + "; ".join(map(str, bad)))
    return fan


def contract_divisorial(fan: Fan, ray) -> Fan:
    """Remove the ray ``rho`` of J- and re-triangulate its star."""
    kind = ray if isinstance(ray, Divisorial) else classify_contraction(fan, ray)
    if not isinstance(kind, Divisorial):
        raise ValueError(f"not a divisorial contraction: {kind.kind}")
    cones = _circuit_surgery(fan, kind.circuit, kind.positive, (kind.ray,), NonSimplicialResult)
    rho = kind.ray
    reindex = {i: i - (i > rho) for i in range(len(fan.rays)) if i != rho}
    rays = [r for i, r in enumerate(fan.rays) if i != rho]
    try:
        out = Fan(fan.dim, rays, [[reindex[i] for i in c] for c in cones])
    except KeyError:
        raise NonSimplicialResult(f"ray {rho} survives in the contracted fan") from None
    return _checked(out, NonSimplicialResult, f"contracting ray {rho}")


def flip(fan: Fan, ray) -> Fan:
    """Exchange the two triangulations of the flipping circuit."""
    kind = ray if isinstance(ray, Flipping) else classify_contraction(fan, ray)
    if not isinstance(kind, Flipping):
        raise ValueError(f"not a flipping contraction: {kind.kind}")
    cones = _circuit_surgery(fan, kind.circuit, kind.positive, kind.negative, UnsupportedCircuit)
    out = Fan(fan.dim, fan.rays, cones)
    return _checked(out, UnsupportedCircuit, f"flipping circuit {kind.circuit}")


def flip_point(fan: Fan, walls_or_rel) -> IntVector:
    """Primitive point ``sum_{J-} |b_i| u_i = sum_{J+} b_j u_j`` of the circuit."""
    rel = walls_or_rel if isinstance(walls_or_rel, WallRelation) else wall_relation(fan, _walls_of(walls_or_rel)[0])
    v = [0] * fan.dim
    for i, b in rel.coeffs.items():
        if b < 0:
            v = [x - b * u for x, u in zip(v, fan.rays[i])]
    return primitive_part(v)[0]


# -- the driver ------------------------------------------------------------------


@dataclass
class MmpStep:
    index: int
    direction: tuple[int, ...]
    curve_class: tuple[Fraction, ...]
    walls: tuple[Cone, ...]
    contraction: ContractionType
    kf_degree: Fraction
    tangency: tuple[bool, ...]
    before: Fan
    after: Optional[Fan]
    monitors_before: dict = field(default_factory=dict)
    monitors_after: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.contraction.kind


@dataclass
class MmpTrace:
    initial: Fan
    form: FoliationForm
    strategy: str
    step_cap: int
    seed: Optional[int] = None
    steps: list = field(default_factory=list)
    outcome: Optional[str] = None
    final: Optional[Fan] = None
    fibre: Optional[FibreType] = None
    certified: bool = True
    warnings: list = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {"divisorial": 0, "flip": 0, "fibre": 0}
        for s in self.steps:
            out[s.kind] += 1
        return out


def _pick(rays: list[NegativeRay], strategy: str, rng: random.Random) -> NegativeRay:
    if strategy == "first":
        return min(rays, key=lambda r: min(w.rays for w in r.walls))
    if strategy == "lex":
        return min(rays, key=lambda r: r.direction)
    return rng.choice(sorted(rays, key=lambda r: r.direction))


def _monitor_values(fan: Fan, lam: FoliationForm, points) -> dict:
    return {p: foliated_discrepancy(fan, lam, None, p).value for p in sorted(points)}


def _hypotheses(fan: Fan, lam: FoliationForm) -> list[str]:
    out = []
    verdict = check_singularity_class(fan, lam)
    if verdict.cls < SingularityClass.CANONICAL:
        out.append(f"not canonical: valuation {verdict.witness} has discrepancy {verdict.discrepancy}")
    nd = check_non_dicritical(fan, lam, certificates=False)
    if not nd:
        out.append(f"dicritical: kernel point {nd.witness} in the interior of cone {nd.cone}")
    return out


def run_mmp(
    fan: Fan,
    lam: FoliationForm,
    strategy: str = "lex",
    step_cap: Optional[int] = None,
    seed: Optional[int] = None,
) -> MmpTrace:
    """Run the MMP until K_F is nef or a fibre type contraction appears.

    Raises ``StepCapExceeded`` (carrying the partial trace) and, on certified
    runs, ``TheoremViolation`` whenever a structural assertion fails.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    bad = validate_fan(fan)
    if not bad and not has_convex_support(fan):
        bad = [Violation("NonConvexSupport", "the support of the fan is not convex")]
    if bad:
        raise ValidationError(bad)
    if step_cap is None:
        step_cap = 10 * len(fan.rays)
    trace = MmpTrace(fan, lam, strategy, step_cap, seed)
    problems = _hypotheses(fan, lam)
    if problems:
        trace.certified = False
        trace.warnings.extend(problems)
    rng = random.Random(seed)

    def fail(msg, **ctx):
        if trace.certified:
            ctx.update(trace=trace, fan=current, step=len(trace.steps))
            raise TheoremViolation(msg, ctx)
        trace.warnings.append(f"step {len(trace.steps)}: {msg}")

    current = fan
    seen = {current.key()}
    monitors = set(current.rays)
    while True:
        kf = foliated_canonical_divisor(current, lam)
        if is_nef(current, kf).nef:
            trace.outcome = "nef_model"
            trace.final = current
            return trace
        if len(trace.steps) >= step_cap:
            raise StepCapExceeded(f"no minimal model after {step_cap} steps", trace)
        rays = negative_extremal_rays(current, lam, strict=trace.certified)
        for r in rays:
            if not r.tangent:
                fail(f"negative extremal ray {r.direction} contains a transverse wall")
        if not rays:
            fail("K_F is not nef but no negative extremal ray was found")
            trace.outcome = "stuck"
            trace.final = current
            return trace
        chosen = _pick(rays, strategy, rng)
        kind = classify_contraction(current, chosen, lam)
        step = MmpStep(
            len(trace.steps),
            chosen.direction,
            chosen.ray.curve_class,
            tuple(w.rays for w in chosen.walls),
            kind,
            chosen.degree,
            chosen.tangency,
            current,
            None,
        )
        trace.steps.append(step)
        if isinstance(kind, FibreType):
            if not kind.pulled_back:
                trace.warnings.append(
                    f"step {step.index}: the foliation is not pulled back from the {kind.base_dim}-dimensional base"
                )
            trace.outcome = "fibre_space"
            trace.final = current
            trace.fibre = kind
            return trace

        if isinstance(kind, Flipping):
            monitors.add(flip_point(current, chosen))
        step.monitors_before = _monitor_values(current, lam, monitors)
        if isinstance(kind, Divisorial):
            new = contract_divisorial(current, kind)
            if len(new.rays) != len(current.rays) - 1:
                fail("divisorial contraction did not remove exactly one ray")
            if picard_rank(new, relative=True) >= picard_rank(current, relative=True):
                fail("divisorial contraction did not lower the Picard rank")
        else:
            new = flip(current, kind)
        step.after = new
        step.monitors_after = _monitor_values(new, lam, monitors)
        drops = [p for p in monitors if step.monitors_after[p] < step.monitors_before[p]]
        if drops:
            fail(f"discrepancies decreased at {sorted(drops)}")
        if isinstance(kind, Flipping) and not any(
            step.monitors_after[p] > step.monitors_before[p] for p in monitors
        ):
            fail("no monitored discrepancy increased across the flip")
        if new.key() in seen:
            fail("fan repeated within the trace")
        seen.add(new.key())
        if trace.certified:
            problems = _hypotheses(new, lam)
            if problems:
                fail("hypotheses lost after the step: " + "; ".join(problems))
        current = new


__all__ = [
    "STRATEGIES",
    "ContractionType",
    "Divisorial",
    "FibreType",
    "Flipping",
    "MmpStep",
    "MmpTrace",
    "NegativeRay",
    "classify_contraction",
    "contract_divisorial",
    "flip",
    "flip_point",
    "negative_extremal_rays",
    "run_mmp",
]
