import random

import pytest

from toric_mmp.errors import NonSimplicialResult, StepCapExceeded, TheoremViolation, ValidationError
from toric_mmp.fan import Fan, minimal_cone_containing, star_subdivision, validate_fan, walls
from toric_mmp.foliation import (
    FoliationForm,
    SingularityClass,
    check_non_dicritical,
    check_singularity_class,
    discrepancy_oracle,
    foliated_canonical_divisor,
)
from toric_mmp.intersection import intersect, is_nef, picard_rank, wall_relation
from toric_mmp.lattice import primitive_part
from toric_mmp.mmp import (
    Divisorial,
    FibreType,
    Flipping,
    classify_contraction,
    contract_divisorial,
    flip,
    flip_point,
    negative_extremal_rays,
    run_mmp,
)
from toric_mmp.sampling import mmp_instance

from _cases import C2, F1, FLOP_FORM, ONE_TAU, P1CUBED, P2, RADIAL, X1, X2

BLOWUP_C2 = star_subdivision(C2, (1, 1))


def test_negative_extremal_rays_examples():
    # the radial pencil on P2 is dicritical, so one wall of its ray is transverse
    (r,) = negative_extremal_rays(P2, RADIAL, strict=False)
    assert r.degree == -1 and r.tangency == (True, True, False)
    (r,) = negative_extremal_rays(F1, RADIAL)
    assert r.degree == -2 and [w.rays for w in r.walls] == [(0,), (1,)]
    assert negative_extremal_rays(P2, ONE_TAU) == []


def test_transverse_negative_ray_is_a_theorem_violation():
    # dicritical: (0, -1) lies inside the cone over e1 and -e1-e2
    lam = FoliationForm((1, 0))
    with pytest.raises(TheoremViolation):
        negative_extremal_rays(P2, lam)
    (r,) = negative_extremal_rays(P2, lam, strict=False)
    assert r.tangency == (True, False, True)


def test_classify_contraction():
    fibre = classify_contraction(F1, [F1.wall((0,))], RADIAL)
    assert isinstance(fibre, FibreType) and fibre.base_dim == 1 and fibre.pulled_back
    div = classify_contraction(F1, [F1.wall((3,))])
    assert isinstance(div, Divisorial) and div.ray == 3 and div.vector == (1, 1)
    fl = classify_contraction(X1, [X1.wall((0, 1))])
    assert isinstance(fl, Flipping) and fl.negative == (0, 1) and fl.positive == (2, 3)


def test_contract_divisorial_examples():
    assert contract_divisorial(F1, [F1.wall((3,))]) == P2
    assert contract_divisorial(BLOWUP_C2, [BLOWUP_C2.wall((2,))]) == C2
    with pytest.raises(ValueError):
        contract_divisorial(X1, [X1.wall((0, 1))])


def _exceptional_walls(fan, i, sigma_rays):
    out = []
    for w in walls(fan):
        if i not in w.rays:
            continue
        rel = wall_relation(fan, w)
        support = {j for j, b in rel.coeffs.items() if b}
        if rel.negative == (i,) and support <= set(sigma_rays) | {i}:
            out.append(w)
    return out


def test_contraction_inverts_star_subdivision():
    rng = random.Random(31)
    checked = 0
    for _ in range(40):
        _, fan, _ = mmp_instance(rng, dim=3, max_rays=9)
        cone = rng.choice(fan.all_cones)
        if len(cone) < 2:
            continue
        v = primitive_part([sum(fan.rays[i][j] for i in cone) for j in range(3)])[0]
        sigma = minimal_cone_containing(fan, v)
        refined = star_subdivision(fan, v)
        i = len(refined.rays) - 1
        ws = _exceptional_walls(refined, i, [refined.ray_index(fan.rays[j]) for j in sigma])
        assert ws
        assert contract_divisorial(refined, ws) == fan
        assert picard_rank(refined) == picard_rank(fan) + 1
        checked += 1
    assert checked >= 25


def test_flip_is_an_involution_on_the_flop():
    assert flip(X1, [X1.wall((0, 1))]) == X2
    assert flip(X2, [X2.wall((2, 3))]) == X1
    assert flip_point(X1, [X1.wall((0, 1))]) == (1, 1, 0)


def test_non_simplicial_result():
    # the two walls through the ray are not one extremal class
    with pytest.raises((NonSimplicialResult, ValueError)):
        contract_divisorial(P1CUBED, [P1CUBED.wall((0, 2))])


def test_paper_flop():
    kf = foliated_canonical_divisor(X1, FLOP_FORM)
    assert intersect(X1, kf, (0, 1)) == -1
    trace = run_mmp(X1, FLOP_FORM)
    assert trace.certified and not trace.warnings
    assert [s.kind for s in trace.steps] == ["flip"]
    assert trace.outcome == "nef_model" and trace.final == X2
    assert intersect(X2, foliated_canonical_divisor(X2, FLOP_FORM), (2, 3)) == 1
    (step,) = trace.steps
    p = (1, 1, 0)
    assert step.monitors_before[p] == 0 and step.monitors_after[p] == 1


def test_p2_pencil_runs_to_a_point():
    trace = run_mmp(P2, RADIAL)
    assert trace.outcome == "fibre_space"
    assert len(trace.steps) == 1
    assert trace.fibre.base_dim == 0 and len(trace.fibre.kernel) == 1
    assert not trace.certified


def test_f1_pencil_fibres_over_a_line():
    trace = run_mmp(F1, RADIAL)
    assert trace.certified and trace.outcome == "fibre_space"
    (step,) = trace.steps
    assert step.kf_degree == -2 and step.walls == ((0,), (1,))
    fib = trace.fibre
    assert fib.base_dim == 1 and fib.pulled_back
    assert fib.fibre_lattice == ((1, 1),) or fib.fibre_lattice == ((-1, -1),)
    assert fib.base_form is not None and fib.base_form.dim == 1


def test_nef_input_stops_immediately():
    trace = run_mmp(P2, ONE_TAU)
    assert trace.outcome == "nef_model" and trace.steps == [] and trace.final == P2


def test_step_cap():
    with pytest.raises(StepCapExceeded) as info:
        run_mmp(X1, FLOP_FORM, step_cap=0)
    assert info.value.trace is not None and info.value.trace.steps == []


def test_rejects_bad_input():
    three_quarters = Fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(ValidationError):
        run_mmp(three_quarters, RADIAL)
    with pytest.raises(ValueError):
        run_mmp(X1, FLOP_FORM, strategy="greedy")


@pytest.mark.parametrize("strategy", ["first", "lex", "random"])
def test_strategies_on_random_corpus(strategy):
    rng = random.Random(41)
    for k in range(8):
        name, fan, lam = mmp_instance(rng)
        trace = run_mmp(fan, lam, strategy=strategy, seed=k)
        assert trace.certified, (name, trace.warnings)
        assert trace.outcome in ("nef_model", "fibre_space")
        keys = [s.before.key() for s in trace.steps]
        assert len(keys) == len(set(keys))
        for s in trace.steps:
            assert s.kf_degree < 0 and all(s.tangency)
            if s.kind == "divisorial":
                assert len(s.after.rays) == len(s.before.rays) - 1
            if s.after is not None:
                assert check_singularity_class(s.after, lam).cls >= SingularityClass.CANONICAL
                assert check_non_dicritical(s.after, lam, certificates=False)
        if trace.outcome == "nef_model":
            assert is_nef(trace.final, foliated_canonical_divisor(trace.final, lam)).nef
        else:
            assert trace.fibre.pulled_back
            for u in trace.fibre.fibre_lattice:
                assert lam.vanishes(u)


def test_random_strategy_is_reproducible():
    rng = random.Random(42)
    _, fan, lam = mmp_instance(rng, dim=3)
    a = run_mmp(fan, lam, strategy="random", seed=7)
    b = run_mmp(fan, lam, strategy="random", seed=7)
    assert [s.direction for s in a.steps] == [s.direction for s in b.steps]


def test_monitors_match_the_oracle():
    trace = run_mmp(X1, FLOP_FORM)
    (step,) = trace.steps
    for p, value in step.monitors_after.items():
        if step.after.ray_index(p) is None:
            assert discrepancy_oracle(step.after, FLOP_FORM, None, p).value == value
