import pytest

from toric_mmp import gallery
from toric_mmp.fan import is_smooth, validate_fan, walls
from toric_mmp.foliation import SingularityClass, check_non_dicritical, check_singularity_class, epsilons, foliated_canonical_divisor
from toric_mmp.intersection import canonical_divisor, intersect, prime_divisor

NAMES = gallery.gallery_names()


def test_gallery_contents():
    expected = {"p2", "f1", "p1xp1", "p1cubed", "c2-radial", "c2-irrational", "c2-resonant", "paper-flop", "paper-flop-x2", "paper-flop-x0"}
    assert expected <= set(NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_golden(name):
    assert gallery.check_case(name) is None


@pytest.mark.parametrize("name", NAMES)
def test_kf_identity_on_gallery(name):
    doc = gallery.load_case(name)
    assert validate_fan(doc.fan) == []
    if doc.form is None:
        return
    expected = canonical_divisor(doc.fan)
    for i, e in enumerate(epsilons(doc.fan, doc.form)):
        if e == 0:
            expected = expected + prime_divisor(doc.fan, i)
    assert list(foliated_canonical_divisor(doc.fan, doc.form)) == list(expected)


@pytest.mark.parametrize("name", NAMES)
def test_methods_agree_on_smooth_gallery_fans(name):
    fan = gallery.load_case(name).fan
    if not is_smooth(fan):
        return
    for w in walls(fan):
        for i in range(len(fan.rays)):
            d = prime_divisor(fan, i)
            assert intersect(fan, d, w) == intersect(fan, d, w, method="relation")


def test_flop_triple():
    x1, x2, x0 = (gallery.load_case(n) for n in ("paper-flop", "paper-flop-x2", "paper-flop-x0"))
    lam = x1.form
    assert x2.form == lam and x0.form == lam
    assert intersect(x1.fan, foliated_canonical_divisor(x1.fan, lam), (0, 1)) == -1
    assert intersect(x2.fan, foliated_canonical_divisor(x2.fan, lam), (2, 3)) == 1
    # strict transform of C1 on the common blow-up
    assert intersect(x0.fan, foliated_canonical_divisor(x0.fan, lam), (0, 4)) == -1


def test_local_c2_cases():
    radial = gallery.load_case("c2-radial")
    assert not check_non_dicritical(radial.fan, radial.form)
    resonant = gallery.load_case("c2-resonant")
    verdict = check_singularity_class(resonant.fan, resonant.form)
    assert verdict.witness == (2, 1) and verdict.cls == SingularityClass.LOG_CANONICAL
    irrational = gallery.load_case("c2-irrational")
    assert check_non_dicritical(irrational.fan, irrational.form)
