from foliated_blowup import Derivation, PolyRing
from foliated_blowup import regression


def test_formal_flow_of_worked_field():
    R = PolyRing(["x", "y", "z"])
    phi = regression.formal_flow(Derivation.parse("d/dz + z*d/dx", R), 4)
    assert [str(p) for p in phi] == ["1/2*t^2", "0", "t"]


def test_formal_flow_of_exponential_field():
    R = PolyRing(["x"])
    (phi,) = regression.formal_flow(Derivation.parse("(1 + x)*d/dx", R), 3)
    # e^t - 1 truncated
    assert str(phi) == "1/6*t^3 + 1/2*t^2 + t"


def test_t_order():
    T = PolyRing(["t"])
    t = T.var("t")
    assert regression.t_order(t**3 + t**5) == 3
    assert regression.t_order(T.zero) is None


def test_tower_specs_build():
    for spec in regression.PRESERVATION_TOWERS + regression.CHAIN_TOWERS:
        tower = spec.build()
        assert len(tower.blowups) == len(spec.steps)


def test_random_configurations_are_seeded():
    a = regression.fitting_transform_suite(count=3, seed=7)
    b = regression.fitting_transform_suite(count=3, seed=7)
    assert a == b
