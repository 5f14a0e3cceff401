import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidres.errors import DimensionError, InvalidSpecError
from euclidres.quantities import (
    ALPHA,
    DIMENSIONLESS,
    ENERGY,
    FIELD,
    HARTREE_EV,
    LENGTH,
    MASS,
    TIME,
    BarrierSpec,
    Dimension,
    LabBarrier,
    Quantity,
    convert,
    fine_structure_multiple,
    to_natural,
)

DIMS = [DIMENSIONLESS, ENERGY, LENGTH, TIME, FIELD, MASS, Dimension(energy=2, time=1)]
SYSTEMS = ["lab", "atomic", "nuclear"]


def test_inverse_mev_is_hbar_over_mev():
    q = convert(Quantity(1.0, TIME, "nuclear"), "lab")
    assert q.value == pytest.approx(6.582119569e-22, rel=1e-12)


def test_zero_is_system_independent():
    for d in DIMS:
        assert convert(Quantity(0.0, d, "lab"), "nuclear").value == 0.0


def test_hartree_conversion():
    assert convert(Quantity(13.6, ENERGY), "atomic").value == pytest.approx(13.6 / HARTREE_EV, rel=1e-12)
    # 13.6 / 27.211386 = 0.499791
    assert convert(Quantity(13.6, ENERGY), "atomic").value == pytest.approx(0.499791, abs=1e-6)


def test_unknown_system():
    with pytest.raises(DimensionError):
        convert(Quantity(1.0, ENERGY), "imperial")


def test_charge_not_expressible_in_nuclear_units():
    with pytest.raises(DimensionError):
        convert(Quantity(1.0, Dimension(charge=1), "lab"), "nuclear")


@settings(max_examples=200, deadline=None)
@given(
    v=st.floats(min_value=-1e30, max_value=1e30, allow_nan=False).filter(lambda x: x != 0),
    d=st.sampled_from(DIMS),
    a=st.sampled_from(SYSTEMS),
    b=st.sampled_from(SYSTEMS),
)
def test_round_trip(v, d, a, b):
    q = Quantity(v, d, a)
    back = convert(convert(q, b), a)
    assert back.value == pytest.approx(v, rel=1e-12)
    assert back.dim == d


@settings(max_examples=100, deadline=None)
@given(
    e1=st.tuples(*[st.integers(-3, 3)] * 4),
    e2=st.tuples(*[st.integers(-3, 3)] * 4),
    x=st.floats(0.1, 10),
    y=st.floats(0.1, 10),
)
def test_dimension_algebra_on_products(e1, e2, x, y):
    d1, d2 = Dimension(*e1), Dimension(*e2)
    assert (d1 * d2) == Dimension(*[p + q for p, q in zip(e1, e2)])
    prod = Quantity(x, d1, "lab") * Quantity(y, d2, "lab")
    assert prod.dim == d1 * d2
    assert prod.value == pytest.approx(x * y)


def test_hydrogen_to_atomic_units():
    spec = to_natural(LabBarrier(depth=13.6, field=2e7))
    assert spec.system == "atomic"
    assert spec.depth == pytest.approx(0.5, rel=1e-3)
    assert spec.E0 == pytest.approx(3.89e-3, rel=1e-3)
    assert spec.m == 1.0


def test_natural_identity():
    spec = to_natural(LabBarrier(depth=HARTREE_EV, field=1.0, system="atomic"))
    assert spec.depth == pytest.approx(1.0, rel=1e-14)


def test_alpha_inputs_in_nuclear_units():
    beta = fine_structure_multiple(116)
    assert beta == pytest.approx(116 / 137.035999, rel=1e-8)
    spec = to_natural(LabBarrier(depth=1.9e6, field=1e10, mass_ev=3727.3794066e6))
    assert spec.system == "nuclear"
    assert spec.m == pytest.approx(3727.3794066)
    assert spec.depth == pytest.approx(1.9)
    assert ALPHA == pytest.approx(1 / 137.035999084, rel=1e-10)


@pytest.mark.parametrize(
    "kw",
    [dict(depth=0.0, field=1.0), dict(depth=-1.0, field=1.0), dict(depth=1.0, field=0.0),
     dict(depth=1.0, field=1.0, mass_ev=0.0)],
)
def test_to_natural_rejects(kw):
    with pytest.raises(InvalidSpecError):
        to_natural(LabBarrier(**kw))


def test_barrier_spec_invariants():
    with pytest.raises(InvalidSpecError):
        BarrierSpec(V=0.0, E=0.0, E0=1.0, m=1.0)
    with pytest.raises(InvalidSpecError):
        BarrierSpec(V=1.0, E=0.0, E0=-1.0, m=1.0)
    with pytest.raises(InvalidSpecError):
        BarrierSpec(V=1.0, E=0.0, E0=1.0, m=0.0)


def test_spec_lab_helpers():
    spec = to_natural(LabBarrier(depth=13.6, field=2e7))
    assert spec.field_to_lab(spec.E0) == pytest.approx(2e7, rel=1e-12)
    assert spec.energy_to_ev(spec.depth) == pytest.approx(13.6, rel=1e-12)
    assert spec.time_to_seconds(1.0) == pytest.approx(2.4188843265857e-17, rel=1e-12)
    assert math.isclose(spec.with_energy(spec.E - 1).depth, spec.depth + 1)
