import math
import random

import pytest

from lidstone.basis import NodeSystem
from lidstone.detector import (
    INCONCLUSIVE,
    POLYNOMIAL,
    VIOLATED,
    IntegralityConfig,
    classify_periodic,
    classify_products,
    classify_sequence,
    polya_cutoff,
)
from lidstone.errors import NotFound
from lidstone.expansion import derivative_at
from lidstone.functions import Cos, Cosh, CosPi, Exp, Expm1OverZ, Sin, Sinh, SinPi, polynomial
from lidstone.gontcharoff import NodeSequence

LID = NodeSystem.lidstone()
PER01 = NodeSequence.periodic([0, 1])


def assert_certified(v, expected=None):
    assert v.outcome == POLYNOMIAL, (v.reason, v.detail)
    assert v.evidence["certificate_residual"] <= 1e-8
    if expected is not None:
        assert v.certificate == expected


def test_config_validation():
    IntegralityConfig()
    for bad in [dict(n_max=0), dict(int_tol=0.5), dict(int_tol=0), dict(zero_tol=1e-5),
                dict(zero_tol=0)]:
        with pytest.raises(ValueError):
            IntegralityConfig(**bad)


def test_polya_cutoff():
    n0 = polya_cutoff(Expm1OverZ(1.0), 1.0)
    assert 0 < n0 < 60
    assert max(abs(derivative_at(Expm1OverZ(1.0), n0, z)) for z in (1, -1, 1j)) < 1
    for d in range(5):
        assert polya_cutoff(polynomial([0] * d + [3]), 2.0) <= d + 1
    with pytest.raises(NotFound):
        polya_cutoff(Exp(2.0), 0.0)


def test_periodic_examples():
    cubic = polynomial([0, 0, 0, 1])
    assert_certified(classify_periodic(cubic, LID), cubic.poly)
    for f in (Sin(math.pi), SinPi(1.0)):
        v = classify_periodic(f, LID)
        assert (v.outcome, v.reason) == (VIOLATED, "type")
    flat = NodeSystem((0, 0), (0, 0))
    for f in (Sin(), polynomial([0, 1, 0, 1])):        # odd functions z g(z^2)
        v = classify_periodic(f, flat)
        assert (v.outcome, v.reason) == (VIOLATED, "admissibility")


def test_periodic_integrality_and_growth_failures():
    v = classify_periodic(Exp(0.5) + polynomial([0, 1]), LID)
    assert (v.outcome, v.reason) == (VIOLATED, "integrality")
    v = classify_periodic(Cos(0.25) * 2, NodeSystem.poritsky(("0", "1/2", "-1/3")))
    assert v.outcome == VIOLATED


def test_periodic_pool_polynomials():
    P = polynomial([2, -1, 0, 4, 1])
    for nodes in [LID, NodeSystem.whittaker(), NodeSystem.gontcharoff((0, 1, 2)),
                  NodeSystem((0, 1, 2), (0, 0, 1))]:
        assert_certified(classify_periodic(P, nodes), P.poly)


def test_sequence_examples():
    quad = polynomial([0, 1, 1])
    assert_certified(classify_sequence(quad, PER01), quad.poly)
    v = classify_sequence(Exp(0.5) + polynomial([0, 1]), PER01)
    assert (v.outcome, v.reason) == (VIOLATED, "integrality")
    v = classify_sequence(Exp(1.0), PER01)
    assert (v.outcome, v.reason) == (VIOLATED, "type")
    v = classify_sequence(quad, NodeSequence.arithmetic(0, 1))
    assert (v.outcome, v.reason) == (VIOLATED, "admissibility")


def test_products_examples():
    P = polynomial([1, 3, -2, 1])          # integer derivatives everywhere on Z
    assert_certified(classify_products(P, [0, 1], [[0, 1]], 1.01), P.poly)
    sq = polynomial([0, 0, 1])
    assert_certified(classify_products(sq, [0, 1], [[0], [1]], 1.01), sq.poly)
    v = classify_products(Exp(0.5), [0], [[0]], 1.01)
    assert (v.outcome, v.reason) == (VIOLATED, "integrality")
    v = classify_products(sq, [0, 2], [[0]], 1.01)
    assert (v.outcome, v.reason) == (VIOLATED, "admissibility")
    v = classify_products(sq, [0, 1], [[]], 1.01)
    assert (v.outcome, v.reason) == (VIOLATED, "admissibility")
    assert_certified(classify_products(sq, [0, 1], lambda n: [n % 2], 1.01), sq.poly)


@pytest.mark.parametrize("n_max", [10, 20, 40, 60])
def test_gate_monotonicity(n_max):
    cfg = IntegralityConfig(n_max=n_max)
    cubic, quad = polynomial([0, 0, 0, 1]), polynomial([0, 1, 1])
    assert classify_periodic(cubic, LID, cfg).is_polynomial
    assert classify_sequence(quad, PER01, cfg).is_polynomial
    assert classify_products(quad, [0, 1], [[0, 1]], 1.01, cfg).is_polynomial


def test_sharpness_lidstone():
    d = 4
    nodes = NodeSystem.lidstone(0, d)
    hat = Sinh(1, -d) / math.sinh(-d)
    wave = SinPi(1 / d)
    for n in range(31):
        assert abs(derivative_at(hat, 2 * n, 0) - 1) < 1e-10
        assert abs(derivative_at(hat, 2 * n, d)) < 1e-10
        for s in (0, d):
            assert abs(derivative_at(wave, 2 * n, s)) < 1e-10
    for f in (hat, wave, Sin(math.pi / d)):
        v = classify_periodic(f, nodes)
        assert (v.outcome, v.reason) == (VIOLATED, "type")
        assert v.evidence["type"] >= v.evidence["zero_free_radius"] * (1 - 1e-9)


def test_sharpness_whittaker():
    d = 2
    nodes = NodeSystem.whittaker(0, d)          # even orders at 0, odd orders at d
    hat = Cosh(1, -d) / math.cosh(-d)
    wave = CosPi(1 / (2 * d), -0.5)            # even derivatives vanish at 0, odd at d
    for n in range(31):
        assert abs(derivative_at(hat, 2 * n, 0) - 1) < 1e-10
        assert abs(derivative_at(hat, 2 * n + 1, d)) < 1e-10
        assert abs(derivative_at(wave, 2 * n, 0)) < 1e-10
        assert abs(derivative_at(wave, 2 * n + 1, d)) < 1e-10
    for f in (hat, wave, Cos(math.pi / (2 * d), -math.pi / 2)):
        v = classify_periodic(f, nodes)
        assert (v.outcome, v.reason) == (VIOLATED, "type")


def test_gontcharoff_residues_always_admissible():
    rng = random.Random(4)
    for m in range(1, 5):
        s = [f"{rng.randint(-5, 5)}/{rng.randint(1, 3)}" for _ in range(m)]
        v = classify_periodic(polynomial([1, 1]), NodeSystem.gontcharoff(s))
        assert "admissibility" in v.evidence["gates"]
        assert v.is_polynomial


def test_never_claims_transcendence():
    for f in (Exp(0.5), Sin(0.3), Cosh(0.2)):
        v = classify_periodic(f, LID)
        assert v.outcome in (VIOLATED, INCONCLUSIVE)
        assert v.certificate is None
