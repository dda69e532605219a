import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from lidstone.basis import BasisTable, NodeSystem
from lidstone.errors import DegenerateStep, RadiusOutOfRange, TypeTooLarge
from lidstone.functions import Exp, PolyFunction, Sin, polynomial
from lidstone.gontcharoff import (
    LOG2,
    NodeSequence,
    OmegaTable,
    abel_closed_form,
    c_bound_exact,
    c_bound_sequence,
    expand_gontcharoff,
    kappa_threshold,
    omega_determinant,
    omega_integral,
    omega_recurrence,
)
from lidstone.poly import Polynomial
from lidstone.scalars import gaussian, to_exact

Z = Polynomial([0, 1])


def rational_sequence(seed, length, bound=1, complex_nodes=False):
    rng = random.Random(seed)

    def draw():
        return Fraction(rng.randint(-4 * bound, 4 * bound), 4)

    vals = [gaussian(draw(), draw()) if complex_nodes else draw() for _ in range(length)]
    return NodeSequence.explicit(vals, 0, A=2 * bound)


def test_node_sequence_rules():
    per = NodeSequence.periodic([0, 1])
    assert [per(n) for n in range(5)] == [0, 1, 0, 1, 0]
    assert per.A == pytest.approx(1.01)
    exp = NodeSequence.explicit(["1/2", 3], "-1")
    assert exp.prefix(4) == [Fraction(1, 2), 3, -1, -1]
    ari = NodeSequence.arithmetic(1, 2)
    assert ari(3) == 7 and not ari.bounded
    with pytest.raises(ValueError):
        NodeSequence.periodic([0, 1], A=1.0)
    with pytest.raises(ValueError):
        NodeSequence.explicit([1], None)


def test_omega_small_examples():
    w = NodeSequence.explicit(["2/3"], 0)
    assert omega_recurrence(w, 0) == Polynomial([1])
    assert omega_recurrence(w, 1) == Z - Fraction(2, 3)
    assert omega_determinant(w, 0) == Polynomial([1])
    assert omega_determinant(w, 1) == Z - Fraction(2, 3)
    assert omega_integral(w, 1) == Z - Fraction(2, 3)


def test_low_order_closed_forms():
    rng = random.Random(2)
    for _ in range(5):
        w1, w2, w3 = (Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        seq = NodeSequence.explicit([0, w1, w2, w3], 0, A=10)
        assert 2 * omega_recurrence(seq, 2) == (Z - w1) ** 2 - w1 ** 2
        assert 6 * omega_recurrence(seq, 3) == (Z - w2) ** 3 - 3 * (w1 - w2) ** 2 * Z + w2 ** 3
        four = ((Z - w3) ** 4 - 6 * (w2 - w3) ** 2 * (Z - w1) ** 2 - 4 * (w1 - w3) ** 3 * Z
                + 6 * w1 ** 2 * (w2 - w3) ** 2 - w3 ** 4)
        assert 24 * omega_recurrence(seq, 4) == four


@pytest.mark.parametrize("seed", range(4))
def test_three_constructions_agree(seed):
    seq = rational_sequence(seed, 11, complex_nodes=seed % 2 == 1)
    table = OmegaTable(seq)
    for N in range(11):
        rec = omega_recurrence(seq, N, table)
        assert omega_determinant(seq, N) == rec
        assert omega_integral(seq, N) == rec


@pytest.mark.parametrize("seed", range(3))
def test_duality_degree_and_leading_term(seed):
    seq = rational_sequence(10 + seed, 13, complex_nodes=seed == 2)
    table = OmegaTable(seq).extend(12)
    for n in range(13):
        om = table[n]
        assert om.degree == n
        assert om[n] == Fraction(1, math.factorial(n))
        for k in range(13):
            assert om.derivative_at(k, seq(k)) == (1 if k == n else 0)


def test_shift_identity():
    seq = rational_sequence(7, 9)
    w0 = seq(0)
    shifted = NodeSequence.explicit([v - w0 for v in seq.prefix(9)], 0, A=10)
    for n in range(9):
        assert omega_recurrence(seq, n) == omega_recurrence(shifted, n).compose_linear(1, -w0)


def test_abel_closed_form():
    assert abel_closed_form(0, 1, 2) == Z * (Z - 2) / 2
    assert abel_closed_form("1/3", 2, 1) == Z - Fraction(1, 3)
    assert abel_closed_form(5, 1, 0) == Polynomial([1])
    for a, t in [(0, 1), ("1/2", "-3/4"), (gaussian(1, 1), gaussian(0, "1/2"))]:
        seq = NodeSequence.arithmetic(a, t)
        table = OmegaTable(seq)
        tt = to_exact(t)
        for n in range(1, 9):
            assert table[n] == abel_closed_form(a, t, n)
            # derivative identity: Omega_n' = Omega_(n-1) shifted by t
            assert table[n].derivative() == table[n - 1].compose_linear(1, -tt)
    with pytest.raises(DegenerateStep):
        abel_closed_form(1, 0, 3)


def test_whittaker_correspondence():
    seq = NodeSequence.periodic([1, 0])
    table = OmegaTable(seq)
    basis = BasisTable(NodeSystem.whittaker(1, 0))
    for n in range(6):
        assert table[2 * n] == basis[n, 0]


def test_c_bound_examples():
    c = c_bound_sequence(200)
    assert c[0] == 1 and c[1] == 2 and c[2] == 3
    exact = c_bound_exact(30)
    assert exact[3] == Fraction(13, 3)
    assert np.allclose(c[:31], [float(x) for x in exact], rtol=1e-14)
    assert all(c[n] < 1.5 ** n for n in range(30, 201))
    assert kappa_threshold(1.5, 200) <= 30
    # growth rate 1/log 2 from the pole of e^x/(2 - e^x)
    assert abs(c[200] / c[199] - 1 / LOG2) < 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_omega_bounded_by_c(seed):
    seq = rational_sequence(20 + seed, 51, bound=1, complex_nodes=seed == 1)
    table = OmegaTable(seq).extend(50)
    c = c_bound_exact(50)
    unit = [gaussian(1), gaussian("3/5", "4/5"), gaussian(0, -1), gaussian("-5/13", "12/13"),
            gaussian("1/2", "-1/3")]
    for r in (1, 2):
        for n in range(51):
            for u in unit:
                z = u * r
                val = table[n](z)
                bound = c[n] * Fraction(r) ** n
                assert abs(complex(val)) ** 2 <= float(bound) ** 2 * (1 + 1e-12)


def test_expand_exponential():
    seq = NodeSequence.periodic([0, 1])
    res = expand_gontcharoff(Exp(0.5), seq, seq.A, 40)
    zs = np.concatenate([np.exp(2j * np.pi * np.arange(32) / 32), [0, 0.5j, -0.3]])
    err = max(abs(cmath.exp(z / 2) - res(z)) for z in zs)
    assert err <= 1e-8
    assert err <= res.tail_bound < 1e-3


def test_expansion_preconditions():
    seq = NodeSequence.periodic([0, 1])
    with pytest.raises(TypeTooLarge):
        expand_gontcharoff(Exp(1.0), seq, 1.01, 10)
    with pytest.raises(RadiusOutOfRange):
        expand_gontcharoff(Exp(0.5), seq, 1.0, 10)
    with pytest.raises(RadiusOutOfRange):
        expand_gontcharoff(Exp(0.5), seq, 1.5, 10)
    with pytest.raises(RadiusOutOfRange):
        expand_gontcharoff(Exp(0.1), NodeSequence.arithmetic(0, 1), 1.0, 10)


def test_tail_bound_sound_off_nodes():
    seq = NodeSequence.explicit(["1/2", "-1/2", "1/4"], 0)
    for f, N in [(Sin(0.8), 12), (Exp(-0.6 + 0.2j), 15)]:
        res = expand_gontcharoff(f, seq, 0.8, N)
        rng = np.random.default_rng(N)
        for z in 0.8 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20)):
            assert abs(f(z) - res(z)) <= res.tail_bound


@pytest.mark.parametrize("seed", range(3))
def test_polynomial_reconstruction(seed):
    seq = rational_sequence(30 + seed, 8)
    P = Polynomial([Fraction(seed + 1, 3), -2, 0, Fraction(5, 7), 1])
    res = expand_gontcharoff(PolyFunction(P), seq, seq.A, 6)
    assert res.exact_partial_sum == P
    assert res.tail_bound == 0.0


def test_vanishing_tail_data_gives_low_degree():
    # data f^(n)(w_n) = 0 for n >= 4 pins f to degree < 4
    seq = rational_sequence(40, 10)
    table = OmegaTable(seq)
    P = table[3] * 2 - table[1] + table[0] * Fraction(1, 5)
    res = expand_gontcharoff(PolyFunction(P), seq, seq.A, 9)
    assert all(res.coeffs[n] == 0 for n in range(4, 10))
    assert res.exact_partial_sum == P and P.degree < 4
    cubic = polynomial([0, 0, 0, 1])
    assert expand_gontcharoff(cubic, seq, seq.A, 3).exact_partial_sum == cubic.poly
