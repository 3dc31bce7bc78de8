"""Algebra laws of the twisted Fourier arithmetic, against independent oracles."""

import cmath
import json
import math

import pytest

from ncym import (
    CANONICAL_EPS,
    IndexOutOfRange,
    ThetaMatrix,
    ThetaMismatch,
    TorusElement,
    adjoint,
    derivation,
    mul,
    product_theta,
    tensor_embed,
    trace,
)
from ncym import sampling

COEFF_TOL = 1e-12


def coeff_distance(a, b):
    keys = set(a.coeffs) | set(b.coeffs)
    return max((abs(a.coeffs.get(k, 0j) - b.coeffs.get(k, 0j)) for k in keys), default=0.0)


def word_reorder_oracle(theta, r, s):
    """Multiply U^r U^s one generator swap at a time, using only the defining relation.

    Returns (multi-index, phase); independent of the closed-form cocycle.
    """
    word = []
    for idx in (r, s):
        for j, e in enumerate(idx):
            word.extend([(j, 1 if e > 0 else -1)] * abs(e))
    exponent = 0.0
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            (k, a), (m, b) = word[i], word[i + 1]
            if k > m:
                # U_k^a U_m^b = e(Theta_mk * a * b) U_m^b U_k^a
                exponent += theta.entries[m][k] * a * b
                word[i], word[i + 1] = word[i + 1], word[i]
                changed = True
    out = [0] * theta.n
    for j, a in word:
        out[j] += a
    return tuple(out), cmath.exp(2j * math.pi * exponent)


@pytest.fixture
def theta2():
    return ThetaMatrix([[0.0, 0.3], [-0.3, 0.0]])


def test_theta_validation():
    with pytest.raises(ValueError):
        ThetaMatrix([[0.1, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        ThetaMatrix([[0.0, 0.2], [0.2, 0.0]])
    t = ThetaMatrix([[0.0, -0.0], [0.0, 0.0]])
    assert t.entries[0][1] == 0.0


def test_defining_relation(theta2):
    u1 = TorusElement.generator(theta2, 1)
    u2 = TorusElement.generator(theta2, 2)
    lhs = mul(u1, u2)
    rhs = mul(u2, u1)
    assert lhs.coeffs[(1, 1)] == pytest.approx(1.0)
    # U_k U_m = e(Theta_mk) U_m U_k with (k, m) = (1, 2): ratio is e(Theta_21) inverse
    ratio = lhs.coeffs[(1, 1)] / rhs.coeffs[(1, 1)]
    assert abs(ratio - cmath.exp(2j * math.pi * theta2.entries[1][0])) < COEFF_TOL


def test_unit_element(theta2):
    one = TorusElement.one(theta2)
    gen = sampling.rng(0)
    for _ in range(20):
        a = sampling.random_element(theta2, gen, radius=3)
        assert coeff_distance(mul(one, a), a) == 0.0
        assert coeff_distance(mul(a, one), a) == 0.0


@pytest.mark.parametrize("n,seed", [(2, 1), (3, 2)])
def test_product_matches_word_oracle(n, seed):
    gen = sampling.rng(seed)
    theta = sampling.random_theta(n, gen)
    for _ in range(60):
        r = tuple(int(x) for x in gen.integers(-3, 4, size=n))
        s = tuple(int(x) for x in gen.integers(-3, 4, size=n))
        prod = mul(TorusElement.monomial(theta, r), TorusElement.monomial(theta, s))
        key, phase = word_reorder_oracle(theta, r, s)
        assert set(prod.coeffs) == {key}
        assert abs(prod.coeffs[key] - phase) < COEFF_TOL


def test_cocycle_identity():
    # sigma(r,s) sigma(r+s,t) = sigma(s,t) sigma(r,s+t): associativity at phase level
    gen = sampling.rng(4)
    theta = sampling.random_theta(3, gen)
    for _ in range(200):
        r, s, t = (tuple(int(x) for x in gen.integers(-4, 5, size=3)) for _ in range(3))
        lhs = theta.pair_exponent(r, s) + theta.pair_exponent(tuple(a + b for a, b in zip(r, s)), t)
        rhs = theta.pair_exponent(s, t) + theta.pair_exponent(r, tuple(a + b for a, b in zip(s, t)))
        assert abs(lhs - rhs) < 1e-10


def test_adjoint_matches_word_oracle():
    gen = sampling.rng(5)
    theta = sampling.random_theta(3, gen)
    for _ in range(40):
        r = tuple(int(x) for x in gen.integers(-3, 4, size=3))
        star = TorusElement.monomial(theta, r).adjoint()
        # (U^r)* is the reversed word of inverses; sort it ascending from scratch
        word = []
        for j in range(2, -1, -1):
            e = r[j]
            word.extend([(j, -1 if e > 0 else 1)] * abs(e))
        exponent = 0.0
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - 1):
                (k, a), (m, b) = word[i], word[i + 1]
                if k > m:
                    exponent += theta.entries[m][k] * a * b
                    word[i], word[i + 1] = word[i + 1], word[i]
                    changed = True
        expected = cmath.exp(2j * math.pi * exponent)
        key = tuple(-x for x in r)
        assert set(star.coeffs) == {key}
        assert abs(star.coeffs[key] - expected) < COEFF_TOL


def test_monomial_unitarity(theta2):
    for r in [(1, 0), (2, -1), (0, 3), (-2, -2), (5, 5), (-5, 4)]:
        u = TorusElement.monomial(theta2, r)
        left = mul(u.adjoint(), u)
        right = mul(u, u.adjoint())
        one = TorusElement.one(theta2)
        assert coeff_distance(left, one) < COEFF_TOL
        assert coeff_distance(right, one) < COEFF_TOL


@pytest.mark.parametrize("n,seed", [(2, 10), (3, 11)])
def test_associativity_sweep(n, seed):
    gen = sampling.rng(seed)
    theta = sampling.random_theta(n, gen)
    for _ in range(100):
        a = sampling.random_element(theta, gen, radius=3, terms=4)
        b = sampling.random_element(theta, gen, radius=3, terms=4)
        c = sampling.random_element(theta, gen, radius=3, terms=4)
        assert coeff_distance(mul(mul(a, b), c), mul(a, mul(b, c))) < COEFF_TOL


def test_involution_antimultiplicative():
    gen = sampling.rng(12)
    theta = sampling.random_theta(2, gen)
    for _ in range(100):
        a = sampling.random_element(theta, gen, radius=3, terms=4)
        b = sampling.random_element(theta, gen, radius=3, terms=4)
        assert coeff_distance(mul(a, b).adjoint(), mul(b.adjoint(), a.adjoint())) < COEFF_TOL
    one = TorusElement.one(theta)
    assert coeff_distance(one.adjoint(), one) == 0.0


def test_trace_properties():
    gen = sampling.rng(13)
    theta = sampling.random_theta(2, gen)
    assert trace(TorusElement.one(theta)) == 1.0
    assert trace(TorusElement.generator(theta, 1)) == 0.0
    for _ in range(100):
        a = sampling.random_element(theta, gen, radius=3, terms=4)
        b = sampling.random_element(theta, gen, radius=3, terms=4)
        assert abs(trace(mul(a, b)) - trace(mul(b, a))) < COEFF_TOL
        positive = trace(mul(a.adjoint(), a))
        assert abs(positive - sum(abs(c) ** 2 for c in a.coeffs.values())) < COEFF_TOL
        assert positive.real >= 0.0


def test_derivation_properties(theta2):
    u1 = TorusElement.generator(theta2, 1)
    d = derivation(1, u1)
    assert coeff_distance(d, u1.scale(2j * math.pi)) < COEFF_TOL
    assert derivation(2, TorusElement.one(theta2)).coeffs == {}
    gen = sampling.rng(14)
    for _ in range(100):
        a = sampling.random_element(theta2, gen, radius=3, terms=4)
        b = sampling.random_element(theta2, gen, radius=3, terms=4)
        for j in (1, 2):
            lhs = derivation(j, mul(a, b))
            rhs = mul(derivation(j, a), b) + mul(a, derivation(j, b))
            assert coeff_distance(lhs, rhs) < COEFF_TOL
    with pytest.raises(IndexOutOfRange):
        derivation(3, u1)
    with pytest.raises(IndexOutOfRange):
        derivation(0, u1)


def test_theta_zero_commutative():
    theta = ThetaMatrix.zeros(3)
    gen = sampling.rng(15)
    for _ in range(30):
        a = sampling.random_element(theta, gen, radius=2, terms=4)
        b = sampling.random_element(theta, gen, radius=2, terms=4)
        assert coeff_distance(mul(a, b), mul(b, a)) == 0.0


def test_theta_mismatch_raises(theta2):
    other = ThetaMatrix([[0.0, 0.4], [-0.4, 0.0]])
    with pytest.raises(ThetaMismatch):
        mul(TorusElement.one(theta2), TorusElement.one(other))


def test_canonical_form_drops_tiny(theta2):
    a = TorusElement(theta2, {(0, 0): 1.0, (1, 0): 0.5 * CANONICAL_EPS})
    assert set(a.coeffs) == {(0, 0)}
    b = TorusElement.monomial(theta2, (1, 1), 1.0)
    assert (b - b).coeffs == {}


def test_product_theta_and_embedding():
    z2 = ThetaMatrix.zeros(2)
    assert product_theta(z2, z2).entries == ThetaMatrix.zeros(4).entries
    gen = sampling.rng(16)
    theta = sampling.random_theta(2, gen)
    phi = sampling.random_theta(2, gen)
    psi = product_theta(theta, phi)
    # block-diagonal skew
    ThetaMatrix(psi.entries)
    for j in range(2):
        for k in range(2):
            assert psi.entries[j][k] == theta.entries[j][k]
            assert psi.entries[2 + j][2 + k] == phi.entries[j][k]
            assert psi.entries[j][2 + k] == 0.0
    # embedded generators of the two factors commute exactly
    u = tensor_embed(TorusElement.generator(theta, 1), TorusElement.one(phi))
    v = tensor_embed(TorusElement.one(theta), TorusElement.generator(phi, 2))
    assert coeff_distance(mul(u, v), mul(v, u)) == 0.0


def test_tensor_embed_homomorphism():
    gen = sampling.rng(17)
    theta = sampling.random_theta(2, gen)
    phi = sampling.random_theta(2, gen)
    one = tensor_embed(TorusElement.one(theta), TorusElement.one(phi))
    assert coeff_distance(one, TorusElement.one(product_theta(theta, phi))) == 0.0
    for _ in range(100):
        a = sampling.random_element(theta, gen, radius=2, terms=3)
        a2 = sampling.random_element(theta, gen, radius=2, terms=3)
        b = sampling.random_element(phi, gen, radius=2, terms=3)
        b2 = sampling.random_element(phi, gen, radius=2, terms=3)
        lhs = tensor_embed(mul(a, a2), mul(b, b2))
        rhs = mul(tensor_embed(a, b), tensor_embed(a2, b2))
        assert coeff_distance(lhs, rhs) < COEFF_TOL
        assert abs(trace(tensor_embed(a, b)) - trace(a) * trace(b)) < COEFF_TOL


def test_serialization_round_trip(theta2):
    gen = sampling.rng(18)
    a = sampling.random_element(theta2, gen, radius=3, terms=6)
    text = json.dumps({"theta": theta2.to_payload(), "coeffs": a.to_payload()})
    back = json.loads(text)
    theta = ThetaMatrix.from_payload(back["theta"])
    b = TorusElement.from_payload(theta, back["coeffs"])
    assert theta == theta2
    assert b.coeffs == a.coeffs  # bit-exact round trip
