"""Curvature, the YM functional, gradients, criticality and descent."""

import json
import math
import warnings

import pytest

from ncym import (
    Connection,
    InvalidConnection,
    Perturbation,
    Projection,
    ShapeMismatch,
    ThetaMatrix,
    TorusElement,
    TorusMatrix,
    check_compatibility,
    curvature,
    directional_derivative,
    gradient_norm,
    grassmannian_connection,
    is_critical,
    minimize,
    random_connection,
    random_perturbation,
    ym_gradient,
    ym_value,
)
from ncym import sampling
from ncym.yangmills import compatibility_deviation, hs_inner, pairing_with_gradient

EIGHT_PI_SQ = 8.0 * math.pi ** 2


def theta2(val=0.3):
    return ThetaMatrix([[0.0, val], [-val, 0.0]])


def example_connection(theta=None):
    """n=2, q=1, A1=0, A2=U1-U1*: curvature 2*pi*i(U1+U1*), YM = 8 pi^2."""
    th = theta or theta2()
    u1 = TorusElement.generator(th, 1)
    a2 = u1 - u1.adjoint()
    return Connection(th, 1, [TorusMatrix.zeros(th, 1), TorusMatrix.from_element(a2)])


def ym_brute_force(c):
    """tau_q(F* F) via the literal dagger/matmul/trace route (oracle path)."""
    f = curvature(c)
    total = 0j
    for _, m in f.items():
        total += (m.dagger() @ m).tau()
    return total


def test_flat_curvature_zero():
    c = Connection.flat(theta2(), 2)
    f = curvature(c)
    assert all(m.is_zero() for _, m in f.items())
    assert ym_value(c) == 0.0


def test_constant_scalar_potentials_flat():
    th = theta2()
    comps = []
    for lam in (0.7, -1.3):
        m = TorusMatrix.identity(th, 2).scale(1j * lam)
        comps.append(m)
    c = Connection(th, 2, comps)
    assert all(m.is_zero() for _, m in curvature(c).items())
    assert ym_value(c) == 0.0


def test_explicit_curvature_and_ym_value():
    for val in (0.1, 0.3, 1.0 / math.sqrt(2.0)):
        c = example_connection(theta2(val))
        f = curvature(c).table[(1, 2)].entries[0][0]
        u1 = TorusElement.generator(c.theta, 1)
        expected = (u1 + u1.adjoint()).scale(2j * math.pi)
        assert max(
            abs(f.coeffs.get(k, 0j) - expected.coeffs.get(k, 0j))
            for k in set(f.coeffs) | set(expected.coeffs)
        ) < 1e-12
        ym = ym_value(c)
        assert abs(ym - EIGHT_PI_SQ) <= 1e-9 * EIGHT_PI_SQ
        # literal trace route agrees
        brute = ym_brute_force(c)
        assert abs(brute.imag) < 1e-12
        assert abs(brute.real - ym) < 1e-9


def test_ym_quadratic_scaling():
    th = theta2()
    u1 = TorusElement.generator(th, 1)
    base = u1 - u1.adjoint()
    values = {}
    for t in (0.5, 1.0, 2.0):
        c = Connection(th, 1, [TorusMatrix.zeros(th, 1), TorusMatrix.from_element(base.scale(t))])
        values[t] = ym_value(c)
    assert values[0.5] == pytest.approx(0.25 * values[1.0], rel=1e-12)
    assert values[2.0] == pytest.approx(4.0 * values[1.0], rel=1e-12)


def test_hs_inner_matches_literal_trace():
    gen = sampling.rng(21)
    th = sampling.random_theta(2, gen)
    for q in (1, 2):
        for _ in range(10):
            rows = [[sampling.random_element(th, gen, 2, 4) for _ in range(q)] for _ in range(q)]
            x = TorusMatrix(th, rows)
            rows = [[sampling.random_element(th, gen, 2, 4) for _ in range(q)] for _ in range(q)]
            y = TorusMatrix(th, rows)
            literal = (x.dagger() @ y).tau()
            assert abs(hs_inner(x, y) - literal) < 1e-10


def test_compatibility_skew_true_nonskew_false():
    gen = sampling.rng(22)
    th = sampling.random_theta(2, gen)
    c = random_connection(th, 2, gen, radius=1, amplitude=0.5)
    assert c.compatibility_defect() < 1e-12
    assert check_compatibility(c, samples=30, seed=3)
    # A1 = U1 is not skew-adjoint
    u1 = TorusElement.generator(th, 1)
    bad = Connection(th, 1, [TorusMatrix.from_element(u1), TorusMatrix.zeros(th, 1)])
    assert not check_compatibility(bad, samples=30, seed=3)
    assert compatibility_deviation(bad, samples=30, seed=3) > 1e-3


def test_grassmannian_constant_projection_compatible():
    th = theta2()
    c = grassmannian_connection(th, [[0.5, 0.5], [0.5, 0.5]])
    assert c.proj is not None and c.proj.is_constant()
    assert check_compatibility(c, samples=30, seed=4)
    assert ym_value(c) == 0.0


def test_projection_validation():
    th = theta2()
    bad = TorusMatrix.from_scalar_matrix(th, [[0.5, 0.0], [0.0, 0.3]])
    with pytest.raises(InvalidConnection):
        Projection(bad)
    # non-constant projection within tolerance warns
    eps = 1e-13
    u1 = TorusElement.generator(th, 1)
    perturbed = TorusMatrix(
        th,
        [
            [TorusElement.one(th), TorusElement.zero(th)],
            [TorusElement.zero(th), (u1 + u1.adjoint()).scale(eps)],
        ],
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        Projection(perturbed)
    assert any("torus-valued" in str(w.message) for w in caught)


def test_module_preservation_enforced():
    th = theta2()
    p = TorusMatrix.from_scalar_matrix(th, [[1.0, 0.0], [0.0, 0.0]])
    proj = Projection(p)
    u1 = TorusElement.generator(th, 1)
    offcorner = TorusMatrix(
        th,
        [
            [TorusElement.zero(th), TorusElement.zero(th)],
            [u1 - u1.adjoint(), TorusElement.zero(th)],
        ],
    )
    with pytest.raises(InvalidConnection):
        Connection(th, 2, [offcorner, TorusMatrix.zeros(th, 2)], proj)


def test_directional_derivative_basics():
    th = theta2()
    flat = Connection.flat(th, 1)
    gen = sampling.rng(23)
    mu = random_perturbation(flat, gen)
    assert abs(directional_derivative(flat, mu, h=1e-4)) < 1e-6
    zero = Perturbation([TorusMatrix.zeros(th, 1), TorusMatrix.zeros(th, 1)])
    assert directional_derivative(flat, zero) == 0.0
    with pytest.raises(ShapeMismatch):
        directional_derivative(flat, Perturbation([TorusMatrix.zeros(th, 1)]))


def test_gradient_matches_central_differences():
    gen = sampling.rng(24)
    failures = []
    for n, q in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        th = sampling.random_theta(n, gen)
        c = random_connection(th, q, gen, radius=2, amplitude=0.3)
        for _ in range(5):
            mu = random_perturbation(c, gen)
            fd = directional_derivative(c, mu, h=1e-4)
            analytic = 2.0 * pairing_with_gradient(c, mu).real
            if abs(fd - analytic) > 1e-6 * max(1.0, abs(fd)):
                failures.append((n, q, fd, analytic))
    assert not failures


def test_gradient_zero_cases():
    th = theta2()
    flat = Connection.flat(th, 2)
    assert gradient_norm(flat) == 0.0
    # commuting constant potentials: curvature and gradient vanish
    a1 = TorusMatrix.from_scalar_matrix(th, [[1j, 0.0], [0.0, -0.5j]])
    a2 = TorusMatrix.from_scalar_matrix(th, [[0.25j, 0.0], [0.0, 2j]])
    c = Connection(th, 2, [a1, a2])
    assert all(m.is_zero() for _, m in curvature(c).items())
    assert gradient_norm(c) < 1e-14


def test_curvature_skew_for_skew_potentials():
    gen = sampling.rng(29)
    th = sampling.random_theta(3, gen)
    c = random_connection(th, 2, gen, radius=1, amplitude=0.5)
    for _, m in curvature(c).items():
        assert (m + m.dagger()).l1() < 1e-10


def test_gradient_is_skew_for_skew_connection():
    gen = sampling.rng(25)
    th = sampling.random_theta(2, gen)
    c = random_connection(th, 2, gen, radius=1, amplitude=0.4)
    g = ym_gradient(c)
    for m in g.components:
        assert (m + m.dagger()).l1() < 1e-10


def test_is_critical():
    th = theta2()
    assert is_critical(Connection.flat(th, 1), tol=1e-8, samples=10, seed=0)
    c = example_connection(th)
    assert not is_critical(c, tol=1e-3, samples=10, seed=0)
    # verdict independent of the sampling seed
    assert is_critical(c, 1e-3, 10, 1) == is_critical(c, 1e-3, 10, 2)


def test_minimize_flat_immediate():
    th = theta2()
    c, trace = minimize(Connection.flat(th, 1))
    assert trace == [0.0]
    assert ym_value(c) == 0.0


def test_minimize_descends_to_flat():
    gen = sampling.rng(26)
    th = sampling.random_theta(2, gen)
    c0 = random_connection(th, 1, gen, radius=2, amplitude=0.05)
    c, trace = minimize(c0, max_iters=10000, grad_tol=1e-8)
    assert trace[-1] <= 1e-8
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert gradient_norm(c) <= 1e-8


def test_minimize_unpreconditioned_still_descends():
    # raw gradient descent is stiff (support spreads fast), so only a few steps
    gen = sampling.rng(27)
    th = sampling.random_theta(2, gen)
    c0 = random_connection(th, 1, gen, radius=1, amplitude=0.05, terms=2)
    c, trace = minimize(c0, max_iters=5, grad_tol=1e-8, precondition=False)
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert trace[-1] < trace[0]


def test_minimize_nonfinite_start_raises():
    from ncym import NonFiniteValue

    th = theta2()
    huge = TorusElement.monomial(th, (1, 0), 1e200)
    c0 = Connection(th, 1, [TorusMatrix.zeros(th, 1), TorusMatrix.from_element(huge - huge.adjoint())])
    with pytest.raises(NonFiniteValue):
        minimize(c0, max_iters=3)


def test_directional_derivative_rejects_bad_step():
    from ncym import DomainError

    th = theta2()
    flat = Connection.flat(th, 1)
    zero = Perturbation([TorusMatrix.zeros(th, 1), TorusMatrix.zeros(th, 1)])
    with pytest.raises(DomainError):
        directional_derivative(flat, zero, h=0.0)


def test_degenerate_one_torus():
    th = ThetaMatrix.zeros(1)
    u = TorusElement.generator(th, 1)
    c = Connection(th, 1, [TorusMatrix.from_element(u - u.adjoint())])
    assert curvature(c).table == {}
    assert ym_value(c) == 0.0
    assert gradient_norm(c) == 0.0
    _, trace = minimize(c)
    assert trace == [0.0]


def test_connection_serialization_round_trip():
    gen = sampling.rng(28)
    th = sampling.random_theta(2, gen)
    c = random_connection(th, 2, gen, radius=2, amplitude=0.3)
    payload = json.loads(json.dumps(c.to_payload()))
    back = Connection.from_payload(payload)
    assert back.theta == c.theta and back.q == c.q
    for a, b in zip(c.A, back.A):
        for ra, rb in zip(a.entries, b.entries):
            for x, y in zip(ra, rb):
                assert x.coeffs == y.coeffs
