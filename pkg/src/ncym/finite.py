"""Operator-space calculus for finite-dimensional matrix spectral triples.

Computes the degree-1 and degree-2 form spaces
    Omega^1 = span{a [D, b]},
    pi(Omega^2) = span{a [D, b] [D, c]},
    junk = span{ sum [D, b_j][D, c_j] : sum b_j [D, c_j] = 0 },
their dimensions and the quotient Omega^2 = pi(Omega^2) / junk, as well as
product triples D = D1 (x) 1 + gamma1 (x) D2 and the decomposition /
hypothesis / orthogonality checks for them.

All subspaces live in the dim_h^2-dimensional operator space with the
Frobenius inner product; ranks are decided by SVD with relative threshold
``RANK_TOL`` and subspace equality means mutual containment with projection
residual at most ``CONTAIN_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AlreadyEven, InvalidTriple, MissingGrading, ZeroMu

RANK_TOL = 1e-10
CONTAIN_TOL = 1e-9
STRUCT_TOL = 1e-12

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _orthonormal_rows(vectors, rel_tol: float = RANK_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of the given vectors.

    ``scale`` overrides the reference magnitude for the rank cut; pass it when
    the vectors arise from cancellations so roundoff residue is not mistaken
    for span (default: largest singular value).
    """
    if len(vectors) == 0:
        return np.zeros((0, 0), dtype=complex)
    m = np.array(vectors, dtype=complex)
    if not m.any():
        return np.zeros((0, m.shape[1]), dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    ref = s[0] if scale is None else max(scale, 0.0)
    if ref == 0.0:
        return np.zeros((0, m.shape[1]), dtype=complex)
    rank = int(np.sum(s > rel_tol * ref))
    return vh[:rank]


class OperatorSubspace:
    """Subspace of the operator space, held as an orthonormal row basis."""

    def __init__(self, ambient_dim: int, basis: np.ndarray):
        basis = np.asarray(basis, dtype=complex)
        if basis.size == 0:
            basis = np.zeros((0, ambient_dim), dtype=complex)
        if basis.shape[1] != ambient_dim:
            raise ValueError("basis vectors have wrong ambient dimension")
        gram = basis @ basis.conj().T
        if basis.shape[0] and np.linalg.norm(gram - np.eye(basis.shape[0])) > 1e-10:
            raise ValueError("basis is not orthonormal")
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def span(cls, matrices, dim_h: int) -> "OperatorSubspace":
        vecs = [np.asarray(m, dtype=complex).reshape(-1) for m in matrices]
        basis = _orthonormal_rows(vecs)
        if basis.shape[0] == 0:
            basis = np.zeros((0, dim_h * dim_h), dtype=complex)
        return cls(dim_h * dim_h, basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def project(self, vec: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros_like(vec)
        coords = self.basis.conj() @ vec
        return self.basis.T @ coords

    def residual(self, matrix) -> float:
        vec = np.asarray(matrix, dtype=complex).reshape(-1)
        return float(np.linalg.norm(vec - self.project(vec)))

    def contains(self, matrix, tol: float = CONTAIN_TOL) -> bool:
        return self.residual(matrix) <= tol

    def matrices(self, dim_h: int):
        return [self.basis[i].reshape(dim_h, dim_h) for i in range(self.dim)]


def subspace_sum(ambient_dim: int, *spaces) -> OperatorSubspace:
    rows = [s.basis for s in spaces if s.dim > 0]
    if not rows:
        return OperatorSubspace(ambient_dim, np.zeros((0, ambient_dim), dtype=complex))
    return OperatorSubspace(ambient_dim, _orthonormal_rows(np.vstack(rows)))


def contains_subspace(big: OperatorSubspace, small: OperatorSubspace, tol: float = CONTAIN_TOL) -> bool:
    return all(
        float(np.linalg.norm(v - big.project(v))) <= tol for v in small.basis
    )


def subspaces_equal(a: OperatorSubspace, b: OperatorSubspace, tol: float = CONTAIN_TOL) -> bool:
    return contains_subspace(a, b, tol) and contains_subspace(b, a, tol)


def intersection_dim(a: OperatorSubspace, b: OperatorSubspace) -> int:
    return a.dim + b.dim - subspace_sum(a.ambient_dim, a, b).dim


class FiniteTriple:
    """Matrix spectral triple: algebra span, self-adjoint D, optional grading."""

    def __init__(self, dim_h: int, algebra_basis, D, gamma=None):
        self.dim_h = int(dim_h)
        self.algebra_basis = [np.asarray(a, dtype=complex) for a in algebra_basis]
        self.D = np.asarray(D, dtype=complex)
        self.gamma = None if gamma is None else np.asarray(gamma, dtype=complex)
        self._alg_span = OperatorSubspace.span(self.algebra_basis, self.dim_h)
        self._validate()

    @property
    def is_even(self) -> bool:
        return self.gamma is not None

    def _validate(self):
        d = self.dim_h
        for a in self.algebra_basis + [self.D]:
            if a.shape != (d, d):
                raise InvalidTriple(f"matrix of shape {a.shape}, expected {(d, d)}")
        if np.linalg.norm(self.D - self.D.conj().T) > STRUCT_TOL * max(1.0, np.linalg.norm(self.D)):
            raise InvalidTriple("D is not self-adjoint")
        span = self._alg_span
        if not span.contains(np.eye(d)):
            raise InvalidTriple("algebra span does not contain the identity")
        for a in self.algebra_basis:
            if not span.contains(a.conj().T):
                raise InvalidTriple("algebra span not closed under adjoint")
            for b in self.algebra_basis:
                if not span.contains(a @ b):
                    raise InvalidTriple("algebra span not closed under product")
        if self.gamma is not None:
            g = self.gamma
            if g.shape != (d, d):
                raise InvalidTriple("gamma has wrong shape")
            if np.linalg.norm(g - g.conj().T) > STRUCT_TOL:
                raise InvalidTriple("gamma is not self-adjoint")
            if np.linalg.norm(g @ g - np.eye(d)) > STRUCT_TOL:
                raise InvalidTriple("gamma^2 != 1")
            if np.linalg.norm(g @ self.D + self.D @ g) > STRUCT_TOL * max(1.0, np.linalg.norm(self.D)):
                raise InvalidTriple("gamma does not anticommute with D")
            for a in self.algebra_basis:
                if np.linalg.norm(g @ a - a @ g) > STRUCT_TOL * max(1.0, np.linalg.norm(a)):
                    raise InvalidTriple("gamma does not commute with the algebra")

    # -- serialization: matrices as row-major [re, im] pair arrays --------

    @staticmethod
    def _matrix_payload(m: np.ndarray):
        return [[float(v.real), float(v.imag)] for v in m.reshape(-1)]

    @staticmethod
    def _matrix_from_payload(payload, d: int) -> np.ndarray:
        flat = np.array([complex(re, im) for re, im in payload])
        if flat.size != d * d:
            raise InvalidTriple("matrix payload has wrong length")
        return flat.reshape(d, d)

    def to_payload(self) -> dict:
        payload = {
            "dim_h": self.dim_h,
            "algebra_basis": [self._matrix_payload(a) for a in self.algebra_basis],
            "D": self._matrix_payload(self.D),
        }
        if self.gamma is not None:
            payload["gamma"] = self._matrix_payload(self.gamma)
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "FiniteTriple":
        d = int(payload["dim_h"])
        basis = [cls._matrix_from_payload(a, d) for a in payload["algebra_basis"]]
        dmat = cls._matrix_from_payload(payload["D"], d)
        gamma = payload.get("gamma")
        if gamma is not None:
            gamma = cls._matrix_from_payload(gamma, d)
        return cls(d, basis, dmat, gamma)


# -- fixtures ---------------------------------------------------------------


def trivial_triple(graded: bool = True) -> FiniteTriple:
    """(C, C, D = 0), graded by 1 when asked."""
    one = np.array([[1.0 + 0j]])
    return FiniteTriple(1, [one], np.array([[0.0 + 0j]]), one if graded else None)


def matrix_case_triple(p: int, q: int, mu, graded: bool = True) -> FiniteTriple:
    """The two-block matrix triple: algebra M_p + M_q, off-diagonal Dirac.

    H = C^p (+) C^q, D = [[0, mu], [mu*, 0]] with mu a p x q coupling block,
    grading diag(1_p, -1_q).
    """
    mu = np.asarray(mu, dtype=complex).reshape(p, q)
    d = p + q
    basis = []
    for i in range(p):
        for j in range(p):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = 1.0
            basis.append(m)
    for i in range(q):
        for j in range(q):
            m = np.zeros((d, d), dtype=complex)
            m[p + i, p + j] = 1.0
            basis.append(m)
    dirac = np.zeros((d, d), dtype=complex)
    dirac[:p, p:] = mu
    dirac[p:, :p] = mu.conj().T
    gamma = None
    if graded:
        gamma = np.diag([1.0] * p + [-1.0] * q).astype(complex)
    return FiniteTriple(d, basis, dirac, gamma)


# -- form spaces -------------------------------------------------------------


def _commutators(t: FiniteTriple):
    return [t.D @ b - b @ t.D for b in t.algebra_basis]


def omega1_space(t: FiniteTriple) -> OperatorSubspace:
    """span{a [D, b]} over algebra basis pairs."""
    coms = _commutators(t)
    prods = [a @ db for a in t.algebra_basis for db in coms]
    return OperatorSubspace.span(prods, t.dim_h)


def pi_omega2_space(t: FiniteTriple) -> OperatorSubspace:
    """span{a [D, b] [D, c]} = span{omega [D, c] : omega in Omega^1}."""
    omega1 = omega1_space(t)
    coms = _commutators(t)
    prods = [w @ dc for w in omega1.matrices(t.dim_h) for dc in coms]
    return OperatorSubspace.span(prods, t.dim_h)


def junk_space(t: FiniteTriple) -> OperatorSubspace:
    """Images [D,b][D,c] of the relations sum b [D, c] = 0.

    Assembles the linear map (b, c) -> b [D, c] on basis pairs, extracts its
    kernel by SVD thresholding, and pushes each kernel vector through
    (b, c) -> [D, b] [D, c].
    """
    basis = t.algebra_basis
    coms = _commutators(t)
    nb = len(basis)
    rows = [(b @ dc).reshape(-1) for b in basis for dc in coms]
    m = np.array(rows, dtype=complex).T  # (d^2, nb^2): x -> sum x_ij vec(b_i [D,c_j])
    _, sv, vh = np.linalg.svd(m, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > RANK_TOL * smax)) if sv.size else 0
    kernel = vh[rank:].conj()  # rows x satisfy m @ x = 0
    products = [[coms[i] @ coms[j] for j in range(nb)] for i in range(nb)]
    images = []
    for x in kernel:
        acc = np.zeros((t.dim_h, t.dim_h), dtype=complex)
        for idx, coeff in enumerate(x):
            if coeff == 0:
                continue
            i, j = divmod(idx, nb)
            acc += coeff * products[i][j]
        images.append(acc)
    # cancellation sets the noise floor: rank cut against the raw product size
    scale = max((float(np.linalg.norm(p)) for row in products for p in row), default=0.0)
    basis_rows = _orthonormal_rows([im.reshape(-1) for im in images], scale=scale)
    if basis_rows.shape[0] == 0:
        return OperatorSubspace(t.dim_h * t.dim_h, basis_rows.reshape(0, t.dim_h * t.dim_h))
    return OperatorSubspace(t.dim_h * t.dim_h, basis_rows)


@dataclass
class FormReport:
    dim_omega1: int
    dim_pi_omega2: int
    dim_junk: int
    dim_omega2: int
    junk_projector: np.ndarray

    def to_payload(self) -> dict:
        return {
            "dim_omega1": self.dim_omega1,
            "dim_pi_omega2": self.dim_pi_omega2,
            "dim_junk": self.dim_junk,
            "dim_omega2": self.dim_omega2,
            "junk_projector": [
                [float(v.real), float(v.imag)] for v in np.asarray(self.junk_projector).reshape(-1)
            ],
        }


def form_report(t: FiniteTriple) -> FormReport:
    """Dimensions of Omega^1, pi(Omega^2), junk, and the quotient projector.

    The projector acts on pi(Omega^2) coordinates (in its orthonormal basis)
    and projects onto the orthogonal complement of the junk.
    """
    omega1 = omega1_space(t)
    pi2 = pi_omega2_space(t)
    junk = junk_space(t)
    if not contains_subspace(pi2, junk):
        raise InvalidTriple("junk space escaped pi(Omega^2); rank tolerances inconsistent")
    d2 = pi2.dim
    if junk.dim:
        coords = pi2.basis.conj() @ junk.basis.T  # (d2, dim_junk)
        proj = np.eye(d2, dtype=complex) - coords @ coords.conj().T
    else:
        proj = np.eye(d2, dtype=complex)
    return FormReport(omega1.dim, d2, junk.dim, d2 - junk.dim, proj)


# -- matrix-case classification ---------------------------------------------


class MatrixCase(Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    UNCLASSIFIED = "Unclassified"


def _proportional_to_identity(m: np.ndarray, tol: float = RANK_TOL) -> bool:
    d = m.shape[0]
    c = np.trace(m) / d
    return np.linalg.norm(m - c * np.eye(d)) <= tol * max(1.0, np.linalg.norm(m))


def classify_matrix_case(p: int, q: int, mu) -> MatrixCase:
    """Classify the coupling block by proportionality of mu* mu and mu mu* to 1."""
    mu = np.asarray(mu, dtype=complex).reshape(p, q)
    if np.linalg.norm(mu) <= RANK_TOL:
        raise ZeroMu("coupling matrix must be nonzero")
    left = _proportional_to_identity(mu @ mu.conj().T)    # mu mu*: p x p
    right = _proportional_to_identity(mu.conj().T @ mu)   # mu* mu: q x q
    if left and right:
        return MatrixCase.CASE1
    if not left and not right:
        return MatrixCase.CASE2
    if right and not left and q <= p:
        return MatrixCase.CASE3
    if left and not right and p <= q:
        # mirrored configuration: transpose swaps the two products
        return classify_matrix_case(q, p, mu.conj().T)
    return MatrixCase.UNCLASSIFIED


# -- products of triples ------------------------------------------------------


def double_odd(t: FiniteTriple) -> FiniteTriple:
    """Make an odd triple even on H (x) C^2 with D (x) sigma1, grading 1 (x) sigma3."""
    if t.gamma is not None:
        raise AlreadyEven("triple already carries a grading")
    eye2 = np.eye(2, dtype=complex)
    basis = [np.kron(a, eye2) for a in t.algebra_basis]
    d = np.kron(t.D, SIGMA1)
    gamma = np.kron(np.eye(t.dim_h, dtype=complex), SIGMA3)
    return FiniteTriple(2 * t.dim_h, basis, d, gamma)


def product_triple(t1: FiniteTriple, t2: FiniteTriple, auto_double: bool = True) -> FiniteTriple:
    """D = D1 (x) 1 + gamma1 (x) D2 on H1 (x) H2; even iff t2 is even."""
    if t1.gamma is None:
        if not auto_double:
            raise MissingGrading("first factor must be even (or allow auto-doubling)")
        t1 = double_odd(t1)
    eye2 = np.eye(t2.dim_h, dtype=complex)
    basis = [np.kron(a, b) for a in t1.algebra_basis for b in t2.algebra_basis]
    d = np.kron(t1.D, eye2) + np.kron(t1.gamma, t2.D)
    gamma = None
    if t2.gamma is not None:
        gamma = np.kron(t1.gamma, t2.gamma)
    return FiniteTriple(t1.dim_h * t2.dim_h, basis, d, gamma)


def swap_unitary(t1: FiniteTriple, t2: FiniteTriple) -> np.ndarray:
    """U = (1 + gamma1 (x) 1 + 1 (x) gamma2 - gamma1 (x) gamma2) / 2."""
    if t1.gamma is None or t2.gamma is None:
        raise MissingGrading("both factors must be even")
    e1 = np.eye(t1.dim_h, dtype=complex)
    e2 = np.eye(t2.dim_h, dtype=complex)
    return 0.5 * (
        np.kron(e1, e2)
        + np.kron(t1.gamma, e2)
        + np.kron(e1, t2.gamma)
        - np.kron(t1.gamma, t2.gamma)
    )


def unitary_equivalence_defect(t1: FiniteTriple, t2: FiniteTriple) -> float:
    """|| U D U* - D' || for D' = D1 (x) gamma2 + 1 (x) D2."""
    if t1.gamma is None or t2.gamma is None:
        raise MissingGrading("both factors must be even")
    u = swap_unitary(t1, t2)
    d = np.kron(t1.D, np.eye(t2.dim_h)) + np.kron(t1.gamma, t2.D)
    d_alt = np.kron(t1.D, t2.gamma) + np.kron(np.eye(t1.dim_h), t2.D)
    return float(np.linalg.norm(u @ d @ u.conj().T - d_alt))


# -- product decomposition checks ---------------------------------------------


def _embedded_legs(t1: FiniteTriple, t2: FiniteTriple):
    """Embedded span generators for the product form decompositions.

    The gamma1 twist sits where the product Leibniz rule puts it:
    second-slot 1-forms ride with gamma1 on the first slot.
    """
    if t1.gamma is None:
        raise MissingGrading("first factor must be even for the decomposition checks")
    d1, d2 = t1.dim_h, t2.dim_h
    o1_1 = omega1_space(t1).matrices(d1)
    o1_2 = omega1_space(t2).matrices(d2)
    p2_1 = pi_omega2_space(t1).matrices(d1)
    p2_2 = pi_omega2_space(t2).matrices(d2)
    j_1 = junk_space(t1).matrices(d1)
    j_2 = junk_space(t2).matrices(d2)
    g1 = t1.gamma
    legs = {
        "omega1_first": [np.kron(w, b) for w in o1_1 for b in t2.algebra_basis],
        "omega1_second": [np.kron(g1 @ a, w) for a in t1.algebra_basis for w in o1_2],
        "pi2_first": [np.kron(v, b) for v in p2_1 for b in t2.algebra_basis],
        "pi2_second": [np.kron(a, v) for a in t1.algebra_basis for v in p2_2],
        "one_one": [np.kron(g1 @ w1, w2) for w1 in o1_1 for w2 in o1_2],
        "junk_first": [np.kron(jm, b) for jm in j_1 for b in t2.algebra_basis],
        "junk_second": [np.kron(a, jm) for a in t1.algebra_basis for jm in j_2],
    }
    return legs


@dataclass
class DecompositionReport:
    omega1_ok: bool
    numerator_ok: bool
    denominator_ok: bool
    intersection_zero: bool
    dims: dict

    def all_ok(self) -> bool:
        return self.omega1_ok and self.numerator_ok and self.denominator_ok and self.intersection_zero


def decomposition_check(t1: FiniteTriple, t2: FiniteTriple) -> DecompositionReport:
    """Verify the product-triple form decompositions by explicit spans.

    omega1_ok: Omega^1 of the product equals the direct sum of the embedded
    factor legs; numerator_ok: pi(Omega^2) equals (pi2 legs sum) (+) the
    twisted Omega^1 (x) Omega^1 leg; denominator_ok: the product junk equals
    the sum of embedded factor junks; intersection_zero: junk meets the
    Omega^1 (x) Omega^1 leg trivially.
    """
    prod = product_triple(t1, t2, auto_double=False)
    dim = prod.dim_h
    amb = dim * dim
    legs = _embedded_legs(t1, t2)

    o1_prod = omega1_space(prod)
    leg1 = OperatorSubspace.span(legs["omega1_first"], dim)
    leg2 = OperatorSubspace.span(legs["omega1_second"], dim)
    o1_sum = subspace_sum(amb, leg1, leg2)
    omega1_ok = subspaces_equal(o1_prod, o1_sum) and o1_sum.dim == leg1.dim + leg2.dim

    pi2_prod = pi_omega2_space(prod)
    num_first = OperatorSubspace.span(legs["pi2_first"] + legs["pi2_second"], dim)
    num_cross = OperatorSubspace.span(legs["one_one"], dim)
    num_sum = subspace_sum(amb, num_first, num_cross)
    numerator_ok = (
        subspaces_equal(pi2_prod, num_sum)
        and num_sum.dim == num_first.dim + num_cross.dim
    )

    junk_prod = junk_space(prod)
    junk_sum = OperatorSubspace.span(legs["junk_first"] + legs["junk_second"], dim)
    denominator_ok = subspaces_equal(junk_prod, junk_sum)

    intersection_zero = intersection_dim(junk_prod, num_cross) == 0

    dims = {
        "omega1_product": o1_prod.dim,
        "omega1_leg_first": leg1.dim,
        "omega1_leg_second": leg2.dim,
        "pi_omega2_product": pi2_prod.dim,
        "pi_omega2_legs": num_first.dim,
        "omega1_x_omega1": num_cross.dim,
        "junk_product": junk_prod.dim,
        "junk_legs": junk_sum.dim,
    }
    return DecompositionReport(omega1_ok, numerator_ok, denominator_ok, intersection_zero, dims)


@dataclass
class HypothesisReport:
    holds: bool
    dims: dict


def hypothesis_check(t1: FiniteTriple, t2: FiniteTriple) -> HypothesisReport:
    """Dimension test of the two-form splitting for the product triple.

    Compares dim Omega^2(product) against
    dim( (pi2 legs sum) / (junk legs sum) ) + dim Omega^1_1 * dim Omega^1_2.
    """
    prod = product_triple(t1, t2, auto_double=False)
    dim = prod.dim_h
    amb = dim * dim
    legs = _embedded_legs(t1, t2)
    rep = form_report(prod)

    num_first = OperatorSubspace.span(legs["pi2_first"] + legs["pi2_second"], dim)
    junk_sum = OperatorSubspace.span(legs["junk_first"] + legs["junk_second"], dim)
    if not contains_subspace(num_first, junk_sum):
        raise InvalidTriple("embedded junk legs escape the embedded pi(Omega^2) legs")
    quotient = num_first.dim - junk_sum.dim
    d1 = omega1_space(t1).dim
    d2 = omega1_space(t2).dim
    cross = OperatorSubspace.span(legs["one_one"], dim)
    rhs = quotient + d1 * d2
    dims = {
        "omega2_product": rep.dim_omega2,
        "pi_omega2_product": rep.dim_pi_omega2,
        "junk_product": rep.dim_junk,
        "pi_omega2_legs": num_first.dim,
        "junk_legs": junk_sum.dim,
        "quotient_legs": quotient,
        "omega1_1": d1,
        "omega1_2": d2,
        "omega1_x_omega1": cross.dim,
        "rhs": rhs,
    }
    return HypothesisReport(rep.dim_omega2 == rhs, dims)


def orthogonality_check(
    t1: FiniteTriple,
    t2: FiniteTriple,
    samples: int = 100,
    seed: int = 0,
    weight=None,
    tol: float = 1e-10,
) -> bool:
    """Sampled orthogonality of the twisted Omega^1 (x) Omega^1 leg.

    Draws xi from the gamma1-twisted cross leg and eta from the embedded
    pi(Omega^2) legs and checks Trace(xi* eta W) = 0; W defaults to the
    identity, for which the trace/grading argument makes the pairing vanish
    identically.
    """
    prod = product_triple(t1, t2, auto_double=False)
    dim = prod.dim_h
    legs = _embedded_legs(t1, t2)
    cross = OperatorSubspace.span(legs["one_one"], dim)
    other = OperatorSubspace.span(legs["pi2_first"] + legs["pi2_second"], dim)
    if cross.dim == 0 or other.dim == 0:
        return True
    w = np.eye(dim, dtype=complex) if weight is None else np.asarray(weight, dtype=complex)
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    xs = cross.matrices(dim)
    ys = other.matrices(dim)
    for _ in range(samples):
        cx = gen.normal(size=len(xs)) + 1j * gen.normal(size=len(xs))
        cy = gen.normal(size=len(ys)) + 1j * gen.normal(size=len(ys))
        xi = sum(c * m for c, m in zip(cx, xs))
        eta = sum(c * m for c, m in zip(cy, ys))
        xi = xi / max(np.linalg.norm(xi), 1e-300)
        eta = eta / max(np.linalg.norm(eta), 1e-300)
        if abs(np.trace(xi.conj().T @ eta @ w)) > tol:
            return False
    return True
