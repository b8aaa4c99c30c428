"""QCQP problem data and Lagrangian aggregation.

A problem is min q_obj(x) subject to q_i(x) <= 0, with every q given by
q(x) = x'Ax + 2b'x + c.  Its epigraph lives in (x, t) with the objective
measured as 2t.  Aggregation maps combine the quadratics with multipliers
(gamma_obj, gamma); coordinate 0 of every (1+m)-vector is the objective.
"""

from dataclasses import dataclass

import numpy as np

# Construction-time symmetry tolerance (relative).
SYMMETRY_TOL = 1e-12
# Structure-verification tolerance (relative).
STRUCTURE_TOL = 1e-12
# Default epigraph feasibility tolerance (absolute and relative parts).
FEAS_TOL = 1e-8


class Generic:
    def __repr__(self):
        return "Generic"

    def __eq__(self, other):
        return isinstance(other, Generic)


class Diagonal:
    def __repr__(self):
        return "Diagonal"

    def __eq__(self, other):
        return isinstance(other, Diagonal)


@dataclass(frozen=True)
class Kronecker:
    """All coefficient matrices are I_k kron B for r x r blocks B."""

    r: int
    k: int

    def __repr__(self):
        return f"Kronecker(r={self.r}, k={self.k})"


class QuadraticForm:
    """q(x) = x'Ax + 2b'x + c with A exactly symmetric after construction."""

    def __init__(self, A, b, c):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        scale = max(1.0, np.linalg.norm(A))
        defect = np.linalg.norm(A - A.T) / scale
        if defect > 1e3 * SYMMETRY_TOL:
            raise ValueError(f"A is grossly asymmetric (relative defect {defect:.3e})")
        self.A = 0.5 * (A + A.T)
        self.asymmetry_defect = float(defect)
        self.b = np.asarray(b, dtype=float).reshape(-1)
        if self.b.shape[0] != A.shape[0]:
            raise ValueError("b length does not match A")
        self.c = float(c)

    @property
    def n(self):
        return self.A.shape[0]

    def __call__(self, x):
        return evaluate(self, x)

    def norm(self):
        return max(np.linalg.norm(self.A), np.linalg.norm(self.b), abs(self.c))

    def is_zero(self, tol=1e-14):
        return self.norm() <= tol

    def __repr__(self):
        return f"QuadraticForm(n={self.n})"


def evaluate(q, x):
    """x'Ax + 2b'x + c."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != q.n:
        raise ValueError(f"x has length {x.shape[0]}, expected {q.n}")
    return float(x @ q.A @ x + 2.0 * q.b @ x + q.c)


@dataclass
class MultiplierPoint:
    """A nonnegative multiplier (gamma_obj, gamma) in R_+ x R_+^m."""

    gamma_obj: float
    gamma: np.ndarray

    def __post_init__(self):
        self.gamma_obj = float(self.gamma_obj)
        self.gamma = np.asarray(self.gamma, dtype=float).reshape(-1)
        if self.gamma_obj < 0 or np.any(self.gamma < 0):
            raise ValueError("multipliers must be componentwise nonnegative")

    def as_vector(self):
        return np.concatenate(([self.gamma_obj], self.gamma))


@dataclass
class EpigraphPoint:
    """A point (x, t); objective value at x is compared against 2t."""

    x: np.ndarray
    t: float

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(-1)
        self.t = float(self.t)

    def as_vector(self):
        return np.concatenate((self.x, [self.t]))


class QCQP:
    """Immutable problem data for a QCQP with m >= 1 constraints."""

    def __init__(self, q_obj, constraints, structure=None):
        constraints = list(constraints)
        if len(constraints) < 1:
            raise ValueError("need at least one constraint")
        n = q_obj.n
        for q in constraints:
            if q.n != n:
                raise ValueError("all forms must share the dimension")
        self.q_obj = q_obj
        self.constraints = constraints
        self.n = n
        self.m = len(constraints)
        if structure is None:
            structure = detect_structure(self)
        else:
            verify_structure(self, structure)
        self.structure = structure
        self._scale = max(
            1.0,
            max(max(np.linalg.norm(q.A), np.linalg.norm(q.b), abs(q.c))
                for q in self.forms()),
        )

    def forms(self):
        """All 1+m forms, objective first."""
        return [self.q_obj] + self.constraints

    @property
    def scale(self):
        return self._scale

    def __repr__(self):
        return f"QCQP(n={self.n}, m={self.m}, structure={self.structure!r})"


def is_diagonal(p, tol=STRUCTURE_TOL):
    for q in p.forms():
        off = q.A - np.diag(np.diag(q.A))
        if np.abs(off).max(initial=0.0) > tol * max(1.0, np.linalg.norm(q.A)):
            return False
    return True


def kronecker_blocks(A, r, k, tol=STRUCTURE_TOL):
    """Return the r x r block B if A == I_k kron B within tolerance, else None."""
    n = A.shape[0]
    if r * k != n:
        return None
    blocks = A.reshape(k, r, k, r).transpose(0, 2, 1, 3)
    avg = np.mean([blocks[j, j] for j in range(k)], axis=0)
    rebuilt = np.kron(np.eye(k), avg)
    if np.linalg.norm(A - rebuilt) <= tol * max(1.0, np.linalg.norm(A)):
        return avg
    return None


def kronecker_factorization(p, r, k, tol=STRUCTURE_TOL):
    """The r x r blocks of all 1+m forms under I_k kron B structure, or None."""
    out = []
    for q in p.forms():
        blk = kronecker_blocks(q.A, r, k, tol=tol)
        if blk is None:
            return None
        out.append(blk)
    return out


def detect_kronecker(p, tol=STRUCTURE_TOL):
    """Smallest r (largest k >= 2) such that every A_i = I_k kron B_i."""
    n = p.n
    for r in range(1, n):
        if n % r != 0:
            continue
        k = n // r
        if k < 2:
            break
        if kronecker_factorization(p, r, k, tol=tol) is not None:
            return Kronecker(r, k)
    return None


def detect_structure(p):
    if is_diagonal(p):
        return Diagonal()
    kron = detect_kronecker(p)
    if kron is not None:
        return kron
    return Generic()


def verify_structure(p, structure):
    if isinstance(structure, Generic):
        return
    if isinstance(structure, Diagonal):
        if not is_diagonal(p):
            raise ValueError("structure hint Diagonal does not verify")
        return
    if isinstance(structure, Kronecker):
        if structure.r * structure.k != p.n:
            raise ValueError("Kronecker dimensions do not multiply to n")
        if kronecker_factorization(p, structure.r, structure.k) is None:
            raise ValueError("structure hint Kronecker does not verify")
        return
    raise ValueError(f"unknown structure {structure!r}")


def aggregate(p, g):
    """gamma_obj * q_obj + sum_i gamma_i * q_i, componentwise over (A, b, c)."""
    if isinstance(g, MultiplierPoint):
        gamma_obj, gamma = g.gamma_obj, g.gamma
    else:
        vec = np.asarray(g, dtype=float).reshape(-1)
        gamma_obj, gamma = vec[0], vec[1:]
    gamma = np.asarray(gamma, dtype=float).reshape(-1)
    if gamma.shape[0] != p.m:
        raise ValueError(f"gamma has length {gamma.shape[0]}, expected {p.m}")
    A = gamma_obj * p.q_obj.A
    b = gamma_obj * p.q_obj.b
    c = gamma_obj * p.q_obj.c
    for gi, q in zip(gamma, p.constraints):
        A = A + gi * q.A
        b = b + gi * q.b
        c = c + gi * q.c
    return QuadraticForm(A, b, c)


def aggregate_normalized(p, gamma):
    """Aggregate with gamma_obj fixed to 1."""
    gamma = np.asarray(gamma, dtype=float).reshape(-1)
    return aggregate(p, np.concatenate(([1.0], gamma)))


def lagrangian_value(p, gamma, x):
    """q_obj(x) + sum_i gamma_i q_i(x)."""
    return evaluate(aggregate_normalized(p, gamma), x)


def q_vector(p, pt):
    """The (1+m)-vector (q_obj(x) - 2t, q_1(x), ..., q_m(x))."""
    vals = np.array([evaluate(q, pt.x) for q in p.forms()])
    vals[0] -= 2.0 * pt.t
    return vals


def feasibility_residual(p, pt, tol=FEAS_TOL):
    """(max violation, whether (x, t) is in the epigraph at tolerance).

    The tolerance is absolute plus relative to the coefficient scale.
    """
    vals = q_vector(p, pt)
    residual = float(np.max(vals))
    return residual, residual <= tol * (1.0 + p.scale)
