"""The algebra spanned by ``I, D, ..., D^n`` acting on polynomials of degree <= n.

An element ``T = a_0 I + a_1 D + ... + a_n D^n`` is a :class:`DAlgOperator`.
In the ``phi`` basis its matrix is upper triangular Toeplitz with first row
``(a_0, ..., a_n)``.  Arbitrary linear operators are :class:`MatrixOperator`
values whose column ``m`` holds the ``phi``-coordinates of ``T phi_m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Union

import numpy as np

from .errors import BadIndex, CapMismatch, NotInAlgebra, NotInvertible, PreconditionError
from .poly import Poly, from_phi, phi_coords
from .roots import find_roots

INVERTIBILITY_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class DAlgOperator:
    cap: int
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex).reshape(-1)
        if a.size != self.cap + 1:
            raise PreconditionError(f"expected {self.cap + 1} coefficients, got {a.size}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __matmul__(self, other: "DAlgOperator") -> "DAlgOperator":
        return compose(self, other)

    def __repr__(self):
        return f"DAlgOperator(cap={self.cap}, a={list(np.round(self.a, 12))})"

    @property
    def is_invertible(self) -> bool:
        return is_invertible(self)


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    cap: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (self.cap + 1, self.cap + 1):
            raise PreconditionError(
                f"matrix shape {m.shape} does not match cap {self.cap}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __call__(self, f: Poly) -> Poly:
        return apply_matrix(self, f)


Operator = Union[DAlgOperator, MatrixOperator]


def _same_cap(x, y):
    if x.cap != y.cap:
        raise CapMismatch(f"cap {x.cap} != cap {y.cap}")


def identity(n: int) -> DAlgOperator:
    a = np.zeros(n + 1, dtype=complex)
    a[0] = 1
    return DAlgOperator(n, a)


def apply(T: DAlgOperator, f: Poly) -> Poly:
    """``sum_k a_k D^k f``, computed on ``phi``-coordinates."""
    _same_cap(T, f)
    n = T.cap
    alpha = phi_coords(f)
    out = np.array([np.dot(T.a[:n + 1 - j], alpha[j:]) for j in range(n + 1)])
    return from_phi(n, out)


def apply_matrix(M: MatrixOperator, f: Poly) -> Poly:
    _same_cap(M, f)
    return from_phi(M.cap, M.entries @ phi_coords(f))


def apply_operator(op: Operator, f: Poly) -> Poly:
    if isinstance(op, DAlgOperator):
        return apply(op, f)
    return apply_matrix(op, f)


def matrix_of(T: DAlgOperator) -> MatrixOperator:
    """Upper triangular Toeplitz matrix: entry ``(j, m) = a_{m-j}``."""
    n = T.cap
    M = np.zeros((n + 1, n + 1), dtype=complex)
    for j in range(n + 1):
        M[j, j:] = T.a[:n + 1 - j]
    return MatrixOperator(n, M)


def as_matrix(op: Operator) -> MatrixOperator:
    return matrix_of(op) if isinstance(op, DAlgOperator) else op


def derivative_matrix(n: int) -> np.ndarray:
    """Matrix of ``D``: ``D phi_m = phi_{m-1}``."""
    return np.eye(n + 1, k=1, dtype=complex)


def membership(M: MatrixOperator, tol: float = 1e-10) -> DAlgOperator:
    """Recover ``T`` from its matrix, or raise :class:`NotInAlgebra`.

    Both tests must pass: ``M`` commutes with ``D`` and ``M`` equals the
    Toeplitz matrix built from its own first row.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    A = M.entries
    Dm = derivative_matrix(M.cap)
    scale = 1.0 + float(np.max(np.abs(A), initial=0.0))
    comm = float(np.max(np.abs(A @ Dm - Dm @ A), initial=0.0))
    T = DAlgOperator(M.cap, A[0, :])
    defect = float(np.max(np.abs(A - matrix_of(T).entries), initial=0.0))
    if comm > tol * scale or defect > tol * scale:
        raise NotInAlgebra(comm, defect)
    return T


def commutator_norm(M: MatrixOperator) -> float:
    A = M.entries
    Dm = derivative_matrix(M.cap)
    return float(np.max(np.abs(A @ Dm - Dm @ A), initial=0.0))


def compose(T1: DAlgOperator, T2: DAlgOperator) -> DAlgOperator:
    """``T1 T2``; the coefficient sequences convolve and ``D^{n+1} = 0`` truncates."""
    _same_cap(T1, T2)
    return DAlgOperator(T1.cap, np.convolve(T1.a, T2.a)[:T1.cap + 1])


def is_invertible(T: DAlgOperator) -> bool:
    a0 = abs(T.a[0])
    return a0 > 0 and a0 > INVERTIBILITY_RTOL * float(np.max(np.abs(T.a)))


def require_invertible(T: DAlgOperator):
    if not is_invertible(T):
        raise NotInvertible(f"a_0 = {T.a[0]} is zero at working precision")


def invert(T: DAlgOperator) -> DAlgOperator:
    """Inverse through the finite Neumann series of the nilpotent part."""
    require_invertible(T)
    n = T.cap
    a0 = T.a[0]
    q = -T.a / a0
    q[0] = 0.0                        # -N / a_0, nilpotent
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0
    term = out.copy()
    for _ in range(n):
        term = np.convolve(term, q)[:n + 1]
        out = out + term
    return DAlgOperator(n, out / a0)


def factor(T: DAlgOperator) -> tuple[complex, np.ndarray]:
    """``T = a_0 prod_j (I - gamma_j D)``.

    The ``gamma_j`` are the roots of ``a_0 z^n + a_1 z^{n-1} + ... + a_n``,
    padded with zeros when trailing ``a_k`` vanish.
    """
    require_invertible(T)
    n = T.cap
    if n == 0:
        return complex(T.a[0]), np.zeros(0, dtype=complex)
    rev = Poly(n, T.a[::-1])
    gammas = find_roots(rev).points
    return complex(T.a[0]), np.asarray(gammas)


def from_factors(a0: complex, gammas, n: int) -> DAlgOperator:
    out = np.zeros(n + 1, dtype=complex)
    out[0] = a0
    for g in gammas:
        out[1:] = out[1:] - g * out[:-1]
    return DAlgOperator(n, out)


def varpi(T: DAlgOperator) -> Poly:
    """``T phi_n``, i.e. ``a_0 phi_n + a_1 phi_{n-1} + ... + a_n phi_0``."""
    return from_phi(T.cap, T.a[::-1])


def varpi_inv(f: Poly) -> DAlgOperator:
    return DAlgOperator(f.cap, phi_coords(f)[::-1])


def shift_operator(alpha: complex, n: int) -> DAlgOperator:
    """``S(alpha) f = f(. + alpha) = sum_k alpha^k/k! D^k f``."""
    alpha = complex(alpha)
    return DAlgOperator(n, [alpha ** k / factorial(k) for k in range(n + 1)])


def hk_operator(k: int, gamma: complex, n: int) -> DAlgOperator:
    """``H_k(gamma) = I - gamma D^k``."""
    if not 1 <= k <= n:
        raise BadIndex(f"need 1 <= k <= n, got k={k}, n={n}")
    a = np.zeros(n + 1, dtype=complex)
    a[0] = 1.0
    a[k] = -complex(gamma)
    return DAlgOperator(n, a)


def scale(T: DAlgOperator, c: complex) -> DAlgOperator:
    return DAlgOperator(T.cap, T.a * complex(c))


# Operators outside the algebra.

def reflection_matrix(n: int) -> MatrixOperator:
    """``f -> f(-z)``; diagonal ``(-1)^k`` in the ``phi`` basis."""
    return MatrixOperator(n, np.diag((-1.0) ** np.arange(n + 1)).astype(complex))


def derivative_operator(n: int) -> MatrixOperator:
    return MatrixOperator(n, derivative_matrix(n))


def add_value_at_zero_matrix(n: int) -> MatrixOperator:
    """``f -> f + f(0) phi_n``."""
    if n < 1:
        raise BadIndex("need n >= 1")
    M = np.eye(n + 1, dtype=complex)
    M[n, 0] += 1.0
    return MatrixOperator(n, M)


def add_subleading_matrix(n: int) -> MatrixOperator:
    """``f -> f + (c_{n-1}/n) phi_0`` with ``c_{n-1}`` the monomial coefficient of ``z^{n-1}``."""
    if n < 1:
        raise BadIndex("need n >= 1")
    M = np.eye(n + 1, dtype=complex)
    # phi-coordinate of z^{n-1} is (n-1)! c_{n-1}; c_{n-1}/n = coord / n!
    M[0, n - 1] += 1.0 / factorial(n)
    return MatrixOperator(n, M)
