"""Dense complex linear algebra for one- and two-qubit systems.

Fixes the conventions used by every other module:

* two-qubit basis order |00>, |01>, |10>, |11>, index = 2*bitA + bitB,
  first bit = subsystem A;
* partial traces as linear maps on 4x4 operators, with
  Tr_B acting on the A side and Tr_A acting on the B side;
* absolute Frobenius tolerances (amplitudes here are O(1)).

Normalization is validated, never silently re-imposed; use the
``normalized`` constructors when a vector needs rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Complex scalars are plain Python/numpy complex numbers.
Complex = complex

# Mat2 / Mat4: row-major complex ndarrays of shape (2, 2) / (4, 4).
Mat2 = np.ndarray
Mat4 = np.ndarray

#: tolerance for unit-norm validation of constructed states
NORM_TOL = 1e-12

#: default tolerance for residual comparisons
DEFAULT_TOL = 1e-9


def _check_finite(values, what: str) -> None:
    arr = np.asarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} must be finite, got {values!r}")


@dataclass(frozen=True)
class QubitState:
    """A single-qubit state alpha0|0> + alpha1|1>, validated unit norm."""

    alpha0: Complex
    alpha1: Complex

    def __post_init__(self):
        _check_finite((self.alpha0, self.alpha1), "qubit amplitudes")
        n2 = abs(self.alpha0) ** 2 + abs(self.alpha1) ** 2
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"qubit state not normalized: |alpha|^2 = {n2!r}")

    @classmethod
    def normalized(cls, alpha0: Complex, alpha1: Complex) -> "QubitState":
        """Rescale (alpha0, alpha1) to unit norm and construct."""
        _check_finite((alpha0, alpha1), "qubit amplitudes")
        n = float(np.hypot(abs(alpha0), abs(alpha1)))
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(alpha0) / n, complex(alpha1) / n)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1], dtype=np.complex128)


@dataclass(frozen=True)
class TwoQubitState:
    """A two-qubit vector in the fixed |00>,|01>,|10>,|11> order.

    Unit norm is validated unless ``normalized=False``; unnormalized
    instances are meant only as intermediate superpositions.
    """

    c00: Complex
    c01: Complex
    c10: Complex
    c11: Complex
    normalized: bool = True

    def __post_init__(self):
        _check_finite((self.c00, self.c01, self.c10, self.c11),
                      "two-qubit amplitudes")
        if self.normalized:
            n2 = sum(abs(c) ** 2 for c in self.amplitudes)
            if abs(n2 - 1.0) > NORM_TOL:
                raise ValueError(
                    f"two-qubit state not normalized: |c|^2 = {n2!r}")

    @classmethod
    def from_vec(cls, vec, normalized: bool = True) -> "TwoQubitState":
        v = np.asarray(vec, dtype=np.complex128).reshape(4)
        return cls(complex(v[0]), complex(v[1]), complex(v[2]), complex(v[3]),
                   normalized=normalized)

    @classmethod
    def unit(cls, vec) -> "TwoQubitState":
        """Rescale ``vec`` to unit norm and construct."""
        v = np.asarray(vec, dtype=np.complex128).reshape(4)
        _check_finite(v, "two-qubit amplitudes")
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls.from_vec(v / n)

    @property
    def amplitudes(self) -> tuple[Complex, Complex, Complex, Complex]:
        return (self.c00, self.c01, self.c10, self.c11)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=np.complex128)

    @property
    def mat(self) -> np.ndarray:
        """2x2 amplitude matrix M with M[i, j] = amplitude of |i>_A |j>_B."""
        return self.vec.reshape(2, 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))


@dataclass(frozen=True)
class ReducedState:
    """A 2x2 marginal produced by a partial trace of |Psi><Psi|.

    Validates hermiticity and that the trace equals the squared norm of
    the traced state.
    """

    m: Mat2
    traced_norm2: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"reduced state must be 2x2, got {m.shape}")
        _check_finite(m, "reduced state entries")
        if frob_dist(m, m.conj().T) > NORM_TOL:
            raise ValueError("reduced state is not Hermitian")
        if abs(m.trace().real - self.traced_norm2) > NORM_TOL:
            raise ValueError(
                f"trace {m.trace()!r} != traced-state norm^2 "
                f"{self.traced_norm2!r}")
        object.__setattr__(self, "m", m)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def outer(u: TwoQubitState, v: TwoQubitState) -> Mat4:
    """|u><v| as a 4x4 matrix: entry (i, j) = u_i * conj(v_j)."""
    return np.outer(u.vec, v.vec.conj())


def ptrace_A(M: Mat4) -> Mat2:
    """Trace out subsystem A (first bit), leaving a B-side 2x2 operator.

    Linear extension of Tr_A(|i1 i2><j1 j2|) = delta_{i1 j1} |i2><j2|;
    the (0,0) entry of Tr_A(|Psi0><Psi1|) is a0*conj(b0) + a2*conj(b2).
    """
    R = np.asarray(M, dtype=np.complex128).reshape(2, 2, 2, 2)
    return np.einsum("abad->bd", R)


def ptrace_B(M: Mat4) -> Mat2:
    """Trace out subsystem B (second bit), leaving an A-side 2x2 operator."""
    R = np.asarray(M, dtype=np.complex128).reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", R)


def frob_dist(M1, M2) -> float:
    """Frobenius norm of M1 - M2."""
    return float(np.linalg.norm(np.asarray(M1) - np.asarray(M2)))


def is_unitary(M: Mat4, tol: float = NORM_TOL) -> bool:
    """True iff ||M^dagger M - I||_F <= tol."""
    M = np.asarray(M, dtype=np.complex128)
    eye = np.eye(M.shape[0], dtype=np.complex128)
    return frob_dist(M.conj().T @ M, eye) <= tol


# Convenience kets in the fixed basis order.
def basis_ket(label: str) -> TwoQubitState:
    """The computational ket for a two-bit label, e.g. ``basis_ket("01")``."""
    if label not in ("00", "01", "10", "11"):
        raise ValueError(f"unknown basis label {label!r}")
    v = np.zeros(4, dtype=np.complex128)
    v[2 * int(label[0]) + int(label[1])] = 1.0
    return TwoQubitState.from_vec(v)
