"""The orthogonal split-support specialization and its solution surfaces.

For pairs of the form ``Psi0 = a0|00> + a1|11>`` and
``Psi1 = b0|01> + b1|10>`` the masking system reduces to three lines
(numbered eq9 here):

1. ``|a0|^2 = |a1|^2 = |b0|^2 = |b1|^2 = 1/2``,
2. ``alpha0 alpha1* a0 b0* + alpha0* alpha1 a1* b1 = 0``,
3. ``alpha0 alpha1* a0 b1* + alpha0* alpha1 a1* b0 = 0``.

Two worked families ("example 1" and "example 2") fix one side of the
problem and sample the residual zero set of the other side over a cube,
emitting CSV point clouds.  ``complete_masker_unitary`` extends an
orthogonal pair to the full 4x4 unitary that realizes the hiding map.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .qlinalg import (
    Complex,
    Mat4,
    NORM_TOL,
    QubitState,
    TwoQubitState,
    frob_dist,
)

#: branch labels for the eliminated sign in the example-1 parameterization
BRANCHES = ("plus", "minus")

#: header used by every surface CSV
SURFACE_CSV_HEADER = ("coord1", "coord2", "coord3", "residual", "branch")

SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class OrthoPairParams:
    """Coefficients of the split-support pair a0|00>+a1|11>, b0|01>+b1|10>."""

    a0: Complex
    a1: Complex
    b0: Complex
    b1: Complex

    def __post_init__(self):
        for (u, v), what in (((self.a0, self.a1), "a"),
                             ((self.b0, self.b1), "b")):
            n2 = abs(u) ** 2 + abs(v) ** 2
            if abs(n2 - 1.0) > NORM_TOL:
                raise ValueError(
                    f"|{what}0|^2 + |{what}1|^2 = {n2!r}, expected 1")

    def states(self) -> tuple[TwoQubitState, TwoQubitState]:
        psi0 = TwoQubitState(self.a0, 0.0, 0.0, self.a1)
        psi1 = TwoQubitState(0.0, self.b0, self.b1, 0.0)
        return psi0, psi1


@dataclass(frozen=True)
class Example1Point:
    """A point of the example-1 parameter cube.

    ``alpha0 = x0 + y0 i`` and ``alpha1 = x1 + y1 i`` with
    ``y1 = +-sqrt(1 - (x0^2 + y0^2 + x1^2))``; ``branch`` picks the sign.
    """

    x0: float
    y0: float
    x1: float
    branch: str

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")
        if self.radius2() > 1.0:
            raise ValueError(
                f"x0^2 + y0^2 + x1^2 = {self.radius2()!r} > 1: "
                "outside the square-root domain")

    def radius2(self) -> float:
        return self.x0 ** 2 + self.y0 ** 2 + self.x1 ** 2

    def y1(self) -> float:
        root = math.sqrt(1.0 - self.radius2())
        return root if self.branch == "plus" else -root

    def qubit(self) -> QubitState:
        return QubitState(complex(self.x0, self.y0),
                          complex(self.x1, self.y1()))


@dataclass(frozen=True)
class Example2Params:
    """Coefficients of the example-2 system in real/imaginary parts.

    ``a0 = x0 + y0 i``, ``a1 = x1 + y1 i``, ``b0 = x2 + y2 i``,
    ``b1 = x3 + y3 i``; ``lam`` is the masked qubit's parameter
    (``alpha0 = 1/sqrt(1+lam^2)``, ``alpha1 = i lam/sqrt(1+lam^2)``);
    ``sign`` picks between the two solution families.
    """

    lam: float
    x0: float
    y0: float
    x1: float
    y1: float
    x2: float
    y2: float
    x3: float
    y3: float
    sign: str = "plus"

    def __post_init__(self):
        if self.sign not in BRANCHES:
            raise ValueError(f"sign must be one of {BRANCHES}")


@dataclass(frozen=True)
class SurfacePoint:
    """One kept lattice point of a sampled residual zero set."""

    coordinates: tuple[float, float, float]
    residual: float
    branch: str

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be >= 0")


# ---------------------------------------------------------------------------
# eq9 and example 1
# ---------------------------------------------------------------------------

def eq9_residuals(p: OrthoPairParams, b: QubitState,
                  ) -> tuple[float, float, float]:
    """Residuals of the three eq9 lines.

    Line 1 is ``max_i ||c_i|^2 - 1/2|`` over the four coefficients;
    lines 2 and 3 are the magnitudes of the two cross scalars.
    """
    line1 = max(abs(abs(c) ** 2 - 0.5) for c in (p.a0, p.a1, p.b0, p.b1))
    z = b.alpha0 * b.alpha1.conjugate()
    zc = z.conjugate()
    line2 = abs(z * p.a0 * p.b0.conjugate()
                + zc * p.a1.conjugate() * p.b1)
    line3 = abs(z * p.a0 * p.b1.conjugate()
                + zc * p.a1.conjugate() * p.b0)
    return line1, line2, line3


#: the fixed pair used by the example-1 surface
EXAMPLE1_PAIR = OrthoPairParams(SQRT_HALF, SQRT_HALF * 1j,
                                SQRT_HALF, SQRT_HALF)


def example1_residual(pt: Example1Point) -> float:
    """|value| of the example-1 surface equation at ``pt``.

    With ``s = sqrt(1 - (x0^2 + y0^2 + x1^2))`` the equation reads
    ``x0 x1 + y0 s + x0 s - x1 y0 = 0`` on the plus branch and
    ``x0 x1 - y0 s - x0 s - x1 y0 = 0`` on the minus branch; these are
    the two sign resolutions of the phase condition (eq9 lines 2-3 for
    the fixed pair, called eq10/eq11/eq12 internally).
    """
    s = math.sqrt(1.0 - pt.radius2())
    if pt.branch == "plus":
        val = pt.x0 * pt.x1 + pt.y0 * s + pt.x0 * s - pt.x1 * pt.y0
    else:
        val = pt.x0 * pt.x1 - pt.y0 * s - pt.x0 * s - pt.x1 * pt.y0
    return abs(val)


def sample_example1(grid_n: int, branch: str, tol: float,
                    ) -> list[SurfacePoint]:
    """Scan the (x0, y0, x1) cube [-1,1]^3 on a grid_n^3 lattice.

    Keeps domain-valid points whose example-1 residual is <= tol, in
    lattice order (x0 outermost, x1 innermost).
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    axis = _axis(grid_n)
    x0, y0, x1 = np.meshgrid(axis, axis, axis, indexing="ij")
    r2 = x0 ** 2 + y0 ** 2 + x1 ** 2
    valid = r2 <= 1.0
    s = np.sqrt(np.where(valid, 1.0 - r2, 0.0))
    if branch == "plus":
        val = x0 * x1 + y0 * s + x0 * s - x1 * y0
    else:
        val = x0 * x1 - y0 * s - x0 * s - x1 * y0
    keep = valid & (np.abs(val) <= tol)
    points = []
    for i, j, k in np.argwhere(keep):
        points.append(SurfacePoint(
            coordinates=(float(axis[i]), float(axis[j]), float(axis[k])),
            residual=float(abs(val[i, j, k])),
            branch=branch,
        ))
    return points


# ---------------------------------------------------------------------------
# example 2
# ---------------------------------------------------------------------------

def example2_qubit(lam: float) -> QubitState:
    """The masked qubit of the example-2 family for parameter lam."""
    d = math.sqrt(1.0 + lam * lam)
    return QubitState(1.0 / d, complex(0.0, lam / d))


def eq13_residuals(p: Example2Params) -> tuple[float, ...]:
    """The five eq13 lines evaluated verbatim as absolute residuals."""
    x0, y0, x1, y1 = p.x0, p.y0, p.x1, p.y1
    x2, y2, x3, y3 = p.x2, p.y2, p.x3, p.y3
    line1 = max(abs(x ** 2 + y ** 2 - 0.5)
                for x, y in ((x0, y0), (x1, y1), (x2, y2), (x3, y3)))
    return (
        line1,
        abs(-x0 * x2 + x3 * x1 - y0 * y2 + y3 * y1),
        abs(-x0 * x3 + x2 * x1 - y0 * y3 + y2 * y1),
        abs(-x0 * y2 + x2 * y0 + x3 * y1 - x1 * y3),
        abs(x3 * y0 - x0 * y3 + x2 * y1 - x1 * y2),
    )


def build_example2_states(x0: float, y0: float, sign: str,
                          ) -> tuple[TwoQubitState, TwoQubitState]:
    """The example-2 solution pair for a point on the circle x0^2+y0^2=1/2.

    Returns ``Psi0 = (x0+y0 i)|00> +- (1/sqrt2)|11>`` and
    ``Psi1 = (x0+y0 i)|01> +- (1/sqrt2)|10>`` (sign "plus"/"minus").
    Raises if x0^2 + y0^2 differs from 1/2 by more than 1e-9.
    """
    if sign not in BRANCHES:
        raise ValueError(f"sign must be one of {BRANCHES}")
    if abs(x0 ** 2 + y0 ** 2 - 0.5) > 1e-9:
        raise ValueError(
            f"x0^2 + y0^2 = {x0 ** 2 + y0 ** 2!r}, expected 1/2")
    c = complex(x0, y0)
    w = SQRT_HALF if sign == "plus" else -SQRT_HALF
    psi0 = TwoQubitState(c, 0.0, 0.0, w)
    psi1 = TwoQubitState(0.0, c, w, 0.0)
    return psi0, psi1


def example2_residual(lam: float, x0: float, y0: float) -> float:
    """|(-x0^2 - y0^2 + 1/2) * lam / (1 + lam^2)| (the eq17 residual).

    Zero iff lam = 0 or x0^2 + y0^2 = 1/2.
    """
    return abs((-x0 * x0 - y0 * y0 + 0.5) * lam / (1.0 + lam * lam))


def sample_example2(grid_n: int, tol: float) -> list[SurfacePoint]:
    """Scan (lam, x0, y0) over [-1,1]^3, keeping eq17 residuals <= tol."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    axis = _axis(grid_n)
    lam, x0, y0 = np.meshgrid(axis, axis, axis, indexing="ij")
    val = np.abs((-x0 ** 2 - y0 ** 2 + 0.5) * lam / (1.0 + lam ** 2))
    keep = val <= tol
    points = []
    for i, j, k in np.argwhere(keep):
        points.append(SurfacePoint(
            coordinates=(float(axis[i]), float(axis[j]), float(axis[k])),
            residual=float(val[i, j, k]),
            branch="na",
        ))
    return points


def _axis(grid_n: int) -> np.ndarray:
    # (k - m)/m for k = 0..2m (odd grid_n) keeps 0 and +-0.5 exact in
    # binary; fall back to linspace spacing for even counts.
    half = (grid_n - 1) / 2.0
    return (np.arange(grid_n) - half) / half


# ---------------------------------------------------------------------------
# masker completion and CSV output
# ---------------------------------------------------------------------------

def complete_masker_unitary(psi0: TwoQubitState, psi1: TwoQubitState,
                            ) -> Mat4:
    """A 4x4 unitary F with F e0 = Psi0 and F e2 = Psi1.

    e0 = |0>|0> and e2 = |1>|0| are the input-side product states; the
    remaining two columns are filled by Gram-Schmidt over the canonical
    basis vectors in fixed order (rejection threshold 1e-8), making the
    completion deterministic.  Requires <Psi0|Psi1> = 0 within 1e-9 and
    unit norms.
    """
    _check_orthonormal_pair(psi0, psi1)
    cols = [psi0.vec, psi1.vec]
    for k in range(4):
        cand = np.zeros(4, dtype=np.complex128)
        cand[k] = 1.0
        for c in cols:
            cand = cand - c * np.vdot(c, cand)
        n = float(np.linalg.norm(cand))
        if n > 1e-8:
            cols.append(cand / n)
        if len(cols) == 4:
            break
    if len(cols) < 4:
        raise ValueError("orthonormal completion failed")
    F = np.empty((4, 4), dtype=np.complex128)
    F[:, 0] = cols[0]
    F[:, 2] = cols[1]
    F[:, 1] = cols[2]
    F[:, 3] = cols[3]
    return F


def _check_orthonormal_pair(psi0: TwoQubitState, psi1: TwoQubitState) -> None:
    if not (psi0.normalized and psi1.normalized):
        raise ValueError("expected normalized states")
    ov = complex(np.vdot(psi0.vec, psi1.vec))
    if abs(ov) > 1e-9:
        raise ValueError(f"states are not orthogonal: <Psi0|Psi1> = {ov!r}")


def write_surface_csv(points: list[SurfacePoint], path_or_file) -> None:
    """Write sampled points to CSV with the fixed surface header.

    Accepts a filesystem path or any object with a ``write`` method.
    Floats are written with ``repr`` (shortest round-trip form).
    """
    if hasattr(path_or_file, "write"):
        _write_surface_rows(points, path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write_surface_rows(points, fh)


def _write_surface_rows(points: list[SurfacePoint], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SURFACE_CSV_HEADER)
    for p in points:
        writer.writerow([repr(c) for c in p.coordinates]
                        + [repr(p.residual), p.branch])
