"""Basis-pattern feasibility: verdict tables and the support-theorem scan.

A *basis pattern* is an ordered list of computational-basis kets, each
position carrying a complex coefficient slot constrained away from zero
(duplicate kets are allowed and are summed after assignment).  The
feasibility oracle decides, by seeded random-restart damped least
squares, whether a pattern pair admits coefficients satisfying the
marginal-equality system (and, for the support scan, the full masking
system with a non-orthogonality constraint).

Outcomes are three-way: Feasible carries an independently re-verified
witness; Infeasible means the best constrained residual stayed above a
floor over all restarts; anything else is Inconclusive.  Identical
config seeds give bit-identical outcomes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

import numpy as np

from . import conditions
from .qlinalg import QubitState, TwoQubitState

KET_LABELS = ("00", "01", "10", "11")

#: relative inflation of the nonzero floor inside the search, so that
#: witnesses still clear the exact floor after normalization
_DELTA_MARGIN = 1e-4

#: numeric slack when re-checking |coeff| >= delta on a witness
_CHECK_SLACK = 1e-12


@dataclass(frozen=True)
class BasisPattern:
    """An ordered list of 1-4 two-bit ket labels (duplicates allowed)."""

    kets: tuple[str, ...]

    def __post_init__(self):
        kets = tuple(self.kets)
        if not 1 <= len(kets) <= 4:
            raise ValueError(f"pattern needs 1-4 kets, got {len(kets)}")
        for k in kets:
            if k not in KET_LABELS:
                raise ValueError(f"unknown ket label {k!r}")
        object.__setattr__(self, "kets", kets)

    def __len__(self) -> int:
        return len(self.kets)

    @property
    def indices(self) -> tuple[int, ...]:
        """Basis index of each slot (2*bitA + bitB)."""
        return tuple(2 * int(k[0]) + int(k[1]) for k in self.kets)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.kets)

    def slot_matrix(self) -> np.ndarray:
        """(4, n) 0/1 matrix mapping slot coefficients to amplitudes."""
        S = np.zeros((4, len(self.kets)))
        for slot, idx in enumerate(self.indices):
            S[idx, slot] = 1.0
        return S


@dataclass(frozen=True)
class FeasibilityConfig:
    """Search configuration for the pattern feasibility oracle."""

    delta: float = 0.1
    restarts: int = 200
    iters: int = 2000
    tol: float = 1e-8
    infeasible_floor: float = 1e-6
    seed: int = 42

    def __post_init__(self):
        if not 0 < self.tol < self.infeasible_floor:
            raise ValueError("need 0 < tol < infeasible_floor")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.restarts < 1 or self.iters < 1:
            raise ValueError("restarts and iters must be >= 1")


class FeasibilityStatus(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Witness:
    """A verified solution: normalized states plus pre-merge coefficients."""

    psi0: TwoQubitState
    psi1: TwoQubitState
    coeffs0: tuple[complex, ...]
    coeffs1: tuple[complex, ...]
    b: QubitState | None = None


@dataclass(frozen=True)
class FeasibilityOutcome:
    status: FeasibilityStatus
    best_residual: float
    restarts_used: int
    witness: Witness | None = None


@dataclass(frozen=True)
class TableRow:
    """One fixture row: patterns plus the bundled expected verdict."""

    table: int
    index: int
    psi0_kets: tuple[str, ...]
    psi1_kets: tuple[str, ...]
    expected: str  # "mask" | "no"


@dataclass(frozen=True)
class TableRowResult:
    row: TableRow
    outcome: FeasibilityOutcome

    @property
    def agree(self) -> bool:
        if self.outcome.status is FeasibilityStatus.FEASIBLE:
            return self.row.expected == "mask"
        if self.outcome.status is FeasibilityStatus.INFEASIBLE:
            return self.row.expected == "no"
        return False  # Inconclusive never agrees


@dataclass(frozen=True)
class ScanViolation:
    """A feasible non-orthogonal pair whose ket-sets differ."""

    psi0_kets: tuple[str, ...]
    psi1_kets: tuple[str, ...]
    outcome: FeasibilityOutcome


def assemble(pattern: BasisPattern, coeffs) -> tuple[TwoQubitState, float]:
    """Sum slot coefficients onto the basis; returns (state, norm).

    Duplicate kets are summed after assignment, so pre-merge
    coefficients carry any nonzero constraints while merged amplitudes
    may vanish.  The state is returned unnormalized together with its
    norm.
    """
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if c.shape[0] != len(pattern):
        raise ValueError(
            f"pattern has {len(pattern)} slots, got {c.shape[0]} coefficients")
    merged = pattern.slot_matrix() @ c
    state = TwoQubitState.from_vec(merged, normalized=False)
    return state, float(np.linalg.norm(merged))


def duplicate_free_patterns() -> list[BasisPattern]:
    """The 15 duplicate-free patterns, ordered by length then labels."""
    out = []
    for mask in range(1, 16):
        kets = tuple(k for i, k in enumerate(KET_LABELS) if mask >> i & 1)
        out.append(BasisPattern(kets))
    out.sort(key=lambda p: (len(p), p.kets))
    return out


# ---------------------------------------------------------------------------
# residual systems (batched over restarts)
# ---------------------------------------------------------------------------

def _complex_slots(theta: np.ndarray, start: int, n: int) -> np.ndarray:
    """View 2n consecutive reals of theta (..., p) as n complex slots."""
    t = theta[..., start:start + 2 * n]
    return t[..., 0::2] + 1j * t[..., 1::2]


class _PairSystem:
    """Residual system for one pattern pair, optionally with the qubit.

    Parameters are the interleaved re/im of the pre-merge slots of both
    patterns, followed (full system only) by re/im of alpha0, alpha1.
    Component weighting makes the squared residual norm equal
    rA^2 + rB^2 (+ cross norms) + penalty terms.
    """

    def __init__(self, p0: BasisPattern, p1: BasisPattern,
                 delta: float, full: bool):
        self.n0 = len(p0)
        self.n1 = len(p1)
        self.S0 = p0.slot_matrix()
        self.S1 = p1.slot_matrix()
        self.full = full
        self.delta_opt = delta * (1.0 + _DELTA_MARGIN)
        self.n_params = 2 * (self.n0 + self.n1) + (4 if full else 0)

    def residuals(self, theta: np.ndarray) -> np.ndarray:
        z0 = _complex_slots(theta, 0, self.n0)
        z1 = _complex_slots(theta, 2 * self.n0, self.n1)
        c0 = z0 @ self.S0.T
        c1 = z1 @ self.S1.T
        M0 = c0.reshape(*c0.shape[:-1], 2, 2)
        M1 = c1.reshape(*c1.shape[:-1], 2, 2)

        # marginal differences: Tr_B = M M^dag, Tr_A = M^T conj(M)
        trB0 = np.einsum("...ij,...kj->...ik", M0, M0.conj())
        trB1 = np.einsum("...ij,...kj->...ik", M1, M1.conj())
        trA0 = np.einsum("...ji,...jk->...ik", M0, M0.conj())
        trA1 = np.einsum("...ji,...jk->...ik", M1, M1.conj())
        parts = [_hermitian_components(trA0 - trA1),
                 _hermitian_components(trB0 - trB1)]

        # unit-norm penalties and nonzero floors on pre-merge slots
        parts.append(_norm_residual(c0))
        parts.append(_norm_residual(c1))
        parts.append(_floor_hinge(z0, self.delta_opt))
        parts.append(_floor_hinge(z1, self.delta_opt))

        if self.full:
            al = _complex_slots(theta, 2 * (self.n0 + self.n1), 2)
            z = al[..., 0] * al[..., 1].conj()
            tA = np.einsum("...ji,...jk->...ik", M0, M1.conj())
            tB = np.einsum("...ij,...kj->...ik", M0, M1.conj())
            crossA = z[..., None, None] * tA \
                + z.conj()[..., None, None] * np.swapaxes(tA, -1, -2).conj()
            crossB = z[..., None, None] * tB \
                + z.conj()[..., None, None] * np.swapaxes(tB, -1, -2).conj()
            parts.append(_hermitian_components(crossA))
            parts.append(_hermitian_components(crossB))
            parts.append(_norm_residual(al))
            parts.append(_floor_hinge(al, self.delta_opt))
            # non-orthogonality: |<Psi0|Psi1>| >= delta
            ov = np.abs(np.einsum("...i,...i->...", c0.conj(), c1))
            parts.append(np.maximum(0.0, self.delta_opt - ov)[..., None])

        return np.concatenate(parts, axis=-1)

    def initial_points(self, seed: int, restarts: int) -> np.ndarray:
        """Per-restart starts keyed by (seed, restart index)."""
        theta = np.empty((restarts, self.n_params))
        n_slots = self.n0 + self.n1
        for k in range(restarts):
            rng = np.random.default_rng(np.random.SeedSequence((seed, k)))
            mag = 0.35 + 0.5 * rng.random(n_slots)
            phase = 2.0 * math.pi * rng.random(n_slots)
            z = mag * np.exp(1j * phase)
            theta[k, 0:2 * n_slots:2] = z.real
            theta[k, 1:2 * n_slots:2] = z.imag
            if self.full:
                a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                a /= np.linalg.norm(a)
                theta[k, 2 * n_slots::2] = a.real
                theta[k, 2 * n_slots + 1::2] = a.imag
        return theta


def _hermitian_components(H: np.ndarray) -> np.ndarray:
    """4 reals per 2x2 Hermitian slice; squared sum = Frobenius^2."""
    return np.stack([
        H[..., 0, 0].real,
        H[..., 1, 1].real,
        math.sqrt(2.0) * H[..., 0, 1].real,
        math.sqrt(2.0) * H[..., 0, 1].imag,
    ], axis=-1)


def _norm_residual(c: np.ndarray) -> np.ndarray:
    return (np.einsum("...i,...i->...", c.conj(), c).real - 1.0)[..., None]


def _floor_hinge(z: np.ndarray, delta: float) -> np.ndarray:
    return np.maximum(0.0, delta - np.abs(z))


# ---------------------------------------------------------------------------
# batched damped least squares
# ---------------------------------------------------------------------------

_FD_STEP = 1e-6          # central differences are exact for these
_STEP_STOP = 1e-13       # stop when the accepted step is this small
_OBJ_STOP = 1e-28        # or the objective this small
_LAMBDA_MAX = 1e12       # or damping has grown hopeless


def _minimize_batch(system: _PairSystem, theta: np.ndarray,
                    iters: int) -> np.ndarray:
    """Damped least squares on every restart row of ``theta`` at once."""
    R, p = theta.shape
    lam = np.full(R, 1e-3)
    active = np.ones(R, dtype=bool)
    r = system.residuals(theta)
    obj = np.einsum("rm,rm->r", r, r)
    eye = np.eye(p)

    for _ in range(iters):
        if not active.any():
            break
        th_a = theta[active]
        # central-difference Jacobian, batched over restarts and params
        pert = th_a[None, None, :, :] \
            + (_FD_STEP * np.array([1.0, -1.0]))[:, None, None, None] \
            * eye[None, :, None, :]
        rp = system.residuals(pert.reshape(-1, p))
        rp = rp.reshape(2, p, th_a.shape[0], -1)
        J = (rp[0] - rp[1]).transpose(1, 2, 0) / (2.0 * _FD_STEP)

        r_a = r[active]
        g = np.einsum("rmp,rm->rp", J, r_a)
        H = np.einsum("rmp,rmq->rpq", J, J)
        diag = np.einsum("rpp->rp", H)
        damped = H + lam[active, None, None] * \
            (diag[:, :, None] * eye[None]) + 1e-12 * eye[None]
        try:
            step = np.linalg.solve(damped, -g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(
                damped.reshape(-1, p, p)[0], -g[0], rcond=None)[0][None]

        trial = th_a + step
        r_t = system.residuals(trial)
        obj_t = np.einsum("rm,rm->r", r_t, r_t)
        better = obj_t < obj[active]

        idx = np.flatnonzero(active)
        acc = idx[better]
        rej = idx[~better]
        theta[acc] = trial[better]
        r[acc] = r_t[better]
        obj[acc] = obj_t[better]
        lam[acc] = np.maximum(lam[acc] / 3.0, 1e-12)
        lam[rej] *= 2.0

        step_norm = np.linalg.norm(step, axis=1)
        done = np.zeros(len(idx), dtype=bool)
        done[better] = (step_norm[better] < _STEP_STOP) \
            | (obj[acc] < _OBJ_STOP)
        done[~better] = lam[rej] > _LAMBDA_MAX
        active[idx[done]] = False

    return theta


# ---------------------------------------------------------------------------
# feasibility oracle
# ---------------------------------------------------------------------------

def _check_delta_domain(cfg: FeasibilityConfig, *patterns: BasisPattern):
    for p in patterns:
        if cfg.delta >= 1.0 / math.sqrt(len(p)):
            raise ValueError(
                f"delta {cfg.delta} too large for a {len(p)}-slot pattern")


def _project_slots(z: np.ndarray, S: np.ndarray,
                   delta: float) -> np.ndarray | None:
    """Nearest point with unit merged norm and every |slot| >= delta.

    Alternates clipping low slots up to the floor (phase preserved)
    with merged-state renormalization; converges geometrically.  Gives
    every restart a *constrained* candidate, so infeasible patterns
    report a finite best residual instead of rejecting everything.
    """
    z = np.array(z, dtype=np.complex128)
    target = delta * (1.0 + 1e-12)
    for _ in range(100):
        norm = float(np.linalg.norm(S @ z))
        if norm < 1e-12:
            return None  # hopeless duplicate-ket cancellation
        z = z / norm
        mag = np.abs(z)
        if (mag >= delta - _CHECK_SLACK).all():
            return z
        unit = np.where(mag > 1e-300, z / np.where(mag > 0, mag, 1.0), 1.0)
        z = np.where(mag < target, target * unit, z)
    return None


def _verify_candidate(p0: BasisPattern, p1: BasisPattern, theta: np.ndarray,
                      cfg: FeasibilityConfig, full: bool,
                      ) -> tuple[float, Witness] | None:
    """Re-check one candidate through `conditions` only.

    Returns (residual, witness) when the floor/normalization
    constraints hold, else None.  The residual is the max of the
    marginal distances (and, for the full system, the cross norms).
    """
    n0, n1 = len(p0), len(p1)
    z0 = _project_slots(_complex_slots(theta, 0, n0),
                        p0.slot_matrix(), cfg.delta)
    z1 = _project_slots(_complex_slots(theta, 2 * n0, n1),
                        p1.slot_matrix(), cfg.delta)
    if z0 is None or z1 is None:
        return None
    psi0 = TwoQubitState.unit(p0.slot_matrix() @ z0)
    psi1 = TwoQubitState.unit(p1.slot_matrix() @ z1)
    rA, rB = conditions.reduced_pair_residual(psi0, psi1)
    residual = max(rA, rB)
    b = None

    if full:
        al = _project_slots(_complex_slots(theta, 2 * (n0 + n1), 2),
                            np.eye(2), cfg.delta)
        if al is None:
            return None
        overlap = abs(complex(np.vdot(psi0.vec, psi1.vec)))
        if overlap < cfg.delta - _CHECK_SLACK:
            return None
        b = QubitState.normalized(complex(al[0]), complex(al[1]))
        for sub in ("A", "B"):
            cross = conditions.cross_term_matrix(psi0, psi1, b, sub)
            residual = max(residual, float(np.linalg.norm(cross)))

    witness = Witness(
        psi0=psi0, psi1=psi1,
        coeffs0=tuple(complex(v) for v in z0),
        coeffs1=tuple(complex(v) for v in z1),
        b=b,
    )
    return residual, witness


def _decide(p0: BasisPattern, p1: BasisPattern, cfg: FeasibilityConfig,
            full: bool) -> FeasibilityOutcome:
    _check_delta_domain(cfg, p0, p1)
    system = _PairSystem(p0, p1, cfg.delta, full)
    theta = system.initial_points(cfg.seed, cfg.restarts)
    theta = _minimize_batch(system, theta, cfg.iters)

    best_residual = math.inf
    best_witness = None
    for k in range(cfg.restarts):  # restart-index order => deterministic
        checked = _verify_candidate(p0, p1, theta[k], cfg, full)
        if checked is None:
            continue
        residual, witness = checked
        if residual < best_residual:
            best_residual = residual
            best_witness = witness

    if best_residual <= cfg.tol:
        status = FeasibilityStatus.FEASIBLE
    elif best_residual >= cfg.infeasible_floor:
        status = FeasibilityStatus.INFEASIBLE
    else:
        status = FeasibilityStatus.INCONCLUSIVE
    return FeasibilityOutcome(
        status=status,
        best_residual=best_residual,
        restarts_used=cfg.restarts,
        witness=best_witness if status is FeasibilityStatus.FEASIBLE else None,
    )


def feasible_eq4(p0: BasisPattern, p1: BasisPattern,
                 cfg: FeasibilityConfig) -> FeasibilityOutcome:
    """Decide the eq4 (marginal-equality) system over nonzero slots.

    Searches for pre-merge coefficients with every |c| >= cfg.delta and
    both merged states unit norm such that the marginals of the two
    states coincide.  Feasible outcomes carry a witness whose residual
    was re-verified through `conditions` (never the optimizer state).
    """
    return _decide(p0, p1, cfg, full=False)


def feasible_full(p0: BasisPattern, p1: BasisPattern,
                  cfg: FeasibilityConfig) -> FeasibilityOutcome:
    """Decide the full masking system with a non-orthogonality constraint.

    On top of the eq4 search this adds the masked qubit (alpha0, alpha1)
    with |alpha_i| >= delta, the two eq3 cross-matrix systems, and
    |<Psi0|Psi1>| >= delta.
    """
    return _decide(p0, p1, cfg, full=True)


# ---------------------------------------------------------------------------
# fixture tables and the support scan
# ---------------------------------------------------------------------------

def fixture_path():
    return resources.files("qmask").joinpath("data/tables.fixture.json")


def load_table_fixture() -> list[TableRow]:
    """Load and validate the bundled verdict tables."""
    try:
        raw = json.loads(fixture_path().read_text())
    except FileNotFoundError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"fixture file is corrupt: {exc}") from exc
    if not isinstance(raw, list):
        raise ValueError("fixture file must hold a JSON array")
    rows: list[TableRow] = []
    counters: dict[int, int] = {}
    for entry in raw:
        try:
            table = int(entry["table"])
            p0 = tuple(entry["psi0_kets"])
            p1 = tuple(entry["psi1_kets"])
            expected = entry["expected"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed fixture row {entry!r}") from exc
        if expected not in ("mask", "no") or table not in (1, 2, 3, 4):
            raise ValueError(f"malformed fixture row {entry!r}")
        BasisPattern(p0), BasisPattern(p1)  # label validation
        counters[table] = counters.get(table, 0) + 1
        rows.append(TableRow(table, counters[table], p0, p1, expected))
    return rows


def reproduce_table(n: int, cfg: FeasibilityConfig) -> list[TableRowResult]:
    """Run the eq4 oracle on every bundled row of table ``n``.

    Results keep fixture order; each carries the computed outcome so a
    disagreement always ships evidence (a witness for rows we find
    feasible, the best residual for rows we find infeasible).
    """
    if n not in (1, 2, 3, 4):
        raise ValueError(f"table must be 1-4, got {n}")
    results = []
    for row in load_table_fixture():
        if row.table != n:
            continue
        outcome = feasible_eq4(BasisPattern(row.psi0_kets),
                               BasisPattern(row.psi1_kets), cfg)
        results.append(TableRowResult(row=row, outcome=outcome))
    return results


def support_theorem_scan(cfg: FeasibilityConfig) -> list[ScanViolation]:
    """Scan all ordered duplicate-free pattern pairs for counterexamples.

    A violation is a pair with differing ket-sets that is Feasible for
    the full masking system under the non-orthogonality constraint
    |<Psi0|Psi1>| >= delta and |alpha_i| >= delta.
    """
    violations = []
    pats = duplicate_free_patterns()
    for p0 in pats:
        for p1 in pats:
            outcome = feasible_full(p0, p1, cfg)
            if (outcome.status is FeasibilityStatus.FEASIBLE
                    and p0.support != p1.support):
                violations.append(ScanViolation(
                    psi0_kets=p0.kets, psi1_kets=p1.kets, outcome=outcome))
    return violations
