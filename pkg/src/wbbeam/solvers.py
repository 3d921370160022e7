"""Closed-form minimum-variance beamformer weights under distortionless constraints.

Two independent solution paths are provided for the multi-frequency problem

    minimize    w^H R w
    subject to  w^H A = B,

where the columns of A are the look-direction steering vectors at the
constraint frequencies and B holds the required response at each of them:

* ``mvmfdr_weights`` evaluates the Lagrangian closed form
  w = R^-1 A lam with lam = (A^H R^-1 A)^-1 B^H, using Hermitian
  positive-definite factorization solves (no explicit inverses).
* ``kkt_oracle`` assembles the full (N+K) x (N+K) stationarity/feasibility
  block system and solves it densely. It exists to catch algebra mistakes in
  the closed form and plays no part in it.

``mvdr_weights`` is the classic single-frequency special case with unit
response.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .arrays import ArrayGeometry, SteeringVector, steering_matrix
from .scenario import CovarianceMatrix

__all__ = [
    "NumericalRankError",
    "DegenerateConstraintsError",
    "ConstraintSet",
    "WeightVector",
    "mvdr_weights",
    "mvmfdr_weights",
    "kkt_oracle",
]


class NumericalRankError(Exception):
    """A matrix that must be positive definite is numerically singular."""


class DegenerateConstraintsError(Exception):
    """The constraint set is rank deficient (e.g. duplicated frequencies)."""


@dataclass(frozen=True)
class ConstraintSet:
    """Equality constraints w^H A = B for one look direction.

    ``steering_matrix`` is N x K with one unit-modulus steering vector per
    column; ``response`` is the length-K row B, all entries equal to the
    constraint gain b.
    """

    steering_matrix: np.ndarray
    response: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.steering_matrix, dtype=complex)
        resp = np.ascontiguousarray(self.response, dtype=complex)
        if mat.ndim != 2:
            raise ValueError(f"steering_matrix: expected 2-D, got shape {mat.shape}")
        n, k = mat.shape
        if k < 1:
            raise ValueError("steering_matrix: need at least one constraint column")
        if k > n:
            raise ValueError(
                f"steering_matrix: {k} constraints exceed {n} sensors; the problem is generically infeasible"
            )
        if np.max(np.abs(np.abs(mat) - 1.0)) > 1e-9:
            raise ValueError("steering_matrix: columns must be unit-modulus steering vectors")
        if resp.shape != (k,):
            raise ValueError(f"response: expected shape ({k},), got {resp.shape}")
        if np.any(resp != resp[0]):
            raise ValueError("response: all entries must equal the common constraint gain")
        if resp[0] == 0:
            raise ValueError("response: constraint gain must be nonzero")
        mat.flags.writeable = False
        resp.flags.writeable = False
        object.__setattr__(self, "steering_matrix", mat)
        object.__setattr__(self, "response", resp)

    @classmethod
    def for_direction(
        cls,
        geom: ArrayGeometry,
        theta_rad: float,
        freqs_hz,
        gain: complex = 1.0 + 0.0j,
    ) -> "ConstraintSet":
        """Constraints pinning the response toward ``theta_rad`` at each frequency."""
        freqs = np.atleast_1d(np.asarray(freqs_hz, dtype=float))
        if np.unique(freqs).size != freqs.size:
            raise DegenerateConstraintsError(
                "constraint frequencies contain duplicates; deduplicate them explicitly"
            )
        mat = steering_matrix(geom, theta_rad, freqs)
        return cls(steering_matrix=mat, response=np.full(freqs.size, complex(gain)))

    @property
    def num_sensors(self) -> int:
        return self.steering_matrix.shape[0]

    @property
    def num_constraints(self) -> int:
        return self.steering_matrix.shape[1]

    @property
    def gain(self) -> complex:
        return complex(self.response[0])


@dataclass(frozen=True)
class WeightVector:
    """Beamformer weights with the constraint set and multipliers that produced them.

    ``gram_condition`` is the condition number of A^H R^-1 A, a warning signal
    for closely spaced constraint frequencies (NaN when not computed).
    """

    weights: np.ndarray
    constraints: ConstraintSet
    multipliers: np.ndarray
    objective_value: float
    gram_condition: float = float("nan")

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=complex)
        mult = np.ascontiguousarray(self.multipliers, dtype=complex)
        if w.shape != (self.constraints.num_sensors,):
            raise ValueError(
                f"weights: expected shape ({self.constraints.num_sensors},), got {w.shape}"
            )
        if mult.shape != (self.constraints.num_constraints,):
            raise ValueError(
                f"multipliers: expected shape ({self.constraints.num_constraints},), got {mult.shape}"
            )
        residual = w.conj() @ self.constraints.steering_matrix - self.constraints.response
        tol = 1e-8 * max(1.0, abs(self.constraints.gain))
        if np.max(np.abs(residual)) > tol:
            raise ValueError(
                f"weights: constraint residual {np.max(np.abs(residual)):.3e} exceeds {tol:.1e}"
            )
        if not self.objective_value >= 0:
            raise ValueError(f"objective_value: must be nonnegative, got {self.objective_value!r}")
        w.flags.writeable = False
        mult.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "multipliers", mult)

    @property
    def num_sensors(self) -> int:
        return self.weights.size


def _cho_factor(r: CovarianceMatrix):
    try:
        return scipy.linalg.cho_factor(r.matrix, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalRankError(
            f"covariance matrix is numerically singular ({exc}); add diagonal loading"
        ) from exc


def _objective(r: CovarianceMatrix, w: np.ndarray) -> float:
    return max(float(np.real(w.conj() @ r.matrix @ w)), 0.0)


def mvdr_weights(r: CovarianceMatrix, a: SteeringVector) -> WeightVector:
    """Minimum-variance weights with unit response toward one steering vector.

    w = R^-1 a / (a^H R^-1 a).
    """
    if a.num_sensors != r.num_sensors:
        raise ValueError(
            f"steering vector has {a.num_sensors} sensors but covariance has {r.num_sensors}"
        )
    factor = _cho_factor(r)
    ra = scipy.linalg.cho_solve(factor, a.entries)
    denom = float(np.real(a.entries.conj() @ ra))
    if denom <= 0:
        raise NumericalRankError("covariance matrix is numerically singular (a^H R^-1 a <= 0)")
    w = ra / denom
    constraints = ConstraintSet(
        steering_matrix=a.entries[:, np.newaxis], response=np.ones(1, dtype=complex)
    )
    return WeightVector(
        weights=w,
        constraints=constraints,
        multipliers=np.array([1.0 / denom], dtype=complex),
        objective_value=_objective(r, w),
        gram_condition=1.0,
    )


def mvmfdr_weights(r: CovarianceMatrix, cs: ConstraintSet) -> WeightVector:
    """Closed-form weights meeting every constraint in ``cs`` with minimum output power.

    Solves (A^H R^-1 A) lam = B^H for the multipliers, then w = R^-1 A lam.
    """
    _check_shapes(r, cs)
    a = cs.steering_matrix
    if np.linalg.matrix_rank(a) < cs.num_constraints:
        raise DegenerateConstraintsError(
            "constraint matrix is rank deficient; remove duplicate or colinear constraints"
        )
    factor = _cho_factor(r)
    ra = scipy.linalg.cho_solve(factor, a)
    gram = a.conj().T @ ra
    gram = 0.5 * (gram + gram.conj().T)
    try:
        mult = scipy.linalg.solve(gram, cs.response.conj(), assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise DegenerateConstraintsError(
            f"constraint Gram matrix A^H R^-1 A is singular ({exc})"
        ) from exc
    w = ra @ mult
    return WeightVector(
        weights=w,
        constraints=cs,
        multipliers=mult,
        objective_value=_objective(r, w),
        gram_condition=float(np.linalg.cond(gram)),
    )


def kkt_oracle(r: CovarianceMatrix, cs: ConstraintSet) -> WeightVector:
    """Same constrained minimization as ``mvmfdr_weights``, solved a different way.

    Stacks stationarity (R w - A lam = 0) on top of feasibility (A^H w = B^H)
    and solves the dense block system in one shot. Intended as an independent
    cross-check of the closed form.
    """
    _check_shapes(r, cs)
    n = cs.num_sensors
    k = cs.num_constraints
    a = cs.steering_matrix
    if np.linalg.matrix_rank(a) < k:
        raise DegenerateConstraintsError(
            "constraint matrix is rank deficient; remove duplicate or colinear constraints"
        )
    kkt = np.zeros((n + k, n + k), dtype=complex)
    kkt[:n, :n] = r.matrix
    kkt[:n, n:] = -a
    kkt[n:, :n] = a.conj().T
    rhs = np.concatenate([np.zeros(n, dtype=complex), cs.response.conj()])
    try:
        solution = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConstraintsError(f"KKT system is singular ({exc})") from exc
    w = solution[:n]
    mult = solution[n:]
    return WeightVector(
        weights=w,
        constraints=cs,
        multipliers=mult,
        objective_value=_objective(r, w),
    )


def _check_shapes(r: CovarianceMatrix, cs: ConstraintSet) -> None:
    if cs.num_sensors != r.num_sensors:
        raise ValueError(
            f"constraint set has {cs.num_sensors} sensors but covariance has {r.num_sensors}"
        )
