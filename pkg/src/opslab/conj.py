"""Conjugations and C-symmetric isometry defects.

A conjugation is an antilinear involution ``C`` with ``<Cx, Cy> = <y, x>``.
In a fixed orthonormal basis every conjugation acts as ``x -> J conj(x)``
for a unitary symmetric ``J``, which reduces all the antilinear algebra
here to ordinary matrix algebra plus entrywise conjugation.  The defect

    sum_{j=0}^m (-1)^(m-j) C(m,j) S*^j C S^j C

collapses to the plain left-inverse defect of the pair ``(C S C, S*)``
because ``C^2 = I``; this module evaluates it both ways and keeps the
direct antilinear evaluation as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import minv
from .errors import ArgumentError, AssumptionError, IdentityCheckError
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    adjoint,
    as_matrix,
    frobenius,
    matrix_from_json_dict,
    matrix_to_json_dict,
)

__all__ = [
    "Conjugation",
    "make_conjugation",
    "entrywise_conjugation",
    "conjugate_operator",
    "mc_isometry_defect",
    "is_1c_isometric",
    "verify_prop_mc",
    "hyperbolic_orthogonal_example",
]


@dataclass(frozen=True)
class Conjugation:
    """Antilinear map ``x -> J conj(x)`` with J unitary and symmetric."""

    j: np.ndarray

    @property
    def dim(self) -> int:
        return self.j.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply the conjugation to a vector (antilinear action)."""
        return self.j @ np.conj(np.asarray(x, dtype=complex))

    def to_json_dict(self) -> dict:
        return {"J": matrix_to_json_dict(self.j)}

    @staticmethod
    def from_json_dict(d: dict, tol: ToleranceConfig = DEFAULT_TOL) -> "Conjugation":
        if not isinstance(d, dict) or "J" not in d:
            raise ArgumentError('conjugation JSON must be an object with a "J" field')
        return make_conjugation(matrix_from_json_dict(d["J"], name="J"), tol)


def make_conjugation(j: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> Conjugation:
    """Validate J and wrap it as a conjugation.

    J must be unitary and equal to its plain transpose; together these are
    equivalent to the involution property ``C^2 = I`` of the antilinear
    map.  Raises ``ArgumentError`` naming the violated invariant.
    """
    j = as_matrix(j, square=True, name="J")
    eye = np.eye(j.shape[0], dtype=complex)
    unit_res = frobenius(adjoint(j) @ j - eye)
    if unit_res > tol.zero_threshold(frobenius(j) ** 2):
        raise ArgumentError(f"J is not unitary (residual {unit_res:.3e})")
    sym_res = frobenius(j - j.T)
    if sym_res > tol.zero_threshold(frobenius(j)):
        raise ArgumentError(f"J is not symmetric (residual {sym_res:.3e})")
    return Conjugation(j=j)


def entrywise_conjugation(n: int) -> Conjugation:
    """The coordinatewise conjugation (J = I)."""
    if n < 1:
        raise ArgumentError("dimension must be positive")
    return Conjugation(j=np.eye(n, dtype=complex))


def conjugate_operator(c: Conjugation, s: np.ndarray) -> np.ndarray:
    """Matrix of the linear map ``x -> C(S(C x))``, namely ``J conj(S) J*``."""
    s = as_matrix(s, square=True, name="S")
    if s.shape[0] != c.dim:
        raise ArgumentError(
            f"S must match the conjugation dimension {c.dim}, got {s.shape}"
        )
    return c.j @ np.conj(s) @ adjoint(c.j)


def _mc_defect_antilinear(s: np.ndarray, c: Conjugation, m: int) -> np.ndarray:
    # Direct route: assemble each S*^j C S^j C columnwise, applying C as an
    # antilinear map; serves as the oracle for the algebraic collapse.
    n = s.shape[0]
    out = np.zeros((n, n), dtype=complex)
    sa = adjoint(s)
    for j in range(m + 1):
        sj = np.linalg.matrix_power(s, j)
        saj = np.linalg.matrix_power(sa, j)
        term = np.empty((n, n), dtype=complex)
        for k in range(n):
            e = np.zeros(n, dtype=complex)
            e[k] = 1.0
            term[:, k] = saj @ c.apply(sj @ c.apply(e))
        out += ((-1) ** (m - j)) * comb(m, j) * term
    return out


def mc_isometry_defect(
    s: np.ndarray,
    c: Conjugation,
    m: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> np.ndarray:
    """C-twisted isometry defect ``sum_j (-1)^(m-j) C(m,j) S*^j (CSC)^j``.

    Evaluated through the linear matrix ``CSC`` so the exact-binomial
    defect machinery is reused; the result is cross-checked against the
    direct antilinear evaluation.
    """
    s = as_matrix(s, square=True, name="S")
    if m < 1:
        raise ArgumentError(f"m must be >= 1, got {m}")
    collapsed = minv.defect(conjugate_operator(c, s), adjoint(s), m)
    direct = _mc_defect_antilinear(s, c, m)
    scale = max(1.0, frobenius(collapsed), frobenius(direct))
    if frobenius(collapsed - direct) > 1e-10 * scale:
        raise IdentityCheckError(
            "collapsed and antilinear defect evaluations disagree; "
            "the conjugation input is likely invalid"
        )
    return collapsed


def is_1c_isometric(
    s: np.ndarray, c: Conjugation, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Whether ``S* C S C = I`` within tolerance."""
    s = as_matrix(s, square=True, name="S")
    residual = frobenius(mc_isometry_defect(s, c, 1, tol))
    return residual <= tol.zero_threshold(tol.scale_of(s, np.eye(s.shape[0])))


def verify_prop_mc(
    s: np.ndarray,
    c: Conjugation,
    m: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[bool, bool]:
    """Check the rigidity implication for a power-bounded operator.

    Computes whether ``s`` is (m,C)-isometric and whether it is
    (1,C)-isometric; for power-bounded input the first implies the second,
    and a violation raises ``IdentityCheckError``.  Requires power
    boundedness (``AssumptionError`` otherwise).
    """
    from .metric import certify_power_bounded

    s = as_matrix(s, square=True, name="S")
    report = certify_power_bounded(s, tol=tol)
    if not report.bounded:
        raise AssumptionError("verify_prop_mc requires a power bounded operator")
    residual = frobenius(mc_isometry_defect(s, c, m, tol))
    is_mc = residual <= tol.zero_threshold(tol.scale_of(s, np.eye(s.shape[0])))
    is_1c = is_1c_isometric(s, c, tol)
    if is_mc and not is_1c:
        raise IdentityCheckError(
            "power bounded (m,C)-isometric input is not (1,C)-isometric"
        )
    return is_mc, is_1c


def hyperbolic_orthogonal_example(t: float) -> np.ndarray:
    """Complex orthogonal 2x2 family that is (1,C)-isometric but unbounded.

        M(t) = [[cosh t, i sinh t], [-i sinh t, cosh t]]

    ``M(t)^T M(t) = I`` for every t, so M(t) is (1,C)-isometric for the
    entrywise conjugation, while its eigenvalues ``e^(+-t)`` defeat power
    boundedness for t != 0.
    """
    t = float(t)
    if not np.isfinite(t):
        raise ArgumentError("t must be finite")
    m = np.array(
        [
            [np.cosh(t), 1j * np.sinh(t)],
            [-1j * np.sinh(t), np.cosh(t)],
        ],
        dtype=complex,
    )
    if frobenius(m.T @ m - np.eye(2)) > 1e-10 * max(1.0, frobenius(m) ** 2):
        raise IdentityCheckError("hyperbolic family lost complex orthogonality")
    return m
