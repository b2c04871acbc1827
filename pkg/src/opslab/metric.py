"""Structure theory for power-bounded matrices.

The central objects are invariant metrics: Hermitian positive definite
solutions X of ``S* X S = X``.  When one exists, ``P = psd_sqrt(X)``
conjugates S to an isometry (``P S P^{-1}`` has orthonormal columns), and
``P^{-2} S* P^{2}`` is a power-bounded left m-inverse of S for every m.
Around that core this module provides:

* a power-boundedness certificate based on the exact finite-dimensional
  criterion (spectral radius at most 1, unimodular eigenvalues
  semisimple), with the empirical sup of power norms as a witness only;
* Douglas factorization ``A = B C`` with the minimal-norm factor and its
  optimality value ``inf {lam : A A* <= lam B B*}``;
* the splitting of a power-bounded matrix into its asymptotically
  vanishing and norm-preserving parts, and the Wold decomposition of an
  isometry (which in finite dimension has no shift part);
* Putnam-Fuglede checks for the elementary operator ``X -> A X V* - X``
  against its adjoint-side companion, with kernel-inclusion and ascent
  bounds;
* the rigidity consequences: a power-bounded m-isometry is isometric, and
  a power-bounded pair (S, T) with vanishing defect is simultaneously
  similar to a conjugate pair of unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import minv
from .errors import ArgumentError, AssumptionError, IdentityCheckError
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    adjoint,
    as_matrix,
    frobenius,
    matrix_to_json_dict,
    null_space,
    numerical_rank,
    operator_norm,
    psd_sqrt,
    pseudo_inverse,
    range_basis,
    require_same_shape,
    spectral_radius,
    spectral_split,
)

__all__ = [
    "PowerBoundReport",
    "certify_power_bounded",
    "frame_bounds",
    "invariant_metric",
    "extract_isometry",
    "canonical_left_m_inverse",
    "SimilarityCertificate",
    "similarity_certificate",
    "douglas_mu",
    "douglas_factor",
    "C01Decomposition",
    "c0_c1_decompose",
    "wold_decompose",
    "PFReport",
    "pf_property_check",
    "ascent_bound_check",
    "similar_to_unitary",
    "verify_prop_isometric",
]

# Eigenvalues closer than this (relative to max(1, ||S||)) are treated as
# one spectral cluster when testing semisimplicity.  Below this separation
# a Jordan block and a pair of nearby simple eigenvalues are numerically
# indistinguishable in double precision.
_CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class PowerBoundReport:
    """Verdict and evidence for ``sup_n ||S^n|| < infinity``.

    ``bounded`` is decided by the criterion fields (spectral radius within
    tolerance of the unit disc and every unimodular eigenvalue
    semisimple); ``m1_estimate`` is the observed sup of ``||S^n||`` over
    the requested horizon and only witnesses the verdict.  ``witness``
    holds ``(eigenvalue, reason)`` when unbounded.
    """

    bounded: bool
    m1_estimate: float
    spectral_radius: float
    unimodular_semisimple: bool
    witness: tuple[complex, str] | None = None

    @property
    def criterion(self) -> dict:
        return {
            "spectral_radius": self.spectral_radius,
            "unimodular_semisimple": self.unimodular_semisimple,
        }

    def to_json_dict(self) -> dict:
        out = {
            "bounded": self.bounded,
            "m1_estimate": self.m1_estimate,
            "criterion": self.criterion,
        }
        if self.witness is not None:
            lam, reason = self.witness
            out["witness"] = {"eigenvalue": [lam.real, lam.imag], "reason": reason}
        return out


def certify_power_bounded(
    s: np.ndarray, horizon: int = 64, tol: ToleranceConfig = DEFAULT_TOL
) -> PowerBoundReport:
    """Decide power boundedness by the finite-dimensional criterion.

    A matrix is power bounded exactly when its spectral radius is at most
    1 and every unimodular eigenvalue is semisimple (geometric equals
    algebraic multiplicity).  The semisimplicity test clusters unimodular
    eigenvalues within ``1e-6 * max(1, ||S||)`` and compares the numerical
    rank of ``S - lambda I`` against the cluster size with a matched
    cutoff; the sup of power norms over ``n <= horizon`` is reported as a
    witness, never used for the decision.
    """
    s = as_matrix(s, square=True, name="S")
    if horizon < 1:
        raise ArgumentError(f"horizon must be >= 1, got {horizon}")
    n = s.shape[0]
    eigs = np.linalg.eigvals(s)
    rho = float(np.max(np.abs(eigs)))

    m1 = 0.0
    power = np.eye(n, dtype=complex)
    for _ in range(horizon):
        power = power @ s
        m1 = max(m1, operator_norm(power))

    band = tol.rel_tol * max(1.0, rho)
    if rho > 1.0 + band:
        lam = eigs[int(np.argmax(np.abs(eigs)))]
        return PowerBoundReport(
            bounded=False,
            m1_estimate=m1,
            spectral_radius=rho,
            unimodular_semisimple=True,
            witness=(complex(lam), "spectral radius exceeds 1"),
        )

    cluster_tol = _CLUSTER_TOL * max(1.0, operator_norm(s))
    unimodular = [complex(lam) for lam in eigs if abs(1.0 - abs(lam)) <= band]
    semisimple = True
    witness = None
    remaining = list(unimodular)
    while remaining:
        seed = remaining.pop(0)
        cluster = [seed]
        rest = []
        for lam in remaining:
            if abs(lam - seed) <= cluster_tol:
                cluster.append(lam)
            else:
                rest.append(lam)
        remaining = rest
        if len(cluster) == 1:
            continue
        center = complex(np.mean(cluster))
        shifted = s - center * np.eye(n)
        rank = numerical_rank(shifted, tol, cutoff=cluster_tol)
        geometric = n - rank
        if geometric < len(cluster):
            semisimple = False
            witness = (center, "unimodular eigenvalue is not semisimple")
            break

    return PowerBoundReport(
        bounded=semisimple,
        m1_estimate=m1,
        spectral_radius=rho,
        unimodular_semisimple=semisimple,
        witness=witness,
    )


def frame_bounds(
    s: np.ndarray,
    t: np.ndarray,
    m: int,
    horizon: int = 32,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[float, float]:
    """Two-sided bounds on ``||S^n x||`` for a power-bounded defect pair.

    Returns ``(lower, upper)`` with ``lower`` the smallest singular value
    and ``upper`` the largest norm among ``S^n`` for ``n <= horizon``.
    The lower bound is checked against ``1 / (2^m M1^2)``, the reciprocal
    of the norm bound of the explicit left inverses.
    """
    s = as_matrix(s, square=True, name="S")
    t = as_matrix(t, square=True, name="T")
    ok, residual = minv.is_left_m_inverse(s, t, m, tol)
    if not ok:
        raise AssumptionError(
            f"frame_bounds requires a left {m}-inverse pair (residual {residual:.3e})"
        )
    for mat, label in ((s, "S"), (t, "T")):
        if not certify_power_bounded(mat, tol=tol).bounded:
            raise AssumptionError(f"frame_bounds requires power bounded {label}")

    lower = np.inf
    upper = 0.0
    m1 = 1.0
    ps = np.eye(s.shape[0], dtype=complex)
    pt = np.eye(s.shape[0], dtype=complex)
    for _ in range(horizon):
        ps = ps @ s
        pt = pt @ t
        svals = np.linalg.svd(ps, compute_uv=False)
        lower = min(lower, float(svals[-1]))
        upper = max(upper, float(svals[0]))
        m1 = max(m1, float(svals[0]), operator_norm(pt))
    bound = 1.0 / minv.z_norm_bound(m, m1)
    if lower < bound - tol.zero_threshold(1.0):
        raise IdentityCheckError(
            f"frame lower bound {lower:.3e} fell below 1/(2^m M1^2) = {bound:.3e}"
        )
    return lower, upper


def _stein_fixed_point_basis(
    s: np.ndarray, tol: ToleranceConfig
) -> np.ndarray:
    # Null space of the vectorized map X -> S* X S - X.
    n = s.shape[0]
    rep = np.kron(s.T, adjoint(s)) - np.eye(n * n, dtype=complex)
    return null_space(rep, tol)


def invariant_metric(
    s: np.ndarray,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_doublings: int = 40,
) -> np.ndarray:
    """Hermitian positive definite X with ``S* X S = X``, unit spectral norm.

    Two routes are combined and cross-checked.  A doubling iteration

        X <- (X + Sk* X Sk) / 2,   Sk <- Sk^2

    accumulates the average of ``S*^j S^j`` over ``2^k`` powers in ``k``
    steps; it converges to a positive definite fixed point whenever one
    exists.  Independently, the fixed-point space is computed as the
    kernel of the vectorized map ``X -> S* X S - X``; the iterate is
    projected onto that kernel (which removes the averaging truncation
    error) and must already lie close to it.  The projected matrix is
    hermitized, normalized to unit spectral norm, and returned.

    Raises
    ------
    AssumptionError
        If the fixed-point space is trivial, the iteration diverges and
        leaves no positive candidate, or the normalized fixed point is not
        positive definite.  All of these mean S is not similar to an
        isometry (an eigenvalue inside the disc, a defective unimodular
        eigenvalue, or growth outside the disc).
    """
    s = as_matrix(s, square=True, name="S")
    n = s.shape[0]
    basis = _stein_fixed_point_basis(s, tol)
    if basis.shape[1] == 0:
        raise AssumptionError(
            "the only solution of S* X S = X is zero; no invariant metric exists"
        )

    x = np.eye(n, dtype=complex)
    spow = s.copy()
    best = x
    best_res = np.inf
    diverged = False
    for _ in range(max_doublings):
        x_next = 0.5 * (x + adjoint(spow) @ x @ spow)
        if not np.all(np.isfinite(x_next)) or frobenius(x_next) > 1e12:
            diverged = True
            break
        x = x_next
        res = frobenius(adjoint(s) @ x @ s - x) / max(1.0, frobenius(x))
        if res < best_res:
            best, best_res = x, res
        spow_next = spow @ spow
        if not np.all(np.isfinite(spow_next)) or frobenius(spow_next) > 1e9:
            break
        spow = spow_next

    candidate = np.eye(n, dtype=complex) if diverged else best
    vec = candidate.flatten(order="F")
    projected = basis @ (adjoint(basis) @ vec)
    if not diverged:
        drift = np.linalg.norm(vec - projected) / max(1e-30, np.linalg.norm(vec))
        if drift > 1e-3:
            raise AssumptionError(
                f"averaging iterate is far from the fixed-point space "
                f"(relative distance {drift:.3e}); no reliable invariant metric"
            )
    x = projected.reshape((n, n), order="F")
    x = 0.5 * (x + adjoint(x))
    norm = operator_norm(x)
    if norm <= tol.zero_threshold(1.0):
        raise AssumptionError(
            "projection onto the fixed-point space vanished; "
            "no positive definite invariant metric exists"
        )
    x = x / norm
    lam_min = float(np.linalg.eigvalsh(x).min())
    if lam_min <= tol.zero_threshold(1.0):
        raise AssumptionError(
            f"invariant fixed point is not positive definite "
            f"(smallest eigenvalue {lam_min:.3e}); S is not similar to an isometry"
        )
    residual = frobenius(adjoint(s) @ x @ s - x)
    if residual > tol.zero_threshold(tol.scale_of(s) ** 2):
        raise IdentityCheckError(
            f"projected invariant metric has residual {residual:.3e}"
        )
    return x


def extract_isometry(
    s: np.ndarray, p: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Conjugate S by a metric square root: ``V = P S P^{-1}``.

    Requires P Hermitian positive definite with ``S* P^2 S = P^2`` within
    tolerance; the returned V then satisfies ``V* V = I`` at the same
    accuracy amplified by the conditioning of P.
    """
    s = as_matrix(s, square=True, name="S")
    p = as_matrix(p, square=True, name="P")
    require_same_shape(s, p, "S and P")
    if frobenius(p - adjoint(p)) > tol.zero_threshold(frobenius(p)):
        raise ArgumentError("P must be Hermitian")
    eigs = np.linalg.eigvalsh(0.5 * (p + adjoint(p)))
    if eigs.min() <= tol.zero_threshold(1.0) * max(1.0, eigs.max()):
        raise ArgumentError("P must be positive definite")
    p2 = p @ p
    metric_res = frobenius(adjoint(s) @ p2 @ s - p2)
    if metric_res > tol.zero_threshold(tol.scale_of(s) ** 2 * tol.scale_of(p2)):
        raise AssumptionError(
            f"P^2 is not an invariant metric for S (residual {metric_res:.3e})"
        )
    v = p @ s @ np.linalg.inv(p)
    iso_res = frobenius(adjoint(v) @ v - np.eye(s.shape[0]))
    if iso_res > tol.zero_threshold(tol.scale_of(v) ** 2):
        raise IdentityCheckError(
            f"extracted conjugate is not an isometry (residual {iso_res:.3e})"
        )
    return v


def canonical_left_m_inverse(
    s: np.ndarray, p: np.ndarray, m: int, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Left m-inverse ``T = P^{-2} S* P^{2}`` induced by an invariant metric.

    The metric identity makes ``T^j S^j = I`` for every j, so the defect
    of (S, T) vanishes at every order; T is verified to be a left
    m-inverse and power bounded before being returned.
    """
    s = as_matrix(s, square=True, name="S")
    p = as_matrix(p, square=True, name="P")
    require_same_shape(s, p, "S and P")
    p2 = p @ p
    metric_res = frobenius(adjoint(s) @ p2 @ s - p2)
    if metric_res > tol.zero_threshold(tol.scale_of(s) ** 2 * tol.scale_of(p2)):
        raise AssumptionError(
            f"P^2 is not an invariant metric for S (residual {metric_res:.3e})"
        )
    t = np.linalg.solve(p2, adjoint(s) @ p2)
    ok, residual = minv.is_left_m_inverse(s, t, m, tol)
    if not ok:
        raise IdentityCheckError(
            f"canonical inverse failed the defect check (residual {residual:.3e})"
        )
    if not certify_power_bounded(t, tol=tol).bounded:
        raise IdentityCheckError("canonical inverse is not power bounded")
    return t


@dataclass(frozen=True)
class SimilarityCertificate:
    """Witness that S is similar to an isometry through a positive metric.

    ``p`` is Hermitian positive definite, ``v`` is the conjugated
    isometry, and the residuals record how well ``S* P^2 S = P^2``,
    ``V* V = I`` and ``P S = V P`` hold.
    """

    p: np.ndarray
    v: np.ndarray
    residual_metric: float
    residual_isometry: float
    residual_similarity: float

    def to_json_dict(self) -> dict:
        return {
            "P": matrix_to_json_dict(self.p),
            "V": matrix_to_json_dict(self.v),
            "residuals": {
                "metric": self.residual_metric,
                "isometry": self.residual_isometry,
                "similarity": self.residual_similarity,
            },
        }


def similarity_certificate(
    s: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> SimilarityCertificate:
    """Solve for an invariant metric and package the full certificate."""
    s = as_matrix(s, square=True, name="S")
    x = invariant_metric(s, tol)
    p = psd_sqrt(x, tol)
    v = extract_isometry(s, p, tol)
    p2 = p @ p
    return SimilarityCertificate(
        p=p,
        v=v,
        residual_metric=frobenius(adjoint(s) @ p2 @ s - p2),
        residual_isometry=frobenius(adjoint(v) @ v - np.eye(s.shape[0])),
        residual_similarity=frobenius(p @ s - v @ p),
    )


# ---------------------------------------------------------------------------
# Douglas factorization
# ---------------------------------------------------------------------------

def _range_inclusion_witness(
    a: np.ndarray, b: np.ndarray, tol: ToleranceConfig
) -> np.ndarray | None:
    """None if ran(A) is contained in ran(B); else a unit witness column."""
    stacked = np.hstack([b, a])
    if numerical_rank(stacked, tol) == numerical_rank(b, tol):
        return None
    q = range_basis(b, tol)
    residual = a - q @ (adjoint(q) @ a)
    norms = np.linalg.norm(residual, axis=0)
    col = int(np.argmax(norms))
    witness = residual[:, col]
    return witness / np.linalg.norm(witness)


def douglas_mu(
    a: np.ndarray, b: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> float:
    """Least ``lam >= 0`` with ``lam B B* - A A*`` positive semidefinite.

    Computed as the largest eigenvalue of the pencil ``(A A*, B B*)``
    restricted to the range of B.  Requires ``ran(A) <= ran(B)``;
    otherwise no finite value exists and ``AssumptionError`` is raised.
    """
    import scipy.linalg

    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    require_same_shape(a, b, "A and B")
    witness = _range_inclusion_witness(a, b, tol)
    if witness is not None:
        raise AssumptionError(
            "ran(A) is not contained in ran(B); no finite bound exists "
            f"(witness direction {np.round(witness, 6).tolist()})"
        )
    q = range_basis(b, tol)
    if q.shape[1] == 0:
        return 0.0
    aa = adjoint(q) @ (a @ adjoint(a)) @ q
    bb = adjoint(q) @ (b @ adjoint(b)) @ q
    aa = 0.5 * (aa + adjoint(aa))
    bb = 0.5 * (bb + adjoint(bb))
    eigs = scipy.linalg.eigh(aa, bb, eigvals_only=True)
    return max(0.0, float(eigs[-1]))


def douglas_factor(
    a: np.ndarray, b: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Minimal factor C with ``A = B C``, plus its optimality value.

    Returns ``(C, mu2)`` where ``C = B^+ A`` and ``mu2`` is the least
    ``lam`` with ``A A* <= lam B B*``.  The three optimality properties
    are verified before returning: ``||C||^2 = mu2``, ``ker C = ker A``
    (by ranks), and every column of C orthogonal to ``ker B``.
    """
    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    require_same_shape(a, b, "A and B")
    witness = _range_inclusion_witness(a, b, tol)
    if witness is not None:
        raise AssumptionError(
            "ran(A) is not contained in ran(B); no factor exists "
            f"(witness direction {np.round(witness, 6).tolist()})"
        )
    c = pseudo_inverse(b, tol) @ a
    mu2 = douglas_mu(a, b, tol)
    scale = tol.scale_of(a, b, c)

    factor_res = frobenius(b @ c - a)
    if factor_res > tol.zero_threshold(scale):
        raise IdentityCheckError(f"factor residual {factor_res:.3e} too large")
    norm_gap = abs(operator_norm(c) ** 2 - mu2)
    if norm_gap > 1e-6 * max(1.0, mu2):
        raise IdentityCheckError(
            f"||C||^2 = {operator_norm(c) ** 2:.6e} differs from mu2 = {mu2:.6e}"
        )
    rank_a = numerical_rank(a, tol)
    if not (rank_a == numerical_rank(c, tol) == numerical_rank(np.vstack([a, c]), tol)):
        raise IdentityCheckError("kernel of C does not match kernel of A")
    ker_b = null_space(b, tol)
    if ker_b.shape[1]:
        ortho_res = frobenius(adjoint(ker_b) @ c)
        if ortho_res > tol.zero_threshold(scale):
            raise IdentityCheckError(
                f"columns of C are not orthogonal to ker(B) (residual {ortho_res:.3e})"
            )
    return c, mu2


# ---------------------------------------------------------------------------
# Asymptotic splitting, Wold, Putnam-Fuglede
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class C01Decomposition:
    """Triangular splitting of a power-bounded matrix at the unit circle.

    In the unitary basis ``w`` the matrix becomes
    ``[[block_c0, coupling], [0, block_c1]]`` with ``block_c0`` the part
    whose powers vanish and ``block_c1`` the part with unimodular
    spectrum.  ``orthogonal`` records whether the coupling is numerically
    zero, i.e. whether the two parts split as an orthogonal direct sum.
    """

    w: np.ndarray
    block_c0: np.ndarray
    block_c1: np.ndarray
    coupling: np.ndarray
    orthogonal: bool


def c0_c1_decompose(
    s: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> C01Decomposition:
    """Split a power-bounded matrix into vanishing and unimodular parts."""
    s = as_matrix(s, square=True, name="S")
    if not certify_power_bounded(s, tol=tol).bounded:
        raise AssumptionError("c0_c1_decompose requires a power bounded matrix")
    split = spectral_split(s, tol)
    k = split.interior.shape[0]
    triangular = adjoint(split.basis) @ s @ split.basis
    coupling = triangular[:k, k:]
    orthogonal = frobenius(coupling) <= tol.zero_threshold(tol.scale_of(s))
    return C01Decomposition(
        w=split.basis,
        block_c0=split.interior,
        block_c1=split.boundary,
        coupling=coupling,
        orthogonal=orthogonal,
    )


def wold_decompose(
    v: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, int]:
    """Wold decomposition of an isometry: ``(unitary_part, shift_dim)``.

    A square isometry on a finite-dimensional space is automatically
    unitary, so the shift dimension is always 0 and the matrix itself is
    the unitary part; the collapse is intentional, not an approximation.
    """
    v = as_matrix(v, square=True, name="V")
    res = frobenius(adjoint(v) @ v - np.eye(v.shape[0]))
    if res > tol.zero_threshold(tol.scale_of(v) ** 2):
        raise AssumptionError(f"input is not an isometry (residual {res:.3e})")
    return v, 0


@dataclass(frozen=True)
class PFReport:
    """Outcome of the Putnam-Fuglede check for the elementary operator.

    ``structural`` is the decomposition criterion (orthogonal splitting
    with unitary unimodular part); ``satisfies_pf`` is the verdict of the
    kernel-inclusion search over isometries V.  The two must agree; a
    counterexample ``(V, X)`` with ``A X V* = X`` but ``A* X V != X`` is
    attached whenever the verdict is negative.
    """

    satisfies_pf: bool
    structural: bool
    counterexample: tuple[np.ndarray, np.ndarray] | None = None

    def to_json_dict(self) -> dict:
        out = {"satisfies_pf": self.satisfies_pf, "structural": self.structural}
        if self.counterexample is not None:
            v, x = self.counterexample
            out["counterexample"] = {
                "V": matrix_to_json_dict(v),
                "X": matrix_to_json_dict(x),
            }
        return out


def _deterministic_isometries(a: np.ndarray, tol: ToleranceConfig) -> list[np.ndarray]:
    """Fixed probe set: identity, cycle, phase diagonals, and unimodular
    eigenvalue multiples of the identity (the probes that can excite a
    nontrivial intertwiner kernel)."""
    n = a.shape[0]
    probes = [np.eye(n, dtype=complex)]
    cycle = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    probes.append(cycle)
    probes.append(np.diag(np.exp(2j * np.pi * np.arange(n) / max(1, n))))
    eigs = np.linalg.eigvals(a)
    rho = max(1.0, float(np.max(np.abs(eigs))) if eigs.size else 1.0)
    band = tol.rel_tol * rho
    seen: list[complex] = []
    for lam in eigs:
        if abs(1.0 - abs(lam)) <= band:
            unit = complex(lam / abs(lam))
            if all(abs(unit - u) > 1e-12 for u in seen):
                seen.append(unit)
                probes.append(unit * np.eye(n, dtype=complex))
    return probes


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def pf_property_check(
    a: np.ndarray,
    sample_count: int = 20,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> PFReport:
    """Test whether solutions of ``A X V* = X`` also solve ``A* X V = X``.

    The structural criterion: the unimodular/vanishing splitting of A is
    orthogonal and the unimodular block is unitary (equivalently, A is an
    orthogonal direct sum of a unitary and a matrix of spectral radius
    below 1).  The search criterion: over a deterministic probe set of
    isometries (identity, a cycle, phase diagonals, unimodular-eigenvalue
    multiples of the identity) plus ``sample_count`` seeded Haar
    unitaries, every kernel element of ``X -> A X V* - X`` is checked
    against the adjoint-side equation.  The two verdicts are asserted to
    agree; disagreement raises ``IdentityCheckError`` with diagnostics.
    """
    a = as_matrix(a, square=True, name="A")
    if sample_count < 1:
        raise ArgumentError(f"sample_count must be >= 1, got {sample_count}")
    if not certify_power_bounded(a, tol=tol).bounded:
        raise AssumptionError("pf_property_check requires a power bounded matrix")

    dec = c0_c1_decompose(a, tol)
    c1 = dec.block_c1
    c1_unitary = frobenius(adjoint(c1) @ c1 - np.eye(c1.shape[0])) <= tol.zero_threshold(
        tol.scale_of(a) ** 2
    )
    structural = dec.orthogonal and spectral_radius(dec.block_c0) < 1.0 and c1_unitary

    rng = np.random.default_rng(seed)
    probes = _deterministic_isometries(a, tol)
    probes.extend(_haar_unitary(a.shape[0], rng) for _ in range(sample_count))

    counterexample = None
    for v in probes:
        forward = minv.elementary_operator(a, adjoint(v))
        backward = minv.elementary_operator(adjoint(a), v)
        included, witness = minv.kernel_included(forward, backward, tol)
        if not included:
            counterexample = (v, witness)
            break
    satisfies_pf = counterexample is None

    if satisfies_pf != structural:
        raise IdentityCheckError(
            "Putnam-Fuglede search verdict "
            f"({satisfies_pf}) disagrees with the structural criterion ({structural}); "
            f"orthogonal={dec.orthogonal}, unimodular_block_unitary={c1_unitary}"
        )
    return PFReport(
        satisfies_pf=satisfies_pf, structural=structural, counterexample=counterexample
    )


def ascent_bound_check(
    a: np.ndarray, v: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[bool, int]:
    """Kernel inclusion forces ascent at most 1 for ``X -> A X V* - X``.

    Returns ``(inclusion, ascent)`` for the elementary operator and runs
    the same contract for the derivation ``X -> A X - X V*`` against its
    adjoint-side companion.  Requires V to be an isometry; a violation of
    either implication raises ``IdentityCheckError``.
    """
    a = as_matrix(a, square=True, name="A")
    v = as_matrix(v, square=True, name="V")
    require_same_shape(a, v, "A and V")
    iso_res = frobenius(adjoint(v) @ v - np.eye(v.shape[0]))
    if iso_res > tol.zero_threshold(tol.scale_of(v) ** 2):
        raise AssumptionError(f"V is not an isometry (residual {iso_res:.3e})")

    results = None
    for make in (minv.elementary_operator, minv.generalized_derivation):
        forward = make(a, adjoint(v))
        backward = make(adjoint(a), v)
        included, _ = minv.kernel_included(forward, backward, tol)
        asc = minv.ascent(forward, tol=tol)
        if included and (asc is None or asc > 1):
            raise IdentityCheckError(
                f"kernel inclusion holds but ascent is {asc} for "
                f"{make.__name__}; expected at most 1"
            )
        if results is None:
            results = (included, asc if asc is not None else -1)
    return results


def similar_to_unitary(
    s: np.ndarray, t: np.ndarray, m: int, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simultaneous unitary models for a power-bounded defect pair.

    For a left m-inverse pair with both members power bounded, S and T*
    are each similar to a unitary through the square roots of their
    invariant metrics:

        U1 = G S G^{-1},   U2 = R T* R^{-1},

    with ``G = psd_sqrt(invariant_metric(S))`` and
    ``R = psd_sqrt(invariant_metric(T*))``.  The two models are conjugate:
    ``U1 = P U2 P^{-1}`` for ``P = G^{-1} R^{-1}``, which is verified
    before returning ``(U1, U2, P)``.
    """
    s = as_matrix(s, square=True, name="S")
    t = as_matrix(t, square=True, name="T")
    ok, residual = minv.is_left_m_inverse(s, t, m, tol)
    if not ok:
        raise AssumptionError(
            f"similar_to_unitary requires a left {m}-inverse pair "
            f"(residual {residual:.3e})"
        )
    for mat, label in ((s, "S"), (t, "T")):
        if not certify_power_bounded(mat, tol=tol).bounded:
            raise AssumptionError(f"similar_to_unitary requires power bounded {label}")

    g = psd_sqrt(invariant_metric(s, tol), tol)
    u1 = g @ s @ np.linalg.inv(g)
    t_star = adjoint(t)
    r = psd_sqrt(invariant_metric(t_star, tol), tol)
    u2 = r @ t_star @ np.linalg.inv(r)
    p = np.linalg.inv(g) @ np.linalg.inv(r)

    scale = max(1.0, operator_norm(u1))
    for u, label in ((u1, "U1"), (u2, "U2")):
        res = frobenius(adjoint(u) @ u - np.eye(u.shape[0]))
        if res > tol.zero_threshold(tol.scale_of(u) ** 2):
            raise IdentityCheckError(f"{label} is not unitary (residual {res:.3e})")
    conj_res = operator_norm(u1 - p @ u2 @ np.linalg.inv(p))
    if conj_res > 1e-7 * scale:
        raise IdentityCheckError(
            f"unitary models are not conjugate through P (residual {conj_res:.3e})"
        )
    return u1, u2, p


def verify_prop_isometric(
    s: np.ndarray, m: int, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[bool, bool]:
    """Rigidity of power-bounded m-isometries.

    Returns ``(is_m_isometric, is_isometric)``.  For power-bounded input
    the first implies the second (and an isometric matrix is unitary);
    violations of either implication raise ``IdentityCheckError``.
    """
    s = as_matrix(s, square=True, name="S")
    if not certify_power_bounded(s, tol=tol).bounded:
        raise AssumptionError("verify_prop_isometric requires a power bounded matrix")
    ok, _ = minv.is_left_m_inverse(s, adjoint(s), m, tol)
    eye = np.eye(s.shape[0])
    iso_res = frobenius(adjoint(s) @ s - eye)
    is_isometric = iso_res <= tol.zero_threshold(tol.scale_of(s) ** 2)
    if ok and not is_isometric:
        raise IdentityCheckError(
            f"power bounded {m}-isometric matrix is not isometric "
            f"(residual {iso_res:.3e})"
        )
    if is_isometric:
        unit_res = frobenius(s @ adjoint(s) - eye)
        if unit_res > tol.zero_threshold(tol.scale_of(s) ** 2):
            raise IdentityCheckError(
                f"isometric matrix is not unitary (residual {unit_res:.3e})"
            )
    return ok, is_isometric
