"""Eigensystems of the alternating chain, closed-form and numeric.

Three construction routes produce the same object:

* even N, delta above (N+2)/N: a trigonometric family built from the
  N/2-1 roots of  delta*sin(N x/2) + sin((N/2+1) x) = 0  on (0, pi),
  plus one hyperbolic pair from the root of
  delta*sinh(N y/2) = sinh((N/2+1) y),  y > 0;
* odd N, any positive delta: a fully explicit trigonometric family
  with a single zero mode localised on odd sites;
* numeric: LAPACK symmetric-tridiagonal diagonalisation, valid for
  every size, ratio, and on-site precession pattern, and serving as
  the independent cross-check for both closed forms.

Eigenvalues are sorted descending.  With a zero diagonal the spectrum
is symmetric under negation, and paired columns share their even-site
components while odd-site components flip sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .chain import ChainSpec, CouplingMatrix, build_coupling_matrix
from .errors import NumericError, RegimeError, ValidationError
from .roots import bisect, bracket_sign_changes

PROVENANCE_ANALYTIC_EVEN = "analytic-even"
PROVENANCE_ANALYTIC_ODD = "analytic-odd"
PROVENANCE_NUMERIC = "numeric"

_ORTHONORMALITY_TOL = 1e-10
_RESIDUAL_REL_TOL = 1e-9
_PAIRING_TOL = 1e-10
_ROOT_RESIDUAL_TOL = 1e-12
# Within this relative margin of the threshold the hyperbolic root is
# so small that the normalisation forms cancel; route to the numeric
# solver instead of returning digits the formulas cannot back.
_THRESHOLD_MARGIN = 1e-5


@dataclass(frozen=True)
class EvenRootSet:
    """Spectral parameters of an even chain: x roots plus the y root."""

    x_roots: np.ndarray
    y_root: float

    def __post_init__(self) -> None:
        xs = np.asarray(self.x_roots, dtype=float)
        xs.setflags(write=False)
        object.__setattr__(self, "x_roots", xs)
        object.__setattr__(self, "y_root", float(self.y_root))


@dataclass(frozen=True)
class EigenSystem:
    """Orthonormal eigenpairs of a coupling matrix, columns by index."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    provenance: str

    def __post_init__(self) -> None:
        lam = np.asarray(self.eigenvalues, dtype=float)
        vec = np.asarray(self.vectors, dtype=float)
        if lam.ndim != 1 or vec.shape != (lam.size, lam.size):
            raise ValidationError(
                f"shape mismatch: {lam.shape} eigenvalues, {vec.shape} vectors"
            )
        lam.setflags(write=False)
        vec.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "vectors", vec)

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    def smallest_positive(self, floor: float = 0.0) -> float | None:
        """Smallest eigenvalue strictly above floor, None if absent."""
        above = self.eigenvalues[self.eigenvalues > floor]
        return float(above[-1]) if above.size else None


def _x_residual(x: np.ndarray | float, n: int, delta: float) -> np.ndarray | float:
    return delta * np.sin(0.5 * n * x) + np.sin((0.5 * n + 1.0) * x)


def _y_residual_scaled(y: np.ndarray | float, n: int, delta: float) -> np.ndarray | float:
    """Residual of delta*sinh(n y/2) - sinh((n/2+1) y), divided by cosh((n/2+1) y).

    Expanding in exponentials and cancelling the growing factor gives

        [delta*(e^-y - e^-(n+1)y) - 1 + e^-(n+2)y] / [1 + e^-(n+2)y],

    bounded for every y >= 0, so no chain length can overflow it.
    """
    ey = np.exp(-np.asarray(y, dtype=float))
    num = delta * (ey - ey ** (n + 1)) - 1.0 + ey ** (n + 2)
    den = 1.0 + ey ** (n + 2)
    return num / den


def solve_even_roots(spec: ChainSpec) -> EvenRootSet:
    """Spectral roots of an even chain with delta above (N+2)/N.

    The x equation is bracketed by a uniform scan of 10*N points on
    (0, pi) and each of the N/2-1 sign changes is bisected to machine
    resolution; the y equation is bisected on (0, ln delta] using the
    overflow-free scaled residual.  Residuals beyond 1e-12 or a wrong
    root count abort rather than degrade.
    """
    spec.require_zero_larmor("solve_even_roots")
    n = spec.n_sites
    if n % 2 != 0:
        raise ValidationError(f"solve_even_roots needs an even chain, got N={n}")
    threshold = spec.even_regime_threshold()
    if spec.delta <= threshold * (1.0 + _THRESHOLD_MARGIN):
        raise RegimeError(
            f"delta={spec.delta} is at or below the closed-form threshold "
            f"(N+2)/N={threshold}; use the numeric eigensolver"
        )
    delta = spec.delta

    brackets = bracket_sign_changes(lambda x: _x_residual(x, n, delta), 0.0, math.pi, 10 * n)
    expected = n // 2 - 1
    if len(brackets) != expected:
        raise NumericError(
            f"x-root scan found {len(brackets)} sign changes, expected {expected} "
            f"(N={n}, delta={delta})"
        )
    xs = np.array([bisect(lambda x: _x_residual(x, n, delta), a, b) for a, b in brackets])

    y_hi = math.log(delta)
    y_lo = 1e-8
    # mathematically the scaled residual is positive at 0+ and negative
    # at ln delta for every delta above the threshold
    while _y_residual_scaled(y_hi, n, delta) > 0.0:
        y_hi *= 2.0
        if y_hi > 1e3:
            raise NumericError(f"failed to bracket the y root (N={n}, delta={delta})")
    y = bisect(lambda t: _y_residual_scaled(t, n, delta), y_lo, y_hi)

    x_res = np.abs(_x_residual(xs, n, delta)) if xs.size else np.zeros(0)
    if xs.size and (x_res.max() > _ROOT_RESIDUAL_TOL or np.any(np.diff(xs) <= 0.0)):
        raise NumericError(
            f"x roots failed the residual/ordering check (max residual {x_res.max():.3e})"
        )
    y_res = abs(float(_y_residual_scaled(y, n, delta)))
    if y_res > _ROOT_RESIDUAL_TOL or not 0.0 < y:
        raise NumericError(f"y root failed the residual check (residual {y_res:.3e})")
    return EvenRootSet(x_roots=xs, y_root=y)


def _validate_eigensystem(
    lam: np.ndarray, vectors: np.ndarray, matrix: CouplingMatrix, paired: bool
) -> None:
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(vectors))):
        raise NumericError("eigensystem contains non-finite entries")
    gram = vectors.T @ vectors
    orth = float(np.max(np.abs(gram - np.eye(lam.size))))
    if not orth <= _ORTHONORMALITY_TOL:
        raise NumericError(f"eigenvectors not orthonormal (defect {orth:.3e})")
    dense = matrix.to_dense()
    residual = float(np.max(np.abs(dense @ vectors - vectors * lam)))
    scale = matrix.max_abs()
    if not residual <= _RESIDUAL_REL_TOL * scale:
        raise NumericError(
            f"eigenpair residual {residual:.3e} exceeds {_RESIDUAL_REL_TOL * scale:.3e}"
        )
    if np.any(np.diff(lam) > _PAIRING_TOL):
        raise NumericError("eigenvalues are not sorted in descending order")
    if paired:
        mirror = float(np.max(np.abs(lam + lam[::-1])))
        if not mirror <= _PAIRING_TOL:
            raise NumericError(f"spectrum not symmetric under negation (defect {mirror:.3e})")


def _flip_odd_sites(column: np.ndarray) -> np.ndarray:
    """Partner column for the negated eigenvalue: odd sites change sign."""
    partner = column.copy()
    partner[0::2] = -partner[0::2]
    return partner


def eigensystem_even(spec: ChainSpec) -> EigenSystem:
    """Closed-form eigensystem of an even chain (delta above (N+2)/N).

    For the trigonometric family with root x, site k holds
    A*sin(k x/2) on even k and A*(-1)^(nu+1)*sin((N-k+1) x/2) on odd k,
    with A = sqrt(2) * (N+1 - sin((N+1)x)/sin(x))^(-1/2).  The
    hyperbolic pair replaces sines by sinh factors with alternating
    site signs and carries the smallest |eigenvalue| of the spectrum.
    """
    roots = solve_even_roots(spec)
    n, d1, d2 = spec.n_sites, spec.d1, spec.d2
    half = n // 2
    y = roots.y_root
    if (n + 1) * y > 300.0:
        raise NumericError(
            f"hyperbolic normalisation would overflow for N={n}, delta={spec.delta}; "
            "use the numeric eigensolver"
        )

    k = np.arange(1, n + 1)
    even_mask = k % 2 == 0
    k_even = k[even_mask]
    k_odd = k[~even_mask]

    lam = np.empty(n)
    vectors = np.empty((n, n))

    for i, x in enumerate(roots.x_roots):
        nu = i + 1
        value = math.sqrt(d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * math.cos(x))
        norm = math.sqrt(2.0) / math.sqrt((n + 1) - math.sin((n + 1) * x) / math.sin(x))
        sign_b = 1.0 if nu % 2 == 1 else -1.0
        column = np.empty(n)
        column[even_mask] = norm * np.sin(0.5 * k_even * x)
        column[~even_mask] = sign_b * norm * np.sin(0.5 * (n - k_odd + 1) * x)
        lam[nu - 1] = value
        vectors[:, nu - 1] = column
        lam[n - nu] = -value
        vectors[:, n - nu] = _flip_odd_sites(column)

    value = d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * math.cosh(y)
    if value <= 0.0:
        raise NumericError(f"hyperbolic eigenvalue collapsed (lambda^2={value:.3e})")
    value = math.sqrt(value)
    norm = math.sqrt(2.0) / math.sqrt(math.sinh((n + 1) * y) / math.sinh(y) - (n + 1))
    sign_b = 1.0 if half % 2 == 1 else -1.0
    column = np.empty(n)
    column[even_mask] = norm * np.power(-1.0, k_even // 2) * np.sinh(0.5 * k_even * y)
    column[~even_mask] = (
        sign_b * norm * np.power(-1.0, (n - k_odd + 1) // 2) * np.sinh(0.5 * (n - k_odd + 1) * y)
    )
    lam[half - 1] = value
    vectors[:, half - 1] = column
    lam[half] = -value
    vectors[:, half] = _flip_odd_sites(column)

    _validate_eigensystem(lam, vectors, build_coupling_matrix(spec), paired=True)
    return EigenSystem(eigenvalues=lam, vectors=vectors, provenance=PROVENANCE_ANALYTIC_EVEN)


def eigensystem_odd(spec: ChainSpec) -> EigenSystem:
    """Closed-form eigensystem of an odd chain, any positive delta.

    Writing theta_nu = 2 pi nu / (N+1), the nonzero levels are
    +-d1*sqrt(1 + 2 delta cos(theta_nu) + delta^2); even sites hold
    A*sin(pi nu j/(N+1)) and odd sites the delta-weighted combination
    of the two neighbouring even-site sines.  The zero mode lives on
    odd sites only, with geometrically decaying weight (-delta)^((N-j)/2).
    """
    spec.require_zero_larmor("eigensystem_odd")
    n, d1, delta = spec.n_sites, spec.d1, spec.delta
    if n % 2 != 1:
        raise ValidationError(f"eigensystem_odd needs an odd chain, got N={n}")
    m = (n - 1) // 2

    j = np.arange(1, n + 1)
    odd_mask = j % 2 == 1
    j_even = j[~odd_mask]
    j_odd = j[odd_mask]

    lam = np.empty(n)
    vectors = np.empty((n, n))
    amp = math.sqrt(2.0 / (n + 1))

    for nu in range(1, m + 1):
        theta = 2.0 * math.pi * nu / (n + 1)
        value = d1 * math.sqrt(1.0 + 2.0 * delta * math.cos(theta) + delta * delta)
        phase = math.pi * nu / (n + 1)
        column = np.empty(n)
        column[~odd_mask] = amp * np.sin(phase * j_even)
        column[odd_mask] = (amp * d1 / value) * (
            delta * np.sin(phase * (j_odd - 1)) + np.sin(phase * (j_odd + 1))
        )
        lam[nu - 1] = value
        vectors[:, nu - 1] = column
        lam[n - nu] = -value
        vectors[:, n - nu] = _flip_odd_sites(column)

    if abs(delta - 1.0) < 1e-8:
        weight = math.sqrt(2.0 / (n + 1))
    else:
        try:
            weight = math.sqrt((delta * delta - 1.0) / (delta ** (n + 1) - 1.0))
        except OverflowError:
            weight = 0.0  # validation below reports the breakdown
    column = np.zeros(n)
    column[odd_mask] = weight * np.power(-delta, (n - j_odd) // 2)
    lam[m] = 0.0
    vectors[:, m] = column

    _validate_eigensystem(lam, vectors, build_coupling_matrix(spec), paired=True)
    return EigenSystem(eigenvalues=lam, vectors=vectors, provenance=PROVENANCE_ANALYTIC_ODD)


def eigensystem_numeric(matrix: CouplingMatrix) -> EigenSystem:
    """Diagonalise a tridiagonal coupling matrix numerically.

    Implicit-shift QL/QR on the symmetric tridiagonal bands (LAPACK),
    reordered to descending eigenvalues.  Each column is normalised to
    a deterministic sign: its first component of appreciable size is
    made positive.
    """
    try:
        values, vectors = scipy.linalg.eigh_tridiagonal(matrix.diagonal, matrix.offdiagonal)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"tridiagonal diagonalisation failed: {exc}") from exc
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for col in range(values.size):
        column = vectors[:, col]
        big = np.abs(column) > 1e-12 * np.max(np.abs(column))
        lead = int(np.argmax(big))
        if column[lead] < 0.0:
            vectors[:, col] = -column
    paired = bool(np.all(matrix.diagonal == 0.0))
    _validate_eigensystem(values, vectors, matrix, paired=paired)
    return EigenSystem(eigenvalues=values, vectors=vectors, provenance=PROVENANCE_NUMERIC)


def eigensystem_for(spec: ChainSpec, analytic_max_n: int = 12) -> EigenSystem:
    """Pick the construction route for a chain description.

    Closed forms cover zero-larmor chains: odd N at any ratio, even N
    above the threshold up to analytic_max_n sites.  Everything else,
    including long even chains whose hyperbolic normalisation grows
    exponentially, goes to the numeric solver.
    """
    if spec.larmor_is_zero():
        if spec.n_sites % 2 == 1:
            return eigensystem_odd(spec)
        threshold = spec.even_regime_threshold()
        if spec.delta > threshold * (1.0 + _THRESHOLD_MARGIN) and spec.n_sites <= analytic_max_n:
            return eigensystem_even(spec)
    return eigensystem_numeric(build_coupling_matrix(spec))
