"""Excitation dynamics: site occupation probabilities along the chain.

The excitation starts on site 1.  With eigenpairs (lambda_j, u_j) of
the one-excitation matrix D, the amplitude on site k at time t is

    a_k(t) = sum_j u_kj * u_1j * exp(-i t lambda_j / 2),

and P_k(t) = |a_k(t)|^2; the end-to-end transfer probability is P_N.
The factor 1/2 reflects that the spin Hamiltonian restricted to one
excitation equals D/2.

Two reduced forms rewrite P_N without complex arithmetic: the paired
+-lambda structure of a zero-diagonal chain collapses the sum to pure
sines (even N) or pure cosines plus a zero-mode constant (odd N).
Both are checked against the spectral sum, and the spectral sum in
turn against brute-force evolution of the full 2^N spin space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .chain import ChainSpec, build_coupling_matrix
from .errors import ResourceError, ValidationError
from .spectral import EigenSystem, EvenRootSet

_FULL_SPACE_MAX_SITES = 12
_FULL_SPACE_DENSE_MAX_SITES = 8


@dataclass(frozen=True)
class TransferCurve:
    """Sampled occupation probability of one node over a time grid."""

    times: np.ndarray
    probabilities: np.ndarray
    node: int

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if times.ndim != 1 or times.shape != probs.shape:
            raise ValidationError(
                f"curve shapes mismatch: {times.shape} times, {probs.shape} probabilities"
            )
        if np.any(probs < -1e-9) or np.any(probs > 1.0 + 1e-9):
            raise ValidationError("probabilities leave [0, 1] beyond rounding")
        times.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "node", int(self.node))

    def peak(self) -> tuple[float, float]:
        """(time, probability) of the sampled maximum, earliest on ties."""
        idx = int(np.argmax(self.probabilities))
        return float(self.times[idx]), float(self.probabilities[idx])


def _as_times(t: float | np.ndarray) -> tuple[np.ndarray, bool]:
    times = np.asarray(t, dtype=float)
    scalar = times.ndim == 0
    times = np.atleast_1d(times)
    if np.any(times < 0.0):
        raise ValidationError("times must be non-negative")
    return times, scalar


def node_amplitudes(eig: EigenSystem, times: np.ndarray) -> np.ndarray:
    """Amplitudes on every site, shape (len(times), N); start is site 1."""
    weights = eig.vectors * eig.vectors[0]
    phases = np.exp(-0.5j * np.multiply.outer(times, eig.eigenvalues))
    return phases @ weights.T


def node_probability(eig: EigenSystem, node: int, t: float | np.ndarray) -> float | np.ndarray:
    """Occupation probability of one node; scalar in, scalar out."""
    if not 1 <= node <= eig.size:
        raise ValidationError(f"node must lie in 1..{eig.size}, got {node}")
    times, scalar = _as_times(t)
    weights = eig.vectors[node - 1] * eig.vectors[0]
    amp = np.exp(-0.5j * np.multiply.outer(times, eig.eigenvalues)) @ weights
    probs = np.abs(amp) ** 2
    return float(probs[0]) if scalar else probs


def transfer_probability(eig: EigenSystem, t: float | np.ndarray) -> float | np.ndarray:
    """End-to-end probability P_N(t) from a precomputed eigensystem."""
    return node_probability(eig, eig.size, t)


def sample_curve(
    eig: EigenSystem,
    t_max: float,
    n_samples: int,
    node: int | None = None,
) -> TransferCurve:
    """Uniform probability samples on [0, t_max], endpoints included."""
    if not t_max > 0.0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    if n_samples < 2:
        raise ValidationError(f"need at least 2 samples, got {n_samples}")
    node = eig.size if node is None else node
    times = np.linspace(0.0, float(t_max), int(n_samples))
    probs = node_probability(eig, node, times)
    return TransferCurve(times=times, probabilities=probs, node=node)


def transfer_probability_even_form(
    spec: ChainSpec, roots: EvenRootSet, t: float | np.ndarray
) -> float | np.ndarray:
    """P_N(t) of an even chain as an (N/2)-term sine series.

    P = |2 * [sum_j A_j^2 (-1)^(j+1) sin^2(N x_j/2) sin(t lambda_j/2)
              + (-1)^(N/2+1) A_h^2 sinh^2(N y/2) sin(t lambda_h/2)]|^2.

    The coefficients are the products u_Nj * u_1j of the closed-form
    eigenvectors, so this must agree with the spectral sum to 1e-10.
    """
    spec.require_zero_larmor("transfer_probability_even_form")
    n, d1, d2 = spec.n_sites, spec.d1, spec.d2
    if n % 2 != 0:
        raise ValidationError(f"even-chain form needs even N, got {n}")
    times, scalar = _as_times(t)

    xs = roots.x_roots
    y = roots.y_root
    lam = np.empty(n // 2)
    coeff = np.empty(n // 2)
    if xs.size:
        lam[:-1] = np.sqrt(d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * np.cos(xs))
        norm_sq = 2.0 / ((n + 1) - np.sin((n + 1) * xs) / np.sin(xs))
        signs = np.where(np.arange(1, xs.size + 1) % 2 == 1, 1.0, -1.0)
        coeff[:-1] = norm_sq * signs * np.sin(0.5 * n * xs) ** 2
    lam[-1] = math.sqrt(d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * math.cosh(y))
    norm_sq_h = 2.0 / (math.sinh((n + 1) * y) / math.sinh(y) - (n + 1))
    sign_h = 1.0 if (n // 2 + 1) % 2 == 0 else -1.0
    coeff[-1] = sign_h * norm_sq_h * math.sinh(0.5 * n * y) ** 2

    series = 2.0 * (np.sin(0.5 * np.multiply.outer(times, lam)) @ coeff)
    probs = series**2
    return float(probs[0]) if scalar else probs


def transfer_probability_odd_form(spec: ChainSpec, t: float | np.ndarray) -> float | np.ndarray:
    """P_N(t) of an odd chain as a cosine series plus a constant.

    P = |2 * sum_j A^2 (d1^2 delta / lambda_j^2)
             * sin(2 pi j/(N+1)) sin(pi j (N-1)/(N+1)) cos(lambda_j t/2)
         + B^2 (-delta)^((N-1)/2)|^2,

    with A^2 = 2/(N+1) and B the zero-mode end weight.  The constant
    is the permanent imprint of the zero mode on both chain ends.
    """
    spec.require_zero_larmor("transfer_probability_odd_form")
    n, d1, delta = spec.n_sites, spec.d1, spec.delta
    if n % 2 != 1:
        raise ValidationError(f"odd-chain form needs odd N, got {n}")
    times, scalar = _as_times(t)

    m = (n - 1) // 2
    j = np.arange(1, m + 1)
    theta = 2.0 * math.pi * j / (n + 1)
    lam_sq = d1 * d1 * (1.0 + 2.0 * delta * np.cos(theta) + delta * delta)
    lam = np.sqrt(lam_sq)
    amp_sq = 2.0 / (n + 1)
    coeff = amp_sq * (d1 * d1 * delta / lam_sq) * np.sin(theta) * np.sin(
        math.pi * j * (n - 1) / (n + 1)
    )
    if abs(delta - 1.0) < 1e-8:
        weight_sq = 2.0 / (n + 1)
    else:
        try:
            weight_sq = (delta * delta - 1.0) / (delta ** (n + 1) - 1.0)
        except OverflowError:
            weight_sq = 0.0
    try:
        constant = weight_sq * (-delta) ** ((n - 1) // 2)
    except OverflowError:
        constant = 0.0  # end weight decays as delta^(-(N-1)/2) for huge ratios

    series = 2.0 * (np.cos(0.5 * np.multiply.outer(times, lam)) @ coeff) + constant
    probs = series**2
    return float(probs[0]) if scalar else probs


def _full_space_hamiltonian(spec: ChainSpec) -> scipy.sparse.csr_matrix:
    """Sparse 2^N spin Hamiltonian whose one-excitation block is D/2.

    Site n maps to bit n-1.  Each bond contributes hopping D_n/2
    between basis states whose two bond bits differ; the precession
    term contributes the diagonal sum_n (w_n/4)(2 b_n - 1), which is
    w_n/2 per excited site up to a constant shift (a global phase).
    An excited site carries spin projection +1/2.
    """
    n = spec.n_sites
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    bonds = spec.couplings()
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    for i, strength in enumerate(bonds):
        mask = (1 << i) | (1 << (i + 1))
        differ = ((states >> i) & 1) != ((states >> (i + 1)) & 1)
        src = states[differ]
        rows.append(src)
        cols.append(src ^ mask)
        vals.append(np.full(src.size, 0.5 * strength))
    diag = np.zeros(dim)
    for i, w in enumerate(spec.larmor_rates):
        if w != 0.0:
            bit = (states >> i) & 1
            diag += 0.25 * w * (2.0 * bit - 1.0)
    rows.append(states)
    cols.append(states)
    vals.append(diag)
    ham = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return ham.tocsr()


def _check_full_space_size(n: int) -> None:
    if n > _FULL_SPACE_MAX_SITES:
        raise ResourceError(
            f"full-space evolution is guarded at N <= {_FULL_SPACE_MAX_SITES}, got N={n}"
        )


def full_space_amplitude(spec: ChainSpec, t: float | np.ndarray) -> complex | np.ndarray:
    """Brute-force end-to-end amplitude in the full 2^N spin space.

    Dense eigen-decomposition up to N=8; a norm-controlled series
    (scaled sparse exponential action) for 9 <= N <= 12; larger sizes
    are refused.  |result|^2 must match transfer_probability, which
    validates the one-excitation reduction end to end.
    """
    _check_full_space_size(spec.n_sites)
    times, scalar = _as_times(t)
    n = spec.n_sites
    src = 1 << 0
    tgt = 1 << (n - 1)
    ham = _full_space_hamiltonian(spec)
    if n <= _FULL_SPACE_DENSE_MAX_SITES:
        energy, modes = np.linalg.eigh(ham.toarray())
        weights = modes[tgt] * modes[src]
        amps = np.exp(-1j * np.multiply.outer(times, energy)) @ weights
    else:
        psi0 = np.zeros(ham.shape[0], dtype=complex)
        psi0[src] = 1.0
        amps = np.empty(times.size, dtype=complex)
        for i, ti in enumerate(times):
            state = scipy.sparse.linalg.expm_multiply(-1j * ti * ham, psi0)
            amps[i] = state[tgt]
    return complex(amps[0]) if scalar else amps


def full_space_state(spec: ChainSpec, t: float) -> np.ndarray:
    """Full 2^N state at one time, for conservation-law checks."""
    _check_full_space_size(spec.n_sites)
    times, _ = _as_times(t)
    ham = _full_space_hamiltonian(spec)
    psi0 = np.zeros(ham.shape[0], dtype=complex)
    psi0[1] = 1.0
    if spec.n_sites <= _FULL_SPACE_DENSE_MAX_SITES:
        energy, modes = np.linalg.eigh(ham.toarray())
        return modes @ (np.exp(-1j * float(times[0]) * energy) * (modes.T @ psi0))
    return scipy.sparse.linalg.expm_multiply(-1j * float(times[0]) * ham, psi0)


def z_projection_expectation(state: np.ndarray) -> float:
    """Expectation of the total spin-z projection in a 2^N state."""
    dim = state.size
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValidationError(f"state length {dim} is not a power of two")
    states = np.arange(dim, dtype=np.int64)
    popcount = np.zeros(dim)
    for i in range(n):
        popcount += (states >> i) & 1
    weights = popcount - 0.5 * n
    return float(np.real(np.sum(np.abs(state) ** 2 * weights)))
