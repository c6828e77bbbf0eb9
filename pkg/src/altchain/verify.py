"""End-to-end consistency suite.

Runs every cross-check the library promises: analytic spectra against
the tridiagonal solver, reduced probability forms against the spectral
sum, the subspace dynamics against the full Hilbert-space propagator,
probability caps against sampled curves, and determinism of the ratio
search.  Checks run in order and the first violation aborts with the
offending parameters in the message.
"""

from __future__ import annotations

import math
import os
from typing import Callable, Iterable, TextIO

import numpy as np

from ._util import WORKERS_ENV
from .bounds import bound_report
from .chain import ChainSpec, build_coupling_matrix
from .dynamics import (
    full_space_amplitude,
    node_amplitudes,
    node_probability,
    transfer_probability,
    transfer_probability_even_form,
    transfer_probability_odd_form,
)
from .errors import VerificationError
from .ideal4 import ideal_solutions, n4_frequencies, n4_probability
from .roots import bracket_sign_changes
from .search import first_peak, optimize_delta
from .spectral import (
    eigensystem_even,
    eigensystem_for,
    eigensystem_numeric,
    eigensystem_odd,
    solve_even_roots,
    _x_residual,
)

_EVEN_GRID = [(n, d) for n in range(4, 17, 2) for d in (2.0, 2.38, 3.0)]
_ODD_GRID = [(n, d) for n in range(3, 16, 2) for d in (1.0, 1.5, 2.0)]
_TRIADS = [(4, 2.272), (6, 2.373), (8, 2.557)]


def _fail(name: str, detail: str):
    raise VerificationError(f"{name}: {detail}")


def _check_columns_match(name: str, a: np.ndarray, b: np.ndarray, tol: float, ctx: str):
    for col in range(a.shape[1]):
        u, v = a[:, col], b[:, col]
        diff = min(float(abs(u - v).max()), float(abs(u + v).max()))
        if not diff <= tol:
            _fail(name, f"{ctx}: column {col + 1} differs by {diff:.3e} (tol {tol:.0e})")


def _eigen_agreement(name: str, grid, analytic: Callable[[ChainSpec], object]):
    for n, d in grid:
        spec = ChainSpec(n, d)
        ana = analytic(spec)
        num = eigensystem_numeric(build_coupling_matrix(spec))
        lam_diff = float(abs(ana.eigenvalues - num.eigenvalues).max())
        if not lam_diff <= 1e-9:
            _fail(name, f"N={n} delta={d}: eigenvalues differ by {lam_diff:.3e}")
        _check_columns_match(name, ana.vectors, num.vectors, 1e-8, f"N={n} delta={d}")


def check_even_agreement() -> None:
    _eigen_agreement("even-agreement", _EVEN_GRID, eigensystem_even)


def check_odd_agreement() -> None:
    _eigen_agreement("odd-agreement", _ODD_GRID, eigensystem_odd)


def check_even_root_count() -> None:
    for n, d in _EVEN_GRID:
        spec = ChainSpec(n, d)
        cells = bracket_sign_changes(
            lambda x: _x_residual(x, n, d), 0.0, math.pi, 10 * n
        )
        if len(cells) != n // 2 - 1:
            _fail(
                "even-root-count",
                f"N={n} delta={d}: {len(cells)} sign changes, want {n // 2 - 1}",
            )
        solve_even_roots(spec)


def check_lambda_min_decreasing() -> None:
    previous = math.inf
    for n in range(4, 17, 2):
        eig = eigensystem_even(ChainSpec(n, 2.38))
        lam = eig.smallest_positive()
        if not lam < previous:
            _fail(
                "lambda-min-decreasing",
                f"N={n} delta=2.38: lambda_min {lam:.6e} not below {previous:.6e}",
            )
        previous = lam


def check_spectral_negation() -> None:
    for n, d in _EVEN_GRID + _ODD_GRID:
        eig = eigensystem_for(ChainSpec(n, d))
        lam = np.sort(eig.eigenvalues)
        diff = float(abs(lam + lam[::-1]).max())
        if not diff <= 1e-10:
            _fail("spectral-negation", f"N={n} delta={d}: asymmetry {diff:.3e}")


def check_form_equivalence() -> None:
    times = np.linspace(0.0, 80.0, 1000)
    for n, d in [(4, 2.38), (6, 2.373), (8, 2.557), (12, 2.38)]:
        spec = ChainSpec(n, d)
        reference = transfer_probability(eigensystem_for(spec), times)
        roots = solve_even_roots(spec)
        reduced = transfer_probability_even_form(spec, roots, times)
        diff = float(abs(reference - reduced).max())
        if not diff <= 1e-10:
            _fail("form-equivalence", f"even N={n} delta={d}: deviation {diff:.3e}")
    for n, d in [(3, 1.0), (5, 1.0), (5, 2.0), (9, 1.5), (15, 2.0)]:
        spec = ChainSpec(n, d)
        reference = transfer_probability(eigensystem_for(spec), times)
        reduced = transfer_probability_odd_form(spec, times)
        diff = float(abs(reference - reduced).max())
        if not diff <= 1e-10:
            _fail("form-equivalence", f"odd N={n} delta={d}: deviation {diff:.3e}")


def check_unitarity() -> None:
    times = np.linspace(0.0, 60.0, 200)
    cases = [
        ChainSpec(4, 2.38),
        ChainSpec(5, 1.0),
        ChainSpec(8, 0.8),
        ChainSpec(11, 2.0),
        ChainSpec(6, 1.7, larmor=(0.3, -0.2, 0.5, 0.0, 1.1, -0.7)),
    ]
    for spec in cases:
        eig = eigensystem_for(spec)
        amps = node_amplitudes(eig, times)
        total = np.sum(np.abs(amps) ** 2, axis=1)
        diff = float(abs(total - 1.0).max())
        if not diff <= 1e-10:
            _fail(
                "unitarity",
                f"N={spec.n_sites} delta={spec.delta}: sum deviates by {diff:.3e}",
            )


def check_full_space_oracle() -> None:
    times = np.linspace(0.0, 30.0, 50)
    cases = [(n, 2.38, None) for n in range(2, 9)]
    cases += [(5, 0.7, None), (6, 1.7, (0.3, -0.2, 0.5, 0.0, 1.1, -0.7))]
    for n, d, larmor in cases:
        spec = ChainSpec(n, d, larmor=larmor)
        eig = eigensystem_for(spec)
        subspace = np.asarray(transfer_probability(eig, times))
        for t, expected in zip(times, subspace):
            full = abs(full_space_amplitude(spec, float(t))) ** 2
            if not abs(full - expected) <= 1e-8:
                _fail(
                    "full-space-oracle",
                    f"N={n} delta={d} t={t:.3f}: subspace {expected:.12f} "
                    f"vs full {full:.12f}",
                )


def check_bound_dominance() -> None:
    times = np.linspace(1e-3, 500.0, 50000)
    for n in (5, 7, 9):
        for d in (1.0, 1.5, 2.0):
            spec = ChainSpec(n, d)
            cap = bound_report(spec).p_bound
            peak = float(np.max(transfer_probability(eigensystem_for(spec), times)))
            if not peak <= cap + 1e-9:
                _fail(
                    "bound-dominance",
                    f"N={n} delta={d}: sampled max {peak:.9f} exceeds cap {cap:.9f}",
                )


def check_cosine_identity() -> None:
    for n in range(3, 16, 2):
        total = sum(
            math.cos(2.0 * math.pi * j / (n + 1)) for j in range(1, (n - 1) // 2 + 1)
        )
        if not abs(total) <= 1e-12:
            _fail("cosine-identity", f"N={n}: partial sum {total:.3e}")


def check_f2_limit() -> None:
    for n in range(3, 16, 2):
        value = bound_report(ChainSpec(n, 1.0 + 1e-9)).f2_value
        limit = 2.0 / (n + 1)
        if not abs(value - limit) <= 1e-8:
            _fail("f2-limit", f"N={n}: {value:.12f} vs limit {limit:.12f}")


def check_ideal_family() -> None:
    solutions = ideal_solutions(100)
    if not solutions:
        _fail("ideal-family", "no solutions emitted for max_product=100")
    for sol in solutions:
        if not sol.validated:
            _fail("ideal-family", f"(a={sol.a}, b={sol.b}) emitted unvalidated")
        p = n4_probability(sol.delta_bar, sol.t_bar)
        if not p >= 1.0 - 1e-9:
            _fail("ideal-family", f"(a={sol.a}, b={sol.b}): P={p:.15f}")
        expected_t = math.pi * math.sqrt(sol.a * sol.b)
        if sol.t_bar != expected_t:
            _fail(
                "ideal-family",
                f"(a={sol.a}, b={sol.b}): t_bar {sol.t_bar!r} != pi*sqrt(ab)",
            )
        small, large = n4_frequencies(sol.delta_bar)
        if not abs(small * large - 1.0) <= 1e-12:
            _fail(
                "ideal-family",
                f"(a={sol.a}, b={sol.b}): frequency product {small * large:.15f}",
            )
    t_min = min(sol.t_bar for sol in solutions)
    if not abs(t_min - math.pi * math.sqrt(3.0)) <= 1e-12:
        _fail("ideal-family", f"min t_bar {t_min:.12f} != pi*sqrt(3)")


def check_peak_estimate() -> None:
    for n, d in _TRIADS:
        triad = first_peak(ChainSpec(n, d))
        rel = abs(triad.t_h - triad.lambda_min_estimate) / triad.t_h
        if not rel <= 0.10:
            _fail(
                "peak-estimate",
                f"N={n} delta={d}: t_h {triad.t_h:.4f} vs estimate "
                f"{triad.lambda_min_estimate:.4f} ({rel:.1%})",
            )


def check_search_determinism() -> None:
    saved = os.environ.get(WORKERS_ENV)
    results = []
    try:
        for workers in ("1", "4"):
            os.environ[WORKERS_ENV] = workers
            results.append(optimize_delta(4, 2.25, 2.29))
    finally:
        if saved is None:
            os.environ.pop(WORKERS_ENV, None)
        else:
            os.environ[WORKERS_ENV] = saved
    a, b = results
    if (a.delta_h, a.t_h, a.p_h) != (b.delta_h, b.t_h, b.p_h):
        _fail("search-determinism", f"1 worker {a} vs 4 workers {b}")


def check_inner_nodes() -> None:
    for n, d in _TRIADS:
        spec = ChainSpec(n, d)
        eig = eigensystem_for(spec)
        t_h = first_peak(spec).t_h
        times = np.linspace(1e-4, 2.0 * t_h, 8000)
        for node in range(2, n):
            peak = float(np.max(node_probability(eig, node, times)))
            if not peak < 0.9:
                _fail(
                    "inner-nodes",
                    f"N={n} delta={d} node {node}: max P {peak:.4f} >= 0.9",
                )


def check_odd_amplitude_decay() -> None:
    times = np.linspace(1e-4, 50.0, 50000)
    peaks = {}
    for d in (1.0, 2.0):
        eig = eigensystem_for(ChainSpec(5, d))
        peaks[d] = float(np.max(transfer_probability(eig, times)))
    if not peaks[2.0] < peaks[1.0]:
        _fail(
            "odd-amplitude-decay",
            f"N=5: max at delta=2 ({peaks[2.0]:.6f}) not below "
            f"delta=1 ({peaks[1.0]:.6f})",
        )


CHECKS: list[tuple[str, Callable[[], None]]] = [
    ("even-agreement", check_even_agreement),
    ("odd-agreement", check_odd_agreement),
    ("even-root-count", check_even_root_count),
    ("lambda-min-decreasing", check_lambda_min_decreasing),
    ("spectral-negation", check_spectral_negation),
    ("form-equivalence", check_form_equivalence),
    ("unitarity", check_unitarity),
    ("full-space-oracle", check_full_space_oracle),
    ("bound-dominance", check_bound_dominance),
    ("cosine-identity", check_cosine_identity),
    ("f2-limit", check_f2_limit),
    ("ideal-family", check_ideal_family),
    ("peak-estimate", check_peak_estimate),
    ("search-determinism", check_search_determinism),
    ("inner-nodes", check_inner_nodes),
    ("odd-amplitude-decay", check_odd_amplitude_decay),
]


def run_all(stream: TextIO | None = None, checks: Iterable[str] | None = None) -> None:
    """Run the suite, printing one status line per check.

    Raises VerificationError on the first failing check; the message
    carries the check name and the offending parameters.
    """
    wanted = None if checks is None else set(checks)
    known = {name for name, _ in CHECKS}
    if wanted is not None and not wanted <= known:
        raise VerificationError(f"unknown checks: {sorted(wanted - known)}")
    for name, fn in CHECKS:
        if wanted is not None and name not in wanted:
            continue
        if stream is not None:
            stream.write(f"{name:<24s} ")
            stream.flush()
        try:
            fn()
        except VerificationError:
            if stream is not None:
                stream.write("FAIL\n")
            raise
        if stream is not None:
            stream.write("ok\n")
