"""Neighborhood Attack voter model: simulation, exact oracle and normal-approximation bounds."""

from fractions import Fraction

from ._core import (
    Graph,
    NbattackError,
    __version__,
    assembled_bound,
    fkg_violations,
    kolmogorov_to_normal,
    pair_counts,
    q_profile,
    rollin_bound,
    simulate,
    solve_exact,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    step,
    theorem_bound,
    wasserstein1_to_normal,
)
from . import _core


def _frac(pair):
    return Fraction(pair[0], pair[1])


def delta_y_pmf(graph, state, p=Fraction(1, 2)):
    """Exact law of the one-step change in Y from `state`, as {value: Fraction}."""
    p = Fraction(p)
    raw = _core._delta_y_pmf(graph, list(state), (p.numerator, p.denominator))
    return {v: _frac(w) for v, w in raw.items()}


def cond_mean_delta_y(graph, state):
    return _frac(_core._cond_moments(graph, list(state))[0])


def cond_second_moment_delta_y(graph, state):
    return _frac(_core._cond_moments(graph, list(state))[1])


def stein_lambda(r, n):
    return _frac(_core._stein_lambda(r, n))


def sigma2_bounds(r, n):
    lo, hi = _core._sigma2_bounds(r, n)
    return _frac(lo), _frac(hi)


__all__ = [
    "Graph",
    "NbattackError",
    "__version__",
    "assembled_bound",
    "cond_mean_delta_y",
    "cond_second_moment_delta_y",
    "delta_y_pmf",
    "fkg_violations",
    "kolmogorov_to_normal",
    "pair_counts",
    "q_profile",
    "rollin_bound",
    "sigma2_bounds",
    "simulate",
    "solve_exact",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "stein_lambda",
    "step",
    "theorem_bound",
    "wasserstein1_to_normal",
]
