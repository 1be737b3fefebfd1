"""Weighted superpositions of coherent states on the position line.

A coherent state with real amplitude ``mu`` is the minimum-uncertainty
Gaussian wave packet

    <q|mu> = (2/pi)^(1/4) * exp(-(q - mu)^2),

so its position density is a normal distribution centred at ``q = mu``
with standard deviation 1/2, and its momentum density has standard
deviation 1 (hbar = 1).  A superposition is a finite list of
(amplitude, coefficient) terms; the state is

    |S> = N^(-1/2) * sum_j c_j |mu_j>,   N = sum_jk c_j c_k <mu_k|mu_j>.

Everything in this module is pure and immutable, so values can be shared
freely across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import gammaln

__all__ = [
    "SuperpositionSpec",
    "FockExpansion",
    "overlap",
    "normalization",
    "position_wavefunction",
    "fock_amplitudes",
    "min_fock_truncation",
    "preset",
    "PRESET_NAMES",
]

# Position-space amplitude prefactor (2/pi)^(1/4).
_AMP_NORM = (2.0 / math.pi) ** 0.25

#: Fraction of the squared norm allowed beyond the Fock truncation.
TRUNCATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SuperpositionSpec:
    """A finite superposition ``sum_j coeff_j |mu_j>`` of line coherent states.

    ``terms`` is a sequence of ``(mu, coeff)`` pairs with real line
    amplitude ``mu`` and signed real weight ``coeff``.
    """

    terms: Tuple[Tuple[float, float], ...]
    label: Optional[str] = None

    def __post_init__(self):
        terms = tuple((float(m), float(c)) for m, c in self.terms)
        if not terms:
            raise ValueError("superposition needs at least one term")
        for m, c in terms:
            if not (math.isfinite(m) and math.isfinite(c)):
                raise ValueError(f"non-finite term ({m}, {c})")
        if all(c == 0.0 for _, c in terms):
            raise ValueError("at least one coefficient must be nonzero")
        object.__setattr__(self, "terms", terms)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([m for m, _ in self.terms])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms])

    @property
    def max_amplitude(self) -> float:
        return float(np.max(np.abs(self.amplitudes)))

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """True if the term list is invariant under mu -> -mu."""
        return self._matches_negated(sign=+1.0, tol=tol)

    def is_antisymmetric(self, tol: float = 1e-12) -> bool:
        """True if negating every amplitude flips every coefficient's sign."""
        return self._matches_negated(sign=-1.0, tol=tol)

    def _matches_negated(self, sign: float, tol: float) -> bool:
        want = sorted((-m, sign * c) for m, c in self.terms)
        have = sorted(self.terms)
        return all(
            abs(a - b) <= tol and abs(x - y) <= tol
            for (a, x), (b, y) in zip(have, want)
        )


@dataclass(frozen=True)
class FockExpansion:
    """Real Fock-basis amplitudes ``a_n`` of a normalized state, n = 0..nmax.

    The captured mass ``sum a_n^2`` lies within ``TRUNCATION_TOLERANCE``
    of one; the remainder is the (discarded) tail beyond ``nmax``.
    """

    amplitudes: np.ndarray
    nmax: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (self.nmax + 1,):
            raise ValueError("amplitude array must have length nmax + 1")

    @property
    def captured_mass(self) -> float:
        return float(np.sum(self.amplitudes**2))


def overlap(mu1: float, mu2: float) -> float:
    """Overlap <mu2|mu1> = exp(-(mu1 - mu2)^2 / 2) of two line coherent states.

    Symmetric in its arguments, equal to 1 iff the amplitudes coincide.
    """
    d = float(mu1) - float(mu2)
    return math.exp(-0.5 * d * d)


def gram_matrix(spec: SuperpositionSpec) -> np.ndarray:
    """Pairwise overlap matrix G[j, k] = <mu_k|mu_j> for the spec's terms."""
    mus = spec.amplitudes
    d = mus[:, None] - mus[None, :]
    return np.exp(-0.5 * d * d)


def normalization(spec: SuperpositionSpec) -> float:
    """Squared norm N = sum_jk c_j c_k <mu_k|mu_j> of the raw superposition.

    Raises ValueError for degenerate specs whose Gram sum is not strictly
    positive at working precision (an unnormalizable state).
    """
    cs = spec.coefficients
    n = float(cs @ gram_matrix(spec) @ cs)
    if n <= 1e-15 * float(np.sum(cs * cs)):
        raise ValueError("unnormalizable state: Gram sum is not positive")
    return n


def position_wavefunction(spec: SuperpositionSpec, q) -> np.ndarray | float:
    """Normalized position wavefunction psi(q) of the superposition.

    psi(q) = N^(-1/2) sum_j c_j (2/pi)^(1/4) exp(-(q - mu_j)^2); real-valued
    and square-normalized to one.  Accepts scalars or arrays.
    """
    qa = np.asarray(q, dtype=float)
    root_n = math.sqrt(normalization(spec))
    out = np.zeros_like(qa)
    for m, c in spec.terms:
        out = out + c * np.exp(-((qa - m) ** 2))
    out = out * (_AMP_NORM / root_n)
    if np.isscalar(q) or qa.ndim == 0:
        return float(out)
    return out


def min_fock_truncation(spec: SuperpositionSpec) -> int:
    """Smallest admissible nmax, max(64, ceil(mu^2 + 10 mu + 16)) at mu = mu_max.

    Keeps the Poisson tail mass of every component below 1e-12.
    """
    m = spec.max_amplitude
    return max(64, int(math.ceil(m * m + 10.0 * m + 16.0)))


def fock_amplitudes(spec: SuperpositionSpec, nmax: int) -> FockExpansion:
    """Fock-basis amplitudes a_n = N^(-1/2) sum_j c_j e^(-mu_j^2/2) mu_j^n / sqrt(n!).

    Factorials are handled through log-gamma so large photon numbers do not
    overflow.  ``nmax`` below the truncation rule raises ValueError.
    """
    floor = min_fock_truncation(spec)
    if nmax < floor:
        raise ValueError(
            f"truncation too small: nmax={nmax} below tail rule minimum {floor}"
        )
    ns = np.arange(nmax + 1)
    log_fact_half = 0.5 * gammaln(ns + 1.0)
    total = np.zeros(nmax + 1)
    for m, c in spec.terms:
        if c == 0.0:
            continue
        if m == 0.0:
            contrib = np.zeros(nmax + 1)
            contrib[0] = c
        else:
            logs = -0.5 * m * m + ns * math.log(abs(m)) - log_fact_half
            contrib = c * np.exp(logs)
            if m < 0.0:
                contrib[1::2] *= -1.0
        total += contrib
    amps = total / math.sqrt(normalization(spec))
    return FockExpansion(amplitudes=amps, nmax=int(nmax))


_CAT_RE = re.compile(r"^(even|odd)-cat\(([^)]+)\)$")

#: Built-in spec names accepted by :func:`preset`.
PRESET_NAMES = ("Y1", "Y2", "Y3", "vacuum", "even-cat(a)", "odd-cat(a)")

_CASE_AMPLITUDES = {"Y1": (4.0, 7.0), "Y2": (1.0, 6.0), "Y3": (2.0, 6.0)}


def preset(name: str) -> SuperpositionSpec:
    """Named example states.

    ``Y1`` (4, 7), ``Y2`` (1, 6) and ``Y3`` (2, 6) are the even four-component
    superpositions at amplitudes {+a, -a, +b, -b} with unit coefficients;
    ``even-cat(a)`` / ``odd-cat(a)`` are the two-component cat states
    |a> +/- |-a>; ``vacuum`` is the single term at the origin.
    """
    key = name.strip()
    if key in _CASE_AMPLITUDES:
        a, b = _CASE_AMPLITUDES[key]
        return SuperpositionSpec(
            terms=((a, 1.0), (-a, 1.0), (b, 1.0), (-b, 1.0)), label=key
        )
    if key == "vacuum":
        return SuperpositionSpec(terms=((0.0, 1.0),), label="vacuum")
    m = _CAT_RE.match(key)
    if m:
        sign = 1.0 if m.group(1) == "even" else -1.0
        try:
            a = float(m.group(2))
        except ValueError:
            raise ValueError(f"unknown preset: bad cat amplitude {m.group(2)!r}")
        return SuperpositionSpec(terms=((a, 1.0), (-a, sign)), label=key)
    raise ValueError(f"unknown preset: {name!r}")
