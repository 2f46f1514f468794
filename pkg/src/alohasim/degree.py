"""Burst degree distributions for repetition-based slotted random access.

A distribution assigns probabilities to small integer repetition degrees.
Each packet samples a degree and is transmitted as that many replica
bursts; distributions are named by polynomial notation such as ``x^2`` or
``0.5x^2+0.28x^3+0.22x^8``, where the exponent is the degree and the
coefficient its probability.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

PROBABILITY_SUM_TOL = 1e-9

_TERM_PATTERN = re.compile(r"(\d*\.?\d+)?x(?:\^(\d+))?\Z")


def _canonical_label(terms: tuple[tuple[int, float], ...]) -> str:
    parts = []
    for degree, probability in terms:
        var = "x" if degree == 1 else f"x^{degree}"
        parts.append(var if probability == 1.0 else f"{probability:g}{var}")
    return "+".join(parts)


@dataclass(frozen=True)
class DegreeDistribution:
    """Immutable set of (degree, probability) terms, degrees ascending.

    Construction validates everything: degrees are distinct positive
    integers, probabilities are strictly positive, and the probabilities
    sum to one within ``PROBABILITY_SUM_TOL``.
    """

    terms: tuple[tuple[int, float], ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("a degree distribution needs at least one term")
        normalized = []
        for degree, probability in self.terms:
            if int(degree) != degree or degree < 1:
                raise ValueError(f"replica degree must be a positive integer, got {degree!r}")
            if not 0.0 < probability <= 1.0:
                raise ValueError(f"term probability must lie in (0, 1], got {probability!r}")
            normalized.append((int(degree), float(probability)))
        normalized.sort()
        degrees = [d for d, _ in normalized]
        if len(set(degrees)) != len(degrees):
            raise ValueError("degrees must be pairwise distinct")
        total = sum(p for _, p in normalized)
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise ValueError(f"term probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "terms", tuple(normalized))
        if not self.label:
            object.__setattr__(self, "label", _canonical_label(self.terms))
        cumulative = tuple(float(c) for c in np.cumsum([p for _, p in normalized]))
        object.__setattr__(self, "_cumulative", cumulative)
        object.__setattr__(self, "_cumulative_arr", np.asarray(cumulative))
        object.__setattr__(self, "_degrees_arr", np.asarray(degrees, dtype=np.int64))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.terms)

    @property
    def max_degree(self) -> int:
        return self.terms[-1][0]

    @property
    def mean_degree(self) -> float:
        return float(sum(d * p for d, p in self.terms))

    def sample_degree(self, u: float) -> int:
        """Inverse-CDF lookup; a ``u`` exactly on a bin edge takes the higher bin."""
        if not 0.0 <= u < 1.0:
            raise ValueError(f"u must lie in [0, 1), got {u!r}")
        index = bisect_right(self._cumulative, u)
        if index >= len(self.terms):
            # float summation slack at the top edge
            index = len(self.terms) - 1
        return self.terms[index][0]

    def sample_degrees(self, u: np.ndarray) -> np.ndarray:
        """Vectorised ``sample_degree`` over an array of uniforms."""
        u = np.asarray(u, dtype=float)
        if u.size and (float(u.min()) < 0.0 or float(u.max()) >= 1.0):
            raise ValueError("all u must lie in [0, 1)")
        index = np.searchsorted(self._cumulative_arr, u, side="right")
        return self._degrees_arr[np.minimum(index, len(self.terms) - 1)]


def make_regular(degree: int) -> DegreeDistribution:
    """Distribution that always emits ``degree`` replicas."""
    if degree < 1:
        raise ValueError(f"replica degree must be >= 1, got {degree!r}")
    return DegreeDistribution(((int(degree), 1.0),))


#: Named irregular profile mixing degrees 2, 3 and 8.  Shipped as a
#: convenient stand-in for "an irregular distribution with a heavy tail";
#: the exact coefficients are a documented default, not a tuned optimum.
IRSA8 = DegreeDistribution(((2, 0.5), (3, 0.28), (8, 0.22)), label="irsa8")

PRESETS = {"irsa8": IRSA8}


def parse_distribution(text: str) -> DegreeDistribution:
    """Parse ``0.5x^2+0.28x^3`` style notation or a preset name.

    Whitespace is ignored, a missing coefficient means 1, and a bare ``x``
    means degree 1.
    """
    compact = "".join(text.split())
    if not compact:
        raise ValueError("empty distribution")
    preset = PRESETS.get(compact.lower())
    if preset is not None:
        return preset
    terms = []
    for chunk in compact.split("+"):
        match = _TERM_PATTERN.fullmatch(chunk)
        if match is None:
            raise ValueError(f"unparseable distribution term {chunk!r} in {text!r}")
        coefficient = float(match.group(1)) if match.group(1) else 1.0
        degree = int(match.group(2)) if match.group(2) else 1
        terms.append((degree, coefficient))
    return DegreeDistribution(tuple(terms))
