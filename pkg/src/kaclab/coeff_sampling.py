"""Coefficient laws for Kac polynomials and reproducible random streams.

Every law is centred with unit variance. Streams are counter based: a
``SeedSpec`` names a (master seed, stream index) pair, and the pair is
mixed by :class:`numpy.random.SeedSequence` into a Philox key, so
parallel workers that own distinct stream indices never overlap and a
given pair always reproduces the same draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ParameterError

KINDS = ("gaussian", "rademacher", "uniform_symmetric", "pareto_symmetrized")

DEFAULT_EPSILON0 = 0.25
DEFAULT_PARETO_EXPONENT = 2.5

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    """A reproducible random stream: ``(master_seed, stream_index)``."""

    master_seed: int = 0
    stream_index: int = 0

    def __post_init__(self):
        if self.stream_index < 0:
            raise ParameterError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            self.master_seed & _MASK64, spawn_key=(int(self.stream_index),)
        )
        return np.random.Generator(np.random.Philox(seq))

    def child(self, index: int) -> "SeedSpec":
        """Stream for task ``index`` under the same master seed.

        Children of stream 0 are streams ``1 + index`` shifted into a
        disjoint block so that nested use never collides with the parent.
        """
        return SeedSpec(self.master_seed, (self.stream_index << 32) + 1 + int(index))


def _abs_moment(kind: str, p: float, exponent: float | None) -> float:
    """Closed form of E|xi|^p for a unit-variance law."""
    if kind == "gaussian":
        return 2 ** (p / 2) * special.gamma((p + 1) / 2) / math.sqrt(math.pi)
    if kind == "rademacher":
        return 1.0
    if kind == "uniform_symmetric":
        return 3 ** (p / 2) / (p + 1)
    alpha = exponent
    if p >= alpha:
        return math.inf
    xm = math.sqrt((alpha - 2) / alpha)
    return alpha * xm**p / (alpha - p)


@dataclass(frozen=True)
class CoefficientDistribution:
    """Law of the coefficients xi_i.

    Parameters
    ----------
    kind : str
        One of ``gaussian``, ``rademacher``, ``uniform_symmetric`` (on
        [-sqrt 3, sqrt 3]) or ``pareto_symmetrized`` (random sign times a
        Pareto variable scaled to unit variance).
    epsilon0 : float
        Moment margin; the law must have a finite ``2 + epsilon0`` moment.
    c0_bound : float, optional
        Declared bound on ``E|xi|^(2+epsilon0)``. Defaults to the exact
        value and may not be smaller than it.
    exponent : float, optional
        Pareto tail exponent, only for ``pareto_symmetrized``.
    """

    kind: str = "gaussian"
    epsilon0: float = DEFAULT_EPSILON0
    c0_bound: float | None = None
    exponent: float | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown coefficient law {self.kind!r}")
        if not self.epsilon0 > 0:
            raise ParameterError("epsilon0 must be positive")
        if self.kind == "pareto_symmetrized":
            if self.exponent is None:
                object.__setattr__(self, "exponent", DEFAULT_PARETO_EXPONENT)
            if not self.exponent > 2:
                raise ParameterError("pareto exponent must exceed 2 (finite variance)")
            if not self.exponent > 2 + self.epsilon0:
                raise ParameterError(
                    f"pareto exponent {self.exponent} leaves no finite "
                    f"(2+{self.epsilon0})-moment"
                )
        elif self.exponent is not None:
            raise ParameterError(f"exponent is meaningless for {self.kind}")
        exact = self.analytic_moment()
        if self.c0_bound is None:
            object.__setattr__(self, "c0_bound", exact)
        elif self.c0_bound < exact:
            raise ParameterError(
                f"c0_bound={self.c0_bound} is below the exact moment {exact:.6g}"
            )

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def variance(self) -> float:
        return 1.0

    def analytic_moment(self, p: float | None = None) -> float:
        """``E|xi|^p``; ``p`` defaults to ``2 + epsilon0``."""
        if p is None:
            p = 2 + self.epsilon0
        return _abs_moment(self.kind, p, self.exponent)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(size)
        if self.kind == "rademacher":
            return 2.0 * rng.integers(0, 2, size=size) - 1.0
        if self.kind == "uniform_symmetric":
            return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size)
        alpha = self.exponent
        xm = math.sqrt((alpha - 2) / alpha)
        # numpy's pareto is Lomax; shift by one for the classical law
        mag = xm * (1.0 + rng.pareto(alpha, size))
        sign = 2.0 * rng.integers(0, 2, size=size) - 1.0
        return sign * mag

    def spec_string(self) -> str:
        if self.kind == "uniform_symmetric":
            return "uniform"
        if self.kind == "pareto_symmetrized":
            return f"pareto:{self.exponent:g}"
        return self.kind


def parse_distribution(text: str, epsilon0: float = DEFAULT_EPSILON0) -> CoefficientDistribution:
    """Parse ``gaussian``, ``rademacher``, ``uniform`` or ``pareto:<exponent>``."""
    text = text.strip().lower()
    if text in ("gaussian", "rademacher"):
        return CoefficientDistribution(text, epsilon0)
    if text in ("uniform", "uniform_symmetric"):
        return CoefficientDistribution("uniform_symmetric", epsilon0)
    if text.startswith("pareto"):
        _, _, arg = text.partition(":")
        try:
            exponent = float(arg) if arg else DEFAULT_PARETO_EXPONENT
        except ValueError:
            raise ParameterError(f"bad pareto exponent in {text!r}") from None
        return CoefficientDistribution("pareto_symmetrized", epsilon0, exponent=exponent)
    raise ParameterError(f"unknown distribution spec {text!r}")


def sample_coefficients(dist: CoefficientDistribution, n: int, seed: SeedSpec) -> np.ndarray:
    """Draw ``n + 1`` i.i.d. coefficients xi_0..xi_n from ``dist``."""
    if n < 0:
        raise ParameterError("degree must be non-negative")
    return dist.sample(seed.generator(), n + 1)


def moment_report(dist: CoefficientDistribution, sample_count: int, seed: SeedSpec) -> dict:
    """Empirical mean, variance and ``(2 + epsilon0)`` absolute moment.

    The variance is taken about the law's known mean 0, so a Rademacher
    sample reports exactly 1.
    """
    if sample_count < 100:
        raise ParameterError("sample_count must be at least 100")
    x = dist.sample(seed.generator(), sample_count)
    p = 2 + dist.epsilon0
    return {
        "mean": float(np.mean(x)),
        "variance": float(np.mean(x * x)),
        "abs_moment_2_eps": float(np.mean(np.abs(x) ** p)),
        "exponent": p,
        "sample_count": sample_count,
    }
