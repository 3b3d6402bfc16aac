"""Deterministic splittable random streams and heavy-tailed variate generation.

Every law here is an explicit transform of uniforms, so each sampler doubles
as its own distributional oracle: the Frechet family inverts a closed-form
CDF, and the one-sided stable sampler realizes a known Laplace transform.

Streams are value-like handles (seed, stream_id).  Two handles with equal
fields always reproduce the same variate sequence, independent of process,
thread, or how many other streams were consumed in between.  That property
is what makes chunked and multiprocess sweeps bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Smallest uniform we ever feed into a log; avoids the measure-zero u == 0
# draw turning into a degenerate variate.
_U_FLOOR = 2.0 ** -64


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective scrambling of a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class RngStream:
    """Reproducible variate stream identified by (seed, stream_id).

    The handle itself holds no generator state.  ``generator()`` materializes
    a fresh counter-based generator positioned at the start of the stream, so
    consuming one generator never perturbs another handle.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=self.seed & _MASK64,
            spawn_key=(self.stream_id & _MASK64,),
        )
        return np.random.Generator(np.random.Philox(ss))


def split_stream(stream: RngStream, task_index: int) -> RngStream:
    """Derive the child stream for a task index.

    Children of one parent are pairwise distinct, and splitting is a pure
    function of (parent, task_index): the same split always returns the same
    child no matter what was sampled before.
    """
    if task_index < 0:
        raise ValueError("task_index must be nonnegative")
    child = _mix64(stream.stream_id ^ _mix64((task_index + 1) * _GOLDEN))
    return RngStream(seed=stream.seed, stream_id=child)


class TailKind(Enum):
    BUMP_HEIGHT = "bump_height"
    GAP_LENGTH = "gap_length"


@dataclass(frozen=True)
class TailLaw:
    """Tail family for the structural randomness, indexed by alpha in (0,1).

    ``kind`` records which structural role the law plays: bump heights are
    squared Frechet variates (so their square roots are Frechet), gap lengths
    are plain Frechet variates.  This is the single knob a variant tail
    family would be swapped through.
    """

    alpha: float
    kind: TailKind

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        if not isinstance(self.kind, TailKind):
            raise ValueError("kind must be a TailKind")


StreamLike = Union[RngStream, np.random.Generator]


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


def _as_generator(stream: StreamLike) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    return stream.generator()


def _maybe_scalar(x: np.ndarray, size) -> Union[float, np.ndarray]:
    if size is None:
        return float(x)
    return x


def frechet_from_uniform(alpha: float, u) -> Union[float, np.ndarray]:
    """Inverse-CDF transform of uniforms: P(Z > z) = 1 - exp(-z**-alpha).

    Accepts scalars or arrays of uniforms in (0, 1).  Exposed separately from
    the samplers so the transform itself can be pinned against known values.
    """
    _check_alpha(alpha)
    arr = np.asarray(u, dtype=float)
    arr = np.where(arr < _U_FLOOR, _U_FLOOR, arr)
    z = (-np.log(arr)) ** (-1.0 / alpha)
    if np.ndim(u) == 0:
        return float(z)
    return z


def sample_frechet(alpha: float, stream: StreamLike, size=None):
    """Frechet(alpha) variates: positive, infinite mean for alpha < 1."""
    gen = _as_generator(stream)
    return frechet_from_uniform(alpha, gen.random(size) if size is not None else gen.random())


def sample_bump_height(law: TailLaw, stream: StreamLike, size=None):
    """Bump heights X with sqrt(X) Frechet(alpha): P(X > x) = 1 - exp(-x**(-alpha/2))."""
    if law.kind is not TailKind.BUMP_HEIGHT:
        raise ValueError("law.kind must be BUMP_HEIGHT")
    z = sample_frechet(law.alpha, stream, size)
    return z * z if size is not None else float(z * z)


def sample_gap_length(law: TailLaw, stream: StreamLike, size=None):
    """Gap lengths Y, Frechet(alpha): P(Y > y) = 1 - exp(-y**-alpha)."""
    if law.kind is not TailKind.GAP_LENGTH:
        raise ValueError("law.kind must be GAP_LENGTH")
    return sample_frechet(law.alpha, stream, size)


def sample_stable_oracle(alpha: float, stream: StreamLike, size=None):
    """One-sided alpha-stable variates with E[exp(-s S)] = exp(-s**alpha).

    Kanter's construction: with U uniform on (0,1), W standard exponential,
    and theta = pi U,

        A(theta) = sin((1-alpha) theta) sin(alpha theta)^(alpha/(1-alpha))
                   / sin(theta)^(1/(1-alpha)),
        S = (A / W)^((1-alpha)/alpha).

    Used as the independent comparison law for nonlinear-scale limit checks.
    """
    _check_alpha(alpha)
    gen = _as_generator(stream)
    u = np.asarray(gen.random(size) if size is not None else gen.random(), dtype=float)
    w = np.asarray(
        gen.standard_exponential(size) if size is not None else gen.standard_exponential(),
        dtype=float,
    )
    u = np.where(u < _U_FLOOR, _U_FLOOR, u)
    w = np.where(w < _U_FLOOR, _U_FLOOR, w)
    theta = np.pi * u
    ratio = alpha / (1.0 - alpha)
    a = (
        np.sin((1.0 - alpha) * theta)
        * np.sin(alpha * theta) ** ratio
        / np.sin(theta) ** (1.0 + ratio)
    )
    s = (a / w) ** ((1.0 - alpha) / alpha)
    return _maybe_scalar(s, size)


def frechet_tail(alpha: float, z) -> Union[float, np.ndarray]:
    """Survival function P(Z > z) = 1 - exp(-z**-alpha) of the Frechet law."""
    _check_alpha(alpha)
    arr = np.asarray(z, dtype=float)
    out = -np.expm1(-arr ** (-alpha))
    if np.ndim(z) == 0:
        return float(out)
    return out


def frechet_cdf(alpha: float, z) -> Union[float, np.ndarray]:
    """CDF exp(-z**-alpha) of the Frechet law, 0 for z <= 0."""
    _check_alpha(alpha)
    arr = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(arr > 0.0, np.exp(-np.where(arr > 0.0, arr, 1.0) ** (-alpha)), 0.0)
    if np.ndim(z) == 0:
        return float(out)
    return out
