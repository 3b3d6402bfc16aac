"""Phase and radius flow for piecewise-constant potentials.

The flow tracks the polar decomposition of the k-normalized solution frame
(psi, psi'/k) = r (sin theta, cos theta): theta obeys

    theta' = k cos(theta)**2 + ((lam - V)/k) sin(theta)**2

and is continued continuously in the real unwound sense, so floor(theta/pi)
counts sign changes of psi exactly.  Each constant piece is advanced in
closed form rather than by ODE stepping:

    oscillatory (V < lam):  conjugate to a uniform rotation.  With
        omega = sqrt(lam - V) and rho = omega/k, the map tan(phi) =
        rho tan(theta) turns the piece flow into phi -> phi + omega l,
        which makes the pi-winding count exact by bookkeeping instead of
        by substepping.
    hyperbolic (V > lam):   expand in the exp(+-a) eigenmodes, a = b l,
        b = sqrt(V - lam).  The phase increment is trapped in (-pi, pi)
        (the flow cannot cross both adjacent fixed directions), and the
        radius gain a + log|(psi, psi'/k)| is exact for any a because the
        exp(a) factor is carried analytically.
    degenerate (V = lam):   parabolic shear, theta increment in [0, pi).

All branch arrangements below are cancellation-free; in particular the
hyperbolic mode uses expm1 so pieces with tiny a agree with the shear limit
to machine precision.  All phases are reduced with respect to float pi, so
windings stay consistent across every routine in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from .potentials import Piece, PieceKind, Realization
from .transfer import EnergyFrame

_PI = math.pi
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PruferState:
    """Unwound phase theta, accumulated log radius, and position x."""

    theta: float
    log_r: float
    x: float


class TraceRecord(NamedTuple):
    x: float
    theta: float
    log_r: float


def boundary_theta(theta0: float, frame: EnergyFrame) -> float:
    """Initial phase in [0, pi) realizing psi(0) cos(theta0) = psi'(0) sin(theta0).

    The boundary parameter lives on the (psi, psi') circle while the flow
    lives on the k-normalized frame, so the angle must be rescaled:
    tan(theta(0)) = k tan(theta0), lifted to the same half-period.
    """
    if not (0.0 <= theta0 < _PI):
        raise ValueError("theta0 must lie in [0, pi)")
    t = math.atan2(frame.k_norm * math.sin(theta0), math.cos(theta0))
    if t < 0.0:  # unreachable for theta0 in [0, pi); kept as a guard
        t += _PI
    return t


def _reduce_mod_pi(theta: float) -> Tuple[float, float]:
    """Split theta = m*pi + that with that in [0, pi); m returned as float."""
    that = math.fmod(theta, _PI)
    if that < 0.0:
        that += _PI
    m = round((theta - that) / _PI)
    return that, float(m)


def _advance_scalar(theta: float, log_r: float, value: float, length: float,
                    lam: float, k: float) -> Tuple[float, float]:
    """One constant piece of the flow; returns (new theta, new log_r)."""
    if value == 0.0 and lam > 0.0:
        # zero-potential gap: exact rotation by k * length in this frame
        return theta + k * length, log_r

    u = (lam - value) * length * length

    if u == 0.0:
        # parabolic shear: psi' constant, theta increment in [0, pi)
        that, m = _reduce_mod_pi(theta)
        s0 = math.sin(that)
        c0 = math.cos(that)
        psi = s0 + k * length * c0
        raw = math.atan2(psi, c0)
        delta = math.fmod(raw - that, _PI)
        if delta < 0.0:
            delta += _PI
        return theta + delta, log_r + 0.5 * math.log(psi * psi + c0 * c0)

    if u > 0.0:
        # oscillatory: conjugate to uniform rotation by w at tangent ratio rho
        w = math.sqrt(u)
        rho = w / (k * length)
        that, m = _reduce_mod_pi(theta)
        s0 = math.sin(that)
        c0 = math.cos(that)
        phi0 = math.atan2(rho * s0, c0)  # in [0, pi): s0 >= 0
        phi_end = phi0 + w
        phi_hat = math.fmod(phi_end, _PI)  # phi_end >= 0
        whole = round((phi_end - phi_hat) / _PI)
        s1 = math.sin(phi_hat)
        c1 = math.cos(phi_hat)
        theta_hat = math.atan2(s1, rho * c1)  # in [0, pi): s1 >= 0
        theta_new = (m + whole) * _PI + theta_hat
        # local radius conservation: r^2 (sin^2 + cos^2 / rho^2) is invariant
        hy = math.hypot(s1, rho * c1)
        gain = 0.5 * math.log(rho * rho * s0 * s0 + c0 * c0) - math.log(rho) + math.log(hy)
        return theta_new, log_r + gain

    # hyperbolic: expand on the exp(+-a) modes, exp(a) factored analytically
    a = math.sqrt(-u)
    bok = a / (k * length)  # b / k
    s0 = math.sin(theta)
    c0 = math.cos(theta)
    em = -math.expm1(-2.0 * a)  # 1 - exp(-2a), exact for tiny a
    ep = 2.0 - em               # 1 + exp(-2a)
    psi = 0.5 * (s0 * ep + (c0 / bok) * em)
    psik = 0.5 * (bok * s0 * em + c0 * ep)
    if psi == 0.0 and psik == 0.0:
        # start exactly on the contracting direction with exp(-2a) underflowed
        q = s0 - c0 / bok
        raw = math.atan2(q, -bok * q)
        gain = -a + math.log(0.5 * math.hypot(q, bok * q))
    else:
        raw = math.atan2(psi, psik)
        gain = a + math.log(math.hypot(psi, psik))
    delta = math.remainder(raw - theta, _TWO_PI)
    return theta + delta, log_r + gain


def advance_piece(state: PruferState, piece: Piece, frame: EnergyFrame) -> PruferState:
    """Advance the flow across one constant piece."""
    theta, log_r = _advance_scalar(
        state.theta, state.log_r, piece.value, piece.length, frame.lam, frame.k_norm
    )
    return PruferState(theta=theta, log_r=log_r, x=state.x + piece.length)


def advance_interval(state: PruferState, value: float, length: float,
                     frame: EnergyFrame) -> PruferState:
    """Advance across a bare (value, length) interval without a Piece wrapper."""
    if not (length > 0.0):
        raise ValueError("length must be positive")
    theta, log_r = _advance_scalar(state.theta, state.log_r, value, length, frame.lam, frame.k_norm)
    return PruferState(theta=theta, log_r=log_r, x=state.x + length)


def advance_realization(
    state: PruferState,
    realization: Realization,
    frame: EnergyFrame,
    checkpoints: Sequence[float] = (),
) -> Tuple[PruferState, List[TraceRecord]]:
    """Walk the whole chain, recording (x, theta, log_r) at each checkpoint.

    Checkpoints must be sorted, within [0, total_length]; pieces containing a
    checkpoint are split there, which is exact because the flow restarted on
    the remainder of a constant piece composes to the full piece.
    """
    if state.x != 0.0:
        raise ValueError("advance_realization starts at x = 0")
    cps = [float(c) for c in checkpoints]
    if any(b < a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be sorted")
    if cps and (cps[0] < 0.0 or cps[-1] > realization.total_length * (1.0 + 1e-12)):
        raise ValueError("checkpoints must lie within the chain")

    theta = state.theta
    log_r = state.log_r
    lam = frame.lam
    k = frame.k_norm
    records: List[TraceRecord] = []
    ci = 0
    nc = len(cps)
    while ci < nc and cps[ci] <= 0.0:
        records.append(TraceRecord(x=0.0, theta=theta, log_r=log_r))
        ci += 1

    x_left = 0.0
    for piece in realization.pieces:
        x_right = x_left + piece.length
        x_cursor = x_left
        while ci < nc and cps[ci] < x_right:
            part = cps[ci] - x_cursor
            if part > 0.0:
                theta, log_r = _advance_scalar(theta, log_r, piece.value, part, lam, k)
                x_cursor = cps[ci]
            records.append(TraceRecord(x=x_cursor, theta=theta, log_r=log_r))
            ci += 1
        rest = x_right - x_cursor
        if rest > 0.0:
            theta, log_r = _advance_scalar(theta, log_r, piece.value, rest, lam, k)
        x_left = x_right
        while ci < nc and cps[ci] == x_right:
            records.append(TraceRecord(x=x_right, theta=theta, log_r=log_r))
            ci += 1

    final = PruferState(theta=theta, log_r=log_r, x=x_left)
    while ci < nc:  # checkpoints at total_length up to the tolerance slack
        records.append(TraceRecord(x=final.x, theta=theta, log_r=log_r))
        ci += 1
    return final, records


# ── Projective phase chain ───────────────────────────────────────────────────
#
# At fixed energy the phase at consecutive bump edges is a Markov chain on
# the projective line.  The chain state carries both the tangent t = tan of
# the phase and its mod-pi representative; poles of the tangent are ordinary
# points of the chain and are handled through the angle representation.


@dataclass(frozen=True)
class PhaseChainState:
    """Tangent t and its arctan lift theta_mod in [0, pi)."""

    t: float
    theta_mod: float

    @classmethod
    def from_tangent(cls, t: float) -> "PhaseChainState":
        theta = math.atan(t)
        if theta < 0.0:
            theta += _PI
        return cls(t=float(t), theta_mod=theta)


def phase_chain_step(state: PhaseChainState, bump_height: float, frame: EnergyFrame) -> PhaseChainState:
    """One unit-length bump of height X acting on the projective phase."""
    if not (bump_height > 0.0) or not math.isfinite(bump_height):
        raise ValueError("bump height must be positive and finite")
    theta, _ = _advance_scalar(state.theta_mod, 0.0, bump_height, 1.0, frame.lam, frame.k_norm)
    theta = math.fmod(theta, _PI)
    if theta < 0.0:
        theta += _PI
    return PhaseChainState(t=math.tan(theta), theta_mod=theta)


def tan_update_F(t: float, y: float, frame: EnergyFrame) -> float:
    """Tangent map of a unit bump in the hyperbolic regime, y = sqrt(X - lam).

        F(t, y) = (t + (k/y) tanh y) / (t (y/k) tanh y + 1)

    At a pole of the quotient the projective limit (encoded as inf) is
    returned; the chain re-enters the reals on the next step.
    """
    if not (y > 0.0):
        raise ValueError("y must be positive")
    k = frame.k_norm
    th = math.tanh(y)
    num = t + (k / y) * th
    den = t * (y / k) * th + 1.0
    if den == 0.0:
        return math.inf
    return num / den


def tan_update_G(t: float, y: float, frame: EnergyFrame) -> float:
    """Tangent map of a unit bump in the oscillatory regime, y = sqrt(lam - X).

        G(t, y) = (t + (k/y) tan y) / (-t (y/k) tan y + 1)

    y is the local frequency, positive; tan-poles of y itself and zeros of
    the denominator are projective points, encoded as inf.
    """
    if not (y > 0.0):
        raise ValueError("y must be positive")
    k = frame.k_norm
    ty = math.tan(y)
    num = t + (k / y) * ty
    den = 1.0 - t * (y / k) * ty
    if den == 0.0:
        return math.inf
    return num / den


# ── Vectorized phase folds ───────────────────────────────────────────────────


def phase_fold(thetas: np.ndarray, values, lengths, frame: EnergyFrame,
               logs: np.ndarray = None) -> None:
    """Advance many independent chains one piece each, in place.

    thetas: unwound phases, shape (S,).  values/lengths: scalars or (S,)
    arrays.  logs, if given, accumulates the per-chain log radius.  This is
    the vectorized twin of the scalar advance; the branch arrangements are
    identical, so scalar and batch sweeps agree to rounding.
    """
    lam = frame.lam
    k = frame.k_norm
    value = np.broadcast_to(np.asarray(values, dtype=float), thetas.shape)
    length = np.broadcast_to(np.asarray(lengths, dtype=float), thetas.shape)
    u = (lam - value) * length * length

    gap = (value == 0.0) & (lam > 0.0)
    osc = (u > 0.0) & ~gap
    hyp = u < 0.0
    deg = (u == 0.0) & ~gap

    if np.any(gap):
        thetas[gap] += k * length[gap]

    if np.any(osc):
        th = thetas[osc]
        w = np.sqrt(u[osc])
        rho = w / (k * length[osc])
        that = np.fmod(th, _PI)
        neg = that < 0.0
        that[neg] += _PI
        m = np.round((th - that) / _PI)
        s0 = np.sin(that)
        c0 = np.cos(that)
        phi0 = np.arctan2(rho * s0, c0)
        phi_end = phi0 + w
        phi_hat = np.fmod(phi_end, _PI)
        whole = np.round((phi_end - phi_hat) / _PI)
        s1 = np.sin(phi_hat)
        c1 = np.cos(phi_hat)
        theta_hat = np.arctan2(s1, rho * c1)
        thetas[osc] = (m + whole) * _PI + theta_hat
        if logs is not None:
            hy = np.hypot(s1, rho * c1)
            logs[osc] += 0.5 * np.log(rho * rho * s0 * s0 + c0 * c0) - np.log(rho) + np.log(hy)

    if np.any(hyp):
        th = thetas[hyp]
        a = np.sqrt(-u[hyp])
        bok = a / (k * length[hyp])
        s0 = np.sin(th)
        c0 = np.cos(th)
        em = -np.expm1(-2.0 * a)
        ep = 2.0 - em
        psi = 0.5 * (s0 * ep + (c0 / bok) * em)
        psik = 0.5 * (bok * s0 * em + c0 * ep)
        dead = (psi == 0.0) & (psik == 0.0)
        if np.any(dead):
            q = s0[dead] - c0[dead] / bok[dead]
            psi[dead] = q
            psik[dead] = -bok[dead] * q
        raw = np.arctan2(psi, psik)
        delta = np.remainder(raw - th + _PI, _TWO_PI) - _PI
        thetas[hyp] = th + delta
        if logs is not None:
            gain = a + np.log(np.hypot(psi, psik))
            if np.any(dead):
                ad = a[dead]
                qh = np.hypot(psi[dead], psik[dead])
                gain[dead] = -ad + np.log(0.5 * qh)
            logs[hyp] += gain

    if np.any(deg):
        th = thetas[deg]
        that = np.fmod(th, _PI)
        neg = that < 0.0
        that[neg] += _PI
        s0 = np.sin(that)
        c0 = np.cos(that)
        psi = s0 + k * length[deg] * c0
        raw = np.arctan2(psi, c0)
        delta = np.fmod(raw - that, _PI)
        delta[delta < 0.0] += _PI
        thetas[deg] = th + delta
        if logs is not None:
            logs[deg] += 0.5 * np.log(psi * psi + c0 * c0)
