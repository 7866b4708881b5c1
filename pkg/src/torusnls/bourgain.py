"""Space-time diagnostic norms for sequences of fields, Sobolev norms,
and the admissible-parameter checker for the convergence theory.

For a finite sequence (u_n)_{n=0..M-1} of fields sampled at spacing tau
(zero-extended outside), the time-space transform is

    ut(sigma, k) = tau * sum_m uhat_m(k) e^{i m tau sigma},

a 2*pi/tau periodic function of sigma.  The weighted norm of smoothness
(s, b) is

    || <k>^s <d_tau(sigma - |k|^2)>^b ut(sigma, k) ||,

with d_tau(x) = (e^{i tau x} - 1)/tau and <x> = (1 + |x|^2)^{1/2}.  The
sigma integral runs over one period and is normalized so that
(s, b) = (0, 0) reproduces the l^2_tau L^2 norm of the sequence exactly.
It is evaluated by the uniform rule on ``sigma_samples`` nodes: the
|ut|^2 factor is a trigonometric polynomial of degree < M, so for
integer b >= 0 the rule with 2M nodes integrates exactly; for other b
the weight is smooth and periodic and the rule converges spectrally in
the node count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

from .spectral import SpectralField, TorusGrid, TWO_PI, weighted_l2_norm


@dataclass
class SequenceSample:
    """Finite sequence of fields on one grid, implicitly zero outside."""

    tau: float
    fields: list[SpectralField]
    window: np.ndarray | None = None

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if len(self.fields) < 1:
            raise ValueError("sequence needs at least one field")
        g = self.fields[0].grid
        for f in self.fields[1:]:
            if f.grid != g:
                raise ValueError("all fields in a sequence must share one grid")
        if self.window is not None:
            w = np.asarray(self.window, dtype=float)
            if w.shape != (len(self.fields),):
                raise ValueError("window must have one weight per field")
            self.window = w

    @property
    def grid(self) -> TorusGrid:
        return self.fields[0].grid

    @property
    def length(self) -> int:
        return len(self.fields)


def sobolev_norm(f: SpectralField, s: float) -> float:
    """H^s norm (sum_k <k>^{2s} |uhat_k|^2)^{1/2} under the package
    normalization; s = 0 falls through to the plain L^2 helper."""
    if s == 0:
        return weighted_l2_norm(f.grid, f.coeffs)
    w = (1.0 + f.grid.mode_k2()) ** (0.5 * s)
    return weighted_l2_norm(f.grid, w * f.coeffs)


def lp_tau_norm(seq: SequenceSample, p, s: float) -> float:
    """(tau * sum_n ||u_n||_{H^s}^p)^{1/p}, or the sup for p = inf."""
    if not (p == math.inf or p >= 1):
        raise ValueError(f"p must be in [1, inf], got {p!r}")
    norms = np.array([sobolev_norm(f, s) for f in seq.fields])
    if p == math.inf:
        return float(norms.max())
    return float((seq.tau * np.sum(norms ** p)) ** (1.0 / p))


def discrete_bourgain_norm(
    seq: SequenceSample, s: float, b: float, sigma_samples: int | None = None
) -> float:
    """Weighted space-time norm of the sequence (see module docstring).

    ``sigma_samples`` defaults to 2M, which is exact for integer b >= 0;
    fewer than M nodes cannot resolve the period and is rejected.
    """
    m = seq.length
    q = 2 * m if sigma_samples is None else int(sigma_samples)
    if q < m:
        raise ValueError(f"sigma_samples must be >= sequence length {m}, got {q}")
    grid = seq.grid
    tau = seq.tau

    uhat = np.stack([f.coeffs for f in seq.fields])  # (M, n_modes)
    if seq.window is not None:
        uhat = uhat * seq.window[:, None]

    # ut[j, i] = tau * sum_m uhat[m, i] e^{2 pi i m j / q}  at sigma_j = 2 pi j / (tau q)
    ut = (tau * q) * _fft.ifft(uhat, n=q, axis=0)

    k2 = grid.mode_k2()
    sigma = (TWO_PI / (tau * q)) * np.arange(q)
    x = sigma[:, None] - k2[None, :]
    weight = (1.0 + (2.0 - 2.0 * np.cos(tau * x)) / tau ** 2) ** b
    if s == 0:
        bracket = 1.0
    else:
        bracket = (1.0 + k2) ** s  # <k>^{2s}

    total = float(np.sum(bracket * weight * (ut.real ** 2 + ut.imag ** 2)))
    # One-period integral carries d sigma = (2 pi / tau) / q per node; the
    # (2 pi)^{d-1} factor makes (s, b) = (0, 0) match l^2_tau L^2 exactly.
    norm_sq = (TWO_PI ** (grid.dim - 1)) * (TWO_PI / (tau * q)) * total
    return math.sqrt(norm_sq)


# Admissible-parameter table: per dimension, the three s0 case intervals
# (c0, c1], (c1, c2], (c2, c3] and the two Holder exponent pairs, the
# first with 4/p + 1/q = 1/2 and the second with 2/p + 3/q = 1/2.
_CASES = {
    1: (0.0, 1 / 5, 4 / 3, 2.0),
    2: (0.0, 2 / 5, 4 / 3, 2.0),
    3: (1 / 2, 4 / 5, 3 / 2, 2.0),
    4: (1.0, 6 / 5, 5 / 3, 2.0),
    5: (3 / 2, 8 / 5, 11 / 6, 2.0),
}
_EXPONENTS = {
    1: (20.0, 10 / 3, math.inf, 6.0),
    2: (20.0, 10 / 3, math.inf, 6.0),
    3: (15.0, 30 / 7, math.inf, 6.0),
    4: (40 / 3, 5.0, 40.0, 20 / 3),
    5: (25 / 2, 50 / 9, 25.0, 50 / 7),
}


@dataclass(frozen=True)
class RegimeQuery:
    d: int
    s0: float
    b0: float | None = None


@dataclass(frozen=True)
class Table1Row:
    d: int
    case: int  # 1, 2 or 3
    s0_interval: tuple[float, float]  # membership: lo < s0 <= hi
    p: float
    q: float
    p_crude: float
    q_crude: float


@dataclass(frozen=True)
class RegimeReport:
    d: int
    s0: float
    admissible: bool
    s0_lower: float  # strict lower bound max(0, d/2 - 1)
    s0_upper: float  # inclusive upper bound 2
    s0_condition: str
    b0_interval: tuple[float, float]  # open at both ends
    b0_interval_empty: bool
    b0: float | None
    b0_admissible: bool | None
    b1: float | None
    table1_row: Table1Row | None


def regime_check(query: RegimeQuery) -> RegimeReport:
    """Admissibility of (d, s0) for the order-s0/2 convergence regime.

    Admissible means max(0, d/2 - 1) < s0 <= 2; the valid b0 then form
    the open interval (1/2, min(1/2 + (s0 - d/2 + 1)/4, 3/4)).
    """
    d = query.d
    if d not in _CASES:
        raise ValueError(f"dimension must be in 1..5, got {d!r}")
    s0 = float(query.s0)

    lower = max(0.0, d / 2.0 - 1.0)
    admissible = (s0 > lower) and (s0 <= 2.0)

    b0_lo = 0.5
    b0_hi = min(0.5 + 0.25 * (s0 - d / 2.0 + 1.0), 0.75)
    empty = not b0_hi > b0_lo

    row = None
    if admissible:
        c = _CASES[d]
        for i in range(3):
            if c[i] < s0 <= c[i + 1]:
                p, qq, pc, qc = _EXPONENTS[d]
                row = Table1Row(d, i + 1, (c[i], c[i + 1]), p, qq, pc, qc)
                break

    b0 = None if query.b0 is None else float(query.b0)
    b0_ok = None
    b1 = None
    if b0 is not None:
        b0_ok = (not empty) and (b0_lo < b0 < b0_hi)
        b1 = 1.0 - b0

    return RegimeReport(
        d=d,
        s0=s0,
        admissible=admissible,
        s0_lower=lower,
        s0_upper=2.0,
        s0_condition=f"s0 > {lower} and s0 <= 2",
        b0_interval=(b0_lo, b0_hi),
        b0_interval_empty=empty,
        b0=b0,
        b0_admissible=b0_ok,
        b1=b1,
        table1_row=row,
    )
