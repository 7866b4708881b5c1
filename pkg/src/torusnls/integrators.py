"""One-step maps and trajectory drivers for the cubic equation
i u_t = -Laplace(u) - mu |u|^2 u on the torus.

The filtered Lie step with time step tau is

    u_{n+1} = e^{i tau Laplace} P( e^{i mu tau |P u_n|^2} P u_n ),

where P is the sharp low-pass projector onto |k_j| <= tau^{-1/2}
(``spectral.FilterSpec``).  The standard Lie step is the same
composition without either projection.  Setting ``filter_tau`` on the
config decouples the cutoff from the step size; stepping at a small dt
with a fixed cutoff integrates the band-limited modified equation whose
nonlinearity is wrapped in P, which is the reference object for
one-step defect measurements.

All steppers are pure: inputs are never modified and identical inputs
give bit-identical outputs regardless of the transform worker count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft as _fft

from . import spectral
from .spectral import FilterSpec, SpectralField, TorusGrid, band_mask, weighted_l2_norm

DEALIAS_POLICIES = ("strict", "warn", "off")

# Physical-space amplitude beyond which a focusing run is declared blown up.
BLOWUP_LINF = 1.0e6


class BlowUpError(RuntimeError):
    """Numerical abort: non-finite values or physical amplitude above BLOWUP_LINF."""

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time


class AliasingError(ValueError):
    """Strict dealias policy violated: N/2 < 2*ceil(cutoff)."""


class AliasingWarning(UserWarning):
    pass


def _dealias_guard(grid: TorusGrid, cutoff_tau: float, policy: str) -> None:
    # Cubic products of band-limited fields stay alias-free inside the band
    # when N/2 >= 2*ceil(K), K = cutoff_tau^{-1/2}.
    if policy == "off":
        return
    need = 2 * math.ceil(cutoff_tau ** -0.5)
    if grid.n_per_axis // 2 >= need:
        return
    msg = (
        f"cubic term can alias into the filter band: N/2 = {grid.n_per_axis // 2} "
        f"< 2*ceil(cutoff) = {need} (cutoff from tau = {cutoff_tau})"
    )
    if policy == "strict":
        raise AliasingError(msg)
    warnings.warn(msg, AliasingWarning, stacklevel=3)


@dataclass(frozen=True)
class StepperConfig:
    """Time-stepping parameters.

    ``filter_tau`` is normally None, meaning the cutoff is induced by
    ``tau`` itself.  Reference integrations of the band-limited modified
    equation set it explicitly and step at a much smaller ``tau``.
    """

    grid: TorusGrid
    tau: float
    mu: int = -1
    filtered: bool = True
    dealias_policy: str = "warn"
    filter_tau: float | None = None

    def __post_init__(self):
        if not (isinstance(self.tau, (int, float)) and 0 < self.tau <= 1):
            raise ValueError(f"tau must lie in (0, 1], got {self.tau!r}")
        object.__setattr__(self, "tau", float(self.tau))
        if self.mu not in (1, -1):
            raise ValueError(f"mu must be +1 or -1, got {self.mu!r}")
        if self.dealias_policy not in DEALIAS_POLICIES:
            raise ValueError(
                f"dealias_policy must be one of {DEALIAS_POLICIES}, got {self.dealias_policy!r}"
            )
        if self.filter_tau is not None:
            if not self.filter_tau > 0:
                raise ValueError(f"filter_tau must be positive, got {self.filter_tau!r}")
            object.__setattr__(self, "filter_tau", float(self.filter_tau))
        if self.filtered and self.dealias_policy == "strict":
            _dealias_guard(self.grid, self.effective_filter_tau, "strict")

    @property
    def effective_filter_tau(self) -> float:
        return self.tau if self.filter_tau is None else self.filter_tau


@dataclass
class Trajectory:
    """Snapshots (n, field) with t_n = n*tau, plus a per-step mass ledger."""

    tau: float
    steps: list[int]
    fields: list[SpectralField]
    mass: np.ndarray
    config: StepperConfig
    provenance: dict

    @property
    def final(self) -> SpectralField:
        return self.fields[-1]

    def times(self) -> list[float]:
        return [n * self.tau for n in self.steps]

    def field_at_step(self, n: int) -> SpectralField:
        return self.fields[self.steps.index(n)]


def _make_step(grid: TorusGrid, dt: float, mu: int, cutoff_tau: float | None):
    """Compile one Lie step into a closure over precomputed multipliers."""
    workers = spectral.get_fft_workers()
    k2 = grid.mode_k2().reshape(grid.shape)
    flow = np.exp((-1j * dt) * k2)
    keep = band_mask(grid, FilterSpec(cutoff_tau)) if cutoff_tau is not None else None
    nl = 1j * mu * dt
    peak_limit = BLOWUP_LINF ** 2

    def step(a: np.ndarray) -> np.ndarray:
        if keep is not None:
            a = np.where(keep, a, 0.0)
        v = _fft.ifftn(a, norm="forward", workers=workers)
        m2 = v.real * v.real + v.imag * v.imag
        peak = float(m2.max())
        if not peak <= peak_limit:
            raise BlowUpError(
                f"physical amplitude {math.sqrt(peak) if peak == peak else float('nan'):.3e} "
                f"exceeds the blow-up guard {BLOWUP_LINF:.1e} (or is not finite)"
            )
        v = v * np.exp(nl * m2)
        a = _fft.fftn(v, norm="forward", workers=workers)
        if keep is not None:
            a = np.where(keep, a, 0.0)
        return a * flow

    return step


def lie_filtered_step(u: SpectralField, cfg: StepperConfig) -> SpectralField:
    """One filtered Lie step; the input is projected as part of the map."""
    if not cfg.filtered:
        raise ValueError("lie_filtered_step requires a filtered config")
    _dealias_guard(cfg.grid, cfg.effective_filter_tau, cfg.dealias_policy)
    step = _make_step(cfg.grid, cfg.tau, cfg.mu, cfg.effective_filter_tau)
    return SpectralField(u.grid, step(u.shaped()).ravel())


def lie_standard_step(u: SpectralField, cfg: StepperConfig) -> SpectralField:
    """One unfiltered Lie step (mass preserving up to rounding)."""
    if cfg.filtered:
        raise ValueError("lie_standard_step requires an unfiltered config")
    step = _make_step(cfg.grid, cfg.tau, cfg.mu, None)
    return SpectralField(u.grid, step(u.shaped()).ravel())


def evolve(
    u0: SpectralField,
    cfg: StepperConfig,
    n_steps: int,
    stride: int = 1,
    snapshot_steps=None,
    provenance: dict | None = None,
) -> Trajectory:
    """Iterate the configured step n_steps times from u0.

    Snapshot 0 is the projected initial field for filtered configs and
    u0 itself otherwise.  Snapshots are recorded at multiples of
    ``stride`` (or exactly at ``snapshot_steps`` if given); the final
    state is always recorded.  ``mass`` holds the L^2 norm after every
    step, so monotonicity under filtering can be audited post hoc.
    """
    if u0.grid != cfg.grid:
        raise ValueError("initial field and config use different grids")
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    wanted = None if snapshot_steps is None else {int(n) for n in snapshot_steps}

    cutoff = cfg.effective_filter_tau if cfg.filtered else None
    if cfg.filtered:
        _dealias_guard(cfg.grid, cutoff, cfg.dealias_policy)

    a = u0.shaped().copy()
    if cutoff is not None:
        keep = band_mask(cfg.grid, FilterSpec(cutoff))
        a = np.where(keep, a, 0.0)

    def want(n):
        if wanted is not None:
            return n in wanted or n == n_steps
        return n % stride == 0 or n == n_steps

    mass = np.empty(n_steps + 1)
    mass[0] = weighted_l2_norm(cfg.grid, a)
    steps = [0]
    fields = [SpectralField(cfg.grid, a.ravel())]

    step = _make_step(cfg.grid, cfg.tau, cfg.mu, cutoff)
    for n in range(1, n_steps + 1):
        try:
            a = step(a)
        except BlowUpError as err:
            err.step = n
            err.time = n * cfg.tau
            raise
        mass[n] = weighted_l2_norm(cfg.grid, a)
        if want(n):
            steps.append(n)
            fields.append(SpectralField(cfg.grid, a.ravel()))

    if not np.isfinite(a).all():
        raise BlowUpError("non-finite coefficients in final state", step=n_steps, time=n_steps * cfg.tau)

    return Trajectory(cfg.tau, steps, fields, mass, cfg, dict(provenance or {}))


def filtered_equation_reference(
    u0: SpectralField,
    tau_filter: float,
    t_end: float,
    fine_dt: float,
    cfg: StepperConfig,
) -> SpectralField:
    """High-accuracy state of the band-limited modified equation at t_end.

    The cutoff is fixed by ``tau_filter`` while the stepping happens at
    ``fine_dt`` << tau_filter; the result converges at first order in
    fine_dt to the flow of the equation whose cubic term is wrapped in
    the projector.
    """
    if not tau_filter > 0:
        raise ValueError(f"tau_filter must be positive, got {tau_filter!r}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end!r}")
    if not 0 < fine_dt <= tau_filter / 16 * (1 + 1e-12):
        raise ValueError(
            f"fine_dt must lie in (0, tau_filter/16]; got fine_dt={fine_dt!r}, tau_filter={tau_filter!r}"
        )
    n = int(round(t_end / fine_dt))
    if abs(n * fine_dt - t_end) > 1e-9 * max(t_end, fine_dt):
        raise ValueError(f"fine_dt={fine_dt!r} does not divide t_end={t_end!r}")
    rcfg = replace(cfg, tau=fine_dt, filtered=True, filter_tau=tau_filter)
    return evolve(u0, rcfg, n, stride=max(n, 1)).final


def local_error_probe(
    u0: SpectralField, tau: float, cfg: StepperConfig, fine_dt: float | None = None
) -> float:
    """L^2 defect of one filtered Lie step of size tau against the
    fixed-cutoff reference flow over [0, tau], both started from the
    projected state.  This is an L^2 proxy for the space-time norm in
    which the one-step error is analyzed."""
    if fine_dt is None:
        fine_dt = tau / 64.0
    w = spectral.apply_projector(u0, FilterSpec(tau))
    scfg = replace(cfg, tau=tau, filtered=True, filter_tau=None)
    one = lie_filtered_step(w, scfg)
    ref = filtered_equation_reference(w, tau, tau, fine_dt, cfg)
    return spectral.l2_distance(one, ref)
