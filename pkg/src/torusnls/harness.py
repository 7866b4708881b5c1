"""End-to-end convergence and one-step-defect studies.

A plan fixes the grid, the smoothness ladder, the dyadic time steps,
the reference recipe and the seeds; running it produces a report with
one curve per (s, seed) pair: the (tau, error) samples, the fitted
order, and bookkeeping that makes the run auditable (mass increments,
reference drift, regime admissibility, degeneracy flags).

Protocol of a convergence run: draw the rough field, normalize it to
the target L^2 norm, compute one reference trajectory with the
unfiltered Lie scheme at a tiny step on the same grid, then march the
filtered scheme over the ladder and record the final-time L^2 error
against the reference.  Errors are fitted by least squares in
log2(tau) / log2(error).

Reports are deterministic functions of the plan: no timestamps, no
thread counts, fixed key order.  Rerunning a plan reproduces the report
byte for byte.
"""

from __future__ import annotations

import csv
import json
import re
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__ as _pkg_version
from .bourgain import RegimeQuery, regime_check
from .initial_data import RoughDataSpec, plane_wave, rough_data
from .integrators import StepperConfig, evolve, lie_filtered_step
from .spectral import (
    FilterSpec,
    SpectralField,
    apply_projector,
    l2_distance,
    l2_norm,
    make_grid,
)


class PlanError(ValueError):
    """Malformed or inconsistent experiment plan."""


_DYADIC = re.compile(r"^2\^(-?\d+)$")


def parse_step(value) -> float:
    """Accept a plain number, a numeric string, or a dyadic string like '2^-6'."""
    if isinstance(value, str):
        m = _DYADIC.match(value.strip())
        if m:
            return 2.0 ** int(m.group(1))
        try:
            return float(value)
        except ValueError:
            raise PlanError(
                f"cannot parse time value {value!r} (use a number or '2^-k')"
            ) from None
    if isinstance(value, (int, float)):
        return float(value)
    raise PlanError(f"cannot parse time value {value!r}")


@dataclass(frozen=True)
class ReferenceRecipe:
    tau_ref: float
    method: str = "standard-lie"
    n_ref_per_axis: int | None = None


@dataclass(frozen=True)
class LocalErrorSettings:
    """Where along the trajectory one-step defects are probed."""

    probe_times: tuple[float, ...] = (0.0, 1.0 / 16, 1.0 / 8, 3.0 / 16)
    fine_dt_factor: int = 64


@dataclass(frozen=True)
class ExperimentPlan:
    dim: int
    n_per_axis: int
    s_values: tuple[float, ...]
    tau_ladder: tuple[float, ...]
    reference: ReferenceRecipe | None = None
    mu: int = -1
    T: float = 1.0
    seeds: tuple[int, ...] = (0, 1, 2)
    target_l2: float = 0.1
    eps: float = 0.0
    dealias_policy: str = "warn"
    init: dict | None = None  # None: rough data; {"type": "plane_wave", "k": ..., "amplitude": ...}
    local_error: LocalErrorSettings = field(default_factory=LocalErrorSettings)
    check_reference: bool = False
    output_json: str | None = None
    output_csv: str | None = None

    def validate(self, need_reference: bool = True) -> None:
        if not 1 <= self.dim <= 5:
            raise PlanError(f"dim must be in 1..5, got {self.dim}")
        if not self.s_values:
            raise PlanError("plan needs at least one s value")
        if any(s < 0 for s in self.s_values):
            raise PlanError(f"s values must be >= 0, got {self.s_values}")
        if self.mu not in (1, -1):
            raise PlanError(f"mu must be +1 or -1, got {self.mu}")
        if not self.T > 0:
            raise PlanError(f"T must be positive, got {self.T}")
        if len(self.tau_ladder) < 4:
            raise PlanError(
                f"tau_ladder needs at least 4 entries for a slope fit, got {len(self.tau_ladder)}"
            )
        for tau in self.tau_ladder:
            if not 0 < tau <= 1:
                raise PlanError(f"ladder step {tau} outside (0, 1]")
            n = round(self.T / tau)
            if abs(n * tau - self.T) > 1e-9 * self.T:
                raise PlanError(f"T = {self.T} is not an integer multiple of ladder step {tau}")
        if not self.seeds:
            raise PlanError("plan needs at least one seed")
        if need_reference:
            if self.reference is None:
                raise PlanError("plan needs a reference recipe")
            if self.reference.method != "standard-lie":
                raise PlanError(f"unknown reference method {self.reference.method!r}")
            if not self.reference.tau_ref < min(self.tau_ladder) / 4:
                raise PlanError(
                    f"tau_ref = {self.reference.tau_ref} must be below min(ladder)/4 "
                    f"= {min(self.tau_ladder) / 4}"
                )
            n_ref = self.reference.n_ref_per_axis
            if n_ref is not None and n_ref != self.n_per_axis:
                raise PlanError(
                    "reference grids differing from the run grid are not supported; "
                    f"got n_ref_per_axis = {n_ref}, n_per_axis = {self.n_per_axis}"
                )
        if self.init is not None:
            if self.init.get("type") != "plane_wave":
                raise PlanError(f"unknown init type {self.init.get('type')!r}")
        make_grid(self.dim, self.n_per_axis)  # grid constraints

    def to_dict(self) -> dict:
        d = {
            "dim": self.dim,
            "n_per_axis": self.n_per_axis,
            "s": list(self.s_values),
            "mu": self.mu,
            "T": self.T,
            "tau_ladder": list(self.tau_ladder),
            "seeds": list(self.seeds),
            "target_l2": self.target_l2,
            "eps": self.eps,
            "dealias_policy": self.dealias_policy,
            "check_reference": self.check_reference,
            "local_error": {
                "probe_times": list(self.local_error.probe_times),
                "fine_dt_factor": self.local_error.fine_dt_factor,
            },
        }
        if self.reference is not None:
            d["reference"] = {
                "method": self.reference.method,
                "tau_ref": self.reference.tau_ref,
                "n_ref_per_axis": self.reference.n_ref_per_axis,
            }
        if self.init is not None:
            d["init"] = self.init
        out = {}
        if self.output_json:
            out["json"] = self.output_json
        if self.output_csv:
            out["csv"] = self.output_csv
        if out:
            d["output"] = out
        return d


_PLAN_KEYS = {
    "dim", "n_per_axis", "s", "mu", "T", "tau_ladder", "reference", "seeds",
    "target_l2", "eps", "dealias_policy", "init", "local_error",
    "check_reference", "output",
}


def plan_from_dict(raw: dict) -> ExperimentPlan:
    if not isinstance(raw, dict):
        raise PlanError(f"plan must be a JSON object, got {type(raw).__name__}")
    unknown = set(raw) - _PLAN_KEYS
    if unknown:
        raise PlanError(f"unknown plan keys: {sorted(unknown)}")
    try:
        dim = int(raw["dim"])
        n = int(raw["n_per_axis"])
        s_values = tuple(float(s) for s in raw["s"])
        ladder = tuple(parse_step(t) for t in raw["tau_ladder"])
    except KeyError as err:
        raise PlanError(f"plan is missing required key {err.args[0]!r}") from None

    reference = None
    if "reference" in raw:
        rr = raw["reference"]
        if not isinstance(rr, dict) or "tau_ref" not in rr:
            raise PlanError("reference must be an object with a 'tau_ref' key")
        n_ref = rr.get("n_ref_per_axis")
        reference = ReferenceRecipe(
            tau_ref=parse_step(rr["tau_ref"]),
            method=rr.get("method", "standard-lie"),
            n_ref_per_axis=None if n_ref is None else int(n_ref),
        )

    le = raw.get("local_error", {})
    if not isinstance(le, dict):
        raise PlanError("local_error must be an object")
    settings = LocalErrorSettings(
        probe_times=tuple(parse_step(t) if t else 0.0 for t in le.get(
            "probe_times", LocalErrorSettings().probe_times)),
        fine_dt_factor=int(le.get("fine_dt_factor", 64)),
    )

    out = raw.get("output", {})
    plan = ExperimentPlan(
        dim=dim,
        n_per_axis=n,
        s_values=s_values,
        tau_ladder=ladder,
        reference=reference,
        mu=int(raw.get("mu", -1)),
        T=parse_step(raw.get("T", 1.0)),
        seeds=tuple(int(x) for x in raw.get("seeds", (0, 1, 2))),
        target_l2=float(raw.get("target_l2", 0.1)),
        eps=float(raw.get("eps", 0.0)),
        dealias_policy=str(raw.get("dealias_policy", "warn")),
        init=raw.get("init"),
        local_error=settings,
        check_reference=bool(raw.get("check_reference", False)),
        output_json=out.get("json"),
        output_csv=out.get("csv"),
    )
    return plan


def load_plan(path) -> ExperimentPlan:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as err:
        raise PlanError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from None
    return plan_from_dict(raw)


def fit_order(samples) -> tuple[float, float, float]:
    """Least-squares slope of log2(error) against log2(tau).

    Returns (slope, intercept, residual) with the residual the RMS of
    the fit misfit.  Requires at least two samples with positive errors.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError(f"order fit needs at least 2 samples, got {len(samples)}")
    taus = np.array([t for t, _ in samples], dtype=float)
    errs = np.array([e for _, e in samples], dtype=float)
    if np.any(errs <= 0):
        raise ValueError("order fit needs positive error values")
    if np.any(taus <= 0):
        raise ValueError("order fit needs positive step sizes")
    x = np.log2(taus)
    y = np.log2(errs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), resid


@dataclass
class CurveResult:
    s: float
    seed: int
    samples: list[tuple[float, float]]
    slope: float | None
    intercept: float | None
    residual: float | None
    theoretical_slope: float
    regime_admissible: bool | None
    degenerate: bool
    degenerate_reason: str | None
    reference_limited: bool | None
    monotone_fraction: float | None
    mass_max_increment: float
    reference_mass_drift: float | None

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "seed": self.seed,
            "samples": [[t, e] for t, e in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "theoretical_slope": self.theoretical_slope,
            "regime_admissible": self.regime_admissible,
            "degenerate": self.degenerate,
            "degenerate_reason": self.degenerate_reason,
            "reference_limited": self.reference_limited,
            "monotone_fraction": self.monotone_fraction,
            "mass_max_increment": self.mass_max_increment,
            "reference_mass_drift": self.reference_mass_drift,
        }


@dataclass
class ConvergenceReport:
    kind: str  # "convergence" or "local-error"
    plan: dict
    curves: list[CurveResult]
    notes: list[str]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "plan": self.plan,
            "curves": [c.to_dict() for c in self.curves],
            "notes": self.notes,
            "metadata": {
                "package": "torusnls",
                "package_version": _pkg_version,
                "numpy_version": np.__version__,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    def save_csv(self, path) -> None:
        """Plot-ready samples, one row per (s, seed, tau)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["s", "seed", "tau", "l2_error"])
            for c in self.curves:
                for tau, err in c.samples:
                    writer.writerow([c.s, c.seed, repr(tau), repr(err)])

    def curve(self, s: float, seed: int) -> CurveResult:
        for c in self.curves:
            if c.s == s and c.seed == seed:
                return c
        raise KeyError(f"no curve for s={s}, seed={seed}")


# Curves whose errors never rise above this times the data norm carry no
# usable convergence signal (exactly propagated families, zero data).
DEGENERACY_FLOOR = 1e-8


def _initial_field(plan: ExperimentPlan, grid, s: float, seed: int) -> SpectralField:
    if plan.init is None:
        return rough_data(
            RoughDataSpec(grid=grid, s=s, eps=plan.eps, seed=seed, target_l2=plan.target_l2)
        )
    return plane_wave(grid, plan.init["k"], complex(plan.init.get("amplitude", plan.target_l2)))


def _fit_or_flag(samples, u0_norm):
    """Order fit plus degeneracy handling for error floors."""
    errs = [e for _, e in samples]
    if min(errs) <= 0:
        return None, None, None, True, "degenerate: zero errors"
    slope, intercept, resid = fit_order(samples)
    if max(errs) <= DEGENERACY_FLOOR * u0_norm:
        return slope, intercept, resid, True, "degenerate: exact family"
    return slope, intercept, resid, False, None


def _monotone_fraction(samples) -> float | None:
    ordered = sorted(samples, key=lambda te: -te[0])  # decreasing tau
    if len(ordered) < 2:
        return None
    good = sum(1 for a, b in zip(ordered, ordered[1:]) if b[1] <= a[1])
    return good / (len(ordered) - 1)


def _steps_for(T: float, tau: float) -> int:
    n = round(T / tau)
    if abs(n * tau - T) > 1e-9 * max(T, tau):
        raise PlanError(f"tau = {tau} does not divide T = {T}")
    return int(n)


def run_convergence(plan: ExperimentPlan, progress=None) -> ConvergenceReport:
    """Full final-time error study over the plan's ladder and seeds."""
    plan.validate(need_reference=True)
    grid = make_grid(plan.dim, plan.n_per_axis)
    say = progress or (lambda msg: None)

    notes = []
    curves = []
    for s in plan.s_values:
        regime_ok = None
        if plan.init is None:
            regime_ok = regime_check(RegimeQuery(plan.dim, s)).admissible
            if not regime_ok:
                msg = f"(d={plan.dim}, s={s}) is outside the admissible convergence regime"
                warnings.warn(msg)
                notes.append(msg)
        for seed in plan.seeds:
            u0 = _initial_field(plan, grid, s, seed)
            u0_norm = l2_norm(u0)

            n_ref = _steps_for(plan.T, plan.reference.tau_ref)
            ref_cfg = StepperConfig(
                grid=grid, tau=plan.reference.tau_ref, mu=plan.mu,
                filtered=False, dealias_policy=plan.dealias_policy,
            )
            say(f"s={s} seed={seed}: reference ({n_ref} steps)")
            ref_traj = evolve(u0, ref_cfg, n_ref, stride=max(n_ref, 1))
            u_ref = ref_traj.final
            ref_drift = float(np.max(np.abs(ref_traj.mass - ref_traj.mass[0])) / ref_traj.mass[0])

            u_ref_half = None
            if plan.check_reference:
                n_half = _steps_for(plan.T, plan.reference.tau_ref / 2)
                half_cfg = replace(ref_cfg, tau=plan.reference.tau_ref / 2)
                u_ref_half = evolve(u0, half_cfg, n_half, stride=max(n_half, 1)).final

            samples = []
            samples_half = []
            mass_inc = 0.0
            for tau in plan.tau_ladder:
                n = _steps_for(plan.T, tau)
                cfg = StepperConfig(
                    grid=grid, tau=tau, mu=plan.mu,
                    filtered=True, dealias_policy=plan.dealias_policy,
                )
                traj = evolve(u0, cfg, n, stride=max(n, 1))
                err = l2_distance(traj.final, u_ref)
                samples.append((tau, err))
                if u_ref_half is not None:
                    samples_half.append((tau, l2_distance(traj.final, u_ref_half)))
                inc = float(np.max(np.diff(traj.mass))) if n > 0 else 0.0
                mass_inc = max(mass_inc, inc)
                say(f"s={s} seed={seed} tau={tau:g}: error={err:.6e}")

            slope, intercept, resid, degen, reason = _fit_or_flag(samples, u0_norm)
            ref_limited = None
            if u_ref_half is not None:
                floor = 0.05 * min(e for _, e in samples_half)
                ref_limited = any(
                    abs(e - eh) >= floor for (_, e), (_, eh) in zip(samples, samples_half)
                )

            curves.append(CurveResult(
                s=s, seed=seed, samples=samples,
                slope=slope, intercept=intercept, residual=resid,
                theoretical_slope=s / 2.0,
                regime_admissible=regime_ok,
                degenerate=degen, degenerate_reason=reason,
                reference_limited=ref_limited,
                monotone_fraction=_monotone_fraction(samples),
                mass_max_increment=mass_inc,
                reference_mass_drift=ref_drift,
            ))

    return ConvergenceReport("convergence", plan.to_dict(), curves, notes)


def run_local_error(plan: ExperimentPlan, progress=None) -> ConvergenceReport:
    """One-step defect study: for each ladder tau, average the L^2 defect
    of a single filtered step against the fixed-cutoff reference flow over
    states prepared along a filtered trajectory, then fit the slope.

    The defect is an L^2 stand-in for the space-time norm of the local
    error analysis; the report carries a note saying so.
    """
    plan.validate(need_reference=False)
    grid = make_grid(plan.dim, plan.n_per_axis)
    say = progress or (lambda msg: None)
    settings = plan.local_error

    notes = ["local errors are L2 defects against the fixed-cutoff reference flow "
             "(an L2 proxy for the space-time norm of the one-step analysis)"]
    curves = []
    for s in plan.s_values:
        regime_ok = regime_check(RegimeQuery(plan.dim, s)).admissible if plan.init is None else None
        for seed in plan.seeds:
            u0 = _initial_field(plan, grid, s, seed)
            u0_norm = l2_norm(u0)
            samples = []
            mass_inc = 0.0
            for tau in plan.tau_ladder:
                cfg = StepperConfig(
                    grid=grid, tau=tau, mu=plan.mu,
                    filtered=True, dealias_policy=plan.dealias_policy,
                )
                probe_steps = sorted({_steps_for(t, tau) if t else 0 for t in settings.probe_times})
                traj = evolve(u0, cfg, probe_steps[-1], snapshot_steps=set(probe_steps))
                if probe_steps[-1] > 0:
                    mass_inc = max(mass_inc, float(np.max(np.diff(traj.mass))))
                fine_dt = tau / settings.fine_dt_factor
                defects = []
                for n in probe_steps:
                    w = traj.field_at_step(n)
                    one = lie_filtered_step(w, cfg)
                    ref_traj = evolve(
                        w,
                        replace(cfg, tau=fine_dt, filter_tau=tau),
                        settings.fine_dt_factor,
                        stride=settings.fine_dt_factor,
                    )
                    mass_inc = max(mass_inc, float(np.max(np.diff(ref_traj.mass))))
                    w_proj = apply_projector(w, FilterSpec(tau))
                    mass_inc = max(mass_inc, l2_norm(one) - l2_norm(w_proj))
                    defects.append(l2_distance(one, ref_traj.final))
                mean_defect = float(np.mean(defects))
                samples.append((tau, mean_defect))
                say(f"s={s} seed={seed} tau={tau:g}: defect={mean_defect:.6e}")

            slope, intercept, resid, degen, reason = _fit_or_flag(samples, u0_norm)
            curves.append(CurveResult(
                s=s, seed=seed, samples=samples,
                slope=slope, intercept=intercept, residual=resid,
                theoretical_slope=1.0 + s / 2.0,
                regime_admissible=regime_ok,
                degenerate=degen, degenerate_reason=reason,
                reference_limited=None,
                monotone_fraction=_monotone_fraction(samples),
                mass_max_increment=mass_inc,
                reference_mass_drift=None,
            ))

    return ConvergenceReport("local-error", plan.to_dict(), curves, notes)
