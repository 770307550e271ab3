"""Model terms, pressure solve, IMEX stepping, and initial conditions.

The governing system couples an incompressible velocity u with a director
field d on the periodic box:

    u_t + u.grad(u) + grad(p) = nu*lap(u) - div(grad(d) (x) grad(d))
    d_t + u.grad(d)           = lap(d) - f(d)
    div(u) = 0

with the quartic penalty F(d) = (|d|^2 - 1)^2 / (4 eta^2) and its gradient
f(d) = (|d|^2 - 1) d / eta^2 relaxing |d| toward 1.  The far field of d is a
fixed unit vector w0.

Time stepping treats both Laplacians exactly per mode (integrating factor)
and the remaining terms explicitly; pressure never appears in the stepper
because tendencies are projected onto divergence-free fields.  Nonlinear
products are formed pointwise on the grid and dealiased after transforming.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .errors import (
    BlowUpError,
    PerturbationTooLargeError,
    ValidationError,
)
from .spectral import (
    GridSpec,
    ScalarField,
    VectorField,
    dealias_hat,
    fft3,
    ifft3,
    l2_norm_sq_hat,
    leray_project_hat,
)

SCHEMES = ("euler", "pc")

_VELOCITY_PATTERNS = ("zero", "taylor_green", "random", "gaussian_bump")
_DIRECTOR_PATTERNS = ("zero", "single_mode", "random", "gaussian_bump")


def _unit3(v, field_name):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValidationError(f"{field_name} must be a finite 3-vector", field=field_name)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValidationError(f"{field_name} must be nonzero", field=field_name)
    return tuple(float(c) for c in v / norm)


@dataclass(frozen=True)
class ModelParams:
    """Viscosity, penalty length, and far-field director (renormalized)."""

    nu: float = 1.0
    eta: float = 0.5
    w0: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not (self.nu > 0 and np.isfinite(self.nu)):
            raise ValidationError(f"nu must be positive, got {self.nu}", field="model.nu")
        if not (self.eta > 0 and np.isfinite(self.eta)):
            raise ValidationError(f"eta must be positive, got {self.eta}", field="model.eta")
        object.__setattr__(self, "w0", _unit3(self.w0, "model.w0"))

    @property
    def w0_array(self) -> np.ndarray:
        return np.asarray(self.w0)


@dataclass(frozen=True)
class TimeSpec:
    """Step size, horizon, safety factor, and sampling cadence (in steps)."""

    dt: float
    t_end: float
    cfl_safety: float = 0.9
    output_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise ValidationError(f"dt must be positive, got {self.dt}", field="time.dt")
        if not (self.t_end >= 0 and np.isfinite(self.t_end)):
            raise ValidationError(
                f"t_end must be nonnegative, got {self.t_end}", field="time.t_end"
            )
        if not (0.0 < self.cfl_safety <= 1.0):
            raise ValidationError(
                f"cfl_safety must lie in (0, 1], got {self.cfl_safety}",
                field="time.cfl_safety",
            )
        if not (isinstance(self.output_every, (int, np.integer)) and self.output_every >= 1):
            raise ValidationError(
                f"output_every must be a positive integer, got {self.output_every}",
                field="time.output_every",
            )


@dataclass(frozen=True)
class InitSpec:
    """Initial-condition recipe: named or seeded patterns plus amplitudes.

    Amplitude semantics: the closed-form prefactor for named patterns
    (taylor_green, single_mode, gaussian_bump), the RMS value ||f||_2 /
    box_volume^(1/2) for seeded random patterns.  Random patterns draw one
    complex coefficient per retained mode in a fixed lexicographic order, so
    a given seed yields the same physical field on every grid that resolves
    the band.
    """

    velocity: str = "zero"
    velocity_amplitude: float = 0.0
    velocity_direction: tuple[float, float, float] = (0.0, 0.0, 1.0)
    director: str = "zero"
    director_amplitude: float = 0.0
    director_axis: int = 0
    director_direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    normalize_director: bool = True
    band_limit: int = 2
    bump_sigma: float = 2.0
    bump_center: tuple[float, float, float] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.velocity not in _VELOCITY_PATTERNS:
            raise ValidationError(
                f"unknown velocity pattern {self.velocity!r}", field="init.velocity"
            )
        if self.director not in _DIRECTOR_PATTERNS:
            raise ValidationError(
                f"unknown director pattern {self.director!r}", field="init.director"
            )
        for name in ("velocity_amplitude", "director_amplitude"):
            a = getattr(self, name)
            if not (np.isfinite(a) and a >= 0):
                raise ValidationError(
                    f"{name} must be finite and nonnegative, got {a}",
                    field=f"init.{name}",
                )
        if self.director_axis not in (0, 1, 2):
            raise ValidationError(
                f"director_axis must be 0, 1 or 2, got {self.director_axis}",
                field="init.director_axis",
            )
        if not (isinstance(self.band_limit, (int, np.integer)) and self.band_limit >= 1):
            raise ValidationError(
                f"band_limit must be a positive integer, got {self.band_limit}",
                field="init.band_limit",
            )
        if not (self.bump_sigma > 0 and np.isfinite(self.bump_sigma)):
            raise ValidationError(
                f"bump_sigma must be positive, got {self.bump_sigma}",
                field="init.bump_sigma",
            )
        object.__setattr__(
            self, "velocity_direction", _unit3(self.velocity_direction, "init.velocity_direction")
        )
        object.__setattr__(
            self, "director_direction", _unit3(self.director_direction, "init.director_direction")
        )


class State:
    """Immutable snapshot (u, d, t); both fields held spectrally.

    Construction verifies finite data and the divergence-free constraint
    ||div u||_2 / ||grad u||_2 <= 1e-10.  Physical-space views are
    materialized lazily and cached.
    """

    DIV_TOL = 1e-10

    def __init__(self, u: VectorField, d: VectorField, t: float):
        if not (u.spectral and d.spectral):
            raise ValidationError("state fields must be spectral")
        if u.grid != d.grid:
            raise ValidationError("state fields must share one grid")
        if not (t >= 0 and np.isfinite(t)):
            raise ValidationError(f"t must be nonnegative, got {t}")
        div_ratio = divergence_ratio(u.data, u.grid)
        if div_ratio > self.DIV_TOL:
            raise ValidationError(
                f"velocity is not divergence-free: ||div u||/||grad u|| = {div_ratio:.3e}"
            )
        self.u = u
        self.d = d
        self.t = float(t)

    @property
    def grid(self) -> GridSpec:
        return self.u.grid

    @cached_property
    def u_phys(self) -> np.ndarray:
        return ifft3(self.u.data).real

    @cached_property
    def d_phys(self) -> np.ndarray:
        return ifft3(self.d.data).real

    def d_deviation_hat(self, params: ModelParams) -> np.ndarray:
        """Spectral coefficients of d - w0 (constant removed from zero mode)."""
        dev = self.d.data.copy()
        dev[:, 0, 0, 0] -= params.w0_array * self.grid.n**3
        return dev


def divergence_ratio(u_hat: np.ndarray, grid: GridSpec) -> float:
    """||div u||_2 / ||grad u||_2 in spectral space; 0 for the zero field."""
    kx, ky, kz = grid.kvec
    div_hat = 1j * (kx * u_hat[0] + ky * u_hat[1] + kz * u_hat[2])
    div_sq = l2_norm_sq_hat(div_hat, grid)
    grad_sq = float(
        np.sum(grid.k2 * (u_hat.real**2 + u_hat.imag**2)) * grid.volume / grid.n**6
    )
    if grad_sq == 0.0:
        return 0.0
    return float(np.sqrt(div_sq / grad_sq))


def uniform_director(grid: GridSpec, params: ModelParams) -> VectorField:
    """Spectral representation of the constant field w0."""
    d_hat = np.zeros((3, grid.n, grid.n, grid.n), dtype=np.complex128)
    d_hat[:, 0, 0, 0] = params.w0_array * grid.n**3
    return VectorField(grid, d_hat, spectral=True)


# ---------------------------------------------------------------------------
# Constitutive terms


def penalty_F(d: VectorField, params: ModelParams) -> ScalarField:
    """Pointwise penalty density (|d|^2 - 1)^2 / (4 eta^2)."""
    if d.spectral:
        raise ValidationError("penalty_F expects a physical director field")
    mag2 = np.sum(d.data**2, axis=0)
    vals = (mag2 - 1.0) ** 2 / (4.0 * params.eta**2)
    return ScalarField(d.grid, vals, spectral=False)


def gl_force_f(d: VectorField, params: ModelParams) -> VectorField:
    """Penalty force (|d|^2 - 1) d / eta^2, the d-gradient of penalty_F."""
    if d.spectral:
        raise ValidationError("gl_force_f expects a physical director field")
    mag2 = np.sum(d.data**2, axis=0)
    vals = (mag2 - 1.0) / params.eta**2 * d.data
    return VectorField(d.grid, vals, spectral=False)


def _penalty_force_phys(d_phys: np.ndarray, eta: float) -> np.ndarray:
    mag2 = np.sum(d_phys**2, axis=0)
    return (mag2 - 1.0) / eta**2 * d_phys


def _jacobian_phys(d_hat: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Physical partial derivatives: out[j, k] = d_j d_k on the grid."""
    n = grid.n
    out = np.empty((3, 3, n, n, n))
    for j, kj in enumerate(grid.kvec):
        out[j] = ifft3(1j * kj * d_hat).real
    return out


def _sym_divergence_hat(pairs_phys, grid: GridSpec) -> np.ndarray:
    """Spectral divergence of a symmetric tensor given physically.

    ``pairs_phys(i, j)`` returns the physical (i, j) entry; only i <= j is
    requested.  Products are dealiased before the derivative.  Returns the
    vector with components sum_j i*xi_j * That_ij.
    """
    n = grid.n
    out = np.zeros((3, n, n, n), dtype=np.complex128)
    kvec = grid.kvec
    for i in range(3):
        for j in range(i, 3):
            t_hat = dealias_hat(fft3(pairs_phys(i, j)), grid)
            out[i] += 1j * kvec[j] * t_hat
            if j != i:
                out[j] += 1j * kvec[i] * t_hat
    return out


def advection_divergence_hat(u_phys: np.ndarray, grid: GridSpec) -> np.ndarray:
    """div(u (x) u) in spectral space from dealiased grid products."""
    return _sym_divergence_hat(lambda i, j: u_phys[i] * u_phys[j], grid)


def stress_divergence_hat(jac_phys: np.ndarray, grid: GridSpec) -> np.ndarray:
    """div of the director stress T_ij = sum_k d_i(d_k) d_j(d_k)."""
    return _sym_divergence_hat(
        lambda i, j: np.sum(jac_phys[i] * jac_phys[j], axis=0), grid
    )


def ericksen_stress_div(d: VectorField) -> VectorField:
    """Divergence of grad(d) (x) grad(d), returned spectrally.

    Up to dealiasing this equals grad(d)^T lap(d) + grad(|grad d|^2 / 2);
    after Leray projection the two forms coincide.
    """
    d_hat = d.data if d.spectral else fft3(d.data)
    jac = _jacobian_phys(d_hat, d.grid)
    return VectorField(d.grid, stress_divergence_hat(jac, d.grid), spectral=True)


def pressure_solve(u: VectorField, d: VectorField, params: ModelParams) -> ScalarField:
    """Recover the pressure from (u, d), returned spectrally and mean-free.

    Solves lap(p) = -sum_ij d_i d_j (u_i u_j + grad(d_i).grad(d_j)) per mode:
    phat = -xi_i xi_j Hhat_ij / |xi|^2 with the same dealiased grid products
    the tendencies use, and phat(0) = 0.
    """
    grid = u.grid
    u_phys = ifft3(u.data).real if u.spectral else u.data
    d_hat = d.data if d.spectral else fft3(d.data)
    jac = _jacobian_phys(d_hat, grid)
    kvec = grid.kvec
    n = grid.n
    acc = np.zeros((n, n, n), dtype=np.complex128)
    for i in range(3):
        for j in range(i, 3):
            h_phys = u_phys[i] * u_phys[j] + np.sum(jac[i] * jac[j], axis=0)
            h_hat = dealias_hat(fft3(h_phys), grid)
            w = 1.0 if j == i else 2.0
            acc += w * kvec[i] * kvec[j] * h_hat
    p_hat = -acc * grid.inv_k2
    return ScalarField(grid, p_hat, spectral=True)


# ---------------------------------------------------------------------------
# Right-hand side and stepping


def _tendency_hats(state: State, params: ModelParams):
    """Explicit spectral tendencies (diffusion excluded, pressure projected out)."""
    grid = state.grid
    u_phys = state.u_phys
    jac = _jacobian_phys(state.d.data, grid)
    d_phys = state.d_phys

    force_u = advection_divergence_hat(u_phys, grid)
    force_u += stress_divergence_hat(jac, grid)
    tu_hat = -leray_project_hat(force_u, grid)

    adv_d = np.einsum("jxyz,jkxyz->kxyz", u_phys, jac)
    f_phys = _penalty_force_phys(d_phys, params.eta)
    td_hat = -dealias_hat(fft3(adv_d + f_phys), grid)

    if not (np.all(np.isfinite(tu_hat.view(np.float64)))
            and np.all(np.isfinite(td_hat.view(np.float64)))):
        raise BlowUpError(
            "non-finite tendency", state.t, _blowup_snapshot(state)
        )
    return tu_hat, td_hat


def rhs_explicit(state: State, params: ModelParams, nonlinear: bool = True):
    """Explicit tendencies (du/dt, dd/dt) excluding the implicit Laplacians."""
    grid = state.grid
    if not nonlinear:
        zeros = np.zeros_like(state.u.data)
        return (
            VectorField(grid, zeros, spectral=True),
            VectorField(grid, zeros.copy(), spectral=True),
        )
    tu_hat, td_hat = _tendency_hats(state, params)
    return (
        VectorField(grid, tu_hat, spectral=True),
        VectorField(grid, td_hat, spectral=True),
    )


def _blowup_snapshot(state: State) -> dict:
    u_hat, d_hat = state.u.data, state.d.data
    return {
        "t": state.t,
        "max_abs_u_hat": float(np.max(np.abs(u_hat))),
        "max_abs_d_hat": float(np.max(np.abs(d_hat))),
        "nonfinite_u": int(np.size(u_hat) - np.count_nonzero(np.isfinite(u_hat))),
        "nonfinite_d": int(np.size(d_hat) - np.count_nonzero(np.isfinite(d_hat))),
    }


def step_imex(
    state: State,
    params: ModelParams,
    dt: float,
    scheme: str = "euler",
    nonlinear: bool = True,
) -> State:
    """Advance one step with exact per-mode diffusion and explicit forcing.

    euler:  xhat' = E * (xhat + dt * N(xhat))
    pc:     predict with euler, then xhat' = E*xhat + dt/2 * (E*N + N_pred)

    where E = exp(-c |xi|^2 dt) with c = nu for u and c = 1 for d.  The
    velocity is re-projected after the update and time advances by dt.
    """
    if scheme not in SCHEMES:
        raise ValidationError(f"unknown scheme {scheme!r}", field="time.scheme")
    grid = state.grid
    eu = np.exp(-params.nu * grid.k2 * dt)
    ed = np.exp(-grid.k2 * dt)
    u_hat, d_hat = state.u.data, state.d.data

    if not nonlinear:
        u_new = eu * u_hat
        d_new = ed * d_hat
    else:
        tu, td = _tendency_hats(state, params)
        if scheme == "euler":
            u_new = eu * (u_hat + dt * tu)
            d_new = ed * (d_hat + dt * td)
        else:
            u_pred = leray_project_hat(eu * (u_hat + dt * tu), grid)
            d_pred = ed * (d_hat + dt * td)
            pred = _wrap_state(u_pred, d_pred, grid, state.t + dt)
            tu2, td2 = _tendency_hats(pred, params)
            u_new = eu * u_hat + 0.5 * dt * (eu * tu + tu2)
            d_new = ed * d_hat + 0.5 * dt * (ed * td + td2)

    u_new = leray_project_hat(u_new, grid)
    return _wrap_state(u_new, d_new, grid, state.t + dt)


def _wrap_state(u_hat, d_hat, grid, t) -> State:
    if not (np.all(np.isfinite(u_hat.view(np.float64)))
            and np.all(np.isfinite(d_hat.view(np.float64)))):
        snapshot = {
            "t": t,
            "nonfinite_u": int(np.size(u_hat) - np.count_nonzero(np.isfinite(u_hat))),
            "nonfinite_d": int(np.size(d_hat) - np.count_nonzero(np.isfinite(d_hat))),
        }
        raise BlowUpError("non-finite state after step", t, snapshot)
    return State(
        VectorField(grid, u_hat, spectral=True),
        VectorField(grid, d_hat, spectral=True),
        t,
    )


def clamped_dt(time: TimeSpec, state: State, params: ModelParams) -> float:
    """Step size after the advective CFL and reaction-stiffness clamps."""
    dt = time.dt
    dt = min(dt, time.cfl_safety * params.eta**2 / 4.0)
    umax = float(np.max(np.abs(state.u_phys)))
    if umax > 0.0:
        dt = min(dt, time.cfl_safety * state.grid.spacing / umax)
    return dt


# ---------------------------------------------------------------------------
# Initial conditions


@dataclass(frozen=True)
class InitialNorms:
    """Norms of the generated data, reported for small-data bookkeeping."""

    u_l2: float
    grad_u_l2: float
    u_h1_sq: float
    d_dev_l1: float
    d_dev_l2: float
    d_dev_h2_sq: float
    smallness: float  # ||u0||_H1^2 + ||d0 - w0||_H2^2
    d_mag_min: float
    d_mag_max: float


def _lex_positive(m):
    for c in m:
        if c > 0:
            return True
        if c < 0:
            return False
    return False


def _band_limited_hat(grid: GridSpec, band: int, rng, ncomp: int) -> np.ndarray:
    """Random Hermitian-symmetric coefficients on modes 0 < max|m_j| <= band.

    One complex draw per representative mode, in lexicographic order, so the
    physical field depends only on (seed, band), not on n.
    """
    n = grid.n
    if band >= n // 2:
        raise ValidationError(
            f"band_limit {band} too large for n={n}", field="init.band_limit"
        )
    out = np.zeros((ncomp, n, n, n), dtype=np.complex128)
    rng_vals = rng.standard_normal((2 * band + 1) ** 3 * 2 * ncomp)
    pos = 0
    for m1 in range(-band, band + 1):
        for m2 in range(-band, band + 1):
            for m3 in range(-band, band + 1):
                m = (m1, m2, m3)
                if not _lex_positive(m):
                    continue
                c = rng_vals[pos : pos + ncomp] + 1j * rng_vals[pos + ncomp : pos + 2 * ncomp]
                pos += 2 * ncomp
                idx = (m1 % n, m2 % n, m3 % n)
                cidx = ((-m1) % n, (-m2) % n, (-m3) % n)
                for comp in range(ncomp):
                    out[(comp,) + idx] = c[comp]
                    out[(comp,) + cidx] = np.conj(c[comp])
    return out


def _scale_to_rms(f_hat: np.ndarray, grid: GridSpec, rms: float) -> np.ndarray:
    cur_sq = float(np.sum(f_hat.real**2 + f_hat.imag**2)) / grid.n**6
    if cur_sq == 0.0:
        return f_hat
    return f_hat * (rms / np.sqrt(cur_sq))


def _gaussian_bump(grid: GridSpec, sigma: float, center) -> np.ndarray:
    xx, yy, zz = grid.mesh()
    r2 = (xx - center[0]) ** 2 + (yy - center[1]) ** 2 + (zz - center[2]) ** 2
    return np.exp(-r2 / (2.0 * sigma**2))


def velocity_pattern(spec: InitSpec, grid: GridSpec, rng) -> np.ndarray:
    """Raw physical velocity pattern before projection and mean removal."""
    n = grid.n
    if spec.velocity == "zero" or spec.velocity_amplitude == 0.0:
        return np.zeros((3, n, n, n))
    a = spec.velocity_amplitude
    if spec.velocity == "taylor_green":
        kap = 2.0 * np.pi / grid.box_length
        xx, yy, zz = grid.mesh()
        u = np.empty((3, n, n, n))
        u[0] = a * np.sin(kap * xx) * np.cos(kap * yy) * np.cos(kap * zz)
        u[1] = -a * np.cos(kap * xx) * np.sin(kap * yy) * np.cos(kap * zz)
        u[2] = 0.0
        return u
    if spec.velocity == "random":
        raw = _band_limited_hat(grid, spec.band_limit, rng, 3)
        raw = leray_project_hat(raw, grid)
        raw = _scale_to_rms(raw, grid, a)
        return ifft3(raw).real
    # gaussian_bump: curl of a bump-aligned vector potential, evaluated
    # analytically so the data is identical wherever boxes overlap.
    center = spec.bump_center or (grid.box_length / 2,) * 3
    g = _gaussian_bump(grid, spec.bump_sigma, center)
    xx, yy, zz = grid.mesh()
    grad_g = np.stack(
        [
            -(xx - center[0]) / spec.bump_sigma**2 * g,
            -(yy - center[1]) / spec.bump_sigma**2 * g,
            -(zz - center[2]) / spec.bump_sigma**2 * g,
        ]
    )
    e = np.asarray(spec.velocity_direction)
    return a * np.cross(grad_g, e, axisa=0, axisb=0, axisc=0)


def director_pattern(spec: InitSpec, grid: GridSpec, rng) -> np.ndarray:
    """Raw physical director perturbation phi."""
    n = grid.n
    if spec.director == "zero" or spec.director_amplitude == 0.0:
        return np.zeros((3, n, n, n))
    a = spec.director_amplitude
    e = np.asarray(spec.director_direction)
    if spec.director == "single_mode":
        kap = 2.0 * np.pi / grid.box_length
        coord = grid.mesh()[spec.director_axis]
        return a * np.sin(kap * coord) * e[:, None, None, None]
    if spec.director == "random":
        raw = _band_limited_hat(grid, spec.band_limit, rng, 3)
        raw = _scale_to_rms(raw, grid, a)
        return ifft3(raw).real
    center = spec.bump_center or (grid.box_length / 2,) * 3
    g = _gaussian_bump(grid, spec.bump_sigma, center)
    return a * g * e[:, None, None, None]


def make_initial_conditions(
    spec: InitSpec, grid: GridSpec, params: ModelParams
) -> tuple[State, InitialNorms]:
    """Build the initial state: projected mean-free u0 and unit-length d0.

    The velocity pattern is Leray-projected and its mean mode zeroed; with
    normalization on, d0 = (w0 + phi)/|w0 + phi| pointwise, which requires
    |w0 + phi| >= 1/2 everywhere.
    """
    ss = np.random.SeedSequence(spec.seed)
    vel_rng, dir_rng = [np.random.default_rng(s) for s in ss.spawn(2)]

    u_hat = fft3(velocity_pattern(spec, grid, vel_rng))
    u_hat = leray_project_hat(u_hat, grid)
    u_hat[:, 0, 0, 0] = 0.0

    phi = director_pattern(spec, grid, dir_rng)
    base = phi + params.w0_array[:, None, None, None]
    if spec.normalize_director:
        mag = np.sqrt(np.sum(base**2, axis=0))
        if float(np.min(mag)) < 0.5:
            raise PerturbationTooLargeError(
                f"|w0 + phi| dips to {float(np.min(mag)):.3f} < 1/2; "
                "reduce director_amplitude",
                field="init.director_amplitude",
            )
        d_phys = base / mag
    else:
        d_phys = base
    d_hat = fft3(d_phys)

    state = State(
        VectorField(grid, u_hat, spectral=True),
        VectorField(grid, d_hat, spectral=True),
        0.0,
    )

    w = grid.volume / grid.n**6
    u_l2_sq = l2_norm_sq_hat(u_hat, grid)
    grad_u_sq = float(np.sum(grid.k2 * (u_hat.real**2 + u_hat.imag**2)) * w)
    dev_hat = state.d_deviation_hat(params)
    dev_sq = dev_hat.real**2 + dev_hat.imag**2
    d_l2_sq = float(np.sum(dev_sq) * w)
    d_h2_sq = float(np.sum((1.0 + grid.k2 + grid.k2**2) * dev_sq) * w)
    dev_mag = np.sqrt(np.sum((d_phys - params.w0_array[:, None, None, None]) ** 2, axis=0))
    d_l1 = float(np.sum(dev_mag) * grid.cell_volume)
    d_mag = np.sqrt(np.sum(d_phys**2, axis=0))
    norms = InitialNorms(
        u_l2=float(np.sqrt(u_l2_sq)),
        grad_u_l2=float(np.sqrt(grad_u_sq)),
        u_h1_sq=u_l2_sq + grad_u_sq,
        d_dev_l1=d_l1,
        d_dev_l2=float(np.sqrt(d_l2_sq)),
        d_dev_h2_sq=d_h2_sq,
        smallness=u_l2_sq + grad_u_sq + d_h2_sq,
        d_mag_min=float(np.min(d_mag)),
        d_mag_max=float(np.max(d_mag)),
    )
    return state, norms
