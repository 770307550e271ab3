"""Periodic-box spectral core: grids, fields, transforms, operators.

Conventions (normative for the whole package):

* The domain is the cube [0, L)^3 sampled on n points per axis at
  x_i = i * L / n.  Wavenumbers are xi_j = 2*pi*m_j / L with integer mode
  numbers m_j in [-n/2, n/2), laid out in standard FFT order.
* Transforms are the plain complex FFT: forward is an unnormalized sum
  (numpy/scipy convention), inverse carries the 1/n^3 factor.  A constant
  field c therefore has spectral zero-mode value c * n^3.
* Parseval with this normalization reads

      integral |f|^2 dx  =  (L/n)^3  sum_x |f(x)|^2  =  (L^3/n^6) sum_m |fhat_m|^2

  and is the normative consistency check for every operation here.
* Real fields are stored as float64 in physical space and complex128 in
  spectral space; conjugate symmetry of spectral data is maintained by
  construction (all operators are symmetric multipliers or grid products).
* FFTs run on ``scipy.fft`` with a worker count taken from the
  NEMFLOW_FFT_WORKERS environment variable (default 1).  pocketfft computes
  each 1-D line transform identically regardless of worker count, so
  results are bitwise deterministic for any fixed setting.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as _sfft

from .errors import (
    InvalidFieldError,
    RankError,
    RepresentationError,
    ValidationError,
)

_FFT_WORKERS = int(os.environ.get("NEMFLOW_FFT_WORKERS", "1"))

FORWARD = "forward"
INVERSE = "inverse"


def fft3(a: np.ndarray) -> np.ndarray:
    """Forward 3-D FFT over the last three axes."""
    return _sfft.fftn(a, axes=(-3, -2, -1), workers=_FFT_WORKERS)


def ifft3(a: np.ndarray) -> np.ndarray:
    """Inverse 3-D FFT over the last three axes (returns complex)."""
    return _sfft.ifftn(a, axes=(-3, -2, -1), workers=_FFT_WORKERS)


@dataclass(frozen=True)
class GridSpec:
    """Cubic periodic grid: n points per axis on a box of side box_length.

    dealias_fraction is the kept fraction of the mode range: modes with any
    |m_j| > dealias_fraction * n/2 are zeroed by :func:`dealias`.
    """

    n: int
    box_length: float
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n % 2 != 0 or self.n < 8:
            raise ValidationError(
                f"n must be an even integer >= 8, got {self.n}", field="grid.n"
            )
        if not (self.box_length > 0 and np.isfinite(self.box_length)):
            raise ValidationError(
                f"box_length must be positive, got {self.box_length}",
                field="grid.box_length",
            )
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise ValidationError(
                f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}",
                field="grid.dealias_fraction",
            )

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    @property
    def cell_volume(self) -> float:
        return (self.box_length / self.n) ** 3

    @property
    def volume(self) -> float:
        return self.box_length**3

    @cached_property
    def x1d(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    @cached_property
    def modes1d(self) -> np.ndarray:
        """Integer mode numbers in FFT order: 0..n/2-1, -n/2..-1."""
        return np.fft.fftfreq(self.n, 1.0 / self.n)

    @cached_property
    def k1d(self) -> np.ndarray:
        return 2.0 * np.pi / self.box_length * self.modes1d

    @cached_property
    def kvec(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable wavenumber arrays along each axis."""
        k = self.k1d
        return (k[:, None, None], k[None, :, None], k[None, None, :])

    @cached_property
    def k2(self) -> np.ndarray:
        kx, ky, kz = self.kvec
        return kx**2 + ky**2 + kz**2

    @cached_property
    def inv_k2(self) -> np.ndarray:
        """1/|xi|^2 with the zero mode mapped to 0."""
        k2 = self.k2.copy()
        k2[0, 0, 0] = 1.0
        out = 1.0 / k2
        out[0, 0, 0] = 0.0
        return out

    @cached_property
    def dealias_keep(self) -> np.ndarray:
        """Boolean keep-mask implementing the dealiasing rule."""
        cutoff = self.dealias_fraction * (self.n // 2)
        m = np.abs(self.modes1d)
        keep1d = m <= cutoff
        return (
            keep1d[:, None, None] & keep1d[None, :, None] & keep1d[None, None, :]
        )

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.x1d
        return np.meshgrid(x, x, x, indexing="ij")

    def max_resolved_k(self) -> float:
        """Largest |xi| magnitude present on the grid (corner of mode cube)."""
        kmax1d = 2.0 * np.pi / self.box_length * (self.n // 2)
        return np.sqrt(3.0) * kmax1d


@dataclass(frozen=True, eq=False)
class SpectralMask:
    """Boolean per-mode keep mask tied to a grid."""

    grid: GridSpec
    keep: np.ndarray

    def __post_init__(self):
        n = self.grid.n
        if self.keep.shape != (n, n, n) or self.keep.dtype != np.bool_:
            raise ValidationError("mask shape/dtype does not match grid")


def dealias_mask(grid: GridSpec) -> SpectralMask:
    return SpectralMask(grid, grid.dealias_keep)


def ball_mask(grid: GridSpec, radius: float) -> SpectralMask:
    """Keep modes with 0 < |xi| <= radius (zero mode excluded)."""
    keep = grid.k2 <= radius**2
    keep[0, 0, 0] = False
    return SpectralMask(grid, keep)


class _FieldBase:
    """Shared checks for scalar/vector fields; concrete classes below."""

    _rank_shape: int  # number of leading component axes (0 or 1)

    def __init__(self, grid: GridSpec, data: np.ndarray, spectral: bool = False):
        n = grid.n
        expected = (3, n, n, n) if self._rank_shape else (n, n, n)
        data = np.asarray(data)
        if data.shape != expected:
            raise RankError(
                f"expected data shape {expected}, got {data.shape}"
            )
        if spectral:
            data = np.ascontiguousarray(data, dtype=np.complex128)
        else:
            if np.iscomplexobj(data):
                raise RepresentationError("physical field must be real-valued")
            data = np.ascontiguousarray(data, dtype=np.float64)
        if not np.all(np.isfinite(data.view(np.float64))):
            raise InvalidFieldError("field contains non-finite samples")
        self.grid = grid
        self.data = data
        self.spectral = spectral

    @property
    def is_vector(self) -> bool:
        return self._rank_shape == 1


class ScalarField(_FieldBase):
    _rank_shape = 0


class VectorField(_FieldBase):
    _rank_shape = 1


def _same_kind(field, data, spectral):
    return type(field)(field.grid, data, spectral=spectral)


def to_spectral(field):
    if field.spectral:
        raise RepresentationError("field already spectral")
    return _same_kind(field, fft3(field.data), spectral=True)


def to_physical(field, check_reality: bool = False):
    """Inverse transform; optionally verify the imaginary residue is tiny."""
    if not field.spectral:
        raise RepresentationError("field already physical")
    z = ifft3(field.data)
    if check_reality:
        scale = np.max(np.abs(z))
        if scale > 0 and np.max(np.abs(z.imag)) > 1e-12 * scale:
            raise InvalidFieldError(
                "inverse transform has non-negligible imaginary part; "
                "spectral data lost conjugate symmetry"
            )
    return _same_kind(field, z.real, spectral=False)


def transform(field, direction: str, check_reality: bool = False):
    """Forward (physical->spectral) or inverse transform of a field."""
    if direction == FORWARD:
        return to_spectral(field)
    if direction == INVERSE:
        return to_physical(field, check_reality=check_reality)
    raise ValueError(f"unknown direction {direction!r}")


def _require_spectral(field):
    if not field.spectral:
        raise RepresentationError("operation requires spectral representation")


def gradient(field: ScalarField) -> VectorField:
    """Spectral gradient of a scalar: component j is i*xi_j * fhat."""
    _require_spectral(field)
    if field.is_vector:
        raise RankError("gradient is defined here for scalar fields")
    kx, ky, kz = field.grid.kvec
    out = np.stack(
        [1j * kx * field.data, 1j * ky * field.data, 1j * kz * field.data]
    )
    return VectorField(field.grid, out, spectral=True)


def divergence(field: VectorField) -> ScalarField:
    _require_spectral(field)
    if not field.is_vector:
        raise RankError("divergence requires a vector field")
    kx, ky, kz = field.grid.kvec
    out = 1j * (kx * field.data[0] + ky * field.data[1] + kz * field.data[2])
    return ScalarField(field.grid, out, spectral=True)


def laplacian(field):
    """Spectral Laplacian: multiply every mode by -|xi|^2."""
    _require_spectral(field)
    return _same_kind(field, -field.grid.k2 * field.data, spectral=True)


def jacobian(field: VectorField) -> np.ndarray:
    """All partial derivatives d_j f_k of a spectral vector field.

    Returns a (3, 3, n, n, n) complex array indexed [j, k] = d_j f_k.
    """
    _require_spectral(field)
    if not field.is_vector:
        raise RankError("jacobian requires a vector field")
    out = np.empty((3, 3) + field.data.shape[1:], dtype=np.complex128)
    for j, kj in enumerate(field.grid.kvec):
        out[j] = 1j * kj * field.data
    return out


def leray_project_hat(v_hat: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Per-mode projection v - xi (xi . v)/|xi|^2; zero mode untouched."""
    kx, ky, kz = grid.kvec
    k_dot_v = kx * v_hat[0] + ky * v_hat[1] + kz * v_hat[2]
    factor = k_dot_v * grid.inv_k2
    out = np.empty_like(v_hat)
    out[0] = v_hat[0] - kx * factor
    out[1] = v_hat[1] - ky * factor
    out[2] = v_hat[2] - kz * factor
    return out


def leray_project(field: VectorField) -> VectorField:
    """Project a spectral vector field onto its divergence-free part."""
    _require_spectral(field)
    if not field.is_vector:
        raise RankError("leray projection requires a vector field")
    return VectorField(field.grid, leray_project_hat(field.data, field.grid), spectral=True)


def apply_mask(field, mask: SpectralMask):
    _require_spectral(field)
    return _same_kind(field, np.where(mask.keep, field.data, 0.0), spectral=True)


def dealias_hat(a: np.ndarray, grid: GridSpec) -> np.ndarray:
    return np.where(grid.dealias_keep, a, 0.0)


def dealias(field):
    """Zero all modes outside the grid's dealiasing cube."""
    _require_spectral(field)
    return _same_kind(field, dealias_hat(field.data, field.grid), spectral=True)


# ---------------------------------------------------------------------------
# Norms and integrals


def l2_norm_sq(field) -> float:
    """Integral of |f|^2 over the box, via grid sum or Parseval."""
    if field.spectral:
        return l2_norm_sq_hat(field.data, field.grid)
    return float(np.sum(field.data.astype(np.float64) ** 2) * field.grid.cell_volume)


def l2_norm_sq_hat(a_hat: np.ndarray, grid: GridSpec) -> float:
    return float(
        np.sum(a_hat.real**2 + a_hat.imag**2) * grid.volume / grid.n**6
    )


def inner_product_hat(a_hat: np.ndarray, b_hat: np.ndarray, grid: GridSpec) -> float:
    """Real L2 inner product of two spectral fields (integral of a.b)."""
    return float(
        np.sum(a_hat.real * b_hat.real + a_hat.imag * b_hat.imag)
        * grid.volume
        / grid.n**6
    )


def integral(field: ScalarField) -> float:
    """Plain integral of a physical scalar field (cell-volume weighted sum)."""
    if field.spectral:
        raise RepresentationError("integral is a physical-space quadrature")
    return float(np.sum(field.data) * field.grid.cell_volume)


def lp_norm(values: np.ndarray, p: float, grid: GridSpec) -> float:
    """L^p norm of pointwise magnitudes by cell-volume-weighted grid sum."""
    if p == np.inf:
        return float(np.max(values))
    return float((np.sum(values**p) * grid.cell_volume) ** (1.0 / p))


def magnitude(field: VectorField) -> np.ndarray:
    """Pointwise Euclidean magnitude of a physical vector field."""
    if field.spectral:
        raise RepresentationError("magnitude is a physical-space quantity")
    return np.sqrt(np.sum(field.data**2, axis=0))
