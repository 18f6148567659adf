"""Discretized complex plane: grids, complex fields, quadrature, norms.

The plane is modelled by a uniform square lattice on [-L, L]^2 with a
half-cell vertical stagger, so no sample point lies on the real axis and
the weight 1/|Im z| is finite everywhere.  All quadrature is the midpoint
rule; convergence is tested, not assumed.
"""

from __future__ import annotations

import struct

import numpy as np

__all__ = [
    "Grid",
    "ComplexField",
    "BeltramiCoefficient",
    "integrate",
    "norm",
    "indicator_ball",
    "bandlimited_noise",
    "write_field",
    "read_field",
    "field_to_csv",
]

_HEADER = struct.Struct("<dqd")  # half_width, n, stagger, little-endian


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Grid:
    """Uniform staggered lattice on the square [-L, L]^2.

    Sample points are cell centers,

        z_jk = (-L + (j + 1/2) h) + i (-L + (k + 1/2) h),   h = 2L/n,

    with axis 0 indexing x and axis 1 indexing y.  The half-cell offset
    keeps every sample at distance >= h/2 from the real axis.

    Parameters
    ----------
    half_width : float
        L > 0; the domain is [-L, L]^2.
    n : int
        Samples per axis; must be a power of two, n >= 16.
    """

    def __init__(self, half_width: float, n: int):
        if not half_width > 0:
            raise ValueError(f"half_width must be positive, got {half_width}")
        if not isinstance(n, (int, np.integer)) or not _is_power_of_two(int(n)) or n < 16:
            raise ValueError(f"n must be a power of two >= 16, got {n}")
        self.half_width = float(half_width)
        self.n = int(n)
        self.spacing = 2.0 * self.half_width / self.n
        axis = -self.half_width + (np.arange(self.n) + 0.5) * self.spacing
        axis.setflags(write=False)
        self.axis = axis
        self.stagger = 0.5 * self.spacing

    @property
    def x(self) -> np.ndarray:
        """x coordinates along axis 0 (shape (n,))."""
        return self.axis

    @property
    def y(self) -> np.ndarray:
        """y coordinates along axis 1 (shape (n,))."""
        return self.axis

    def points(self) -> np.ndarray:
        """Complex sample points z_jk as an (n, n) array."""
        return self.axis[:, None] + 1j * self.axis[None, :]

    def cell_area(self) -> float:
        return self.spacing * self.spacing

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Grid)
            and other.half_width == self.half_width
            and other.n == self.n
        )

    def __hash__(self) -> int:
        return hash((self.half_width, self.n))

    def __repr__(self) -> str:
        return f"Grid(half_width={self.half_width}, n={self.n})"


class ComplexField:
    """Complex samples on a :class:`Grid`, immutable after construction.

    Parameters
    ----------
    grid : Grid
    values : ndarray
        Complex array of shape (n, n); values[j, k] is the sample at
        z_jk.  Copied and frozen.
    support_radius : float, optional
        Declared support radius about the origin: the field vanishes for
        |z| > support_radius.  None means no compactness is claimed.
        Transforms that rely on compact support check this declaration.
    """

    def __init__(self, grid: Grid, values: np.ndarray, support_radius: float | None = None):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n, grid.n):
            raise ValueError(f"values shape {values.shape} does not match grid n={grid.n}")
        if not np.all(np.isfinite(values.view(float))):
            raise ValueError("field values must be finite")
        if support_radius is not None and support_radius <= 0:
            raise ValueError("support_radius must be positive when declared")
        self.grid = grid
        self.values = values.copy()
        self.values.setflags(write=False)
        self.support_radius = None if support_radius is None else float(support_radius)

    def with_values(self, values: np.ndarray, support_radius: float | None = None) -> "ComplexField":
        """New field on the same grid."""
        return ComplexField(self.grid, values, support_radius)

    @classmethod
    def zeros(cls, grid: Grid) -> "ComplexField":
        return cls(grid, np.zeros((grid.n, grid.n), dtype=complex))

    def __repr__(self) -> str:
        return (
            f"ComplexField(grid={self.grid!r}, support_radius={self.support_radius})"
        )


class BeltramiCoefficient:
    """A dilatation: a complex field with sup norm < 1 and declared support.

    Parameters
    ----------
    field : ComplexField
        Must carry a declared ``support_radius`` and vanish outside it.

    Attributes
    ----------
    sup_bound : float
        max |values|; construction rejects sup_bound >= 1.
    support_radius : float
    """

    def __init__(self, field: ComplexField):
        if field.support_radius is None:
            raise ValueError("dilatation requires a declared support_radius")
        sup = float(np.abs(field.values).max())
        if sup >= 1.0:
            raise ValueError(f"dilatation sup norm {sup} must be < 1")
        outside = np.abs(field.grid.points()) > field.support_radius
        if np.any(np.abs(field.values[outside]) > 0):
            raise ValueError("dilatation values must vanish outside the declared support")
        self.field = field
        self.sup_bound = sup
        self.support_radius = field.support_radius
        self.grid = field.grid

    def scaled(self, t: float) -> "BeltramiCoefficient":
        """The dilatation t * mu; |t| * sup_bound must stay below 1."""
        return BeltramiCoefficient(
            ComplexField(self.grid, t * self.field.values, self.support_radius)
        )

    def __repr__(self) -> str:
        return (
            f"BeltramiCoefficient(sup_bound={self.sup_bound:.4g}, "
            f"support_radius={self.support_radius:.4g}, grid={self.grid!r})"
        )


def integrate(f: ComplexField) -> complex:
    """Midpoint-rule integral of f over the grid square, h^2 * sum(values)."""
    return complex(f.grid.cell_area() * f.values.sum())


def _weight_values(grid: Grid, weight: str) -> np.ndarray | float:
    if weight == "unweighted":
        return 1.0
    abs_y = np.abs(grid.y)[None, :]
    if weight == "inv_abs_y":
        return 1.0 / abs_y
    if weight == "abs_y":
        return abs_y
    raise ValueError(f"unknown weight {weight!r}")


def norm(f: ComplexField, weight: str = "unweighted") -> float:
    """Weighted L^2 norm of a field.

    Parameters
    ----------
    f : ComplexField
    weight : {'unweighted', 'inv_abs_y', 'abs_y'}
        Weight w in (integral of |f|^2 w dm)^(1/2): the constant 1, the
        singular weight 1/|Im z| (finite on the staggered lattice), or
        |Im z|.

    Returns
    -------
    float
    """
    w = _weight_values(f.grid, weight)
    sq = np.abs(f.values) ** 2 * w
    return float(np.sqrt(f.grid.cell_area() * sq.sum()))


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity ramp: 0 for t <= 0, 1 for t >= 1, exp-flat at both ends."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return a / (a + b)


def indicator_ball(
    grid: Grid, center: complex, radius: float, mollify_width: float = 0.0
) -> ComplexField:
    """Indicator of the ball B(center, radius), optionally mollified.

    With ``mollify_width = 0`` the values are exactly 0 or 1.  Otherwise a
    smooth radial ramp of the given width replaces the jump: the field is
    1 at distance <= radius - mollify_width from the center and 0 outside
    the ball.

    Raises
    ------
    ValueError
        If the ball does not fit inside [-L, L]^2, or the ramp is wider
        than the radius.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if mollify_width < 0 or mollify_width > radius:
        raise ValueError("mollify_width must lie in [0, radius]")
    L = grid.half_width
    cx, cy = float(np.real(center)), float(np.imag(center))
    if abs(cx) + radius > L or abs(cy) + radius > L:
        raise ValueError(f"ball B({center}, {radius}) escapes the domain [-{L}, {L}]^2")
    dist = np.abs(grid.points() - center)
    if mollify_width == 0.0:
        values = (dist <= radius).astype(complex)
    else:
        values = _smooth_step((radius - dist) / mollify_width).astype(complex)
    return ComplexField(grid, values, support_radius=abs(center) + radius)


def bandlimited_noise(grid: Grid, seed: int, cutoff: float = 0.25) -> ComplexField:
    """Deterministic mean-zero complex noise with compact Fourier support.

    Gaussian coefficients are drawn per seed on the full frequency
    lattice, truncated to |xi| <= cutoff / h (so ``cutoff = 1/2`` fills
    the lattice to the Nyquist frequency), the zero mode is removed, and
    the result is normalized to unit L^2 norm.

    Parameters
    ----------
    grid : Grid
    seed : int
        Seed for the generator; identical seeds give identical fields.
    cutoff : float
        Fraction of 1/h bounding the Fourier support, 0 < cutoff <= 1/2.
    """
    if not 0 < cutoff <= 0.5:
        raise ValueError("cutoff must lie in (0, 1/2]")
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal((grid.n, grid.n))
    freq = np.fft.fftfreq(grid.n, d=grid.spacing)
    xi_abs = np.hypot(freq[:, None], freq[None, :])
    coeff[xi_abs > cutoff / grid.spacing] = 0.0
    coeff[0, 0] = 0.0
    values = np.fft.ifft2(coeff)
    scale = np.sqrt(grid.cell_area() * (np.abs(values) ** 2).sum())
    if scale == 0.0:
        raise ValueError("cutoff too small: no modes survive")
    return ComplexField(grid, values / scale)


def write_field(f: ComplexField, path) -> None:
    """Write a field in the binary interchange format.

    Little-endian header (half_width: f64, n: i64, stagger: f64) followed
    by n*n interleaved re/im float64 pairs in row-major (x-major) order.
    """
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(f.grid.half_width, f.grid.n, f.grid.stagger))
        inter = np.empty((f.grid.n * f.grid.n, 2), dtype="<f8")
        inter[:, 0] = f.values.real.ravel()
        inter[:, 1] = f.values.imag.ravel()
        fh.write(inter.tobytes())


def read_field(path) -> ComplexField:
    """Read a field written by :func:`write_field`.

    The declared support radius is reconstructed from the nonzero
    samples (smallest origin-centered disc covering them, padded by one
    cell), since the format does not carry it.
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError("truncated field file: short header")
        half_width, n, stagger = _HEADER.unpack(header)
        grid = Grid(half_width, int(n))
        if abs(stagger - grid.stagger) > 1e-12 * grid.spacing:
            raise ValueError(
                f"stagger {stagger} inconsistent with grid spacing {grid.spacing}"
            )
        payload = np.frombuffer(fh.read(), dtype="<f8")
    if payload.size != 2 * grid.n * grid.n:
        raise ValueError("truncated field file: wrong payload size")
    values = (payload[0::2] + 1j * payload[1::2]).reshape(grid.n, grid.n)
    nz = np.abs(values) > 0
    if nz.any():
        radius = float(np.abs(grid.points()[nz]).max()) + grid.spacing
    else:
        radius = grid.spacing
    return ComplexField(grid, values, support_radius=radius)


def field_to_csv(f: ComplexField, path) -> None:
    """CSV export, one ``x,y,re,im`` row per sample, for plotting."""
    pts = f.grid.points()
    table = np.column_stack(
        [pts.real.ravel(), pts.imag.ravel(), f.values.real.ravel(), f.values.imag.ravel()]
    )
    np.savetxt(path, table, delimiter=",", header="x,y,re,im", comments="")
