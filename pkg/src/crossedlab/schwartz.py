"""Discretized rapidly decreasing functions and their calculus.

Functions take values in M_d(C) and live on one of two session grids:

* LineGrid: N equispaced nodes on [-L, L), stand-in for the real line.  A
  function is admissible only while its mass at the domain edge is at the
  rounding floor; every operation that would wrap mass around checks this
  and raises DomainTruncationError instead of silently folding.
* CircleGrid: N equispaced nodes on [0, 1), the circle with period 1.

Derivatives and antiderivatives are spectral (trigonometric interpolation),
integrals are the rectangle rule (which on these grids is the trapezoid rule
for periodic/decaying integrands, i.e. spectrally accurate), and the Fourier
operator uses the continuous kernel exp(-2*pi*i*x*y) realized by a chirp-z
transform so that input and output live on the same grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .algebra import matrix_norms, sup_norm
from .errors import (
    DimensionMismatchError,
    DomainTruncationError,
    GridMismatchError,
    MeanNotZeroError,
    NotInIdealError,
)

DECAY_TOL = 1e-10
MEAN_ZERO_TOL = 1e-8
DIAG_TOL = 1e-8
EDGE_NODES = 4


def _check_points(n: int):
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"points must be a power of two >= 16, got {n}")


@dataclass(frozen=True)
class LineGrid:
    """N nodes x_i = -L + i*h on [-L, L), h = 2L/N."""

    half_width: float = 10.0
    points: int = 512

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        _check_points(self.points)

    group = "line"

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def nodes(self) -> np.ndarray:
        return self.spacing * np.arange(self.points) - self.half_width

    @property
    def period(self) -> float:
        return 2.0 * self.half_width


@dataclass(frozen=True)
class CircleGrid:
    """N nodes x_i = i/N on the unit-period circle."""

    points: int = 128

    def __post_init__(self):
        _check_points(self.points)

    group = "circle"
    period = 1.0

    @property
    def spacing(self) -> float:
        return 1.0 / self.points

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.points) / self.points


Grid = LineGrid | CircleGrid


def angular_frequencies(grid: Grid) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(grid.points, d=grid.spacing)


def _coerce_values(values, n_axes: int, points: int) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    if v.ndim == n_axes:
        v = v[..., None, None]  # scalar samples become 1x1 matrices
    if v.ndim != n_axes + 2 or v.shape[-1] != v.shape[-2]:
        raise DimensionMismatchError(
            f"expected shape ({'N, ' * n_axes}d, d), got {v.shape}"
        )
    if any(s != points for s in v.shape[:n_axes]):
        raise GridMismatchError(f"grid has {points} points but values have shape {v.shape}")
    return v


@dataclass
class SampledFunction:
    """One-variable function, values (N, d, d)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = _coerce_values(self.values, 1, self.grid.points)

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    def sup(self) -> float:
        return sup_norm(self.values)


@dataclass
class BiSampledFunction:
    """Two-variable function on grid x grid, values (N, N, d, d); axis 0 is
    the first variable."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = _coerce_values(self.values, 2, self.grid.points)

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    def sup(self) -> float:
        return sup_norm(self.values)


def same_grid(a: Grid, b: Grid) -> bool:
    return type(a) is type(b) and a == b


def _require_same_grid(f, g):
    if not same_grid(f.grid, g.grid):
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dims differ: {f.dim} vs {g.dim}")


def edge_mass(f: SampledFunction | BiSampledFunction) -> float:
    """Largest matrix norm on the outermost nodes, relative to the sup.

    Zero on the circle (nothing is truncated there).
    """
    if f.grid.group == "circle":
        return 0.0
    s = f.sup()
    if s == 0.0:
        return 0.0
    sl = list(range(EDGE_NODES)) + list(range(-EDGE_NODES, 0))
    if isinstance(f, SampledFunction):
        worst = matrix_norms(f.values[sl]).max()
    else:
        worst = max(matrix_norms(f.values[sl, :]).max(), matrix_norms(f.values[:, sl]).max())
    return float(worst) / s


def assert_decay(f, tol: float = DECAY_TOL, what: str = "function"):
    m = edge_mass(f)
    if m > tol:
        raise DomainTruncationError(
            f"{what} carries relative mass {m:.3e} at the domain edge (tol {tol:.1e}); "
            "enlarge the domain or shrink the input"
        )


def _spectral_multiplier(values: np.ndarray, mult: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * values.ndim
    shape[axis] = values.shape[axis]
    spec = np.fft.fft(values, axis=axis) * mult.reshape(shape)
    return np.fft.ifft(spec, axis=axis)


def _derivative_values(values: np.ndarray, grid: Grid, axis: int, order: int) -> np.ndarray:
    w = angular_frequencies(grid)
    mult = (1j * w) ** order
    if order % 2 == 1:
        mult[grid.points // 2] = 0.0  # odd-order Nyquist mode has no consistent sign
    return _spectral_multiplier(values, mult, axis)


def differentiate(f, axis: int | None = None, order: int = 1):
    """Spectral derivative.  axis selects the variable of a two-variable
    function and must be omitted for one-variable input."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if isinstance(f, SampledFunction):
        if axis not in (None, 0):
            raise ValueError("one-variable functions only have axis 0")
        return SampledFunction(f.grid, _derivative_values(f.values, f.grid, 0, order))
    if axis not in (0, 1):
        raise ValueError("two-variable functions need axis 0 or 1")
    return BiSampledFunction(f.grid, _derivative_values(f.values, f.grid, axis, order))


def integrate(f) -> np.ndarray:
    """Grid quadrature: h * sum (both axes for two-variable input)."""
    if isinstance(f, SampledFunction):
        return f.grid.spacing * f.values.sum(axis=0)
    return f.grid.spacing ** 2 * f.values.sum(axis=(0, 1))


def _mean_zero_antiderivative(values: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """Antiderivative of the mean-removed part, itself mean-free along axis."""
    w = angular_frequencies(grid)
    mult = np.zeros_like(w, dtype=complex)
    mult[1:] = 1.0 / (1j * w[1:])
    return _spectral_multiplier(values, mult, axis)


def cumulative_integral(f: SampledFunction, mass_tol: float = MEAN_ZERO_TOL) -> SampledFunction:
    """g(x) = integral of f from the left edge (line) or the mean-zero
    primitive (circle).

    On the line the total mass must be negligible relative to the sup, or
    the primitive would not decay; on the circle each nonzero mean makes
    the primitive multivalued.  Both cases raise MeanNotZeroError.
    """
    mass = sup_norm(integrate(f)[None])
    if mass > mass_tol * (1.0 + f.sup()):
        raise MeanNotZeroError(
            f"total mass {mass:.3e} exceeds tolerance {mass_tol:.1e}; no primitive in class"
        )
    vals = f.values
    mbar = vals.mean(axis=0)
    A = _mean_zero_antiderivative(vals - mbar, f.grid, 0)
    if f.grid.group == "line":
        # pin g(-L) = 0 and restore the (rounding-level) affine part exactly
        A = A - A[0]
        A = A + mbar * (f.grid.nodes + f.grid.half_width)[:, None, None]
    return SampledFunction(f.grid, A)


def seminorm_kl(f: SampledFunction, k: int, l: int) -> float:
    """sup_x |x|^k ||(d/dx)^l f(x)||; the weight is 1 on the circle."""
    if k < 0 or l < 0:
        raise ValueError("orders must be nonnegative")
    vals = f.values if l == 0 else _derivative_values(f.values, f.grid, 0, l)
    norms = matrix_norms(vals)
    if f.grid.group == "line" and k > 0:
        norms = norms * np.abs(f.grid.nodes) ** k
    return float(norms.max())


def _require_fourier_grid(grid: Grid):
    if grid.group != "line":
        raise GridMismatchError("the Fourier operator is defined for line grids only")
    L = grid.half_width
    if grid.points < 4.0 * L * L:
        raise GridMismatchError(
            f"need points >= 4*half_width^2 so the frequency window covers the grid "
            f"(points={grid.points}, half_width={L})"
        )


def _fourier_values(values: np.ndarray, grid: LineGrid, axis: int, inverse: bool) -> np.ndarray:
    """Continuous-kernel transform h * sum_i f(x_i) exp(-+2*pi*i*x_i*y_j),
    output on the same grid, via a chirp-z transform.

    With x_i = -L + h*i and y_j = -L + h*j the kernel factors into pre/post
    phases and the chirp w = exp(-+2*pi*i*h^2), which is exactly czt's shape.
    """
    N, h, L = grid.points, grid.spacing, grid.half_width
    s = 1.0 if inverse else -1.0
    idx = np.arange(N)
    pre = np.exp(-s * 2j * np.pi * L * h * idx)
    post = h * np.exp(s * 2j * np.pi * L * L) * np.exp(-s * 2j * np.pi * L * h * idx)

    moved = np.moveaxis(values, axis, 0)
    shape = (N,) + (1,) * (moved.ndim - 1)
    g = moved * pre.reshape(shape)
    out = czt(g, m=N, w=np.exp(s * 2j * np.pi * h * h), a=1.0 + 0j, axis=0)
    out = out * post.reshape(shape)
    return np.moveaxis(out, 0, axis)


def fourier_transform(f: SampledFunction, inverse: bool = False) -> SampledFunction:
    """Fourier transform with kernel exp(-2*pi*i*x*y) (no inverse-side
    normalization constant); `inverse=True` flips the kernel sign."""
    _require_fourier_grid(f.grid)
    assert_decay(f, what="fourier input")
    return SampledFunction(f.grid, _fourier_values(f.values, f.grid, 0, inverse))


def fourier_transform_plane(F: BiSampledFunction, inverse: bool = False) -> BiSampledFunction:
    """Transform in both variables of a two-variable function."""
    _require_fourier_grid(F.grid)
    out = _fourier_values(F.values, F.grid, 0, inverse)
    out = _fourier_values(out, F.grid, 1, inverse)
    return BiSampledFunction(F.grid, out)


def pointwise_multiply(f, g):
    """(f g)(x) = f(x) g(x), the algebra product at each node."""
    _require_same_grid(f, g)
    if type(f) is not type(g):
        raise GridMismatchError("cannot mix one- and two-variable functions")
    cls = type(f)
    return cls(f.grid, f.values @ g.values)


def _convolve_values(fv: np.ndarray, gv: np.ndarray, grid: Grid) -> np.ndarray:
    """h * sum_j f_j g_{i-j} with matrix products, by FFT along the group.

    On the line the node offset makes g(x_i - x_j) = g at index i-j+N/2;
    rolling g by N/2 turns that into plain circular convolution.
    """
    N = grid.points
    gg = np.roll(gv, -(N // 2), axis=0) if grid.group == "line" else gv
    Fh = np.fft.fft(fv, axis=0)
    Gh = np.fft.fft(gg, axis=0)
    return grid.spacing * np.fft.ifft(Fh @ Gh, axis=0)


def _convolve_oracle_values(fv: np.ndarray, gv: np.ndarray, grid: Grid) -> np.ndarray:
    """Literal quadrature double loop; off-grid points of g count as zero on
    the line.  Slow on purpose: this is the independent check."""
    N = grid.points
    out = np.zeros_like(fv)
    for i in range(N):
        for j in range(N):
            if grid.group == "line":
                k = i - j + N // 2
                if k < 0 or k >= N:
                    continue
            else:
                k = (i - j) % N
            out[i] += fv[j] @ gv[k]
    return grid.spacing * out


def convolve(f: SampledFunction, g: SampledFunction, oracle: bool = False) -> SampledFunction:
    """Group convolution (f * g)(x) = integral f(y) g(x - y) dy."""
    _require_same_grid(f, g)
    if f.grid.group == "line":
        assert_decay(f, what="convolution factor")
        assert_decay(g, what="convolution factor")
    kernel = _convolve_oracle_values if oracle else _convolve_values
    out = SampledFunction(f.grid, kernel(f.values, g.values, f.grid))
    if f.grid.group == "line":
        assert_decay(out, what="convolution result")
    return out


def hadamard_divide(F: BiSampledFunction, diag_tol: float = DIAG_TOL) -> BiSampledFunction:
    """G with F(x, y) = (x - y) G(x, y).

    Needs F to vanish on the diagonal (relative to its sup), else
    NotInIdealError.  Off the diagonal the quotient is literal division;
    on it, the limit (d/dx - d/dy)F / 2 evaluated spectrally.
    """
    if F.grid.group != "line":
        raise GridMismatchError("coordinate-difference division is defined on the line")
    n = F.grid.points
    diag = np.einsum("iiab->iab", F.values)
    worst = matrix_norms(diag).max()
    if worst > diag_tol * (1.0 + F.sup()):
        raise NotInIdealError(
            f"diagonal values reach {worst:.3e} (tol {diag_tol:.1e}); "
            "not in the ideal generated by x - y"
        )
    x = F.grid.nodes
    denom = x[:, None] - x[None, :]
    np.fill_diagonal(denom, 1.0)
    out = F.values / denom[:, :, None, None]
    dF = _derivative_values(F.values, F.grid, 0, 1) - _derivative_values(F.values, F.grid, 1, 1)
    limit = np.einsum("iiab->iab", dF) / 2.0
    out[np.arange(n), np.arange(n)] = limit
    return BiSampledFunction(F.grid, out)


def dump_csv(f: SampledFunction, path):
    """One row per node: x plus re/im of every matrix entry."""
    d = f.dim
    header = ["x"]
    for a in range(d):
        for b in range(d):
            header += [f"re_{a}{b}", f"im_{a}{b}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, x in enumerate(f.grid.nodes):
            row = [f"{x:.17g}"]
            for a in range(d):
                for b in range(d):
                    z = f.values[i, a, b]
                    row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
            w.writerow(row)
