"""The split exact sequence of function bimodules and its homotopies.

Two-variable functions W(x, y) sit between tensors and the crossed product:

    tensors  --I1-->  plane functions  --pi-->  crossed product

with I1(f (x) g)(x, y) = alpha_{-x}(f(x)) g(y) and the antidiagonal integral
pi(W)(s) = integral alpha_t(W(t, s - t)) dt, so that pi o I1 is the twisted
multiplication.  The derivation

    iota(W) = dW/dx - dW/dy + alpha'_0(W)

satisfies pi o iota = 0 (its integrand along the antidiagonal is a total
derivative), and the sequence splits:

    pi o rho = id,            iota o beta + rho o pi = id,

where rho spreads a one-variable function over the antidiagonal through a
bump profile and beta integrates along it.  On the line beta is also a left
inverse of iota; on the circle iota has the kernel alpha_{-x}(c(x + y)), so
no left inverse exists and only the corrected identity

    beta o iota = id - constant_section o pi

holds (constant_section is rho with the bump replaced by the constant 1).

All maps are computed in rotated coordinates (t, s) = (x, x + y), where the
antidiagonal becomes the s-fibers and iota becomes d/dt conjugated by the
action gauge R(t, s) = alpha_t(W(t, s - t)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Action, generator_power_field, propagators, sup_norm
from .crossed import CrossedElement, alt_product_iso, twisted_convolve, twisted_derivative
from .errors import GridMismatchError, MeanNotZeroError
from .schwartz import (
    BiSampledFunction,
    Grid,
    SampledFunction,
    _mean_zero_antiderivative,
    differentiate,
)

BETA_MASS_TOL = 1e-6


@dataclass
class BumpFunction:
    """Normalized averaging profile: h * sum(values) = 1 on its grid."""

    grid: Grid
    values: np.ndarray
    profile: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.points,):
            raise GridMismatchError(f"bump values must have shape ({self.grid.points},)")
        mass = self.grid.spacing * v.sum()
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"bump is not grid-normalized (mass {mass!r})")
        self.values = v


def standard_bump(grid: Grid, sharpness: float = 9.0, harmonic_order: int = 8) -> BumpFunction:
    """Default profile for the section and homotopy.

    Line: c * exp(-sharpness / (1 - t^2)) on |t| < 1, identically zero
    outside; larger sharpness pushes the spectral tail down (the homotopy
    differentiates the profile implicitly, so its smoothness on the grid
    limits every residual).  Circle: the band-limited window
    c * (1 + cos(2 pi x))^harmonic_order, exactly representable on the grid.
    """
    x = grid.nodes
    if grid.group == "line":
        v = np.zeros(grid.points)
        inside = np.abs(x) < 1.0
        v[inside] = np.exp(-sharpness / (1.0 - x[inside] ** 2))
        profile = f"compact(sharpness={sharpness})"
    else:
        v = (1.0 + np.cos(2.0 * np.pi * x)) ** harmonic_order
        profile = f"raised-cosine(order={harmonic_order})"
    v = v / (grid.spacing * v.sum())
    return BumpFunction(grid, v, profile)


def _check_plane(FF: BiSampledFunction, action: Action):
    if action.group != FF.grid.group:
        raise GridMismatchError(
            f"action on the {action.group} cannot move plane functions on the {FF.grid.group}"
        )
    if action.dim != FF.dim:
        raise GridMismatchError(f"action dim {action.dim} != function dim {FF.dim}")


def _rotated(FF: BiSampledFunction, action: Action) -> np.ndarray:
    """R[i, m] = alpha_{t_i}(W(t_i, s_m - t_i)); off-grid points are zero on
    the line (the decay guard elsewhere keeps that honest)."""
    N = FF.grid.points
    ii = np.arange(N)
    k = ii[None, :] - ii[:, None]
    if FF.grid.group == "line":
        k = k + N // 2
        valid = (k >= 0) & (k < N)
        R = FF.values[ii[:, None], np.clip(k, 0, N - 1)]
        R[~valid] = 0.0
    else:
        R = FF.values[ii[:, None], k % N]
    V, Vi = propagators(action, FF.grid.nodes)
    if V is not None:
        R = V[:, None] @ R @ Vi[:, None]
    return R


def _antidiagonal_gather(values: np.ndarray, grid: Grid) -> np.ndarray:
    """B[i, j] = values[i or :, i + j - N/2] (mod N on the circle), the
    inverse change of coordinates s = x + y; accepts (N, ...) or (N, N, ...)."""
    N = grid.points
    ii = np.arange(N)
    m = ii[:, None] + ii[None, :]
    if grid.group == "line":
        m = m - N // 2
        valid = (m >= 0) & (m < N)
        mc = np.clip(m, 0, N - 1)
    else:
        valid = None
        mc = m % N
    if values.ndim >= 2 and values.shape[:2] == (N, N):
        B = values[ii[:, None], mc]
    else:
        B = values[mc]
    if valid is not None:
        B[~valid] = 0.0
    return B


def plane_derivation(FF: BiSampledFunction, action: Action) -> BiSampledFunction:
    """iota(W) = dW/dx - dW/dy + alpha'_0(W(x, y))."""
    _check_plane(FF, action)
    out = (
        differentiate(FF, axis=0).values
        - differentiate(FF, axis=1).values
        + generator_power_field(action, 1, FF.values)
    )
    return BiSampledFunction(FF.grid, out)


def antidiagonal_integral(FF: BiSampledFunction, action: Action) -> CrossedElement:
    """pi(W)(s) = integral alpha_t(W(t, s - t)) dt."""
    _check_plane(FF, action)
    vals = FF.grid.spacing * _rotated(FF, action).sum(axis=0)
    return CrossedElement(SampledFunction(FF.grid, vals), action)


def plane_section(axis: str, f: CrossedElement, bump: BumpFunction) -> BiSampledFunction:
    """rho_x(f)(x, y) = phi(y) alpha_{-x}(f(x + y)) and rho_y with phi(x).

    Grid normalization of phi makes pi o rho the exact identity in grid
    quadrature.  rho_x is a left module map, rho_y a right one.
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    if bump.grid != f.grid:
        raise GridMismatchError("bump and function live on different grids")
    W = _antidiagonal_gather(f.values, f.grid)
    V, Vi = propagators(f.action, f.grid.nodes)
    if V is not None:
        W = Vi[:, None] @ W @ V[:, None]
    phi = bump.values
    if axis == "x":
        return BiSampledFunction(f.grid, phi[None, :, None, None] * W)
    return BiSampledFunction(f.grid, phi[:, None, None, None] * W)


def constant_section(f: CrossedElement) -> BiSampledFunction:
    """rho with the bump replaced by the constant 1: the projection onto the
    kernel of iota on the circle (where constants integrate to 1 per fiber).
    On the line this leaves the rapidly decreasing class; it exists for the
    corrected circle identity and for diagnostics."""
    W = _antidiagonal_gather(f.values, f.grid)
    V, Vi = propagators(f.action, f.grid.nodes)
    if V is not None:
        W = Vi[:, None] @ W @ V[:, None]
    return BiSampledFunction(f.grid, W)


def splitting_homotopy(
    axis: str,
    FF: BiSampledFunction,
    action: Action,
    bump: BumpFunction,
    mass_tol: float = BETA_MASS_TOL,
) -> BiSampledFunction:
    """beta_x / beta_y: integrate W along the antidiagonal direction against
    the complement of the bump window.

    In rotated coordinates, chi(t, s) = R(t, s) - phi_w(t, s) pi(W)(s) has
    exactly zero mass in t for every s (phi is grid-normalized; for beta_x
    the window is phi(s - t), for beta_y it is phi(t)).  beta is the
    t-antiderivative of chi, pinned at the left edge on the line and taken
    mean-zero on the circle, pulled back to (x, y) coordinates.

    Satisfies iota o beta + rho o pi = id on both groups and beta o iota = id
    on the line; raises MeanNotZeroError when the window mass balance fails
    (input not decaying / inconsistent discretization).
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    _check_plane(FF, action)
    if bump.grid != FF.grid:
        raise GridMismatchError("bump and function live on different grids")
    grid = FF.grid
    N, h = grid.points, grid.spacing
    R = _rotated(FF, action)
    piv = h * R.sum(axis=0)

    phi = bump.values
    if axis == "x":
        # phi(s - t) as a (t, s) array, zero where s - t leaves the line grid
        ii = np.arange(N)
        k = ii[None, :] - ii[:, None]
        if grid.group == "line":
            k = k + N // 2
            valid = (k >= 0) & (k < N)
            phiw = np.where(valid, phi[np.clip(k, 0, N - 1)], 0.0)
        else:
            phiw = phi[k % N]
    else:
        phiw = np.broadcast_to(phi[:, None], (N, N))

    chi = R - phiw[:, :, None, None] * piv[None, :]
    mass = sup_norm(h * chi.sum(axis=0)[None])
    if mass > mass_tol * (1.0 + FF.sup()):
        raise MeanNotZeroError(
            f"antidiagonal mass balance violated (residual {mass:.3e}); "
            "the input is not rapidly decreasing on this grid"
        )
    if grid.group == "line":
        mbar = chi.mean(axis=0)
        A = _mean_zero_antiderivative(chi - mbar[None], grid, 0)
        A = A - A[0][None]
        A = A + mbar[None] * (grid.nodes + grid.half_width)[:, None, None, None]
    else:
        A = _mean_zero_antiderivative(chi, grid, 0)
    B = _antidiagonal_gather(A, grid)
    V, Vi = propagators(action, grid.nodes)
    if V is not None:
        B = Vi[:, None] @ B @ V[:, None]
    return BiSampledFunction(grid, B)


# ---------------------------------------------------------------------------
# the tensor picture


@dataclass
class TensorElement:
    """Finite sum of elementary tensors f (x) g over the crossed product."""

    pairs: list[tuple[CrossedElement, CrossedElement]]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a tensor needs at least one term")
        f0, _ = self.pairs[0]
        for f, g in self.pairs:
            for el in (f, g):
                if el.grid != f0.grid:
                    raise GridMismatchError("tensor factors live on different grids")
                if el.action is not f0.action and not _same(el.action, f0.action):
                    raise GridMismatchError("tensor factors carry different actions")

    @property
    def action(self) -> Action:
        return self.pairs[0][0].action

    @property
    def grid(self) -> Grid:
        return self.pairs[0][0].grid


def _same(a: Action, b: Action) -> bool:
    from .algebra import same_action

    return same_action(a, b)


def tensor_to_bifunction(T: TensorElement) -> BiSampledFunction:
    """I1(f (x) g)(x, y) = alpha_{-x}(f(x)) g(y); makes pi o I1 the twisted
    multiplication and is balanced over the coefficient algebra."""
    N = T.grid.points
    d = T.pairs[0][0].fn.dim
    out = np.zeros((N, N, d, d), dtype=complex)
    for f, g in T.pairs:
        out += np.einsum("iab,jbc->ijac", alt_product_iso(f).values, g.values)
    return BiSampledFunction(T.grid, out)


def tensor_mult(T: TensorElement, oracle: bool = False) -> CrossedElement:
    """m(f (x) g) = f x g (twisted convolution), summed over terms."""
    f0, g0 = T.pairs[0]
    acc = twisted_convolve(f0, g0, oracle=oracle).values
    for f, g in T.pairs[1:]:
        acc = acc + twisted_convolve(f, g, oracle=oracle).values
    return CrossedElement(SampledFunction(T.grid, acc), T.action)


def tensor_derivation(T: TensorElement) -> TensorElement:
    """j(f (x) g) = f' (x) g - f (x) d_alpha(g).

    m o j = 0 by the intertwining identity f' x g = f x d_alpha(g), and
    I1 o j = iota o I1.
    """
    pairs = []
    for f, g in T.pairs:
        df = CrossedElement(differentiate(f.fn), f.action)
        mf = CrossedElement(SampledFunction(f.grid, -f.values), f.action)
        pairs.append((df, g))
        pairs.append((mf, twisted_derivative(g)))
    return TensorElement(pairs)
