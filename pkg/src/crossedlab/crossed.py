"""Smooth crossed product of the session group with M_d(C).

Elements are rapidly decreasing functions f: G -> M_d(C) with the twisted
convolution

    (f x g)(x) = integral f(y) alpha_y(g(x - y)) dy,

together with the alternative product

    (f x' g)(x) = integral alpha_{-y}(f(x - y)) g(y) dy,

the twist T(f)(x) = alpha_x(f(x)) that conjugates d/dx into the twisted
derivative, and the bimodule structure of two-variable functions over the
crossed product.

Everything is computed by FFT after factoring the action through its
propagators: with alpha_x = Ad(V_x),

    f x g = [(f V) * (g V)] V_{-x},      f x' g = V_{-x} [(V f) * (V g)],

where (fV)(y) = f(y) V_y and * is the plain matrix convolution.  The
`oracle=True` variants bypass all of that with literal quadrature loops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Action, act, generator_power_field, propagators, same_action
from .errors import DimensionMismatchError, GridMismatchError
from .schwartz import (
    BiSampledFunction,
    SampledFunction,
    _convolve_values,
    assert_decay,
    differentiate,
)


@dataclass
class CrossedElement:
    """A sampled function together with the action twisting its products."""

    fn: SampledFunction
    action: Action

    def __post_init__(self):
        if self.action.group != self.fn.grid.group:
            raise GridMismatchError(
                f"action lives on the {self.action.group}, function on the {self.fn.grid.group}"
            )
        if self.action.dim != self.fn.dim:
            raise DimensionMismatchError(
                f"action dim {self.action.dim} != function dim {self.fn.dim}"
            )

    @property
    def grid(self):
        return self.fn.grid

    @property
    def values(self) -> np.ndarray:
        return self.fn.values


def _require_compatible(F: CrossedElement, G: CrossedElement):
    if not same_action(F.action, G.action):
        raise GridMismatchError("elements carry different actions")
    if not (type(F.grid) is type(G.grid) and F.grid == G.grid):
        raise GridMismatchError(f"grids differ: {F.grid} vs {G.grid}")


def _line_guard(F: CrossedElement, what: str):
    if F.grid.group == "line":
        assert_decay(F.fn, what=what)


def twisted_convolve(F: CrossedElement, G: CrossedElement, oracle: bool = False) -> CrossedElement:
    """(F x G)(x) = integral F(y) alpha_y(G(x - y)) dy."""
    _require_compatible(F, G)
    _line_guard(F, "twisted convolution factor")
    _line_guard(G, "twisted convolution factor")
    grid = F.grid
    if oracle:
        out = _twisted_oracle(F, G, alt=False)
    else:
        V, Vi = propagators(F.action, grid.nodes)
        if V is None:
            out = _convolve_values(F.values, G.values, grid)
        else:
            out = _convolve_values(F.values @ V, G.values @ V, grid) @ Vi
    result = CrossedElement(SampledFunction(grid, out), F.action)
    _line_guard(result, "twisted convolution result")
    return result


def twisted_convolve_alt(
    F: CrossedElement, G: CrossedElement, oracle: bool = False
) -> CrossedElement:
    """(F x' G)(x) = integral alpha_{-y}(F(x - y)) G(y) dy."""
    _require_compatible(F, G)
    _line_guard(F, "twisted convolution factor")
    _line_guard(G, "twisted convolution factor")
    grid = F.grid
    if oracle:
        out = _twisted_oracle(F, G, alt=True)
    else:
        V, Vi = propagators(F.action, grid.nodes)
        if V is None:
            out = _convolve_values(F.values, G.values, grid)
        else:
            out = Vi @ _convolve_values(V @ F.values, V @ G.values, grid)
    result = CrossedElement(SampledFunction(grid, out), F.action)
    _line_guard(result, "twisted convolution result")
    return result


def _twisted_oracle(F: CrossedElement, G: CrossedElement, alt: bool) -> np.ndarray:
    """Literal quadrature double loop, evaluating the action pointwise."""
    grid = F.grid
    N = grid.points
    xs = grid.nodes
    fv, gv = F.values, G.values
    out = np.zeros_like(fv)
    for i in range(N):
        for j in range(N):
            k = i - j + N // 2 if grid.group == "line" else (i - j) % N
            if k < 0 or k >= N:
                continue
            if alt:
                # integration variable is y = x_j, with F evaluated at x - y
                out[i] += act(F.action, -xs[j], fv[k]) @ gv[j]
            else:
                out[i] += fv[j] @ act(F.action, xs[j], gv[k])
    return grid.spacing * out


def _twist_values(F: CrossedElement, sign: float) -> np.ndarray:
    V, Vi = propagators(F.action, sign * F.grid.nodes)
    if V is None:
        return F.values.copy()
    return V @ F.values @ Vi


def apply_twist(F: CrossedElement, inverse: bool = False) -> CrossedElement:
    """T(F)(x) = alpha_x(F(x)); T conjugates d/dx into the twisted derivative."""
    out = _twist_values(F, -1.0 if inverse else 1.0)
    return CrossedElement(SampledFunction(F.grid, out), F.action)


def alt_product_iso(F: CrossedElement, inverse: bool = False) -> CrossedElement:
    """i(F)(x) = alpha_{-x}(F(x)), the isomorphism (S, x) -> (S, x'):
    i(F x G) = i(F) x' i(G)."""
    out = _twist_values(F, 1.0 if inverse else -1.0)
    return CrossedElement(SampledFunction(F.grid, out), F.action)


def twisted_derivative(F: CrossedElement) -> CrossedElement:
    """d_alpha(F) = F' - alpha'_0(F(.)), the conjugate of d/dx under T.

    Satisfies d_alpha(F x G) = d_alpha(F) x G + F x d_alpha(G) and
    (dF/dx) x G = F x d_alpha(G) + (F x G)' in the crossed product.
    """
    out = differentiate(F.fn).values - generator_power_field(F.action, 1, F.values)
    return CrossedElement(SampledFunction(F.grid, out), F.action)


# ---------------------------------------------------------------------------
# bimodule structure: M_d(C) and the crossed product acting on one- and
# two-variable functions


def algebra_act_left(a: np.ndarray, F: CrossedElement) -> CrossedElement:
    """(a . F)(x) = a F(x)."""
    a = np.asarray(a, dtype=complex)
    return CrossedElement(SampledFunction(F.grid, a @ F.values), F.action)


def algebra_act_right(F: CrossedElement, a: np.ndarray) -> CrossedElement:
    """(F . a)(x) = F(x) alpha_x(a); the twist makes this a right action
    compatible with the twisted convolution."""
    a = np.asarray(a, dtype=complex)
    V, Vi = propagators(F.action, F.grid.nodes)
    if V is None:
        out = F.values @ a
    else:
        out = F.values @ (V @ a @ Vi)
    return CrossedElement(SampledFunction(F.grid, out), F.action)


def plane_algebra_left(a: np.ndarray, FF: BiSampledFunction, action: Action) -> BiSampledFunction:
    """(a . W)(x, y) = alpha_{-x}(a) W(x, y).

    The conjugation comes from the gauge of the plane picture, in which the
    tensor embedding reads alpha_{-x}(f(x)) g(y); it is exactly what makes
    the antidiagonal integral left A-linear.
    """
    a = np.asarray(a, dtype=complex)
    V, Vi = propagators(action, FF.grid.nodes)
    if V is None:
        out = a @ FF.values
    else:
        out = (Vi @ a @ V)[:, None] @ FF.values
    return BiSampledFunction(FF.grid, out)


def plane_algebra_right(FF: BiSampledFunction, a: np.ndarray, action: Action) -> BiSampledFunction:
    """(W . a)(x, y) = W(x, y) alpha_y(a)."""
    a = np.asarray(a, dtype=complex)
    V, Vi = propagators(action, FF.grid.nodes)
    if V is None:
        out = FF.values @ a
    else:
        out = FF.values @ (V @ a @ Vi)[None, :]
    return BiSampledFunction(FF.grid, out)


def plane_act_left(H: CrossedElement, FF: BiSampledFunction) -> BiSampledFunction:
    """(H . W)(x, y) = integral alpha_{-x}(H(t)) W(x - t, y) dt.

    The module action matching the gauge above: on tensor images it is
    (H x f) (x) g.  Factoring alpha_{-x}(H(t)) = V_{-x} H(t) V_t V_{x-t}
    turns it into one plain convolution in the first variable.
    """
    if H.grid.group != FF.grid.group or H.grid != FF.grid:
        raise GridMismatchError("element and plane function live on different grids")
    grid = FF.grid
    N = grid.points
    V, Vi = propagators(H.action, grid.nodes)
    if V is None:
        p, G = H.values, FF.values
    else:
        p = H.values @ V
        G = V[:, None] @ FF.values
    if grid.group == "line":
        G = np.roll(G, -(N // 2), axis=0)
    c = np.fft.ifft(
        np.fft.fft(p, axis=0)[:, None] @ np.fft.fft(G, axis=0), axis=0
    ) * grid.spacing
    if V is not None:
        c = Vi[:, None] @ c
    return BiSampledFunction(grid, c)


def plane_act_right(FF: BiSampledFunction, H: CrossedElement) -> BiSampledFunction:
    """(W . H)(x, y) = integral W(x, s) alpha_s(H(y - s)) ds.

    A twisted convolution in the second variable with the first as a
    spectator; on tensor images it is f (x) (g x H).
    """
    if H.grid.group != FF.grid.group or H.grid != FF.grid:
        raise GridMismatchError("element and plane function live on different grids")
    grid = FF.grid
    N = grid.points
    V, Vi = propagators(H.action, grid.nodes)
    if V is None:
        A, q = FF.values, H.values
    else:
        A = FF.values @ V[None, :]
        q = H.values @ V
    if grid.group == "line":
        q = np.roll(q, -(N // 2), axis=0)
    c = np.fft.ifft(
        np.fft.fft(A, axis=1) @ np.fft.fft(q, axis=0)[None], axis=1
    ) * grid.spacing
    if V is not None:
        c = c @ Vi[None, :]
    return BiSampledFunction(grid, c)
