"""Twisted convolution and the plane module actions against closed forms
and literal quadrature.

Frozen reference (diagonal generator H = diag(l1, l2), mu = l2 - l1):
  f = exp(-x^2) E12, g = exp(-x^2) E21
  (f x g)(x) = sqrt(pi/2) exp(-x^2/2) exp(i mu x / 2) exp(-mu^2/8) E11
since alpha_t(E21) = exp(i mu t) E21 and the Gaussian integral with a
linear phase completes the square.

On the circle with spec(H) = 2 pi diag(m1, m2):
  (e_p E12 x e_q E21)(x) = delta[p - q + m2 - m1 = 0] e_q(x) E11.
"""

import numpy as np
import pytest

from crossedlab.algebra import act, trivial_action, unitary_conjugation
from crossedlab.crossed import (
    CrossedElement,
    algebra_act_left,
    algebra_act_right,
    alt_product_iso,
    apply_twist,
    plane_act_left,
    plane_act_right,
    plane_algebra_left,
    plane_algebra_right,
    twisted_convolve,
    twisted_convolve_alt,
    twisted_derivative,
)
from crossedlab.errors import DimensionMismatchError, GridMismatchError
from crossedlab.schwartz import (
    BiSampledFunction,
    CircleGrid,
    LineGrid,
    SampledFunction,
    convolve,
    differentiate,
)

E12 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
E21 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def test_twisted_convolve_closed_form_diagonal():
    grid = LineGrid(10.0, 512)
    x = grid.nodes
    mu = 0.8
    action = unitary_conjugation(np.diag([0.0, mu]))
    f = CrossedElement(SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-(x**2)), E12)), action)
    g = CrossedElement(SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-(x**2)), E21)), action)
    got = twisted_convolve(f, g)
    want = (
        np.sqrt(np.pi / 2.0)
        * np.exp(-(x**2) / 2.0)
        * np.exp(1j * mu * x / 2.0)
        * np.exp(-(mu**2) / 8.0)
    )
    assert np.max(np.abs(got.values[:, 0, 0] - want)) < 1e-12
    assert np.max(np.abs(got.values[:, 1, 1])) < 1e-14
    assert np.max(np.abs(got.values[:, 0, 1])) < 1e-14


def test_twisted_convolve_circle_characters():
    grid = CircleGrid(64)
    t = grid.nodes
    m1, m2 = 1, -1
    action = unitary_conjugation(2.0 * np.pi * np.diag([float(m1), float(m2)]), "circle")

    def elem(p, mat):
        return CrossedElement(
            SampledFunction(grid, np.einsum("i,ab->iab", np.exp(2j * np.pi * p * t), mat)),
            action,
        )

    # selection rule p - q + (m2 - m1) = 0, here m2 - m1 = -2
    hit = twisted_convolve(elem(3, E12), elem(1, E21))
    want = np.exp(2j * np.pi * 1 * t)
    assert np.max(np.abs(hit.values[:, 0, 0] - want)) < 1e-13
    miss = twisted_convolve(elem(2, E12), elem(1, E21))
    assert np.max(np.abs(miss.values)) < 1e-13


def test_twisted_convolve_against_quadrature():
    rng = np.random.default_rng(9)
    grid = LineGrid(10.0, 128)
    x = grid.nodes
    H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    H = (H + H.conj().T) / 2
    H /= np.linalg.norm(H, 2)
    action = unitary_conjugation(H)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    f = CrossedElement(
        SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-((x - 0.4) ** 2)), a)), action
    )
    g = CrossedElement(
        SampledFunction(grid, np.einsum("i,ab->iab", x * np.exp(-(x**2)), b)), action
    )
    assert (
        np.max(np.abs(twisted_convolve(f, g).values - twisted_convolve(f, g, oracle=True).values))
        < 1e-12
    )
    assert (
        np.max(
            np.abs(
                twisted_convolve_alt(f, g).values
                - twisted_convolve_alt(f, g, oracle=True).values
            )
        )
        < 1e-12
    )


def test_trivial_action_degenerates_bit_exact():
    grid = LineGrid(10.0, 256)
    x = grid.nodes
    action = trivial_action(2)
    rng = np.random.default_rng(4)
    a = rng.standard_normal((2, 2))
    f = SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-(x**2)), a))
    g = SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-((x - 1) ** 2)), a))
    fe, ge = CrossedElement(f, action), CrossedElement(g, action)
    assert np.array_equal(twisted_convolve(fe, ge).values, convolve(f, g).values)
    assert np.array_equal(twisted_convolve_alt(fe, ge).values, convolve(f, g).values)


def test_apply_twist_pointwise():
    grid = LineGrid(10.0, 512)
    x = grid.nodes
    H = np.diag([1.0, -1.0])
    action = unitary_conjugation(H)
    f = CrossedElement(
        SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-(x**2)), E12)), action
    )
    Tf = apply_twist(f)
    j = 300
    want = act(action, x[j], f.values[j])
    assert np.allclose(Tf.values[j], want, atol=1e-13)
    back = apply_twist(Tf, inverse=True)
    assert np.max(np.abs(back.values - f.values)) < 1e-13
    iso = alt_product_iso(f)
    assert np.allclose(iso.values[j], act(action, -x[j], f.values[j]), atol=1e-13)


def test_twisted_derivative_trivial_is_plain():
    grid = LineGrid(10.0, 256)
    x = grid.nodes
    f = SampledFunction(grid, np.exp(-(x**2)))
    fe = CrossedElement(f, trivial_action(1))
    assert np.array_equal(twisted_derivative(fe).values, differentiate(f).values)


def _plane_inputs(n=32, dim=2, seed=2):
    rng = np.random.default_rng(seed)
    grid = LineGrid(10.0, n)
    x = grid.nodes
    H = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (H + H.conj().T) / 2
    H /= np.linalg.norm(H, 2)
    action = unitary_conjugation(H)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    hv = np.einsum("i,ab->iab", np.exp(-((x - 0.5) ** 2) / 0.8), a)
    Wv = np.einsum("i,j,ab->ijab", np.exp(-(x**2) / 0.8), np.exp(-((x + 0.7) ** 2) / 0.8), b)
    h = CrossedElement(SampledFunction(grid, hv), action)
    W = BiSampledFunction(grid, Wv)
    return grid, action, h, W


def test_plane_act_left_against_quadrature():
    grid, action, h, W = _plane_inputs()
    n, dx = grid.points, grid.spacing
    got = plane_act_left(h, W).values
    want = np.zeros_like(W.values)
    for i in range(n):
        acc = np.zeros((n, action.dim, action.dim), dtype=complex)
        for t in range(n):
            k = i - t + n // 2
            if 0 <= k < n:
                acc += np.einsum(
                    "ab,jbc->jac", act(action, -grid.nodes[i], h.values[t]), W.values[k]
                )
        want[i] = acc * dx
    assert np.max(np.abs(got - want)) < 1e-12


def test_plane_act_right_against_quadrature():
    grid, action, h, W = _plane_inputs()
    n, dx = grid.points, grid.spacing
    got = plane_act_right(W, h).values
    want = np.zeros_like(W.values)
    for j in range(n):
        acc = np.zeros((n, action.dim, action.dim), dtype=complex)
        for s in range(n):
            k = j - s + n // 2
            if 0 <= k < n:
                acc += np.einsum(
                    "iab,bc->iac", W.values[:, s], act(action, grid.nodes[s], h.values[k])
                )
        want[:, j] = acc * dx
    assert np.max(np.abs(got - want)) < 1e-12


def test_plane_algebra_actions_pointwise():
    grid, action, h, W = _plane_inputs(n=16)
    rng = np.random.default_rng(8)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    left = plane_algebra_left(a, W, action).values
    right = plane_algebra_right(W, a, action).values
    i, j = 5, 11
    assert np.allclose(left[i, j], act(action, -grid.nodes[i], a) @ W.values[i, j], atol=1e-13)
    assert np.allclose(right[i, j], W.values[i, j] @ act(action, grid.nodes[j], a), atol=1e-13)


def test_crossed_element_guards():
    grid = LineGrid(10.0, 256)
    x = grid.nodes
    f = SampledFunction(grid, np.exp(-(x**2)))
    with pytest.raises(DimensionMismatchError):
        CrossedElement(f, trivial_action(2))  # scalar samples, 2x2 action
    g2 = SampledFunction(LineGrid(10.0, 512), np.exp(-(LineGrid(10.0, 512).nodes ** 2)))
    a1 = trivial_action(1)
    with pytest.raises(GridMismatchError):
        twisted_convolve(CrossedElement(f, a1), CrossedElement(g2, a1))
    circle_action = trivial_action(1, "circle")
    with pytest.raises(GridMismatchError):
        CrossedElement(f, circle_action)  # line samples, circle action


def test_algebra_act_left_right_pointwise():
    grid = LineGrid(10.0, 64)
    x = grid.nodes
    H = np.diag([1.0, -1.0])
    action = unitary_conjugation(H)
    f = CrossedElement(SampledFunction(grid, np.einsum("i,ab->iab", np.exp(-(x**2)), E12)), action)
    a = np.array([[2.0, 0.0], [0.0, 3.0]], dtype=complex)
    la = algebra_act_left(a, f)
    ra = algebra_act_right(f, a)
    j = 40
    assert np.allclose(la.values[j], a @ f.values[j], atol=1e-14)
    assert np.allclose(ra.values[j], f.values[j] @ act(action, x[j], a), atol=1e-13)
