"""Finite-dimensional coefficient algebra and smooth group actions on it.

The algebra is M_d(C) with the operator (spectral) norm.  An Action packages
a one-parameter automorphism group alpha_x of M_d(C), for the additive line
or the circle (period 1):

* ``trivial``:    alpha_x = id
* ``unitary``:    alpha_x(a) = exp(ixH) a exp(-ixH), H Hermitian
* ``nilpotent``:  alpha_x(a) = exp(xN) a exp(-xN), N nilpotent

Unitary actions are isometric; nilpotent ones have polynomially growing
norm, which keeps them inside the tempered class.  On the circle only
unitary actions with spec(H) in 2*pi*Z are periodic (exp(N) = I forces
N = 0), so the nilpotent kind is rejected there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolationError, DimensionMismatchError

ACTION_KINDS = ("trivial", "unitary", "nilpotent")
GROUPS = ("line", "circle")

HERMITIAN_TOL = 1e-12
NILPOTENT_TOL = 1e-12
CIRCLE_SPECTRUM_TOL = 1e-9
# derivation order guard: (2||gen||)^k overflows usefulness long before this
MAX_GENERATOR_POWER = 12


def _as_matrix(a, dim: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {a.shape[0]}")
    return a


def matrix_norms(values: np.ndarray) -> np.ndarray:
    """Spectral norms over the leading axes of an (..., d, d) array.

    d = 1 and d = 2 use closed forms (the 2x2 one via the Frobenius norm and
    determinant); larger d falls back to singular values.
    """
    values = np.asarray(values, dtype=complex)
    d = values.shape[-1]
    if values.shape[-2] != d:
        raise DimensionMismatchError(f"trailing shape {values.shape[-2:]} is not square")
    if d == 1:
        return np.abs(values[..., 0, 0])
    if d == 2:
        fro2 = np.sum(np.abs(values) ** 2, axis=(-2, -1))
        det = values[..., 0, 0] * values[..., 1, 1] - values[..., 0, 1] * values[..., 1, 0]
        disc = np.sqrt(np.maximum(fro2 * fro2 - 4.0 * np.abs(det) ** 2, 0.0))
        return np.sqrt(np.maximum((fro2 + disc) / 2.0, 0.0))
    return np.linalg.svd(values, compute_uv=False)[..., 0]


def seminorm(a) -> float:
    """Operator norm of a single matrix."""
    return float(matrix_norms(_as_matrix(a)))


def sup_norm(values: np.ndarray) -> float:
    """sup over a field of matrices (any leading axes) of the operator norm."""
    norms = matrix_norms(values)
    return float(norms.max()) if norms.size else 0.0


@dataclass(eq=False)
class Action:
    """One-parameter automorphism group of M_d(C).  Build via the factory
    functions below; the constructor only rechecks structural facts."""

    kind: str
    group: str
    dim: int
    generator: np.ndarray | None = None
    # eigendecomposition of a Hermitian generator, computed once
    _evals: np.ndarray | None = field(default=None, repr=False)
    _evecs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind == "trivial":
            self.generator = None
            return
        if self.generator is None:
            raise ValueError(f"{self.kind} action needs a generator")
        G = _as_matrix(self.generator, self.dim)
        self.generator = G
        if self.kind == "unitary":
            herm = sup_norm((G - G.conj().T)[None])
            if herm > HERMITIAN_TOL * max(1.0, sup_norm(G[None])):
                raise ValueError(f"generator is not Hermitian (defect {herm:.2e})")
            if self._evals is None:
                self._evals, self._evecs = np.linalg.eigh(G)
            if self.group == "circle":
                # periodicity: exp(iH) = 1 needs every eigenvalue in 2*pi*Z
                mult = self._evals / (2.0 * np.pi)
                if np.abs(mult - np.round(mult)).max() > CIRCLE_SPECTRUM_TOL:
                    raise ValueError(
                        "circle action needs spec(H) in 2*pi*Z; got multiples "
                        f"{np.round(mult, 6).tolist()}"
                    )
        elif self.kind == "nilpotent":
            if self.group == "circle":
                raise ValueError(
                    "nilpotent conjugation is never periodic (exp(N) = I forces N = 0)"
                )
            P = np.linalg.matrix_power(G, self.dim)
            if sup_norm(P[None]) > NILPOTENT_TOL * max(1.0, sup_norm(G[None]) ** self.dim):
                raise ValueError("generator is not nilpotent (N^dim != 0)")

    @property
    def generator_norm(self) -> float:
        return 0.0 if self.generator is None else seminorm(self.generator)

    def is_isometric(self) -> bool:
        return self.kind in ("trivial", "unitary")


def trivial_action(dim: int, group: str = "line") -> Action:
    return Action("trivial", group, dim)


def unitary_conjugation(H, group: str = "line") -> Action:
    H = _as_matrix(H)
    return Action("unitary", group, H.shape[0], H)


def nilpotent_conjugation(N) -> Action:
    N = _as_matrix(N)
    return Action("nilpotent", "line", N.shape[0], N)


def same_action(a: Action, b: Action) -> bool:
    if (a.kind, a.group, a.dim) != (b.kind, b.group, b.dim):
        return False
    if a.generator is None:
        return b.generator is None
    return b.generator is not None and np.array_equal(a.generator, b.generator)


def _nilpotent_exp(N: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """exp(x N) for each x, by the terminating Taylor series (exact)."""
    d = N.shape[0]
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape + (d, d), dtype=complex)
    term = np.broadcast_to(np.eye(d, dtype=complex), xs.shape + (d, d)).copy()
    out += term
    P = np.eye(d, dtype=complex)
    for k in range(1, d):
        P = P @ N
        out += (xs[..., None, None] ** k / math.factorial(k)) * P
    return out


def propagators(action: Action, xs) -> tuple[np.ndarray, np.ndarray] | tuple[None, None]:
    """(V, V^-1) with alpha_x(a) = V_x a V_x^-1, vectorized over the points
    xs.  Trivial actions return (None, None) so callers can skip the matmuls.
    """
    if action.kind == "trivial":
        return None, None
    xs = np.asarray(xs, dtype=float)
    if action.kind == "unitary":
        U = action._evecs
        phases = np.exp(1j * xs[..., None] * action._evals)
        V = np.einsum("ab,...b,cb->...ac", U, phases, U.conj())
        Vi = V.conj().swapaxes(-1, -2)
        return V, Vi
    V = _nilpotent_exp(action.generator, xs)
    Vi = _nilpotent_exp(action.generator, -xs)
    return V, Vi


def act(action: Action, x: float, a) -> np.ndarray:
    """alpha_x(a) at a single group point."""
    a = _as_matrix(a, action.dim)
    if action.kind == "trivial":
        return a.copy()
    V, Vi = propagators(action, np.asarray(float(x)))
    return V @ a @ Vi


def act_field(action: Action, xs, values: np.ndarray) -> np.ndarray:
    """alpha_{xs[i]}(values[i]) for a field of matrices along leading axes."""
    values = np.asarray(values, dtype=complex)
    if action.kind == "trivial":
        return values.copy()
    V, Vi = propagators(action, xs)
    return V @ values @ Vi


def generator_power(action: Action, k: int, a) -> np.ndarray:
    """k-th derivative of x -> alpha_x(a) at x = 0.

    This is the k-fold iterated derivation: ad(iH) for unitary actions and
    ad(N) for nilpotent ones.
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError("power must be a nonnegative integer")
    if k > MAX_GENERATOR_POWER:
        raise ValueError(f"power {k} exceeds the supported maximum {MAX_GENERATOR_POWER}")
    a = _as_matrix(a, action.dim)
    if k == 0:
        return a.copy()
    if action.kind == "trivial":
        return np.zeros_like(a)
    G = 1j * action.generator if action.kind == "unitary" else action.generator
    out = a
    for _ in range(k):
        out = G @ out - out @ G
    return out


def generator_power_field(action: Action, k: int, values: np.ndarray) -> np.ndarray:
    """generator_power applied across leading axes of an (..., d, d) field."""
    values = np.asarray(values, dtype=complex)
    if k == 0:
        return values.copy()
    if action.kind == "trivial":
        return np.zeros_like(values)
    G = 1j * action.generator if action.kind == "unitary" else action.generator
    out = values
    for _ in range(k):
        out = G @ out - out @ G
    return out


def growth_polynomial(action: Action) -> list[float]:
    """Coefficients c_j with ||alpha_x|| <= sum_j c_j |x|^j for all x.

    Isometric actions get the constant 1.  For nilpotent N the bound is
    (sum_k ||N^k|| |x|^k / k!)^2 from the two-sided conjugation, expanded
    into a plain coefficient list.
    """
    if action.is_isometric():
        return [1.0]
    N = action.generator
    d = action.dim
    side = []
    P = np.eye(d, dtype=complex)
    for k in range(d):
        side.append(seminorm(P) / math.factorial(k))
        P = P @ N
    return list(np.convolve(side, side))


def derivative_constants(action: Action, k_max: int) -> list[float]:
    """C_k with ||alpha^(k)_0(a)|| <= C_k ||a||, k = 0..k_max."""
    g = action.generator_norm
    out = [1.0]
    for k in range(1, k_max + 1):
        out.append(0.0 if action.kind == "trivial" else (2.0 * g) ** k)
    return out


@dataclass
class BoundCertificate:
    """Outcome of stress-testing the tempered bounds of an action."""

    kind: str
    group: str
    dim: int
    generator_norm: float
    growth_coefficients: list[float]
    derivative_constants: list[float]
    worst_growth_ratio: float
    worst_derivative_ratio: float
    points: int
    trials: int


def random_matrix(dim: int, rng: np.random.Generator, norm_cap: float = 1.0) -> np.ndarray:
    """Random element of M_d(C) with operator norm exactly norm_cap."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    n = seminorm(a)
    return a * (norm_cap / n) if n > 0 else a


def random_hermitian(dim: int, rng: np.random.Generator, norm_cap: float = 2.0) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (a + a.conj().T) / 2.0
    n = seminorm(H)
    return H * (norm_cap / n) if n > 0 else H


def random_circle_generator(
    dim: int, rng: np.random.Generator, max_harmonic: int = 3
) -> np.ndarray:
    """Hermitian H with spec(H) = 2*pi*(random integers), so that conjugation
    by exp(ixH) has period 1."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, _ = np.linalg.qr(a)
    ints = rng.integers(-max_harmonic, max_harmonic + 1, size=dim)
    while dim > 1 and len(set(ints.tolist())) == 1:
        ints = rng.integers(-max_harmonic, max_harmonic + 1, size=dim)
    H = (Q * (2.0 * np.pi * ints)) @ Q.conj().T
    return (H + H.conj().T) / 2.0


def random_nilpotent(dim: int, rng: np.random.Generator, norm_cap: float = 1.0) -> np.ndarray:
    N = np.triu(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)), k=1)
    n = seminorm(N)
    return N * (norm_cap / n) if n > 0 else N


def tempered_certificate(
    action: Action,
    xs,
    rng: np.random.Generator,
    trials: int = 12,
    k_max: int = 6,
    slack: float = 1e-9,
) -> BoundCertificate:
    """Check the certified growth and derivative bounds on random inputs.

    Raises BoundViolationError if any measured ratio exceeds 1 + slack;
    otherwise returns the certificate with the worst ratios seen.
    """
    xs = np.asarray(xs, dtype=float)
    coeffs = growth_polynomial(action)
    consts = derivative_constants(action, k_max)
    p = np.zeros_like(xs)
    for j, c in enumerate(coeffs):
        p += c * np.abs(xs) ** j
    worst_growth = 0.0
    worst_deriv = 0.0
    for _ in range(trials):
        a = random_matrix(action.dim, rng)
        na = seminorm(a)
        moved = act_field(action, xs, np.broadcast_to(a, xs.shape + a.shape))
        worst_growth = max(worst_growth, float((matrix_norms(moved) / (p * na)).max()))
        for k in range(1, k_max + 1):
            dk = seminorm(generator_power(action, k, a))
            if consts[k] == 0.0:
                if dk > slack:
                    raise BoundViolationError(
                        f"derivation of order {k} is nonzero for a trivial action", dk
                    )
                continue
            worst_deriv = max(worst_deriv, dk / (consts[k] * na))
    worst = max(worst_growth, worst_deriv)
    if worst > 1.0 + slack:
        raise BoundViolationError(
            f"tempered bound exceeded: worst measured/certified ratio {worst:.6f}", worst
        )
    return BoundCertificate(
        kind=action.kind,
        group=action.group,
        dim=action.dim,
        generator_norm=action.generator_norm,
        growth_coefficients=coeffs,
        derivative_constants=consts,
        worst_growth_ratio=worst_growth,
        worst_derivative_ratio=worst_deriv,
        points=int(xs.size),
        trials=trials,
    )
