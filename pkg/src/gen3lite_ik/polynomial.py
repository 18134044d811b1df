"""Dense real polynomials: construction by interpolation and real roots."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

DEFAULT_REAL_TOL = 1e-7
DEFAULT_LEADING_TOL = 1e-10


@dataclass(frozen=True)
class DensePolynomial:
    """Polynomial with real coefficients stored in ascending degree order."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.asarray(self.coeffs, dtype=float).reshape(-1))
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def nominal_degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        # Horner, highest degree first
        x = np.asarray(x, dtype=float) if not np.iscomplexobj(x) else np.asarray(x)
        acc = np.zeros_like(x) + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc if acc.ndim else acc.item()

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


@dataclass(frozen=True)
class RealRoots:
    """Real roots in ascending order, plus the number of trimmed leading terms.

    Each trimmed leading coefficient stands for one root at infinity.
    """

    roots: tuple
    trimmed: int = 0

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def chebyshev_nodes(count: int, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """Chebyshev points of the first kind mapped onto [low, high], ascending."""
    k = np.arange(count)
    x = -np.cos((2 * k + 1) * np.pi / (2 * count))
    return 0.5 * (low + high) + 0.5 * (high - low) * x


def interpolate(nodes, values, degree: int) -> DensePolynomial:
    """Polynomial of the given degree through ``(nodes, values)``.

    The Vandermonde system is solved on nodes rescaled to [-1, 1] and the
    coefficients mapped back, which keeps degree-16 fits well conditioned
    on wide intervals.
    """
    nodes = np.asarray(nodes, dtype=float).reshape(-1)
    values = np.asarray(values, dtype=float).reshape(-1)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if nodes.size != degree + 1 or values.size != nodes.size:
        raise ValueError(f"degree {degree} needs exactly {degree + 1} nodes and values")
    ordered = np.sort(nodes)
    if nodes.size > 1 and np.min(np.diff(ordered)) <= 1e-12:
        raise ValueError("interpolation nodes must be pairwise distinct")

    center = 0.5 * (ordered[0] + ordered[-1])
    half_width = 0.5 * (ordered[-1] - ordered[0]) or 1.0
    u = (nodes - center) / half_width
    vander = np.vander(u, degree + 1, increasing=True)
    lu = scipy.linalg.lu_factor(vander)
    scaled = scipy.linalg.lu_solve(lu, values)
    # iterative refinement with residuals in extended precision
    wide_vander = np.vander(u.astype(np.longdouble), degree + 1, increasing=True)
    wide_values = values.astype(np.longdouble)
    for _ in range(2):
        residual = wide_values - wide_vander @ scaled.astype(np.longdouble)
        scaled = scaled + scipy.linalg.lu_solve(lu, residual.astype(float))

    # expand sum c_k ((x - center)/half_width)^k into powers of x
    coeffs = np.zeros(degree + 1)
    shift = np.array([-center / half_width, 1.0 / half_width])
    power = np.array([1.0])
    for c in scaled:
        coeffs[: power.size] += c * power
        power = np.convolve(power, shift)
    return DensePolynomial(coeffs)


def half_angle_nodes(count: int) -> np.ndarray:
    """Angles equally spaced on the circle, symmetric about 0 and avoiding pi."""
    k = np.arange(count)
    return -np.pi + (2 * k + 1) * np.pi / count


def _half_angle_basis(half_degree: int) -> np.ndarray:
    """Column m holds the T-coefficients of (1 + iT)^(n + m) (1 - iT)^(n - m), m = -n..n."""
    n = half_degree
    plus = np.array([1.0, 1.0j])
    basis = np.zeros((2 * n + 1, 2 * n + 1), dtype=complex)
    for j, m in enumerate(range(-n, n + 1)):
        col = np.polynomial.polynomial.polymul(
            np.polynomial.polynomial.polypow(plus, n + m),
            np.polynomial.polynomial.polypow(np.conj(plus), n - m),
        )
        basis[: col.size, j] = col
    return basis


def interpolate_half_angle(values, half_degree: int) -> DensePolynomial:
    """Interpolate ``(1 + T**2)**n * g(theta)`` with ``T = tan(theta / 2)``.

    ``values`` are samples of a trigonometric polynomial ``g`` of degree
    ``n = half_degree`` at :func:`half_angle_nodes` ``(2n + 1)``. The result
    is the degree-2n polynomial in T through the points
    ``(tan(theta_k / 2), (1 + T_k**2)**n * g(theta_k))``, obtained through the
    discrete Fourier coefficients of ``g`` instead of a Vandermonde solve, so
    its accuracy does not degrade with the spread of the nodes in T.
    """
    g = np.asarray(values, dtype=float).reshape(-1)
    count = 2 * half_degree + 1
    if g.size != count:
        raise ValueError(f"need exactly {count} samples, got {g.size}")
    theta = half_angle_nodes(count)
    m = np.arange(-half_degree, half_degree + 1)
    fourier = np.exp(-1j * np.outer(m, theta)) @ g / count
    coeffs = _half_angle_basis(half_degree) @ fourier
    return DensePolynomial(coeffs.real)


def companion_matrix(coeffs) -> np.ndarray:
    """Companion matrix of a polynomial with nonzero leading coefficient."""
    c = np.asarray(coeffs, dtype=float)
    n = c.size - 1
    C = np.zeros((n, n))
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1] / c[-1]
    return C


def real_roots(
    poly: DensePolynomial,
    real_tol: float = DEFAULT_REAL_TOL,
    leading_tol: float = DEFAULT_LEADING_TOL,
) -> RealRoots:
    """Real roots from the eigenvalues of the balanced companion matrix.

    Leading coefficients below ``leading_tol * max|c|`` are dropped and
    counted in ``RealRoots.trimmed``. An eigenvalue ``z`` is kept as real when
    ``|Im z| <= real_tol * (1 + |Re z|)``.
    """
    c = np.asarray(poly.coeffs, dtype=float)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        raise ValueError("the zero polynomial has no isolated roots")
    significant = np.nonzero(np.abs(c) >= leading_tol * scale)[0]
    top = int(significant[-1])
    trimmed = c.size - 1 - top
    c = c[: top + 1]
    if top == 0:
        return RealRoots((), trimmed)

    # zero roots are peeled off exactly
    low = int(np.nonzero(c)[0][0])
    zeros = [0.0] * low
    c = c[low:]
    if c.size > 1:
        C = companion_matrix(c)
        balanced, _ = scipy.linalg.matrix_balance(C, permute=False)
        eig = np.linalg.eigvals(balanced)
        keep = np.abs(eig.imag) <= real_tol * (1.0 + np.abs(eig.real))
        found = eig.real[keep].tolist()
    else:
        found = []
    return RealRoots(tuple(sorted(zeros + found)), trimmed)
