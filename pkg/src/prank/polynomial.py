"""Dense polynomial arithmetic used by the ranking engine.

Coefficient vectors are numpy arrays indexed by power.  Three multiplication
routes are kept deliberately separate: the quadratic convolution is the
reference, the FFT route is the fast path, and ``poly_product`` combines many
factors by divide and conquer so that the two sides of every split carry
comparable degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeBoundExceededError

#: products below this total degree are cheaper by direct convolution
NAIVE_DEGREE_CUTOFF = 32


@dataclass(frozen=True)
class Poly:
    """A dense univariate polynomial; ``coeffs[k]`` multiplies x**k."""

    coeffs: np.ndarray

    @staticmethod
    def of(values) -> "Poly":
        arr = np.atleast_1d(np.asarray(values))
        if arr.dtype.kind not in "fc":
            arr = arr.astype(np.float64)
        return Poly(coeffs=arr)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def normalize(self) -> "Poly":
        """Trim trailing zero coefficients (keeping at least the constant)."""
        nz = np.nonzero(self.coeffs)[0]
        end = (nz[-1] + 1) if len(nz) else 1
        return Poly(coeffs=self.coeffs[:end])

    def __call__(self, x):
        # Horner evaluation; x may be a scalar or an array of points
        acc = np.zeros_like(np.asarray(x), dtype=np.result_type(self.coeffs, x))
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc


def poly_mul_naive(a: Poly, b: Poly) -> Poly:
    return Poly(coeffs=np.convolve(a.coeffs, b.coeffs))


def poly_mul_fft(a: Poly, b: Poly) -> Poly:
    out_len = len(a.coeffs) + len(b.coeffs) - 1
    size = 1
    while size < out_len:
        size *= 2
    fa = np.fft.fft(a.coeffs, size)
    fb = np.fft.fft(b.coeffs, size)
    prod = np.fft.ifft(fa * fb)[:out_len]
    if a.coeffs.dtype.kind != "c" and b.coeffs.dtype.kind != "c":
        return Poly(coeffs=prod.real)
    return Poly(coeffs=prod)


def _mul_auto(a: Poly, b: Poly) -> Poly:
    if a.degree + b.degree < NAIVE_DEGREE_CUTOFF:
        return poly_mul_naive(a, b)
    return poly_mul_fft(a, b)


def poly_product(factors: list[Poly]) -> Poly:
    """Product of many polynomials.

    Splits the factor list so each side holds between one and two thirds of
    the total degree; a single factor that is already that large is carved
    out and multiplied against the product of the rest.
    """
    if not factors:
        return Poly.of([1.0])
    # fold degree-0 factors (scalars) into the final scale
    scalars = [f for f in factors if f.degree == 0]
    rest = [f for f in factors if f.degree > 0]
    scale = 1.0
    for s in scalars:
        scale = scale * s.coeffs[0]
    if not rest:
        return Poly.of([scale])
    out = _product(rest)
    if scale != 1.0:
        out = Poly(coeffs=out.coeffs * scale)
    return out


def _product(factors: list[Poly]) -> Poly:
    if len(factors) == 1:
        return factors[0]
    total = sum(f.degree for f in factors)
    if total < NAIVE_DEGREE_CUTOFF or len(factors) == 2:
        acc = factors[0]
        for f in factors[1:]:
            acc = _mul_auto(acc, f)
        return acc
    # a single dominant factor: recurse on the others, then one big multiply
    for i, f in enumerate(factors):
        if f.degree >= total / 3:
            others = factors[:i] + factors[i + 1 :]
            return _mul_auto(_product(others), f)
    # otherwise accumulate until the left side crosses a third of the degree;
    # every factor is small, so it cannot overshoot two thirds
    acc_deg = 0
    split = 0
    for i, f in enumerate(factors):
        acc_deg += f.degree
        if acc_deg >= total / 3:
            split = i + 1
            break
    left = _product(factors[:split])
    right = _product(factors[split:])
    return _mul_auto(left, right)


# --------------------------------------------------------------------------
# nested expressions


class Expr:
    """Base of the tiny expression language: sums and products over x."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Prod(Expr):
    left: Expr
    right: Expr


def implied_degree(e: Expr) -> int:
    """Upper bound on the degree of the expanded expression."""
    if isinstance(e, Const):
        return 0
    if isinstance(e, Var):
        return 1
    if isinstance(e, Sum):
        return max(implied_degree(e.left), implied_degree(e.right))
    if isinstance(e, Prod):
        return implied_degree(e.left) + implied_degree(e.right)
    raise TypeError(f"unknown expression {type(e)!r}")


def expr_eval(e: Expr, x):
    """Evaluate the expression at a point or a vector of points."""
    if isinstance(e, Const):
        return np.asarray(x) * 0 + e.value
    if isinstance(e, Var):
        return np.asarray(x) + 0
    if isinstance(e, Sum):
        return expr_eval(e.left, x) + expr_eval(e.right, x)
    if isinstance(e, Prod):
        return expr_eval(e.left, x) * expr_eval(e.right, x)
    raise TypeError(f"unknown expression {type(e)!r}")


def expand_nested_naive(e: Expr) -> Poly:
    """Reference expansion by recursive polynomial arithmetic."""
    if isinstance(e, Const):
        return Poly.of([e.value])
    if isinstance(e, Var):
        return Poly.of([0.0, 1.0])
    if isinstance(e, Sum):
        a = expand_nested_naive(e.left).coeffs
        b = expand_nested_naive(e.right).coeffs
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=np.result_type(a, b))
        out[: len(a)] += a
        out[: len(b)] += b
        return Poly(coeffs=out)
    if isinstance(e, Prod):
        return poly_mul_naive(expand_nested_naive(e.left), expand_nested_naive(e.right))
    raise TypeError(f"unknown expression {type(e)!r}")


def expand_nested(e: Expr, degree_bound: int) -> Poly:
    """Expand without materializing intermediate products.

    The expression is evaluated once at the (degree_bound + 1)-st roots of
    unity, every node combining whole vectors of point values; the inverse
    transform of those values is the coefficient vector.  Raises
    DegreeBoundExceeded when the true degree is higher than promised and the
    recovered polynomial visibly disagrees with the expression.
    """
    m = degree_bound + 1
    points = np.exp(-2j * np.pi * np.arange(m) / m)
    values = expr_eval(e, points)
    coeffs = np.fft.ifft(values)
    poly = Poly(coeffs=coeffs)
    if implied_degree(e) > degree_bound:
        # aliasing is possible; compare against the expression off the grid
        probes = 0.7 * np.exp(2j * np.pi * np.array([0.123, 0.457, 0.791]))
        residual = np.max(np.abs(expr_eval(e, probes) - poly(probes)))
        if residual > 1e-6:
            raise DegreeBoundExceededError(
                f"expression exceeds degree bound {degree_bound} (residual {residual:.3g})"
            )
    return poly
