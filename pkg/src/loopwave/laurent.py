"""Complex Laurent polynomials on the unit circle, and matrices of them.

Coefficients are stored densely over the support interval, starting at
``offset`` (the lowest exponent).  All values are immutable after
construction; arithmetic is exact coefficient arithmetic in double
precision.  The circle adjoint ``star`` satisfies star(p)(z) = conj(p(z))
for |z| = 1, which is what makes paraunitarity a finite coefficient-level
identity rather than a sampling statement.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

# Coefficients at or below this modulus are trimmed from the ends of the
# stored support.  Double-precision algebra on unit-modulus arguments keeps
# rounding well below this.
TRIM_TOL = 1e-14

# |z| must be within this of 1 for point evaluation.
UNIT_CIRCLE_TOL = 1e-12


def _as_complex_tuple(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    out = tuple(complex(c) for c in coeffs)
    for c in out:
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite coefficient {c!r}")
    return out


@dataclass(frozen=True)
class LaurentPoly:
    """A finite complex Laurent polynomial sum_k coeffs[k] * z^(offset+k).

    The zero polynomial is canonically (offset=0, coeffs=()), so structural
    equality is meaningful.  End coefficients below ``TRIM_TOL`` in modulus
    are trimmed at construction.
    """

    offset: int
    coeffs: tuple[complex, ...]

    def __init__(self, offset: int, coeffs: Iterable[complex]):
        cs = _as_complex_tuple(coeffs)
        lo, hi = 0, len(cs)
        while lo < hi and abs(cs[lo]) <= TRIM_TOL:
            lo += 1
        while lo < hi and abs(cs[hi - 1]) <= TRIM_TOL:
            hi -= 1
        if lo == hi:
            object.__setattr__(self, "offset", 0)
            object.__setattr__(self, "coeffs", ())
        else:
            object.__setattr__(self, "offset", int(offset) + lo)
            object.__setattr__(self, "coeffs", cs[lo:hi])

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> LaurentPoly:
        return LaurentPoly(0, ())

    @staticmethod
    def one() -> LaurentPoly:
        return LaurentPoly(0, (1.0,))

    @staticmethod
    def monomial(k: int, c: complex = 1.0) -> LaurentPoly:
        """c * z^k."""
        return LaurentPoly(k, (c,))

    @staticmethod
    def constant(c: complex) -> LaurentPoly:
        return LaurentPoly(0, (c,))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int:
        """Lowest exponent with a stored coefficient (0 for the zero poly)."""
        return self.offset

    @property
    def degree(self) -> int:
        """Highest exponent with a stored coefficient (-1 for the zero poly)."""
        return self.offset + len(self.coeffs) - 1

    def coeff(self, k: int) -> complex:
        """Coefficient of z^k (0 outside the stored support)."""
        i = k - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0.0 + 0.0j

    def support(self) -> range:
        """Exponent interval carrying the stored coefficients."""
        if self.is_zero:
            return range(0, 0)
        return range(self.offset, self.offset + len(self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: LaurentPoly | complex) -> LaurentPoly:
        other = _coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.degree, other.degree)
        out = [0.0 + 0.0j] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.offset + i - lo] += c
        for i, c in enumerate(other.coeffs):
            out[other.offset + i - lo] += c
        return LaurentPoly(lo, out)

    def __radd__(self, other: complex) -> LaurentPoly:
        return self + other

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.offset, tuple(-c for c in self.coeffs))

    def __sub__(self, other: LaurentPoly | complex) -> LaurentPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: complex) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: LaurentPoly | complex) -> LaurentPoly:
        if isinstance(other, (int, float, complex)):
            return LaurentPoly(self.offset, tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return LaurentPoly.zero()
        # Support of the product is the Minkowski sum of the supports.
        conv = np.convolve(
            np.asarray(self.coeffs, dtype=complex),
            np.asarray(other.coeffs, dtype=complex),
        )
        return LaurentPoly(self.offset + other.offset, conv.tolist())

    def __rmul__(self, other: complex) -> LaurentPoly:
        return self * other

    def star(self) -> LaurentPoly:
        """Circle adjoint: star(p)(z) = conj(p(z)) on |z| = 1.

        Sends the coefficient of z^k to its conjugate at z^-k; an involution.
        """
        if self.is_zero:
            return self
        return LaurentPoly(-self.degree, tuple(c.conjugate() for c in reversed(self.coeffs)))

    def compose_power(self, n: int) -> LaurentPoly:
        """Substitute z -> z^n (n >= 2): exponents are multiplied by n."""
        if n < 2:
            raise ValueError(f"compose_power requires n >= 2, got {n}")
        if self.is_zero:
            return self
        out = [0.0 + 0.0j] * ((len(self.coeffs) - 1) * n + 1)
        for i, c in enumerate(self.coeffs):
            out[i * n] = c
        return LaurentPoly(self.offset * n, out)

    def __call__(self, z: complex) -> complex:
        """Evaluate at a point of the unit circle (Horner on the coefficients)."""
        z = complex(z)
        if abs(abs(z) - 1.0) > UNIT_CIRCLE_TOL:
            raise ValueError(f"evaluation point must lie on the unit circle, |z| = {abs(z)!r}")
        if self.is_zero:
            return 0.0 + 0.0j
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc * z**self.offset

    # -- comparisons -------------------------------------------------------

    def distance(self, other: LaurentPoly) -> float:
        """Max coefficient modulus of self - other."""
        d = self - other
        return max((abs(c) for c in d.coeffs), default=0.0)

    def allclose(self, other: LaurentPoly, tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in zip(self.support(), self.coeffs):
            term = f"({c:.6g})" if c.imag else f"({c.real:.6g})"
            if k == 0:
                parts.append(term)
            elif k == 1:
                parts.append(f"{term}*z")
            else:
                parts.append(f"{term}*z^{k}")
        return " + ".join(parts)


def _coerce(x: LaurentPoly | complex) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)


class ParaunitaryResult(NamedTuple):
    ok: bool
    residual: float


@dataclass(frozen=True)
class MatrixLaurent:
    """A square matrix of Laurent polynomials.

    Houses loops T -> U_N(C) when paraunitary, i.e. when star(M) @ M equals
    the identity as an exact Laurent identity.
    """

    n: int
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]]):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("entries must form a nonempty square grid")
        for row in rows:
            for p in row:
                if not isinstance(p, LaurentPoly):
                    raise TypeError("matrix entries must be LaurentPoly")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", rows)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> MatrixLaurent:
        return MatrixLaurent(
            [[LaurentPoly.one() if i == j else LaurentPoly.zero() for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def from_constant(mat: np.ndarray) -> MatrixLaurent:
        mat = np.asarray(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("constant matrix must be square")
        return MatrixLaurent([[LaurentPoly.constant(mat[i, j]) for j in range(mat.shape[1])] for i in range(mat.shape[0])])

    @staticmethod
    def diag(polys: Sequence[LaurentPoly]) -> MatrixLaurent:
        n = len(polys)
        return MatrixLaurent(
            [[polys[i] if i == j else LaurentPoly.zero() for j in range(n)] for i in range(n)]
        )

    # -- access ------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def support(self) -> list[int]:
        """Sorted union of the entry exponent sets."""
        exps: set[int] = set()
        for row in self.entries:
            for p in row:
                exps.update(p.support())
        return sorted(exps)

    def laurent_coefficient(self, c: int) -> np.ndarray:
        """The constant matrix A_c in A(z) = sum_c A_c z^c (zero off-support)."""
        return np.array([[p.coeff(c) for p in row] for row in self.entries], dtype=complex)

    def coefficients(self) -> dict[int, np.ndarray]:
        return {c: self.laurent_coefficient(c) for c in self.support()}

    # -- algebra -----------------------------------------------------------

    def __matmul__(self, other: MatrixLaurent) -> MatrixLaurent:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = LaurentPoly.zero()
                for k in range(n):
                    s = s + self.entries[i][k] * other.entries[k][j]
                row.append(s)
            out.append(row)
        return MatrixLaurent(out)

    def __add__(self, other: MatrixLaurent) -> MatrixLaurent:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return MatrixLaurent(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.n)] for i in range(self.n)]
        )

    def __sub__(self, other: MatrixLaurent) -> MatrixLaurent:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return MatrixLaurent(
            [[self.entries[i][j] - other.entries[i][j] for j in range(self.n)] for i in range(self.n)]
        )

    def star(self) -> MatrixLaurent:
        """Conjugate transpose with the circle adjoint applied per entry."""
        return MatrixLaurent(
            [[self.entries[j][i].star() for j in range(self.n)] for i in range(self.n)]
        )

    def compose_power(self, n: int) -> MatrixLaurent:
        return MatrixLaurent([[p.compose_power(n) for p in row] for row in self.entries])

    def apply(self, v: np.ndarray) -> list[LaurentPoly]:
        """Matrix times a constant vector, as a vector of Laurent polynomials."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.n,):
            raise ValueError("vector length must match matrix size")
        out = []
        for i in range(self.n):
            s = LaurentPoly.zero()
            for j in range(self.n):
                s = s + self.entries[i][j] * v[j]
            out.append(s)
        return out

    def eval(self, z: complex) -> np.ndarray:
        return np.array([[p(z) for p in row] for row in self.entries], dtype=complex)

    def distance(self, other: MatrixLaurent) -> float:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return max(
            self.entries[i][j].distance(other.entries[i][j])
            for i in range(self.n)
            for j in range(self.n)
        )

    def max_abs(self) -> float:
        return max(p.max_abs() for row in self.entries for p in row)

    def is_paraunitary(self, tol: float = 1e-10) -> ParaunitaryResult:
        """Certify star(M) @ M = I at the coefficient level.

        Returns the verdict together with the max residual coefficient
        modulus.  Sampling alone can miss high-degree residuals, hence the
        exact check.
        """
        residual = (self.star() @ self - MatrixLaurent.identity(self.n)).max_abs()
        return ParaunitaryResult(residual <= tol, residual)


def unit_grid(size: int) -> np.ndarray:
    """The size-th roots of unity exp(2*pi*i*t/size), t = 0..size-1."""
    if size < 1:
        raise ValueError("grid size must be positive")
    return np.exp(2j * np.pi * np.arange(size) / size)


def root_of_unity(n: int, k: int = 1) -> complex:
    return cmath.exp(2j * cmath.pi * k / n)
