"""Quadrature-mirror-filter verification and completion.

A scale-N filter system (m_0, ..., m_{N-1}) is QMF when the N x N fiber
matrix (m_j evaluated over the N-th-root fiber of each base point) is
unitary everywhere on the circle.  The exact certificate is paraunitarity
of the polyphase loop; the sampled fiber-matrix check is kept alongside as
an independent cross-check on a root-of-unity grid.

Completion takes a scalar filter m_0 with unit fiber norm and produces the
missing rows: an exact FIR construction for N = 2, or a pointwise sampled
unitary completion for general N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laurent import LaurentPoly, unit_grid
from .loopgroup import FilterSystem, filters_to_loop

#: Default coefficient-level tolerance for the exact QMF certificate.
EXACT_TOL = 1e-10
#: Default number of circle samples for grid cross-checks.
DEFAULT_GRID = 256

LOW_PASS_TOL = 1e-10


@dataclass(frozen=True)
class QmfReport:
    """Residuals of the QMF conditions for one filter system.

    unitary_residual is the coefficient-level paraunitarity defect of the
    polyphase loop; scalar_residual is the fiber-norm defect of m_0;
    grid_residual is the worst sampled fiber-matrix unitarity defect.
    """

    n: int
    unitary_residual: float
    scalar_residual: float
    low_pass: bool
    grid_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.unitary_residual <= self.tol


def verify_scalar_qmf(m0: LaurentPoly, n: int) -> float:
    """Fiber-norm residual of a single filter.

    The condition sum over the fiber of |m_0|^2 = 1 is equivalent to the
    autocorrelations at lags l*n satisfying sum_k c_k conj(c_{k-l*n}) =
    delta_{l,0} / n; the returned residual is the max deviation over all
    lags, exactly zero iff the condition holds.
    """
    if n < 2:
        raise ValueError(f"scale must be >= 2, got {n}")
    q = m0.star() * m0
    if q.is_zero:
        return 1.0 / n
    lo = math.floor(q.valuation / n)
    hi = math.ceil(q.degree / n)
    res = 0.0
    for l in range(lo, hi + 1):
        target = 1.0 / n if l == 0 else 0.0
        res = max(res, abs(q.coeff(l * n) - target))
    return res


def low_pass_check(m0: LaurentPoly) -> bool:
    """True when m_0(1) = 1, making m_0 an averaging filter."""
    return abs(m0(1.0) - 1.0) <= LOW_PASS_TOL


def fiber_representatives(x: complex, n: int) -> np.ndarray:
    """The n preimages of x under z -> z^n: principal root times n-th roots of unity."""
    x = complex(x)
    principal = np.exp(1j * np.angle(x) / n) * abs(x) ** (1.0 / n)
    return principal * np.exp(2j * np.pi * np.arange(n) / n)


def verify_qmf(system: FilterSystem, tol: float = EXACT_TOL, grid_size: int = DEFAULT_GRID) -> QmfReport:
    """Full QMF report for a filter system.

    The exact check is paraunitarity of the polyphase loop; the grid check
    evaluates the fiber matrix (m_j(rho^k z))_{j,k}, rho = exp(2 pi i / N),
    at grid_size circle points and measures its worst unitarity defect.
    """
    n = system.n
    if grid_size <= 0 or grid_size % n != 0:
        raise ValueError(f"grid_size must be a positive multiple of {n}")
    loop = filters_to_loop(system, tol)
    _, unitary_residual = loop.mat.is_paraunitary(tol)

    rho = np.exp(2j * np.pi * np.arange(n) / n)
    grid_residual = 0.0
    eye = np.eye(n)
    for z in unit_grid(grid_size):
        m = np.array([[system.filters[j](rho[k] * z) for k in range(n)] for j in range(n)])
        grid_residual = max(grid_residual, float(np.max(np.abs(m @ m.conj().T - eye))))

    return QmfReport(
        n=n,
        unitary_residual=unitary_residual,
        scalar_residual=verify_scalar_qmf(system.filters[0], n),
        low_pass=low_pass_check(system.filters[0]),
        grid_residual=grid_residual,
        tol=tol,
    )


def certify(system: FilterSystem, tol: float = EXACT_TOL, grid_size: int = DEFAULT_GRID) -> FilterSystem:
    """Return the system flagged verified-QMF, or raise if it fails the test."""
    report = verify_qmf(system, tol, grid_size)
    if not report.passed:
        raise ValueError(
            f"filter system is not QMF: unitary residual {report.unitary_residual:.3e} > {tol:.1e}"
        )
    return system.with_verified(True)


@dataclass(frozen=True)
class SampledSystem:
    """A filter system known only through samples on fibered circle points.

    values[i, t, k] is filter i at representative k of base point t, where
    the representatives of base_points[t] are rho^k times the principal
    N-th root.  Produced by grid-mode completion; per-point unitarity of
    the fiber matrices is certified by unitarity_residual.
    """

    n: int
    base_points: np.ndarray
    representatives: np.ndarray
    values: np.ndarray
    unitarity_residual: float


def _fir2_completion(m0: LaurentPoly) -> LaurentPoly:
    # Alternating conjugate flip about an odd pivot exponent: with
    # b_k = (-1)^k conj(a_{E-k}) and E odd, the fiber of z^2 is {w, -w} and
    # the cross terms cancel in pairs, so (m_0, m_1) is QMF whenever m_0
    # passes the scalar test.  E is the top degree, padded by one when even.
    deg = m0.degree
    pivot = deg if deg % 2 != 0 else deg + 1
    lo = pivot - m0.degree
    hi = pivot - m0.valuation
    coeffs = [(-1.0) ** (k % 2) * m0.coeff(pivot - k).conjugate() for k in range(lo, hi + 1)]
    m1 = LaurentPoly(lo, coeffs)

    # Phase convention: first nonzero entry of the new row's polyphase
    # column at z = 1 is made positive real.
    for k in range(2):
        col = sum(m1.coeff(2 * l + k) for l in range(m1.valuation // 2 - 1, m1.degree // 2 + 2))
        if abs(col) > 1e-12:
            m1 = m1 * (abs(col) / col)
            break
    return m1


def _grid_completion(m0: LaurentPoly, n: int, grid_size: int) -> SampledSystem:
    base = unit_grid(grid_size)
    reps = np.array([fiber_representatives(z, n) for z in base])
    values = np.zeros((n, grid_size, n), dtype=complex)
    residual = 0.0
    eye = np.eye(n)
    for t in range(grid_size):
        row0 = np.array([m0(w) for w in reps[t]])
        rows = [row0]
        skip = int(np.argmax(np.abs(row0)))
        for j in range(n):
            if j == skip:
                continue
            v = eye[j].astype(complex)
            for u in rows:
                v = v - np.vdot(u, v) * u
            v = v / np.linalg.norm(v)
            nz = np.flatnonzero(np.abs(v) > 1e-12)[0]
            v = v * (abs(v[nz]) / v[nz])
            rows.append(v)
        m = np.array(rows)
        residual = max(residual, float(np.max(np.abs(m @ m.conj().T - eye))))
        values[:, t, :] = m
    for arr in (base, reps, values):
        arr.setflags(write=False)
    return SampledSystem(
        n=n,
        base_points=base,
        representatives=reps,
        values=values,
        unitarity_residual=residual,
    )


def complete(
    m0: LaurentPoly,
    n: int,
    mode: str = "fir2",
    grid_size: int = DEFAULT_GRID,
    tol: float = EXACT_TOL,
) -> FilterSystem | SampledSystem:
    """Complete a scalar filter to a full system.

    mode "fir2" (N = 2 only) uses the alternating conjugate flip and returns
    an exact verified FIR system; mode "grid" returns a SampledSystem built
    by deterministic pointwise Gram-Schmidt against the canonical basis
    (skipping the basis vector of largest overlap with the given row).
    """
    scalar = verify_scalar_qmf(m0, n)
    if scalar > tol:
        raise ValueError(f"m_0 fails the scalar QMF condition: residual {scalar:.3e} > {tol:.1e}")
    if mode == "fir2":
        if n != 2:
            raise ValueError("fir2 completion is defined only for scale 2")
        system = FilterSystem(2, [m0, _fir2_completion(m0)])
        return certify(system, tol=tol, grid_size=max(DEFAULT_GRID, grid_size))
    if mode == "grid":
        if grid_size <= 0 or grid_size % n != 0:
            raise ValueError(f"grid_size must be a positive multiple of {n}")
        return _grid_completion(m0, n, grid_size)
    raise ValueError(f"unknown completion mode {mode!r}")


def verify_measure_invariance(n: int, k_max: int) -> float:
    """Transfer-identity residual for Haar measure under z -> z^n.

    For monomials f = z^k, |k| <= k_max, compares the circle average of the
    normalized fiber sum of f with the circle average of f, both via exact
    root-of-unity Riemann sums.  Zero up to rounding.
    """
    if n < 2:
        raise ValueError(f"scale must be >= 2, got {n}")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    grid = 2 * k_max + 1
    base = unit_grid(grid)
    reps = np.array([fiber_representatives(z, n) for z in base])
    residual = 0.0
    for k in range(-k_max, k_max + 1):
        lhs = np.mean(np.mean(reps**k, axis=1))
        rhs = 1.0 if k == 0 else 0.0
        residual = max(residual, abs(lhs - rhs))
    return float(residual)
