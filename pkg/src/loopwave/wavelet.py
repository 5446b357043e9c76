"""Cascade synthesis of scaling functions and wavelet generators.

The scaling function solves the refinement identity
phi(x) = N * sum_k a_k phi(N x - k) with sum_k a_k = 1 (the averaging
normalization that makes the identity, the low-pass condition and
integral(phi) = 1 simultaneously consistent).  The cascade iterates the
refinement from the box seed on [0, 1), refining the sample grid by a
factor of N each step; the sample arrays are exactly the cell values of
the piecewise-constant iterates, so discrete sums reproduce the continuum
integrals of the iterates without quadrature error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .laurent import LaurentPoly
from .loopgroup import FilterSystem
from .qmf import low_pass_check, verify_scalar_qmf

#: Successive-iterate sup-difference below which the cascade is called converged.
CASCADE_CONV_TOL = 1e-6

#: Guard against runaway iterations from non-contractive filters.
DIVERGENCE_GUARD = 1e6

NORMALIZATION_NOTE = (
    "refinement phi(x) = N * sum_k a_k phi(N x - k) with sum_k a_k = 1; "
    "Riemann integral of phi is 1"
)


@dataclass(frozen=True)
class ScalingFunctionSamples:
    """Samples of a scaling function on the grid k * N^-level.

    values[k] is the cell value on [k h, (k+1) h), h = N^-level, covering
    the support [0, (L-1)/(N-1)]; everything outside is zero.  shift says
    how far the filter's support was translated to start at exponent 0.
    """

    n: int
    level: int
    values: np.ndarray
    lowpass: LaurentPoly
    filter_length: int
    shift: int
    deltas: tuple[float, ...]
    normalization: str = NORMALIZATION_NOTE

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, (self.filter_length - 1) / (self.n - 1))

    @property
    def step(self) -> float:
        return float(self.n) ** (-self.level)

    @property
    def integral(self) -> float:
        return float((self.values.sum() * self.step).real)

    @property
    def last_delta(self) -> float:
        return self.deltas[-1] if self.deltas else math.inf

    @property
    def converged(self) -> bool:
        return self.last_delta <= CASCADE_CONV_TOL

    def grid(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.step


@dataclass(frozen=True)
class WaveletSamples:
    """Samples of the generators psi_1 .. psi_{N-1} on a common grid.

    Grid step is N^-level with the first sample at start_index * N^-level;
    values has one row per generator.  orthonormal_case records whether the
    source system's low-pass filter both generated the scaling samples and
    satisfies the averaging condition, i.e. whether the generators are
    candidates for an orthonormal family at all.
    """

    n: int
    level: int
    start_index: int
    values: np.ndarray
    orthonormal_case: bool

    @property
    def step(self) -> float:
        return float(self.n) ** (-self.level)

    def grid(self) -> np.ndarray:
        return (self.start_index + np.arange(self.values.shape[1])) * self.step


@dataclass(frozen=True)
class GridFunction:
    """A finitely supported function sampled on the lattice k * n^-level."""

    n: int
    level: int
    start_index: int
    values: np.ndarray

    @property
    def step(self) -> float:
        return float(self.n) ** (-self.level)

    def grid(self) -> np.ndarray:
        return (self.start_index + np.arange(len(self.values))) * self.step


def cascade(m0: LaurentPoly, n: int, level: int, tol: float = 1e-10) -> ScalingFunctionSamples:
    """Iterate the refinement operator ``level`` times from the box seed.

    Requires the scalar QMF condition and the averaging property
    m_0(1) = 1; a filter supported away from exponent 0 is translated there
    first and the shift recorded.  Each iteration refines the grid by a
    factor of N; successive sup-differences on the common grid are recorded
    so convergence can be judged by the caller.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    scalar = verify_scalar_qmf(m0, n)
    if scalar > tol:
        raise ValueError(f"m_0 fails the scalar QMF condition: residual {scalar:.3e}")
    if not low_pass_check(m0):
        raise ValueError(f"m_0 is not low-pass: m_0(1) = {m0(1.0):.6g}, expected 1")
    if m0.is_zero:
        raise ValueError("m_0 must be nonzero")

    shift = m0.valuation
    a = np.asarray(LaurentPoly(0, m0.coeffs).coeffs, dtype=complex)
    length = len(a)
    sup_end = (length - 1) / (n - 1)

    phi = np.zeros(math.floor(sup_end) + 1, dtype=complex)
    phi[0] = 1.0
    deltas: list[float] = []
    for t in range(level):
        stride = n**t
        new_size = math.floor(sup_end * n ** (t + 1)) + 1
        nxt = np.zeros(new_size, dtype=complex)
        for k in range(length):
            lo = k * stride
            if lo >= new_size:
                continue
            cnt = min(new_size - lo, len(phi))
            nxt[lo : lo + cnt] += n * a[k] * phi[:cnt]
        peak = float(np.max(np.abs(nxt)))
        if peak > DIVERGENCE_GUARD:
            raise RuntimeError(f"cascade diverged: sup |phi| = {peak:.3e} at iteration {t + 1}")
        deltas.append(float(np.max(np.abs(nxt[::n] - phi))))
        phi = nxt
    phi.setflags(write=False)
    return ScalingFunctionSamples(
        n=n,
        level=level,
        values=phi,
        lowpass=LaurentPoly(0, m0.coeffs),
        filter_length=length,
        shift=shift,
        deltas=tuple(deltas),
    )


def refinement_residual(phi: ScalingFunctionSamples) -> float:
    """Sup defect of phi(x) = N sum_k a_k phi(Nx - k) over the sample grid.

    The right-hand side only reads the samples on the once-coarsened
    lattice, so for an exactly refinable array (e.g. the box for the Haar
    filter) this is zero, and in general it tracks the last cascade
    increment.
    """
    if phi.level < 1:
        raise ValueError("refinement residual needs at least one cascade level")
    n = phi.n
    stride = n**phi.level
    vals = phi.values
    rhs = np.zeros_like(vals)
    a = phi.lowpass
    for k in a.support():
        idx = np.arange(len(vals)) * n - k * stride
        valid = (idx >= 0) & (idx < len(vals))
        rhs[valid] += n * a.coeff(k) * vals[idx[valid]]
    return float(np.max(np.abs(rhs - vals)))


def wavelets(system: FilterSystem, phi: ScalingFunctionSamples) -> WaveletSamples:
    """Generator samples psi_i(x) = N sum_k b^(i)_k phi(N x - k).

    Evaluated on phi's grid refined once; the common sample window is the
    union of the per-generator supports derived from the filter supports.
    """
    if not system.verified:
        raise ValueError("wavelets require a verified filter system")
    if system.n != phi.n:
        raise ValueError(f"grid incompatibility: system scale {system.n} vs samples scale {phi.n}")
    n = system.n
    stride = n**phi.level
    gens = system.filters[1:]
    if any(g.is_zero for g in gens):
        raise ValueError("generator filters must be nonzero")
    start = min(g.valuation for g in gens) * stride
    end = max(g.degree for g in gens) * stride + len(phi.values) - 1
    values = np.zeros((n - 1, end - start + 1), dtype=complex)
    for i, g in enumerate(gens):
        for k in g.support():
            lo = k * stride - start
            cnt = min(values.shape[1] - lo, len(phi.values))
            values[i, lo : lo + cnt] += n * g.coeff(k) * phi.values[:cnt]
    values.setflags(write=False)
    shifted_m0 = LaurentPoly(0, system.filters[0].coeffs)
    orthonormal = low_pass_check(system.filters[0]) and shifted_m0.allclose(phi.lowpass, 1e-12)
    return WaveletSamples(
        n=n,
        level=phi.level + 1,
        start_index=start,
        values=values,
        orthonormal_case=orthonormal,
    )


def synthesize_W(xi: Mapping[int, complex], phi: ScalingFunctionSamples) -> GridFunction:
    """Samples of (W xi)(x) = sum_k xi_k phi(x - k) on phi's grid."""
    if not xi:
        return GridFunction(phi.n, phi.level, 0, np.zeros(1, dtype=complex))
    stride = phi.n**phi.level
    k_min = min(xi)
    k_max = max(xi)
    values = np.zeros((k_max - k_min) * stride + len(phi.values), dtype=complex)
    for k in sorted(xi):
        lo = (k - k_min) * stride
        values[lo : lo + len(phi.values)] += complex(xi[k]) * phi.values
    return GridFunction(phi.n, phi.level, k_min * stride, values)


def shift_down(system: FilterSystem, xi: Mapping[int, complex]) -> dict[int, complex]:
    """The low-pass isometry on sequences: (S_0 xi)_p = sqrt(N) sum_k a_{p-Nk} xi_k."""
    n = system.n
    a = system.filters[0]
    root = math.sqrt(n)
    out: dict[int, complex] = {}
    for k, c in xi.items():
        for t in a.support():
            p = n * k + t
            out[p] = out.get(p, 0.0) + root * a.coeff(t) * complex(c)
    return {p: v for p, v in out.items() if v != 0}


def check_intertwine(
    system: FilterSystem, phi: ScalingFunctionSamples, xi: Mapping[int, complex]
) -> float:
    """Grid sup-norm of U_N(W xi) - W(S_0 xi), U_N f(x) = N^{-1/2} f(x/N).

    The dilated side lives on the once-coarsened grid, so the comparison
    runs over the coarse lattice covering both supports.  The residual is
    bounded by the refinement defect of the sample array: zero for exactly
    refinable samples, and of the order of the last cascade increment
    otherwise (callers should check phi.converged).
    """
    if system.n != phi.n:
        raise ValueError("grid incompatibility between system and samples")
    if phi.level < 1:
        raise ValueError("intertwining check needs at least one cascade level")
    if not xi:
        return 0.0
    n = system.n
    w = synthesize_W(xi, phi)
    lhs_values = w.values / math.sqrt(n)  # at coarse index q = w.start_index + j
    rhs = synthesize_W(shift_down(system, xi), phi)

    lhs_lo = w.start_index
    lhs_hi = w.start_index + len(w.values) - 1
    rhs_lo = math.ceil(rhs.start_index / n)
    rhs_hi = math.floor((rhs.start_index + len(rhs.values) - 1) / n)
    lo = min(lhs_lo, rhs_lo)
    hi = max(lhs_hi, rhs_hi)
    left = np.zeros(hi - lo + 1, dtype=complex)
    left[lhs_lo - lo : lhs_hi - lo + 1] = lhs_values
    right = np.zeros_like(left)
    if rhs_lo <= rhs_hi:
        fine = np.arange(rhs_lo, rhs_hi + 1) * n - rhs.start_index
        right[rhs_lo - lo : rhs_hi - lo + 1] = rhs.values[fine]
    return float(np.max(np.abs(left - right)))


def orthonormality_check(phi: ScalingFunctionSamples, k_range: int) -> float:
    """Max deviation of the translate inner products <phi, phi(.-k)> from delta_k0.

    Computed by the exact cell-value quadrature of the piecewise-constant
    samples for |k| <= k_range.
    """
    if k_range < 0:
        raise ValueError("k_range must be >= 0")
    vals = phi.values
    stride = phi.n**phi.level
    dev = abs(phi.step * np.vdot(vals, vals) - 1.0)
    for k in range(1, k_range + 1):
        if k * stride >= len(vals):
            break
        ip = phi.step * np.vdot(vals[: len(vals) - k * stride], vals[k * stride :])
        dev = max(dev, abs(ip))
    return float(dev)
