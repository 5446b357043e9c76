"""Finite matrix models of the filter isometries S_i f = sqrt(N) m_i (f o z^N).

On Fourier coefficients the isometries are weighted shifts: with
m_i = sum_t c_{i,t} z^t, the matrix entry is S_i[p, k] = sqrt(N) c_{i, p-Nk}.
Truncation to a band of Fourier indices is handled so that the isometry
relations S_i* S_j = delta_ij are exact on the whole input band (the output
band is grown to lose nothing forward), while the completeness relation
sum_i S_i S_i* = 1 is exact on a reported interior sub-band whose preimage
indices all lie inside the input band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .laurent import LaurentPoly, MatrixLaurent
from .loopgroup import FilterSystem, transition


@dataclass(frozen=True)
class Band:
    """A contiguous range [k_min, k_max] of Fourier indices z^k."""

    k_min: int
    k_max: int

    def __post_init__(self) -> None:
        if self.k_min > self.k_max:
            raise ValueError(f"empty band [{self.k_min}, {self.k_max}]")

    @property
    def size(self) -> int:
        return self.k_max - self.k_min + 1

    def indices(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def __contains__(self, k: int) -> bool:
        return self.k_min <= k <= self.k_max


@dataclass(frozen=True)
class TruncatedRep:
    """Matrix models of the N filter isometries between two index bands."""

    system: FilterSystem
    in_band: Band
    out_band: Band
    S: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return self.system.n


def _filter_support(system: FilterSystem) -> tuple[int, int]:
    vals = [f.valuation for f in system.filters if not f.is_zero]
    degs = [f.degree for f in system.filters if not f.is_zero]
    if not vals:
        raise ValueError("filter system is identically zero")
    return min(vals), max(degs)


def build_rep(system: FilterSystem, in_band: Band) -> TruncatedRep:
    """Populate the weighted-shift matrices over a minimal lossless output band."""
    if not system.verified:
        raise ValueError("build_rep requires a verified filter system")
    n = system.n
    t_min, t_max = _filter_support(system)
    out_band = Band(n * in_band.k_min + t_min, n * in_band.k_max + t_max)
    root = math.sqrt(n)
    mats = []
    for i in range(n):
        m = np.zeros((out_band.size, in_band.size), dtype=complex)
        f = system.filters[i]
        for kk, k in enumerate(in_band.indices()):
            for t in f.support():
                p = n * k + t
                m[p - out_band.k_min, kk] = root * f.coeff(t)
        m.setflags(write=False)
        mats.append(m)
    return TruncatedRep(system=system, in_band=in_band, out_band=out_band, S=tuple(mats))


def adjoint_apply(rep: TruncatedRep, i: int, f: np.ndarray) -> np.ndarray:
    """Apply S_i^* to a coefficient vector on the output band.

    Equals the conjugate-transpose matrix action; in coefficients,
    (S_i^* f)_k = sqrt(N) sum_t conj(c_{i,t}) f_{Nk+t}.
    """
    if not 0 <= i < rep.n:
        raise IndexError(f"isometry index {i} out of range")
    f = np.asarray(f, dtype=complex)
    if f.shape != (rep.out_band.size,):
        raise ValueError(f"vector length {f.shape} does not match output band size {rep.out_band.size}")
    return rep.S[i].conj().T @ f


def interior_band(rep: TruncatedRep) -> Band | None:
    """The sub-band of the output band where completeness is exact.

    An output index p is interior when every k with p - Nk in the combined
    filter support lies in the input band; None when no index qualifies.
    """
    n = rep.n
    t_min, t_max = _filter_support(rep.system)
    lo = n * rep.in_band.k_min + t_max - n + 1
    hi = n * rep.in_band.k_max + t_min + n - 1
    lo = max(lo, rep.out_band.k_min)
    hi = min(hi, rep.out_band.k_max)
    if lo > hi:
        return None
    return Band(lo, hi)


@dataclass(frozen=True)
class CuntzReport:
    isometry_residual: float
    completeness_residual: float
    interior: Band | None

    def passes(self, tol: float) -> bool:
        return (
            self.interior is not None
            and self.isometry_residual <= tol
            and self.completeness_residual <= tol
        )


def verify_cuntz(rep: TruncatedRep) -> CuntzReport:
    """Residuals of the defining isometry and completeness relations.

    S_i* S_j = delta_ij is checked on the full input band (exact by the
    lossless output band); sum_i S_i S_i* = 1 is checked on the interior
    sub-band only, which is reported.
    """
    n = rep.n
    eye_in = np.eye(rep.in_band.size)
    iso = 0.0
    for i in range(n):
        for j in range(n):
            prod = rep.S[i].conj().T @ rep.S[j]
            target = eye_in if i == j else 0.0
            iso = max(iso, float(np.max(np.abs(prod - target))))

    inner = interior_band(rep)
    if inner is None:
        return CuntzReport(isometry_residual=iso, completeness_residual=math.nan, interior=None)
    total = sum(s @ s.conj().T for s in rep.S)
    sl = slice(inner.k_min - rep.out_band.k_min, inner.k_max - rep.out_band.k_min + 1)
    block = total[sl, sl]
    comp = float(np.max(np.abs(block - np.eye(inner.size))))
    return CuntzReport(isometry_residual=iso, completeness_residual=comp, interior=inner)


def reconstruct(rep: TruncatedRep, f: np.ndarray) -> tuple[np.ndarray, float]:
    """Apply sum_i S_i S_i* to a vector supported in the interior band.

    Returns the reconstruction and the max-norm of the difference from f;
    vectors with support outside the interior band are rejected because
    truncation would silently corrupt them.
    """
    f = np.asarray(f, dtype=complex)
    if f.shape != (rep.out_band.size,):
        raise ValueError(f"vector length {f.shape} does not match output band size {rep.out_band.size}")
    inner = interior_band(rep)
    if inner is None:
        raise ValueError("representation has no interior band")
    for idx in np.flatnonzero(np.abs(f) > 0):
        if (idx + rep.out_band.k_min) not in inner:
            raise ValueError(
                f"vector has support at index {idx + rep.out_band.k_min} outside interior "
                f"[{inner.k_min}, {inner.k_max}]"
            )
    g = np.zeros_like(f)
    for s in rep.S:
        g += s @ (s.conj().T @ f)
    return g, float(np.max(np.abs(g - f)))


def transition_operator_matrix(rep_a: TruncatedRep, rep_b: TruncatedRep, tol: float = 1e-10) -> MatrixLaurent:
    """Multiplication symbols of S_i^(a)* S_j^(b) as a matrix of Laurent polynomials.

    Each symbol is the exact polyphase fiber sum of conj(n_i) m_j (the
    entrywise circle adjoint of the transposed transition loop); the
    truncated matrix products are then checked entrywise against the
    symbols' multiplication-operator matrices on the input band, which the
    lossless output band makes exact.
    """
    if rep_a.n != rep_b.n:
        raise ValueError("representations have different scales")
    if rep_a.in_band != rep_b.in_band:
        raise ValueError("representations must share the input band")
    n = rep_a.n
    band = rep_a.in_band
    # Zero-row extension to a common output band leaves the adjoint products
    # unchanged, so differently supported filters can still be compared.
    out = Band(
        min(rep_a.out_band.k_min, rep_b.out_band.k_min),
        max(rep_a.out_band.k_max, rep_b.out_band.k_max),
    )

    def embed(rep: TruncatedRep, i: int) -> np.ndarray:
        m = np.zeros((out.size, band.size), dtype=complex)
        lo = rep.out_band.k_min - out.k_min
        m[lo : lo + rep.out_band.size, :] = rep.S[i]
        return m

    rows = []
    worst = 0.0
    for i in range(n):
        row = []
        for j in range(n):
            q = rep_a.system.filters[i].star() * rep_b.system.filters[j]
            if q.is_zero:
                symbol = LaurentPoly.zero()
            else:
                lo = math.ceil(q.valuation / n)
                hi = math.floor(q.degree / n)
                symbol = LaurentPoly(lo, [n * q.coeff(l * n) for l in range(lo, hi + 1)])
            row.append(symbol)
            prod = embed(rep_a, i).conj().T @ embed(rep_b, j)
            expected = np.array(
                [[symbol.coeff(p - k) for k in band.indices()] for p in band.indices()]
            )
            worst = max(worst, float(np.max(np.abs(prod - expected))))
        rows.append(row)
    if worst > tol:
        raise RuntimeError(
            f"truncated operator products disagree with multiplication symbols: {worst:.3e} > {tol:.1e}"
        )
    return MatrixLaurent(rows)


@dataclass(frozen=True)
class CommutantReport:
    """Heuristic commutant probe of a truncated representation.

    dimension counts near-null directions of the commutation constraints
    restricted to the interior band; truncation edge effects make this an
    upper-bound style diagnostic only, not a classification.  saturated
    marks that the count hit the computed spectrum size.
    """

    dimension: int
    singular_values: np.ndarray
    band: Band
    saturated: bool


def commutant_diagnostic(rep: TruncatedRep, tol: float = 1e-6, max_dims: int = 64) -> CommutantReport:
    """Approximate dimension of operators commuting with all S_i and S_i^*.

    Assembles X S_i - S_i X = 0 and X S_i^* - S_i^* X = 0 with everything
    compressed to the interior band, and counts singular values of the
    stacked constraint operator below tol.  X = I always satisfies the
    constraints, so the dimension is at least 1.
    """
    inner = interior_band(rep)
    if inner is None:
        raise ValueError("representation has no interior band; enlarge the input band")
    n = rep.n
    d = inner.size
    root = math.sqrt(n)
    eye = sp.identity(d, format="csr", dtype=complex)

    gram = sp.csr_matrix((d * d, d * d), dtype=complex)
    for i in range(n):
        f = rep.system.filters[i]
        s = sp.lil_matrix((d, d), dtype=complex)
        for kk, k in enumerate(inner.indices()):
            for t in f.support():
                p = n * k + t
                if p in inner:
                    s[p - inner.k_min, kk] = root * f.coeff(t)
        s = s.tocsr()
        for op in (s, s.conj().T.tocsr()):
            constraint = sp.kron(op.T, eye) - sp.kron(eye, op)
            gram = gram + constraint.conj().T @ constraint

    if d * d <= 600:
        eigvals = np.linalg.eigvalsh(gram.toarray())
        saturable = False
    else:
        k = min(max_dims, d * d - 2)
        eigvals = spla.eigsh(
            gram.tocsc(), k=k, sigma=-1e-10, which="LM", return_eigenvectors=False
        )
        eigvals = np.sort(eigvals)
        saturable = True
    svals = np.sqrt(np.clip(eigvals, 0.0, None))
    dimension = int(np.count_nonzero(svals < tol))
    saturated = saturable and dimension == len(svals)
    return CommutantReport(
        dimension=dimension,
        singular_values=svals,
        band=inner,
        saturated=saturated,
    )
