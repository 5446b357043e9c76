"""Well-known small filter systems used as anchors and CLI demos."""

from __future__ import annotations

import math

from .laurent import LaurentPoly
from .loopgroup import FilterSystem, base_system

__all__ = ["haar_system", "daubechies4_lowpass", "daubechies4_system", "base_system", "stretched_box_lowpass"]


def haar_system() -> FilterSystem:
    """The Haar pair ((1+z)/2, (1-z)/2), scale 2."""
    m0 = LaurentPoly(0, (0.5, 0.5))
    m1 = LaurentPoly(0, (0.5, -0.5))
    return FilterSystem(2, [m0, m1], verified=True)


def daubechies4_lowpass() -> LaurentPoly:
    """The 4-tap orthonormal low-pass filter with coefficient sum 1."""
    s3 = math.sqrt(3.0)
    return LaurentPoly(0, ((1 + s3) / 8, (3 + s3) / 8, (3 - s3) / 8, (1 - s3) / 8))


def daubechies4_system() -> FilterSystem:
    """The 4-tap low-pass with its alternating-flip high pass."""
    from .qmf import complete

    system = complete(daubechies4_lowpass(), 2, mode="fir2")
    assert isinstance(system, FilterSystem)
    return system


def stretched_box_lowpass(n: int = 3) -> LaurentPoly:
    """(1 + z + ... + z^{n-1}) / n: refines the box at scale n."""
    return LaurentPoly(0, (1.0 / n,) * n)
