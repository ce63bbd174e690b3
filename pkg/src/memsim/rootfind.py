"""Scalar root finding: plain bisection and a Newton/bisection hybrid.

The hybrid keeps a sign-changing bracket at all times and falls back to a
bisection step whenever the Newton proposal leaves the bracket, fails to
evaluate, or stalls.  Bisection alone serves as the independent cross-check
for the implicit port solves.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import MemsimError, NoConvergence


def bisect(f: Callable[[float], float], lo: float, hi: float,
           xtol: float = 1e-12, ftol: float = 0.0, max_iter: int = 200) -> float:
    """Root of f on [lo, hi] by pure bisection; requires a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoConvergence(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or (ftol > 0.0 and abs(fmid) <= ftol) or hi - lo <= xtol:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    raise NoConvergence(f"bisection did not reach tolerance in {max_iter} iterations")


def newton_bisection(f: Callable[[float], float], lo: float, hi: float,
                     x0: float | None = None,
                     df: Callable[[float], float] | None = None,
                     ftol: float = 1e-12, xtol: float = 0.0,
                     max_iter: int = 100) -> float:
    """Newton iteration safeguarded by a bracketing interval.

    `df` may be omitted, in which case the derivative is estimated by a
    finite difference kept inside the bracket.  Raises NoConvergence when
    the iteration budget runs out before |f| <= ftol or the bracket width
    falls below xtol.
    """
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoConvergence(f"no sign change on [{lo!r}, {hi!r}]")

    def slope(x: float, fx: float) -> float:
        if df is not None:
            return df(x)
        h = 1e-7 * max(1.0, abs(x))
        xp = x + h if x + h <= hi else x - h
        try:
            return (f(xp) - fx) / (xp - x)
        except MemsimError:
            return 0.0  # forces a bisection step

    x = x0 if x0 is not None and lo < x0 < hi else 0.5 * (lo + hi)
    for _ in range(max_iter):
        try:
            fx = f(x)
        except MemsimError:
            fx = math.nan
        if math.isfinite(fx):
            if abs(fx) <= ftol:
                return x
            if flo * fx < 0.0:
                hi, fhi = x, fx
            else:
                lo, flo = x, fx
            d = slope(x, fx)
            x_new = x - fx / d if d != 0.0 else math.inf
        else:
            x_new = math.inf
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
        if xtol > 0.0 and hi - lo <= xtol:
            return x
    raise NoConvergence(f"newton/bisection did not converge in {max_iter} iterations")
