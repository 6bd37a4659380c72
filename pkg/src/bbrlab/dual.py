"""Forward-mode differentiation with a fixed 4-wide tangent.

A Dual4 carries a value and its four partial derivatives with respect to
the free box parameters (cx, cy, w, h).  Values may be numpy scalars or
1-d arrays; tangents are then (4,) or (4, n).  Because every operation
is a numpy ufunc underneath, the same code differentiates one box pair
or a whole batch of them lane by lane.

Nonsmooth points follow fixed conventions so results are deterministic:
min/max take the left operand's derivative at ties, and d|x|/dx is 0 at
x = 0 (the sign convention of ``np.sign``).
"""

from __future__ import annotations

import numpy as np


class Dual4:
    __slots__ = ("val", "tan")

    # Make ndarray op Dual4 defer to the reflected methods below instead
    # of coercing the dual into an object array element by element.
    __array_ufunc__ = None

    def __init__(self, val, tan):
        self.val = val
        self.tan = tan

    def __repr__(self):
        return f"Dual4(val={self.val!r}, tan={self.tan!r})"

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Dual4):
            return Dual4(self.val + other.val, self.tan + other.tan)
        return Dual4(self.val + other, self.tan)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual4):
            return Dual4(self.val - other.val, self.tan - other.tan)
        return Dual4(self.val - other, self.tan)

    def __rsub__(self, other):
        return Dual4(other - self.val, -self.tan)

    def __mul__(self, other):
        if isinstance(other, Dual4):
            return Dual4(
                self.val * other.val,
                self.tan * other.val + other.tan * self.val,
            )
        return Dual4(self.val * other, self.tan * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual4):
            inv = 1.0 / other.val
            val = self.val * inv
            return Dual4(val, (self.tan - other.tan * val) * inv)
        inv = 1.0 / other
        return Dual4(self.val * inv, self.tan * inv)

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        val = other * inv
        return Dual4(val, -self.tan * val * inv)

    def __neg__(self):
        return Dual4(-self.val, -self.tan)


def is_dual(x) -> bool:
    return isinstance(x, Dual4)


def value_of(x):
    """Primal value of x; also the detach operation (drops the tangent)."""
    return x.val if isinstance(x, Dual4) else x


def seed_box(params):
    """Seed (cx, cy, w, h) as Dual4s with unit tangents.

    params is a length-4 sequence of scalars or a (4, n) array; returns
    four Dual4s whose tangents form the identity basis.
    """
    p = np.asarray(params, dtype=np.float64)
    if p.ndim == 1:
        eye = np.eye(4)
        return tuple(Dual4(p[i], eye[i].copy()) for i in range(4))
    n = p.shape[1]
    out = []
    for i in range(4):
        t = np.zeros((4, n))
        t[i] = 1.0
        out.append(Dual4(p[i], t))
    return tuple(out)


def _pick(cond, a, b):
    """Select a where cond else b, dual-aware; ties resolved by cond."""
    a_dual = isinstance(a, Dual4)
    b_dual = isinstance(b, Dual4)
    if not a_dual and not b_dual:
        return np.where(cond, a, b)
    av = a.val if a_dual else a
    bv = b.val if b_dual else b
    at = a.tan if a_dual else 0.0
    bt = b.tan if b_dual else 0.0
    return Dual4(np.where(cond, av, bv), np.where(cond, at, bt))


def gmax(a, b):
    """max(a, b); at ties the left operand's derivative wins."""
    if not isinstance(a, Dual4) and not isinstance(b, Dual4):
        return np.maximum(a, b)
    return _pick(value_of(a) >= value_of(b), a, b)


def gmin(a, b):
    """min(a, b); at ties the left operand's derivative wins."""
    if not isinstance(a, Dual4) and not isinstance(b, Dual4):
        return np.minimum(a, b)
    return _pick(value_of(a) <= value_of(b), a, b)


def gclamp(x, lo, hi):
    return gmin(gmax(x, lo), hi)


def gwhere(cond, a, b):
    """Value-level branch select; cond is a plain boolean (array)."""
    return _pick(cond, a, b)


def gabs(x):
    if isinstance(x, Dual4):
        return Dual4(np.abs(x.val), np.sign(x.val) * x.tan)
    return np.abs(x)


def gsqrt(x):
    if isinstance(x, Dual4):
        r = np.sqrt(x.val)
        return Dual4(r, x.tan * (0.5 / r))
    return np.sqrt(x)


def gexp(x):
    if isinstance(x, Dual4):
        e = np.exp(x.val)
        return Dual4(e, x.tan * e)
    return np.exp(x)


def gatan(x):
    if isinstance(x, Dual4):
        return Dual4(np.arctan(x.val), x.tan / (1.0 + x.val * x.val))
    return np.arctan(x)


def gpow(x, k):
    """x ** k for a fixed numeric exponent k >= 1 and x >= 0."""
    if isinstance(x, Dual4):
        return Dual4(np.power(x.val, k), k * np.power(x.val, k - 1.0) * x.tan)
    return np.power(x, k)
