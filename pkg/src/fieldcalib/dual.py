"""Vectorized forward-mode automatic differentiation.

A :class:`Dual` carries a primal array ``val`` of arbitrary shape together with
a tangent array ``tan`` of shape ``(lanes,) + val.shape`` (broadcast-compatible),
one lane per independent direction. Seeding one lane per optimization variable
yields the full gradient of a scalar output in a single forward sweep, which is
the right trade for this package's small parameter vectors (7 camera + 2 lens
coefficients).

Arrays that are not Duals are treated as constants (zero tangent) without
materializing the zeros.
"""

from __future__ import annotations

from typing import Union

import numpy as np

ArrayLike = Union[np.ndarray, float, int]


def _axes_for_tan(axis):
    """Shift value axes by one to address the tangent array (lane axis first)."""
    if isinstance(axis, tuple):
        return tuple(a + 1 if a >= 0 else a for a in axis)
    return axis + 1 if axis >= 0 else axis


class Dual:
    __slots__ = ("val", "tan")

    def __init__(self, val: ArrayLike, tan: np.ndarray):
        self.val = np.asarray(val, dtype=np.float64)
        self.tan = np.asarray(tan, dtype=np.float64)

    @classmethod
    def seed(cls, val: ArrayLike, lane: int, lanes: int) -> "Dual":
        """Variable with d/dx = 1 in one tangent lane."""
        val = np.asarray(val, dtype=np.float64)
        tan = np.zeros((lanes,) + val.shape, dtype=np.float64)
        tan[lane] = 1.0
        return cls(val, tan)

    @property
    def lanes(self) -> int:
        return self.tan.shape[0]

    @property
    def shape(self):
        return self.val.shape

    def reshape(self, *shape) -> "Dual":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Dual(self.val.reshape(shape), self.tan.reshape((self.lanes,) + shape))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.tan + other.tan)
        return Dual(self.val + other, self.tan)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.tan - other.tan)
        return Dual(self.val - other, self.tan)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.tan)

    def __neg__(self):
        return Dual(-self.val, -self.tan)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.tan * other.val + self.val * other.tan)
        return Dual(self.val * other, self.tan * np.asarray(other, dtype=np.float64))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            val = self.val * inv
            return Dual(val, (self.tan - val * other.tan) * inv)
        inv = 1.0 / np.asarray(other, dtype=np.float64)
        return Dual(self.val * inv, self.tan * inv)

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        val = np.asarray(other, dtype=np.float64) * inv
        return Dual(val, -val * inv * self.tan)

    def __abs__(self):
        return Dual(np.abs(self.val), np.sign(self.val) * self.tan)

    # -- elementary functions ----------------------------------------------

    def sqrt(self) -> "Dual":
        root = np.sqrt(self.val)
        # d sqrt is unbounded at 0; the loss kinks there anyway, use subgradient 0.
        safe = np.where(root > 0.0, root, 1.0)
        deriv = np.where(root > 0.0, 0.5 / safe, 0.0)
        return Dual(root, deriv * self.tan)

    def sin(self) -> "Dual":
        return Dual(np.sin(self.val), np.cos(self.val) * self.tan)

    def cos(self) -> "Dual":
        return Dual(np.cos(self.val), -np.sin(self.val) * self.tan)

    # -- structure ----------------------------------------------------------

    def sum(self, axis) -> "Dual":
        return Dual(self.val.sum(axis=axis), self.tan.sum(axis=_axes_for_tan(axis)))


def value(x) -> np.ndarray:
    """Primal part of a Dual, or the array itself."""
    return x.val if isinstance(x, Dual) else np.asarray(x, dtype=np.float64)


def where(cond: np.ndarray, a, b):
    """Elementwise select; ``cond`` is a constant (not differentiated through)."""
    if not isinstance(a, Dual) and not isinstance(b, Dual):
        return np.where(cond, a, b)
    a_tan = a.tan if isinstance(a, Dual) else np.zeros(1)
    b_tan = b.tan if isinstance(b, Dual) else np.zeros(1)
    return Dual(np.where(cond, value(a), value(b)), np.where(cond[None, ...], a_tan, b_tan))


def constant(x: ArrayLike, lanes: int) -> Dual:
    """Promote an array to a Dual with explicit zero tangents."""
    val = np.asarray(x, dtype=np.float64)
    return Dual(val, np.zeros((lanes,) + val.shape, dtype=np.float64))


# Generic dispatchers so numeric kernels accept plain arrays or Duals alike.


def sin(x):
    return x.sin() if isinstance(x, Dual) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, Dual) else np.cos(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Dual) else np.sqrt(x)


def absolute(x):
    return abs(x) if isinstance(x, Dual) else np.abs(x)


def gradient(f, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and gradient of a scalar function of a 1-D parameter vector.

    ``f`` must accept a list of scalar Duals and combine them with Dual
    arithmetic.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    args = [Dual.seed(x[i], i, n) for i in range(n)]
    out = f(args)
    if isinstance(out, Dual):
        return float(out.val), np.asarray(out.tan, dtype=np.float64).reshape(n)
    return float(out), np.zeros(n)
