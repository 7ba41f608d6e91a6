"""Truncated multivariate Taylor arithmetic.

A :class:`Taylor` holds the Taylor coefficients, up to a fixed total degree,
of an array-valued function of ``nvars`` chart variables around a base point.
Coefficients live in ``coef[k, ...]`` where ``k`` runs over monomials in graded
order; the trailing shape is arbitrary (sample batches, vectors, matrices) and
broadcasts like numpy.  Products are truncated Cauchy products and analytic
functions are applied through their Taylor series, so every derivative is
exact up to rounding.  The graded ordering makes lower-order bases prefixes of
higher ones, which is what :meth:`Taylor.diff` relies on.

The module level helpers (:func:`sin`, :func:`matmul`, ...) accept either plain
arrays or Taylor objects, so construction formulas are written once.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


class _Basis:
    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        monos: list[tuple[int, ...]] = []
        for deg in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(nvars), deg):
                alpha = [0] * nvars
                for v in combo:
                    alpha[v] += 1
                monos.append(tuple(alpha))
        self.monomials = monos
        self.index = {m: i for i, m in enumerate(monos)}
        self.size = len(monos)
        self.degree = np.array([sum(m) for m in monos])
        self.factorial = np.array([math.prod(math.factorial(a) for a in m) for m in monos], dtype=float)

        pi, pj, pk = [], [], []
        for i, a in enumerate(monos):
            for j, b in enumerate(monos):
                if sum(a) + sum(b) <= order:
                    pi.append(i)
                    pj.append(j)
                    pk.append(self.index[tuple(x + y for x, y in zip(a, b))])
        self.pi = np.array(pi)
        self.pj = np.array(pj)
        self.scatter = np.zeros((self.size, len(pk)))
        self.scatter[pk, np.arange(len(pk))] = 1.0

        # d/dx_v maps coefficient of beta+e_v (order K) to beta (order K-1)
        self.deriv: list[tuple[np.ndarray, np.ndarray]] = []
        lower = [m for m in monos if sum(m) <= order - 1]
        for v in range(nvars):
            src, fac = [], []
            for beta in lower:
                up = list(beta)
                up[v] += 1
                src.append(self.index[tuple(up)])
                fac.append(beta[v] + 1)
            self.deriv.append((np.array(src, dtype=int), np.array(fac, dtype=float)))


@lru_cache(maxsize=None)
def basis(nvars: int, order: int) -> _Basis:
    return _Basis(nvars, order)


def _pad(coef: np.ndarray, ndim: int) -> np.ndarray:
    """Insert unit axes after the leading coefficient axis up to ``1 + ndim`` dims."""
    extra = ndim - (coef.ndim - 1)
    if extra <= 0:
        return coef
    return coef.reshape(coef.shape[:1] + (1,) * extra + coef.shape[1:])


class Taylor:
    __array_priority__ = 1000

    def __init__(self, coef, nvars: int, order: int):
        coef = np.asarray(coef, dtype=float)
        b = basis(nvars, order)
        if coef.shape[0] != b.size:
            raise ValueError(f"expected {b.size} coefficients, got {coef.shape[0]}")
        self.coef = coef
        self.nvars = nvars
        self.order = order

    # construction -----------------------------------------------------------
    @classmethod
    def variables(cls, x0, order: int) -> list["Taylor"]:
        """One Taylor object per chart variable, expanded around ``x0[..., v]``."""
        x0 = np.asarray(x0, dtype=float)
        n = x0.shape[-1]
        b = basis(n, order)
        out = []
        for v in range(n):
            coef = np.zeros((b.size,) + x0.shape[:-1])
            coef[0] = x0[..., v]
            if order >= 1:
                e = [0] * n
                e[v] = 1
                coef[b.index[tuple(e)]] = 1.0
            out.append(cls(coef, n, order))
        return out

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "Taylor":
        value = np.asarray(value, dtype=float)
        coef = np.zeros((basis(nvars, order).size,) + value.shape)
        coef[0] = value
        return cls(coef, nvars, order)

    def like(self, value) -> "Taylor":
        return Taylor.constant(value, self.nvars, self.order)

    # introspection ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        return self.coef.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coef.ndim - 1

    @property
    def value(self) -> np.ndarray:
        return self.coef[0]

    def partial(self, alpha) -> np.ndarray:
        """Exact partial derivative with multi-index ``alpha`` at the base point."""
        b = basis(self.nvars, self.order)
        k = b.index[tuple(alpha)]
        return b.factorial[k] * self.coef[k]

    def grad(self) -> np.ndarray:
        """First partials stacked on a new last axis."""
        eye = np.eye(self.nvars, dtype=int)
        return np.stack([self.partial(eye[v]) for v in range(self.nvars)], axis=-1)

    def hessian(self) -> np.ndarray:
        n = self.nvars
        eye = np.eye(n, dtype=int)
        rows = [np.stack([self.partial(eye[a] + eye[b]) for b in range(n)], axis=-1) for a in range(n)]
        return np.stack(rows, axis=-2)

    def truncate(self, order: int) -> "Taylor":
        if order >= self.order:
            return self
        return Taylor(self.coef[: basis(self.nvars, order).size], self.nvars, order)

    def diff(self, v: int) -> "Taylor":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 Taylor object")
        src, fac = basis(self.nvars, self.order).deriv[v]
        coef = self.coef[src] * fac.reshape((-1,) + (1,) * self.ndim)
        return Taylor(coef, self.nvars, self.order - 1)

    # array-like plumbing ----------------------------------------------------
    def __getitem__(self, key) -> "Taylor":
        if not isinstance(key, tuple):
            key = (key,)
        return Taylor(self.coef[(slice(None),) + key], self.nvars, self.order)

    def __len__(self) -> int:
        return self.shape[0]

    def reshape(self, *shape) -> "Taylor":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Taylor(self.coef.reshape((self.coef.shape[0],) + tuple(shape)), self.nvars, self.order)

    def swapaxes(self, a: int, b: int) -> "Taylor":
        a = a if a < 0 else a + 1
        b = b if b < 0 else b + 1
        return Taylor(np.swapaxes(self.coef, a, b), self.nvars, self.order)

    @property
    def mT(self) -> "Taylor":
        return self.swapaxes(-1, -2)

    def sum(self, axis: int) -> "Taylor":
        axis = axis if axis < 0 else axis + 1
        return Taylor(self.coef.sum(axis=axis), self.nvars, self.order)

    def __repr__(self) -> str:
        return f"Taylor(nvars={self.nvars}, order={self.order}, shape={self.shape})"

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Taylor):
            if other.nvars != self.nvars:
                raise ValueError("Taylor objects over different variable counts")
            k = min(self.order, other.order)
            return self.truncate(k), other.truncate(k)
        return self, np.asarray(other, dtype=float)

    def __add__(self, other):
        a, b = self._coerce(other)
        if isinstance(b, Taylor):
            nd = max(a.ndim, b.ndim)
            return Taylor(_pad(a.coef, nd) + _pad(b.coef, nd), a.nvars, a.order)
        nd = max(a.ndim, b.ndim)
        coef = _pad(a.coef, nd) + np.zeros_like(b)[None]
        coef[0] = coef[0] + b
        return Taylor(coef, a.nvars, a.order)

    __radd__ = __add__

    def __neg__(self):
        return Taylor(-self.coef, self.nvars, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if isinstance(b, Taylor):
            return _bilinear(a, b, np.multiply)
        nd = max(a.ndim, b.ndim)
        return Taylor(_pad(a.coef, nd) * b[None], a.nvars, a.order)

    __rmul__ = __mul__

    def reciprocal(self) -> "Taylor":
        x0 = self.value
        derivs = [((-1.0) ** k) * math.factorial(k) / x0 ** (k + 1) for k in range(self.order + 1)]
        return _compose(self, derivs)

    def __truediv__(self, other):
        if isinstance(other, Taylor):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if int(k) != k:
            raise ValueError("only integer powers are supported")
        k = int(k)
        if k < 0:
            return (self ** (-k)).reciprocal()
        result = self.like(np.ones(self.shape))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)


def _bilinear(a: Taylor, b: Taylor, fn) -> Taylor:
    bs = basis(a.nvars, a.order)
    nd = max(a.ndim, b.ndim)
    ac = _pad(a.coef, nd)
    bc = _pad(b.coef, nd)
    vals = fn(ac[bs.pi], bc[bs.pj])
    coef = np.tensordot(bs.scatter, vals, axes=(1, 0))
    return Taylor(coef, a.nvars, a.order)


def _compose(x: Taylor, derivs) -> Taylor:
    """Apply a scalar function given its derivatives at the base value."""
    d = Taylor(np.concatenate([np.zeros_like(x.coef[:1]), x.coef[1:]]), x.nvars, x.order)
    result = x.like(derivs[0])
    power = d
    for k in range(1, x.order + 1):
        result = result + power * (derivs[k] / math.factorial(k))
        if k < x.order:
            power = power * d
    return result


# generic helpers -------------------------------------------------------------

def sin(x):
    if isinstance(x, Taylor):
        s, c = np.sin(x.value), np.cos(x.value)
        cyc = [s, c, -s, -c]
        return _compose(x, [cyc[k % 4] for k in range(x.order + 1)])
    return np.sin(x)


def cos(x):
    if isinstance(x, Taylor):
        s, c = np.sin(x.value), np.cos(x.value)
        cyc = [c, -s, -c, s]
        return _compose(x, [cyc[k % 4] for k in range(x.order + 1)])
    return np.cos(x)


def exp(x):
    if isinstance(x, Taylor):
        e = np.exp(x.value)
        return _compose(x, [e] * (x.order + 1))
    return np.exp(x)


def sqrt(x):
    if isinstance(x, Taylor):
        x0 = x.value
        derivs = []
        coef = 1.0
        for k in range(x.order + 1):
            derivs.append(coef * x0 ** (0.5 - k))
            coef *= 0.5 - k
        return _compose(x, derivs)
    return np.sqrt(x)


def value(x) -> np.ndarray:
    return x.value if isinstance(x, Taylor) else np.asarray(x)


def _anchor(*ops):
    for op in ops:
        if isinstance(op, Taylor):
            return op
    return None


def matmul(a, b):
    if isinstance(a, Taylor) and isinstance(b, Taylor):
        a, b = a._coerce(b)
        return _bilinear(a, b, np.matmul)
    if isinstance(a, Taylor):
        b = np.asarray(b, dtype=float)
        return Taylor(np.matmul(_pad(a.coef, b.ndim), b), a.nvars, a.order)
    if isinstance(b, Taylor):
        a = np.asarray(a, dtype=float)
        return Taylor(np.matmul(a[None], _pad(b.coef, a.ndim)), b.nvars, b.order)
    return np.matmul(a, b)


def einsum(subscripts: str, a, b):
    """Two-operand einsum; subscripts must use ``...`` for leading batch axes."""
    if isinstance(a, Taylor) and isinstance(b, Taylor):
        a, b = a._coerce(b)
        ins, out = subscripts.split("->")
        s1, s2 = ins.split(",")
        sub = f"Z{s1},Z{s2}->Z{out}"
        return _bilinear(a, b, lambda x, y: np.einsum(sub, x, y))
    ins, out = subscripts.split("->")
    s1, s2 = ins.split(",")
    if isinstance(a, Taylor):
        return Taylor(np.einsum(f"Z{s1},{s2}->Z{out}", a.coef, np.asarray(b)), a.nvars, a.order)
    if isinstance(b, Taylor):
        return Taylor(np.einsum(f"{s1},Z{s2}->Z{out}", np.asarray(a), b.coef), b.nvars, b.order)
    return np.einsum(subscripts, a, b)


def stack(items, axis: int = 0):
    t = _anchor(*items)
    if t is None:
        return np.stack([np.asarray(i, dtype=float) for i in items], axis=axis)
    k = min(i.order for i in items if isinstance(i, Taylor))
    lifted = [(i if isinstance(i, Taylor) else t.like(i)).truncate(k) for i in items]
    nd = max(i.ndim for i in lifted)
    coefs = [_pad(i.coef, nd) for i in lifted]
    shape = np.broadcast_shapes(*[c.shape[1:] for c in coefs])
    coefs = [np.broadcast_to(c, c.shape[:1] + shape) for c in coefs]
    ax = axis if axis < 0 else axis + 1
    return Taylor(np.stack(coefs, axis=ax), t.nvars, k)


def inv(a):
    """Inverse of the trailing square matrices, via a Neumann series in the nilpotent part."""
    if not isinstance(a, Taylor):
        return np.linalg.inv(a)
    a0inv = np.linalg.inv(a.value)
    nil = a - a.value
    step = -matmul(a0inv, nil)
    total = a.like(np.broadcast_to(np.eye(a.shape[-1]), a.shape).copy())
    term = total
    for _ in range(a.order):
        term = matmul(term, step)
        total = total + term
    return matmul(total, a0inv)


def trace(a):
    if isinstance(a, Taylor):
        return Taylor(np.trace(a.coef, axis1=-2, axis2=-1), a.nvars, a.order)
    return np.trace(a, axis1=-2, axis2=-1)


def det(a):
    """Determinant of trailing square matrices by cofactor expansion (small sizes)."""
    if not isinstance(a, Taylor):
        return np.linalg.det(a)
    n = a.shape[-1]
    if n == 1:
        return a[..., 0, 0]
    if n == 2:
        return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    total = None
    for j in range(n):
        keep = [c for c in range(n) if c != j]
        minor = a[..., 1:, :][..., keep]
        term = a[..., 0, j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
