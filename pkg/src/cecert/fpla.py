"""Exact dense linear algebra over a prime field F_p.

Matrices are dense numpy int64 arrays with entries normalized to
``0 <= a_ij < p``.  Every routine is deterministic: row reduction scans
columns left to right and always picks the smallest available row index
as the pivot, solutions of underdetermined systems set all free
variables to zero, and kernel bases are read off the reduced row
echelon form in column order.  Two runs on the same input produce
bitwise-identical results.

Products are computed in int64 when the intermediate values provably
fit, and fall back to exact Python integers (object dtype) otherwise,
so there is no modulus for which results silently overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_INT64_MAX = 2**63 - 1


def is_prime(n: int) -> bool:
    """Deterministic primality test for moduli up to 2**31."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # Deterministic Miller-Rabin; these bases are exact for n < 3.2e18.
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime ``2 <= p <= 2**31``."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if not 2 <= self.p <= 2**31:
            raise ValueError(f"modulus out of range: {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"modulus is not prime: {self.p}")

    def inv(self, a: int) -> int:
        """Multiplicative inverse of ``a`` mod p (``a`` nonzero mod p)."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a field")
        return pow(a, self.p - 2, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p


def _as_array(entries, rows: int, cols: int, p: int) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64)
    if a.shape != (rows, cols):
        a = a.reshape(rows, cols)
    a = np.mod(a, p)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Mat:
    """An ``r x c`` matrix over a prime field.

    The wrapped array is read-only; all operations return new matrices.
    ``r`` or ``c`` may be zero (empty matrices compose as expected).
    """

    field: PrimeField
    a: np.ndarray

    # -- constructors ------------------------------------------------

    @staticmethod
    def make(field: PrimeField, entries, rows: int | None = None, cols: int | None = None) -> Mat:
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            if rows is None or cols is None:
                raise ValueError("entries must be a 2-d array, or rows/cols given")
            arr = arr.reshape(rows, cols)
        return Mat(field, _as_array(arr, arr.shape[0], arr.shape[1], field.p))

    @staticmethod
    def zeros(field: PrimeField, rows: int, cols: int) -> Mat:
        return Mat(field, _as_array(np.zeros((rows, cols), dtype=np.int64), rows, cols, field.p))

    @staticmethod
    def identity(field: PrimeField, n: int) -> Mat:
        return Mat(field, _as_array(np.eye(n, dtype=np.int64), n, n, field.p))

    def __post_init__(self) -> None:
        if self.a.ndim != 2:
            raise ValueError("matrix array must be 2-d")
        if self.a.dtype != np.int64:
            object.__setattr__(self, "a", self.a.astype(np.int64))
        if self.a.size and (self.a.min() < 0 or self.a.max() >= self.field.p):
            object.__setattr__(self, "a", np.mod(self.a, self.field.p))
        if self.a.flags.writeable:
            arr = self.a.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "a", arr)

    # -- shape -------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    # -- algebra -----------------------------------------------------

    def __matmul__(self, other: Mat) -> Mat:
        if self.field.p != other.field.p:
            raise ValueError("field mismatch in product")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return Mat(self.field, _matmul_mod(self.a, other.a, self.field.p))

    def __add__(self, other: Mat) -> Mat:
        self._check_same_shape(other)
        return Mat(self.field, np.mod(self.a + other.a, self.field.p))

    def __sub__(self, other: Mat) -> Mat:
        self._check_same_shape(other)
        return Mat(self.field, np.mod(self.a - other.a, self.field.p))

    def __neg__(self) -> Mat:
        return Mat(self.field, np.mod(-self.a, self.field.p))

    def scale(self, c: int) -> Mat:
        return Mat(self.field, np.mod(self.a * (c % self.field.p), self.field.p))

    @property
    def T(self) -> Mat:
        return Mat(self.field, self.a.T.copy())

    def _check_same_shape(self, other: Mat) -> None:
        if self.field.p != other.field.p:
            raise ValueError("field mismatch")
        if self.a.shape != other.a.shape:
            raise ValueError(f"shape mismatch: {self.a.shape} vs {other.a.shape}")

    # -- predicates / misc -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.field.p == other.field.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def is_zero(self) -> bool:
        return not self.a.any()

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.a]

    def __repr__(self) -> str:
        return f"Mat(p={self.field.p}, {self.rows}x{self.cols})"


def hstack(mats: list[Mat]) -> Mat:
    if not mats:
        raise ValueError("hstack of nothing")
    return Mat(mats[0].field, np.hstack([m.a for m in mats]))


def vstack(mats: list[Mat]) -> Mat:
    if not mats:
        raise ValueError("vstack of nothing")
    return Mat(mats[0].field, np.vstack([m.a for m in mats]))


def block_diag(field: PrimeField, mats: list[Mat]) -> Mat:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Mat(field, out)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact modular product; int64 fast path, object dtype when unsafe."""
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if inner * (p - 1) * (p - 1) <= _INT64_MAX:
        return np.mod(a @ b, p)
    prod = a.astype(object) @ b.astype(object)
    return np.mod(prod, p).astype(np.int64)


# -- row reduction ----------------------------------------------------


def _eliminate(a: np.ndarray, p: int, reduce_above: bool) -> tuple[np.ndarray, list[int]]:
    """Row-reduce ``a`` in place mod p; returns (array, pivot columns).

    Pivot selection: columns are scanned left to right; the pivot for a
    column is the smallest row index (at or below the current pivot row)
    holding a nonzero entry.  With ``reduce_above`` the result is the
    reduced row echelon form, otherwise plain row echelon form.  Row
    updates only touch columns at or right of the pivot column, which is
    sound because pivot rows are zero to the left of their pivot.
    """
    rows, cols = a.shape
    pivots: list[int] = []
    piv = 0
    for col in range(cols):
        if piv >= rows:
            break
        nz = np.nonzero(a[piv:, col])[0]
        if nz.size == 0:
            continue
        src = piv + int(nz[0])
        if src != piv:
            a[[piv, src], col:] = a[[src, piv], col:]
        inv = pow(int(a[piv, col]), p - 2, p)
        if inv != 1:
            a[piv, col:] = a[piv, col:] * inv % p
        if reduce_above:
            targets = np.nonzero(a[:, col])[0]
            targets = targets[targets != piv]
        else:
            targets = piv + 1 + np.nonzero(a[piv + 1 :, col])[0]
        if targets.size:
            a[targets[:, None], np.arange(col, cols)[None, :]] = (
                a[targets, col:] - np.outer(a[targets, col], a[piv, col:])
            ) % p
        pivots.append(col)
        piv += 1
    return a, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a, pivots = _eliminate(m.a.copy(), m.field.p, reduce_above=True)
    return Mat(m.field, a), pivots


def rank(m: Mat) -> int:
    """Rank over F_p (forward elimination only)."""
    _, pivots = _eliminate(m.a.copy(), m.field.p, reduce_above=False)
    return len(pivots)


def kernel_basis(m: Mat) -> Mat:
    """Canonical basis of the right kernel, as matrix columns.

    One basis vector per free column of the RREF, in increasing column
    order: the vector has 1 in the free coordinate, the negated pivot
    column coefficients in the pivot coordinates, and 0 elsewhere.
    """
    p = m.field.p
    red, pivots = _eliminate(m.a.copy(), p, reduce_above=True)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-red[i, fc]) % p
    return Mat(m.field, basis)


def solve(m: Mat, b: Mat) -> Mat | None:
    """Canonical solution ``x`` of ``m @ x = b``, or None if unsolvable.

    ``b`` may have several columns; each is solved independently.  Free
    variables are set to zero, so the solution is the unique one
    supported on the pivot columns of ``m``.  Shape mismatches raise.
    """
    if m.field.p != b.field.p:
        raise ValueError("field mismatch in solve")
    if b.rows != m.rows:
        raise ValueError(f"rhs has {b.rows} rows, expected {m.rows}")
    p = m.field.p
    aug = np.hstack([m.a, b.a]).copy()
    red, pivots = _eliminate(aug, p, reduce_above=True)
    # Any pivot in the appended block means that column is inconsistent.
    bad = [c for c in pivots if c >= m.cols]
    if bad:
        return None
    x = np.zeros((m.cols, b.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc, :] = red[i, m.cols :]
    return Mat(m.field, x)


def image_basis(m: Mat) -> Mat:
    """Canonical basis of the column space, as matrix columns.

    Computed as the nonzero rows of the RREF of the transpose, then
    transposed back, so the basis depends only on the column space.
    """
    red, pivots = _eliminate(m.a.T.copy(), m.field.p, reduce_above=True)
    return Mat(m.field, red[: len(pivots), :].T.copy())


def split_mono_retraction(m: Mat) -> Mat:
    """Canonical left inverse of a full-column-rank matrix.

    Returns the unique ``r`` with ``r @ m = I`` whose rows are supported
    on the pivot rows of ``m`` (equivalently: each row of ``r`` is the
    canonical solution of ``m.T x = e_i``).  Raises if ``m`` does not
    have full column rank.
    """
    r = solve(m.T, Mat.identity(m.field, m.cols))
    if r is None:
        raise ValueError("matrix has no left inverse (not full column rank)")
    return r.T
