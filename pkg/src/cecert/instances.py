"""Plain-text instance files and seeded random complex generation.

An instance file describes one bounded complex over F_p[x]/(x^m) with
explicit integer matrices:

    cecert-instance v1
    p 3
    m 2
    label two-term          (optional)
    seed 42                 (optional)
    window 0 1
    module 0 2
    0 0
    1 0
    module 1 2
    0 0
    1 0
    diff 0
    0 0
    1 0

One ``module`` block per degree of the window, in order, each followed
by its action matrix (row per line; omitted when the dimension is 0).
One ``diff`` block per consecutive pair of positive-dimensional
entries, also in order.  The writer is canonical (single spaces,
newline endings, no trailing blanks), and reading a written file and
writing it again is byte-identical.

Loading re-checks everything: primality of p, nilpotency of order m of
each action, R-linearity of each differential, and d^2 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import Complex
from .fpla import Mat, PrimeField, kernel_basis, rank, solve
from .modules import CatParams, Hom, Module, hom_space_basis, jordan_module

HEADER = "cecert-instance v1"


class InstanceError(ValueError):
    """A malformed or invalid instance file."""


@dataclass
class Instance:
    complex: Complex
    label: str | None = None
    seed: int | None = None

    @property
    def cat(self) -> CatParams:
        return self.complex.cat


# -- writing -------------------------------------------------------------


def write_instance(inst: Instance) -> str:
    x = inst.complex
    cat = x.cat
    lines = [HEADER, f"p {cat.p}", f"m {cat.m}"]
    if inst.label is not None:
        lines.append(f"label {inst.label}")
    if inst.seed is not None:
        lines.append(f"seed {inst.seed}")
    if x.is_zero_complex():
        lo = hi = 0
    else:
        lo, hi = x.lo, x.hi
    lines.append(f"window {lo} {hi}")
    for d in range(lo, hi + 1):
        mod = x.module_at(d)
        lines.append(f"module {d} {mod.dim}")
        lines.extend(_matrix_lines(mod.action))
    for d in range(lo, hi):
        if x.dim_at(d) > 0 and x.dim_at(d + 1) > 0:
            lines.append(f"diff {d}")
            lines.extend(_matrix_lines(x.diff_at(d).mat))
    return "\n".join(lines) + "\n"


def _matrix_lines(mat: Mat) -> list[str]:
    return [" ".join(str(v) for v in row) for row in mat.tolist()]


# -- reading -------------------------------------------------------------


class _Cursor:
    def __init__(self, text: str) -> None:
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    def next(self, what: str) -> str:
        if self.pos >= len(self.lines):
            raise InstanceError(f"unexpected end of file: expected {what}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def peek(self) -> str | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    @property
    def lineno(self) -> int:
        return self.pos  # 1-based number of the line just consumed


def _int_fields(cur: _Cursor, key: str, count: int) -> list[int]:
    line = cur.next(f"'{key}' line")
    parts = line.split(" ")
    if parts[0] != key or len(parts) != count + 1:
        raise InstanceError(f"line {cur.lineno}: expected '{key}' with {count} value(s), got {line!r}")
    try:
        return [int(v) for v in parts[1:]]
    except ValueError:
        raise InstanceError(f"line {cur.lineno}: non-integer value in {line!r}") from None


def _matrix(cur: _Cursor, rows: int, cols: int, p: int, what: str) -> Mat:
    field = PrimeField(p)
    data = np.zeros((rows, cols), dtype=np.int64)
    for r in range(rows):
        line = cur.next(f"row {r} of {what}")
        parts = line.split()
        if len(parts) != cols:
            raise InstanceError(
                f"line {cur.lineno}: {what} row has {len(parts)} entries, expected {cols}"
            )
        try:
            vals = [int(v) for v in parts]
        except ValueError:
            raise InstanceError(f"line {cur.lineno}: non-integer matrix entry in {what}") from None
        if any(not 0 <= v < p for v in vals):
            raise InstanceError(
                f"line {cur.lineno}: {what} entry out of range [0, {p})"
            )
        data[r] = vals
    return Mat(field, data)


def read_instance(text: str) -> Instance:
    cur = _Cursor(text)
    header = cur.next("header")
    if header != HEADER:
        raise InstanceError(f"line 1: expected header {HEADER!r}, got {header!r}")
    (p,) = _int_fields(cur, "p", 1)
    try:
        field = PrimeField(p)
    except ValueError as exc:
        raise InstanceError(f"invalid p: {exc}") from None
    (m,) = _int_fields(cur, "m", 1)
    if m < 1:
        raise InstanceError(f"m must be >= 1, got {m}")
    cat = CatParams(field, m)
    label: str | None = None
    seed: int | None = None
    nxt = cur.peek()
    if nxt is not None and nxt.startswith("label "):
        label = cur.next("label")[len("label ") :]
    nxt = cur.peek()
    if nxt is not None and nxt.startswith("seed "):
        (seed,) = _int_fields(cur, "seed", 1)
    lo, hi = _int_fields(cur, "window", 2)
    if lo > hi:
        raise InstanceError(f"window [{lo}, {hi}] is empty")
    modules: dict[int, Module] = {}
    for d in range(lo, hi + 1):
        deg, dim = _int_fields(cur, "module", 2)
        if deg != d:
            raise InstanceError(f"line {cur.lineno}: module blocks out of order (expected degree {d})")
        if dim < 0:
            raise InstanceError(f"line {cur.lineno}: negative dimension")
        action = _matrix(cur, dim, dim, p, f"action of degree {d}")
        try:
            modules[d] = Module(cat, action)
        except ValueError as exc:
            raise InstanceError(f"module at degree {d}: {exc}") from None
    diffs: dict[int, Hom] = {}
    for d in range(lo, hi):
        if modules[d].dim == 0 or modules[d + 1].dim == 0:
            continue
        deg = _int_fields(cur, "diff", 1)[0]
        if deg != d:
            raise InstanceError(f"line {cur.lineno}: diff blocks out of order (expected degree {d})")
        mat = _matrix(cur, modules[d + 1].dim, modules[d].dim, p, f"differential at degree {d}")
        try:
            diffs[d] = Hom(modules[d], modules[d + 1], mat)
        except ValueError as exc:
            raise InstanceError(f"differential at degree {d}: {exc}") from None
    if cur.peek() is not None:
        raise InstanceError(f"line {cur.pos + 1}: trailing content after instance")
    try:
        cplx = Complex(cat, modules, diffs)
    except ValueError as exc:
        raise InstanceError(f"complex invariant failed: {exc}") from None
    return Instance(cplx, label, seed)


# -- random generation ---------------------------------------------------


def random_module(cat: CatParams, dim: int, rng: np.random.Generator) -> Module:
    """A random module of the given dimension: a random Jordan type in a
    random basis."""
    if dim == 0:
        return Module.zero(cat)
    parts: list[int] = []
    left = dim
    while left > 0:
        t = int(rng.integers(1, min(cat.m, left) + 1))
        parts.append(t)
        left -= t
    base = jordan_module(cat, parts)
    g = _random_invertible(cat.field, dim, rng)
    g_inv = _invert(g)
    return Module(cat, g @ base.action @ g_inv, check=False)


def _random_invertible(field: PrimeField, n: int, rng: np.random.Generator) -> Mat:
    while True:
        g = Mat.make(field, rng.integers(0, field.p, size=(n, n)))
        if rank(g) == n:
            return g


def _invert(g: Mat) -> Mat:
    inv = solve(g, Mat.identity(g.field, g.rows))
    assert inv is not None
    return inv


def random_hom(
    src: Module, dst: Module, rng: np.random.Generator, constraint: Hom | None = None
) -> Hom:
    """A random R-map src -> dst, optionally with constraint @ result = 0."""
    basis = hom_space_basis(src, dst)
    if not basis:
        return Hom.zero(src, dst)
    if constraint is not None and not constraint.is_zero():
        cols = np.stack(
            [(constraint @ h).mat.a.reshape(-1) for h in basis], axis=1
        )
        kb = kernel_basis(Mat.make(src.cat.field, cols % src.cat.p))
        if kb.cols == 0:
            return Hom.zero(src, dst)
        coeffs = (
            kb @ Mat.make(src.cat.field, rng.integers(0, src.cat.p, size=(kb.cols, 1)))
        ).a.reshape(-1)
    else:
        coeffs = rng.integers(0, src.cat.p, size=len(basis))
    mat = Mat.zeros(src.cat.field, dst.dim, src.dim)
    for c, h in zip(coeffs, basis):
        if c % src.cat.p:
            mat = mat + h.mat.scale(int(c))
    return Hom(src, dst, mat, check=False)


def random_complex(
    p: int, m: int, lo: int, hi: int, maxdim: int, seed: int
) -> Instance:
    """A seeded random bounded complex with d^2 = 0 by construction.

    Differentials are composites X^i ->> M_i -> X^{i+1} through random
    middle modules, with each M_i -> X^{i+1} sampled inside the kernel
    of the next projection — so consecutive composites vanish
    identically rather than by rejection.
    """
    if lo > hi:
        raise InstanceError(f"window [{lo}, {hi}] is empty")
    if maxdim < 0:
        raise InstanceError("maxdim must be >= 0")
    field = PrimeField(p)
    cat = CatParams(field, m)
    rng = np.random.Generator(np.random.PCG64(seed))
    modules = {
        d: random_module(cat, int(rng.integers(0, maxdim + 1)), rng)
        for d in range(lo, hi + 1)
    }
    middles = {
        d: random_module(cat, int(rng.integers(0, maxdim + 1)), rng)
        for d in range(lo, hi)
    }
    pis = {d: random_hom(modules[d], middles[d], rng) for d in range(lo, hi)}
    diffs: dict[int, Hom] = {}
    for d in range(lo, hi):
        constraint = pis.get(d + 1)
        sigma = random_hom(middles[d], modules[d + 1], rng, constraint=constraint)
        diffs[d] = sigma @ pis[d]
    cplx = Complex(cat, modules, diffs)
    label = f"random-p{p}-m{m}-w{lo}..{hi}-d{maxdim}-s{seed}"
    return Instance(cplx, label, seed)
