"""Bounded cochain complexes of R-modules and their standard calculus.

A complex stores only its nonzero entries; requests outside the window
return the zero module, so complexes with the same nonzero support
compare equal.  Differentials raise degree by one.  Conventions:

* shift: X[k]^n = X^{n+k} with differential (-1)^k d^{n+k};
* truncation at t: ... 0 -> B^t(X) -> X^t -> X^{t+1} -> ..., with
  B^t(X) sitting in degree t-1, together with the collapse map from X;
* cone of f: X -> Y: cone^n = X^{n+1} (+) Y^n with differential
  [[-d_X, 0], [f, d_Y]], with the canonical maps Y -> cone -> X[1].

Homotopies witness f - g = d s + s d on the nose and are re-verified
at construction, so a Homotopy object is itself a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fpla import Mat
from .modules import (
    CatParams,
    Hom,
    Module,
    biproduct,
    cokernel,
    extend_along_mono,
    factor_through_epi,
    factor_through_mono,
    image,
    image_factorization,
    kernel,
)


class Complex:
    """A bounded cochain complex; zero entries are normalized away."""

    def __init__(
        self,
        cat: CatParams,
        modules: dict[int, Module],
        diffs: dict[int, Hom],
        check: bool = True,
    ) -> None:
        self.cat = cat
        self.modules = {n: m for n, m in modules.items() if m.dim > 0}
        self.diffs = {
            n: d
            for n, d in diffs.items()
            if n in self.modules and (n + 1) in self.modules
        }
        if self.modules:
            self.lo = min(self.modules)
            self.hi = max(self.modules)
        else:
            self.lo, self.hi = 0, -1
        if check:
            self._validate()

    def _validate(self) -> None:
        for n, mod in self.modules.items():
            if mod.cat != self.cat:
                raise ValueError(f"entry at degree {n} lives in the wrong category")
        for n, d in self.diffs.items():
            if d.src != self.modules.get(n) or d.dst != self.modules.get(n + 1):
                raise ValueError(f"differential at degree {n} has wrong endpoints")
        for n in self.diffs:
            if (n + 1) in self.diffs:
                comp = self.diffs[n + 1] @ self.diffs[n]
                if not comp.is_zero():
                    raise ValueError(f"d o d != 0 at degree {n}")

    # -- access --------------------------------------------------------

    def module_at(self, n: int) -> Module:
        return self.modules.get(n) or Module.zero(self.cat)

    def diff_at(self, n: int) -> Hom:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return Hom.zero(self.module_at(n), self.module_at(n + 1))

    def dim_at(self, n: int) -> int:
        return self.module_at(n).dim

    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def is_zero_complex(self) -> bool:
        return not self.modules

    def total_dim(self) -> int:
        return sum(m.dim for m in self.modules.values())

    @staticmethod
    def zero(cat: CatParams) -> Complex:
        return Complex(cat, {}, {}, check=False)

    @staticmethod
    def single(cat: CatParams, degree: int, mod: Module) -> Complex:
        return Complex(cat, {degree: mod}, {}, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (
            self.cat == other.cat
            and self.modules == other.modules
            and self.diffs == other.diffs
        )

    def __repr__(self) -> str:
        dims = {n: self.dim_at(n) for n in self.degrees()}
        return f"Complex(p={self.cat.p}, m={self.cat.m}, dims={dims})"


class ChainMap:
    """A degreewise R-map commuting with the differentials."""

    def __init__(
        self,
        src: Complex,
        dst: Complex,
        comps: dict[int, Hom],
        check: bool = True,
    ) -> None:
        self.src = src
        self.dst = dst
        self.comps = {n: h for n, h in comps.items() if h.mat.rows * h.mat.cols > 0}
        if check:
            self._validate()

    def _validate(self) -> None:
        for n, h in self.comps.items():
            if h.src != self.src.module_at(n) or h.dst != self.dst.module_at(n):
                raise ValueError(f"component at degree {n} has wrong endpoints")
        for n in range(
            min(self.src.lo, self.dst.lo) - 1, max(self.src.hi, self.dst.hi) + 1
        ):
            lhs = self.dst.diff_at(n) @ self.component_at(n)
            rhs = self.component_at(n + 1) @ self.src.diff_at(n)
            if lhs != rhs:
                raise ValueError(f"square at degree {n} does not commute")

    def component_at(self, n: int) -> Hom:
        h = self.comps.get(n)
        if h is not None:
            return h
        return Hom.zero(self.src.module_at(n), self.dst.module_at(n))

    @staticmethod
    def identity(x: Complex) -> ChainMap:
        return ChainMap(x, x, {n: Hom.identity(x.module_at(n)) for n in x.degrees()}, check=False)

    @staticmethod
    def zero(src: Complex, dst: Complex) -> ChainMap:
        return ChainMap(src, dst, {}, check=False)

    def __matmul__(self, other: ChainMap) -> ChainMap:
        comps = {}
        for n in set(self.comps) | set(other.comps):
            comps[n] = self.component_at(n) @ other.component_at(n)
        return ChainMap(other.src, self.dst, comps, check=False)

    def __add__(self, other: ChainMap) -> ChainMap:
        comps = {}
        for n in set(self.comps) | set(other.comps):
            comps[n] = self.component_at(n) + other.component_at(n)
        return ChainMap(self.src, self.dst, comps, check=False)

    def __sub__(self, other: ChainMap) -> ChainMap:
        comps = {}
        for n in set(self.comps) | set(other.comps):
            comps[n] = self.component_at(n) - other.component_at(n)
        return ChainMap(self.src, self.dst, comps, check=False)

    def __neg__(self) -> ChainMap:
        return ChainMap(self.src, self.dst, {n: -h for n, h in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return all(h.is_zero() for h in self.comps.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.src != other.src or self.dst != other.dst:
            return False
        degrees = set(self.comps) | set(other.comps)
        return all(self.component_at(n) == other.component_at(n) for n in degrees)

    def __repr__(self) -> str:
        return f"ChainMap({self.src!r} -> {self.dst!r})"


class Homotopy:
    """A verified witness s for f - g = d s + s d (s^n: X^n -> Y^{n-1})."""

    def __init__(self, f: ChainMap, g: ChainMap, s: dict[int, Hom], check: bool = True) -> None:
        if f.src is not g.src and f.src != g.src:
            raise ValueError("homotopy endpoints disagree (source)")
        if f.dst is not g.dst and f.dst != g.dst:
            raise ValueError("homotopy endpoints disagree (target)")
        self.f = f
        self.g = g
        self.s = {n: h for n, h in s.items() if h.mat.rows * h.mat.cols > 0}
        if check:
            self.verify()

    def component_at(self, n: int) -> Hom:
        h = self.s.get(n)
        if h is not None:
            return h
        return Hom.zero(self.f.src.module_at(n), self.f.dst.module_at(n - 1))

    def verify(self) -> None:
        """Check the homotopy identity in every relevant degree; raises."""
        x, y = self.f.src, self.f.dst
        for n in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 2):
            want = self.f.component_at(n) - self.g.component_at(n)
            got = (y.diff_at(n - 1) @ self.component_at(n)) + (
                self.component_at(n + 1) @ x.diff_at(n)
            )
            if want != got:
                raise ValueError(f"homotopy identity fails in degree {n}")


# -- cohomology ---------------------------------------------------------


@dataclass
class CohomologyData:
    """Cycles, boundaries and cohomology at one degree, with witnesses."""

    degree: int
    cycles: Module
    cycles_incl: Hom  # Z^n -> X^n
    boundaries: Module
    boundaries_incl: Hom  # B^n -> X^n
    boundaries_in_cycles: Hom  # B^n -> Z^n
    cohomology: Module
    proj: Hom  # Z^n ->> H^n


def cohomology(x: Complex, n: int) -> CohomologyData:
    z, z_incl = kernel(x.diff_at(n))
    b, b_incl = image(x.diff_at(n - 1))
    b_in_z = factor_through_mono(z_incl, b_incl)
    h, proj = cokernel(b_in_z)
    return CohomologyData(n, z, z_incl, b, b_incl, b_in_z, h, proj)


def cohomology_dims(x: Complex) -> dict[int, int]:
    return {n: cohomology(x, n).cohomology.dim for n in range(x.lo, x.hi + 1)}


def is_acyclic(x: Complex) -> bool:
    return all(d == 0 for d in cohomology_dims(x).values())


def cohomology_map(f: ChainMap, n: int) -> tuple[Hom, CohomologyData, CohomologyData]:
    """The induced map H^n(f), with the cohomology data of both sides."""
    cx = cohomology(f.src, n)
    cy = cohomology(f.dst, n)
    z_map = factor_through_mono(cy.cycles_incl, f.component_at(n) @ cx.cycles_incl)
    h_map = factor_through_epi(cx.proj, cy.proj @ z_map)
    return h_map, cx, cy


def is_quasi_iso(f: ChainMap, degrees=None) -> bool:
    if degrees is None:
        degrees = range(
            min(f.src.lo, f.dst.lo), max(f.src.hi, f.dst.hi) + 1
        )
    for n in degrees:
        h_map, _, _ = cohomology_map(f, n)
        if not h_map.is_iso():
            return False
    return True


# -- shift, truncation, cone --------------------------------------------


def shift(x: Complex, k: int) -> Complex:
    """X[k] with X[k]^n = X^{n+k} and differential (-1)^k d."""
    sign = 1 if k % 2 == 0 else -1
    modules = {n - k: m for n, m in x.modules.items()}
    diffs = {
        n - k: (d if sign == 1 else -d) for n, d in x.diffs.items()
    }
    return Complex(x.cat, modules, diffs, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(
        shift(f.src, k),
        shift(f.dst, k),
        {n - k: h for n, h in f.comps.items()},
        check=False,
    )


def truncate_geq(x: Complex, t: int) -> tuple[Complex, ChainMap]:
    """The truncation ... 0 -> B^t -> X^t -> ... and the collapse X -> it.

    For t <= lo the truncation is X itself with the identity map.  The
    boundary module B^t(X) sits in degree t-1; the collapse map is the
    epi part of d^{t-1} there, the identity in degrees >= t, and zero
    below.
    """
    if t <= x.lo or x.is_zero_complex():
        return x, ChainMap.identity(x)
    bmod, b_incl, b_onto = image_factorization(x.diff_at(t - 1))
    modules = {n: m for n, m in x.modules.items() if n >= t}
    modules[t - 1] = bmod
    diffs = {n: d for n, d in x.diffs.items() if n >= t}
    diffs[t - 1] = b_incl
    trunc = Complex(x.cat, modules, diffs, check=False)
    comps: dict[int, Hom] = {t - 1: b_onto}
    for n in x.degrees():
        if n >= t:
            comps[n] = Hom.identity(x.module_at(n))
    return trunc, ChainMap(x, trunc, comps)


def mapping_cone(f: ChainMap) -> tuple[Complex, ChainMap, ChainMap]:
    """cone(f) with the canonical maps Y -> cone(f) -> X[1]."""
    x, y = f.src, f.dst
    cat = x.cat
    modules: dict[int, Module] = {}
    injs: dict[int, tuple[Hom, Hom]] = {}
    projs: dict[int, tuple[Hom, Hom]] = {}
    degrees = range(min(x.lo - 1, y.lo), max(x.hi - 1, y.hi) + 1)
    for n in degrees:
        xi = x.module_at(n + 1)
        yi = y.module_at(n)
        total, (inj_x, inj_y), (proj_x, proj_y) = _biprod2(xi, yi)
        modules[n] = total
        injs[n] = (inj_x, inj_y)
        projs[n] = (proj_x, proj_y)
    diffs: dict[int, Hom] = {}
    for n in degrees:
        if n + 1 not in modules:
            continue
        ix1, iy1 = injs[n + 1]
        px, py = projs[n]
        d = (
            ix1 @ (-x.diff_at(n + 1)) @ px
            + iy1 @ f.component_at(n + 1) @ px
            + iy1 @ y.diff_at(n) @ py
        )
        diffs[n] = d
    cone = Complex(cat, modules, diffs, check=False)
    from_y = ChainMap(
        y, cone, {n: injs[n][1] for n in modules if y.dim_at(n) > 0}, check=False
    )
    sx = shift(x, 1)
    to_shift_x = ChainMap(
        cone,
        sx,
        {n: projs[n][0] for n in modules if x.dim_at(n + 1) > 0},
        check=False,
    )
    return cone, from_y, to_shift_x


def _biprod2(a: Module, b: Module) -> tuple[Module, tuple[Hom, Hom], tuple[Hom, Hom]]:
    total, injs, projs = biproduct([a, b])
    return total, (injs[0], injs[1]), (projs[0], projs[1])


# -- products -------------------------------------------------------------


def biproduct_complexes(xs: list[Complex]) -> tuple[Complex, list[ChainMap], list[ChainMap]]:
    """Degreewise direct sum with its injections and projections.

    For bounded complexes the degreewise product and coproduct agree,
    so this is also the product used by limit presentations.
    """
    if not xs:
        raise ValueError("empty product (pass the zero complex)")
    cat = xs[0].cat
    degrees = sorted({n for x in xs for n in x.degrees()})
    modules: dict[int, Module] = {}
    injs: list[dict[int, Hom]] = [dict() for _ in xs]
    projs: list[dict[int, Hom]] = [dict() for _ in xs]
    for n in degrees:
        mods = [x.module_at(n) for x in xs]
        total, inj_list, proj_list = biproduct(mods)
        modules[n] = total
        for k in range(len(xs)):
            injs[k][n] = inj_list[k]
            projs[k][n] = proj_list[k]
    diffs: dict[int, Hom] = {}
    for n in degrees:
        if (n + 1) not in modules:
            continue
        d = None
        for k, x in enumerate(xs):
            term = injs[k][n + 1] @ x.diff_at(n) @ projs[k][n]
            d = term if d is None else d + term
        diffs[n] = d
    total_cplx = Complex(cat, modules, diffs, check=False)
    inj_maps = [
        ChainMap(x, total_cplx, {n: injs[k][n] for n in x.degrees()}, check=False)
        for k, x in enumerate(xs)
    ]
    proj_maps = [
        ChainMap(total_cplx, x, {n: projs[k][n] for n in x.degrees()}, check=False)
        for k, x in enumerate(xs)
    ]
    return total_cplx, inj_maps, proj_maps


def product_of_complexes(xs: list[Complex]) -> Complex:
    return biproduct_complexes(xs)[0]


# -- homotopies -----------------------------------------------------------


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """Solve the homotopy equation f - g = d s + s d globally.

    The unknowns are the entries of every s^n: X^n -> Y^{n-1}
    (vectorized row-major), constrained by R-linearity of each s^n and
    by the homotopy identity in each degree.  Returns the canonical
    solution or None.
    """
    x, y = f.src, f.dst
    cat = x.cat
    fld = cat.field
    s_degrees = [
        n
        for n in range(min(x.lo, y.lo), max(x.hi, y.hi) + 2)
        if x.dim_at(n) > 0 and y.dim_at(n - 1) > 0
    ]
    offsets: dict[int, int] = {}
    total = 0
    for n in s_degrees:
        offsets[n] = total
        total += x.dim_at(n) * y.dim_at(n - 1)
    rows: list[np.ndarray] = []
    rhs: list[np.ndarray] = []
    p = cat.p

    def add_row_block(mat_rows: int, pieces: dict[int, np.ndarray], rhs_block: np.ndarray):
        block = np.zeros((mat_rows, total), dtype=np.int64)
        for n, m in pieces.items():
            off = offsets[n]
            block[:, off : off + m.shape[1]] = m
        rows.append(block)
        rhs.append(rhs_block.reshape(-1, 1))

    # homotopy identity per degree
    for n in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1):
        rdim, cdim = y.dim_at(n), x.dim_at(n)
        if rdim * cdim == 0:
            continue
        pieces: dict[int, np.ndarray] = {}
        if n in offsets:
            m = np.kron(y.diff_at(n - 1).mat.a, np.eye(cdim, dtype=np.int64))
            pieces[n] = np.mod(m, p)
        if (n + 1) in offsets:
            m = np.kron(np.eye(rdim, dtype=np.int64), x.diff_at(n).mat.a.T)
            pieces[n + 1] = np.mod(pieces.get(n + 1, 0) + m, p)
        target = (f.component_at(n) - g.component_at(n)).mat.a
        add_row_block(rdim * cdim, pieces, target)
    # R-linearity of each s^n
    for n in s_degrees:
        rdim, cdim = y.dim_at(n - 1), x.dim_at(n)
        lin = np.kron(
            np.eye(rdim, dtype=np.int64), x.module_at(n).action.a.T
        ) - np.kron(y.module_at(n - 1).action.a, np.eye(cdim, dtype=np.int64))
        add_row_block(rdim * cdim, {n: np.mod(lin, p)}, np.zeros(rdim * cdim, dtype=np.int64))

    if not rows:
        # no possible nonzero s: f - g must vanish identically
        diff = f - g
        return Homotopy(f, g, {}) if diff.is_zero() else None
    from .fpla import solve as _solve

    big = Mat.make(fld, np.vstack(rows))
    b = Mat.make(fld, np.vstack(rhs))
    sol = _solve(big, b)
    if sol is None:
        return None
    s: dict[int, Hom] = {}
    for n in s_degrees:
        rdim, cdim = y.dim_at(n - 1), x.dim_at(n)
        off = offsets[n]
        block = sol.a[off : off + rdim * cdim, 0].reshape(rdim, cdim)
        s[n] = Hom(x.module_at(n), y.module_at(n - 1), Mat.make(fld, block), check=False)
    return Homotopy(f, g, s)


def is_contractible(x: Complex) -> bool:
    ident = ChainMap.identity(x)
    return find_homotopy(ident, ChainMap.zero(x, x)) is not None


def null_homotopy_into_injectives(f: ChainMap, check_acyclic: bool = True) -> Homotopy:
    """Contract a chain map from an acyclic complex into injective entries.

    Degreewise induction: with s built below degree n, the defect
    f^n - d s^n kills cycles (using acyclicity of the source), hence
    factors through the boundaries B^{n+1}, and an injective extension
    along B^{n+1} -> N^{n+1} produces s^{n+1}.  The result is verified
    by the Homotopy constructor.
    """
    n_cplx, i_cplx = f.src, f.dst
    if check_acyclic and not is_acyclic(n_cplx):
        raise ValueError("source complex is not acyclic")
    s: dict[int, Hom] = {}
    for n in range(n_cplx.lo, n_cplx.hi + 1):
        sn = s.get(n) or Hom.zero(n_cplx.module_at(n), i_cplx.module_at(n - 1))
        theta = f.component_at(n) - (i_cplx.diff_at(n - 1) @ sn)
        if theta.is_zero():
            continue
        bmod, b_incl, b_onto = image_factorization(n_cplx.diff_at(n))
        theta_on_b = factor_through_epi(b_onto, theta)
        s[n + 1] = extend_along_mono(b_incl, theta_on_b)
    return Homotopy(f, ChainMap.zero(n_cplx, i_cplx), s)
