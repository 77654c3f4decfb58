"""Finite-dimensional modules over R = F_p[x]/(x^m).

A module is a finite-dimensional F_p vector space together with the
matrix by which x acts; the only constraint is m-step nilpotency.  All
categorical constructions (kernels, images, cokernels, biproducts) pick
canonical bases through the row-reduction conventions of
:mod:`cecert.fpla`, so every operation is deterministic.

R is self-injective: a module is injective iff it is free iff every
Jordan block of the x-action has size exactly m.  Injective hulls,
extensions along monomorphisms, and hom spaces into free modules are
all computed through the resulting duality: an R-linear map A -> R is
the same as a plain linear functional on A (the coefficient of x^(m-1)),
which turns extension problems into small ordinary linear solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fpla import (
    Mat,
    PrimeField,
    block_diag,
    hstack,
    image_basis,
    kernel_basis,
    rank,
    solve,
)


@dataclass(frozen=True)
class CatParams:
    """Ambient category parameters: the prime p and the ring exponent m."""

    field: PrimeField
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"ring exponent must be a positive int, got {self.m!r}")

    @property
    def p(self) -> int:
        return self.field.p


@dataclass(frozen=True, eq=False)
class Module:
    """A finite-dimensional R-module: a vector space with nilpotent x-action."""

    cat: CatParams
    action: Mat

    def __init__(self, cat: CatParams, action: Mat, check: bool = True) -> None:
        object.__setattr__(self, "cat", cat)
        object.__setattr__(self, "action", action)
        if action.rows != action.cols:
            raise ValueError("action matrix must be square")
        if action.field.p != cat.p:
            raise ValueError("action matrix over the wrong field")
        if check and not _power(action, cat.m).is_zero():
            raise ValueError(f"action is not {cat.m}-step nilpotent")

    @property
    def dim(self) -> int:
        return self.action.rows

    @staticmethod
    def zero(cat: CatParams) -> Module:
        return Module(cat, Mat.zeros(cat.field, 0, 0))

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Module):
            return NotImplemented
        return self.cat == other.cat and self.action == other.action

    def __repr__(self) -> str:
        return f"Module(p={self.cat.p}, m={self.cat.m}, dim={self.dim})"


def _power(m: Mat, k: int) -> Mat:
    out = Mat.identity(m.field, m.rows)
    for _ in range(k):
        out = out @ m
    return out


@dataclass(frozen=True, eq=False)
class Hom:
    """An R-linear map, stored as its matrix (dst.dim x src.dim)."""

    src: Module
    dst: Module
    mat: Mat

    def __init__(self, src: Module, dst: Module, mat: Mat, check: bool = True) -> None:
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "mat", mat)
        if mat.rows != dst.dim or mat.cols != src.dim:
            raise ValueError(
                f"matrix is {mat.rows}x{mat.cols}, expected {dst.dim}x{src.dim}"
            )
        if check and (mat @ src.action) != (dst.action @ mat):
            raise ValueError("matrix does not commute with the x-action")

    @staticmethod
    def zero(src: Module, dst: Module) -> Hom:
        return Hom(src, dst, Mat.zeros(src.cat.field, dst.dim, src.dim), check=False)

    @staticmethod
    def identity(m: Module) -> Hom:
        return Hom(m, m, Mat.identity(m.cat.field, m.dim), check=False)

    def __matmul__(self, other: Hom) -> Hom:
        """Composition self o other."""
        if other.dst is not self.src and other.dst != self.src:
            raise ValueError("composition mismatch")
        return Hom(other.src, self.dst, self.mat @ other.mat, check=False)

    def __add__(self, other: Hom) -> Hom:
        return Hom(self.src, self.dst, self.mat + other.mat, check=False)

    def __sub__(self, other: Hom) -> Hom:
        return Hom(self.src, self.dst, self.mat - other.mat, check=False)

    def __neg__(self) -> Hom:
        return Hom(self.src, self.dst, -self.mat, check=False)

    def scale(self, c: int) -> Hom:
        return Hom(self.src, self.dst, self.mat.scale(c), check=False)

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def is_mono(self) -> bool:
        return rank(self.mat) == self.src.dim

    def is_epi(self) -> bool:
        return rank(self.mat) == self.dst.dim

    def is_iso(self) -> bool:
        return self.src.dim == self.dst.dim and rank(self.mat) == self.src.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hom):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.mat == other.mat

    def __repr__(self) -> str:
        return f"Hom({self.src!r} -> {self.dst!r})"


# -- kernels, images, cokernels ----------------------------------------


def kernel(f: Hom) -> tuple[Module, Hom]:
    """Kernel submodule with its canonical inclusion."""
    kb = kernel_basis(f.mat)
    act = solve(kb, f.src.action @ kb)
    assert act is not None, "kernel is not action-stable (broken Hom)"
    k = Module(f.src.cat, act, check=False)
    return k, Hom(k, f.src, kb, check=False)


def image(f: Hom) -> tuple[Module, Hom]:
    """Image submodule of the target with its canonical inclusion."""
    ib = image_basis(f.mat)
    act = solve(ib, f.dst.action @ ib)
    assert act is not None, "image is not action-stable (broken Hom)"
    i = Module(f.dst.cat, act, check=False)
    return i, Hom(i, f.dst, ib, check=False)


def image_factorization(f: Hom) -> tuple[Module, Hom, Hom]:
    """Image with inclusion and the epi part: f = incl @ onto."""
    i, incl = image(f)
    onto_mat = solve(incl.mat, f.mat)
    assert onto_mat is not None
    return i, incl, Hom(f.src, i, onto_mat, check=False)


def cokernel(f: Hom) -> tuple[Module, Hom]:
    """Cokernel with its canonical projection.

    Coordinates on the cokernel are the non-pivot coordinates of the
    image (pivots taken from the reduced basis of the column space), so
    the projection matrix consists of unit rows minus image corrections.
    """
    ib = image_basis(f.mat)
    d = f.dst.dim
    r = ib.cols
    from .fpla import rref

    _, pivots = rref(ib.T)  # pivot coordinates of the image basis
    free = [i for i in range(d) if i not in set(pivots)]
    fld = f.src.cat.field
    sel_free = np.zeros((len(free), d), dtype=np.int64)
    for i, fr in enumerate(free):
        sel_free[i, fr] = 1
    sel_piv = np.zeros((r, d), dtype=np.int64)
    for i, pv in enumerate(pivots):
        sel_piv[i, pv] = 1
    proj_mat = Mat.make(fld, sel_free) @ (
        Mat.identity(fld, d) - ib @ Mat.make(fld, sel_piv)
    )
    act = factor_matrix_through_epi(proj_mat, proj_mat @ f.dst.action)
    c = Module(f.dst.cat, act, check=False)
    return c, Hom(f.dst, c, proj_mat, check=False)


def factor_matrix_through_epi(e: Mat, g: Mat) -> Mat:
    """The unique matrix h with h @ e = g (requires e of full row rank)."""
    ht = solve(e.T, g.T)
    if ht is None:
        raise ValueError("no factorization through the quotient")
    return ht.T


def factor_through_epi(e: Hom, g: Hom) -> Hom:
    """Unique h with h o e = g; exists iff g kills the kernel of e."""
    h = factor_matrix_through_epi(e.mat, g.mat)
    return Hom(e.dst, g.dst, h)


def factor_through_mono(i: Hom, g: Hom) -> Hom:
    """Unique h with i o h = g; exists iff g lands in the image of i."""
    h = solve(i.mat, g.mat)
    if h is None:
        raise ValueError("map does not land in the submodule")
    return Hom(g.src, i.src, h)


def biproduct(mods: list[Module]) -> tuple[Module, list[Hom], list[Hom]]:
    """Direct sum with canonical injections and projections."""
    if not mods:
        raise ValueError("biproduct of an empty list (pass the zero module)")
    cat = mods[0].cat
    total = Module(cat, block_diag(cat.field, [m.action for m in mods]), check=False)
    injs: list[Hom] = []
    projs: list[Hom] = []
    off = 0
    for m in mods:
        inj = np.zeros((total.dim, m.dim), dtype=np.int64)
        inj[off : off + m.dim, :] = np.eye(m.dim, dtype=np.int64)
        injs.append(Hom(m, total, Mat.make(cat.field, inj), check=False))
        projs.append(Hom(total, m, Mat.make(cat.field, inj.T.copy()), check=False))
        off += m.dim
    return total, injs, projs


# -- Jordan structure ---------------------------------------------------


@dataclass(frozen=True)
class JordanType:
    """Partition of dim: sizes of the x-action Jordan blocks, descending."""

    parts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(self.parts)


def jordan_type(mod: Module) -> JordanType:
    """Block sizes from the rank sequence of action powers.

    The number of blocks of size >= s is rank(A^(s-1)) - rank(A^s), so
    the count of size exactly s is r_{s-1} - 2 r_s + r_{s+1}.
    """
    m = mod.cat.m
    ranks = [mod.dim]
    power = Mat.identity(mod.cat.field, mod.dim)
    for _ in range(m + 1):
        power = power @ mod.action
        ranks.append(rank(power))
    parts: list[int] = []
    for s in range(m, 0, -1):
        count = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        parts.extend([s] * count)
    return JordanType(tuple(parts))


def jordan_chain_basis(mod: Module) -> tuple[list[tuple[Mat, int]], Mat]:
    """Deterministic Jordan chain decomposition.

    Returns (chains, P) where chains is a list of (top vector, height)
    ordered by descending height, and P is the change-of-basis matrix
    whose column block for a chain of height t is
    (v, Av, ..., A^{t-1} v).  In those coordinates the action is a
    direct sum of nilpotent Jordan blocks.

    Construction: walk heights downward; at height t, the already-chosen
    chains contribute their height-t elements, which together with a
    basis of ker(A^{t-1}) are extended to a basis of ker(A^t) by greedy
    column selection.  Extension vectors are the new chain tops.
    """
    A = mod.action
    fld = mod.cat.field
    d = mod.dim
    if d == 0:
        return [], Mat.zeros(fld, 0, 0)
    powers = [Mat.identity(fld, d)]
    for _ in range(mod.cat.m):
        powers.append(powers[-1] @ A)
    # smallest h with A^h = 0 (guaranteed h <= m)
    h = 1
    while not powers[h].is_zero():
        h += 1

    chains: list[tuple[Mat, int]] = []
    for t in range(h, 0, -1):
        fixed_cols: list[Mat] = []
        if t >= 2:
            fixed_cols.append(kernel_basis(powers[t - 1]))
        for top, ht in chains:
            fixed_cols.append(powers[ht - t] @ top)
        kt = kernel_basis(powers[t]) if t < h else Mat.identity(fld, d)
        stacked = hstack(fixed_cols + [kt]) if fixed_cols else kt
        from .fpla import rref as _rref

        _, pivots = _rref(stacked)
        n_fixed = sum(c.cols for c in fixed_cols)
        for pc in pivots:
            if pc >= n_fixed:
                j = pc - n_fixed
                chains.append((Mat(fld, kt.a[:, j : j + 1].copy()), t))
    blocks = [hstack([powers[i] @ top for i in range(ht)]) for top, ht in chains]
    P = hstack(blocks) if blocks else Mat.zeros(fld, d, 0)
    return chains, P


# -- injectives ---------------------------------------------------------


def free_module(cat: CatParams, blocks: int) -> Module:
    """R^blocks with basis (e_k, x e_k, ..., x^{m-1} e_k) per block."""
    j = np.zeros((cat.m, cat.m), dtype=np.int64)
    for i in range(cat.m - 1):
        j[i + 1, i] = 1
    jm = Mat.make(cat.field, j)
    return Module(cat, block_diag(cat.field, [jm] * blocks), check=False)


def jordan_module(cat: CatParams, parts: tuple[int, ...] | list[int]) -> Module:
    """The module with the given Jordan block sizes, in chain coordinates."""
    if any(not 1 <= t <= cat.m for t in parts):
        raise ValueError(f"block sizes must lie in 1..{cat.m}")
    blocks = []
    for t in parts:
        j = np.zeros((t, t), dtype=np.int64)
        for i in range(t - 1):
            j[i + 1, i] = 1
        blocks.append(Mat.make(cat.field, j))
    if not blocks:
        return Module.zero(cat)
    return Module(cat, block_diag(cat.field, blocks), check=False)


def is_injective(mod: Module) -> bool:
    """Injective = free: every Jordan block has size exactly m."""
    jt = jordan_type(mod)
    return all(part == mod.cat.m for part in jt.parts)


def injective_hull(mod: Module) -> tuple[Module, Hom]:
    """The hull Q^b with its essential embedding.

    Each Jordan chain (v, ..., A^{t-1} v) embeds in one copy of
    Q = R as (x^{m-t} e, ..., x^{m-1} e); the embedding hits the whole
    socle of Q^b, which is what makes the extension essential.
    """
    cat = mod.cat
    chains, P = jordan_chain_basis(mod)
    b = len(chains)
    hull = free_module(cat, b)
    emb_chain = np.zeros((b * cat.m, mod.dim), dtype=np.int64)
    col = 0
    for k, (_, t) in enumerate(chains):
        for i in range(t):
            emb_chain[k * cat.m + (cat.m - t + i), col + i] = 1
        col += t
    if mod.dim == 0:
        return hull, Hom(mod, hull, Mat.zeros(cat.field, 0, 0), check=False)
    p_inv = solve(P, Mat.identity(cat.field, mod.dim))
    assert p_inv is not None, "jordan basis not invertible"
    return hull, Hom(mod, hull, Mat.make(cat.field, emb_chain) @ p_inv)


@dataclass(frozen=True)
class FreeDecomposition:
    """An explicit isomorphism of an injective module with Q^blocks."""

    blocks: int
    to_free: Hom
    from_free: Hom


def free_decomposition(mod: Module) -> FreeDecomposition:
    """Isomorphism with Q^b; raises on a non-injective module."""
    if not is_injective(mod):
        raise ValueError("module is not injective/free")
    hull, emb = injective_hull(mod)
    # same dimension + mono => iso
    inv = solve(emb.mat, Mat.identity(mod.cat.field, hull.dim))
    assert inv is not None
    return FreeDecomposition(
        hull.dim // mod.cat.m if mod.cat.m else 0,
        emb,
        Hom(hull, mod, inv, check=False),
    )


# -- duality: R-maps into free modules as plain functionals -------------


def functional_of_hom(f: Hom) -> Mat:
    """Top-coefficient functional of an R-map A -> Q (a 1 x dimA row).

    For g: A -> R write g(a) = sum_j g_j(a) x^j; R-linearity forces
    g_j(a) = phi(x^{m-1-j} a) with phi = g_{m-1}.  The functional phi
    determines g, and the assignment is a bijection.
    """
    m = f.src.cat.m
    if f.dst.dim != m:
        raise ValueError("target is not a single copy of Q")
    return Mat(f.mat.field, f.mat.a[m - 1 : m, :].copy())


def hom_from_functional(src: Module, phi: Mat) -> Hom:
    """Inverse of :func:`functional_of_hom`."""
    cat = src.cat
    q = free_module(cat, 1)
    # row j is phi @ action^{m-1-j}
    pws = [Mat.identity(cat.field, src.dim)]
    for _ in range(cat.m - 1):
        pws.append(pws[-1] @ src.action)
    mat = vstack_rows([phi @ pws[cat.m - 1 - j] for j in range(cat.m)])
    return Hom(src, q, mat, check=False)


def vstack_rows(rows: list[Mat]) -> Mat:
    from .fpla import vstack

    return vstack(rows)


def hom_space_basis(src: Module, dst: Module) -> list[Hom]:
    """A basis of Hom_R(src, dst) as an F_p vector space.

    Solves the commutation constraint X A_src = A_dst X with X
    vectorized row-major; the basis order is the canonical kernel-basis
    order of that linear system.
    """
    fld = src.cat.field
    r, c = dst.dim, src.dim
    if r * c == 0:
        return []
    lhs = np.kron(np.eye(r, dtype=np.int64), src.action.a.T) - np.kron(
        dst.action.a, np.eye(c, dtype=np.int64)
    )
    kb = kernel_basis(Mat.make(fld, np.mod(lhs, fld.p)))
    out = []
    for k in range(kb.cols):
        x = Mat.make(fld, kb.a[:, k].reshape(r, c))
        out.append(Hom(src, dst, x, check=False))
    return out


def extend_along_mono(i: Hom, f: Hom) -> Hom:
    """Solve g o i = f for g when the target of f is injective.

    i : A' -> A must be mono and f : A' -> I must land in an injective
    module; then an extension g : A -> I exists and the returned one is
    canonical.  For injective targets the problem splits into one
    functional solve per free block of I.  A generic (Kronecker system)
    fallback handles non-injective targets, raising if no solution
    exists -- which signals a violated precondition.
    """
    a_prime, a, tgt = i.src, i.dst, f.dst
    if f.src != a_prime:
        raise ValueError("maps do not share a source")
    if tgt.is_zero():
        return Hom.zero(a, tgt)
    if is_injective(tgt):
        fd = free_decomposition(tgt)
        cat = tgt.cat
        tf = fd.to_free @ f
        pws = [Mat.identity(cat.field, a.dim)]
        for _ in range(cat.m - 1):
            pws.append(pws[-1] @ a.action)
        rows = []
        it = i.mat.T
        for c in range(fd.blocks):
            phi = Mat(tf.mat.field, tf.mat.a[c * cat.m + cat.m - 1 : c * cat.m + cat.m, :].copy())
            psi_t = solve(it, phi.T)
            if psi_t is None:
                raise ValueError("cannot extend: the given map is not mono")
            psi = psi_t.T
            for j in range(cat.m):
                rows.append(psi @ pws[cat.m - 1 - j])
        g_free = Hom(a, free_module(cat, fd.blocks), vstack_rows(rows), check=False)
        return fd.from_free @ g_free
    basis = hom_space_basis(a, tgt)
    if not basis:
        if f.is_zero():
            return Hom.zero(a, tgt)
        raise ValueError("no extension exists")
    cols = hstack([Mat.make(f.mat.field, (h.mat @ i.mat).a.reshape(-1, 1)) for h in basis])
    rhs = Mat.make(f.mat.field, f.mat.a.reshape(-1, 1))
    lam = solve(cols, rhs)
    if lam is None:
        raise ValueError("no extension exists (target not injective enough)")
    g = Mat.zeros(f.mat.field, tgt.dim, a.dim)
    for k, h in enumerate(basis):
        g = g + h.mat.scale(int(lam.a[k, 0]))
    return Hom(a, tgt, g)


# -- minimal injective resolutions --------------------------------------


@dataclass
class Resolution:
    """An injective resolution 0 -> M -> E^0 -> E^1 -> ...

    ``objects[j]`` is E^j, ``diffs[j]`` maps E^j -> E^{j+1}, ``aug`` is
    the augmentation M -> E^0.  The syzygy data is kept: ``kers[j]`` is
    the j-th kernel module K_j (K_0 = M), ``embs[j]`` its embedding into
    E^j and ``projs[j]`` the projection E^j ->> K_{j+1}, so that
    diffs[j] = embs[j+1] o projs[j].
    """

    module: Module
    objects: list[Module]
    diffs: list[Hom]
    aug: Hom
    kers: list[Module] = field(default_factory=list)
    embs: list[Hom] = field(default_factory=list)
    projs: list[Hom] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.objects) - 1


def min_injective_resolution(mod: Module, depth: int) -> Resolution:
    """Iterated injective hulls of successive cokernels, up to E^depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    kers = [mod]
    objects: list[Module] = []
    embs: list[Hom] = []
    projs: list[Hom] = []
    diffs: list[Hom] = []
    current = mod
    for j in range(depth + 1):
        e, emb = injective_hull(current)
        objects.append(e)
        embs.append(emb)
        if j > 0:
            diffs.append(emb @ projs[j - 1])
        nxt, proj = cokernel(emb)
        projs.append(proj)
        kers.append(nxt)
        current = nxt
    return Resolution(
        module=mod,
        objects=objects,
        diffs=diffs,
        aug=embs[0],
        kers=kers,
        embs=embs,
        projs=projs,
    )
