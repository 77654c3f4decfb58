"""Cofiltration certificates, hom-vanishing tests, and derived hom.

A bounded complex Y with free (= injective) entries is deconstructible
from shifted copies of Q = R in a strong, checkable sense: peeling off
the top nonzero degree one step at a time gives a finite chain of
degreewise-split quotients of Y whose successive kernels are
single-degree complexes Q^b[s].  ``certify_cofiltered`` produces that
data and ``verify_certificate`` re-checks every claim from scratch.

The payoff is hom-vanishing: every chain map from a bounded acyclic
complex into such a Y is null-homotopic.  ``hom_vanishing_test``
samples the chain-map space exactly (every chain map arises from the
bottom-up solver) and produces a verified contracting homotopy for
each sample.

``derived_hom`` computes hyper-Ext against the cototalized resolution:
Hom_R(M, Cot E) collapses to an ordinary complex of F_p vector spaces
in top-functional coordinates, and its cohomology reads off
Ext^n(M, X).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ce import CEData, cototalize
from .complexes import (
    ChainMap,
    Complex,
    cohomology,
    is_acyclic,
    null_homotopy_into_injectives,
)
from .fpla import Mat, kernel_basis, solve
from .modules import (
    CatParams,
    Hom,
    Module,
    free_decomposition,
    free_module,
    is_injective,
    kernel,
)
from .report import CheckReport


# -- free-module coordinates --------------------------------------------


def free_rank(mod: Module) -> int:
    """Number of Q-summands of a module in canonical free coordinates.

    Raises when the action is not literally the block layout produced
    by :func:`free_module` (direct sums of resolution entries always
    are).
    """
    cat = mod.cat
    if mod.dim % cat.m != 0:
        raise ValueError("dimension not divisible by m: not free")
    b = mod.dim // cat.m
    if mod.action != free_module(cat, b).action:
        raise ValueError("module is not in canonical free coordinates")
    return b


def poly_matrix(h: Hom) -> list[Mat]:
    """An R-map Q^a -> Q^b as coefficient matrices U_0..U_{m-1}.

    h(e_c) = sum_k (sum_t U_t[k, c] x^t) e_k; the coefficients sit at
    rows k*m + t of the generator columns c*m.
    """
    m = h.src.cat.m
    fld = h.mat.field
    return [
        Mat(fld, h.mat.a[t::m, ::m].copy()) for t in range(m)
    ]


def functional_matrix(f: Hom) -> Mat:
    """Top-coefficient functionals of f: A -> Q^b (a b x dimA matrix)."""
    m = f.src.cat.m
    return Mat(f.mat.field, f.mat.a[m - 1 :: m, :].copy())


def hom_from_functionals(src: Module, dst: Module, phi: Mat) -> Hom:
    """Rebuild the R-map A -> Q^b with the given functional rows."""
    cat = src.cat
    pws = [Mat.identity(cat.field, src.dim)]
    for _ in range(cat.m - 1):
        pws.append(pws[-1] @ src.action)
    rows = np.empty((phi.rows * cat.m, src.dim), dtype=np.int64)
    for j in range(cat.m):
        rows[j :: cat.m, :] = (phi @ pws[cat.m - 1 - j]).a
    return Hom(src, dst, Mat(cat.field, rows), check=False)


# -- cofiltration certificates ------------------------------------------


@dataclass
class KernelPiece:
    """One peeled layer: the kernel of stage n -> stage n-1.

    The kernel is the single-degree complex on ``module`` (the top
    entry of stage n), identified with Q^blocks by the stored
    isomorphism pair.
    """

    index: int
    degree: int
    module: Module
    blocks: int
    to_free: Hom
    from_free: Hom


@dataclass
class CofiltrationCertificate:
    """A degreewise-split chain Y = stage_K -> ... -> stage_0 -> 0.

    Links kill the top nonzero degree; sections are the degreewise
    inclusions.  Kernel pieces (including stage_0 itself, the kernel of
    stage_0 -> 0) are single-degree free complexes.
    """

    target: Complex
    stages: list[Complex]
    links: list[ChainMap]
    sections: list[dict[int, Hom]]
    pieces: list[KernelPiece]

    @property
    def steps(self) -> int:
        return len(self.links)


def certify_cofiltered(y: Complex) -> CofiltrationCertificate:
    """Peel a bounded free-entried complex into single-degree layers."""
    cat = y.cat
    for d in y.degrees():
        if not is_injective(y.module_at(d)):
            raise ValueError(f"entry in degree {d} is not injective")
    ds = y.degrees()
    if not ds:
        return CofiltrationCertificate(y, [], [], [], [])
    stages: list[Complex] = []
    for n in range(len(ds)):
        top = ds[n]
        mods = {d: y.module_at(d) for d in ds if d <= top}
        diffs = {d: y.diff_at(d) for d in ds if d < top and (d + 1) in mods}
        stages.append(Complex(cat, mods, diffs, check=False))
    links: list[ChainMap] = []
    sections: list[dict[int, Hom]] = []
    for n in range(len(ds) - 1):
        src, dst = stages[n + 1], stages[n]
        comps = {d: Hom.identity(dst.module_at(d)) for d in dst.degrees()}
        links.append(ChainMap(src, dst, comps))
        sections.append(dict(comps))
    pieces: list[KernelPiece] = []
    for n, d in enumerate(ds):
        mod = y.module_at(d)
        dec = free_decomposition(mod)
        pieces.append(KernelPiece(n, d, mod, dec.blocks, dec.to_free, dec.from_free))
    return CofiltrationCertificate(y, stages, links, sections, pieces)


def verify_certificate(cert: CofiltrationCertificate) -> CheckReport:
    """Re-check a cofiltration certificate from first principles."""
    rep = CheckReport()
    y = cert.target
    if not cert.stages:
        rep.add("empty-certificate-matches-zero-complex", y.is_zero_complex())
        return rep
    rep.add("top-stage-reconstructs-target", cert.stages[-1] == y)
    rep.add(
        "entries-injective",
        all(is_injective(y.module_at(d)) for d in y.degrees()),
    )
    rep.add(
        "stage-count",
        len(cert.stages) == len(y.degrees())
        and len(cert.links) == len(cert.stages) - 1
        and len(cert.pieces) == len(cert.stages),
    )
    for n, link in enumerate(cert.links):
        src, dst = cert.stages[n + 1], cert.stages[n]
        ok_split = all(
            (link.component_at(d) @ cert.sections[n].get(d, Hom.zero(dst.module_at(d), src.module_at(d))))
            == Hom.identity(dst.module_at(d))
            for d in dst.degrees()
        )
        rep.add(f"link-{n}-split-epi", ok_split)
        piece = cert.pieces[n + 1]
        ok_conc = True
        for d in src.degrees():
            k_mod, _ = kernel(link.component_at(d))
            want = piece.module.dim if d == piece.degree else 0
            if k_mod.dim != want:
                ok_conc = False
        rep.add(f"link-{n}-kernel-concentrated", ok_conc, f"degree {piece.degree}")
    stage0 = cert.stages[0]
    rep.add(
        "bottom-stage-single-degree",
        stage0.degrees() == [cert.pieces[0].degree] and not stage0.diffs,
    )
    ok_pieces = True
    detail = ""
    for piece in cert.pieces:
        q_b = free_module(y.cat, piece.blocks)
        to_f = Hom(piece.module, q_b, piece.to_free.mat)  # re-validated R-map
        from_f = Hom(q_b, piece.module, piece.from_free.mat)
        if piece.module != y.module_at(piece.degree):
            ok_pieces, detail = False, f"piece {piece.index}: wrong module"
            break
        if (to_f @ from_f) != Hom.identity(q_b) or (from_f @ to_f) != Hom.identity(piece.module):
            ok_pieces, detail = False, f"piece {piece.index}: not an isomorphism"
            break
    rep.add("pieces-free-isos", ok_pieces, detail)
    rep.add(
        "pieces-account-for-target",
        sum(p.blocks * y.cat.m for p in cert.pieces) == y.total_dim(),
    )
    return rep


# -- hom vanishing -------------------------------------------------------


def sample_chain_map(
    src: Complex, dst: Complex, rng: np.random.Generator
) -> ChainMap:
    """Draw a chain map src -> dst, src acyclic and dst free-entried.

    Works upward in top-functional coordinates: the component in the
    lowest degree is free, and each next component solves
    phi_{n+1} d = (functionals of d_dst f_n), which acyclicity makes
    solvable; a random kernel element is added at every step.  Every
    chain map arises this way, so this samples the full space.
    """
    cat = src.cat
    p = cat.p
    ranks = {d: free_rank(dst.module_at(d)) for d in dst.degrees()}
    if src.is_zero_complex():
        return ChainMap.zero(src, dst)
    phis: dict[int, Mat] = {}
    prev: Mat | None = None
    for n in range(src.lo, src.hi + 1):
        q = src.dim_at(n)
        b = ranks.get(n, 0)
        if prev is None:
            phi = Mat.make(cat.field, rng.integers(0, p, size=(b, q)))
        else:
            # constraint: phi @ d_{n-1} = functionals of d_dst o f_{n-1}
            dmat = src.diff_at(n - 1).mat  # q_n x q_{n-1}
            c = _push_functionals(prev, src.module_at(n - 1), dst, n - 1)
            part_t = solve(dmat.T, c.T)
            if part_t is None:
                raise ValueError("source complex is not acyclic")
            kb = kernel_basis(dmat.T)
            phi_t = part_t
            if kb.cols > 0 and b > 0:
                coeffs = Mat.make(cat.field, rng.integers(0, p, size=(kb.cols, b)))
                phi_t = phi_t + kb @ coeffs
            phi = phi_t.T
        phis[n] = phi
        prev = phi
    comps = {
        n: hom_from_functionals(src.module_at(n), dst.module_at(n), phis[n])
        for n in phis
        if src.dim_at(n) > 0 and dst.dim_at(n) > 0
    }
    return ChainMap(src, dst, comps)


def _push_functionals(phi: Mat, src_mod: Module, dst: Complex, n: int) -> Mat:
    """Functionals of d_dst^n o f, given f: src_mod -> dst^n by phi."""
    cat = src_mod.cat
    b_n = free_rank(dst.module_at(n)) if dst.dim_at(n) else 0
    b_next = free_rank(dst.module_at(n + 1)) if dst.dim_at(n + 1) else 0
    out = Mat.zeros(cat.field, b_next, src_mod.dim)
    if b_n == 0 or b_next == 0:
        return out
    coeffs = poly_matrix(dst.diff_at(n))
    act_pow = Mat.identity(cat.field, src_mod.dim)
    for t in range(cat.m):
        if not coeffs[t].is_zero():
            out = out + coeffs[t] @ phi @ act_pow
        if t + 1 < cat.m:
            act_pow = act_pow @ src_mod.action
    return out


def hom_vanishing_test(
    src: Complex, dst: Complex, samples: int = 5, seed: int = 0
) -> CheckReport:
    """Sampled maps from an acyclic complex into a free-entried one all
    contract, each with an independently verified homotopy witness."""
    rep = CheckReport()
    acyclic = is_acyclic(src)
    rep.add("source-acyclic", acyclic)
    free_ok = True
    try:
        for d in dst.degrees():
            free_rank(dst.module_at(d))
    except ValueError:
        free_ok = False
    rep.add("target-entries-free", free_ok)
    if not (acyclic and free_ok):
        return rep
    rng = np.random.Generator(np.random.PCG64(seed))
    nonzero = 0
    all_ok = True
    detail = ""
    for k in range(samples):
        f = sample_chain_map(src, dst, rng)
        if not f.is_zero():
            nonzero += 1
        try:
            h = null_homotopy_into_injectives(f, check_acyclic=False)
            h.verify()
        except ValueError as exc:
            all_ok = False
            detail = f"sample {k}: {exc}"
            break
    rep.add(
        "samples-null-homotopic",
        all_ok,
        detail or f"{samples} sampled, {nonzero} nonzero",
    )
    return rep


# -- derived hom / hyper-Ext ---------------------------------------------


@dataclass
class ExtData:
    """Hyper-Ext dimensions, with the hom complex they were read from."""

    module: Module
    depth: int
    dims: dict[int, int]
    hom_complex: Complex  # ordinary F_p complex (m = 1)


def derived_hom(mod: Module, ce: CEData, depth: int) -> ExtData:
    """Ext^n(M, X) for n <= depth via the cototalized resolution.

    Hom_R(M, -) of a complex of canonical free modules, rewritten in
    top-functional coordinates: the entry at n is phi-matrices
    (b_n x dim M) and the differential is phi -> sum_t U_t phi A^t for
    the coefficient matrices U_t of d^n.  Requires enough resolution
    rows: jmax >= depth - lo + 4 (so truncation noise cannot reach
    degree <= depth).
    """
    x = ce.base
    cat = x.cat
    if mod.cat != cat:
        raise ValueError("module and complex live over different rings")
    if depth < (x.lo if not x.is_zero_complex() else 0):
        raise ValueError("depth below the bottom of the window")
    if x.is_zero_complex():
        return ExtData(mod, depth, {}, Complex.zero(CatParams(cat.field, 1)))
    need = depth - x.lo + 4
    if ce.jmax < need:
        raise ValueError(
            f"resolution too shallow for depth {depth}: need jmax >= {need}, have {ce.jmax}"
        )
    y = cototalize(ce.bicomplex).complex
    cat1 = CatParams(cat.field, 1)
    q = mod.dim
    ranks = {n: free_rank(y.module_at(n)) for n in y.degrees()}
    modules: dict[int, Module] = {}
    for n, b in ranks.items():
        dim = b * q
        if dim > 0:
            modules[n] = Module(cat1, Mat.zeros(cat.field, dim, dim), check=False)
    act_pows = [Mat.identity(cat.field, q)]
    for _ in range(cat.m - 1):
        act_pows.append(act_pows[-1] @ mod.action)
    diffs: dict[int, Hom] = {}
    for n in sorted(ranks):
        b_n = ranks.get(n, 0)
        b_next = ranks.get(n + 1, 0)
        if b_n * q == 0 or b_next * q == 0 or (n + 1) not in modules:
            continue
        coeffs = poly_matrix(y.diff_at(n))
        acc = np.zeros((b_next * q, b_n * q), dtype=np.int64)
        for t in range(cat.m):
            if not coeffs[t].is_zero():
                acc = (acc + np.kron(coeffs[t].a, act_pows[t].a.T)) % cat.p
        diffs[n] = Hom(modules[n], modules[n + 1], Mat(cat.field, acc), check=False)
    hom_cplx = Complex(cat1, modules, diffs, check=True)
    dims = {}
    for n in range(x.lo, depth + 1):
        dims[n] = cohomology(hom_cplx, n).cohomology.dim
    return ExtData(mod, depth, dims, hom_cplx)
