"""Brute-force Ext oracle used to cross-check the derived-hom pipeline.

Computes Ext^j(M, N) from a minimal injective resolution of N with the
hom spaces in explicit basis coordinates (Kronecker commutant kernels),
never touching functional coordinates or the bicomplex machinery.
"""

import numpy as np

from cecert.fpla import Mat, rank, solve
from cecert.modules import Module, hom_space_basis, min_injective_resolution


def ext_dims_oracle(m_mod: Module, n_mod: Module, depth: int) -> list[int]:
    """[dim Ext^0(M, N), ..., dim Ext^depth(M, N)] by direct elimination."""
    fld = m_mod.cat.field
    res = min_injective_resolution(n_mod, depth + 1)
    bases = [hom_space_basis(m_mod, res.objects[j]) for j in range(depth + 2)]
    mats: list[Mat] = []
    for j in range(depth + 1):
        src_b, dst_b = bases[j], bases[j + 1]
        if not src_b or not dst_b:
            mats.append(Mat.zeros(fld, len(dst_b), len(src_b)))
            continue
        dst_flat = Mat.make(
            fld, np.stack([h.mat.a.reshape(-1) for h in dst_b], axis=1)
        )
        cols = []
        for h in src_b:
            image = (res.diffs[j] @ h).mat.a.reshape(-1, 1)
            coeff = solve(dst_flat, Mat.make(fld, image))
            assert coeff is not None, "composite not in hom-space span"
            cols.append(coeff.a)
        mats.append(Mat.make(fld, np.concatenate(cols, axis=1)))
    dims = []
    for j in range(depth + 1):
        ker_dim = len(bases[j]) - rank(mats[j])
        prev_rank = rank(mats[j - 1]) if j > 0 else 0
        dims.append(ker_dim - prev_rank)
    return dims
