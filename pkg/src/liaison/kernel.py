"""Kernels of graded maps between free modules via an elimination order.

The columns ``phi(e_j)`` are augmented to ``(phi(e_j), e_j)`` in
``target (+) source``; target components sit in block 0 so that a Groebner
basis of the augmented module under this order contains a Groebner basis
of ``ker(phi)`` as the elements without block-0 terms.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .groebner import GroebnerRun, TermCodec
from .ring import IDX_BITS, Ring

Vector = Dict[int, Dict[int, int]]  # component -> polynomial terms


def kernel(ring: Ring, columns: Sequence[Vector], target_twists: Sequence[int],
           source_twists: Sequence[int], max_degree: Optional[int] = None) -> List[Vector]:
    """Generators of ``ker(phi)`` as source vectors.

    ``columns[j]`` is ``phi(e_j)``; entry ``(a, j)`` must be zero or
    homogeneous of degree ``source_twists[j] - target_twists[a]``.
    ``max_degree`` truncates the computation at that source twist.
    """
    codec = TermCodec(ring)
    base = -min(list(target_twists) + list(source_twists) + [0])
    x0 = ring.var_mono(0) & ((1 << ring.deg_shift) - 1)
    deg_unit = 1 << ring.deg_shift

    def weight(tw: int) -> int:
        w = tw + base
        return w * x0 + w * deg_unit

    tw_t = [weight(t) for t in target_twists]
    tw_s = [weight(t) for t in source_twists]
    gens = []
    for j, col in enumerate(columns):
        elem: Dict[int, int] = {codec.term(tw_s[j], j, 1): 1}
        for a, poly in col.items():
            for m, c in poly.items():
                elem[codec.term(m + tw_t[a], a, 0)] = c
        gens.append(elem)
    run = GroebnerRun(ring, product_criterion=False,
                      max_degree=None if max_degree is None else max_degree + base)
    run.add_generators(gens)
    basis = run.run()
    # Only elements whose lead lies in the source block are syzygies; they are
    # already reduced against the rest, so interreducing that subset suffices.
    syz = [basis.polys[i] for i, lead in enumerate(basis.leads) if codec.block(lead) == 1]
    out: List[Vector] = []
    for elem in syz:
        vec: Vector = {}
        for t, c in elem.items():
            j = codec.comp(t)
            vec.setdefault(j, {})[codec.mono(t) - tw_s[j]] = c
        out.append(vec)
    return out


def vector_degree(ring: Ring, vec: Vector, source_twists: Sequence[int]) -> int:
    for j, poly in vec.items():
        for m in poly:
            return (m >> ring.deg_shift) + source_twists[j]
    raise ValueError("zero vector has no degree")


__all__ = ["kernel", "vector_degree", "IDX_BITS"]
