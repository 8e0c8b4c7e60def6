"""Relabeling of skeletal data: the permuted-tree-basis transform.

The engine fixes every basis enumeration by sorting labels, so renaming
labels bijectively permutes all tree bases (hom-space path orders, fiber
orders, F-block row/column orders) while representing the same category.
Quantities the theory states basis-independently — norms, expectation
values, verdicts — must be unchanged under this transform; the acceptance
suite re-runs its numeric criteria through it.
"""

from __future__ import annotations

from .errors import LabelMismatch
from .fusion_ring import FusionRing
from .skeletal import SkeletalUTC

__all__ = ["relabel_category"]


def relabel_category(cat: SkeletalUTC, rename: dict) -> SkeletalUTC:
    """Rebuild `cat` with bijectively renamed labels.

    `rename` maps old labels to new ones; omitted labels keep their name.
    F-symbol blocks are permuted to the new lexicographic order of their
    intermediate channels so the rebuilt category is internally consistent.
    """
    ring = cat.ring
    rn = {x: rename.get(x, x) for x in ring.labels}
    if len(set(rn.values())) != len(ring.labels):
        raise LabelMismatch("rename is not a bijection on the labels")

    mult = {}
    for x in ring.labels:
        for y in ring.labels:
            for z in ring.labels:
                m = ring.N(x, y, z)
                if m:
                    mult[(rn[x], rn[y], rn[z])] = m
    new_ring = FusionRing([rn[x] for x in ring.labels], rn[ring.unit],
                          {rn[x]: rn[ring.dual[x]] for x in ring.labels},
                          mult)

    def _perm(entries):
        # entries: list of (channel, α, β) in the old sorted order; the new
        # order sorts by the renamed channel name
        order = sorted(range(len(entries)),
                       key=lambda t: (rn[entries[t][0]],) + entries[t][1:])
        return order

    F = {}
    for (a, b, c, d), _ in cat._F.items():
        M = cat.fmat(a, b, c, d)
        pl = _perm(cat.left_index(a, b, c, d))
        pr = _perm(cat.right_index(a, b, c, d))
        F[(rn[a], rn[b], rn[c], rn[d])] = M[pl][:, pr]

    R = None
    if cat.braided:
        # R blocks are indexed by multiplicity only; no reordering needed
        R = {(rn[a], rn[b], rn[c]): M for (a, b, c), M in cat._R.items()}

    qdims = {rn[x]: cat.qdim[x] for x in ring.labels}
    return SkeletalUTC(new_ring, F, R, qdims=qdims)
