"""The framed representation variety Hom(G, GL_n(Z/p^k)) as a finite set.

A representation is an r-tuple of invertible matrices satisfying every
relator of the presentation.  This module enumerates all of them by
backtracking with relator-support pruning, decides membership in framed
subdomains (chosen subgroup generators landing in Id + p M_n), discovers
a framing subgroup for any representation of a free group, and computes
finite closures inside the level-1 congruence subgroup.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import BoundExceededError, BudgetExceededError, NotInCongruenceSubgroupError
from .ring import (
    CoeffRing,
    Matrix,
    congruence_level,
    congruence_subgroup_order,
    enumerate_gl,
    gl_order,
    identity,
    is_invertible,
    mat_inverse,
    mat_mul,
    matrix_from_json,
    matrix_to_json,
    reduce_matrix,
)
from .words import (
    Presentation,
    SubgroupData,
    Word,
    schreier_subgroup,
    word_eval,
)

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Representation:
    """A point of the framed variety: x_i -> images[i] in GL_n(R)."""

    pres: Presentation
    R: CoeffRing
    n: int
    images: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.pres.rank:
            raise ValueError("need one image per generator")
        for m in self.images:
            if m.n != self.n:
                raise ValueError("image dimension does not match n")

    def key(self) -> tuple[int, ...]:
        """Flattened entries of (M_1, .., M_r); the canonical sort key."""
        return tuple(x for m in self.images for x in m.entries)

    def reduce(self, k: int) -> "Representation":
        """The image representation over Z/p^k for k <= current level."""
        R2 = self.R.at_level(k)
        return Representation(self.pres, R2, self.n, tuple(reduce_matrix(m, R2) for m in self.images))


def why_not_representation(
    pres: Presentation, images: Sequence[Matrix], R: CoeffRing, n: int
) -> Optional[str]:
    """None if the images define a representation, else a diagnostic."""
    if len(images) != pres.rank:
        return f"expected {pres.rank} images, got {len(images)}"
    for i, m in enumerate(images):
        if m.n != n:
            return f"image {i} has dimension {m.n}, expected {n}"
        if not is_invertible(m, R):
            return f"image of generator {pres.names[i]} is not invertible"
    one = identity(n)
    for j, w in enumerate(pres.relators):
        if word_eval(w, list(images), R) != one:
            return f"relator {j} does not evaluate to the identity"
    return None


def is_representation(pres: Presentation, images: Sequence[Matrix], R: CoeffRing, n: int) -> bool:
    return why_not_representation(pres, images, R, n) is None


def enumerate_reps(
    pres: Presentation,
    R: CoeffRing,
    n: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[Representation]:
    """All representations, duplicate-free, ordered by Representation.key().

    Backtracks over generator images in lexicographic GL order; a partial
    assignment dies as soon as a relator whose support is fully assigned
    fails.  Raises BudgetExceededError when |GL_n(R)|^rank > budget.
    """
    r = pres.rank
    space = gl_order(R, n) ** r
    if space > budget:
        raise BudgetExceededError(
            f"search space {space} exceeds budget {budget}", partial_count=0
        )
    if r == 0:
        return [Representation(pres, R, n, ())]

    gl = list(enumerate_gl(R, n))
    inv = [mat_inverse(m, R) for m in gl]

    # relators checked as soon as their highest generator is assigned
    by_level: list[list[Word]] = [[] for _ in range(r)]
    for w in pres.relators:
        if w.letters:
            by_level[w.max_generator()].append(w)

    one = identity(n)

    def extend(prefix_imgs: list[Matrix], prefix_invs: list[Matrix], level: int, out: list):
        if level == r:
            out.append(tuple(prefix_imgs))
            return
        for idx in range(len(gl)):
            prefix_imgs.append(gl[idx])
            prefix_invs.append(inv[idx])
            if all(
                word_eval(w, prefix_imgs, R, inverses=prefix_invs) == one
                for w in by_level[level]
            ):
                extend(prefix_imgs, prefix_invs, level + 1, out)
            prefix_imgs.pop()
            prefix_invs.pop()

    if workers <= 1 or r == 1:
        tuples: list[tuple[Matrix, ...]] = []
        extend([], [], 0, tuples)
    else:
        def chunk(start: int, step: int) -> list[tuple[Matrix, ...]]:
            local: list[tuple[Matrix, ...]] = []
            for idx in range(start, len(gl), step):
                imgs = [gl[idx]]
                invs = [inv[idx]]
                if all(word_eval(w, imgs, R, inverses=invs) == one for w in by_level[0]):
                    extend(imgs, invs, 1, local)
            return local

        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(chunk, range(workers), [workers] * workers)
        tuples = [t for part in parts for t in part]
        tuples.sort(key=lambda t: tuple(x for m in t for x in m.entries))

    return [Representation(pres, R, n, t) for t in tuples]


# -- framed membership ---------------------------------------------------------

@dataclass(frozen=True)
class FramedWitness:
    """Congruence levels of chosen subgroup generators under a representation."""

    checked: tuple[tuple[Word, int], ...]
    subgroup: Optional[SubgroupData] = None

    @property
    def passed(self) -> bool:
        return all(level >= 1 for _, level in self.checked)


def framed_membership(rep: Representation, gens: Iterable[Word]) -> FramedWitness:
    """Does every word evaluate into Id + p M_n?  Witness records the levels."""
    imgs = list(rep.images)
    checked = tuple(
        (w, congruence_level(word_eval(w, imgs, rep.R), rep.R)) for w in gens
    )
    return FramedWitness(checked=checked)


def find_framing_subgroup(rep: Representation, max_index: int = 20000) -> FramedWitness:
    """A framing subgroup certificate for a representation of a free group.

    Takes U = kernel of the mod-p reduction of rep (the preimage of the
    level-1 congruence subgroup), runs Reidemeister-Schreier on the finite
    mod-p image, and evaluates the resulting Schreier generators under rep.
    All levels are >= 1 by construction, so the witness always passes.
    """
    if not rep.pres.is_free():
        raise ValueError("framing subgroup discovery expects a free presentation")
    Rp = rep.R.residue_field()
    imgs_p = [reduce_matrix(m, Rp) for m in rep.images]
    one = identity(rep.n)
    sub = schreier_subgroup(
        imgs_p,
        mul=lambda a, b: mat_mul(a, b, Rp),
        inv=lambda a: mat_inverse(a, Rp),
        member=lambda g: g == one,
        max_index=max_index,
    )
    witness = framed_membership(rep, sub.generators)
    return FramedWitness(checked=witness.checked, subgroup=sub)


# -- Burnside closure ----------------------------------------------------------

def burnside_closure(
    gens: Sequence[Matrix], R: CoeffRing, bound: Optional[int] = None
) -> set[Matrix]:
    """The subgroup generated inside Id + p M_n(Z/p^k), by BFS multiplication.

    Every generator must have congruence level >= 1; the closure is then a
    finite p-group of order dividing p^((k-1) n^2), which is the default
    bound.  BoundExceededError means the caller's bound was too small, not
    that the closure is infinite.
    """
    if not gens:
        return {identity(1)}
    n = gens[0].n
    for g in gens:
        if congruence_level(g, R) < 1:
            raise NotInCongruenceSubgroupError(
                "Burnside closure requires generators in Id + p M_n"
            )
    if bound is None:
        bound = congruence_subgroup_order(R, n, 1)
    one = identity(n)
    els: set[Matrix] = {one}
    frontier = [one]
    while frontier:
        new: list[Matrix] = []
        for a in frontier:
            for g in gens:
                c = mat_mul(a, g, R)
                if c not in els:
                    els.add(c)
                    if len(els) > bound:
                        raise BoundExceededError(
                            f"closure exceeded bound {bound}; raise the bound"
                        )
                    new.append(c)
        frontier = new
    return els


# -- JSON ----------------------------------------------------------------------

def rep_to_json(rep: Representation) -> dict:
    return {
        "ring": {"p": rep.R.p, "k": rep.R.k},
        "n": rep.n,
        "images": [matrix_to_json(m, rep.R) for m in rep.images],
    }


def rep_from_json(obj: dict, pres: Presentation) -> Representation:
    ring = obj["ring"]
    R = CoeffRing(int(ring["p"]), int(ring["k"]))
    n = int(obj["n"])
    images = []
    for m_obj in obj["images"]:
        m, R_m = matrix_from_json(m_obj)
        if (R_m.p, R_m.k) != (R.p, R.k) or m.n != n:
            raise ValueError("matrix ring or dimension disagrees with representation header")
        images.append(m)
    return Representation(pres, R, n, tuple(images))
