"""Lifting representations up the p-power tower Z/p^k -> Z/p^(k+1).

One step lifts a representation by correcting the entrywise naive lift
with a solution of the linearized relator equations.  When the
obstruction class vanishes the set of lifts is a torsor under Z^1, of
size p^z1; otherwise it is empty.  Iterating the step builds the finite
tower underneath GL_n(Z_p) = lim GL_n(Z/p^k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .cohomology import Cocycle, cocycle_spaces, lift_obstruction
from .errors import BudgetExceededError
from .repvar import Representation
from .ring import CoeffRing, Matrix, identity, mat_inverse, mat_mul
from .words import word_eval

STATUS_EMPTY = "empty"
STATUS_TORSOR = "torsor"


def perturb_images(
    images: Sequence[Matrix], cocycle: Cocycle, R_up: CoeffRing, p_power: int
) -> tuple[Matrix, ...]:
    """Left-perturb each image: x_i -> (Id + p^k c_i) * images[i] over Z/p^(k+1)."""
    n = images[0].n
    out = []
    for m, c in zip(images, cocycle):
        pert = Matrix(
            n,
            tuple(
                (o + p_power * ce) % R_up.q
                for o, ce in zip(identity(n).entries, c.entries)
            ),
        )
        out.append(mat_mul(pert, m, R_up))
    return tuple(out)


@dataclass(frozen=True)
class LiftFiber:
    """The set of lifts of one representation one level up.

    When ``status`` is torsor, the fiber is exactly
    { perturb(base, z) : z in span(translation_basis) }, of size p^z1.
    """

    status: str
    base: Optional[Representation]
    translation_basis: tuple[Cocycle, ...]
    fiber_size: int


def lift_step(rep: Representation) -> LiftFiber:
    """Compute the fiber of lifts of rep over Z/p^(k+1)."""
    R = rep.R
    R_up = R.at_level(R.k + 1)
    naive = tuple(Matrix(rep.n, m.entries) for m in rep.images)
    obstruction = lift_obstruction(rep, naive)
    spaces = cocycle_spaces(rep)
    if not obstruction.liftable:
        return LiftFiber(STATUS_EMPTY, None, spaces.z1_basis, 0)
    assert obstruction.correction is not None
    base_images = perturb_images(naive, obstruction.correction, R_up, R.p**R.k)
    base = Representation(rep.pres, R_up, rep.n, base_images)
    return LiftFiber(STATUS_TORSOR, base, spaces.z1_basis, R.p ** spaces.z1)


def fiber_elements(fiber: LiftFiber, limit: Optional[int] = None) -> Iterator[Representation]:
    """Enumerate the fiber in canonical order (base first, then translates).

    Order is lexicographic in the Z^1 coefficient tuples, so two runs
    produce the same sequence.
    """
    if fiber.status != STATUS_TORSOR:
        return
    base = fiber.base
    assert base is not None
    R_up = base.R
    p = R_up.p
    p_power = p ** (R_up.k - 1)
    z1 = len(fiber.translation_basis)
    n = base.n
    count = 0
    for coeffs in itertools.product(range(p), repeat=z1):
        if limit is not None and count >= limit:
            return
        if not any(coeffs):
            yield base
        else:
            coc = []
            for slot in range(len(base.images)):
                ent = [0] * (n * n)
                for coeff, basis_vec in zip(coeffs, fiber.translation_basis):
                    if coeff:
                        for t, x in enumerate(basis_vec[slot].entries):
                            ent[t] = (ent[t] + coeff * x) % p
                coc.append(Matrix(n, tuple(ent)))
            images = perturb_images(base.images, tuple(coc), R_up, p_power)
            yield Representation(base.pres, R_up, base.n, images)
        count += 1


def count_lifts_bruteforce(rep: Representation, budget: int = 1_000_000) -> int:
    """Exhaustively count lifts of rep over Z/p^(k+1); the test oracle.

    Walks all p^(r n^2) congruence translates of the naive lift and checks
    every relator.  BudgetExceededError when that grid is over budget.
    """
    R = rep.R
    R_up = R.at_level(R.k + 1)
    p = R.p
    pk = p**R.k
    n = rep.n
    r = rep.pres.rank
    nn = n * n
    space = p ** (r * nn)
    if space > budget:
        raise BudgetExceededError(f"brute-force lift space {space} exceeds budget {budget}")

    candidates: list[list[Matrix]] = []
    inverses: list[list[Matrix]] = []
    for m in rep.images:
        cands = []
        invs = []
        for delta in itertools.product(range(p), repeat=nn):
            cand = Matrix(n, tuple((x + pk * d) % R_up.q for x, d in zip(m.entries, delta)))
            cands.append(cand)
            invs.append(mat_inverse(cand, R_up))
        candidates.append(cands)
        inverses.append(invs)

    one = identity(n)
    relators = rep.pres.relators
    count = 0
    for pick in itertools.product(*(range(len(c)) for c in candidates)):
        imgs = [candidates[i][j] for i, j in enumerate(pick)]
        invs = [inverses[i][j] for i, j in enumerate(pick)]
        if all(word_eval(w, imgs, R_up, inverses=invs) == one for w in relators):
            count += 1
    return count


@dataclass(frozen=True)
class FiberSummary:
    parent_index: int
    status: str
    size: int


@dataclass(frozen=True)
class LiftLevel:
    """Lifting data from level k to k+1.

    ``representatives`` are the level-(k+1) representations kept for the
    next step; ``complete`` says whether they are ALL lifts of the
    tracked parents, or a sampling-budget truncation.
    """

    k: int
    fibers: tuple[FiberSummary, ...]
    representatives: tuple[Representation, ...]
    complete: bool

    def total_lifts(self) -> int:
        return sum(f.size for f in self.fibers)


@dataclass(frozen=True)
class LiftTower:
    root: Representation
    levels: tuple[LiftLevel, ...]


def lift_tower(root: Representation, levels: int, sampling_budget: int = 512) -> LiftTower:
    """Iterate lift_step from the root up to Z/p^levels.

    Fibers of every tracked representative are computed per level; when a
    level would hold more than sampling_budget representations only the
    canonical first ones are kept and the level is flagged incomplete.
    """
    if levels < root.R.k:
        raise ValueError(f"levels={levels} is below the root level {root.R.k}")
    reps: list[Representation] = [root]
    out_levels: list[LiftLevel] = []
    complete = True
    for k_src in range(root.R.k, levels):
        fibers: list[FiberSummary] = []
        next_reps: list[Representation] = []
        level_complete = complete
        for idx, rp in enumerate(reps):
            fib = lift_step(rp)
            fibers.append(FiberSummary(idx, fib.status, fib.fiber_size))
            room = sampling_budget - len(next_reps)
            if room < fib.fiber_size:
                level_complete = False
            if room > 0:
                next_reps.extend(fiber_elements(fib, limit=room))
        out_levels.append(LiftLevel(k_src, tuple(fibers), tuple(next_reps), level_complete))
        reps = next_reps
        complete = level_complete
    return LiftTower(root, tuple(out_levels))
