"""Conjugation orbits of GL_n(Z/p^k) on the framed variety.

The quotient is recorded as a finite groupoid: one canonical
representative per orbit together with orbit size and stabilizer order.
Groupoid mass (sum of 1/|stabilizer|) is the cardinality of the stacky
quotient at this level and always equals |Hom| / |GL_n|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceededError
from .repvar import Representation
from .ring import (
    CoeffRing,
    Matrix,
    enumerate_gl,
    gl_order,
    identity,
    mat_inverse,
    mat_mul,
    transvection,
)

SWEEP_LIMIT = 100_000


def conjugate_rep(g: Matrix, rep: Representation) -> Representation:
    """The representation x_i -> g M_i g^-1 (NotAUnitError if g is singular)."""
    R = rep.R
    gi = mat_inverse(g, R)
    images = tuple(mat_mul(mat_mul(g, m, R), gi, R) for m in rep.images)
    return Representation(rep.pres, R, rep.n, images)


def _gl_generators(R: CoeffRing, n: int) -> list[Matrix]:
    """A generating set of GL_n(Z/p^k): transvections and diagonal units."""
    gens: list[Matrix] = []
    for u in range(1, R.q):
        if R.is_unit(u) and u != 1:
            ent = list(identity(n).entries)
            ent[0] = u
            gens.append(Matrix(n, tuple(ent)))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(transvection(n, i, j, 1))
    return gens if gens else [identity(n)]


@dataclass(frozen=True)
class Orbit:
    representative: Representation  # lexicographically least element
    size: int
    stabilizer_order: int


@dataclass(frozen=True)
class OrbitGroupoid:
    orbits: tuple[Orbit, ...]
    ambient_order: int

    def total_points(self) -> int:
        return sum(o.size for o in self.orbits)


def orbit_decomposition(
    reps: Sequence[Representation],
    sweep_limit: int = SWEEP_LIMIT,
    max_ops: int = 10_000_000,
) -> OrbitGroupoid:
    """Partition a complete, duplicate-free representation list into orbits.

    Ambient groups up to ``sweep_limit`` get a full-group sweep with
    directly counted stabilizers; larger ones use closure under a
    generating set with stabilizers from the orbit-stabilizer identity.
    Raises ValueError if the input turns out not to be conjugation-closed.
    """
    if not reps:
        return OrbitGroupoid((), 0)
    R = reps[0].R
    n = reps[0].n
    ambient = gl_order(R, n)
    index = {rep.key(): i for i, rep in enumerate(reps)}
    if len(index) != len(reps):
        raise ValueError("representation list contains duplicates")

    visited = [False] * len(reps)
    orbits: list[Orbit] = []

    if ambient <= sweep_limit:
        group = [(g, mat_inverse(g, R)) for g in enumerate_gl(R, n)]
        for i, rep in enumerate(reps):
            if visited[i]:
                continue
            seen: set[tuple[int, ...]] = set()
            stab = 0
            for g, gi in group:
                images = tuple(mat_mul(mat_mul(g, m, R), gi, R) for m in rep.images)
                key = tuple(x for m in images for x in m.entries)
                if key == rep.key():
                    stab += 1
                if key not in seen:
                    seen.add(key)
                    j = index.get(key)
                    if j is None:
                        raise ValueError(
                            "conjugate falls outside the input list; not a complete enumeration"
                        )
                    visited[j] = True
            size = len(seen)
            if size * stab != ambient:
                raise AssertionError("orbit-stabilizer identity violated")
            orbits.append(Orbit(rep, size, stab))
    else:
        gens = [(g, mat_inverse(g, R)) for g in _gl_generators(R, n)]
        if len(reps) * len(gens) > max_ops:
            raise BudgetExceededError(
                f"orbit closure would need more than {max_ops} conjugations"
            )
        for i, rep in enumerate(reps):
            if visited[i]:
                continue
            seen = {rep.key()}
            visited[i] = True
            frontier = [rep]
            while frontier:
                new: list[Representation] = []
                for cur in frontier:
                    for g, gi in gens:
                        images = tuple(
                            mat_mul(mat_mul(g, m, R), gi, R) for m in cur.images
                        )
                        key = tuple(x for m in images for x in m.entries)
                        if key not in seen:
                            seen.add(key)
                            j = index.get(key)
                            if j is None:
                                raise ValueError(
                                    "conjugate falls outside the input list; "
                                    "not a complete enumeration"
                                )
                            visited[j] = True
                            new.append(reps[j])
                frontier = new
            size = len(seen)
            if ambient % size:
                raise AssertionError("orbit size does not divide the ambient order")
            orbits.append(Orbit(rep, size, ambient // size))

    if sum(o.size for o in orbits) != len(reps):
        raise AssertionError("orbit sizes do not add up to the representation count")
    return OrbitGroupoid(tuple(orbits), ambient)


def groupoid_mass(groupoid: OrbitGroupoid) -> Fraction:
    """Sum of 1/|stabilizer| over orbits, equal to |Hom| / |GL_n(R)|."""
    return sum((Fraction(1, o.stabilizer_order) for o in groupoid.orbits), Fraction(0))
