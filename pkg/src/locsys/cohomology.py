"""Group cohomology of a presented group with adjoint coefficients.

Coefficients are M_n(F_p) with the conjugation action g.X = rho(g) X rho(g)^-1
of the mod-p reduction of a representation.  H^0 is the centralizer, Z^1
the cocycles cut out by Fox-derivative linearizations of the relators,
B^1 the coboundaries, and H^1 = Z^1/B^1 is the tangent space of the
framed variety at rho.  The relator defect of a naive lift, reduced
modulo the image of the linearized relator map, is the obstruction to
lifting one level up the p-power tower.

Convention used everywhere: a first-order deformation perturbs images on
the left, x_i -> (Id + p^k c_i) rho(x_i), so cocycles satisfy
c(gh) = c(g) + Ad(rho(g)) c(h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .errors import ShapeViolationError
from .repvar import Representation
from .ring import (
    CoeffRing,
    Matrix,
    identity,
    mat_inverse,
    mat_mul,
    reduce_matrix,
)
from .words import fox_derivative, word_eval

Cocycle = tuple[Matrix, ...]  # one n x n matrix over F_p per generator


def _residue_rep(rep: Representation) -> Representation:
    return rep.reduce(1) if rep.R.k > 1 else rep


def _vec(m: Matrix) -> list[int]:
    return list(m.entries)


def _unvec(v: Sequence[int], n: int, p: int) -> Matrix:
    return Matrix(n, tuple(x % p for x in v))


def _ad_operator(u: Matrix, Rp: CoeffRing) -> list[list[int]]:
    """The n^2 x n^2 matrix of X -> u X u^-1 in the row-major vec basis."""
    n = u.n
    p = Rp.p
    ui = mat_inverse(u, Rp)
    op = [[0] * (n * n) for _ in range(n * n)]
    for a in range(n):
        for b in range(n):
            row = a * n + b
            for c in range(n):
                uac = u.entries[a * n + c]
                if not uac:
                    continue
                for d in range(n):
                    op[row][c * n + d] = uac * ui.entries[d * n + b] % p
    return op


def relator_linearization(rep: Representation) -> list[list[int]]:
    """Rows of the linearized relator map M_n(F_p)^r -> M_n(F_p)^s.

    Row block for relator w sends a cocycle candidate c to
    sum_i sum_{(s,u) in dw/dx_i} s * Ad(rho(u)) c_i, the first-order
    defect contributed by perturbing each generator image.
    """
    rp = _residue_rep(rep)
    Rp = rp.R
    p = Rp.p
    n = rp.n
    r = rp.pres.rank
    nn = n * n
    imgs = list(rp.images)
    rows: list[list[int]] = []
    for w in rp.pres.relators:
        blocks: list[list[list[int]]] = []
        for i in range(r):
            acc = [[0] * nn for _ in range(nn)]
            for sign, u in fox_derivative(w, i).terms:
                op = _ad_operator(word_eval(u, imgs, Rp), Rp)
                for a in range(nn):
                    acc_a = acc[a]
                    op_a = op[a]
                    for b in range(nn):
                        acc_a[b] = (acc_a[b] + sign * op_a[b]) % p
            blocks.append(acc)
        for a in range(nn):
            rows.append([blocks[i][a][b] for i in range(r) for b in range(nn)])
    return rows


def h0_basis(rep: Representation) -> list[Matrix]:
    """RREF basis of the centralizer {X : rho(x_i) X = X rho(x_i)} in M_n(F_p)."""
    rp = _residue_rep(rep)
    Rp = rp.R
    n = rp.n
    nn = n * n
    rows: list[list[int]] = []
    for u in rp.images:
        op = _ad_operator(u, Rp)
        for a in range(nn):
            row = list(op[a])
            row[a] = (row[a] - 1) % Rp.p
            rows.append(row)
    basis = linalg.nullspace(rows, nn, Rp.p)
    return [_unvec(v, n, Rp.p) for v in basis]


@dataclass(frozen=True)
class CocycleSpace:
    """Dimensions and canonical bases of Z^1, B^1 for Ad(rho) coefficients."""

    rank: int
    n: int
    p: int
    h0: int
    z1: int
    b1: int
    h1: int
    z1_basis: tuple[Cocycle, ...]
    b1_basis: tuple[Cocycle, ...]


def _to_cocycle(v: Sequence[int], r: int, n: int, p: int) -> Cocycle:
    nn = n * n
    return tuple(_unvec(v[i * nn : (i + 1) * nn], n, p) for i in range(r))


def cocycle_spaces(rep: Representation) -> CocycleSpace:
    """Z^1, B^1 and the dimension quadruple (h0, z1, b1, h1) at rho mod p."""
    rp = _residue_rep(rep)
    Rp = rp.R
    p = Rp.p
    n = rp.n
    r = rp.pres.rank
    nn = n * n
    ambient = r * nn

    lin_rows = relator_linearization(rp)
    z1_vecs = linalg.nullspace(lin_rows, ambient, p)

    # coboundaries: X -> (X - Ad(rho(x_i)) X)_i over a basis of M_n
    imgs = list(rp.images)
    invs = [mat_inverse(m, Rp) for m in imgs]
    cob_rows: list[list[int]] = []
    for cd in range(nn):
        e = Matrix(n, tuple(1 if t == cd else 0 for t in range(nn)))
        vec: list[int] = []
        for u, ui in zip(imgs, invs):
            conj = mat_mul(mat_mul(u, e, Rp), ui, Rp)
            vec.extend((x - y) % p for x, y in zip(e.entries, conj.entries))
        cob_rows.append(vec)
    b1_vecs, _ = linalg.rref(cob_rows, p)

    h0 = len(h0_basis(rp))
    z1 = len(z1_vecs)
    b1 = len(b1_vecs)
    if h0 + b1 != nn:
        raise AssertionError("rank-nullity violated: h0 + b1 != n^2")
    for v in b1_vecs:
        if any(sum(a * b for a, b in zip(row, v)) % p for row in lin_rows):
            raise AssertionError("coboundary fails the cocycle condition")

    return CocycleSpace(
        rank=r,
        n=n,
        p=p,
        h0=h0,
        z1=z1,
        b1=b1,
        h1=z1 - b1,
        z1_basis=tuple(_to_cocycle(v, r, n, p) for v in z1_vecs),
        b1_basis=tuple(_to_cocycle(v, r, n, p) for v in b1_vecs),
    )


@dataclass(frozen=True)
class ObstructionVector:
    """Per-relator defect of a naive lift and its class modulo corrections.

    ``defects[j]`` is eps_j in M_n(F_p) with word value Id + p^k eps_j.
    ``residual`` is the canonical representative of the defect vector
    modulo the image of the linearized relator map; the lift extends one
    level iff it is zero, in which case ``correction`` turns the naive
    lift into an actual representation.
    """

    defects: tuple[Matrix, ...]
    residual: tuple[Matrix, ...]
    liftable: bool
    correction: Optional[Cocycle]
    obstruction_space_dim: int


def lift_obstruction(rep: Representation, naive_lift: Sequence[Matrix]) -> ObstructionVector:
    """Obstruction of the entrywise lift of rep to Z/p^(k+1).

    Raises ShapeViolationError unless naive_lift reduces to rep mod p^k
    and every relator value is congruent to Id mod p^k (automatic for a
    genuine representation).
    """
    R = rep.R
    R_up = R.at_level(R.k + 1)
    p = R.p
    pk = p**R.k
    n = rep.n
    r = rep.pres.rank
    nn = n * n

    if len(naive_lift) != r:
        raise ShapeViolationError("naive lift needs one matrix per generator")
    for m, base in zip(naive_lift, rep.images):
        if reduce_matrix(m, R) != base:
            raise ShapeViolationError("naive lift does not reduce to the representation")

    one = identity(n)
    defects: list[Matrix] = []
    eps_vec: list[int] = []
    lift_list = list(naive_lift)
    for w in rep.pres.relators:
        val = word_eval(w, lift_list, R_up)
        eps_entries = []
        for x, o in zip(val.entries, one.entries):
            d = (x - o) % R_up.q
            if d % pk:
                raise ShapeViolationError(
                    "relator value is not Id mod p^k; input is not a representation"
                )
            eps_entries.append((d // pk) % p)
        defects.append(Matrix(n, tuple(eps_entries)))
        eps_vec.extend(eps_entries)

    lin_rows = relator_linearization(rep)
    # canonical coset representative of eps modulo the column space
    cols = [[row[c] for row in lin_rows] for c in range(r * nn)] if lin_rows else []
    col_ech, col_pivots = linalg.rref(cols, p)
    residual_vec = linalg.reduce_mod_rowspace(eps_vec, col_ech, col_pivots, p)
    liftable = not any(residual_vec)

    correction: Optional[Cocycle] = None
    if liftable:
        if lin_rows:
            sol = linalg.solve(lin_rows, [(-x) % p for x in eps_vec], p)
            if sol is None:
                raise AssertionError("zero residual but no correction found")
        else:
            sol = [0] * (r * nn)
        correction = _to_cocycle(sol, r, n, p)

    s = len(rep.pres.relators)
    residual = tuple(
        _unvec(residual_vec[j * nn : (j + 1) * nn], n, p) for j in range(s)
    )
    return ObstructionVector(
        defects=tuple(defects),
        residual=residual,
        liftable=liftable,
        correction=correction,
        obstruction_space_dim=s * nn - len(col_ech),
    )
