"""Exact arithmetic in M_n(Z/p^k) and its unit group GL_n(Z/p^k).

Coefficients live in the truncated ring Z/p^k.  Matrices are immutable,
entries are always kept as canonical residues in [0, p^k), and every
operation is a pure function, so values can be shared freely.  The
congruence filtration Id + p^j M_n is the basic structure everything
else in the package hangs off.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import NotAUnitError, NotInCongruenceSubgroupError

# p^k must fit in a 64-bit word; keeps cost per ring op predictable.
RING_CAP = 2**63 - 1

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, valid for all m < 2^64."""
    if m < 2:
        return False
    for sp in _SMALL_PRIMES:
        if m % sp == 0:
            return m == sp
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class CoeffRing:
    """The coefficient ring Z/p^k, p prime, k >= 1."""

    p: int
    k: int
    q: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"level k must be >= 1, got {self.k}")
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        q = self.p**self.k
        if q > RING_CAP:
            raise ValueError(f"p^k = {q} exceeds the 64-bit ring cap")
        object.__setattr__(self, "q", q)

    def residue_field(self) -> "CoeffRing":
        return CoeffRing(self.p, 1)

    def at_level(self, k: int) -> "CoeffRing":
        return CoeffRing(self.p, k)

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0

    def inv(self, x: int) -> int:
        """Inverse of a unit mod p^k."""
        if x % self.p == 0:
            raise NotAUnitError(f"{x} is divisible by {self.p}, not a unit of Z/{self.q}")
        return pow(x, -1, self.q)

    def valuation(self, x: int) -> int:
        """p-adic valuation of x in [0, k]; the valuation of 0 is capped at k."""
        x %= self.q
        if x == 0:
            return self.k
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v


@dataclass(frozen=True)
class Matrix:
    """An n x n matrix, entries stored row-major as a flat tuple."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.n * self.n:
            raise ValueError(
                f"expected {self.n * self.n} entries for a {self.n}x{self.n} matrix, "
                f"got {len(self.entries)}"
            )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(n)]

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.rows()) + "]"


def identity(n: int) -> Matrix:
    return Matrix(n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def mat_from_rows(rows: Sequence[Sequence[int]], R: CoeffRing) -> Matrix:
    """Build a matrix from nested rows, reducing every entry mod p^k."""
    n = len(rows)
    ent = []
    for row in rows:
        if len(row) != n:
            raise ValueError("rows must form a square matrix")
        ent.extend(x % R.q for x in row)
    return Matrix(n, tuple(ent))


def basis_matrix(n: int, i: int, j: int, value: int = 1) -> Matrix:
    """value * E_ij (single-entry matrix)."""
    ent = [0] * (n * n)
    ent[i * n + j] = value
    return Matrix(n, tuple(ent))


def transvection(n: int, i: int, j: int, c: int = 1) -> Matrix:
    """Id + c * E_ij, i != j."""
    if i == j:
        raise ValueError("transvection requires i != j")
    ent = [1 if a == b else 0 for a in range(n) for b in range(n)]
    ent[i * n + j] = c
    return Matrix(n, tuple(ent))


def diagonal(diag: Sequence[int], R: CoeffRing) -> Matrix:
    n = len(diag)
    ent = [0] * (n * n)
    for i, x in enumerate(diag):
        ent[i * n + i] = x % R.q
    return Matrix(n, tuple(ent))


def reduce_matrix(a: Matrix, R_to: CoeffRing) -> Matrix:
    """Reduce entries mod p^k of the target ring (image under Z/p^K -> Z/p^k)."""
    q = R_to.q
    return Matrix(a.n, tuple(x % q for x in a.entries))


def mat_add(a: Matrix, b: Matrix, R: CoeffRing) -> Matrix:
    _check_dims(a, b)
    q = R.q
    return Matrix(a.n, tuple((x + y) % q for x, y in zip(a.entries, b.entries)))


def mat_sub(a: Matrix, b: Matrix, R: CoeffRing) -> Matrix:
    _check_dims(a, b)
    q = R.q
    return Matrix(a.n, tuple((x - y) % q for x, y in zip(a.entries, b.entries)))


def mat_scale(c: int, a: Matrix, R: CoeffRing) -> Matrix:
    q = R.q
    c %= q
    return Matrix(a.n, tuple(c * x % q for x in a.entries))


def _check_dims(a: Matrix, b: Matrix) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def mat_mul(a: Matrix, b: Matrix, R: CoeffRing) -> Matrix:
    _check_dims(a, b)
    n = a.n
    q = R.q
    ae = a.entries
    be = b.entries
    if n == 2:
        a0, a1, a2, a3 = ae
        b0, b1, b2, b3 = be
        return Matrix(
            2,
            (
                (a0 * b0 + a1 * b2) % q,
                (a0 * b1 + a1 * b3) % q,
                (a2 * b0 + a3 * b2) % q,
                (a2 * b1 + a3 * b3) % q,
            ),
        )
    out = [0] * (n * n)
    for i in range(n):
        off = i * n
        for l in range(n):
            x = ae[off + l]
            if x:
                boff = l * n
                for j in range(n):
                    out[off + j] += x * be[boff + j]
    return Matrix(n, tuple(x % q for x in out))


def mat_pow(a: Matrix, e: int, R: CoeffRing) -> Matrix:
    """a^e for e >= 0 by binary powering (e < 0 inverts first)."""
    if e < 0:
        a = mat_inverse(a, R)
        e = -e
    result = identity(a.n)
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base, R)
        base = mat_mul(base, base, R)
        e >>= 1
    return result


def det_mod_p(a: Matrix, R: CoeffRing) -> int:
    """Determinant of the mod-p reduction, an element of F_p."""
    n = a.n
    p = R.p
    e = a.entries
    if n == 1:
        return e[0] % p
    if n == 2:
        return (e[0] * e[3] - e[1] * e[2]) % p
    if n == 3:
        return (
            e[0] * (e[4] * e[8] - e[5] * e[7])
            - e[1] * (e[3] * e[8] - e[5] * e[6])
            + e[2] * (e[3] * e[7] - e[4] * e[6])
        ) % p
    # general case: Gaussian elimination over F_p
    rows = [[x % p for x in e[i * n : (i + 1) * n]] for i in range(n)]
    det = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv % p
        inv = pow(pv, -1, p)
        for r in range(col + 1, n):
            f = rows[r][col] * inv % p
            if f:
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[col])]
    return det % p


def is_invertible(a: Matrix, R: CoeffRing) -> bool:
    """Membership test for GL_n(Z/p^k): det must be a unit, i.e. nonzero mod p."""
    return det_mod_p(a, R) != 0


def mat_inverse(a: Matrix, R: CoeffRing) -> Matrix:
    """Two-sided inverse via Gaussian elimination with unit pivots.

    Z/p^k is local: an entry is a pivot candidate iff it is not divisible
    by p.  If some column has no unit below the diagonal the matrix is
    singular and NotAUnitError is raised.
    """
    n = a.n
    q = R.q
    p = R.p
    if n == 1:
        x = a.entries[0]
        if x % p == 0:
            raise NotAUnitError("1x1 matrix with non-unit entry")
        return Matrix(1, (pow(x, -1, q),))
    left = [list(a.entries[i * n : (i + 1) * n]) for i in range(n)]
    right = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if left[r][col] % p:
                piv = r
                break
        if piv is None:
            raise NotAUnitError("matrix is not invertible over Z/p^k")
        if piv != col:
            left[col], left[piv] = left[piv], left[col]
            right[col], right[piv] = right[piv], right[col]
        inv = pow(left[col][col], -1, q)
        left[col] = [x * inv % q for x in left[col]]
        right[col] = [x * inv % q for x in right[col]]
        for r in range(n):
            if r == col:
                continue
            f = left[r][col]
            if f:
                left[r] = [(x - f * y) % q for x, y in zip(left[r], left[col])]
                right[r] = [(x - f * y) % q for x, y in zip(right[r], right[col])]
    return Matrix(n, tuple(x for row in right for x in row))


def congruence_level(a: Matrix, R: CoeffRing) -> int:
    """Largest j <= k with a = Id mod p^j (k for Id itself, 0 if no congruence)."""
    n = a.n
    level = R.k
    for i in range(n):
        for j in range(n):
            d = (a.entries[i * n + j] - (1 if i == j else 0)) % R.q
            v = R.valuation(d)
            if v < level:
                level = v
                if level == 0:
                    return 0
    return level


def gl_order(R: CoeffRing, n: int) -> int:
    """|GL_n(Z/p^k)| = p^((k-1) n^2) * prod_{i<n} (p^n - p^i)."""
    p = R.p
    order = p ** ((R.k - 1) * n * n)
    pn = p**n
    for i in range(n):
        order *= pn - p**i
    return order


def congruence_subgroup_order(R: CoeffRing, n: int, j: int) -> int:
    """|Id + p^j M_n(Z/p^k)| = p^((k-j) n^2) for 1 <= j <= k."""
    if not 1 <= j <= R.k:
        raise ValueError(f"level j must be in [1, {R.k}], got {j}")
    return R.p ** ((R.k - j) * n * n)


def congruence_element_order(a: Matrix, R: CoeffRing) -> int:
    """Multiplicative order of a in Id + p M_n(Z/p^k); always divides p^(k-1).

    Raises NotInCongruenceSubgroupError when a is not congruent to Id mod p.
    """
    if congruence_level(a, R) < 1:
        raise NotInCongruenceSubgroupError(
            "element order is only defined on the level-1 congruence subgroup"
        )
    one = identity(a.n)
    order = 1
    b = a
    # each p-th power raises the congruence level, so k-1 steps suffice
    for _ in range(R.k):
        if b == one:
            return order
        b = mat_pow(b, R.p, R)
        order *= R.p
    if b != one:
        raise AssertionError("congruence element order exceeded p^(k-1)")
    return order


def enumerate_gl(R: CoeffRing, n: int) -> Iterator[Matrix]:
    """All of GL_n(Z/p^k) in lexicographic order of the flattened entries."""
    for ent in itertools.product(range(R.q), repeat=n * n):
        m = Matrix(n, ent)
        if det_mod_p(m, R) != 0:
            yield m


# -- JSON wire format ---------------------------------------------------------

def matrix_to_json(a: Matrix, R: CoeffRing) -> dict:
    return {"n": a.n, "p": R.p, "k": R.k, "entries": list(a.entries)}


def matrix_from_json(obj: dict) -> tuple[Matrix, CoeffRing]:
    """Parse the {"n", "p", "k", "entries"} schema; rejects unreduced entries."""
    try:
        n = int(obj["n"])
        R = CoeffRing(int(obj["p"]), int(obj["k"]))
        entries = [int(x) for x in obj["entries"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(entries)}")
    for x in entries:
        if not 0 <= x < R.q:
            raise ValueError(f"entry {x} out of range [0, {R.q})")
    return Matrix(n, tuple(entries)), R
