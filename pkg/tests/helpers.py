"""Independent reference implementations used as oracles by the tests.

Nothing here may call the code path it is used to check: multiplication
is schoolbook on nested lists, determinants are permutation expansions,
closures are naive worklists, and cocycle conditions are evaluated by
walking words letter by letter.
"""

import itertools

from locsys.ring import Matrix, mat_inverse, mat_mul


def nested(m: Matrix) -> list[list[int]]:
    n = m.n
    return [list(m.entries[i * n : (i + 1) * n]) for i in range(n)]


def school_mul(a: list[list[int]], b: list[list[int]], q: int) -> list[list[int]]:
    n = len(a)
    return [
        [sum(a[i][l] * b[l][j] for l in range(n)) % q for j in range(n)]
        for i in range(n)
    ]


def school_eval(letters, images, inverses, q):
    """Evaluate a word by direct left-to-right schoolbook products."""
    n = len(images[0])
    acc = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for g, e in letters:
        acc = school_mul(acc, images[g] if e == 1 else inverses[g], q)
    return acc


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def naive_det(rows: list[list[int]], q: int) -> int:
    """Determinant by Leibniz permutation expansion, reduced mod q."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = perm_sign(perm)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % q


def brute_gl_count(p: int, k: int, n: int) -> int:
    """Count invertible n x n matrices over Z/p^k by exhaustive scan."""
    q = p**k
    count = 0
    for ent in itertools.product(range(q), repeat=n * n):
        rows = [list(ent[i * n : (i + 1) * n]) for i in range(n)]
        if naive_det(rows, p) != 0:
            count += 1
    return count


def mulclose(gens, mul, limit=1_000_000):
    """Naive closure of a generating set under multiplication."""
    els = set(gens)
    frontier = list(els)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = mul(a, g)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if len(els) > limit:
                        raise RuntimeError("closure blew past the test limit")
        frontier = new
    return els


def cocycle_defect_by_walk(word, cvecs, rep):
    """c(w) computed letter by letter from the cocycle rule, no Fox calculus.

    Maintains the rule c(u x) = c(u) + Ad(rho(u)) c(x) and
    c(u x^-1) = c(u) - Ad(rho(u x^-1)) c(x) along the word.  ``cvecs`` is
    one matrix per generator over the residue field of rep.
    """
    Rp = rep.R.residue_field()
    from locsys.ring import reduce_matrix

    imgs = [reduce_matrix(m, Rp) for m in rep.images]
    invs = [mat_inverse(m, Rp) for m in imgs]
    n = rep.n
    p = Rp.p
    acc = [0] * (n * n)
    prefix = Matrix(n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))
    for g, e in word.letters:
        if e == 1:
            conj = mat_mul(mat_mul(prefix, cvecs[g], Rp), mat_inverse(prefix, Rp), Rp)
            acc = [(x + y) % p for x, y in zip(acc, conj.entries)]
            prefix = mat_mul(prefix, imgs[g], Rp)
        else:
            prefix = mat_mul(prefix, invs[g], Rp)
            conj = mat_mul(mat_mul(prefix, cvecs[g], Rp), mat_inverse(prefix, Rp), Rp)
            acc = [(x - y) % p for x, y in zip(acc, conj.entries)]
    return Matrix(n, tuple(acc))
