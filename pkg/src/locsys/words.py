"""Free-group words, finite presentations, Fox calculus, Reidemeister-Schreier.

Words are sequences of letters (generator index, exponent +-1), kept in
reduced form for equality and hashing.  Generator indices are 0-based.
The Reidemeister-Schreier routine produces generators of a finite-index
subgroup given as the preimage of a subgroup of a finite group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TypeVar

from .errors import IndexOverflowError, WordSyntaxError
from .ring import CoeffRing, Matrix, identity, mat_inverse, mat_mul

Letter = tuple[int, int]

T = TypeVar("T")

DEFAULT_MAX_INDEX = 20000


@dataclass(frozen=True)
class Word:
    """A free-group word; empty tuple is the identity."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for g, e in self.letters:
            if g < 0:
                raise ValueError(f"generator index must be >= 0, got {g}")
            if e not in (1, -1):
                raise ValueError(f"letter exponent must be +1 or -1, got {e}")

    def __len__(self) -> int:
        return len(self.letters)

    def support(self) -> frozenset[int]:
        return frozenset(g for g, _ in self.letters)

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)


EMPTY_WORD = Word(())


def word_reduce(w: Word) -> Word:
    """Free reduction: cancel adjacent x x^-1 pairs until none remain."""
    stack: list[Letter] = []
    for g, e in w.letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    return Word(tuple(stack))


def word_inverse(w: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(w.letters)))


def word_concat(u: Word, v: Word) -> Word:
    return word_reduce(Word(u.letters + v.letters))


def word_pow(w: Word, e: int) -> Word:
    if e < 0:
        w = word_inverse(w)
        e = -e
    out = EMPTY_WORD
    for _ in range(e):
        out = word_concat(out, w)
    return out


def single(g: int, e: int = 1) -> Word:
    return Word(((g, e),))


@dataclass(frozen=True)
class Presentation:
    """A finitely presented group <x_1 .. x_rank | relators>."""

    rank: int
    relators: tuple[Word, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be >= 0")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.rank)))
        if len(self.names) != self.rank:
            raise ValueError("need one name per generator")
        reduced = tuple(word_reduce(w) for w in self.relators)
        object.__setattr__(self, "relators", reduced)
        for w in reduced:
            if w.max_generator() >= self.rank:
                raise ValueError(f"relator uses generator index {w.max_generator()}, rank is {self.rank}")

    def is_free(self) -> bool:
        return not self.relators


def free_group(rank: int, names: Sequence[str] = ()) -> Presentation:
    return Presentation(rank, (), tuple(names))


# -- word syntax ("a b^-1 a^2") ----------------------------------------------

def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse whitespace-separated letters, each NAME or NAME^INT."""
    index = {name: i for i, name in enumerate(names)}
    letters: list[Letter] = []
    for pos, token in enumerate(text.split(), start=1):
        name, caret, exp_text = token.partition("^")
        if name not in index:
            raise WordSyntaxError(
                f"token {pos} ({token!r}): unknown generator {name!r}", position=pos
            )
        if caret:
            try:
                e = int(exp_text)
            except ValueError:
                raise WordSyntaxError(
                    f"token {pos} ({token!r}): bad exponent {exp_text!r}", position=pos
                ) from None
            if e == 0:
                raise WordSyntaxError(
                    f"token {pos} ({token!r}): exponent must be nonzero", position=pos
                )
        else:
            e = 1
        g = index[name]
        sign = 1 if e > 0 else -1
        letters.extend((g, sign) for _ in range(abs(e)))
    return word_reduce(Word(tuple(letters)))


def word_to_string(w: Word, names: Sequence[str]) -> str:
    """Inverse of parse_word; adjacent equal letters collapse to NAME^e."""
    if not w.letters:
        return ""
    runs: list[tuple[int, int]] = []
    for g, e in w.letters:
        if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (e > 0):
            runs[-1] = (g, runs[-1][1] + e)
        else:
            runs.append((g, e))
    parts = []
    for g, e in runs:
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
    return " ".join(parts)


# -- evaluation ---------------------------------------------------------------

def word_eval(
    w: Word,
    images: Sequence[Matrix],
    R: CoeffRing,
    inverses: Optional[Sequence[Matrix]] = None,
) -> Matrix:
    """The product of images along w; the empty word gives Id.

    Inverses are computed on demand (NotAUnitError if an inverted letter's
    image is singular); pass precomputed ``inverses`` in hot loops.
    """
    n = images[0].n if images else 1
    acc = identity(n)
    inv_cache: dict[int, Matrix] = {}
    for g, e in w.letters:
        if e == 1:
            m = images[g]
        elif inverses is not None:
            m = inverses[g]
        else:
            m = inv_cache.get(g)
            if m is None:
                m = mat_inverse(images[g], R)
                inv_cache[g] = m
        acc = mat_mul(acc, m, R)
    return acc


# -- Fox free differential calculus -------------------------------------------

@dataclass(frozen=True)
class FoxDerivative:
    """d(w)/d(x_gen) as a signed list of prefix words in the group ring."""

    gen: int
    terms: tuple[tuple[int, Word], ...]


def fox_derivative(w: Word, gen: int) -> FoxDerivative:
    """Free derivative of a reduced word with respect to generator ``gen``.

    Scan rule (product rule unrolled): a letter x_gen at position t
    contributes (+1, prefix), a letter x_gen^-1 contributes
    (-1, prefix x_gen^-1), where prefix is the subword before position t.
    """
    terms: list[tuple[int, Word]] = []
    prefix: list[Letter] = []
    for g, e in w.letters:
        if g == gen:
            if e == 1:
                terms.append((1, Word(tuple(prefix))))
            else:
                terms.append((-1, Word(tuple(prefix) + ((g, -1),))))
        prefix.append((g, e))
    return FoxDerivative(gen, tuple(terms))


def fox_eval(d: FoxDerivative, images: Sequence[Matrix], R: CoeffRing) -> Matrix:
    """Group-ring evaluation: sum of sign * rho(prefix) over the terms."""
    n = images[0].n if images else 1
    acc = Matrix(n, (0,) * (n * n))
    q = R.q
    for sign, u in d.terms:
        m = word_eval(u, images, R)
        if sign == 1:
            acc = Matrix(n, tuple((x + y) % q for x, y in zip(acc.entries, m.entries)))
        else:
            acc = Matrix(n, tuple((x - y) % q for x, y in zip(acc.entries, m.entries)))
    return acc


# -- Reidemeister-Schreier ----------------------------------------------------

@dataclass(frozen=True)
class SubgroupData:
    """Coset table and Schreier generators of a finite-index subgroup of F_r.

    Coset 0 is the subgroup itself.  ``gen_action[i][c]`` is the coset
    c * x_i, ``inv_action[i][c]`` the coset c * x_i^-1; both are complete
    permutation actions.  ``transversal[c]`` is the chosen representative
    word of coset c (BFS-minimal, prefix-closed).
    """

    rank: int
    index: int
    gen_action: tuple[tuple[int, ...], ...]
    inv_action: tuple[tuple[int, ...], ...]
    transversal: tuple[Word, ...]
    generators: tuple[Word, ...]

    def apply(self, coset: int, letter: Letter) -> int:
        g, e = letter
        table = self.gen_action if e == 1 else self.inv_action
        return table[g][coset]

    def coset_of_word(self, w: Word) -> int:
        c = 0
        for letter in w.letters:
            c = self.apply(c, letter)
        return c

    def contains_word(self, w: Word) -> bool:
        return self.coset_of_word(w) == 0


def schreier_subgroup(
    images: Sequence[T],
    mul: Callable[[T, T], T],
    inv: Callable[[T], T],
    member: Callable[[T], bool],
    max_index: int = DEFAULT_MAX_INDEX,
    generator_order: Optional[Sequence[int]] = None,
) -> SubgroupData:
    """Coset table and Schreier generators for U = preimage of a subgroup.

    ``images`` sends the free generators x_1..x_r into a finite group;
    ``member`` is the subgroup membership predicate there.  Cosets are
    enumerated breadth-first in generator order (``generator_order``
    permutes the expansion order, changing the transversal but not the
    subgroup).  Raises IndexOverflowError past ``max_index`` cosets.
    """
    r = len(images)
    if r == 0:
        raise ValueError("need at least one generator image")
    order = list(generator_order) if generator_order is not None else list(range(r))
    if sorted(order) != list(range(r)):
        raise ValueError("generator_order must be a permutation of range(rank)")

    e = mul(images[0], inv(images[0]))
    if not member(e):
        raise ValueError("membership predicate rejects the identity; not a subgroup")

    reps: list[T] = [e]
    rep_words: list[Word] = [EMPTY_WORD]
    gen_action: list[list[Optional[int]]] = [[None] * r]
    inv_action: list[list[Optional[int]]] = [[None] * r]
    tree_edges: set[tuple[int, int]] = set()

    def coset_of(g: T) -> Optional[int]:
        for idx, h in enumerate(reps):
            if member(mul(g, inv(h))):
                return idx
        return None

    c = 0
    while c < len(reps):
        for i in order:
            if gen_action[c][i] is not None:
                continue
            g = mul(reps[c], images[i])
            idx = coset_of(g)
            if idx is None:
                if len(reps) >= max_index:
                    raise IndexOverflowError(
                        f"coset enumeration exceeded max_index={max_index}"
                    )
                reps.append(g)
                rep_words.append(Word(rep_words[c].letters + ((i, 1),)))
                gen_action.append([None] * r)
                inv_action.append([None] * r)
                idx = len(reps) - 1
                tree_edges.add((c, i))
            gen_action[c][i] = idx
            inv_action[idx][i] = c
        c += 1

    m = len(reps)
    generators: list[Word] = []
    for c in range(m):
        for i in order:
            if (c, i) in tree_edges:
                continue
            target = gen_action[c][i]
            assert target is not None
            w = word_reduce(
                Word(rep_words[c].letters + ((i, 1),) + word_inverse(rep_words[target]).letters)
            )
            if w.letters:
                generators.append(w)

    return SubgroupData(
        rank=r,
        index=m,
        gen_action=tuple(tuple(gen_action[c][i] for c in range(m)) for i in range(r)),
        inv_action=tuple(tuple(inv_action[c][i] for c in range(m)) for i in range(r)),
        transversal=tuple(rep_words),
        generators=tuple(generators),
    )
