"""Words, reduced forms, normal forms, and conjugacy in G = (H*K; A=B, phi).

A word is an alternating-or-not sequence of syllables (tag, element index)
with tag 'H' or 'K'; the empty word is the identity of G.  Reduction merges
adjacent same-factor syllables and absorbs syllables lying in the
amalgamated subgroup by transporting them across phi.  The canonical normal
form uses fixed right transversals with minimal-index coset representatives,
so equality in G is decidable by comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import fingroup
from .errors import (
    IndexOutOfRange,
    NotCentral,
    NotCyclicallyReduced,
    NotSubgroup,
    PhiNotIso,
)
from .fingroup import FiniteGroup, GroupHom, Subgroup

TAG_H = "H"
TAG_K = "K"


@dataclass(frozen=True)
class Word:
    syllables: tuple[tuple[str, int], ...] = ()

    def __len__(self) -> int:
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def concat(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)


def word(syllables: Iterable[tuple[str, int]]) -> Word:
    """Build a word, dropping identity syllables (never stored)."""
    out = []
    for tag, e in syllables:
        if tag not in (TAG_H, TAG_K):
            raise IndexOutOfRange(f"bad factor tag {tag!r}")
        if e != 0:
            out.append((tag, e))
    return Word(tuple(out))


EMPTY = Word()


@dataclass(frozen=True)
class AmalgamSpec:
    """(H, K, A <= H, B <= K, phi: A -> B) defining (H*K; A=B, phi).

    ``phi`` is stored as a sorted tuple of (a, b) pairs on parent element
    indices.  Use validate_spec / make_amalgam to construct checked specs.
    """
    H: FiniteGroup
    K: FiniteGroup
    A: Subgroup
    B: Subgroup
    phi: tuple[tuple[int, int], ...]
    central: bool = field(default=False, compare=False)

    def factor(self, tag: str) -> FiniteGroup:
        return self.H if tag == TAG_H else self.K

    def amalg(self, tag: str) -> Subgroup:
        return self.A if tag == TAG_H else self.B

    @property
    def phi_map(self) -> dict[int, int]:
        return dict(self.phi)

    @property
    def phi_inv_map(self) -> dict[int, int]:
        return {b: a for a, b in self.phi}

    def transport(self, tag: str, e: int) -> int:
        """Carry an amalgamated element to the other factor's indexing."""
        return dict(self.phi)[e] if tag == TAG_H else {b: a for a, b in self.phi}[e]

    def in_amalg(self, tag: str, e: int) -> bool:
        return e in self.amalg(tag).element_set()


def make_amalgam(H: FiniteGroup, K: FiniteGroup,
                 A: Iterable[int], B: Iterable[int],
                 phi: dict[int, int]) -> AmalgamSpec:
    spec = AmalgamSpec(H, K,
                       fingroup.make_subgroup(H, A),
                       fingroup.make_subgroup(K, B),
                       tuple(sorted(phi.items())))
    return validate_spec(spec)


def validate_spec(spec: AmalgamSpec) -> AmalgamSpec:
    """Verify all invariants; records whether A and B are central."""
    H, K, A, B = spec.H, spec.K, spec.A, spec.B
    fingroup.make_subgroup(H, A.elements)
    fingroup.make_subgroup(K, B.elements)
    if A.parent is not H and A.parent != H:
        raise NotSubgroup("A is not a subgroup of H")
    if B.parent is not K and B.parent != K:
        raise NotSubgroup("B is not a subgroup of K")
    fwd = dict(spec.phi)
    if sorted(fwd) != list(A.elements) or sorted(fwd.values()) != list(B.elements):
        raise PhiNotIso("phi is not a bijection A -> B")
    if len(set(fwd.values())) != len(fwd):
        raise PhiNotIso("phi is not injective")
    for a1 in A.elements:
        for a2 in A.elements:
            if fwd[H.mul(a1, a2)] != K.mul(fwd[a1], fwd[a2]):
                raise PhiNotIso(f"phi not a homomorphism at ({a1},{a2})")
    zH = fingroup.center(H).element_set()
    zK = fingroup.center(K).element_set()
    central = A.element_set() <= zH and B.element_set() <= zK
    return AmalgamSpec(H, K, A, B, spec.phi, central)


def _merge_pass(spec: AmalgamSpec, syl: list[tuple[str, int]]) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for tag, e in syl:
        if out and out[-1][0] == tag:
            merged = spec.factor(tag).mul(out[-1][1], e)
            out.pop()
            if merged != 0:
                out.append((tag, merged))
        elif e != 0:
            out.append((tag, e))
    return out


def reduce(spec: AmalgamSpec, w: Word) -> Word:
    """A reduced form of w: adjacent syllables from different factors, no
    interior syllable in the amalgamated subgroup.  A length-1 result lying
    in the amalgam is canonicalized to tag H."""
    syl = list(w.syllables)
    while True:
        syl = _merge_pass(spec, syl)
        if len(syl) <= 1:
            break
        flipped = False
        for i, (tag, e) in enumerate(syl):
            if spec.in_amalg(tag, e):
                other = TAG_K if tag == TAG_H else TAG_H
                syl[i] = (other, spec.transport(tag, e))
                flipped = True
                break
        if not flipped:
            break
    if len(syl) == 1 and syl[0][0] == TAG_K and spec.in_amalg(TAG_K, syl[0][1]):
        syl = [(TAG_H, spec.transport(TAG_K, syl[0][1]))]
    return Word(tuple(syl))


def length(spec: AmalgamSpec, w: Word) -> int:
    """Syllable count of the reduced form; the identity has length 0."""
    return len(reduce(spec, w))


def inverse(spec: AmalgamSpec, w: Word) -> Word:
    return Word(tuple((tag, spec.factor(tag).inv(e))
                      for tag, e in reversed(w.syllables)))


@dataclass(frozen=True)
class NormalForm:
    """w = a * t1 * ... * tn with a in A (H-side index) and each ti the
    minimal-index non-identity right-coset representative in its factor;
    tags alternate."""
    amalgam_part: int
    tail: tuple[tuple[str, int], ...]


def _coset_decompose(spec: AmalgamSpec, tag: str, e: int) -> tuple[int, int]:
    """e = a * rep with a in the amalgamated subgroup of this factor and rep
    the minimal element of its right coset."""
    G = spec.factor(tag)
    sub = spec.amalg(tag)
    rep = min(G.mul(a, e) for a in sub.elements)
    a = G.mul(e, G.inv(rep))
    return a, rep


def normal_form(spec: AmalgamSpec, w: Word) -> NormalForm:
    """Canonical form w.r.t. the fixed minimal-index transversals.

    Two words are equal in G iff their normal forms are identical.
    """
    syl = reduce(spec, w).syllables
    if len(syl) == 1 and spec.in_amalg(syl[0][0], syl[0][1]):
        tag, e = syl[0]
        a = e if tag == TAG_H else spec.transport(TAG_K, e)
        return NormalForm(a, ())
    carry = 0  # element of A, H-side index
    tail: list[tuple[str, int]] = []
    for tag, e in reversed(syl):
        G = spec.factor(tag)
        c = carry if tag == TAG_H else spec.phi_map[carry]
        a, rep = _coset_decompose(spec, tag, G.mul(e, c))
        tail.append((tag, rep))
        carry = a if tag == TAG_H else spec.phi_inv_map[a]
    tail.reverse()
    return NormalForm(carry, tuple(tail))


def render(spec: AmalgamSpec, nf: NormalForm) -> Word:
    """A word spelling the normal form."""
    head = [(TAG_H, nf.amalgam_part)] if nf.amalgam_part != 0 else []
    return word(head + list(nf.tail))


def equal_in_g(spec: AmalgamSpec, u: Word, v: Word) -> bool:
    return normal_form(spec, u) == normal_form(spec, v)


def cyclically_reduce(spec: AmalgamSpec, w: Word) -> tuple[Word, Word]:
    """A cyclically reduced c and conjugator z with z^-1 * w * z = c in G."""
    c = reduce(spec, w)
    z = EMPTY
    while len(c) > 1 and c.syllables[0][0] == c.syllables[-1][0]:
        first = Word(c.syllables[:1])
        c = reduce(spec, Word(c.syllables[1:]).concat(first))
        z = z.concat(first)
    z = reduce(spec, z)
    assert equal_in_g(spec, inverse(spec, z).concat(w).concat(z), c)
    return c, z


def is_cyclically_reduced(spec: AmalgamSpec, w: Word) -> bool:
    r = reduce(spec, w)
    if r.syllables != w.syllables:
        return False
    return len(w) <= 1 or w.syllables[0][0] != w.syllables[-1][0]


def cyclic_permutations(spec: AmalgamSpec, w: Word) -> tuple[Word, ...]:
    """The rotations x_i...x_n x_1...x_{i-1}; a length-<=1 word is its own
    unique cyclic permutation."""
    if not is_cyclically_reduced(spec, w):
        raise NotCyclicallyReduced(str(w))
    if len(w) <= 1:
        return (w,)
    n = len(w)
    return tuple(Word(w.syllables[i:] + w.syllables[:i]) for i in range(n))


@dataclass(frozen=True)
class ConjugacyVerdict:
    conjugate: bool
    conjugator: Optional[Word]
    certificate: tuple
    """For CONJUGATE: ('conjugator', ...) with the verified conjugator word.
    For NOT-CONJUGATE: the exhausted comparison, e.g. ('length-mismatch', m, n)
    or ('exhausted', <description of the compared finite set>)."""


def _verified(spec: AmalgamSpec, x: Word, y: Word, z: Word) -> ConjugacyVerdict:
    z = reduce(spec, z)
    assert equal_in_g(spec, inverse(spec, z).concat(x).concat(z), y), \
        "conjugator failed verification"
    return ConjugacyVerdict(True, z, ("conjugator", z.syllables))


def _not(reason: tuple) -> ConjugacyVerdict:
    return ConjugacyVerdict(False, None, reason)


def _canonical_length1(spec: AmalgamSpec, w: Word) -> tuple[str, int]:
    """Canonicalize a length-1 word into A (tag H) when possible."""
    tag, e = w.syllables[0]
    if tag == TAG_K and spec.in_amalg(TAG_K, e):
        return TAG_H, spec.transport(TAG_K, e)
    return tag, e


def is_conjugate_central(spec: AmalgamSpec, x: Word, y: Word) -> ConjugacyVerdict:
    """Conjugacy decision for central amalgams: conjugates have equal
    lengths; at length <= 1 conjugacy reduces to factor conjugacy, and at
    length > 1 to equality with a cyclic permutation."""
    if not spec.central:
        raise NotCentral("amalgamated subgroups are not central in the factors")
    cx, zx = cyclically_reduce(spec, x)
    cy, zy = cyclically_reduce(spec, y)
    zy_inv = inverse(spec, zy)
    if len(cx) != len(cy):
        return _not(("length-mismatch", len(cx), len(cy)))
    if len(cx) == 0:
        return _verified(spec, x, y, zx.concat(zy_inv))
    if len(cx) == 1:
        tx, ex = _canonical_length1(spec, cx)
        ty, ey = _canonical_length1(spec, cy)
        x_in_a = spec.in_amalg(tx, ex) and tx == TAG_H
        y_in_a = spec.in_amalg(ty, ey) and ty == TAG_H
        if x_in_a or y_in_a:
            # A is central in both factors, hence central in G: classes of
            # amalgamated elements are singletons.
            if x_in_a and y_in_a and ex == ey:
                return _verified(spec, x, y, zx.concat(zy_inv))
            return _not(("central-amalgam-singleton", (tx, ex), (ty, ey)))
        if tx != ty:
            return _not(("different-factors", (tx, ex), (ty, ey)))
        G = spec.factor(tx)
        t = fingroup.are_conjugate_in(G, ex, ey)
        if t is None:
            return _not(("factor-classes-differ", (tx, ex), (ty, ey)))
        return _verified(spec, x, y, zx.concat(word([(tx, t)])).concat(zy_inv))
    nfy = normal_form(spec, cy)
    compared = []
    for i, u in enumerate(cyclic_permutations(spec, cx)):
        if normal_form(spec, u) == nfy:
            prefix = Word(cx.syllables[:i])
            return _verified(spec, x, y, zx.concat(prefix).concat(zy_inv))
        compared.append(u.syllables)
    return _not(("exhausted", tuple(compared)))


def _length1_closure(spec: AmalgamSpec, tag: str, e: int) -> dict[tuple[str, int], Word]:
    """Fixpoint closure of the factor conjugacy class of a length-<=1 element
    under transport through the amalgamated subgroups.  Maps each reachable
    (tag, element) to a word z with z^-1 x z equal to it."""
    start = (tag, e)
    reached: dict[tuple[str, int], Word] = {start: EMPTY}
    frontier = [start]
    while frontier:
        (t, v) = frontier.pop(0)
        zv = reached[(t, v)]
        G = spec.factor(t)
        for c in G.elements():
            nxt = (t, G.conj(v, c))
            if nxt not in reached:
                reached[nxt] = zv.concat(word([(t, c)]))
                frontier.append(nxt)
        if spec.in_amalg(t, v):
            other = TAG_K if t == TAG_H else TAG_H
            nxt = (other, spec.transport(t, v))
            if nxt not in reached:
                reached[nxt] = zv
                frontier.append(nxt)
    return reached


def is_conjugate_general(spec: AmalgamSpec, x: Word, y: Word) -> ConjugacyVerdict:
    """Conjugacy decision without the centrality assumption.

    Length > 1: finite search over amalgam conjugates of cyclic permutations.
    Length <= 1: membership in the transport-closure of the factor class.
    """
    cx, zx = cyclically_reduce(spec, x)
    cy, zy = cyclically_reduce(spec, y)
    zy_inv = inverse(spec, zy)
    if len(cx) != len(cy):
        return _not(("length-mismatch", len(cx), len(cy)))
    if len(cx) == 0:
        return _verified(spec, x, y, zx.concat(zy_inv))
    if len(cx) == 1:
        closure = _length1_closure(spec, *cx.syllables[0])
        ty, ey = cy.syllables[0]
        if (ty, ey) in closure:
            return _verified(spec, x, y, zx.concat(closure[(ty, ey)]).concat(zy_inv))
        return _not(("closure-exhausted", tuple(sorted(closure))))
    nfy = normal_form(spec, cy)
    compared = []
    for i, u in enumerate(cyclic_permutations(spec, cx)):
        prefix = Word(cx.syllables[:i])
        for a in spec.A.elements:
            a_word = word([(TAG_H, a)])
            cand = reduce(spec, inverse(spec, a_word).concat(u).concat(a_word))
            if normal_form(spec, cand) == nfy:
                return _verified(spec, x, y,
                                 zx.concat(prefix).concat(a_word).concat(zy_inv))
            compared.append((u.syllables, a))
    return _not(("exhausted", tuple(compared)))
