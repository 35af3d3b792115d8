"""Exact finite-group engine over multiplication tables.

Groups are order-n multiplication tables on element indices 0..n-1 with
identity 0.  Everything is immutable and pure; enumeration results are
returned in a deterministic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import (
    InconsistentPartial,
    IndexOutOfRange,
    NotAGroup,
    NotNormal,
    NotPrime,
    NotSubgroup,
)


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    names: Optional[tuple[str, ...]] = None
    _inv: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, z: int) -> int:
        """z^-1 * g * z."""
        return self.mul(self.mul(self.inv(z), g), z)

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def name_of(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def index_of_name(self, token: str) -> int:
        if self.names and token in self.names:
            return self.names.index(token)
        try:
            idx = int(token)
        except ValueError:
            raise IndexOutOfRange(f"unknown element {token!r}")
        if not 0 <= idx < self.order:
            raise IndexOutOfRange(f"element {idx} out of range 0..{self.order - 1}")
        return idx


def from_table(order: int, table: Sequence[Sequence[int]],
               names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """Validate a multiplication table and build a group.

    The identity is relabeled to index 0 if it sits elsewhere.  Raises
    NotAGroup with a reason on any axiom failure.
    """
    if order <= 0 or len(table) != order or any(len(row) != order for row in table):
        raise NotAGroup("not-a-latin-square", "table is not order x order")
    rows = [tuple(int(x) for x in row) for row in table]
    rng = range(order)
    full = set(rng)
    for row in rows:
        if any(not 0 <= x < order for x in row):
            raise NotAGroup("not-a-latin-square", "entry out of range")
        if set(row) != full:
            raise NotAGroup("not-a-latin-square", "row is not a permutation")
    for j in rng:
        if {rows[i][j] for i in rng} != full:
            raise NotAGroup("not-a-latin-square", "column is not a permutation")

    ident = next((e for e in rng
                  if all(rows[e][x] == x and rows[x][e] == x for x in rng)), None)
    if ident is None:
        raise NotAGroup("no-identity")
    if ident != 0:
        perm = list(rng)
        perm[0], perm[ident] = ident, 0  # involution: old index -> new index
        relabeled = [[0] * order for _ in rng]
        for a in rng:
            for b in rng:
                relabeled[perm[a]][perm[b]] = perm[rows[a][b]]
        rows = [tuple(r) for r in relabeled]
        if names is not None:
            names = list(names)
            names[0], names[ident] = names[ident], names[0]

    for a in rng:
        for b in rng:
            ab = rows[a][b]
            for c in rng:
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise NotAGroup("non-associative", f"({a}*{b})*{c}")
    inv = [None] * order
    for a in rng:
        for b in rng:
            if rows[a][b] == 0 and rows[b][a] == 0:
                inv[a] = b
                break
        if inv[a] is None:
            raise NotAGroup("no-inverse", str(a))
    return FiniteGroup(order, tuple(rows),
                       tuple(names) if names is not None else None,
                       tuple(inv))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]  # sorted, contains 0

    def __contains__(self, x: int) -> bool:
        return x in set(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as a standalone group plus the local->parent embedding."""
        emb = self.elements
        local = {p: i for i, p in enumerate(emb)}
        table = tuple(tuple(local[self.parent.mul(a, b)] for b in emb) for a in emb)
        names = tuple(self.parent.name_of(p) for p in emb) if self.parent.names else None
        return from_table(len(emb), table, names), emb


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap an element set as a Subgroup, verifying closure."""
    elts = sorted(set(elements))
    s = set(elts)
    if 0 not in s:
        raise NotSubgroup("missing identity")
    for a in elts:
        if not 0 <= a < G.order:
            raise IndexOutOfRange(f"element {a} out of range")
        if G.inv(a) not in s:
            raise NotSubgroup(f"not closed under inverse at {a}")
        for b in elts:
            if G.mul(a, b) not in s:
                raise NotSubgroup(f"not closed under product at ({a},{b})")
    return Subgroup(G, tuple(elts))


def subgroup_closure(G: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing the generators ({0} for an empty set)."""
    gens = list(generators)
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexOutOfRange(f"generator {g} out of range")
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in (G.mul(x, g), G.mul(x, G.inv(g))):
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return Subgroup(G, tuple(sorted(seen)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def center(G: FiniteGroup) -> Subgroup:
    z = [a for a in G.elements()
         if all(G.mul(a, b) == G.mul(b, a) for b in G.elements())]
    return Subgroup(G, tuple(z))


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    gens = set()
    for x in seed:
        for z in G.elements():
            gens.add(G.conj(x, z))
    return subgroup_closure(G, gens)


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    s = H.element_set()
    return all(G.conj(h, z) in s for h in H.elements for z in G.elements())


@lru_cache(maxsize=None)
def enumerate_subgroups(G: FiniteGroup) -> tuple[Subgroup, ...]:
    """All subgroups, sorted by size then lexicographically.

    Closure-of-subsets search; fine for desk-scale orders.
    """
    found = {(0,): trivial_subgroup(G)}
    frontier = [trivial_subgroup(G)]
    while frontier:
        H = frontier.pop()
        for g in G.elements():
            if g in H.element_set():
                continue
            bigger = subgroup_closure(G, set(H.elements) | {g})
            if bigger.elements not in found:
                found[bigger.elements] = bigger
                frontier.append(bigger)
    return tuple(sorted(found.values(), key=lambda s: (len(s), s.elements)))


@lru_cache(maxsize=None)
def enumerate_normal_subgroups(G: FiniteGroup) -> tuple[Subgroup, ...]:
    """All normal subgroups, sorted by size then lexicographically.

    Generated as joins of normal closures of single elements, which reach
    every normal subgroup without enumerating the full subgroup lattice.
    """
    closures = [normal_closure(G, [g]) for g in G.elements()]
    found = {(0,): trivial_subgroup(G)}
    frontier = [trivial_subgroup(G)]
    while frontier:
        N = frontier.pop()
        for C in closures:
            if C.element_set() <= N.element_set():
                continue
            join = subgroup_closure(G, set(N.elements) | set(C.elements))
            if join.elements not in found:
                found[join.elements] = join
                frontier.append(join)
    return tuple(sorted(found.values(), key=lambda s: (len(s), s.elements)))


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_valid(self) -> bool:
        if self.images[0] != 0 or len(self.images) != self.source.order:
            return False
        m = self.images
        return all(m[self.source.mul(a, b)] == self.target.mul(m[a], m[b])
                   for a in self.source.elements() for b in self.source.elements())

    def compose(self, then: "GroupHom") -> "GroupHom":
        """x -> then(self(x))."""
        return GroupHom(self.source, then.target,
                        tuple(then.images[i] for i in self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.source,
                        tuple(x for x in self.source.elements() if self.images[x] == 0))


def make_hom(source: FiniteGroup, target: FiniteGroup,
             images: Sequence[int]) -> GroupHom:
    h = GroupHom(source, target, tuple(images))
    if not h.is_valid():
        raise NotSubgroup("mapping is not a homomorphism")
    return h


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(G.elements()))


def trivial_hom(G: FiniteGroup, X: FiniteGroup) -> GroupHom:
    return GroupHom(G, X, (0,) * G.order)


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Quotient on minimal-index coset representatives plus the projection."""
    if not is_normal(G, N):
        raise NotNormal(f"{N.elements} is not normal")
    coset_of = {}
    reps = []
    for g in G.elements():
        if g in coset_of:
            continue
        coset = sorted(G.mul(g, n) for n in N.elements)
        rep = coset[0]
        reps.append(rep)
        for x in coset:
            coset_of[x] = rep
    reps.sort()  # identity coset has rep 0, hence first
    label = {rep: i for i, rep in enumerate(reps)}
    table = tuple(tuple(label[coset_of[G.mul(a, b)]] for b in reps) for a in reps)
    names = tuple(G.name_of(r) for r in reps) if G.names else None
    Q = from_table(len(reps), table, names)
    proj = GroupHom(G, Q, tuple(label[coset_of[g]] for g in G.elements()))
    return Q, proj


@lru_cache(maxsize=None)
def conjugacy_classes(G: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Conjugacy classes sorted by minimal element; the class of 0 is first."""
    remaining = set(G.elements())
    classes = []
    while remaining:
        g = min(remaining)
        cls = sorted({G.conj(g, z) for z in G.elements()})
        classes.append(tuple(cls))
        remaining -= set(cls)
    return tuple(sorted(classes, key=lambda c: c[0]))


def class_of(G: FiniteGroup, g: int) -> tuple[int, ...]:
    for cls in conjugacy_classes(G):
        if g in cls:
            return cls
    raise IndexOutOfRange(str(g))


def are_conjugate_in(G: FiniteGroup, a: int, b: int) -> Optional[int]:
    """A conjugating element z with z^-1 a z = b, or None."""
    for z in G.elements():
        if G.conj(a, z) == b:
            return z
    return None


@lru_cache(maxsize=None)
def generating_sequence(G: FiniteGroup) -> tuple[int, ...]:
    """Greedy minimal generating sequence: repeatedly add the smallest
    element outside the closure so far."""
    gens: list[int] = []
    closed = subgroup_closure(G, gens)
    while len(closed) < G.order:
        g = min(set(G.elements()) - closed.element_set())
        gens.append(g)
        closed = subgroup_closure(G, gens)
    return tuple(gens)


@lru_cache(maxsize=None)
def _element_expressions(G: FiniteGroup) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each element, a pair chain expressing it: expr[e] is a sequence of
    (previous element, generator position) steps ending at e via right
    multiplication.  Stored as, per element, (prev, genpos) of the last step;
    identity has an empty marker (-1, -1)."""
    gens = generating_sequence(G)
    last: dict[int, tuple[int, int]] = {0: (-1, -1)}
    frontier = [0]
    while frontier:
        x = frontier.pop(0)
        for gi, g in enumerate(gens):
            y = G.mul(x, g)
            if y not in last:
                last[y] = (x, gi)
                frontier.append(y)
    return tuple(last[e] for e in G.elements())


def _images_from_generators(G: FiniteGroup, X: FiniteGroup,
                            gen_images: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Extend generator images along the BFS expressions; verify the
    homomorphism law on all pairs.  None if not a homomorphism."""
    exprs = _element_expressions(G)
    images = [None] * G.order
    images[0] = 0
    # exprs is in BFS discovery order only elementwise; resolve recursively
    def img(e: int) -> int:
        if images[e] is None:
            prev, gi = exprs[e]
            images[e] = X.mul(img(prev), gen_images[gi])
        return images[e]

    for e in G.elements():
        img(e)
    for a in G.elements():
        for b in G.elements():
            if images[G.mul(a, b)] != X.mul(images[a], images[b]):
                return None
    return tuple(images)


def enumerate_homs(G: FiniteGroup, X: FiniteGroup,
                   partial: Optional[dict[int, int]] = None) -> tuple[GroupHom, ...]:
    """All homomorphisms G -> X extending ``partial``, in deterministic order.

    Backtracks over images of a fixed greedy generating sequence, pruning by
    element-order divisibility.  ``partial`` may constrain arbitrary elements
    of G (not just generators); constraints already violating a relation
    raise InconsistentPartial.
    """
    partial = dict(partial) if partial else {}
    for e, x in partial.items():
        if not 0 <= e < G.order:
            raise IndexOutOfRange(f"element {e} out of range")
        if not 0 <= x < X.order:
            raise IndexOutOfRange(f"image {x} out of range")
    if partial.get(0, 0) != 0:
        raise InconsistentPartial("identity must map to identity")
    for e, x in partial.items():
        if G.element_order(e) % X.element_order(x) != 0:
            raise InconsistentPartial(f"image order of {e} does not divide its order")
    for a in partial:
        for b in partial:
            ab = G.mul(a, b)
            if ab in partial and partial[ab] != X.mul(partial[a], partial[b]):
                raise InconsistentPartial(f"violated at ({a},{b})")

    gens = generating_sequence(G)
    gen_orders = [G.element_order(g) for g in gens]
    results = []

    def backtrack(pos: int, chosen: list[int]):
        if pos == len(gens):
            images = _images_from_generators(G, X, chosen)
            if images is None:
                return
            if any(images[e] != x for e, x in partial.items()):
                return
            results.append(GroupHom(G, X, images))
            return
        for x in range(X.order):
            if gen_orders[pos] % X.element_order(x) == 0:
                backtrack(pos + 1, chosen + [x])

    backtrack(0, [])
    return tuple(results)


def check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise NotPrime(str(p))


def is_p_group(G: FiniteGroup, p: int) -> bool:
    check_prime(p)
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


def index(G: FiniteGroup, H: Subgroup) -> int:
    return G.order // len(H)


def is_p_power_index(G: FiniteGroup, H: Subgroup, p: int) -> bool:
    check_prime(p)
    n = index(G, H)
    while n % p == 0:
        n //= p
    return n == 1


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    s = H.element_set()
    elts = [z for z in G.elements() if all(G.conj(h, z) in s for h in H.elements)]
    return Subgroup(G, tuple(elts))


def is_subnormal_p_index(G: FiniteGroup, H: Subgroup, p: int) -> bool:
    """Chain H = H0 <| H1 <| ... <| G with p-power indices, by normalizer ascent."""
    check_prime(p)
    current = H
    while True:
        if len(current) == G.order:
            return is_p_power_index(G, H, p)
        nxt = normalizer(G, current)
        if len(nxt) == len(current):
            return False
        current = nxt


def is_p_isolated(G: FiniteGroup, H: Subgroup, p: int) -> bool:
    """Closed under p-th roots: y^p in H implies y in H."""
    check_prime(p)
    s = H.element_set()
    for y in G.elements():
        yp = 0
        for _ in range(p):
            yp = G.mul(yp, y)
        if yp in s and y not in s:
            return False
    return True


def is_p_prime_isolated(G: FiniteGroup, H: Subgroup, p: int) -> bool:
    """q-isolated for every prime q != p dividing the order of G."""
    check_prime(p)
    n = G.order
    primes = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            primes.add(d)
            n //= d
        d += 1
    if n > 1:
        primes.add(n)
    return all(is_p_isolated(G, H, q) for q in sorted(primes) if q != p)


# Standard constructions used throughout the test corpus and the witness
# catalog.

def cyclic(n: int) -> FiniteGroup:
    return from_table(n, [[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    n1, n2 = G1.order, G2.order
    table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a1, a2, b1, b2 in itertools.product(range(n1), range(n2), range(n1), range(n2)):
        table[a1 * n2 + a2][b1 * n2 + b2] = G1.mul(a1, b1) * n2 + G2.mul(a2, b2)
    return from_table(n1 * n2, table)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: r^i s^j with index j*n + i."""
    def mul(i1, j1, i2, j2):
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return ((j1 + j2) % 2) * n + i
    table = [[mul(a % n, a // n, b % n, b // n) for b in range(2 * n)]
             for a in range(2 * n)]
    return from_table(2 * n, table)


def quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion group Q_{4m}: a^i b^j with index j*2m + i."""
    if order % 4 != 0 or order < 8:
        raise IndexOutOfRange("generalized quaternion groups have order 4m >= 8")
    m = order // 4
    n = 2 * m

    def mul(i1, j1, i2, j2):
        i = (i1 + (i2 if j1 == 0 else -i2) + (m if j1 and j2 else 0)) % n
        return ((j1 + j2) % 2) * n + i
    table = [[mul(a % n, a // n, b % n, b // n) for b in range(order)]
             for a in range(order)]
    return from_table(order, table)


def symmetric3() -> FiniteGroup:
    """S3 on indices 0..5 via composition of permutations of {0,1,2}."""
    perms = sorted(itertools.permutations(range(3)))
    perms.sort(key=lambda p: p != (0, 1, 2))  # identity first
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    return from_table(6, table)
