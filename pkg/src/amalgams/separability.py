"""Conjugacy p-separation witnesses and bounded residual-p diagnostics.

A witness for a non-conjugate pair (f, g) is a pair of factor homomorphisms
into a finite p-group that agree on the amalgamated subgroup (so the pair
extends to the whole amalgam) and send f and g to non-conjugate images.
The search ladder first tries quotient amalgams chosen case-by-case from
the shape of the reduced forms, then a direct enumeration of agreeing
homomorphism pairs, then the kill-the-amalgam collapse onto a direct
product of cyclic quotients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from . import amalgam as am
from . import fingroup
from . import graphgroups as gg
from . import quotients as qt
from .amalgam import TAG_H, TAG_K, AmalgamSpec, Word
from .errors import (
    BudgetExhausted,
    ElementsConjugate,
    NoRefinementFound,
    NotPPower,
    WrongShape,
)
from .fingroup import FiniteGroup, GroupHom


@dataclass(frozen=True)
class Witness:
    target: FiniteGroup
    psi_H: GroupHom
    psi_K: GroupHom
    strategy_tag: str


@dataclass(frozen=True)
class SearchBudget:
    p: int = 2
    max_target_order: int = 16
    max_quotient_index: int = 16
    max_conjugator_length: int = 4

    def __post_init__(self):
        fingroup.check_prime(self.p)
        if min(self.max_target_order, self.max_quotient_index,
               self.max_conjugator_length) < 1:
            raise NotPPower("budget caps must be positive")


def word_image(w: Witness, u: Word) -> int:
    """Image of a word in the target, psi_H / psi_K applied syllable-wise."""
    x = 0
    for tag, e in u:
        x = w.target.mul(x, w.psi_H(e) if tag == TAG_H else w.psi_K(e))
    return x


def agrees_on_amalgam(spec: AmalgamSpec, psi_H: GroupHom, psi_K: GroupHom) -> bool:
    phi = spec.phi_map
    return all(psi_H(a) == psi_K(phi[a]) for a in spec.A.elements)


def verify_witness(spec: AmalgamSpec, w: Witness, f: Word, g: Word,
                   p: int) -> bool:
    """Independent re-check: agreement on A, p-group target, images in
    distinct conjugacy classes."""
    if not (w.psi_H.is_valid() and w.psi_K.is_valid()):
        return False
    if not agrees_on_amalgam(spec, w.psi_H, w.psi_K):
        return False
    if not fingroup.is_p_group(w.target, p):
        return False
    fi, gi = word_image(w, f), word_image(w, g)
    return fingroup.class_of(w.target, fi) != fingroup.class_of(w.target, gi)


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n in lexicographically decreasing order of parts,
    largest-first within each partition."""
    if n == 0:
        yield ()
        return
    def rec(n, maxpart):
        if n == 0:
            yield ()
            return
        for first in range(min(n, maxpart), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    yield from rec(n, n)


@lru_cache(maxsize=None)
def _abelian_p_group(p: int, partition: tuple[int, ...]) -> FiniteGroup:
    G = fingroup.cyclic(1)
    for part in partition:
        G = fingroup.direct_product(G, fingroup.cyclic(p ** part))
    return G


def p_group_catalog(p: int, max_order: int,
                    extras: Sequence[FiniteGroup] = ()) -> tuple[FiniteGroup, ...]:
    """Search space of witness targets: all abelian p-groups of order
    <= max_order (one per partition), for p = 2 the dihedral and quaternion
    groups of order 8 and 16, plus caller extras; deduplicated by table."""
    fingroup.check_prime(p)
    n, k = max_order, 0
    while n % p == 0:
        n //= p
        k += 1
    if n != 1 or max_order < p:
        raise NotPPower(f"{max_order} is not a power of {p} (>= p)")
    catalog: list[FiniteGroup] = []
    for exp in range(1, k + 1):
        for partition in _partitions(exp):
            catalog.append(_abelian_p_group(p, partition))
        if p == 2 and exp == 3:
            catalog.append(fingroup.dihedral(4))
            catalog.append(fingroup.quaternion(8))
        if p == 2 and exp == 4:
            catalog.append(fingroup.dihedral(8))
            catalog.append(fingroup.quaternion(16))
    for X in extras:
        if fingroup.is_p_group(X, p) and X.order <= max_order:
            catalog.append(X)
    seen = set()
    out = []
    for X in catalog:
        key = (X.order, X.table)
        if key not in seen:
            seen.add(key)
            out.append(X)
    return tuple(out)


def agreeing_pairs(spec: AmalgamSpec,
                   X: FiniteGroup) -> Iterator[tuple[GroupHom, GroupHom]]:
    """All (psi_H, psi_K) into X with psi_K(a phi) = psi_H(a) on A, in
    canonical enumeration order (psi_H outer)."""
    phi = spec.phi_map
    for psi_H in fingroup.enumerate_homs(spec.H, X):
        partial = {phi[a]: psi_H(a) for a in spec.A.elements}
        for psi_K in fingroup.enumerate_homs(spec.K, X, partial=partial):
            yield psi_H, psi_K


def _decide_conjugacy(spec: AmalgamSpec, x: Word, y: Word) -> am.ConjugacyVerdict:
    if spec.central:
        return am.is_conjugate_central(spec, x, y)
    return am.is_conjugate_general(spec, x, y)


def _classify(spec: AmalgamSpec, cf: Word, cg: Word) -> str:
    if len(cf) != len(cg):
        return "case1"
    if len(cf) > 1:
        return "case4"
    tf, ef = am._canonical_length1(spec, cf) if len(cf) == 1 else (TAG_H, 0)
    tg, eg = am._canonical_length1(spec, cg) if len(cg) == 1 else (TAG_H, 0)
    return "case2" if tf != tg else "case3"


def _coset_union(G: FiniteGroup, sub, N) -> frozenset[int]:
    return frozenset(G.mul(a, m) for a in sub.elements for m in N.elements)


def _syllables_avoid(spec: AmalgamSpec, words: Sequence[Word],
                     M, N) -> bool:
    am_set = _coset_union(spec.H, spec.A, M)
    bn_set = _coset_union(spec.K, spec.B, N)
    for w in words:
        for tag, e in w:
            if tag == TAG_H and e in am_set:
                return False
            if tag == TAG_K and e in bn_set:
                return False
    return True


def _guided_pairs(spec: AmalgamSpec, budget: SearchBudget,
                  case: str, cf: Word, cg: Word) -> Iterator[qt.CompatiblePair]:
    """Compatible pairs consistent with the case constraints, smallest
    quotients first."""
    p = budget.p
    ms = qt._p_power_index_normals(spec.H, p, budget.max_quotient_index)
    ns = qt._p_power_index_normals(spec.K, p, budget.max_quotient_index)
    grid = sorted(
        itertools.product(ms, ns),
        key=lambda mn: (fingroup.index(spec.H, mn[0]) * fingroup.index(spec.K, mn[1]),
                        fingroup.index(spec.H, mn[0]), mn[0].elements, mn[1].elements))
    for M, N in grid:
        if case in ("case1", "case2", "case4"):
            if not _syllables_avoid(spec, (cf, cg), M, N):
                continue
        elif case == "case3":
            tag, ef = am._canonical_length1(spec, cf)
            _, eg = am._canonical_length1(spec, cg)
            G, sub = (spec.H, M) if tag == TAG_H else (spec.K, N)
            Q, proj = fingroup.quotient(G, sub)
            if fingroup.class_of(Q, proj(ef)) == fingroup.class_of(Q, proj(eg)):
                continue
        try:
            pair = qt.refine_to_compatible(spec, M, N, p)
        except NoRefinementFound:
            continue
        if case in ("case1", "case2", "case4"):
            if not _syllables_avoid(spec, (cf, cg), pair.R, pair.S):
                continue
        elif case == "case3":
            tag, ef = am._canonical_length1(spec, cf)
            _, eg = am._canonical_length1(spec, cg)
            Q, proj = ((pair.quotient_spec.H, pair.proj_H) if tag == TAG_H
                       else (pair.quotient_spec.K, pair.proj_K))
            if fingroup.class_of(Q, proj(ef)) == fingroup.class_of(Q, proj(eg)):
                continue
        yield pair


def _hom_pair_witness(spec: AmalgamSpec, f: Word, g: Word,
                      catalog: Sequence[FiniteGroup],
                      tag: str) -> Optional[Witness]:
    """First agreeing pair over the catalog separating the images of f, g."""
    for X in catalog:
        classes = fingroup.conjugacy_classes(X)
        cls_of = {}
        for cls in classes:
            for e in cls:
                cls_of[e] = cls
        for psi_H, psi_K in agreeing_pairs(spec, X):
            w = Witness(X, psi_H, psi_K, tag)
            if cls_of[word_image(w, f)] != cls_of[word_image(w, g)]:
                return w
    return None


def search_witness(spec: AmalgamSpec, f: Word, g: Word,
                   budget: SearchBudget) -> Witness:
    """A verified homomorphism pair separating the conjugacy classes of f
    and g in a finite p-group.

    Raises ElementsConjugate when f and g are conjugate in G, and
    BudgetExhausted when no witness exists within the caps (for amalgams of
    finite p-groups that outcome is consistent with G not being residually
    a finite p-group, in which case separation may be impossible).
    """
    p = budget.p
    verdict = _decide_conjugacy(spec, f, g)
    if verdict.conjugate:
        raise ElementsConjugate(verdict.conjugator)
    catalog = p_group_catalog(p, budget.max_target_order)
    cf, _ = am.cyclically_reduce(spec, f)
    cg, _ = am.cyclically_reduce(spec, g)
    case = _classify(spec, cf, cg)

    # (i) guided quotient, per the case analysis
    for pair in _guided_pairs(spec, budget, case, cf, cg):
        pf, pg = qt.project_word(pair, cf), qt.project_word(pair, cg)
        if case in ("case1", "case4"):
            if len(pf) != len(cf) or len(pg) != len(cg):
                continue  # length must be preserved for the case to apply
        if _decide_conjugacy(pair.quotient_spec, pf, pg).conjugate:
            continue
        found = _hom_pair_witness(pair.quotient_spec, pf, pg, catalog,
                                  f"{case}-quotient")
        if found is not None:
            w = Witness(found.target,
                        pair.proj_H.compose(found.psi_H),
                        pair.proj_K.compose(found.psi_K),
                        found.strategy_tag)
            if verify_witness(spec, w, f, g, p):
                return w

    # (ii) direct agreeing-pair enumeration
    found = _hom_pair_witness(spec, f, g, catalog, "direct")
    if found is not None and verify_witness(spec, found, f, g, p):
        return found

    # (iii) kill the amalgamated subgroup and collapse to a direct product
    try:
        pres = gg.amalgam_presentation(spec)
        killed = gg.kill_subgroups(pres, {"u": spec.A, "v": spec.B})
        P, images = gg.collapse_to_direct_product(killed)
        if fingroup.is_p_group(P, p) and P.order <= budget.max_target_order:
            projs = {}
            for v, G in (("u", spec.H), ("v", spec.K)):
                sub = spec.A if v == "u" else spec.B
                closure = fingroup.normal_closure(G, sub.elements)
                _, proj = fingroup.quotient(G, closure)
                imgs = tuple(images.get(gg.symbol(v, proj(e)), 0)
                             for e in G.elements())
                projs[v] = GroupHom(G, P, imgs)
            w = Witness(P, projs["u"], projs["v"], "kill-amalgam")
            if verify_witness(spec, w, f, g, p):
                return w
    except WrongShape:
        pass

    raise BudgetExhausted(
        f"no witness within target order {budget.max_target_order} and "
        f"quotient index {budget.max_quotient_index}; for amalgams of finite "
        f"p-groups this is consistent with the group not being residually a "
        f"finite {p}-group (separability holds iff residual-{p} holds)")


def enumerate_cyclically_reduced(spec: AmalgamSpec,
                                 max_length: int) -> tuple[Word, ...]:
    """One representative word per distinct cyclically reduced element of
    length <= max_length (deduplicated by normal form)."""
    words: list[Word] = [am.EMPTY]
    for tag in (TAG_H, TAG_K):
        for e in range(1, spec.factor(tag).order):
            words.append(am.word([(tag, e)]))
    for n in range(2, max_length + 1):
        for start in (TAG_H, TAG_K):
            tags = [(TAG_H, TAG_K)[(i + (start == TAG_K)) % 2] for i in range(n)]
            if tags[0] == tags[-1]:
                continue
            pools = []
            for tag in tags:
                sub = spec.amalg(tag).element_set()
                pools.append([e for e in range(1, spec.factor(tag).order)
                              if e not in sub])
            for combo in itertools.product(*pools):
                words.append(Word(tuple(zip(tags, combo))))
    seen = set()
    out = []
    for w in words:
        nf = am.normal_form(spec, w)
        key = (nf.amalgam_part, nf.tail)
        if key not in seen and am.is_cyclically_reduced(spec, am.reduce(spec, w)):
            seen.add(key)
            out.append(am.reduce(spec, w))
    return tuple(out)


def enumerate_elements(spec: AmalgamSpec, max_length: int) -> tuple[Word, ...]:
    """One word per element of G of length <= max_length, via normal forms."""
    reps_h = sorted({am._coset_decompose(spec, TAG_H, e)[1]
                     for e in spec.H.elements()} - {0})
    reps_k = sorted({am._coset_decompose(spec, TAG_K, e)[1]
                     for e in spec.K.elements()} - {0})
    out = []
    for n in range(0, max_length + 1):
        tails: list[tuple[tuple[str, int], ...]] = []
        if n == 0:
            tails.append(())
        else:
            for start in (TAG_H, TAG_K):
                tags = [(TAG_H, TAG_K)[(i + (start == TAG_K)) % 2]
                        for i in range(n)]
                pools = [reps_h if t == TAG_H else reps_k for t in tags]
                for combo in itertools.product(*pools):
                    tails.append(tuple(zip(tags, combo)))
        for a in spec.A.elements:
            for tail in tails:
                nf = am.NormalForm(a, tail)
                out.append(am.render(spec, nf))
    # normal forms with distinct (a, tail) are distinct elements already,
    # except length-1 tails absorbed into A never arise (reps avoid A).
    seen = set()
    uniq = []
    for w in out:
        nf = am.normal_form(spec, w)
        key = (nf.amalgam_part, nf.tail)
        if key not in seen:
            seen.add(key)
            uniq.append(w)
    return tuple(uniq)


@dataclass(frozen=True)
class SeparationEntry:
    other: Word
    separated: bool
    witness: Optional[Witness]
    error: str = ""


@dataclass(frozen=True)
class SeparabilityReport:
    element: Word
    entries: tuple[SeparationEntry, ...]

    @property
    def all_separated(self) -> bool:
        return all(e.separated for e in self.entries)


def is_cfp_separable_bounded(spec: AmalgamSpec, g: Word,
                             budget: SearchBudget) -> SeparabilityReport:
    """Bounded, one-sided diagnostic for C_fp-separability of g: runs the
    witness search against every non-conjugate cyclically reduced element of
    length <= budget.max_conjugator_length.  Never claims the negative."""
    entries = []
    for a in enumerate_cyclically_reduced(spec, budget.max_conjugator_length):
        if _decide_conjugacy(spec, a, g).conjugate:
            continue
        try:
            w = search_witness(spec, a, g, budget)
            entries.append(SeparationEntry(a, True, w))
        except BudgetExhausted as exc:
            entries.append(SeparationEntry(a, False, None, str(exc)))
    return SeparabilityReport(g, tuple(entries))


@dataclass(frozen=True)
class ResidualEntry:
    element: Word
    survives: bool
    witness: Optional[Witness]


@dataclass(frozen=True)
class ResidualReport:
    length_bound: int
    entries: tuple[ResidualEntry, ...]

    @property
    def residually_p_up_to_bound(self) -> bool:
        return all(e.survives for e in self.entries)

    @property
    def failures(self) -> tuple[ResidualEntry, ...]:
        return tuple(e for e in self.entries if not e.survives)


def check_residually_p_bounded(spec: AmalgamSpec, p: int, length_bound: int,
                               budget: SearchBudget) -> ResidualReport:
    """For every nontrivial element of length <= length_bound, look for an
    agreeing homomorphism pair with nontrivial image; success for all yields
    a bounded residual-p certificate."""
    fingroup.check_prime(p)
    catalog = p_group_catalog(p, budget.max_target_order)
    entries = []
    for w in enumerate_elements(spec, length_bound):
        if not w.syllables:
            continue
        hit = None
        for X in catalog:
            for psi_H, psi_K in agreeing_pairs(spec, X):
                cand = Witness(X, psi_H, psi_K, "residual-p")
                if word_image(cand, w) != 0:
                    hit = cand
                    break
            if hit:
                break
        entries.append(ResidualEntry(w, hit is not None, hit))
    return ResidualReport(length_bound, tuple(entries))
