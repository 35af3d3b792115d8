import random

import pytest

import oracles
from amalgams import amalgam as am
from amalgams import fingroup as fg
from amalgams import quotients as qt
from amalgams.amalgam import Word, word
from amalgams.errors import NoRefinementFound, NotCompatible


def W(*syllables):
    return word(syllables)


def brute_force_pairs(spec, p, max_index):
    """Independent filter: check the defining equation on every pair of
    normal subgroups of p-power index."""
    out = []
    for R in fg.enumerate_normal_subgroups(spec.H):
        if fg.index(spec.H, R) > max_index:
            continue
        if not fg.is_p_power_index(spec.H, R, p):
            continue
        for S in fg.enumerate_normal_subgroups(spec.K):
            if fg.index(spec.K, S) > max_index:
                continue
            if not fg.is_p_power_index(spec.K, S, p):
                continue
            lhs = {spec.phi_map[a]
                   for a in spec.A.element_set() & R.element_set()}
            if lhs == spec.B.element_set() & S.element_set():
                out.append((R.elements, S.elements))
    return sorted(out)


class TestIsCompatible:
    def test_trivial_pair(self, amalg1):
        R = fg.make_subgroup(amalg1.H, [0])
        S = fg.make_subgroup(amalg1.K, [0])
        assert qt.is_compatible(amalg1, R, S)

    def test_full_pair(self, amalg1):
        R = fg.make_subgroup(amalg1.H, [0, 1, 2, 3])
        S = fg.make_subgroup(amalg1.K, [0, 1, 2, 3])
        assert qt.is_compatible(amalg1, R, S)

    def test_asymmetric_incompatible(self, amalg1):
        R = fg.make_subgroup(amalg1.H, [0, 2])
        S = fg.make_subgroup(amalg1.K, [0])
        assert not qt.is_compatible(amalg1, R, S)


class TestQuotientAmalgam:
    def test_collapse_to_c2_star_c2(self, amalg1):
        R = fg.make_subgroup(amalg1.H, [0, 2])
        S = fg.make_subgroup(amalg1.K, [0, 2])
        pair = qt.quotient_amalgam(amalg1, R, S)
        q = pair.quotient_spec
        assert q.H.order == 2 and q.K.order == 2
        assert len(q.A) == 1  # amalgam collapses to the identity
        assert q.central

    def test_rejects_incompatible(self, amalg1):
        R = fg.make_subgroup(amalg1.H, [0, 2])
        S = fg.make_subgroup(amalg1.K, [0])
        with pytest.raises(NotCompatible):
            qt.quotient_amalgam(amalg1, R, S)

    def test_quotient_spec_validates(self, amalg1):
        for pair in qt.enumerate_compatible_pairs(amalg1, 2, 4):
            # make_amalgam already validates; re-check the induced map.
            q = pair.quotient_spec
            for a in q.A.elements:
                assert q.phi_map[a] in q.B.element_set()


class TestEnumerate:
    def test_amalg1_matches_brute_force(self, amalg1):
        pairs = qt.enumerate_compatible_pairs(amalg1, 2, 4)
        got = sorted((p.R.elements, p.S.elements) for p in pairs)
        assert got == brute_force_pairs(amalg1, 2, 4)

    def test_amalg1_contains_diagonal_pairs(self, amalg1):
        pairs = qt.enumerate_compatible_pairs(amalg1, 2, 4)
        got = {(p.R.elements, p.S.elements) for p in pairs}
        assert ((0,), (0,)) in got
        assert ((0, 2), (0, 2)) in got
        assert ((0, 1, 2, 3), (0, 1, 2, 3)) in got

    def test_sorted_and_deterministic(self, amalg1):
        pairs = qt.enumerate_compatible_pairs(amalg1, 2, 4)
        keys = [(fg.index(amalg1.H, p.R), p.R.elements,
                 fg.index(amalg1.K, p.S), p.S.elements) for p in pairs]
        assert keys == sorted(keys)
        again = qt.enumerate_compatible_pairs(amalg1, 2, 4)
        assert [(p.R.elements, p.S.elements) for p in again] == \
            [(p.R.elements, p.S.elements) for p in pairs]

    def test_s3_amalgam_brute_force(self, s3_amalgam):
        pairs = qt.enumerate_compatible_pairs(s3_amalgam, 2, 8)
        got = sorted((p.R.elements, p.S.elements) for p in pairs)
        assert got == brute_force_pairs(s3_amalgam, 2, 8)


class TestRefine:
    def test_example_trivial_targets(self, amalg1):
        M = fg.make_subgroup(amalg1.H, [0])
        N = fg.make_subgroup(amalg1.K, [0, 1, 2, 3])
        pair = qt.refine_to_compatible(amalg1, M, N, 2)
        assert pair.R.elements == (0,) and pair.S.elements == (0,)

    def test_intersection_equation(self, amalg1):
        phi, phi_inv = amalg1.phi_map, amalg1.phi_inv_map
        normals_h = fg.enumerate_normal_subgroups(amalg1.H)
        normals_k = fg.enumerate_normal_subgroups(amalg1.K)
        for M in normals_h:
            for N in normals_k:
                ma = M.element_set() & amalg1.A.element_set()
                nb = N.element_set() & amalg1.B.element_set()
                U = ma & {phi_inv[b] for b in nb}
                V = {phi[a] for a in ma} & nb
                try:
                    pair = qt.refine_to_compatible(amalg1, M, N, 2)
                except NoRefinementFound:
                    continue
                assert pair.R.element_set() <= M.element_set()
                assert pair.S.element_set() <= N.element_set()
                assert pair.R.element_set() & amalg1.A.element_set() == U
                assert pair.S.element_set() & amalg1.B.element_set() == V
                assert qt.is_compatible(amalg1, pair.R, pair.S)


class TestProjectWord:
    def test_hom_law(self, amalg1):
        rng = random.Random(21)
        alpha = oracles.syllable_alphabet(amalg1)
        pairs = qt.enumerate_compatible_pairs(amalg1, 2, 4)
        for pair in pairs:
            q = pair.quotient_spec
            for _ in range(500 // len(pairs) + 1):
                u = Word(tuple(rng.choice(alpha)
                               for _ in range(rng.randrange(5))))
                v = Word(tuple(rng.choice(alpha)
                               for _ in range(rng.randrange(5))))
                lhs = qt.project_word(pair, u.concat(v))
                rhs = qt.project_word(pair, u).concat(qt.project_word(pair, v))
                assert am.equal_in_g(q, lhs, rhs)

    def test_length_never_increases(self, amalg1):
        rng = random.Random(22)
        alpha = oracles.syllable_alphabet(amalg1)
        for pair in qt.enumerate_compatible_pairs(amalg1, 2, 4):
            q = pair.quotient_spec
            for _ in range(120):
                w = Word(tuple(rng.choice(alpha)
                               for _ in range(rng.randrange(6))))
                assert am.length(q, qt.project_word(pair, w)) \
                    <= am.length(amalg1, w)

    def test_syllable_avoidance_preserves_length(self, amalg1):
        # If every H-syllable avoids A.R and every K-syllable avoids B.S,
        # projection preserves length.
        for pair in qt.enumerate_compatible_pairs(amalg1, 2, 4):
            AR = {amalg1.H.mul(a, r)
                  for a in amalg1.A.elements for r in pair.R.elements}
            BS = {amalg1.K.mul(b, s)
                  for b in amalg1.B.elements for s in pair.S.elements}
            ok_h = [h for h in range(amalg1.H.order) if h not in AR]
            ok_k = [k for k in range(amalg1.K.order) if k not in BS]
            if not ok_h or not ok_k:
                continue
            w = W(("H", ok_h[0]), ("K", ok_k[0]), ("H", ok_h[-1]))
            assert am.length(pair.quotient_spec, qt.project_word(pair, w)) == 3
