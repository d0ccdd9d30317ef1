import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pkgperm import permissions as P

TAGS = sorted(P.TAGS)

#: all 16 raw subsets of the four tags
RAW_SETS = [frozenset(c) for r in range(5) for c in itertools.combinations(TAGS, r)]
NORMALIZED = sorted({P.normalize(s) for s in RAW_SETS}, key=sorted)


def subset_oracle(a, b):
    """Hand-written restatement of the ordering: all tops everything,
    otherwise plain set inclusion."""
    if "all" in b:
        return True
    if "all" in a:
        return False
    return set(a) <= set(b)


class TestNormalize:
    def test_empty_fixed_point(self):
        assert P.normalize(frozenset()) == frozenset()

    def test_all_collapses(self):
        assert P.normalize(frozenset({"all", "network"})) == P.ALL_SET

    def test_atoms_unchanged(self):
        s = frozenset({"network", "filesystem"})
        assert P.normalize(s) == s

    def test_idempotent(self):
        for s in RAW_SETS:
            assert P.normalize(P.normalize(s)) == P.normalize(s)


class TestSubset:
    def test_bottom(self):
        assert P.subset_of(frozenset(), frozenset({"network"}))

    def test_all_is_top(self):
        assert P.subset_of(frozenset({"network"}), P.ALL_SET)

    def test_incomparable_atoms(self):
        assert not P.subset_of(frozenset({"network"}), frozenset({"filesystem"}))

    def test_matches_oracle_on_all_pairs(self):
        for a in NORMALIZED:
            for b in NORMALIZED:
                assert P.subset_of(a, b) == subset_oracle(a, b), (a, b)

    def test_partial_order_laws(self):
        for a in NORMALIZED:
            assert P.subset_of(a, a)
        for a in NORMALIZED:
            for b in NORMALIZED:
                if P.subset_of(a, b) and P.subset_of(b, a):
                    assert a == b
        for a in NORMALIZED:
            for b in NORMALIZED:
                for c in NORMALIZED:
                    if P.subset_of(a, b) and P.subset_of(b, c):
                        assert P.subset_of(a, c)


class TestUnion:
    def test_disjoint_atoms(self):
        assert P.union(frozenset({"network"}), frozenset({"filesystem"})) == frozenset(
            {"network", "filesystem"}
        )

    def test_top_absorbs(self):
        assert P.union(P.ALL_SET, frozenset({"network"})) == P.ALL_SET

    def test_identity(self):
        assert P.union(frozenset(), frozenset()) == frozenset()

    def test_union_is_join(self):
        # least upper bound: an upper bound below every other upper bound
        for a in NORMALIZED:
            for b in NORMALIZED:
                j = P.union(a, b)
                assert P.subset_of(a, j) and P.subset_of(b, j)
                for ub in NORMALIZED:
                    if P.subset_of(a, ub) and P.subset_of(b, ub):
                        assert P.subset_of(j, ub)

    def test_algebraic_laws(self):
        for a in NORMALIZED:
            assert P.union(a, a) == a
            for b in NORMALIZED:
                assert P.union(a, b) == P.union(b, a)
                for c in NORMALIZED:
                    assert P.union(P.union(a, b), c) == P.union(a, P.union(b, c))


class TestImportAllowed:
    def test_all_importer(self):
        assert P.import_allowed(P.ALL_SET, frozenset({"network", "process"}))

    def test_same_permissions(self):
        assert P.import_allowed(frozenset({"network"}), frozenset({"network"}))

    def test_disjoint_denied(self):
        assert not P.import_allowed(frozenset({"filesystem"}), frozenset({"network"}))

    def test_matches_rule_on_all_pairs(self):
        for a in NORMALIZED:
            for b in NORMALIZED:
                expected = (a == P.ALL_SET) or subset_oracle(b, a)
                assert P.import_allowed(a, b) == expected, (a, b)

    def test_transitive(self):
        for a in NORMALIZED:
            for b in NORMALIZED:
                for c in NORMALIZED:
                    if P.import_allowed(a, b) and P.import_allowed(b, c):
                        assert P.import_allowed(a, c)

    def test_top_and_bottom_laws(self):
        for s in NORMALIZED:
            assert P.import_allowed(P.ALL_SET, s)
            assert P.import_allowed(s, frozenset())


class TestManifest:
    def test_direct_mapping(self):
        assert P.parse_manifest('{"permissions":["network"]}') == frozenset({"network"})

    def test_empty(self):
        assert P.parse_manifest('{"permissions":[]}') == frozenset()

    def test_unknown_tag_with_hint(self):
        with pytest.raises(P.ManifestError, match='canonical tag is .filesystem.'):
            P.parse_manifest('{"permissions":["all","fs"]}')

    def test_unknown_tag(self):
        with pytest.raises(P.ManifestError, match="unknown permission tag"):
            P.parse_manifest('{"permissions":["root"]}')

    def test_duplicates_tolerated(self):
        assert P.parse_manifest('{"permissions":["network","network"]}') == frozenset({"network"})

    def test_malformed_document(self):
        with pytest.raises(P.ManifestError):
            P.parse_manifest("not json")
        with pytest.raises(P.ManifestError):
            P.parse_manifest('{"perms": []}')
        with pytest.raises(P.ManifestError):
            P.parse_manifest('{"permissions": "network"}')

    @given(st.sets(st.sampled_from(TAGS)))
    def test_round_trip_any_order(self, tags):
        s = P.normalize(frozenset(tags))
        assert P.parse_manifest(P.serialize_manifest(s)) == s

    def test_read_declared_absent(self, tmp_path):
        assert P.read_declared(str(tmp_path)) is None

    def test_write_then_read(self, tmp_path):
        s = frozenset({"network", "process"})
        P.write_declared(str(tmp_path), s)
        assert P.read_declared(str(tmp_path)) == s
