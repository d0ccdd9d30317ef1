import pytest
from hypothesis import given
from hypothesis import strategies as st

from pkgperm.semver import Range, Version, VersionError, max_satisfying


def v(text):
    return Version.parse(text)


def satisfies_oracle(version: Version, range_: Range) -> bool:
    """Independent bounds-based restatement of range satisfaction."""
    if version.prerelease:
        if range_.op == "any" or range_.base is None:
            return False
        if not (range_.base.prerelease and range_.base.release == version.release):
            return False
    if range_.op == "any":
        return True
    base = range_.base
    if range_.op == "exact":
        return version == base
    if range_.op == "gte":
        return not (version < base)
    lo = base
    if range_.op == "tilde":
        hi = (base.major, base.minor + 1, 0)
    elif base.major > 0:
        hi = (base.major + 1, 0, 0)
    elif base.minor > 0:
        hi = (0, base.minor + 1, 0)
    else:
        hi = (0, 0, base.patch + 1)
    return not (version < lo) and version.release < hi


class TestVersion:
    def test_parse(self):
        assert v("1.2.3").release == (1, 2, 3)
        assert v("1.2.3-beta.2").prerelease == ("beta", 2)

    @pytest.mark.parametrize("bad", ["1.2", "1", "a.b.c", "1.2.3.4", "01.2.3", "1.2.3-"])
    def test_rejects(self, bad):
        with pytest.raises(VersionError):
            Version.parse(bad)

    def test_ordering(self):
        assert v("1.2.3") < v("1.2.4") < v("1.3.0") < v("2.0.0")
        assert v("1.0.0-alpha") < v("1.0.0-alpha.1") < v("1.0.0-beta") < v("1.0.0")
        assert v("1.0.0-2") < v("1.0.0-10")  # numeric identifiers compare numerically
        assert v("1.0.0-1") < v("1.0.0-alpha")  # numeric below alphanumeric

    def test_str_round_trip(self):
        for text in ["1.2.3", "0.0.1", "2.0.0-rc.1"]:
            assert str(v(text)) == text


class TestRange:
    def test_caret_picks_highest_compatible(self):
        versions = [v("1.2.3"), v("1.9.0"), v("2.0.0")]
        assert max_satisfying(versions, Range.parse("^1.2.0")) == v("1.9.0")

    def test_exact_pin(self):
        assert max_satisfying([v("1.4.2")], Range.parse("1.4.2")) == v("1.4.2")

    def test_tilde_stays_in_patch_line(self):
        versions = [v("1.2.5"), v("1.3.0")]
        assert max_satisfying(versions, Range.parse("~1.2.0")) == v("1.2.5")

    def test_wildcard(self):
        versions = [v("0.1.0"), v("3.2.1")]
        assert max_satisfying(versions, Range.parse("*")) == v("3.2.1")

    def test_gte(self):
        versions = [v("1.0.0"), v("2.5.0")]
        assert max_satisfying(versions, Range.parse(">=2.0.0")) == v("2.5.0")

    def test_caret_zero_major(self):
        r = Range.parse("^0.2.3")
        assert r.satisfies(v("0.2.9"))
        assert not r.satisfies(v("0.3.0"))
        r = Range.parse("^0.0.3")
        assert r.satisfies(v("0.0.3"))
        assert not r.satisfies(v("0.0.4"))

    def test_no_prerelease_from_plain_range(self):
        assert not Range.parse("^1.0.0").satisfies(v("1.1.0-beta"))
        assert Range.parse("^1.1.0-beta").satisfies(v("1.1.0-beta"))

    def test_unsatisfiable(self):
        assert max_satisfying([v("1.0.0")], Range.parse("^2.0.0")) is None


versions_strategy = st.builds(
    Version,
    major=st.integers(0, 3),
    minor=st.integers(0, 4),
    patch=st.integers(0, 4),
    prerelease=st.one_of(
        st.just(()),
        st.tuples(st.sampled_from(["alpha", "beta", 1, 2])),
    ),
)
ranges_strategy = st.one_of(
    st.just(Range("any")),
    st.builds(Range, op=st.sampled_from(["exact", "caret", "tilde", "gte"]), base=versions_strategy),
)


@given(versions_strategy, ranges_strategy)
def test_satisfies_matches_oracle(version, range_):
    assert range_.satisfies(version) == satisfies_oracle(version, range_)


@given(st.lists(versions_strategy, max_size=12), ranges_strategy)
def test_max_satisfying_matches_enumerate_and_filter(versions, range_):
    candidates = [x for x in versions if satisfies_oracle(x, range_)]
    expected = max(candidates) if candidates else None
    assert max_satisfying(versions, range_) == expected
