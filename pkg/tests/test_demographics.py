import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maskshift.demographics import (PROFILES, UNKNOWN, ConfigurationError, DegenerateDataError,
                                    DemographicProfile, FormatError, GeoTable, NameModel,
                                    PartyDirectory, UserInfo, build_profile, classify_ethnicity,
                                    fit_college_model, group_ethnicity, idf_weights,
                                    ingest_annotations, infer_party, locate, parse_filter,
                                    parse_name, predict_college, rank_attributes, read_profiles,
                                    reference_model, tfidf, train_college, write_profiles)
from maskshift.demographics.names import load_profile_groups


# -- profile -------------------------------------------------------------------

def test_profile_defaults_unknown_and_validates():
    p = DemographicProfile()
    assert all(v == UNKNOWN for v in p.to_dict().values())
    assert DemographicProfile(age_bucket="<=18", is_college=True).age_bucket == "≤18"
    assert DemographicProfile(is_college=True).is_college == "true"
    with pytest.raises(ValueError):
        DemographicProfile(party="Green")


def test_parse_filter():
    f = parse_filter("party=republican,region=South")
    assert f.label == "party=Republican,region=South"
    assert f(DemographicProfile(party="Republican", region="South"))
    assert not f(DemographicProfile(party="Republican"))
    assert not f(None)
    assert parse_filter("all")(None)
    with pytest.raises(ValueError):
        parse_filter("color=blue")


# -- annotations -----------------------------------------------------------------

def test_ingest_annotations(tmp_path, caplog):
    p = tmp_path / "a.csv"
    p.write_text("author_id,age_bucket,gender,org_probability\n"
                 "u1,19-29,female,0.05\nu2,25,male,0.1\nu3,>=40,male,0.9\nu4,30-39,robot,0.1\n")
    errors = []
    out = ingest_annotations(p, errors)
    assert out["u1"] == ("19-29", "female", 0.05)
    assert out["u3"].age_bucket == "≥40"
    assert set(out) == {"u1", "u3"}
    assert [ln for ln, _ in errors] == [3, 5]
    assert "a.csv:3" in caplog.text


def test_ingest_header_only_and_errors(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("author_id,age_bucket,gender,org_probability\n")
    assert ingest_annotations(p) == {}
    p.write_text("id,age\n")
    with pytest.raises(FormatError):
        ingest_annotations(p)
    with pytest.raises(OSError):
        ingest_annotations(tmp_path / "missing.csv")


# -- college: PMI ----------------------------------------------------------------

def pmi_oracle(pairs, phrase):
    # substring search over space-padded text; exact rational arithmetic
    needle = f" {phrase} "
    docs = [(f" {' '.join(t)} ", y) for t, y in pairs]
    n_c = sum(1 for _, y in docs if y)
    hit_c = sum(1 for d, y in docs if y and needle in d)
    hit = sum(1 for d, _ in docs if needle in d)
    ratio = Fraction(hit_c + 1, n_c + 2) / Fraction(hit + 1, len(docs) + 2)
    return math.log2(ratio)


def twenty_timelines(seed=3):
    rng = random.Random(seed)
    vocab = ["my professor", "my textbook", "my kids", "my boss", "my dorm", "masks", "today"]
    pairs = []
    for i in range(20):
        college = i % 2 == 0
        words = []
        for ph in vocab:
            p = 0.7 if (college and ph in ("my professor", "my dorm")) else 0.25
            if not college and ph in ("my kids", "my boss"):
                p = 0.6
            if rng.random() < p:
                words += ph.split()
        pairs.append((words, college))
    return pairs, vocab


def test_rank_attributes_matches_count_oracle():
    pairs, vocab = twenty_timelines()
    ranked = rank_attributes(pairs, vocab)
    assert [a.pmi for a in ranked] == sorted((a.pmi for a in ranked), reverse=True)
    for a in ranked:
        assert a.pmi == pytest.approx(pmi_oracle(pairs, a.phrase), abs=1e-12)
    oracle_order = sorted(vocab, key=lambda ph: -pmi_oracle(pairs, ph))
    assert [a.phrase for a in ranked] == oracle_order


def test_exclusive_phrase_gets_maximal_pmi():
    pairs = [(["my", "professor"], True), (["my", "professor"], True), (["my", "boss"], False),
             (["hello"], False), (["my", "boss", "my", "professor"], True), (["hi"], False)]
    ranked = rank_attributes(pairs, ["my boss", "my professor", "hello"])
    assert ranked[0].phrase == "my professor"


def test_balanced_phrase_near_zero():
    pairs = [(["my", "phone"], y) for y in (True, False)] * 10 + [(["x"], y) for y in (True, False)] * 10
    (a,) = rank_attributes(pairs, ["my phone"])
    assert abs(a.pmi) < 0.05


def test_rank_single_class_is_degenerate():
    with pytest.raises(DegenerateDataError):
        rank_attributes([(["a"], True), (["b"], True)], ["a"])


# -- college: TF-IDF ---------------------------------------------------------------

def test_tfidf_hand_computed():
    docs = [["mask", "mask", "wear"], ["mask"], ["my", "professor"], [],
            ["wear", "my", "professor", "mask"]]
    vocab = ["mask", "wear", "my professor"]
    i_mask = math.log(6 / 4) + 1
    i_two = math.log(6 / 3) + 1

    def unit(row):
        n = math.sqrt(sum(v * v for v in row))
        return [v / n for v in row] if n else row

    expected = [unit([2 * i_mask, i_two, 0.0]), unit([i_mask, 0.0, 0.0]), unit([0.0, 0.0, i_two]),
                [0.0, 0.0, 0.0], unit([i_mask, i_two, i_two])]
    np.testing.assert_allclose(tfidf(docs, vocab), expected, atol=1e-9, rtol=0)


def test_tfidf_term_in_every_doc_has_minimum_idf():
    docs = [["a", "b"], ["a"], ["a", "c"]]
    idf = idf_weights(docs, ["a", "b", "c"])
    assert idf[0] == pytest.approx(1.0) and idf[0] == idf.min()


def test_tfidf_rejects_empty_vocabulary():
    with pytest.raises(ValueError):
        tfidf([["a"]], [])


# -- college: forest -----------------------------------------------------------------

def separable(n=60, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2 == 0
    x = rng.normal(size=(n, 4))
    x[:, 0] = np.where(y, 1.0, -1.0) + rng.uniform(-0.5, 0.5, n)
    return x, y


def test_forest_fits_separable_data():
    x, y = separable()
    model = train_college(x, y, seed=1)
    assert (model.predict(x) == y).mean() == 1.0


def test_forest_deterministic_and_generalizes():
    x, y = separable(200, seed=5)
    a = train_college(x[:160], y[:160], seed=7)
    b = train_college(x[:160], y[:160], seed=7)
    np.testing.assert_array_equal(a.predict(x[160:]), b.predict(x[160:]))
    assert (a.predict(x[160:]) == y[160:]).mean() > 0.5


def test_forest_single_class_rejected():
    with pytest.raises(DegenerateDataError):
        train_college(np.zeros((4, 2)), [False] * 4)


def college_model():
    pairs, _ = twenty_timelines()
    return fit_college_model(pairs, ["my professor", "my dorm", "my kids", "my boss"], seed=0)


def test_override_beats_forest_vote():
    model = college_model()
    noncollege = ["my", "kids", "my", "boss"] * 5
    assert predict_college(model, noncollege) is False
    assert predict_college(model, noncollege + ["professor"] * 10) is True
    assert predict_college(model, noncollege + ["professor"] * 4) is False


def test_predict_empty_timeline_runs_forest():
    model = college_model()
    expected = bool(model.forest.predict(np.zeros((1, len(model.vocabulary))))[0])
    assert predict_college(model, []) is expected


# -- names --------------------------------------------------------------------------

@pytest.mark.parametrize("raw,expected", [
    ("Dr. John A. Smith", ("john", "smith")),
    ("😷😷😷", None),
    ("this is my very long sentence name here", None),
    ("Madonna", None),
    ("José García 😷", ("jose", "garcia")),
    ("Mary Ann O'Neil-Smith", ("mary", "o'neil-smith")),
    ("Bob Supercalifragilisticexpialidocious", None),
    ("user12345 fan", None),
])
def test_parse_name(raw, expected):
    assert parse_name(raw) == expected


@pytest.fixture(scope="module")
def ref():
    return reference_model()


def test_john_smith_is_european(ref):
    dist = classify_ethnicity("john", "smith", ref)
    top = max(dist, key=dist.get)
    assert load_profile_groups()[top] == "European"
    assert group_ethnicity(dist) == "European"


@pytest.mark.parametrize("first,last,group", [
    ("maria", "garcia", "Hispanic"), ("kenji", "tanaka", "EastAsian"), ("priya", "sharma", "Indian"),
    ("kwame", "mensah", "African"), ("hans", "muller", "European"), ("wei", "zhang", "EastAsian"),
])
def test_reference_model_fixture_names(ref, first, last, group):
    assert group_ethnicity(classify_ethnicity(first, last, ref)) == group


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=10),
       st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12))
def test_distribution_normalized(first, last):
    dist = classify_ethnicity(first, last, _REF)
    assert list(dist) == list(PROFILES)
    assert math.fsum(dist.values()) == pytest.approx(1.0, abs=1e-9)
    assert min(dist.values()) >= 0


_REF = reference_model()


def test_missing_model_is_configuration_error():
    with pytest.raises(ConfigurationError):
        classify_ethnicity("john", "smith", None)


def test_model_save_load_round_trip(tmp_path, ref):
    path = tmp_path / "names.json"
    ref.save(path)
    again = NameModel.load(path)
    assert again.predict_proba("ana", "lopez") == ref.predict_proba("ana", "lopez")
    path.write_text('{"format": "other", "version": 9}')
    with pytest.raises(ConfigurationError):
        NameModel.load(path)


def test_group_single_profile_and_tie():
    zero = dict.fromkeys(PROFILES, 0.0)
    assert group_ethnicity({**zero, "Japanese": 1.0}) == "EastAsian"
    assert group_ethnicity({**zero, "Indian": 0.5, "Hispanic": 0.5}) == UNKNOWN


def test_group_mixed_hand_summed():
    dist = dict.fromkeys(PROFILES, 0.0)
    dist.update(British=0.1, Germanic=0.1, Italian=0.1, Hispanic=0.25, African=0.15, Muslim=0.15,
                Indian=0.15)
    # European 0.30, Hispanic 0.25, African 0.30 -> tie; nudge African ahead
    assert group_ethnicity(dist) == UNKNOWN
    dist["Muslim"], dist["Indian"] = 0.16, 0.14
    assert group_ethnicity(dist) == "African"


class ScaledModel:
    def __init__(self, raw, k):
        self.profiles, self.raw, self.k = PROFILES, raw, k

    def predict_proba(self, first, last):
        return [v * self.k for v in self.raw]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=12, max_size=12), st.floats(0.1, 100.0))
def test_grouping_invariant_under_rescaling(raw, k):
    a = group_ethnicity(classify_ethnicity("a", "b", ScaledModel(raw, 1.0)))
    b = group_ethnicity(classify_ethnicity("a", "b", ScaledModel(raw, k)))
    assert a == b


# -- geo -----------------------------------------------------------------------------

@pytest.fixture
def geo(tmp_path):
    (tmp_path / "cities.csv").write_text(
        "city,state,zip,county_fips\nAustin,TX,78701,48453\nMarfa,TX,79843,48377\n"
        "Boston,MA,02108,25025\nSpringfield,IL,62701,17167\n")
    (tmp_path / "incomes.csv").write_text("zip,median_income\n78701,63180\n79843,63178\n02108,63179\n")
    (tmp_path / "rucc.csv").write_text("county_fips,state,rucc_code\n48453,TX,2\n48377,TX,7\n25025,MA,1\n")
    return GeoTable.load(tmp_path / "cities.csv", tmp_path / "incomes.csv", tmp_path / "rucc.csv")


def test_locate_income_boundaries(geo):
    assert locate("Austin, TX", geo).income_bracket == "Above"
    assert locate("Boston, MA", geo).income_bracket == "Equal"
    assert locate("Marfa, Texas", geo).income_bracket == "Below"


def test_locate_metro_and_region(geo):
    assert locate("austin, tx, USA", geo) == ("South", "Metro", "Above")
    assert locate("Marfa, TX", geo)[:2] == ("South", "NonMetro")
    assert locate("Springfield, IL", geo) == ("Midwest", UNKNOWN, UNKNOWN)


def test_locate_unmatched(geo):
    assert locate("Gotham City, ZZ", geo) is None
    assert locate("the moon", geo) is None
    assert locate("", geo) is None


def test_national_median_only_moves_income(geo):
    a = locate("Austin, TX", geo, 63179)
    b = locate("Austin, TX", geo, 70000)
    assert a[:2] == b[:2] and (a.income_bracket, b.income_bracket) == ("Above", "Below")


def test_geo_rejects_bad_rucc(tmp_path, geo):
    with pytest.raises(ValueError):
        GeoTable({}, {}, {"1": 12}, {})


# -- party ---------------------------------------------------------------------------

DIR = PartyDirectory(frozenset({"d1", "d2"}), frozenset({"r1"}), frozenset({"senate", "vote"}))


def test_party_rules():
    political = [["go", "vote", "today"]]
    assert infer_party(political, ["d1", "x"], DIR) == "Democrat"
    assert infer_party(political, ["r1"], DIR) == "Republican"
    assert infer_party(political, ["d1", "r1"], DIR) == UNKNOWN
    assert infer_party(political, ["x"], DIR) == UNKNOWN
    assert infer_party([["masks", "work"]], ["d1"], DIR) == UNKNOWN


def test_directory_must_be_disjoint():
    with pytest.raises(ValueError):
        PartyDirectory(frozenset({"a"}), frozenset({"a"}), frozenset())


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.sampled_from(["vote", "mask", "senate", "hi"]), max_size=4), max_size=3),
       st.lists(st.sampled_from(["d1", "d2", "r1", "x"]), max_size=4))
def test_party_needs_keyword_and_single_side(tweets, following):
    party = infer_party(tweets, following, DIR)
    if party != UNKNOWN:
        assert any(t in ("vote", "senate") for tw in tweets for t in tw)
        sides = {"Democrat" if f.startswith("d") else "Republican" for f in following if f != "x"}
        assert sides == {party}


# -- assembly --------------------------------------------------------------------------

def test_build_profile_without_sources_is_all_unknown():
    user = UserInfo("u", "John Smith", "Austin, TX", ("d1",))
    assert build_profile("u", user=user) == DemographicProfile()


def test_build_profile_uses_each_source(geo, ref, tmp_path):
    user = UserInfo("u", "John Smith", "Austin, TX", ("d1",))
    p = build_profile("u", user=user, timeline=[["vote", "now"]], name_model=ref, geo=geo,
                      party_directory=DIR)
    assert (p.ethnicity_group, p.region, p.party) == ("European", "South", "Democrat")
    assert p.age_bucket == UNKNOWN and p.is_college == UNKNOWN
    write_profiles({"u": p}, tmp_path / "p.csv")
    assert read_profiles(tmp_path / "p.csv") == {"u": p}
