import math
import random

import pytest
from hypothesis import given, strategies as st

from priorpol.evaluation import (
    NEG, POS, TIE, EvalRow, EvaluationError, classification_report,
    classification_table, classify_formulae, classify_word, committee_vote,
    evaluate_formulae, filter_affective, mae, regression_table, s_over_e,
    success_rate, to_json,
)
from priorpol.formulae import FORMULAS
from priorpol.gold_alignment import AlignedDataset, AlignedItem, GoldEntry, align
from priorpol.swn_lexicon import LemmaKey, Lexicon, SenseList, parse_swn


def synthetic(n, mu=0.0, sigma=0.25, affective=True, seed=0):
    """n one-sense words with fixed gold valence; returns (dataset, lexicon)."""
    rng = random.Random(seed)
    lists, items = [], []
    for i in range(n):
        key = LemmaKey(f"w{i}", "n")
        p = rng.randint(0, 4) / 8 if affective else 0.0
        lists.append(SenseList(key, ((p, rng.randint(0, 4) / 8 if affective else 0.0),)))
        items.append(AlignedItem(key, GoldEntry(key.lemma, mu, sigma, mu * 4 + 5, sigma * 4)))
    return AlignedDataset(tuple(items), (), n, n), Lexicon.from_sense_lists(lists)


def oracle(item):
    return item.gold.valence_mu


# -- metrics --------------------------------------------------------------------

def test_mae():
    assert mae([(0.5, 0.3), (-0.5, -0.1)]) == pytest.approx(0.3)
    assert mae([(0.2, 0.2), (-0.1, -0.1)]) == 0
    assert mae([(1, -1)]) == 2
    with pytest.raises(EvaluationError):
        mae([])


def test_success_rate():
    assert success_rate([(0.5, 0.3, 0.8)]) == 1.0
    assert success_rate([(0.7, 0.3, 0.8)]) == 0.0  # z = 0.5 exactly
    assert success_rate([(0.1, 0.1, 0.2), (-0.3, -0.3, 0.5)]) == 1.0
    assert success_rate([(0.1, 0.1, 0.0)]) == 0.0  # zero sigma fails
    with pytest.raises(EvaluationError):
        success_rate([])


def test_s_over_e():
    assert s_over_e(0.325, 0.377) == pytest.approx(0.862, abs=0.003)
    assert round(s_over_e(0.199, 0.624), 3) == 0.319
    assert s_over_e(0, 0.5) == 0
    assert math.isinf(s_over_e(1.0, 0.0))


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(0.001, 1)), min_size=1, max_size=50))
def test_success_equals_zscore_band(rows):
    for pred, mu, sigma in rows:
        row = EvalRow(LemmaKey("x", "n"), pred, mu, sigma)
        z = row.zscore
        # away from the boundary both forms of the criterion agree exactly
        if abs(abs(z) - 0.5) > 1e-9:
            assert row.success == (abs(pred - mu) < sigma / 2)
            assert row.success == (-0.5 < z < 0.5)


def test_zero_sigma_zscore_undefined():
    row = EvalRow(LemmaKey("x", "n"), 0.1, 0.1, 0.0)
    assert row.zscore is None and not row.success


# -- affective filter -------------------------------------------------------------

def test_filter_affective(mini_lexicon):
    gold = [GoldEntry.from_raw(w, 6.0, 1.0) for w in ("cold", "writer", "table", "yellow")]
    ds = align(gold, mini_lexicon)
    kept = filter_affective(ds, mini_lexicon)
    assert [str(k) for k in kept.keys()] == ["cold#a", "yellow#v", "yellow#a"]
    assert set(kept.items) <= set(ds.items)
    assert filter_affective(kept, mini_lexicon) == kept
    empty = AlignedDataset(())
    assert filter_affective(empty, mini_lexicon).items == ()


def test_filter_affective_all_zero_removed():
    lex = Lexicon.from_sense_lists([SenseList.from_scores("z#n", [(0, 0), (0, 0)])])
    ds = AlignedDataset((AlignedItem(LemmaKey("z", "n"), GoldEntry.from_raw("z", 5, 1)),))
    assert filter_affective(ds, lex).items == ()


# -- evaluate_formulae ------------------------------------------------------------

def test_perfect_oracle():
    ds, lex = synthetic(200, mu=0.3)
    (rep,) = evaluate_formulae(ds, lex, [("oracle", oracle)])
    assert rep.mae == 0 and rep.success_rate == 1.0 and math.isinf(rep.s_over_e)


def test_rnd_mae_closed_form():
    ds, lex = synthetic(10_000, mu=0.0, sigma=0.25)
    (rep,) = evaluate_formulae(ds, lex, ["rnd"], seed=11)
    assert 0.48 <= rep.mae <= 0.52
    assert abs(rep.success_rate - 0.125) <= 0.03


def test_reports_sorted_and_share_rows():
    ds, lex = synthetic(300, mu=-0.2, sigma=0.5)
    reps = evaluate_formulae(ds, lex, list(FORMULAS) + [("oracle", oracle)], seed=1)
    assert reps[0].formula == "oracle"
    keys = [(-r.s_over_e, r.formula) for r in reps]
    assert keys == sorted(keys)
    assert len({r.keys() for r in reps}) == 1
    for r in reps:
        assert 0 <= r.mae <= 2 and 0 <= r.success_rate <= 1


def test_evaluate_deterministic():
    ds, lex = synthetic(300, mu=0.1, sigma=0.5)
    a = evaluate_formulae(ds, lex, list(FORMULAS), seed=5)
    b = evaluate_formulae(ds, lex, list(FORMULAS), seed=5)
    assert to_json(a) == to_json(b)
    assert regression_table(a) == regression_table(b)


def test_evaluate_errors():
    ds, lex = synthetic(3)
    with pytest.raises(EvaluationError):
        evaluate_formulae(ds, lex, [])
    with pytest.raises(EvaluationError):
        evaluate_formulae(AlignedDataset(()), lex, ["fs_m"])


def test_regression_table_shape():
    ds, lex = synthetic(50, mu=0.3)
    reps = evaluate_formulae(ds, lex, ["fs_m", ("oracle", oracle)])
    lines = regression_table(reps).splitlines()
    assert lines[0] == "metric\toracle\tfs_m"
    assert lines[1].split("\t")[:2] == ["MAE", "0.000"]
    assert lines[2].split("\t")[:2] == ["success", "1.000"]
    assert lines[3].split("\t")[:2] == ["s/e", "inf"]


# -- classification -----------------------------------------------------------------

def test_classify_word():
    assert classify_word(-0.24375, -0.7) == (NEG, NEG)
    assert classify_word(0.3, -0.2) == (POS, NEG)
    assert classify_word(0.0, 0.5) == (TIE, POS)
    with pytest.raises(EvaluationError):
        classify_word(0.3, 0.0)


@pytest.mark.parametrize("votes, expected", [
    ([POS, POS, POS, POS, NEG, NEG], POS),
    ([POS, POS, POS, NEG, NEG, NEG], POS),
    ([NEG] * 6, NEG),
    ([TIE, TIE, TIE, TIE, NEG, POS], POS),
    ([TIE, TIE, TIE, TIE, NEG, TIE], NEG),
    ([TIE] * 6, POS),
])
def test_committee_vote(votes, expected):
    assert committee_vote(votes) == expected


def test_committee_voter_count():
    with pytest.raises(EvaluationError):
        committee_vote([POS] * 5)


def test_classification_report_examples():
    r = classification_report([(POS, POS), (NEG, POS), (NEG, NEG), (POS, NEG)])
    assert (r.precision, r.recall, r.f1) == (0.5, 0.5, 0.5)
    r = classification_report([(POS, POS), (NEG, NEG)])
    assert (r.precision, r.recall, r.f1) == (1, 1, 1)
    r = classification_report([(TIE, POS), (NEG, NEG)])
    assert r.per_class[POS]["recall"] == 0
    assert r.per_class[NEG]["precision"] == 1 and r.per_class[NEG]["recall"] == 1
    assert r.confusion[POS][TIE] == 1


def test_classification_report_matches_brute_force():
    rng = random.Random(3)
    for _ in range(50):
        preds = [(rng.choice([POS, NEG, TIE]), rng.choice([POS, NEG])) for _ in range(40)]
        if len({a for _, a in preds}) < 2:
            continue
        r = classification_report(preds)
        ps, rs, fs = [], [], []
        for c in (POS, NEG):
            tp = sum(p == c and a == c for p, a in preds)
            pp = sum(p == c for p, _ in preds)
            tt = sum(a == c for _, a in preds)
            prec = tp / pp if pp else 0.0
            rec = tp / tt
            ps.append(prec)
            rs.append(rec)
            fs.append(2 * prec * rec / (prec + rec) if prec + rec else 0.0)
        assert r.precision == pytest.approx(sum(ps) / 2)
        assert r.recall == pytest.approx(sum(rs) / 2)
        assert r.f1 == pytest.approx(sum(fs) / 2)


def test_classification_report_degenerate_gold():
    with pytest.raises(EvaluationError, match="recall undefined"):
        classification_report([(POS, POS), (NEG, POS)])
    with pytest.raises(EvaluationError):
        classification_report([])


def test_classify_formulae_separable():
    text = "a\t1\t0.5\t0\tgood#1\na\t2\t0\t0.5\tbad#1\na\t3\t0.75\t0\tnice#1\na\t4\t0\t0.25\tugly#1\n"
    lex = parse_swn(text)
    gold = [GoldEntry.from_raw(w, m, 1) for w, m in
            (("good", 8), ("bad", 2), ("nice", 7), ("ugly", 3), ("meh", 5))]
    lex_keys = align(gold, lex)
    reps = {r.name: r for r in classify_formulae(lex_keys, lex, seed=1)}
    assert set(reps) == {"fs", "mean", "senti", "uni", "w1", "w2", "swrnd", "rnd", "cc"}
    for name in ("fs", "mean", "senti", "uni", "w1", "w2", "swrnd", "cc"):
        assert reps[name].f1 == 1.0
    assert len(reps["cc"].predictions) == 4  # neutral gold excluded


def test_classify_rnd_is_coin_flip():
    ds, lex = synthetic(10_000, mu=0.5)
    half = len(ds.items) // 2
    items = tuple(AlignedItem(it.key, GoldEntry(it.gold.word, 0.5 if i < half else -0.5, 0.2, 0, 0))
                  for i, it in enumerate(ds.items))
    reps = {r.name: r for r in classify_formulae(ds.subset(items), lex, seed=2, families=["rnd"], committee=False)}
    assert 0.45 <= reps["rnd"].f1 <= 0.55


def test_m_and_d_labels_agree_off_ties():
    rng = random.Random(8)
    from conftest import random_sense_list
    from priorpol.evaluation import label
    from priorpol.formulae import AGGREGATORS, prior_polarity
    for i in range(2000):
        sl = random_sense_list(rng, key=f"w{i}#n")
        for fam in AGGREGATORS:
            lm, ld = label(prior_polarity(f"{fam}_m", sl)), label(prior_polarity(f"{fam}_d", sl))
            if ld != TIE:
                assert lm == ld


def test_classification_table_shape():
    r1 = classification_report([(POS, POS), (NEG, NEG)], "a")
    r2 = classification_report([(POS, POS), (POS, NEG)], "b")
    lines = classification_table([r1, r2]).splitlines()
    assert lines == ["metric\ta\tb", "Precision\t1.000\t0.250", "Recall\t1.000\t0.500", "F1\t1.000\t0.333"]
