import csv
import json

import pytest
from hypothesis import given
from hypothesis import strategies as hst

from explicat import evalkit as ev
from explicat.errors import EmptyTestSet
from explicat.schema import ALLabel

T, F, D = ALLabel.TRUE, ALLabel.FALSE, ALLabel.DISCARD


def _case(tp, fp, tn, fn):
    """Build scores/labels realizing the given confusion counts at threshold 0.5."""
    scores = [0.9] * tp + [0.9] * fp + [0.1] * tn + [0.1] * fn
    labels = [T] * tp + [F] * fp + [F] * tn + [T] * fn
    return scores, labels


class TestConfusion:
    def test_hand_counts(self):
        scores, labels = _case(tp=3, fp=1, tn=14, fn=2)
        conf = ev.confusion(scores, labels)
        assert (conf.tp, conf.fp, conf.tn, conf.fn) == (3, 1, 14, 2)
        assert conf.n == 20
        assert conf.n_discarded == 0

    def test_discard_excluded(self):
        scores, labels = _case(tp=1, fp=0, tn=1, fn=0)
        conf = ev.confusion(scores + [0.99, 0.01], labels + [D, D])
        assert (conf.tp, conf.fp, conf.tn, conf.fn) == (1, 0, 1, 0)
        assert conf.n_discarded == 2

    def test_threshold_boundary_is_positive(self):
        conf = ev.confusion([0.5], [T])
        assert conf.tp == 1

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ev.confusion([0.5], [T, F])

    @given(
        hst.lists(hst.tuples(hst.floats(0, 1), hst.sampled_from([T, F, D])), max_size=60),
        hst.floats(0.01, 0.99),
    )
    def test_brute_force_oracle(self, rows, threshold):
        scores = [s for s, _ in rows]
        labels = [l for _, l in rows]
        conf = ev.confusion(scores, labels, threshold)
        # oracle: independent loop over all four outcomes
        tp = sum(1 for s, l in rows if l is T and s >= threshold)
        fp = sum(1 for s, l in rows if l is F and s >= threshold)
        tn = sum(1 for s, l in rows if l is F and s < threshold)
        fn = sum(1 for s, l in rows if l is T and s < threshold)
        assert (conf.tp, conf.fp, conf.tn, conf.fn) == (tp, fp, tn, fn)
        assert conf.n + conf.n_discarded == len(rows)

    @given(hst.lists(hst.tuples(hst.floats(0, 1), hst.sampled_from([T, F])), max_size=40))
    def test_permutation_invariant(self, rows):
        import random

        shuffled = rows[:]
        random.Random(0).shuffle(shuffled)
        a = ev.confusion([s for s, _ in rows], [l for _, l in rows])
        b = ev.confusion([s for s, _ in shuffled], [l for _, l in shuffled])
        assert a == b

    def test_threshold_monotone(self):
        # raising the threshold can only shrink the predicted-positive set
        scores = [i / 20 for i in range(21)]
        labels = [T if i % 3 == 0 else F for i in range(21)]
        prev_pos = None
        for t in [i / 10 for i in range(11)]:
            conf = ev.confusion(scores, labels, t)
            n_pos = conf.tp + conf.fp
            if prev_pos is not None:
                assert n_pos <= prev_pos
            prev_pos = n_pos


class TestMetrics:
    # each tuple hand-worked from the definitions
    FIXTURES = [
        ((3, 1, 14, 2), (0.85, 0.75, 0.6, 2 * 0.75 * 0.6 / 1.35)),
        ((10, 0, 10, 0), (1.0, 1.0, 1.0, 1.0)),
        ((0, 0, 10, 0), (1.0, 0.0, 0.0, 0.0)),
        ((0, 5, 5, 0), (0.5, 0.0, 0.0, 0.0)),
        ((0, 0, 0, 5), (0.0, 0.0, 0.0, 0.0)),
        ((5, 5, 0, 0), (0.5, 0.5, 1.0, 2 / 3)),
        ((1, 1, 1, 1), (0.5, 0.5, 0.5, 0.5)),
        ((8, 2, 85, 5), (0.93, 0.8, 8 / 13, 2 * 0.8 * (8 / 13) / (0.8 + 8 / 13))),
        ((2, 0, 97, 1), (0.99, 1.0, 2 / 3, 0.8)),
        ((4, 6, 88, 2), (0.92, 0.4, 2 / 3, 0.5)),
    ]

    @pytest.mark.parametrize("counts,expected", FIXTURES)
    def test_hand_worked_fixtures(self, counts, expected):
        tp, fp, tn, fn = counts
        row = ev.metrics(ev.Confusion(tp=tp, fp=fp, tn=tn, fn=fn))
        acc, prec, rec, f1 = expected
        assert row.accuracy == pytest.approx(acc)
        assert row.precision == pytest.approx(prec)
        assert row.recall == pytest.approx(rec)
        assert row.f1 == pytest.approx(f1)
        assert row.n_test == tp + fp + tn + fn

    def test_empty_confusion_all_zero(self):
        row = ev.metrics(ev.Confusion(0, 0, 0, 0))
        assert (row.accuracy, row.precision, row.recall, row.f1) == (0.0, 0.0, 0.0, 0.0)

    @given(hst.integers(0, 50), hst.integers(0, 50), hst.integers(0, 50), hst.integers(0, 50))
    def test_bounds_and_f1_mean_property(self, tp, fp, tn, fn):
        row = ev.metrics(ev.Confusion(tp, fp, tn, fn))
        for v in (row.accuracy, row.precision, row.recall, row.f1):
            assert 0.0 <= v <= 1.0
        # F1 is the harmonic mean: never above the arithmetic mean of P and R
        assert row.f1 <= (row.precision + row.recall) / 2 + 1e-12


class TestCrossLingual:
    def _sets(self):
        return {
            "de": ([0.9, 0.1], [T, F]),
            "es": ([0.9, 0.9], [T, F]),
            "nl": ([0.1, 0.1], [T, F]),
        }

    def test_rows_sorted_by_language(self):
        rows = ev.cross_lingual_eval(lambda xs: list(xs), self._sets(), checkpoint="L8")
        assert [r.lang_pair for r in rows] == ["de", "es", "nl"]
        assert [r.checkpoint for r in rows] == ["L8"] * 3
        assert rows[0].f1 == 1.0
        assert rows[1].accuracy == 0.5
        assert rows[2].recall == 0.0

    def test_empty_set_raises(self):
        with pytest.raises(EmptyTestSet):
            ev.cross_lingual_eval(lambda xs: list(xs), {"de": ([], [])})


class TestOutputs:
    def _rows(self):
        return [
            ev.metrics(ev.Confusion(3, 1, 14, 2), checkpoint="L0", lang_pair="de"),
            ev.metrics(ev.Confusion(8, 2, 85, 5), checkpoint="L13", lang_pair="de"),
        ]

    def test_csv_roundtrip(self, tmp_path):
        path = tmp_path / "m.csv"
        ev.write_metrics_csv(self._rows(), path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["checkpoint"] for r in rows] == ["L0", "L13"]
        assert float(rows[0]["accuracy"]) == pytest.approx(0.85)
        assert set(rows[0]) == set(ev.CSV_COLUMNS)

    def test_json_roundtrip(self, tmp_path):
        path = tmp_path / "m.json"
        ev.write_metrics_json(self._rows(), path)
        data = json.loads(path.read_text())
        assert data[1]["checkpoint"] == "L13"
        assert data[0]["n_test"] == 20

    def test_learning_curve_deltas(self):
        curve = ev.learning_curve(self._rows())
        assert curve[0]["accuracy_delta"] == 0.0
        assert curve[1]["accuracy_delta"] == pytest.approx(0.93 - 0.85)
        assert curve[1]["f1_delta"] == pytest.approx(
            ev.metrics(ev.Confusion(8, 2, 85, 5)).f1
            - ev.metrics(ev.Confusion(3, 1, 14, 2)).f1
        )
