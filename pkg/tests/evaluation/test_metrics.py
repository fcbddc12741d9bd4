import numpy as np
import pytest

from label_diffusion.errors import DataError, ParameterError, ShapeError
from label_diffusion.evaluation import average_recall, average_recall_exact, iou, subcategory_report
from label_diffusion.models.evaluation import EvalRecord, ThresholdGrid
from label_diffusion.models.scene import Number, ThingStuff


def record(value, thing_stuff=ThingStuff.THING, number=Number.SINGULAR, phrase_id="p"):
    return EvalRecord(phrase_id, value, thing_stuff, number)


def test_iou_identical_and_disjoint():
    a = np.zeros((8, 8), dtype=bool)
    a[:4] = True
    assert iou(a, a.copy()) == 1.0
    assert iou(a, ~a) == 0.0


def test_iou_offset_squares():
    a = np.zeros((6, 6), dtype=bool)
    b = np.zeros((6, 6), dtype=bool)
    a[0:3, 0:3] = True
    b[1:4, 1:4] = True
    assert iou(a, b) == pytest.approx(4 / 14)
    assert iou(a, b) == pytest.approx(0.285714, abs=1e-6)


def test_iou_both_empty():
    empty = np.zeros((4, 4), dtype=bool)
    assert iou(empty, empty) == 1.0


def test_iou_shape_mismatch():
    with pytest.raises(ShapeError):
        iou(np.zeros((4, 4)), np.zeros((4, 5)))


def test_default_grid():
    grid = ThresholdGrid.uniform()
    assert len(grid) == 9999
    assert grid.values[0] == pytest.approx(0.0001)
    assert grid.values[-1] == pytest.approx(0.9999)


@pytest.mark.parametrize("values", [[0.0, 0.5], [0.5, 0.5], [0.1, 1.1]])
def test_invalid_grids(values):
    with pytest.raises(ParameterError):
        ThresholdGrid(np.asarray(values))


@pytest.mark.parametrize("metric", [average_recall, average_recall_exact])
def test_average_recall_examples(metric):
    assert metric([record(1.0)]) == 1.0
    assert metric([record(0.0)]) == 0.0
    assert metric([record(0.5), record(1.0)]) == pytest.approx((5000 + 4999 * 0.5) / 9999, abs=1e-12)
    assert metric([record(0.5), record(1.0)]) == pytest.approx(0.750025, abs=1e-6)


def test_below_first_threshold_contributes_nothing():
    assert average_recall_exact([record(0.00005)]) == 0.0


def test_exact_agrees_with_grid_loop(rng):
    grid = ThresholdGrid.uniform()
    for _ in range(1000):
        size = int(rng.integers(1, 30))
        values = rng.random(size)
        values[rng.random(size) < 0.1] = 1.0
        records = [record(float(v)) for v in values]
        assert abs(average_recall(records, grid) - average_recall_exact(records, grid)) <= 1e-12


def test_empty_records():
    with pytest.raises(DataError):
        average_recall([])
    with pytest.raises(DataError):
        average_recall_exact([])


def test_subcategory_all_things():
    records = [record(0.3), record(0.9, number=Number.PLURAL)]
    report = subcategory_report(records)
    assert report.things == report.overall
    assert report.stuff is None
    assert report.plurals == average_recall_exact([records[1]])


def test_subcategory_mixed_tags():
    records = [
        record(1.0, ThingStuff.THING, Number.SINGULAR),
        record(0.0, ThingStuff.STUFF, Number.SINGULAR),
        record(1.0, ThingStuff.THING, Number.PLURAL),
    ]
    report = subcategory_report(records)
    assert report.overall == pytest.approx(2 / 3)
    assert report.things == 1.0
    assert report.stuff == 0.0
    assert report.singulars == pytest.approx(0.5)
    assert report.plurals == 1.0


def test_subcategory_grid_metric_matches():
    records = [record(0.25), record(0.75, ThingStuff.STUFF, Number.PLURAL)]
    grid_based = subcategory_report(records, metric=average_recall).as_dict()
    exact = subcategory_report(records).as_dict()
    for name, value in exact.items():
        assert grid_based[name] == pytest.approx(value, abs=1e-12)


def test_untagged_record_rejected():
    with pytest.raises(DataError):
        subcategory_report([record(0.5), EvalRecord("x", 0.5, None, Number.SINGULAR)])


def test_record_iou_range():
    with pytest.raises(ParameterError):
        record(1.5)


def random_records(rng, size):
    values = rng.random(size)
    values[rng.random(size) < 0.1] = 1.0
    values[rng.random(size) < 0.05] = 0.0
    return [record(float(v), phrase_id=f"p{i}") for i, v in enumerate(values)]


@pytest.mark.parametrize("metric", [average_recall, average_recall_exact])
def test_ar_never_drops_when_ious_rise(rng, metric):
    for _ in range(200):
        records = random_records(rng, int(rng.integers(1, 20)))
        raised = [record(min(1.0, r.iou + float(rng.random()) * 0.3), phrase_id=r.phrase_id) for r in records]
        assert metric(raised) >= metric(records) - 1e-12


@pytest.mark.parametrize("metric", [average_recall, average_recall_exact])
def test_ar_unchanged_by_duplicating_records(rng, metric):
    for _ in range(200):
        records = random_records(rng, int(rng.integers(1, 20)))
        assert metric(records + records) == pytest.approx(metric(records), abs=1e-12)


def test_ar_stays_in_unit_interval(rng):
    grid = ThresholdGrid.uniform(100)
    for _ in range(500):
        records = random_records(rng, int(rng.integers(1, 40)))
        for value in (average_recall(records, grid), average_recall_exact(records), average_recall_exact(records, grid)):
            assert 0.0 <= value <= 1.0


def test_iou_is_symmetric_and_bounded(rng):
    for _ in range(500):
        shape = (int(rng.integers(1, 12)), int(rng.integers(1, 12)))
        a = rng.random(shape) < rng.random()
        b = rng.random(shape) < rng.random()
        forward = iou(a, b)
        assert forward == iou(b, a)
        assert 0.0 <= forward <= 1.0
