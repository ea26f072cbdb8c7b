import numpy as np
import pytest

from classmine.dataset import parse_csv
from classmine.errors import FitError, SchemaError
from classmine.preprocess import (
    apply_impute,
    apply_normalize,
    descriptive_stats,
    fit_impute,
    fit_normalize,
)


def col(d, name):
    return list(d.column(name))


def test_impute_numeric_mean():
    d = parse_csv("x,class\n1,a\n?,b\n3,a\n")
    p = fit_impute(d)
    assert p.to_dict() == {"x": 2.0}
    assert col(apply_impute(p, d), "x") == [1.0, 2.0, 3.0]


def test_impute_nominal_mode():
    d = parse_csv("c,class\na,y\na,n\nb,y\n?,n\n")
    p = fit_impute(d)
    out = apply_impute(p, d)
    assert d.attribute("c").nominal_values[int(out.values[3, 0])] == "a"


def test_impute_nominal_tie_goes_to_lowest_index():
    d = parse_csv("c,class\nb,y\na,n\n?,y\n")
    out = apply_impute(fit_impute(d), d)
    assert out.values[2, 0] == 0  # "b" was seen first, so it has index 0


def test_impute_all_but_one_missing():
    d = parse_csv("x,class\n?,a\n?,b\n5,a\n")
    assert col(apply_impute(fit_impute(d), d), "x") == [5.0, 5.0, 5.0]


def test_impute_all_missing_column_names_it():
    d = parse_csv("x,y,class\n?,1,a\n?,2,b\n")
    with pytest.raises(FitError, match="'x'"):
        fit_impute(d)


def test_impute_identity_when_nothing_missing(pima):
    p = fit_impute(pima)
    for a in pima.features:
        assert p.fill[a.index] == pytest.approx(pima.column(a.index).mean())
    out = apply_impute(p, pima)
    assert out == pima
    assert np.array_equal(out.values, pima.values)


def test_impute_leaves_known_cells_bit_exact():
    d = parse_csv("x,y,class\n0.1,?,a\n?,0.7,b\n0.30000000000000004,0.2,a\n")
    out = apply_impute(fit_impute(d), d)
    assert not out.has_missing()
    known = ~np.isnan(d.values)
    assert np.array_equal(out.values[known], d.values[known])


def test_impute_schema_mismatch():
    a = parse_csv("x,class\n1,a\n2,b\n")
    b = parse_csv("z,class\n1,a\n2,b\n")
    with pytest.raises(SchemaError):
        apply_impute(fit_impute(a), b)


def test_normalize_basic():
    d = parse_csv("x,class\n2,a\n4,b\n6,a\n")
    p = fit_normalize(d)
    assert p.to_dict() == {"x": {"min": 2.0, "max": 6.0}}
    assert col(apply_normalize(p, d), "x") == [0.0, 0.5, 1.0]


def test_normalize_constant_column_maps_to_zero():
    d = parse_csv("x,class\n5,a\n5,b\n")
    p = fit_normalize(d)
    assert p.bounds[0] == (5.0, 5.0)
    assert col(apply_normalize(p, d), "x") == [0.0, 0.0]


def test_normalize_does_not_clamp():
    train = parse_csv("x,class\n2,a\n6,b\n")
    test = parse_csv("x,class\n8,a\n2,b\n")
    out = apply_normalize(fit_normalize(train), test)
    assert col(out, "x") == [1.5, 0.0]


def test_normalize_requires_imputation_first():
    d = parse_csv("x,class\n1,a\n?,b\n")
    with pytest.raises(FitError, match="imputation"):
        fit_normalize(d)


def test_normalize_leaves_nominal_and_class():
    d = parse_csv("c,x,class\nr,1,a\ng,3,b\n")
    out = apply_normalize(fit_normalize(d), d)
    assert np.array_equal(out.column("c"), d.column("c"))
    assert np.array_equal(out.y, d.y)


def test_pima_plas_raw_range(pima):
    p = fit_normalize(pima)
    assert p.bounds[pima.attribute("plas").index] == (0.0, 199.0)


def test_normalized_columns_span_unit_interval(pima_prepared):
    for a in pima_prepared.features:
        c = pima_prepared.column(a.index)
        assert c.min() == 0.0 and c.max() == 1.0


def test_normalize_idempotent(pima_prepared):
    again = apply_normalize(fit_normalize(pima_prepared), pima_prepared)
    np.testing.assert_allclose(again.values, pima_prepared.values, rtol=0, atol=1e-15)


def test_stats_simple():
    s = descriptive_stats(parse_csv("x,class\n0,a\n1,b\n"))["x"]
    assert (s.minimum, s.maximum, s.mean) == (0.0, 1.0, 0.5)
    assert s.std == pytest.approx(np.sqrt(0.5))
    assert descriptive_stats(parse_csv("x,class\n0,a\n1,b\n"), ddof=0)["x"].std == 0.5


@pytest.mark.parametrize(
    "name, mean, std",
    [("plas", 0.608, 0.161), ("age", 0.204, 0.196)],
)
def test_stats_pima(pima_prepared, name, mean, std):
    s = descriptive_stats(pima_prepared)[name]
    assert s.mean == pytest.approx(mean, abs=0.02)
    assert s.std == pytest.approx(std, abs=0.02)
    assert s.minimum <= s.mean <= s.maximum
