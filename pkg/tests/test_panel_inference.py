import pytest
import numpy as np

from src.error import CoefficientLookupError
from src.panel.estimator import PanelFit
from src.panel.inference import chinese_vaccine_tests, coefficient_table, linear_combo, stars
from src.panel.spec import PanelSpec
from src.panel.terms import spec_terms

# published column (2) estimates: (V1, V2, V1CHN, V2CHN)
CASE_COLUMN_2 = (-0.0077, 0.0024, 0.0149, -0.0138)
DEATH_COLUMN_2 = (-0.0093, 0.0014, 0.0169, -0.0116)


def _fit(outcome, vaccine_params, n_clusters=37, seed=0):
    spec = PanelSpec(outcome=outcome, include_chinese_terms=True)
    names = [term.name for term in spec_terms(spec)]
    params = np.full(len(names), 0.01)
    params[:4] = vaccine_params
    rng = np.random.default_rng(seed)
    root = rng.normal(scale=0.003, size=(len(names), len(names)))
    return PanelFit(
        spec=spec,
        names=names,
        params=params,
        cov=root @ root.T,
        rows_per_country={f"C{g:02d}": 382 for g in range(n_clusters)},
    )


@pytest.mark.unit
@pytest.mark.fast
class TestLinearCombo:
    """Test cases for linear_combo function."""

    def test_case_sums(self):
        """Test the published Chinese-vaccine sums for case growth."""
        fit = _fit("cases", CASE_COLUMN_2)

        assert linear_combo(fit, {"V1_l21": 1.0, "V1CHN_l21": 1.0})[0] == pytest.approx(0.0072, abs=1e-12)
        assert linear_combo(fit, {"V2_l7": 1.0, "V2CHN_l7": 1.0})[0] == pytest.approx(-0.0114, abs=1e-12)

    def test_death_sums(self):
        """Test the published Chinese-vaccine sums for death growth."""
        fit = _fit("deaths", DEATH_COLUMN_2)

        assert linear_combo(fit, {"V1_l35": 1.0, "V1CHN_l35": 1.0})[0] == pytest.approx(0.0075, abs=1.5e-4)
        assert linear_combo(fit, {"V2_l21": 1.0, "V2CHN_l21": 1.0})[0] == pytest.approx(-0.0102, abs=1e-12)

    def test_unit_weight(self):
        """Test that a unit weight returns the coefficient and its own standard error."""
        fit = _fit("cases", CASE_COLUMN_2)

        estimate, error = linear_combo(fit, {"P_l14": 1.0})
        assert (estimate, error) == fit.coefficient("P_l14")

    def test_standard_error(self):
        """Test the quadratic-form standard error."""
        fit = _fit("cases", CASE_COLUMN_2)
        i, j = fit.names.index("V1_l21"), fit.names.index("V1CHN_l21")

        _, error = linear_combo(fit, {"V1_l21": 2.0, "V1CHN_l21": -1.0})
        expected = np.sqrt(4 * fit.cov[i, i] + fit.cov[j, j] - 4 * fit.cov[i, j])
        assert error == pytest.approx(expected, rel=1e-12)

    def test_unknown_name(self):
        """Test that an unknown coefficient raises CoefficientLookupError."""
        with pytest.raises(CoefficientLookupError):
            linear_combo(_fit("cases", CASE_COLUMN_2), {"V3_l21": 1.0})


@pytest.mark.unit
@pytest.mark.fast
class TestCoefficientTable:
    """Test cases for coefficient_table and chinese_vaccine_tests functions."""

    @pytest.mark.parametrize("pvalue, expected", [(0.005, "***"), (0.03, "**"), (0.07, "*"), (0.2, ""), (float("nan"), "")])
    def test_stars(self, pvalue, expected):
        """Test significance markers at 99/95/90%."""
        assert stars(pvalue) == expected

    def test_table(self):
        """Test t statistics and t(G-1) p-values."""
        from scipy import stats

        fit = _fit("cases", CASE_COLUMN_2)
        table = coefficient_table(fit)
        row = table.set_index("name").loc["V1_l21"]

        assert list(table.columns) == ["name", "estimate", "std_error", "t", "p", "stars"]
        assert row["t"] == pytest.approx(row["estimate"] / row["std_error"])
        assert row["p"] == pytest.approx(2 * stats.t.sf(abs(row["t"]), df=36))

    def test_chinese_tests(self):
        """Test the Chinese-vaccine combination rows."""
        table = chinese_vaccine_tests(_fit("cases", CASE_COLUMN_2))

        assert list(table["name"]) == ["V1_l21+V1CHN_l21", "V2_l7+V2CHN_l7"]
        np.testing.assert_allclose(table["estimate"], [0.0072, -0.0114], atol=1e-12)

    def test_no_chinese_terms(self):
        """Test that fits without Chinese terms give an empty table."""
        spec = PanelSpec(outcome="cases")
        names = [term.name for term in spec_terms(spec)]
        fit = PanelFit(spec=spec, names=names, params=np.zeros(len(names)), cov=np.eye(len(names)))

        assert chinese_vaccine_tests(fit).empty
