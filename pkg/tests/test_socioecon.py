"""Emission-intensity arithmetic and the upscaling pipeline."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempalign import bundle
from tempalign import socioecon as soc
from tempalign.errors import ConfigurationError, DomainError, ValidationError
from tempalign.fair import ParameterVector, run
from tempalign.uncertainty import propagate


def constituent(name="c", sector="steel", s1=0.0, s2=0.0, s3=0.0, gva=1.0):
    return soc.Constituent(name=name, sector=sector, scope1=s1, scope2=s2,
                           scope3=s3, gva=gva)


SSAB = soc.Constituent(name="SSAB", sector="iron_and_steel",
                       scope1=9582.0, scope2=1179.0, scope3=11352.0, gva=3283.0)


# ---------------------------------------------------------------------------
# company EEI


def test_company_eei_published_inputs():
    expected = (9582.0 + 1179.0 + 11352.0) * 1000.0 / 3283.0
    assert soc.company_eei(SSAB) == pytest.approx(expected, rel=1e-12)
    assert soc.company_eei(SSAB) == pytest.approx(6735.6, abs=0.05)


def test_company_eei_zero_emissions():
    assert soc.company_eei(constituent(gva=5.0)) == 0.0


def test_company_eei_ratio_identity():
    # emissions x tonnes and GVA x million: intensity is exactly 1
    x = 7.25
    c = constituent(s1=x / 1000.0, gva=x)
    assert soc.company_eei(c) == pytest.approx(1.0, rel=1e-12)


def test_company_eei_scope_mask():
    assert soc.company_eei(SSAB, scope_mask={1, 2}) == pytest.approx(
        (9582.0 + 1179.0) * 1000.0 / 3283.0, rel=1e-12)
    with pytest.raises(ConfigurationError):
        soc.company_eei(SSAB, scope_mask={4})


def test_gva_must_be_positive():
    with pytest.raises(ValidationError):
        constituent(gva=0.0)


# ---------------------------------------------------------------------------
# portfolio sector EEI


def test_portfolio_sector_eei_single_constituent():
    p = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    assert soc.portfolio_sector_eei(p, "iron_and_steel") == soc.company_eei(SSAB)


def test_portfolio_sector_eei_emission_weighted():
    # emissions 10 and 30 kt with intensities 100 and 200 -> 175
    c1 = constituent("a", s1=10.0, gva=10.0 * 1000.0 / 100.0)
    c2 = constituent("b", s1=30.0, gva=30.0 * 1000.0 / 200.0)
    p = soc.Portfolio(constituents=(c1, c2), base_year=2022)
    assert soc.portfolio_sector_eei(p, "steel") == pytest.approx(175.0, rel=1e-12)


def test_portfolio_sector_eei_constant_fixed_point():
    cs = tuple(constituent(str(i), s1=w, gva=w * 1000.0 / 42.0)
               for i, w in enumerate((1.0, 5.0, 17.0)))
    p = soc.Portfolio(constituents=cs, base_year=2022)
    assert soc.portfolio_sector_eei(p, "steel") == pytest.approx(42.0, rel=1e-12)


def test_sector_not_represented_signal():
    p = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    with pytest.raises(soc.SectorNotRepresented):
        soc.portfolio_sector_eei(p, "aviation")


# ---------------------------------------------------------------------------
# benchmark EEI


def test_benchmark_eei_published_ensemble():
    bench = bundle.load_bundled_benchmark()
    total_kt = (112900.0 + 6100.0 + 6100.0) + (22525.0 + 950.0 + 3900.0) \
        + (12710.0 + 480.0 + 11310.0) + (9582.0 + 1179.0 + 11352.0)
    total_gva = 19354.0 + 8149.17 + 5459.34 + 3283.0
    expected = total_kt * 1000.0 / total_gva
    got = soc.benchmark_sector_eei(bench, "iron_and_steel")
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(5492.7, abs=0.1)


def test_benchmark_eei_single_company():
    b = soc.BenchmarkEnsemble(constituents=(SSAB,), base_year=2022)
    assert soc.benchmark_sector_eei(b, "iron_and_steel") == soc.company_eei(SSAB)


def test_benchmark_eei_gva_weighted():
    # GVAs 1 and 3 with intensities 4 and 8 -> 7
    c1 = constituent("a", s1=4.0 * 1.0 / 1000.0, gva=1.0)
    c2 = constituent("b", s1=8.0 * 3.0 / 1000.0, gva=3.0)
    b = soc.BenchmarkEnsemble(constituents=(c1, c2), base_year=2022)
    assert soc.benchmark_sector_eei(b, "steel") == pytest.approx(7.0, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3))
def test_benchmark_eei_scale_invariant(c):
    base = (constituent("a", s1=5.0, s3=2.0, gva=3.0),
            constituent("b", s1=1.0, s2=0.5, gva=7.0))
    scaled = tuple(soc.Constituent(
        name=x.name, sector=x.sector, scope1=x.scope1 * c, scope2=x.scope2 * c,
        scope3=x.scope3 * c, gva=x.gva * c) for x in base)
    e0 = soc.benchmark_sector_eei(soc.BenchmarkEnsemble(base, 2022), "steel")
    e1 = soc.benchmark_sector_eei(soc.BenchmarkEnsemble(scaled, 2022), "steel")
    assert e1 == pytest.approx(e0, rel=1e-9)


# ---------------------------------------------------------------------------
# sector emissions scaling


def test_sector_emissions_neutral_ratio():
    gases = {"co2": 4.0, "ch4": 0.5}
    out = soc.portfolio_sector_emissions(1234.5, 1234.5, gases)
    assert out == gases


def test_sector_emissions_zero_portfolio():
    out = soc.portfolio_sector_emissions(0.0, 5000.0, {"co2": 4.0})
    assert out["co2"] == 0.0


def test_sector_emissions_published_ratio():
    out = soc.portfolio_sector_emissions(2964.9, 5492.7, {"gas": 1.0})
    assert out["gas"] == pytest.approx(2964.9 / 5492.7, rel=1e-12)
    assert out["gas"] == pytest.approx(0.5398, abs=5e-5)


def test_sector_emissions_preserve_gas_ratios():
    gases = {"a": 3.0, "b": 12.0, "c": 0.75}
    out = soc.portfolio_sector_emissions(2000.0, 5000.0, gases)
    assert out["b"] / out["a"] == pytest.approx(4.0, rel=1e-12)
    assert out["c"] / out["a"] == pytest.approx(0.25, rel=1e-12)


def test_sector_emissions_bad_benchmark():
    with pytest.raises(DomainError):
        soc.portfolio_sector_emissions(1.0, 0.0, {"co2": 1.0})


# ---------------------------------------------------------------------------
# global pathway assembly


def test_neutral_portfolio_reproduces_scenario(ssp2):
    """Equal portfolio and benchmark intensities leave the pathway untouched.

    The emission-weighted portfolio mean and the GVA-weighted benchmark mean
    coincide exactly when the ensembles carry one company or homogeneous
    intensities; both neutral cases must reproduce the scenario bit for bit.
    """
    shares = bundle.load_bundled_shares()
    single = soc.BenchmarkEnsemble(constituents=(SSAB,), base_year=2022)
    p_single = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    pw = soc.portfolio_global_pathway(p_single, single, ssp2, shares)
    assert np.array_equal(pw.values, ssp2.emissions)

    homogeneous = (
        constituent("a", "iron_and_steel", s1=10.0, gva=10.0 * 1000.0 / 500.0),
        constituent("b", "iron_and_steel", s1=40.0, gva=40.0 * 1000.0 / 500.0),
    )
    bench_h = soc.BenchmarkEnsemble(constituents=homogeneous, base_year=2022)
    p_h = soc.Portfolio(constituents=homogeneous, base_year=2022)
    pw_h = soc.portfolio_global_pathway(p_h, bench_h, ssp2, shares)
    assert np.array_equal(pw_h.values, ssp2.emissions)


def test_missing_base_year_rejected(ssp2):
    bench = bundle.load_bundled_benchmark()
    shares = bundle.load_bundled_shares()
    p = soc.Portfolio(constituents=(SSAB,), base_year=2345)
    with pytest.raises(ValidationError):
        soc.portfolio_global_pathway(p, bench, ssp2, shares)


def test_history_untouched_future_scaled(ssp2):
    bench = bundle.load_bundled_benchmark()
    shares = bundle.load_bundled_shares()
    p = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    pw = soc.portfolio_global_pathway(p, bench, ssp2, shares)
    cut = ssp2.pathway.year_index(2022)
    np.testing.assert_array_equal(pw.values[:cut], ssp2.emissions[:cut])
    k = soc.pathway_adjustment_factor(
        soc.intensity_ratios(p, bench), shares)
    assert k > 1.0  # published inputs sit above the benchmark intensity
    nz = ssp2.emissions[cut] != 0
    np.testing.assert_allclose(pw.values[cut:, nz],
                               k * ssp2.emissions[cut:, nz], rtol=1e-12)


def test_unknown_sector_rejected(ssp2):
    bench_extra = soc.BenchmarkEnsemble(
        constituents=bundle.load_bundled_benchmark().constituents
        + (constituent("x", "nonexistent_sector", s1=1.0, gva=1.0),),
        base_year=2022)
    shares = bundle.load_bundled_shares()
    p = soc.Portfolio(
        constituents=(constituent("x", "nonexistent_sector", s1=1.0, gva=1.0),),
        base_year=2022)
    with pytest.raises(ConfigurationError):
        soc.portfolio_global_pathway(p, bench_extra, ssp2, shares)


def test_implied_temperature_neutrality_end_to_end(ssp2, theta):
    bench = soc.BenchmarkEnsemble(constituents=(SSAB,), base_year=2022)
    shares = bundle.load_bundled_shares()
    neutral = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    band, summary = soc.implied_temperature(
        neutral, bench, ssp2, shares, chain=None, n=150, seed=13)
    baseline = propagate(ssp2, theta=theta, n=150, seed=13, base_year=2022)
    np.testing.assert_array_equal(band.median, baseline.median)
    assert summary["mean_end"] == baseline.mean[-1]
    assert "mean_2050" in summary and summary["end_year"] == 2100


def test_implied_temperature_monotone_in_emissions(ssp2):
    bench = bundle.load_bundled_benchmark()
    shares = bundle.load_bundled_shares()
    high = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    lowered = soc.Constituent(
        name="SSAB", sector="iron_and_steel", scope1=9582.0 * 0.5,
        scope2=1179.0 * 0.5, scope3=11352.0 * 0.5, gva=3283.0)
    low = soc.Portfolio(constituents=(lowered,), base_year=2022)
    _, s_high = soc.implied_temperature(high, bench, ssp2, shares, n=150, seed=21)
    _, s_low = soc.implied_temperature(low, bench, ssp2, shares, n=150, seed=21)
    assert s_low["mean_end"] <= s_high["mean_end"]


# ---------------------------------------------------------------------------
# ingestion helpers


def test_portfolio_json_roundtrip(tmp_path):
    p = soc.Portfolio(constituents=(SSAB,), base_year=2022)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(soc.portfolio_to_dict(p)))
    again = soc.load_portfolio(path)
    assert again.constituents[0] == SSAB
    assert again.base_year == 2022


def test_currency_conversion_at_ingest(tmp_path):
    doc = {"base_year": 2022, "constituents": [{
        "name": "k", "sector": "steel", "scope1_kt": 1.0, "scope2_kt": 0.0,
        "scope3_kt": 0.0, "gva_value": 1000.0, "gva_currency": "SEK"}]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    p = soc.load_portfolio(path)
    assert p.constituents[0].gva == pytest.approx(1000.0 * 0.0988, rel=1e-12)


def test_unknown_currency_rejected(tmp_path):
    doc = {"base_year": 2022, "constituents": [{
        "name": "k", "sector": "steel", "scope1_kt": 1.0, "scope2_kt": 0.0,
        "scope3_kt": 0.0, "gva_value": 1.0, "gva_currency": "XYZ"}]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigurationError):
        soc.load_portfolio(path)


def test_fiscal_year_proration():
    # fiscal year ending in September: 9 months of it fall in the calendar year
    blended = soc.prorate_fiscal_year(120.0, 240.0, fy_end_month=9)
    assert blended == pytest.approx(0.75 * 120.0 + 0.25 * 240.0, rel=1e-12)
    with pytest.raises(ConfigurationError):
        soc.prorate_fiscal_year(1.0, 2.0, fy_end_month=0)


def test_gross_value_added_sum():
    assert soc.gross_value_added(1996.0, 1286.0) == pytest.approx(3282.0)


def test_bundled_portfolios_consistent():
    """The bundled SSAB variants relate by the documented transformations."""
    reported = bundle.load_bundled_portfolio("ssab")
    green = bundle.load_bundled_portfolio("ssab_green_steel")
    c_rep, c_green = reported.constituents[0], green.constituents[0]
    factor = 0.05 / 2.4
    assert c_green.scope1 == pytest.approx(c_rep.scope1 * factor, abs=1e-3)
    assert c_green.scope2 == pytest.approx(c_rep.scope2 * factor, abs=1e-3)
    assert c_green.scope3 == c_rep.scope3
    # the swap lands at the published reduced inventory
    assert green.total_emissions_kt() == pytest.approx(11570.0, rel=1e-3)

    harmonized = bundle.load_bundled_portfolio("ssab_scope3_harmonized")
    assert soc.company_eei(harmonized.constituents[0]) == pytest.approx(4902.0, abs=0.01)
    harmonized_green = bundle.load_bundled_portfolio("ssab_scope3_harmonized_green_steel")
    c_h, c_hg = harmonized.constituents[0], harmonized_green.constituents[0]
    assert c_hg.scope1 == pytest.approx(c_h.scope1 * factor, abs=1e-3)
    assert c_hg.scope3 == c_h.scope3
