import numpy as np
import pytest

from tempalign import bundle
from tempalign.fair import EmissionPathway, ParameterVector, co2e_schema


@pytest.fixture(scope="session")
def theta():
    return ParameterVector()


@pytest.fixture(scope="session")
def schema39():
    return bundle.load_gas_schema()


@pytest.fixture(scope="session")
def ssp2():
    return bundle.load_bundled_scenario("SSP2-RCP4.5")


@pytest.fixture(scope="session")
def ssp585():
    return bundle.load_bundled_scenario("SSP5-RCP8.5")


@pytest.fixture(scope="session")
def observations():
    return bundle.load_bundled_observations()


@pytest.fixture
def co2e_ramp():
    """Simple 101-year CO2e ramp pathway, GtC/yr."""
    years = np.arange(2000, 2101)
    values = np.linspace(2.0, 12.0, years.size).reshape(-1, 1)
    return EmissionPathway(years=years, values=values, schema=co2e_schema())


def make_co2e_pathway(values, first_year=2000):
    values = np.asarray(values, dtype=float).reshape(-1, 1)
    years = np.arange(first_year, first_year + values.shape[0])
    return EmissionPathway(years=years, values=values, schema=co2e_schema())
