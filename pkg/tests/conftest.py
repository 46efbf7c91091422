import dataclasses

import pytest

from wsncluster.model import RadioParams, ScenarioConfig, table1_scenario


@pytest.fixture
def radio():
    return RadioParams()


@pytest.fixture
def default_config():
    return table1_scenario()


@pytest.fixture
def small_config():
    """A 20-node scenario that runs a round in well under a millisecond."""
    return dataclasses.replace(
        ScenarioConfig(), n_nodes=20, e_min=0.05, e_max=0.15,
        homogeneous_energy=0.1)


@pytest.fixture
def rda_config():
    """Half the nodes on fixed schedules, a tenth of them malfunctioning."""
    return dataclasses.replace(
        ScenarioConfig(), frac_rda=0.5, frac_malfunction=0.1)
