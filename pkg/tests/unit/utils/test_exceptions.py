"""
Unit tests for the exception hierarchy
"""

import pytest

from utils.exceptions import (
    ConfigError,
    InvalidDimensionError,
    NonFiniteStateError,
    PnpVampError,
    ScenarioError,
)


class TestExceptions:
    """Test suite for PnpVampError subclasses"""

    def test_builtin_bases(self):
        """Test callers can catch the builtin exception types"""
        assert issubclass(InvalidDimensionError, ValueError)
        assert issubclass(ConfigError, ValueError)
        assert issubclass(NonFiniteStateError, RuntimeError)
        assert issubclass(ScenarioError, PnpVampError)

    def test_non_finite_carries_iteration(self):
        """Test the iteration index is kept and shown"""
        err = NonFiniteStateError("NaN in r1", iteration=4)
        assert err.iteration == 4
        assert "iteration 4" in str(err)

    def test_scenario_error_coordinates(self):
        """Test coordinates are attached to the message"""
        err = ScenarioError("boom", scenario="cond-sweep", coordinates={"cond": 10.0, "trial": 2})
        assert err.coordinates == {"cond": 10.0, "trial": 2}
        assert "cond-sweep" in str(err)
        assert "cond=10.0" in str(err)
        with pytest.raises(RuntimeError):
            raise err
