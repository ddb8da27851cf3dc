"""Hypothesis settings profiles shared by the property tests.

Usage:
    from tests.property.settings import STANDARD_SETTINGS

    @given(...)
    @STANDARD_SETTINGS
    def test_something(...):
        ...

Tiers:
- STANDARD_SETTINGS: 100 examples - cheap arithmetic properties
- SEARCH_SETTINGS: 30 examples - properties that run a matching or packing search
- QUICK_SETTINGS: 20 examples - input rejection
"""

from hypothesis import HealthCheck, settings

STANDARD_SETTINGS = settings(max_examples=100, deadline=None)

# Each example builds a graph and runs a search
SEARCH_SETTINGS = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])

QUICK_SETTINGS = settings(max_examples=20, deadline=None)
