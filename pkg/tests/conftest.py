"""Shared test configuration."""

from hypothesis import HealthCheck, settings

# Exact rational arithmetic makes single examples slow but deterministic;
# wall-clock deadlines only add flakiness here.
settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")
