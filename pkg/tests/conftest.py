import pytest
import structlog


@pytest.fixture(autouse=True)
def _reset_structlog():
    # runner.main() binds structlog to the per-test captured stderr; restore defaults afterwards.
    yield
    structlog.reset_defaults()
