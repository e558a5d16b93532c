import pytest

from vermaspin.context import Context

_CONTEXTS = {}


@pytest.fixture
def ctx_factory():
    """Shared, cache-preserving Context factory (contexts are immutable)."""

    def get(p, q, variant="standard"):
        key = (p, q, variant)
        if key not in _CONTEXTS:
            _CONTEXTS[key] = Context(p, q, variant=variant)
        return _CONTEXTS[key]

    return get
