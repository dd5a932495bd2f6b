import pytest

from frontlab import solve_front


@pytest.fixture(scope="session")
def fronts():
    """Session-wide front cache so test modules share expensive solves."""
    cache = {}

    def get(nu, **kwargs):
        key = (nu, tuple(sorted(kwargs.items())))
        if key not in cache:
            cache[key] = solve_front(nu, **kwargs)
        return cache[key]

    return get
