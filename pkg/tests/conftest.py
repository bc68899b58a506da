"""Shared fixtures: enumerated groups are expensive enough to reuse."""

import pytest

from klcells import coxeter


@pytest.fixture(scope="session")
def groups():
    cache = {}

    def get(name: str):
        if name not in cache:
            cache[name] = coxeter.from_type(name)
        return cache[name]

    return get
