"""Shared test configuration.

The release-gate tests in test_acceptance.py run long ensembles, so
they are ordered after every other module regardless of collection
order.
"""


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: "test_acceptance" in item.nodeid)
