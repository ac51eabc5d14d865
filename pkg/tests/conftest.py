import pytest

from normcompat.catalogue import load_fixture


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="also run the slow checks (GSp4 simulation, deep enumerations)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="slow; run with --extended")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def fixture_run():
    cache = {}

    def get(name, **overrides):
        key = (name, tuple(sorted(overrides.items())))
        if key not in cache:
            cache[key] = load_fixture(name, **overrides)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for k, m in sys.modules.items() if k.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
