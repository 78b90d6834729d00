import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Call with (number, description) at the top of an acceptance test."""
    lines = request.config.stash.setdefault(_LINES, [])
    state = {}

    def record(number, text):
        state["line"] = (number, text)

    yield record
    if "line" not in state:
        return
    number, text = state["line"]
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    lines.append(f"{'FAIL' if failed else 'PASS'} criterion {number}: {text} [{request.node.name}]")


@pytest.hookimpl(wrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.rep_call = rep
    return rep


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in lines:
            terminalreporter.write_line(ln)
