import pytest

ACCEPTANCE_LINES = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pareto075():
    from nonovershoot import model

    return model.pareto_spec(alpha=0.75, gamma=1.0)


@pytest.fixture(scope="session")
def lattice075():
    from nonovershoot import model

    return model.lattice_spec(alpha=0.75)
