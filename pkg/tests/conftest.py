import pytest

from signalmatch.data import Dataset, SignalLibrary, SignalPair, SynthConfig, generate_synthetic

# one line per acceptance criterion, printed after the run
_acceptance_outcomes: dict[str, str] = {}
acceptance_notes: list[str] = []


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_outcomes[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_outcomes.items():
        flag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{flag}  {name}")
    for note in acceptance_notes:
        terminalreporter.write_line(f"note  {note}")


@pytest.fixture
def tiny_dataset() -> Dataset:
    """Three hand-checkable pairs over two labels."""
    return Dataset(
        [
            SignalPair("p1", "zone trip", "A"),
            SignalPair("p1", "zone block", "B"),
            SignalPair("p2", "trip", "A"),
        ]
    )


@pytest.fixture
def tiny_library() -> SignalLibrary:
    return SignalLibrary.from_names(["A", "B"])


# Calibrated generator settings: noiseless runs give the token-vote model
# a top-1 accuracy ceiling of ~0.99 (see scripts/calibrate_synthetic.py).
CALIB = dict(n_classes=50, n_projects=20, pairs_per_project=50, vocab_size=150)


@pytest.fixture(scope="session")
def noiseless_corpus():
    return generate_synthetic(SynthConfig(noise_rate=0.0, seed=7, **CALIB))


@pytest.fixture(scope="session")
def noisy_corpus():
    return generate_synthetic(SynthConfig(noise_rate=0.1, seed=7, **CALIB))
