import pytest

from lorenzlab.report import ReportConfig, scenario_report


@pytest.fixture(scope="session")
def full_report():
    """One full scenario-report run shared by the report and acceptance tests."""
    return scenario_report(ReportConfig())
