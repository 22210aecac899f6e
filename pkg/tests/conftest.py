"""Pytest configuration and shared fixtures."""

from pathlib import Path

import pytest

from cifboot.data import build_risk_table, ingest_csv
from cifboot.engine import ZComponents, components_for
from cifboot.multipliers import SchemeRegistry, create_default_registry
from cifboot.simulation import DGPSpec, calibrate_rates, generate_cohort
from cifboot.types import Cohort, RiskTable

# ============================================================================
# Path Fixtures
# ============================================================================

@pytest.fixture
def fixtures_dir() -> Path:
    """Path to test fixtures directory."""
    return Path(__file__).parent / "fixtures" / "cifboot"


@pytest.fixture
def small_csv(fixtures_dir: Path) -> Path:
    """Five subjects, no ties, no truncation."""
    return fixtures_dir / "small.csv"


@pytest.fixture
def demo_csv(fixtures_dir: Path) -> Path:
    """24 subjects in two groups with some delayed entries."""
    return fixtures_dir / "demo.csv"


@pytest.fixture
def ties_csv(fixtures_dir: Path) -> Path:
    """Cohort with tied exit times."""
    return fixtures_dir / "ties.csv"


@pytest.fixture
def reference_csv(fixtures_dir: Path) -> Path:
    """Reference CIF as a (time, value) table."""
    return fixtures_dir / "reference.csv"


# ============================================================================
# Cohort Fixtures
# ============================================================================

@pytest.fixture
def small_cohort() -> Cohort:
    """Exits 1..5 with causes 1, 2, censored, 1, 1.

    Hand-computed: KM = .8, .6, .6, .3, 0; F1 = .2, .2, .2, .5, .8;
    F2 = 0, .2, .2, .2, .2; Y = 5, 4, 3, 2, 1.
    """
    return Cohort.from_arrays(exit=[1.0, 2.0, 3.0, 4.0, 5.0], cause=[1, 2, 0, 1, 1])


@pytest.fixture
def small_rt(small_cohort: Cohort) -> RiskTable:
    """Risk table of the small cohort."""
    return build_risk_table(small_cohort)


@pytest.fixture
def demo_cohort(demo_csv: Path) -> Cohort:
    """Ingested demo cohort."""
    return ingest_csv(demo_csv)


@pytest.fixture(scope="session")
def calibrated_spec() -> DGPSpec:
    """Constant-hazard model calibrated to 38.68 / 20.06 / 41.26 %."""
    return calibrate_rates((38.68, 20.06, 41.26), admin_end=5.0, at_risk_end=0.08)


@pytest.fixture(scope="session")
def sim_cohort(calibrated_spec: DGPSpec) -> Cohort:
    """Simulated cohort of 200 subjects."""
    return generate_cohort(calibrated_spec.with_size(200, seed=7))


@pytest.fixture(scope="session")
def sim_z(sim_cohort: Cohort) -> ZComponents:
    """Z-components of the simulated cohort."""
    return components_for(sim_cohort)


@pytest.fixture
def small_z(small_cohort: Cohort) -> ZComponents:
    """Z-components of the small cohort."""
    return components_for(small_cohort)


# ============================================================================
# Registry Fixtures
# ============================================================================

@pytest.fixture
def registry() -> SchemeRegistry:
    """Fully populated scheme registry."""
    return create_default_registry()


@pytest.fixture
def empty_registry() -> SchemeRegistry:
    """Empty scheme registry for testing registration."""
    return SchemeRegistry()


# ============================================================================
# Pytest Configuration
# ============================================================================

def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--slow",
        action="store_true",
        default=False,
        help="Run Monte Carlo acceptance studies",
    )


def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line(
        "markers", "slow: Monte Carlo acceptance studies (run with --slow)"
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --slow is passed."""
    if not config.getoption("--slow"):
        skip_slow = pytest.mark.skip(reason="need --slow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
