import pytest

from koszul_plane.bundles import bundle_create, canonical_bundle
from koszul_plane.curve import curve_create, find_rational_points
from koszul_plane.field import PrimeField
from koszul_plane.forms import fermat

P = 2147483647
P2 = 2147483629  # a second 31-bit prime


def fermat_curve(d: int, p: int = P):
    return curve_create(fermat(d, p), PrimeField(p), name=f"fermat{d}")


@pytest.fixture(scope="session")
def quartic():
    return fermat_curve(4)


@pytest.fixture(scope="session")
def quintic():
    return fermat_curve(5)


@pytest.fixture(scope="session")
def quartic_point(quartic):
    return find_rational_points(quartic, 1)[0]


@pytest.fixture(scope="session")
def quartic_bundles(quartic, quartic_point):
    return {
        "O": bundle_create(quartic, 0),
        "H": bundle_create(quartic, 1),
        "omega": canonical_bundle(quartic),
        "O2": bundle_create(quartic, 2),
        "O3": bundle_create(quartic, 3),
        "O2x": bundle_create(quartic, 2, [(quartic_point, 1)]),
    }


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
