import numpy as np
import pytest

from nonclassicality.states import Coherent, Fock, Mixture, Thermal

# Every state here has mean photon number <= 2.
CATALOG = {
    "vacuum": Fock(0),
    "fock1": Fock(1),
    "fock2": Fock(2),
    "coherent": Coherent(0.8 + 0.3j),
    "thermal_half": Thermal(0.5),
    "thermal_one": Thermal(1.0),
    "lossy_fock1": Mixture(((0.8, Fock(1)), (0.2, Fock(0)))),
    "cat_like": Mixture(((0.5, Coherent(0.9)), (0.5, Coherent(-0.9)))),
    "fock_thermal": Mixture(((0.6, Fock(1)), (0.4, Thermal(0.7)))),
}

CLASSICAL = {k: CATALOG[k] for k in ("vacuum", "coherent", "thermal_half", "thermal_one", "cat_like")}


@pytest.fixture(params=sorted(CATALOG), ids=sorted(CATALOG))
def catalog_state(request):
    return CATALOG[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
