import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quantum_otto.adiabat import AdiabatSpec  # noqa: E402
from quantum_otto.core import NoiseSpec  # noqa: E402

import oracles as O  # noqa: E402


@pytest.fixture
def ref_noise():
    return NoiseSpec(O.GAMMA_P, O.GAMMA_A)


@pytest.fixture
def ref_spec(ref_noise):
    def make(n, noise=None):
        return AdiabatSpec.frictionless(O.OMEGA_H, O.OMEGA_C, n,
                                        ref_noise if noise is None else noise)
    return make
