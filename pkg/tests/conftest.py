import numpy as np
import pytest

from cavitylab import (
    DampingModel,
    HilbertSpec,
    cat_state,
    coherent_state,
    evolve,
    fock_state,
    mix,
    pure_to_density,
    vacuum,
)

CORPUS_DIM = 40  # covers every corpus state (largest amplitude 2 -> 26) with room


def build_corpus(dim: int = CORPUS_DIM) -> dict:
    """The shared reference states: vacuum, Fock 1-3, coherent 1 and 2,
    both cats at alpha = 2, the 50/50 mixture, and a damped cat."""
    spec = HilbertSpec(dim)
    states = {
        "vacuum": pure_to_density(vacuum(spec)),
        "fock1": pure_to_density(fock_state(spec, 1)),
        "fock2": pure_to_density(fock_state(spec, 2)),
        "fock3": pure_to_density(fock_state(spec, 3)),
        "coherent1": pure_to_density(coherent_state(spec, 1.0)),
        "coherent2": pure_to_density(coherent_state(spec, 2.0)),
        "cat_even": pure_to_density(cat_state(spec, 2.0, 0.0)),
        "cat_odd": pure_to_density(cat_state(spec, 2.0, np.pi)),
        "mixture": mix([coherent_state(spec, 2.0), coherent_state(spec, -2.0)],
                       [0.5, 0.5]),
    }
    states["damped_cat"] = evolve(states["cat_even"], DampingModel(kappa=1.0), 0.1)
    return states


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
