"""50/50 beamsplitter."""

from typing import Tuple

from ..core.rng import RngSeed
from ..sources.emission import EmissionRecord


def beamsplit(emissions: EmissionRecord, seed: RngSeed) -> Tuple[EmissionRecord, EmissionRecord]:
    """
    Route each photon to arm A or arm B with probability 1/2.

    Both arms stay sorted and keep the photons' emission ids; their union
    is the input.
    """
    rng = seed.generator()
    to_a = rng.random(len(emissions)) < 0.5
    return emissions.subset(to_a), emissions.subset(~to_a)
