# src/models/rng.py
from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field


class RngState(BaseModel):
    """Explicit, splittable random state.

    Identical (seed, stream, key) always produce the same bit stream; any two
    states differing in stream or key are independent streams of the same
    SeedSequence tree.
    """
    seed: int = Field(ge=0, lt=2**64)
    stream: int = Field(default=0, ge=0, lt=2**64)
    key: Tuple[int, ...] = ()

    model_config = {"frozen": True}

    def spawn(self, *keys: int) -> "RngState":
        """Child state addressed by ``keys`` below this one"""
        return RngState(seed=self.seed, stream=self.stream, key=self.key + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,) + self.key)
        return np.random.Generator(np.random.PCG64(sequence))
