"""Orbit sampling plans shared by the domination and shadowing experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sft import CyclicWord, ShiftSpace, Word, enumerate_periodic, random_word


@dataclass(frozen=True)
class SamplePlan:
    """All periodic orbits up to max_period plus n_random seeded random-walk windows."""

    max_period: int = 8
    n_random: int = 20
    seed: int = 0


def collect_samples(
    shift: ShiftSpace, plan: SamplePlan, window_length: int, anchor: int = 0
) -> list[tuple[str, CyclicWord | Word]]:
    """Labelled orbit segments for a plan; deterministic for a fixed seed."""
    samples: list[tuple[str, CyclicWord | Word]] = []
    for n in range(1, plan.max_period + 1):
        for orbit in enumerate_periodic(shift, n):
            samples.append((f"p:{orbit}", orbit))
    rng = np.random.default_rng(plan.seed)
    for i in range(plan.n_random):
        samples.append((f"w{i}", random_word(shift, window_length, rng, anchor=anchor)))
    return samples
