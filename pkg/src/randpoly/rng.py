"""Deterministic random-number streams for parallel replication.

Every stochastic routine in this package takes an explicit
``numpy.random.Generator``.  Streams are derived from a base seed plus an
integer key path (e.g. ``(t_index, rep_index)``) through a counter-based
Philox generator, so results are bit-identical no matter how replications
are scheduled across workers.
"""
from __future__ import annotations

import numpy as np

__all__ = ["stream", "substream"]


def stream(seed: int, *key: int) -> np.random.Generator:
    """Return an independent generator keyed by ``(seed, *key)``.

    Identical arguments always yield an identical stream; distinct key
    paths yield statistically independent streams.
    """
    ss = np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def substream(rng: np.random.Generator, index: int) -> np.random.Generator:
    """Derive a child stream of ``rng`` keyed by ``index``.

    Used where a routine receives an already-built generator but needs
    per-work-item determinism (results must not depend on the order in
    which work items are consumed).
    """
    root = rng.bit_generator.seed_seq
    child = np.random.SeedSequence(
        entropy=root.entropy, spawn_key=root.spawn_key + (int(index),)
    )
    return np.random.Generator(np.random.Philox(child))
