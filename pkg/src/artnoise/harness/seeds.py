from __future__ import annotations

import hashlib
import struct

import numpy as np

# sub-streams spawned from each trial seed
CHANNEL_STREAM, BOB_STREAM, EVE_STREAM = 0, 1, 2


def derive_trial_seed(master_seed: int, experiment_id: str, point_index: int, trial_index: int) -> int:
    """Counter-based 64-bit seed from ``(master, experiment, point, trial)``.

    BLAKE2b over a fixed-width encoding, so distinct tuples collide only with
    hash-collision probability.
    """
    h = hashlib.blake2b(digest_size=8, person=b"artnoise-trial")
    h.update(struct.pack("<Q", int(master_seed) & 0xFFFFFFFFFFFFFFFF))
    name = experiment_id.encode("utf-8")
    h.update(struct.pack("<I", len(name)))
    h.update(name)
    h.update(struct.pack("<qq", int(point_index), int(trial_index)))
    return int.from_bytes(h.digest(), "little")


def trial_streams(seed: int, n: int = 3) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]
