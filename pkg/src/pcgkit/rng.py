"""Deterministic seed derivation.

All randomness in the toolkit flows from explicit integer seeds.  Derived
seeds (per trial, per record, per cell) come from a 64-bit splitmix-style
mix of the base seed and an index, so independent units of work can run in
parallel without sharing generator state.
"""

_MASK64 = (1 << 64) - 1


def mix_seed(seed: int, *indices: int) -> int:
    """Derive a new 64-bit seed from a base seed and one or more indices.

    The chain is order-sensitive: mix_seed(s, a, b) != mix_seed(s, b, a).
    """
    z = seed & _MASK64
    for idx in indices:
        z = (z + 0x9E3779B97F4A7C15 + (idx & _MASK64)) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
    return z
