"""Reproducible random streams keyed by (master seed, trial, sector).

Each stream is a counter-mode generator: draw ``i`` is a 64-bit avalanche mix
of ``state + (i + 1) * GOLDEN`` where the state itself is a mix of the three
key integers.  Because every draw is a pure function of (seed, trial, sector,
draw index), streams can be evaluated in any order, in parallel, or in bulk,
and always reproduce the same values.

Two access paths are provided and produce identical numbers:

* :class:`RngStream` - a scalar stream object with ``uniform()``/``normal()``,
  implemented with Python integers (numpy scalar ops warn on uint64 wrap).
* :func:`trial_draws` - vectorized draws for all sectors of one trial,
  implemented with ``numpy`` uint64 arrays (array ops wrap silently).

Draw layout used by the channel model: draw 0 is the uniform for the
LOS/NLOS state, draws 1-2 feed the Box-Muller normal for shadow fading.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio; splitmix64 increment
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB

_INV_2_53 = 2.0 ** -53


def _mix(z: int) -> int:
    """64-bit finalizer (splitmix64): bijective, full avalanche."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MULT1) & _MASK64
    z = ((z ^ (z >> 27)) * _MULT2) & _MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MULT1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MULT2)
    return z ^ (z >> np.uint64(31))


def stream_state(master_seed: int, trial_index: int, sector_index: int) -> int:
    """Initial 64-bit state of the stream keyed by the three integers."""
    h = _mix(master_seed + _GOLDEN)
    h = _mix(h ^ (((trial_index + 1) * _GOLDEN) & _MASK64))
    h = _mix(h ^ (((sector_index + 1) * _MULT1) & _MASK64))
    return h


def _raw_draw(state: int, index: int) -> int:
    return _mix(state + ((index + 1) * _GOLDEN) & _MASK64)


def _uniform_from_raw(raw: int) -> float:
    # top 53 bits -> [0, 1)
    return (raw >> 11) * _INV_2_53


def _normal_from_raws(raw_a: int, raw_b: int) -> float:
    # Box-Muller; u1 in (0, 1] keeps the log finite
    u1 = ((raw_a >> 11) + 1) * _INV_2_53
    u2 = (raw_b >> 11) * _INV_2_53
    return float(np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2))


def _validate_key(master_seed: int, trial_index: int, sector_index: int) -> None:
    if not 0 <= master_seed <= _MASK64:
        raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
    if trial_index < 0 or sector_index < 0:
        raise ValueError("trial_index and sector_index must be non-negative")


@dataclass
class RngStream:
    """Sequential view of the stream keyed by (master_seed, trial, sector)."""

    master_seed: int
    trial_index: int
    sector_index: int
    _state: int = field(init=False, repr=False)
    _cursor: int = field(init=False, repr=False, default=0)

    def __post_init__(self) -> None:
        _validate_key(self.master_seed, self.trial_index, self.sector_index)
        self._state = stream_state(self.master_seed, self.trial_index, self.sector_index)

    def uniform(self) -> float:
        """Next uniform draw in [0, 1)."""
        raw = _raw_draw(self._state, self._cursor)
        self._cursor += 1
        return _uniform_from_raw(raw)

    def normal(self) -> float:
        """Next standard normal draw (consumes two raw draws)."""
        raw_a = _raw_draw(self._state, self._cursor)
        raw_b = _raw_draw(self._state, self._cursor + 1)
        self._cursor += 2
        return _normal_from_raws(raw_a, raw_b)

    def raw_prefix(self, n: int) -> tuple[int, ...]:
        """First ``n`` raw 64-bit words; used for collision checks."""
        return tuple(_raw_draw(self._state, i) for i in range(n))


def trial_draws(master_seed: int, trial_index: int, n_sectors: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized draws for one trial across ``n_sectors`` sector streams.

    Returns ``(uniforms, normals)`` where element ``s`` of each array equals
    the first ``uniform()`` and the following ``normal()`` of
    ``RngStream(master_seed, trial_index, s)``.
    """
    _validate_key(master_seed, trial_index, 0)
    sectors = np.arange(n_sectors, dtype=np.uint64)
    h = _mix(master_seed + _GOLDEN)
    h = _mix(h ^ (((trial_index + 1) * _GOLDEN) & _MASK64))
    state = _mix_array(np.uint64(h) ^ (sectors + np.uint64(1)) * np.uint64(_MULT1))

    raw0 = _mix_array(state + np.uint64(1 * _GOLDEN & _MASK64))
    raw1 = _mix_array(state + np.uint64(2 * _GOLDEN & _MASK64))
    raw2 = _mix_array(state + np.uint64(3 * _GOLDEN & _MASK64))

    uniforms = (raw0 >> np.uint64(11)).astype(np.float64) * _INV_2_53
    u1 = ((raw1 >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (raw2 >> np.uint64(11)).astype(np.float64) * _INV_2_53
    normals = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return uniforms, normals
