from typing import Iterator, Optional, Sequence, Tuple

import numpy as np


Box = Tuple[np.ndarray, np.ndarray]


def as_box(box, dim: int = None) -> Box:
    """Normalize a box given as a sequence of per-axis (lo, hi) pairs, or as a tuple of
    two numpy arrays (lo, hi)."""
    if isinstance(box, tuple) and len(box) == 2 and all(isinstance(b, np.ndarray) for b in box):
        lo, hi = np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float)
    else:
        arr = np.asarray(box, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"Expected a box of (lo, hi) pairs, got shape {arr.shape}.")
        lo, hi = arr[:, 0].copy(), arr[:, 1].copy()

    if dim is not None and len(lo) != dim:
        raise ValueError(f"Box has dimension {len(lo)}, expected {dim}.")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("Box must be bounded.")
    if np.any(hi < lo):
        raise ValueError(f"Box has hi < lo: {lo}, {hi}.")
    return lo, hi


def unit_box(dim: int) -> Box:
    return np.zeros(dim), np.ones(dim)


def enlarged_box(dim: int, delta: float) -> Box:
    return np.full(dim, -delta), np.full(dim, 1.0 + delta)


def box_volume(box: Box) -> float:
    lo, hi = box
    return float(np.prod(hi - lo))


def fractional_part(x: np.ndarray) -> np.ndarray:
    """Component-wise {x} = x - floor(x), guaranteed to land in [0, 1)."""
    frac = x - np.floor(x)
    # x slightly below an integer can round up to exactly 1.0
    frac[frac >= 1.0] = 0.0
    return frac


def integer_slabs(lo: np.ndarray, hi: np.ndarray) -> Iterator[np.ndarray]:
    """Enumerate all integer vectors in the box [lo, hi] (inclusive), one slab per value of
    the first coordinate. Each slab is an array of shape (count, d)."""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    d = len(lo)

    if d == 1:
        yield np.arange(lo[0], hi[0] + 1, dtype=np.int64)[:, None]
        return

    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, d)]
    rest = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d - 1)
    for first in range(lo[0], hi[0] + 1):
        slab = np.empty((len(rest), d), dtype=np.int64)
        slab[:, 0] = first
        slab[:, 1:] = rest
        yield slab


def tensor_grid(axes: Sequence[np.ndarray]) -> np.ndarray:
    """Cartesian product of 1d coordinate arrays as an (n, d) array, first axis slowest."""
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def midpoint_grid(box: Box, points_per_axis: int) -> Tuple[np.ndarray, float]:
    """Cell centres of a uniform grid on the box and the common cell volume."""
    lo, hi = box
    h = (hi - lo) / points_per_axis
    axes = [lo[i] + (np.arange(points_per_axis) + 0.5) * h[i] for i in range(len(lo))]
    return tensor_grid(axes), float(np.prod(h))


def upper_envelope(errors: np.ndarray) -> np.ndarray:
    """Nonincreasing upper envelope e*(i) = max_{j >= i} e(j) of errors sorted by n."""
    return np.maximum.accumulate(np.asarray(errors, dtype=float)[::-1])[::-1]


def fit_order(
    ns: Sequence[float],
    errors: Sequence[float],
    error_floor: float = 0.0,
    use_envelope: bool = False,
    min_rows: int = 4,
    min_span: float = 8.0,
) -> Optional[Tuple[float, float]]:
    """Least-squares slope of log10(error) against log10(n).

    Only rows with error above `error_floor` are resolvable. The fit runs over the top decade
    of resolvable rows when that decade holds enough rows, otherwise over all resolvable rows.
    Returns (slope, rms_residual), or None when no window has `min_rows` rows spanning a
    factor `min_span` in n.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if use_envelope and len(errors):
        errors = upper_envelope(errors)

    resolvable = errors > error_floor
    ns, errors = ns[resolvable], errors[resolvable]
    if len(ns) == 0:
        return None

    def _window_ok(mask):
        return mask.sum() >= min_rows and ns[mask].max() / ns[mask].min() >= min_span

    top_decade = ns >= ns.max() / 10
    if _window_ok(top_decade):
        mask = top_decade
    elif _window_ok(np.ones(len(ns), dtype=bool)):
        mask = np.ones(len(ns), dtype=bool)
    else:
        return None

    x = np.log10(ns[mask])
    y = np.log10(errors[mask])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def mean_min_max_dict(name: str, arr) -> dict:
    arr = np.asarray(arr, dtype=float)
    return {
        f"{name}/mean": float(arr.mean()),
        f"{name}/min": float(arr.min()),
        f"{name}/max": float(arr.max()),
    }
