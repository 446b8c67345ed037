"""Backend selection: compiled extension if available, numpy fallback otherwise.

Set ``LLOGL_BACKEND=python`` to force the fallback (used by the benchmark
and the backend-equivalence tests).
"""

import os

if os.environ.get("LLOGL_BACKEND", "").lower() == "python":
    from . import _ops_py as ops
else:
    try:
        from . import _ops as ops  # type: ignore[no-redef]
    except ImportError:
        from . import _ops_py as ops  # type: ignore[no-redef]

IS_COMPILED: bool = bool(getattr(ops, "IS_COMPILED", False))

sliding_sum_2d = ops.sliding_sum_2d
sliding_max_2d = ops.sliding_max_2d
strong_max_2d = ops.strong_max_2d
accumulate_window_mean = ops.accumulate_window_mean
greedy_net = ops.greedy_net
nearest_center = ops.nearest_center
group_radial_convolve = ops.group_radial_convolve
hl_max_direct = ops.hl_max_direct
point_dist = ops.point_dist
