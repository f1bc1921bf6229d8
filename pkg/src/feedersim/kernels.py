"""Hot numeric kernels with numba-jitted and pure-numpy implementations.

Set FEEDERSIM_NO_NUMBA=1 to force the vectorized numpy path (useful for
debugging and on platforms without a working numba). Both paths implement
identical tie-breaking: candidates are scanned in array order and only a
strictly smaller value replaces the incumbent, so the first minimum wins.
"""
from __future__ import annotations

import math
import os

import numpy as np

_EPS = 1e-9

NUMBA_ENABLED = os.environ.get("FEEDERSIM_NO_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# ---------------------------------------------------------------------------
# Batch nearest-neighbour queries
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nearest_jit(px, py, cx, cy):
    n = px.shape[0]
    m = cx.shape[0]
    out = np.empty(n, dtype=np.int64)
    for a in range(n):
        best = math.inf
        best_k = 0
        for k in range(m):
            dx = cx[k] - px[a]
            dy = cy[k] - py[a]
            d = dx * dx + dy * dy
            if d < best:
                best = d
                best_k = k
        out[a] = best_k
    return out


def _nearest_numpy(px, py, cx, cy):
    d2 = (px[:, None] - cx[None, :]) ** 2 + (py[:, None] - cy[None, :]) ** 2
    return np.argmin(d2, axis=1)


def nearest_indices(px, py, cx, cy):
    """For each query point, the index of the closest candidate (first wins ties)."""
    px = np.ascontiguousarray(px, dtype=np.float64)
    py = np.ascontiguousarray(py, dtype=np.float64)
    cx = np.ascontiguousarray(cx, dtype=np.float64)
    cy = np.ascontiguousarray(cy, dtype=np.float64)
    if NUMBA_ENABLED:
        return _nearest_jit(px, py, cx, cy)
    return _nearest_numpy(px, py, cx, cy)


# ---------------------------------------------------------------------------
# First-mile / last-mile candidate scans
#
# Candidate (driver, board-stop, alight-stop) triples for one station are
# pre-flattened into parallel arrays, sorted by (driver id, stop index), so
# the first strict minimum realizes the documented tie order.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _fm_best_jit(ox, oy, t_r, wpk, board_x, board_y, depart_board, arrive_alight,
                 drv, seg_lo, seg_hi, occ, cap):
    best = math.inf
    best_k = -1
    n = drv.shape[0]
    for k in range(n):
        walk_min = math.hypot(board_x[k] - ox, board_y[k] - oy) * wpk
        if t_r + walk_min > depart_board[k] + _EPS:
            continue
        d = drv[k]
        free = True
        for s in range(seg_lo[k], seg_hi[k]):
            if occ[d, s] >= cap:
                free = False
                break
        if not free:
            continue
        if arrive_alight[k] < best:
            best = arrive_alight[k]
            best_k = k
    return best_k


def _span_occ_ok(drv, seg_lo, seg_hi, occ, cap):
    """Vectorized 'every segment in [seg_lo, seg_hi) has a free seat'."""
    width = seg_hi - seg_lo
    worst = occ[drv, seg_lo]
    for extra in range(1, int(width.max(initial=0))):
        m = width > extra
        if not m.any():
            break
        worst = np.where(m, np.maximum(worst, occ[drv, np.minimum(seg_lo + extra, occ.shape[1] - 1)]), worst)
    return worst < cap


def _fm_best_numpy(ox, oy, t_r, wpk, board_x, board_y, depart_board, arrive_alight,
                   drv, seg_lo, seg_hi, occ, cap):
    walk_min = np.hypot(board_x - ox, board_y - oy) * wpk
    ok = (t_r + walk_min <= depart_board + _EPS) & _span_occ_ok(drv, seg_lo, seg_hi, occ, cap)
    if not ok.any():
        return -1
    arr = np.where(ok, arrive_alight, np.inf)
    return int(np.argmin(arr))


@njit(cache=True)
def _lm_best_jit(dx, dy, ready, wpk, depart_board, alight_x, alight_y, arrive_alight,
                 drv, seg_lo, seg_hi, occ, cap):
    best = math.inf
    best_k = -1
    n = drv.shape[0]
    for k in range(n):
        if depart_board[k] < ready - _EPS:
            continue
        d = drv[k]
        free = True
        for s in range(seg_lo[k], seg_hi[k]):
            if occ[d, s] >= cap:
                free = False
                break
        if not free:
            continue
        arrival = arrive_alight[k] + math.hypot(alight_x[k] - dx, alight_y[k] - dy) * wpk
        if arrival < best:
            best = arrival
            best_k = k
    return best_k, best


def _lm_best_numpy(dx, dy, ready, wpk, depart_board, alight_x, alight_y, arrive_alight,
                   drv, seg_lo, seg_hi, occ, cap):
    ok = (depart_board >= ready - _EPS) & _span_occ_ok(drv, seg_lo, seg_hi, occ, cap)
    if not ok.any():
        return -1, math.inf
    arrival = arrive_alight + np.hypot(alight_x - dx, alight_y - dy) * wpk
    arrival = np.where(ok, arrival, np.inf)
    k = int(np.argmin(arrival))
    return k, float(arrival[k])


def fm_best(ox, oy, t_r, wpk, triples, occ, cap):
    """Best first-mile pickup among a station's candidate triples.

    Returns the triple index, or -1 when no candidate is reachable with a
    free seat. Arrival at the station is the scheduled time of the alight
    stop; smaller is better, array order breaks ties.
    """
    if triples.n == 0:
        return -1
    f = _fm_best_jit if NUMBA_ENABLED else _fm_best_numpy
    return f(ox, oy, t_r, wpk, triples.board_x, triples.board_y,
             triples.depart_board, triples.arrive_alight,
             triples.driver, triples.seg_lo, triples.seg_hi, occ, cap)


def lm_best(dx, dy, ready, wpk, triples, occ, cap):
    """Best last-mile dropoff: (triple index, arrival at destination) or (-1, inf)."""
    if triples.n == 0:
        return -1, math.inf
    f = _lm_best_jit if NUMBA_ENABLED else _lm_best_numpy
    return f(dx, dy, ready, wpk, triples.depart_board,
             triples.alight_x, triples.alight_y, triples.arrive_alight,
             triples.driver, triples.seg_lo, triples.seg_hi, occ, cap)
