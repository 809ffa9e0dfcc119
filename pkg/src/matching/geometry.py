"""
Box geometry: IoU, GIoU and normalized L1 distance.

Scalar versions work on BoundingBox values; the pairwise versions take
(N, 4) and (M, 4) arrays in x1, y1, x2, y2 order and return (N, M) matrices
for building cost matrices. Zero-area boxes have no area to overlap, so their
IoU with anything (themselves included) is 0.
"""

import numpy as np
import numpy.typing as npt

from src.graph.model import IMAGE_HEIGHT, IMAGE_WIDTH, BoundingBox, SceneObject

FloatArray = npt.NDArray[np.float64]


def _area(b: BoundingBox) -> float:
    return max(b.x2 - b.x1, 0.0) * max(b.y2 - b.y1, 0.0)


def _intersection(a: BoundingBox, b: BoundingBox) -> float:
    w = min(a.x2, b.x2) - max(a.x1, b.x1)
    h = min(a.y2, b.y2) - max(a.y1, b.y1)
    return max(w, 0.0) * max(h, 0.0)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union in [0, 1]; 0 when the union has no area."""
    inter = _intersection(a, b)
    union = _area(a) + _area(b) - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def giou(a: BoundingBox, b: BoundingBox) -> float:
    """Generalized IoU in [-1, 1]: IoU minus the empty share of the enclosing box."""
    inter = _intersection(a, b)
    union = _area(a) + _area(b) - inter
    enclosing = (max(a.x2, b.x2) - min(a.x1, b.x1)) * (max(a.y2, b.y2) - min(a.y1, b.y1))
    base = inter / union if union > 0.0 else 0.0
    if enclosing <= 0.0:
        return base
    return base - (enclosing - union) / enclosing


def l1_box(
    a: BoundingBox,
    b: BoundingBox,
    width: float = IMAGE_WIDTH,
    height: float = IMAGE_HEIGHT,
) -> float:
    """Sum of absolute coordinate differences after dividing x by width and y by height."""
    return (
        abs(a.x1 - b.x1) / width
        + abs(a.y1 - b.y1) / height
        + abs(a.x2 - b.x2) / width
        + abs(a.y2 - b.y2) / height
    )


# ---------------------------------------------------------------------------
# Pairwise (vectorized) versions
# ---------------------------------------------------------------------------

def boxes_array(objects: "tuple[SceneObject, ...] | list[SceneObject]") -> FloatArray:
    """Stack object boxes into an (N, 4) float array."""
    if not objects:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([o.box.as_tuple() for o in objects], dtype=np.float64)


def _pairwise_parts(a: FloatArray, b: FloatArray) -> tuple[FloatArray, FloatArray]:
    area_a = np.clip(a[:, 2] - a[:, 0], 0, None) * np.clip(a[:, 3] - a[:, 1], 0, None)
    area_b = np.clip(b[:, 2] - b[:, 0], 0, None) * np.clip(b[:, 3] - b[:, 1], 0, None)
    lt = np.maximum(a[:, None, :2], b[None, :, :2])
    rb = np.minimum(a[:, None, 2:], b[None, :, 2:])
    wh = np.clip(rb - lt, 0, None)
    inter = wh[..., 0] * wh[..., 1]
    union = area_a[:, None] + area_b[None, :] - inter
    return inter, union


def pairwise_iou(a: FloatArray, b: FloatArray) -> FloatArray:
    inter, union = _pairwise_parts(a, b)
    out = np.zeros_like(inter)
    np.divide(inter, union, out=out, where=union > 0)
    return out


def pairwise_giou(a: FloatArray, b: FloatArray) -> FloatArray:
    inter, union = _pairwise_parts(a, b)
    base = np.zeros_like(inter)
    np.divide(inter, union, out=base, where=union > 0)
    lt = np.minimum(a[:, None, :2], b[None, :, :2])
    rb = np.maximum(a[:, None, 2:], b[None, :, 2:])
    wh = rb - lt
    enclosing = wh[..., 0] * wh[..., 1]
    empty_share = np.zeros_like(inter)
    np.divide(enclosing - union, enclosing, out=empty_share, where=enclosing > 0)
    return base - empty_share


def pairwise_l1(
    a: FloatArray,
    b: FloatArray,
    width: float = IMAGE_WIDTH,
    height: float = IMAGE_HEIGHT,
) -> FloatArray:
    scale = np.array([width, height, width, height], dtype=np.float64)
    d = np.abs(a[:, None, :] - b[None, :, :]) / scale
    # same summation order as l1_box so scalar and matrix values agree bit for bit
    return d[..., 0] + d[..., 1] + d[..., 2] + d[..., 3]
