"""Extract detections from a reconstructed volume.

The per-pixel group norm of the volume acts as a pseudo-likelihood map; its
regional maxima (8-connected plateaus of equal value strictly above every
in-image neighbor) become detections. A multi-pixel plateau yields a single
detection at its centroid. Zero-valued plateaus are background, never
detections.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .tensors import group_norm_image

_NEIGHBORS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


@dataclass(frozen=True)
class Detection:
    row: float
    col: float
    pseudo_likelihood: float


def pseudo_likelihood_map(a):
    return group_norm_image(a)


def regional_maxima(p):
    """Detections at the centroids of 8-connected regional-maximum plateaus.

    A plateau is a maximal connected set of equal value v > 0; it is a
    regional maximum when every in-image pixel adjacent to it has value < v.
    Out-of-image neighbors are ignored, so border plateaus can qualify.
    Returned sorted by pseudo-likelihood descending, ties by (row, col).
    """
    p = np.asarray(p, dtype=np.float64)
    m, n = p.shape
    visited = np.zeros((m, n), dtype=bool)
    detections = []

    for r0 in range(m):
        for c0 in range(n):
            if visited[r0, c0] or p[r0, c0] <= 0.0:
                continue
            value = p[r0, c0]
            # flood-fill the equal-value plateau
            plateau = []
            is_max = True
            queue = deque([(r0, c0)])
            visited[r0, c0] = True
            while queue:
                r, c = queue.popleft()
                plateau.append((r, c))
                for dr, dc in _NEIGHBORS:
                    rr, cc = r + dr, c + dc
                    if not (0 <= rr < m and 0 <= cc < n):
                        continue
                    if p[rr, cc] == value:
                        if not visited[rr, cc]:
                            visited[rr, cc] = True
                            queue.append((rr, cc))
                    elif p[rr, cc] > value:
                        is_max = False
            if is_max:
                rows = [rc[0] for rc in plateau]
                cols = [rc[1] for rc in plateau]
                detections.append(
                    Detection(
                        row=float(np.mean(rows)),
                        col=float(np.mean(cols)),
                        pseudo_likelihood=float(value),
                    )
                )

    detections.sort(key=lambda d: (-d.pseudo_likelihood, d.row, d.col))
    return detections


def detect(a):
    """Full detector: group-norm map, then regional maxima."""
    return regional_maxima(pseudo_likelihood_map(a))
