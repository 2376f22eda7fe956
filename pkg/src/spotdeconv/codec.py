"""File formats: the binary tensor codec and the CSV table formats.

Binary tensors (.f64t): magic b"SPTD", little-endian u32 version (1),
u32 ndim (2 or 3), ndim u64 dimensions, then the row-major (k fastest for
3-D) float64 payload. Round-trips are bit-exact.

CSV: images as plain decimal rows; detections with header
"row,col,pseudo_likelihood"; ground truth with header "row,col".
"""

import csv
import struct

import numpy as np

from .detection import Detection

MAGIC = b"SPTD"
VERSION = 1

DETECTIONS_HEADER = ["row", "col", "pseudo_likelihood"]
GROUND_TRUTH_HEADER = ["row", "col"]


class CodecError(ValueError):
    """Malformed tensor file; message includes the byte offset."""


def write_tensor(path, arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"only 2-D/3-D tensors supported, got ndim={arr.ndim}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(arr.astype("<f8", copy=False).tobytes())


def read_tensor(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise CodecError(f"bad magic {data[:4]!r} at byte offset 0")
    if len(data) < 12:
        raise CodecError(f"truncated header: file is {len(data)} bytes, need >= 12")
    version, ndim = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise CodecError(f"unsupported version {version} at byte offset 4")
    if ndim not in (2, 3):
        raise CodecError(f"bad ndim {ndim} at byte offset 8")
    header_end = 12 + 8 * ndim
    if len(data) < header_end:
        raise CodecError(
            f"truncated dimensions: file is {len(data)} bytes, need >= {header_end}"
        )
    shape = struct.unpack_from(f"<{ndim}Q", data, 12)
    count = int(np.prod(shape))
    expected = header_end + 8 * count
    if len(data) != expected:
        raise CodecError(
            f"payload length mismatch at byte offset {header_end}: "
            f"expected {expected} bytes total, got {len(data)}"
        )
    arr = np.frombuffer(data, dtype="<f8", offset=header_end, count=count)
    return arr.reshape(shape).astype(np.float64)


def write_image_csv(path, img):
    img = np.asarray(img, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in img:
            writer.writerow([repr(float(v)) for v in row])


def read_image_csv(path):
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path}: empty image CSV")
    return np.array(rows, dtype=np.float64)


def write_detections_csv(path, dets):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DETECTIONS_HEADER)
        for d in dets:
            writer.writerow([repr(d.row), repr(d.col), repr(d.pseudo_likelihood)])


def read_detections_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != DETECTIONS_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(DETECTIONS_HEADER)!r}, got {header}"
            )
        return [
            Detection(row=float(r), col=float(c), pseudo_likelihood=float(p))
            for r, c, p in reader
        ]


def write_ground_truth_csv(path, gt):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GROUND_TRUTH_HEADER)
        for r, c in gt:
            writer.writerow([repr(float(r)), repr(float(c))])


def read_ground_truth_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != GROUND_TRUTH_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(GROUND_TRUTH_HEADER)!r}, got {header}"
            )
        return [(float(r), float(c)) for r, c in reader]
