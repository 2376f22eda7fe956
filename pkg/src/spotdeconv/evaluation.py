"""Greedy detection/ground-truth matching and F1-based threshold selection.

Detections are matched in decreasing pseudo-likelihood order, each to its
nearest unmatched ground-truth point within a Euclidean tolerance (default
3 pixels). best_threshold sweeps every detection value plus +inf and keeps
the report with maximal F1, breaking ties toward the largest threshold.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EvalReport:
    threshold: float
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


def match(dets, gt, tol=3.0):
    """Greedy matching; returns (TP, FP, FN, pairing).

    pairing maps detection index -> ground-truth index for each true
    positive. Distance ties are broken by ground-truth index ascending.
    """
    gt = [(float(r), float(c)) for r, c in gt]
    matched = [False] * len(gt)
    pairing = {}
    for di, d in enumerate(dets):
        best = None
        best_dist = None
        for gi, (gr, gc) in enumerate(gt):
            if matched[gi]:
                continue
            dist = np.hypot(d.row - gr, d.col - gc)
            if dist <= tol and (best_dist is None or dist < best_dist):
                best, best_dist = gi, dist
        if best is not None:
            matched[best] = True
            pairing[di] = best
    tp = len(pairing)
    fp = len(dets) - tp
    fn = len(gt) - tp
    return tp, fp, fn, pairing


def prf1(tp, fp, fn):
    """Precision, recall and F1 with the 0/0 -> 0 convention."""
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return precision, recall, f1


def evaluate_at(dets, gt, threshold, tol=3.0):
    kept = [d for d in dets if d.pseudo_likelihood >= threshold]
    tp, fp, fn, _ = match(kept, gt, tol)
    precision, recall, f1 = prf1(tp, fp, fn)
    return EvalReport(
        threshold=threshold, tp=tp, fp=fp, fn=fn,
        precision=precision, recall=recall, f1=f1,
    )


def threshold_sweep(dets, gt, tol=3.0):
    """One EvalReport per candidate threshold ({p_l} union {+inf}),
    in descending threshold order."""
    candidates = sorted({d.pseudo_likelihood for d in dets}, reverse=True)
    reports = [evaluate_at(dets, gt, np.inf, tol)]
    for thr in candidates:
        reports.append(evaluate_at(dets, gt, thr, tol))
    return reports


def best_threshold(dets, gt, tol=3.0):
    """Report with the best F1 across the sweep; ties keep the largest
    threshold (fewest detections)."""
    best = None
    for report in threshold_sweep(dets, gt, tol):
        if best is None or report.f1 > best.f1:
            best = report
    return best
