"""Multi-class losses with analytic score gradients.

The shipped default is the one-versus-rest composition of the scaled square
margin loss psi(z) = (1 - z)^2 / 4: the target class contributes psi(score)
and every other class contributes psi(-score).  Any callable with the same
``(scores, j) -> LossValueGrad`` signature plugs into the estimator and the
candidate-set loss below, so the risk machinery is loss-agnostic.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class LossValueGrad:
    """A loss value together with its gradient w.r.t. the K scores."""

    value: float
    grad_scores: np.ndarray


PerClassLoss = Callable[[np.ndarray, int], LossValueGrad]


def ovr_square_loss(scores: np.ndarray, j: int) -> LossValueGrad:
    """One-versus-rest square loss of class ``j``.

    value = psi(s_j) + sum_{k != j} psi(-s_k)  with  psi(z) = (1 - z)^2 / 4.

    Gradient entries: -(1 - s_j)/2 at the target, (1 + s_k)/2 elsewhere.
    Nonnegative for all scores, which keeps every risk built from it
    nonnegative as well.
    """
    scores = np.asarray(scores, dtype=np.float64)
    K = scores.shape[0]
    if not 1 <= j <= K:
        raise ValueError(f"class index j={j} outside 1..{K}")
    margins = -scores.copy()
    margins[j - 1] = scores[j - 1]
    resid = 1.0 - margins
    value = 0.25 * float(resid @ resid)
    grad = 0.5 * (1.0 + scores)
    grad[j - 1] = -0.5 * (1.0 - scores[j - 1])
    return LossValueGrad(value, grad)


def complementary_loss(
    scores: np.ndarray,
    candidate_set,
    K: int,
    loss_fn: PerClassLoss = ovr_square_loss,
) -> LossValueGrad:
    """Loss of a "None" annotation: the candidate set excludes the true label.

    Averages the per-class loss over the K - l classes outside the candidate
    set.  Order of ``candidate_set`` is irrelevant.  Undefined at l = K, where
    no class is excluded.
    """
    candidates = set(candidate_set)
    l = len(candidates)
    if l != len(candidate_set):
        raise ValueError(f"candidate set {candidate_set} has duplicates")
    if not 1 <= l <= K - 1:
        raise ValueError(f"candidate-set size l={l} must lie in 1..K-1={K - 1} (no excluded labels otherwise)")
    scores = np.asarray(scores, dtype=np.float64)
    scale = 1.0 / (K - l)
    value = 0.0
    grad = np.zeros(K, dtype=np.float64)
    for j in range(1, K + 1):
        if j in candidates:
            continue
        part = loss_fn(scores, j)
        value += part.value
        grad += part.grad_scores
    return LossValueGrad(scale * value, scale * grad)
