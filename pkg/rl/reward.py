"""
Squared normalized-improvement reward
"""

DEGENERATE_SPAN = 1e-12


def normalized_improvement(hv: float, hv_initial: float, hv_ideal: float) -> float:
    """
    Percentage of the gap between the initial and ideal hypervolume closed by hv

    Returns 0 when the gap is degenerate.
    """
    span = hv_ideal - hv_initial
    if span < DEGENERATE_SPAN:
        return 0.0
    return 100.0 * (hv - hv_initial) / span


def improvement_reward(hv_current: float, hv_best: float, hv_initial: float, hv_ideal: float) -> float:
    """
    Δ_current² - Δ_best² when the current hypervolume beats the best so far, else 0
    """
    if hv_current <= hv_best:
        return 0.0
    current = normalized_improvement(hv_current, hv_initial, hv_ideal)
    best = normalized_improvement(hv_best, hv_initial, hv_ideal)
    return current * current - best * best
