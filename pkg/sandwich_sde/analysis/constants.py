"""
Closed-form constants of the a-priori bounds.
"""

from sandwich_sde.common.errors import AssumptionViolationError, InvalidArgumentError
from sandwich_sde.drift.model import DriftModel, Sidedness


def grr_constant(alpha: float, p: float) -> float:
    """A_{α,p} = 2^{3+2/p}·(αp + 1)/(αp − 1), the Garsia-Rodemich-Rumsey constant."""
    if p < 1:
        raise InvalidArgumentError(f"GRR exponent p must be >= 1, got {p}")
    if alpha * p <= 1:
        raise InvalidArgumentError(f"GRR constant needs αp > 1, got α={alpha}, p={p}")
    return 2.0 ** (3.0 + 2.0 / p) * (alpha * p + 1.0) / (alpha * p - 1.0)


def _check_order(order: float) -> None:
    if not (0.0 < order < 1.0):
        raise InvalidArgumentError(f"Hölder order must lie in (0, 1), got {order}")


def beta_constant(order: float, gamma: float, c: float, sidedness: Sidedness = Sidedness.ONE_SIDED) -> float:
    """
    β = (λ^{λ/(1−λ)} − λ^{1/(1−λ)}) / c^{λ/(1−λ)}; two-sided models divide by
    (2^γ c)^{λ/(1−λ)} instead.
    """
    _check_order(order)
    if c <= 0:
        raise InvalidArgumentError(f"c must be positive, got {c}")
    q = order / (1.0 - order)
    scale = c if Sidedness(sidedness) == Sidedness.ONE_SIDED else 2.0**gamma * c
    return (order**q - order ** (1.0 / (1.0 - order))) / scale**q


def exponent_denominator(order: float, gamma: float, assumption: str = "A4") -> float:
    """γλ + λ − 1; raises the (A4) violation (or ``assumption``) when it is not positive."""
    denominator = gamma * order + order - 1.0
    if denominator <= 0:
        raise AssumptionViolationError(assumption, f"γλ + λ − 1 = {denominator:g} must be positive")
    return denominator


def m3_constant(
    r: float, order: float, gamma: float, c: float, sidedness: Sidedness = Sidedness.ONE_SIDED
) -> float:
    """
    M₃(r) = 2^{rγλ/(γλ+λ−1)} β^{r(1−λ)/(γλ+λ−1)}, the constant in
    (Y_t − φ(t))^{−r} ≤ M₃(r) Λ̃^{r/(γλ+λ−1)}.

    Two-sided models use the β of the two-sided theorem and the factor 4β, so that
    M₃(1) = 1/L in both cases.
    """
    if r <= 0:
        raise InvalidArgumentError(f"moment order r must be positive, got {r}")
    _check_order(order)
    d = exponent_denominator(order, gamma)
    beta = beta_constant(order, gamma, c, sidedness)
    if Sidedness(sidedness) == Sidedness.ONE_SIDED:
        return 2.0 ** (r * gamma * order / d) * beta ** (r * (1.0 - order) / d)
    return 2.0**r * (4.0 * beta) ** (r * (1.0 - order) / d)


def lower_bound_scale(order: float, gamma: float, c: float, sidedness: Sidedness = Sidedness.ONE_SIDED) -> float:
    """L = 1/M₃(1)."""
    return 1.0 / m3_constant(1.0, order, gamma, c, sidedness)


def initial_condition_term(model: DriftModel, y0: float, order: float) -> float:
    """
    (2β)^{λ−1}(((Y₀ − φ(0)) ∧ y_*)/2)^{1−λ−γλ}; the two-sided form uses 4β and also
    caps the distance by ψ(0) − Y₀.
    """
    gamma = model.gamma
    beta = beta_constant(order, gamma, model.c, model.sidedness)
    distance = min(y0 - float(model.phi(0.0)), model.y_star)
    factor = 2.0 * beta
    if model.two_sided:
        distance = min(distance, float(model.psi(0.0)) - y0)
        factor = 4.0 * beta
    if distance <= 0:
        raise InvalidArgumentError(f"initial value {y0} is not strictly inside the band")
    return factor ** (order - 1.0) * (distance / 2.0) ** (1.0 - order - gamma * order)


def adjusted_holder_constant(model: DriftModel, holder_constant: float, y0: float, order: float) -> float:
    """Λ̃ = max{Λ, K, initial-condition term}."""
    exponent_denominator(order, model.gamma, "B4" if model.two_sided else "A4")
    return max(holder_constant, model.holder_constant, initial_condition_term(model, y0, order))

