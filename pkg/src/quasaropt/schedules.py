"""Per-iteration parameter schedules for all accelerated variants.

Each schedule maps an iteration index k to the tuple driving one step of the
unified iteration: Lyapunov weights (A_k, A_{k+1}, B_k, B_{k+1}), the mirror
coefficients (alpha_k, beta_k), the gradient stepsize rho_k, the line-search
coefficients (b, c, eps_tilde), and (for the variance-reduced variant) the
mini-batch size b_k.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidArgumentError


class QasgdPhase(Enum):
    PLAIN = "plain"    # mu = 0
    STEP1 = "step1"    # mu > 0, geometric warmup
    STEP2 = "step2"    # mu > 0, polynomial tail after restart


class SvrgOption(Enum):
    OPT_I = "I"        # mu > 0, geometric weights, constant batch
    OPT_II = "II"      # mu = 0 or mu > 0, quadratic weights, growing batch


@dataclass(frozen=True)
class QuasarParams:
    """Problem-level constants: quasar parameter gamma in (0, 1], strong
    quasar-convexity mu >= 0, mirror strong convexity mu_bar, smoothness L.
    """

    gamma: float
    mu: float
    mu_bar: float
    L: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise InvalidArgumentError("gamma must lie in (0, 1]")
        if self.mu < 0:
            raise InvalidArgumentError("mu must be nonnegative")
        if self.mu_bar <= 0 or self.L <= 0:
            raise InvalidArgumentError("mu_bar and L must be positive")
        if self.mu > 0:
            floor = self.gamma / (2.0 - self.gamma)
            if self.kappa < floor:
                raise InvalidArgumentError(
                    f"condition number {self.kappa:.6g} below the floor "
                    f"gamma/(2-gamma) = {floor:.6g}")

    @property
    def kappa(self) -> float:
        if self.mu == 0:
            raise InvalidArgumentError("kappa undefined for mu = 0")
        return self.L / (self.mu_bar * self.mu)


@dataclass(frozen=True)
class StepParams:
    """One iteration's parameter tuple."""

    A_k: float
    A_next: float
    B_k: float
    B_next: float
    alpha_k: float
    beta_k: float
    rho_k: float
    b: float
    c: float
    eps_tilde: float
    batch_size: int | None = None

    def __post_init__(self):
        if self.A_next <= self.A_k or self.B_next < self.B_k:
            raise InvalidArgumentError("weights must grow: A strictly, B weakly")
        if self.beta_k <= 0:
            raise InvalidArgumentError("beta_k must be positive")

    @property
    def a_bar(self) -> float:
        return self.A_next - self.A_k

    @property
    def b_bar(self) -> float:
        return self.B_next - self.B_k


def params_qagd(k: int, qp: QuasarParams, eps: float) -> StepParams:
    """Full-gradient schedule.

    mu = 0: quadratic weights A_k ~ (k+1)^2, additive line-search slack.
    mu > 0: geometric weights with ratio 1 + gamma/(2 sqrt(kappa)),
    quadratic line-search slack.
    """
    g, L, mub = qp.gamma, qp.L, qp.mu_bar
    if qp.mu == 0:
        if eps <= 0:
            raise InvalidArgumentError("eps must be positive when mu = 0")
        scale = mub * g * g / (4.0 * L)
        A_k = scale * (k + 1) ** 2
        A_next = scale * (k + 2) ** 2
        a_bar = A_next - A_k
        return StepParams(A_k, A_next, 1.0, 1.0,
                          alpha_k=0.0, beta_k=g / a_bar, rho_k=1.0 / L,
                          b=0.0, c=g * A_k / a_bar, eps_tilde=g * eps / 2.0)
    kappa = qp.kappa
    ratio = 1.0 + g / (2.0 * math.sqrt(kappa))
    A_k = ratio ** k
    A_next = ratio ** (k + 1)
    B_k, B_next = qp.mu * A_k, qp.mu * A_next
    a_bar, b_bar = A_next - A_k, B_next - B_k
    return StepParams(A_k, A_next, B_k, B_next,
                      alpha_k=g * qp.mu, beta_k=g * qp.mu * B_k / b_bar,
                      rho_k=1.0 / L, b=g * mub * qp.mu / 2.0,
                      c=g * A_k / a_bar, eps_tilde=0.0)


def qasgd_eta(qp: QuasarParams, t: int, sigma: float, R: float,
              preset: str = "theory", z0_norm: float | None = None) -> float:
    """Quadratic-weight scale for the plain stochastic schedule.

    ``theory`` uses min(mu_bar/L, sqrt(4 R^2 / sigma^2) * gamma /
    (t+1)^{3/2}); ``practical`` is the experiment surrogate
    min(1/L, sqrt(2) * gamma * ||z0|| / (sigma * (t+1)^{3/2})).
    """
    if t < 1:
        raise InvalidArgumentError("horizon t must be >= 1")
    if sigma <= 0:
        raise InvalidArgumentError("sigma must be positive")
    pow32 = (t + 1) ** 1.5
    if preset == "theory":
        return min(qp.mu_bar / qp.L,
                   math.sqrt(4.0 * R * R / (sigma * sigma)) * qp.gamma / pow32)
    if preset == "practical":
        if z0_norm is None:
            raise InvalidArgumentError("practical preset needs z0_norm")
        return min(1.0 / qp.L,
                   math.sqrt(2.0) * qp.gamma * z0_norm / (sigma * pow32))
    raise InvalidArgumentError(f"unknown eta preset {preset!r}")


def params_qasgd(k: int, t: int, phase: QasgdPhase, qp: QuasarParams,
                 sigma: float, R: float, eps: float,
                 eta: float | None = None) -> StepParams:
    """Single-sample stochastic schedule (rho_k = 0: y tracks x).

    ``eta`` overrides the plain-phase scale (frozen once per run so a fixed
    horizon stays consistent across the whole trajectory).
    """
    g, mub = qp.gamma, qp.mu_bar
    if phase is QasgdPhase.PLAIN:
        if qp.mu != 0:
            raise InvalidArgumentError("plain phase requires mu = 0")
        if eta is None:
            eta = qasgd_eta(qp, t, sigma, R)
        A_k = eta * (k + 1) ** 2
        A_next = eta * (k + 2) ** 2
        a_bar = A_next - A_k
        return StepParams(A_k, A_next, 1.0, 1.0,
                          alpha_k=0.0, beta_k=g / a_bar, rho_k=0.0,
                          b=0.0, c=g * A_k / a_bar, eps_tilde=g * eps / 2.0)
    if qp.mu <= 0:
        raise InvalidArgumentError("step phases require mu > 0")
    if phase is QasgdPhase.STEP1:
        ratio = 1.0 + min(g * g * mub * mub / 16.0, 0.5)
        A_k = ratio ** k
        A_next = ratio ** (k + 1)
    else:
        m = max(48.0 / (g * g * mub * mub), 5.0)
        scale = g * g * mub * mub / 36.0
        A_k = scale * (k + m) ** 2
        A_next = scale * (k + 1 + m) ** 2
    B_k, B_next = qp.mu * A_k, qp.mu * A_next
    a_bar, b_bar = A_next - A_k, B_next - B_k
    return StepParams(A_k, A_next, B_k, B_next,
                      alpha_k=g * qp.mu / 2.0,
                      beta_k=g * qp.mu * B_k / (2.0 * b_bar),
                      rho_k=0.0, b=g * mub * qp.mu / 4.0,
                      c=g * A_k / (2.0 * a_bar), eps_tilde=0.0)


def svrg_batch_size(k: int, option: SvrgOption, qp: QuasarParams, n: int,
                    p: float | None) -> int:
    """Mini-batch size; the ceiling formulas are clamped to [1, n]."""
    g, mub = qp.gamma, qp.mu_bar
    if option is SvrgOption.OPT_I:
        s = math.sqrt(8.0 * qp.kappa)
        raw = 8.0 * n * (s + g) / (g * (n - 1) + 8.0 * (s + g))
    else:
        raw = g * mub * n * (2 * k + 3) / (2.0 * (n - 1) * p + g * mub * (2 * k + 3))
    return max(1, min(n, math.ceil(raw - 1e-12)))


def params_qasvrg(k: int, option: SvrgOption, qp: QuasarParams, n: int,
                  p: float | None, f_y0: float, eps: float) -> StepParams:
    """Variance-reduced schedule; ``f_y0`` is the stage-start objective value
    entering the additive slack of Option II.
    """
    g, L, mub = qp.gamma, qp.L, qp.mu_bar
    if n < 2:
        raise InvalidArgumentError("variance reduction needs n >= 2")
    if option is SvrgOption.OPT_I:
        if qp.mu <= 0:
            raise InvalidArgumentError("Option I requires mu > 0")
        ratio = 1.0 + g / math.sqrt(8.0 * qp.kappa)
        A_k = ratio ** k
        A_next = ratio ** (k + 1)
        B_k, B_next = qp.mu * A_k, qp.mu * A_next
        a_bar, b_bar = A_next - A_k, B_next - B_k
        return StepParams(A_k, A_next, B_k, B_next,
                          alpha_k=g * qp.mu / 2.0,
                          beta_k=g * qp.mu * B_k / (2.0 * b_bar),
                          rho_k=1.0 / L, b=g * mub * qp.mu / 4.0,
                          c=g * A_k / (2.0 * a_bar), eps_tilde=0.0,
                          batch_size=svrg_batch_size(k, option, qp, n, p))
    if p is None or not 0 < p <= g * mub / 16.0 + 1e-15:
        raise InvalidArgumentError("need 0 < p <= gamma*mu_bar/16")
    scale = g * g * mub / (16.0 * L)
    A_k = scale * (k + 1) ** 2
    A_next = scale * (k + 2) ** 2
    a_bar = A_next - A_k
    return StepParams(A_k, A_next, 1.0, 1.0,
                      alpha_k=0.0, beta_k=g / (2.0 * a_bar), rho_k=1.0 / L,
                      b=0.0, c=g * A_k / (2.0 * a_bar),
                      eps_tilde=g * eps * f_y0 / 2.0,
                      batch_size=svrg_batch_size(k, option, qp, n, p))


def params_qasgd_sgc(k: int, qp: QuasarParams, rho_sgc: float,
                     eps: float) -> StepParams:
    """Full-gradient schedule under the strong growth condition; reduces to
    the plain full-gradient schedule when rho_sgc = 1.
    """
    if rho_sgc < 1:
        raise InvalidArgumentError("rho_sgc must be >= 1")
    g, L, mub = qp.gamma, qp.L, qp.mu_bar
    if qp.mu == 0:
        if eps <= 0:
            raise InvalidArgumentError("eps must be positive when mu = 0")
        scale = mub * g * g / (4.0 * rho_sgc * L)
        A_k = scale * (k + 1) ** 2
        A_next = scale * (k + 2) ** 2
        a_bar = A_next - A_k
        return StepParams(A_k, A_next, 1.0, 1.0,
                          alpha_k=0.0, beta_k=g / a_bar,
                          rho_k=1.0 / (rho_sgc * L),
                          b=0.0, c=g * A_k / a_bar, eps_tilde=g * eps / 2.0)
    ratio = 1.0 + g / (2.0 * rho_sgc * math.sqrt(qp.kappa))
    A_k = ratio ** k
    A_next = ratio ** (k + 1)
    B_k, B_next = qp.mu * A_k, qp.mu * A_next
    a_bar, b_bar = A_next - A_k, B_next - B_k
    return StepParams(A_k, A_next, B_k, B_next,
                      alpha_k=g * qp.mu, beta_k=g * qp.mu * B_k / b_bar,
                      rho_k=1.0 / (rho_sgc * L), b=g * mub * qp.mu / 2.0,
                      c=g * A_k / a_bar, eps_tilde=0.0)


def stage_length(option: SvrgOption, qp: QuasarParams, q: float,
                 D_current: float | None = None,
                 f_current: float | None = None) -> int:
    """Inner horizon of one variance-reduced stage.

    Option II (and mu = 0): ceil(sqrt(17 L D / (gamma^2 mu_bar q f))).
    Option I: ceil(log_{1 + gamma/sqrt(8 kappa)}(2/(gamma q))).
    """
    if not 0 < q <= 0.25:
        raise InvalidArgumentError("q must lie in (0, 1/4]")
    g, mub = qp.gamma, qp.mu_bar
    if option is SvrgOption.OPT_I:
        base = 1.0 + g / math.sqrt(8.0 * qp.kappa)
        return max(1, math.ceil(math.log(2.0 / (g * q)) / math.log(base)))
    if f_current is None or f_current <= 0:
        raise InvalidArgumentError("stage length needs f_current > 0")
    if D_current is None or D_current < 0:
        raise InvalidArgumentError("stage length needs D_current >= 0")
    return max(1, math.ceil(
        math.sqrt(17.0 * qp.L * D_current / (g * g * mub * q * f_current))))
