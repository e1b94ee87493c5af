'''
Core.py

Overflow-safe double-precision evaluation of the modified Bessel functions I_nu(u), K_nu(u) of real
order, their u-derivatives, and (on a restricted window) the ordinary Bessel functions J_nu, Y_nu.

Algorithm:
    * I_nu, nu >= 0: ascending power series when u <= max(10, nu); otherwise the continued fraction
      for I'_nu/I_nu, downward recurrence to the reduced order mu in [-1/2, 1/2), and normalisation
      through the Wronskian against K_mu. Very large arguments use the Hankel expansion.
    * K_nu, nu >= 0: Temme's series for K_mu, K_{mu+1} when u <= 2, Steed's continued fraction
      otherwise, then forward recurrence in the order (stable for K).
    * Negative orders: K_{-nu} = K_nu exactly; I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu.

Every value is carried internally as a ScaledValue: the exponentially scaled function
(e^{-u} I_nu or e^{u} K_nu) split into a mantissa and a power-of-two exponent, so ratios and products
of values that would overflow or underflow a double on their own stay exact.
'''
from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

from scipy import special

from besselturan.utils.config import get_settings
from besselturan.utils.errors import (ConvergenceError, DomainError, EvaluationOverflowError,
                                      EvaluationUnderflowError)

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
FPMIN = 1e-30
LN2 = math.log(2.0)
UNKNOWN_ERROR = math.inf
U_MIN = 1e-100
RESCALE = 2.0 ** 100
ASYMPTOTIC_SWITCH = 1000.0
JY_NU_WINDOW = (0.0, 10.0)
JY_U_MAX = 1e4

# Taylor coefficients of 1/Gamma(1+z) = sum_j _RGAMMA[j] z^j
_RGAMMA = (
    1.0000000000000000, 0.5772156649015329, -0.6558780715202538, -0.0420026350340952,
    0.1665386113822915, -0.0421977345555443, -0.0096219715278770, 0.0072189432466630,
    -0.0011651675918591, -0.0002152416741149, 0.0001280502823882, -0.0000201348547807,
    -0.0000012504934821, 0.0000011330272320, -0.0000002056338417, 0.0000000061160950,
    0.0000000050020075, -0.0000000011812746, 0.0000000001043427, 0.0000000000077823,
    -0.0000000000036968, 0.0000000000005100, -0.0000000000000206, -0.0000000000000054,
    0.0000000000000014, 0.0000000000000001,
)


class Kind(str, Enum):
    I = "I"
    K = "K"
    J = "J"
    Y = "Y"
    P = "P"
    SCALED_I = "scaledI"
    SCALED_K = "scaledK"


@dataclass(frozen=True)
class OrderArg:
    '''
    A validated evaluation point (nu, u).

    Attributes:
        nu (float): Real order, within the supported window [-20, 100].
        u (float): Real argument, strictly positive.

    Raises:
        DomainError: If u <= 0, either coordinate is not finite, or nu is outside the window.
    '''
    nu: float
    u: float

    def __post_init__(self) -> None:
        settings = get_settings()
        if not math.isfinite(self.u) or self.u <= 0:
            raise DomainError("u", self.u, "argument must be finite and strictly positive")
        if not math.isfinite(self.nu) or not settings.nu_min <= self.nu <= settings.nu_max:
            raise DomainError("nu", self.nu, f"order must lie in [{settings.nu_min}, {settings.nu_max}]")

    def shifted(self, dnu: float) -> "OrderArg":
        return OrderArg(self.nu + dnu, self.u)


@dataclass(frozen=True)
class FuncValue:
    '''
    A function value with its kind and an error estimate.

    Attributes:
        kind (Kind): Which function the value belongs to.
        value (float): The value.
        abs_err_est (float): Upper bound on the evaluation error claimed by the algorithm path
            (UNKNOWN_ERROR outside the validated window).
        scaled (bool): True for e^{-u} I_nu / e^{u} K_nu.
        warning (str, optional): Set when the evaluation raised a numerical flag (e.g. cancellation).
    '''
    kind: Kind
    value: float
    abs_err_est: float
    scaled: bool = False
    warning: Optional[str] = None

    @property
    def rel_err_est(self) -> float:
        return self.abs_err_est / abs(self.value) if self.value else math.inf


@dataclass(frozen=True)
class ScaledValue:
    '''
    An exponentially scaled Bessel value mantissa * 2**exponent with its relative error estimate.
    '''
    mantissa: float
    exponent: int = 0
    rel_err: float = 0.0

    @property
    def value(self) -> float:
        try:
            return math.ldexp(self.mantissa, self.exponent)
        except OverflowError as exc:
            raise EvaluationOverflowError("scaled value exceeds the double range") from exc

    def __truediv__(self, other: "ScaledValue") -> float:
        return math.ldexp(self.mantissa / other.mantissa, self.exponent - other.exponent)

    def __mul__(self, other: "ScaledValue") -> "ScaledValue":
        return ScaledValue(self.mantissa * other.mantissa, self.exponent + other.exponent,
                           self.rel_err + other.rel_err + EPS)

    def log_abs(self) -> float:
        return math.log(abs(self.mantissa)) + self.exponent * LN2

    def scale(self, factor: float) -> "ScaledValue":
        return ScaledValue(self.mantissa * factor, self.exponent, self.rel_err + EPS)

    def normalized(self) -> "ScaledValue":
        if self.mantissa == 0.0:
            return self
        m, e = math.frexp(self.mantissa)
        return ScaledValue(m, self.exponent + e, self.rel_err)


class Precision(NamedTuple):
    '''
    The Settings fields an evaluation depends on. Part of every cache key, so a changed Settings record
    never serves values computed under the old one.
    '''
    tol: float
    max_iterations: int
    series_switch: float
    temme_switch: float

    @classmethod
    def current(cls) -> "Precision":
        settings = get_settings()
        # below machine epsilon a convergence test can never pass
        return cls(max(settings.rel_tol, EPS), settings.max_cf_iterations, settings.series_switch,
                   settings.temme_switch)


def _add(a: ScaledValue, b: ScaledValue) -> ScaledValue:
    # aligned sum with absolute errors propagated
    a, b = a.normalized(), b.normalized()
    top = max(a.exponent, b.exponent)
    x = math.ldexp(a.mantissa, a.exponent - top)
    y = math.ldexp(b.mantissa, b.exponent - top)
    total = x + y
    abs_err = abs(x) * a.rel_err + abs(y) * b.rel_err + (abs(x) + abs(y)) * EPS
    rel = abs_err / abs(total) if total else math.inf
    return ScaledValue(total, top, rel)


def sinpi(x: float) -> float:
    '''sin(pi x), exactly zero at integers.'''
    r = math.fmod(x, 2.0)
    if r == math.floor(r):
        return 0.0
    return math.sin(math.pi * r)


def _temme_gammas(mu: float) -> Tuple[float, float, float, float]:
    # gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
    gam1 = 0.0
    gam2 = 0.0
    power = 1.0
    for j, c in enumerate(_RGAMMA):
        if j % 2 == 0:
            gam2 += c * power
        else:
            gam1 -= c * power / mu if mu else 0.0
        power *= mu
    if mu == 0.0:
        gam1 = -_RGAMMA[1]
    gampl = gam2 - mu * gam1
    gammi = gam2 + mu * gam1
    return gam1, gam2, gampl, gammi


def _k_reduced(mu: float, x: float, prec: Precision) -> Tuple[float, float]:
    '''Scaled K_mu(x), K_{mu+1}(x) for |mu| <= 1/2.'''
    maxit = prec.max_iterations
    xi = 1.0 / x
    xi2 = 2.0 * xi
    mu2 = mu * mu
    if x <= prec.temme_switch:
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, maxit + 1):
            ff = (i * ff + p + q) / (i * i - mu2)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delta = c * ff
            total += delta
            total1 += c * (p - i * ff)
            if abs(delta) < abs(total) * prec.tol:
                break
        else:
            raise ConvergenceError(f"Temme series for K_{mu}({x}) did not converge", partial=total)
        scale = math.exp(x)
        return total * scale, total1 * xi2 * scale
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu2
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, maxit + 1):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < prec.tol:
            break
    else:
        raise ConvergenceError(f"continued fraction for K_{mu}({x}) did not converge", partial=s)
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) / s
    return kmu, kmu * (mu + x + 0.5 - h) * xi


@lru_cache(maxsize=65536)
def _k_nonneg(nu: float, x: float, prec: Precision) -> ScaledValue:
    nl = int(nu + 0.5)
    mu = nu - nl
    kmu, k1 = _k_reduced(mu, x, prec)
    xi2 = 2.0 / x
    shift = 0
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * xi2 * k1 + kmu
        if abs(k1) > RESCALE:
            _, e = math.frexp(k1)
            kmu, k1 = math.ldexp(kmu, -e), math.ldexp(k1, -e)
            shift += e
    return ScaledValue(kmu, shift, EPS * (24 + 2 * nl) + prec.tol)


def _i_series(nu: float, x: float, prec: Precision) -> ScaledValue:
    maxit = prec.max_iterations
    half = 0.5 * x
    q = half * half
    term = total = 1.0
    for k in range(1, maxit + 1):
        term *= q / (k * (nu + k))
        total += term
        if term < total * prec.tol * 0.5:
            break
    else:
        raise ConvergenceError(f"power series for I_{nu}({x}) did not converge", partial=total)
    log_prefactor = (nu * math.log(half) if nu else 0.0) - math.lgamma(nu + 1.0) - x
    e2 = math.floor(log_prefactor / LN2)
    mant = math.exp(log_prefactor - e2 * LN2) * total
    return ScaledValue(mant, e2, EPS * (4 + 2 * k + abs(log_prefactor)) + prec.tol)


def _i_hankel(nu: float, x: float, prec: Precision) -> ScaledValue:
    mu4 = 4.0 * nu * nu
    term = total = 1.0
    k = 0
    for k in range(1, 200):
        nxt = -term * (mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(nxt) > abs(term):
            break
        term = nxt
        total += term
        if abs(term) < prec.tol * abs(total):
            break
    return ScaledValue(total / math.sqrt(2.0 * math.pi * x), 0, EPS * (8 + k) + prec.tol)


def _i_continued_fraction(nu: float, x: float, prec: Precision) -> ScaledValue:
    maxit = prec.max_iterations
    nl = int(nu + 0.5)
    mu = nu - nl
    xi = 1.0 / x
    xi2 = 2.0 * xi
    h = max(nu * xi, FPMIN)
    b = xi2 * nu
    d = 0.0
    c = h
    for i in range(1, maxit + 1):
        b += xi2
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < prec.tol:
            break
    else:
        raise ConvergenceError(f"continued fraction for I'_{nu}/I_{nu} at u={x} did not converge", partial=h)
    ril = ril1 = FPMIN
    ripl = h * ril
    fact = nu * xi
    shift = 0
    for _ in range(nl):
        ritemp = fact * ril + ripl
        fact -= xi
        ripl = fact * ritemp + ril
        ril = ritemp
        if abs(ril) > RESCALE:
            _, e = math.frexp(ril)
            ril, ripl = math.ldexp(ril, -e), math.ldexp(ripl, -e)
            shift += e
    f = ripl / ril
    kmu, k1 = _k_reduced(mu, x, prec)
    kmup = mu * xi * kmu - k1
    imu = xi / (f * kmu - kmup)
    return ScaledValue(imu * ril1 / ril, -shift, EPS * (32 + 2 * nl + math.sqrt(i)) + prec.tol)


@lru_cache(maxsize=65536)
def _i_nonneg(nu: float, x: float, prec: Precision) -> ScaledValue:
    if x <= max(prec.series_switch, nu):
        return _i_series(nu, x, prec)
    if x > ASYMPTOTIC_SWITCH and x > 0.25 * nu * nu:
        return _i_hankel(nu, x, prec)
    return _i_continued_fraction(nu, x, prec)


def _check_argument(nu: float, u: float) -> None:
    if not math.isfinite(u) or u < U_MIN:
        raise DomainError("u", u, f"argument must be at least {U_MIN}")
    if not math.isfinite(nu):
        raise DomainError("nu", nu, "order must be finite")


def scaled_k(nu: float, u: float) -> ScaledValue:
    '''
    e^{u} K_nu(u) as a ScaledValue. The order is reflected to |nu|, so results for nu and -nu are
    bit-identical.
    '''
    _check_argument(nu, u)
    return _k_nonneg(abs(nu), u, Precision.current())


def scaled_i(nu: float, u: float) -> ScaledValue:
    '''e^{-u} I_nu(u) as a ScaledValue, any real order.'''
    _check_argument(nu, u)
    prec = Precision.current()
    if nu >= 0:
        return _i_nonneg(nu, u, prec)
    a = -nu
    positive = _i_nonneg(a, u, prec)
    s = sinpi(a)
    if s == 0.0:
        return positive
    k = _k_nonneg(a, u, prec)
    # (2/pi) sin(a pi) e^{-2u} (e^{u} K_a)
    log_factor = -2.0 * u
    e2 = math.floor(log_factor / LN2)
    factor = 2.0 / math.pi * s * math.exp(log_factor - e2 * LN2)
    correction = ScaledValue(k.mantissa * factor, k.exponent + e2, k.rel_err + 4 * EPS)
    return _add(positive, correction)


def _rescale_exp(sv: ScaledValue, exponent: float) -> float:
    '''sv * e^{exponent} as a plain double.'''
    m, e = math.frexp(sv.mantissa)
    if abs(exponent) <= 700.0:
        value = m * math.exp(exponent)
        shift = e + sv.exponent
    else:
        k = math.floor(exponent / LN2)
        value = m * math.exp(exponent - k * LN2)
        shift = e + sv.exponent + k
    try:
        result = math.ldexp(value, shift)
    except OverflowError as exc:
        raise EvaluationOverflowError("unscaled value exceeds the double range; use scaled=True") from exc
    if result != 0.0 and abs(result) < sys.float_info.min:
        raise EvaluationUnderflowError("unscaled value underflows; use scaled=True")
    if result == 0.0 and sv.mantissa != 0.0:
        raise EvaluationUnderflowError("unscaled value underflows; use scaled=True")
    return result


def _in_window(nu: float, u: float, scaled: bool, reflect: bool) -> bool:
    settings = get_settings()
    order = abs(nu) if reflect else nu
    if not settings.window_nu_min <= order <= settings.nu_max:
        return False
    return scaled or u <= settings.u_max_unscaled


def _claim_warning(rel: float, in_window: bool) -> Optional[str]:
    claimed = get_settings().claimed_rel_err
    if in_window and rel > claimed:
        return f"error estimate {rel:.3e} exceeds the claimed relative error {claimed:.1e}"
    return None


def _func_value(kind: Kind, scaled_kind: Kind, sv: ScaledValue, p: OrderArg, scaled: bool,
                sign: int, reflect: bool) -> FuncValue:
    if scaled:
        value = sv.value
        rel = sv.rel_err
    else:
        value = _rescale_exp(sv, sign * p.u)
        rel = sv.rel_err + 2 * EPS
    in_window = _in_window(p.nu, p.u, scaled, reflect)
    abs_err = abs(value) * rel if in_window else UNKNOWN_ERROR
    return FuncValue(scaled_kind if scaled else kind, value, abs_err, scaled, _claim_warning(rel, in_window))


def eval_I(p: OrderArg, scaled: bool = False) -> FuncValue:
    '''
    Evaluates I_nu(u), or e^{-u} I_nu(u) when `scaled`.

    Args:
        p (OrderArg): Evaluation point.
        scaled (bool): Return the exponentially scaled value.

    Returns:
        FuncValue: The value with an error estimate.

    Raises:
        EvaluationOverflowError: If the unscaled value exceeds the double range.
    '''
    return _func_value(Kind.I, Kind.SCALED_I, scaled_i(p.nu, p.u), p, scaled, +1, reflect=False)


def eval_K(p: OrderArg, scaled: bool = False) -> FuncValue:
    '''
    Evaluates K_nu(u), or e^{u} K_nu(u) when `scaled`. K_nu and K_{-nu} are bit-identical.

    Raises:
        EvaluationUnderflowError: If the unscaled value underflows to zero.
    '''
    return _func_value(Kind.K, Kind.SCALED_K, scaled_k(p.nu, p.u), p, scaled, -1, reflect=True)


def _pick_recurrence(first: Tuple[float, float], second: Tuple[float, float]) -> Tuple[float, float, float]:
    # each form is (a, b) with derivative a + b; keep the one with less cancellation
    def condition(form):
        a, b = form
        total = a + b
        return (abs(a) + abs(b)) / abs(total) if total else math.inf
    v1, v2 = sum(first), sum(second)
    chosen = first if condition(first) <= condition(second) else second
    return sum(chosen), condition(chosen), abs(v1 - v2)


def _derivative(kind: Kind, scaled_kind: Kind, p: OrderArg, scaled: bool, forms, sign: int,
                reflect: bool) -> FuncValue:
    value, cond, disagreement = _pick_recurrence(*forms)
    value_out = value if scaled else _rescale_exp(ScaledValue(value), sign * p.u)
    rel = EPS * (48 + 4 * cond)
    warning = None
    if disagreement > 1e-10 * abs(value):
        warning = f"recurrence forms disagree by {disagreement / abs(value):.3e} relative"
        logger.warning("%s'_%s(%s): %s", kind.value, p.nu, p.u, warning)
    abs_err = abs(value_out) * rel if _in_window(p.nu, p.u, scaled, reflect) else UNKNOWN_ERROR
    return FuncValue(scaled_kind if scaled else kind, value_out, abs_err, scaled, warning)


def eval_dI(p: OrderArg, scaled: bool = False) -> FuncValue:
    '''
    Evaluates I'_nu(u) from the recurrences I'_nu = I_{nu-1} - (nu/u) I_nu = I_{nu+1} + (nu/u) I_nu.

    Both forms are computed; the better conditioned one is returned and a warning is attached when
    they disagree by more than 1e-10 relative.

    Raises:
        EvaluationOverflowError: If the unscaled derivative exceeds the double range.
    '''
    if p.nu < get_settings().nu_min + 1:
        raise DomainError("nu", p.nu, "I'_nu needs I_{nu-1}; order must be at least nu_min + 1")
    prev = scaled_i(p.nu - 1, p.u).value
    mid = scaled_i(p.nu, p.u).value
    nxt = scaled_i(p.nu + 1, p.u).value
    t = p.nu / p.u * mid
    return _derivative(Kind.I, Kind.SCALED_I, p, scaled, ((prev, -t), (nxt, t)), +1, reflect=False)


def eval_dK(p: OrderArg, scaled: bool = False) -> FuncValue:
    '''
    Evaluates K'_nu(u) from K'_nu = -K_{nu-1} - (nu/u) K_nu = -K_{nu+1} + (nu/u) K_nu (always negative).

    Raises:
        EvaluationUnderflowError: If the unscaled derivative underflows; a zero is never returned.
    '''
    prev = scaled_k(p.nu - 1, p.u).value
    mid = scaled_k(p.nu, p.u).value
    nxt = scaled_k(p.nu + 1, p.u).value
    t = p.nu / p.u * mid
    return _derivative(Kind.K, Kind.SCALED_K, p, scaled, ((-prev, -t), (-nxt, t)), -1, reflect=True)


def log_derivative_i(nu: float, u: float) -> Tuple[float, float]:
    '''
    u I'_nu(u) / I_nu(u) and its absolute error estimate, computed from order ratios only.
    '''
    mid = scaled_i(nu, u)
    up = scaled_i(nu + 1, u)
    down = scaled_i(nu - 1, u)
    r_up = up / mid
    r_down = down / mid
    forms = ((u * r_down, -nu), (u * r_up, nu))
    value, cond, _ = _pick_recurrence(*forms)
    rel = mid.rel_err + max(up.rel_err, down.rel_err) + 4 * EPS
    return value, abs(value) * rel * cond


def log_derivative_k(nu: float, u: float) -> Tuple[float, float]:
    '''u K'_nu(u) / K_nu(u) and its absolute error estimate.'''
    mid = scaled_k(nu, u)
    up = scaled_k(nu + 1, u)
    down = scaled_k(nu - 1, u)
    forms = ((-u * (down / mid), -nu), (-u * (up / mid), nu))
    value, cond, _ = _pick_recurrence(*forms)
    rel = mid.rel_err + max(up.rel_err, down.rel_err) + 4 * EPS
    return value, abs(value) * rel * cond


def eval_JY(p: OrderArg) -> Tuple[FuncValue, FuncValue]:
    '''
    Evaluates (J_nu(u), Y_nu(u)) on the restricted window nu in [0, 10], u in (0, 1e4].

    Only the modulus J^2 + Y^2 is consumed downstream; its relative error is below 1e-10, while the
    individual values carry an error estimate relative to the modulus, not to themselves.

    Raises:
        DomainError: Outside the restricted window.
    '''
    lo, hi = JY_NU_WINDOW
    if not lo <= p.nu <= hi:
        raise DomainError("nu", p.nu, f"J/Y are only evaluated for nu in [{lo}, {hi}]")
    if p.u > JY_U_MAX:
        raise DomainError("u", p.u, f"J/Y are only evaluated for u <= {JY_U_MAX:g}")
    j = float(special.jv(p.nu, p.u))
    y = float(special.yv(p.nu, p.u))
    modulus = math.hypot(j, y)
    err = 1e-12 * modulus
    return FuncValue(Kind.J, j, err), FuncValue(Kind.Y, y, err)


def bessel_modulus(nu: float, t: float) -> float:
    '''J_nu(t)^2 + Y_nu(t)^2 (inf when Y_nu overflows at tiny t).'''
    j, y = eval_JY(OrderArg(nu, t))
    if not math.isfinite(y.value):
        return math.inf
    return j.value * j.value + y.value * y.value


def wronskian_residual(nu: float, u: float) -> float:
    '''u (I_nu K_{nu+1} + I_{nu+1} K_nu) - 1, from scaled values so the exponentials cancel.'''
    i0, i1 = scaled_i(nu, u), scaled_i(nu + 1, u)
    k0, k1 = scaled_k(nu, u), scaled_k(nu + 1, u)
    return u * ((i0 * k1).value + (i1 * k0).value) - 1.0


def recurrence_residuals(nu: float, u: float) -> dict:
    '''
    Relative residuals of the order recurrences behind the derivative formulas.

    r1: I_{nu-1} - (2 nu/u) I_nu - I_{nu+1}, relative to |I_{nu-1}|
    r2: K_{nu-1} + (2 nu/u) K_nu - K_{nu+1}, relative to |K_{nu-1}| + |K_{nu+1}|
    r3: the same K combination relative to |K_{nu+1}|
    '''
    im, i0, ip = scaled_i(nu - 1, u), scaled_i(nu, u), scaled_i(nu + 1, u)
    km, k0, kp = scaled_k(nu - 1, u), scaled_k(nu, u), scaled_k(nu + 1, u)
    # divide through by the middle value so no ratio overflows
    ri = (im / i0) - 2.0 * nu / u - (ip / i0)
    rk = (km / k0) + 2.0 * nu / u - (kp / k0)
    return {
        "r1": abs(ri) / abs(im / i0),
        "r2": abs(rk) / (abs(km / k0) + abs(kp / k0)),
        "r3": abs(rk) / abs(kp / k0),
    }
