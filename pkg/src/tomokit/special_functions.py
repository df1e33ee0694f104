"""Special functions behind the oscillator closed forms.

Everything here is self-contained (recurrences, a Lanczos gamma, and a
guarded confluent-hypergeometric series) so that the closed-form tomogram
routes do not silently depend on an external special-function stack. The
parabolic-cylinder path tracks its own cancellation budget: when the two
Kummer terms cancel too deeply to certify the requested accuracy it raises
instead of returning noise, and the half-line Gaussian integral falls back
to quadrature in that case.

Conventions: physicists' Hermite polynomials, associated Laguerre
polynomials normalized so L_n^(b)(0) = Gamma(n+b+1)/(Gamma(b+1) n!), and
principal branches for all complex powers.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._quad import panel_rule, panels_for_phase
from .errors import NonConvergenceError, PoleError

__all__ = [
    "SeriesControl",
    "DEFAULT_SERIES",
    "hermite",
    "assoc_laguerre",
    "pochhammer",
    "gamma_real",
    "lgamma_real",
    "reciprocal_gamma",
    "kummer_1f1",
    "pcf_D",
    "gauss_power_integral",
]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for hypergeometric series.

    max_terms:
        Hard cap on the number of summed terms.
    rel_tol:
        A series counts as converged once |term| <= rel_tol * |partial sum|
        for three consecutive terms (terms below abs_floor always count).
    abs_floor:
        Magnitude below which a term is treated as converged outright;
        guards the rel_tol test when the partial sum passes through zero.
    cancellation_guard:
        Maximum tolerated relative rounding error, estimated as
        eps * (peak intermediate magnitude) / |result|. Paths with a
        quadrature fallback reroute when the estimate exceeds this;
        paths without one raise NonConvergenceError.
    """

    max_terms: int = 500
    rel_tol: float = 1e-12
    abs_floor: float = 1e-300
    cancellation_guard: float = 1e-8

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.abs_floor <= 0.0:
            raise ValueError("abs_floor must be positive")
        if self.cancellation_guard <= 0.0:
            raise ValueError("cancellation_guard must be positive")


DEFAULT_SERIES = SeriesControl()


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) via the three-term recurrence.

    ``x`` may be a scalar or ndarray; the result matches its shape.
    """
    if n < 0 or n != int(n):
        raise ValueError("Hermite degree must be a nonnegative integer")
    xa = np.asarray(x, dtype=float)
    h_prev = np.ones_like(xa)
    if n == 0:
        return float(h_prev) if xa.ndim == 0 else h_prev
    h = 2.0 * xa
    for k in range(1, int(n)):
        h, h_prev = 2.0 * xa * h - 2.0 * k * h_prev, h
    return float(h) if xa.ndim == 0 else h


def assoc_laguerre(n: int, b: float, x):
    """Associated Laguerre polynomial L_n^(b)(x) via the recurrence

        (k+1) L_{k+1} = (2k+1+b-x) L_k - (k+b) L_{k-1}.

    Requires b > -1 so the weight x^b e^{-x} is integrable at the origin.
    """
    if n < 0 or n != int(n):
        raise ValueError("Laguerre degree must be a nonnegative integer")
    if b <= -1.0:
        raise ValueError("Laguerre order must satisfy b > -1")
    xa = np.asarray(x, dtype=float)
    l_prev = np.ones_like(xa)
    if n == 0:
        return float(l_prev) if xa.ndim == 0 else l_prev
    l = 1.0 + b - xa
    for k in range(1, int(n)):
        l, l_prev = ((2.0 * k + 1.0 + b - xa) * l - (k + b) * l_prev) / (k + 1.0), l
    return float(l) if xa.ndim == 0 else l


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    if k < 0 or k != int(k):
        raise ValueError("pochhammer index must be a nonnegative integer")
    out = 1.0
    for i in range(int(k)):
        out *= a + i
    return out


# Lanczos approximation, g = 7 with 9 coefficients. Relative error stays
# below ~1e-14 on the right half plane, comfortably inside the 1e-12
# contract on (0, 50).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_core(z: float) -> tuple[float, float]:
    """Return (acc, t) for Gamma(z+1) = sqrt(2 pi) t^(z+1/2) e^(-t) acc."""
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    return acc, z + _LANCZOS_G + 0.5


def gamma_real(z: float) -> float:
    """Gamma function for real arguments, poles excluded.

    Uses the Lanczos approximation for z >= 1/2 and the reflection formula
    below that. Nonpositive integers raise PoleError.
    """
    z = float(z)
    if not math.isfinite(z):
        raise ValueError("gamma_real requires a finite argument")
    if z <= 0.0 and z == math.floor(z):
        raise PoleError(f"gamma has a pole at {z:g}")
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * gamma_real(1.0 - z))
    acc, t = _lanczos_core(z - 1.0)
    return math.sqrt(2.0 * math.pi) * t ** (z - 0.5) * math.exp(-t) * acc


def lgamma_real(z: float) -> float:
    """log Gamma(z) for z > 0, overflow-free for large arguments."""
    z = float(z)
    if not (z > 0.0) or not math.isfinite(z):
        raise ValueError("lgamma_real requires a finite z > 0")
    if z < 0.5:
        # Gamma(z) > 0 on (0, 1/2), so the logarithm of the reflection
        # formula is safe here.
        return math.log(math.pi / math.sin(math.pi * z)) - lgamma_real(1.0 - z)
    acc, t = _lanczos_core(z - 1.0)
    return 0.5 * math.log(2.0 * math.pi) + (z - 0.5) * math.log(t) - t + math.log(acc)


def reciprocal_gamma(z: float) -> float:
    """1 / Gamma(z), entire in z: evaluates to 0 at the poles of Gamma."""
    z = float(z)
    if z <= 0.0 and z == math.floor(z):
        return 0.0
    return 1.0 / gamma_real(z)


def _kummer_series(
    a: float, b: float, z: np.ndarray, control: SeriesControl
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ascending Kummer series for M(a; b; z) over a flat complex array.

    Returns (values, abs_err, converged). abs_err estimates the rounding
    floor 4 eps * (peak intermediate magnitude); converged is False where
    the term budget ran out before the three-term quiet streak.
    """
    total = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    peak = np.ones(z.shape, dtype=float)
    quiet = np.zeros(z.shape, dtype=np.int64)
    terminating = a <= 0.0 and a == math.floor(a)
    budget = min(control.max_terms, int(-a) + 1) if terminating else control.max_terms
    # overflow to inf/nan is deliberate here: it poisons peak, the error
    # estimate goes to inf, and the caller's fallback takes over
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, budget):
            term = term * ((a + k - 1.0) / ((b + k - 1.0) * k)) * z
            total = total + term
            np.maximum(peak, np.abs(total), out=peak)
            np.maximum(peak, np.abs(term), out=peak)
            if not terminating:
                small = np.abs(term) <= np.maximum(
                    control.rel_tol * np.abs(total), control.abs_floor
                )
                quiet = np.where(small, quiet + 1, 0)
                if np.all(quiet >= 3):
                    break
    converged = (
        np.ones(z.shape, dtype=bool) if terminating else quiet >= 3
    )
    # An overflowed partial sum makes every later term "small" against inf,
    # so the quiet streak alone would certify a poisoned total.
    converged &= np.isfinite(total)
    abs_err = np.where(converged, 4.0 * _EPS * peak, np.inf)
    return total, abs_err, converged


def _kummer_stable(
    a: float, b: float, z: np.ndarray, control: SeriesControl
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """M(a; b; z) with the Kummer transformation applied where Re z < 0.

    M(a; b; z) = e^z M(b-a; b; -z) turns an alternating series into a
    same-sign one, which removes the dominant cancellation for negative
    real parts. Terminating series are evaluated directly (they are exact).
    """
    terminating = a <= 0.0 and a == math.floor(a)
    neg = z.real < 0.0
    if terminating or not np.any(neg):
        return _kummer_series(a, b, z, control)
    vals = np.empty(z.shape, dtype=complex)
    errs = np.empty(z.shape, dtype=float)
    conv = np.empty(z.shape, dtype=bool)
    if not np.all(neg):
        v, e, c = _kummer_series(a, b, z[~neg], control)
        vals[~neg], errs[~neg], conv[~neg] = v, e, c
    v, e, c = _kummer_series(b - a, b, -z[neg], control)
    with np.errstate(over="ignore", invalid="ignore"):
        scale = np.exp(z[neg])
        vals[neg] = scale * v
        errs[neg] = np.abs(scale) * e
    conv[neg] = c
    return vals, errs, conv


def _validate_kummer_params(a: float, b: float) -> None:
    if b <= 0.0 and b == math.floor(b):
        # A terminating numerator can stop before the denominator pole.
        a_term = a <= 0.0 and a == math.floor(a)
        if not (a_term and -a <= -b):
            raise ValueError(
                f"M(a; b; z) undefined for b = {b:g} (nonpositive integer)"
            )


def kummer_1f1(a: float, b: float, z, control: SeriesControl = DEFAULT_SERIES):
    """Confluent hypergeometric function M(a; b; z) = 1F1(a; b; z).

    ``z`` may be a complex scalar or ndarray. Raises NonConvergenceError if
    the series fails to satisfy the control's stopping rule within its term
    budget. The returned values carry a rounding floor of roughly
    eps * (peak partial sum magnitude); callers that subtract nearly equal
    results should budget for that (see pcf_D).
    """
    _validate_kummer_params(float(a), float(b))
    za = np.asarray(z, dtype=complex)
    vals, _, conv = _kummer_stable(float(a), float(b), za.ravel(), control)
    if not np.all(conv):
        worst = np.abs(za.ravel()[~conv]).max()
        raise NonConvergenceError(
            f"Kummer series for M({a:g}; {b:g}; z) did not converge within "
            f"{control.max_terms} terms (largest offending |z| = {worst:.3g})"
        )
    out = vals.reshape(za.shape)
    return complex(out) if za.ndim == 0 else out


def pcf_D(order: float, z, control: SeriesControl = DEFAULT_SERIES):
    """Parabolic cylinder function D_order(z) for real order, complex z.

    Evaluated through the even/odd confluent-hypergeometric pair

        D_v(z) = 2^(v/2) sqrt(pi) e^(-z^2/4) [ M(-v/2; 1/2; z^2/2) / G1
                  - sqrt(2) z M((1-v)/2; 3/2; z^2/2) / G2 ],

    with G1 = Gamma((1-v)/2) and G2 = Gamma(-v/2) entering through their
    reciprocals, so each term switches off cleanly at the poles (for
    example D_0(z) = e^(-z^2/4) survives only through the first term).
    Raises NonConvergenceError when the two terms cancel more deeply than
    the control's cancellation_guard certifies.
    """
    v = float(order)
    za = np.asarray(z, dtype=complex)
    zf = za.ravel()
    w = 0.5 * zf * zf
    m1, err1, c1 = _kummer_stable(-0.5 * v, 0.5, w, control)
    m2, err2, c2 = _kummer_stable(0.5 * (1.0 - v), 1.5, w, control)
    if not (np.all(c1) and np.all(c2)):
        raise NonConvergenceError(
            f"Kummer series for D_{v:g} exhausted {control.max_terms} terms"
        )
    rg1 = reciprocal_gamma(0.5 * (1.0 - v))
    rg2 = reciprocal_gamma(-0.5 * v)
    sqrt2z = math.sqrt(2.0) * zf
    t1 = rg1 * m1
    t2 = sqrt2z * rg2 * m2
    bracket = t1 - t2
    abs_err = (
        abs(rg1) * err1
        + np.abs(sqrt2z) * abs(rg2) * err2
        + 4.0 * _EPS * (np.abs(t1) + np.abs(t2))
    )
    floor = np.maximum(np.abs(bracket), np.finfo(float).tiny)
    worst = float(np.max(abs_err / floor))
    if worst > control.cancellation_guard:
        raise NonConvergenceError(
            f"cancellation in D_{v:g}: estimated relative error {worst:.2e} "
            f"exceeds guard {control.cancellation_guard:.2e}"
        )
    pref = 2.0 ** (0.5 * v) * math.sqrt(math.pi) * np.exp(-0.25 * zf * zf)
    out = (pref * bracket).reshape(za.shape)
    return complex(out) if za.ndim == 0 else out


def _gpi_series(
    alpha: float, p: complex, q: np.ndarray, control: SeriesControl
) -> tuple[np.ndarray, np.ndarray]:
    """Series route for the half-line Gaussian integral.

    Expands D_{-alpha}(q / sqrt(2p)) so that its Gaussian prefactor cancels
    the e^(q^2/8p) factor analytically; no overflow for large |q|. Returns
    (values, relative error estimate) with inf marking elements the series
    could not certify.
    """
    z = q / cmath.sqrt(2.0 * p)
    w = 0.5 * z * z
    m1, err1, c1 = _kummer_stable(0.5 * alpha, 0.5, w, control)
    m2, err2, c2 = _kummer_stable(0.5 * (alpha + 1.0), 1.5, w, control)
    rg1 = reciprocal_gamma(0.5 * (alpha + 1.0))
    rg2 = reciprocal_gamma(0.5 * alpha)
    sqrt2z = math.sqrt(2.0) * z
    with np.errstate(over="ignore", invalid="ignore"):
        t1 = rg1 * m1
        t2 = sqrt2z * rg2 * m2
        bracket = t1 - t2
        abs_err = (
            abs(rg1) * err1
            + np.abs(sqrt2z) * abs(rg2) * err2
            + 4.0 * _EPS * (np.abs(t1) + np.abs(t2))
        )
    floor = np.maximum(np.abs(bracket), np.finfo(float).tiny)
    rel = np.where(c1 & c2, abs_err / floor, np.inf)
    pref = gamma_real(alpha) * np.exp(-0.5 * alpha * cmath.log(4.0 * p)) * math.sqrt(
        math.pi
    )
    return pref * bracket, rel


def _gpi_domain(alphas: np.ndarray, p: complex, q: np.ndarray) -> float:
    """Upper integration limit in the original variable for the quadrature
    route: past the envelope peak by enough that the integrand has decayed
    by a factor e^-50 including the polynomial growth of t^(alpha-1)."""
    rp = p.real
    amax = float(np.max(alphas))
    rq_min = float(np.min(q.real)) if q.size else 0.0
    if amax > 1.0:
        t_star = (-rq_min + math.sqrt(rq_min * rq_min + 8.0 * rp * (amax - 1.0))) / (
            4.0 * rp
        )
    else:
        t_star = max(0.0, -rq_min / (2.0 * rp))
    x_up = t_star + math.sqrt(50.0 / rp)
    for _ in range(3):
        margin = 50.0 + max(amax - 1.0, 0.0) * math.log(
            max(x_up, 2.0) / max(t_star, 0.5)
        )
        x_up = t_star + math.sqrt(max(margin, 50.0) / rp)
    return x_up


#: Taylor depth for the head integral; with the step capped so that
#: |q| eps <= 2 and |p| eps^2 <= 2, term k is bounded by ~6^k / k!,
#: which is below 1e-15 of the head well before this many terms.
_GPI_HEAD_TERMS = 48


def _gpi_quadrature(
    alphas: np.ndarray, p: complex, q: np.ndarray
) -> np.ndarray:
    """Split evaluation: an exact Taylor head on [0, eps] absorbs the
    integrable t^(alpha-1) endpoint (Gauss-Legendre converges slowly
    against a fractional-power kink), and composite panels cover the
    smooth remainder. One node set is shared across all alphas and q."""
    x_up = _gpi_domain(alphas, p, q)
    eps = min(0.35, x_up)
    q_mag = float(np.max(np.abs(q))) if q.size else 0.0
    if q_mag > 0.0:
        eps = min(eps, 2.0 / q_mag)
    p_mag = abs(p)
    if p_mag > 0.0:
        eps = min(eps, math.sqrt(2.0 / p_mag))

    # e^(-p t^2 - q t) = sum c_k t^k with (k+1) c_{k+1} = -(q c_k + 2p c_{k-1});
    # integrating against t^(alpha-1) gives the head in closed form
    coeff = np.zeros((_GPI_HEAD_TERMS, q.size), dtype=complex)
    coeff[0] = 1.0
    coeff[1] = -q
    for k in range(1, _GPI_HEAD_TERMS - 1):
        coeff[k + 1] = -(q * coeff[k] + 2.0 * p * coeff[k - 1]) / (k + 1.0)
    out = np.zeros((alphas.size, q.size), dtype=complex)
    pow_a = np.power(eps, alphas)
    for k in range(_GPI_HEAD_TERMS):
        out += np.multiply.outer(pow_a / (alphas + k), coeff[k])
        pow_a = pow_a * eps

    if x_up > eps:
        q_abs_im = float(np.max(np.abs(q.imag))) if q.size else 0.0
        phase = abs(p.imag) * x_up * x_up + q_abs_im * x_up
        panels = panels_for_phase(phase, minimum=8)
        t, wts = panel_rule(eps, x_up, panels)
        base = wts * np.exp(
            np.multiply.outer(alphas - 1.0, np.log(t)) - p * (t * t)[None, :]
        )
        chunk = max(1, 4_000_000 // max(t.size, 1))
        for lo in range(0, q.size, chunk):
            hi = min(q.size, lo + chunk)
            kernel = np.exp(-np.multiply.outer(q[lo:hi], t))
            out[:, lo:hi] += base @ kernel.T
    return out


def gauss_power_integral(
    alpha,
    p: complex,
    q,
    control: SeriesControl = DEFAULT_SERIES,
    method: str = "auto",
):
    """Half-line integral Int_0^inf t^(alpha-1) e^(-p t^2 - q t) dt.

    Requires alpha > 0 (real) and Re p > 0; q may be complex. ``alpha`` may
    be a 1-d array and ``q`` a scalar or 1-d array; an array alpha yields a
    (len(alpha), len(q)) result sharing one quadrature node set, which is
    what the half-line oscillator tomogram sums exploit.

    method:
        "series"      parabolic-cylinder closed form only; raises
                      NonConvergenceError when it cannot be certified.
        "quadrature"  Taylor head plus composite Gauss-Legendre tail.
        "auto"        series where its cancellation estimate passes the
                      control's guard, quadrature fallback elsewhere.
    """
    if method not in ("auto", "series", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    alphas = np.atleast_1d(np.asarray(alpha, dtype=float))
    qs = np.atleast_1d(np.asarray(q, dtype=complex))
    if alphas.ndim != 1 or qs.ndim != 1:
        raise ValueError("alpha and q must be scalars or 1-d arrays")
    if np.any(alphas <= 0.0):
        raise ValueError("alpha must be positive")
    pc = complex(p)
    if not pc.real > 0.0:
        raise ValueError("Re p must be positive for convergence")

    out = np.empty((alphas.size, qs.size), dtype=complex)
    if method == "quadrature":
        out[:] = _gpi_quadrature(alphas, pc, qs)
    else:
        needs_quad = np.zeros((alphas.size, qs.size), dtype=bool)
        for i, a in enumerate(alphas):
            vals, rel = _gpi_series(a, pc, qs, control)
            # negated <= so a NaN estimate counts as uncertified
            bad = ~(rel <= control.cancellation_guard)
            if method == "series" and np.any(bad):
                worst = float(np.max(rel[np.isfinite(rel)], initial=0.0))
                raise NonConvergenceError(
                    f"series route for alpha={a:g} uncertifiable "
                    f"(worst finite estimate {worst:.2e}, "
                    f"{int(np.sum(np.isinf(rel)))} unconverged)"
                )
            out[i] = np.where(bad, 0.0, vals)
            needs_quad[i] = bad
        cols = np.nonzero(np.any(needs_quad, axis=0))[0]
        if cols.size:
            fixed = _gpi_quadrature(alphas, pc, qs[cols])
            mask = needs_quad[:, cols]
            sub = out[:, cols]
            sub[mask] = fixed[mask]
            out[:, cols] = sub

    if np.ndim(alpha) == 0 and np.ndim(q) == 0:
        return complex(out[0, 0])
    if np.ndim(alpha) == 0:
        return out[0]
    if np.ndim(q) == 0:
        return out[:, 0]
    return out
