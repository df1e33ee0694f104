"""Symplectic tomograms of the state catalog.

A tomogram W(X | mu, nu) is the distribution of the observable
mu * q + nu * p in the given state. For a pure state it reduces to a
single oscillatory integral over the wavefunction,

    W(X | mu, nu) = |I(X)|^2 / (2 pi |nu|),
    I(X) = Int Psi(y) exp(i mu y^2 / (2 nu) - i X y / nu) dy,

which this module evaluates two independent ways: a closed form per state
(Hermite/Laguerre polynomials and half-line Gaussian integrals) and a
direct quadrature of I(X). The two routes share no algebra beyond the
wavefunctions, which is what makes cross-checking them meaningful.

Frames are the pair (mu, nu); the optical line is (cos phi, sin phi) and
squeezing scales it to (s cos phi, sin phi / s). Homogeneity
W(X | L mu, L nu) = W(X / L | mu, nu) / |L| is used internally to put
every numeric evaluation on a unit-radius frame first, so the oscillatory
phase budget depends only on the frame's direction, not its scale.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._quad import panel_rule, panels_for_phase
from .errors import DegenerateFrameError, UnsupportedFrameError
from .special_functions import (
    DEFAULT_SERIES,
    SeriesControl,
    gauss_power_integral,
    lgamma_real,
)
from .states import (
    CoherentState,
    CrystallizedCat,
    HarmonicOscillator,
    PseudoharmonicOscillator,
    StateModel,
    momentum_radius,
    packet_overlap_matrix,
    position_support,
    wavefunction,
)

__all__ = [
    "FrameParams",
    "QuadratureConfig",
    "frame_from_squeeze",
    "optical_frame",
    "tomogram",
    "tomogram_analytic",
    "tomogram_numeric",
    "optical_tomogram",
    "tomogram_domain",
]


@dataclass(frozen=True)
class FrameParams:
    """Quadrature frame (mu, nu) defining the observable mu q + nu p.

    The degenerate frame (0, 0) may be constructed (characteristic
    functions evaluate there trivially) but tomogram evaluation raises.
    """

    mu: float
    nu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise ValueError("frame parameters must be finite")

    @property
    def s2(self) -> float:
        """Squared frame radius mu^2 + nu^2."""
        return self.mu * self.mu + self.nu * self.nu


def frame_from_squeeze(s: float, phi: float) -> FrameParams:
    """Squeezed optical frame (s cos phi, sin phi / s)."""
    if not s > 0.0:
        raise ValueError("squeeze parameter must be positive")
    return FrameParams(s * math.cos(phi), math.sin(phi) / s)


def optical_frame(phi: float) -> FrameParams:
    """Rotated-quadrature frame (cos phi, sin phi)."""
    return FrameParams(math.cos(phi), math.sin(phi))


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls for the direct-quadrature tomogram route.

    x_max:
        Half-width of the position-integration domain; None sizes it from
        the state's own support.
    nodes:
        Minimum total quadrature nodes. Oscillatory frames raise the count
        automatically from the integrand's phase budget.
    nu_epsilon:
        |nu| below which (after frame normalization) the evaluation
        switches to the nu -> 0 projective limit |Psi(X/mu)|^2 / |mu|.
    """

    x_max: float | None = None
    nodes: int = 4096
    nu_epsilon: float = 1e-3

    def __post_init__(self) -> None:
        if self.x_max is not None and not self.x_max > 0.0:
            raise ValueError("x_max must be positive when given")
        if self.nodes < 64:
            raise ValueError("node budget must be at least 64")
        if not 0.0 < self.nu_epsilon < 1.0:
            raise ValueError("nu_epsilon must lie in (0, 1)")


DEFAULT_QUADRATURE = QuadratureConfig()


def _as_x_array(x) -> tuple[np.ndarray, bool]:
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    return np.atleast_1d(xa), scalar


def _ho_tomogram(n: int, x: np.ndarray, s2: float) -> np.ndarray:
    # The tomogram of a number state depends on the frame only through its
    # radius: it is the position density rescaled to width s.
    s = math.sqrt(s2)
    psi = wavefunction(HarmonicOscillator(n), x / s)
    return np.abs(psi) ** 2 / s


def _packet_tomogram(model: StateModel, x: np.ndarray, frame: FrameParams) -> np.ndarray:
    n2, amps, c = packet_overlap_matrix(model)
    s2 = frame.s2
    g = math.sqrt(2.0) * amps * (frame.nu + 1j * frame.mu)
    b = 0.5 * (g[:, None] - np.conj(g)[None, :])
    coeff = np.exp(c + b * b / s2)
    slope = -2j * b / s2
    total = np.einsum("jk,jkx->x", coeff, np.exp(np.multiply.outer(slope, x)))
    return n2 / math.sqrt(math.pi * s2) * np.exp(-x * x / s2) * total.real


_PHO_GUARD_EXACT = SeriesControl(cancellation_guard=1e-10)
_PHO_GUARD_GENERAL = SeriesControl(cancellation_guard=1e-8)


def _pho_term_table(model: PseudoharmonicOscillator) -> tuple[np.ndarray, np.ndarray, float]:
    """Coefficients c_k, integral orders alpha_k and the log prefactor for
    the Laguerre-expansion route (any core strength a)."""
    b = model.b
    n = model.n
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    for k in range(n):
        coeffs[k + 1] = coeffs[k] * (-n + k) / ((b + 1.0 + k) * (k + 1.0))
    alphas = 2.0 * np.arange(n + 1) + b + 1.5
    log_pref = (
        lgamma_real(n + b + 1.0)
        - lgamma_real(n + 1.0)
        - 2.0 * lgamma_real(b + 1.0)
    )
    return coeffs, alphas, log_pref


def _pho_hermite_table(n: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Coefficients for the a = 0 route, which expands the odd Hermite
    polynomial H_{2n+1} instead of the Laguerre form. Kept as a genuinely
    separate code path so the two expansions can cross-check each other."""
    m = np.arange(n + 1)
    log_c = (2 * n - 2 * m + 1) * math.log(2.0) - np.array(
        [lgamma_real(mm + 1.0) + lgamma_real(2 * n - 2 * mm + 2.0) for mm in m]
    )
    coeffs = np.where(m % 2 == 0, 1.0, -1.0) * np.exp(log_c)
    alphas = 2.0 * n - 2.0 * m + 2.0
    log_pref = (
        -(4 * n + 1) * math.log(2.0)
        + 2.0 * lgamma_real(2 * n + 2.0)
        - lgamma_real(n + 1.0)
        - lgamma_real(n + 1.5)
    ) - math.log(2.0)
    return coeffs, alphas, log_pref


def _pho_tomogram(
    model: PseudoharmonicOscillator, x: np.ndarray, frame: FrameParams
) -> np.ndarray:
    if frame.nu == 0.0:
        raise UnsupportedFrameError(
            "half-line oscillator closed form needs nu != 0; "
            "use the quadrature route for position-like frames"
        )
    xw = model.x_omega
    nu = frame.nu
    p = 0.5 * (1.0 - 1j * frame.mu * xw * xw / nu)
    q = 1j * x * xw / nu
    if model.a == 0.0:
        coeffs, alphas, log_pref = _pho_hermite_table(model.n)
        control = _PHO_GUARD_EXACT
    else:
        coeffs, alphas, log_pref = _pho_term_table(model)
        control = _PHO_GUARD_GENERAL
    g = gauss_power_integral(alphas, p, q, control=control, method="auto")
    total = coeffs @ g
    return (
        math.exp(log_pref)
        * xw
        / (math.pi * abs(nu))
        * np.abs(total) ** 2
    )


def tomogram_analytic(model: StateModel, x, frame: FrameParams):
    """Closed-form tomogram of ``model`` at points ``x`` in ``frame``.

    Raises DegenerateFrameError at the zero frame and
    UnsupportedFrameError where the state has no closed form (half-line
    states at nu = 0).
    """
    if frame.s2 == 0.0:
        raise DegenerateFrameError("tomogram undefined at the zero frame")
    xa, scalar = _as_x_array(x)
    if isinstance(model, HarmonicOscillator):
        out = _ho_tomogram(model.n, xa, frame.s2)
    elif isinstance(model, (CoherentState, CrystallizedCat)):
        out = _packet_tomogram(model, xa, frame)
    elif isinstance(model, PseudoharmonicOscillator):
        out = _pho_tomogram(model, xa, frame)
    else:
        raise TypeError(f"unknown state model {type(model).__name__}")
    return float(out[0]) if scalar else out


def tomogram_numeric(
    model: StateModel,
    x,
    frame: FrameParams,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Direct-quadrature tomogram, sharing only the wavefunction with the
    closed forms.

    The frame is first rescaled to unit radius through homogeneity, so the
    phase budget of the Fourier-type integral is controlled by the frame's
    direction alone. Below config.nu_epsilon the projective nu -> 0 limit
    takes over.
    """
    s2 = frame.s2
    if s2 == 0.0:
        raise DegenerateFrameError("tomogram undefined at the zero frame")
    xa, scalar = _as_x_array(x)
    s = math.sqrt(s2)
    mu, nu = frame.mu / s, frame.nu / s
    xs = xa / s

    if abs(nu) < config.nu_epsilon:
        psi = wavefunction(model, xs / mu)
        out = np.abs(psi) ** 2 / abs(mu) / s
        return float(out[0]) if scalar else out

    lo, hi = position_support(model)
    if config.x_max is not None:
        lo, hi = max(lo, -config.x_max), min(hi, config.x_max)
        if not hi > lo:
            lo, hi = -config.x_max, config.x_max
    radius = max(abs(lo), abs(hi))
    phase = (0.5 * abs(mu) * radius * radius + float(np.max(np.abs(xs), initial=0.0)) * radius) / abs(nu)
    panels = panels_for_phase(phase, minimum=max(4, config.nodes // 16))
    y, w = panel_rule(lo, hi, panels)
    base = w * wavefunction(model, y) * np.exp(0.5j * mu * y * y / nu)
    out = np.empty(xs.shape, dtype=float)
    chunk = max(1, 4_000_000 // y.size)
    for start in range(0, xs.size, chunk):
        stop = min(xs.size, start + chunk)
        kernel = np.exp(-1j * np.multiply.outer(xs[start:stop], y) / nu)
        amp = kernel @ base
        out[start:stop] = np.abs(amp) ** 2
    out /= 2.0 * math.pi * abs(nu) * s
    return float(out[0]) if scalar else out


def tomogram(
    model: StateModel,
    x,
    frame: FrameParams,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
):
    """Best-route tomogram: closed form where one exists, quadrature
    elsewhere (half-line states at position-like frames)."""
    try:
        return tomogram_analytic(model, x, frame)
    except UnsupportedFrameError:
        return tomogram_numeric(model, x, frame, config)


def optical_tomogram(model: StateModel, x, phi: float):
    """Tomogram along the rotated quadrature cos(phi) q + sin(phi) p."""
    return tomogram_analytic(model, x, optical_frame(phi))


def tomogram_domain(
    model: StateModel, frame: FrameParams, tail_mass: float = 1e-7
) -> tuple[float, float]:
    """Interval holding all but ~tail_mass of the tomogram's probability.

    Gaussian-tailed states get the linear-combination support
    |mu| R_x + |nu| R_p. Half-line states carry power-law tails
    |X|^-(2b+3) inherited from the x^(b+1/2) opening of the wavefunction,
    so their radius is solved from the explicit tail-mass estimate instead
    of a fixed margin.
    """
    if frame.s2 == 0.0:
        raise DegenerateFrameError("tomogram undefined at the zero frame")
    xlo, xhi = position_support(model)
    rp = momentum_radius(model)
    lo = min(frame.mu * xlo, frame.mu * xhi) - abs(frame.nu) * rp
    hi = max(frame.mu * xlo, frame.mu * xhi) + abs(frame.nu) * rp
    if isinstance(model, PseudoharmonicOscillator) and frame.nu != 0.0:
        b = model.b
        xw = model.x_omega
        n = model.n
        # Leading tail coefficient: the k = 0 term of the Laguerre route
        # with G(alpha, p, q) ~ Gamma(alpha) q^-alpha for large |q|.
        log_k = (
            lgamma_real(n + b + 1.0)
            - lgamma_real(n + 1.0)
            - 2.0 * lgamma_real(b + 1.0)
        )
        log_c = (
            math.log(xw / (math.pi * abs(frame.nu)))
            + log_k
            + 2.0 * lgamma_real(b + 1.5)
            + (2.0 * b + 3.0) * math.log(abs(frame.nu) / xw)
        )
        log_radius = (log_c - math.log(2.0 * b + 2.0) - math.log(tail_mass)) / (
            2.0 * b + 2.0
        )
        r_tail = math.exp(min(log_radius, math.log(1e6)))
        r = max(abs(lo), abs(hi), r_tail)
        return (-r, r)
    return (lo, hi)
