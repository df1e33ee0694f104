"""State catalog: wavefunctions, normalization, support estimates.

All states live in dimensionless oscillator coordinates (hbar = m = omega
= 1 for the harmonic family; the half-line oscillator carries its own
length scale x_omega). Wavefunctions return complex arrays regardless of
whether the state is real, so downstream quadrature code has one dtype to
deal with.
"""

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._quad import adaptive_simpson
from .errors import DescriptorError
from .special_functions import assoc_laguerre, hermite, lgamma_real

__all__ = [
    "HarmonicOscillator",
    "PseudoharmonicOscillator",
    "CoherentState",
    "CrystallizedCat",
    "StateModel",
    "wavefunction",
    "normalization_constant",
    "coherent_amplitudes",
    "packet_overlap_matrix",
    "position_support",
    "momentum_radius",
    "parse_state",
    "state_descriptor",
]

#: Half-width beyond the classical turning point (in units of the state's
#: own length scale) at which Gaussian-tail wavefunctions are below ~1e-18.
_TAIL_MARGIN = 9.0


@dataclass(frozen=True)
class HarmonicOscillator:
    """Number state of the unit-frequency harmonic oscillator."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.n != int(self.n):
            raise ValueError("excitation number must be a nonnegative integer")


@dataclass(frozen=True)
class PseudoharmonicOscillator:
    """Bound state of the half-line oscillator with an inverse-square core.

    The potential adds a * x_omega^2 / x^2 (repulsive core, a >= 0) to the
    harmonic well; its states vanish identically for x <= 0. The combined
    parameter b = sqrt(1 + 4a) / 2 controls the power-law opening x^(b+1/2)
    at the origin. a = 0 reproduces the odd harmonic levels on the half
    line.
    """

    a: float
    n: int
    x_omega: float = 1.0

    def __post_init__(self) -> None:
        if not self.a >= 0.0:
            raise ValueError("core strength a must be nonnegative")
        if self.n < 0 or self.n != int(self.n):
            raise ValueError("excitation number must be a nonnegative integer")
        if not self.x_omega > 0.0:
            raise ValueError("length scale x_omega must be positive")

    @property
    def b(self) -> float:
        return 0.5 * math.sqrt(1.0 + 4.0 * self.a)


@dataclass(frozen=True)
class CoherentState:
    """Displaced Gaussian with complex amplitude alpha."""

    alpha: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class CrystallizedCat:
    """Equal-weight superposition of three coherent states whose amplitudes
    alpha, alpha w, alpha w^2 (w = e^(2 pi i / 3)) form a C3-symmetric
    triangle in phase space."""

    alpha: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))


StateModel = (
    HarmonicOscillator | PseudoharmonicOscillator | CoherentState | CrystallizedCat
)


def coherent_amplitudes(model: StateModel) -> np.ndarray:
    """Component amplitudes for states built from coherent packets."""
    if isinstance(model, CoherentState):
        return np.array([model.alpha], dtype=complex)
    if isinstance(model, CrystallizedCat):
        w = np.exp(2j * math.pi * np.arange(3) / 3.0)
        return model.alpha * w
    raise TypeError(f"{type(model).__name__} is not a coherent-packet state")


def _ho_wavefunction(n: int, x: np.ndarray) -> np.ndarray:
    log_norm = -0.25 * math.log(math.pi) - 0.5 * (
        n * math.log(2.0) + lgamma_real(n + 1.0)
    )
    return math.exp(log_norm) * np.exp(-0.5 * x * x) * hermite(n, x)


def _coherent_wavefunction(alpha: complex, x: np.ndarray) -> np.ndarray:
    return math.pi ** -0.25 * np.exp(
        -0.5 * x * x
        - 0.5 * abs(alpha) ** 2
        + math.sqrt(2.0) * alpha * x
        - 0.5 * alpha * alpha
    )


def _pho_wavefunction(model: PseudoharmonicOscillator, x: np.ndarray) -> np.ndarray:
    b = model.b
    n = model.n
    u = np.where(x > 0.0, x / model.x_omega, 0.0)
    u2 = u * u
    log_coeff = 0.5 * (
        math.log(2.0) + lgamma_real(n + 1.0) - lgamma_real(n + b + 1.0)
    ) - 0.5 * math.log(model.x_omega)
    vals = (
        math.exp(log_coeff)
        * u ** (b + 0.5)
        * np.exp(-0.5 * u2)
        * assoc_laguerre(n, b, u2)
    )
    return np.where(x > 0.0, vals, 0.0)


def wavefunction(model: StateModel, x):
    """Position wavefunction of ``model`` at ``x`` (scalar or ndarray).

    Returns complex values; the half-line oscillator vanishes for x <= 0.
    """
    xa = np.asarray(x, dtype=float)
    if isinstance(model, HarmonicOscillator):
        out = _ho_wavefunction(model.n, xa).astype(complex)
    elif isinstance(model, PseudoharmonicOscillator):
        out = _pho_wavefunction(model, xa).astype(complex)
    elif isinstance(model, CoherentState):
        out = _coherent_wavefunction(model.alpha, xa)
    elif isinstance(model, CrystallizedCat):
        amps = coherent_amplitudes(model)
        out = normalization_constant(model) * sum(
            _coherent_wavefunction(a, xa) for a in amps
        )
    else:
        raise TypeError(f"unknown state model {type(model).__name__}")
    return complex(out) if xa.ndim == 0 else out


@lru_cache(maxsize=256)
def _cat_norm(model: CrystallizedCat) -> float:
    amps = coherent_amplitudes(model)
    radius = math.sqrt(2.0) * abs(model.alpha) + 12.0

    def integrand(x: float) -> float:
        total = sum(_coherent_wavefunction(a, np.asarray(x)) for a in amps)
        return abs(total) ** 2

    mass = adaptive_simpson(integrand, -radius, radius, tol=1e-13)
    return 1.0 / math.sqrt(mass)


def normalization_constant(model: StateModel) -> float:
    """Overall factor that makes the state's wavefunction unit-norm.

    The catalog's single-packet states are normalized by construction, so
    this is 1 except for the three-packet superposition, whose constant is
    computed once by adaptive quadrature and cached (alpha -> 0 gives 1/3,
    the fully overlapping limit).
    """
    if isinstance(model, CrystallizedCat):
        return _cat_norm(model)
    if isinstance(
        model, (HarmonicOscillator, PseudoharmonicOscillator, CoherentState)
    ):
        return 1.0
    raise TypeError(f"unknown state model {type(model).__name__}")


def packet_overlap_matrix(model: StateModel) -> tuple[float, np.ndarray, np.ndarray]:
    """Normalization and pairwise packet overlaps for coherent-packet states.

    Returns (N2, amps, C) where N2 scales the double packet sum, amps are
    the component amplitudes and C[j, k] = log <psi_k | psi_j> =
    -(|a_j|^2 + |a_k|^2)/2 + conj(a_k) a_j. Both the tomogram and the
    characteristic-function closed forms reduce to sums of exp(C[j, k])
    times frame-dependent Gaussian factors over these pairs.
    """
    amps = coherent_amplitudes(model)
    n2 = normalization_constant(model) ** 2
    mod2 = np.abs(amps) ** 2
    c = -0.5 * (mod2[:, None] + mod2[None, :]) + np.conj(amps)[None, :] * amps[:, None]
    return n2, amps, c


def position_support(model: StateModel) -> tuple[float, float]:
    """Interval outside which |wavefunction| is negligible (< ~1e-18)."""
    if isinstance(model, HarmonicOscillator):
        r = math.sqrt(2.0 * model.n + 1.0) + _TAIL_MARGIN
        return (-r, r)
    if isinstance(model, PseudoharmonicOscillator):
        turning = model.x_omega * math.sqrt(4.0 * model.n + 2.0 * model.b + 3.0)
        return (0.0, turning + _TAIL_MARGIN * model.x_omega)
    if isinstance(model, (CoherentState, CrystallizedCat)):
        r = math.sqrt(2.0) * abs(model.alpha) + _TAIL_MARGIN
        return (-r, r)
    raise TypeError(f"unknown state model {type(model).__name__}")


def momentum_radius(model: StateModel) -> float:
    """Scale of the state's momentum distribution, for domain sizing.

    For the harmonic family position and momentum spreads coincide. The
    half-line states additionally carry power-law momentum tails from the
    x^(b+1/2) opening; callers integrating those should treat this value as
    a starting half-width, not a hard cutoff.
    """
    if isinstance(model, PseudoharmonicOscillator):
        lo, hi = position_support(model)
        return hi / (model.x_omega * model.x_omega)
    lo, hi = position_support(model)
    return hi


_STATE_KINDS = ("ho", "pho", "coh", "ccat")

_DESCRIPTOR_RE = re.compile(r"^([a-z]+)(?::(.*))?$")


def _parse_params(text: str, kind: str) -> dict[str, str]:
    params: dict[str, str] = {}
    if not text:
        return params
    for chunk in text.split(","):
        if "=" not in chunk:
            raise DescriptorError(
                f"malformed parameter {chunk!r} in {kind!r} descriptor "
                "(expected key=value)"
            )
        key, value = chunk.split("=", 1)
        key = key.strip()
        if key in params:
            raise DescriptorError(f"duplicate parameter {key!r}")
        params[key] = value.strip()
    return params


def _take_int(params: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise DescriptorError(f"missing required parameter {key!r}")
        return default
    raw = params.pop(key)
    try:
        return int(raw)
    except ValueError:
        raise DescriptorError(f"parameter {key!r} must be an integer, got {raw!r}")


def _take_float(
    params: dict[str, str], key: str, default: float | None = None
) -> float:
    if key not in params:
        if default is None:
            raise DescriptorError(f"missing required parameter {key!r}")
        return default
    raw = params.pop(key)
    try:
        return float(raw)
    except ValueError:
        raise DescriptorError(f"parameter {key!r} must be a number, got {raw!r}")


def parse_state(text: str) -> StateModel:
    """Parse a state descriptor string.

    Grammar (keys may appear in any order):

        ho:n=<int>
        pho:a=<float>,n=<int>[,xw=<float>]
        coh:re=<float>[,im=<float>]
        ccat:re=<float>[,im=<float>]
    """
    m = _DESCRIPTOR_RE.match(text.strip())
    if m is None:
        raise DescriptorError(f"malformed state descriptor {text!r}")
    kind, body = m.group(1), m.group(2) or ""
    if kind not in _STATE_KINDS:
        raise DescriptorError(
            f"unknown state kind {kind!r}; expected one of {', '.join(_STATE_KINDS)}"
        )
    params = _parse_params(body, kind)
    try:
        if kind == "ho":
            model: StateModel = HarmonicOscillator(n=_take_int(params, "n"))
        elif kind == "pho":
            model = PseudoharmonicOscillator(
                a=_take_float(params, "a"),
                n=_take_int(params, "n"),
                x_omega=_take_float(params, "xw", 1.0),
            )
        elif kind == "coh":
            model = CoherentState(
                complex(_take_float(params, "re"), _take_float(params, "im", 0.0))
            )
        else:
            model = CrystallizedCat(
                complex(_take_float(params, "re"), _take_float(params, "im", 0.0))
            )
    except ValueError as exc:
        raise DescriptorError(str(exc)) from exc
    if params:
        raise DescriptorError(
            f"unknown parameter(s) for {kind!r}: {', '.join(sorted(params))}"
        )
    return model


def state_descriptor(model: StateModel) -> str:
    """Canonical descriptor string, the inverse of parse_state."""
    if isinstance(model, HarmonicOscillator):
        return f"ho:n={model.n}"
    if isinstance(model, PseudoharmonicOscillator):
        base = f"pho:a={model.a!r},n={model.n}"
        if model.x_omega != 1.0:
            base += f",xw={model.x_omega!r}"
        return base
    if isinstance(model, CoherentState):
        return f"coh:re={model.alpha.real!r},im={model.alpha.imag!r}"
    if isinstance(model, CrystallizedCat):
        return f"ccat:re={model.alpha.real!r},im={model.alpha.imag!r}"
    raise TypeError(f"unknown state model {type(model).__name__}")
