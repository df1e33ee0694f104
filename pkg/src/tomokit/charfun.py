"""Characteristic functions of tomograms, and the provider zoo.

For a tomogram W(X | mu, nu) the characteristic function is

    phi(t; mu, nu) = Int W(X | mu, nu) e^(i t X) dX,

and every distributional statement about tomograms used by the validator
(normalization, hermiticity, purity, diagonal positivity, overlaps) is a
statement about phi at t = +1 or t = -1. This module supplies phi through
interchangeable providers:

    analytic    closed forms for the harmonic family (number states and
                coherent packets); evaluates literally at t = +1/-1 only,
                since phi(t; mu, nu) = phi(sign t; |t| mu, |t| nu) moves
                any other t into the frame.
    numeric     Fourier transform of a pdf: either a state's tomogram
                evaluated per frame, or a fixed tabulated density treated
                as the distribution at every frame (the shape of the
                negative examples the validator exists to refute).
    expfamily   exponential-family densities h(X) exp(eta . tau(X) - A),
                with the log-normalizer handled numerically and cached.
    mixture     convex combination of other providers.

(Empirical providers, built from sample sets, live in the estimation
module next to the samplers.)
"""

import math
import threading
from dataclasses import dataclass
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from ._quad import panel_rule, panels_for_phase, trapezoid_weights
from .errors import DescriptorError, DivergentNormalizerError, UnsupportedModelError
from .states import (
    CoherentState,
    CrystallizedCat,
    HarmonicOscillator,
    PseudoharmonicOscillator,
    StateModel,
    _parse_params,
    _take_float,
    packet_overlap_matrix,
    parse_state,
    position_support,
    momentum_radius,
    state_descriptor,
)
from .special_functions import assoc_laguerre
from .tomograms import (
    DEFAULT_QUADRATURE,
    FrameParams,
    QuadratureConfig,
    tomogram,
    tomogram_domain,
)

__all__ = [
    "PdfHandle",
    "TabulatedPdf",
    "CharFnProvider",
    "AnalyticCharFn",
    "TomogramCharFn",
    "TabulatedPdfCharFn",
    "ExpFamilySpec",
    "ExpFamilyCharFn",
    "MixtureCharFn",
    "charfn_analytic",
    "charfn_numeric",
    "charfn_expfamily",
    "exponential_family",
    "gamma_family",
    "chisq_family",
    "gaussian_eta_family",
    "parse_provider",
]

#: |phi| below this at the lattice edge counts as decayed for domain sizing.
_DECAY_FLOOR = 1e-9


@runtime_checkable
class PdfHandle(Protocol):
    """A one-dimensional density: callable on arrays, with a finite domain."""

    domain: tuple[float, float]

    def __call__(self, x: np.ndarray) -> np.ndarray: ...


@dataclass
class TabulatedPdf:
    """Piecewise-linear density tabulated on a sorted grid, zero outside."""

    x: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.w.shape or self.x.size < 2:
            raise ValueError("tabulated pdf needs matching 1-d grids of >= 2 nodes")
        if np.any(np.diff(self.x) <= 0.0):
            raise ValueError("tabulated pdf grid must be strictly increasing")

    @property
    def domain(self) -> tuple[float, float]:
        return (float(self.x[0]), float(self.x[-1]))

    def __call__(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.x, self.w, left=0.0, right=0.0)

    def mass(self) -> float:
        return float(np.sum(trapezoid_weights(self.x) * self.w))

    def fourier(self, t: float) -> complex:
        wts = trapezoid_weights(self.x)
        return complex(np.sum(wts * self.w * np.exp(1j * t * self.x)))

    @classmethod
    def from_csv(cls, path) -> "TabulatedPdf":
        xs: list[float] = []
        ws: list[float] = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = [p.strip() for p in line.split(",")]
                if parts[0].lower() in ("x", '"x"'):
                    continue
                if len(parts) < 2:
                    raise DescriptorError(f"malformed pdf row {line!r}")
                try:
                    xs.append(float(parts[0]))
                    ws.append(float(parts[1]))
                except ValueError as exc:
                    raise DescriptorError(f"non-numeric pdf row {line!r}") from exc
        if len(xs) < 2:
            raise DescriptorError("pdf file holds fewer than two rows")
        order = np.argsort(xs)
        return cls(np.asarray(xs)[order], np.asarray(ws)[order])


class CharFnProvider:
    """Base class: phi(t; mu, nu) vectorized over frame grids.

    ``decay_halfwidth`` advertises a frame radius beyond which |phi| is
    negligible, letting the validator size its lattice; None means the
    caller's default applies.
    """

    kind: str = "abstract"
    decay_halfwidth: float | None = None

    def charfn(self, t: float, mu, nu):
        raise NotImplementedError

    def __call__(self, t: float, mu, nu):
        return self.charfn(t, mu, nu)


def _broadcast_frames(mu, nu) -> tuple[np.ndarray, np.ndarray, bool]:
    mus, nus = np.broadcast_arrays(
        np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    )
    return mus, nus, mus.ndim == 0


def _require_unit_t(t: float) -> float:
    t = float(t)
    if t not in (1.0, -1.0):
        raise ValueError(
            "analytic characteristic functions evaluate literally at t = +1 "
            "or t = -1; other t values are equivalent to rescaling the frame "
            "via phi(t; mu, nu) = phi(sign t; |t| mu, |t| nu)"
        )
    return t


def _ho_charfn(n: int, t: float, mus: np.ndarray, nus: np.ndarray) -> np.ndarray:
    s2 = mus * mus + nus * nus
    arg = 0.5 * t * t * s2
    return np.exp(-0.5 * arg) * assoc_laguerre(n, 0.0, arg) + 0j


def _packet_charfn(
    model: StateModel, t: float, mus: np.ndarray, nus: np.ndarray
) -> np.ndarray:
    n2, amps, c = packet_overlap_matrix(model)
    s2 = mus * mus + nus * nus
    g = math.sqrt(2.0) * np.multiply.outer(amps, nus + 1j * mus)
    b = 0.5 * (g[:, None, ...] - np.conj(g)[None, :, ...])
    gauss = np.exp(-0.25 * t * t * s2)
    expc = np.exp(c)
    total = np.einsum("jk,jk...->...", expc, np.exp(t * b))
    return n2 * gauss * total


def _scan_decay_radius(sample: Callable[[np.ndarray, float], np.ndarray]) -> float:
    """Largest radius along a fan of frame directions where |phi| still
    exceeds the decay floor, plus a safety step."""
    radii = np.linspace(0.0, 60.0, 1201)
    worst = 0.0
    for theta in np.linspace(0.0, math.pi, 9):
        vals = np.abs(sample(radii, theta))
        alive = np.nonzero(vals > _DECAY_FLOOR)[0]
        if alive.size:
            worst = max(worst, float(radii[alive[-1]]))
    return worst + 0.5


class AnalyticCharFn(CharFnProvider):
    """Closed-form characteristic function of a harmonic-family state."""

    kind = "analytic"

    def __init__(self, model: StateModel):
        if isinstance(model, PseudoharmonicOscillator):
            raise UnsupportedModelError(
                "half-line oscillator states have no closed-form "
                "characteristic function here; wrap the state in a "
                "numeric tomogram provider instead"
            )
        if not isinstance(model, (HarmonicOscillator, CoherentState, CrystallizedCat)):
            raise UnsupportedModelError(f"unknown state model {type(model).__name__}")
        self.model = model
        self.decay_halfwidth = _scan_decay_radius(
            lambda r, th: self._eval(1.0, r * math.cos(th), r * math.sin(th))
        )

    def _eval(self, t: float, mu, nu) -> np.ndarray:
        mus, nus, _ = _broadcast_frames(mu, nu)
        if isinstance(self.model, HarmonicOscillator):
            return _ho_charfn(self.model.n, t, np.atleast_1d(mus), np.atleast_1d(nus))
        return _packet_charfn(self.model, t, np.atleast_1d(mus), np.atleast_1d(nus))

    def charfn(self, t: float, mu, nu):
        t = _require_unit_t(t)
        mus, nus, scalar = _broadcast_frames(mu, nu)
        out = self._eval(t, mus, nus)
        return complex(out[0]) if scalar else out.reshape(mus.shape)


class TomogramCharFn(CharFnProvider):
    """Fourier transform of a state's tomogram, frame by frame.

    At the zero frame the observable mu q + nu p is identically zero and
    phi(t; 0, 0) equals the tomogram's total mass; it is evaluated as such
    (at a fixed reference frame) rather than assumed to be 1, so the
    normalization content of the trace check survives.
    """

    kind = "numeric"

    _REFERENCE_FRAME = FrameParams(math.sqrt(0.5), math.sqrt(0.5))

    def __init__(
        self, model: StateModel, config: QuadratureConfig = DEFAULT_QUADRATURE
    ):
        self.model = model
        self.config = config
        r = max(abs(v) for v in position_support(model))
        self.decay_halfwidth = 1.2 * max(r, momentum_radius(model))

    def _single(self, t: float, mu: float, nu: float) -> complex:
        if mu == 0.0 and nu == 0.0:
            frame = self._REFERENCE_FRAME
            lo, hi = tomogram_domain(self.model, frame)
            x = np.linspace(lo, hi, self.config.nodes)
            w = tomogram(self.model, x, frame, self.config)
            return complex(np.sum(trapezoid_weights(x) * w))
        frame = FrameParams(mu, nu)
        lo, hi = tomogram_domain(self.model, frame)
        x = np.linspace(lo, hi, self.config.nodes)
        w = tomogram(self.model, x, frame, self.config)
        return complex(np.sum(trapezoid_weights(x) * w * np.exp(1j * t * x)))

    def charfn(self, t: float, mu, nu):
        t = float(t)
        mus, nus, scalar = _broadcast_frames(mu, nu)
        flat_mu = np.atleast_1d(mus).ravel()
        flat_nu = np.atleast_1d(nus).ravel()
        out = np.empty(flat_mu.shape, dtype=complex)
        for i in range(flat_mu.size):
            out[i] = self._single(t, float(flat_mu[i]), float(flat_nu[i]))
        return complex(out[0]) if scalar else out.reshape(mus.shape)


class TabulatedPdfCharFn(CharFnProvider):
    """Characteristic function of one fixed density used at every frame.

    This is deliberately frame-blind: it represents the claim "this single
    pdf is the tomogram everywhere", which is exactly the claim the
    validator's gates are built to refute for non-quantum densities.
    """

    kind = "numeric"

    def __init__(self, pdf: PdfHandle):
        self.pdf = pdf
        self._cache: dict[float, complex] = {}

    def _value(self, t: float) -> complex:
        if t not in self._cache:
            fourier = getattr(self.pdf, "fourier", None)
            if fourier is not None:
                self._cache[t] = complex(fourier(t))
            else:
                self._cache[t] = charfn_numeric(self.pdf, t)
        return self._cache[t]

    def charfn(self, t: float, mu, nu):
        t = float(t)
        val = self._value(t)
        mus, _, scalar = _broadcast_frames(mu, nu)
        if scalar:
            return val
        return np.full(mus.shape, val, dtype=complex)


@dataclass(frozen=True)
class ExpFamilySpec:
    """Exponential-family density h(X) exp(eta . tau(X) - A(eta)).

    eta_map sends a frame (mu, nu) to the natural parameter; families whose
    density ignores the frame simply return a constant. ``support`` uses
    +-inf for unbounded directions; a left endpoint at exactly 0 signals a
    possibly singular h (for example X^(k-1)) and switches the quadrature
    to a square-root substitution near the origin.
    """

    h: Callable[[np.ndarray], np.ndarray]
    tau: tuple[Callable[[np.ndarray], np.ndarray], ...]
    eta_map: Callable[[float, float], tuple[float, ...]]
    support: tuple[float, float]
    name: str = "custom"


class ExpFamilyCharFn(CharFnProvider):
    """Numeric characteristic function of an exponential-family density.

    The log-normalizer is never formed explicitly: phi(t) is the ratio of
    two integrals sharing the envelope h e^(eta . tau), so A(eta) cancels.
    Both are cached per natural parameter (keys quantized at 1e-10) behind
    a lock, making one provider safe to share across validator threads.
    """

    kind = "expfamily"

    def __init__(self, spec: ExpFamilySpec, config: QuadratureConfig | None = None):
        self.spec = spec
        self.config = config or DEFAULT_QUADRATURE
        self._lock = threading.Lock()
        self._integrals: dict[tuple, complex] = {}
        self._domains: dict[tuple, tuple[float, float]] = {}

    # -- geometry ---------------------------------------------------------

    def _eta_key(self, eta: tuple[float, ...]) -> tuple[int, ...]:
        return tuple(int(round(v * 1e10)) for v in eta)

    def _log_envelope(self, x: np.ndarray, eta: tuple[float, ...]) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            base = np.log(np.abs(self.spec.h(x)) + 1e-300)
        acc = base
        for e, f in zip(eta, self.spec.tau):
            acc = acc + e * f(x)
        return acc

    def _find_domain(self, eta: tuple[float, ...]) -> tuple[float, float]:
        lo_s, hi_s = self.spec.support
        half = 16.0
        while True:
            lo = max(lo_s, -half)
            hi = min(hi_s, half)
            probe = lo + (np.arange(0.5, 513.0) / 513.0) * (hi - lo)
            logf = self._log_envelope(probe, eta)
            peak = float(np.max(logf))
            if not math.isfinite(peak):
                raise DivergentNormalizerError(
                    f"envelope of {self.spec.name} is not finite on its support"
                )
            edge = -math.inf
            if lo > lo_s or lo_s == -math.inf:
                edge = max(edge, float(logf[0]))
            if hi < hi_s or hi_s == math.inf:
                edge = max(edge, float(logf[-1]))
            if edge == -math.inf or edge < peak + math.log(1e-16):
                break
            if half > 1e6:
                raise DivergentNormalizerError(
                    f"normalizer of {self.spec.name} does not converge: the "
                    f"envelope is still {math.exp(min(edge - peak, 300.0)):.2e} "
                    "of its peak at half-width 1e6"
                )
            half *= 2.0
        # Shrink to the live region of the envelope: a density far narrower
        # than the search window would otherwise slip between the nodes of
        # the fixed panel budget (the inverse-s^2 Gaussian binding near the
        # zero frame concentrates on a scale of s/sqrt(2)).
        for _ in range(8):
            spacing = (hi - lo) / 513.0
            alive = np.nonzero(logf >= peak + math.log(1e-16))[0]
            new_lo = max(lo, float(probe[alive[0]]) - spacing)
            new_hi = min(hi, float(probe[alive[-1]]) + spacing)
            if new_hi - new_lo > 0.6 * (hi - lo):
                break
            lo, hi = new_lo, new_hi
            probe = lo + (np.arange(0.5, 513.0) / 513.0) * (hi - lo)
            logf = self._log_envelope(probe, eta)
            peak = float(np.max(logf))
        return lo, hi

    def _integrand(self, x: np.ndarray, eta: tuple[float, ...], t: float) -> np.ndarray:
        acc = self.spec.h(x).astype(complex)
        expo = np.zeros(x.shape, dtype=complex)
        for e, f in zip(eta, self.spec.tau):
            expo = expo + e * f(x)
        if t != 0.0:
            expo = expo + 1j * t * x
        return acc * np.exp(expo)

    def _integral(self, eta: tuple[float, ...], t: float) -> complex:
        key = (self._eta_key(eta), float(t))
        with self._lock:
            if key in self._integrals:
                return self._integrals[key]
        dkey = self._eta_key(eta)
        with self._lock:
            domain = self._domains.get(dkey)
        if domain is None:
            domain = self._find_domain(eta)
            with self._lock:
                self._domains[dkey] = domain
        lo, hi = domain
        minimum = max(8, self.config.nodes // 64)
        total = 0.0 + 0.0j
        if lo == 0.0 and hi > 0.0:
            # Square-root substitution X = u^2 on the first unit of the
            # support absorbs an algebraic singularity of h at the origin.
            split = min(1.0, hi)
            u, wu = panel_rule(
                0.0, math.sqrt(split), panels_for_phase(abs(t) * split, minimum)
            )
            total += complex(np.sum(wu * 2.0 * u * self._integrand(u * u, eta, t)))
            lo = split
        if hi > lo:
            x, wx = panel_rule(
                lo, hi, panels_for_phase(abs(t) * (hi - lo), minimum)
            )
            total += complex(np.sum(wx * self._integrand(x, eta, t)))
        with self._lock:
            self._integrals[key] = total
        return total

    # -- public surface ----------------------------------------------------

    def charfn(self, t: float, mu, nu):
        t = float(t)
        mus, nus, scalar = _broadcast_frames(mu, nu)
        flat_mu = np.atleast_1d(mus).ravel()
        flat_nu = np.atleast_1d(nus).ravel()
        out = np.empty(flat_mu.shape, dtype=complex)
        for i in range(flat_mu.size):
            eta = tuple(
                float(v) for v in self.spec.eta_map(float(flat_mu[i]), float(flat_nu[i]))
            )
            if not all(math.isfinite(v) for v in eta):
                raise DivergentNormalizerError(
                    f"natural parameter of {self.spec.name} diverges at frame "
                    f"({flat_mu[i]:g}, {flat_nu[i]:g})"
                )
            z0 = self._integral(eta, 0.0)
            if z0 == 0.0 or not math.isfinite(abs(z0)):
                raise DivergentNormalizerError(
                    f"normalizer of {self.spec.name} is degenerate at frame "
                    f"({flat_mu[i]:g}, {flat_nu[i]:g})"
                )
            out[i] = self._integral(eta, t) / z0
        return complex(out[0]) if scalar else out.reshape(mus.shape)


class MixtureCharFn(CharFnProvider):
    """Convex combination of providers; linearity is exact by construction."""

    kind = "mixture"

    def __init__(self, components: list[tuple[float, CharFnProvider]]):
        if not components:
            raise ValueError("mixture needs at least one component")
        weights = np.array([w for w, _ in components], dtype=float)
        if np.any(weights < 0.0):
            raise ValueError("mixture weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > 1e-9:
            raise ValueError(
                f"mixture weights must sum to 1, got {float(weights.sum()):.12g}"
            )
        self.components = [(float(w), p) for w, p in components]
        radii = [p.decay_halfwidth for _, p in components]
        self.decay_halfwidth = (
            None if any(r is None for r in radii) else max(radii)
        )

    def charfn(self, t: float, mu, nu):
        total = None
        for w, provider in self.components:
            term = provider.charfn(t, mu, nu)
            total = w * term if total is None else total + w * term
        return total


def charfn_analytic(model: StateModel, t: float, frame: FrameParams) -> complex:
    """Closed-form phi(t; mu, nu) for the harmonic family, t = +1/-1 only."""
    return complex(AnalyticCharFn(model).charfn(t, frame.mu, frame.nu))


def charfn_numeric(
    pdf: PdfHandle, t: float, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> complex:
    """Fourier transform of a pdf handle over its own domain.

    Uses composite Gauss-Legendre panels sized from the phase t * span, so
    smooth decaying densities are integrated to near machine precision.
    """
    lo, hi = pdf.domain
    t = float(t)
    panels = panels_for_phase(abs(t) * (hi - lo), minimum=max(8, config.nodes // 64))
    x, w = panel_rule(lo, hi, panels)
    vals = np.asarray(pdf(x), dtype=float)
    return complex(np.sum(w * vals * np.exp(1j * t * x)))


def charfn_expfamily(
    spec: ExpFamilySpec,
    t: float,
    frame: FrameParams,
    config: QuadratureConfig | None = None,
) -> complex:
    """One-shot exponential-family phi; hold an ExpFamilyCharFn for sweeps."""
    return complex(ExpFamilyCharFn(spec, config).charfn(t, frame.mu, frame.nu))


# -- named families ---------------------------------------------------------


def exponential_family(lam: float) -> ExpFamilySpec:
    """Exponential density lam e^(-lam X) on X > 0, frame-independent."""
    if not lam > 0.0:
        raise ValueError("rate must be positive")
    return ExpFamilySpec(
        h=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        tau=(lambda x: x,),
        eta_map=lambda mu, nu: (-lam,),
        support=(0.0, math.inf),
        name=f"exponential(lambda={lam:g})",
    )


def gamma_family(k: float, theta: float) -> ExpFamilySpec:
    """Gamma density X^(k-1) e^(-X/theta) / (Gamma(k) theta^k) on X > 0."""
    if not (k > 0.0 and theta > 0.0):
        raise ValueError("shape and scale must be positive")
    return ExpFamilySpec(
        h=lambda x: np.asarray(x, dtype=float) ** (k - 1.0),
        tau=(lambda x: x,),
        eta_map=lambda mu, nu: (-1.0 / theta,),
        support=(0.0, math.inf),
        name=f"gamma(k={k:g},theta={theta:g})",
    )


def chisq_family(k: float) -> ExpFamilySpec:
    """Chi-squared density with k degrees of freedom (gamma with scale 2)."""
    spec = gamma_family(0.5 * k, 2.0)
    return ExpFamilySpec(
        h=spec.h,
        tau=spec.tau,
        eta_map=spec.eta_map,
        support=spec.support,
        name=f"chisq(k={k:g})",
    )


INV_S2 = "inv-s2"


def gaussian_eta_family(p1: float, p2) -> ExpFamilySpec:
    """Gaussian natural-parameter family with tau = (X, X^2).

    ``p2`` is either a fixed float (nonnegative values make the normalizer
    diverge, which the provider reports) or the token "inv-s2", binding the
    second natural parameter to -1/(mu^2 + nu^2). The bound form reproduces
    the oscillator ground state's tomogram family and passes the validator;
    at the degenerate frame (0, 0) its parameter diverges, which callers
    (the expfamily gate) handle as a limit.
    """
    if isinstance(p2, str):
        if p2 != INV_S2:
            raise ValueError(f"unknown p2 token {p2!r}; expected {INV_S2!r}")

        def eta_map(mu: float, nu: float) -> tuple[float, float]:
            s2 = mu * mu + nu * nu
            return (p1, -1.0 / s2 if s2 > 0.0 else -math.inf)

        label = INV_S2
    else:
        p2 = float(p2)

        def eta_map(mu: float, nu: float) -> tuple[float, float]:
            return (p1, p2)

        label = f"{p2:g}"
    return ExpFamilySpec(
        h=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        tau=(lambda x: x, lambda x: x * x),
        eta_map=eta_map,
        support=(-math.inf, math.inf),
        name=f"gauss-eta(p1={p1:g},p2={label})",
    )


# -- descriptor parsing -------------------------------------------------------

_FAMILY_KINDS = ("exponential", "gamma", "chisq", "gauss-eta")


def parse_provider(text: str) -> CharFnProvider:
    """Parse a characteristic-function provider descriptor.

    Grammar:

        state descriptors (ho:, pho:, coh:, ccat:) -> analytic provider,
            or a numeric tomogram provider for half-line states;
        exponential:lambda=<float>
        gamma:k=<float>,theta=<float>
        chisq:k=<float>
        gauss-eta:p1=<float>,p2=<float | inv-s2>
        mix:<w>*<descriptor>+<w>*<descriptor>[+...]
    """
    text = text.strip()
    kind, _, body = text.partition(":")
    if kind == "mix":
        comps: list[tuple[float, CharFnProvider]] = []
        for chunk in body.split("+"):
            weight_str, star, inner = chunk.partition("*")
            if not star:
                raise DescriptorError(
                    f"mixture component {chunk!r} must look like weight*descriptor"
                )
            try:
                weight = float(weight_str)
            except ValueError as exc:
                raise DescriptorError(f"bad mixture weight {weight_str!r}") from exc
            comps.append((weight, parse_provider(inner)))
        try:
            return MixtureCharFn(comps)
        except ValueError as exc:
            raise DescriptorError(str(exc)) from exc
    if kind in _FAMILY_KINDS:
        params = _parse_params(body, kind)
        try:
            if kind == "exponential":
                spec = exponential_family(_take_float(params, "lambda"))
            elif kind == "gamma":
                spec = gamma_family(
                    _take_float(params, "k"), _take_float(params, "theta")
                )
            elif kind == "chisq":
                spec = chisq_family(_take_float(params, "k"))
            else:
                p2_raw = params.pop("p2", None)
                if p2_raw is None:
                    raise DescriptorError("missing required parameter 'p2'")
                p2 = p2_raw if p2_raw == INV_S2 else _coerce_float(p2_raw, "p2")
                spec = gaussian_eta_family(_take_float(params, "p1"), p2)
        except ValueError as exc:
            raise DescriptorError(str(exc)) from exc
        if params:
            raise DescriptorError(
                f"unknown parameter(s) for {kind!r}: {', '.join(sorted(params))}"
            )
        return ExpFamilyCharFn(spec)
    model = parse_state(text)
    if isinstance(model, PseudoharmonicOscillator):
        return TomogramCharFn(model)
    return AnalyticCharFn(model)


def _coerce_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise DescriptorError(f"parameter {key!r} must be a number, got {raw!r}") from exc


def provider_label(provider: CharFnProvider) -> str:
    """Human-readable label for reports and provenance lines."""
    if isinstance(provider, (AnalyticCharFn, TomogramCharFn)):
        return state_descriptor(provider.model)
    if isinstance(provider, ExpFamilyCharFn):
        return provider.spec.name
    if isinstance(provider, MixtureCharFn):
        parts = [f"{w:g}*{provider_label(p)}" for w, p in provider.components]
        return "mix:" + "+".join(parts)
    if isinstance(provider, TabulatedPdfCharFn):
        return "tabulated-pdf"
    return provider.kind
