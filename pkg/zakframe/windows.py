# zakframe/windows.py
"""
Window catalog.

Fourier convention: ĝ(ξ) = ∫ g(t) e^{-2πiξt} dt.

Families
- indicator:  χ_[0,1)
- gaussian:   e^{-πt²/a²}, ĝ = a·e^{-πa²ξ²}
- hermite:    h_n(x) = e^{πx²} dⁿ/dxⁿ e^{-2πx²} (no L² normalization), ĥ_n = (-i)ⁿ h_n
- bspline:    βⁿ = (n+1)-fold convolution of χ_[0,1), support [0, n+1]
- tp:         totally positive of finite type, defined through
              ĝ(ξ) = c e^{-γξ²} e^{2πiνξ} Π (1+2πiν_jξ)^{-1} e^{-2πiν_jξ}
- sampled:    user samples, linearly interpolated
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite import herm2poly
from scipy import integrate, special

from .config import active_config
from .errors import AccuracyError, SpecValidationError, UncertifiableError
from .types import COMPACT_FAMILIES, KEY_TO_LABEL, check_side

log = logging.getLogger(__name__)

# |t| values at which envelopes are spot-checked
ENVELOPE_CHECK_POINTS = (1.0, 2.0, 5.0, 10.0, 50.0)

_CENTRAL_DIFF_STEP = 1e-4


# ------------------------------------------------------------------------------
# Decay envelopes
# ------------------------------------------------------------------------------
@dataclass(frozen=True)
class DecayEnvelope:
    """
    Radial bound E(s) on |g| (or |ĝ|), s = |t - center|:

        E(s) = A · min(1, (s/knee)^-p) · e^{-b s²} · e^{-ρ s}

    or, with `support` set, E(s) = A inside the support half-width and 0 outside.
    A declared bound A/(1+|t|^order) is covered by p=order, knee=1.
    """
    A: float
    side: str = "time"
    p: float = 0.0
    knee: float = 1.0
    b: float = 0.0
    rho: float = 0.0
    center: float = 0.0
    support: Optional[float] = None
    open_support: bool = True   # g vanishes on the support boundary

    def __post_init__(self) -> None:
        check_side(self.side)
        if not (self.A > 0 and math.isfinite(self.A)):
            raise SpecValidationError(f"envelope amplitude must be positive and finite, got {self.A}")
        if self.p < 0 or self.b < 0 or self.rho < 0 or not self.knee > 0:
            raise SpecValidationError("envelope rates must be nonnegative and knee positive")
        if self.support is not None and not self.support > 0:
            raise SpecValidationError("envelope support half-width must be positive")

    @classmethod
    def declared(cls, A: float, order: float, side: str = "time", center: float = 0.0) -> "DecayEnvelope":
        if order < 1:
            raise SpecValidationError(f"declared envelope order must be >= 1, got {order}")
        return cls(A=A, side=side, p=order, knee=1.0, center=center)

    @property
    def order(self) -> float:
        if self.support is not None or self.b > 0 or self.rho > 0:
            return math.inf
        return self.p

    @property
    def eps(self) -> float:
        return self.order - 1.0

    @property
    def moderate(self) -> bool:
        """Decay of order 1+ε (summable periodization)."""
        return self.order > 1

    @property
    def extra_decay(self) -> bool:
        """Decay of order 2+ε."""
        return self.order > 2

    def __call__(self, s):
        s = np.abs(np.asarray(s, dtype=float))
        if self.support is not None:
            inside = s < self.support if self.open_support else s <= self.support
            return np.where(inside, self.A, 0.0)
        out = np.full(s.shape, self.A)
        if self.p > 0:
            with np.errstate(divide="ignore"):
                out = out * np.where(s > self.knee, (self.knee / s) ** self.p, 1.0)
        if self.b > 0:
            out = out * np.exp(-self.b * s * s)
        if self.rho > 0:
            out = out * np.exp(-self.rho * s)
        return out if out.ndim else float(out)

    def pow(self, k: float) -> "DecayEnvelope":
        """Envelope of |g|^k."""
        if k == 1:
            return self
        if self.support is not None:
            return replace(self, A=self.A ** k)
        return replace(self, A=self.A ** k, p=self.p * k, b=self.b * k, rho=self.rho * k)

    def integral_from(self, x: float) -> float:
        """Upper bound on ∫_x^∞ E(max(0, s)) ds; inf when E is not integrable."""
        if x < 0:
            return self.A * (-x) + self.integral_from(0.0)
        if self.support is not None:
            return self.A * max(0.0, self.support - x)
        # the algebraic and exponential factors are decreasing: pull them out at x
        alg = self.A * (min(1.0, (self.knee / x) ** self.p) if (self.p > 0 and x > 0) else 1.0)
        if self.b > 0:
            rb = math.sqrt(self.b)
            return alg * math.exp(-self.rho * x) * 0.5 * math.sqrt(math.pi) / rb * float(special.erfc(rb * x))
        if self.rho > 0:
            return alg * math.exp(-self.rho * x) / self.rho
        if self.p > 1:
            if x >= self.knee:
                return self.A * self.knee ** self.p * x ** (1.0 - self.p) / (self.p - 1.0)
            return self.A * (self.knee - x) + self.A * self.knee / (self.p - 1.0)
        return math.inf


# ------------------------------------------------------------------------------
# Window specs
# ------------------------------------------------------------------------------
@dataclass(frozen=True)
class WindowSpec:
    family: str
    a: float = 1.0                                # gaussian scale
    n: int = 0                                    # hermite / bspline order
    gamma: float = 0.0                            # tp
    nu: float = 0.0                               # tp
    factors: Tuple[float, ...] = ()               # tp
    c: float = 1.0                                # tp, ĝ(0) = c
    samples: Tuple[complex, ...] = ()             # sampled
    step: float = 0.0                             # sampled
    start: float = 0.0                            # sampled
    envelopes: Tuple[DecayEnvelope, ...] = ()     # sampled, user-declared

    def __post_init__(self) -> None:
        if self.family not in KEY_TO_LABEL:
            raise SpecValidationError(f"unknown window family {self.family!r}")
        check = getattr(self, f"_check_{self.family}", None)
        if check is not None:
            check()

    # ---------- constructors ----------
    @classmethod
    def indicator(cls) -> "WindowSpec":
        return cls("indicator")

    @classmethod
    def gaussian(cls, a: float = 1.0) -> "WindowSpec":
        return cls("gaussian", a=float(a))

    @classmethod
    def hermite(cls, n: int) -> "WindowSpec":
        return cls("hermite", n=_as_order(n))

    @classmethod
    def bspline(cls, n: int) -> "WindowSpec":
        return cls("bspline", n=_as_order(n))

    @classmethod
    def totally_positive(cls, factors, *, gamma: float = 0.0, nu: float = 0.0, c: float = 1.0) -> "WindowSpec":
        return cls("tp", gamma=float(gamma), nu=float(nu),
                   factors=tuple(float(v) for v in factors), c=float(c))

    @classmethod
    def sampled(cls, samples, step: float, *, start: float = 0.0, envelopes=()) -> "WindowSpec":
        vals = np.asarray(samples)
        if np.iscomplexobj(vals) and not np.any(vals.imag):
            vals = vals.real
        return cls("sampled", samples=tuple(vals.tolist()), step=float(step),
                   start=float(start), envelopes=tuple(envelopes))

    # ---------- validation ----------
    def _check_gaussian(self) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise SpecValidationError(f"gaussian scale must be positive, got {self.a}")

    def _check_hermite(self) -> None:
        if self.n < 0:
            raise SpecValidationError(f"hermite order must be >= 0, got {self.n}")

    def _check_bspline(self) -> None:
        if self.n < 0:
            raise SpecValidationError(f"bspline order must be >= 0, got {self.n}")

    def _check_tp(self) -> None:
        if not self.factors:
            raise SpecValidationError("tp window needs at least one factor")
        if any((v == 0 or not math.isfinite(v)) for v in self.factors):
            raise SpecValidationError("tp factors must be nonzero and finite")
        if self.gamma < 0 or not math.isfinite(self.gamma):
            raise SpecValidationError(f"tp gamma must be >= 0, got {self.gamma}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise SpecValidationError(f"tp constant c must be positive, got {self.c}")
        if not math.isfinite(self.nu):
            raise SpecValidationError("tp nu must be finite")
        if self.gamma == 0 and len(self.factors) < 2:
            raise SpecValidationError("tp with gamma=0 needs at least two factors (else g is discontinuous and ĝ not integrable)")

    def _check_sampled(self) -> None:
        if len(self.samples) < 2:
            raise SpecValidationError("sampled window needs at least two samples")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise SpecValidationError(f"sampled step must be positive, got {self.step}")
        if not all(math.isfinite(abs(v)) for v in self.samples):
            raise SpecValidationError("sampled window has non-finite samples")
        for env in self.envelopes:
            if not isinstance(env, DecayEnvelope):
                raise SpecValidationError("sampled envelopes must be DecayEnvelope records")

    # ---------- descriptors ----------
    @property
    def label(self) -> str:
        if self.family == "indicator":
            return "indicator"
        if self.family == "gaussian":
            return f"gaussian:{self.a:g}"
        if self.family in ("hermite", "bspline"):
            return f"{self.family}:{self.n}"
        if self.family == "tp":
            f = ",".join(f"{v:g}" for v in self.factors)
            return f"tp:g={self.gamma:g},v={self.nu:g},f={f},c={self.c:g}"
        return f"sampled:n={len(self.samples)},step={self.step:g},start={self.start:g}"

    @property
    def spec_id(self) -> str:
        return self.label

    @property
    def shift(self) -> float:
        """tp: g(t) = g₀(t + s) with s = ν - Σν_j."""
        return self.nu - sum(self.factors)

    @property
    def is_real(self) -> bool:
        if self.family == "sampled":
            return not any(isinstance(v, complex) for v in self.samples)
        return True

    @property
    def is_continuous(self) -> bool:
        if self.family == "indicator":
            return False
        if self.family == "bspline":
            return self.n >= 1
        if self.family == "sampled":
            return abs(self.samples[0]) == 0 and abs(self.samples[-1]) == 0
        return True

    @property
    def support(self) -> Optional[Tuple[float, float]]:
        """Closed support interval of g for compactly supported windows."""
        if self.family == "indicator":
            return (0.0, 1.0)
        if self.family == "bspline":
            return (0.0, float(self.n + 1))
        if self.family == "sampled":
            return (self.start, self.start + (len(self.samples) - 1) * self.step)
        return None

    def to_dict(self) -> dict:
        out = {"family": self.family, "label": self.label}
        if self.family == "gaussian":
            out["a"] = self.a
        elif self.family in ("hermite", "bspline"):
            out["n"] = self.n
        elif self.family == "tp":
            out.update(gamma=self.gamma, nu=self.nu, factors=list(self.factors), c=self.c)
        elif self.family == "sampled":
            out.update(count=len(self.samples), step=self.step, start=self.start,
                       declared_envelopes=[{"side": e.side, "A": e.A, "order": e.order} for e in self.envelopes])
        return out


# ------------------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------------------
def eval_time(spec: WindowSpec, t, *, accuracy: Optional[float] = None):
    """g(t); vectorised over array input."""
    t_arr = np.asarray(t, dtype=float)
    out = _TIME[spec.family](spec, t_arr, accuracy)
    return out if t_arr.ndim else out[()]


def eval_freq(spec: WindowSpec, xi):
    """ĝ(ξ) as complex values; vectorised over array input."""
    xi_arr = np.asarray(xi, dtype=float)
    out = np.asarray(_FREQ[spec.family](spec, xi_arr), dtype=complex)
    return out if xi_arr.ndim else out[()]


def eval_derivative(spec: WindowSpec, t, *, accuracy: Optional[float] = None):
    """g'(t). Analytic for gaussian, hermite and bspline n >= 1; central differences otherwise."""
    t_arr = np.asarray(t, dtype=float)
    fam = spec.family
    if fam == "gaussian":
        out = -2.0 * np.pi * t_arr / spec.a ** 2 * _gaussian_time(spec, t_arr, None)
    elif fam == "hermite":
        P = _hermite_poly(spec.n)
        out = (P.deriv()(t_arr) - 2.0 * np.pi * t_arr * P(t_arr)) * np.exp(-np.pi * t_arr ** 2)
    elif fam == "bspline" and spec.n >= 1:
        B = _bspline(spec.n - 1, t_arr, shifts=2)
        out = B[0] - B[1]
    else:
        h = _CENTRAL_DIFF_STEP
        out = (eval_time(spec, t_arr + h, accuracy=accuracy) - eval_time(spec, t_arr - h, accuracy=accuracy)) / (2 * h)
    out = np.asarray(out)
    return out if t_arr.ndim else out[()]


# ---------- indicator / bspline ----------
def _bspline(n: int, t: np.ndarray, shifts: int = 1) -> np.ndarray:
    """βⁿ(t - j) for j < shifts, stacked on axis 0 (convolution recurrence, half-open β⁰)."""
    j = np.arange(n + shifts, dtype=float).reshape((-1,) + (1,) * t.ndim)
    u = t - j
    B = ((u >= 0) & (u < 1)).astype(float)
    for m in range(1, n + 1):
        u = u[:-1]
        B = (u * B[:-1] + (m + 1 - u) * B[1:]) / m
    return B


def bspline_values(n: int, t) -> np.ndarray:
    return _bspline(int(n), np.asarray(t, dtype=float))[0]


def _indicator_time(spec, t, _acc):
    return ((t >= 0) & (t < 1)).astype(float)


def _bspline_time(spec, t, _acc):
    return _bspline(spec.n, t)[0]


def _bspline_freq_n(n: int, xi: np.ndarray) -> np.ndarray:
    return np.sinc(xi) ** (n + 1) * np.exp(-1j * np.pi * (n + 1) * xi)


def _indicator_freq(spec, xi):
    return _bspline_freq_n(0, xi)


def _bspline_freq(spec, xi):
    return _bspline_freq_n(spec.n, xi)


# ---------- gaussian ----------
def _gaussian_time(spec, t, _acc):
    return np.exp(-np.pi * (t / spec.a) ** 2)


def _gaussian_freq(spec, xi):
    return spec.a * np.exp(-np.pi * (spec.a * xi) ** 2)


# ---------- hermite ----------
@lru_cache(maxsize=64)
def _hermite_poly(n: int) -> Polynomial:
    """P with h_n(x) = P(x) e^{-πx²}: P(x) = (-1)ⁿ (2π)^{n/2} H_n(√(2π) x)."""
    coef = np.zeros(n + 1)
    coef[n] = 1.0
    power = herm2poly(coef)
    r = math.sqrt(2.0 * math.pi)
    scaled = power * r ** np.arange(n + 1) * (-1.0) ** n * (2.0 * math.pi) ** (n / 2.0)
    return Polynomial(scaled)


def hermite_amplitude(n: int) -> float:
    """M with |h_n(x)| ≤ M e^{-πx²/2}."""
    p = np.abs(_hermite_poly(n).coef)
    k = np.arange(len(p), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        peak = np.where(k > 0, (k / (math.pi * math.e)) ** (k / 2.0), 1.0)
    return float(np.sum(p * peak))


def _hermite_time(spec, t, _acc):
    return _hermite_poly(spec.n)(t) * np.exp(-np.pi * t ** 2)


def _hermite_freq(spec, xi):
    return (-1j) ** spec.n * _hermite_time(spec, xi, None)


# ---------- totally positive (finite type) ----------
def _tp_reduced_freq(spec: WindowSpec, xi):
    """ĝ₀(ξ) = c e^{-γξ²} Π (1+2πiν_jξ)^{-1}; accepts complex ξ (contour shifts)."""
    xi = np.asarray(xi)
    out = spec.c * np.exp(-spec.gamma * xi * xi)
    for v in spec.factors:
        out = out / (1.0 + 2j * np.pi * v * xi)
    return out


def _tp_freq(spec, xi):
    return _tp_reduced_freq(spec, xi) * np.exp(2j * np.pi * spec.shift * xi)


@lru_cache(maxsize=1 << 18)
def _tp_reduced_time(spec: WindowSpec, tau: float, accuracy: float) -> float:
    """g₀(τ) = 2∫₀^∞ [Re ĝ₀ cos 2πξτ - Im ĝ₀ sin 2πξτ] dξ by Fourier-weighted quadrature."""
    re = lambda x: float(np.real(_tp_reduced_freq(spec, x)))
    im = lambda x: float(np.imag(_tp_reduced_freq(spec, x)))
    eps = accuracy / 8.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if tau == 0.0:
            val, err = integrate.quad(re, 0.0, np.inf, epsabs=eps, epsrel=0.0, limit=400)
            value, bound = 2.0 * val, 2.0 * err
        else:
            omega = 2.0 * math.pi * abs(tau)
            vc, ec = integrate.quad(re, 0.0, np.inf, weight="cos", wvar=omega, epsabs=eps, limlst=200, limit=400)
            vs, es = integrate.quad(im, 0.0, np.inf, weight="sin", wvar=omega, epsabs=eps, limlst=200, limit=400)
            value = 2.0 * (vc - math.copysign(1.0, tau) * vs)
            bound = 2.0 * (ec + es)
    if not bound <= accuracy:
        raise AccuracyError(f"inverse Fourier quadrature of {spec.label} at t0={tau:g} missed its target", bound)
    return value


def _tp_partial_fractions(spec: WindowSpec) -> Optional[np.ndarray]:
    """A_j with Π (1+2πiν_jξ)^{-1} = Σ A_j (1+2πiν_jξ)^{-1}; None when factors repeat."""
    nu = np.asarray(spec.factors, dtype=float)
    if len(np.unique(nu)) < len(nu):
        return None
    diff = nu[:, None] - nu[None, :]
    np.fill_diagonal(diff, 1.0)
    ratio = nu[:, None] / diff
    np.fill_diagonal(ratio, 1.0)
    return np.prod(ratio, axis=1)


def _tp_closed_form_budget(spec: WindowSpec, A: np.ndarray) -> float:
    # every exponential term (Gaussian-smoothed or not) is bounded by 1/|ν_j|
    return 16.0 * np.finfo(float).eps * spec.c * float(np.sum(np.abs(A) / np.abs(spec.factors)))


def _tp_reduced_closed(spec: WindowSpec, tau: np.ndarray, A: np.ndarray) -> np.ndarray:
    """g₀ as c·Σ A_j e_j, e_j the one-sided exponential of mean ν_j, convolved with the γ Gaussian."""
    out = np.zeros(tau.shape)
    sigma = math.sqrt(spec.gamma / 2.0) / math.pi
    for a_j, v in zip(A, spec.factors):
        s = tau if v > 0 else -tau
        lam = 1.0 / abs(v)
        if sigma == 0.0:
            e = np.where(s > 0, lam * np.exp(-lam * np.maximum(s, 0.0)), np.where(s == 0, 0.5 * lam, 0.0))
        else:
            z = (sigma * lam - s / sigma) / math.sqrt(2.0)
            with np.errstate(over="ignore"):
                pos = np.exp(-s * s / (2.0 * sigma * sigma)) * special.erfcx(np.maximum(z, 0.0))
                neg = np.exp(0.5 * (sigma * lam) ** 2 - lam * s) * special.erfc(np.minimum(z, 0.0))
            e = 0.5 * lam * np.where(z >= 0, pos, neg)
        out += a_j * e
    return spec.c * out


@lru_cache(maxsize=64)
def _note_tp_quadrature(label: str, accuracy: float) -> None:
    log.info("%s: no closed form within accuracy %.1e; falling back to inverse quadrature per node (slow)",
             label, accuracy)


def _tp_time(spec, t, acc):
    accuracy = active_config().tp_accuracy if acc is None else float(acc)
    tau = t + spec.shift
    A = _tp_partial_fractions(spec)
    if A is not None and _tp_closed_form_budget(spec, A) <= accuracy:
        return _tp_reduced_closed(spec, tau, A)
    _note_tp_quadrature(spec.label, accuracy)
    flat = [_tp_reduced_time(spec, float(v), accuracy) for v in np.ravel(tau)]
    return np.asarray(flat, dtype=float).reshape(t.shape)


# ---------- sampled ----------
def _sampled_grid(spec: WindowSpec) -> Tuple[np.ndarray, np.ndarray]:
    vals = np.asarray(spec.samples)
    nodes = spec.start + spec.step * np.arange(len(vals))
    return nodes, vals


def _sampled_time(spec, t, _acc):
    nodes, vals = _sampled_grid(spec)
    if np.iscomplexobj(vals):
        return (np.interp(t, nodes, vals.real, left=0.0, right=0.0)
                + 1j * np.interp(t, nodes, vals.imag, left=0.0, right=0.0))
    return np.interp(t, nodes, vals, left=0.0, right=0.0)


def _sampled_freq(spec, xi):
    # exact transform of the piecewise-linear interpolant: h·sinc²(hξ)·Σ g_j e^{-2πiξt_j}
    nodes, vals = _sampled_grid(spec)
    flat = np.ravel(xi)
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, (1 << 22) // len(nodes))
    for lo in range(0, len(flat), chunk):
        part = flat[lo:lo + chunk]
        out[lo:lo + chunk] = np.exp(-2j * np.pi * np.outer(part, nodes)) @ vals
    out *= spec.step * np.sinc(spec.step * flat) ** 2
    return out.reshape(xi.shape)


_TIME = {
    "indicator": _indicator_time,
    "gaussian": _gaussian_time,
    "hermite": _hermite_time,
    "bspline": _bspline_time,
    "tp": _tp_time,
    "sampled": _sampled_time,
}

_FREQ = {
    "indicator": _indicator_freq,
    "gaussian": _gaussian_freq,
    "hermite": _hermite_freq,
    "bspline": _bspline_freq,
    "tp": _tp_freq,
    "sampled": _sampled_freq,
}


# ------------------------------------------------------------------------------
# Envelopes and tails
# ------------------------------------------------------------------------------
@lru_cache(maxsize=256)
def envelope(spec: WindowSpec, side: str) -> DecayEnvelope:
    """Decay envelope of g (side='time') or ĝ (side='frequency')."""
    check_side(side)
    fam = spec.family
    if fam == "sampled":
        for env in spec.envelopes:
            if env.side == side:
                return env
        raise UncertifiableError(f"{spec.label}: no declared {side} envelope; window is uncertifiable")

    if fam in COMPACT_FAMILIES:
        order = 0 if fam == "indicator" else spec.n
        if side == "time":
            half = (order + 1) / 2.0
            return DecayEnvelope(A=1.0, side=side, center=half, support=half, open_support=(fam == "bspline"))
        # |sinc ξ|^{n+1} ≤ min(1, (π|ξ|)^{-(n+1)})
        return DecayEnvelope(A=1.0, side=side, p=float(order + 1), knee=1.0 / math.pi)

    if fam == "gaussian":
        if side == "time":
            return DecayEnvelope(A=1.0, side=side, b=math.pi / spec.a ** 2)
        return DecayEnvelope(A=spec.a, side=side, b=math.pi * spec.a ** 2)

    if fam == "hermite":
        return DecayEnvelope(A=hermite_amplitude(spec.n), side=side, b=math.pi / 2.0)

    # tp
    N = len(spec.factors)
    if side == "frequency":
        knee = math.prod(1.0 / (2.0 * math.pi * abs(v)) for v in spec.factors) ** (1.0 / N)
        return DecayEnvelope(A=spec.c, side=side, p=float(N), knee=knee, b=spec.gamma)
    return _tp_time_envelope(spec)


def _tp_time_envelope(spec: WindowSpec) -> DecayEnvelope:
    # contour shift by ±iη inside the pole-free strip |Im ξ| < 1/(2π max|ν_j|)
    eta = 1.0 / (4.0 * math.pi * max(abs(v) for v in spec.factors))
    amps = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for sgn in (1.0, -1.0):
            f = lambda x, sgn=sgn: float(np.abs(_tp_reduced_freq(spec, x + 1j * sgn * eta)))
            val, _err = integrate.quad(f, -np.inf, np.inf, limit=400)
            amps.append(val)
    return DecayEnvelope(A=1.01 * max(amps), side="time", rho=2.0 * math.pi * eta, center=-spec.shift)


def tail_bound(spec: WindowSpec, side: str, L: int, power: float = 1.0) -> float:
    """
    Certified bound on Σ_{|l|>L} sup_{u∈[-1,1]} |g(u+l)|^power (ĝ for side='frequency').
    Nonincreasing in L.
    """
    if L < 0:
        raise SpecValidationError(f"truncation radius must be >= 0, got {L}")
    env = envelope(spec, side).pow(power)
    x = L - abs(env.center)
    tail = env.integral_from(x)
    if not math.isfinite(tail):
        raise UncertifiableError(
            f"{spec.label}: {side} envelope of order {env.order:g} is not summable (power {power:g})")
    return 2.0 * (float(env(max(0.0, x))) + tail)


def truncation_radius(spec: WindowSpec, side: str, tol: float, power: float = 1.0,
                      cap: Optional[int] = None) -> Tuple[int, float]:
    """Smallest L with tail_bound(L) ≤ tol, capped (default: the active max_truncation); returns (L, bound)."""
    if not tol > 0:
        raise SpecValidationError(f"tolerance must be positive, got {tol}")
    cap = active_config().max_truncation if cap is None else int(cap)
    return _truncation_radius(spec, side, float(tol), float(power), cap)


@lru_cache(maxsize=1024)
def _truncation_radius(spec: WindowSpec, side: str, tol: float, power: float, cap: int) -> Tuple[int, float]:
    top = tail_bound(spec, side, cap, power)
    if top > tol:
        log.warning("%s: %s truncation capped at L=%d (tail %.2e > tol %.2e)", spec.label, side, cap, top, tol)
        return cap, top
    hi = 1
    while hi < cap and tail_bound(spec, side, hi, power) > tol:
        hi = min(cap, hi * 2)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(spec, side, mid, power) <= tol:
            hi = mid
        else:
            lo = mid
    if hi == 1 and tail_bound(spec, side, 0, power) <= tol:
        hi = 0
    bound = tail_bound(spec, side, hi, power)
    log.debug("%s: %s truncation L=%d (tail %.2e)", spec.label, side, hi, bound)
    return hi, bound


def envelope_holds(spec: WindowSpec, side: str, points=ENVELOPE_CHECK_POINTS,
                   slack: Optional[float] = None) -> bool:
    """Spot-check |g| ≤ E at ±points (|ĝ| for the frequency side)."""
    env = envelope(spec, side)
    if slack is None:
        slack = active_config().tp_accuracy if (spec.family == "tp" and side == "time") else 1e-12
    pts = np.asarray(points, dtype=float)
    pts = np.concatenate([pts, -pts])
    vals = eval_time(spec, pts) if side == "time" else eval_freq(spec, pts)
    bounds = env(pts - env.center)
    return bool(np.all(np.abs(vals) <= bounds + slack))


def _as_order(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise SpecValidationError(f"order must be an integer, got {n!r}")
    return int(n)
