# zakframe/zak.py
"""
Truncated-series Zak transform on Q = [0,1)².

    Zg(t,ξ) = Σ_k g(t+k) e^{2πikξ},   Z(T_x g)(t,ξ) = Zg(t-x, ξ)

Grids use left endpoints t_j = j/Nt, ξ_s = s/Nxi. Each row is summed around
k₀ = -floor(τ) so the active terms sit at τ + k₀ ∈ [0,1).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .config import active_config
from .errors import ShapeError, SpecValidationError
from .types import check_side
from .windows import (WindowSpec, eval_derivative, eval_freq, eval_time,
                      truncation_radius)

log = logging.getLogger(__name__)

METHODS = ("auto", "fft", "direct")

# Bound on row-chunk work (rows × terms) held in memory at once.
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True, eq=False)
class ZakGrid:
    values: np.ndarray
    truncation_radius: int
    truncation_error: float
    spec_id: str
    time_shift: float = 0.0

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 2 or vals.shape[0] < 2 or vals.shape[1] < 2:
            raise ShapeError(f"Zak grid needs shape (Nt>=2, Nxi>=2), got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def Nt(self) -> int:
        return self.values.shape[0]

    @property
    def Nxi(self) -> int:
        return self.values.shape[1]

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.Nt) / self.Nt

    @property
    def xi(self) -> np.ndarray:
        return np.arange(self.Nxi) / self.Nxi

    def abs_sq(self) -> np.ndarray:
        v = self.values
        return v.real ** 2 + v.imag ** 2

    def csv_rows(self) -> List[List[str]]:
        """Rows indexed by t, columns by ξ, cells "re,im"."""
        return [[f"{z.real!r},{z.imag!r}" for z in row] for row in self.values]


@dataclass(frozen=True, eq=False)
class SignalGrid:
    """Samples of f at t_j = -L_sig + j/Nt, j < 2·L_sig·Nt."""
    samples: np.ndarray
    Nt: int
    L_sig: int

    def __post_init__(self) -> None:
        if self.Nt < 1 or self.L_sig < 1:
            raise ShapeError(f"signal grid needs Nt >= 1 and L_sig >= 1, got {self.Nt}, {self.L_sig}")
        vals = np.array(self.samples)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.shape != (2 * self.L_sig * self.Nt,):
            raise ShapeError(f"expected {2 * self.L_sig * self.Nt} samples for L_sig={self.L_sig}, Nt={self.Nt}, "
                             f"got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ShapeError("signal samples must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "samples", vals)

    @classmethod
    def from_function(cls, f: Callable, Nt: int, L_sig: int) -> "SignalGrid":
        t = -L_sig + np.arange(2 * L_sig * Nt) / Nt
        return cls(np.asarray(f(t)), Nt, L_sig)

    @property
    def step(self) -> float:
        return 1.0 / self.Nt

    @property
    def t(self) -> np.ndarray:
        return -self.L_sig + np.arange(len(self.samples)) / self.Nt

    @property
    def energy(self) -> float:
        s = self.samples
        return float(self.step * np.sum(np.abs(s) ** 2))

    def inner(self, other: "SignalGrid") -> complex:
        _check_compatible(self, other)
        a, b = self.padded(max(self.L_sig, other.L_sig)), other.padded(max(self.L_sig, other.L_sig))
        return complex(self.step * np.vdot(b.samples, a.samples))

    def padded(self, L_new: int) -> "SignalGrid":
        if L_new < self.L_sig:
            raise ShapeError(f"cannot pad L_sig={self.L_sig} down to {L_new}")
        if L_new == self.L_sig:
            return self
        pad = (L_new - self.L_sig) * self.Nt
        return SignalGrid(np.pad(self.samples, (pad, pad)), self.Nt, L_new)


# ------------------------------------------------------------------------------
# Series engine
# ------------------------------------------------------------------------------
def series_values(values_fn: Callable[[np.ndarray], np.ndarray], bases: np.ndarray, cols,
                  L: int, *, method: str = "auto", k_weight: bool = False) -> np.ndarray:
    """
    S[r, s] = Σ_{|j|≤L} f(b_r + k₀ + j) · w · e^{2πi(k₀+j)ν_s},  k₀ = -floor(b_r),
    with w = 2πi(k₀+j) when k_weight else 1.

    `cols` is an int N (uniform ν_s = s/N, DFT path available) or an array of ν values.
    """
    if method not in METHODS:
        raise SpecValidationError(f"method must be one of {METHODS}, got {method!r}")
    bases = np.asarray(bases, dtype=float).ravel()
    uniform = isinstance(cols, (int, np.integer))
    if not uniform and method == "fft":
        raise SpecValidationError("fft path needs a uniform column grid")
    nu = np.arange(cols) / cols if uniform else np.asarray(cols, dtype=float).ravel()
    use_fft = uniform and method != "direct"

    j = np.arange(-L, L + 1)
    ncol = len(nu)
    out = np.empty((len(bases), ncol), dtype=complex)
    rows_per_chunk = max(1, _CHUNK_CELLS // max(len(j), ncol))
    E = None if use_fft else np.exp(2j * np.pi * np.outer(j, nu))

    for lo in range(0, len(bases), rows_per_chunk):
        b = bases[lo:lo + rows_per_chunk]
        k0 = -np.floor(b)
        k = k0[:, None] + j[None, :]
        V = np.asarray(values_fn(b[:, None] + k), dtype=complex)
        if k_weight:
            V = V * (2j * np.pi * k)
        if use_fft:
            # fold j mod N; exact for the uniform grid even when 2L+1 > N
            P = np.zeros((len(b), ncol), dtype=complex)
            if 2 * L + 1 > ncol:
                np.add.at(P, (slice(None), np.mod(j, ncol)), V)
            else:
                P[:, np.mod(j, ncol)] = V
            S = ncol * np.fft.ifft(P, axis=1)
        else:
            S = V @ E
        out[lo:lo + len(b)] = S * np.exp(2j * np.pi * np.outer(k0, nu))
    return out


def series_grid(spec: WindowSpec, taus, xis, tol: Optional[float] = None,
                side: str = "time", method: str = "auto") -> np.ndarray:
    """
    Σ_k f(τ_r + k) e^{2πikξ_s} with f = g (side='time') or ĝ (side='frequency').
    `xis` is an int N for the uniform grid s/N, or an array of arbitrary frequencies.
    """
    check_side(side)
    L, _err = truncation_radius(spec, side, _tol(tol), 1.0)
    fn = _time_fn(spec) if side == "time" else (lambda u: eval_freq(spec, u))
    method = _resolve_method(method, xis, L) if isinstance(xis, (int, np.integer)) else "direct"
    return series_values(fn, taus, xis, L, method=method)


def _tol(tol: Optional[float]) -> float:
    return active_config().zak_tol if tol is None else float(tol)


def _time_radius(spec: WindowSpec, tol: Optional[float], power: float = 1.0) -> Tuple[int, float]:
    return truncation_radius(spec, "time", _tol(tol), float(power))


def _time_fn(spec: WindowSpec) -> Callable[[np.ndarray], np.ndarray]:
    return lambda u: eval_time(spec, u)


def zak_point(spec: WindowSpec, x: float, t: float, xi: float, tol: Optional[float] = None) -> complex:
    """Z(T_x g)(t, ξ) with certified tail ≤ tol."""
    L, _err = _time_radius(spec, tol)
    vals = series_values(_time_fn(spec), np.array([t - x]), np.array([xi]), L, method="direct")
    return complex(vals[0, 0])


def zak_rows(spec: WindowSpec, taus, Nxi: int, tol: Optional[float] = None,
             method: str = "auto") -> Tuple[np.ndarray, int, float]:
    """Zg(τ_r, s/Nxi) for arbitrary row abscissae; returns (values, L, tail bound)."""
    if Nxi < 2:
        raise ShapeError(f"Nxi must be >= 2, got {Nxi}")
    L, err = _time_radius(spec, tol)
    method = _resolve_method(method, Nxi, L)
    return series_values(_time_fn(spec), taus, int(Nxi), L, method=method), L, err


def zak_grid(spec: WindowSpec, x: float, Nt: int, Nxi: int, tol: Optional[float] = None,
             method: str = "auto") -> ZakGrid:
    """Z(T_x g) on the Nt×Nxi grid; DFT per row when Nxi ≥ 2L+1, else direct sums."""
    if Nt < 2:
        raise ShapeError(f"Nt must be >= 2, got {Nt}")
    taus = np.arange(Nt) / Nt - x
    vals, L, err = zak_rows(spec, taus, Nxi, tol, method)
    log.debug("zak_grid %s x=%g %dx%d L=%d tail=%.2e", spec.label, x, Nt, Nxi, L, err)
    return ZakGrid(vals, L, err, spec.spec_id, float(x))


def zak_derivative_grids(spec: WindowSpec, Nt: int, Nxi: int,
                         tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """(∂_t Zg, ∂_ξ Zg) on the grid: Σ g'(t+k)e^{2πikξ} and Σ 2πik g(t+k)e^{2πikξ}."""
    # the k-weighted tail decays one order slower; tighten the radius
    L, _err = _time_radius(spec, _tol(tol) * 1e-3)
    taus = np.arange(Nt) / Nt
    method = _resolve_method("auto", Nxi, L)
    dt = series_values(lambda u: eval_derivative(spec, u), taus, int(Nxi), L, method=method)
    dxi = series_values(_time_fn(spec), taus, int(Nxi), L, method=method, k_weight=True)
    return dt, dxi


# ------------------------------------------------------------------------------
# Identity checks
# ------------------------------------------------------------------------------
def zak_unitarity_defect(spec: WindowSpec, Nt: int, Nxi: int, tol: Optional[float] = None) -> float:
    """| ‖Zg‖²_Q - ‖g‖² | / ‖g‖², both by the midpoint rule on t_j = (j+½)/Nt."""
    taus = (np.arange(Nt) + 0.5) / Nt
    Z, L, _err = zak_rows(spec, taus, Nxi, tol)
    zak_norm = float(np.sum(Z.real ** 2 + Z.imag ** 2)) / (Nt * Nxi)

    L2, _ = _time_radius(spec, tol, power=2.0)
    k = np.arange(-L2 - 1, L2 + 2)
    g = eval_time(spec, taus[:, None] + k[None, :])
    g_norm = float(np.sum(np.abs(g) ** 2)) / Nt
    defect = abs(zak_norm - g_norm) / g_norm
    log.debug("unitarity %s: |Zg|^2=%.15g |g|^2=%.15g defect=%.2e", spec.label, zak_norm, g_norm, defect)
    return defect


def frequency_zak(spec: WindowSpec, Nt: int, Nxi: int, tol: Optional[float] = None) -> np.ndarray:
    """Zĝ(-ξ_s, t_j) as an Nt×Nxi array: Σ_l ĝ(l - ξ_s) e^{2πilt_j}."""
    L, err = truncation_radius(spec, "frequency", _tol(tol), 1.0)
    bases = -np.arange(Nxi) / Nxi
    rows = series_values(lambda u: eval_freq(spec, u), bases, int(Nt), L, method="fft")
    log.debug("frequency series %s L=%d tail=%.2e", spec.label, L, err)
    return rows.T


def zak_switch_defect(spec: WindowSpec, Nt: int, Nxi: int, tol: Optional[float] = None) -> float:
    """max |Zg(t,ξ) - e^{-2πitξ} Zĝ(-ξ,t)| over the grid (forward-shift Zak convention)."""
    Z = zak_grid(spec, 0.0, Nt, Nxi, tol).values
    F = frequency_zak(spec, Nt, Nxi, tol)
    t = np.arange(Nt) / Nt
    xi = np.arange(Nxi) / Nxi
    return float(np.max(np.abs(Z - np.exp(-2j * np.pi * np.outer(t, xi)) * F)))


def covariance_defect(spec: WindowSpec, k: int, n: int, Nt: int, Nxi: int,
                      tol: Optional[float] = None) -> float:
    """max |Z(M_k T_n g) - e^{2πikt} e^{2πinξ} Zg| over the grid."""
    if abs(k) > 8 or abs(n) > 8:
        raise SpecValidationError(f"covariance check supports |k|,|n| <= 8, got k={k}, n={n}")
    L, _err = _time_radius(spec, tol)
    taus = np.arange(Nt) / Nt
    xi = np.arange(Nxi) / Nxi
    method = _resolve_method("auto", Nxi, L + abs(n))

    if k == 0 and n == 0:
        shifted = lambda u: eval_time(spec, u)
    else:
        shifted = lambda u: np.exp(2j * np.pi * k * u) * eval_time(spec, u - n)
    lhs = series_values(shifted, taus, int(Nxi), L + abs(n), method=method)
    base = series_values(_time_fn(spec), taus, int(Nxi), L + abs(n), method=method)
    rhs = base if (k == 0 and n == 0) else \
        np.exp(2j * np.pi * k * taus)[:, None] * np.exp(2j * np.pi * n * xi)[None, :] * base
    return float(np.max(np.abs(lhs - rhs)))


def quasi_periodicity_defect(spec: WindowSpec, points: Sequence[Tuple[float, float]],
                             tol: Optional[float] = None) -> Tuple[float, float]:
    """(max |Z(t+1,ξ) - e^{-2πiξ}Z(t,ξ)|, max |Z(t,ξ+1) - Z(t,ξ)|) over the points."""
    d_t = d_xi = 0.0
    for t, xi in points:
        z = zak_point(spec, 0.0, t, xi, tol)
        d_t = max(d_t, abs(zak_point(spec, 0.0, t + 1.0, xi, tol) - np.exp(-2j * np.pi * xi) * z))
        d_xi = max(d_xi, abs(zak_point(spec, 0.0, t, xi + 1.0, tol) - z))
    return d_t, d_xi


def zak_modulus_bound_defect(spec: WindowSpec, K: float, xs: Sequence[float], Nt: int, Nxi: int,
                             tol: Optional[float] = None) -> float:
    """max over x and the grid of |Z(T_x g)| - K (≤ 0 when K bounds the translates)."""
    worst = -math.inf
    for x in xs:
        worst = max(worst, float(np.max(np.abs(zak_grid(spec, float(x), Nt, Nxi, tol).values))) - K)
    return worst


# ------------------------------------------------------------------------------
# Discrete Zak transform of sampled signals
# ------------------------------------------------------------------------------
def zak_of_signal(f: SignalGrid, Nxi: int) -> ZakGrid:
    """Zf(t_r, ξ_s) = Σ_k f(t_r + k) e^{2πikξ_s}; exact for Nxi ≥ 2·L_sig."""
    if Nxi < 2 * f.L_sig:
        raise ShapeError(f"Nxi={Nxi} too small for a signal on [-{f.L_sig}, {f.L_sig}) (needs >= {2 * f.L_sig})")
    blocks = np.asarray(f.samples, dtype=complex).reshape(2 * f.L_sig, f.Nt)
    ks = np.arange(-f.L_sig, f.L_sig)
    P = np.zeros((f.Nt, Nxi), dtype=complex)
    P[:, np.mod(ks, Nxi)] = blocks.T
    return ZakGrid(Nxi * np.fft.ifft(P, axis=1), f.L_sig, 0.0, "signal")


def inverse_zak(Z: ZakGrid, L_sig: int) -> SignalGrid:
    """f(t_r + k) = (1/Nxi) Σ_s Zf(t_r, ξ_s) e^{-2πikξ_s} for k ∈ [-L_sig, L_sig)."""
    if Z.Nxi < 2 * L_sig:
        raise ShapeError(f"Zak grid with Nxi={Z.Nxi} cannot resolve L_sig={L_sig}")
    C = np.fft.fft(Z.values, axis=1) / Z.Nxi
    ks = np.arange(-L_sig, L_sig)
    blocks = C[:, np.mod(ks, Z.Nxi)].T
    return SignalGrid(blocks.reshape(-1), Z.Nt, L_sig)


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _resolve_method(method: str, N: int, L: int) -> str:
    if method != "auto":
        return method
    return "fft" if N >= 2 * L + 1 else "direct"


def _check_compatible(a: SignalGrid, b: SignalGrid) -> None:
    if a.Nt != b.Nt:
        raise ShapeError(f"signal grids differ in resolution: Nt={a.Nt} vs {b.Nt}")
