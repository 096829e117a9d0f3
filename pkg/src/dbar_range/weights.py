"""Weight functions and closed-range certificate constants.

Three certificate routes are supported, all producing an explicit constant
C for the lower bound ||u|| <= C ||dbar u||:

  * "hormander"     from a pair (c1, c2):      C = sqrt(2 / (c1 c2))
  * "bounded"       from a bounded weight (A, B):  C = e^A sqrt(2 / B)
  * "self-bounded"  from a gradient self-bound (D, E):  C = sqrt(2 D) / E

The lattice series weight turns a witness set into explicit (A, B); the
strip weight realizes the quadratic band construction; the composite weight
glues the two with a cutoff for domains that fail the exterior-witness
condition but carry strip structure away from a central column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import LatticeVerificationError, LatticeWitnessSet, PlanarDomain

__all__ = [
    "weight_constants",
    "SeriesWeight",
    "series_weight",
    "eval_series_weight",
    "series_weight_grid_stats",
    "strip_weight",
    "StripWeightFamily",
    "PointSeriesWeight",
    "CutoffProfile",
    "composite_weight",
    "certify_composite",
    "CompositeCertification",
    "WeightCertificate",
    "certificate",
    "lattice_weight_report",
]

# Cells of the lattice annulus decomposition: at most (2g+7)^2 witnesses in
# the closed square of index g, at least (2g-7)^2 in the one of index g-1
# once g >= 4, so an annulus holds at most 56g witnesses and the series
# tail behaves like sum 56/(gM)^4 * g.
_A_TAIL_TERMS = 4096


def _tail_inv_cubes(start: int, terms: int = _A_TAIL_TERMS) -> float:
    """Rigorous upper bound for sum_{g >= start} g^-3: a long partial sum
    plus the integral comparison tail 1/(2 G^2)."""
    gs = np.arange(start, start + terms, dtype=float)
    partial = float(np.sum(gs**-3))
    G = start + terms - 1
    return partial + 1.0 / (2.0 * G * G)


def weight_constants(M: float, delta: float) -> tuple[float, float]:
    """Explicit (A, B) for the lattice series weight at parameters (M, delta).

    B = 4/(3M)^6 bounds the complex Hessian from below; A bounds the weight
    itself: 49 delta^-4 for the closest cell plus the annulus-counted tail,
    with the infinite part of the sum bounded above by integral comparison.
    """
    if M <= 0 or delta <= 0:
        raise ValueError(f"M and delta must be positive, got M={M}, delta={delta}")
    B = 4.0 / (3.0 * M) ** 6
    near = sum((2 * g + 7) ** 2 / g**4 for g in range(1, 4))
    A = 49.0 * delta**-4 + (near + 56.0 * _tail_inv_cubes(4)) / M**4
    return A, B


@dataclass(frozen=True, eq=False)
class SeriesWeight:
    """Truncated lattice series weight with certified tail interval.

    `tail_bound` dominates the contribution of every witness beyond
    `gamma_max` annuli of the covering lattice point, so the true weight
    lies in [phi, phi + tail_bound] whenever phi is the truncated value.
    """

    witnesses: LatticeWitnessSet
    gamma_max: int
    A: float
    B: float
    tail_bound: float


def series_weight(witnesses: LatticeWitnessSet, gamma_max: int = 64) -> SeriesWeight:
    if gamma_max < 1:
        raise ValueError(f"gamma_max must be >= 1, got {gamma_max}")
    A, B = weight_constants(witnesses.M, witnesses.delta)
    M = witnesses.M
    tail = 56.0 / M**4 * (1.0 / (2.0 * gamma_max**2))
    return SeriesWeight(witnesses, gamma_max, A, B, tail)


def _covering_point(w: SeriesWeight, z: complex) -> tuple[complex, complex]:
    """Lattice point whose search disc covers z (nearest, first-listed on
    ties) together with its witness."""
    pts = w.witnesses.points
    if len(pts) == 0:
        raise LatticeVerificationError("empty witness set cannot cover any point")
    d = np.abs(pts - z)
    order = int(np.argmin(d))
    if d[order] >= w.witnesses.M:
        raise LatticeVerificationError(
            f"coverage clause violated: {z} lies in no lattice disc"
        )
    return complex(pts[order]), complex(w.witnesses.witnesses[order])


def eval_series_weight(w: SeriesWeight, z: complex) -> tuple[float, float]:
    """Evaluate the truncated series weight and a Hessian lower bound at z.

    Returns (phi, phi_zzbar_lower): phi sums |z - w*|^-4 over witnesses
    within gamma_max annuli of the covering lattice point (the certified
    tail interval [0, tail_bound] accounts for anything further out);
    phi_zzbar_lower is the single covering term 4 |z - w*|^-6, a valid
    lower bound because every summand has nonnegative Hessian.
    """
    w0, wstar_cov = _covering_point(w, z)
    M = w.witnesses.M
    ws = w.witnesses.witnesses
    linf = np.maximum(np.abs(ws.real - w0.real), np.abs(ws.imag - w0.imag))
    gamma = np.ceil(linf / M - 1e-12).astype(int)
    keep = gamma <= w.gamma_max
    dz = np.abs(ws[keep] - z)
    if np.any(dz == 0):
        raise ValueError(f"series weight evaluated at a witness point {z}")
    phi = float(np.sum(dz**-4.0))
    zzbar_lower = 4.0 * abs(z - wstar_cov) ** -6.0
    return phi, zzbar_lower


@dataclass(frozen=True)
class SeriesGridStats:
    grid_max_phi: float
    grid_min_zzbar: float
    grid_min_fd_zzbar: float
    fd_step: float
    nodes: int


def _phi_many(ws: np.ndarray, zs: np.ndarray, power: float, scale: float) -> np.ndarray:
    out = np.zeros(zs.shape, dtype=float)
    chunk = max(1, 8_000_000 // max(len(ws), 1))
    for i in range(0, len(zs), chunk):
        d = np.abs(zs[i : i + chunk, None] - ws[None, :])
        out[i : i + chunk] = scale * np.sum(d**power, axis=1)
    return out


def series_weight_grid_stats(
    w: SeriesWeight,
    dom: PlanarDomain,
    h: Optional[float] = None,
    fd_step: Optional[float] = None,
) -> SeriesGridStats:
    """Scan the rasterized domain: max of phi + tail against A, min of the
    per-term Hessian lower bound against B, plus a finite-difference
    Laplacian/4 cross-check of the truncated series."""
    r = dom.raster(h)
    iy, ix = np.nonzero(r.inside)
    zs = r.xs[ix] + 1j * r.ys[iy]
    if len(zs) == 0:
        raise ValueError("domain has no rasterized nodes")
    ws = w.witnesses.witnesses
    phi = _phi_many(ws, zs, -4.0, 1.0)

    # per-node covering witness lower bound: nearest lattice point within M
    pts = w.witnesses.points
    M = w.witnesses.M
    best = np.full(len(zs), np.inf)
    cover = np.full(len(zs), -1, dtype=int)
    for j, p in enumerate(pts):
        d = np.abs(zs - p)
        better = (d < M) & (d < best)
        best[better] = d[better]
        cover[better] = j
    if np.any(cover < 0):
        bad = zs[int(np.argmax(cover < 0))]
        raise LatticeVerificationError(
            f"coverage clause violated at sampled node {bad}"
        )
    zzbar_lower = 4.0 * np.abs(zs - ws[cover]) ** -6.0

    step = fd_step if fd_step is not None else r.h
    lap = (
        _phi_many(ws, zs + step, -4.0, 1.0)
        + _phi_many(ws, zs - step, -4.0, 1.0)
        + _phi_many(ws, zs + 1j * step, -4.0, 1.0)
        + _phi_many(ws, zs - 1j * step, -4.0, 1.0)
        - 4.0 * phi
    ) / (step * step)
    return SeriesGridStats(
        grid_max_phi=float(np.max(phi)) + w.tail_bound,
        grid_min_zzbar=float(np.min(zzbar_lower)),
        grid_min_fd_zzbar=float(np.min(lap / 4.0)),
        fd_step=float(step),
        nodes=len(zs),
    )


# ---------------------------------------------------------------------------
# Strip weights
# ---------------------------------------------------------------------------


def _smoothstep(t):
    """C-infinity step from exp(-1/t): 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    lo = t <= 0.0
    hi = t >= 1.0
    mid = ~(lo | hi)
    out = np.zeros(t.shape)
    out[hi] = 1.0
    tm = t[mid]
    with np.errstate(over="ignore"):
        e1 = np.exp(-1.0 / tm)
        e2 = np.exp(-1.0 / (1.0 - tm))
        out[mid] = e1 / (e1 + e2)
    return out if out.shape else float(out)


def strip_weight(
    c_prev: float,
    c_j: float,
    z: complex,
    quad_from: Optional[float] = None,
) -> tuple[float, float]:
    """One band of the strip weight: the squared distance (Im z - c_j)^2 on
    the upper part of the band, switched off smoothly toward c_prev.

    `quad_from` is the height above which the weight is exactly quadratic
    (defaults to the middle of the band); it must sit below the strip the
    band serves so the Hessian value 1/2 is exact on the strip.  On the
    cutoff collar the value stays within [0, (c_j - c_prev)^2] and the
    reported Hessian is the finite-difference value of the documented
    profile  (Im z - c_j)^2 * s((Im z - c_prev)/(quad_from - c_prev))
    with s the exp(-1/t) smoothstep.
    """
    if c_prev >= c_j:
        raise ValueError(f"band requires c_prev < c_j, got {c_prev} >= {c_j}")
    y = z.imag if isinstance(z, complex) else float(z)
    if y < c_prev or y > c_j:
        raise ValueError(f"Im z = {y} outside the band [{c_prev}, {c_j}]")
    if quad_from is None:
        quad_from = 0.5 * (c_prev + c_j)
    if not (c_prev < quad_from < c_j):
        raise ValueError("quad_from must lie strictly inside the band")

    def val(yy):
        t = (yy - c_prev) / (quad_from - c_prev)
        return (yy - c_j) ** 2 * _smoothstep(t)

    if y >= quad_from:
        return float((y - c_j) ** 2), 0.5
    d = 1e-4 * (c_j - c_prev)
    zzbar = (val(y + d) - 2.0 * val(y) + val(y - d)) / (d * d) / 4.0
    return float(val(y)), float(zzbar)


class StripWeightFamily:
    """Sum of band weights over a strictly increasing height sequence.

    Band j lives between cs[j] and cs[j+1] and is quadratic from
    quad_from[j] upward.  The value depends on Im z only; outside
    [cs[0], cs[-1]] it vanishes.
    """

    def __init__(self, cs: Sequence[float], quad_from: Optional[Sequence[float]] = None):
        cs = [float(c) for c in cs]
        if len(cs) < 2 or any(a >= b for a, b in zip(cs, cs[1:])):
            raise ValueError("need a strictly increasing sequence of at least 2 heights")
        self.cs = cs
        if quad_from is None:
            quad_from = [0.5 * (a + b) for a, b in zip(cs, cs[1:])]
        quad_from = [float(q) for q in quad_from]
        if len(quad_from) != len(cs) - 1:
            raise ValueError("need one quad_from per band")
        for a, q, b in zip(cs, quad_from, cs[1:]):
            if not (a < q < b):
                raise ValueError(f"quad_from {q} outside band ({a}, {b})")
        self.quad_from = quad_from
        self.max_gap = max(b - a for a, b in zip(cs, cs[1:]))
        self.sup_value = self.max_gap**2
        self.sup_dy = self._scan_sup_dy()

    def _band_index(self, y):
        idx = np.searchsorted(np.asarray(self.cs), y, side="right") - 1
        return np.clip(idx, 0, len(self.cs) - 2)

    def value(self, z):
        y = np.asarray(getattr(z, "imag", z), dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        j = self._band_index(y)
        lo = np.asarray(self.cs)[j]
        hi = np.asarray(self.cs)[j + 1]
        qf = np.asarray(self.quad_from)[j]
        t = (y - lo) / (qf - lo)
        out = (y - hi) ** 2 * _smoothstep(t)
        out[(y < self.cs[0]) | (y > self.cs[-1])] = 0.0
        return float(out[0]) if scalar else out

    def zzbar(self, z):
        y = np.asarray(getattr(z, "imag", z), dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        d = 1e-4 * self.max_gap
        out = (self.value(y + d) - 2 * self.value(y) + self.value(y - d)) / (d * d) / 4.0
        j = self._band_index(y)
        quad = (y >= np.asarray(self.quad_from)[j]) & (y <= np.asarray(self.cs)[j + 1])
        out[quad] = 0.5
        return float(out[0]) if scalar else out

    def _scan_sup_dy(self) -> float:
        sup = 0.0
        for a, b in zip(self.cs, self.cs[1:]):
            ys = np.linspace(a, b, 4097)
            vals = self.value(ys)
            sup = max(sup, float(np.max(np.abs(np.gradient(vals, ys)))))
        return 1.05 * sup  # dense-sampling bound, inflated


@dataclass(eq=False)
class PointSeriesWeight:
    """Series weight over an explicitly listed witness set (no lattice).

    Used for the composite construction, where witnesses are placed by hand
    in the transition bands.  Values and Hessians are exact finite sums.
    """

    witnesses: np.ndarray

    def __post_init__(self):
        self.witnesses = np.asarray(self.witnesses, dtype=complex)
        if len(self.witnesses) == 0:
            raise ValueError("need at least one witness point")

    def value(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = _phi_many(self.witnesses, z, -4.0, 1.0)
        return float(out[0]) if out.shape == (1,) else out

    def zzbar(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = _phi_many(self.witnesses, z, -6.0, 4.0)
        return float(out[0]) if out.shape == (1,) else out


# ---------------------------------------------------------------------------
# Composite weight (strip part glued to a lattice part by a cutoff)
# ---------------------------------------------------------------------------


class CutoffProfile:
    """Smoothstep in |Re z|: identically 0 for |x| <= lo, 1 for |x| >= hi.

    Derivative sups are dense-sampling estimates inflated by 5%; they feed
    the cross-term bound of the composite certificate.
    """

    def __init__(self, lo: float = 2.0, hi: float = 3.0):
        if not lo < hi:
            raise ValueError("cutoff needs lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)
        xs = np.linspace(lo - 0.05, hi + 0.05, 1 << 16)
        vals = self.value(xs)
        d1 = np.gradient(vals, xs)
        d2 = np.gradient(d1, xs)
        self.sup_d1 = 1.05 * float(np.max(np.abs(d1)))
        self.sup_d2 = 1.05 * float(np.max(np.abs(d2)))

    def value(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        return _smoothstep((x - self.lo) / (self.hi - self.lo))


def _cross_term_bound(chi: CutoffProfile, phi_strip: StripWeightFamily) -> float:
    # |(chi phi)_{z zbar} - chi phi_{z zbar}| <= |chi'| |phi_y| / 2 + |chi''| phi / 4
    return chi.sup_d1 * phi_strip.sup_dy / 2.0 + chi.sup_d2 * phi_strip.sup_value / 4.0


def composite_weight(
    chi: CutoffProfile,
    phi_strip: StripWeightFamily,
    phi_lattice: PointSeriesWeight,
    K: float,
    z: complex,
    b: float,
) -> tuple[float, float]:
    """Pointwise value and certified Hessian lower bound of
    psi = chi * phi_strip + K * phi_lattice.

    Presumes the composite-domain structure: outside |Re z| > chi.lo the
    domain coincides with the strips (where the strip weight is exactly
    quadratic), and b is a verified lower bound for the lattice part's
    Hessian on |Re z| <= chi.hi.  A nonpositive bound is a reported
    outcome, not an error: it means K is too small.
    """
    if K <= 0:
        raise ValueError(f"K must be positive, got {K}")
    x = z.real
    value = float(chi.value(x) * phi_strip.value(z) + K * phi_lattice.value(z))
    if abs(x) >= chi.hi:
        lower = 0.5
    elif abs(x) <= chi.lo:
        lower = K * b
    else:
        lower = K * b - _cross_term_bound(chi, phi_strip)
    return value, lower


@dataclass(frozen=True)
class CompositeCertification:
    certified: bool
    K: float
    B_prime: float
    A_bound: float
    crossbound: float
    b: float
    regions: dict


def certify_composite(
    dom: PlanarDomain,
    chi: CutoffProfile,
    phi_strip: StripWeightFamily,
    phi_lattice: PointSeriesWeight,
    K: Optional[float] = None,
    h: Optional[float] = None,
) -> CompositeCertification:
    """Certify psi = chi*phi_strip + K*phi_lattice over the rasterized domain.

    b is the grid minimum of the lattice part's Hessian on |Re z| <= chi.hi;
    all regional bounds are re-measured on the grid rather than assumed.
    When K is omitted a doubling search starts at K = 1 and gives up past
    2^64 (reported as an uncertified outcome).
    """
    r = dom.raster(h)
    iy, ix = np.nonzero(r.inside)
    zs = r.xs[ix] + 1j * r.ys[iy]
    ax = np.abs(zs.real)
    inner = ax <= chi.lo
    trans = (ax > chi.lo) & (ax < chi.hi)
    outer = ax >= chi.hi

    zz_lat = phi_lattice.zzbar(zs)
    central = ax <= chi.hi
    b = float(np.min(zz_lat[central])) if central.any() else 0.0
    # strip Hessian and gradient re-measured where the certificate relies
    # on them: on the composite domain the transition and outer regions lie
    # inside the strips, where the weight is exactly quadratic, so these
    # grid sups stay tame even when far-away collars are steep
    s_outer = float(np.min(phi_strip.zzbar(zs[outer]))) if outer.any() else 0.5
    s_trans = float(np.min(phi_strip.zzbar(zs[trans]))) if trans.any() else 0.0
    if trans.any():
        zt = zs[trans]
        d = r.h
        dy = np.abs(phi_strip.value(zt + 1j * d) - phi_strip.value(zt - 1j * d)) / (2 * d)
        sup_dy_trans = 1.05 * float(np.max(dy))
        phi_max_trans = float(np.max(phi_strip.value(zt)))
        cross = chi.sup_d1 * sup_dy_trans / 2.0 + chi.sup_d2 * phi_max_trans / 4.0
    else:
        cross = _cross_term_bound(chi, phi_strip)

    def bound_for(Kv: float) -> float:
        parts = []
        if outer.any():
            parts.append(s_outer)
        if inner.any():
            parts.append(Kv * b)
        if trans.any():
            parts.append(Kv * b - cross + chi.value(chi.lo) * min(0.0, s_trans))
        return min(parts) if parts else 0.0

    def a_for(Kv: float) -> float:
        return phi_strip.sup_value + Kv * float(np.max(phi_lattice.value(zs)))

    if K is not None:
        B_prime = bound_for(K)
        return CompositeCertification(
            B_prime > 0, K, B_prime, a_for(K), cross, b,
            {"inner": int(inner.sum()), "transition": int(trans.sum()), "outer": int(outer.sum())},
        )
    Kv = 1.0
    while Kv <= 2.0**64:
        B_prime = bound_for(Kv)
        if B_prime > 0:
            return CompositeCertification(
                True, Kv, B_prime, a_for(Kv), cross, b,
                {"inner": int(inner.sum()), "transition": int(trans.sum()), "outer": int(outer.sum())},
            )
        Kv *= 2.0
    return CompositeCertification(
        False, Kv / 2.0, bound_for(Kv / 2.0), a_for(Kv / 2.0), cross, b,
        {"inner": int(inner.sum()), "transition": int(trans.sum()), "outer": int(outer.sum())},
    )


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

_KINDS = ("hormander", "bounded", "self-bounded")


@dataclass(frozen=True)
class WeightCertificate:
    """Closed-range constant C with the route that produced it."""

    kind: str
    constants: dict
    C: float
    log10_C: float


def certificate(kind: str, constants: dict) -> WeightCertificate:
    """Exact constant for the requested certificate route.

    hormander: (c1, c2) -> sqrt(2/(c1 c2)); bounded: (A, B) -> e^A sqrt(2/B)
    (A may be huge, so the log10 value is always carried alongside);
    self-bounded: (D, E) -> sqrt(2 D)/E.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}; expected one of {_KINDS}")
    vals = {k: float(v) for k, v in constants.items()}
    if any(v <= 0 for k, v in vals.items() if k != "A"):
        raise ValueError(f"certificate constants must be positive, got {vals}")
    if kind == "hormander":
        c1, c2 = vals["c1"], vals["c2"]
        C = math.sqrt(2.0 / (c1 * c2))
        log10C = 0.5 * (math.log10(2.0) - math.log10(c1) - math.log10(c2))
    elif kind == "bounded":
        A, B = vals["A"], vals["B"]
        if A < 0:
            raise ValueError(f"bound A must be nonnegative, got {A}")
        log10C = A / math.log(10.0) + 0.5 * math.log10(2.0 / B)
        try:
            C = math.exp(A) * math.sqrt(2.0 / B)
        except OverflowError:
            C = math.inf
    else:
        D, E = vals["D"], vals["E"]
        C = math.sqrt(2.0 * D) / E
        log10C = 0.5 * math.log10(2.0 * D) - math.log10(E)
    return WeightCertificate(kind, vals, C, log10C)


def lattice_weight_report(
    dom: PlanarDomain,
    lat: LatticeWitnessSet,
    gamma_max: int = 64,
    h: Optional[float] = None,
) -> dict:
    """Assemble the weight-report payload for a certified lattice."""
    sw = series_weight(lat, gamma_max)
    stats = series_weight_grid_stats(sw, dom, h)
    cert = certificate("bounded", {"A": sw.A, "B": sw.B})
    return {
        "M": lat.M,
        "delta": lat.delta,
        "gamma_max": gamma_max,
        "A": sw.A,
        "B": sw.B,
        "tail_bound": sw.tail_bound,
        "C": cert.C if math.isfinite(cert.C) else None,
        "log10_C": cert.log10_C,
        "kind": cert.kind,
        "grid_min_zzbar": stats.grid_min_zzbar,
        "grid_max_phi": stats.grid_max_phi,
    }
