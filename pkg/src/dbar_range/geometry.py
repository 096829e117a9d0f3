"""Constructive planar domains and the grid machinery built on them.

A domain is a CSG tree of primitives (disc, half-plane, axis rectangle,
graph strip) clipped to a rectangular window and rasterized at mesh h.
Every "for all z in the domain" quantifier in this package is discharged
on that grid; distance-type answers carry an error of at most h*sqrt(2).

Unbounded domains are handled by the finite window plus an explicitly
declared translation symmetry; nothing outside the window is ever
inferred.  Each certificate object records how its window was treated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import ndimage
from scipy.interpolate import CubicSpline

__all__ = [
    "DomainSpecError",
    "QueryError",
    "ConfigurationError",
    "LatticeVerificationError",
    "Disc",
    "HalfPlane",
    "Rect",
    "Strip",
    "GridRegion",
    "Union",
    "Intersection",
    "Complement",
    "plane",
    "PlanarDomain",
    "ConditionXCertificate",
    "LatticeWitnessSet",
    "contains",
    "largest_disc_at",
    "clearance",
    "condition_x",
    "build_lattice",
    "exhaust",
    "domain_to_dict",
    "domain_from_dict",
    "load_domain",
    "save_domain",
]


class DomainSpecError(ValueError):
    """Malformed domain description."""


class QueryError(ValueError):
    """Query outside the contract of the domain (point not in window, ...)."""


class ConfigurationError(RuntimeError):
    """Window or mesh cannot support the requested computation."""


class LatticeVerificationError(RuntimeError):
    """A lattice witness set failed one of its re-verified clauses."""


# ---------------------------------------------------------------------------
# CSG primitives
# ---------------------------------------------------------------------------


class EtaFunc:
    """Boundary graph for a strip: constant or a cubic spline through samples."""

    def __init__(self, spec: dict):
        if "const" in spec:
            self.spec = {"const": float(spec["const"])}
            c = self.spec["const"]
            self._fn = lambda x: np.full_like(np.asarray(x, dtype=float), c)
            self.x_range = (-math.inf, math.inf)
        elif "x" in spec and "y" in spec:
            xs = [float(v) for v in spec["x"]]
            ys = [float(v) for v in spec["y"]]
            if len(xs) != len(ys) or len(xs) < 2:
                raise DomainSpecError("eta samples need matching x/y arrays of length >= 2")
            ax = np.asarray(xs)
            if np.any(np.diff(ax) <= 0):
                raise DomainSpecError("eta sample x values must be strictly increasing")
            self.spec = {"x": xs, "y": ys}
            self._fn = CubicSpline(ax, np.asarray(ys), bc_type="natural")
            self.x_range = (xs[0], xs[-1])
        else:
            raise DomainSpecError(f"eta spec must have 'const' or 'x'/'y', got {sorted(spec)}")

    def __call__(self, x):
        return self._fn(np.asarray(x, dtype=float))

    def covers(self, x0: float, x1: float) -> bool:
        return self.x_range[0] <= x0 and x1 <= self.x_range[1]


@dataclass(frozen=True)
class Disc:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise DomainSpecError(f"disc radius must be >= 0, got {self.r}")

    def member(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 < self.r**2


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane Re(a*z + b) < 0."""

    a: complex
    b: complex

    def __post_init__(self):
        if self.a == 0:
            raise DomainSpecError("half-plane coefficient a must be nonzero")

    def member(self, x, y):
        return self.a.real * x - self.a.imag * y + self.b.real < 0


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if self.x0 >= self.x1 or self.y0 >= self.y1:
            raise DomainSpecError("rectangle bounds must satisfy x0 < x1 and y0 < y1")

    def member(self, x, y):
        return (x > self.x0) & (x < self.x1) & (y > self.y0) & (y < self.y1)


@dataclass(frozen=True, eq=False)
class Strip:
    """Graph strip eta_lo(x) < y < eta_hi(x)."""

    eta_lo: EtaFunc
    eta_hi: EtaFunc

    @classmethod
    def constant(cls, lo: float, hi: float) -> "Strip":
        return cls(EtaFunc({"const": lo}), EtaFunc({"const": hi}))

    @property
    def is_constant(self) -> bool:
        return "const" in self.eta_lo.spec and "const" in self.eta_hi.spec

    def member(self, x, y):
        return (y > self.eta_lo(x)) & (y < self.eta_hi(x))


@dataclass(frozen=True, eq=False)
class GridRegion:
    """Frozen raster mask; membership snaps to the nearest grid node.

    Produced by `exhaust` for single connected components.  Exact at grid
    nodes by construction; piecewise constant between them.  Not part of
    the JSON schema.
    """

    x0: float
    y0: float
    h: float
    mask: np.ndarray

    def member(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ix = np.rint((x - self.x0) / self.h).astype(int)
        iy = np.rint((y - self.y0) / self.h).astype(int)
        ok = (ix >= 0) & (ix < self.mask.shape[1]) & (iy >= 0) & (iy < self.mask.shape[0])
        out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        sel = np.broadcast_arrays(ix, iy, ok)
        out[sel[2]] = self.mask[sel[1][sel[2]], sel[0][sel[2]]]
        return out if out.shape else bool(out)


@dataclass(frozen=True, eq=False)
class Union:
    children: tuple

    def member(self, x, y):
        if not self.children:
            return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=bool)
        return np.logical_or.reduce([c.member(x, y) for c in self.children])


@dataclass(frozen=True, eq=False)
class Intersection:
    children: tuple

    def member(self, x, y):
        if not self.children:
            return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=bool)
        return np.logical_and.reduce([c.member(x, y) for c in self.children])


@dataclass(frozen=True, eq=False)
class Complement:
    child: object

    def member(self, x, y):
        return ~np.asarray(self.child.member(x, y))


def plane():
    """The whole plane (complement of the empty union)."""
    return Complement(Union(()))


# ---------------------------------------------------------------------------
# Domain with window and rasterization cache
# ---------------------------------------------------------------------------


class Raster:
    """Grid of membership values plus cached distance fields."""

    def __init__(self, domain: "PlanarDomain", h: float):
        x0, x1, y0, y1 = domain.window
        self.h = float(h)
        nx = int(math.floor((x1 - x0) / h + 1e-9)) + 1
        ny = int(math.floor((y1 - y0) / h + 1e-9)) + 1
        self.xs = x0 + h * np.arange(nx)
        self.ys = y0 + h * np.arange(ny)
        for strip in _collect_strips(domain.tree):
            for eta in (strip.eta_lo, strip.eta_hi):
                if not eta.covers(x0, x1):
                    raise DomainSpecError(
                        "strip eta samples do not cover the window x-range "
                        f"[{x0}, {x1}]"
                    )
            lo = strip.eta_lo(self.xs)
            hi = strip.eta_hi(self.xs)
            if np.any(lo >= hi):
                raise DomainSpecError("strip requires eta_lo(x) < eta_hi(x) on the window")
        X, Y = np.meshgrid(self.xs, self.ys)
        self.inside = np.asarray(domain.tree.member(X, Y), dtype=bool)
        self._dist_in = None
        self._dist_out = None
        self._in_indices = None

    @property
    def node_count(self) -> int:
        return int(self.inside.sum())

    def nearest_index(self, z: complex) -> tuple[int, int]:
        ix = int(np.clip(round((z.real - self.xs[0]) / self.h), 0, len(self.xs) - 1))
        iy = int(np.clip(round((z.imag - self.ys[0]) / self.h), 0, len(self.ys) - 1))
        return iy, ix

    def node_z(self, iy, ix):
        return self.xs[ix] + 1j * self.ys[iy]

    def dist_to_domain(self) -> np.ndarray:
        """Distance from each node to the nearest inside node (0 on inside)."""
        if self._dist_in is None:
            if not self.inside.any():
                self._dist_in = np.full(self.inside.shape, np.inf)
            else:
                self._dist_in = ndimage.distance_transform_edt(
                    ~self.inside, sampling=self.h
                )
        return self._dist_in

    def dist_to_complement(self) -> np.ndarray:
        """Distance from each node to the nearest non-inside node."""
        if self._dist_out is None:
            if self.inside.all():
                self._dist_out = np.full(self.inside.shape, np.inf)
            else:
                self._dist_out = ndimage.distance_transform_edt(
                    self.inside, sampling=self.h
                )
        return self._dist_out

    def nearest_inside_indices(self):
        """For every node, indices of the nearest inside node."""
        if self._in_indices is None:
            if not self.inside.any():
                raise ConfigurationError("domain has no rasterized nodes")
            _, idx = ndimage.distance_transform_edt(
                ~self.inside, sampling=self.h, return_indices=True
            )
            self._in_indices = idx
        return self._in_indices


def _collect_strips(tree):
    if isinstance(tree, Strip):
        yield tree
    elif isinstance(tree, (Union, Intersection)):
        for c in tree.children:
            yield from _collect_strips(c)
    elif isinstance(tree, Complement):
        yield from _collect_strips(tree.child)


@dataclass(eq=False)
class PlanarDomain:
    """CSG tree clipped to a window, with a rasterization cache.

    `symmetry="translation_x"` declares that the domain extends outside the
    window by horizontal translation; condition-X verdicts use it to accept
    window-edge points whose search discs would otherwise be clipped.
    """

    tree: object
    window: tuple[float, float, float, float]
    mesh: float = 0.0
    symmetry: str = "none"
    _rasters: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        x0, x1, y0, y1 = (float(v) for v in self.window)
        if x0 >= x1 or y0 >= y1:
            raise DomainSpecError("window must satisfy x0 < x1 and y0 < y1")
        self.window = (x0, x1, y0, y1)
        if self.mesh <= 0:
            self.mesh = max(x1 - x0, y1 - y0) / 512.0
        if self.symmetry not in ("none", "translation_x"):
            raise DomainSpecError(f"unknown symmetry {self.symmetry!r}")

    def in_window(self, z: complex) -> bool:
        x0, x1, y0, y1 = self.window
        return x0 <= z.real <= x1 and y0 <= z.imag <= y1

    def member(self, z: complex) -> bool:
        """Exact CSG membership, no window check."""
        return bool(self.tree.member(np.asarray(z.real), np.asarray(z.imag)))

    def raster(self, h: Optional[float] = None) -> Raster:
        h = self.mesh if h is None else float(h)
        key = round(h, 15)
        if key not in self._rasters:
            self._rasters[key] = Raster(self, h)
        return self._rasters[key]


# ---------------------------------------------------------------------------
# Point queries
# ---------------------------------------------------------------------------


def contains(dom: PlanarDomain, z: complex) -> bool:
    """Exact CSG-tree membership for a point of the window."""
    if not dom.in_window(z):
        raise QueryError(f"{z} lies outside the window {dom.window}")
    return dom.member(z)


def largest_disc_at(dom: PlanarDomain, z: complex, cap: float, h: Optional[float] = None) -> float:
    """Radius of the largest disc around z inside the domain, capped at cap.

    Exact for a tree consisting of one disc, half-plane, rectangle or
    constant-band strip; otherwise the distance from z to the rasterized
    complement (error <= h*sqrt(2)).  The window clips what the grid can
    see: with no complement nodes in reach the answer is the cap.
    """
    if cap <= 0:
        raise QueryError(f"cap must be positive, got {cap}")
    if not contains(dom, z):
        raise QueryError(f"{z} is not in the domain")
    t = dom.tree
    if isinstance(t, Disc):
        return min(cap, t.r - math.hypot(z.real - t.cx, z.imag - t.cy))
    if isinstance(t, HalfPlane):
        val = t.a.real * z.real - t.a.imag * z.imag + t.b.real
        return min(cap, -val / abs(t.a))
    if isinstance(t, Rect):
        return min(cap, z.real - t.x0, t.x1 - z.real, z.imag - t.y0, t.y1 - z.imag)
    if isinstance(t, Strip) and t.is_constant:
        lo = t.eta_lo.spec["const"]
        hi = t.eta_hi.spec["const"]
        return min(cap, z.imag - lo, hi - z.imag)
    r = dom.raster(h)
    iy, ix = r.nearest_index(z)
    d = r.dist_to_complement()[iy, ix]
    if not math.isfinite(d):
        return cap
    snap = abs(z - r.node_z(iy, ix))
    return min(cap, max(0.0, d - snap))


def clearance(dom: PlanarDomain, z: complex, h: Optional[float] = None) -> float:
    """Grid distance from z to the rasterized domain closure (0 if inside).

    Error <= h*sqrt(2); distances are measured against the window content.
    """
    if dom.member(z):
        return 0.0
    r = dom.raster(h)
    if not r.inside.any():
        return math.inf
    iy, ix = r.nearest_index(z)
    idx = r.nearest_inside_indices()
    target = r.node_z(int(idx[0][iy, ix]), int(idx[1][iy, ix]))
    return abs(z - target)


# ---------------------------------------------------------------------------
# Condition X
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ConditionXCertificate:
    """Grid verdict for the exterior-witness condition at parameters (M, delta).

    For every sampled domain node z the search disc of radius M was scanned
    for a node outside the domain whose clearance exceeds delta.  Witnesses
    are the nearest admissible nodes (deterministic distance-transform
    tie-breaking).  `accepted_by_symmetry` flags nodes whose search disc
    left the window and that were accepted by the domain's declared
    translation symmetry rather than by an explicit witness.
    """

    holds: bool
    M: float
    delta: float
    mesh: float
    sample_points: np.ndarray
    witness_points: np.ndarray
    failure_points: np.ndarray
    failure_count: int
    unprovable_count: int
    accepted_by_symmetry: bool
    notes: list

    _witness_lookup: Optional[dict] = None

    def witness_for(self, z: complex) -> complex:
        if self._witness_lookup is None:
            self._witness_lookup = dict(zip(self.sample_points.tolist(), self.witness_points.tolist()))
        try:
            return self._witness_lookup[complex(z)]
        except KeyError:
            raise KeyError(f"no witness recorded for sample point {z}") from None

    @property
    def witnesses(self) -> dict:
        """Materialized map sampled z -> witness z* (large for fine grids)."""
        if self._witness_lookup is None:
            self._witness_lookup = dict(zip(self.sample_points.tolist(), self.witness_points.tolist()))
        return self._witness_lookup


_FAILURE_SAMPLE_CAP = 10_000


def condition_x(
    dom: PlanarDomain,
    M: float,
    delta: float,
    h: Optional[float] = None,
    want_witnesses: bool = True,
) -> ConditionXCertificate:
    """Decide the exterior-witness condition on the rasterization grid.

    Soundness of the grid quantifiers requires h < delta/4; coarser meshes
    are rejected.  A node with a clipped search disc and no witness is a
    configuration error unless the domain declares a translation symmetry
    (then it is accepted by declaration and counted in unprovable_count).
    Failure points are nodes whose full search disc fits the window yet
    contains no admissible node: those falsify the condition at grid
    resolution regardless of clipping elsewhere.
    """
    if M <= 0 or delta <= 0:
        raise ValueError(f"M and delta must be positive, got M={M}, delta={delta}")
    r = dom.raster(h)
    if r.h >= delta / 4:
        raise ConfigurationError(
            f"mesh {r.h} too coarse for delta={delta}; need h < delta/4 "
            "for sound grid verification"
        )
    notes = [
        "grid-resolution verdict: quantifiers over the domain are sampled at "
        f"mesh {r.h}; distances carry error <= h*sqrt(2)",
        "the condition is certified on the window only; behaviour outside "
        "the window follows the declared symmetry, never inference",
    ]
    inside = r.inside
    empty = np.array([], dtype=complex)
    if not inside.any():
        return ConditionXCertificate(
            True, M, delta, r.h, empty, empty, empty, 0, 0, False, notes
        )

    dist_in = r.dist_to_domain()
    admissible = (~inside) & (dist_in > delta)
    if admissible.any():
        dist_adm = ndimage.distance_transform_edt(~admissible, sampling=r.h)
        witness_ok = (dist_adm < M) & inside
    else:
        witness_ok = np.zeros_like(inside)

    x0, x1, y0, y1 = dom.window
    fits = (
        (r.xs[None, :] >= x0 + M)
        & (r.xs[None, :] <= x1 - M)
        & (r.ys[:, None] >= y0 + M)
        & (r.ys[:, None] <= y1 - M)
    )
    failures = inside & fits & ~witness_ok
    unprovable = inside & ~fits & ~witness_ok
    n_fail = int(failures.sum())
    n_unprov = int(unprovable.sum())

    if n_fail:
        iy, ix = np.nonzero(failures)
        if len(iy) > _FAILURE_SAMPLE_CAP:
            iy, ix = iy[:_FAILURE_SAMPLE_CAP], ix[:_FAILURE_SAMPLE_CAP]
        pts = r.xs[ix] + 1j * r.ys[iy]
        return ConditionXCertificate(
            False, M, delta, r.h, empty, empty, pts, n_fail, n_unprov, False, notes
        )

    accepted = False
    if n_unprov:
        if dom.symmetry == "none":
            raise ConfigurationError(
                f"{n_unprov} sampled domain nodes have search discs leaving the "
                "window and no witness inside it; enlarge the window or declare "
                "a symmetry (the search disc is never silently truncated)"
            )
        accepted = True
        notes.append(
            f"{n_unprov} window-edge nodes accepted by declared symmetry "
            f"{dom.symmetry!r}"
        )

    sample_points = witness_points = empty
    if want_witnesses and witness_ok.any():
        _, idx = ndimage.distance_transform_edt(
            ~admissible, sampling=r.h, return_indices=True
        )
        iy, ix = np.nonzero(witness_ok)
        wy, wx = idx[0][iy, ix], idx[1][iy, ix]
        sample_points = r.xs[ix] + 1j * r.ys[iy]
        witness_points = r.xs[wx] + 1j * r.ys[wy]

    return ConditionXCertificate(
        True, M, delta, r.h, sample_points, witness_points, empty,
        0, n_unprov, accepted, notes,
    )


# ---------------------------------------------------------------------------
# Lattice witness structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeWitnessSet:
    """Lattice points w on (M Z)^2 meeting the domain, each with an exterior
    witness w* of clearance > delta and |w - w*| <= 2M."""

    M: float
    delta: float
    points: np.ndarray
    witnesses: np.ndarray

    @property
    def entries(self) -> list[tuple[complex, complex]]:
        return list(zip(self.points.tolist(), self.witnesses.tolist()))

    def __len__(self):
        return len(self.points)


def build_lattice(
    dom: PlanarDomain,
    M: float,
    delta: float,
    h: Optional[float] = None,
    cert: Optional[ConditionXCertificate] = None,
) -> LatticeWitnessSet:
    """Construct the lattice witness set and re-verify all its clauses.

    Each lattice point w takes its witness from the condition-X witness of
    a grid sample inside its search disc (w itself when w lies in the
    domain).  Clauses re-verified before returning: (a) the search disc
    meets both the domain and its complement, (b) every sampled domain node
    with a full search disc is covered by some lattice disc, (c) witnesses
    clear delta and |w - w*| <= 2M.
    """
    if cert is None:
        cert = condition_x(dom, M, delta, h)
    if not cert.holds:
        raise ConfigurationError(
            "condition X does not hold at these parameters; no lattice exists"
        )
    r = dom.raster(h)
    empty = np.array([], dtype=complex)
    if not r.inside.any():
        return LatticeWitnessSet(M, delta, empty, empty)

    witness_grid_ok = np.zeros(r.inside.shape, dtype=bool)
    witness_of = {}
    for z, w in zip(cert.sample_points, cert.witness_points):
        iy, ix = r.nearest_index(complex(z))
        witness_grid_ok[iy, ix] = True
        witness_of[(iy, ix)] = complex(w)

    in_idx = r.nearest_inside_indices()
    dist_in = r.dist_to_domain()
    dist_out = r.dist_to_complement()

    x0, x1, y0, y1 = dom.window
    lmin = math.floor((x0 - M) / M)
    lmax = math.ceil((x1 + M) / M)
    kmin = math.floor((y0 - M) / M)
    kmax = math.ceil((y1 + M) / M)

    points, witnesses = [], []
    lattice_flag = np.zeros((lmax - lmin + 1, kmax - kmin + 1), dtype=bool)
    for l in range(lmin, lmax + 1):
        for k in range(kmin, kmax + 1):
            w = complex(l * M, k * M)
            niy = int(np.clip(round((w.imag - r.ys[0]) / r.h), 0, len(r.ys) - 1))
            nix = int(np.clip(round((w.real - r.xs[0]) / r.h), 0, len(r.xs) - 1))
            if r.inside[niy, nix]:
                ziy, zix = niy, nix
            else:
                ziy, zix = int(in_idx[0][niy, nix]), int(in_idx[1][niy, nix])
            z_node = r.node_z(ziy, zix)
            if abs(w - z_node) >= M:
                continue  # search disc does not meet the sampled domain
            if not witness_grid_ok[ziy, zix]:
                continue  # edge sample accepted by symmetry, no witness data
            points.append(w)
            witnesses.append(witness_of[(ziy, zix)])
            lattice_flag[l - lmin, k - kmin] = True

            # clause (a): complement reachable inside the search disc
            d_out = dist_out[niy, nix] + abs(w - r.node_z(niy, nix))
            if d_out >= M:
                raise LatticeVerificationError(
                    f"clause (a) violated at w={w}: no exterior node within {M}"
                )

    points_arr = np.asarray(points, dtype=complex)
    witnesses_arr = np.asarray(witnesses, dtype=complex)

    # clause (c)(i): witness clearance, measured on the grid
    for w, ws in zip(points_arr, witnesses_arr):
        iy, ix = r.nearest_index(complex(ws))
        if dist_in[iy, ix] <= delta:
            raise LatticeVerificationError(
                f"clause (c)(i) violated at w={w}: witness {ws} has clearance "
                f"{dist_in[iy, ix]} <= {delta}"
            )
    # clause (c)(ii): containment of the search disc in the 3M witness disc
    gap = np.abs(points_arr - witnesses_arr)
    if gap.size and float(gap.max()) > 2 * M + 1e-12:
        bad = points_arr[int(np.argmax(gap))]
        raise LatticeVerificationError(
            f"clause (c)(ii) violated at w={bad}: |w - w*| = {gap.max()} > 2M"
        )

    # clause (b): covered sampled domain (nodes with full search discs; edge
    # nodes under a declared symmetry are covered by translated lattices)
    iy, ix = np.nonzero(r.inside)
    zx, zy = r.xs[ix], r.ys[iy]
    fits = (zx >= x0 + M) & (zx <= x1 - M) & (zy >= y0 + M) & (zy <= y1 - M)
    zx, zy = zx[fits], zy[fits]
    covered = np.zeros(zx.shape, dtype=bool)
    l0 = np.floor(zx / M).astype(int)
    k0 = np.floor(zy / M).astype(int)
    for dl in (0, 1, -1, 2):
        for dk in (0, 1, -1, 2):
            ll, kk = l0 + dl, k0 + dk
            okrange = (ll >= lmin) & (ll <= lmax) & (kk >= kmin) & (kk <= kmax)
            act = np.zeros(zx.shape, dtype=bool)
            act[okrange] = lattice_flag[ll[okrange] - lmin, kk[okrange] - kmin]
            d2 = (zx - ll * M) ** 2 + (zy - kk * M) ** 2
            covered |= act & (d2 < M * M)
    if not covered.all():
        miss = np.argmin(covered)
        raise LatticeVerificationError(
            f"clause (b) violated: sampled node {zx[miss] + 1j * zy[miss]} "
            "is not covered by any lattice disc"
        )

    return LatticeWitnessSet(M, delta, points_arr, witnesses_arr)


# ---------------------------------------------------------------------------
# Exhaustion by grid components
# ---------------------------------------------------------------------------


def exhaust(dom: PlanarDomain, j: int, h: Optional[float] = None) -> list[PlanarDomain]:
    """Connected grid components of the domain clipped to |z| < j.

    Flood fill with 4-connectivity; components are returned in scan order.
    The clipping balls |z| < j replace the smooth sublevel exhaustion of
    pseudoconvex theory: nested as grid sets, with union the rasterized
    domain once j passes the window radius.
    """
    if j < 1:
        raise ValueError(f"exhaustion index must be >= 1, got {j}")
    r = dom.raster(h)
    X, Y = np.meshgrid(r.xs, r.ys)
    mask = r.inside & (X**2 + Y**2 < float(j) ** 2)
    labels, ncomp = ndimage.label(mask)
    out = []
    for c in range(1, ncomp + 1):
        comp = labels == c
        region = GridRegion(float(r.xs[0]), float(r.ys[0]), r.h, comp)
        tree = Intersection((dom.tree, Disc(0.0, 0.0, float(j)), region))
        out.append(PlanarDomain(tree, dom.window, r.h, dom.symmetry))
    return out


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def _tree_to_dict(node) -> dict:
    if isinstance(node, Disc):
        return {"prim": "disc", "params": {"center": [node.cx, node.cy], "radius": node.r}}
    if isinstance(node, HalfPlane):
        return {
            "prim": "halfplane",
            "params": {"a": [node.a.real, node.a.imag], "b": [node.b.real, node.b.imag]},
        }
    if isinstance(node, Rect):
        return {
            "prim": "rect",
            "params": {"x0": node.x0, "x1": node.x1, "y0": node.y0, "y1": node.y1},
        }
    if isinstance(node, Strip):
        return {
            "prim": "strip",
            "params": {"eta_lo": node.eta_lo.spec, "eta_hi": node.eta_hi.spec},
        }
    if isinstance(node, Union):
        return {"op": "union", "children": [_tree_to_dict(c) for c in node.children]}
    if isinstance(node, Intersection):
        return {"op": "intersect", "children": [_tree_to_dict(c) for c in node.children]}
    if isinstance(node, Complement):
        return {"op": "complement", "children": [_tree_to_dict(node.child)]}
    raise DomainSpecError(f"{type(node).__name__} nodes are not serializable")


def _tree_from_dict(d: dict):
    if not isinstance(d, dict):
        raise DomainSpecError(f"tree node must be an object, got {type(d).__name__}")
    if "op" in d:
        op = d["op"]
        children = d.get("children", [])
        if op == "union":
            return Union(tuple(_tree_from_dict(c) for c in children))
        if op == "intersect":
            return Intersection(tuple(_tree_from_dict(c) for c in children))
        if op == "complement":
            if len(children) != 1:
                raise DomainSpecError("complement takes exactly one child")
            return Complement(_tree_from_dict(children[0]))
        raise DomainSpecError(f"unknown op {op!r}")
    if "prim" in d:
        prim = d["prim"]
        params = d.get("params", {})
        try:
            if prim == "disc":
                cx, cy = params["center"]
                return Disc(float(cx), float(cy), float(params["radius"]))
            if prim == "halfplane":
                ar, ai = params["a"]
                br, bi = params["b"]
                return HalfPlane(complex(ar, ai), complex(br, bi))
            if prim == "rect":
                return Rect(
                    float(params["x0"]), float(params["x1"]),
                    float(params["y0"]), float(params["y1"]),
                )
            if prim == "strip":
                return Strip(EtaFunc(params["eta_lo"]), EtaFunc(params["eta_hi"]))
        except KeyError as exc:
            raise DomainSpecError(f"{prim} params missing {exc}") from None
        raise DomainSpecError(f"unknown primitive {prim!r}")
    raise DomainSpecError("tree node needs an 'op' or 'prim' key")


def domain_to_dict(dom: PlanarDomain) -> dict:
    x0, x1, y0, y1 = dom.window
    out = {
        "window": {"x0": x0, "x1": x1, "y0": y0, "y1": y1},
        "mesh": dom.mesh,
        "tree": _tree_to_dict(dom.tree),
    }
    if dom.symmetry != "none":
        out["symmetry"] = dom.symmetry
    return out


def domain_from_dict(d: dict) -> PlanarDomain:
    try:
        w = d["window"]
        window = (float(w["x0"]), float(w["x1"]), float(w["y0"]), float(w["y1"]))
        tree = _tree_from_dict(d["tree"])
    except (KeyError, TypeError) as exc:
        raise DomainSpecError(f"invalid domain document: {exc}") from None
    mesh = float(d.get("mesh", 0.0))
    symmetry = d.get("symmetry", "none")
    return PlanarDomain(tree, window, mesh, symmetry)


def load_domain(path) -> PlanarDomain:
    with open(path, "r", encoding="utf-8") as fh:
        return domain_from_dict(json.load(fh))


def save_domain(dom: PlanarDomain, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(domain_to_dict(dom), fh, indent=2, sort_keys=True)
        fh.write("\n")
