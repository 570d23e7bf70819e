"""Holomorphic discs through three points of the Clifford torus in CP^2.

Angles are radians. A disc of class ``sum beta_j`` in ``C^n`` with boundary on
``(S^1)^n`` is a product of disc automorphisms, so it passes through three
boundary points exactly when the three points have the same cyclic
orientation in every coordinate. The three Maslov-4 classes of CP^2 reduce to
this problem in three affine charts.
"""

from __future__ import annotations

import cmath
import csv
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

TWO_PI = 2 * math.pi
EPS = 1e-9
RESIDUAL_TOL = 1e-9

CCW, CW, DEGENERATE = "CCW", "CW", "DEGENERATE"
CLASSES = ("b1+b2", "b0+b2", "b0+b1")
LIFT_RULES = ("minimal", "p-centered")


class DegenerateConfiguration(ValueError):
    """Input lies within the genericity tolerance of a degeneracy."""


class NumericalError(ArithmeticError):
    """A constructed disc misses its targets by more than the tolerance."""


def _wrap(x: float) -> float:
    return x % TWO_PI


@dataclass(frozen=True)
class TorusPoint:
    theta1: float
    theta2: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", _wrap(float(self.theta1)))
        object.__setattr__(self, "theta2", _wrap(float(self.theta2)))

    @property
    def angles(self) -> Tuple[float, float]:
        return (self.theta1, self.theta2)

    def unit(self) -> Tuple[float, float]:
        """Coordinates normalized to period one."""
        return (self.theta1 / TWO_PI, self.theta2 / TWO_PI)

    def translate(self, v: Sequence[float]) -> "TorusPoint":
        return TorusPoint(self.theta1 + v[0], self.theta2 + v[1])

    @classmethod
    def parse(cls, text: str) -> "TorusPoint":
        parts = [float(s) for s in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"expected 'theta1,theta2', got {text!r}")
        return cls(*parts)


def _circ_dist(a: float, b: float) -> float:
    d = abs(_wrap(a) - _wrap(b))
    return min(d, TWO_PI - d)


def cyclic_orientation(a: float, b: float, c: float, eps: float = EPS) -> str:
    """Orientation of ``(e^{ia}, e^{ib}, e^{ic})`` on the circle."""
    if min(_circ_dist(a, b), _circ_dist(b, c), _circ_dist(a, c)) < eps:
        return DEGENERATE
    return CCW if _wrap(b - a) < _wrap(c - a) else CW


# --- discs in C^n ----------------------------------------------------------------

@dataclass(frozen=True)
class DiscParams:
    """Per coordinate ``z -> e^{i c_j} (z - a_j) / (1 - conj(a_j) z)``."""

    centers: Tuple[complex, ...]
    phases: Tuple[float, ...]
    reference: Tuple[complex, complex, complex]
    residual: float

    def evaluate(self, z: complex) -> Tuple[complex, ...]:
        return tuple(cmath.exp(1j * c) * (z - a) / (1 - a.conjugate() * z)
                     for a, c in zip(self.centers, self.phases))


REFERENCE_CCW = (1 + 0j, 1j, -1 + 0j)
REFERENCE_CW = (1 + 0j, -1j, -1 + 0j)


def _to_01inf(z1, z2, z3):
    """Matrix of the Moebius map sending ``z1, z2, z3`` to ``0, 1, inf``."""
    return ((z2 - z3, -z1 * (z2 - z3)), (z2 - z1, -z3 * (z2 - z1)))


def _mat_mul(A, B):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def _mat_inv(A):
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))  # projective inverse, determinant irrelevant


def _apply(M, z):
    (a, b), (c, d) = M
    return (a * z + b) / (c * z + d)


def moebius_through(src: Sequence[complex], dst: Sequence[complex]):
    """The unique Moebius map with ``src[k] -> dst[k]``."""
    return _mat_mul(_mat_inv(_to_01inf(*dst)), _to_01inf(*src))


def _automorphism(reference, targets) -> Optional[Tuple[complex, float]]:
    """``(a, c)`` of the disc automorphism through the targets, or None if the
    interpolating Moebius map sends the disc to the exterior."""
    M = moebius_through(reference, targets)
    if abs(_apply(M, 0)) >= 1:
        return None
    (p, q), (r, s) = M
    a = -q / p                       # zero of M
    rot = _apply(M, 1) * (1 - a.conjugate()) / (1 - a)
    return a, cmath.phase(rot)


def _residual(params: DiscParams, targets_per_coord) -> float:
    worst = 0.0
    for k, z in enumerate(params.reference):
        vals = params.evaluate(z)
        for j, v in enumerate(vals):
            worst = max(worst, abs(v - targets_per_coord[j][k]))
    return worst


def _targets(points: Sequence[Sequence[float]]):
    n = len(points[0])
    return [tuple(cmath.exp(1j * pt[j]) for pt in points) for j in range(n)]


def disc_orientations(points: Sequence[Sequence[float]], eps: float = EPS) -> List[str]:
    p, q, r = points
    out = [cyclic_orientation(p[j], q[j], r[j], eps) for j in range(len(p))]
    if DEGENERATE in out:
        raise DegenerateConfiguration(f"coincident coordinates in {points}")
    return out


def _build(reference, targets) -> Optional[DiscParams]:
    centers, phases = [], []
    for tj in targets:
        got = _automorphism(reference, tj)
        if got is None:
            return None
        centers.append(got[0])
        phases.append(got[1])
    params = DiscParams(tuple(centers), tuple(phases), tuple(reference), 0.0)
    res = _residual(params, targets)
    if res > RESIDUAL_TOL:
        raise NumericalError(f"disc residual {res:.3e} exceeds {RESIDUAL_TOL:g}")
    return DiscParams(params.centers, params.phases, params.reference, res)


def solve_disc(points: Sequence[Sequence[float]], eps: float = EPS) -> Optional[DiscParams]:
    """The disc through three points of ``(S^1)^n`` at the reference marks, if any.

    Existence is decided by the orientation predicate; the construction then
    uses the reference marks ``(1, i, -1)`` for counterclockwise triples and
    ``(1, -i, -1)`` for clockwise ones.
    """
    ors = disc_orientations(points, eps)
    if len(set(ors)) != 1:
        return None
    ref = REFERENCE_CCW if ors[0] == CCW else REFERENCE_CW
    params = _build(ref, _targets(points))
    if params is None:
        raise NumericalError("orientation predicate and construction disagree")
    return params


def construct_disc(points: Sequence[Sequence[float]]) -> Optional[DiscParams]:
    """Existence decided by the construction alone: a reference triple works for every coordinate."""
    targets = _targets(points)
    for ref in (REFERENCE_CCW, REFERENCE_CW):
        params = _build(ref, targets)
        if params is not None:
            return params
    return None


# --- CP^2 census -----------------------------------------------------------------

def chart_coords(point: TorusPoint, cls: str) -> Tuple[float, float]:
    """Boundary coordinates of ``point`` in the affine chart carrying discs of ``cls``."""
    t1, t2 = point.angles
    if cls == "b1+b2":
        return (t1, t2)
    if cls == "b0+b2":
        return (_wrap(-t1), _wrap(t2 - t1))
    if cls == "b0+b1":
        return (_wrap(t1 - t2), _wrap(-t2))
    raise ValueError(f"unknown class {cls!r}")


def _in_triangle(base: Tuple[float, float], y: Tuple[float, float], eps: float) -> bool:
    d1 = (y[0] - base[0]) % 1.0
    d2 = (y[1] - base[1]) % 1.0
    if min(d1, 1 - d1, d2, 1 - d2, abs(d1 - d2)) < eps:
        raise DegenerateConfiguration("point on the boundary of a bounding triangle")
    return d1 <= d2


def t_pqr(p: TorusPoint, q: TorusPoint, r: TorusPoint, eps: float = EPS) -> int:
    """Mod-2 triple intersection of the triangles ``Q_x = {x + (s, t) : 0 <= s <= t <= 1}``."""
    u = eps / TWO_PI
    P, Q, R = p.unit(), q.unit(), r.unit()
    a = _in_triangle(P, R, u) and _in_triangle(Q, R, u)
    b = _in_triangle(P, Q, u) and _in_triangle(R, Q, u)
    c = _in_triangle(Q, P, u) and _in_triangle(R, P, u)
    return (int(a) + int(b) + int(c)) % 2


def _minrep(d: float) -> float:
    """Representative of ``d mod 1`` in ``(-1/2, 1/2]``."""
    d = d % 1.0
    return d - 1.0 if d > 0.5 else d


# the three boundary circles through a point, as level sets of linear functions
_CIRCLE_FUNCS = (
    lambda y: y[1],          # horizontal, direction of d beta_1
    lambda y: y[0],          # vertical, direction of d beta_2
    lambda y: y[1] - y[0],   # diagonal, direction of d beta_0
)


def _crossings(x, a, b, eps: float) -> int:
    """Intersections of the three circles through ``x`` with the segment ``a -> b`` (lifted)."""
    count = 0
    for g in _CIRCLE_FUNCS:
        ga, gb = g(a), g(b)
        if abs(gb - ga) < eps:
            raise DegenerateConfiguration("edge parallel to a boundary circle")
        lo, hi = min(ga, gb), max(ga, gb)
        gx = g(x)
        n_lo = math.ceil(lo - gx)
        n_hi = math.floor(hi - gx)
        for n in (n_lo, n_hi):
            if min(abs(gx + n - lo), abs(gx + n - hi)) < eps:
                raise DegenerateConfiguration("circle passes through a triangle vertex")
        count += max(0, n_hi - n_lo + 1)
    return count


def triangle_vertices(p: TorusPoint, q: TorusPoint, r: TorusPoint, rule: str = "minimal"):
    """Lifted edges ``(q->r, r->p, p->q)`` as pairs of points in R^2 (period one)."""
    P, Q, R = p.unit(), q.unit(), r.unit()

    def step(a, b):
        return (a[0] + _minrep(b[0] - a[0]), a[1] + _minrep(b[1] - a[1]))

    if rule == "minimal":
        return ((Q, step(Q, R)), (R, step(R, P)), (P, step(P, Q)))
    if rule == "p-centered":
        Ql, Rl = step(P, Q), step(P, R)
        return ((Ql, Rl), (Rl, P), (P, Ql))
    raise ValueError(f"unknown lift rule {rule!r}")


def biran_cornea(p: TorusPoint, q: TorusPoint, r: TorusPoint, rule: str = "minimal",
                 eps: float = EPS) -> Dict:
    """``n_x`` for each vertex and the relation ``T_pqr + n_q n_r = 1 (mod 2)``."""
    u = eps / TWO_PI
    (qa, qb), (ra, rb), (pa, pb) = triangle_vertices(p, q, r, rule)
    n_p = _crossings(p.unit(), qa, qb, u) % 2
    n_q = _crossings(q.unit(), ra, rb, u) % 2
    n_r = _crossings(r.unit(), pa, pb, u) % 2
    t = t_pqr(p, q, r, eps)
    return {"n_p": n_p, "n_q": n_q, "n_r": n_r, "t_pqr": t,
            "relation": (t + n_q * n_r) % 2 == 1}


@dataclass
class CensusReport:
    exists: Dict[str, bool]
    orientation: Dict[str, Optional[str]]
    total: int
    cyclic: int
    t_pqr: int
    combined: int
    n_p: int
    n_q: int
    n_r: int
    relation: bool

    def to_dict(self) -> Dict:
        return asdict(self)


def census(p: TorusPoint, q: TorusPoint, r: TorusPoint, eps: float = EPS,
           convention: str = CCW) -> CensusReport:
    """Per-class disc existence, counts and the mod-2 invariants for one triple."""
    exists, orient = {}, {}
    for cls in CLASSES:
        ors = disc_orientations([chart_coords(x, cls) for x in (p, q, r)], eps)
        ok = ors[0] == ors[1]
        exists[cls] = ok
        orient[cls] = ors[0] if ok else None
    total = sum(exists.values())
    cyclic = sum(1 for c in CLASSES if exists[c] and orient[c] == convention)
    bc = biran_cornea(p, q, r, "minimal", eps)
    t = bc["t_pqr"]
    return CensusReport(exists, orient, total, cyclic, t, (cyclic + t) % 2,
                        bc["n_p"], bc["n_q"], bc["n_r"], bc["relation"])


# --- sampling --------------------------------------------------------------------

def random_point(rng: random.Random) -> TorusPoint:
    return TorusPoint(rng.random() * TWO_PI, rng.random() * TWO_PI)


@dataclass
class SampleStats:
    samples: int = 0
    rejected: int = 0
    total_hist: Dict[int, int] = field(default_factory=dict)
    cyclic_hist: Dict[int, int] = field(default_factory=dict)
    combined_hist: Dict[int, int] = field(default_factory=dict)
    combined_cw_hist: Dict[int, int] = field(default_factory=dict)
    relation_fail: Dict[str, int] = field(default_factory=dict)
    relation_disagree: int = 0
    disc_mismatch: int = 0
    max_residual: float = 0.0
    discs_built: int = 0
    class_patterns: Dict[str, List[float]] = field(default_factory=dict)
    cyclic_examples: Dict[int, List[float]] = field(default_factory=dict)

    def merge(self, other: "SampleStats") -> None:
        self.samples += other.samples
        self.rejected += other.rejected
        for name in ("total_hist", "cyclic_hist", "combined_hist", "combined_cw_hist",
                     "relation_fail"):
            mine = getattr(self, name)
            for k, v in getattr(other, name).items():
                mine[k] = mine.get(k, 0) + v
        self.relation_disagree += other.relation_disagree
        self.disc_mismatch += other.disc_mismatch
        self.max_residual = max(self.max_residual, other.max_residual)
        self.discs_built += other.discs_built
        for k, v in other.class_patterns.items():
            self.class_patterns.setdefault(k, v)
        for k, v in other.cyclic_examples.items():
            self.cyclic_examples.setdefault(k, v)


def _bump(d: Dict, k) -> None:
    d[k] = d.get(k, 0) + 1


def _chunk(args) -> SampleStats:
    seed, start, count = args
    rng = random.Random(f"{seed}:{start}")
    st = SampleStats()
    done = 0
    while done < count:
        p, q, r = random_point(rng), random_point(rng), random_point(rng)
        try:
            rep = census(p, q, r)
            rep_cw = census(p, q, r, convention=CW)
            alt = biran_cornea(p, q, r, "p-centered")
            discs = [solve_disc([chart_coords(x, c) for x in (p, q, r)]) for c in CLASSES]
            built = [construct_disc([chart_coords(x, c) for x in (p, q, r)]) for c in CLASSES]
        except DegenerateConfiguration:
            st.rejected += 1
            continue
        done += 1
        st.samples += 1
        _bump(st.total_hist, rep.total)
        _bump(st.cyclic_hist, rep.cyclic)
        _bump(st.combined_hist, rep.combined)
        _bump(st.combined_cw_hist, rep_cw.combined)
        if not rep.relation:
            _bump(st.relation_fail, "minimal")
        if not alt["relation"]:
            _bump(st.relation_fail, "p-centered")
        if alt["relation"] != rep.relation:
            st.relation_disagree += 1
        triple = [p.theta1, p.theta2, q.theta1, q.theta2, r.theta1, r.theta2]
        for c, d, b in zip(CLASSES, discs, built):
            if (d is None) != (not rep.exists[c]) or (b is None) != (d is None):
                st.disc_mismatch += 1
            for x in (d, b):
                if x is not None:
                    st.discs_built += 1
                    st.max_residual = max(st.max_residual, x.residual)
        pattern = "".join("1" if rep.exists[c] else "0" for c in CLASSES)
        st.class_patterns.setdefault(pattern, triple)
        st.cyclic_examples.setdefault(rep.cyclic, triple)
    return st


def sample_census(n: int, seed: int = 0, threads: int = 1, chunk: int = 1000) -> SampleStats:
    """Census statistics over ``n`` generic triples; identical for any thread count."""
    jobs = [(seed, s, min(chunk, n - s)) for s in range(0, n, chunk)]
    total = SampleStats()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    for part in parts:
        total.merge(part)
    return total


def invariance_witnesses(stats: SampleStats) -> Dict:
    """Two triples with different per-class counts and two with different cyclic counts."""
    out = {}
    pats = sorted(stats.class_patterns)
    if len(pats) >= 2:
        out["per_class"] = [{"pattern": k, "triple": stats.class_patterns[k]} for k in pats[:2]]
    cyc = sorted(stats.cyclic_examples)
    if len(cyc) >= 2:
        out["cyclic"] = [{"cyclic": k, "triple": stats.cyclic_examples[k]} for k in cyc[:2]]
    return out


# --- region map ------------------------------------------------------------------

DEFAULT_P = TorusPoint(0.0, 0.0)
DEFAULT_Q = TorusPoint(2.1, 4.3)

FILL = {(0, 0): "#ffffff", (2, 0): "#9ecae1", (2, 1): "#3182bd"}
FILL_OTHER = "#e6550d"
FILL_DEGENERATE = "#bdbdbd"


@dataclass
class RegionMap:
    p: TorusPoint
    q: TorusPoint
    resolution: int
    cells: List[List[Optional[CensusReport]]]

    def value_pairs(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for row in self.cells:
            for c in row:
                if c is not None:
                    _bump(out, (c.total, c.cyclic))
        return out

    def combined_values(self) -> set:
        return {c.combined for row in self.cells for c in row if c is not None}

    def degenerate_cells(self) -> int:
        return sum(1 for row in self.cells for c in row if c is None)

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "j", "r_theta1", "r_theta2", "degenerate", "b1+b2", "b0+b2",
                        "b0+b1", "total", "cyclic", "t_pqr", "combined"])
            for j, row in enumerate(self.cells):
                for i, c in enumerate(row):
                    t1, t2 = self.center(i, j)
                    if c is None:
                        w.writerow([i, j, f"{t1:.12g}", f"{t2:.12g}", 1] + [""] * 7)
                    else:
                        w.writerow([i, j, f"{t1:.12g}", f"{t2:.12g}", 0]
                                   + [int(c.exists[k]) for k in CLASSES]
                                   + [c.total, c.cyclic, c.t_pqr, c.combined])

    def write_svg(self, path: str, cell_px: int = 4) -> None:
        n = self.resolution
        size = n * cell_px
        parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                 f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
        for j, row in enumerate(self.cells):
            y = (n - 1 - j) * cell_px  # theta2 grows upward
            for i, c in enumerate(row):
                if c is None:
                    fill = FILL_DEGENERATE
                else:
                    fill = FILL.get((c.total, c.cyclic), FILL_OTHER)
                parts.append(f'<rect x="{i * cell_px}" y="{y}" width="{cell_px}" '
                             f'height="{cell_px}" fill="{fill}"/>')
        for pt, color in ((self.p, "#000000"), (self.q, "#d62728")):
            cx = pt.theta1 / TWO_PI * size
            cy = size - pt.theta2 / TWO_PI * size
            parts.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{max(2, cell_px)}" fill="{color}"/>')
        parts.append("</svg>")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(parts) + "\n")

    def center(self, i: int, j: int) -> Tuple[float, float]:
        step = TWO_PI / self.resolution
        return ((i + 0.5) * step, (j + 0.5) * step)


def _region_rows(args):
    p, q, resolution, rows = args
    step = TWO_PI / resolution
    out = []
    for j in rows:
        row = []
        for i in range(resolution):
            r = TorusPoint((i + 0.5) * step, (j + 0.5) * step)
            try:
                row.append(census(p, q, r))
            except DegenerateConfiguration:
                row.append(None)
        out.append(row)
    return out


def region_map(p: TorusPoint = DEFAULT_P, q: TorusPoint = DEFAULT_Q, resolution: int = 64,
               threads: int = 1) -> RegionMap:
    """Census over cell centers ``r`` of a ``resolution x resolution`` grid; degenerate cells are None."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    if min(_circ_dist(p.theta1, q.theta1), _circ_dist(p.theta2, q.theta2),
           _circ_dist(p.theta2 - p.theta1, q.theta2 - q.theta1)) < EPS:
        raise DegenerateConfiguration("p and q share a boundary circle")
    bands = [list(range(j, min(j + 16, resolution))) for j in range(0, resolution, 16)]
    jobs = [(p, q, resolution, b) for b in bands]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_region_rows, jobs))
    else:
        parts = [_region_rows(j) for j in jobs]
    cells = [row for part in parts for row in part]
    return RegionMap(p, q, resolution, cells)


def line_predicate(p: TorusPoint, q: TorusPoint, r: TorusPoint) -> bool:
    """Chart-free existence test for ``b0+b2`` using the values of ``x`` and ``y - x`` at the points."""
    a = cyclic_orientation(p.theta1, q.theta1, r.theta1)
    b = cyclic_orientation(p.theta2 - p.theta1, q.theta2 - q.theta1, r.theta2 - r.theta1)
    if DEGENERATE in (a, b):
        raise DegenerateConfiguration("coincident line values")
    return a != b
