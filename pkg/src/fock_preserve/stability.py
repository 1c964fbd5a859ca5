"""Certification of stability, real-rootedness and the Lee-Yang property.

Univariate questions are settled from the roots (companion eigenvalues,
grouped into numerical clusters so that multiple roots are recognized).
Multivariate questions use restrictions to lines ``t -> P(a + t v)`` with
``a`` real and ``v`` positive: every point of the upper half-plane product is
``a + i v`` for such a pair, so P is stable iff all restrictions are.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .poly import MPoly, eval_many, poly_eval, rotate_vars

DEFAULT_TOL = 1e-9
#: trials per random substream; substream ``c`` is seeded from ``(seed, c)``
CHUNK = 128
_EPS = np.finfo(float).eps
#: relative error assumed for line-restriction coefficients (times the |c| bound)
_COEF_ERR = 64 * _EPS


class Region(str, enum.Enum):
    UPPER = "upper"
    RIGHT = "right"
    REAL = "real"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certification run.

    ``outcome`` is one of ``certified_no`` (with ``witness`` and ``value``),
    ``probably_yes`` (with ``trials`` and ``seed``) or ``certified_yes``
    (with ``method``).
    """

    outcome: str
    witness: tuple[complex, ...] | None = None
    value: complex | None = None
    trials: int | None = None
    seed: int | None = None
    method: str = ""
    note: str = ""

    @property
    def refuted(self) -> bool:
        return self.outcome == "certified_no"

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome, "method": self.method}
        if self.witness is not None:
            out["witness"] = [{"re": z.real, "im": z.imag} for z in self.witness]
        if self.value is not None:
            out["value"] = {"re": self.value.real, "im": self.value.imag}
        if self.trials is not None:
            out["trials"] = self.trials
        if self.seed is not None:
            out["seed"] = self.seed
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict) -> Verdict:
        w = data.get("witness")
        v = data.get("value")
        return cls(
            outcome=data["outcome"],
            witness=None if w is None else tuple(complex(x["re"], x["im"]) for x in w),
            value=None if v is None else complex(v["re"], v["im"]),
            trials=data.get("trials"),
            seed=data.get("seed"),
            method=data.get("method", ""),
            note=data.get("note", ""),
        )


# ---------------------------------------------------------------------------
# univariate roots


def _companion_roots(c: np.ndarray) -> np.ndarray:
    d = len(c) - 1
    if d == 1:
        return np.array([-c[0] / c[1]])
    mat = np.zeros((d, d), dtype=complex)
    mat[1:, :-1] = np.eye(d - 1)
    mat[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(mat)


def _radii(c: np.ndarray, err: np.ndarray, centers: np.ndarray, mults: np.ndarray) -> np.ndarray:
    """Inclusion radius of each cluster.

    ``d * ((|p(C)| + e(C)) / (|lead| prod_l |C - C_l|^m_l))^(1/m)`` where
    ``e(C) = sum err_k |C|^k`` bounds the coefficient and evaluation error.
    """
    d = len(c) - 1
    val = np.abs(np.polyval(c[::-1], centers))
    bound = np.polyval(err[::-1], np.abs(centers))
    gap = np.abs(centers[:, None] - centers[None, :])
    with np.errstate(divide="ignore"):
        log_gap = np.log(gap)
    np.fill_diagonal(log_gap, 0.0)
    log_lead = math.log(abs(c[-1]))
    radii = np.empty(len(centers))
    for i in range(len(centers)):
        num = val[i] + bound[i]
        if num == 0.0:
            radii[i] = 0.0
            continue
        log_den = log_lead + float(np.dot(mults, log_gap[i]))
        radii[i] = d * math.exp((math.log(num) - log_den) / mults[i])
    return radii


def _clusters(c: np.ndarray, err: np.ndarray | None) -> list[tuple[complex, int, float]]:
    """Clusters ``(center, multiplicity, radius)`` of a polynomial with nonzero c[0] and c[-1]."""
    d = len(c) - 1
    if err is None:
        err = np.zeros(d + 1)
    err = np.asarray(err, dtype=float) + 4.0 * (d + 1) * _EPS * np.abs(c)
    roots = _companion_roots(c)
    if not np.all(np.isfinite(roots)):
        raise FloatingPointError("non-finite eigenvalues in root finding")
    groups = [[r] for r in roots]
    while len(groups) > 1:
        centers = np.array([np.mean(g) for g in groups])
        mults = np.array([len(g) for g in groups])
        gap = np.abs(centers[:, None] - centers[None, :])
        np.fill_diagonal(gap, np.inf)
        k, l = np.unravel_index(np.argmin(gap), gap.shape)
        if gap[k, l] == 0.0:
            pair = (k, l)
        else:
            radii = _radii(c, err, centers, mults)
            reach = radii[:, None] + radii[None, :]
            overlap = gap <= reach
            if not overlap.any():
                break
            # merge the overlapping pair that is closest relative to its reach
            ratio = np.where(overlap, gap / reach, np.inf)
            pair = np.unravel_index(np.argmin(ratio), ratio.shape)
        lo, hi = sorted(int(x) for x in pair)
        groups[lo] = groups[lo] + groups[hi]
        del groups[hi]
    # one Newton step on isolated roots; cluster means are left alone
    dc = c[1:] * np.arange(1, d + 1)
    centers = []
    for g in groups:
        r = complex(np.mean(g))
        if len(g) == 1:
            pv = np.polyval(c[::-1], r)
            dv = np.polyval(dc[::-1], r)
            if dv != 0:
                cand = r - pv / dv
                if abs(np.polyval(c[::-1], cand)) < abs(pv):
                    r = complex(cand)
        centers.append(r)
    centers_arr = np.array(centers)
    mults = np.array([len(g) for g in groups])
    radii = _radii(c, err, centers_arr, mults)
    return [(complex(r), int(m), float(rad)) for r, m, rad in zip(centers_arr, mults, radii)]


def root_clusters(coeffs, coeff_err=None, with_radii: bool = False) -> list:
    """Numerical roots of a univariate polynomial grouped as ``(center, multiplicity)``.

    ``coeffs`` are ascending.  Eigenvalues of the companion matrix are merged
    while their inclusion disks overlap; a disk's radius combines the
    Weierstrass correction with the error of evaluating the polynomial (and
    the absolute coefficient errors ``coeff_err`` when given), so a perturbed
    multiple root collapses to one cluster whose center (the mean of its
    members) is well conditioned.  With ``with_radii`` the entries are
    ``(center, multiplicity, radius)``.
    """
    c = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ValueError("polynomial is identically zero")
    lo, hi = int(nz[0]), int(nz[-1])
    out: list = []
    if lo:
        out.append((0j, lo, 0.0))
    if hi > lo:
        err = None if coeff_err is None else np.asarray(coeff_err, dtype=float)[lo: hi + 1]
        out.extend(_clusters(c[lo: hi + 1], err))
    if with_radii:
        return out
    return [(r, m) for r, m, _ in out]


def univariate_roots(p: MPoly) -> list[complex]:
    """All roots of a univariate polynomial, repeated by multiplicity.

    Raises
    ------
    ValueError
        If ``p`` is identically zero or not univariate.
    """
    if p.nvars != 1:
        raise ValueError(f"univariate polynomial expected, got {p.nvars} variables")
    if p.is_zero():
        raise ValueError("polynomial is identically zero")
    out: list[complex] = []
    for center, m in root_clusters(p.coefficients()):
        out.extend([center] * m)
    return out


def _violates(r: complex, region: Region, tol: float, rad: float = 0.0) -> bool:
    """True when the disk of radius ``rad`` about ``r`` lies beyond the margin."""
    margin = tol * (1.0 + abs(r)) + rad
    if region is Region.RIGHT:
        return r.real > margin
    if region is Region.UPPER:
        return r.imag > margin
    return abs(r.imag) > margin


def is_stable_uni(p: MPoly, region: Region | str = Region.UPPER, tol: float = DEFAULT_TOL,
                  radius: float = math.inf) -> Verdict:
    """Decide from the roots whether ``p`` has no zero in the open region.

    For ``Region.REAL`` the question is real-rootedness and the coefficients
    must be real (to ``1e-10`` of the largest one).  Roots of modulus larger
    than ``radius`` are ignored and counted in the verdict note.
    """
    region = Region(region)
    if p.nvars != 1:
        raise ValueError(f"univariate polynomial expected, got {p.nvars} variables")
    if p.is_zero():
        raise ValueError("polynomial is identically zero")
    if region is Region.REAL and not p.is_real(1e-10):
        raise ValueError("real-rootedness is only defined for real coefficients; "
                         "use Region.UPPER for complex polynomials")
    clusters = root_clusters(p.coefficients(), with_radii=True)
    outside = sum(m for r, m, _ in clusters if abs(r) > radius)
    bad = [r for r, m, rad in clusters if abs(r) <= radius and _violates(r, region, tol, rad)]
    note = f"{outside} root(s) outside validated radius {radius:.6g}" if outside else ""
    if bad:
        if region is Region.RIGHT:
            w = max(bad, key=lambda r: r.real)
        else:
            w = max(bad, key=lambda r: abs(r.imag))
            if region is Region.REAL and w.imag < 0:
                w = w.conjugate()
        return Verdict("certified_no", witness=(w,), value=poly_eval(p, [w]),
                       method="companion-roots", note=note)
    return Verdict("certified_yes", method="companion-roots", note=note)


# ---------------------------------------------------------------------------
# multivariate: line restrictions


def _sample_lines(n: int, seed: int, chunk: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([seed, chunk])
    A = rng.standard_cauchy((count, n))
    V = 10.0 ** rng.uniform(-3.0, 3.0, (count, n))
    if chunk == 0:
        # trial 0 probes the diagonal through the origin
        A[0] = 0.0
        V[0] = 1.0
    return A, V


def _batch_roots(coef: np.ndarray) -> np.ndarray:
    """Roots of each row (ascending, nonzero leading) via stacked companion matrices."""
    k, d1 = coef.shape
    d = d1 - 1
    mats = np.zeros((k, d, d), dtype=complex)
    if d > 1:
        mats[:, 1:, :-1] = np.eye(d - 1)
    mats[:, :, -1] = -coef[:, :-1] / coef[:, -1:]
    return np.linalg.eigvals(mats)


_SEGMENT = np.array([0.0, 0.25, 0.5, 0.75])
_PSEUDO_SLACK = 1e3


def _near_real_cluster(coef: np.ndarray, err: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Flag roots joined to the real axis through the coefficient-error pseudo-zero set.

    A perturbed real multiple root drifts off the axis by roughly ``err**(1/m)``, so
    the polynomial stays at the error level along the whole vertical segment below it.
    A genuine root in the upper half-plane does not, and is left for the exact check.
    """
    pts = roots.real[:, :, None] + 1j * roots.imag[:, :, None] * _SEGMENT
    val = np.zeros(pts.shape, dtype=complex)
    bound = np.zeros(pts.shape)
    mag = np.abs(pts)
    for k in range(coef.shape[1] - 1, -1, -1):
        val = val * pts + coef[:, k, None, None]
        bound = bound * mag + err[:, k, None, None]
    with np.errstate(invalid="ignore"):
        return np.all(np.abs(val) <= _PSEUDO_SLACK * bound, axis=2)


class _Restrictor:
    def __init__(self, q: MPoly):
        items = q.items()
        self.q = q
        self.n = q.nvars
        self.exps = np.ascontiguousarray([a for a, _ in items], dtype=np.int64)
        self.coeffs = np.ascontiguousarray([c for _, c in items], dtype=np.complex128)
        self.abscoeffs = np.ascontiguousarray(np.abs(self.coeffs).astype(np.complex128))

    def chunk(self, seed: int, chunk: int, count: int, tol: float, radius: float):
        """Return ``(trial_offset, witness, value)`` for the first failure in the chunk, or None."""
        A, V = _sample_lines(self.n, seed, chunk, count)
        C = kernels.line_restrict_batch(self.exps, self.coeffs, A, V)
        M = kernels.line_restrict_batch(self.exps, self.abscoeffs, np.ascontiguousarray(np.abs(A)), V).real
        d = C.shape[1] - 1
        # effective degree after removing leading coefficients lost to cancellation
        keep = np.abs(C) > 1e-11 * M
        eff = np.where(keep.any(axis=1), d - np.argmax(keep[:, ::-1], axis=1), -1)
        suspects: list[int] = []
        for deg in np.unique(eff):
            rows = np.flatnonzero(eff == deg)
            if deg < 0:
                suspects.extend(rows.tolist())
                continue
            if deg == 0:
                continue
            coef = C[rows, : deg + 1]
            with np.errstate(all="ignore"):
                roots = _batch_roots(coef)
            finite = np.all(np.isfinite(roots), axis=1)
            margin = tol * (1.0 + np.abs(roots))
            hit = (roots.imag > margin) & finite[:, None]
            if np.isfinite(radius):
                pts = np.abs(A[rows, None, :] + roots[:, :, None] * V[rows, None, :])
                hit &= pts.max(axis=2) <= radius
            if hit.any():
                hit &= ~_near_real_cluster(coef, _COEF_ERR * M[rows, : deg + 1], roots)
            suspects.extend(rows[np.any(hit, axis=1)].tolist())
        for row in sorted(suspects):
            found = self._confirm(A[row], V[row], C[row, : eff[row] + 1], _COEF_ERR * M[row, : eff[row] + 1],
                                  tol, radius)
            if found is not None:
                return (row, *found)
        return None

    def _confirm(self, a, v, coef, err, tol, radius):
        if coef.size == 0:
            # the polynomial vanishes on the whole line, in particular at a + i v
            z = a + 1j * v
            val = poly_eval(self.q, z)
            if abs(val) <= 1e-8 * (1.0 + _scale(self.q, z)):
                return tuple(complex(x) for x in z), val
            return None
        try:
            clusters = root_clusters(coef, err, with_radii=True)
        except (FloatingPointError, np.linalg.LinAlgError):
            return None
        # the whole inclusion disk must lie above the margin
        cands = [r for r, _, rad in clusters if _violates(r, Region.UPPER, tol, rad)]
        for t in sorted(cands, key=lambda r: -r.imag):
            z = a + t * v
            if np.max(np.abs(z)) > radius or np.any(z.imag <= 0):
                continue
            val = poly_eval(self.q, z)
            if abs(val) <= 1e-8 * (1.0 + _scale(self.q, z)):
                return tuple(complex(x) for x in z), val
        return None


def _scale(p: MPoly, z) -> float:
    az = np.abs(np.asarray(z, dtype=complex))
    return float(eval_many(MPoly(p.nvars, {a: abs(c) for a, c in p.items()}), az[None, :])[0].real)


def is_stable_multi(p: MPoly, region: Region | str = Region.UPPER, trials: int = 1000,
                    seed: int = 42, tol: float = DEFAULT_TOL, radius: float = math.inf) -> Verdict:
    """Monte Carlo stability test by random line restrictions.

    Trial 0 restricts to the diagonal ``t (1, ..., 1)``; the remaining lines
    have Cauchy-distributed base points and log-uniform directions in
    ``[1e-3, 1e3]``.  The first refuted line (lowest trial index) yields a
    ``certified_no`` verdict whose witness is re-evaluated before being
    reported.  Results depend only on ``(p, region, trials, seed, tol)``.
    """
    region = Region(region)
    if p.is_zero():
        raise ValueError("polynomial is identically zero")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if region is Region.REAL and not p.is_real(1e-10):
        raise ValueError("real stability requires real coefficients")
    if p.nvars == 0:
        return Verdict("certified_yes", method="constant")
    if p.nvars == 1:
        return is_stable_uni(p, Region.UPPER if region is Region.REAL else region, tol, radius)

    q = rotate_vars(p, "to_upper") if region is Region.RIGHT else p
    restrictor = _Restrictor(q)
    n_chunks = -(-trials // CHUNK)
    threads = kernels.max_threads()

    def run(ci: int):
        count = min(CHUNK, trials - ci * CHUNK)
        return restrictor.chunk(seed, ci, count, tol, radius)

    found = None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for wave in range(0, n_chunks, threads):
            ids = list(range(wave, min(wave + threads, n_chunks)))
            results = list(pool.map(run, ids)) if threads > 1 else [run(i) for i in ids]
            for ci, res in zip(ids, results):
                if res is not None:
                    found = (ci * CHUNK + res[0], res[1], res[2])
                    break
            if found is not None:
                break
    method = "line-restriction"
    if found is None:
        return Verdict("probably_yes", trials=trials, seed=seed, method=method)
    index, witness, value = found
    if region is Region.RIGHT:
        witness = tuple(-1j * z for z in witness)
    return Verdict("certified_no", witness=witness, value=value, trials=index + 1, seed=seed,
                   method=method)


def check(p: MPoly, region: Region | str = Region.UPPER, trials: int = 1000, seed: int = 42,
          tol: float = DEFAULT_TOL, radius: float | None = None) -> Verdict:
    """Root-based check for one variable, line restrictions otherwise.

    ``radius=None`` uses the validated radius of a truncated series.
    """
    if radius is None:
        radius = validated_radius(p)
    if p.nvars == 1:
        return is_stable_uni(p, region, tol, radius)
    return is_stable_multi(p, region, trials, seed, tol, radius)


# ---------------------------------------------------------------------------
# series truncations


def validated_radius(f: MPoly, tail_tol: float = 1e-6) -> float:
    """Radius inside which a truncated series is trusted.

    The highest retained homogeneous block stands in for the dropped tail;
    the radius is where its coefficient mass reaches ``tail_tol`` times the
    constant term (or the largest coefficient when the constant vanishes).
    Exact polynomials (no ``max_degree``) have infinite radius.
    """
    if f.max_degree is None or f.is_zero():
        return math.inf
    tv = f.trunc_vars
    top_deg = f.degree(tv)
    if top_deg <= 0:
        return math.inf
    top = math.fsum(abs(c) for a, c in f.items()
                    if (sum(a) if tv is None else sum(a[i] for i in tv)) == top_deg)
    base = abs(f[(0,) * f.nvars]) or max(abs(c) for _, c in f.items())
    return (tail_tol * base / top) ** (1.0 / top_deg)


def lp_approximant(f: MPoly, k: int) -> MPoly:
    """Polynomial approximant ``sum_{gamma <= k} (k)_gamma / k^gamma a_gamma z^gamma``.

    The factor ``(k)_gamma / k^gamma = prod_i prod_{j < gamma_i} (1 - j/k)``
    lies in ``[0, 1]`` and tends to 1, so the approximants converge to ``f``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    out = {}
    for alpha, c in f.items():
        if any(a > k for a in alpha):
            continue
        factor = 1.0
        for a in alpha:
            for j in range(a):
                factor *= 1.0 - j / k
        out[alpha] = c * factor
    return MPoly(f.nvars, out)


def ly_check(f: MPoly, trials: int = 1000, seed: int = 42, tol: float = DEFAULT_TOL,
             radius: float | None = None) -> Verdict:
    """Nonvanishing on the product of open right half-planes."""
    return check(f, Region.RIGHT, trials, seed, tol, radius)
