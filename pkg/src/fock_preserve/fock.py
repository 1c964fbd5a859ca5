"""Weighted Bargmann-Fock spaces.

``F_beta`` consists of entire functions with
``||f||_beta^2 = sum_alpha alpha!/beta^alpha |a_alpha|^2``; its reproducing
kernel is ``exp(sum_j beta_j z_j conj(w_j))`` and the norm is the ``L^2`` norm
for the Gaussian probability measure ``d sigma_beta`` under which each
coordinate has ``E|z_j|^2 = 1/beta_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence, Union

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .operators import LinOp, apply_op, symbol
from .poly import MPoly, MultiIndex, monomial_value, multi_factorial, multi_indices


@dataclass(frozen=True)
class Weight:
    """Strictly positive weight vector.

    ``a <= b`` compares coordinate-wise; ``a.ll(b)`` is the strict version
    (every coordinate of ``a`` smaller than the one of ``b``).
    """

    beta: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(b) for b in self.beta)
        if not vals:
            raise ValueError("weight must have at least one entry")
        if not all(math.isfinite(b) and b > 0 for b in vals):
            raise ValueError(f"weights must be finite and strictly positive, got {vals}")
        object.__setattr__(self, "beta", vals)

    @classmethod
    def of(cls, value: WeightLike, n: int | None = None) -> Weight:
        """Coerce a scalar (broadcast to ``n`` entries), sequence or Weight."""
        if isinstance(value, Weight):
            w = value
        elif np.isscalar(value):
            w = cls((float(value),) * (1 if n is None else n))
        else:
            w = cls(tuple(np.asarray(value, dtype=float).ravel()))
        if n is not None and len(w) != n:
            raise ValueError(f"weight has {len(w)} entries, expected {n}")
        return w

    def __len__(self):
        return len(self.beta)

    def __iter__(self):
        return iter(self.beta)

    def __getitem__(self, i):
        return self.beta[i]

    def __le__(self, other: Weight) -> bool:
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def __ge__(self, other: Weight) -> bool:
        return other <= self

    def ll(self, other: Weight) -> bool:
        return len(self) == len(other) and all(a < b for a, b in zip(self, other))

    def scaled(self, c: float) -> Weight:
        return Weight(tuple(c * b for b in self.beta))

    def concat(self, other: Weight) -> Weight:
        """``self (+) other``: the weight of the product space."""
        return Weight(self.beta + other.beta)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.beta)

    def to_json(self) -> list:
        return list(self.beta)


WeightLike = Union[Weight, float, Sequence[float]]


@lru_cache(maxsize=65536)
def _weight_fraction(alpha: MultiIndex, beta: tuple[float, ...]) -> Fraction:
    out = Fraction(multi_factorial(alpha))
    for a, b in zip(alpha, beta):
        if a:
            out /= Fraction(b) ** a
    return out


def monomial_norm_sq(alpha: Sequence[int], beta: WeightLike) -> float:
    """``alpha! / beta^alpha`` computed exactly and rounded once."""
    alpha = tuple(int(a) for a in alpha)
    beta = Weight.of(beta, len(alpha))
    return float(_weight_fraction(alpha, beta.beta))


def fock_norm_sq(f: MPoly, beta: WeightLike) -> float:
    """``sum alpha!/beta^alpha |a_alpha|^2``."""
    beta = Weight.of(beta, f.nvars)
    return math.fsum(monomial_norm_sq(a, beta) * abs(c) ** 2 for a, c in f.items())


def fock_norm(f: MPoly, beta: WeightLike) -> float:
    return math.sqrt(fock_norm_sq(f, beta))


def fock_inner(f: MPoly, g: MPoly, beta: WeightLike) -> complex:
    """``<f, g>_beta = sum alpha!/beta^alpha a_alpha conj(b_alpha)`` (conjugate-linear in ``g``)."""
    if f.nvars != g.nvars:
        raise ValueError(f"nvars mismatch: {f.nvars} vs {g.nvars}")
    beta = Weight.of(beta, f.nvars)
    gt = g.terms
    re, im = [], []
    for a, c in f.items():
        d = gt.get(a)
        if d is None:
            continue
        t = monomial_norm_sq(a, beta) * c * d.conjugate()
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def kernel(w: Sequence[complex], beta: WeightLike, degree: int) -> MPoly:
    """``e_beta(z, conj w) = exp(sum beta_j z_j conj(w_j))`` truncated at total degree ``degree``."""
    w = [complex(x) for x in w]
    beta = Weight.of(beta, len(w))
    terms = {}
    for alpha in multi_indices(len(w), degree):
        coeff = monomial_value([b * x.conjugate() for b, x in zip(beta, w)], alpha) / multi_factorial(alpha)
        terms[alpha] = coeff
    return MPoly(len(w), terms, degree)


def reproducing_eval(f: MPoly, w: Sequence[complex], beta: WeightLike) -> complex:
    """``<f, e_beta(., conj w)>_beta`` with the kernel truncated at ``deg f``.

    The weight of each term, ``alpha!/beta^alpha`` times the kernel's
    ``beta^alpha/alpha!``, is formed in exact rational arithmetic, so the sum
    reproduces ``poly_eval(f, w)`` bit for bit.
    """
    w = [complex(x) for x in w]
    if len(w) != f.nvars:
        raise ValueError(f"point has {len(w)} coordinates, polynomial has {f.nvars} variables")
    beta = Weight.of(beta, f.nvars)
    total = 0j
    for alpha, c in f.items():
        norm_w = _weight_fraction(alpha, beta.beta)
        kern_w = 1 / norm_w  # beta^alpha / alpha!
        # conj of the kernel coefficient conj(w)^alpha is w^alpha
        total += c * float(norm_w * kern_w) * monomial_value(w, alpha)
    return total


def gaussian_pair(gamma: Sequence[int], delta: Sequence[int], alpha: WeightLike) -> float:
    """``int w^gamma conj(w)^delta d sigma_alpha(w)``: ``gamma!/alpha^gamma`` if equal, else 0."""
    gamma = tuple(int(g) for g in gamma)
    delta = tuple(int(d) for d in delta)
    if len(gamma) != len(delta):
        raise ValueError("multi-indices have different lengths")
    if gamma != delta:
        return 0.0
    return monomial_norm_sq(gamma, Weight.of(alpha, len(gamma)))


# ---------------------------------------------------------------------------
# integral representation


@dataclass(frozen=True)
class GaussQuad:
    """Quadrature for ``d sigma_alpha``: ``exact`` (polynomials) or ``montecarlo``."""

    mode: str = "exact"
    samples: int = 20000
    seed: int = 42

    def __post_init__(self):
        if self.mode not in ("exact", "montecarlo"):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if self.mode == "montecarlo" and self.samples < 2:
            raise ValueError("Monte Carlo needs at least two samples")

    @classmethod
    def exact(cls) -> GaussQuad:
        return cls("exact")

    @classmethod
    def monte_carlo(cls, samples: int = 20000, seed: int = 42) -> GaussQuad:
        return cls("montecarlo", samples, seed)


@dataclass(frozen=True)
class IntegralRep:
    """Result of the integral representation; ``stderr`` is set in Monte Carlo mode."""

    poly: MPoly
    mode: str
    stderr: Mapping[MultiIndex, float] | None = None
    samples: int | None = None
    seed: int | None = None
    warnings: tuple[str, ...] = ()

    def agrees_with(self, other: MPoly, rtol: float = 1e-12, nsigma: float = 4.0) -> bool:
        """Exact mode: coefficient-wise relative agreement; Monte Carlo: within ``nsigma`` standard errors."""
        keys = set(self.poly.terms) | set(other.terms)
        if self.mode == "exact":
            scale = max([abs(c) for _, c in other.items()] + [1e-300])
            return all(abs(self.poly[k] - other[k]) <= rtol * scale for k in keys)
        se = self.stderr or {}
        # the floor covers integrands that are constant up to rounding, where the sample error vanishes
        return all(abs(self.poly[k] - other[k]) <= nsigma * se.get(k, 0.0) + 1e-10 * (1.0 + abs(other[k]))
                   for k in keys)

    def to_json(self) -> dict:
        out = {"mode": self.mode, "result": self.poly.to_json(), "warnings": list(self.warnings)}
        if self.stderr is not None:
            out["stderr"] = [{"alpha": list(k), "se": v} for k, v in sorted(self.stderr.items())]
            out["samples"] = self.samples
            out["seed"] = self.seed
        return out


def sample_gaussian(alpha: WeightLike, samples: int, seed: int) -> np.ndarray:
    """Draws from ``d sigma_alpha``: independent real and imaginary parts of variance ``1/(2 alpha_j)``."""
    a = Weight.of(alpha).array
    rng = np.random.default_rng(seed)
    sd = np.sqrt(1.0 / (2.0 * a))
    return rng.normal(size=(samples, len(a))) * sd + 1j * rng.normal(size=(samples, len(a))) * sd


def _power_table(W: np.ndarray, top: int) -> np.ndarray:
    """``out[k, :, j] = W[:, j] ** k`` for ``k <= top`` by repeated multiplication."""
    out = np.empty((top + 1,) + W.shape, dtype=complex)
    out[0] = 1.0
    for k in range(1, top + 1):
        out[k] = out[k - 1] * W
    return out


@lru_cache(maxsize=2)
def _sample_powers(alpha: tuple[float, ...], samples: int, seed: int, top: int):
    # repeated calls with one quadrature share the draw; arrays are frozen against mutation
    powers = _power_table(sample_gaussian(alpha, samples, seed), top)
    conj_powers = np.conj(powers)
    powers.flags.writeable = False
    conj_powers.flags.writeable = False
    return powers, conj_powers


def _monomials(powers: np.ndarray, alpha: MultiIndex) -> np.ndarray:
    val = np.ones(powers.shape[1], dtype=complex)
    for j, k in enumerate(alpha):
        if k:
            val = val * powers[k, :, j]
    return val


def apply_integral_rep(T: LinOp, f: MPoly, alpha: WeightLike, quad: GaussQuad | None = None,
                       degree: int | None = None) -> IntegralRep:
    """``T(f)(z) = int f(w) G_T(z, alpha conj w) d sigma_alpha(w)``.

    The symbol is truncated at w-degree ``degree`` (default ``deg f``).  In
    exact mode the integrand is expanded and every monomial pair is integrated
    with :func:`gaussian_pair`; in Monte Carlo mode each output coefficient is
    a sample mean with its standard error.
    """
    quad = quad or GaussQuad.exact()
    if f.nvars != T.n_in:
        raise ValueError(f"operator takes {T.n_in} variables, polynomial has {f.nvars}")
    alpha = Weight.of(alpha, T.n_in)
    fdeg = max(f.degree(), 0)
    D = fdeg if degree is None else degree
    notes = []
    if D < fdeg:
        notes.append(f"symbol truncated at degree {D} below deg f = {fdeg}; higher terms of f are dropped")
    G = symbol(T, D)
    m = T.m_out
    # group symbol coefficients by their w exponent, already scaled by alpha^delta
    by_delta: dict[MultiIndex, dict[MultiIndex, complex]] = {}
    for key, c in G.poly.items():
        gam, delta = key[:m], key[m:]
        scale = math.prod(a ** d for a, d in zip(alpha, delta))
        by_delta.setdefault(delta, {})[gam] = c * scale
    if quad.mode == "exact":
        out: dict[MultiIndex, complex] = {}
        for eps, a in f.items():
            for delta, row in by_delta.items():
                pair = gaussian_pair(eps, delta, alpha)
                if pair == 0.0:
                    continue
                for gam, c in row.items():
                    out[gam] = out.get(gam, 0j) + a * c * pair
        return IntegralRep(MPoly(m, out), "exact", warnings=tuple(notes))

    top = max([8, fdeg] + [sum(d) for d in by_delta])
    powers, conj_powers = _sample_powers(alpha.beta, quad.samples, quad.seed, top)
    fvals = np.zeros(quad.samples, dtype=complex)
    for eps, a in f.items():
        fvals += a * _monomials(powers, eps)
    deltas = list(by_delta)
    gammas = sorted({g for row in by_delta.values() for g in row})
    gidx = {g: i for i, g in enumerate(gammas)}
    C = np.zeros((len(gammas), len(deltas)), dtype=complex)
    for j, delta in enumerate(deltas):
        for gam, c in by_delta[delta].items():
            C[gidx[gam], j] = c
    # per-sample integrands for each w-monomial; output coefficients are the combinations X @ C.T
    X = np.empty((quad.samples, len(deltas)), dtype=complex)
    for j, d in enumerate(deltas):
        X[:, j] = fvals * _monomials(conj_powers, d)
    mu = X.mean(axis=0)
    X -= mu
    cov = (X.T @ X.conj()) / (quad.samples - 1)
    mean = C @ mu
    var = np.einsum("gj,jk,gk->g", C, cov, C.conj()).real
    if not np.all(np.isfinite(var)):
        notes.append("non-finite sample variance; Monte Carlo estimate unreliable")
    se = np.sqrt(var / quad.samples)
    poly = MPoly(m, {g: complex(mean[i]) for g, i in gidx.items()})
    stderr = {g: float(se[i]) for g, i in gidx.items()}
    return IntegralRep(poly, "montecarlo", stderr, quad.samples, quad.seed, tuple(notes))


@dataclass(frozen=True)
class GBound:
    lhs: float
    rhs: float
    holds: bool
    degree: int
    symbol_norm: float
    f_norm: float

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "degree": self.degree,
                "symbol_norm": self.symbol_norm, "f_norm": self.f_norm}


def verify_g_bound(T: LinOp, f: MPoly, alpha: WeightLike, beta: WeightLike, degree: int | None = None) -> GBound:
    """Compare ``||T f||_beta`` with ``||G_T(z, alpha w)||_{beta (+) alpha} ||f||_alpha``.

    Both sides are finite sums at truncation ``degree`` (default ``deg f``);
    the symbol norm grows with the degree when the full symbol is not in the
    product space, so the degree is reported with the values.
    """
    alpha = Weight.of(alpha, T.n_in)
    beta = Weight.of(beta, T.m_out)
    D = max(f.degree(), 0) if degree is None else degree
    lhs = fock_norm(apply_op(T, f), beta)
    G = symbol(T, D)
    m = T.m_out
    H = G.poly.map_coeffs(lambda a, c: c * math.prod(x ** d for x, d in zip(alpha, a[m:])))
    sn = fock_norm(H, beta.concat(alpha))
    fn = fock_norm(f, alpha)
    rhs = sn * fn
    return GBound(lhs, rhs, lhs <= rhs * (1 + 1e-9), D, sn, fn)


# ---------------------------------------------------------------------------
# growth constants and Gaussian membership


@dataclass(frozen=True, eq=False)
class GaussianForm:
    """``scale * exp(sum_ij A_ij z_i z_j)`` for a symmetric matrix ``A``."""

    A: np.ndarray
    scale: complex = 1.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        if A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        if not np.allclose(A, A.T, rtol=1e-12, atol=1e-14):
            raise ValueError("A must be symmetric")
        if np.all(A.imag == 0):
            A = A.real
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "scale", complex(self.scale))

    @classmethod
    def exp_half_square(cls, a: float) -> GaussianForm:
        """``exp(a z^2 / 2)``."""
        return cls(np.array([[a / 2.0]]))

    @property
    def nvars(self) -> int:
        return self.A.shape[0]

    def __call__(self, *z) -> complex:
        z = np.asarray(z, dtype=complex).ravel()
        return complex(self.scale * np.exp(z @ self.A @ z))

    def series(self, degree: int) -> MPoly:
        """Taylor polynomial of total degree ``<= degree``."""
        n = self.nvars
        q = MPoly(n)
        for i in range(n):
            for j in range(n):
                if self.A[i, j]:
                    a = [0] * n
                    a[i] += 1
                    a[j] += 1
                    q = q + MPoly(n, {tuple(a): complex(self.A[i, j])})
        term = MPoly.constant(n, self.scale)
        total = term
        for k in range(1, degree // 2 + 1):
            term = (term * q).scale(1.0 / k)
            total = total + term
        return MPoly(n, total.terms, degree)

    def to_json(self) -> dict:
        A = np.asarray(self.A)
        out = {"kind": "gaussian", "matrix": np.real(A).tolist()}
        if np.iscomplexobj(A):
            out["matrix_im"] = np.imag(A).tolist()
        out["scale"] = self.scale.real if self.scale.imag == 0 else {"re": self.scale.real, "im": self.scale.imag}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> GaussianForm:
        A = np.asarray(data["matrix"], dtype=float)
        if data.get("matrix_im") is not None:
            A = A + 1j * np.asarray(data["matrix_im"], dtype=float)
        s = data.get("scale", 1.0)
        scale = complex(s["re"], s.get("im", 0.0)) if isinstance(s, Mapping) else complex(s)
        return cls(A, scale)


def _scaled_matrix(A: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    d = 1.0 / np.sqrt(alpha)
    return d[:, None] * A * d[None, :]


def gaussian_growth(g: GaussianForm, alpha: WeightLike) -> float:
    """``sup_z Re(z^T A z) / sum alpha_j |z_j|^2``, the largest singular value of ``D^-1/2 A D^-1/2``."""
    a = Weight.of(alpha, g.nvars).array
    return float(np.linalg.svd(_scaled_matrix(np.asarray(g.A), a), compute_uv=False)[0])


def _poly_radius(g: MPoly, alpha: np.ndarray) -> np.ndarray:
    d = max(g.degree(), 1)
    return 2.0 * np.sqrt(d / alpha) + 2.0 / np.sqrt(alpha)


def m_alpha(g: MPoly | GaussianForm, alpha: WeightLike, seed: int = 0) -> float:
    """``M_alpha(g) = sup_z exp(-sum alpha_j |z_j|^2 / 2) |g(z)|``.

    Gaussian forms are decided spectrally: the supremum is ``|scale|`` when
    the largest singular value of ``D_alpha^-1/2 A D_alpha^-1/2`` is at most
    1/2 and infinite otherwise.  Polynomials are maximized numerically: a
    scrambled Sobol sample of the polydisk of radius ``2 sqrt(d/alpha_j) +
    2/sqrt(alpha_j)`` (beyond which every term has decayed) seeds Nelder-Mead
    refinements of ``log|g| - sum alpha |z|^2 / 2``.
    """
    if isinstance(g, GaussianForm):
        s = gaussian_growth(g, alpha)
        return abs(g.scale) if s <= 0.5 * (1 + 1e-12) else math.inf
    if not isinstance(g, MPoly):
        raise TypeError(f"unsupported type for m_alpha: {type(g).__name__}")
    n = g.nvars
    a = Weight.of(alpha, n).array
    if g.is_zero():
        return 0.0
    if g.degree() == 0:
        return abs(g[(0,) * n])
    items = g.items()
    exps = np.array([e for e, _ in items], dtype=float)
    coeffs = np.array([c for _, c in items], dtype=complex)

    def objective(x):
        # x = (r_1..r_n, theta_1..theta_n), r may be negative (equivalent to a phase shift)
        x = np.atleast_2d(x)
        r, th = x[:, :n], x[:, n:]
        with np.errstate(divide="ignore"):
            logr = np.log(np.abs(r))
        phase = np.where(r < 0, np.pi, 0.0) + th
        # log|c z^e| per term, then a stable sum of complex terms
        logmag = logr @ exps.T
        ang = phase @ exps.T
        top = np.max(np.where(np.isfinite(logmag), logmag, -np.inf), axis=1, keepdims=True)
        top = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(invalid="ignore"):
            s = (coeffs[None, :] * np.exp(logmag - top + 1j * ang)).sum(axis=1)
        with np.errstate(divide="ignore"):
            val = np.log(np.abs(s)) + top[:, 0] - 0.5 * (r ** 2 @ a)
        return val

    R = _poly_radius(g, a)
    sampler = qmc.Sobol(2 * n, scramble=True, seed=seed)
    u = sampler.random(4096)
    pts = np.concatenate([u[:, :n] * R, u[:, n:] * 2 * np.pi], axis=1)
    vals = objective(pts)
    best = float(np.log(abs(g[(0,) * n]))) if g[(0,) * n] else -math.inf
    order = np.argsort(-vals)[:8]
    for i in order:
        res = optimize.minimize(lambda x: -objective(x)[0], pts[i], method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        best = max(best, float(vals[i]), -float(res.fun))
    return math.exp(best)


def gaussian_norm_series(c: float, gamma: float, terms: int) -> tuple[float, float]:
    """Partial sum of ``||exp(c z^2/2)||_gamma^2 = sum_k binom(2k,k) (c/(2 gamma))^(2k)`` and its last term."""
    q2 = (c / (2.0 * gamma)) ** 2
    t = 1.0
    total = 1.0
    for k in range(terms - 1):
        t *= (2 * k + 1) * (2 * k + 2) / ((k + 1) ** 2) * q2
        total += t
    return total, t


def _series_converges(c: float, gamma: float) -> bool:
    """Ratio test on the norm series, with Raabe's test on the boundary.

    Consecutive terms have ratio ``(2k+1)(2k+2)/(k+1)^2 (c/2gamma)^2`` which
    tends to ``(c/gamma)^2``; at ``c = gamma`` Raabe's quantity
    ``k (1 - ratio)`` tends to 1/2 < 1, so the series diverges there.
    """
    if c == 0:
        return True
    k = 10 ** 6
    q2 = (c / (2.0 * gamma)) ** 2
    ratio_at = lambda kk: (2 * kk + 1) * (2 * kk + 2) / ((kk + 1) ** 2) * q2  # noqa: E731
    limit = (c / gamma) ** 2
    if limit < 1:
        return True
    if limit > 1:
        return False
    raabe = k * (1 - ratio_at(k))
    return raabe > 1


def gaussian_fock_membership(c: float, gamma: WeightLike) -> bool:
    """Whether ``exp(c z^2 / 2)`` lies in ``F_gamma``: exactly when ``gamma > c``.

    The closed form is cross-checked against the convergence of the norm
    series before it is returned.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    g = Weight.of(gamma, 1)[0]
    closed = g > c
    series = _series_converges(c, g)
    if closed != series:  # pragma: no cover - would mean the derivation is wrong
        raise ArithmeticError(f"membership closed form disagrees with the norm series at c={c}, gamma={g}")
    return closed


@dataclass(frozen=True)
class EJMembership:
    member: bool
    alpha_witness: Weight | None
    norm: float
    resolution: float

    def to_json(self) -> dict:
        return {"member": self.member, "alpha_witness": None if self.alpha_witness is None else
                self.alpha_witness.to_json(), "norm": self.norm, "resolution": self.resolution}


def ej_membership(A, beta: WeightLike, resolution: float = 1e-12) -> EJMembership:
    """Search ``alpha << beta/2`` with ``||D_alpha^-1/2 A D_alpha^-1/2|| <= 1``.

    Candidates are ``alpha = (1 - s) beta / 2`` for ``s`` on a logarithmic
    grid from 1/2 down to ``resolution``.  For entry-wise nonnegative ``A`` the
    norm decreases in every ``alpha_j``, so this diagonal approach to
    ``beta/2`` is where the smallest norms are found.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.allclose(A, A.T, rtol=1e-12, atol=0.0):
        raise ValueError("A must be symmetric")
    if np.any(A < 0):
        raise ValueError("A must be entry-wise nonnegative")
    b = Weight.of(beta, A.shape[0]).array
    best = math.inf
    for s in np.logspace(math.log10(0.5), math.log10(resolution), 64):
        alpha = (1.0 - s) * b / 2.0
        norm = float(np.max(np.abs(np.linalg.eigvalsh(_scaled_matrix(A, alpha)))))
        best = min(best, norm)
        if norm <= 1.0:
            return EJMembership(True, Weight(tuple(alpha)), norm, resolution)
    return EJMembership(False, None, best, resolution)
