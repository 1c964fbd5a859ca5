"""Lee-Yang measures, Ising partition functions and the Lieb-Sokal composition.

A measure (or functional) has the Lee-Yang property when its
Fourier-Laplace transform ``mu_hat(w) = int exp(z . w) d mu(z)`` belongs to
the Lee-Yang class: limits of polynomials that do not vanish when every
variable has positive real part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, Sequence, Union

import numpy as np

from . import kernels
from .fock import GaussianForm, Weight, WeightLike, fock_inner, m_alpha
from .operators import Diff
from .poly import MPoly, multi_factorial, multi_indices
from .stability import DEFAULT_TOL, Verdict, ly_check, univariate_roots

#: largest number of sites enumerated exactly
MAX_SITES = 20


class HypothesisError(ValueError):
    """A named hypothesis of a theorem is not satisfied by the inputs."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis violated: {hypothesis}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# one-dimensional measures


@dataclass(frozen=True)
class TwoAtom:
    """``(delta_a + delta_b) / 2``."""

    a: float
    b: float
    kind: str = field(default="two_atom", init=False)


@dataclass(frozen=True)
class Interval:
    """Lebesgue measure on ``[a, b]``."""

    a: float
    b: float
    kind: str = field(default="interval", init=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class Gaussian:
    """``exp(-b x^2 / 2) dx``."""

    b: float
    kind: str = field(default="gaussian", init=False)

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"Gaussian measure needs b > 0, got {self.b}")


Measure1D = Union[TwoAtom, Interval, Gaussian]


def measure_to_json(mu) -> dict:
    if isinstance(mu, Gaussian):
        return {"kind": "gaussian", "b": mu.b}
    return {"kind": mu.kind, "a": mu.a, "b": mu.b}


def measure_from_json(data: Mapping):
    kind = data.get("kind")
    if kind == "two_atom":
        return TwoAtom(float(data["a"]), float(data["b"]))
    if kind == "interval":
        return Interval(float(data["a"]), float(data["b"]))
    if kind == "gaussian":
        return Gaussian(float(data["b"]))
    raise ValueError(f"unknown measure kind {kind!r}")


def _sinhc(x):
    """``sinh(x)/x`` with the removable singularity filled in."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 + x * x / 6 + x ** 4 / 120, np.sinh(safe) / safe)


_ATOMS = {
    "const": lambda p, w: np.full_like(w, p),
    "exp": lambda p, w: np.exp(p * w),
    "cosh": lambda p, w: np.cosh(p * w),
    "sinhc": lambda p, w: _sinhc(p * w),
    "expsq": lambda p, w: np.exp(p * w * w),
}


@dataclass(frozen=True, eq=False)
class Transform:
    """Closed form as a product of atoms, with its Taylor truncation.

    ``atoms`` is a tuple of ``(kind, parameter)`` where kind is one of
    ``const`` (c), ``exp`` (exp(p w)), ``cosh`` (cosh(p w)), ``sinhc``
    (sinh(p w)/(p w)) or ``expsq`` (exp(p w^2)).
    """

    measure: object
    atoms: tuple[tuple[str, float], ...]
    truncation: MPoly

    @property
    def degree(self) -> int:
        return self.truncation.max_degree

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.ones_like(w)
        for kind, p in self.atoms:
            out = out * _ATOMS[kind](p, w)
        return out if out.ndim else complex(out)

    def expression(self) -> str:
        names = {"const": "{p}", "exp": "exp({p}*w)", "cosh": "cosh({p}*w)", "sinhc": "sinhc({p}*w)",
                 "expsq": "exp({p}*w^2)"}
        return " * ".join(names[k].format(p=repr(float(p))) for k, p in self.atoms)

    def direct(self, w):
        """Evaluation from the definition rather than the closed form."""
        mu = self.measure
        w = np.asarray(w, dtype=complex)
        if isinstance(mu, TwoAtom):
            return (np.exp(mu.a * w) + np.exp(mu.b * w)) / 2
        if isinstance(mu, Interval):
            # Gauss-Legendre on [a, b]; exact to rounding for moderate |w| (b - a)
            x, wt = np.polynomial.legendre.leggauss(64)
            half = (mu.b - mu.a) / 2
            mid = (mu.a + mu.b) / 2
            pts = mid + half * x
            return half * np.tensordot(np.exp(np.multiply.outer(w, pts)), wt, axes=([-1], [0]))
        # Gauss-Hermite for int exp(w x - b x^2/2) dx
        x, wt = np.polynomial.hermite.hermgauss(80)
        s = math.sqrt(2.0 / mu.b)
        return s * np.tensordot(np.exp(np.multiply.outer(w, s * x)), wt, axes=([-1], [0]))

    def to_json(self) -> dict:
        return {"measure": measure_to_json(self.measure), "expression": self.expression(),
                "atoms": [[k, float(p)] for k, p in self.atoms], "truncation": self.truncation.to_json()}


def moment(mu, k: int) -> float:
    """``int x^k d mu``."""
    if isinstance(mu, TwoAtom):
        return (mu.a ** k + mu.b ** k) / 2
    if isinstance(mu, Interval):
        return (mu.b ** (k + 1) - mu.a ** (k + 1)) / (k + 1)
    if isinstance(mu, Gaussian):
        if k % 2:
            return 0.0
        # sqrt(2 pi / b) (k-1)!! / b^(k/2)
        dfact = math.prod(range(k - 1, 0, -2)) if k else 1
        return math.sqrt(2 * math.pi / mu.b) * dfact / mu.b ** (k // 2)
    raise TypeError(f"unsupported measure {mu!r}")


def transform(mu, degree: int) -> Transform:
    """Fourier-Laplace transform with its truncation ``sum_k m_k w^k / k!``.

    TwoAtom: ``exp((a+b)w/2) cosh((a-b)w/2)``.  Interval:
    ``(b-a) exp((a+b)w/2) sinh((b-a)w/2) / ((b-a)w/2)``, i.e.
    ``(2/w) exp((a+b)w/2) sinh((b-a)w/2)``.  Gaussian:
    ``sqrt(2 pi/b) exp(w^2/(2b))``.
    """
    if isinstance(mu, TwoAtom):
        atoms = (("exp", (mu.a + mu.b) / 2), ("cosh", (mu.a - mu.b) / 2))
    elif isinstance(mu, Interval):
        atoms = (("const", mu.b - mu.a), ("exp", (mu.a + mu.b) / 2), ("sinhc", (mu.b - mu.a) / 2))
    elif isinstance(mu, Gaussian):
        atoms = (("const", math.sqrt(2 * math.pi / mu.b)), ("expsq", 1.0 / (2 * mu.b)))
    else:
        raise TypeError(f"unsupported measure {mu!r}")
    coeffs = [moment(mu, k) / math.factorial(k) for k in range(degree + 1)]
    return Transform(mu, atoms, MPoly.from_coeffs(coeffs, max_degree=degree))


def transform_zeros(mu, count: int = 10) -> list[complex]:
    """Closed-form zeros of the transform with ``|k| <= count`` (none for Gaussians).

    TwoAtom: ``exp((a-b) w) = -1``, so ``w = (2k+1) pi i / (a-b)``.
    Interval: ``exp((b-a) w) = 1`` with ``w != 0``, so ``w = 2 pi i k / (b-a)``.
    """
    if isinstance(mu, TwoAtom):
        if mu.a == mu.b:
            return []
        return [(2 * k + 1) * math.pi * 1j / (mu.a - mu.b) for k in range(-count, count)]
    if isinstance(mu, Interval):
        return [2 * math.pi * 1j * k / (mu.b - mu.a) for k in range(-count, count + 1) if k]
    return []


@dataclass(frozen=True)
class LYReport:
    """``holds``: Lee-Yang class membership of the closed form.

    ``nonvanishing`` is the grid check on the right half-plane,
    ``grid_min`` the smallest ``|mu_hat|`` relative to the largest on the grid.
    """

    holds: bool
    nonvanishing: bool
    class_condition: str
    grid_min: float
    max_zero_re: float
    bounded_on: str

    def to_json(self) -> dict:
        return {"holds": self.holds, "nonvanishing": self.nonvanishing, "class_condition": self.class_condition,
                "grid_min": self.grid_min, "max_zero_re": self.max_zero_re, "bounded_on": self.bounded_on}


def has_ly_property(mu, grid: int = 100) -> LYReport:
    """Check the Lee-Yang property of a one-dimensional measure.

    The exponential factor ``exp(c w)`` of the closed form lies in the
    Lee-Yang class only for ``c >= 0``, which gives the condition
    ``a + b >= 0`` for two atoms and for intervals; the remaining factors have
    purely imaginary zeros (cosh, sinh) or are Gaussian.  Independently the
    closed form is evaluated on ``Re w in [0.05, 5]``, ``|Im w| <= 5``
    (``grid x grid`` points) and its closed-form zeros are listed.
    """
    T = transform(mu, 0)
    re = np.linspace(0.05, 5.0, grid)
    im = np.linspace(-5.0, 5.0, grid)
    W = re[None, :] + 1j * im[:, None]
    vals = np.abs(T(W))
    grid_min = float(vals.min() / vals.max())
    zeros = transform_zeros(mu)
    max_re = max((z.real for z in zeros), default=-math.inf)
    nonvanishing = bool(grid_min > 0) and max_re <= 0
    if isinstance(mu, Gaussian):
        cond, ok, bounded = "always (Gaussian factor)", True, f"F_c for c < {mu.b}"
    else:
        cond, ok, bounded = "a + b >= 0", mu.a + mu.b >= 0, "F_c for every c > 0"
    return LYReport(bool(ok and nonvanishing), nonvanishing, cond, grid_min, float(max_re), bounded)


# ---------------------------------------------------------------------------
# spin models


@dataclass(frozen=True, eq=False)
class SpinModel:
    """Couplings ``J`` (symmetric, nonnegative) and one measure per site."""

    J: np.ndarray
    sites: tuple = ()

    def __post_init__(self):
        J = np.atleast_2d(np.asarray(self.J, dtype=float))
        if J.shape[0] != J.shape[1]:
            raise ValueError("J must be square")
        if not np.allclose(J, J.T, rtol=1e-12, atol=0.0):
            raise ValueError("J must be symmetric")
        if np.any(J < 0):
            raise ValueError("J must be entry-wise nonnegative")
        sites = tuple(self.sites) or tuple(TwoAtom(1.0, -1.0) for _ in range(J.shape[0]))
        if len(sites) != J.shape[0]:
            raise ValueError(f"{len(sites)} sites for a {J.shape[0]}x{J.shape[0]} coupling matrix")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "sites", sites)

    @property
    def n(self) -> int:
        return self.J.shape[0]

    def to_json(self) -> dict:
        return {"J": self.J.tolist(), "sites": [measure_to_json(s) for s in self.sites]}

    @classmethod
    def from_json(cls, data: Mapping) -> SpinModel:
        return cls(np.asarray(data["J"], dtype=float), tuple(measure_from_json(s) for s in data.get("sites", [])))


def _check_ising(model: SpinModel) -> None:
    if model.n > MAX_SITES:
        raise ValueError(f"exact enumeration is limited to {MAX_SITES} sites, model has {model.n}")
    for s in model.sites:
        if not (isinstance(s, TwoAtom) and s.a == 1.0 and s.b == -1.0):
            raise ValueError(f"exact enumeration needs TwoAtom(1, -1) sites, got {s!r}")


def _weights(model: SpinModel, normalize: bool) -> np.ndarray:
    E = kernels.ising_energies(np.ascontiguousarray(model.J))
    if normalize:
        E = E - E.max()
    return np.exp(E) / 2.0 ** model.n


def ising_partition(model: SpinModel, normalize: bool = False) -> MPoly:
    """``2^-n sum_sigma exp(sigma^T J sigma) prod_j u_j^(1 + sigma_j)`` with ``u_j = exp(w_j)``.

    Multiplying by ``prod u_j`` clears the negative powers, so exponents are
    0 or 2.  ``normalize`` divides by ``exp(max sigma^T J sigma)`` to avoid
    overflow; zeros are unaffected.
    """
    _check_ising(model)
    n = model.n
    wts = _weights(model, normalize)
    terms = {}
    for s in range(1 << n):
        terms[tuple(2 * ((s >> j) & 1) for j in range(n))] = float(wts[s])
    return MPoly(n, terms)


def ising_transform_series(model: SpinModel, degree: int) -> MPoly:
    """``2^-n sum_sigma exp(sigma^T J sigma) exp(sigma . w)`` expanded in ``w`` to total degree ``degree``."""
    _check_ising(model)
    n = model.n
    wts = _weights(model, False)
    s = np.arange(1 << n)
    sigma = np.where((s[:, None] >> np.arange(n)) & 1, 1.0, -1.0)
    terms = {}
    for alpha in multi_indices(n, degree):
        mono = np.prod(sigma ** np.array(alpha), axis=1)
        terms[alpha] = math.fsum(wts * mono) / multi_factorial(alpha)
    return MPoly(n, terms, degree)


@dataclass(frozen=True)
class FugacityZeros:
    roots: tuple[complex, ...]
    max_deviation: float
    direction: tuple[int, ...]
    gcd: int

    def to_json(self) -> dict:
        return {"roots": [{"re": r.real, "im": r.imag} for r in self.roots], "max_deviation": self.max_deviation,
                "direction": list(self.direction), "gcd": self.gcd, "count": len(self.roots)}

    def csv_rows(self) -> list[tuple[float, float, float]]:
        return [(r.real, r.imag, abs(r) - 1.0) for r in self.roots]


def fugacity_zeros(model: SpinModel, direction: Sequence[int] | None = None) -> FugacityZeros:
    """Zeros in ``u = exp(w)`` of the partition function along ``w_j = d_j w``.

    With integer directions ``d`` (all ones by default) the cleared
    transform is ``sum_sigma c_sigma u^(sum_j d_j (1 + sigma_j))``.  Every
    exponent is divisible by ``g``, the gcd of the exponents, so the roots are
    computed for the polynomial in ``v = u^g`` and each is expanded into its
    ``g`` roots in ``u``.
    """
    _check_ising(model)
    n = model.n
    if direction is None:
        d = np.ones(n, dtype=np.int64)
    else:
        d = np.asarray(direction)
        if d.shape != (n,) or np.any(d <= 0) or np.any(d != np.round(d)):
            raise ValueError("direction must be a vector of positive integers, one per site")
        d = d.astype(np.int64)
    wts = _weights(model, True)
    s = np.arange(1 << n)
    bits = (s[:, None] >> np.arange(n)) & 1
    k = bits @ (2 * d)
    g = int(reduce(math.gcd, np.unique(k).tolist()))
    coeffs = np.bincount(k // g, weights=wts)
    vroots = univariate_roots(MPoly.from_coeffs(coeffs))
    roots = []
    for v in vroots:
        r = abs(v) ** (1.0 / g)
        th = np.angle(v)
        roots.extend(complex(r * np.exp(1j * (th + 2 * math.pi * j) / g)) for j in range(g))
    roots.sort(key=lambda z: (np.angle(z), abs(z)))
    dev = max((abs(abs(r) - 1.0) for r in roots), default=0.0)
    return FugacityZeros(tuple(roots), float(dev), tuple(int(x) for x in d), g)


# ---------------------------------------------------------------------------
# Lieb-Sokal pipeline


def ej_convolve(A, mu0_hat: MPoly, degree: int) -> MPoly:
    """Transform of ``e_A(z) d mu_0``: the operator ``exp(sum A_ij d_i d_j)`` applied to ``mu0_hat``.

    The output is truncated at ``degree``.  Its degree-k coefficients use
    input coefficients of every degree ``k + 2m``, so they are exact only when
    the input truncation reaches far enough beyond ``degree``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape != (mu0_hat.nvars, mu0_hat.nvars):
        raise ValueError(f"A must be {mu0_hat.nvars}x{mu0_hat.nvars}")
    src = mu0_hat.max_degree
    if src is not None and src < degree:
        raise ValueError(f"transform truncated at degree {src} < requested degree {degree}")
    D = max(mu0_hat.degree(), 0)
    g = GaussianForm(A).series(D)
    out = Diff(MPoly(g.nvars, g.terms)).apply(MPoly(mu0_hat.nvars, mu0_hat.terms), degree)
    return MPoly(out.nvars, out.terms, degree)


def functional_representer(phi_hat: MPoly, beta: WeightLike) -> MPoly:
    """``k`` with ``phi(h) = <h, k>_beta`` for polynomials ``h`` up to the truncation of ``phi_hat``.

    ``phi(z^e) = e! [w^e] phi_hat``, so ``k_e = conj(phi(z^e)) beta^e / e!``.
    """
    beta = Weight.of(beta, phi_hat.nvars)
    terms = {}
    for e, c in phi_hat.items():
        terms[e] = c.conjugate() * math.prod(b ** x for b, x in zip(beta, e))
    return MPoly(phi_hat.nvars, terms)


@dataclass(frozen=True)
class GLSResult:
    psi_hat: MPoly
    verdict: Verdict
    bound: float
    m_alpha: float
    degree: int

    def to_json(self) -> dict:
        return {"psi_hat": self.psi_hat.to_json(), "ly_verdict": self.verdict.to_json(),
                "bound_report": {"bound": self.bound, "m_alpha": self.m_alpha,
                                 "formula": "prod_j (1 + alpha_j/gamma_j) * M_alpha(g)^2"},
                "truncation_degree": self.degree}


def gls_compose(phi_hat: MPoly, beta: WeightLike, g: MPoly | GaussianForm, alpha: WeightLike,
                gamma: WeightLike, degree: int, trials: int = 1000, seed: int = 42,
                tol: float = DEFAULT_TOL) -> GLSResult:
    """``psi(f) = phi(f g)`` for a Lee-Yang functional ``phi`` on ``F_beta``.

    ``psi_hat(w) = phi(exp(z . w) g(z))``: the coefficient of ``w^d`` is
    ``phi(z^d g) / d!``, evaluated with the Fock pairing against the
    representer of ``phi``.  Requires ``alpha + gamma <= beta`` and
    ``M_alpha(g) < inf``; raises :class:`HypothesisError` naming the first
    one that fails.  ``phi_hat`` must be truncated high enough to cover
    ``degree`` plus the degree of ``g`` (Gaussian forms are expanded to the
    truncation of ``phi_hat``).
    """
    n = phi_hat.nvars
    beta = Weight.of(beta, n)
    alpha = Weight.of(alpha, n)
    gamma = Weight.of(gamma, n)
    if not Weight(tuple(a + c for a, c in zip(alpha, gamma))) <= beta:
        raise HypothesisError("alpha + gamma <= beta", f"alpha={list(alpha)}, gamma={list(gamma)}, beta={list(beta)}")
    if g.nvars != n:
        raise ValueError("g and phi_hat have different numbers of variables")
    M = m_alpha(g, alpha)
    if not math.isfinite(M):
        raise HypothesisError("M_alpha(g) < inf", f"alpha={list(alpha)}")
    src = phi_hat.max_degree if phi_hat.max_degree is not None else max(phi_hat.degree(), 0)
    if src < degree:
        raise ValueError(f"phi_hat truncated at degree {src} < requested degree {degree}")
    gp = g if isinstance(g, MPoly) else g.series(src)
    gp = MPoly(n, gp.terms)
    k = functional_representer(phi_hat, beta)
    out = {}
    for d in multi_indices(n, degree):
        h = gp * MPoly.monomial(d)
        h = h.truncate(src) if h.degree() > src else h
        val = fock_inner(MPoly(n, h.terms), k, beta)
        if val:
            out[d] = val / multi_factorial(d)
    psi = MPoly(n, out, degree)
    verdict = ly_check(psi, trials, seed, tol)
    bound = math.prod(1 + a / c for a, c in zip(alpha, gamma)) * M ** 2
    return GLSResult(psi, verdict, bound, M, degree)
