"""Sparse multivariate polynomials with complex coefficients.

A polynomial is a map from exponent tuples to complex coefficients.  An
optional truncation bound ``max_degree`` caps the total degree counted over
``trunc_vars`` (all variables when ``trunc_vars`` is None); it is how
degree-truncated power series and bi-graded symbols are represented.

Example (2 variables z0, z1)::

    z0**2 * z1 + 3  ->  {(2, 1): 1+0j, (0, 0): 3+0j}

Values are immutable after construction.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MultiIndex = tuple[int, ...]

#: a sum is treated as exact cancellation when its modulus is at most this
#: fraction of the summed magnitudes
ZERO_EPS = 1e-14


def grlex_key(alpha: MultiIndex) -> tuple[int, MultiIndex]:
    """Sort key for graded lexicographic order."""
    return (sum(alpha), alpha)


def multi_indices(n: int, degree: int) -> Iterator[MultiIndex]:
    """All exponent vectors of length ``n`` with total degree <= ``degree``, in grlex order."""
    for d in range(degree + 1):
        level = []
        for combo in itertools.combinations_with_replacement(range(n), d):
            alpha = [0] * n
            for i in combo:
                alpha[i] += 1
            level.append(tuple(alpha))
        yield from sorted(level)


def multi_factorial(alpha: Sequence[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def pbinom(beta: Sequence[int], alpha: Sequence[int]) -> int:
    """Return ``alpha! * prod(C(beta_i, alpha_i))``.

    This is the falling factorial ``prod(beta_i! / (beta_i - alpha_i)!)`` and
    is zero as soon as some ``alpha_i > beta_i``.

    >>> pbinom((3,), (2,))
    6
    >>> pbinom((2, 2), (1, 2))
    4
    """
    if len(beta) != len(alpha):
        raise ValueError(f"length mismatch: beta has {len(beta)} entries, alpha has {len(alpha)}")
    return math.prod(math.perm(b, a) for b, a in zip(beta, alpha))


class MPoly:
    """Sparse polynomial (or truncated power series) in ``nvars`` complex variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    terms : mapping
        Exponent tuple -> coefficient.  Exact zeros are dropped; arithmetic
        additionally drops sums that cancel to within ``ZERO_EPS`` of the
        magnitudes that produced them.
    max_degree : int, optional
        Truncation bound on the total degree over ``trunc_vars``.  Terms
        exceeding it are discarded.
    trunc_vars : sequence of int, optional
        Variables whose degrees count toward ``max_degree``; all when None.
    """

    __slots__ = ("nvars", "_terms", "max_degree", "trunc_vars")
    # numpy scalars defer to the reflected operators instead of building object arrays
    __array_ufunc__ = None

    def __init__(
        self,
        nvars: int,
        terms: Mapping[MultiIndex, complex] | None = None,
        max_degree: int | None = None,
        trunc_vars: Sequence[int] | None = None,
    ):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        tv = None if trunc_vars is None else tuple(sorted(set(trunc_vars)))
        if tv is not None and any(i < 0 or i >= nvars for i in tv):
            raise ValueError(f"trunc_vars {tv} out of range for {nvars} variables")
        out: dict[MultiIndex, complex] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != nvars:
                raise ValueError(f"exponent {alpha} does not have {nvars} entries")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = complex(c)
            if c == 0:
                continue
            if max_degree is not None and _tdeg(alpha, tv) > max_degree:
                continue
            out[alpha] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", out)
        object.__setattr__(self, "max_degree", max_degree)
        object.__setattr__(self, "trunc_vars", tv)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # construction helpers
    @classmethod
    def constant(cls, nvars: int, value: complex = 1.0) -> MPoly:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, idx: int, coeff: complex = 1.0) -> MPoly:
        if not 0 <= idx < nvars:
            raise ValueError(f"variable index {idx} out of range for {nvars} variables")
        alpha = [0] * nvars
        alpha[idx] = 1
        return cls(nvars, {tuple(alpha): coeff})

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: complex = 1.0) -> MPoly:
        return cls(len(alpha), {tuple(alpha): coeff})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], max_degree: int | None = None) -> MPoly:
        """Univariate polynomial from ascending coefficients."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)}, max_degree=max_degree)

    # container protocol
    @property
    def terms(self) -> dict[MultiIndex, complex]:
        return dict(self._terms)

    def items(self) -> list[tuple[MultiIndex, complex]]:
        """Terms in graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __getitem__(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms, key=grlex_key))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, variables: Sequence[int] | None = None) -> int:
        """Total degree (over ``variables`` when given); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        tv = None if variables is None else tuple(variables)
        return max(_tdeg(a, tv) for a in self._terms)

    def coeff_norm1(self) -> float:
        return math.fsum(abs(c) for c in self._terms.values())

    def coefficients(self) -> np.ndarray:
        """Dense ascending coefficient vector of a univariate polynomial."""
        if self.nvars != 1:
            raise ValueError("coefficients() needs a univariate polynomial")
        out = np.zeros(max(self.degree(), 0) + 1, dtype=complex)
        for (k,), c in self._terms.items():
            out[k] = c
        return out

    def is_real(self, rtol: float = 1e-10) -> bool:
        if not self._terms:
            return True
        scale = max(abs(c) for c in self._terms.values())
        return all(abs(c.imag) <= rtol * scale for c in self._terms.values())

    # arithmetic
    def _result_trunc(self, other: MPoly) -> tuple[int | None, tuple[int, ...] | None]:
        if self.max_degree is None:
            return other.max_degree, other.trunc_vars
        if other.max_degree is None:
            return self.max_degree, self.trunc_vars
        if self.trunc_vars != other.trunc_vars:
            raise ValueError("cannot combine truncations over different variable blocks")
        return min(self.max_degree, other.max_degree), self.trunc_vars

    def _check(self, other: MPoly) -> None:
        if not isinstance(other, MPoly):
            raise TypeError(f"expected MPoly, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MPoly.constant(self.nvars, other)
        self._check(other)
        md, tv = self._result_trunc(other)
        out = dict(self._terms)
        for alpha, c in other._terms.items():
            prev = out.get(alpha, 0j)
            total = prev + c
            out[alpha] = 0j if abs(total) <= ZERO_EPS * (abs(prev) + abs(c)) else total
        return MPoly(self.nvars, out, md, tv)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check(other)
        md, tv = self._result_trunc(other)
        out: dict[MultiIndex, complex] = {}
        mag: dict[MultiIndex, float] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                g = tuple(x + y for x, y in zip(a, b))
                if md is not None and _tdeg(g, tv) > md:
                    continue
                prod = ca * cb
                out[g] = out.get(g, 0j) + prod
                mag[g] = mag.get(g, 0.0) + abs(prod)
        for g, c in out.items():
            if abs(c) <= ZERO_EPS * mag[g]:
                out[g] = 0j
        return MPoly(self.nvars, out, md, tv)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            raise TypeError("division by a polynomial is not supported")
        return self * (1.0 / complex(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly(self.nvars, {(0,) * self.nvars: 1.0}, self.max_degree, self.trunc_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: complex) -> MPoly:
        return MPoly(self.nvars, {a: c * v for a, v in self._terms.items()}, self.max_degree, self.trunc_vars)

    def truncate(self, max_degree: int | None, trunc_vars: Sequence[int] | None = None) -> MPoly:
        return MPoly(self.nvars, self._terms, max_degree, trunc_vars)

    def map_coeffs(self, fn) -> MPoly:
        """Apply ``fn(alpha, coeff) -> coeff`` to every term."""
        return MPoly(
            self.nvars, {a: fn(a, c) for a, c in self._terms.items()}, self.max_degree, self.trunc_vars
        )

    def permute(self, order: Sequence[int]) -> MPoly:
        """Reorder variables: new variable ``i`` is old variable ``order[i]``."""
        if sorted(order) != list(range(self.nvars)):
            raise ValueError(f"{order} is not a permutation of {self.nvars} variables")
        inv = {old: new for new, old in enumerate(order)}
        tv = None if self.trunc_vars is None else [inv[i] for i in self.trunc_vars]
        return MPoly(
            self.nvars, {tuple(a[i] for i in order): c for a, c in self._terms.items()}, self.max_degree, tv
        )

    def embed(self, nvars: int, positions: Sequence[int]) -> MPoly:
        """Place variable ``i`` at index ``positions[i]`` of a larger variable set."""
        if len(positions) != self.nvars:
            raise ValueError("positions must list one slot per variable")
        out = {}
        for a, c in self._terms.items():
            b = [0] * nvars
            for i, p in enumerate(positions):
                b[p] = a[i]
            out[tuple(b)] = c
        tv = None if self.trunc_vars is None else [positions[i] for i in self.trunc_vars]
        if self.max_degree is not None and self.trunc_vars is None:
            tv = list(positions)
        return MPoly(nvars, out, self.max_degree, tv)

    # comparison
    def allclose(self, other: MPoly, rtol: float = 1e-12, atol: float = 1e-14) -> bool:
        self._check(other)
        for alpha in set(self._terms) | set(other._terms):
            a, b = self[alpha], other[alpha]
            if abs(a - b) > atol + rtol * max(abs(a), abs(b)):
                return False
        return True

    def max_rel_diff(self, other: MPoly) -> float:
        """Largest coefficient-wise relative difference."""
        self._check(other)
        worst = 0.0
        for alpha in set(self._terms) | set(other._terms):
            a, b = self[alpha], other[alpha]
            scale = max(abs(a), abs(b))
            if scale:
                worst = max(worst, abs(a - b) / scale)
        return worst

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"MPoly({self.nvars}, 0)"
        parts = []
        for a, c in self.items():
            mono = "*".join(f"z{i}^{e}" if e > 1 else f"z{i}" for i, e in enumerate(a) if e)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return f"MPoly({self.nvars}, " + " + ".join(parts) + ")"

    # evaluation
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = point[0]
        return poly_eval(self, point)

    # serialization
    def to_json(self) -> dict:
        out = {
            "nvars": self.nvars,
            "max_degree": self.max_degree,
            "terms": [
                {"alpha": list(a), "re": c.real, "im": c.imag} for a, c in self.items()
            ],
        }
        if self.trunc_vars is not None:
            out["trunc_vars"] = list(self.trunc_vars)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> MPoly:
        """Parse the JSON object form; duplicate exponents are summed."""
        try:
            nvars = int(data["nvars"])
            raw = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"MPoly JSON needs 'nvars' and 'terms': {exc}") from None
        acc: dict[MultiIndex, complex] = {}
        for t in raw:
            alpha = tuple(int(x) for x in t["alpha"])
            acc[alpha] = acc.get(alpha, 0j) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(nvars, acc, data.get("max_degree"), data.get("trunc_vars"))


def _tdeg(alpha: MultiIndex, variables: Sequence[int] | None) -> int:
    if variables is None:
        return sum(alpha)
    return sum(alpha[i] for i in variables)


def poly_arith(a: MPoly, b: MPoly | None, kind: str, c: complex = 1.0) -> MPoly:
    """Dispatch ``add``, ``mul`` or ``scale`` (by ``c``)."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "scale":
        return a.scale(c)
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def poly_eval(p: MPoly, point: Sequence[complex]) -> complex:
    """Evaluate ``p`` at ``point`` summing terms in grlex order."""
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    pt = [complex(x) for x in point]
    total = 0j
    for alpha, c in p.items():
        total += c * monomial_value(pt, alpha)
    return total


def monomial_value(point: Sequence[complex], alpha: MultiIndex) -> complex:
    v = 1 + 0j
    for x, e in zip(point, alpha):
        if e:
            v *= x**e
    return v


def eval_many(p: MPoly, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at the rows of ``points`` (shape ``(N, nvars)``)."""
    points = np.asarray(points, dtype=complex)
    if points.ndim != 2 or points.shape[1] != p.nvars:
        raise ValueError("points must have shape (N, nvars)")
    out = np.zeros(points.shape[0], dtype=complex)
    for alpha, c in p.items():
        term = np.full(points.shape[0], c, dtype=complex)
        for j, e in enumerate(alpha):
            if e:
                term *= points[:, j] ** e
        out += term
    return out


def rotate_vars(p: MPoly, mode: str = "to_upper", block: Iterable[int] | None = None) -> MPoly:
    """Substitute ``z_j -> -i z_j`` (``to_upper``) or ``z_j -> i z_j`` (``to_right``).

    ``to_upper`` turns nonvanishing on the right half-plane into nonvanishing
    on the upper half-plane.
    """
    if mode == "to_upper":
        unit = -1j
    elif mode == "to_right":
        unit = 1j
    else:
        raise ValueError(f"unknown rotation mode {mode!r}")
    idx = range(p.nvars) if block is None else list(block)
    powers = [unit**k for k in range(4)]
    return p.map_coeffs(lambda a, c: c * powers[sum(a[i] for i in idx) % 4])


def conj_coeffs(p: MPoly) -> MPoly:
    return p.map_coeffs(lambda a, c: c.conjugate())


def exp_linear(nvars: int, pairs: Sequence[tuple[int, int]], degree: int, trunc_vars=None, scale=1.0) -> MPoly:
    """Truncation of ``exp(scale * sum z_i z_j)`` over the listed variable pairs.

    ``degree`` bounds the power of the exponent's argument; with ``trunc_vars``
    set to one side of each pair it equals the degree in that block.
    """
    arg = MPoly(nvars)
    for i, j in pairs:
        a = [0] * nvars
        a[i] += 1
        a[j] += 1
        arg = arg + MPoly(nvars, {tuple(a): scale})
    term = MPoly.constant(nvars, 1.0)
    total = term
    for k in range(1, degree + 1):
        term = (term * arg).scale(1.0 / k)
        total = total + term
    if trunc_vars is None:
        return total
    return total.truncate(degree, trunc_vars)


def linear_combination(nvars: int, pairs: Iterable[tuple[complex, MPoly]],
                       max_degree: int | None = None, trunc_vars: Sequence[int] | None = None) -> MPoly:
    """``sum c_k p_k`` accumulated in one pass, with the usual cancellation rule."""
    out: dict[MultiIndex, complex] = {}
    mag: dict[MultiIndex, float] = {}
    tv = None if trunc_vars is None else tuple(trunc_vars)
    for c, p in pairs:
        if p.nvars != nvars:
            raise ValueError(f"nvars mismatch: {p.nvars} vs {nvars}")
        for alpha, v in p._terms.items():
            if max_degree is not None and _tdeg(alpha, tv) > max_degree:
                continue
            term = c * v
            out[alpha] = out.get(alpha, 0j) + term
            mag[alpha] = mag.get(alpha, 0.0) + abs(term)
    for alpha, v in out.items():
        if abs(v) <= ZERO_EPS * mag[alpha]:
            out[alpha] = 0j
    return MPoly(nvars, out, max_degree, trunc_vars)
