"""Linear operators on polynomials, their symbols, polarizations and adjoints.

An operator maps polynomials in ``n_in`` variables to polynomials (or
truncated series) in ``m_out`` variables.  Its symbol is the generating
function ``G_T(z, w) = sum_alpha T(z^alpha) w^alpha / alpha!`` stored as an
``MPoly`` whose first ``m_out`` variables are ``z`` and last ``n_in`` are
``w``, truncated at total ``w``-degree ``D``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .poly import MPoly, MultiIndex, exp_linear, linear_combination, multi_factorial, multi_indices, pbinom
from .stability import DEFAULT_TOL, Region, Verdict, is_stable_multi, is_stable_uni


class LinOp:
    """Base class; subclasses define ``n_in``, ``m_out`` and ``image``."""

    n_in: int
    m_out: int

    def image(self, alpha: MultiIndex) -> MPoly:
        """``T(z^alpha)``."""
        raise NotImplementedError

    def apply(self, f: MPoly, degree: int | None = None) -> MPoly:
        if f.nvars != self.n_in:
            raise ValueError(f"operator takes {self.n_in} variables, polynomial has {f.nvars}")
        return linear_combination(self.m_out, ((c, self.image(a)) for a, c in f.items()), degree)


@dataclass(frozen=True, eq=False)
class Table(LinOp):
    """Operator given by the images of finitely many monomials (others map to 0)."""

    n_in: int
    m_out: int
    entries: Mapping[MultiIndex, MPoly] = field(default_factory=dict)

    def __post_init__(self):
        for alpha, img in self.entries.items():
            if len(alpha) != self.n_in:
                raise ValueError(f"entry key {alpha} does not have {self.n_in} entries")
            if img.nvars != self.m_out:
                raise ValueError(f"image of {alpha} has {img.nvars} variables, expected {self.m_out}")

    def image(self, alpha):
        img = self.entries.get(tuple(alpha))
        return MPoly(self.m_out) if img is None else img


@dataclass(frozen=True, eq=False)
class Diagonal(LinOp):
    """Multiplier sequence ``z^alpha -> lam[alpha] z^alpha``; missing keys use ``default``."""

    nvars: int
    lam: Mapping[MultiIndex, complex] = field(default_factory=dict)
    default: complex = 0.0

    @property
    def n_in(self):
        return self.nvars

    @property
    def m_out(self):
        return self.nvars

    def multiplier(self, alpha) -> complex:
        return complex(self.lam.get(tuple(alpha), self.default))

    def image(self, alpha):
        return MPoly(self.nvars, {tuple(alpha): self.multiplier(alpha)})


@dataclass(frozen=True, eq=False)
class Diff(LinOp):
    """Constant-coefficient differential operator ``g(d/dz)``."""

    g: MPoly

    @property
    def n_in(self):
        return self.g.nvars

    @property
    def m_out(self):
        return self.g.nvars

    def image(self, alpha):
        out = {}
        for gamma, c in self.g.items():
            if any(gi > ai for gi, ai in zip(gamma, alpha)):
                continue
            beta = tuple(a - gi for a, gi in zip(alpha, gamma))
            out[beta] = out.get(beta, 0j) + c * math.prod(math.perm(a, gi) for a, gi in zip(alpha, gamma))
        return MPoly(self.g.nvars, out)


@dataclass(frozen=True, eq=False)
class Mult(LinOp):
    """Multiplication by a fixed polynomial."""

    g: MPoly

    @property
    def n_in(self):
        return self.g.nvars

    @property
    def m_out(self):
        return self.g.nvars

    def image(self, alpha):
        return MPoly(self.g.nvars, {tuple(x + y for x, y in zip(a, alpha)): c for a, c in self.g.items()})

    def apply(self, f, degree=None):
        if f.nvars != self.n_in:
            raise ValueError(f"operator takes {self.n_in} variables, polynomial has {f.nvars}")
        out = MPoly(f.nvars, f.terms) * MPoly(self.g.nvars, self.g.terms)
        return out if degree is None else out.truncate(degree)


@dataclass(frozen=True, eq=False)
class Compose(LinOp):
    """``outer o inner``."""

    outer: LinOp
    inner: LinOp

    def __post_init__(self):
        if self.inner.m_out != self.outer.n_in:
            raise ValueError(
                f"cannot compose: inner produces {self.inner.m_out} variables, outer takes {self.outer.n_in}"
            )

    @property
    def n_in(self):
        return self.inner.n_in

    @property
    def m_out(self):
        return self.outer.m_out

    def image(self, alpha):
        return self.outer.apply(self.inner.image(alpha))

    def apply(self, f, degree=None):
        out = self.outer.apply(self.inner.apply(f))
        return out if degree is None else out.truncate(degree)


@dataclass(frozen=True, eq=False)
class TensorExtend(LinOp):
    """``base`` acting on the first ``base.n_in`` variables; ``extra_vars`` trailing spectators."""

    base: LinOp
    extra_vars: int

    @property
    def n_in(self):
        return self.base.n_in + self.extra_vars

    @property
    def m_out(self):
        return self.base.m_out + self.extra_vars

    def image(self, alpha):
        alpha = tuple(alpha)
        head, tail = alpha[: self.base.n_in], alpha[self.base.n_in:]
        img = self.base.image(head)
        return MPoly(self.m_out, {a + tail: c for a, c in img.items()})

    def apply(self, f, degree=None):
        if f.nvars != self.n_in:
            raise ValueError(f"operator takes {self.n_in} variables, polynomial has {f.nvars}")
        # group by spectator exponent so the base operator sees whole polynomials
        k = self.base.n_in
        groups: dict[MultiIndex, dict] = {}
        for a, c in f.items():
            groups.setdefault(a[k:], {})[a[:k]] = c
        pairs = []
        for tail, part in groups.items():
            img = self.base.apply(MPoly(k, part))
            pairs.append((1.0, MPoly(self.m_out, {a + tail: c for a, c in img.items()})))
        return linear_combination(self.m_out, pairs, degree)


def apply_op(T: LinOp, f: MPoly, degree: int | None = None) -> MPoly:
    """Apply ``T`` to ``f``; the result is truncated at total degree ``degree`` when given."""
    return T.apply(f, degree)


def identity(nvars: int) -> Diagonal:
    return Diagonal(nvars, {}, default=1.0)


def derivative(nvars: int = 1, var: int = 0, coeff: complex = 1.0) -> Diff:
    """``coeff * d/dz_var``."""
    return Diff(MPoly.var(nvars, var, coeff))


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True, eq=False)
class Symbol:
    """Truncated symbol: ``poly`` in ``z_count + w_count`` variables, w-degree <= ``degree``."""

    poly: MPoly
    z_count: int
    w_count: int
    degree: int | None

    def __post_init__(self):
        if self.poly.nvars != self.z_count + self.w_count:
            raise ValueError("symbol polynomial does not match its block split")

    @property
    def z_vars(self) -> range:
        return range(self.z_count)

    @property
    def w_vars(self) -> range:
        return range(self.z_count, self.z_count + self.w_count)

    def split(self, key: MultiIndex) -> tuple[MultiIndex, MultiIndex]:
        return key[: self.z_count], key[self.z_count:]

    def allclose(self, other: Symbol, rtol: float = 1e-12, atol: float = 1e-14) -> bool:
        return (self.z_count, self.w_count) == (other.z_count, other.w_count) and self.poly.allclose(
            other.poly, rtol, atol
        )

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out.update({"z_count": self.z_count, "w_count": self.w_count, "degree": self.degree})
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> Symbol:
        return cls(MPoly.from_json(data), int(data["z_count"]), int(data["w_count"]), data.get("degree"))


def _join(z: MultiIndex, w: MultiIndex) -> MultiIndex:
    return tuple(z) + tuple(w)


def _exp_zw(m: int, degree: int) -> MPoly:
    """``exp(z . w)`` truncated at w-degree ``degree`` (m z-variables, m w-variables)."""
    return exp_linear(2 * m, [(i, m + i) for i in range(m)], degree, trunc_vars=range(m, 2 * m))


def symbol(T: LinOp, degree: int) -> Symbol:
    """``G_T(z, w)`` truncated at w-degree ``degree``."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    m, n = T.m_out, T.n_in
    wv = range(m, m + n)
    if isinstance(T, Diagonal):
        terms = {}
        for alpha in multi_indices(n, degree):
            lam = T.multiplier(alpha)
            if lam:
                terms[_join(alpha, alpha)] = lam / multi_factorial(alpha)
        poly = MPoly(m + n, terms, degree, wv)
    elif isinstance(T, Diff):
        g_w = T.g.embed(2 * n, range(n, 2 * n))
        poly = (MPoly(2 * n, g_w.terms) * _exp_zw(n, degree)).truncate(degree, wv)
    elif isinstance(T, Mult):
        g_z = T.g.embed(2 * n, range(n))
        poly = (MPoly(2 * n, g_z.terms) * _exp_zw(n, degree)).truncate(degree, wv)
    elif isinstance(T, TensorExtend):
        base = symbol(T.base, degree)
        mb, nb, k = T.base.m_out, T.base.n_in, T.extra_vars
        total = m + n
        # base z -> 0..mb-1, base w -> m..m+nb-1 ; spectators z' -> mb..m-1, w' -> m+nb..
        emb = base.poly.embed(total, list(range(mb)) + list(range(m, m + nb)))
        spect = exp_linear(total, [(mb + i, m + nb + i) for i in range(k)], degree)
        poly = (MPoly(total, emb.terms) * spect).truncate(degree, wv)
    else:
        pairs = []
        for alpha in multi_indices(n, degree):
            img = T.image(alpha)
            if img.is_zero():
                continue
            shifted = MPoly(m + n, {_join(g, alpha): c for g, c in img.items()})
            pairs.append((1.0 / multi_factorial(alpha), shifted))
        poly = linear_combination(m + n, pairs, degree, wv)
    return Symbol(poly, m, n, degree)


def table_from_symbol(sym: Symbol) -> Table:
    """Operator whose symbol is ``sym``: ``T(z^alpha) = alpha! [w^alpha] G``."""
    entries: dict[MultiIndex, dict] = {}
    for key, c in sym.poly.items():
        z, w = sym.split(key)
        entries.setdefault(w, {})[z] = c * multi_factorial(w)
    return Table(sym.w_count, sym.z_count, {w: MPoly(sym.z_count, t) for w, t in entries.items()})


def as_table(T: LinOp, degree: int) -> Table:
    """Restriction of ``T`` to monomials of degree <= ``degree``."""
    return Table(T.n_in, T.m_out, {a: T.image(a) for a in multi_indices(T.n_in, degree)})


def negate_w(sym: Symbol) -> Symbol:
    """``G(z, -w)``."""
    wv = sym.w_vars
    poly = sym.poly.map_coeffs(lambda a, c: -c if sum(a[i] for i in wv) % 2 else c)
    return Symbol(poly, sym.z_count, sym.w_count, sym.degree)


def lambda_beta(f: MPoly | Symbol, beta: Sequence[int], z_count: int | None = None, block: str = "w") -> MPoly:
    """Polarization ``Lambda_beta``: scale the coefficient of ``w^alpha`` by ``(beta)_alpha``.

    ``f`` is split into a leading ``z`` block of ``z_count`` variables and a
    trailing ``w`` block.  With ``block="z"`` the rescaling acts on the z
    exponents instead.  Terms whose exponent is not dominated by ``beta`` are
    removed, so the result is a polynomial even when ``f`` is a truncation
    whose bound covers ``|beta|``.
    """
    if isinstance(f, Symbol):
        z_count = f.z_count
        f = f.poly
    if z_count is None:
        raise ValueError("z_count is required for a bare MPoly")
    beta = tuple(int(b) for b in beta)
    if block == "w":
        sl = slice(z_count, f.nvars)
    elif block == "z":
        sl = slice(0, z_count)
    else:
        raise ValueError(f"block must be 'w' or 'z', got {block!r}")
    if len(beta) != len(range(f.nvars)[sl]):
        raise ValueError(f"beta has {len(beta)} entries, block has {len(range(f.nvars)[sl])} variables")
    out = {}
    for a, c in f.items():
        k = pbinom(beta, a[sl])
        if k:
            out[a] = c * k
    exact = f.max_degree is None or (
        f.trunc_vars == tuple(range(f.nvars)[sl]) and sum(beta) <= f.max_degree
    )
    if exact:
        return MPoly(f.nvars, out)
    return MPoly(f.nvars, out, f.max_degree, f.trunc_vars)


def t_beta(T: LinOp, beta: Sequence[int], degree: int) -> Table:
    """``Lambda_beta o T`` restricted to inputs of degree <= ``degree``."""
    beta = tuple(beta)
    if len(beta) != T.m_out:
        raise ValueError(f"beta has {len(beta)} entries, operator output has {T.m_out} variables")
    entries = {}
    for alpha in multi_indices(T.n_in, degree):
        img = T.image(alpha)
        entries[alpha] = MPoly(T.m_out, {g: c * pbinom(beta, g) for g, c in img.items()})
    return Table(T.n_in, T.m_out, entries)


def coefficient_matrix(T: LinOp, degree: int) -> tuple[np.ndarray, list[MultiIndex], list[MultiIndex]]:
    """Matrix ``M[alpha, gamma] = [z^gamma] T(z^alpha)`` over ``|alpha| <= degree``."""
    rows = list(multi_indices(T.n_in, degree))
    images = [T.image(a) for a in rows]
    cols = sorted({g for img in images for g in img.terms}, key=lambda g: (sum(g), g))
    index = {g: j for j, g in enumerate(cols)}
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    for i, img in enumerate(images):
        for g, c in img.items():
            M[i, index[g]] = c
    return M, rows, cols


def op_rank(T: LinOp, degree: int, tol: float = 1e-9) -> int:
    """Numerical rank of the coefficient matrix (singular values above ``tol`` times the largest)."""
    M, _, _ = coefficient_matrix(T, degree)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def formal_adjoint_symbol(G: Symbol) -> Symbol:
    """Symbol of the formal adjoint: ``conj(G(conj w, conj z))``.

    The z and w blocks trade places and every coefficient is conjugated.
    """
    m, n = G.z_count, G.w_count
    order = list(range(m, m + n)) + list(range(m))
    poly = G.poly.permute(order)
    poly = MPoly(n + m, {a: c.conjugate() for a, c in poly.items()})
    return Symbol(poly, n, m, poly.degree(range(n, n + m)))


def dual_symbol(G: Symbol, alpha: Sequence[float], beta: Sequence[float]) -> Symbol:
    """Symbol of the Hilbert-space adjoint ``T*: F_beta -> F_alpha``.

    ``T: F_alpha -> F_beta`` has ``len(alpha) == G.w_count`` inputs and
    ``len(beta) == G.z_count`` outputs.  The coefficient of
    ``x^delta y^gamma`` in the result is ``conj(c[gamma, delta]) alpha^delta / beta^gamma``
    where ``c[gamma, delta]`` is the coefficient of ``z^gamma w^delta`` in ``G``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != (G.w_count,):
        raise ValueError(f"alpha must have {G.w_count} entries")
    if beta.shape != (G.z_count,):
        raise ValueError(f"beta must have {G.z_count} entries")
    if np.any(alpha <= 0) or np.any(beta <= 0):
        raise ValueError("weights must be strictly positive")
    out = {}
    for key, c in G.poly.items():
        g, d = G.split(key)
        scale = float(np.prod(alpha ** np.array(d)) / np.prod(beta ** np.array(g)))
        out[tuple(d) + tuple(g)] = c.conjugate() * scale
    poly = MPoly(G.w_count + G.z_count, out)
    return Symbol(poly, G.w_count, G.z_count, poly.degree(range(G.w_count, G.w_count + G.z_count)))


def compose_symbol(S: LinOp, T: LinOp, degree: int) -> Symbol:
    """Symbol of ``S o T`` computed as ``S`` extended by spectators acting on ``G_T``."""
    if S.n_in != T.m_out:
        raise ValueError(f"cannot compose: T produces {T.m_out} variables, S takes {S.n_in}")
    G = symbol(T, degree)
    poly = TensorExtend(S, T.n_in).apply(MPoly(G.poly.nvars, G.poly.terms))
    wv = range(S.m_out, S.m_out + T.n_in)
    return Symbol(poly.truncate(degree, wv), S.m_out, T.n_in, degree)


# ---------------------------------------------------------------------------
# preserver classification


@dataclass(frozen=True)
class Degenerate:
    """Operator of rank <= 1 (complex) or <= 2 (real): ``T(P) = sum_k phi_k(P) Q_k``."""

    rank: int
    factors: tuple[MPoly, ...]
    functionals: tuple[dict, ...]
    verdict: Verdict | None

    @property
    def refuted(self) -> bool:
        return self.verdict is not None and self.verdict.refuted

    def to_json(self) -> dict:
        return {
            "result": "degenerate",
            "rank": self.rank,
            "factors": [f.to_json() for f in self.factors],
            "verdict": None if self.verdict is None else self.verdict.to_json(),
        }


@dataclass(frozen=True)
class SymbolStable:
    """Outcome of the symbol test for sign ``sign`` (``minus`` uses ``G(z, -w)``)."""

    sign: str
    verdict: Verdict
    polarizations: int
    beta: tuple[int, ...] | None = None

    @property
    def refuted(self) -> bool:
        return self.verdict.refuted

    def to_json(self) -> dict:
        out = {"result": "symbol_stable", "sign": self.sign, "polarizations": self.polarizations,
               "verdict": self.verdict.to_json()}
        if self.beta is not None:
            out["beta"] = list(self.beta)
        return out


@dataclass(frozen=True)
class NotPreserver:
    """A stable input ``witness`` whose image ``image`` is refuted by ``verdict``."""

    witness: MPoly
    image: MPoly
    verdict: Verdict

    @property
    def refuted(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"result": "not_preserver", "witness": self.witness.to_json(), "image": self.image.to_json(),
                "verdict": self.verdict.to_json()}


def _image_verdict(img: MPoly, field_: str, trials: int, seed: int, tol: float) -> Verdict:
    if img.is_zero() or img.degree() == 0:
        return Verdict("certified_yes", method="constant")
    if img.nvars == 1:
        return is_stable_uni(img, Region.REAL if field_ == "real" else Region.UPPER, tol)
    return is_stable_multi(img, Region.UPPER, trials, seed, tol)


def _stable_inputs(n: int, degree: int, field_: str, count: int, seed: int):
    """Deterministic stream of stable polynomials: ``(1+z_1)^d`` first, then random products."""
    one = MPoly.constant(n)
    for d in range(1, degree + 1):
        yield (one + MPoly.var(n, 0)) ** d
    rng = np.random.default_rng([seed, 7])
    for _ in range(count):
        p = one
        for _ in range(int(rng.integers(1, degree + 1))):
            j = int(rng.integers(n))
            root = rng.standard_cauchy()
            if field_ == "complex":
                root = root - 1j * abs(rng.standard_cauchy())
            p = p * (MPoly.var(n, j) - root)
        yield p


def _find_counterexample(T: LinOp, field_: str, degree: int, trials: int, seed: int, tol: float,
                         functional=None):
    count = min(trials, 256)
    for p in _stable_inputs(T.n_in, degree, field_, count, seed):
        if functional is not None and abs(functional(p)) <= 1e-9:
            continue
        img = T.apply(p)
        v = _image_verdict(img, field_, min(trials, 256), seed, tol)
        if v.refuted:
            return NotPreserver(p, img, v)
    return None


def _degenerate(T: LinOp, field_: str, degree: int, rank: int, trials: int, seed: int, tol: float):
    M, rows, cols = coefficient_matrix(T, degree)
    m = T.m_out
    if rank == 0:
        return Degenerate(0, (), (), None)
    U, s, Vh = np.linalg.svd(M.real if field_ == "real" else M)
    factors = []
    functionals = []
    for k in range(rank):
        vec = Vh[k]
        j = int(np.argmax(np.abs(vec)))
        norm = vec[j]
        factors.append(MPoly(m, {g: c / norm for g, c in zip(cols, vec)}))
        functionals.append({tuple(a): complex(u) for a, u in zip(rows, U[:, k] * s[k] * norm)})
    if rank == 1:
        target = factors[0]
    else:
        target = None
    if target is not None:
        verdict = _image_verdict(target, field_, trials, seed, tol)
    else:
        # real rank two: Q + iR stable for one orientation
        q, r = factors
        verdict = None
        for sign in (1.0, -1.0):
            cand = q + r.scale(sign * 1j)
            if cand.degree() <= 0:
                verdict = Verdict("certified_yes", method="constant")
            elif cand.nvars == 1:
                verdict = is_stable_uni(cand, Region.UPPER, tol)
            else:
                verdict = is_stable_multi(cand, Region.UPPER, trials, seed, tol)
            if not verdict.refuted:
                break
    if verdict.refuted:
        phi = functionals[0]

        def functional(p):
            return sum(c * phi.get(a, 0.0) for a, c in p.items())

        cex = _find_counterexample(T, field_, degree, trials, seed, tol, functional)
        if cex is not None:
            return cex
    return Degenerate(rank, tuple(factors), tuple(functionals), verdict)


def classify_preserver(T: LinOp, field: str = "real", degree: int = 4, trials: int = 1000, seed: int = 42,
                       tol: float = DEFAULT_TOL):
    """Classify ``T`` as a Laguerre-Polya preserver at truncation degree ``degree``.

    1. Operators of rank <= 1 (complex) or <= 2 (real) are reported as
       :class:`Degenerate` with their factors, whose stability is checked.
    2. Otherwise every polarization ``Lambda_beta G_T(z, -w)`` (and, for the
       real field, ``Lambda_beta G_T(z, w)``) with ``beta`` in ``{1..degree}^n``
       is tested for stability; the first sign passing all of them gives
       :class:`SymbolStable`.
    3. When every sign is refuted, stable inputs are searched for one whose
       image is refuted, giving :class:`NotPreserver`; failing that, the
       symbol-level refutation is returned as a :class:`SymbolStable` whose
       verdict is ``certified_no``.
    """
    if field not in ("real", "complex"):
        raise ValueError("field must be 'real' or 'complex'")
    rank = op_rank(T, degree)
    if field == "real":
        M, _, _ = coefficient_matrix(T, degree)
        if np.any(np.abs(M.imag) > 1e-12 * max(1.0, float(np.abs(M).max(initial=0.0)))):
            raise ValueError("operator has non-real coefficients; classify it over the complex field")
    if rank <= (2 if field == "real" else 1):
        return _degenerate(T, field, degree, rank, trials, seed, tol)

    n = T.n_in
    sym = symbol(T, degree * n)
    signs = ("minus", "plus") if field == "real" else ("minus",)
    failures = []
    for sign in signs:
        G = negate_w(sym) if sign == "minus" else sym
        verdict = None
        count = 0
        failed_beta = None
        for beta in itertools.product(range(1, degree + 1), repeat=n):
            P = lambda_beta(G, beta)
            if P.is_zero() or P.degree() == 0:
                continue
            count += 1
            verdict = is_stable_multi(P, Region.UPPER, trials, seed, tol)
            if verdict.refuted:
                failed_beta = beta
                break
        if verdict is None:
            verdict = Verdict("certified_yes", method="constant")
        if failed_beta is None:
            return SymbolStable(sign, Verdict("probably_yes", trials=trials, seed=seed,
                                              method=verdict.method), count)
        failures.append(SymbolStable(sign, verdict, count, failed_beta))

    cex = _find_counterexample(T, field, degree, trials, seed, tol)
    if cex is not None:
        return cex
    return failures[0]


# ---------------------------------------------------------------------------
# serialization


def _mono_list(mapping: Mapping[MultiIndex, complex]) -> list:
    return [{"alpha": list(a), "re": complex(c).real, "im": complex(c).imag}
            for a, c in sorted(mapping.items(), key=lambda kv: (sum(kv[0]), kv[0]))]


def op_to_json(T: LinOp) -> dict:
    if isinstance(T, Table):
        return {"kind": "table", "n_in": T.n_in, "m_out": T.m_out,
                "entries": [{"alpha": list(a), "image": img.to_json()}
                            for a, img in sorted(T.entries.items(), key=lambda kv: (sum(kv[0]), kv[0]))]}
    if isinstance(T, Diagonal):
        out = {"kind": "diagonal", "nvars": T.nvars, "lambda": _mono_list(T.lam)}
        if T.default:
            out["default"] = {"re": complex(T.default).real, "im": complex(T.default).imag}
        return out
    if isinstance(T, Diff):
        return {"kind": "diff", "g": T.g.to_json()}
    if isinstance(T, Mult):
        return {"kind": "mult", "g": T.g.to_json()}
    if isinstance(T, Compose):
        return {"kind": "compose", "outer": op_to_json(T.outer), "inner": op_to_json(T.inner)}
    if isinstance(T, TensorExtend):
        return {"kind": "tensor_extend", "base": op_to_json(T.base), "extra_vars": T.extra_vars}
    raise TypeError(f"cannot serialize {type(T).__name__}")


def op_from_json(data: Mapping) -> LinOp:
    kind = data.get("kind")
    if kind == "table":
        entries = {tuple(e["alpha"]): MPoly.from_json(e["image"]) for e in data.get("entries", [])}
        return Table(int(data["n_in"]), int(data["m_out"]), entries)
    if kind == "diagonal":
        lam: dict = {}
        for t in data.get("lambda", []):
            a = tuple(int(x) for x in t["alpha"])
            lam[a] = lam.get(a, 0j) + complex(t.get("re", 0.0), t.get("im", 0.0))
        d = data.get("default", 0.0)
        default = complex(d["re"], d.get("im", 0.0)) if isinstance(d, Mapping) else complex(d)
        return Diagonal(int(data["nvars"]), lam, default)
    if kind == "diff":
        return Diff(MPoly.from_json(data["g"]))
    if kind == "mult":
        return Mult(MPoly.from_json(data["g"]))
    if kind == "compose":
        return Compose(op_from_json(data["outer"]), op_from_json(data["inner"]))
    if kind == "tensor_extend":
        return TensorExtend(op_from_json(data["base"]), int(data["extra_vars"]))
    raise ValueError(f"unknown operator kind {kind!r}")
