"""Holomorphic polynomials on the ball and the level functions built from them.

A polynomial is a sparse complex-coefficient map from multi-indices
(tuples of nonnegative ints) to coefficients.  A level function is
u(z) = |f(z)|**a * (1 - |z|**2)**b for a polynomial f and exponents
a > 0, b > 0; these are the test functions all the superlevel and
rearrangement machinery runs on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import qmc

from .geometry import ScalarField, finite_difference_gradient

MultiIndex = tuple

# |f(z)| < ZERO_TOL_SCALE * (1 + sum |coeff|) counts as a zero of f for
# gradient fallbacks and domain guards.
ZERO_TOL_SCALE = 1e-12

_MAX_TOL = 1e-10          # maximizer convergence tolerance
_MAX_STARTS = 256         # low-discrepancy start count


def _validate_index(e, n: int) -> MultiIndex:
    e = tuple(int(k) for k in e)
    if len(e) != n or any(k < 0 for k in e):
        raise ValueError(f"multi-index {e!r} invalid for dimension {n}")
    return e


@dataclass
class PolynomialFunction:
    """Sparse holomorphic polynomial sum_e c_e z^e on C^n."""

    n: int
    terms: dict

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be a positive integer")
        clean = {}
        for e, c in self.terms.items():
            e = _validate_index(e, self.n)
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        self.terms = clean

    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, value, n: int) -> "PolynomialFunction":
        return cls(n, {tuple([0] * n): complex(value)})

    @classmethod
    def coordinate(cls, i: int, n: int) -> "PolynomialFunction":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1.0 + 0.0j})

    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coeff_abs_sum(self) -> float:
        """sum |c_e|, an upper bound for |f| on the closed unit ball."""
        return float(sum(abs(c) for c in self.terms.values()))

    def zero_tolerance(self) -> float:
        return ZERO_TOL_SCALE * (1.0 + self.coeff_abs_sum())

    def evaluate(self, Z) -> np.ndarray:
        """Evaluate at an (m, n) complex array (or a single point)."""
        Z = np.asarray(Z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        if Z.shape[1] != self.n:
            raise ValueError("point dimension does not match the polynomial")
        m = Z.shape[0]
        if not self.terms:
            out = np.zeros(m, dtype=complex)
            return out[0] if single else out
        # power tables per variable up to the max exponent used
        max_e = [0] * self.n
        for e in self.terms:
            for i, k in enumerate(e):
                max_e[i] = max(max_e[i], k)
        pows = []
        for i in range(self.n):
            tab = np.empty((max_e[i] + 1, m), dtype=complex)
            tab[0] = 1.0
            for k in range(1, max_e[i] + 1):
                tab[k] = tab[k - 1] * Z[:, i]
            pows.append(tab)
        out = np.zeros(m, dtype=complex)
        for e, c in sorted(self.terms.items()):
            term = np.full(m, c, dtype=complex)
            for i, k in enumerate(e):
                if k:
                    term = term * pows[i][k]
            out += term
        return out[0] if single else out

    def partial(self, i: int) -> "PolynomialFunction":
        """Holomorphic partial d/dz_i."""
        if not (0 <= i < self.n):
            raise ValueError("variable index out of range")
        out = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return PolynomialFunction(self.n, out)

    def partials(self):
        return [self.partial(i) for i in range(self.n)]

    def dilate(self, lam: float) -> "PolynomialFunction":
        """f(lam * z); requires 0 < lam <= 1 to stay ball-to-ball."""
        if not (0.0 < lam <= 1.0):
            raise ValueError("dilation factor must lie in (0, 1]")
        return PolynomialFunction(
            self.n, {e: c * lam ** sum(e) for e, c in self.terms.items()}
        )

    def scaled(self, c) -> "PolynomialFunction":
        return PolynomialFunction(self.n, {e: v * c for e, v in self.terms.items()})

    def __add__(self, other: "PolynomialFunction") -> "PolynomialFunction":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return PolynomialFunction(self.n, out)


def evaluate(f: PolynomialFunction, z) -> complex:
    """Value of f at a single point (thin wrapper over batch evaluate)."""
    coords = z.coords if hasattr(z, "coords") else np.asarray(z, dtype=complex)
    return complex(f.evaluate(coords))


def complex_partials(f: PolynomialFunction):
    return f.partials()


# ----------------------------------------------------------------------
# JSON round trip: {"n": n, "terms": [{"exponents": [...], "re": x, "im": y}]}

def poly_to_json(f: PolynomialFunction) -> dict:
    return {
        "n": f.n,
        "terms": [
            {"exponents": list(e), "re": c.real, "im": c.imag}
            for e, c in sorted(f.terms.items())
        ],
    }


def poly_from_json(doc: dict) -> PolynomialFunction:
    try:
        n = int(doc["n"])
        terms = {
            tuple(int(k) for k in t["exponents"]): complex(float(t["re"]), float(t["im"]))
            for t in doc["terms"]
        }
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial document: {exc}") from exc
    return PolynomialFunction(n, terms)


def save_poly(f: PolynomialFunction, path) -> None:
    with open(path, "w") as fh:
        json.dump(poly_to_json(f), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_poly(path) -> PolynomialFunction:
    with open(path) as fh:
        return poly_from_json(json.load(fh))


# ----------------------------------------------------------------------

@dataclass
class LevelFunction:
    """u(z) = |f(z)|**a * (1 - |z|**2)**b with a > 0, b > 0."""

    f: PolynomialFunction
    a: float
    b: float
    _t0_cache: tuple = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("level-function exponents must be positive")
        self.a = float(self.a)
        self.b = float(self.b)

    @property
    def n(self) -> int:
        return self.f.n

    def evaluate(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        fz = np.abs(self.f.evaluate(Z))
        r2 = np.sum(np.abs(Z) ** 2, axis=1)
        if np.any(r2 >= 1.0):
            raise ValueError("level functions are defined on the open ball")
        out = fz**self.a * (1.0 - r2) ** self.b
        return float(out[0]) if single else out

    def gradient(self, Z) -> np.ndarray:
        """du/dz_i = u * ((a/2) f_i / f - b conj(z_i) / (1 - |z|^2)).

        At numerical zeros of f the logarithmic form degenerates; those
        points fall back to finite differences of the values (for a >= 1
        the gradient magnitude stays bounded there).
        """
        Z = np.asarray(Z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        fz = self.f.evaluate(Z)
        r2 = np.sum(np.abs(Z) ** 2, axis=1)
        u = np.abs(fz) ** self.a * (1.0 - r2) ** self.b
        tol = self.f.zero_tolerance()
        ok = np.abs(fz) > tol
        fz_safe = np.where(ok, fz, 1.0)
        G = np.empty_like(Z)
        for i in range(self.n):
            fi = self.f.partial(i).evaluate(Z)
            G[:, i] = u * (
                0.5 * self.a * fi / fz_safe - self.b * np.conj(Z[:, i]) / (1.0 - r2)
            )
        if not np.all(ok):
            bad = np.nonzero(~ok)[0]
            G[bad] = finite_difference_gradient(self.evaluate, Z[bad])
        return G[0] if single else G

    def log_evaluate(self, Z) -> np.ndarray:
        """log u; raises where f vanishes to numerical precision."""
        Z = np.asarray(Z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        fz = np.abs(self.f.evaluate(Z))
        if np.any(fz <= self.f.zero_tolerance()):
            raise ValueError("log level function evaluated at a zero of f")
        r2 = np.sum(np.abs(Z) ** 2, axis=1)
        out = self.a * np.log(fz) + self.b * np.log1p(-r2)
        return float(out[0]) if single else out

    def log_gradient(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        fz = self.f.evaluate(Z)
        if np.any(np.abs(fz) <= self.f.zero_tolerance()):
            raise ValueError("log level function evaluated at a zero of f")
        r2 = np.sum(np.abs(Z) ** 2, axis=1)
        G = np.empty_like(Z)
        for i in range(self.n):
            fi = self.f.partial(i).evaluate(Z)
            G[:, i] = 0.5 * self.a * fi / fz - self.b * np.conj(Z[:, i]) / (1.0 - r2)
        return G[0] if single else G

    def support_radius_for(self, threshold: float) -> float:
        """Radius beyond which u <= threshold, certified by |f| <= sum|c|.

        Solves sum|c|**a * (1 - r^2)**b = threshold; returns a value in
        (0, 1).  Returns 0.0 when the bound puts u below the threshold
        everywhere.
        """
        if threshold <= 0:
            raise ValueError("threshold must be positive")
        top = self.f.coeff_abs_sum() ** self.a
        if top <= threshold:
            return 0.0
        one_minus_r2 = (threshold / top) ** (1.0 / self.b)
        if one_minus_r2 >= 1.0:
            return 0.0
        return math.sqrt(1.0 - one_minus_r2)

    def max_value(self) -> float:
        """Max of u over the ball (t_0), by multi-start coordinate ascent."""
        if self._t0_cache is None:
            self._t0_cache = _maximize_level(self)
        return self._t0_cache[0]

    def argmax(self) -> np.ndarray:
        if self._t0_cache is None:
            self._t0_cache = _maximize_level(self)
        return self._t0_cache[1]


def level_function_field(u: LevelFunction) -> ScalarField:
    """ScalarField view of a level function (full-ball support)."""
    return ScalarField(
        n=u.n,
        evaluate=u.evaluate,
        gradient=u.gradient,
        support_radius_hint=1.0,
        sup_value=None,
    )


def log_level_field(u: LevelFunction) -> ScalarField:
    """ScalarField for log u, defined away from zeros of f."""
    return ScalarField(n=u.n, evaluate=u.log_evaluate, gradient=u.log_gradient)


# ----------------------------------------------------------------------
# maximizer: fixed Halton start set, cyclic golden-section coordinate ascent

def _halton_starts(n: int, count: int) -> np.ndarray:
    d = 2 * n
    sampler = qmc.Halton(d=d, scramble=False)
    X = 2.0 * sampler.random(count) - 1.0
    nrm = np.linalg.norm(X, axis=1)
    X *= (0.92 / np.maximum(nrm, 0.92))[:, None]  # pull outside points into the ball
    Z = X[:, :n] + 1j * X[:, n:]
    Z = np.vstack([np.zeros((1, n), dtype=complex), Z])
    return Z


def _eval_real(u: LevelFunction, X: np.ndarray) -> np.ndarray:
    n = u.n
    return u.evaluate(X[:, :n] + 1j * X[:, n:])


def _golden_line_max(u: LevelFunction, X: np.ndarray, k: int, iters: int = 42):
    """Vectorized golden-section maximization along real coordinate k."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    other2 = np.sum(X**2, axis=1) - X[:, k] ** 2
    beta = np.sqrt(np.maximum(1.0 - 1e-9 - other2, 0.0))
    a = -beta
    b = beta.copy()

    def val(x):
        Y = X.copy()
        Y[:, k] = x
        return _eval_real(u, Y)

    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = val(c)
    fd = val(d)
    for _ in range(iters):
        left = fc > fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc = val(c)
        fd = val(d)
    x = 0.5 * (a + b)
    return x, val(x)


def _maximize_level(u: LevelFunction):
    Z = _halton_starts(u.n, _MAX_STARTS)
    X = np.concatenate([Z.real, Z.imag], axis=1)
    best = _eval_real(u, X)
    d = 2 * u.n
    for sweep in range(80):
        improved = 0.0
        for k in range(d):
            xk, vals = _golden_line_max(u, X, k)
            take = vals > best
            X[take, k] = xk[take]
            improved = max(improved, float(np.max(vals - best, initial=0.0)))
            best = np.maximum(best, vals)
        if sweep == 0:
            # keep the most promising basins only
            keep = np.argsort(best)[-32:]
            X = X[keep]
            best = best[keep]
        elif improved < _MAX_TOL * (1.0 + float(np.max(best))):
            break
    i = int(np.argmax(best))
    xo = X[i]
    zo = xo[: u.n] + 1j * xo[u.n :]
    return float(best[i]), zo


# ----------------------------------------------------------------------
# deterministic polynomial families for batteries

def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def _random_poly(n: int, degree: int, rng: np.random.Generator) -> PolynomialFunction:
    # all multi-indices up to the degree, coefficients uniform on the unit disk
    idx = [()]
    for _ in range(n):
        idx = [e + (k,) for e in idx for k in range(degree + 1)]
    idx = [e for e in idx if sum(e) <= degree]
    terms = {}
    for e in sorted(idx):
        r = math.sqrt(rng.uniform(0.0, 1.0))
        th = rng.uniform(0.0, 2.0 * math.pi)
        terms[e] = r * complex(math.cos(th), math.sin(th))
    return PolynomialFunction(n, terms)


def test_family(
    family: str,
    *,
    n: int,
    seed: int = 0,
    degree: int = 2,
    count: int = 5,
    base: PolynomialFunction = None,
    lambdas: Sequence[float] = (0.25, 0.5, 0.75),
):
    """Deterministic test polynomials.

    family is one of 'constants', 'coordinates', 'random_poly', 'dilates'.
    """
    if family == "constants":
        return [PolynomialFunction.constant(1.0, n)]
    if family == "coordinates":
        return [PolynomialFunction.coordinate(i, n) for i in range(n)]
    if family == "random_poly":
        rng = _rng(seed)
        return [_random_poly(n, degree, rng) for _ in range(count)]
    if family == "dilates":
        if base is None:
            base = PolynomialFunction.coordinate(0, n) + PolynomialFunction.constant(0.5, n)
        for lam in lambdas:
            if not (0.0 < lam < 1.0):
                raise ValueError("dilation factors must lie in (0, 1)")
        return [base.dilate(lam) for lam in lambdas]
    raise ValueError(f"unknown family {family!r}")
