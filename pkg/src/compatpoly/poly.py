"""Polynomials living in a fixed ambient space R^d[t], families of them, and
the numeric tolerance policy shared by every module.

Coefficients are stored ascending by power (``coeffs[i]`` multiplies t**i).
The ambient degree is explicit, so a polynomial whose true degree is below
``d`` carries ``d - deg`` roots at infinity.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly


class ZeroMemberError(ValueError):
    """A zero polynomial was passed where the operation excludes it."""


@dataclass(frozen=True)
class Tolerances:
    """Numeric policy.

    tau_zero     relative threshold below which a coefficient counts as zero
    tau_root     root clustering radius and complex-margin threshold
    tau_sign     relative margin for sign tests (Wronskian, diagnostics)
    tau_proper   residual below which a convex combination counts as zero
    epsilon_perturb  starting epsilon for perturbation routines
    max_retries  number of epsilon halvings before giving up
    """

    tau_zero: float = 1e-12
    tau_root: float = 1e-6
    tau_sign: float = 1e-9
    tau_proper: float = 1e-9
    epsilon_perturb: float = 1e-3
    max_retries: int = 20

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be strictly positive")
        if self.epsilon_perturb >= 1:
            raise ValueError("epsilon_perturb must be < 1")

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def profile(cls, name: str) -> "Tolerances":
        try:
            return PROFILES[name]
        except KeyError:
            raise ValueError(f"unknown tolerance profile {name!r}; "
                             f"choose from {sorted(PROFILES)}") from None

    @classmethod
    def from_env(cls, var: str = "COMPATPOLY_TOLERANCE_PROFILE") -> "Tolerances":
        return cls.profile(os.environ.get(var, "default"))


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(tau_zero=1e-14, tau_root=1e-8, tau_sign=1e-11,
                         tau_proper=1e-12, epsilon_perturb=1e-4, max_retries=30),
    "loose": Tolerances(tau_zero=1e-10, tau_root=1e-4, tau_sign=1e-7,
                        tau_proper=1e-7, epsilon_perturb=1e-2, max_retries=12),
}

DEFAULT_TOL = PROFILES["default"]


class Poly:
    """Real polynomial in R^d[t] with an explicit ambient degree ``d``.

    Instances are immutable: the coefficient array is read-only.
    """

    __slots__ = ("coeffs", "ambient_degree")

    def __init__(self, coeffs, ambient_degree: int | None = None):
        c = np.array(coeffs, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        if ambient_degree is None:
            ambient_degree = c.size - 1
        ambient_degree = int(ambient_degree)
        if ambient_degree < 0:
            raise ValueError("ambient degree must be nonnegative")
        if c.size != ambient_degree + 1:
            raise ValueError(f"expected {ambient_degree + 1} coefficients for ambient "
                             f"degree {ambient_degree}, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "ambient_degree", ambient_degree)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def zero(cls, ambient_degree: int) -> "Poly":
        return cls(np.zeros(ambient_degree + 1), ambient_degree)

    @classmethod
    def from_roots(cls, roots: Iterable[float], lead: float = 1.0,
                   ambient_degree: int | None = None) -> "Poly":
        roots = list(roots)
        c = lead * npoly.polyfromroots(roots) if roots else np.array([float(lead)])
        d = len(roots) if ambient_degree is None else ambient_degree
        return cls(pad(c, d), d)

    @classmethod
    def monomial(cls, k: int, ambient_degree: int, coef: float = 1.0) -> "Poly":
        c = np.zeros(ambient_degree + 1)
        c[k] = coef
        return cls(c, ambient_degree)

    # queries
    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @property
    def scale(self) -> float:
        """Largest absolute coefficient."""
        return float(np.max(np.abs(self.coeffs)))

    @property
    def degree(self) -> int:
        """Exact degree (index of the last nonzero coefficient); -1 for zero."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def lead(self, tol: Tolerances = DEFAULT_TOL) -> float:
        eff = effective_degree(self, tol)
        return 0.0 if eff is IS_ZERO else float(self.coeffs[eff.degree])

    def trimmed(self, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        """Coefficients up to the effective degree."""
        eff = effective_degree(self, tol)
        if eff is IS_ZERO:
            return np.zeros(1)
        return np.array(self.coeffs[: eff.degree + 1])

    def __call__(self, t):
        return evaluate(self, t)

    def derivative(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = derivative(p)
        return p

    def with_ambient(self, d: int) -> "Poly":
        """Re-embed into R^d[t]; fails if that would drop nonzero coefficients."""
        if d >= self.ambient_degree:
            return Poly(pad(self.coeffs, d), d)
        if np.any(self.coeffs[d + 1:]):
            raise ValueError("cannot shrink ambient degree below the polynomial's degree")
        return Poly(self.coeffs[: d + 1], d)

    def normalized(self) -> "Poly":
        """Positive rescaling so the largest absolute coefficient is 1."""
        s = self.scale
        return self if s == 0 else Poly(self.coeffs / s, self.ambient_degree)

    # arithmetic
    def _check(self, other: "Poly"):
        if other.ambient_degree != self.ambient_degree:
            raise ValueError("ambient degrees differ")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.coeffs + other.coeffs, self.ambient_degree)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.coeffs - other.coeffs, self.ambient_degree)

    def __neg__(self) -> "Poly":
        return Poly(-self.coeffs, self.ambient_degree)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return multiply(self, other)
        return Poly(float(other) * self.coeffs, self.ambient_degree)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "Poly":
        return Poly(self.coeffs / float(c), self.ambient_degree)

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.ambient_degree == self.ambient_degree
                and np.array_equal(other.coeffs, self.coeffs))

    def __hash__(self):
        return hash((self.ambient_degree, self.coeffs.tobytes()))

    def allclose(self, other: "Poly", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        if other.ambient_degree != self.ambient_degree:
            return False
        ref = max(self.scale, other.scale)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol + rtol * ref))

    def tolist(self) -> list[float]:
        return [float(x) for x in self.coeffs]

    def __repr__(self):
        return f"Poly({self.tolist()}, d={self.ambient_degree})"


def pad(c, d: int) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.size > d + 1:
        if np.any(c[d + 1:]):
            raise ValueError("polynomial does not fit in the requested ambient degree")
        return c[: d + 1].copy()
    out = np.zeros(d + 1)
    out[: c.size] = c
    return out


class EffectiveDegree(NamedTuple):
    degree: int
    roots_at_infinity: int


class _IsZero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IS_ZERO"

    def __bool__(self):
        return False


IS_ZERO = _IsZero()


def evaluate(p: Poly, t):
    """Horner evaluation; ``t`` may be a scalar or an array."""
    return npoly.polyval(t, p.coeffs)


def derivative(p: Poly) -> Poly:
    if p.ambient_degree == 0:
        return Poly([0.0], 0)
    return Poly(npoly.polyder(p.coeffs), p.ambient_degree - 1)


def multiply(p: Poly, q: Poly) -> Poly:
    d = p.ambient_degree + q.ambient_degree
    return Poly(pad(npoly.polymul(p.coeffs, q.coeffs), d), d)


def effective_degree(p: Poly, tol: Tolerances = DEFAULT_TOL):
    """(degree, roots_at_infinity) with coefficients below tau_zero * scale
    treated as zero; ``IS_ZERO`` for the zero polynomial."""
    s = p.scale
    if s == 0:
        return IS_ZERO
    big = np.flatnonzero(np.abs(p.coeffs) > tol.tau_zero * s)
    deg = int(big[-1])
    return EffectiveDegree(deg, p.ambient_degree - deg)


class Family:
    """Ordered, nonempty list of polynomials sharing one ambient degree.

    ``rational`` optionally keeps exact coefficients (used by exact mode).
    """

    __slots__ = ("members", "labels", "rational")

    def __init__(self, members: Sequence[Poly], labels: Sequence[str] | None = None,
                 rational: Sequence[Sequence[Fraction]] | None = None):
        members = tuple(members)
        if not members:
            raise ValueError("a family needs at least one member")
        d = members[0].ambient_degree
        if any(m.ambient_degree != d for m in members):
            raise ValueError("all family members must share one ambient degree")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(members):
                raise ValueError("labels must match members one to one")
        if rational is not None:
            rational = tuple(tuple(Fraction(x) for x in row) for row in rational)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "rational", rational)

    def __setattr__(self, name, value):
        raise AttributeError("Family is immutable")

    @property
    def ambient_degree(self) -> int:
        return self.members[0].ambient_degree

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def subfamily(self, idx: Sequence[int]) -> "Family":
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        rational = None if self.rational is None else [self.rational[i] for i in idx]
        return Family([self.members[i] for i in idx], labels, rational)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"f{i + 1}"

    def matrix(self) -> np.ndarray:
        """(d+1) x n coefficient matrix, one column per member."""
        return np.column_stack([m.coeffs for m in self.members])

    def map(self, fn) -> "Family":
        return Family([fn(m) for m in self.members], self.labels)

    def __repr__(self):
        return f"Family({list(self.members)!r})"


def linear_combination(family: Family, weights: Sequence[float]) -> Poly:
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != len(family):
        raise ValueError(f"expected {len(family)} weights, got {w.size}")
    return Poly(family.matrix() @ w, family.ambient_degree)


def strip_common_roots(family: Family, tol: Tolerances = DEFAULT_TOL):
    """Divide out finite real roots shared by every member.

    Returns ``(reduced_family, shared_roots)``; a root shared with
    multiplicity ``k`` appears ``k`` times in ``shared_roots``.
    """
    from .roots import root_clusters

    if any(m.is_zero for m in family):
        raise ZeroMemberError("strip_common_roots needs nonzero members")
    clusters = [root_clusters(m, tol) for m in family]
    shared: list[float] = []
    for value, mult in clusters[0]:
        if abs(value.imag) > tol.tau_root * (1 + abs(value)):
            continue
        matched = [value.real]
        k = mult
        for other in clusters[1:]:
            hit = [(v, m) for v, m in other
                   if abs(v - value) <= 10 * tol.tau_root * (1 + abs(value))]
            if not hit:
                k = 0
                break
            v, m = min(hit, key=lambda vm: abs(vm[0] - value))
            matched.append(v.real)
            k = min(k, m)
        if k > 0:
            shared.extend([float(np.mean(matched))] * k)
    if not shared:
        return family, []
    shared.sort(reverse=True)
    d = family.ambient_degree - len(shared)
    divisor = npoly.polyfromroots(shared)
    reduced = []
    for m in family:
        q, _ = npoly.polydiv(m.coeffs, divisor)
        reduced.append(Poly(pad(q, d), d))
    return Family(reduced, family.labels), shared


# --- Family JSON ---------------------------------------------------------

def family_from_json(obj, exact: bool = False) -> Family:
    """Build a family from the JSON schema
    ``{"ambient_degree": d, "polys": [[c0..cd], ...], "labels": [...]}``.

    ``obj`` may be a dict or a JSON string. With ``exact=True`` a string is
    parsed with decimal literals kept as exact fractions.
    """
    if isinstance(obj, (str, bytes)):
        if exact:
            obj = json.loads(obj, parse_float=Fraction, parse_int=Fraction)
        else:
            obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise ValueError("family JSON must be an object")
    try:
        d = int(obj["ambient_degree"])
        rows = obj["polys"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed family JSON: {exc}") from None
    if d < 0:
        raise ValueError("ambient_degree must be nonnegative")
    if not isinstance(rows, list) or not rows:
        raise ValueError("'polys' must be a nonempty list")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d + 1:
            raise ValueError(f"poly {i} must list exactly {d + 1} coefficients")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float, Fraction)):
                raise ValueError(f"poly {i} has a non-numeric coefficient {x!r}")
    labels = obj.get("labels")
    members = [Poly([float(x) for x in row], d) for row in rows]
    rational = None
    if exact:
        rational = [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in rows]
    return Family(members, labels, rational)


def family_to_json(family: Family) -> dict:
    out = {"ambient_degree": family.ambient_degree,
           "polys": [m.tolist() for m in family]}
    if family.labels is not None:
        out["labels"] = list(family.labels)
    return out


def load_family(path, exact: bool = False) -> Family:
    with open(path, encoding="utf-8") as fh:
        return family_from_json(fh.read(), exact=exact)
