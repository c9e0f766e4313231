"""Truncated formal series with exact rational coefficients.

Two layers sit on top of the cohomology ring:

* ``HbarLaurent``: a finite Laurent polynomial in the formal symbol hbar
  whose coefficients are cohomology classes.
* ``QSeries``: a power series in the curve-class variables q_1..q_N,
  truncated at a total degree D, whose coefficients are ``HbarLaurent``
  values.  ``ScalarQSeries`` is the rational-coefficient sibling used for
  transformation data.

The exponential prefactor common to generating-series conventions is never
materialized; series are always stored in reduced form, coefficient by curve
class.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import NonInvertible, SpaceMismatch, TruncationMismatch
from .ring import (
    AmbientSpace,
    CohClass,
    ONE,
    ZERO,
    coh_from_obj,
    coh_to_obj,
    format_fraction,
    parse_fraction,
)


def default_floor(space: AmbientSpace, max_degree: int) -> int:
    """Guard bound for hbar windows; generous enough for every pipeline series."""
    return -((max(space.factors) + 1) * max_degree + sum(space.factors) + 3)


class HbarLaurent:
    """Finite Laurent polynomial in hbar with ``CohClass`` coefficients.

    ``window`` records the bounds a computation was carried out with; stored
    exponents always lie inside it.  Equality compares the pruned terms only.
    """

    __slots__ = ("space", "terms", "window")

    def __init__(self, space: AmbientSpace, terms: dict, window=None):
        self.space = space
        pruned = {}
        for k, cls in terms.items():
            if cls.space != space:
                raise SpaceMismatch("coefficient class on a different ambient space")
            if not cls.is_zero:
                pruned[int(k)] = cls
        if window is None:
            if pruned:
                window = (min(pruned), max(pruned))
            else:
                window = (0, 0)
        else:
            window = (int(window[0]), int(window[1]))
            if pruned and (min(pruned) < window[0] or max(pruned) > window[1]):
                raise ValueError("stored exponent outside the declared window")
        self.terms = pruned
        self.window = window

    # -- constructors --------------------------------------------------------

    @classmethod
    def unit(cls, space: AmbientSpace) -> "HbarLaurent":
        return cls(space, {0: space.unit()})

    @classmethod
    def zero(cls, space: AmbientSpace) -> "HbarLaurent":
        return cls(space, {})

    @classmethod
    def linear(cls, space: AmbientSpace, divisor: CohClass, k) -> "HbarLaurent":
        """The degree-one element ``divisor + k*hbar``."""
        return cls(space, {0: divisor, 1: space.unit().scale(k)}, window=(0, 1))

    # -- inspection ----------------------------------------------------------

    def coefficient(self, k: int) -> CohClass:
        return self.terms.get(k, self.space.zero())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self):
        return sorted(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "HbarLaurent"):
        if self.space != other.space:
            raise SpaceMismatch("Laurent operands on different ambient spaces")

    def __add__(self, other: "HbarLaurent") -> "HbarLaurent":
        self._check(other)
        terms = dict(self.terms)
        for k, cls in other.terms.items():
            terms[k] = terms.get(k, self.space.zero()) + cls
        window = (
            min(self.window[0], other.window[0]),
            max(self.window[1], other.window[1]),
        )
        return HbarLaurent(self.space, terms, window)

    def __sub__(self, other: "HbarLaurent") -> "HbarLaurent":
        return self + other.scale(-1)

    def scale(self, k) -> "HbarLaurent":
        k = Fraction(k)
        if k == 0:
            return HbarLaurent(self.space, {}, self.window)
        return HbarLaurent(
            self.space, {e: cls.scale(k) for e, cls in self.terms.items()}, self.window
        )

    def scale_class(self, c: CohClass) -> "HbarLaurent":
        return HbarLaurent(
            self.space, {e: cls * c for e, cls in self.terms.items()}, self.window
        )

    def times_hbar(self, shift: int) -> "HbarLaurent":
        return HbarLaurent(
            self.space,
            {e + shift: cls for e, cls in self.terms.items()},
            (self.window[0] + shift, self.window[1] + shift),
        )

    def __mul__(self, other: "HbarLaurent") -> "HbarLaurent":
        self._check(other)
        out: dict[int, CohClass] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                prod = ca * cb
                if prod.is_zero:
                    continue
                k = ka + kb
                out[k] = out.get(k, self.space.zero()) + prod
        window = (
            self.window[0] + other.window[0],
            self.window[1] + other.window[1],
        )
        return HbarLaurent(self.space, out, window)

    def clip(self, lo=None, hi=None) -> "HbarLaurent":
        lo = self.window[0] if lo is None else int(lo)
        hi = self.window[1] if hi is None else int(hi)
        terms = {k: cls for k, cls in self.terms.items() if lo <= k <= hi}
        return HbarLaurent(self.space, terms, (lo, hi))

    def invert(self, target_window=None) -> "HbarLaurent":
        """Invert as a formal Laurent series over the nilpotent coefficient ring.

        The element must have a nonzero scalar part at some hbar level.  When
        the scalar part lives at a single level the inverse is an exact finite
        Laurent polynomial and ``target_window`` (if given) merely clips it;
        with scalar parts at several levels the inverse is an infinite series
        and ``target_window`` is required.
        """
        scalar_levels = {
            k: cls.scalar_part for k, cls in self.terms.items() if cls.scalar_part != 0
        }
        if not scalar_levels:
            raise NonInvertible(
                "every hbar coefficient is nilpotent", window=list(self.window)
            )
        m = min(scalar_levels)
        c = scalar_levels[m]
        space = self.space
        # u := a / (c hbar^m) - 1 has a nilpotent coefficient at relative level 0
        u_terms = {k - m: cls.scale(ONE / c) for k, cls in self.terms.items()}
        u_terms[0] = u_terms.get(0, space.zero()) - space.unit()
        u = HbarLaurent(space, u_terms)
        nilpotency = sum(space.factors)
        exact = len(scalar_levels) == 1
        if not exact and target_window is None:
            raise NonInvertible(
                "scalar parts at several hbar levels need an explicit target window",
                levels=sorted(scalar_levels),
            )
        if target_window is None:
            jmax = nilpotency
        else:
            # beyond this, every monomial of u^j lands above the window
            spread = m - min(u.window[0] + m, self.window[0])
            jmax = target_window[1] + m + nilpotency * (1 + max(spread, 0)) + 1
            jmax = max(jmax, nilpotency)
        total = HbarLaurent.zero(space)
        power = HbarLaurent.unit(space)
        sign = ONE
        for j in range(jmax + 1):
            contrib = power.scale(sign / c).times_hbar(-m)
            if target_window is not None:
                contrib = contrib.clip(*target_window)
            total = total + contrib
            if power.is_zero:
                break
            power = power * u
            sign = -sign
        if target_window is not None:
            total = total.clip(*target_window)
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HbarLaurent)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "HbarLaurent(0)"
        bits = [f"hbar^{k}:{cls!r}" for k, cls in sorted(self.terms.items())]
        return "HbarLaurent(" + ", ".join(bits) + ")"


def hl_mul(a: HbarLaurent, b: HbarLaurent) -> HbarLaurent:
    return a * b


def hl_invert(a: HbarLaurent, target_window=None) -> HbarLaurent:
    return a.invert(target_window)


def _degree(beta) -> int:
    return sum(beta)


class QSeries:
    """Power series in the curve-class variables, truncated at total degree D."""

    __slots__ = ("space", "max_degree", "terms")

    def __init__(self, space: AmbientSpace, max_degree: int, terms: dict | None = None):
        if max_degree < 0:
            raise ValueError("truncation degree must be non-negative")
        self.space = space
        self.max_degree = int(max_degree)
        clean: dict[tuple[int, ...], HbarLaurent] = {}
        for beta, hl in (terms or {}).items():
            beta = space.check_curve_class(beta)
            if _degree(beta) > self.max_degree:
                raise ValueError(f"term {beta} beyond truncation degree {max_degree}")
            if hl.space != space:
                raise SpaceMismatch("coefficient on a different ambient space")
            if not hl.is_zero:
                clean[beta] = hl
        zero_beta = (0,) * space.nfactors
        clean.setdefault(zero_beta, HbarLaurent.zero(space))
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def unit(cls, space: AmbientSpace, max_degree: int) -> "QSeries":
        zero_beta = (0,) * space.nfactors
        return cls(space, max_degree, {zero_beta: HbarLaurent.unit(space)})

    @property
    def zero_beta(self) -> tuple[int, ...]:
        return (0,) * self.space.nfactors

    def term(self, beta) -> HbarLaurent:
        beta = tuple(beta)
        return self.terms.get(beta, HbarLaurent.zero(self.space))

    def betas(self):
        """All stored curve classes in graded-lexicographic order."""
        return sorted(self.terms, key=lambda b: (_degree(b), b))

    def curve_classes(self):
        """Every curve class up to the truncation degree, in graded-lex order."""
        return all_curve_classes(self.space, self.max_degree)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "QSeries"):
        if self.space != other.space:
            raise SpaceMismatch("series on different ambient spaces")
        if self.max_degree != other.max_degree:
            raise TruncationMismatch(
                f"mixed truncation degrees {self.max_degree} and {other.max_degree}"
            )

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        terms = dict(self.terms)
        for beta, hl in other.terms.items():
            terms[beta] = terms.get(beta, HbarLaurent.zero(self.space)) + hl
        return QSeries(self.space, self.max_degree, terms)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, k) -> "QSeries":
        return QSeries(
            self.space,
            self.max_degree,
            {b: hl.scale(k) for b, hl in self.terms.items()},
        )

    def scale_hl(self, hl: HbarLaurent) -> "QSeries":
        return QSeries(
            self.space,
            self.max_degree,
            {b: t * hl for b, t in self.terms.items()},
        )

    def __mul__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out: dict[tuple[int, ...], HbarLaurent] = {}
        for ba, ha in self.terms.items():
            if ha.is_zero:
                continue
            da = _degree(ba)
            for bb, hb in other.terms.items():
                if hb.is_zero or da + _degree(bb) > self.max_degree:
                    continue
                beta = tuple(x + y for x, y in zip(ba, bb))
                prod = ha * hb
                out[beta] = out.get(beta, HbarLaurent.zero(self.space)) + prod
        return QSeries(self.space, self.max_degree, out)

    def truncate(self, max_degree: int) -> "QSeries":
        terms = {
            b: hl for b, hl in self.terms.items() if _degree(b) <= max_degree
        }
        return QSeries(self.space, max_degree, terms)

    def clip_floor(self, lo: int) -> "QSeries":
        """Drop hbar levels below a guard bound (a no-op for pipeline series)."""
        return QSeries(
            self.space,
            self.max_degree,
            {b: hl.clip(lo=max(hl.window[0], lo)) for b, hl in self.terms.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return False
        if self.space != other.space or self.max_degree != other.max_degree:
            return False
        betas = set(self.terms) | set(other.terms)
        return all(self.term(b) == other.term(b) for b in betas)

    def __repr__(self):
        return f"QSeries(D={self.max_degree}, terms={len(self.terms)})"


def all_curve_classes(space: AmbientSpace, max_degree: int):
    """Curve classes with total degree <= max_degree, graded-lex order."""
    out = []

    def rec(prefix, remaining):
        if len(prefix) == space.nfactors:
            out.append(tuple(prefix))
            return
        for d in range(remaining + 1):
            rec(prefix + [d], remaining - d)

    rec([], max_degree)
    return sorted(out, key=lambda b: (_degree(b), b))


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


class ScalarQSeries:
    """Truncated power series in the q-variables with rational coefficients."""

    __slots__ = ("space", "max_degree", "terms")

    def __init__(self, space: AmbientSpace, max_degree: int, terms: dict | None = None):
        self.space = space
        self.max_degree = int(max_degree)
        clean: dict[tuple[int, ...], Fraction] = {}
        for beta, c in (terms or {}).items():
            beta = space.check_curve_class(beta)
            if _degree(beta) > self.max_degree:
                raise ValueError(f"term {beta} beyond truncation degree {max_degree}")
            c = Fraction(c)
            if c != 0:
                clean[beta] = c
        self.terms = clean

    @classmethod
    def zero(cls, space: AmbientSpace, max_degree: int) -> "ScalarQSeries":
        return cls(space, max_degree, {})

    @classmethod
    def one(cls, space: AmbientSpace, max_degree: int) -> "ScalarQSeries":
        return cls(space, max_degree, {(0,) * space.nfactors: ONE})

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.space.nfactors, ZERO)

    def coeff(self, beta) -> Fraction:
        return self.terms.get(tuple(beta), ZERO)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "ScalarQSeries"):
        if self.space != other.space:
            raise SpaceMismatch("series on different ambient spaces")
        if self.max_degree != other.max_degree:
            raise TruncationMismatch(
                f"mixed truncation degrees {self.max_degree} and {other.max_degree}"
            )

    def __add__(self, other: "ScalarQSeries") -> "ScalarQSeries":
        self._check(other)
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, ZERO) + c
        return ScalarQSeries(self.space, self.max_degree, terms)

    def __sub__(self, other: "ScalarQSeries") -> "ScalarQSeries":
        return self + other.scale(-1)

    def scale(self, k) -> "ScalarQSeries":
        k = Fraction(k)
        return ScalarQSeries(
            self.space, self.max_degree, {b: k * c for b, c in self.terms.items()}
        )

    def __mul__(self, other: "ScalarQSeries") -> "ScalarQSeries":
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ba, ca in self.terms.items():
            da = _degree(ba)
            for bb, cb in other.terms.items():
                if da + _degree(bb) > self.max_degree:
                    continue
                beta = tuple(x + y for x, y in zip(ba, bb))
                out[beta] = out.get(beta, ZERO) + ca * cb
        return ScalarQSeries(self.space, self.max_degree, out)

    def with_constant(self, value) -> "ScalarQSeries":
        terms = dict(self.terms)
        terms[(0,) * self.space.nfactors] = Fraction(value)
        return ScalarQSeries(self.space, self.max_degree, terms)

    def set_coeff(self, beta, value) -> "ScalarQSeries":
        terms = dict(self.terms)
        terms[tuple(beta)] = Fraction(value)
        return ScalarQSeries(self.space, self.max_degree, terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScalarQSeries)
            and self.space == other.space
            and self.max_degree == other.max_degree
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"ScalarQSeries(D={self.max_degree}, {dict(sorted(self.terms.items()))})"


def qs_exp(a: ScalarQSeries) -> ScalarQSeries:
    """exp of a series with zero constant term, as the finite truncated sum."""
    if a.constant_term != 0:
        raise ValueError("qs_exp needs a zero constant term")
    out = ScalarQSeries.one(a.space, a.max_degree)
    power = ScalarQSeries.one(a.space, a.max_degree)
    for k in range(1, a.max_degree + 1):
        power = power * a
        if power.is_zero:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def qs_log(a: ScalarQSeries) -> ScalarQSeries:
    """log of a series with constant term 1."""
    if a.constant_term != 1:
        raise ValueError("qs_log needs constant term exactly 1")
    x = a - ScalarQSeries.one(a.space, a.max_degree)
    out = ScalarQSeries.zero(a.space, a.max_degree)
    power = ScalarQSeries.one(a.space, a.max_degree)
    sign = ONE
    for k in range(1, a.max_degree + 1):
        power = power * x
        if power.is_zero:
            break
        out = out + power.scale(sign / k)
        sign = -sign
    return out


def _pairing_exp(beta, f1: list[ScalarQSeries], space, max_degree) -> ScalarQSeries:
    """exp(sum_i beta_i f1^i), the substitution factor picked up by q^beta."""
    acc = ScalarQSeries.zero(space, max_degree)
    for b_i, f in zip(beta, f1):
        if b_i:
            acc = acc + f.scale(b_i)
    return qs_exp(acc)


def qs_substitute(S: QSeries, f1: list[ScalarQSeries]) -> QSeries:
    """Apply q_i -> q_i * exp(f1^i(q)) to a series, truncating at D.

    Each q^beta term is multiplied by exp(sum_i beta_i f1^i); the beta = 0
    term is never modified.
    """
    space, D = S.space, S.max_degree
    if len(f1) != space.nfactors:
        raise SpaceMismatch("need one substitution series per ambient factor")
    for f in f1:
        if f.space != space or f.max_degree != D:
            raise TruncationMismatch("substitution data must match the series")
        if f.constant_term != 0:
            raise ValueError("substitution series must have zero constant term")
    out: dict[tuple[int, ...], HbarLaurent] = {}
    for beta, hl in S.terms.items():
        if hl.is_zero:
            continue
        factor = _pairing_exp(beta, f1, space, D)
        for gamma, c in factor.terms.items():
            total = tuple(x + y for x, y in zip(beta, gamma))
            if _degree(total) > D:
                continue
            contrib = hl.scale(c)
            out[total] = out.get(total, HbarLaurent.zero(space)) + contrib
    return QSeries(space, D, out)


def compose_substitute(f: ScalarQSeries, g1: list[ScalarQSeries]) -> ScalarQSeries:
    """Evaluate f(q * exp(g1)) as a truncated scalar series."""
    space, D = f.space, f.max_degree
    out: dict[tuple[int, ...], Fraction] = {}
    for beta, c in f.terms.items():
        factor = _pairing_exp(beta, g1, space, D)
        for gamma, e in factor.terms.items():
            total = tuple(x + y for x, y in zip(beta, gamma))
            if _degree(total) > D:
                continue
            out[total] = out.get(total, ZERO) + c * e
    return ScalarQSeries(space, D, out)


def invert_substitution(f1: list[ScalarQSeries]) -> list[ScalarQSeries]:
    """Order-by-order inverse of q -> q*exp(f1): g with g + f(q e^g) = 0."""
    if not f1:
        return []
    space, D = f1[0].space, f1[0].max_degree
    g = [ScalarQSeries.zero(space, D) for _ in f1]
    for degree in range(1, D + 1):
        comps = [compose_substitute(f, g) for f in f1]
        for i, comp in enumerate(comps):
            terms = dict(g[i].terms)
            for beta, c in comp.terms.items():
                if _degree(beta) == degree and c != 0:
                    terms[beta] = -c
            g[i] = ScalarQSeries(space, D, terms)
    return g


def qs_exp_full(L: QSeries) -> QSeries:
    """exp of a class-valued series whose beta = 0 term vanishes."""
    if not L.term(L.zero_beta).is_zero:
        raise ValueError("qs_exp_full needs a vanishing beta = 0 term")
    out = QSeries.unit(L.space, L.max_degree)
    power = QSeries.unit(L.space, L.max_degree)
    for k in range(1, L.max_degree + 1):
        power = power * L
        if all(hl.is_zero for hl in power.terms.values()):
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def promote(space: AmbientSpace, f: ScalarQSeries) -> QSeries:
    """View a scalar series as a class-valued one (unit class, hbar^0)."""
    terms = {
        beta: HbarLaurent(space, {0: space.unit().scale(c)})
        for beta, c in f.terms.items()
    }
    return QSeries(space, f.max_degree, terms)


# -- serialization -----------------------------------------------------------


def hl_to_obj(hl: HbarLaurent) -> list:
    return [
        {"pow": k, "class": coh_to_obj(hl.terms[k])}
        for k in sorted(hl.terms)
    ]


def hl_from_obj(space: AmbientSpace, obj) -> HbarLaurent:
    terms = {int(e["pow"]): coh_from_obj(space, e["class"]) for e in obj}
    return HbarLaurent(space, terms)


def qseries_to_obj(S: QSeries) -> dict:
    return {
        "D": S.max_degree,
        "terms": [
            {"beta": list(beta), "hbar": hl_to_obj(S.terms[beta])}
            for beta in S.betas()
        ],
    }


def qseries_from_obj(space: AmbientSpace, obj) -> QSeries:
    terms = {
        tuple(entry["beta"]): hl_from_obj(space, entry["hbar"])
        for entry in obj["terms"]
    }
    return QSeries(space, int(obj["D"]), terms)


def scalar_to_obj(f: ScalarQSeries) -> list:
    return [
        {"beta": list(beta), "coeff": format_fraction(f.terms[beta])}
        for beta in sorted(f.terms, key=lambda b: (_degree(b), b))
    ]


def scalar_from_obj(space: AmbientSpace, max_degree: int, obj) -> ScalarQSeries:
    terms = {tuple(e["beta"]): parse_fraction(e["coeff"]) for e in obj}
    return ScalarQSeries(space, max_degree, terms)
