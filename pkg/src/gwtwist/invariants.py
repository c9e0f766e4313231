"""Curve counts and duality data extracted from normalized series.

Downstream of the solver: read one-point descendant coefficients out of a
normalized series, turn the hbar^{-2} layer into curve counts, invert the
multiple-cover weighting on threefold-type geometries, and build/solve the
dual-series factorization for convex bundles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Infeasible, NotNormalized, Unsupported
from .mirror import MirrorMap, apply_transform, normal_form, solve_mirror_map
from .ring import CohClass, ONE, ZERO, euler_class, format_fraction
from .series import (
    HbarLaurent,
    QSeries,
    ScalarQSeries,
    promote,
    qseries_to_obj,
    scalar_to_obj,
)
from .twist import CONVEX, GeometrySpec, check_conditions, classify, i_function, j_ambient


@dataclass(frozen=True)
class DescendantTable:
    """Raw one-point descendant coefficients of a normalized series.

    Keys are (curve class, psi-power a, basis-monomial index); the value is
    the coefficient of that monomial in the hbar^(-2-a) layer.  Pairing
    against a chosen basis is left to the caller.
    """

    space: object
    max_degree: int
    entries: dict

    def value(self, beta, a: int, exponents) -> Fraction:
        idx = self.space.basis_index[tuple(exponents)]
        return self.entries.get((tuple(beta), int(a), idx), ZERO)


def extract_descendants(Jn: QSeries) -> DescendantTable:
    """Tabulate the hbar^(-2-a) coefficients of a normalized series.

    The q = 0 term provides the reference Euler class; the series must carry
    scalar factor 1 and zero divisor components against it, else
    NotNormalized.
    """
    space = Jn.space
    hl0 = Jn.term(Jn.zero_beta)
    if any(k != 0 for k in hl0.exponents()):
        raise NotNormalized("q = 0 term must sit at hbar^0")
    ctop = hl0.coefficient(0)
    nf = normal_form(Jn, ctop)
    if not nf.is_normalized:
        raise NotNormalized(
            "series must have scalar factor 1 and no divisor components",
            g_is_one=nf.g == ScalarQSeries.one(space, Jn.max_degree),
        )
    entries: dict = {}
    for beta, hl in Jn.terms.items():
        if sum(beta) == 0:
            continue
        for k in hl.exponents():
            if k > -2:
                continue
            a = -2 - k
            for e, c in hl.terms[k].items():
                entries[(beta, a, space.basis_index[e])] = c
    return DescendantTable(space=space, max_degree=Jn.max_degree, entries=entries)


def normalized_series(g: GeometrySpec, max_degree: int) -> QSeries:
    """Run the pipeline: twisted series, solve the transform, apply it."""
    report = check_conditions(g)
    if not report.all_nonneg:
        raise Unsupported(
            "geometry fails the per-factor positivity condition",
            nonneg=list(report.nonneg),
        )
    I = i_function(g, max_degree)
    ctop = euler_class(g.space, g.bundle)
    m = solve_mirror_map(I, ctop)
    return apply_transform(I, m)


def n_numbers(g: GeometrySpec, max_degree: int) -> dict:
    """Curve counts per curve class, from the hbar^{-2} layer.

    Each count is the total-divisor pairing of the hbar^{-2} coefficient,
    divided by the total degree of the class.
    """
    space = g.space
    T = normalized_series(g, max_degree)
    divisor = space.divisor_sum()
    out: dict = {}
    for beta in T.curve_classes():
        total = sum(beta)
        if total == 0:
            continue
        a = T.term(beta).coefficient(-2)
        out[beta] = space.integrate(divisor * a) / total
    return out


def aspinwall_morrison(g: GeometrySpec, N: dict) -> dict:
    """Invert the k^-3 multiple-cover weighting: N_d = sum_{k|d} n_{d/k}/k^3.

    Only meaningful on threefold-type geometries over a single projective
    space with vanishing combined degree; anything else is refused.
    """
    if g.space.nfactors != 1:
        raise Unsupported("multiple-cover inversion needs a single-factor ambient")
    r = g.space.factors[0]
    kinds = [classify(l) for l in g.bundle.lines]
    n_convex = sum(1 for k in kinds if k == CONVEX)
    n_concave = len(kinds) - n_convex
    dim = r - n_convex + n_concave
    if dim != 3:
        raise Unsupported(
            "multiple-cover inversion needs expected dimension 3", dimension=dim
        )
    report = check_conditions(g)
    combined_zero = all(
        v == 0 for v in _combined_values(g)
    )
    if not (report.all_nonneg and combined_zero):
        raise Unsupported("multiple-cover inversion needs vanishing combined degree")
    counts = {beta[0]: value for beta, value in N.items()}
    out: dict = {}
    for d in sorted(counts):
        total = counts[d]
        for k in range(2, d + 1):
            if d % k == 0:
                total -= out[d // k] * Fraction(1, k**3)
        out[d] = total
    return out


def _combined_values(g: GeometrySpec):
    vals = []
    for i, r in enumerate(g.space.factors):
        v = r + 1
        for l in g.bundle.lines:
            if classify(l) == CONVEX:
                v -= l[i]
            else:
                v += l[i]
        vals.append(v)
    return vals


@dataclass(frozen=True)
class SerrePair:
    """A convex twisted series and its dual-range partner.

    The dual series carries the rank sign and, per summand, the mirrored
    product of linear factors over the shifted non-positive range.
    """

    i_prime: QSeries
    i_prime_dual: QSeries
    sign: int


def serre_dual_pair(g: GeometrySpec, max_degree: int) -> SerrePair:
    """Build the dual pair for a convex bundle from the same ambient series.

    The primary series multiplies (c1 + k hbar) for k = 1..<c1,beta>; the
    dual multiplies (-c1 + k hbar) for k = -<c1,beta>+1..0 and carries the
    global sign (-1)^rank.  Both start at the unit class (times the sign for
    the dual); the Euler factor is deliberately not included.
    """
    space = g.space
    if any(classify(l) != CONVEX for l in g.bundle.lines):
        raise Unsupported("dual pair construction needs a convex bundle")
    if g.external_j is not None:
        J = g.external_j.truncate(max_degree)
    else:
        J = j_ambient(space, max_degree)
    sign = -1 if g.bundle.rank % 2 else 1
    prime: dict = {}
    dual: dict = {}
    for beta in J.curve_classes():
        if sum(beta) == 0:
            prime[beta] = HbarLaurent.unit(space)
            dual[beta] = HbarLaurent.unit(space).scale(sign)
            continue
        hp = J.term(beta)
        hd = J.term(beta).scale(sign)
        for l in g.bundle.lines:
            pairing = sum(li * di for li, di in zip(l, beta))
            c1 = space.divisor(l)
            for k in range(1, pairing + 1):
                hp = hp * HbarLaurent.linear(space, c1, k)
            for k in range(-pairing + 1, 1):
                hd = hd * HbarLaurent.linear(space, -c1, k)
        prime[beta] = hp
        dual[beta] = hd
    return SerrePair(
        i_prime=QSeries(space, max_degree, prime),
        i_prime_dual=QSeries(space, max_degree, dual),
        sign=sign,
    )


@dataclass(frozen=True)
class SerreFactorSolution:
    """Dials relating the dual pair: phi * e^{string/hbar} * transform."""

    phi: ScalarQSeries
    map: MirrorMap
    string: ScalarQSeries
    residual: QSeries

    def to_obj(self) -> dict:
        return {
            "phi": scalar_to_obj(self.phi),
            "map": self.map.to_obj(),
            "string": scalar_to_obj(self.string),
            "residual_zero": all(hl.is_zero for hl in self.residual.terms.values()),
            "residual": qseries_to_obj(self.residual),
        }


def _assemble(pair: SerrePair, phi, string, m):
    transformed = apply_transform(pair.i_prime, m, string=string)
    return promote(pair.i_prime.space, phi) * transformed


def solve_serre_factor(pair: SerrePair) -> SerreFactorSolution:
    """Solve phi * e^{string/hbar} * transform(I') = I'_dual order by order.

    Unknowns per curve class: the scalar factor coefficient (unit at hbar^0),
    the string shift (unit at hbar^-1), and the divisor shifts (p_i at
    hbar^-1), each acting once through the q = 0 term.  Any residual outside
    that span is an obstruction: Infeasible reports the first degree where
    one appears.
    """
    space = pair.i_prime.space
    D = pair.i_prime.max_degree
    phi = ScalarQSeries.one(space, D).with_constant(pair.sign)
    string = ScalarQSeries.zero(space, D)
    m = MirrorMap.zero(space, D)
    sign = Fraction(pair.sign)
    for level in range(1, D + 1):
        current = _assemble(pair, phi, string, m)
        f1 = list(m.f1)
        for beta in pair.i_prime.curve_classes():
            if sum(beta) != level:
                continue
            R = pair.i_prime_dual.term(beta) - current.term(beta)
            if R.is_zero:
                continue
            r0 = R.coefficient(0)
            r1 = R.coefficient(-1)
            if r0.scalar_part != 0:
                phi = phi.set_coeff(beta, r0.scalar_part)
            if r1.scalar_part != 0:
                string = string.set_coeff(beta, r1.scalar_part / sign)
            for i in range(space.nfactors):
                e = tuple(1 if j == i else 0 for j in range(space.nfactors))
                c = r1.coeff(e)
                if c != 0:
                    f1[i] = f1[i].set_coeff(beta, c / sign)
        m = MirrorMap(f0=m.f0, f1=tuple(f1))
        current = _assemble(pair, phi, string, m)
        for beta in pair.i_prime.curve_classes():
            if sum(beta) != level:
                continue
            R = pair.i_prime_dual.term(beta) - current.term(beta)
            if not R.is_zero:
                raise Infeasible(
                    "dual factorization obstructed",
                    first_obstructed_degree=level,
                    beta=list(beta),
                    residual=[
                        {"pow": k, "class": [format_fraction(c) for c in R.terms[k].coeffs]}
                        for k in R.exponents()
                    ],
                )
    final = _assemble(pair, phi, string, m)
    residual = pair.i_prime_dual - final
    return SerreFactorSolution(phi=phi, map=m, string=string, residual=residual)
