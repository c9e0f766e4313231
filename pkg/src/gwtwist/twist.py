"""Geometry data, hypothesis checks, and the twisted one-point series.

A geometry is an ambient product of projective spaces together with a split
bundle, each summand pulled back from the ambient and either convex (all
multidegree entries >= 0) or concave (all entries <= -1).  This module
classifies the summands, evaluates the positivity and triviality conditions
the downstream solver relies on, and assembles the hypergeometric series

    I(beta) = J(beta) * prod_j H_beta(L_j),

where J is the closed-form ambient series and each H factor is the finite
product of linear terms attached to a summand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpaceMismatch, TruncationMismatch, Unclassifiable, Unsupported
from .ring import AmbientSpace, BundleSpec, CohClass, euler_class
from .series import (
    HbarLaurent,
    QSeries,
    all_curve_classes,
    qseries_from_obj,
    qseries_to_obj,
)

CONVEX = "Convex"
CONCAVE = "Concave"

CASE_CONCAVE_RANK2 = "ConcaveRank2plus"
CASE_FANO_INDEX2 = "FanoIndex2plus"
CASE_MIXED_SUM = "MixedSum"


def classify(l) -> str:
    """Tag a multidegree as Convex (all >= 0) or Concave (all <= -1).

    Mixed signs, and zero entries alongside negative ones, are rejected: on a
    product ambient such a summand is neither globally generated nor without
    sections on every curve, so no finite product formula applies.
    """
    l = tuple(int(x) for x in l)
    if all(x == 0 for x in l):
        raise Unclassifiable("zero multidegree has no type", multidegree=list(l))
    if all(x >= 0 for x in l):
        return CONVEX
    if all(x <= -1 for x in l):
        return CONCAVE
    raise Unclassifiable(
        "multidegree mixes non-negative and negative entries", multidegree=list(l)
    )


class GeometrySpec:
    """Ambient space + split bundle, with an optional externally supplied J.

    Construction validates everything downstream code assumes: summands match
    the ambient, each classifies cleanly, concave summands only appear over a
    single projective space, and an external J starts with the unit class.
    """

    __slots__ = ("space", "bundle", "external_j")

    def __init__(
        self,
        space: AmbientSpace,
        bundle: BundleSpec,
        external_j: QSeries | None = None,
    ):
        bundle.validate_for(space)
        kinds = [classify(l) for l in bundle.lines]
        if CONCAVE in kinds and space.nfactors > 1:
            raise Unsupported(
                "concave summands are only supported over a single projective space",
                nfactors=space.nfactors,
            )
        if external_j is not None:
            if external_j.space != space:
                raise SpaceMismatch("external J on a different ambient space")
            expected = HbarLaurent.unit(space)
            if external_j.term(external_j.zero_beta) != expected:
                raise ValueError("external J must start with the unit class")
        self.space = space
        self.bundle = bundle
        self.external_j = external_j

    def convex_lines(self):
        return tuple(l for l in self.bundle.lines if classify(l) == CONVEX)

    def concave_lines(self):
        return tuple(l for l in self.bundle.lines if classify(l) == CONCAVE)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeometrySpec)
            and self.space == other.space
            and self.bundle == other.bundle
            and self.external_j == other.external_j
        )

    def __repr__(self):
        return f"GeometrySpec(ambient={self.space.factors}, bundle={self.bundle.lines})"


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of the hypothesis checks.

    ``nonneg`` holds one boolean per ambient factor: whether the anticanonical
    degree minus convex twists plus concave twists stays non-negative there.
    ``trivial_transform_case`` names the structural reason (if any) the mirror
    transformation is forced to vanish, or is None.
    """

    nonneg: tuple[bool, ...]
    trivial_transform_case: str | None

    @property
    def all_nonneg(self) -> bool:
        return all(self.nonneg)

    def to_obj(self) -> dict:
        return {
            "theorem1_nonneg": list(self.nonneg),
            "theorem2_case": self.trivial_transform_case,
        }


def _combined_degrees(g: GeometrySpec):
    """Per-factor value (r_i+1) - sum_conv l_ji + sum_conc l_ji."""
    out = []
    for i, r in enumerate(g.space.factors):
        v = r + 1
        for l in g.convex_lines():
            v -= l[i]
        for l in g.concave_lines():
            v += l[i]
        out.append(v)
    return tuple(out)


def check_conditions(g: GeometrySpec) -> TheoremReport:
    """Evaluate the positivity condition and detect trivial-transform cases."""
    combined = _combined_degrees(g)
    nonneg = tuple(v >= 0 for v in combined)
    convex = g.convex_lines()
    concave = g.concave_lines()
    case = None
    if all(nonneg):
        if concave and not convex:
            if sum(1 for _ in concave) >= 2:
                case = CASE_CONCAVE_RANK2
        elif convex and not concave:
            if _fano_index_ok(g, convex):
                case = CASE_FANO_INDEX2
        elif convex and concave:
            if len(concave) >= 2 and _fano_index_ok(g, convex):
                case = CASE_MIXED_SUM
    return TheoremReport(nonneg=nonneg, trivial_transform_case=case)


def _fano_index_ok(g: GeometrySpec, convex_lines) -> bool:
    """Anticanonical-minus-convex degree >= 2 against every unit curve class."""
    for i, r in enumerate(g.space.factors):
        v = r + 1 - sum(l[i] for l in convex_lines)
        if v < 2:
            return False
    return True


def j_ambient(space: AmbientSpace, max_degree: int) -> QSeries:
    """Closed-form ambient series: the beta term inverts
    prod_i prod_{k=1}^{d_i} (p_i + k*hbar)^(r_i + 1), and the beta = 0 term is 1.
    """
    terms = {}
    for beta in all_curve_classes(space, max_degree):
        if sum(beta) == 0:
            terms[beta] = HbarLaurent.unit(space)
            continue
        denom = HbarLaurent.unit(space)
        for i, d_i in enumerate(beta):
            p = space.hyperplane(i)
            for k in range(1, d_i + 1):
                factor = HbarLaurent.linear(space, p, k)
                for _ in range(space.factors[i] + 1):
                    denom = denom * factor
        terms[beta] = denom.invert()
    return QSeries(space, max_degree, terms)


def h_factor(space: AmbientSpace, l, beta) -> HbarLaurent:
    """The finite linear-factor product a bundle summand contributes at beta.

    Convex summands multiply (c1 + k*hbar) for k = 0..<c1,beta>; concave ones
    for k = <c1,beta>+1..-1.  An empty range gives 1.
    """
    l = tuple(int(x) for x in l)
    kind = classify(l)
    beta = space.check_curve_class(beta)
    pairing = sum(li * di for li, di in zip(l, beta))
    c1 = space.divisor(l)
    if kind == CONVEX:
        ks = range(0, pairing + 1)
    else:
        ks = range(pairing + 1, 0)
    out = HbarLaurent.unit(space)
    for k in ks:
        out = out * HbarLaurent.linear(space, c1, k)
    return out


def i_function(g: GeometrySpec, max_degree: int) -> QSeries:
    """Twisted series: J(beta) times the summand factors, for beta != 0.

    The beta = 0 term is the Euler class of the bundle.  For a concave
    summand the degree-zero twist is taken as the Euler factor rather than an
    empty product, so the series starts where the geometry actually starts
    (zero when the Euler class vanishes on the ambient).
    """
    space = g.space
    if g.external_j is not None:
        if g.external_j.max_degree < max_degree:
            raise TruncationMismatch(
                "external J truncated below the requested degree",
                have=g.external_j.max_degree,
                want=max_degree,
            )
        J = g.external_j.truncate(max_degree)
    else:
        J = j_ambient(space, max_degree)
    terms = {}
    for beta in J.curve_classes():
        if sum(beta) == 0:
            continue
        hl = J.term(beta)
        for l in g.bundle.lines:
            hl = hl * h_factor(space, l, beta)
        terms[beta] = hl
    e = euler_class(space, g.bundle)
    terms[(0,) * space.nfactors] = HbarLaurent(space, {0: e})
    return QSeries(space, max_degree, terms)


# -- serialization -----------------------------------------------------------


def geometry_to_obj(g: GeometrySpec) -> dict:
    return {
        "ambient": list(g.space.factors),
        "bundle": [{"l": list(l)} for l in g.bundle.lines],
        "external_j": None if g.external_j is None else qseries_to_obj(g.external_j),
    }


def geometry_from_obj(obj) -> GeometrySpec:
    space = AmbientSpace(tuple(int(r) for r in obj["ambient"]))
    lines = tuple(tuple(int(x) for x in entry["l"]) for entry in obj.get("bundle", []))
    bundle = BundleSpec(lines)
    ext = obj.get("external_j")
    external_j = None if ext is None else qseries_from_obj(space, ext)
    return GeometrySpec(space, bundle, external_j)
