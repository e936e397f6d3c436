"""Formal *-algebra spanned by the partial-isometry words of a graph.

Elements are exact linear combinations of terms ``s_alpha s_beta*`` where
alpha and beta are finite paths with a common source; a length-0 path at v
encodes the vertex projection ``p_v``.  Coefficients are Gaussian
rationals, so adjoints and positivity checks are exercised exactly.

Term multiplication follows the Cuntz-Krieger matching rule

    s_beta* s_gamma = s_rest   if gamma = beta.rest (range-side prefix)
                    = s_rest*  if beta = gamma.rest
                    = 0        otherwise,

with the convention that a vertex v is a prefix of gamma exactly when
rng(gamma) = v; this makes p_v the identity on range-compatible terms.
Equality of elements is purely syntactic after canonicalization -- the
regular-vertex covariance relation is deliberately *not* used to rewrite
terms, so covariance_defect stays a nonzero formal element whose
annihilation under trace evaluation is a checkable theorem rather than a
built-in identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .graph import Graph, Path, classify_vertices, concat, is_range_prefix
from .rationals import format_rational, parse_rational
from .traces import coerce_weights

_ZERO = Fraction(0)


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = _ZERO
    im: Fraction = _ZERO

    def __add__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __str__(self) -> str:
        return f"{format_rational(self.re)}+{format_rational(self.im)}i"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))


def rational(value: int | Fraction) -> GaussianRational:
    return GaussianRational(Fraction(value))


Term = tuple[Path, Path]


class FormalElement:
    """A finite linear combination of s_alpha s_beta* terms over one graph.

    Zero coefficients are dropped and term keys are kept in a canonical
    order, so syntactic equality is well defined and deterministic.
    """

    __slots__ = ("graph", "terms")

    def __init__(self, graph: Graph, terms: Mapping[Term, GaussianRational]) -> None:
        self.graph = graph
        canonical: dict[Term, GaussianRational] = {}
        for (alpha, beta) in sorted(terms, key=lambda t: _term_key(graph, t)):
            coeff = terms[(alpha, beta)]
            if coeff.is_zero():
                continue
            if alpha.src != beta.src:
                raise ValueError(
                    f"term sources differ: src({alpha}) = {alpha.src!r}, "
                    f"src({beta}) = {beta.src!r}"
                )
            canonical[(alpha, beta)] = coeff
        self.terms = canonical

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FormalElement)
            and self.graph is other.graph
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((id(self.graph), tuple(self.terms.items())))

    def __iter__(self) -> Iterator[tuple[Term, GaussianRational]]:
        return iter(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: FormalElement) -> FormalElement:
        _same_graph(self, other)
        merged = dict(self.terms)
        for term, coeff in other.terms.items():
            merged[term] = merged.get(term, GR_ZERO) + coeff
        return FormalElement(self.graph, merged)

    def __sub__(self, other: FormalElement) -> FormalElement:
        return self + other.scale(GaussianRational(Fraction(-1)))

    def scale(self, factor: GaussianRational) -> FormalElement:
        return FormalElement(
            self.graph, {term: factor * coeff for term, coeff in self.terms.items()}
        )

    def __mul__(self, other: FormalElement) -> FormalElement:
        return multiply(self, other)

    def __repr__(self) -> str:
        if not self.terms:
            return "FormalElement(0)"
        bits = [
            f"({coeff})*s[{alpha}]s[{beta}]*" for (alpha, beta), coeff in self
        ]
        return "FormalElement(" + " + ".join(bits) + ")"


def _term_key(g: Graph, term: Term):
    return (_path_key(g, term[0]), _path_key(g, term[1]))


def _path_key(g: Graph, p: Path):
    if not p.edges:
        return (0, (g.vertex_index[p.src],))
    eidx = g.edge_index
    return (len(p.edges), tuple(eidx[e] for e in p.edges))


def _same_graph(x: FormalElement, y: FormalElement) -> None:
    if x.graph is not y.graph:
        raise ValueError("elements live over different graphs")


def zero(g: Graph) -> FormalElement:
    return FormalElement(g, {})


def projection(g: Graph, v: str) -> FormalElement:
    """The vertex projection p_v."""
    p = g.vertex_path(v)
    return FormalElement(g, {(p, p): GR_ONE})


def generator(g: Graph, path: Path, coeff: GaussianRational = GR_ONE) -> FormalElement:
    """The partial isometry s_path (beta = the source vertex)."""
    return FormalElement(g, {(path, g.vertex_path(path.src)): coeff})


def term_element(
    g: Graph, alpha: Path, beta: Path, coeff: GaussianRational = GR_ONE
) -> FormalElement:
    return FormalElement(g, {(alpha, beta): coeff})


def multiply(x: FormalElement, y: FormalElement) -> FormalElement:
    """Bilinear extension of the term matching rule."""
    _same_graph(x, y)
    acc: dict[Term, GaussianRational] = {}
    for (alpha, beta), c1 in x.terms.items():
        for (gamma, delta), c2 in y.terms.items():
            rest = is_range_prefix(beta, gamma)
            if rest is not None:
                key = (concat(alpha, rest), delta)
            else:
                rest = is_range_prefix(gamma, beta)
                if rest is None:
                    continue
                key = (alpha, concat(delta, rest))
            acc[key] = acc.get(key, GR_ZERO) + c1 * c2
    return FormalElement(x.graph, acc)


def adjoint(x: FormalElement) -> FormalElement:
    """Swap each term's legs and conjugate its coefficient; an involution."""
    return FormalElement(
        x.graph,
        {(beta, alpha): coeff.conjugate() for (alpha, beta), coeff in x.terms.items()},
    )


def degree_component(x: FormalElement, n: int) -> FormalElement:
    """The sub-sum of terms with gauge degree len(alpha) - len(beta) == n."""
    return FormalElement(
        x.graph,
        {
            (alpha, beta): coeff
            for (alpha, beta), coeff in x.terms.items()
            if len(alpha) - len(beta) == n
        },
    )


def trace_eval(
    mu: Mapping[str, Fraction], x: FormalElement
) -> GaussianRational:
    """Evaluate the trace attached to mu: diagonal terms weighted by the
    mass at their source, everything off-diagonal killed.

    When mu is a graph trace this is the unique gauge-invariant tracial
    state extending integration against mu; the formula itself accepts any
    vertex weighting, which the property tests exploit.
    """
    weights = coerce_weights(x.graph, mu)
    total = GR_ZERO
    for (alpha, beta), coeff in x.terms.items():
        if alpha == beta:
            total = total + coeff * rational(weights[alpha.src])
    return total


def covariance_defect(g: Graph, v: str) -> FormalElement:
    """p_v minus the sum of s_e s_e* over edges into the regular vertex v.

    Zero in the C*-algebra but a nonzero formal element here; a weighting
    annihilates it under every left multiplication exactly when it obeys
    the regular-vertex equality at v.
    """
    classification = classify_vertices(g)
    if not classification.is_regular(v):
        raise ValueError(f"vertex {v!r} is singular; no covariance relation there")
    acc = projection(g, v)
    for e in g.edges_into[v]:
        p = g.path((e.id,))
        acc = acc - term_element(g, p, p)
    return acc


def element_to_json(x: FormalElement) -> list[dict]:
    """Serialize as the documented term list (deterministic order)."""
    return [
        {
            "alpha": path_to_json(alpha),
            "beta": path_to_json(beta),
            "coeff": {"re": format_rational(c.re), "im": format_rational(c.im)},
        }
        for (alpha, beta), c in x.terms.items()
    ]


def element_from_json(g: Graph, doc: object) -> FormalElement:
    if not isinstance(doc, list):
        raise ValueError("element document must be a list of terms")
    acc: dict[Term, GaussianRational] = {}
    for rec in doc:
        if not isinstance(rec, Mapping) or not {"alpha", "beta", "coeff"} <= set(rec):
            raise ValueError("term must have alpha, beta, and coeff")
        alpha = path_from_json(g, rec["alpha"])
        beta = path_from_json(g, rec["beta"])
        coeff_doc = rec["coeff"]
        if not isinstance(coeff_doc, Mapping):
            raise ValueError("coeff must be an object with re and im")
        coeff = GaussianRational(
            parse_rational(coeff_doc.get("re", "0")),
            parse_rational(coeff_doc.get("im", "0")),
        )
        key = (alpha, beta)
        acc[key] = acc.get(key, GR_ZERO) + coeff
    return FormalElement(g, acc)


def path_to_json(p: Path) -> object:
    if not p.edges:
        return {"vertex": p.src}
    return list(p.edges)


def path_from_json(g: Graph, doc: object) -> Path:
    if isinstance(doc, Mapping) and set(doc) == {"vertex"}:
        return g.vertex_path(doc["vertex"])
    if isinstance(doc, list) and all(isinstance(e, str) for e in doc) and doc:
        return g.path(doc)
    raise ValueError(f"not a path document: {doc!r}")
