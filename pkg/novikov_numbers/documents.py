"""
JSON documents describing complexes, Morse data and deformation families.

Exact values are "p/q" strings (integers are accepted); floats appear only in
period_basis. Validation errors are reported with their dotted location.
"""

import json
from pathlib import Path
from typing import Dict, List, Literal, Mapping, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, field_validator
from sympy import Matrix

from .algebra import LaurentMatrix, LaurentPoly, parse_rational, rational_matrix
from .errors import MalformedInputError
from .log import get_logger
from .morse_bott import CriticalComponent, MorseData
from .spectral import DeformationFamily
from .twisted import Generator, Incidence, TwistedComplex, build_complex

logger = get_logger(__name__)

RationalValue = Union[StrictInt, str]


def _exact(value: RationalValue) -> str:
    try:
        return str(parse_rational(value))
    except MalformedInputError as e:
        raise ValueError(str(e))


# === Pydantic schemas (field names match the JSON keys) ===
class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", str_strip_whitespace=True)


class WordTerm(Strict):
    sign: Literal[1, -1]
    word: List[str] = []                   # tokens "a", "a^-1", "a^3"; [] is the identity


class Boundary(Strict):
    degree: int                            # degree of the cell; the face lives in degree - 1
    cell: int
    face: int
    terms: List[WordTerm]


class GeneratorSpec(Strict):
    name: str
    representation: List[List[RationalValue]]   # phi(g), fiber_dim x fiber_dim
    exponents: List[int]                         # image of g in the exponent lattice Z^l

    @field_validator("representation")
    @classmethod
    def _exact_entries(cls, rows):
        return [[_exact(v) for v in row] for row in rows]


class Term(Strict):
    coeff: RationalValue
    exponents: List[int]

    @field_validator("coeff")
    @classmethod
    def _exact_coeff(cls, value):
        return _exact(value)


class Entry(Strict):
    row: int
    col: int
    terms: List[Term]


class RawCoboundary(Strict):
    degree: int                            # D^degree : C^degree -> C^{degree + 1}
    entries: List[Entry] = []


class ComplexDocument(Strict):
    kind: Literal["complex"] = "complex"
    name: str
    description: str = ""
    top_degree: int = Field(ge=0)
    fiber_dim: int = Field(default=1, ge=1)
    num_vars: int = Field(ge=0)
    field_degree: int = Field(default=1, ge=1)  # [Q(eta):Q] for companion fibers
    period_basis: List[float] = []
    mode: Literal["cellular", "raw"] = "cellular"
    cells: List[int]                       # cells per degree; cochain rank = cells * fiber_dim
    generators: List[GeneratorSpec] = []
    boundaries: List[Boundary] = []
    coboundaries: List[RawCoboundary] = []
    probes: List[List[RationalValue]] = []

    @field_validator("probes")
    @classmethod
    def _exact_probes(cls, probes):
        return [[_exact(v) for v in point] for point in probes]


class ComponentSpec(Strict):
    name: str
    index: int = Field(ge=0)
    poincare: List[int]


class MorseDocument(Strict):
    kind: Literal["morse"] = "morse"
    name: str
    description: str = ""
    fiber_dim: int = Field(default=1, ge=1)
    components: List[ComponentSpec]


class FamilyCoefficient(Strict):
    degree: int
    k: int = Field(ge=0)
    matrix: List[List[RationalValue]]

    @field_validator("matrix")
    @classmethod
    def _exact_entries(cls, rows):
        return [[_exact(v) for v in row] for row in rows]


class FamilyDocument(Strict):
    kind: Literal["family"] = "family"
    name: str
    description: str = ""
    base_point: RationalValue = "0"
    order: int = Field(ge=0)
    exact: bool = False
    cochain_ranks: List[int]
    coefficients: List[FamilyCoefficient] = []

    @field_validator("base_point")
    @classmethod
    def _exact_base(cls, value):
        return _exact(value)


Document = Union[ComplexDocument, MorseDocument, FamilyDocument]
KINDS = {"complex": ComplexDocument, "morse": MorseDocument, "family": FamilyDocument}


def parse_document(raw: Mapping) -> Document:
    if not isinstance(raw, Mapping):
        raise MalformedInputError("a document must be a JSON object")
    kind = raw.get("kind", "complex")
    if kind not in KINDS:
        raise MalformedInputError(f"unknown document kind {kind!r}", "kind")
    try:
        return KINDS[kind].model_validate(dict(raw))
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise MalformedInputError(first["msg"], location)


def load_document(path: Union[str, Path]) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"invalid JSON: {e.msg}", f"{path}:{e.lineno}:{e.colno}")
    logger.debug(f"loaded document from {path}")
    return parse_document(raw)


def dump_document(doc: Document) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2, sort_keys=True, ensure_ascii=False)


def _raw_coboundaries(doc: ComplexDocument, ranks: List[int]) -> List[LaurentMatrix]:
    entries: List[Dict] = [{} for _ in range(doc.top_degree)]
    for n, cob in enumerate(doc.coboundaries):
        if not 0 <= cob.degree < doc.top_degree:
            raise MalformedInputError(
                f"coboundary degree {cob.degree} outside 0..{doc.top_degree - 1}",
                f"coboundaries.{n}.degree",
            )
        for m, entry in enumerate(cob.entries):
            where = f"coboundaries.{n}.entries.{m}"
            poly = LaurentPoly.zero(doc.num_vars)
            for t, term in enumerate(entry.terms):
                if len(term.exponents) != doc.num_vars:
                    raise MalformedInputError(
                        f"expected {doc.num_vars} exponents", f"{where}.terms.{t}.exponents"
                    )
                poly = poly + LaurentPoly.monomial(doc.num_vars, term.exponents, parse_rational(term.coeff))
            key = (entry.row, entry.col)
            if not (0 <= entry.row < ranks[cob.degree + 1] and 0 <= entry.col < ranks[cob.degree]):
                raise MalformedInputError(f"entry {key} outside D^{cob.degree}", where)
            entries[cob.degree][key] = entries[cob.degree].get(key, LaurentPoly.zero(doc.num_vars)) + poly
    return [
        LaurentMatrix(ranks[p + 1], ranks[p], doc.num_vars, entries[p]) for p in range(doc.top_degree)
    ]


def to_complex(doc: ComplexDocument) -> TwistedComplex:
    if len(doc.cells) != doc.top_degree + 1:
        raise MalformedInputError(
            f"expected {doc.top_degree + 1} cell counts, got {len(doc.cells)}", "cells"
        )
    if doc.mode == "raw":
        ranks = [count * doc.fiber_dim for count in doc.cells]
        return TwistedComplex(
            top_degree=doc.top_degree,
            fiber_dim=doc.fiber_dim,
            num_vars=doc.num_vars,
            cochain_ranks=tuple(ranks),
            coboundaries=tuple(_raw_coboundaries(doc, ranks)),
            period_basis=tuple(doc.period_basis),
            name=doc.name,
            field_degree=doc.field_degree,
        )
    generators = [
        Generator(
            name=g.name,
            representation=tuple(tuple(parse_rational(v) for v in row) for row in g.representation),
            exponents=tuple(g.exponents),
        )
        for g in doc.generators
    ]
    boundaries = [
        Incidence(
            degree=b.degree,
            cell=b.cell,
            face=b.face,
            terms=tuple((t.sign, tuple(t.word)) for t in b.terms),
        )
        for b in doc.boundaries
    ]
    return build_complex(
        cell_counts=doc.cells,
        boundaries=boundaries,
        generators=generators,
        fiber_dim=doc.fiber_dim,
        num_vars=doc.num_vars,
        period_basis=doc.period_basis,
        name=doc.name,
        field_degree=doc.field_degree,
    )


def to_morse(doc: MorseDocument) -> MorseData:
    return MorseData(
        components=tuple(
            CriticalComponent(name=c.name, index=c.index, poincare_coeffs=tuple(c.poincare))
            for c in doc.components
        ),
        fiber_dim=doc.fiber_dim,
        name=doc.name,
    )


def to_family(doc: FamilyDocument) -> DeformationFamily:
    ranks = doc.cochain_ranks
    top = len(ranks) - 1
    if top < 0:
        raise MalformedInputError("a family needs at least one cochain rank", "cochain_ranks")
    coefficients = [
        [Matrix.zeros(ranks[p + 1], ranks[p]) for _ in range(doc.order + 1)] for p in range(top)
    ]
    for n, coeff in enumerate(doc.coefficients):
        where = f"coefficients.{n}"
        if not 0 <= coeff.degree < top:
            raise MalformedInputError(f"degree {coeff.degree} outside 0..{top - 1}", f"{where}.degree")
        if coeff.k > doc.order:
            raise MalformedInputError(f"k = {coeff.k} exceeds the order {doc.order}", f"{where}.k")
        shape = (ranks[coeff.degree + 1], ranks[coeff.degree])
        if len(coeff.matrix) != shape[0] or any(len(row) != shape[1] for row in coeff.matrix):
            raise MalformedInputError(f"matrix must have shape {shape}", f"{where}.matrix")
        coefficients[coeff.degree][coeff.k] = rational_matrix(coeff.matrix, shape)
    return DeformationFamily(
        base_point=parse_rational(doc.base_point),
        order=doc.order,
        cochain_ranks=tuple(ranks),
        coefficients=tuple(tuple(per_degree) for per_degree in coefficients),
        exact=doc.exact,
        name=doc.name,
    )
