"""Canonical JSON documents for colorings, factorizations and bound certificates.

Serialization sorts keys and edge lists, so a document written twice is byte-identical.
"""

import json
import logging
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app.core.exceptions import DocumentParseError, IntervalColoringError
from app.models.bounds import BoundCertificate
from app.models.coloring import EdgeColoring
from app.models.documents import (
    FORMAT_VERSION,
    CertificateDocument,
    ColoringDocument,
    ColoringMetadata,
    DocumentEdge,
    FactorizationDocument,
    MatchingEntry,
)
from app.models.factorization import FREE, LabeledFactorization
from app.services.coloring import coloring_from_mapping, shift_vector, verify_interval
from app.services.equivalence import validate_factorization
from app.services.graph_core import (
    all_edges,
    identity_ordering,
    ordering_from_sequence,
    perfect_matching,
)

logger = logging.getLogger(__name__)

Document = ColoringDocument | FactorizationDocument | CertificateDocument


def coloring_to_document(coloring: EdgeColoring, method: str | None = None) -> ColoringDocument:
    """Document with edges sorted by (a, b); valid colorings also record their shift vector"""
    edges = [
        DocumentEdge(a=a, b=b, color=color)
        for (a, b), color in zip(all_edges(coloring.n), coloring.colors, strict=True)
    ]
    vector = None
    if verify_interval(coloring).valid:
        vector = list(shift_vector(coloring).b)
    metadata = None
    if method is not None or vector is not None:
        metadata = ColoringMetadata(method=method, shift_vector=vector)
    return ColoringDocument(n=coloring.n, t=coloring.t, edges=edges, metadata=metadata)


def document_to_coloring(document: ColoringDocument) -> EdgeColoring:
    _check_version(document.format_version)
    mapping = {}
    for position, edge in enumerate(document.edges):
        key = (min(edge.a, edge.b), max(edge.a, edge.b))
        if key in mapping:
            raise DocumentParseError(f"edge {key} listed twice", field=f"edges.{position}")
        mapping[key] = edge.color
    try:
        return coloring_from_mapping(document.n, mapping, document.t)
    except IntervalColoringError as exc:
        raise DocumentParseError(str(exc), field="edges") from exc


def factorization_to_document(factorization: LabeledFactorization) -> FactorizationDocument:
    ordering = None
    if not factorization.ordering.is_identity():
        ordering = list(factorization.ordering.vertices)
    matchings = [
        MatchingEntry(label="free" if label == FREE else label, edges=list(matching.edges))
        for matching, label in zip(factorization.matchings, factorization.labels, strict=True)
    ]
    return FactorizationDocument(n=factorization.n, ordering=ordering, matchings=matchings)


def document_to_factorization(document: FactorizationDocument) -> LabeledFactorization:
    _check_version(document.format_version)
    n = document.n
    try:
        ordering = (
            ordering_from_sequence(n, document.ordering)
            if document.ordering is not None
            else identity_ordering(n)
        )
    except IntervalColoringError as exc:
        raise DocumentParseError(str(exc), field="ordering") from exc

    matchings, labels = [], []
    for position, entry in enumerate(document.matchings):
        try:
            matchings.append(perfect_matching(n, entry.edges))
        except IntervalColoringError as exc:
            raise DocumentParseError(str(exc), field=f"matchings.{position}.edges") from exc
        labels.append(FREE if entry.label == "free" else entry.label)

    factorization = LabeledFactorization(
        n=n, matchings=tuple(matchings), labels=tuple(labels), ordering=ordering
    )
    try:
        validate_factorization(factorization)
    except IntervalColoringError as exc:
        raise DocumentParseError(str(exc), field="matchings") from exc
    return factorization


def certificate_to_document(certificate: BoundCertificate) -> CertificateDocument:
    return CertificateDocument(
        n=certificate.n,
        total=certificate.total,
        filters=[kind.value for kind in certificate.filters],
        examined=certificate.examined,
        survivors=certificate.survivors,
        empty=certificate.empty,
        claimed_bound=certificate.claimed_bound,
    )


def _check_version(version: int) -> None:
    if version != FORMAT_VERSION:
        raise DocumentParseError(
            f"unsupported format version {version}, expected {FORMAT_VERSION}",
            field="format_version",
        )


def dumps(document: BaseModel) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline, no null fields"""
    payload = document.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _load(text: str) -> dict:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(payload, dict):
        raise DocumentParseError("document must be a JSON object", line=1)
    return payload


def _validated[T: BaseModel](model: type[T], payload: dict) -> T:
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise DocumentParseError(error["msg"], field=field) from exc


def parse_document(text: str) -> Document:
    """Parse any document, telling the kinds apart by their keys"""
    payload = _load(text)
    if "matchings" in payload:
        return _validated(FactorizationDocument, payload)
    if "edges" in payload:
        return _validated(ColoringDocument, payload)
    if "examined" in payload:
        return _validated(CertificateDocument, payload)
    raise DocumentParseError("unknown document kind", field="edges")


def parse_coloring(text: str) -> EdgeColoring:
    return document_to_coloring(_validated(ColoringDocument, _load(text)))


def parse_factorization(text: str) -> LabeledFactorization:
    return document_to_factorization(_validated(FactorizationDocument, _load(text)))


def read_document(path: Path) -> Document:
    logger.debug("reading %s", path)
    return parse_document(path.read_text(encoding="utf-8"))


def write_document(path: Path, document: BaseModel) -> None:
    path.write_text(dumps(document), encoding="utf-8")
    logger.info("wrote %s", path)
