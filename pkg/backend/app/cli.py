"""Command-line surface: constructions, verification, conversion, bounds, tables and searches.

Exit codes: 0 success, 1 verification or parse failure, 2 budget exhausted or inconclusive.
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import BaseModel

from app.core.config import settings
from app.core.exceptions import (
    IntervalColoringError,
    InternalInconsistencyError,
    PreconditionError,
)
from app.core.logging import configure_logging
from app.models.api import DocumentFormat
from app.models.bounds import CandidateVector
from app.models.coloring import EdgeColoring
from app.models.documents import CertificateDocument, ColoringDocument, FactorizationDocument
from app.models.factorization import ConstructionMethod, LabeledFactorization
from app.models.search import SearchBudget
from app.services.bounds import (
    certificate,
    certified_upper_bound,
    lower_bound,
    reference_formulas,
    table_columns,
    upper_bound,
)
from app.services.coloring import shift_vector, verify_interval
from app.services.constructions import construct, construct_composite
from app.services.documents import (
    certificate_to_document,
    coloring_to_document,
    document_to_coloring,
    document_to_factorization,
    dumps,
    factorization_to_document,
    read_document,
    write_document,
)
from app.services.equivalence import coloring_to_factorization, factorization_to_coloring
from app.services.search import realize_shift, sigma_search

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INCONCLUSIVE = 2


def _emit(document: BaseModel, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(dumps(document))
    else:
        write_document(output, document)


def _load_coloring(path: Path) -> EdgeColoring:
    document = read_document(path)
    if isinstance(document, FactorizationDocument):
        return factorization_to_coloring(document_to_factorization(document))
    if isinstance(document, CertificateDocument):
        raise PreconditionError(f"{path} holds a certificate, not a coloring")
    return document_to_coloring(document)


def _load_factorization(source: str) -> LabeledFactorization:
    """A document path, or a method and size such as ``three-five:3``"""
    path = Path(source)
    if not path.exists() and ":" in source:
        method, _, size = source.partition(":")
        try:
            return construct(ConstructionMethod(method), int(size))
        except ValueError as exc:
            raise PreconditionError(f"cannot read construction {source!r}") from exc
    document = read_document(path)
    if isinstance(document, FactorizationDocument):
        return document_to_factorization(document)
    if isinstance(document, ColoringDocument):
        return coloring_to_factorization(document_to_coloring(document))
    raise PreconditionError(f"{path} holds a certificate, not a factorization")


def _render(
    factorization: LabeledFactorization, output_format: DocumentFormat, method: str | None
) -> ColoringDocument | FactorizationDocument:
    coloring = factorization_to_coloring(factorization)
    if output_format == DocumentFormat.FACTORIZATION:
        return factorization_to_document(factorization)
    return coloring_to_document(coloring, method=method)


def cmd_construct(args: argparse.Namespace) -> int:
    method = ConstructionMethod(args.method)
    if method == ConstructionMethod.COMPOSITE:
        if not args.left or not args.right:
            raise PreconditionError("composite needs --left and --right")
        factorization = construct_composite(
            _load_factorization(args.left), _load_factorization(args.right)
        )
    else:
        if args.n is None:
            raise PreconditionError(f"{method.value} needs --n")
        factorization = construct(method, args.n)
    _emit(_render(factorization, DocumentFormat(args.format), method.value), args.output)
    logger.info("K%d: t=%d", 2 * factorization.n, factorization.t)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    coloring = _load_coloring(args.file)
    report = verify_interval(coloring)
    if report.failure is not None:
        print(f"invalid: {report.failure.kind.value}: {report.failure.message}")
        return EXIT_FAILURE
    print(f"valid interval {coloring.t}-coloring of K{2 * coloring.n}")
    return EXIT_OK


def cmd_shift(args: argparse.Namespace) -> int:
    print(shift_vector(_load_coloring(args.file)))
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    document = read_document(args.file)
    target = DocumentFormat(args.to)
    if isinstance(document, CertificateDocument):
        raise PreconditionError("certificates cannot be converted")
    if isinstance(document, ColoringDocument):
        factorization = coloring_to_factorization(document_to_coloring(document))
    else:
        factorization = document_to_factorization(document)
    method = None
    if isinstance(document, ColoringDocument) and document.metadata is not None:
        method = document.metadata.method
    _emit(_render(factorization, target, method), args.output)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    n = args.n
    if args.kind == "lower":
        print(lower_bound(n))
    elif args.kind == "upper":
        print(upper_bound(n))
    elif args.kind == "reference":
        bounds = reference_formulas(n)
        for name, value in bounds.model_dump(exclude={"n", "disproved"}).items():
            if value is None:
                continue
            flag = ""
            if name in bounds.disproved:
                flag = f"  (disproved by witness {bounds.lower_bound})"
            print(f"{name} = {value}{flag}")
    elif args.total is not None:
        record = certificate(n, args.total, workers=args.workers)
        _emit(certificate_to_document(record), args.output)
        if not record.empty:
            logger.warning(
                "total %d is not exhausted: %d vectors survive", args.total, record.survivors
            )
            return EXIT_INCONCLUSIVE
    else:
        try:
            bound, certificates = certified_upper_bound(n, workers=args.workers)
        except KeyboardInterrupt:
            print(f"interrupted: W(K{2 * n}) <= {upper_bound(n)} (closed form)")
            return EXIT_INCONCLUSIVE
        for record in certificates:
            verdict = "empty" if record.empty else f"{record.survivors} survive"
            print(f"total {record.total}: {record.examined} prefixes examined, {verdict}")
        print(f"W(K{2 * n}) <= {bound}")
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    columns = table_columns(args.max_n, workers=args.workers)
    rows = {
        "n": [str(column.n) for column in columns],
        "lower": [str(column.lower) for column in columns],
        "exact": ["" if column.exact is None else str(column.exact) for column in columns],
        "upper": [str(column.upper) for column in columns],
    }
    width = max(len(cell) for cells in rows.values() for cell in cells)
    for name, cells in rows.items():
        print(f"{name:<6}" + " ".join(cell.rjust(width) for cell in cells))
    return EXIT_OK


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(node_limit=args.node_limit, time_limit=args.time_limit, seed=args.seed)


def _progress(nodes: int, best: int) -> None:
    logger.info("%d nodes explored, best %d", nodes, best)


def cmd_search(args: argparse.Namespace) -> int:
    if args.kind == "sigma":
        result = sigma_search(
            args.n,
            _budget(args),
            pruning=not args.no_pruning,
            workers=args.workers,
            progress=_progress,
        )
        relation = "=" if result.exhaustive else ">="
        print(
            f"sigma_{args.n} {relation} {result.sigma}"
            f" (W(K{2 * args.n}) {relation} {2 * args.n - 1 + result.sigma},"
            f" {result.nodes} nodes, {result.elapsed:.1f}s)"
        )
        if result.interrupted:
            print("interrupted: reporting the best factorization found so far", file=sys.stderr)
        if args.output is not None:
            report = verify_interval(factorization_to_coloring(result.witness))
            if report.failure is not None:
                raise InternalInconsistencyError(
                    f"sigma witness is not interval: {report.failure.message}"
                )
            _emit(factorization_to_document(result.witness), args.output)
        return EXIT_OK if result.exhaustive else EXIT_INCONCLUSIVE

    if args.target is None:
        raise PreconditionError("realize needs --target")
    try:
        values = tuple(int(value) for value in args.target.split(","))
    except ValueError as exc:
        raise PreconditionError(f"cannot read shift vector {args.target!r}") from exc
    target = CandidateVector(n=args.n, b=values)
    coloring = realize_shift(args.n, target, _budget(args))
    if coloring is None:
        print(f"no realization of {args.target} found within the budget", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    _emit(coloring_to_document(coloring, method="realize"), args.output)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, reload=args.reload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcolor",
        description="Interval edge-colorings of complete graphs K2n.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # -- construct --
    p_construct = subparsers.add_parser("construct", help="Build a verified coloring")
    p_construct.add_argument(
        "--method", choices=[method.value for method in ConstructionMethod], required=True
    )
    p_construct.add_argument("--n", type=int, help="Half the number of vertices")
    p_construct.add_argument(
        "--left", help="Outer K2m: document path or method:n like three-five:3"
    )
    p_construct.add_argument("--right", help="Inner K2n: document path or method:n")
    p_construct.add_argument(
        "--format", choices=[fmt.value for fmt in DocumentFormat], default="coloring"
    )
    p_construct.add_argument("-o", "--output", type=Path)
    p_construct.set_defaults(handler=cmd_construct)

    # -- verify / shift / convert --
    p_verify = subparsers.add_parser("verify", help="Check the interval property")
    p_verify.add_argument("file", type=Path)
    p_verify.set_defaults(handler=cmd_verify)

    p_shift = subparsers.add_parser("shift", help="Print the shift vector")
    p_shift.add_argument("file", type=Path)
    p_shift.set_defaults(handler=cmd_shift)

    p_convert = subparsers.add_parser("convert", help="Coloring <-> labeled factorization")
    p_convert.add_argument("file", type=Path)
    p_convert.add_argument("--to", choices=[fmt.value for fmt in DocumentFormat], required=True)
    p_convert.add_argument("-o", "--output", type=Path)
    p_convert.set_defaults(handler=cmd_convert)

    # -- bound --
    p_bound = subparsers.add_parser("bound", help="Bounds on W(K2n)")
    p_bound.add_argument("kind", choices=["lower", "upper", "certified-upper", "reference"])
    p_bound.add_argument("--n", type=int, required=True)
    p_bound.add_argument("--total", type=int, help="Exhaust this total only")
    p_bound.add_argument("--workers", type=int, default=settings.search_workers)
    p_bound.add_argument("-o", "--output", type=Path)
    p_bound.set_defaults(handler=cmd_bound)

    # -- table --
    p_table = subparsers.add_parser("table", help="Lower, exact and upper rows")
    p_table.add_argument("--max-n", type=int, default=18)
    p_table.add_argument("--workers", type=int, default=settings.search_workers)
    p_table.set_defaults(handler=cmd_table)

    # -- search --
    p_search = subparsers.add_parser("search", help="Budgeted searches")
    p_search.add_argument("kind", choices=["sigma", "realize"])
    p_search.add_argument("--n", type=int, required=True)
    p_search.add_argument("--target", help="Shift vector, e.g. 1,1,3,0,0")
    p_search.add_argument("--node-limit", type=int, default=settings.search_node_limit)
    p_search.add_argument("--time-limit", type=float, default=settings.search_time_limit)
    p_search.add_argument("--seed", type=int)
    p_search.add_argument(
        "--workers",
        type=int,
        default=settings.search_workers,
        help="Worker processes (default from SEARCH_WORKERS)",
    )
    p_search.add_argument("--no-pruning", action="store_true")
    p_search.add_argument("-o", "--output", type=Path)
    p_search.set_defaults(handler=cmd_search)

    # -- serve --
    p_serve = subparsers.add_parser("serve", help="Run the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--reload", action="store_true")
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else settings.log_level)
    try:
        return args.handler(args)
    except (IntervalColoringError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("interrupted before a result was reached", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
