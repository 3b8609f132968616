#!/usr/bin/env python3
"""
Reproduce the bound tables for W(K2n) and rebuild every constructive witness.

Prints the m(k, r) table, the lower/exact/upper table, verifies the best construction for
each n and optionally stores the witnesses in the database.
"""

import argparse
import asyncio
import time

from sqlmodel import select

from app.core.logging import configure_logging
from app.database.connection import create_tables, session_scope
from app.models.bounds import CandidateVector
from app.models.search import SearchBudget
from app.models.witness import Witness
from app.services.bounds import lower_bound, m_filter, table_columns
from app.services.coloring import shift_vector, verify_interval
from app.services.constructions import planned_labels, witness_for
from app.services.documents import coloring_to_document, dumps
from app.services.equivalence import factorization_to_coloring
from app.services.search import realize_shift

# Witnesses that only a search recovers
STRETCH_TARGETS = {
    6: (1, 1, 3, 0, 0),
    11: (1, 2, 1, 3, 1, 1, 3, 1, 2, 1),
}


def print_m_table(max_k: int = 4):
    """Print m(k, r) with an attaining prefix"""
    print("\n📐 m(k, r) over filter-feasible prefixes:")
    for k in range(1, max_k + 1):
        cells = []
        for r in range(2 * k):
            result = m_filter(k, r)
            if result is None:
                continue
            vector = ",".join(str(value) for value in result.vector)
            cells.append(f"r={r}: {result.value} ({vector})")
        print(f"  k={k}  " + "  ".join(cells))


def print_bounds_table(max_n: int, workers: int):
    """Print the lower, exact and upper rows"""
    columns = table_columns(max_n, workers=workers)
    print("\n📊 Bounds on W(K2n):")
    width = 3
    print("  n     " + " ".join(str(column.n).rjust(width) for column in columns))
    print("  lower " + " ".join(str(column.lower).rjust(width) for column in columns))
    print(
        "  exact "
        + " ".join(
            ("" if column.exact is None else str(column.exact)).rjust(width) for column in columns
        )
    )
    print("  upper " + " ".join(str(column.upper).rjust(width) for column in columns))


def build_witnesses(max_n: int):
    """Build, verify and return the best construction for every n"""
    print("\n🔨 Constructive witnesses:")
    colorings = []
    for n in range(1, max_n + 1):
        started = time.monotonic()
        coloring = factorization_to_coloring(witness_for(n))
        report = verify_interval(coloring)
        target = lower_bound(n)
        mark = "✅" if coloring.t == target else "➖"
        print(
            f"  {mark} K{2 * n}: t={coloring.t} (lower bound {target},"
            f" {planned_labels(n)} splitted, {time.monotonic() - started:.2f}s,"
            f" valid={report.valid})"
        )
        colorings.append(coloring)
    return colorings


def run_stretch(time_limit: float):
    """Search for the stretch witnesses"""
    print("\n🔍 Realizing stretch shift vectors:")
    found = []
    for n, target in STRETCH_TARGETS.items():
        budget = SearchBudget(node_limit=10**12, time_limit=time_limit, seed=0)
        started = time.monotonic()
        coloring = realize_shift(n, CandidateVector(n=n, b=target), budget)
        elapsed = time.monotonic() - started
        if coloring is None:
            print(f"  ❌ K{2 * n} {target}: not found within {elapsed:.0f}s (inconclusive)")
            continue
        print(f"  ✅ K{2 * n} {target}: t={coloring.t} in {elapsed:.0f}s")
        found.append(coloring)
    return found


async def store_witnesses(colorings):
    """Replace stored witnesses with the given colorings"""
    await create_tables()
    async with session_scope() as session:
        result = await session.execute(select(Witness))
        for witness in result.scalars().all():
            await session.delete(witness)

        for coloring in colorings:
            session.add(
                Witness(
                    n=coloring.n,
                    t=coloring.t,
                    method="reproduce",
                    shift_vector=str(shift_vector(coloring)),
                    document=dumps(coloring_to_document(coloring, method="reproduce")),
                )
            )
    print(f"\n✅ Stored {len(colorings)} witnesses")


async def main():
    """Main reproduction function"""
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=18)
    parser.add_argument("--witness-max-n", type=int, default=12)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--stretch", action="store_true", help="Also run the realize searches")
    parser.add_argument("--stretch-time", type=float, default=600.0)
    parser.add_argument("--store", action="store_true", help="Store witnesses in the database")
    args = parser.parse_args()

    configure_logging("WARNING")
    print("🧮 Reproducing bound tables...")

    print_m_table()
    print_bounds_table(args.max_n, args.workers)
    colorings = build_witnesses(args.witness_max_n)
    if args.stretch:
        colorings.extend(run_stretch(args.stretch_time))
    if args.store:
        await store_witnesses(colorings)

    print("\n✅ Reproduction completed")


if __name__ == "__main__":
    asyncio.run(main())
