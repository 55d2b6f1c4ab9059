"""The three-index table A deciding which couplings survive at order 2.

``A[i,j,k] = 1`` when a nonzero third-derivative coupling between
eigen-indices ``i, j, k`` is compatible with an abelian Galois group, ``0``
when it forces non-integrability.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence

import numpy as np

from .residues import s_poly

Triple = tuple[int, int, int]


def a_entry(i: int, j: int, k: int) -> int:
    i, j, k = sorted((i, j, k))
    if j == 0:
        return 1
    if i == 0:
        return int(k - j >= 2)
    # sorted, so i+j-k is the smallest of the three signed sums
    smallest = i + j - k
    if (i + j + k) % 2 == 0:
        return int(smallest >= 2)
    return int(smallest <= -3)


def sorted_triples(max_index: int) -> Iterator[Triple]:
    for i in range(max_index + 1):
        for j in range(i, max_index + 1):
            for k in range(j, max_index + 1):
                yield (i, j, k)


def _expand(values: dict[Triple, int], max_index: int) -> np.ndarray:
    n = max_index + 1
    out = np.zeros((n, n, n), dtype=np.int8)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j, k] = values[tuple(sorted((i, j, k)))]
    return out


def _entries(chunk: Sequence[Triple]) -> list[int]:
    return [a_entry(*t) for t in chunk]


def _oracle_entries(chunk: Sequence[Triple]) -> list[int]:
    return [0 if s_poly(*t).depends_on_alpha else 1 for t in chunk]


def _chunks(items: list, jobs: int) -> list[list]:
    # interleaved so that expensive large triples spread across workers
    n = max(1, min(jobs * 4, len(items)))
    return [items[r::n] for r in range(n)]


def parallel_map(fn: Callable[[Sequence[Triple]], list], triples: list[Triple], jobs: int = 1) -> dict[Triple, object]:
    """Evaluate ``fn`` over triples; the result does not depend on ``jobs``."""
    if jobs <= 1 or len(triples) < 2:
        return dict(zip(triples, fn(triples)))
    chunks = _chunks(triples, jobs)
    out: dict[Triple, object] = {}
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for chunk, values in zip(chunks, pool.map(fn, chunks)):
            out.update(zip(chunk, values))
    return {t: out[t] for t in triples}


def a_table(max_index: int, jobs: int = 1) -> np.ndarray:
    """``A`` on ``[0, max_index]^3`` as an int8 array."""
    if max_index < 0:
        raise ValueError("max_index must be nonnegative")
    triples = list(sorted_triples(max_index))
    return _expand(parallel_map(_entries, triples, jobs), max_index)


def oracle_table(max_index: int, jobs: int = 1) -> dict[Triple, int]:
    """``1`` where every residue variant is independent of alpha."""
    triples = list(sorted_triples(max_index))
    return parallel_map(_oracle_entries, triples, jobs)


def a_crosscheck(max_index: int, predicate: Callable[[int, int, int], int] = a_entry, jobs: int = 1) -> list[Triple]:
    """Sorted triples where ``predicate`` disagrees with the residue oracle."""
    oracle = oracle_table(max_index, jobs)
    return [t for t, v in oracle.items() if predicate(*t) != v]


# -- export ---------------------------------------------------------------


def export_rows(max_index: int, jobs: int = 1) -> str:
    """One ``i j k value`` line per sorted triple, lexicographic order."""
    triples = list(sorted_triples(max_index))
    values = parallel_map(_entries, triples, jobs)
    return "".join(f"{i} {j} {k} {values[(i, j, k)]}\n" for i, j, k in triples)


def render_blocks(table: np.ndarray, size: int | None = None) -> str:
    """Blocks ``A[m,:,:]`` two per row band, laid out like the printed table."""
    n = table.shape[0] if size is None else size
    cols = " ".join(str(c) for c in range(n))
    lines = []
    for m0 in range(0, n, 2):
        band = [m for m in (m0, m0 + 1) if m < n]
        lines.append(" | ".join(f"A[{m},i,j] {cols}" for m in band))
        for r in range(n):
            cells = []
            for m in band:
                row = " ".join(str(int(table[m, r, c])) for c in range(n))
                cells.append(f"{r:>8} {row}")
            lines.append(" | ".join(cells))
    return "\n".join(lines) + "\n"


def parse_blocks(text: str) -> dict[Triple, int]:
    """Inverse of :func:`render_blocks`."""
    out: dict[Triple, int] = {}
    band: list[int] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split("|")]
        if cells[0].startswith("A["):
            band = [int(c[2:].split(",")[0]) for c in cells]
            continue
        for m, cell in zip(band, cells):
            r, *vals = cell.split()
            for c, v in enumerate(vals):
                out[(m, int(r), c)] = int(v)
    return out
