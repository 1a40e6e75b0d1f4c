"""Range search for Carmichael-Wieferich numbers with chunked checkpoints.

The m-range is cut into fixed-size chunks. Chunks run independently (in a
process pool when jobs > 1) but are consumed in chunk order, so the emitted
stream is (m, a)-lexicographic no matter how many workers there are.

Checkpoint file: a header line ``{"params": {...}}`` followed by one line per
completed chunk, ``{"chunk": i, "hits": [record, ...]}``.
"""

from __future__ import annotations

import json
import math
import os
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal

from .errors import CarmqError, InvalidInputError
from .quotients import modulus_context
from .wieferich import WieferichRecord, is_carmichael_wieferich


class SearchInterrupted(CarmqError):
    """The search stopped early; the checkpoint allows it to resume."""


@dataclass(frozen=True)
class SearchParams:
    m_from: int
    m_to: int
    a_from: int
    a_to: int
    mode: str = "criterion"
    chunk_size: int = 16
    composite_only: bool = False

    def chunks(self) -> list[tuple[int, int]]:
        return [
            (lo, min(lo + self.chunk_size - 1, self.m_to))
            for lo in range(self.m_from, self.m_to + 1, self.chunk_size)
        ]


def _validate(params: SearchParams) -> None:
    if params.m_from < 2 or params.m_to < params.m_from:
        raise InvalidInputError("need 2 <= m_from <= m_to")
    if params.a_from < 1 or params.a_to < params.a_from:
        raise InvalidInputError("need 1 <= a_from <= a_to")
    if params.chunk_size < 1:
        raise InvalidInputError("chunk_size must be >= 1")
    if params.mode not in ("criterion", "direct"):
        raise InvalidInputError(f"unknown mode {params.mode!r}")


def search_chunk(params: SearchParams, lo: int, hi: int) -> list[WieferichRecord]:
    """Hits for m in [lo, hi]; bases are capped at m^2 since C_m(a) mod m has period m^2."""
    hits = []
    for m in range(lo, hi + 1):
        ctx = modulus_context(m)
        if params.composite_only and len(ctx.factorization) == 1 and ctx.factorization.factors[0][1] == 1:
            continue
        for a in range(params.a_from, min(params.a_to, m * m) + 1):
            if math.gcd(a, m) != 1:
                continue
            rec = is_carmichael_wieferich(ctx, a, params.mode)
            if rec.is_cw:
                hits.append(rec)
    return hits


def _chunk_job(args: tuple[SearchParams, int, int]) -> list[WieferichRecord]:
    return search_chunk(*args)


def _load_checkpoint(path: str, params: SearchParams) -> dict[int, list[WieferichRecord]]:
    done: dict[int, list[WieferichRecord]] = {}
    if not os.path.exists(path):
        return done
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip()]
    if not lines:
        return done
    header = json.loads(lines[0])
    if header.get("params") != asdict(params):
        raise InvalidInputError(f"checkpoint {path} belongs to a different search")
    kept = lines[:1]
    for ln in lines[1:]:
        try:
            row = json.loads(ln)
        except json.JSONDecodeError:
            break  # torn final line from an interrupted write
        kept.append(ln)
        done[row["chunk"]] = [WieferichRecord.from_json(h) for h in row["hits"]]
    if len(kept) != len(lines):
        with open(path, "w") as fh:
            fh.writelines(ln if ln.endswith("\n") else ln + "\n" for ln in kept)
    return done


def search_range(
    params: SearchParams,
    jobs: int = 1,
    checkpoint: str | None = None,
) -> Iterator[WieferichRecord]:
    """Yield every hit in (m, a)-lexicographic order.

    Raises SearchInterrupted (with completed chunks already checkpointed) on
    KeyboardInterrupt or a checkpoint write failure.
    """
    _validate(params)
    chunks = params.chunks()
    done = _load_checkpoint(checkpoint, params) if checkpoint else {}
    todo = [i for i in range(len(chunks)) if i not in done]

    ck = None
    try:
        if checkpoint:
            fresh = not os.path.exists(checkpoint) or os.path.getsize(checkpoint) == 0
            ck = open(checkpoint, "a")
            if fresh:
                ck.write(json.dumps({"params": asdict(params)}, sort_keys=True) + "\n")
                ck.flush()
    except OSError as exc:
        raise SearchInterrupted(f"cannot open checkpoint: {exc}") from exc

    def results() -> Iterator[tuple[int, list[WieferichRecord]]]:
        work = [(params, *chunks[i]) for i in todo]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                try:
                    yield from zip(todo, pool.map(_chunk_job, work))
                except BaseException:
                    pool.shutdown(wait=False, cancel_futures=True)
                    raise
        else:
            for i, w in zip(todo, work):
                yield i, _chunk_job(w)

    try:
        pending = iter(results())
        for i in range(len(chunks)):
            if i in done:
                yield from done[i]
                continue
            j, hits = next(pending)
            assert j == i
            if ck:
                try:
                    ck.write(
                        json.dumps({"chunk": i, "hits": [h.to_json() for h in hits]}, sort_keys=True)
                        + "\n"
                    )
                    ck.flush()
                except OSError as exc:
                    raise SearchInterrupted(f"checkpoint write failed: {exc}") from exc
            yield from hits
    except KeyboardInterrupt as exc:
        raise SearchInterrupted("interrupted; rerun with the same checkpoint to resume") from exc
    finally:
        if ck:
            ck.close()
