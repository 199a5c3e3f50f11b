"""Operation-stream text format and reproducible stream generators.

One operation per line: ``I <pos> <value>`` inserts, ``D <pos>`` deletes,
``Q`` queries the current estimate.  Lines starting with ``#`` are comments
and blank lines are skipped; parsing then re-serializing is the identity up
to comments.
"""

from __future__ import annotations

import random
from typing import Iterable, Union

from .indexed_sequence import DELETE, INSERT, Operation

QUERY = "Q"

StreamItem = Union[Operation, str]

KINDS = ("uniform", "sorted", "reverse", "sawtooth")


class StreamError(ValueError):
    """Malformed operation-stream text."""


def parse_stream(text: str) -> list[StreamItem]:
    items: list[StreamItem] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "I" and len(parts) == 3:
                items.append(Operation(INSERT, int(parts[1]), int(parts[2])))
            elif parts[0] == "D" and len(parts) == 2:
                items.append(Operation(DELETE, int(parts[1])))
            elif parts[0] == "Q" and len(parts) == 1:
                items.append(QUERY)
            else:
                raise StreamError(f"line {lineno}: unrecognized op {line!r}")
        except ValueError as exc:
            if isinstance(exc, StreamError):
                raise
            raise StreamError(f"line {lineno}: bad integer in {line!r}") from exc
    return items


def serialize_stream(items: Iterable[StreamItem]) -> str:
    out = []
    for item in items:
        if item == QUERY:
            out.append("Q")
        elif item.kind == INSERT:
            out.append(f"I {item.position} {item.value}")
        else:
            out.append(f"D {item.position}")
    return "\n".join(out) + ("\n" if out else "")


def generate_stream(kind: str, ops: int, seed: int,
                    insert_prob: float = 0.65,
                    insert_only: bool = False,
                    query_every: int = 0) -> list[StreamItem]:
    """Deterministic operation stream of one of the named shapes.

    uniform: random positions, random values; sorted: appends of increasing
    values; reverse: appends of decreasing values; sawtooth: alternating
    increasing and decreasing runs at random positions.
    """
    if kind not in KINDS:
        raise StreamError(f"unknown stream kind {kind!r}")
    rng = random.Random(f"{kind}:{ops}:{seed}")
    items: list[StreamItem] = []
    n = 0
    used: set[int] = set()
    hi_val = 0
    lo_val = 0
    run = 0
    direction = 1
    for t in range(ops):
        deletable = n > 0 and not insert_only
        if deletable and rng.random() > insert_prob:
            items.append(Operation(DELETE, rng.randint(1, n)))
            n -= 1
        else:
            if kind == "uniform":
                pos = rng.randint(1, n + 1)
                while True:
                    v = rng.randint(0, 1 << 40)
                    if v not in used:
                        break
            elif kind == "sorted":
                pos = n + 1
                hi_val += rng.randint(1, 9)
                v = hi_val
            elif kind == "reverse":
                pos = n + 1
                lo_val -= rng.randint(1, 9)
                v = lo_val
            else:  # sawtooth
                if run == 0:
                    run = rng.randint(4, 24)
                    direction = -direction
                    base = rng.randint(0, 1 << 40)
                run -= 1
                pos = rng.randint(1, n + 1)
                while True:
                    base += direction * rng.randint(1, 9)
                    v = base
                    if v not in used:
                        break
            used.add(v)
            items.append(Operation(INSERT, pos, v))
            n += 1
        if query_every and (t + 1) % query_every == 0:
            items.append(QUERY)
    return items
