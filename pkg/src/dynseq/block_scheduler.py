"""Deamortization of block-based algorithms.

A block-based algorithm preprocesses a snapshot of the array (resumably, in
small quanta), then serves a bounded number of operations at a bounded
per-operation cost.  ``wrap`` chains such blocks into a continuously
running estimator: when the active block has consumed 9/10 of its capacity
the array is snapshotted and a successor starts preprocessing, spread over
the next tenth; operations arriving meanwhile are buffered and replayed to
the successor at two per step, so the successor is caught up exactly when
the active block's capacity runs out.

Queries are always answered by the active, fully preprocessed block, so any
approximation guarantee of the block algorithm carries over unchanged.
"""

from __future__ import annotations

import random
from typing import Any, Callable, Iterator, Optional

from .indexed_sequence import INSERT, Operation
from .work import WorkMeter


class ContractViolationError(RuntimeError):
    """A block instance broke its contract (e.g. capacity ran out before the
    successor finished preprocessing, indicating a relativity breach)."""


class BlockAlgorithm:
    """Behavioral contract for one block generation.

    Lifecycle: construct with a snapshot, drive ``preprocess_step`` until it
    reports completion, then serve up to ``capacity()`` operations.
    ``work_estimate()`` declares the preprocessing size used to compute the
    per-step quantum.
    """

    def capacity(self) -> int:
        raise NotImplementedError

    def work_estimate(self) -> int:
        raise NotImplementedError

    def preprocess_step(self, budget: int) -> bool:
        """Run up to ``budget`` preprocessing units; True when done."""
        raise NotImplementedError

    def apply(self, op: Operation, ctx: Any) -> None:
        raise NotImplementedError

    def query(self) -> int:
        raise NotImplementedError

    def extract(self):
        raise NotImplementedError("this block algorithm has no witness")


class GeneratorBlock(BlockAlgorithm):
    """Convenience base: preprocessing written as a generator that yields
    once per unit of work."""

    def __init__(self) -> None:
        self._gen: Optional[Iterator[None]] = None
        self._done = False

    def preprocess_gen(self) -> Iterator[None]:
        raise NotImplementedError

    def preprocess_step(self, budget: int) -> bool:
        if self._done:
            return True
        if self._gen is None:
            self._gen = self.preprocess_gen()
        try:
            for _ in range(budget):
                next(self._gen)
        except StopIteration:
            self._done = True
            self._gen = None
        return self._done


# ---------------------------------------------------------------------------
# array mirrors used for snapshotting


class _PNode:
    """Immutable node of the persistent positional treap."""

    __slots__ = ("value", "prio", "size", "left", "right")

    def __init__(self, value, prio, left, right):
        self.value = value
        self.prio = prio
        self.left = left
        self.right = right
        self.size = 1 + (left.size if left else 0) + (right.size if right else 0)


class PersistentMirror:
    """Positional sequence with O(1) snapshots via path copying.

    Snapshots are frozen roots; a successor block reads its snapshot lazily
    while the live mirror keeps mutating, so taking one never costs a spike
    of work in a single step.
    """

    def __init__(self, meter: WorkMeter, seed: int = 0) -> None:
        self.meter = meter
        self.rng = random.Random(seed ^ 0x9E3779B9)
        self.root: Optional[_PNode] = None

    def __len__(self) -> int:
        return self.root.size if self.root else 0

    def _merge(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        self.meter.ticks += 1
        if a.prio > b.prio:
            return _PNode(a.value, a.prio, a.left, self._merge(a.right, b))
        return _PNode(b.value, b.prio, self._merge(a, b.left), b.right)

    def _split(self, t, k):
        if t is None:
            return None, None
        self.meter.ticks += 1
        lsize = t.left.size if t.left else 0
        if k <= lsize:
            a, b = self._split(t.left, k)
            return a, _PNode(t.value, t.prio, b, t.right)
        a, b = self._split(t.right, k - lsize - 1)
        return _PNode(t.value, t.prio, t.left, a), b

    def apply(self, op: Operation) -> Any:
        """Mutate and return the op context (removed value for deletes)."""
        if op.kind == INSERT:
            a, b = self._split(self.root, op.position - 1)
            node = _PNode(op.value, self.rng.random(), None, None)
            self.root = self._merge(self._merge(a, node), b)
            return None
        a, rest = self._split(self.root, op.position - 1)
        mid, b = self._split(rest, 1)
        self.root = self._merge(a, b)
        return mid.value

    def snapshot(self) -> Any:
        return self.root

    @staticmethod
    def iter_snapshot(root) -> Iterator[Any]:
        stack = []
        cur = root
        while stack or cur is not None:
            while cur is not None:
                stack.append(cur)
                cur = cur.left
            cur = stack.pop()
            yield cur.value
            cur = cur.right

    @staticmethod
    def snapshot_len(root) -> int:
        return root.size if root else 0


class ListMirror:
    """Plain-list mirror for engines whose per-step unit bounds are not under
    test; snapshots copy the list."""

    def __init__(self, meter: WorkMeter, seed: int = 0) -> None:
        self.meter = meter
        self.items: list = []

    def __len__(self) -> int:
        return len(self.items)

    def apply(self, op: Operation) -> Any:
        self.meter.ticks += 1
        if op.kind == INSERT:
            self.items.insert(op.position - 1, op.value)
            return None
        return self.items.pop(op.position - 1)

    def snapshot(self) -> Any:
        self.meter.ticks += len(self.items)
        return list(self.items)

    @staticmethod
    def iter_snapshot(snap) -> Iterator[Any]:
        return iter(snap)

    @staticmethod
    def snapshot_len(snap) -> int:
        return len(snap)


class NullMirror:
    """For block algorithms that snapshot shared state of their own."""

    def __init__(self, meter: WorkMeter, seed: int = 0) -> None:
        self.meter = meter
        self._len = 0

    def __len__(self) -> int:
        return self._len

    def apply(self, op: Operation) -> Any:
        self._len += 1 if op.kind == INSERT else -1
        return None

    def snapshot(self) -> Any:
        return None

    @staticmethod
    def iter_snapshot(snap) -> Iterator[Any]:
        return iter(())

    @staticmethod
    def snapshot_len(snap) -> int:
        return 0


# ---------------------------------------------------------------------------


SYNC_BASE_LEN = 32    # below this snapshot size, preprocess synchronously
SYNC_BASE_CAP = 20    # below this capacity, build the successor synchronously


class WrappedEstimator:
    """Dynamic estimator built from a block-algorithm factory.

    ``factory(snapshot, mirror_cls)`` must return a fresh BlockAlgorithm for
    the given frozen snapshot.  At most two instances are ever alive.
    """

    def __init__(self, factory: Callable[[Any], BlockAlgorithm], mirror) -> None:
        self.factory = factory
        self.mirror = mirror
        self.meter: WorkMeter = mirror.meter
        self.live_instances = 0
        self.max_live_instances = 0
        self.steps = 0
        self._active: Optional[BlockAlgorithm] = None
        self._active_used = 0
        self._warming: Optional[BlockAlgorithm] = None
        self._warm_quantum = 0
        self._warm_applied = 0
        self._buffer: list[tuple[Operation, Any]] = []
        # first generation: preprocessed on the spot, charged to the caller
        inst = self.factory(self.mirror.snapshot())
        self._alive(+1)
        while not inst.preprocess_step(max(64, inst.work_estimate())):
            pass
        self._active = inst

    def _begin_warming(self) -> None:
        snap = self.mirror.snapshot()
        inst = self.factory(snap)
        self._alive(+1)
        g = self._active.capacity()
        if g < SYNC_BASE_CAP or self.mirror.snapshot_len(snap) < SYNC_BASE_LEN:
            # degenerate/tiny generations: finish preprocessing on the spot
            while not inst.preprocess_step(max(64, inst.work_estimate())):
                pass
            self._warm_quantum = 0
        else:
            pieces = max(1, g // 20)
            self._warm_quantum = -(-inst.work_estimate() // pieces)
        self._warming = inst
        self._warm_applied = 0
        self._buffer = []

    def _alive(self, delta: int) -> None:
        self.live_instances += delta
        if self.live_instances > self.max_live_instances:
            self.max_live_instances = self.live_instances

    # -- estimator surface ----------------------------------------------------

    @property
    def active(self) -> BlockAlgorithm:
        return self._active

    def apply(self, op: Operation):
        """Feed one operation; returns the mirror's op context (for deletes,
        the removed value where the mirror tracks content)."""
        self.steps += 1
        ctx = self.mirror.apply(op)
        self._active.apply(op, ctx)
        self._active_used += 1
        g = self._active.capacity()
        if self._warming is not None:
            self._buffer.append((op, ctx))
            if self._warm_quantum:
                self._warming.preprocess_step(self._warm_quantum)
            if self._warming.preprocess_step(0):
                drained = 0
                while self._buffer and drained < 2:
                    b_op, b_ctx = self._buffer.pop(0)
                    self._warming.apply(b_op, b_ctx)
                    self._warm_applied += 1
                    drained += 1
        if self._warming is None and self._active_used >= (9 * g + 9) // 10:
            self._begin_warming()
        if self._active_used >= g:
            self._handover()
        return ctx

    def _handover(self) -> None:
        if self._warming is None:
            self._begin_warming()
        if not self._warming.preprocess_step(0):
            if self._active.capacity() < SYNC_BASE_CAP:
                while not self._warming.preprocess_step(max(64, self._warming.work_estimate())):
                    pass
            else:
                raise ContractViolationError(
                    "successor not preprocessed at handover; relativity breach?")
        while self._buffer:
            b_op, b_ctx = self._buffer.pop(0)
            self._warming.apply(b_op, b_ctx)
            self._warm_applied += 1
        self._active = self._warming
        self._alive(-1)
        self._warming = None
        # the successor has already consumed the replayed operations
        self._active_used = self._warm_applied
        self._warm_applied = 0

    def query(self) -> int:
        return self._active.query()

    def extract(self):
        return self._active.extract()

    def __len__(self) -> int:
        return len(self.mirror)


def wrap(factory: Callable[[Any], BlockAlgorithm], mirror) -> WrappedEstimator:
    return WrappedEstimator(factory, mirror)
