"""Dynamic LIS engines.

Four estimators share one public surface (apply / query / extract):

* naive: recompute patience sorting per query, exact;
* sqrt: block algorithm that either freezes a long witness and reports
  ``r - i`` (when the LIS is large) or runs the exact level structure live
  (when it is small), giving a (1+eps) guarantee at every step;
* grid: one grid-packing level whose per-segment sub-problems are solved by
  child estimators, combined by the non-conflicting-chain DP;
* hierarchy: the grid construction recursing on itself, children one level
  shallower, exact below a size cutoff.

Internally the grid family addresses elements by immutable order keys
rather than positions: a key is assigned once at insertion (midpoint of the
neighbors' keys), so per-segment membership can be kept in plain sorted
lists and an element's routing never changes while positions shift.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Any, Callable, Optional

from .block_scheduler import (GeneratorBlock, PersistentMirror,
                              WrappedEstimator, wrap)
from .classic import lis_extract, lis_length
from .exact_lis import ExactDynamicLis
from .grid_packing import GridPacking
from .indexed_sequence import (DELETE, INSERT, DuplicateValueError, IndexedSeq,
                               Operation, PositionError)
from .work import WorkMeter

KEY_GAP = 1 << 96
BASE_CUTOFF = 64


def _key_between(lo, hi):
    """A fresh key strictly between lo and hi (ints, Fractions allowed)."""
    if isinstance(lo, int) and isinstance(hi, int):
        if hi - lo > 1:
            return lo + (hi - lo) // 2
    return (Fraction(lo) + Fraction(hi)) / 2


class EngineContext:
    """Shared configuration and counters for one engine stack."""

    __slots__ = ("kappa", "cutoff", "meter", "rng", "touched_segments",
                 "child_applies", "fault_skip_segment", "m_override")

    def __init__(self, kappa: float, meter: WorkMeter, seed: int = 0,
                 cutoff: int = BASE_CUTOFF, fault_skip_segment: bool = False,
                 m_override: Optional[int] = None) -> None:
        self.kappa = kappa
        self.cutoff = cutoff
        self.meter = meter
        self.rng = random.Random(seed ^ 0xD15C0)
        self.touched_segments = 0
        self.child_applies = 0
        self.fault_skip_segment = fault_skip_segment
        self.m_override = m_override


# ---------------------------------------------------------------------------
# keyed engines (internal): elements addressed by stable order keys


class KeyedNaive:
    """Exact keyed estimator: sorted key/value lists, patience per query."""

    __slots__ = ("keys", "values", "ctx", "_dirty", "_lis")

    def __init__(self, keys: list, values: list, ctx: EngineContext) -> None:
        self.keys = list(keys)
        self.values = list(values)
        self.ctx = ctx
        self._dirty = True
        self._lis = 0

    def __len__(self) -> int:
        return len(self.keys)

    def insert(self, key, value) -> None:
        i = bisect_left(self.keys, key)
        self.keys.insert(i, key)
        self.values.insert(i, value)
        self.ctx.meter.ticks += max(1, len(self.keys).bit_length())
        self._dirty = True

    def delete(self, key, value) -> None:
        i = bisect_left(self.keys, key)
        self.keys.pop(i)
        self.values.pop(i)
        self.ctx.meter.ticks += max(1, len(self.keys).bit_length())
        self._dirty = True

    def query(self) -> int:
        if self._dirty:
            n = len(self.values)
            self._lis = lis_length(self.values)
            self.ctx.meter.ticks += n * max(1, n.bit_length())
            self._dirty = False
        return self._lis

    def extract(self) -> list[tuple[Any, Any]]:
        idxs = lis_extract(self.values)
        return [(self.keys[i], self.values[i]) for i in idxs]

    def describe(self) -> list[tuple[int, int]]:
        return []


class KeyedNaiveBlock(GeneratorBlock):
    """Exact block generation used when a snapshot is below the cutoff."""

    def __init__(self, snap: tuple[list, list], ctx: EngineContext) -> None:
        super().__init__()
        keys, values = snap
        self.inner = KeyedNaive(keys, values, ctx)
        self._cap = max(16, (len(keys) + 1) // 2)

    def capacity(self) -> int:
        return self._cap

    def work_estimate(self) -> int:
        return max(16, len(self.inner))

    def preprocess_gen(self):
        self.inner.query()
        yield

    def apply(self, token, ctx) -> None:
        kind, key, value = token
        if kind == INSERT:
            self.inner.insert(key, value)
        else:
            self.inner.delete(key, value)

    def query(self) -> int:
        return self.inner.query()

    def extract(self):
        return self.inner.extract()

    def describe(self) -> list[tuple[int, int]]:
        return []


class KeyedListMirror:
    """Sorted key/value lists mirroring the live array for snapshotting."""

    def __init__(self, meter: WorkMeter, keys: list = (), values: list = ()) -> None:
        self.meter = meter
        self.keys = list(keys)
        self.values = list(values)

    def __len__(self) -> int:
        return len(self.keys)

    def apply(self, token) -> None:
        kind, key, value = token
        i = bisect_left(self.keys, key)
        self.meter.ticks += max(1, len(self.keys).bit_length())
        if kind == INSERT:
            self.keys.insert(i, key)
            self.values.insert(i, value)
        else:
            self.keys.pop(i)
            self.values.pop(i)
        return None

    def snapshot(self):
        self.meter.ticks += len(self.keys)
        return (list(self.keys), list(self.values))

    @staticmethod
    def snapshot_len(snap) -> int:
        return len(snap[0])


class GridBlock(GeneratorBlock):
    """One grid-packing generation: value thresholds fix rows, key ranges fix
    columns, each committed segment owns a child estimator over its elements.
    """

    def __init__(self, snap: tuple[list, list], level: int,
                 ctx: EngineContext,
                 child_factory: Callable[[int, list, list], Any]) -> None:
        super().__init__()
        self.snap = snap
        self.level = level
        self.ctx = ctx
        self.child_factory = child_factory
        n = len(snap[0])
        self.n0 = n
        if ctx.m_override is not None:
            self.m = ctx.m_override
        else:
            self.m = max(2, int(n ** (1.0 / (level + 2))))
        # capacity follows n^((k+1)/(k+2)) but never exceeds the per-column
        # budget n/m, which clamping m to small integers can undercut
        self._cap = max(1, min(math.ceil(n ** ((level + 1.0) / (level + 2.0))),
                               n // self.m))
        self.thresholds: list = []
        self.col_bounds: list = []
        self.col_sizes: list[int] = []
        self.grid: Optional[GridPacking] = None
        self.children: list = []
        self._col_limit = 0
        self._dirty = True
        self._cached = 0
        self._chain: list[int] = []

    def capacity(self) -> int:
        return self._cap

    def work_estimate(self) -> int:
        return max(64, 4 * self.n0 + 2 * self.m * self.m)

    def preprocess_gen(self):
        keys, values = self.snap
        n = len(keys)
        m = self.m
        meter = self.ctx.meter
        ordered = sorted(values)
        meter.ticks += n * max(1, n.bit_length())
        for _ in range(0, n, 64):
            yield
        # row thresholds: values at the boundaries of m near-equal parts
        base, extra = divmod(n, m)
        cuts = []
        acc = 0
        for r in range(m - 1):
            acc += base + (1 if r < extra else 0)
            cuts.append(ordered[acc - 1])
        self.thresholds = cuts
        # column boundaries: key of the first element of each column >= 2
        ccuts = []
        acc = 0
        sizes = []
        for c in range(m):
            size = base + (1 if c < extra else 0)
            if c > 0:
                ccuts.append(keys[acc])
            acc += size
            sizes.append(size)
        self.col_bounds = ccuts
        self.col_sizes = sizes
        self._col_limit = 2 * max(sizes) + 2
        yield
        self.grid = GridPacking(m, self.ctx.kappa,
                                family2=True)
        meter.ticks += len(self.grid.segments)
        yield
        # per-segment membership in array order
        seed_keys: list[list] = [[] for _ in self.grid.segments]
        seed_vals: list[list] = [[] for _ in self.grid.segments]
        col = 0
        acc = sizes[0] if sizes else 0
        for i in range(n):
            while i >= acc and col < m - 1:
                col += 1
                acc += sizes[col]
            row = bisect_left(self.thresholds, values[i]) + 1
            for sid in self.grid.cell_cover.get((row, col + 1), ()):
                seed_keys[sid].append(keys[i])
                seed_vals[sid].append(values[i])
            meter.ticks += 1
            if i % 64 == 63:
                yield
        yield
        self.children = []
        for sid in range(len(self.grid.segments)):
            self.children.append(
                self.child_factory(self.level - 1, seed_keys[sid], seed_vals[sid]))
            yield

    # -- routing -------------------------------------------------------------

    def _locate(self, key, value) -> tuple[int, int]:
        row = bisect_left(self.thresholds, value) + 1
        col = bisect_right(self.col_bounds, key) + 1
        return row, col

    def apply(self, token, _ctx) -> None:
        kind, key, value = token
        row, col = self._locate(key, value)
        if kind == INSERT:
            self.col_sizes[col - 1] += 1
            if self.col_sizes[col - 1] > self._col_limit:
                raise AssertionError("column grew beyond twice its initial load")
        else:
            self.col_sizes[col - 1] -= 1
        sids = self.grid.cell_cover.get((row, col), ())
        if self.ctx.fault_skip_segment and len(sids) > 1:
            sids = sids[:-1]
        self.ctx.touched_segments += len(sids)
        for sid in sids:
            self.ctx.child_applies += 1
            child = self.children[sid]
            if kind == INSERT:
                child.insert(key, value)
            else:
                child.delete(key, value)
        self._dirty = True

    def query(self) -> int:
        if self._dirty:
            scores = [float(child.query()) for child in self.children]
            total, chain = self.grid.chain_dp(scores)
            self.ctx.meter.ticks += len(scores) + self.m * self.m
            self._cached = int(round(total))
            self._chain = chain
            self._dirty = False
        return self._cached

    def extract(self) -> list[tuple[Any, Any]]:
        self.query()
        out: list[tuple[Any, Any]] = []
        for sid in self._chain:
            out.extend(self.children[sid].extract())
        return out

    def describe(self) -> list[tuple[int, int]]:
        prof = [(self.level, self.m)]
        best: list[tuple[int, int]] = []
        for child in self.children:
            sub = child.describe()
            if len(sub) > len(best):
                best = sub
        return prof + best


class KeyedWrapped:
    """Keyed estimator running GridBlock / KeyedNaiveBlock generations."""

    def __init__(self, level: int, keys: list, values: list,
                 ctx: EngineContext,
                 child_factory: Optional[Callable] = None) -> None:
        self.ctx = ctx
        self.level = level
        self._child_factory = child_factory or (
            lambda lvl, k, v: make_keyed_engine(lvl, k, v, ctx))
        mirror = KeyedListMirror(ctx.meter, keys, values)

        def factory(snap):
            if KeyedListMirror.snapshot_len(snap) < ctx.cutoff or level < 1:
                return KeyedNaiveBlock(snap, ctx)
            return GridBlock(snap, level, ctx, self._child_factory)

        self._wrapped = wrap(factory, mirror)

    def __len__(self) -> int:
        return len(self._wrapped.mirror)

    def insert(self, key, value) -> None:
        self._wrapped.apply((INSERT, key, value))

    def delete(self, key, value) -> None:
        self._wrapped.apply((DELETE, key, value))

    def query(self) -> int:
        return self._wrapped.query()

    def extract(self):
        return self._wrapped.extract()

    def describe(self) -> list[tuple[int, int]]:
        return self._wrapped.active.describe()

    @property
    def max_live_instances(self) -> int:
        return self._wrapped.max_live_instances


def make_keyed_engine(level: int, keys: list, values: list, ctx: EngineContext):
    """Child factory: exact below the cutoff or at recursion depth 0,
    otherwise a wrapped grid level one step shallower."""
    if level < 1 or len(keys) < ctx.cutoff:
        return KeyedNaive(keys, values, ctx)
    return KeyedWrapped(level, keys, values, ctx)


# ---------------------------------------------------------------------------
# public position-based estimators


class _PositionalBase:
    """Position validation and value bookkeeping shared by the engines."""

    def __init__(self, meter: Optional[WorkMeter]) -> None:
        self.meter = meter if meter is not None else WorkMeter()
        self._values: set = set()
        self._len = 0

    def _check(self, op: Operation) -> None:
        if op.kind == INSERT:
            if not 1 <= op.position <= self._len + 1:
                raise PositionError(
                    f"insert position {op.position} outside [1, {self._len + 1}]")
            if op.value in self._values:
                raise DuplicateValueError(f"value {op.value} already present")
        else:
            if not 1 <= op.position <= self._len:
                raise PositionError(
                    f"delete position {op.position} outside [1, {self._len}]")

    def _note(self, op: Operation, removed=None) -> None:
        if op.kind == INSERT:
            self._values.add(op.value)
            self._len += 1
        else:
            self._values.discard(removed)
            self._len -= 1

    def __len__(self) -> int:
        return self._len


class NaiveLis(_PositionalBase):
    """Exact estimator recomputing the LIS from scratch (lazily per query)."""

    def __init__(self, meter: Optional[WorkMeter] = None) -> None:
        super().__init__(meter)
        self.items: list = []
        self._dirty = True
        self._lis = 0

    def apply(self, op: Operation) -> None:
        self._check(op)
        if op.kind == INSERT:
            self.items.insert(op.position - 1, op.value)
            self._note(op)
        else:
            removed = self.items.pop(op.position - 1)
            self._note(op, removed)
        self.meter.ticks += max(1, self._len.bit_length())
        self._dirty = True

    def query(self) -> int:
        if self._dirty:
            self._lis = lis_length(self.items)
            n = len(self.items)
            self.meter.ticks += n * max(1, n.bit_length())
            self._dirty = False
        return self._lis

    def extract(self) -> list[tuple[int, int]]:
        idxs = lis_extract(self.items)
        return [(i + 1, self.items[i]) for i in idxs]


class SqrtBlock(GeneratorBlock):
    """One sqrt-engine generation.

    After computing the exact LIS r of the snapshot: if r clears the
    threshold (2/eps + 1) * sqrt(n), freeze a witness and report r - i at
    local step i (each operation costs the solution at most one element);
    otherwise run the exact level structure live, whose update cost stays
    near sqrt(n) because the LIS remains small for the whole generation.
    """

    def __init__(self, snap, epsilon: float, meter: WorkMeter, seed: int = 0) -> None:
        super().__init__()
        self.snap = snap
        self.epsilon = epsilon
        self.meter = meter
        self.seed = seed
        self.n0 = PersistentMirror.snapshot_len(snap)
        self._cap = max(1, math.isqrt(self.n0))
        if self._cap * self._cap < self.n0:
            self._cap += 1
        self.tau = math.ceil((2.0 / epsilon + 1.0) * math.sqrt(self.n0))
        self.branch = ""
        self.i = 0
        self.r0 = 0
        self.exact: Optional[ExactDynamicLis] = None
        self.backing: Optional[IndexedSeq] = None
        self.witness: list = []
        self.witness_set: set = set()

    def capacity(self) -> int:
        return self._cap

    def work_estimate(self) -> int:
        return max(64, 5 * self.n0)

    def preprocess_gen(self):
        values = []
        for v in PersistentMirror.iter_snapshot(self.snap):
            values.append(v)
            self.meter.ticks += 1
            if len(values) % 64 == 0:
                yield
        n = len(values)
        r = lis_length(values)
        self.meter.ticks += n * max(1, n.bit_length())
        for _ in range(0, n, 64):
            yield
        self.r0 = r
        if r >= self.tau:
            self.branch = "frozen"
            idxs = lis_extract(values)
            self.meter.ticks += n * max(1, n.bit_length())
            yield
            self.backing = IndexedSeq(values, meter=self.meter, seed=self.seed)
            handles = []
            for node in self.backing._seq.nodes():
                handles.append(node)
                if len(handles) % 64 == 0:
                    yield
            self.witness = [handles[i] for i in idxs]
            self.witness_set = set(map(id, self.witness))
        else:
            self.branch = "exact"
            self.exact = ExactDynamicLis(meter=self.meter, seed=self.seed)
            for _ in self.exact.seed_steps(values):
                yield

    def apply(self, op: Operation, ctx) -> None:
        self.i += 1
        if self.branch == "frozen":
            if op.kind == INSERT:
                self.backing.insert(op.position, op.value)
            else:
                h = self.backing.handle_at(op.position)
                if id(h) in self.witness_set:
                    self.witness_set.discard(id(h))
                    self.witness.remove(h)
                self.backing.delete(op.position)
        else:
            if op.kind == INSERT:
                self.exact.insert(op.position, op.value)
            else:
                self.exact.delete(op.position)

    def query(self) -> int:
        if self.branch == "frozen":
            return self.r0 - self.i
        return self.exact.lis()

    def extract(self) -> list[tuple[int, int]]:
        if self.branch == "frozen":
            want = self.r0 - self.i
            out = []
            for h in self.witness:
                if len(out) == want:
                    break
                out.append((self.backing.position_of(h), h.value))
            return out
        return self.exact.extract()


class SqrtLis(_PositionalBase):
    """(1+eps)-approximate dynamic LIS with near-sqrt(n) worst-case step cost."""

    def __init__(self, epsilon: float, meter: Optional[WorkMeter] = None,
                 seed: int = 0) -> None:
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        super().__init__(meter)
        self.epsilon = epsilon
        mirror = PersistentMirror(self.meter, seed=seed)
        self._wrapped = wrap(
            lambda snap: SqrtBlock(snap, epsilon, self.meter, seed=seed), mirror)

    def apply(self, op: Operation) -> None:
        self._check(op)
        removed = self._wrapped.apply(op)
        self._note(op, removed)

    def query(self) -> int:
        return self._wrapped.query()

    def extract(self) -> list[tuple[int, int]]:
        return self._wrapped.extract()

    @property
    def max_live_instances(self) -> int:
        return self._wrapped.max_live_instances


class GridLis(_PositionalBase):
    """A single grid-packing level with exact children, block-wrapped."""

    def __init__(self, kappa: float, level: int = 1,
                 meter: Optional[WorkMeter] = None, seed: int = 0,
                 cutoff: int = BASE_CUTOFF,
                 m_override: Optional[int] = None,
                 fault_skip_segment: bool = False) -> None:
        if not 0.0 < kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        super().__init__(meter)
        self.ctx = EngineContext(kappa, self.meter, seed=seed, cutoff=cutoff,
                                 fault_skip_segment=fault_skip_segment,
                                 m_override=m_override)
        # children of the single grid level stay exact
        exact_child = lambda lvl, k, v: KeyedNaive(k, v, self.ctx)
        self._keyed = _KeyedFrontend(level, self.ctx, child_factory=exact_child)

    def apply(self, op: Operation) -> None:
        self._check(op)
        removed = self._keyed.apply(op)
        self._note(op, removed)

    def query(self) -> int:
        return self._keyed.query()

    def extract(self) -> list[tuple[int, int]]:
        return self._keyed.extract()

    def describe(self) -> list[tuple[int, int]]:
        return self._keyed.engine.describe()


class _KeyedFrontend:
    """Position-to-key translation in front of a keyed engine stack."""

    def __init__(self, level: int, ctx: EngineContext,
                 child_factory: Optional[Callable] = None) -> None:
        self.ctx = ctx
        self.keys: list = []
        self.values: list = []
        self.engine = KeyedWrapped(level, [], [], ctx, child_factory=child_factory)

    def apply(self, op: Operation):
        if op.kind == INSERT:
            p = op.position
            lo = self.keys[p - 2] if p >= 2 else None
            hi = self.keys[p - 1] if p - 1 < len(self.keys) else None
            if lo is None and hi is None:
                key = 0
            elif lo is None:
                key = hi - KEY_GAP
            elif hi is None:
                key = lo + KEY_GAP
            else:
                key = _key_between(lo, hi)
            self.keys.insert(p - 1, key)
            self.values.insert(p - 1, op.value)
            self.engine.insert(key, op.value)
            return None
        p = op.position
        key = self.keys.pop(p - 1)
        value = self.values.pop(p - 1)
        self.engine.delete(key, value)
        return value

    def query(self) -> int:
        return self.engine.query()

    def extract(self) -> list[tuple[int, int]]:
        out = []
        for key, value in self.engine.extract():
            pos = bisect_left(self.keys, key) + 1
            out.append((pos, value))
        return out


class HierarchyLis(_PositionalBase):
    """Recursive grid hierarchy: depth ceil(4/eps), kappa = eps/2."""

    def __init__(self, epsilon: float, meter: Optional[WorkMeter] = None,
                 seed: int = 0, cutoff: int = BASE_CUTOFF,
                 fault_skip_segment: bool = False) -> None:
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        super().__init__(meter)
        self.epsilon = epsilon
        self.depth = math.ceil(4.0 / epsilon)
        self.kappa = epsilon / 2.0
        self.ctx = EngineContext(self.kappa, self.meter, seed=seed,
                                 cutoff=cutoff,
                                 fault_skip_segment=fault_skip_segment)
        self._front = _KeyedFrontend(self.depth, self.ctx)

    def apply(self, op: Operation) -> None:
        self._check(op)
        removed = self._front.apply(op)
        self._note(op, removed)

    def query(self) -> int:
        return self._front.query()

    def extract(self) -> list[tuple[int, int]]:
        return self._front.extract()

    def describe(self) -> list[tuple[int, int]]:
        return self._front.engine.describe()

    @property
    def touched_segments(self) -> int:
        return self.ctx.touched_segments


# -- engine constructors -------------------------------------------------


def naive_engine(meter: Optional[WorkMeter] = None) -> NaiveLis:
    return NaiveLis(meter=meter)


def sqrt_engine(epsilon: float, meter: Optional[WorkMeter] = None,
                seed: int = 0) -> SqrtLis:
    return SqrtLis(epsilon, meter=meter, seed=seed)


def hierarchy_engine(epsilon: float, meter: Optional[WorkMeter] = None,
                     seed: int = 0, cutoff: int = BASE_CUTOFF) -> HierarchyLis:
    return HierarchyLis(epsilon, meter=meter, seed=seed, cutoff=cutoff)


def grid_engine(kappa: float, level: int = 1, meter: Optional[WorkMeter] = None,
                seed: int = 0, cutoff: int = BASE_CUTOFF,
                m_override: Optional[int] = None) -> GridLis:
    return GridLis(kappa, level=level, meter=meter, seed=seed, cutoff=cutoff,
                   m_override=m_override)


def extract(engine) -> list[tuple[int, int]]:
    """Witness of the engine's current estimate: (position, value) pairs."""
    return engine.extract()
