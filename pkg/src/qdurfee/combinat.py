"""Brute-force enumeration of generalized odd Durfee symbols.

A symbol for n is a pair of rows (partitions into odd parts <= 2t+1), two
partitions lambda, mu into distinct odd parts <= 2t-1, and t >= 0, with
n = |top| + |bottom| + |lambda| + |mu| + 2t + 1.  Its statistics are
r (odd numbers 1..2t-1 missing from lambda), s (same for mu) and the rank
m = len(top) - len(bottom).

k-marked symbols additionally give every row entry a color 1..k; see
:func:`iter_marked`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Tuple

from .coeffring import binom

Partition = Tuple[int, ...]


@lru_cache(maxsize=None)
def odd_partitions(size: int, max_part: int) -> Tuple[Partition, ...]:
    """All partitions of ``size`` into odd parts <= max_part, non-increasing."""
    if size == 0:
        return ((),)
    out = []
    top = max_part if max_part % 2 else max_part - 1
    for p in range(min(top, size if size % 2 else size - 1), 0, -2):
        for rest in odd_partitions(size - p, p):
            out.append((p,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def distinct_odd_subsets(t: int) -> Tuple[Partition, ...]:
    """All subsets of {1, 3, ..., 2t-1}, as decreasing tuples."""
    odds = list(range(2 * t - 1, 0, -2))
    return tuple(c for r in range(len(odds) + 1) for c in combinations(odds, r))


@dataclass(frozen=True)
class DurfeeSymbol:
    t: int
    top: Partition
    bottom: Partition
    lam: Partition
    mu: Partition

    @property
    def weight(self) -> int:
        return sum(self.top) + sum(self.bottom) + sum(self.lam) + sum(self.mu) + 2 * self.t + 1

    @property
    def r(self) -> int:
        return self.t - len(self.lam)

    @property
    def s(self) -> int:
        return self.t - len(self.mu)

    @property
    def rank(self) -> int:
        return len(self.top) - len(self.bottom)

    def stats(self) -> Tuple[int, int, int]:
        return self.r, self.s, self.rank

    def conjugate(self) -> "DurfeeSymbol":
        """Swap the two rows (rank m -> -m)."""
        return DurfeeSymbol(self.t, self.bottom, self.top, self.lam, self.mu)


def iter_symbols(n: int) -> Iterator[DurfeeSymbol]:
    """Every generalized odd Durfee symbol of weight n, each exactly once."""
    for t in range((n - 1) // 2 + 1):
        rest = n - 2 * t - 1
        subsets = distinct_odd_subsets(t)
        for lam in subsets:
            for mu in subsets:
                rows = rest - sum(lam) - sum(mu)
                if rows < 0:
                    continue
                for x in range(rows + 1):
                    for top in odd_partitions(x, 2 * t + 1):
                        for bottom in odd_partitions(rows - x, 2 * t + 1):
                            yield DurfeeSymbol(t, top, bottom, lam, mu)


@lru_cache(maxsize=None)
def _rows_by_length(size: int, max_part: int) -> Dict[int, int]:
    return dict(Counter(len(p) for p in odd_partitions(size, max_part)))


def enumerate_symbols(n: int) -> Dict[Tuple[int, int, int], int]:
    """Counts N(r, s, m, n) keyed by (r, s, m).

    Same enumeration as :func:`iter_symbols`, except that the two rows are
    tallied by length from the explicit partition lists instead of being
    paired one by one.
    """
    if n < 1:
        raise ValueError("n must be positive")
    counts: Counter = Counter()
    for t in range((n - 1) // 2 + 1):
        rest = n - 2 * t - 1
        subsets = distinct_odd_subsets(t)
        for lam in subsets:
            for mu in subsets:
                rows = rest - sum(lam) - sum(mu)
                if rows < 0:
                    continue
                r, s = t - len(lam), t - len(mu)
                for x in range(rows + 1):
                    tops = _rows_by_length(x, 2 * t + 1)
                    bots = _rows_by_length(rows - x, 2 * t + 1)
                    for i, ci in tops.items():
                        for j, cj in bots.items():
                            counts[(r, s, i - j)] += ci * cj
    return dict(counts)


# ---------------------------------------------------------------------------
# marked symbols
# ---------------------------------------------------------------------------

ColoredRow = Tuple[Tuple[int, int], ...]  # ((part, color), ...) non-increasing in both


@dataclass(frozen=True)
class MarkedSymbol:
    k: int
    t: int
    top: ColoredRow
    bottom: ColoredRow
    lam: Partition
    mu: Partition

    @property
    def weight(self) -> int:
        parts = sum(p for p, _ in self.top) + sum(p for p, _ in self.bottom)
        return parts + sum(self.lam) + sum(self.mu) + 2 * self.t + 1

    @property
    def r(self) -> int:
        return self.t - len(self.lam)

    @property
    def s(self) -> int:
        return self.t - len(self.mu)

    def ranks(self) -> Tuple[int, ...]:
        """(rho_1, ..., rho_k): top minus bottom count per color, minus 1 below k."""
        out = []
        for c in range(1, self.k + 1):
            tau = sum(1 for _, col in self.top if col == c)
            beta = sum(1 for _, col in self.bottom if col == c)
            out.append(tau - beta - (1 if c < self.k else 0))
        return tuple(out)


def _colored_rows(size: int, k: int, bounds: Tuple[Tuple[int, int], ...], lo_color: int = 1) -> List[ColoredRow]:
    """Rows of total ``size`` whose color-c parts are odd and lie in bounds[c-1],
    with every color-c part >= every part of a lower color."""
    out: List[ColoredRow] = []

    def rec(c: int, remaining: int, floor: int, acc: List[Tuple[int, int]]):
        # colors processed from lo_color upward; ``floor`` is the largest part so far
        if c > k:
            if remaining == 0:
                out.append(tuple(sorted(acc, key=lambda pc: (-pc[0], -pc[1]))))
            return
        lo, hi = bounds[c - 1]
        lo = max(lo, floor, 1)
        # choose a multiset of odd parts in [lo, hi] for color c
        for block in _odd_multisets(remaining, lo, hi):
            new_floor = max(block) if block else floor
            rec(c + 1, remaining - sum(block), new_floor, acc + [(p, c) for p in block])

    rec(lo_color, size, 0, [])
    return out


def _odd_multisets(limit: int, lo: int, hi: int) -> List[Partition]:
    """Partitions of any size <= limit into odd parts in [lo, hi] (including empty)."""
    out = []
    for size in range(limit + 1):
        for p in odd_partitions(size, hi):
            if not p or p[-1] >= lo:
                out.append(p)
    return out


def iter_marked(k: int, n: int, boundary: str = "2t+1") -> Iterator[MarkedSymbol]:
    """Every k-marked generalized odd Durfee symbol of weight n.

    Conditions: parts and colors non-increasing along each row; colors
    1..k-1 occur in the top row; with W_i the largest top-row part of color i
    (W_0 = 1), bottom parts of color i < k lie in [W_{i-1}, W_i] and parts of
    color k in [W_{k-1}, L] where L = 2t+1 (``boundary="2t+1"``) or L = t
    (``boundary="t"``, the literal wording).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    for t in range((n - 1) // 2 + 1):
        rest = n - 2 * t - 1
        big = 2 * t + 1
        subsets = distinct_odd_subsets(t)
        for lam in subsets:
            for mu in subsets:
                rows = rest - sum(lam) - sum(mu)
                if rows < 0:
                    continue
                for x in range(rows + 1):
                    tops = _colored_rows(x, k, tuple((1, big) for _ in range(k)))
                    for top in tops:
                        colors = {c for _, c in top}
                        if any(c not in colors for c in range(1, k)):
                            continue
                        W = [1] + [max(p for p, c in top if c == i) for i in range(1, k)]
                        last = big if boundary == "2t+1" else t
                        bounds = tuple((W[i - 1], W[i]) for i in range(1, k)) + ((W[k - 1], last),)
                        if any(lo > hi for lo, hi in bounds[:-1]):
                            continue
                        for bottom in _colored_rows(rows - x, k, bounds):
                            yield MarkedSymbol(k, t, top, bottom, lam, mu)


def enumerate_marked(k: int, n: int, boundary: str = "2t+1") -> Dict[Tuple[int, ...], int]:
    """Counts keyed by (r, s, m_1, ..., m_k)."""
    counts: Counter = Counter()
    for sym in iter_marked(k, n, boundary):
        counts[(sym.r, sym.s) + sym.ranks()] += 1
    return dict(counts)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def symmetrized_moment(counts: Dict[Tuple[int, int, int], int], k: int) -> Dict[Tuple[int, int], Fraction]:
    """eta_k(r, s) = sum_m binom(m + floor(k/2), k) N(r, s, m)."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for (r, s, m), c in counts.items():
        out[(r, s)] = out.get((r, s), 0) + binom(m + k // 2, k) * c
    return out


def ordinary_moment(counts: Dict[Tuple[int, int, int], int], k: int) -> Dict[Tuple[int, int], int]:
    """H_k(r, s) = sum_m m^k N(r, s, m)."""
    out: Dict[Tuple[int, int], int] = {}
    for (r, s, m), c in counts.items():
        out[(r, s)] = out.get((r, s), 0) + m ** k * c
    return out


def moments_from_counts(counts, k: int):
    """(eta_{2k}, H_{2k}) per (r, s)."""
    return symmetrized_moment(counts, 2 * k), ordinary_moment(counts, 2 * k)


def counts_to_poly(counts: Dict[Tuple[int, ...], int], marks: int = 0):
    """sum count * a^r b^s z^m (or x_1^{m_1}...x_k^{m_k} when ``marks`` = k)."""
    from .coeffring import ParamPoly

    terms = {}
    for key, c in counts.items():
        if marks:
            r, s, *ms = key
            exps = (r, s, 0) + tuple(ms)
        else:
            r, s, m = key
            exps = (r, s, 2 * m)
        terms[exps] = terms.get(exps, 0) + c
    return ParamPoly.from_terms(terms)
