"""Incidence spectra: how many hyperspheres-or-hyperplanes pass through
exactly m points of a configuration.

Every (d+1)-subset of a set in general position determines one
hypersphere-or-hyperplane; a surface through exactly m points is found by
exactly C(m, d+1) subsets.  The engine therefore histograms incidence
counts over all subsets and divides by binomials, which yields a free
integrity check: inexact division means a predicate lied somewhere.

The same scheme with affine rows (1, y) counts hyperplanes of a set in
R^D, which is how lifted configurations are cross-checked.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import ConsistencyError, DomainError, GeneralPositionError, SpanError
from .geometry import (
    PointSet,
    affine_row,
    is_zero_fast,
    lift_set,
    lifted_row,
    maximal_cofactors,
)
from .scalars import INDETERMINATE, is_zero


@dataclass
class Spectrum:
    """Map m -> number of distinct surfaces through exactly m points.

    ``subset_size`` is d+1 for hypersphere spectra and D for hyperplane
    spectra in R^D; ``ordinary`` and the (d+2)-point count read off the two
    smallest incidence classes.
    """

    dimension: int
    n: int
    subset_size: int
    counts: dict[int, int] = field(default_factory=dict)
    indeterminate_count: int = 0

    @property
    def certified(self) -> bool:
        return self.indeterminate_count == 0

    @property
    def ordinary(self) -> int:
        return self.counts.get(self.subset_size, 0)

    @property
    def next_class(self) -> int:
        return self.counts.get(self.subset_size + 1, 0)

    def partition_holds(self) -> bool:
        """Sum over m of C(m, r) * N_m must exhaust all C(n, r) subsets."""
        total = sum(math.comb(m, self.subset_size) * nm for m, nm in self.counts.items())
        return total == math.comb(self.n, self.subset_size)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "n": self.n,
            "subset_size": self.subset_size,
            "counts": {str(m): nm for m, nm in sorted(self.counts.items())},
            "indeterminate_count": self.indeterminate_count,
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        return cls(
            dimension=data["dimension"],
            n=data["n"],
            subset_size=data["subset_size"],
            counts={int(m): nm for m, nm in data["counts"].items()},
            indeterminate_count=data.get("indeterminate_count", 0),
        )

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.n == other.n
            and self.subset_size == other.subset_size
            and self.counts == other.counts
            and self.indeterminate_count == other.indeterminate_count
        )


# ---------------------------------------------------------------------------
# lexicographic subset ranking
# ---------------------------------------------------------------------------


def unrank_combination(rank: int, n: int, k: int) -> tuple[int, ...]:
    """The rank-th k-subset of range(n) in lexicographic order."""
    if not 0 <= rank < math.comb(n, k):
        raise ValueError("rank out of range")
    out = []
    x = 0
    for remaining in range(k, 0, -1):
        while True:
            block = math.comb(n - x - 1, remaining - 1)
            if rank < block:
                break
            rank -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def combinations_slice(n: int, k: int, start: int, stop: int):
    """Lexicographic k-subsets of range(n) with ranks in [start, stop)."""
    if start >= stop:
        return
    current = list(unrank_combination(start, n, k))
    for _ in range(stop - start):
        yield tuple(current)
        # advance to the next combination
        i = k - 1
        while i >= 0 and current[i] == n - k + i:
            i -= 1
        if i < 0:
            return
        current[i] += 1
        for j in range(i + 1, k):
            current[j] = current[j - 1] + 1


# ---------------------------------------------------------------------------
# subset histogram core
# ---------------------------------------------------------------------------


def _rows_for(ps: PointSet, mode: str) -> list:
    if mode == "sphere":
        return [lifted_row(p) for p in ps.points]
    if mode == "plane":
        return [affine_row(p) for p in ps.points]
    raise ValueError(f"unknown mode {mode!r}")


def _histogram_range(rows, r: int, start: int, stop: int):
    """Incidence-count histogram over subsets with ranks in [start, stop).

    Returns (Counter m -> #subsets, indeterminate subsets, first degenerate
    witness in this range or None).
    """
    n = len(rows)
    hist: Counter = Counter()
    indeterminate = 0
    violation = None
    for subset in combinations_slice(n, r, start, stop):
        cof = maximal_cofactors([rows[i] for i in subset])
        if all(is_zero_fast(c) for c in cof):
            violation = subset
            break
        members = set(subset)
        m = r
        uncertain = False
        for idx in range(n):
            if idx in members:
                continue
            row = rows[idx]
            acc = None
            for coeff, entry in zip(cof, row):
                term = coeff * entry
                acc = term if acc is None else acc + term
            verdict = is_zero(acc)
            if verdict is INDETERMINATE:
                uncertain = True
                break
            if verdict:
                m += 1
        if uncertain:
            indeterminate += 1
        else:
            hist[m] += 1
    return hist, indeterminate, violation


def _worker(args):
    payload, mode, r, start, stop = args
    ps = PointSet.from_json(payload)
    rows = _rows_for(ps, mode)
    hist, indet, violation = _histogram_range(rows, r, start, stop)
    return dict(hist), indet, violation


def _subset_histogram(ps: PointSet, mode: str, r: int, threads: int):
    n = ps.n
    total = math.comb(n, r)
    if threads <= 1 or total < 256:
        rows = _rows_for(ps, mode)
        return _histogram_range(rows, r, 0, total)
    # contiguous rank ranges; merged results are independent of the split
    chunk = -(-total // threads)
    ranges = [(i, min(i + chunk, total)) for i in range(0, total, chunk)]
    payload = ps.to_json()
    hist: Counter = Counter()
    indeterminate = 0
    violations = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part, indet, violation in pool.map(
            _worker, [(payload, mode, r, a, b) for a, b in ranges]
        ):
            hist.update(part)
            indeterminate += indet
            if violation is not None:
                violations.append(violation)
    if violations:
        return hist, indeterminate, min(violations)
    return hist, indeterminate, None


def _divide_histogram(hist, r: int, indeterminate: int) -> dict[int, int]:
    counts = {}
    for m, subsets in sorted(hist.items()):
        weight = math.comb(m, r)
        quotient, remainder = divmod(subsets, weight)
        if remainder and indeterminate == 0:
            raise ConsistencyError(
                f"{subsets} subsets saw incidence count {m}, not a multiple of C({m},{r})"
            )
        # with indeterminate exclusions the multiplicity bookkeeping is
        # legitimately broken; the floor is reported and the run flagged
        counts[m] = quotient
    return counts


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def spectrum(ps: PointSet, threads: int = 1) -> Spectrum:
    """Full hypersphere incidence spectrum of a point set.

    Raises GeneralPositionError on the first (lexicographic) d+1 points
    lying on a common (d-2)-sphere or (d-2)-flat, and ConsistencyError if
    the subset counts contradict the multiplicity bookkeeping.
    """
    d = ps.dimension
    r = d + 1
    if ps.n < d + 2:
        raise DomainError(f"need at least {d + 2} points in dimension {d}, got {ps.n}")
    hist, indeterminate, violation = _subset_histogram(ps, "sphere", r, threads)
    if violation is not None:
        raise GeneralPositionError(violation)
    counts = _divide_histogram(hist, r, indeterminate)
    spec = Spectrum(d, ps.n, r, counts, indeterminate)
    if spec.certified and not spec.partition_holds():
        raise ConsistencyError("partition identity failed after exact division")
    return spec


def _affine_rank(rows) -> int:
    """Rank by fraction-free elimination; exact backends only."""
    work = [list(r) for r in rows]
    rank = 0
    for col in range(len(work[0])):
        pivot = None
        for i in range(rank, len(work)):
            if not is_zero_fast(work[i][col]):
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][col]
        for i in range(rank + 1, len(work)):
            c = work[i][col]
            if not is_zero_fast(c):
                work[i] = [pv * a - c * b for a, b in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def ordinary_hyperplane_spectrum(ps: PointSet, threads: int = 1) -> Spectrum:
    """Hyperplane incidence spectrum of a set in R^D (subsets of size D).

    Raises SpanError if some D points fail to span a hyperplane, or if the
    whole set is contained in one hyperplane (so that no surface through
    only part of it exists at all).
    """
    r = ps.dimension
    if ps.n < r + 1:
        raise SpanError(())
    if ps.backend != "interval" and _affine_rank([affine_row(p) for p in ps.points]) <= r:
        raise SpanError(tuple(range(ps.n)))
    hist, indeterminate, violation = _subset_histogram(ps, "plane", r, threads)
    if violation is not None:
        raise SpanError(violation)
    counts = _divide_histogram(hist, r, indeterminate)
    spec = Spectrum(ps.dimension, ps.n, r, counts, indeterminate)
    if spec.certified and not spec.partition_holds():
        raise ConsistencyError("partition identity failed after exact division")
    return spec


def count_ordinary(ps: PointSet, threads: int = 1) -> int:
    """Number of hyperspheres-or-hyperplanes through exactly d+1 points."""
    return spectrum(ps, threads=threads).ordinary


def count_dplus2(ps: PointSet, threads: int = 1) -> int:
    """Number of hyperspheres-or-hyperplanes through exactly d+2 points."""
    return spectrum(ps, threads=threads).next_class


@dataclass
class CorrespondenceReport:
    sphere_spectrum: Spectrum
    plane_spectrum: Spectrum
    equal: bool
    first_mismatch: int | None

    def to_json(self) -> dict:
        return {
            "hypersphere_spectrum": self.sphere_spectrum.to_json(),
            "lifted_hyperplane_spectrum": self.plane_spectrum.to_json(),
            "equal": self.equal,
            "first_mismatch": self.first_mismatch,
        }


def verify_correspondence(ps: PointSet, threads: int = 1) -> CorrespondenceReport:
    """Check that the hypersphere spectrum downstairs equals the hyperplane
    spectrum of the lifted set on the unit sphere of R^(d+1)."""
    sphere = spectrum(ps, threads=threads)
    plane = ordinary_hyperplane_spectrum(lift_set(ps), threads=threads)
    equal = sphere.counts == plane.counts and sphere.indeterminate_count == plane.indeterminate_count
    mismatch = None
    if not equal:
        for m in sorted(set(sphere.counts) | set(plane.counts)):
            if sphere.counts.get(m, 0) != plane.counts.get(m, 0):
                mismatch = m
                break
    return CorrespondenceReport(sphere, plane, equal, mismatch)


# ---------------------------------------------------------------------------
# exact-mode fast path: canonical-key deduplication
# ---------------------------------------------------------------------------


def spectrum_by_hashing(ps: PointSet) -> Spectrum:
    """Alternative exact-mode spectrum: canonicalize the surface of every
    (d+1)-subset and invert key multiplicities t = C(m, d+1) back to m.

    Shares the solver but none of the incidence counting with
    ``spectrum``; the two are cross-checked in tests and available as a
    runtime self-check.
    """
    from .errors import DegeneracyError
    from .geometry import hypersphere_through

    if ps.backend == "interval":
        raise ConsistencyError("hash deduplication requires an exact backend")
    d = ps.dimension
    r = d + 1
    keys: Counter = Counter()
    for subset in itertools.combinations(range(ps.n), r):
        try:
            sphere = hypersphere_through([ps.points[i] for i in subset])
        except DegeneracyError:
            raise GeneralPositionError(subset) from None
        keys[sphere] += 1
    counts: Counter = Counter()
    for sphere, multiplicity in keys.items():
        m = r
        while m <= ps.n and math.comb(m, r) < multiplicity:
            m += 1
        if m > ps.n or math.comb(m, r) != multiplicity:
            raise ConsistencyError(
                f"key multiplicity {multiplicity} is not a binomial C(m,{r})"
            )
        counts[m] += 1
    spec = Spectrum(d, ps.n, r, dict(counts), 0)
    if not spec.partition_holds():
        raise ConsistencyError("partition identity failed in hash fast path")
    return spec
