"""Finite rational metric spaces and finite dynamical systems.

Points of a space are indices 0..n-1 with human labels on the side.  All
distances are exact ``Fraction`` values; subsets of points are plain int
bitmasks (bit i set <=> point i in the subset).  Everything here is
immutable and pure.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .rationals import parse_rational, format_rational


class SpaceValidationError(ValueError):
    """A structurally broken space (wrong shapes), as opposed to a space
    whose matrix merely violates the metric axioms."""


# ---------------------------------------------------------------------------
# bitmask subset helpers


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def iter_mask(mask):
    """Yield the indices of the set bits, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_size(mask):
    return bin(mask).count("1")


@dataclass(frozen=True)
class FiniteMetricSpace:
    point_labels: tuple
    dist: tuple  # tuple of tuples of Fraction

    def __post_init__(self):
        object.__setattr__(self, "point_labels", tuple(self.point_labels))
        object.__setattr__(self, "dist", tuple(tuple(Fraction(v) for v in row) for row in self.dist))

    @property
    def n(self):
        return len(self.point_labels)

    def d(self, i, j):
        return self.dist[i][j]

    def ball_mask(self, center, radius):
        """Bitmask of the open ball {j : d(center, j) < radius}."""
        m = 0
        row = self.dist[center]
        for j in range(self.n):
            if row[j] < radius:
                m |= 1 << j
        return m

    def min_positive_distance(self):
        vals = [self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)]
        return min(vals) if vals else None

    def max_distance(self):
        vals = [self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)]
        return max(vals) if vals else Fraction(0)


@dataclass(frozen=True)
class FiniteMetricSystem:
    space: FiniteMetricSpace
    fmap: tuple  # fmap[i] = index of f(point i)
    name: str = "system"

    def __post_init__(self):
        object.__setattr__(self, "fmap", tuple(int(i) for i in self.fmap))
        if len(self.fmap) != self.space.n:
            raise SpaceValidationError("map length %d != point count %d" % (len(self.fmap), self.space.n))
        for i in self.fmap:
            if not (0 <= i < self.space.n):
                raise SpaceValidationError("map index %d out of range" % i)

    @property
    def n(self):
        return self.space.n

    def is_surjective(self):
        return set(self.fmap) == set(range(self.n))

    def image_mask(self, mask):
        out = 0
        for i in iter_mask(mask):
            out |= 1 << self.fmap[i]
        return out

    def iterate(self, i, k):
        for _ in range(k):
            i = self.fmap[i]
        return i


@dataclass(frozen=True)
class ThresholdPair:
    eps: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.eps <= 0 or self.delta <= 0:
            raise ValueError("thresholds must be positive")


@dataclass(frozen=True)
class ThresholdGrid:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))


def validate_space(space):
    """Check the metric axioms; return a list of human-readable violations.

    Shape errors (non-square matrix, size mismatch with the labels) raise
    SpaceValidationError instead of being reported as metric violations.
    """
    n = len(space.point_labels)
    if len(space.dist) != n or any(len(row) != n for row in space.dist):
        raise SpaceValidationError("distance matrix is not %d x %d" % (n, n))
    violations = []
    d = space.dist
    for i in range(n):
        if d[i][i] != 0:
            violations.append("d(%d,%d) = %s != 0" % (i, i, d[i][i]))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                violations.append("asymmetric pair (%d,%d): %s vs %s" % (i, j, d[i][j], d[j][i]))
            if d[i][j] <= 0:
                violations.append("non-positive distance d(%d,%d) = %s" % (i, j, d[i][j]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i][k] > d[i][j] + d[j][k]:
                    violations.append(
                        "triangle violation (%d,%d,%d): %s > %s + %s"
                        % (i, j, k, d[i][k], d[i][j], d[j][k]))
    return violations


def hausdorff_distance(a_mask, b_mask, space):
    """Hausdorff distance between two nonempty subsets (bitmasks)."""
    if a_mask == 0 or b_mask == 0:
        raise ValueError("hausdorff_distance requires nonempty sets")
    d = space.dist
    a = list(iter_mask(a_mask))
    b = list(iter_mask(b_mask))
    best = Fraction(0)
    for i in a:
        row = d[i]
        m = min(row[j] for j in b)
        if m > best:
            best = m
    for j in b:
        row = d[j]
        m = min(row[i] for i in a)
        if m > best:
            best = m
    return best


def threshold_grid(space):
    """Every threshold at which a strict-inequality verdict can change.

    Contains half the minimum positive distance, every distinct positive
    distance, the midpoint of each consecutive pair, and a midpoint with the
    sentinel 2*max so "everything is related" is representable.  A 1-point
    space has no pairwise distances; the grid is then the single value 1.
    """
    n = space.n
    vals = sorted({space.dist[i][j] for i in range(n) for j in range(i + 1, n)})
    if not vals:
        return ThresholdGrid((Fraction(1),))
    ext = vals + [2 * vals[-1]]
    grid = [vals[0] / 2]
    for v, w in zip(ext, ext[1:]):
        grid.append(v)
        grid.append((v + w) / 2)
    return ThresholdGrid(tuple(grid))


def orbit_set(system, start):
    """Bitmask of {f^i(start) : i >= 0}, iterating until repetition."""
    seen = 0
    x = start
    while not (seen >> x) & 1:
        seen |= 1 << x
        x = system.fmap[x]
    return seen


def omega_limit_set(system, start):
    """The eventual cycle of the orbit (the periodic part)."""
    # after n steps the transient is over
    x = system.iterate(start, system.n)
    return orbit_set(system, x)


# ---------------------------------------------------------------------------
# JSON system format


def system_to_json(system):
    return {
        "points": list(system.space.point_labels),
        "metric": [[format_rational(v) for v in row] for row in system.space.dist],
        "map": list(system.fmap),
    }


def system_from_json(obj, name="system"):
    try:
        labels = [str(p) for p in obj["points"]]
        metric = [[parse_rational(v) for v in row] for row in obj["metric"]]
        fmap = [int(i) for i in obj["map"]]
    except (KeyError, TypeError) as exc:
        raise SpaceValidationError("malformed system object: %s" % exc)
    space = FiniteMetricSpace(tuple(labels), tuple(tuple(row) for row in metric))
    # shape check happens in validate_space; do it eagerly so a bad file
    # fails at parse time
    problems = validate_space(space)
    if problems:
        raise SpaceValidationError("; ".join(problems))
    return FiniteMetricSystem(space, tuple(fmap), name=name)


# ---------------------------------------------------------------------------
# common example spaces


def line_space(n, labels=None):
    """Points 0..n-1 on a line, d(i,j) = |i-j|."""
    labels = labels or [str(i) for i in range(n)]
    dist = tuple(tuple(Fraction(abs(i - j)) for j in range(n)) for i in range(n))
    return FiniteMetricSpace(tuple(labels), dist)


def discrete_space(n, labels=None):
    """All distinct distances equal to 1."""
    labels = labels or [str(i) for i in range(n)]
    dist = tuple(tuple(Fraction(0 if i == j else 1) for j in range(n)) for i in range(n))
    return FiniteMetricSpace(tuple(labels), dist)
