"""Constructors for induced systems: products, symmetric products,
hyperspaces, factor maps, and inverse-limit towers.

All constructors return ordinary FiniteMetricSystem values, so the induced
systems round-trip through every decider unchanged.  Point orderings are
canonical (tuples in lexicographic order, subsets by ascending bitmask) so
induced indices are reproducible bit for bit.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (FiniteMetricSpace, FiniteMetricSystem, hausdorff_distance,
                   iter_mask, mask_of)


class CapExceeded(RuntimeError):
    """An induced construction would exceed its configured size cap."""


DEFAULT_HYPERSPACE_CAP = 12


def product_system(systems, cap=4096):
    """Cartesian product with the sup metric and the componentwise map."""
    if not systems:
        raise ValueError("product of zero systems")
    size = 1
    for s in systems:
        size *= s.n
    if size > cap:
        raise CapExceeded("product has %d points, cap is %d" % (size, cap))
    points = list(itertools.product(*[range(s.n) for s in systems]))
    index = {p: i for i, p in enumerate(points)}
    labels = tuple("(" + ",".join(s.space.point_labels[c] for s, c in zip(systems, p)) + ")"
                   for p in points)
    dist = tuple(
        tuple(max(s.space.dist[a][b] for s, a, b in zip(systems, p, q)) if p != q else Fraction(0)
              for q in points)
        for p in points)
    fmap = tuple(index[tuple(s.fmap[c] for s, c in zip(systems, p))] for p in points)
    return FiniteMetricSystem(FiniteMetricSpace(labels, dist), fmap,
                              name="x".join(s.name for s in systems))


def _subset_label(space, mask):
    return "{" + ",".join(space.point_labels[i] for i in iter_mask(mask)) + "}"


def _subset_system(system, masks, name):
    space = system.space
    index = {m: i for i, m in enumerate(masks)}
    labels = tuple(_subset_label(space, m) for m in masks)
    dist = tuple(
        tuple(hausdorff_distance(a, b, space) if a != b else Fraction(0) for b in masks)
        for a in masks)
    fmap = tuple(index[system.image_mask(m)] for m in masks)
    return FiniteMetricSystem(FiniteMetricSpace(labels, dist), fmap, name=name)


def hyperspace_system(system, cap=DEFAULT_HYPERSPACE_CAP):
    """All nonempty subsets with the Hausdorff metric and the image map."""
    if system.n > cap:
        raise CapExceeded("hyperspace of %d points exceeds cap %d" % (system.n, cap))
    masks = list(range(1, 1 << system.n))  # ascending bitmask = canonical order
    return _subset_system(system, masks, name="2^" + system.name)


def symmetric_product(system, n, cap=4096):
    """Nonempty subsets of size <= n (image sizes never grow, so the map is
    well defined on this subfamily)."""
    if n < 2:
        raise ValueError("symmetric product needs n >= 2")
    masks = [m for m in range(1, 1 << system.n) if bin(m).count("1") <= n]
    if len(masks) > cap:
        raise CapExceeded("F_%d has %d points, cap is %d" % (n, len(masks), cap))
    return _subset_system(system, masks, name="F%d(%s)" % (n, system.name))


# ---------------------------------------------------------------------------
# factor maps


@dataclass(frozen=True)
class FactorMapSpec:
    domain: FiniteMetricSystem
    codomain: FiniteMetricSystem
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(int(i) for i in self.phi))


class FactorMapError(ValueError):
    pass


def validate_factor_map(spec):
    """Empty list iff phi is a surjective semiconjugacy; violations name
    the offending indices."""
    dom, cod, phi = spec.domain, spec.codomain, spec.phi
    if len(phi) != dom.n:
        raise FactorMapError("phi has length %d, domain has %d points" % (len(phi), dom.n))
    violations = []
    for i, y in enumerate(phi):
        if not (0 <= y < cod.n):
            violations.append("phi[%d] = %d out of codomain range" % (i, y))
    if violations:
        return violations
    hit = set(phi)
    for y in range(cod.n):
        if y not in hit:
            violations.append("codomain point %d not in the image of phi" % y)
    for i in range(dom.n):
        if phi[dom.fmap[i]] != cod.fmap[phi[i]]:
            violations.append(
                "semiconjugacy fails at %d: phi(f(%d))=%d but g(phi(%d))=%d"
                % (i, i, phi[dom.fmap[i]], i, cod.fmap[phi[i]]))
    return violations


def require_valid_factor_map(spec):
    problems = validate_factor_map(spec)
    if problems:
        raise FactorMapError("; ".join(problems))


# ---------------------------------------------------------------------------
# inverse-limit towers


@dataclass(frozen=True)
class InverseTower:
    """A linear tower X_0 <- X_1 <- ... <- X_k with bonding semiconjugacies
    bonds[j] : X_{j+1} -> X_j."""
    systems: tuple
    bonds: tuple  # bonds[j][i] = index in X_j of the bond image of point i of X_{j+1}

    def __post_init__(self):
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "bonds", tuple(tuple(b) for b in self.bonds))
        if len(self.bonds) != len(self.systems) - 1:
            raise ValueError("need exactly one bond per adjacent pair")
        for j, bond in enumerate(self.bonds):
            lo, hi = self.systems[j], self.systems[j + 1]
            if len(bond) != hi.n:
                raise ValueError("bond %d has wrong length" % j)
            for i in range(hi.n):
                if bond[hi.fmap[i]] != lo.fmap[bond[i]]:
                    raise ValueError("bond %d is not a semiconjugacy at point %d" % (j, i))

    def composite_image(self, level, upper):
        """Image of X_upper in X_level under the composite bond."""
        pts = set(range(self.systems[upper].n))
        for j in range(upper - 1, level - 1, -1):
            pts = {self.bonds[j][p] for p in pts}
        return pts


def tower_limit(tower, weights=None):
    """The inverse limit of a finite tower as a FiniteMetricSystem over
    threads, with metric max_j weight_j * d_j.

    An empty thread set is a legal outcome (returned as a system with zero
    points would be ill-formed, so we return None and let callers treat it
    as the empty limit).
    """
    systems = tower.systems
    k = len(systems)
    if weights is None:
        weights = [Fraction(1)] * k
    weights = [Fraction(w) for w in weights]
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    threads = []
    for combo in itertools.product(*[range(s.n) for s in systems]):
        if all(tower.bonds[j][combo[j + 1]] == combo[j] for j in range(k - 1)):
            threads.append(combo)
    if not threads:
        return None
    index = {t: i for i, t in enumerate(threads)}
    labels = tuple("(" + ",".join(systems[j].space.point_labels[t[j]] for j in range(k)) + ")"
                   for t in threads)
    dist = tuple(
        tuple(max(weights[j] * systems[j].space.dist[s[j]][t[j]] for j in range(k))
              if s != t else Fraction(0)
              for t in threads)
        for s in threads)
    # bond semiconjugacy guarantees the componentwise image is a thread
    fmap = tuple(index[tuple(systems[j].fmap[t[j]] for j in range(k))] for t in threads)
    return FiniteMetricSystem(FiniteMetricSpace(labels, dist), fmap, name="lim-tower")


def check_mittag_leffler(tower):
    """Per-level booleans: level j passes iff some composite image from a
    higher level equals all later composite images (finite towers: the
    image chain must stabilize, which it always does at the top)."""
    k = len(tower.systems)
    out = []
    for lev in range(k):
        images = [tower.composite_image(lev, upper) for upper in range(lev, k)]
        if len(images) <= 1:
            out.append(True)  # vacuous at the top of the tower
            continue
        # the stabilization point must be witnessed by at least one later
        # level agreeing with it; a chain still shrinking at the top fails
        ok = any(all(images[gi] == later for later in images[gi:])
                 for gi in range(len(images) - 1))
        out.append(ok)
    return out


def standard_inverse_limit(system, levels):
    """lim(X, f) truncated to a finite tower: constant systems with bond f."""
    bonds = tuple(system.fmap for _ in range(levels - 1))
    return InverseTower(tuple(system for _ in range(levels)), bonds)
