"""Exact rational engine for piecewise-linear interval maps and circle
rotations.

Everything is computed with ``Fraction``: images of interval sets under
piecewise-linear maps, finite-horizon shadow-set runs, the counterexample
pseudo-orbit generators for symmetric products / hyperspaces / rotation
products, and a grid-certified defect search for the rotation examples.
"""

import bisect
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .verdicts import BudgetError


class ExampleParameterError(ValueError):
    """A generator parameter violates the example's stated constraints."""


# ---------------------------------------------------------------------------
# rational interval sets


@dataclass(frozen=True)
class RationalIntervalSet:
    """A finite union of disjoint intervals with rational endpoints.

    Each member is (lo, hi, lo_open, hi_open); isolated points are
    degenerate closed intervals.  The tuple is canonical: sorted, disjoint,
    and merged, so equality of sets is equality of tuples.
    """
    intervals: tuple = ()

    @staticmethod
    def _canonical(pieces):
        cleaned = []
        for lo, hi, lo_open, hi_open in pieces:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi or (lo == hi and (lo_open or hi_open)):
                continue
            cleaned.append((lo, hi, bool(lo_open), bool(hi_open)))
        cleaned.sort(key=lambda p: (p[0], p[2], p[1]))
        merged = []
        for plo, phi, plo_open, phi_open in cleaned:
            if merged:
                llo, lhi, llo_open, lhi_open = merged[-1]
                touches = plo < lhi or (plo == lhi and not (plo_open and lhi_open))
                if touches:
                    if phi > lhi:
                        nhi, nhi_open = phi, phi_open
                    elif phi == lhi:
                        nhi, nhi_open = lhi, lhi_open and phi_open
                    else:
                        nhi, nhi_open = lhi, lhi_open
                    merged[-1] = (llo, nhi, llo_open, nhi_open)
                    continue
            merged.append((plo, phi, plo_open, phi_open))
        return tuple(merged)

    @classmethod
    def from_pieces(cls, pieces):
        return cls(cls._canonical(pieces))

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def interval(cls, lo, hi, lo_open=False, hi_open=False):
        return cls.from_pieces([(lo, hi, lo_open, hi_open)])

    @classmethod
    def point(cls, p):
        return cls.from_pieces([(p, p, False, False)])

    def is_empty(self):
        return not self.intervals

    def contains(self, x):
        x = Fraction(x)
        for lo, hi, lo_open, hi_open in self.intervals:
            if (lo < x or (lo == x and not lo_open)) and \
               (x < hi or (x == hi and not hi_open)):
                return True
        return False

    def union(self, other):
        return self.from_pieces(self.intervals + other.intervals)

    def intersect(self, other):
        out = []
        for a in self.intervals:
            for b in other.intervals:
                lo, lo_open = max((a[0], a[2]), (b[0], b[2]))
                hi, hi_open = min((a[1], not a[3]), (b[1], not b[3]))
                hi_open = not hi_open
                out.append((lo, hi, lo_open, hi_open))
        return self.from_pieces(out)

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersect(other)

    def is_subset_of(self, other):
        return (self & other) == self


def open_ball_set(center, eps):
    """The open interval (center - eps, center + eps) on the line."""
    return RationalIntervalSet.interval(Fraction(center) - eps,
                                        Fraction(center) + eps,
                                        lo_open=True, hi_open=True)


# ---------------------------------------------------------------------------
# piecewise-linear maps


@dataclass(frozen=True)
class PLMap:
    """A continuous piecewise-linear self-map of [breakpoints[0],
    breakpoints[-1]], plus optional isolated points with images (for the
    {2} union [0,1] family).  Piece i is the closed interval from
    breakpoints[i] to breakpoints[i+1] with x -> slopes[i]*x +
    intercepts[i]."""
    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    isolated: tuple = ()  # ((point, image), ...)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints",
                           tuple(Fraction(b) for b in self.breakpoints))
        object.__setattr__(self, "slopes", tuple(Fraction(s) for s in self.slopes))
        object.__setattr__(self, "intercepts",
                           tuple(Fraction(c) for c in self.intercepts))
        object.__setattr__(self, "isolated",
                           tuple((Fraction(p), Fraction(v)) for p, v in self.isolated))
        b = self.breakpoints
        if len(b) < 2 or any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.slopes) != len(b) - 1 or len(self.intercepts) != len(b) - 1:
            raise ValueError("need one slope and intercept per piece")
        for i in range(len(self.slopes) - 1):
            x = b[i + 1]
            left = self.slopes[i] * x + self.intercepts[i]
            right = self.slopes[i + 1] * x + self.intercepts[i + 1]
            if left != right:
                raise ValueError("discontinuity at interior breakpoint %s" % x)
        for p, v in self.isolated:
            if self.lo <= p <= self.hi:
                raise ValueError("isolated point %s lies inside the interval" % p)
            if not (self.lo <= v <= self.hi or any(p2 == v for p2, _ in self.isolated)):
                raise ValueError("isolated image %s escapes the space" % v)

    @property
    def lo(self):
        return self.breakpoints[0]

    @property
    def hi(self):
        return self.breakpoints[-1]

    def evaluate(self, x):
        x = Fraction(x)
        for p, v in self.isolated:
            if x == p:
                return v
        if not (self.lo <= x <= self.hi):
            raise ValueError("%s outside the domain" % x)
        i = bisect.bisect_right(self.breakpoints, x) - 1
        i = min(i, len(self.slopes) - 1)
        return self.slopes[i] * x + self.intercepts[i]

    def iterate(self, x, k):
        for _ in range(k):
            x = self.evaluate(x)
        return x


def pl_image(plmap, s):
    """Exact image of a RationalIntervalSet, canonicalized."""
    out = []
    b = plmap.breakpoints
    isolated_pts = {p for p, _ in plmap.isolated}
    for lo, hi, lo_open, hi_open in s.intervals:
        if lo == hi and lo in isolated_pts:
            v = plmap.evaluate(lo)
            out.append((v, v, False, False))
            continue
        if lo < plmap.lo or hi > plmap.hi:
            raise ValueError("interval set escapes the map domain")
        first = min(max(bisect.bisect_right(b, lo) - 1, 0),
                    len(plmap.slopes) - 1)
        for i in range(first, len(plmap.slopes)):
            plo, phi = b[i], b[i + 1]
            if plo > hi or (plo == hi and hi_open):
                break
            clo, clo_open = max((lo, lo_open), (plo, False))
            chi, chi_open = min((hi, not hi_open), (phi, True))
            chi_open = not chi_open
            if clo > chi or (clo == chi and (clo_open or chi_open)):
                continue
            a, c = plmap.slopes[i], plmap.intercepts[i]
            va, vb = a * clo + c, a * chi + c
            if a == 0:
                out.append((va, va, False, False))
            elif a > 0:
                out.append((va, vb, clo_open, chi_open))
            else:
                out.append((vb, va, chi_open, clo_open))
    return RationalIntervalSet.from_pieces(out)


def tent_map():
    """The standard tent map on [0, 1]."""
    return PLMap((0, Fraction(1, 2), 1), (2, -2), (0, 2))


def tent_map_with_isolated():
    """The tent map together with the isolated point 2 mapping to the
    fixed point 1 (the {2} union [0,1] family)."""
    return PLMap((0, Fraction(1, 2), 1), (2, -2), (0, 2), isolated=((2, 1),))


CUBIC_RESOLUTION = Fraction(1, 4096)


def cubic_tent_map(resolution=CUBIC_RESOLUTION):
    """Tent map on the right half of [-1, 1]; on [-1, 0] an increasing
    piecewise-linear interpolation of x^3 at the given rational grid step.

    The interpolation keeps the engine exact-rational while preserving the
    mechanics of the original piece: fixed endpoints -1 and 0, every
    interior point strictly attracted towards 0.  The sup-norm error
    against x^3 is at most (3/4)*resolution^2 (concave piece, chord
    interpolation); callers add this to their defect budgets.
    """
    resolution = Fraction(resolution)
    if resolution <= 0 or resolution > 1:
        raise ValueError("resolution must be in (0, 1]")
    steps = int(1 / resolution) if (1 / resolution).denominator == 1 else None
    if steps is None:
        raise ValueError("resolution must divide 1")
    bks = [Fraction(-1) + j * resolution for j in range(steps + 1)]
    slopes = []
    intercepts = []
    for a, bp in zip(bks, bks[1:]):
        fa, fb = a ** 3, bp ** 3
        sl = (fb - fa) / (bp - a)
        slopes.append(sl)
        intercepts.append(fa - sl * a)
    bks += [Fraction(1, 2), Fraction(1)]
    slopes += [Fraction(2), Fraction(-2)]
    intercepts += [Fraction(0), Fraction(2)]
    return PLMap(tuple(bks), tuple(slopes), tuple(intercepts))


def cubic_interpolation_error(resolution=CUBIC_RESOLUTION):
    """Sup-norm bound for the chord interpolation of x^3 on [-1, 0]."""
    return Fraction(3, 4) * Fraction(resolution) ** 2


def pl_inverse_increasing(plmap, value, lo, hi):
    """The unique preimage of `value` inside [lo, hi], on which the map
    must be strictly increasing."""
    value = Fraction(value)
    for i in range(len(plmap.slopes)):
        plo, phi = plmap.breakpoints[i], plmap.breakpoints[i + 1]
        if phi < lo or plo > hi:
            continue
        if plmap.slopes[i] <= 0:
            raise ValueError("map is not increasing on [%s, %s]" % (lo, hi))
        va = plmap.slopes[i] * max(plo, lo) + plmap.intercepts[i]
        vb = plmap.slopes[i] * min(phi, hi) + plmap.intercepts[i]
        if va <= value <= vb:
            return (value - plmap.intercepts[i]) / plmap.slopes[i]
    raise ValueError("%s has no preimage in [%s, %s]" % (value, lo, hi))


# ---------------------------------------------------------------------------
# circle rotations


DEFAULT_ALPHA = Fraction(6765, 10946)  # consecutive Fibonacci numbers


@dataclass(frozen=True)
class RotationSystem:
    """x -> x + alpha on R/Z with the shortest-arc metric.

    A rational alpha with a huge denominator stands in for the irrational
    rotation: the constructions only use the isometry property and a drift
    schedule over a finite window, and both survive exactly as long as the
    horizon stays below the denominator (no resonance wrap).
    """
    alpha: Fraction = DEFAULT_ALPHA

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha) % 1)

    def apply(self, x):
        return (Fraction(x) + self.alpha) % 1

    @staticmethod
    def arc_dist(a, b):
        t = abs(Fraction(a) % 1 - Fraction(b) % 1)
        return min(t, 1 - t)

    def max_safe_horizon(self):
        return self.alpha.denominator - 1


# ---------------------------------------------------------------------------
# pseudo-orbit specifications


EXAMPLE_IDS = (
    "tent-F3-shadowing",
    "tent-F3-limit",
    "cubic-tent-hyper-eventual",
    "rotation-hyper-orbital",
    "rotation-product-orbital",
    "rotation-product-orbital-limit",
    "rotation-hyper-orbital-limit",
    "nonsurjective-product-h",
)


@dataclass(frozen=True)
class PseudoOrbitSpec:
    """A generated pseudo-orbit plus everything needed to re-validate it.

    kind is "sets" (finite rational sets, Hausdorff metric), "pairs"
    (2-tuples, sup metric), "points", or "tuple" (k-fold product points).
    defect_bounds[i] bounds the allowed defect of step i -> i+1; for the
    asymptotic examples it carries the shrinking schedule.
    """
    example_id: str
    params: dict
    kind: str
    states: tuple
    defects: tuple
    defect_bounds: tuple
    report: dict = field(default_factory=dict)


def _hausdorff_pts(a, b, dist):
    best = Fraction(0)
    for x in a:
        m = min(dist(x, y) for y in b)
        if m > best:
            best = m
    for y in b:
        m = min(dist(y, x) for x in a)
        if m > best:
            best = m
    return best


def _spec_dynamics(spec):
    """(step_image, dist) for the spec's underlying system: step_image maps
    one state to its exact image, dist compares states."""
    ex = spec.example_id
    if ex in ("tent-F3-shadowing", "tent-F3-limit"):
        f = tent_map()
        img = lambda a: tuple(sorted({f.evaluate(x) for x in a}))
        return img, lambda a, b: _hausdorff_pts(a, b, lambda x, y: abs(x - y))
    if ex == "cubic-tent-hyper-eventual":
        f = cubic_tent_map(spec.params.get("resolution", CUBIC_RESOLUTION))
        img = lambda a: tuple(sorted({f.evaluate(x) for x in a}))
        return img, lambda a, b: _hausdorff_pts(a, b, lambda x, y: abs(x - y))
    rot = RotationSystem(spec.params.get("alpha", DEFAULT_ALPHA))
    if ex in ("rotation-hyper-orbital", "rotation-hyper-orbital-limit"):
        img = lambda a: tuple(sorted({rot.apply(x) for x in a}))
        return img, lambda a, b: _hausdorff_pts(a, b, rot.arc_dist)
    if ex in ("rotation-product-orbital", "rotation-product-orbital-limit"):
        img = lambda z: (rot.apply(z[0]), rot.apply(z[1]))
        return img, lambda a, b: max(rot.arc_dist(a[0], b[0]),
                                     rot.arc_dist(a[1], b[1]))
    if ex == "nonsurjective-product-h":
        f = tent_map_with_isolated()
        img = lambda z: tuple(f.evaluate(x) for x in z)
        return img, lambda a, b: max(abs(x - y) for x, y in zip(a, b))
    raise ValueError("unknown example id %r" % ex)


def validate_pseudo_orbit_spec(spec):
    """Recompute every step defect exactly and compare against the spec's
    recorded defects and bounds.  Returns (ok, problems)."""
    img, dist = _spec_dynamics(spec)
    problems = []
    if len(spec.defects) != max(len(spec.states) - 1, 0) or \
       len(spec.defect_bounds) != len(spec.defects):
        return False, ["defect list lengths do not match the state count"]
    for i in range(len(spec.states) - 1):
        d = dist(img(spec.states[i]), spec.states[i + 1])
        if d != spec.defects[i]:
            problems.append("step %d: recorded defect %s, recomputed %s"
                            % (i, spec.defects[i], d))
        if d > spec.defect_bounds[i]:
            problems.append("step %d: defect %s exceeds bound %s"
                            % (i, d, spec.defect_bounds[i]))
    for a, b in zip(spec.defect_bounds, spec.defect_bounds[1:]):
        if b > a:
            problems.append("defect bounds are not non-increasing")
            break
    return not problems, problems


# ---------------------------------------------------------------------------
# generators


def _require(cond, message):
    if not cond:
        raise ExampleParameterError(message)


def _tent_small_preimage(delta):
    """y = c / 2^k < delta whose first k-1 tent iterates stay below 1/2
    and whose k-th iterate is exactly c = 2/3."""
    c = Fraction(2, 3)
    k = 1
    while c / (1 << k) >= delta:
        k += 1
    return c / (1 << k), k


def generate_example(example_id, params=None):
    params = dict(params or {})
    horizon = int(params.get("horizon", 60))
    _require(horizon >= 0, "horizon must be >= 0")
    if example_id == "tent-F3-shadowing":
        return _gen_tent_f3_shadowing(params, horizon)
    if example_id == "tent-F3-limit":
        return _gen_tent_f3_limit(params, horizon)
    if example_id == "cubic-tent-hyper-eventual":
        return _gen_cubic_tent(params, horizon)
    if example_id in ("rotation-hyper-orbital", "rotation-product-orbital"):
        return _gen_rotation_orbital(example_id, params, horizon)
    if example_id in ("rotation-hyper-orbital-limit",
                      "rotation-product-orbital-limit"):
        return _gen_rotation_orbital_limit(example_id, params, horizon)
    if example_id == "nonsurjective-product-h":
        return _gen_nonsurjective_product(params, horizon)
    raise ValueError("unknown example id %r (known: %s)"
                     % (example_id, ", ".join(EXAMPLE_IDS)))


def _gen_tent_f3_shadowing(params, horizon):
    delta = Fraction(params.get("delta", Fraction(1, 24)))
    eps = Fraction(params.get("eps", Fraction(1, 12)))
    _require(0 < delta < Fraction(1, 12),
             "requires 0 < delta < 1/12 (without loss of generality)")
    c = Fraction(2, 3)
    f = tent_map()
    y, k = _tent_small_preimage(delta)
    track = [y]
    for _ in range(k - 1):
        track.append(f.evaluate(track[-1]))
    states = []
    for i in range(horizon + 1):
        states.append(tuple(sorted({Fraction(0), track[i % k], c})))
    img, dist = _spec_dynamics_for("tent-F3-shadowing", params)
    defects = tuple(dist(img(a), b) for a, b in zip(states, states[1:]))
    return PseudoOrbitSpec(
        "tent-F3-shadowing", {"delta": delta, "eps": eps, "horizon": horizon},
        "sets", tuple(states), defects, (delta,) * len(defects),
        report={"c": c, "y": y, "k": k, "n": int(params.get("n", 3))})


def _gen_tent_f3_limit(params, horizon):
    delta = Fraction(params.get("delta", Fraction(1, 24)))
    _require(0 < delta < Fraction(1, 12),
             "requires 0 < delta < 1/12 (without loss of generality)")
    c = Fraction(2, 3)
    f = tent_map()
    y0, k = _tent_small_preimage(delta)
    states = []
    bounds = []
    m = 0
    current_bound = delta
    while len(states) <= horizon:
        ym = y0 / (1 << m)
        x = ym
        # block m: {0, f^i(y_m), c} for i = 0 .. k+m-1, then the separator
        # {0, c}; the only nonzero defect is the jump onto the next block
        # start, of size y_{m+1}
        for _ in range(k + m):
            states.append(tuple(sorted({Fraction(0), x, c})))
            bounds.append(current_bound)
            x = f.evaluate(x)
        states.append((Fraction(0), c))
        current_bound = y0 / (1 << (m + 1))
        bounds.append(current_bound)
        m += 1
    states = tuple(states[:horizon + 1])
    bounds = tuple(bounds[:max(horizon, 0)])
    img, dist = _spec_dynamics_for("tent-F3-limit", params)
    defects = tuple(dist(img(a), b) for a, b in zip(states, states[1:]))
    return PseudoOrbitSpec(
        "tent-F3-limit", {"delta": delta, "horizon": horizon},
        "sets", states, defects, bounds,
        report={"c": c, "y0": y0, "k": k, "blocks": m,
                "rule": "block m uses y_m = y_0 / 2^m; defects halve at "
                        "each block start"})


def _gen_cubic_tent(params, horizon):
    delta = Fraction(params.get("delta", Fraction(1, 16)))
    eps = Fraction(params.get("eps", Fraction(1, 12)))
    resolution = Fraction(params.get("resolution", CUBIC_RESOLUTION))
    _require(0 < delta < eps, "requires 0 < delta < eps")
    g = cubic_tent_map(resolution)
    half = Fraction(-1, 2)
    # walk -1/2 backwards under the increasing left piece until the start
    # lands in (-1, -1 + delta)
    y = half
    m = 0
    while y >= -1 + delta:
        y = pl_inverse_increasing(g, y, Fraction(-1), Fraction(0))
        m += 1
    # forward from y until the iterate lands in (-delta/2, 0]
    x = y
    k = 0
    while not (-delta / 2 < x <= 0):
        x = g.evaluate(x)
        k += 1
    # periodic point of the tent part: p = 2/(2^(n0+1) + 1) doubles n0
    # times staying below 1/2, lands at 2^(n0+1)/(2^(n0+1)+1) close to 1,
    # and one folding step returns it to p (period n0 + 1)
    n0 = 1
    while Fraction(2, (1 << (n0 + 1)) + 1) >= delta / 2:
        n0 += 1
    p = Fraction(2, (1 << (n0 + 1)) + 1)
    n = n0 + 1
    p_track = [p]
    for _ in range(n - 1):
        p_track.append(g.evaluate(p_track[-1]))
    assert g.evaluate(p_track[-1]) == p
    y_track = [y]
    for _ in range(k - 1):
        y_track.append(g.evaluate(y_track[-1]))
    states = []
    for i in range(horizon + 1):
        j = i % (k + n)
        if j < k:
            states.append(tuple(sorted({Fraction(-1), y_track[j], Fraction(0)})))
        else:
            states.append(tuple(sorted({Fraction(-1), p_track[j - k]})))
    img, dist = _spec_dynamics_for("cubic-tent-hyper-eventual", params)
    defects = tuple(dist(img(a), b) for a, b in zip(states, states[1:]))
    return PseudoOrbitSpec(
        "cubic-tent-hyper-eventual",
        {"delta": delta, "eps": eps, "horizon": horizon,
         "resolution": resolution},
        "sets", tuple(states), defects, (delta,) * len(defects),
        report={"y": y, "m": m, "k": k, "p": p, "period": n,
                "interpolation_error": cubic_interpolation_error(resolution),
                "interpolation_note":
                    "x^3 on [-1, 0] replaced by its chord interpolation at "
                    "the stated resolution; the sup-norm error bound is "
                    "added to any comparison with the smooth map"})


def _rotation_params(params):
    alpha = Fraction(params.get("alpha", DEFAULT_ALPHA))
    _require(alpha.denominator >= 10000,
             "the rational rotation surrogate needs a denominator >= 10^4")
    return alpha


def _gen_rotation_orbital(example_id, params, horizon):
    eps = Fraction(params.get("eps", Fraction(1, 21)))
    delta = Fraction(params.get("delta", Fraction(1, 42)))
    _require(eps < Fraction(1, 20), "requires eps < 1/20")
    _require(0 < delta < eps, "requires 0 < delta < eps")
    alpha = _rotation_params(params)
    rot = RotationSystem(alpha)
    _require(horizon < alpha.denominator,
             "horizon must stay below the surrogate denominator "
             "(no resonance wrap)")
    x, y = Fraction(0), Fraction(1, 2)
    pairs = [(x, y)]
    for _ in range(horizon):
        x = (rot.apply(x) + delta / 2) % 1
        y = (rot.apply(y) + delta / 3) % 1
        pairs.append((x, y))
    gaps = [rot.arc_dist(a, b) for a, b in pairs]
    l = next((i for i, g in enumerate(gaps) if g <= delta / 6), None)
    kind = "sets" if example_id == "rotation-hyper-orbital" else "pairs"
    states = tuple(tuple(sorted(p)) if kind == "sets" else p for p in pairs)
    img, dist = _spec_dynamics_for(example_id, params)
    defects = tuple(dist(img(a), b) for a, b in zip(states, states[1:]))
    return PseudoOrbitSpec(
        example_id,
        {"eps": eps, "delta": delta, "horizon": horizon, "alpha": alpha},
        kind, states, defects, (delta,) * len(defects),
        report={"alpha": alpha, "alpha_denominator": alpha.denominator,
                "collapse_index": l, "gap_drift_per_step": delta / 6,
                "gap_min": min(gaps), "gap_max": max(gaps)})


def _gen_rotation_orbital_limit(example_id, params, horizon):
    delta = Fraction(params.get("delta", Fraction(1, 2)))
    _require(0 < delta < 1, "requires 0 < delta < 1")
    alpha = _rotation_params(params)
    rot = RotationSystem(alpha)
    _require(horizon < alpha.denominator,
             "horizon must stay below the surrogate denominator "
             "(no resonance wrap)")
    x, y = Fraction(0), Fraction(1, 2)
    pairs = [(x, y)]
    bounds = []
    for i in range(1, horizon + 1):
        x = (rot.apply(x) + delta / (2 * i)) % 1
        y = (rot.apply(y) + delta / (3 * i)) % 1
        pairs.append((x, y))
        bounds.append(delta / (2 * i))
    kind = "sets" if example_id == "rotation-hyper-orbital-limit" else "pairs"
    states = tuple(tuple(sorted(p)) if kind == "sets" else p for p in pairs)
    img, dist = _spec_dynamics_for(example_id, params)
    defects = tuple(dist(img(a), b) for a, b in zip(states, states[1:]))
    gaps = [rot.arc_dist(p[0], p[1]) for p in pairs]
    return PseudoOrbitSpec(
        example_id, {"delta": delta, "horizon": horizon, "alpha": alpha},
        kind, states, defects, tuple(bounds),
        report={"alpha": alpha, "alpha_denominator": alpha.denominator,
                "schedule": "delta/(2i) and delta/(3i)",
                "gap_min": min(gaps), "gap_max": max(gaps)})


def _gen_nonsurjective_product(params, horizon):
    k = int(params.get("k", 3))
    _require(k >= 1, "requires k >= 1 product factors")
    point = (Fraction(2),) * k
    states = tuple([point])  # the distinguished point; see report
    return PseudoOrbitSpec(
        "nonsurjective-product-h", {"k": k, "horizon": 0}, "tuple",
        states, (), (),
        report={
            "factor": "{2} union [0,1] with the tent map and 2 -> 1",
            "point": point,
            "point_has_preimage": False,
            "point_is_isolated_in_truncation": True,
            "note": "every k-fold truncation keeps isolated points, so the "
                    "missing preimage of the all-2s point does not destroy "
                    "h-shadowing there; only the full infinite product is "
                    "perfect, where non-surjectivity rules h-shadowing out. "
                    "The limit-point argument is documented, not simulated."})


def _spec_dynamics_for(example_id, params):
    class _Tmp:
        pass
    tmp = _Tmp()
    tmp.example_id = example_id
    tmp.params = params
    return _spec_dynamics(tmp)


# ---------------------------------------------------------------------------
# shadow-set runs


def shadow_set_run(plmap, pseudo_orbit, eps):
    """S_0 = B_eps(x_0) restricted to the interval; S_{i+1} = image(S_i)
    intersected with B_eps(x_{i+1}).  The final set is nonempty iff the
    finite pseudo-orbit is eps-shadowable: the sets are exactly the
    candidates for f^i(z)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    domain = RationalIntervalSet.interval(plmap.lo, plmap.hi)
    for p, _ in plmap.isolated:
        domain = domain | RationalIntervalSet.point(p)
    out = []
    s = open_ball_set(pseudo_orbit[0], eps) & domain
    out.append(s)
    for x in pseudo_orbit[1:]:
        if s.is_empty():
            out.append(s)
            continue
        s = pl_image(plmap, s) & open_ball_set(x, eps) & domain
        out.append(s)
    return out


def symmetric_shadow_run(plmap, set_pseudo_orbit, eps, n,
                         pattern_budget=1000000):
    """Exact finite-horizon shadowability of a set pseudo-orbit in F_n.

    A candidate A = {a_1, ..., a_m} (m <= n) eps-shadows iff at every step
    each component lands inside the eps-neighbourhood of the target set
    and every target point is eps-covered by some component.  The
    membership side is a plain interval-set constraint; the covering side
    branches over assignments of targets to components.  Configurations
    (one interval set per component) are deduplicated per step; the run
    reports unshadowable as soon as every configuration for every m dies.
    """
    eps = Fraction(eps)
    if eps <= 0 or n < 1:
        raise ValueError("need positive eps and n >= 1")
    targets = [tuple(Fraction(t) for t in a) for a in set_pseudo_orbit]
    domain = RationalIntervalSet.interval(plmap.lo, plmap.hi)
    for p, _ in plmap.isolated:
        domain = domain | RationalIntervalSet.point(p)

    def neighbourhood(a):
        s = RationalIntervalSet.empty()
        for t in a:
            s = s | open_ball_set(t, eps)
        return s & domain

    result = {"eps": eps, "n": n, "per_m": {}, "shadowable": False}
    total_configs = 0
    for m in range(1, n + 1):
        nbhd = neighbourhood(targets[0])
        base = tuple([nbhd] * m)
        configs = set()
        patterns = 0
        for assign in itertools.product(range(m), repeat=len(targets[0])):
            cfg = list(base)
            ok = True
            for t, j in zip(targets[0], assign):
                cfg[j] = cfg[j] & open_ball_set(t, eps)
                if cfg[j].is_empty():
                    ok = False
                    break
            patterns += 1
            if ok:
                configs.add(tuple(cfg))
        empty_step = None
        for step, a in enumerate(targets[1:], start=1):
            if not configs:
                empty_step = step - 1
                break
            nbhd = neighbourhood(a)
            nxt = set()
            for cfg in configs:
                imgs = []
                dead = False
                for s in cfg:
                    v = pl_image(plmap, s) & nbhd
                    if v.is_empty():
                        dead = True
                        break
                    imgs.append(v)
                if dead:
                    continue
                for assign in itertools.product(range(m), repeat=len(a)):
                    patterns += 1
                    if patterns > pattern_budget:
                        raise BudgetError(
                            "pattern budget %d exceeded at step %d"
                            % (pattern_budget, step))
                    new = list(imgs)
                    ok = True
                    for t, j in zip(a, assign):
                        new[j] = new[j] & open_ball_set(t, eps)
                        if new[j].is_empty():
                            ok = False
                            break
                    if ok:
                        nxt.add(tuple(new))
            configs = nxt
        if configs:
            result["per_m"][m] = {"survives": True,
                                  "configs": len(configs),
                                  "patterns": patterns}
            result["shadowable"] = True
            sample = next(iter(configs))
            result["witness"] = {"m": m, "final_sets": sample}
        else:
            if empty_step is None:
                empty_step = len(targets) - 1
            result["per_m"][m] = {"survives": False,
                                  "empty_step": empty_step,
                                  "patterns": patterns}
        total_configs += patterns
    result["patterns_total"] = total_configs
    if not result["shadowable"]:
        result["certificate"] = {
            "kind": "symmetric-unshadowable",
            "empty_steps": {m: result["per_m"][m]["empty_step"]
                            for m in result["per_m"]}}
    return result


def rotation_limit_profile(spec, warmup=0):
    """Omega-limit profile mismatch for a two-component asymptotic rotation
    pseudo-orbit.

    The orbit of any candidate pair keeps a constant component gap, while
    the pseudo-orbit's gaps keep drifting; if the gaps observed after the
    warmup spread over a range, no constant gap can match every tail set
    within less than a quarter of that spread (|gap(A) - gap(B)| is at
    most 2 d(A, B), and a constant g is at least (spread / 2) away from
    one end of the range).
    """
    if spec.kind not in ("sets", "pairs"):
        raise ValueError("profile needs a two-component rotation spec")
    rot = RotationSystem(spec.params.get("alpha", DEFAULT_ALPHA))
    gaps = []
    for st in spec.states[warmup:]:
        if len(st) == 1:
            gaps.append(Fraction(0))
        else:
            gaps.append(rot.arc_dist(st[0], st[1]))
    if not gaps:
        raise ValueError("warmup exceeds the horizon")
    spread = max(gaps) - min(gaps)
    return {
        "warmup": warmup,
        "gap_min": min(gaps),
        "gap_max": max(gaps),
        "gap_spread": spread,
        "mismatch_lower_bound": spread / 4,
        "profile_matched": spread == 0,
        "alpha": rot.alpha,
    }


# ---------------------------------------------------------------------------
# rotation defect search


def rotation_defect_search(spec, eps, grid_resolution):
    """Grid-certified lower bound on the first-weak-shadowing defect of a
    two-component rotation pseudo-orbit.

    For an isometric rotation the orbit of any candidate keeps its
    component gap constant, while |gap(A) - gap(B)| <= 2 d(A, B) in both
    the sup and Hausdorff metrics.  So for a candidate with gap g the
    defect is at least max_i |g - gap_i| / 2.  The search scans candidate
    gaps g over a grid of [0, 1/2]; the reported slack (one grid
    resolution, from the 1-Lipschitz dependence on g) covers off-grid
    candidates.
    """
    if spec.kind not in ("sets", "pairs"):
        raise ValueError("defect search needs a two-component rotation spec")
    eps = Fraction(eps)
    r = Fraction(grid_resolution)
    if r <= 0:
        raise ValueError("grid resolution must be positive")
    rot = RotationSystem(spec.params.get("alpha", DEFAULT_ALPHA))
    gaps = []
    for st in spec.states:
        if len(st) == 1:  # a collapsed set {x, x}
            gaps.append(Fraction(0))
        else:
            gaps.append(rot.arc_dist(st[0], st[1]))
    best = None
    best_gap = None
    g = Fraction(0)
    while g <= Fraction(1, 2):
        lb = max(abs(g - gi) for gi in gaps) / 2
        if best is None or lb < best:
            best, best_gap = lb, g
        g += r
    lower = best - r
    if lower < 0:
        lower = Fraction(0)
    certified = lower > eps
    return {
        "eps": eps,
        "resolution": r,
        "slack": r,
        "raw_min": best,
        "argmin_gap": best_gap,
        "defect_lower_bound": lower,
        "gap_min": min(gaps),
        "gap_max": max(gaps),
        "alpha": rot.alpha,
        "horizon": len(spec.states) - 1,
        "status": "certified" if certified else "inconclusive",
        "certified": certified,
    }
