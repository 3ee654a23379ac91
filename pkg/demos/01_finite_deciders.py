"""Walk-through: deciding shadowing properties on small finite systems.

A finite metric system is a finite set of points with exact rational
distances and a self-map.  Because every quantity is rational and every
inequality strict, each property is decided exactly — verdicts come with
witnesses or counterexamples that re-validate by direct simulation.
"""

from fractions import Fraction

from shadowing import (FiniteMetricSystem, ThresholdPair, line_space,
                       decide_shadowing, decide_h_shadowing,
                       decide_inverse_shadowing, property_level, revalidate,
                       threshold_grid)


def show(title, verdict):
    print("%-22s holds=%s" % (title, verdict.holds))
    data = verdict.witness if verdict.holds else verdict.counterexample
    print("    certificate: %s" % (data,))


def main():
    # two fixed points at distance 1: a delta large enough to hop between
    # them defeats shadowing at small eps
    two = FiniteMetricSystem(line_space(2), (0, 1), name="two-fixed-points")
    tp = ThresholdPair(Fraction(1, 2), Fraction(3, 2))
    print("== %s at eps=%s delta=%s ==" % (two.name, tp.eps, tp.delta))
    v = decide_shadowing(two, tp)
    show("shadowing", v)
    print("    re-validates: %s" % revalidate(two, tp, v, "shadowing"))

    # a 4-point walk that funnels into a fixed point
    funnel = FiniteMetricSystem(line_space(4), (1, 2, 3, 3), name="funnel")
    print("\n== %s ==" % funnel.name)
    print("threshold grid:", [str(g) for g in threshold_grid(funnel.space).values])
    tp = ThresholdPair(Fraction(1, 2), Fraction(1, 2))
    show("shadowing", decide_shadowing(funnel, tp))
    show("h-shadowing", decide_h_shadowing(funnel, tp))
    show("inverse shadowing",
         decide_inverse_shadowing(FiniteMetricSystem(line_space(3), (1, 2, 0),
                                                     name="cycle"), tp))

    # the property-level scan: for every grid eps, the largest working delta
    print("\n== property-level scan on %s ==" % funnel.name)
    holds, table = property_level(funnel, "shadowing")
    print("has shadowing (forall eps exists delta):", holds)
    for eps in sorted(table):
        print("    eps=%-5s best delta=%s" % (eps, table[eps]))


if __name__ == "__main__":
    main()
