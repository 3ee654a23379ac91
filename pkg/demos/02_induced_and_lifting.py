"""Walk-through: induced systems and lifting along factor maps.

From one finite system we build its hyperspace (all nonempty subsets with
the Hausdorff metric), symmetric products, self-products, and inverse-limit
towers, then check which shadowing properties transfer.  Factor maps carry
quantified lifting properties (pseudo-orbits downstairs approximately lift
upstairs) that characterize exactly when each property descends.
"""

from shadowing import (FactorMapSpec, FiniteMetricSystem, discrete_space,
                       hyperspace_system, product_system, property_level,
                       standard_inverse_limit, symmetric_product, tower_limit,
                       check_mittag_leffler, verify_preservation)


def main():
    base = FiniteMetricSystem(discrete_space(3), (1, 2, 0), name="3-cycle")
    print("base system: %s (surjective=%s)" % (base.name, base.is_surjective()))

    hyp = hyperspace_system(base)
    f2 = symmetric_product(base, 2)
    prod = product_system([base, base])
    tower = standard_inverse_limit(base, 2)
    lim = tower_limit(tower)
    print("hyperspace 2^X: %d points; F_2: %d; X x X: %d; tower limit: %d"
          % (hyp.n, f2.n, prod.n, lim.n))
    print("tower is Mittag-Leffler:", all(check_mittag_leffler(tower)))

    print("\nproperty levels (forall eps exists delta):")
    for name, system in (("base", base), ("2^X", hyp), ("F_2", f2),
                         ("X x X", prod), ("tower", lim)):
        row = {p: property_level(system, p)[0]
               for p in ("shadowing", "h-shadowing", "eventual", "weak2")}
        print("  %-6s %s" % (name, row))

    # the coordinate projection X x X -> X is a factor map; each property
    # transfers iff the projection has the matching lifting property
    phi = tuple(i // base.n for i in range(prod.n))
    spec = FactorMapSpec(prod, base, phi)
    print("\nprojection X x X -> X, preservation theorems:")
    for prop in ("shadowing", "eventual", "orbital", "limit"):
        rep = verify_preservation(spec, prop)
        print("  %-10s lifting=%-6s domain=%-5s codomain=%-5s violations=%s"
              % (prop, rep["lifting_variant"], rep["domain_has"],
                 rep["codomain_has"], rep["violations"] or "none"))


if __name__ == "__main__":
    main()
