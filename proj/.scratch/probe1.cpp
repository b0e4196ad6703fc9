#include <iostream>
#include "tanglekit/diagram.hpp"

using namespace tanglekit;

#define SHOW(x) std::cout << #x << " = " << (x) << "\n"

int main() {
    // trivial tangles
    TangleDiagram th = make_trivial_tangle(true);
    TangleDiagram tv = make_trivial_tangle(false);
    SHOW(numerator_closure(th).component_count());   // expect 2
    SHOW(denominator_closure(th).component_count()); // expect 1
    SHOW(numerator_closure(tv).component_count());   // expect 1
    SHOW(denominator_closure(tv).component_count()); // expect 2

    // horizontal 3-twist: (2,3) torus closure = trefoil
    TangleDiagram h3 = make_horizontal_twist(3, 1);
    LinkDiagram tre = numerator_closure(h3);
    SHOW(tre.crossing_count());     // 3
    SHOW(tre.component_count());    // 1
    SHOW(is_alternating(tre));      // 1
    SHOW(is_prime(tre));            // 1
    SHOW(tre.writhe());             // +-3
    std::cout << "trefoil pd: " << emit_pd(tre) << "\n";
    SHOW(is_isomorphic(parse_pd(emit_pd(tre)), tre)); // 1
    SHOW(is_isomorphic(mirror(mirror(tre)), tre));    // 1
    SHOW(tangle_sign(h3) == TangleSign::Positive);    // 1

    // vertical 2-twist closure = Hopf
    TangleDiagram v2 = make_vertical_twist(2, 1);
    LinkDiagram hopf = numerator_closure(v2);
    SHOW(hopf.crossing_count());    // 2
    SHOW(hopf.component_count());   // 2
    SHOW(is_alternating(hopf));     // 1
    SHOW(is_prime(hopf));           // 1
    std::cout << "hopf pd: " << emit_pd(hopf) << "\n";

    // denominator closure of east-west twist: 3 nugatory kinks -> not prime
    LinkDiagram den = denominator_closure(h3);
    SHOW(den.crossing_count());     // 3
    SHOW(den.component_count());    // 1
    SHOW(is_prime(den));            // 0

    // kink
    LinkDiagram kink = parse_pd("X(1,2,2,1)");
    SHOW(kink.component_count());   // 1
    SHOW(is_prime(kink));           // 0
    SHOW(is_alternating(kink));     // 1

    // connected sum of two trefoils: not prime. Build via add_kink? No:
    // build by concatenating horizontal twists with a closure trick later.
    // rational [2,2] tangle: figure-8 under numerator closure
    TangleDiagram r22 = make_horizontal_twist(2, 1);
    r22 = add_crossing_south(r22, 1);
    r22 = add_crossing_south(r22, 1);
    LinkDiagram fig8 = numerator_closure(r22);
    SHOW(fig8.crossing_count());    // 4
    SHOW(fig8.component_count());   // 1
    SHOW(is_alternating(fig8));     // 1
    SHOW(is_prime(fig8));           // 1
    SHOW(fig8.writhe());            // 0
    std::cout << "fig8 pd: " << emit_pd(fig8) << "\n";
    SHOW(is_alternating(r22));      // 1
    SHOW(is_strongly_alternating(r22)); // 1
    SHOW(is_strongly_alternating(h3));  // 0 (east-west twist)

    // conway sum of two vertical 2-twists
    ConwaySum cs = conway_sum({make_vertical_twist(2, 1), make_vertical_twist(2, 1)});
    SHOW(cs.diagram.crossing_count());  // 4
    SHOW(is_alternating(cs.diagram));   // 1 (both positive)
    SHOW(cs.diagram.component_count());

    // conway_sum([T]) == numerator_closure(T)
    ConwaySum single = conway_sum({v2});
    SHOW(is_isomorphic(single.diagram, hopf)); // 1

    // belt
    LinkDiagram belted = add_belt(th);
    SHOW(belted.crossing_count());   // 4
    SHOW(belted.component_count());  // 3
    LinkDiagram filled0 = twist_fill(belted, 0);
    SHOW(is_isomorphic(filled0, numerator_closure(th))); // 1
    LinkDiagram filled1 = twist_fill(belted, 1);
    SHOW(filled1.crossing_count());  // 2
    SHOW(filled1.component_count()); // 2
    SHOW(is_isomorphic(filled1, hopf)); // 1 (hopf-type)

    LinkDiagram beltedv2 = add_belt(v2);
    SHOW(beltedv2.crossing_count()); // 6
    SHOW(beltedv2.component_count());
    LinkDiagram fv0 = twist_fill(beltedv2, 0);
    SHOW(is_isomorphic(fv0, hopf));  // 1
    LinkDiagram fv1 = twist_fill(beltedv2, 1);
    SHOW(fv1.crossing_count());      // 4

    // belted vertical trivial (both closure arcs on one circle)
    LinkDiagram beltedtv = add_belt(tv);
    SHOW(beltedtv.crossing_count()); // 4
    SHOW(beltedtv.component_count()); // 2
    SHOW(is_isomorphic(twist_fill(beltedtv, 0), numerator_closure(tv))); // 1

    // belted trefoil tangle: c+4 crossings
    LinkDiagram beltedh3 = add_belt(h3);
    SHOW(beltedh3.crossing_count()); // 7

    // smoothing: trefoil A and B circle behavior handled in states; here
    // just check validity and crossing count drop
    LinkDiagram sm = smooth_crossing(tre, 0, Resolution::A);
    SHOW(sm.crossing_count());       // 2
    LinkDiagram smb = smooth_crossing(tre, 0, Resolution::B);
    SHOW(smb.crossing_count());      // 2

    // kink insertion round trip
    LinkDiagram kinked = add_kink(tre, 0, 1);
    SHOW(kinked.crossing_count());   // 4
    SHOW(kinked.writhe());           // tre.writhe() + 1
    LinkDiagram kinkedm = add_kink(tre, 0, -1);
    SHOW(kinkedm.writhe());          // tre.writhe() - 1

    // error cases
    try { parse_pd("X(1,2,3)"); std::cout << "NO ERROR (bad)\n"; }
    catch (const std::exception& e) { std::cout << "arity error ok: " << e.what() << "\n"; }
    try { parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)"); std::cout << "spec trefoil parsed (!)\n"; }
    catch (const std::exception& e) { std::cout << "spec trefoil rejected: " << e.what() << "\n"; }
    try { parse_pd("X(1,2,2,3)"); std::cout << "NO ERROR (bad)\n"; }
    catch (const std::exception& e) { std::cout << "dangling ok: " << e.what() << "\n"; }
    try { parse_tangle("X(1,2,3,4) NW=1 NW=2 SE=3 SW=4"); std::cout << "NO ERROR (bad)\n"; }
    catch (const std::exception& e) { std::cout << "dup corner ok: " << e.what() << "\n"; }

    // tangle text round trip
    std::cout << "tangle text: " << emit_tangle(r22) << "\n";
    TangleDiagram r22b = parse_tangle(emit_tangle(r22));
    SHOW(is_isomorphic(numerator_closure(r22b), fig8)); // 1

    // empty
    SHOW(parse_pd("").component_count()); // 0
    SHOW(make_unknot(1).component_count()); // 1
    return 0;
}
