#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "twi/polygon.hpp"

using twi::Daleth;
using twi::Kind;
using twi::PeelLine;
using twi::Pt;
using twi::XiPolygon;

namespace {

XiPolygon triangle(int d) { return XiPolygon::classify({d, 0, d, 0, d, 0}); }
XiPolygon rectangle(int w, int h) { return XiPolygon::classify({h, 0, w, h, 0, w}); }
const XiPolygon unit_hexagon = XiPolygon::classify({1, 1, 1, 1, 1, 1});

} // namespace

TEST_CASE("classify accepts Xi shapes and rejects the rest") {
    CHECK(triangle(3).is_poly());
    CHECK(XiPolygon::classify({0, 0, 0, 0, 0, 0}).is_point());
    CHECK(XiPolygon::classify({2, 0, 0, 2, 0, 0}).is_vsegment());
    CHECK_THROWS_WITH(XiPolygon::classify({2, 0, 2, 1, 1, 0}),
                      Catch::Matchers::ContainsSubstring("not a closed circuit"));
    CHECK_THROWS_WITH(XiPolygon::classify({0, 0, 2, 0, 0, 2}),
                      Catch::Matchers::ContainsSubstring("not in Xi"));
    CHECK_THROWS_WITH(XiPolygon::classify({0, 2, 0, 0, 2, 0}),
                      Catch::Matchers::ContainsSubstring("not in Xi"));
    CHECK_THROWS_WITH(XiPolygon::classify({0, 1, 1, 1, 0, 2}),
                      Catch::Matchers::ContainsSubstring("not left-nondegenerate"));
    CHECK_THROWS_AS(XiPolygon::classify({1, 0, 1, 1, 0, 2}), std::domain_error);
    // left-degenerate polygons are representable through the relaxed factory
    XiPolygon ld = XiPolygon::from_lengths({0, 1, 1, 1, 0, 2});
    CHECK(ld.is_poly());
    CHECK_FALSE(ld.in_xi());
}

TEST_CASE("boundary statistics") {
    auto t3 = twi::boundary_stats(triangle(3));
    CHECK(t3.sigma_len == 3);
    CHECK(t3.boundary_len == 9);
    CHECK(t3.interior_count == 1);
    CHECK(t3.vertices == std::vector<Pt>{{0, 0}, {3, 0}, {0, 3}});

    auto hex = twi::boundary_stats(unit_hexagon);
    CHECK(hex.sigma_len == 1);
    CHECK(hex.boundary_len == 6);
    CHECK(hex.interior_count == 1);
    CHECK(hex.vertices ==
          std::vector<Pt>{{1, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 2}, {0, 1}});

    auto seg = twi::boundary_stats(XiPolygon::vsegment(2));
    CHECK(seg.sigma_len == 2);
    CHECK(seg.boundary_len == 4);
    CHECK(seg.interior_count == 0);

    CHECK(twi::boundary_stats(XiPolygon::point()).boundary_len == 0);
}

TEST_CASE("peel") {
    CHECK(twi::peel(triangle(3), PeelLine::LeftVertical) == triangle(2));
    CHECK(twi::peel(unit_hexagon, PeelLine::TopHorizontal) ==
          XiPolygon::from_lengths({0, 1, 1, 1, 0, 2}));
    for (int b = 1; b <= 3; ++b)
        CHECK(twi::peel(rectangle(1, b), PeelLine::LeftVertical) == XiPolygon::vsegment(b));
    CHECK_THROWS_AS(twi::peel(XiPolygon::point(), PeelLine::LeftVertical),
                    std::domain_error);
    CHECK_THROWS_AS(twi::peel(XiPolygon::vsegment(2), PeelLine::LeftVertical),
                    std::domain_error);
    CHECK_THROWS_AS(twi::peel(XiPolygon::vsegment(2), PeelLine::TopHorizontal),
                    std::domain_error);
    // the removed left column carries exactly sigma + 1 lattice points
    for (const XiPolygon& p :
         {triangle(4), rectangle(3, 2), unit_hexagon, XiPolygon::classify({3, 0, 2, 1, 2, 0})}) {
        XiPolygon q = twi::peel(p, PeelLine::LeftVertical);
        CHECK(twi::lattice_count(q) == twi::lattice_count(p) - (twi::sigma_len(p) + 1));
    }
}

TEST_CASE("directional nondegeneracy") {
    CHECK_FALSE(twi::dir_nondegenerate(triangle(3), PeelLine::TopHorizontal));
    CHECK_FALSE(twi::dir_nondegenerate(triangle(3), PeelLine::LowerLeftDiagonal));
    CHECK(twi::dir_nondegenerate(unit_hexagon, PeelLine::TopHorizontal));
    CHECK(twi::dir_nondegenerate(unit_hexagon, PeelLine::LowerLeftDiagonal));
    CHECK_THROWS_AS(twi::dir_nondegenerate(XiPolygon::point(), PeelLine::TopHorizontal),
                    std::domain_error);
}

TEST_CASE("admissible sets") {
    auto tri = twi::admissible_sets(triangle(3));
    REQUIRE(tri.size() == 1);
    CHECK(tri[0].daleth == Daleth{});
    CHECK(tri[0].peeled == triangle(2));

    auto rect = twi::admissible_sets(rectangle(1, 3));
    REQUIRE(rect.size() == 1);
    CHECK(rect[0].peeled == XiPolygon::vsegment(3));

    // both direction tests pass on the unit hexagon, but the composite peel
    // of the full pair is left-degenerate, so three subsets survive
    auto hex = twi::admissible_sets(unit_hexagon);
    REQUIRE(hex.size() == 3);
    CHECK(hex[0].daleth == Daleth{false, false});
    CHECK(hex[0].peeled == XiPolygon::classify({2, 0, 1, 1, 1, 0}));
    CHECK(hex[1].daleth == Daleth{true, false});
    CHECK(hex[1].peeled == XiPolygon::classify({1, 0, 1, 1, 0, 1}));
    CHECK(hex[2].daleth == Daleth{false, true});
    CHECK(hex[2].peeled == XiPolygon::classify({1, 1, 0, 1, 1, 0}));

    // a polygon where the full pair is admissible; the two peel orders agree
    XiPolygon p = XiPolygon::classify({2, 1, 1, 2, 1, 1});
    auto ads = twi::admissible_sets(p);
    REQUIRE(ads.size() == 4);
    CHECK(ads[3].daleth == Daleth{true, true});
    CHECK(ads[3].peeled == XiPolygon::classify({1, 1, 0, 2, 0, 1}));
    XiPolygon left = twi::peel(p, PeelLine::LeftVertical);
    CHECK(twi::peel(twi::peel(left, PeelLine::TopHorizontal), PeelLine::LowerLeftDiagonal) ==
          twi::peel(twi::peel(left, PeelLine::LowerLeftDiagonal), PeelLine::TopHorizontal));
}

TEST_CASE("minkowski sum") {
    CHECK(twi::minkowski_sum(triangle(1), triangle(1)) == triangle(2));
    CHECK(twi::minkowski_sum(unit_hexagon, XiPolygon::point()) == unit_hexagon);
    CHECK(twi::minkowski_sum(triangle(1), XiPolygon::vsegment(1)) ==
          XiPolygon::classify({2, 0, 1, 1, 1, 0}));
    // commutative, associative, additive boundary statistics
    XiPolygon a = triangle(2), b = rectangle(1, 2), c = XiPolygon::vsegment(1);
    CHECK(twi::minkowski_sum(a, b) == twi::minkowski_sum(b, a));
    CHECK(twi::minkowski_sum(twi::minkowski_sum(a, b), c) ==
          twi::minkowski_sum(a, twi::minkowski_sum(b, c)));
    CHECK(twi::boundary_len(twi::minkowski_sum(a, c)) ==
          twi::boundary_len(a) + twi::boundary_len(c));
    CHECK(twi::sigma_len(twi::minkowski_sum(a, b)) == twi::sigma_len(a) + twi::sigma_len(b));
}

TEST_CASE("decompositions") {
    auto d22 = twi::decompositions(triangle(2), 2);
    REQUIRE(d22.size() == 2);
    CHECK(d22[0] == std::vector<XiPolygon>{XiPolygon::point(), triangle(2)});
    CHECK(d22[1] == std::vector<XiPolygon>{triangle(1), triangle(1)});

    auto d11 = twi::decompositions(triangle(1), 1);
    REQUIRE(d11.size() == 1);
    CHECK(d11[0] == std::vector<XiPolygon>{triangle(1)});

    auto dv = twi::decompositions(XiPolygon::vsegment(2), 2);
    REQUIRE(dv.size() == 2);
    CHECK(dv[0] == std::vector<XiPolygon>{XiPolygon::point(), XiPolygon::vsegment(2)});
    CHECK(dv[1] ==
          std::vector<XiPolygon>{XiPolygon::vsegment(1), XiPolygon::vsegment(1)});

    // every emitted multiset sums back to the input, parts are Xi members,
    // and no multiset repeats
    for (const XiPolygon& p : {unit_hexagon, triangle(3), rectangle(2, 2)}) {
        for (int m = 1; m <= 3; ++m) {
            auto all = twi::decompositions(p, m);
            std::set<std::vector<XiPolygon>> seen;
            for (const auto& parts : all) {
                XiPolygon sum = XiPolygon::point();
                for (const XiPolygon& q : parts) {
                    CHECK(q.in_xi());
                    sum = twi::minkowski_sum(sum, q);
                }
                CHECK(sum == p);
                CHECK(seen.insert(parts).second);
            }
        }
    }
}

TEST_CASE("canonical keys and parsing") {
    CHECK(triangle(3).canonical_key() == "P:3,0,3,0,3,0");
    CHECK(XiPolygon::point().canonical_key() == "pt:0,0,0,0,0,0");
    CHECK(XiPolygon::vsegment(2).canonical_key() == "vs:2,0,0,2,0,0");

    CHECK(twi::parse_polygon("P:3,0,3,0,3,0") == triangle(3));
    CHECK(twi::parse_polygon("3,0,3,0,3,0") == triangle(3));
    CHECK(twi::parse_polygon("(0,0);(3,0);(0,3)") == triangle(3));
    CHECK(twi::parse_polygon("(5,1);(5,4)") == XiPolygon::vsegment(3));
    CHECK(twi::parse_polygon("vs:2,0,0,2,0,0") == XiPolygon::vsegment(2));
    CHECK_THROWS_AS(twi::parse_polygon("1,2,3"), std::domain_error);
    CHECK_THROWS_AS(twi::parse_polygon("vs:3,0,3,0,3,0"), std::domain_error);
    CHECK_THROWS_AS(twi::parse_polygon("(0,0);(2,1)"), std::domain_error);

    // classify round trips on every Xi polygon in a small box
    for (int w = 0; w <= 3; ++w)
        for (int sw = 0; sw <= 3; ++sw)
            for (int s = 0; s <= 3; ++s)
                for (int ne = 0; ne <= 3; ++ne) {
                    int n = sw + s - ne, e = w + sw - ne;
                    if (n < 0 || n > 3 || e < 0 || e > 3) continue;
                    XiPolygon::Lengths len = {w, sw, s, e, ne, n};
                    try {
                        XiPolygon p = XiPolygon::classify(len);
                        CHECK(XiPolygon::classify(p.lengths()) == p);
                        CHECK(twi::parse_polygon(p.canonical_key()) == p);
                    } catch (const std::domain_error&) {
                        // not an Xi vector; nothing to round trip
                    }
                }
}
