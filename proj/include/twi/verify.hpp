#pragma once

#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twi/invariants.hpp"
#include "twi/polygon.hpp"
#include "twi/series.hpp"
#include "twi/surfaces.hpp"

namespace twi {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The first six absolute invariants of the plane.
inline const std::array<long, 6>& golden_p2_values() {
    static const std::array<long, 6> v = {1, 1, 8, 240, 18264, 2845440};
    return v;
}

inline SuiteResult suite_golden_p2(Engine& eng) {
    SuiteResult r{"golden-p2", true, ""};
    std::ostringstream os;
    for (int d = 1; d <= 6; ++d) {
        Int w = welschinger(eng, DivisorSpec{Surface::P2, d, 0, 0, 0});
        if (d > 1) os << ',';
        os << w;
        if (w != golden_p2_values()[d - 1]) r.pass = false;
    }
    r.detail = "d=1..6: " + os.str();
    return r;
}

// Piecewise initial values and the two zero extensions.
inline SuiteResult suite_initial_values(Engine& eng) {
    long failures = 0, checks = 0;
    auto expect = [&](const Int& got, long want) {
        ++checks;
        if (got != want) ++failures;
    };

    // point, multi: unit value exactly at the neutral genus of the splitting
    // semigroup
    for (long g = -2; g <= 3; ++g)
        expect(eng.w_multi(XiPolygon::point(), Seq(), Seq(), g), g == 1 ? 1 : 0);
    // point, irreducible: unit value at genus zero
    for (long g = -2; g <= 3; ++g)
        expect(eng.w_irr(XiPolygon::point(), Seq(), Seq(), g), g == 0 ? 1 : 0);

    for (int s = 1; s <= 4; ++s) {
        XiPolygon seg = XiPolygon::vsegment(s);
        // all alpha + beta = (s) splits
        for (int a = 0; a <= s; ++a) {
            Seq alpha = Seq::ones(a), beta = Seq::ones(s - a);
            for (long g = -s - 1; g <= 2; ++g) {
                expect(eng.w_multi(seg, alpha, beta, g), g == 1 - s ? 1 : 0);
                expect(eng.w_irr(seg, alpha, beta, g), (s <= 1 && g == 0) ? 1 : 0);
            }
        }
        // a key with the right norm but the wrong shape: alpha+beta != (s)
        if (s >= 3) {
            Seq alpha({0, 1});  // J = 3
            Seq beta = Seq::ones(s - 3);
            for (long g = -s; g <= 1; ++g) {
                expect(eng.w_multi(seg, alpha, beta, g), 0);
                expect(eng.w_irr(seg, alpha, beta, g), 0);
            }
        }
    }

    // zero extensions
    XiPolygon t1 = polygon_of_divisor({Surface::P2, 1, 0, 0, 0});
    XiPolygon t2 = polygon_of_divisor({Surface::P2, 2, 0, 0, 0});
    expect(eng.w_multi(t1, Seq::ones(1), Seq(), -1), 0);  // r = |alpha|
    expect(eng.w_multi(t1, Seq(), Seq::ones(1), -2), 0);  // r < |alpha|
    expect(eng.w_irr(t2, Seq(), Seq::ones(2), -1), 0);    // g < 0
    expect(eng.w_irr(t1, Seq::ones(1), Seq(), -3), 0);

    SuiteResult r{"initial-values", failures == 0,
                  std::to_string(checks) + " cases, " + std::to_string(failures) +
                      " failures"};
    return r;
}

// Frozen derived-oracle values (the brute-force enumeration itself lives in
// the test suite).
inline SuiteResult suite_oracle_values(Engine& eng) {
    XiPolygon t2 = polygon_of_divisor({Surface::P2, 2, 0, 0, 0});
    Int pairs = eng.w_multi(t2, Seq(), Seq::ones(2), -1);
    Int conic_irr = eng.w_irr(t2, Seq(), Seq::ones(2), 0);
    Int conic_multi = eng.w_multi(t2, Seq(), Seq::ones(2), 0);
    bool pass = pairs == 3 && conic_irr == 1 && conic_multi == conic_irr;
    std::ostringstream os;
    os << "line pairs " << pairs << " (want 3), conic " << conic_multi << "="
       << conic_irr << " (want 1=1)";
    return {"derived-oracle", pass, os.str()};
}

inline SuiteResult suite_positivity(Engine& eng, int box_w, int box_h) {
    PositivityReport rep = positivity_sweep(eng, box_w, box_h);
    std::ostringstream os;
    os << rep.checked << " ample specs in " << box_w << "x" << box_h << ", "
       << rep.violations.size() << " violations";
    for (const auto& [s, v] : rep.violations) os << "; " << s.str() << " -> " << v;
    return {"positivity", rep.violations.empty() && rep.checked > 0, os.str()};
}

namespace detail {

// All nondegenerate Xi polygons fitting the box, up to translation.
inline std::vector<XiPolygon> xi_polys_in_box(int box_w, int box_h) {
    std::vector<XiPolygon> out;
    int m = std::max(box_w, box_h);
    for (int w = 1; w <= m; ++w)
        for (int sw = 0; sw <= m; ++sw)
            for (int s = 0; s <= m; ++s)
                for (int ne = 0; ne <= m; ++ne) {
                    int n = sw + s - ne, e = w + sw - ne;
                    if (n < 0 || e < 0 || n > m || e > m) continue;
                    XiPolygon p = XiPolygon::from_lengths({w, sw, s, e, ne, n});
                    if (!p.is_poly()) continue;
                    if (p.width() > box_w || p.height() > box_h) continue;
                    out.push_back(p);
                }
    return out;
}

} // namespace detail

// Every single-peel edge between nondegenerate Xi polygons in the box:
// non-increasing invariant, strictly decreasing when the interior
// lattice-point count drops.  Chains follow by transitivity.
inline SuiteResult suite_monotonicity(Engine& eng, int box_w, int box_h) {
    long edges = 0, violations = 0;
    std::ostringstream bad;
    for (const XiPolygon& p : detail::xi_polys_in_box(box_w, box_h)) {
        Int wp = welschinger(eng, p);
        for (PeelLine line : {PeelLine::LeftVertical, PeelLine::TopHorizontal,
                              PeelLine::LowerLeftDiagonal}) {
            auto q = detail::peel_points(p, line);
            if (!q || !q->is_poly() || !q->in_xi()) continue;
            ++edges;
            Int wq = welschinger(eng, *q);
            bool ok = interior_count(p) > interior_count(*q) ? wp > wq : wp >= wq;
            if (!ok) {
                ++violations;
                bad << "; " << p.canonical_key() << " -> " << q->canonical_key();
            }
        }
    }
    std::ostringstream os;
    os << edges << " peel edges in " << box_w << "x" << box_h << ", " << violations
       << " violations" << bad.str();
    return {"monotonicity", violations == 0 && edges > 0, os.str()};
}

inline SuiteResult suite_symmetry(Engine& eng) {
    long checks = 0, failures = 0;
    for (int a = 1; a <= 4; ++a)
        for (int b = a; b <= 4; ++b) {
            ++checks;
            if (welschinger(eng, DivisorSpec{Surface::P1xP1, 0, a, b, 0}) !=
                welschinger(eng, DivisorSpec{Surface::P1xP1, 0, b, a, 0}))
                ++failures;
        }
    for (int d = 3; d <= 4; ++d)
        for (int d1 = 1; d1 < d; ++d1)
            for (int d2 = 1; d2 < d; ++d2)
                for (int d3 = 1; d3 < d; ++d3) {
                    DivisorSpec s{Surface::P2_3, d, d1, d2, d3};
                    bool ample = true;
                    for (const auto& [name, len] : ample_side_lengths(s))
                        if (len <= 0) ample = false;
                    if (!ample) continue;
                    Int base = welschinger(eng, s);
                    std::array<std::array<int, 3>, 6> perms = {{{d1, d2, d3},
                                                                {d1, d3, d2},
                                                                {d2, d1, d3},
                                                                {d2, d3, d1},
                                                                {d3, d1, d2},
                                                                {d3, d2, d1}}};
                    for (const auto& pm : perms) {
                        ++checks;
                        if (welschinger(eng, DivisorSpec{Surface::P2_3, d, pm[0], pm[1],
                                                         pm[2]}) != base)
                            ++failures;
                    }
                }
    return {"symmetry", failures == 0,
            std::to_string(checks) + " comparisons, " + std::to_string(failures) +
                " failures"};
}

inline SuiteResult suite_exp_identity(Engine& eng, int box_w, int box_h, long n_max) {
    std::ostringstream os;
    bool pass = true;
    for (Surface shape : {Surface::P2, Surface::P1xP1}) {
        ExpReport rep = check_exp_identity(eng, shape, {box_w, box_h, n_max});
        if (!rep.mismatches.empty() || rep.checked == 0) pass = false;
        os << surface_tag(shape) << ": " << rep.checked << " keys, "
           << rep.mismatches.size() << " mismatches";
        for (const ExpMismatch& m : rep.mismatches)
            os << " [" << m.key.str() << " " << rat_str(m.lhs) << " vs " << rat_str(m.rhs)
               << "]";
        os << "  ";
    }
    return {"exp-identity", pass, os.str()};
}

// The balance and point-count audits throw on violation, so reaching this
// point with nonzero counters is the pass condition.
inline SuiteResult suite_conservation(const Engine& eng) {
    long b = eng.audits().balance_checks.load();
    long n = eng.audits().nsum_checks.load();
    std::ostringstream os;
    os << b << " balance checks, " << n << " splitting point-count checks, 0 violations";
    return {"conservation", b > 0 && n > 0, os.str()};
}

// Cold/warm determinism plus a save/load round trip through the cache file.
inline SuiteResult suite_persistence(const std::string& tmp_path) {
    Engine cold1, cold2;
    std::vector<Int> v1, v2;
    for (int d = 1; d <= 6; ++d) {
        v1.push_back(welschinger(cold1, DivisorSpec{Surface::P2, d, 0, 0, 0}));
        v2.push_back(welschinger(cold2, DivisorSpec{Surface::P2, d, 0, 0, 0}));
    }
    bool pass = v1 == v2;

    long hits_before = cold1.cache().hits();
    std::vector<Int> warm;
    for (int d = 1; d <= 6; ++d)
        warm.push_back(welschinger(cold1, DivisorSpec{Surface::P2, d, 0, 0, 0}));
    pass = pass && warm == v1 && cold1.cache().hits() > hits_before;

    {
        std::ofstream os(tmp_path);
        save_cache(cold1.cache(), os);
    }
    Engine reloaded;
    {
        std::ifstream is(tmp_path);
        load_cache(reloaded.cache(), is);
    }
    std::vector<Int> v3;
    for (int d = 1; d <= 6; ++d)
        v3.push_back(welschinger(reloaded, DivisorSpec{Surface::P2, d, 0, 0, 0}));
    pass = pass && v3 == v1 && reloaded.cache().hits() > 0;

    std::ostringstream os;
    os << "cold/warm/reload agree: " << (pass ? "yes" : "no") << ", reload hits "
       << reloaded.cache().hits();
    return {"persistence", pass, os.str()};
}

// Recompute every cached entry from scratch and compare.
inline SuiteResult cache_crosscheck(const MemoCache& cache) {
    Engine fresh;
    long checked = 0, bad = 0;
    std::ostringstream os;
    for (const auto& [text, value] : cache.sorted_entries()) {
        RelInvKey key = parse_cache_key(text);
        ++checked;
        if (fresh.eval(key) != value) {
            ++bad;
            if (bad == 1) os << "cache value disagrees with recomputation: " << text;
        }
    }
    std::ostringstream head;
    head << checked << " entries, " << bad << " disagreements";
    if (bad) head << "; " << os.str();
    return {"cache-crosscheck", bad == 0, head.str()};
}

} // namespace twi
