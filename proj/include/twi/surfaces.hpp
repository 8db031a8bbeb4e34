#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twi/invariants.hpp"
#include "twi/polygon.hpp"

namespace twi {

enum class Surface { P2, P1xP1, P2_1, P2_2, P2_3 };

inline const char* surface_tag(Surface s) {
    switch (s) {
        case Surface::P2: return "p2";
        case Surface::P1xP1: return "p1xp1";
        case Surface::P2_1: return "p2_1";
        case Surface::P2_2: return "p2_2";
        default: return "p2_3";
    }
}

// Divisor data on one of the five toric Del Pezzo surfaces: degree d (P2 and
// blowups) or bidegree (d1, d2) (P1xP1), plus the blowup multiplicities.
struct DivisorSpec {
    Surface surface = Surface::P2;
    int d = 0;
    int d1 = 0, d2 = 0, d3 = 0;

    int blowups() const {
        switch (surface) {
            case Surface::P2_1: return 1;
            case Surface::P2_2: return 2;
            case Surface::P2_3: return 3;
            default: return 0;
        }
    }

    std::string str() const {
        std::ostringstream os;
        switch (surface) {
            case Surface::P2: os << "p2:d=" << d; break;
            case Surface::P1xP1: os << "p1xp1:" << d1 << ',' << d2; break;
            default:
                os << "p2k:k=" << blowups() << ",d=" << d << ",d1=" << d1;
                if (blowups() >= 2) os << ",d2=" << d2;
                if (blowups() >= 3) os << ",d3=" << d3;
        }
        return os.str();
    }

    bool operator==(const DivisorSpec&) const = default;
};

// The named nonnegative side lengths the surface's fan requires to be
// positive for an ample divisor.
inline std::vector<std::pair<std::string, int>> ample_side_lengths(const DivisorSpec& s) {
    switch (s.surface) {
        case Surface::P2:
            return {{"d", s.d}};
        case Surface::P1xP1:
            return {{"d1", s.d1}, {"d2", s.d2}};
        case Surface::P2_1:
            return {{"d1", s.d1}, {"d-d1", s.d - s.d1}};
        case Surface::P2_2:
            return {{"d1", s.d1}, {"d2", s.d2}, {"d-d1", s.d - s.d1},
                    {"d-d2", s.d - s.d2}, {"d-d1-d2", s.d - s.d1 - s.d2}};
        default:
            return {{"d1", s.d1}, {"d2", s.d2}, {"d3", s.d3},
                    {"d-d1-d2", s.d - s.d1 - s.d2}, {"d-d1-d3", s.d - s.d1 - s.d3},
                    {"d-d2-d3", s.d - s.d2 - s.d3}};
    }
}

inline void validate_ample(const DivisorSpec& s) {
    for (const auto& [name, len] : ample_side_lengths(s))
        if (len <= 0)
            throw std::domain_error("side length " + name + " = " + std::to_string(len) +
                                    " violates ampleness");
}

// Newton polygon of the divisor's linear system: triangle for P2, rectangle
// for P1xP1, and the trapeze / pentagon / hexagon family for the blowups
// (absent multiplicities read as zero side lengths).
inline XiPolygon polygon_of_divisor(const DivisorSpec& s) {
    XiPolygon::Lengths len{};
    switch (s.surface) {
        case Surface::P2:
            len = {s.d, 0, s.d, 0, s.d, 0};
            break;
        case Surface::P1xP1:
            len = {s.d2, 0, s.d1, s.d2, 0, s.d1};
            break;
        default: {
            int d1 = s.d1, d2 = s.blowups() >= 2 ? s.d2 : 0, d3 = s.blowups() >= 3 ? s.d3 : 0;
            len = {s.d - d2 - d3, d2, s.d - d1 - d2, d1, s.d - d1 - d3, d3};
        }
    }
    for (int l : len)
        if (l < 0) throw std::domain_error("divisor spec yields a negative side length");
    return XiPolygon::classify(len);
}

inline DivisorSpec parse_divisor_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::domain_error("divisor spec: expected '<surface>:<data>'");
    std::string head = text.substr(0, colon), body = text.substr(colon + 1);
    DivisorSpec s;
    if (head == "p2") {
        s.surface = Surface::P2;
        if (body.rfind("d=", 0) != 0) throw std::domain_error("divisor spec: expected d=<n>");
        s.d = std::stoi(body.substr(2));
        return s;
    }
    if (head == "p1xp1") {
        s.surface = Surface::P1xP1;
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::domain_error("divisor spec: expected '<d1>,<d2>'");
        s.d1 = std::stoi(body.substr(0, comma));
        s.d2 = std::stoi(body.substr(comma + 1));
        return s;
    }
    if (head != "p2k") throw std::domain_error("divisor spec: unknown surface '" + head + "'");
    std::map<std::string, int> kv;
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("divisor spec: expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = std::stoi(tok.substr(eq + 1));
    }
    int k = kv.count("k") ? kv["k"] : 0;
    if (k < 1 || k > 3) throw std::domain_error("divisor spec: k must be 1, 2, or 3");
    s.surface = k == 1 ? Surface::P2_1 : k == 2 ? Surface::P2_2 : Surface::P2_3;
    s.d = kv["d"];
    s.d1 = kv["d1"];
    s.d2 = kv["d2"];
    s.d3 = kv["d3"];
    return s;
}

// Absolute Welschinger invariant W(Sigma, D) of an ample divisor, computed as
// the irreducible relative invariant of its polygon with all left ends free.
inline Int welschinger(Engine& eng, const DivisorSpec& spec) {
    validate_ample(spec);
    XiPolygon p = polygon_of_divisor(spec);
    return eng.w_irr(p, Seq(), Seq::ones(sigma_len(p)), 0);
}

// Same invariant for a bare nondegenerate Xi polygon (relaxed mode).
inline Int welschinger(Engine& eng, const XiPolygon& p) {
    if (!p.is_poly() || !p.in_xi())
        throw std::domain_error("welschinger: nondegenerate Xi polygon required");
    return eng.w_irr(p, Seq(), Seq::ones(sigma_len(p)), 0);
}

// ---------------------------------------------------------------------------
// Corollary-level verification sweeps

struct MonotonicityReport {
    std::vector<XiPolygon> chain;  // outer first, inner last
    Int outer_value;
    Int inner_value;
    bool strict_expected = false;
    bool ok = false;
};

namespace detail {

// Depth-first search for a peeling chain between nondegenerate Xi polygons.
inline bool peel_chain(const XiPolygon& from, const XiPolygon& to,
                       std::set<XiPolygon>& dead, std::vector<XiPolygon>& chain) {
    chain.push_back(from);
    if (from == to) return true;
    if (!dead.count(from) && lattice_count(from) > lattice_count(to)) {
        for (PeelLine line : {PeelLine::LeftVertical, PeelLine::TopHorizontal,
                              PeelLine::LowerLeftDiagonal}) {
            auto next = peel_points(from, line);
            if (!next || !next->is_poly() || !next->in_xi()) continue;
            if (peel_chain(*next, to, dead, chain)) return true;
        }
        dead.insert(from);
    }
    chain.pop_back();
    return false;
}

} // namespace detail

// Certifies nesting by a peeling chain from outer to inner and checks the
// monotonicity of the absolute invariant along it; strict whenever the
// interior lattice-point count drops.
inline MonotonicityReport check_monotonicity(Engine& eng, const XiPolygon& outer,
                                             const XiPolygon& inner) {
    if (!outer.is_poly() || !outer.in_xi() || !inner.is_poly() || !inner.in_xi())
        throw std::domain_error("check_monotonicity: nondegenerate Xi polygons required");
    MonotonicityReport rep;
    std::set<XiPolygon> dead;
    if (!detail::peel_chain(outer, inner, dead, rep.chain))
        throw std::domain_error("check_monotonicity: not nested in Xi");
    rep.outer_value = welschinger(eng, outer);
    rep.inner_value = welschinger(eng, inner);
    rep.strict_expected = interior_count(outer) > interior_count(inner);
    rep.ok = rep.strict_expected ? rep.outer_value > rep.inner_value
                                 : rep.outer_value >= rep.inner_value;
    return rep;
}

struct PositivityReport {
    long checked = 0;
    std::vector<std::pair<DivisorSpec, Int>> violations;
};

// All ample divisor specs on the five surfaces whose polygon fits the box.
inline std::vector<DivisorSpec> ample_specs_in_box(int box_w, int box_h) {
    std::vector<DivisorSpec> out;
    for (int d = 1; d <= std::min(box_w, box_h); ++d)
        out.push_back({Surface::P2, d, 0, 0, 0});
    for (int a = 1; a <= box_w; ++a)
        for (int b = 1; b <= box_h; ++b)
            out.push_back({Surface::P1xP1, 0, a, b, 0});
    for (int k = 1; k <= 3; ++k) {
        Surface surf = k == 1 ? Surface::P2_1 : k == 2 ? Surface::P2_2 : Surface::P2_3;
        for (int d = 2; d <= box_w + box_h; ++d)
            for (int d1 = 1; d1 < d; ++d1)
                for (int d2 = k >= 2 ? 1 : 0; d2 < (k >= 2 ? d : 1); ++d2)
                    for (int d3 = k >= 3 ? 1 : 0; d3 < (k >= 3 ? d : 1); ++d3) {
                        DivisorSpec s{surf, d, d1, d2, d3};
                        bool ample = true;
                        for (const auto& [name, len] : ample_side_lengths(s))
                            if (len <= 0) ample = false;
                        if (!ample) continue;
                        XiPolygon p = polygon_of_divisor(s);
                        if (p.width() > box_w || p.height() > box_h) continue;
                        out.push_back(s);
                    }
    }
    return out;
}

inline PositivityReport positivity_sweep(Engine& eng, int box_w, int box_h) {
    PositivityReport rep;
    for (const DivisorSpec& s : ample_specs_in_box(box_w, box_h)) {
        Int w = welschinger(eng, s);
        ++rep.checked;
        if (w <= 0) rep.violations.emplace_back(s, w);
    }
    return rep;
}

} // namespace twi
