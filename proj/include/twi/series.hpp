#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "twi/invariants.hpp"
#include "twi/polygon.hpp"
#include "twi/seq.hpp"
#include "twi/surfaces.hpp"

namespace twi {

// Grading of one series term.  The z-exponent is the number of plane point
// constraints n = r - |alpha|; it is additive under term products, unlike r
// itself, which is what makes the truncated exponential well defined.
struct SeriesKey {
    XiPolygon polygon = XiPolygon::point();
    long genus = 0;
    Seq alpha, beta;

    SeriesKey() = default;

    SeriesKey(XiPolygon p, long g, Seq a, Seq b)
        : polygon(std::move(p)), genus(g), alpha(std::move(a)), beta(std::move(b)) {
        if (alpha.jvalue() + beta.jvalue() != sigma_len(polygon))
            throw std::domain_error("SeriesKey: unbalanced key");
        if (n() < 0) throw std::domain_error("SeriesKey: negative z-exponent");
    }

    long n() const {
        return boundary_len(polygon) - sigma_len(polygon) + beta.norm() + genus - 1;
    }

    auto tied() const { return std::tie(polygon, genus, alpha, beta); }
    bool operator==(const SeriesKey& o) const { return tied() == o.tied(); }
    bool operator<(const SeriesKey& o) const { return tied() < o.tied(); }

    std::string str() const {
        std::ostringstream os;
        os << polygon.canonical_key() << "|g=" << genus << "|a=" << alpha.str()
           << "|b=" << beta.str() << "|n=" << n();
        return os.str();
    }
};

struct Truncation {
    int box_w = 0;
    int box_h = 0;
    long n_max = 0;
};

// Truncated formal sum over keys with exact rational coefficients; zero
// coefficients are never stored.
struct Series {
    std::map<SeriesKey, Rat> coeffs;
    Truncation trunc;

    void add(const SeriesKey& k, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = coeffs.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) coeffs.erase(it);
        }
    }

    bool fits(const SeriesKey& k) const {
        return k.polygon.width() <= trunc.box_w && k.polygon.height() <= trunc.box_h &&
               k.n() <= trunc.n_max;
    }
};

namespace detail {

// All Xi polygons in the box whose present/absent sides match the shape of
// the surface's ample polygons, together with their iterated admissible
// peels.
//
// Only the triangle and rectangle families are supported: for them every
// family member fitting the box is enumerated directly and every peel's
// parent also fits, so the truncated set is closed under the Minkowski
// products the exponential forms.  The blown-up families fail this: some of
// their peels fitting the box descend only from parents outside it (the 2x2
// rectangle is a peel of a width-3 hexagon), so a box truncation cannot
// enumerate their semigroup faithfully.
inline std::set<XiPolygon> shape_polygons(Surface shape, int box_w, int box_h) {
    // zero pattern per family: true = side present in the ample shape
    std::array<bool, 6> present{};
    switch (shape) {
        case Surface::P2: present = {true, false, true, false, true, false}; break;
        case Surface::P1xP1: present = {true, false, true, true, false, true}; break;
        default:
            throw std::domain_error(
                "series: shape family must be p2 or p1xp1 (box truncation is not "
                "faithful for the blown-up families)");
    }
    std::set<XiPolygon> out;
    int m = std::max(box_w, box_h);
    for (int w = 0; w <= m; ++w)
        for (int sw = 0; sw <= m; ++sw)
            for (int s = 0; s <= m; ++s)
                for (int ne = 0; ne <= m; ++ne) {
                    int n = sw + s - ne, e = w + sw - ne;
                    if (n < 0 || e < 0 || n > m || e > m) continue;
                    XiPolygon::Lengths len = {w, sw, s, e, ne, n};
                    bool match = true;
                    for (int i = 0; i < 6; ++i)
                        if ((len[i] > 0) != present[i]) match = false;
                    if (!match) continue;
                    XiPolygon p = XiPolygon::from_lengths(len);
                    if (!p.is_poly() || !p.in_xi()) continue;
                    if (p.width() > box_w || p.height() > box_h) continue;
                    out.insert(p);
                }
    // close under admissible peels (segments and points arise here)
    std::vector<XiPolygon> work(out.begin(), out.end());
    while (!work.empty()) {
        XiPolygon p = work.back();
        work.pop_back();
        if (!p.is_poly()) continue;
        for (const AdmissiblePeel& ap : admissible_sets(p))
            if (out.insert(ap.peeled).second) work.push_back(ap.peeled);
    }
    return out;
}

} // namespace detail

// Builds the truncated generating series of one invariant kind over the
// family's polygons: coefficient W(Delta, alpha, beta, g) / (alpha! * n!) at
// each balanced key with 0 <= n <= n_max.
inline Series build_series(Engine& eng, InvKind kind, Surface shape, Truncation trunc) {
    Series out;
    out.trunc = trunc;
    if (trunc.box_w <= 0 || trunc.box_h <= 0) return out;
    for (const XiPolygon& p : detail::shape_polygons(shape, trunc.box_w, trunc.box_h)) {
        if (p.is_point()) continue;  // n < 0 for every balanced point key
        long sig = sigma_len(p);
        for (long ja = 0; ja <= sig; ++ja)
            for (const Seq& a : detail::seqs_with_jvalue(ja))
                for (const Seq& b : detail::seqs_with_jvalue(sig - ja)) {
                    long base = boundary_len(p) - sig + b.norm() - 1;  // n - g
                    for (long g = -base; base + g <= trunc.n_max; ++g) {
                        Int w = kind == InvKind::Multi ? eng.w_multi(p, a, b, g)
                                                       : eng.w_irr(p, a, b, g);
                        if (w == 0) continue;
                        SeriesKey key(p, g, a, b);
                        out.add(key, Rat(w, factorial_seq(a) * factorial(key.n())));
                    }
                }
    }
    return out;
}

namespace detail {

inline Series series_mul(const Series& lhs, const Series& rhs) {
    Series out;
    out.trunc = lhs.trunc;
    for (const auto& [k1, c1] : lhs.coeffs)
        for (const auto& [k2, c2] : rhs.coeffs) {
            XiPolygon p = minkowski_sum(k1.polygon, k2.polygon);
            if (p.width() > out.trunc.box_w || p.height() > out.trunc.box_h) continue;
            SeriesKey k(p, k1.genus + k2.genus - 1, k1.alpha + k2.alpha, k1.beta + k2.beta);
            if (k.n() != k1.n() + k2.n())
                throw std::logic_error("series product: z-grading not additive");
            if (k.n() > out.trunc.n_max) continue;
            out.add(k, c1 * c2);
        }
    return out;
}

} // namespace detail

// Truncated exponential sum_{m>=1} s^m / m!; the constant term is omitted.
// Term products Minkowski-add polygons, add alpha, beta and n, and combine
// genus by g = g1 + g2 - 1.  Finite because every key's polygon has positive
// height, which is additive.
inline Series series_exp(const Series& s) {
    for (const auto& [k, c] : s.coeffs)
        if (k.polygon.is_point())
            throw std::domain_error("series_exp: constant term present");
    Series out;
    out.trunc = s.trunc;
    Series power = s;
    Int m_fact = 1;
    long m = 1;
    while (!power.coeffs.empty()) {
        for (const auto& [k, c] : power.coeffs) out.add(k, c / Rat(m_fact));
        ++m;
        m_fact *= m;
        power = detail::series_mul(power, s);
    }
    return out;
}

struct ExpMismatch {
    SeriesKey key;
    Rat lhs;  // multi-component series coefficient
    Rat rhs;  // exponential of the irreducible series
};

struct ExpReport {
    long checked = 0;
    std::vector<ExpMismatch> mismatches;
};

// Coefficientwise comparison of Z against exp(Z_irr) minus the constant term.
inline ExpReport check_exp_identity(Engine& eng, Surface shape, Truncation trunc) {
    Series z = build_series(eng, InvKind::Multi, shape, trunc);
    Series zirr = build_series(eng, InvKind::Irr, shape, trunc);
    Series ez = series_exp(zirr);
    std::set<SeriesKey> keys;
    for (const auto& [k, c] : z.coeffs) keys.insert(k);
    for (const auto& [k, c] : ez.coeffs) keys.insert(k);
    ExpReport rep;
    for (const SeriesKey& k : keys) {
        ++rep.checked;
        auto l = z.coeffs.find(k);
        auto r = ez.coeffs.find(k);
        Rat lv = l == z.coeffs.end() ? Rat(0) : l->second;
        Rat rv = r == ez.coeffs.end() ? Rat(0) : r->second;
        if (lv != rv) rep.mismatches.push_back({k, lv, rv});
    }
    return rep;
}

inline std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1)
        os << '/' << boost::multiprecision::denominator(q);
    return os.str();
}

} // namespace twi
