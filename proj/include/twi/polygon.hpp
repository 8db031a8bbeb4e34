#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twi {

// Side slots of the fixed fan, by outward primitive normal:
//   W=(-1,0)  SW=(-1,-1)  S=(0,-1)  E=(1,0)  NE=(1,1)  N=(0,1)
enum Side : int { W = 0, SW = 1, S = 2, E = 3, NE = 4, N = 5 };

enum class Kind { Point, VSegment, Poly };

struct Pt {
    int x = 0, y = 0;
    bool operator==(const Pt&) const = default;
    auto operator<=>(const Pt&) const = default;
};

// Lattice polygon with all side normals in the fixed six-direction fan,
// considered up to translation and stored as the 6-vector of side lattice
// lengths.  Degenerate members: Point (all zero) and VSegment of length s
// (W = E = s, rest zero).  A Poly may be left-degenerate (W side of length
// zero); such values arise as intermediate peels and are not Xi members.
class XiPolygon {
public:
    using Lengths = std::array<int, 6>;

    static XiPolygon point() { return XiPolygon(Kind::Point, {0, 0, 0, 0, 0, 0}); }

    static XiPolygon vsegment(int s) {
        if (s <= 0) throw std::domain_error("vsegment: length must be positive");
        return XiPolygon(Kind::VSegment, {s, 0, 0, s, 0, 0});
    }

    // Validating constructor for external input: rejects anything outside Xi.
    static XiPolygon classify(const Lengths& len) {
        XiPolygon p = from_lengths(len);
        if (p.kind() == Kind::Poly && p.len_[W] == 0)
            throw std::domain_error("classify: not left-nondegenerate");
        return p;
    }

    // Relaxed constructor: accepts any closed circuit over the six normals,
    // including left-degenerate polygons.  Rejects non-vertical segments.
    static XiPolygon from_lengths(const Lengths& len) {
        for (int l : len)
            if (l < 0) throw std::domain_error("polygon: negative side length");
        if (len[SW] + len[S] - len[NE] - len[N] != 0 ||
            -len[W] - len[SW] + len[E] + len[NE] != 0)
            throw std::domain_error("polygon: not a closed circuit");
        bool all_zero = std::all_of(len.begin(), len.end(), [](int l) { return l == 0; });
        if (all_zero) return point();
        if (len[W] == len[E] && len[W] > 0 && !len[SW] && !len[S] && !len[NE] && !len[N])
            return XiPolygon(Kind::VSegment, len);
        if (len[S] == len[N] && len[S] > 0 && !len[W] && !len[SW] && !len[E] && !len[NE])
            throw std::domain_error("polygon: horizontal segment is not in Xi");
        if (len[SW] == len[NE] && len[SW] > 0 && !len[W] && !len[S] && !len[E] && !len[N])
            throw std::domain_error("polygon: diagonal segment is not in Xi");
        return XiPolygon(Kind::Poly, len);
    }

    Kind kind() const { return kind_; }
    const Lengths& lengths() const { return len_; }
    int length(Side s) const { return len_[s]; }

    int width() const { return len_[SW] + len_[S]; }
    int height() const { return len_[E] + len_[NE]; }

    bool is_point() const { return kind_ == Kind::Point; }
    bool is_vsegment() const { return kind_ == Kind::VSegment; }
    bool is_poly() const { return kind_ == Kind::Poly; }

    // Xi membership: point, vertical segment, or left-nondegenerate polygon.
    bool in_xi() const { return kind_ != Kind::Poly || len_[W] >= 1; }

    bool operator==(const XiPolygon&) const = default;
    auto operator<=>(const XiPolygon&) const = default;

    std::string canonical_key() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Point: os << "pt:"; break;
            case Kind::VSegment: os << "vs:"; break;
            case Kind::Poly: os << "P:"; break;
        }
        for (int i = 0; i < 6; ++i) {
            if (i) os << ',';
            os << len_[i];
        }
        return os.str();
    }

private:
    XiPolygon(Kind k, const Lengths& l) : kind_(k), len_(l) {}

    Kind kind_ = Kind::Point;
    Lengths len_{};
};

// Lattice length of sigma, the left vertical side.  For a VSegment sigma is
// the whole segment; for a Point it is zero.
inline int sigma_len(const XiPolygon& p) { return p.length(W); }

// Lattice length of the boundary.  Degenerate conventions: 2s for a
// VSegment of length s (both "sides" of the doubled circuit) and 0 for a
// Point; these make boundary and sigma lengths additive under Minkowski sum.
inline int boundary_len(const XiPolygon& p) {
    if (p.is_point()) return 0;
    if (p.is_vsegment()) return 2 * sigma_len(p);
    const auto& l = p.lengths();
    return std::accumulate(l.begin(), l.end(), 0);
}

// Counterclockwise vertex circuit.  The polygon sits in the first quadrant
// touching both axes; the S side starts at (l_SW, 0).
inline std::vector<Pt> vertex_circuit(const XiPolygon& p) {
    if (p.is_point()) return {Pt{0, 0}};
    if (p.is_vsegment()) return {Pt{0, 0}, Pt{0, sigma_len(p)}};
    const auto& l = p.lengths();
    static constexpr std::array<Pt, 6> dir = {
        Pt{1, 0}, Pt{0, 1}, Pt{-1, 1}, Pt{-1, 0}, Pt{0, -1}, Pt{1, -1}};
    static constexpr std::array<Side, 6> order = {S, E, NE, N, W, SW};
    std::vector<Pt> verts;
    Pt cur{l[SW], 0};
    for (int i = 0; i < 6; ++i) {
        int n = l[order[i]];
        if (n == 0) continue;
        verts.push_back(cur);
        cur.x += n * dir[i].x;
        cur.y += n * dir[i].y;
    }
    return verts;
}

inline std::vector<Pt> lattice_points(const XiPolygon& p) {
    if (p.is_point()) return {Pt{0, 0}};
    if (p.is_vsegment()) {
        std::vector<Pt> pts;
        for (int y = 0; y <= sigma_len(p); ++y) pts.push_back({0, y});
        return pts;
    }
    const auto& l = p.lengths();
    int w = p.width(), h = p.height();
    std::vector<Pt> pts;
    for (int x = 0; x <= w; ++x) {
        int ybot = std::max(l[SW] - x, 0);
        int ytop = h - std::max(0, x - l[N]);
        for (int y = ybot; y <= ytop; ++y) pts.push_back({x, y});
    }
    return pts;
}

inline long lattice_count(const XiPolygon& p) {
    if (p.is_point()) return 1;
    if (p.is_vsegment()) return sigma_len(p) + 1;
    const auto& l = p.lengths();
    long total = 0;
    for (int x = 0; x <= p.width(); ++x) {
        int ybot = std::max(l[SW] - x, 0);
        int ytop = p.height() - std::max(0, x - l[N]);
        total += ytop - ybot + 1;
    }
    return total;
}

inline long interior_count(const XiPolygon& p) {
    if (!p.is_poly()) return 0;
    return lattice_count(p) - boundary_len(p);
}

struct BoundaryStats {
    int sigma_len = 0;
    int boundary_len = 0;
    long interior_count = 0;
    std::vector<Pt> vertices;
};

inline BoundaryStats boundary_stats(const XiPolygon& p) {
    return {sigma_len(p), boundary_len(p), interior_count(p), vertex_circuit(p)};
}

// ---------------------------------------------------------------------------
// Peeling

enum class PeelLine { LeftVertical, TopHorizontal, LowerLeftDiagonal };

namespace detail {

inline long cross(const Pt& o, const Pt& a, const Pt& b) {
    return static_cast<long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long>(a.y - o.y) * (b.x - o.x);
}

inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Pt> lo, hi;
    for (const Pt& p : pts) {
        while (lo.size() >= 2 && cross(lo[lo.size() - 2], lo.back(), p) <= 0) lo.pop_back();
        lo.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (hi.size() >= 2 && cross(hi[hi.size() - 2], hi.back(), *it) <= 0) hi.pop_back();
        hi.push_back(*it);
    }
    lo.pop_back();
    hi.pop_back();
    lo.insert(lo.end(), hi.begin(), hi.end());
    return lo;
}

inline int igcd(int a, int b) { return std::gcd(a, b); }

// Re-encode a hull as a 6-vector.  Fails (nullopt) when the hull is empty,
// is a non-vertical segment, or uses an edge direction outside the fan.
inline std::optional<XiPolygon> encode_hull(const std::vector<Pt>& hull) {
    if (hull.empty()) return std::nullopt;
    if (hull.size() == 1) return XiPolygon::point();
    if (hull.size() == 2) {
        if (hull[0].x != hull[1].x) return std::nullopt;
        return XiPolygon::vsegment(std::abs(hull[1].y - hull[0].y));
    }
    XiPolygon::Lengths len{};
    const std::size_t m = hull.size();
    for (std::size_t i = 0; i < m; ++i) {
        Pt a = hull[i], b = hull[(i + 1) % m];
        int dx = b.x - a.x, dy = b.y - a.y;
        int g = igcd(std::abs(dx), std::abs(dy));
        dx /= g;
        dy /= g;
        Side s;
        if (dx == 1 && dy == 0) s = S;
        else if (dx == 0 && dy == 1) s = E;
        else if (dx == -1 && dy == 1) s = NE;
        else if (dx == -1 && dy == 0) s = N;
        else if (dx == 0 && dy == -1) s = W;
        else if (dx == 1 && dy == -1) s = SW;
        else return std::nullopt;
        len[s] += g;
    }
    return XiPolygon::from_lengths(len);
}

inline std::optional<XiPolygon> peel_points(const XiPolygon& p, PeelLine line) {
    std::vector<Pt> pts = lattice_points(p);
    auto key = [line](const Pt& q) {
        switch (line) {
            case PeelLine::LeftVertical: return q.x;
            case PeelLine::TopHorizontal: return -q.y;
            default: return q.x + q.y;
        }
    };
    int m = key(pts.front());
    for (const Pt& q : pts) m = std::min(m, key(q));
    std::vector<Pt> keep;
    for (const Pt& q : pts)
        if (key(q) != m) keep.push_back(q);
    if (keep.empty()) return std::nullopt;
    return encode_hull(convex_hull(std::move(keep)));
}

} // namespace detail

// Convex hull of the lattice points of p minus those on the chosen supporting
// line.  The result may be a left-degenerate polygon; it is an error when the
// result is empty or falls outside the six-direction fan.
inline XiPolygon peel(const XiPolygon& p, PeelLine line) {
    if (p.is_point()) throw std::domain_error("peel: cannot peel a point");
    if (p.is_vsegment()) {
        if (line != PeelLine::LeftVertical)
            throw std::domain_error("peel: vertical segment admits only the left vertical line");
        throw std::domain_error("peel: result is empty");
    }
    auto r = detail::peel_points(p, line);
    if (!r) throw std::domain_error("peel: result not representable in the fan");
    return *r;
}

// ---------------------------------------------------------------------------
// Directional nondegeneracy and admissible peel sets

// True iff the supporting-line intersection for the direction is an edge with
// the required neighbor: top horizontal needs N and NE sides, lower-left
// diagonal needs SW and S sides.
inline bool dir_nondegenerate(const XiPolygon& p, PeelLine s) {
    if (!p.is_poly()) throw std::domain_error("dir_nondegenerate: polygon required");
    if (s == PeelLine::TopHorizontal) return p.length(N) >= 1 && p.length(NE) >= 1;
    if (s == PeelLine::LowerLeftDiagonal) return p.length(SW) >= 1 && p.length(S) >= 1;
    throw std::domain_error("dir_nondegenerate: direction must be top or diagonal");
}

// Subset of the two optional peel directions.
struct Daleth {
    bool top = false;   // horizontal line above, cooriented downward
    bool diag = false;  // slope -1 line below-left, cooriented up-right

    static std::array<Daleth, 4> all() {
        return {Daleth{false, false}, Daleth{true, false}, Daleth{false, true},
                Daleth{true, true}};
    }

    bool operator==(const Daleth&) const = default;

    std::string str() const {
        if (!top && !diag) return "{}";
        if (top && !diag) return "{0}";
        if (!top && diag) return "{-1}";
        return "{0,-1}";
    }
};

struct AdmissiblePeel {
    Daleth daleth;
    XiPolygon peeled;
};

// All admissible subsets with their composite peels: the polygon must be
// nondegenerate for each chosen direction and the composite peel (left
// vertical first) must land back in Xi.  A VSegment result qualifies: its
// sigma is the whole segment, not a point.
inline std::vector<AdmissiblePeel> admissible_sets(const XiPolygon& p) {
    if (!p.is_poly()) throw std::domain_error("admissible_sets: polygon required");
    std::vector<AdmissiblePeel> out;
    auto left = detail::peel_points(p, PeelLine::LeftVertical);
    for (const Daleth& d : Daleth::all()) {
        if (d.top && !dir_nondegenerate(p, PeelLine::TopHorizontal)) continue;
        if (d.diag && !dir_nondegenerate(p, PeelLine::LowerLeftDiagonal)) continue;
        std::optional<XiPolygon> cur = left;
        if (cur && d.top) cur = detail::peel_points(*cur, PeelLine::TopHorizontal);
        if (cur && d.diag) cur = detail::peel_points(*cur, PeelLine::LowerLeftDiagonal);
        if (d.top && d.diag && left) {
            // the two peel orders commute on the left-peeled polygon
            std::optional<XiPolygon> alt = detail::peel_points(*left, PeelLine::LowerLeftDiagonal);
            if (alt) alt = detail::peel_points(*alt, PeelLine::TopHorizontal);
            if (cur != alt) throw std::logic_error("admissible_sets: peel orders disagree");
        }
        if (cur && cur->in_xi()) out.push_back({d, *cur});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Minkowski sums and decompositions

// Componentwise sum of the 6-vectors; coincides with the geometric Minkowski
// sum because all normal directions lie in the common fan.
inline XiPolygon minkowski_sum(const XiPolygon& a, const XiPolygon& b) {
    XiPolygon::Lengths r{};
    for (int i = 0; i < 6; ++i) r[i] = a.lengths()[i] + b.lengths()[i];
    return XiPolygon::from_lengths(r);
}

namespace detail {

// All Xi members whose 6-vector fits componentwise under rem.
inline std::vector<XiPolygon> xi_elements_leq(const XiPolygon::Lengths& rem) {
    std::vector<XiPolygon> out;
    for (int w = 0; w <= rem[W]; ++w)
        for (int sw = 0; sw <= rem[SW]; ++sw)
            for (int s = 0; s <= rem[S]; ++s)
                for (int ne = 0; ne <= rem[NE]; ++ne) {
                    int n = sw + s - ne;
                    int e = w + sw - ne;
                    if (n < 0 || e < 0 || n > rem[N] || e > rem[E]) continue;
                    XiPolygon::Lengths v = {w, sw, s, e, ne, n};
                    try {
                        XiPolygon q = XiPolygon::from_lengths(v);
                        if (q.in_xi()) out.push_back(q);
                    } catch (const std::domain_error&) {
                        // non-vertical segment patterns are not Xi members
                    }
                }
    return out;
}

} // namespace detail

// Every unordered m-multiset of Xi elements (points, vertical segments,
// polygons) whose Minkowski sum is p, each multiset exactly once.  Parts are
// emitted in non-decreasing canonical order.
inline std::vector<std::vector<XiPolygon>> decompositions(const XiPolygon& p, int m) {
    if (m <= 0) throw std::domain_error("decompositions: part count must be positive");
    std::vector<std::vector<XiPolygon>> out;
    std::vector<XiPolygon> acc;
    auto rec = [&](auto&& self, const XiPolygon::Lengths& rem, int parts,
                   const std::optional<XiPolygon>& lo) -> void {
        if (parts == 0) {
            if (std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; }))
                out.push_back(acc);
            return;
        }
        for (const XiPolygon& q : detail::xi_elements_leq(rem)) {
            if (lo && q < *lo) continue;
            XiPolygon::Lengths next{};
            for (int i = 0; i < 6; ++i) next[i] = rem[i] - q.lengths()[i];
            acc.push_back(q);
            self(self, next, parts - 1, q);
            acc.pop_back();
        }
    };
    rec(rec, p.lengths(), m, std::nullopt);
    return out;
}

// ---------------------------------------------------------------------------
// Text forms

// Accepts a canonical key ("P:3,0,3,0,3,0"), a bare 6-tuple ("3,0,3,0,3,0"),
// or a vertex list ("(0,0);(3,0);(0,3)"); validates strict Xi membership.
inline XiPolygon parse_polygon(const std::string& text) {
    std::string body = text;
    std::optional<Kind> want;
    if (body.rfind("P:", 0) == 0) { want = Kind::Poly; body = body.substr(2); }
    else if (body.rfind("pt:", 0) == 0) { want = Kind::Point; body = body.substr(3); }
    else if (body.rfind("vs:", 0) == 0) { want = Kind::VSegment; body = body.substr(3); }

    XiPolygon p = XiPolygon::point();
    if (body.find('(') != std::string::npos) {
        std::vector<Pt> verts;
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ';')) {
            Pt v;
            char l = 0, c = 0, r = 0;
            std::istringstream ts(tok);
            if (!(ts >> l >> v.x >> c >> v.y >> r) || l != '(' || c != ',' || r != ')')
                throw std::domain_error("parse_polygon: bad vertex '" + tok + "'");
            verts.push_back(v);
        }
        auto enc = detail::encode_hull(detail::convex_hull(std::move(verts)));
        if (!enc) throw std::domain_error("parse_polygon: vertices not in Xi");
        p = XiPolygon::classify(enc->lengths());
    } else {
        XiPolygon::Lengths len{};
        std::istringstream is(body);
        std::string tok;
        int i = 0;
        while (std::getline(is, tok, ',')) {
            if (i >= 6) throw std::domain_error("parse_polygon: expected 6 lengths");
            len[i++] = std::stoi(tok);
        }
        if (i != 6) throw std::domain_error("parse_polygon: expected 6 lengths");
        p = XiPolygon::classify(len);
    }
    if (want && p.kind() != *want)
        throw std::domain_error("parse_polygon: kind prefix does not match shape");
    return p;
}

struct XiPolygonHash {
    std::size_t operator()(const XiPolygon& p) const {
        std::size_t h = static_cast<std::size_t>(p.kind()) + 0x51ed270b;
        for (int l : p.lengths()) {
            h ^= static_cast<std::size_t>(l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

} // namespace twi
