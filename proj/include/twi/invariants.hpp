#pragma once

#include <atomic>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "twi/arith.hpp"
#include "twi/polygon.hpp"
#include "twi/seq.hpp"

namespace twi {

enum class InvKind { Multi, Irr };

inline const char* kind_tag(InvKind k) { return k == InvKind::Multi ? "multi" : "irr"; }

// Number of point constraints: |dDelta| - |sigma| + |alpha| + |beta| + g - 1,
// with the degenerate boundary conventions of boundary_len.
inline long r_count(const XiPolygon& p, const Seq& alpha, const Seq& beta, long genus) {
    return boundary_len(p) - sigma_len(p) + alpha.norm() + beta.norm() + genus - 1;
}

// Query key (Delta, alpha, beta, g) for either invariant kind.  The key is
// balanced: J(alpha) + J(beta) equals the length of the left vertical side.
struct RelInvKey {
    XiPolygon polygon = XiPolygon::point();
    Seq alpha, beta;
    long genus = 0;
    InvKind kind = InvKind::Multi;

    RelInvKey() = default;

    RelInvKey(XiPolygon p, Seq a, Seq b, long g, InvKind k)
        : polygon(std::move(p)), alpha(std::move(a)), beta(std::move(b)), genus(g), kind(k) {
        if (!polygon.in_xi())
            throw std::domain_error("RelInvKey: polygon not in Xi");
        if (alpha.jvalue() + beta.jvalue() != sigma_len(polygon))
            throw std::domain_error("RelInvKey: unbalanced key (Ja + Jb != |sigma|)");
    }

    bool operator==(const RelInvKey&) const = default;

    std::string str() const {
        return std::string(kind_tag(kind)) + "|" + polygon.canonical_key() + "|" +
               alpha.str() + "|" + beta.str() + "|" + std::to_string(genus);
    }
};

struct RelInvKeyHash {
    std::size_t operator()(const RelInvKey& k) const {
        std::size_t h = XiPolygonHash{}(k.polygon);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(SeqHash{}(k.alpha));
        mix(SeqHash{}(k.beta) * 3);
        mix(static_cast<std::size_t>(k.genus + 1001));
        mix(static_cast<std::size_t>(k.kind));
        return h;
    }
};

// One term of the peel sum: peeled polygon with its (alpha', beta', g') and
// the binomial coefficient C(alpha, alpha') * C(beta', beta).
struct SecondSumTerm {
    Daleth daleth;
    XiPolygon peeled = XiPolygon::point();
    Seq alpha_p, beta_p;
    long genus_p = 0;
    Int coeff;
};

// One summand of a splitting: (Delta_i, alpha_i, beta_i, g_i) in the shape
// semigroup together with the new-end part beta~_i and the point count n_i.
struct SplitTerm {
    XiPolygon polygon = XiPolygon::point();
    Seq alpha, beta;
    long genus = 0;
    Seq beta_tilde;
    long n = 0;

    SplitTerm(XiPolygon p, Seq a, Seq b, long g, Seq bt)
        : polygon(std::move(p)), alpha(std::move(a)), beta(std::move(b)), genus(g),
          beta_tilde(std::move(bt)) {
        if (beta_tilde.norm() <= 0)
            throw std::domain_error("SplitTerm: beta~ must have positive norm");
        if (!(beta_tilde <= beta))
            throw std::domain_error("SplitTerm: beta~ not <= beta");
        n = boundary_len(polygon) - sigma_len(polygon) + beta.norm() + genus - 1;
        if (n < 0) throw std::domain_error("SplitTerm: negative point count");
    }

    auto tied() const { return std::tie(polygon, alpha, beta, genus, beta_tilde); }
    bool operator==(const SplitTerm& o) const { return tied() == o.tied(); }
    bool operator<(const SplitTerm& o) const { return tied() < o.tied(); }
};

// ---------------------------------------------------------------------------
// Enumeration helpers

namespace detail {

// All sequences with J-value exactly j.
inline std::vector<Seq> seqs_with_jvalue(long j) {
    std::vector<Seq> out;
    std::vector<int> acc;
    auto rec = [&](auto&& self, int i, long rem) -> void {
        if (rem == 0) {
            out.emplace_back(acc);
            return;
        }
        long w = 2 * i - 1;
        if (w > rem) return;
        for (int c = 0; c * w <= rem; ++c) {
            acc.resize(static_cast<std::size_t>(i), 0);
            acc[static_cast<std::size_t>(i) - 1] = c;
            self(self, i + 1, rem - c * w);
            acc.resize(static_cast<std::size_t>(i) - 1);
        }
    };
    rec(rec, 1, j);
    return out;
}

// All a' <= a (termwise).
inline std::vector<Seq> subsequences(const Seq& a) {
    std::vector<Seq> out{Seq()};
    for (std::size_t i = 1; i <= a.support(); ++i) {
        std::vector<Seq> next;
        for (const Seq& s : out)
            for (int c = 0; c <= a.at(i); ++c) {
                std::vector<int> t = s.terms();
                t.resize(i, 0);
                t[i - 1] = c;
                next.emplace_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

} // namespace detail

// Enumerates the peel-sum index set of a key: for each admissible set and
// peeled polygon, all (alpha', beta', g') with alpha' <= alpha, beta <= beta',
// J(alpha') + J(beta') = |sigma'| and g' = g + 1 - |beta' - beta|.  The
// (alpha', beta') = (alpha, beta) term is excluded for the multi-component
// kind only.
inline std::vector<SecondSumTerm> second_sum_terms(const RelInvKey& key) {
    if (!key.polygon.is_poly())
        throw std::domain_error("second_sum_terms: polygon required");
    std::vector<SecondSumTerm> out;
    for (const AdmissiblePeel& ap : admissible_sets(key.polygon)) {
        long s2 = sigma_len(ap.peeled);
        long jb = key.beta.jvalue();
        if (jb > s2) continue;
        for (long jx = 0; jx <= s2 - jb; ++jx) {
            for (const Seq& extra : detail::seqs_with_jvalue(jx)) {
                Seq b2 = key.beta + extra;
                long ja2 = s2 - b2.jvalue();
                for (const Seq& a2 : detail::subsequences(key.alpha)) {
                    if (a2.jvalue() != ja2) continue;
                    if (key.kind == InvKind::Multi && a2 == key.alpha && b2 == key.beta)
                        continue;
                    long g2 = key.genus + 1 - extra.norm();
                    out.push_back({ap.daleth, ap.peeled, a2, b2, g2,
                                   binom_seq(key.alpha, a2) * binom_seq(b2, key.beta)});
                }
            }
        }
    }
    return out;
}

// Enumerates every unordered splitting of the target (Delta', alpha', beta',
// g') into parts of the shape semigroup, with the new-end distribution
// beta' = beta_floor + sum beta~_i, each exactly once (parts emitted in
// non-decreasing order).  Parts whose invariant is structurally zero are
// skipped: points never satisfy |beta~| > 0, and segment parts must be the
// unit segment with (alpha, beta, g) = ((0), (1), 0).
inline std::vector<std::vector<SplitTerm>> irr_splittings(const XiPolygon& target,
                                                          const Seq& alpha_p,
                                                          const Seq& beta_p, long genus_p,
                                                          const Seq& beta_floor) {
    std::vector<std::vector<SplitTerm>> out;
    if (!(beta_floor <= beta_p))
        throw std::domain_error("irr_splittings: floor not <= beta'");
    Seq bdiff = beta_p - beta_floor;
    long max_parts = bdiff.norm();

    // the empty splitting realizes exactly the neutral tuple (point, 0, 0, 1)
    if (target.is_point() && alpha_p.is_zero() && beta_p.is_zero() && genus_p == 1)
        out.push_back({});

    const Seq unit_end = Seq::ones(1);
    for (long m = 1; m <= max_parts; ++m) {
        long total_genus = genus_p + m - 1;
        if (total_genus < 0) continue;
        std::vector<SplitTerm> acc;
        auto rec = [&](auto&& self, const XiPolygon::Lengths& rem_p, const Seq& rem_a,
                       const Seq& rem_b, long rem_g, const Seq& rem_bt, long parts,
                       const std::optional<SplitTerm>& lo) -> void {
            if (parts == 0) {
                bool closed = std::all_of(rem_p.begin(), rem_p.end(),
                                          [](int x) { return x == 0; }) &&
                              rem_a.is_zero() && rem_b.is_zero() && rem_g == 0 &&
                              rem_bt.is_zero();
                if (closed) out.push_back(acc);
                return;
            }
            for (const XiPolygon& q : detail::xi_elements_leq(rem_p)) {
                if (q.is_point()) continue;
                if (q.is_vsegment() && sigma_len(q) != 1) continue;
                long sq = sigma_len(q);
                for (const Seq& ai : detail::subsequences(rem_a)) {
                    long jbi = sq - ai.jvalue();
                    if (jbi < 0) continue;
                    for (const Seq& bi : detail::seqs_with_jvalue(jbi)) {
                        if (!(bi <= rem_b)) continue;
                        for (long gi = 0; gi <= rem_g; ++gi) {
                            if (q.is_vsegment() && (gi != 0 || ai + bi != unit_end))
                                continue;
                            for (const Seq& bt : detail::subsequences(bi)) {
                                if (bt.norm() == 0 || !(bt <= rem_bt)) continue;
                                SplitTerm part(q, ai, bi, gi, bt);
                                if (lo && part < *lo) continue;
                                XiPolygon::Lengths next{};
                                for (int i = 0; i < 6; ++i)
                                    next[i] = rem_p[i] - q.lengths()[i];
                                acc.push_back(part);
                                self(self, next, rem_a - ai, rem_b - bi, rem_g - gi,
                                     rem_bt - bt, parts - 1, part);
                                acc.pop_back();
                            }
                        }
                    }
                }
            }
        };
        rec(rec, target.lengths(), alpha_p, beta_p, total_genus, bdiff, m, std::nullopt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Memoization

// Deterministic memo table for both invariant kinds.  In shared mode lookups
// take a reader lock and inserts a writer lock; duplicated concurrent
// derivations of the same key are harmless (identical values, last write
// wins).
class MemoCache {
public:
    enum class Mode { Exclusive, Shared };

    explicit MemoCache(Mode mode = Mode::Exclusive) : mode_(mode) {}

    std::optional<Int> get(const RelInvKey& key) const {
        if (mode_ == Mode::Shared) {
            std::shared_lock lk(mx_);
            return lookup(key);
        }
        return lookup(key);
    }

    void put(const RelInvKey& key, const Int& value) {
        if (mode_ == Mode::Shared) {
            std::unique_lock lk(mx_);
            entries_[key] = value;
            return;
        }
        entries_[key] = value;
    }

    long hits() const { return hits_.load(); }
    long misses() const { return misses_.load(); }
    std::size_t size() const { return entries_.size(); }
    Mode mode() const { return mode_; }

    // Snapshot sorted by key text, for deterministic persistence.
    std::vector<std::pair<std::string, Int>> sorted_entries() const {
        std::map<std::string, Int> sorted;
        auto fill = [&] {
            for (const auto& [k, v] : entries_) sorted.emplace(k.str(), v);
        };
        if (mode_ == Mode::Shared) {
            std::shared_lock lk(mx_);
            fill();
        } else {
            fill();
        }
        return {sorted.begin(), sorted.end()};
    }

    void insert_raw(const RelInvKey& key, const Int& value) { entries_[key] = value; }

private:
    std::optional<Int> lookup(const RelInvKey& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }

    Mode mode_;
    mutable std::shared_mutex mx_;
    std::unordered_map<RelInvKey, Int, RelInvKeyHash> entries_;
    mutable std::atomic<long> hits_{0};
    mutable std::atomic<long> misses_{0};
};

// ---------------------------------------------------------------------------
// The recursion engine

struct AuditCounters {
    std::atomic<long> balance_checks{0};
    std::atomic<long> nsum_checks{0};
};

class Engine {
public:
    struct Options {
        MemoCache::Mode cache_mode = MemoCache::Mode::Exclusive;
        // cross-check that the multi-component invariant vanishes above the
        // interior-point genus bound
        bool genus_bound_debug = false;
    };

    Engine() : Engine(Options{}) {}
    explicit Engine(Options opt) : opt_(opt), cache_(opt.cache_mode) {}

    MemoCache& cache() { return cache_; }
    const MemoCache& cache() const { return cache_; }
    const AuditCounters& audits() const { return audits_; }

    Int w_multi(const XiPolygon& p, const Seq& a, const Seq& b, long g) {
        return eval(RelInvKey(p, a, b, g, InvKind::Multi));
    }

    Int w_irr(const XiPolygon& p, const Seq& a, const Seq& b, long g) {
        return eval(RelInvKey(p, a, b, g, InvKind::Irr));
    }

    Int eval(const RelInvKey& key) {
        check_balance(key);
        return key.kind == InvKind::Multi ? eval_multi(key) : eval_irr(key);
    }

private:
    void check_balance(const RelInvKey& key) {
        // the key constructor already rejects unbalanced tuples; recount here
        // so every recursive call site is audited
        if (key.alpha.jvalue() + key.beta.jvalue() != sigma_len(key.polygon))
            throw std::logic_error("balance audit failed: Ja + Jb != |sigma|");
        ++audits_.balance_checks;
    }

    Int eval_multi(const RelInvKey& key) {
        const XiPolygon& p = key.polygon;
        if (p.is_point()) {
            // the empty curve carries the unit count in genus one, the
            // neutral genus of the splitting semigroup
            return (key.genus == 1 && key.alpha.is_zero() && key.beta.is_zero()) ? 1 : 0;
        }
        if (p.is_vsegment()) {
            int s = sigma_len(p);
            return (key.alpha + key.beta == Seq::ones(s) && key.genus == 1 - s) ? 1 : 0;
        }
        if (auto v = cache_.get(key)) return *v;
        Int total = 0;
        if (r_count(p, key.alpha, key.beta, key.genus) > key.alpha.norm()) {
            for (std::size_t k = 1; k <= key.beta.support(); ++k) {
                if (key.beta.at(k) == 0) continue;
                Seq t = Seq::theta(static_cast<int>(k));
                total += eval(RelInvKey(p, key.alpha + t, key.beta - t, key.genus,
                                        InvKind::Multi));
            }
            for (const SecondSumTerm& st : second_sum_terms(key)) {
                if (st.coeff == 0) continue;
                total += st.coeff * eval(RelInvKey(st.peeled, st.alpha_p, st.beta_p,
                                                   st.genus_p, InvKind::Multi));
            }
        }
        if (opt_.genus_bound_debug && key.genus > interior_count(p) && total != 0)
            throw std::logic_error("genus bound audit failed: nonzero above interior count");
        cache_.put(key, total);
        return total;
    }

    Int eval_irr(const RelInvKey& key) {
        if (key.genus < 0) return 0;
        const XiPolygon& p = key.polygon;
        if (!p.is_poly()) {
            int s = sigma_len(p);
            return (key.genus == 0 && key.alpha + key.beta == Seq::ones(s) && s <= 1) ? 1 : 0;
        }
        if (auto v = cache_.get(key)) return *v;
        Int total = 0;
        for (std::size_t k = 1; k <= key.beta.support(); ++k) {
            if (key.beta.at(k) == 0) continue;
            Seq t = Seq::theta(static_cast<int>(k));
            total += eval(RelInvKey(p, key.alpha + t, key.beta - t, key.genus, InvKind::Irr));
        }
        const long n = boundary_len(p) - sigma_len(p) + key.beta.norm() + key.genus - 2;
        const Int n_fact = factorial(n);
        for (const SecondSumTerm& st : second_sum_terms(key)) {
            for (const auto& parts : irr_splittings(st.peeled, st.alpha_p, st.beta_p,
                                                    st.genus_p, key.beta)) {
                total += splitting_value(key, parts, n, n_fact);
            }
        }
        cache_.put(key, total);
        return total;
    }

    // Value of one unordered splitting: the alpha multinomial, the
    // distribution of the n points among the parts, the new-end binomials and
    // the parts' invariants, divided by the automorphism count of repeated
    // identical parts (the point distribution enumerates ordered assignments).
    Int splitting_value(const RelInvKey& key, const std::vector<SplitTerm>& parts,
                        long n, const Int& n_fact) {
        long n_sum = 0;
        for (const SplitTerm& part : parts) n_sum += part.n;
        if (n_sum != n)
            throw std::logic_error("point-count audit failed: sum n_i != n");
        ++audits_.nsum_checks;

        std::vector<Seq> alpha_parts;
        alpha_parts.reserve(parts.size());
        for (const SplitTerm& part : parts) alpha_parts.push_back(part.alpha);

        Int value = multinomial_seq(key.alpha, alpha_parts) * n_fact;
        for (const SplitTerm& part : parts) value /= factorial(part.n);

        Int aut = 1;
        for (std::size_t i = 0; i < parts.size();) {
            std::size_t j = i;
            while (j < parts.size() && parts[j] == parts[i]) ++j;
            aut *= factorial(static_cast<long>(j - i));
            i = j;
        }

        for (const SplitTerm& part : parts) {
            if (value == 0) break;
            value *= binom_seq(part.beta, part.beta_tilde);
            value *= eval(RelInvKey(part.polygon, part.alpha, part.beta, part.genus,
                                    InvKind::Irr));
        }
        Int q, r;
        boost::multiprecision::divide_qr(value, aut, q, r);
        if (r != 0)
            throw std::logic_error("splitting value not divisible by automorphism count");
        return q;
    }

    Options opt_;
    MemoCache cache_;
    AuditCounters audits_;
};

// ---------------------------------------------------------------------------
// Cache persistence: line-delimited records, one JSON object per line

inline constexpr const char* kCacheHeader = "{\"format\":\"twi-cache\",\"version\":1}";

inline void save_cache(const MemoCache& cache, std::ostream& os) {
    os << kCacheHeader << "\n";
    for (const auto& [k, v] : cache.sorted_entries())
        os << "{\"key\":\"" << k << "\",\"value\":\"" << v << "\"}\n";
}

// Parses one cache key back into a RelInvKey.
inline RelInvKey parse_cache_key(const std::string& text) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : text) {
        if (c == '|') {
            f.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    f.push_back(cur);
    if (f.size() != 5) throw std::domain_error("cache key: expected 5 fields");
    InvKind kind;
    if (f[0] == "multi") kind = InvKind::Multi;
    else if (f[0] == "irr") kind = InvKind::Irr;
    else throw std::domain_error("cache key: unknown kind '" + f[0] + "'");
    return RelInvKey(parse_polygon(f[1]), Seq::parse(f[2]), Seq::parse(f[3]),
                     std::stol(f[4]), kind);
}

// Loads a cache file produced by save_cache.  Rejects files with a missing or
// foreign header, an unsupported version, or any malformed record.
inline void load_cache(MemoCache& cache, std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.empty())
        throw std::domain_error("cache load: missing header");
    nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.is_object() ||
        header.value("format", "") != "twi-cache")
        throw std::domain_error("cache load: missing header");
    if (header.value("version", -1) != 1)
        throw std::domain_error("cache load: unsupported cache version");
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("key") ||
            !rec.contains("value") || !rec["key"].is_string() || !rec["value"].is_string())
            throw std::domain_error("cache load: malformed record at line " +
                                    std::to_string(lineno));
        RelInvKey key = parse_cache_key(rec["key"].get<std::string>());
        Int value(rec["value"].get<std::string>());
        cache.insert_raw(key, value);
    }
}

} // namespace twi
