#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twi/arith.hpp"

namespace twi {

// Element of the semigroup of finitely supported sequences of nonnegative
// integers.  Index semantics are 1-based: the i-th term weights 2i-1 in the
// J-value.  Canonical form strips trailing zeros; the zero sequence is the
// empty vector and prints as "(0)".
class Seq {
public:
    Seq() = default;

    explicit Seq(std::vector<int> terms) : terms_(std::move(terms)) {
        for (int t : terms_)
            if (t < 0) throw std::domain_error("Seq: negative term");
        canonicalize();
    }

    Seq(std::initializer_list<int> terms) : Seq(std::vector<int>(terms)) {}

    // The sequence whose k-th term is 1 and all others 0 (k >= 1).
    static Seq theta(int k) {
        if (k < 1) throw std::domain_error("Seq::theta: index must be >= 1");
        std::vector<int> t(static_cast<std::size_t>(k), 0);
        t.back() = 1;
        return Seq(std::move(t));
    }

    // The sequence (m): m ends of weight one.
    static Seq ones(int m) {
        if (m < 0) throw std::domain_error("Seq::ones: negative count");
        return m == 0 ? Seq() : Seq({m});
    }

    // 1-based access; indices past the stored support read as 0.
    int at(std::size_t i) const {
        if (i == 0) throw std::out_of_range("Seq::at: 1-based index");
        return i <= terms_.size() ? terms_[i - 1] : 0;
    }

    std::size_t support() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<int>& terms() const { return terms_; }

    long norm() const {
        long s = 0;
        for (int t : terms_) s += t;
        return s;
    }

    // J-value: sum over i of (2i-1) * term_i.
    long jvalue() const {
        long s = 0;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            s += static_cast<long>(2 * i + 1) * terms_[i];
        return s;
    }

    friend Seq operator+(const Seq& a, const Seq& b) {
        std::vector<int> r(std::max(a.terms_.size(), b.terms_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = a.at(i + 1) + b.at(i + 1);
        return Seq(std::move(r));
    }

    friend Seq operator-(const Seq& a, const Seq& b) {
        if (!(b <= a)) throw std::domain_error("Seq: not comparable");
        std::vector<int> r(a.terms_.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = a.terms_[i] - b.at(i + 1);
        return Seq(std::move(r));
    }

    // Termwise partial order.
    friend bool operator<=(const Seq& b, const Seq& a) {
        for (std::size_t i = 1; i <= std::max(a.support(), b.support()); ++i)
            if (b.at(i) > a.at(i)) return false;
        return true;
    }

    bool operator==(const Seq&) const = default;
    auto operator<=>(const Seq&) const = default;

    // Text form: comma-separated terms, "0" for the zero sequence.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) os << ',';
            os << terms_[i];
        }
        return os.str();
    }

    static Seq parse(const std::string& text) {
        if (text.empty()) throw std::domain_error("Seq::parse: empty string");
        std::vector<int> t;
        std::istringstream is(text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size() || v < 0)
                throw std::domain_error("Seq::parse: bad term '" + tok + "'");
            t.push_back(v);
        }
        return Seq(std::move(t));
    }

private:
    void canonicalize() {
        while (!terms_.empty() && terms_.back() == 0) terms_.pop_back();
    }

    std::vector<int> terms_;
};

// Product of termwise binomial coefficients C(upper_i, lower_i).
inline Int binom_seq(const Seq& upper, const Seq& lower) {
    if (!(lower <= upper)) throw std::domain_error("binom_seq: lower not <= upper");
    Int r = 1;
    for (std::size_t i = 1; i <= upper.support(); ++i)
        r *= binomial(upper.at(i), lower.at(i));
    return r;
}

// Multi-index multinomial: prod_i upper_i! / (prod_k parts[k]_i! * (upper_i - sum_k parts[k]_i)!).
inline Int multinomial_seq(const Seq& upper, const std::vector<Seq>& parts) {
    Seq total;
    for (const Seq& p : parts) total = total + p;
    if (!(total <= upper)) throw std::domain_error("multinomial_seq: parts exceed upper");
    Int r = 1;
    for (std::size_t i = 1; i <= upper.support(); ++i) {
        Int num = factorial(upper.at(i));
        Int den = factorial(upper.at(i) - total.at(i));
        for (const Seq& p : parts) den *= factorial(p.at(i));
        r *= num / den;
    }
    return r;
}

// prod_i a_i!  (the alpha! of the generating-series weights)
inline Int factorial_seq(const Seq& a) {
    Int r = 1;
    for (int t : a.terms()) r *= factorial(t);
    return r;
}

struct SeqHash {
    std::size_t operator()(const Seq& s) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (int t : s.terms()) {
            h ^= static_cast<std::size_t>(t) + 0x9e3779b97f4a7c15ULL;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

} // namespace twi
