#pragma once

// Exact arithmetic in the multivariate integer Laurent-polynomial ring
// Z[s1^±1, ..., sn^±1].  All values are immutable once built; every
// operation is a pure function, so values can be shared across threads.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace metabelian {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

namespace detail {
inline void check_same_rank(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": rank mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}
}  // namespace detail

// A unit monomial s1^{j1} ... sn^{jn}; exponents may be negative.
class Monomial {
  public:
    explicit Monomial(int rank) : exps_(static_cast<size_t>(rank), 0) {
        if (rank < 1) throw std::invalid_argument("Monomial: rank must be >= 1");
    }
    explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
        if (exps_.empty()) throw std::invalid_argument("Monomial: rank must be >= 1");
    }

    static Monomial variable(int rank, int i) {
        Monomial m(rank);
        m.exps_.at(index_of(m, i)) = 1;
        return m;
    }

    int rank() const { return static_cast<int>(exps_.size()); }

    // 1-based variable index
    int exponent(int i) const { return exps_.at(index_of(*this, i)); }

    const std::vector<int>& exponents() const { return exps_; }

    bool is_identity() const {
        for (int e : exps_)
            if (e != 0) return false;
        return true;
    }

    int total_degree() const {
        int d = 0;
        for (int e : exps_) d += e;
        return d;
    }

    Monomial operator*(const Monomial& o) const {
        detail::check_same_rank(rank(), o.rank(), "Monomial::operator*");
        Monomial r(*this);
        for (size_t k = 0; k < exps_.size(); ++k) r.exps_[k] += o.exps_[k];
        return r;
    }

    Monomial inverse() const {
        Monomial r(*this);
        for (int& e : r.exps_) e = -e;
        return r;
    }

    Monomial pow(long long k) const {
        Monomial r(*this);
        for (size_t j = 0; j < exps_.size(); ++j) {
            long long e = static_cast<long long>(exps_[j]) * k;
            r.exps_[j] = static_cast<int>(e);
        }
        return r;
    }

    bool operator==(const Monomial&) const = default;
    auto operator<=>(const Monomial&) const = default;  // lexicographic

  private:
    static size_t index_of(const Monomial& m, int i) {
        if (i < 1 || i > m.rank())
            throw std::out_of_range("Monomial: variable index " + std::to_string(i) +
                                    " out of range for rank " + std::to_string(m.rank()));
        return static_cast<size_t>(i - 1);
    }

    std::vector<int> exps_;
};

// Canonical form: term map never stores a zero coefficient; the map key
// order (lexicographic exponent vectors) makes iteration deterministic.
class LaurentPoly {
  public:
    explicit LaurentPoly(int rank) : rank_(rank) {
        if (rank < 1) throw std::invalid_argument("LaurentPoly: rank must be >= 1");
    }

    static LaurentPoly zero(int rank) { return LaurentPoly(rank); }

    static LaurentPoly constant(int rank, Int c) {
        LaurentPoly p(rank);
        if (c != 0) p.terms_.emplace(Monomial(rank), std::move(c));
        return p;
    }

    static LaurentPoly one(int rank) { return constant(rank, 1); }

    static LaurentPoly variable(int rank, int i) {
        return from_monomial(Monomial::variable(rank, i));
    }

    static LaurentPoly from_monomial(const Monomial& m, Int coeff = 1) {
        LaurentPoly p(m.rank());
        if (coeff != 0) p.terms_.emplace(m, std::move(coeff));
        return p;
    }

    int rank() const { return rank_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, Int>& terms() const { return terms_; }

    Int coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Int(0) : it->second;
    }

    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.is_identity() &&
               terms_.begin()->second == 1;
    }

    // True when the single term is an invertible monomial with coefficient ±1.
    bool is_unit_monomial() const {
        return terms_.size() == 1 &&
               (terms_.begin()->second == 1 || terms_.begin()->second == -1);
    }

    LaurentPoly operator+(const LaurentPoly& o) const {
        detail::check_same_rank(rank_, o.rank_, "LaurentPoly::operator+");
        LaurentPoly r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    LaurentPoly operator-() const {
        LaurentPoly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    LaurentPoly operator-(const LaurentPoly& o) const { return *this + (-o); }

    LaurentPoly operator*(const LaurentPoly& o) const {
        detail::check_same_rank(rank_, o.rank_, "LaurentPoly::operator*");
        LaurentPoly r(rank_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
        return r;
    }

    LaurentPoly operator*(const Int& c) const {
        LaurentPoly r(rank_);
        if (c == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, cc] : r.terms_) cc *= c;
        return r;
    }

    LaurentPoly operator*(const Monomial& m) const {
        detail::check_same_rank(rank_, m.rank(), "LaurentPoly::operator*");
        LaurentPoly r(rank_);
        for (const auto& [mm, c] : terms_) r.terms_.emplace(mm * m, c);
        return r;
    }

    bool operator==(const LaurentPoly&) const = default;

    // Componentwise-minimum exponent vector over all terms; factoring it out
    // leaves an ordinary polynomial whose monomial content is trivial.
    Monomial content_monomial() const {
        if (is_zero()) return Monomial(rank_);
        std::vector<int> mins = terms_.begin()->first.exponents();
        for (const auto& [m, c] : terms_)
            for (size_t k = 0; k < mins.size(); ++k)
                mins[k] = std::min(mins[k], m.exponents()[k]);
        return Monomial(std::move(mins));
    }

    int degree_in(int var) const {  // -1 on the zero polynomial
        if (is_zero()) return -1;
        int d = terms_.begin()->first.exponent(var);
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
        return d;
    }

    int min_degree_in(int var) const {
        if (is_zero()) return 0;
        int d = terms_.begin()->first.exponent(var);
        for (const auto& [m, c] : terms_) d = std::min(d, m.exponent(var));
        return d;
    }

    // All terms use only variables from `vars` (1-based indices).
    bool uses_only(const std::set<int>& vars) const {
        for (const auto& [m, c] : terms_)
            for (int i = 1; i <= rank_; ++i)
                if (m.exponent(i) != 0 && !vars.count(i)) return false;
        return true;
    }

    LaurentPoly truncate_total_degree(int bound) const {  // keep deg < bound
        LaurentPoly r(rank_);
        for (const auto& [m, c] : terms_)
            if (m.total_degree() < bound) r.terms_.emplace(m, c);
        return r;
    }

    LaurentPoly homogeneous_part(int degree) const {
        LaurentPoly r(rank_);
        for (const auto& [m, c] : terms_)
            if (m.total_degree() == degree) r.terms_.emplace(m, c);
        return r;
    }

    std::string str() const;

  private:
    void add_term(const Monomial& m, const Int& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    int rank_;
    std::map<Monomial, Int> terms_;

    friend class RationalLaurentPoly;
};

// Scratch space for division: same shape as LaurentPoly but with exact
// rational coefficients.
class RationalLaurentPoly {
  public:
    explicit RationalLaurentPoly(int rank) : rank_(rank) {}
    explicit RationalLaurentPoly(const LaurentPoly& p) : rank_(p.rank()) {
        for (const auto& [m, c] : p.terms()) terms_.emplace(m, Rat(c));
    }

    int rank() const { return rank_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat>& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    RationalLaurentPoly operator+(const RationalLaurentPoly& o) const {
        detail::check_same_rank(rank_, o.rank_, "RationalLaurentPoly::operator+");
        RationalLaurentPoly r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    RationalLaurentPoly operator-(const RationalLaurentPoly& o) const {
        detail::check_same_rank(rank_, o.rank_, "RationalLaurentPoly::operator-");
        RationalLaurentPoly r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }

    RationalLaurentPoly operator*(const RationalLaurentPoly& o) const {
        detail::check_same_rank(rank_, o.rank_, "RationalLaurentPoly::operator*");
        RationalLaurentPoly r(rank_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
        return r;
    }

    int degree_in(int var) const {
        if (is_zero()) return -1;
        int d = terms_.begin()->first.exponent(var);
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
        return d;
    }

    bool operator==(const RationalLaurentPoly&) const = default;

    // Lossless only when every coefficient is an integer.
    std::optional<LaurentPoly> to_integer() const {
        LaurentPoly p(rank_);
        for (const auto& [m, c] : terms_) {
            if (boost::multiprecision::denominator(c) != 1) return std::nullopt;
            p.terms_.emplace(m, Int(boost::multiprecision::numerator(c)));
        }
        return p;
    }

  private:
    int rank_;
    std::map<Monomial, Rat> terms_;
};

// 1 + c + ... + c^{m-1}
inline LaurentPoly geometric_sum(const Monomial& c, long long m) {
    if (m < 1) throw std::invalid_argument("geometric_sum: m must be >= 1");
    LaurentPoly r(c.rank());
    Monomial p(c.rank());
    for (long long k = 0; k < m; ++k) {
        r = r + LaurentPoly::from_monomial(p);
        p = p * c;
    }
    return r;
}

// Exact division in the Laurent ring.  The divisor must become, after its
// unit-monomial content is factored out, a polynomial of degree >= 1 in one
// distinguished variable whose leading coefficient there is an integer
// constant.  Returns q with p = q*d, or nullopt when no such q exists in R.
inline std::optional<LaurentPoly> divide_exact(const LaurentPoly& p, const LaurentPoly& d) {
    detail::check_same_rank(p.rank(), d.rank(), "divide_exact");
    if (d.is_zero()) throw std::invalid_argument("divide_exact: division by zero");
    const int rank = p.rank();
    if (p.is_zero()) return LaurentPoly::zero(rank);

    const Monomial cp = p.content_monomial();
    const Monomial cd = d.content_monomial();
    const LaurentPoly pp = p * cp.inverse();
    const LaurentPoly dd = d * cd.inverse();

    // Pick the distinguished variable: degree >= 1 and constant leading
    // coefficient with respect to it.
    int var = 0;
    int ddeg = 0;
    Int lead = 0;
    for (int v = 1; v <= rank && var == 0; ++v) {
        const int deg = dd.degree_in(v);
        if (deg < 1) continue;
        const Monomial* lead_mono = nullptr;
        int lead_terms = 0;
        for (const auto& [m, c] : dd.terms()) {
            if (m.exponent(v) == deg) {
                ++lead_terms;
                lead_mono = &m;
                lead = c;
            }
        }
        if (lead_terms != 1) continue;
        bool pure = true;
        for (int j = 1; j <= rank; ++j)
            if (j != v && lead_mono->exponent(j) != 0) pure = false;
        if (!pure) continue;
        var = v;
        ddeg = deg;
    }
    if (var == 0)
        throw std::invalid_argument(
            "divide_exact: divisor is not univariate-led with an integer leading coefficient");

    RationalLaurentPoly rem(pp);
    RationalLaurentPoly quot(rank);
    const RationalLaurentPoly divisor(dd);
    const Rat lead_inv = Rat(1) / Rat(lead);

    while (!rem.is_zero()) {
        const int deg = rem.degree_in(var);
        if (deg < ddeg) break;
        RationalLaurentPoly step(rank);
        for (const auto& [m, c] : rem.terms()) {
            if (m.exponent(var) != deg) continue;
            std::vector<int> exps = m.exponents();
            exps[static_cast<size_t>(var - 1)] = deg - ddeg;
            step.add_term(Monomial(std::move(exps)), c * lead_inv);
        }
        quot = quot + step;
        rem = rem - step * divisor;
    }

    if (!rem.is_zero()) return std::nullopt;
    auto q = quot.to_integer();
    if (!q) return std::nullopt;
    return *q * (cp * cd.inverse());
}

// ---- canonical text form -------------------------------------------------
//
// Display order: ascending exponent of s1, then descending exponents of the
// remaining variables.  This reproduces forms like "2*s2 - 1", "2 - s2^-1",
// "s2^-1 - s1*s2^-1".

namespace detail {
inline bool display_less(const Monomial& a, const Monomial& b) {
    if (a.exponent(1) != b.exponent(1)) return a.exponent(1) < b.exponent(1);
    for (int i = 2; i <= a.rank(); ++i)
        if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i);
    return false;
}

inline std::string monomial_str(const Monomial& m) {
    std::string out;
    for (int i = 1; i <= m.rank(); ++i) {
        const int e = m.exponent(i);
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += "s" + std::to_string(i);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}
}  // namespace detail

inline std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, Int>*> ordered;
    ordered.reserve(terms_.size());
    for (const auto& t : terms_) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](auto* a, auto* b) { return detail::display_less(a->first, b->first); });

    std::string out;
    bool first = true;
    for (const auto* t : ordered) {
        const Monomial& m = t->first;
        const Int& c = t->second;
        const bool neg = c < 0;
        Int a = neg ? Int(-c) : c;
        std::string body;
        const std::string mono = detail::monomial_str(m);
        if (mono.empty()) {
            body = a.str();
        } else if (a == 1) {
            body = mono;
        } else {
            body = a.str() + "*" + mono;
        }
        if (first) {
            out += (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

// ---- parser for the canonical text form (test fixtures, CLI) --------------
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := ['-'] ( integer | variable ['^' integer] | '(' expr ')' )
//
// Variables are s1..sn; 'a' and 'b' are accepted for s1 and s2 in rank-2
// contexts.

namespace detail {

class PolyParser {
  public:
    PolyParser(int rank, std::string_view text) : rank_(rank), text_(text) {}

    LaurentPoly parse() {
        LaurentPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    LaurentPoly expr() {
        LaurentPoly p = term();
        for (;;) {
            skip_ws();
            if (match('+')) {
                p = p + term();
            } else if (match('-')) {
                p = p - term();
            } else {
                return p;
            }
        }
    }

    LaurentPoly term() {
        LaurentPoly p = factor();
        for (;;) {
            skip_ws();
            if (match('*'))
                p = p * factor();
            else
                return p;
        }
    }

    LaurentPoly factor() {
        skip_ws();
        if (match('-')) return -factor();
        if (match('(')) {
            LaurentPoly p = expr();
            skip_ws();
            if (!match(')')) fail("expected ')'");
            return p;
        }
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
            return LaurentPoly::constant(rank_, integer());
        }
        const int v = variable();
        skip_ws();
        int e = 1;
        if (match('^')) e = static_cast<int>(signed_integer());
        return LaurentPoly::from_monomial(Monomial::variable(rank_, v).pow(e));
    }

    int variable() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a variable");
        const char c = text_[pos_];
        if (c == 'a' && rank_ == 2) {
            ++pos_;
            return 1;
        }
        if (c == 'b' && rank_ == 2) {
            ++pos_;
            return 2;
        }
        if (c != 's') fail("expected a variable");
        ++pos_;
        const long long i = static_cast<long long>(integer());
        if (i < 1 || i > rank_) fail("variable index out of range");
        return static_cast<int>(i);
    }

    Int integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return Int(std::string(text_.substr(start, pos_ - start)));
    }

    long long signed_integer() {
        skip_ws();
        bool neg = match('-');
        Int v = integer();
        long long out = v.convert_to<long long>();
        return neg ? -out : out;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool match(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) +
                                    ": " + why);
    }

    int rank_;
    std::string_view text_;
    size_t pos_ = 0;
};

}  // namespace detail

inline LaurentPoly parse_poly(int rank, std::string_view text) {
    return detail::PolyParser(rank, text).parse();
}

// Fixes the ambient rank; every value built through it carries that rank and
// mixing ranks across operations throws.
struct RingContext {
    int rank;

    explicit RingContext(int n) : rank(n) {
        if (n < 1) throw std::invalid_argument("RingContext: rank must be >= 1");
    }

    Monomial one_monomial() const { return Monomial(rank); }
    Monomial s(int i) const { return Monomial::variable(rank, i); }
    LaurentPoly zero() const { return LaurentPoly::zero(rank); }
    LaurentPoly one() const { return LaurentPoly::one(rank); }
    LaurentPoly constant(Int c) const { return LaurentPoly::constant(rank, std::move(c)); }
    LaurentPoly var(int i) const { return LaurentPoly::variable(rank, i); }
    LaurentPoly poly(std::string_view text) const { return parse_poly(rank, text); }

    // 2*s2 - 1, the divisor driving the membership test
    LaurentPoly two_s2_minus_one() const {
        return var(2) * Int(2) - one();
    }
};

}  // namespace metabelian
