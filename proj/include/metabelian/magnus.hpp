#pragma once

// The Magnus matrix representation of the free metabelian group of rank n.
// A group element is represented by the pair (c, gamma): c is the unit
// monomial in the top-left corner, gamma the coefficient vector of the
// top-right module entry sum_i gamma_i * t_i of the 2x2 matrix
// [[c, sum gamma_i t_i], [0, 1]].

#include <string>
#include <vector>

#include "laurent.hpp"

namespace metabelian {

class MagnusMatrix {
  public:
    explicit MagnusMatrix(int rank)
        : c_(rank), gamma_(static_cast<size_t>(rank), LaurentPoly::zero(rank)) {}

    MagnusMatrix(Monomial c, std::vector<LaurentPoly> gamma)
        : c_(std::move(c)), gamma_(std::move(gamma)) {
        if (static_cast<int>(gamma_.size()) != c_.rank())
            throw std::invalid_argument("MagnusMatrix: gamma length must equal rank");
        for (const auto& g : gamma_)
            detail::check_same_rank(g.rank(), c_.rank(), "MagnusMatrix");
    }

    static MagnusMatrix identity(int rank) { return MagnusMatrix(rank); }

    // mu(x_i) = [[s_i, t_i], [0, 1]]
    static MagnusMatrix generator(int rank, int i) {
        if (i < 1 || i > rank)
            throw std::out_of_range("MagnusMatrix::generator: index " + std::to_string(i) +
                                    " out of range for rank " + std::to_string(rank));
        MagnusMatrix m(rank);
        m.c_ = Monomial::variable(rank, i);
        m.gamma_[static_cast<size_t>(i - 1)] = LaurentPoly::one(rank);
        return m;
    }

    int rank() const { return c_.rank(); }
    const Monomial& c() const { return c_; }
    const std::vector<LaurentPoly>& gamma() const { return gamma_; }
    const LaurentPoly& gamma(int i) const { return gamma_.at(static_cast<size_t>(i - 1)); }

    bool is_identity() const {
        if (!c_.is_identity()) return false;
        for (const auto& g : gamma_)
            if (!g.is_zero()) return false;
        return true;
    }

    // (c1, g1) * (c2, g2) = (c1 c2, c1·g2 + g1)
    MagnusMatrix operator*(const MagnusMatrix& o) const {
        detail::check_same_rank(rank(), o.rank(), "MagnusMatrix::operator*");
        std::vector<LaurentPoly> g;
        g.reserve(gamma_.size());
        for (size_t k = 0; k < gamma_.size(); ++k) g.push_back(o.gamma_[k] * c_ + gamma_[k]);
        return MagnusMatrix(c_ * o.c_, std::move(g));
    }

    MagnusMatrix inverse() const {
        const Monomial ci = c_.inverse();
        std::vector<LaurentPoly> g;
        g.reserve(gamma_.size());
        for (const auto& gk : gamma_) g.push_back(-(gk * ci));
        return MagnusMatrix(ci, std::move(g));
    }

    bool operator==(const MagnusMatrix&) const = default;

    std::string str() const {
        std::string out = "c=[";
        for (int i = 1; i <= rank(); ++i) {
            if (i > 1) out += ",";
            out += std::to_string(c_.exponent(i));
        }
        out += "], gamma=[";
        for (size_t k = 0; k < gamma_.size(); ++k) {
            if (k > 0) out += ", ";
            out += "\"" + gamma_[k].str() + "\"";
        }
        out += "]";
        return out;
    }

    // {"c":[j1,...,jn],"gamma":["...","..."]} — poly text never needs JSON
    // escaping, so the record is emitted directly.
    std::string json_str() const {
        std::string out = "{\"c\":[";
        for (int i = 1; i <= rank(); ++i) {
            if (i > 1) out += ",";
            out += std::to_string(c_.exponent(i));
        }
        out += "],\"gamma\":[";
        for (size_t k = 0; k < gamma_.size(); ++k) {
            if (k > 0) out += ",";
            out += "\"" + gamma_[k].str() + "\"";
        }
        out += "]}";
        return out;
    }

  private:
    Monomial c_;
    std::vector<LaurentPoly> gamma_;
};

// Closed-form integer power (for m >= 1):
//   S^m  = (c^m,  (1 + c + ... + c^{m-1}) gamma)
//   S^-m = (c^-m, -(c^-1 + c^-2 + ... + c^-m) gamma)
inline MagnusMatrix power(const MagnusMatrix& s, long long m) {
    const int rank = s.rank();
    if (m == 0) return MagnusMatrix::identity(rank);
    LaurentPoly factor(rank);
    if (m > 0) {
        factor = geometric_sum(s.c(), m);
    } else {
        const Monomial ci = s.c().inverse();
        factor = -(geometric_sum(ci, -m) * ci);
    }
    std::vector<LaurentPoly> g;
    g.reserve(static_cast<size_t>(rank));
    for (const auto& gk : s.gamma()) g.push_back(gk * factor);
    return MagnusMatrix(s.c().pow(m), std::move(g));
}

// Bachmuth's image criterion: S lies in mu(Phi) iff
//   sum_i gamma_i (1 - s_i) = 1 - c.
inline bool bachmuth_check(const MagnusMatrix& s) {
    const int rank = s.rank();
    LaurentPoly lhs(rank);
    for (int i = 1; i <= rank; ++i)
        lhs = lhs + s.gamma(i) * (LaurentPoly::one(rank) - LaurentPoly::variable(rank, i));
    const LaurentPoly rhs = LaurentPoly::one(rank) - LaurentPoly::from_monomial(s.c());
    return lhs == rhs;
}

// ---- class-N truncation ----------------------------------------------------
//
// Substituting s_i = 1 + u_i maps the corner monomial and the gamma vector
// into power series in u_1..u_n.  Grading: each u_i and each t_i has weight
// 1, so at class N the corner keeps terms of total degree < N and each
// gamma_i keeps terms of total degree < N-1.

// s_i := 1 + u_i applied to a single (possibly negative) power, modulo total
// degree `bound` (keep deg < bound).  Negative powers expand as the finite
// geometric series (1+u)^-1 = 1 - u + u^2 - ...
inline LaurentPoly one_plus_u_power(int rank, int var, int exponent, int bound) {
    LaurentPoly result = LaurentPoly::one(rank);
    if (exponent == 0 || bound <= 0) return result.truncate_total_degree(bound);
    LaurentPoly base(rank);
    if (exponent > 0) {
        base = LaurentPoly::one(rank) + LaurentPoly::variable(rank, var);
    } else {
        const Monomial u = Monomial::variable(rank, var);
        Monomial p(rank);
        Int sign = 1;
        for (int k = 0; k < bound; ++k) {
            base = base + LaurentPoly::from_monomial(p, sign);
            p = p * u;
            sign = -sign;
        }
    }
    int e = exponent > 0 ? exponent : -exponent;
    for (int k = 0; k < e; ++k) result = (result * base).truncate_total_degree(bound);
    return result;
}

// Full substitution s_i = 1 + u_i on a Laurent polynomial, keeping total
// degree < bound.
inline LaurentPoly substitute_one_plus_u(const LaurentPoly& p, int bound) {
    const int rank = p.rank();
    LaurentPoly out(rank);
    for (const auto& [m, coeff] : p.terms()) {
        LaurentPoly term = LaurentPoly::constant(rank, coeff);
        for (int i = 1; i <= rank && !term.is_zero(); ++i) {
            const int e = m.exponent(i);
            if (e == 0) continue;
            term = (term * one_plus_u_power(rank, i, e, bound)).truncate_total_degree(bound);
        }
        out = out + term;
    }
    return out.truncate_total_degree(bound);
}

// The image of a Magnus matrix in the class-N nilpotent quotient.  Equality
// of TruncatedMatrix values is this artifact's executable notion of equality
// in Phi / gamma_N Phi.
class TruncatedMatrix {
  public:
    TruncatedMatrix(int rank, int cls)
        : cls_(cls),
          c_series_(LaurentPoly::one(rank).truncate_total_degree(cls)),
          gamma_(static_cast<size_t>(rank), LaurentPoly::zero(rank)) {
        if (cls < 1) throw std::invalid_argument("TruncatedMatrix: class must be >= 1");
    }

    TruncatedMatrix(int cls, LaurentPoly c_series, std::vector<LaurentPoly> gamma)
        : cls_(cls), c_series_(std::move(c_series)), gamma_(std::move(gamma)) {}

    int rank() const { return c_series_.rank(); }
    int truncation_class() const { return cls_; }
    const LaurentPoly& c_series() const { return c_series_; }
    const std::vector<LaurentPoly>& gamma() const { return gamma_; }
    const LaurentPoly& gamma(int i) const { return gamma_.at(static_cast<size_t>(i - 1)); }

    bool is_identity() const {
        if (c_series_ != LaurentPoly::one(rank()).truncate_total_degree(cls_)) return false;
        for (const auto& g : gamma_)
            if (!g.is_zero()) return false;
        return true;
    }

    TruncatedMatrix operator*(const TruncatedMatrix& o) const {
        detail::check_same_rank(rank(), o.rank(), "TruncatedMatrix::operator*");
        if (cls_ != o.cls_)
            throw std::invalid_argument("TruncatedMatrix::operator*: class mismatch");
        std::vector<LaurentPoly> g;
        g.reserve(gamma_.size());
        for (size_t k = 0; k < gamma_.size(); ++k)
            g.push_back((c_series_ * o.gamma_[k]).truncate_total_degree(cls_ - 1) + gamma_[k]);
        return TruncatedMatrix(cls_, (c_series_ * o.c_series_).truncate_total_degree(cls_),
                               std::move(g));
    }

    bool operator==(const TruncatedMatrix&) const = default;

  private:
    int cls_;
    LaurentPoly c_series_;
    std::vector<LaurentPoly> gamma_;
};

inline TruncatedMatrix truncate(const MagnusMatrix& s, int cls) {
    if (cls < 1) throw std::invalid_argument("truncate: class must be >= 1");
    const int rank = s.rank();
    const LaurentPoly c_series =
        substitute_one_plus_u(LaurentPoly::from_monomial(s.c()), cls);
    std::vector<LaurentPoly> g;
    g.reserve(static_cast<size_t>(rank));
    for (const auto& gk : s.gamma()) g.push_back(substitute_one_plus_u(gk, cls - 1));
    return TruncatedMatrix(cls, c_series, std::move(g));
}

}  // namespace metabelian
