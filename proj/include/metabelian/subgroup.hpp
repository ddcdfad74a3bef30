#pragma once

// The subgroup H = <a, b, z_j (j in J)> with a = x [y,x] and b = y, the
// module maps psi* / psi_1*, and the membership decision procedure: a matrix
// S in mu(Phi) lies in mu(H) iff psi_1*(S) stays inside the matrix ring,
// which reduces to one exact-divisibility test of gamma_1 by 2 s_2 - 1
// (plus, at general rank, support checks confining S to the free factor
// <x, y, z_j (j in J)>).

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "words.hpp"

namespace metabelian {

// lambda: e -> (2 - s2^-1) e + (1 - s1) s2^-1 f,  f -> f,  t_j -> t_j.
// The corner monomial is unchanged (a and x agree in the abelianization).
inline MagnusMatrix psi_star(const MagnusMatrix& s) {
    const int rank = s.rank();
    if (rank < 2) throw std::invalid_argument("psi_star: rank must be >= 2");
    const RingContext ring(rank);
    const Monomial beta_inv = ring.s(2).inverse();
    const LaurentPoly lambda_ee =
        ring.constant(2) - LaurentPoly::from_monomial(beta_inv);          // 2 - s2^-1
    const LaurentPoly lambda_ef =
        (ring.one() - ring.var(1)) * beta_inv;                            // (1 - s1) s2^-1
    std::vector<LaurentPoly> g = s.gamma();
    const LaurentPoly g1 = g[0];
    g[0] = g1 * lambda_ee;
    g[1] = g1 * lambda_ef + g[1];
    return MagnusMatrix(s.c(), std::move(g));
}

// lambda~^-1: e -> s2/(2 s2 - 1) e + (s1 - 1)/(2 s2 - 1) f,  f -> f.
// Lands back in the integral matrix ring iff 2 s2 - 1 divides gamma_1
// exactly; otherwise returns nullopt.
inline std::optional<MagnusMatrix> psi1_star(const MagnusMatrix& s) {
    const int rank = s.rank();
    if (rank < 2) throw std::invalid_argument("psi1_star: rank must be >= 2");
    const RingContext ring(rank);
    const auto q = divide_exact(s.gamma(1), ring.two_s2_minus_one());
    if (!q) return std::nullopt;
    std::vector<LaurentPoly> g = s.gamma();
    g[0] = *q * ring.s(2);                             // gamma_1 s2 / (2 s2 - 1)
    g[1] = *q * (ring.var(1) - ring.one()) + g[1];     // gamma_1 (s1 - 1)/(2 s2 - 1) + gamma_2
    return MagnusMatrix(s.c(), std::move(g));
}

struct MembershipVerdict {
    bool member = false;

    // on success: the exact quotient gamma_1 / (2 s2 - 1) plus the
    // transformed matrix psi_1*(S), recorded so the verdict can be re-audited
    std::optional<LaurentPoly> quotient;
    std::optional<MagnusMatrix> psi1_image;

    // on failure: the first failed check and the offending datum
    std::string failed_check;
    std::string failure_datum;

    std::string json_str() const {
        if (member) {
            std::string out = "{\"member\":true,\"certificate\":{\"quotient\":\"" +
                              quotient->str() + "\",\"psi1_image\":" + psi1_image->json_str() +
                              "}}";
            return out;
        }
        return "{\"member\":false,\"failure\":{\"check\":\"" + failed_check +
               "\",\"datum\":\"" + failure_datum + "\"}}";
    }
};

class SubgroupH {
  public:
    // J must be a subset of {3, ..., rank}
    SubgroupH(int rank, std::set<int> J) : rank_(rank), J_(std::move(J)) {
        if (rank < 2) throw std::invalid_argument("SubgroupH: rank must be >= 2");
        for (int j : J_)
            if (j < 3 || j > rank)
                throw std::invalid_argument("SubgroupH: J must be a subset of {3,...,rank}");
    }

    static SubgroupH with_all_z(int rank) {
        std::set<int> J;
        for (int j = 3; j <= rank; ++j) J.insert(j);
        return SubgroupH(rank, std::move(J));
    }

    int rank() const { return rank_; }
    const std::set<int>& J() const { return J_; }

    // a = x [y, x]
    static Word a_word() {
        return Word::generator(1) * commutator(Word::generator(2), Word::generator(1));
    }
    static Word b_word() { return Word::generator(2); }

    // the generator words a, b, z_j over the x/y alphabet
    std::vector<Word> generator_words() const {
        std::vector<Word> gens{a_word(), b_word()};
        for (int j : J_) gens.push_back(Word::generator(j));
        return gens;
    }

    MagnusMatrix A() const { return evaluate(a_word(), rank_); }
    MagnusMatrix B() const { return evaluate(b_word(), rank_); }
    MagnusMatrix Z(int j) const {
        if (!J_.count(j)) throw std::out_of_range("SubgroupH::Z: index not in J");
        return MagnusMatrix::generator(rank_, j);
    }

    // substitutes a -> x [y,x], b -> y, z_j -> z_j in a word over the
    // subgroup alphabet
    Word expand(const Word& h_word) const {
        return word_map(h_word, [this](int i) -> Word {
            if (i == 1) return a_word();
            if (i == 2) return b_word();
            if (!J_.count(i))
                throw std::out_of_range("SubgroupH::expand: generator z" + std::to_string(i) +
                                        " is not in J");
            return Word::generator(i);
        });
    }

    MagnusMatrix evaluate_h(const Word& h_word) const { return evaluate(expand(h_word), rank_); }

    // Decides S in mu(H) for S in mu(Phi).  Requires bachmuth_check(S);
    // membership in H is undefined outside mu(Phi).
    MembershipVerdict contains(const MagnusMatrix& s) const {
        detail::check_same_rank(s.rank(), rank_, "SubgroupH::contains");
        if (!bachmuth_check(s))
            throw std::invalid_argument(
                "SubgroupH::contains: matrix fails the Bachmuth criterion, not in mu(Phi)");

        MembershipVerdict v;

        std::set<int> support{1, 2};
        for (int j : J_) support.insert(j);

        // outside the free factor <x, y, z_j (j in J)> nothing of S may survive
        for (int i = 3; i <= rank_; ++i) {
            if (support.count(i)) continue;
            if (s.c().exponent(i) != 0) {
                v.failed_check = "c-exponent";
                v.failure_datum =
                    "s" + std::to_string(i) + "^" + std::to_string(s.c().exponent(i));
                return v;
            }
            if (!s.gamma(i).is_zero()) {
                v.failed_check = "gamma-vanishing";
                v.failure_datum = "gamma" + std::to_string(i) + " = " + s.gamma(i).str();
                return v;
            }
        }
        for (int i : support) {
            if (i > rank_) continue;
            if (!s.gamma(i).uses_only(support)) {
                v.failed_check = "subring";
                v.failure_datum = "gamma" + std::to_string(i) + " = " + s.gamma(i).str();
                return v;
            }
        }

        const RingContext ring(rank_);
        auto q = divide_exact(s.gamma(1), ring.two_s2_minus_one());
        if (!q) {
            v.failed_check = "divisibility";
            v.failure_datum = "gamma1 = " + s.gamma(1).str();
            return v;
        }
        v.member = true;
        v.quotient = *q;
        v.psi1_image = psi1_star(s);  // succeeds: divisibility just verified
        return v;
    }

  private:
    int rank_;
    std::set<int> J_;
};

// Computes both sides of the isolation implication independently:
//   ( w^m in H ,  w in H ).
// The theorem asserts the first entails the second; callers test it.
inline std::pair<bool, bool> check_root_implication(const SubgroupH& h, const Word& w,
                                                    long long m) {
    if (m < 2) throw std::invalid_argument("check_root_implication: m must be >= 2");
    const MagnusMatrix s = evaluate(w, h.rank());
    const bool power_in = h.contains(power(s, m)).member;
    const bool base_in = h.contains(s).member;
    return {power_in, base_in};
}

// 1 + c + ... + c^{m-1} is never divisible by 2 s2 - 1 for a unit monomial c:
// true reports that the divisibility indeed fails.
inline bool coprimality_witness(const Monomial& c, long long m) {
    if (m < 2) throw std::invalid_argument("coprimality_witness: m must be >= 2");
    if (c.rank() < 2) throw std::invalid_argument("coprimality_witness: rank must be >= 2");
    const RingContext ring(c.rank());
    return !divide_exact(geometric_sum(c, m), ring.two_s2_minus_one()).has_value();
}

}  // namespace metabelian
