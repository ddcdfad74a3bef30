#pragma once

// Lower-central-series machinery for the free metabelian group: the basic
// commutator basis of gamma_k / gamma_{k+1}, expression of cosets by exact
// linear algebra on the degree-(k-1) part of the Magnus image, and the
// witness-lifting construction producing, for each class n, a word over the
// subgroup generators whose class-n truncation equals that of mu(x).

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "subgroup.hpp"

namespace metabelian {

// Left-normed basic commutator [x_{i1}, x_{i2}, ..., x_{ik}] with
// i1 > i2 <= i3 <= ... <= ik; a single generator when the weight is 1.
struct BasicCommutator {
    int weight;
    std::vector<int> indices;

    Word word() const {
        Word w = Word::generator(indices.at(0));
        for (size_t j = 1; j < indices.size(); ++j)
            w = commutator(w, Word::generator(indices[j]));
        return w;
    }

    std::string str() const {
        if (weight == 1) return Word::phi_names(indices.at(0));
        std::string out = "[";
        for (size_t j = 0; j < indices.size(); ++j) {
            if (j > 0) out += ",";
            out += Word::phi_names(indices[j]);
        }
        return out + "]";
    }

    bool operator==(const BasicCommutator&) const = default;
};

namespace detail {
inline void extend_chains(std::vector<int>& prefix, int from, int rank, int remaining,
                          std::vector<BasicCommutator>& out) {
    if (remaining == 0) {
        out.push_back(BasicCommutator{static_cast<int>(prefix.size()), prefix});
        return;
    }
    for (int v = from; v <= rank; ++v) {
        prefix.push_back(v);
        extend_chains(prefix, v, rank, remaining - 1, out);
        prefix.pop_back();
    }
}
}  // namespace detail

// All weight-k basic commutators of rank n, in lexicographic index order.
// For k >= 2 the count is (k-1) * C(n+k-2, k), the rank of
// gamma_k / gamma_{k+1}.
inline std::vector<BasicCommutator> basic_commutators(int weight, int rank) {
    if (weight < 1) throw std::invalid_argument("basic_commutators: weight must be >= 1");
    if (rank < 2) throw std::invalid_argument("basic_commutators: rank must be >= 2");
    std::vector<BasicCommutator> out;
    if (weight == 1) {
        for (int i = 1; i <= rank; ++i) out.push_back(BasicCommutator{1, {i}});
        return out;
    }
    for (int i1 = 2; i1 <= rank; ++i1)
        for (int i2 = 1; i2 < i1; ++i2) {
            std::vector<int> prefix{i1, i2};
            detail::extend_chains(prefix, i2, rank, weight - 2, out);
        }
    return out;
}

// ---- exact linear algebra ---------------------------------------------------

namespace detail {

// Reduces [A | b]; demands a unique solution (pivot in every column).
inline std::vector<Rat> solve_unique(std::vector<std::vector<Rat>> a, std::vector<Rat> b,
                                     const char* what) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    std::vector<size_t> pivot_row(cols, SIZE_MAX);
    size_t next_row = 0;
    for (size_t col = 0; col < cols && next_row < rows; ++col) {
        size_t p = SIZE_MAX;
        for (size_t r = next_row; r < rows; ++r)
            if (a[r][col] != 0) {
                p = r;
                break;
            }
        if (p == SIZE_MAX) continue;
        std::swap(a[p], a[next_row]);
        std::swap(b[p], b[next_row]);
        const Rat inv = Rat(1) / a[next_row][col];
        for (size_t c = col; c < cols; ++c) a[next_row][c] *= inv;
        b[next_row] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == next_row || a[r][col] == 0) continue;
            const Rat f = a[r][col];
            for (size_t c = col; c < cols; ++c) a[r][c] -= f * a[next_row][c];
            b[r] -= f * b[next_row];
        }
        pivot_row[col] = next_row;
        ++next_row;
    }
    for (size_t col = 0; col < cols; ++col)
        if (pivot_row[col] == SIZE_MAX)
            throw std::runtime_error(std::string(what) +
                                     ": coefficient matrix is rank-deficient (basis bug)");
    for (size_t r = next_row; r < rows; ++r)
        if (b[r] != 0)
            throw std::runtime_error(std::string(what) +
                                     ": inconsistent system (violated precondition or basis bug)");
    std::vector<Rat> x(cols);
    for (size_t col = 0; col < cols; ++col) x[col] = b[pivot_row[col]];
    return x;
}

inline int matrix_rank(std::vector<std::vector<Rat>> a) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    int rank = 0;
    size_t next_row = 0;
    for (size_t col = 0; col < cols && next_row < rows; ++col) {
        size_t p = SIZE_MAX;
        for (size_t r = next_row; r < rows; ++r)
            if (a[r][col] != 0) {
                p = r;
                break;
            }
        if (p == SIZE_MAX) continue;
        std::swap(a[p], a[next_row]);
        const Rat inv = Rat(1) / a[next_row][col];
        for (size_t c = col; c < cols; ++c) a[next_row][c] *= inv;
        for (size_t r = next_row + 1; r < rows; ++r) {
            if (a[r][col] == 0) continue;
            const Rat f = a[r][col];
            for (size_t c = col; c < cols; ++c) a[r][c] -= f * a[next_row][c];
        }
        ++next_row;
        ++rank;
    }
    return rank;
}

// all monomials of the given total degree with nonnegative exponents
inline void enumerate_monomials_rec(std::vector<int>& exps, size_t var, int remaining, int rank,
                                    std::vector<Monomial>& out) {
    if (var + 1 == static_cast<size_t>(rank)) {
        exps[var] = remaining;
        out.emplace_back(exps);
        exps[var] = 0;
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        exps[var] = e;
        enumerate_monomials_rec(exps, var + 1, remaining - e, rank, out);
        exps[var] = 0;
    }
}

inline std::vector<Monomial> enumerate_monomials(int rank, int degree) {
    std::vector<Monomial> out;
    std::vector<int> exps(static_cast<size_t>(rank), 0);
    enumerate_monomials_rec(exps, 0, degree, rank, out);
    return out;
}

// The degree-(k-1) homogeneous components of the gamma vector of mu(w)
// after substituting s_i = 1 + u_i, flattened into one column.  For k >= 2
// demands that the corner is trivial and all lower components vanish.
inline std::vector<Rat> graded_column(const MagnusMatrix& m, int k,
                                      const std::vector<Monomial>& monos, const char* what) {
    const int rank = m.rank();
    if (!m.c().is_identity())
        throw std::runtime_error(std::string(what) +
                                 ": element is not in the commutator subgroup");
    std::vector<Rat> col;
    col.reserve(static_cast<size_t>(rank) * monos.size());
    for (int i = 1; i <= rank; ++i) {
        const LaurentPoly sub = substitute_one_plus_u(m.gamma(i), k);
        if (!sub.truncate_total_degree(k - 1).is_zero())
            throw std::runtime_error(
                std::string(what) +
                ": gamma has components below degree k-1 (element not in gamma_k)");
        const LaurentPoly part = sub.homogeneous_part(k - 1);
        for (const auto& mono : monos) col.emplace_back(part.coefficient(mono));
    }
    return col;
}

}  // namespace detail

// Coefficient matrix of the weight-k basic commutators: one column per
// commutator, rows indexed by (gamma coordinate, degree-(k-1) monomial).
// For k = 1 the columns are the abelianization exponent vectors.
inline std::vector<std::vector<Rat>> basis_component_matrix(int weight, int rank) {
    const auto basis = basic_commutators(weight, rank);
    std::vector<std::vector<Rat>> columns;
    columns.reserve(basis.size());
    if (weight == 1) {
        for (const auto& bc : basis) {
            std::vector<Rat> col(static_cast<size_t>(rank), Rat(0));
            col[static_cast<size_t>(bc.indices[0] - 1)] = 1;
            columns.push_back(std::move(col));
        }
    } else {
        const auto monos = detail::enumerate_monomials(rank, weight - 1);
        for (const auto& bc : basis)
            columns.push_back(detail::graded_column(evaluate(bc.word(), rank), weight, monos,
                                                    "basis_component_matrix"));
    }
    // transpose to rows x cols
    const size_t rows = columns.empty() ? 0 : columns[0].size();
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(columns.size(), Rat(0)));
    for (size_t j = 0; j < columns.size(); ++j)
        for (size_t r = 0; r < rows; ++r) m[r][j] = columns[j][r];
    return m;
}

inline int basis_matrix_rank(int weight, int rank) {
    return detail::matrix_rank(basis_component_matrix(weight, rank));
}

// Exponent vector (m_c) with w = prod c^{m_c} mod gamma_{k+1} over the
// weight-k basic commutators.  Precondition: w lies in gamma_k (certified by
// the caller's construction); violations surface as inconsistent systems.
inline std::vector<Int> express_in_quotient(const Word& w, int k, int rank) {
    if (k < 2) throw std::invalid_argument("express_in_quotient: k must be >= 2");
    const auto basis = basic_commutators(k, rank);
    const auto monos = detail::enumerate_monomials(rank, k - 1);

    const std::vector<Rat> target =
        detail::graded_column(evaluate(w, rank), k, monos, "express_in_quotient");

    std::vector<std::vector<Rat>> a(target.size(), std::vector<Rat>(basis.size(), Rat(0)));
    for (size_t j = 0; j < basis.size(); ++j) {
        const std::vector<Rat> col = detail::graded_column(evaluate(basis[j].word(), rank), k,
                                                           monos, "express_in_quotient");
        for (size_t r = 0; r < col.size(); ++r) a[r][j] = col[r];
    }

    const std::vector<Rat> x = detail::solve_unique(std::move(a), target, "express_in_quotient");
    std::vector<Int> out;
    out.reserve(x.size());
    for (const auto& v : x) {
        if (boost::multiprecision::denominator(v) != 1)
            throw std::runtime_error("express_in_quotient: non-integer solution (basis bug)");
        out.emplace_back(boost::multiprecision::numerator(v));
    }
    return out;
}

// One lifting run: the witness word (over the subgroup alphabet a, b, z_j)
// and the exponent vector used at each weight.
struct WitnessChain {
    int cls = 1;
    Word witness;  // H-alphabet
    std::vector<std::pair<int, std::vector<Int>>> steps;

    std::string witness_str() const {
        const std::string s = witness.str(Word::h_names);
        return s.empty() ? "1" : s;
    }
};

// Iterative construction: v_1 = empty; given v_k with v_k^-1 x in gamma_k,
// express that defect over the weight-k basic commutators and absorb it into
// v_{k+1} with x,y replaced by a,b (legitimate because a == x and b == y
// modulo the commutator subgroup).  Stops at k = cls; the truncation
// invariant is verified before returning.
inline WitnessChain lift_witness(const SubgroupH& h, int cls) {
    if (cls < 1) throw std::invalid_argument("lift_witness: class must be >= 1");
    const int rank = h.rank();
    WitnessChain chain;
    chain.cls = cls;

    Word v;  // H-alphabet
    for (int k = 1; k < cls; ++k) {
        const Word defect = (h.expand(v).inverse() * Word::generator(1)).reduced();
        const auto basis = basic_commutators(k, rank);
        std::vector<Int> e;
        if (k == 1) {
            const MagnusMatrix m = evaluate(defect, rank);
            for (int i = 1; i <= rank; ++i) e.emplace_back(m.c().exponent(i));
        } else {
            e = express_in_quotient(defect, k, rank);
        }
        for (size_t j = 0; j < basis.size(); ++j) {
            if (e[j] == 0) continue;
            for (int idx : basis[j].indices)
                if (idx > 2 && !h.J().count(idx))
                    throw std::runtime_error(
                        "lift_witness: defect involves a generator outside the subgroup");
            v = v * basis[j].word().pow(e[j].convert_to<long long>());
        }
        chain.steps.emplace_back(k, std::move(e));
    }
    chain.witness = v.reduced();

    const MagnusMatrix target = MagnusMatrix::generator(rank, 1);
    if (truncate(h.evaluate_h(chain.witness), cls) != truncate(target, cls))
        throw std::logic_error("lift_witness: truncation invariant failed at class " +
                               std::to_string(cls));
    return chain;
}

struct NonsepClassResult {
    int cls;
    std::string witness;
    bool trunc_equal;
    bool in_h;
    double ms;
};

struct NonsepReport {
    std::vector<NonsepClassResult> classes;

    std::string str() const {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(1);
        for (const auto& c : classes)
            os << "class " << c.cls << ": witness " << c.witness
               << ", trunc-equal: " << (c.trunc_equal ? "yes" : "no")
               << ", in-H: " << (c.in_h ? "yes" : "no") << ", ms: " << c.ms << "\n";
        return os.str();
    }
};

// For each class n <= n_max: lift a witness, check class-n truncation
// equality with mu(x) and genuine membership of the witness in H.  Any
// failure aborts with the failing class.
inline NonsepReport verify_nonseparability(const SubgroupH& h, int n_max) {
    if (n_max < 2) throw std::invalid_argument("verify_nonseparability: n_max must be >= 2");
    const int rank = h.rank();
    NonsepReport report;
    for (int n = 1; n <= n_max; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const WitnessChain chain = lift_witness(h, n);
        const MagnusMatrix evaluated = h.evaluate_h(chain.witness);
        const bool trunc_equal =
            truncate(evaluated, n) == truncate(MagnusMatrix::generator(rank, 1), n);
        const bool in_h = h.contains(evaluated).member;
        const auto stop = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        report.classes.push_back(
            NonsepClassResult{n, chain.witness_str(), trunc_equal, in_h, ms});
        if (!trunc_equal || !in_h)
            throw std::runtime_error("verify_nonseparability: failure at class " +
                                     std::to_string(n) + (trunc_equal ? "" : " (truncation)") +
                                     (in_h ? "" : " (membership)"));
    }
    return report;
}

}  // namespace metabelian
