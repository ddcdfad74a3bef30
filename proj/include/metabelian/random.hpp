#pragma once

// Deterministic seeded randomness for verification runs.  mt19937_64 output
// is fully specified by the standard; the derived draws below avoid
// std::uniform_int_distribution, whose mapping is implementation-defined,
// so a seed pins byte-identical behaviour on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "laurent.hpp"
#include "words.hpp"

namespace metabelian {

class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // uniform in [0, n), rejection sampled
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::invalid_argument("SeededRng::below: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    // uniform in [lo, hi], inclusive
    long long range(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("SeededRng::range: empty range");
        return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return next() & 1u; }

  private:
    std::mt19937_64 eng_;
};

// uniformly random letters over the given generator indices
inline Word random_word_over(SeededRng& rng, const std::vector<int>& alphabet, size_t length) {
    std::vector<Letter> letters;
    letters.reserve(length);
    for (size_t i = 0; i < length; ++i) {
        const int idx = alphabet[static_cast<size_t>(rng.below(alphabet.size()))];
        letters.push_back(Letter{idx, rng.coin() ? 1 : -1});
    }
    return Word(std::move(letters));
}

inline Word random_word(SeededRng& rng, int rank, size_t max_length) {
    std::vector<int> alphabet;
    for (int i = 1; i <= rank; ++i) alphabet.push_back(i);
    return random_word_over(rng, alphabet, static_cast<size_t>(rng.below(max_length + 1)));
}

inline Monomial random_monomial(SeededRng& rng, int rank, int max_abs_exp) {
    std::vector<int> exps(static_cast<size_t>(rank));
    for (auto& e : exps) e = static_cast<int>(rng.range(-max_abs_exp, max_abs_exp));
    return Monomial(std::move(exps));
}

inline LaurentPoly random_poly(SeededRng& rng, int rank, size_t max_terms, int max_abs_exp,
                               long long max_abs_coeff) {
    LaurentPoly p(rank);
    const size_t terms = static_cast<size_t>(rng.below(max_terms + 1));
    for (size_t t = 0; t < terms; ++t) {
        const Int c = rng.range(-max_abs_coeff, max_abs_coeff);
        p = p + LaurentPoly::from_monomial(random_monomial(rng, rank, max_abs_exp), c);
    }
    return p;
}

}  // namespace metabelian
