#pragma once

// Syntactic group words over the generators x = x_1, y = x_2, z_3, ..., z_n,
// a parser with commutator notation, evaluation into Magnus matrices, and
// the separating homomorphism tau into S_3.

#include <array>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "magnus.hpp"

namespace metabelian {

struct Letter {
    int index;  // generator index, 1-based
    int sign;   // +1 or -1
    bool operator==(const Letter&) const = default;
};

class Word {
  public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    static Word generator(int i, int sign = +1) { return Word({Letter{i, sign}}); }

    const std::vector<Letter>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    size_t length() const { return letters_.size(); }

    int max_index() const {
        int m = 0;
        for (const auto& l : letters_) m = std::max(m, l.index);
        return m;
    }

    // concatenation; no free reduction is performed
    Word operator*(const Word& o) const {
        Word r(*this);
        r.letters_.insert(r.letters_.end(), o.letters_.begin(), o.letters_.end());
        return r;
    }

    Word inverse() const {
        Word r;
        r.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            r.letters_.push_back(Letter{it->index, -it->sign});
        return r;
    }

    Word pow(long long k) const {
        const Word base = k >= 0 ? *this : inverse();
        long long reps = k >= 0 ? k : -k;
        Word r;
        for (long long j = 0; j < reps; ++j) r = r * base;
        return r;
    }

    // removes adjacent inverse pairs to a fixpoint
    Word reduced() const {
        std::vector<Letter> stack;
        stack.reserve(letters_.size());
        for (const auto& l : letters_) {
            if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign)
                stack.pop_back();
            else
                stack.push_back(l);
        }
        return Word(std::move(stack));
    }

    bool operator==(const Word&) const = default;

    std::string str(const std::function<std::string(int)>& name) const {
        if (letters_.empty()) return "";
        std::string out;
        size_t i = 0;
        while (i < letters_.size()) {
            size_t j = i;
            while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
            const long long run = static_cast<long long>(j - i) * letters_[i].sign;
            if (!out.empty()) out += " ";
            out += name(letters_[i].index);
            if (run != 1) out += "^" + std::to_string(run);
            i = j;
        }
        return out;
    }

    std::string str() const { return str(phi_names); }

    static std::string phi_names(int i) {
        if (i == 1) return "x";
        if (i == 2) return "y";
        return "z" + std::to_string(i);
    }

    static std::string h_names(int i) {
        if (i == 1) return "a";
        if (i == 2) return "b";
        return "z" + std::to_string(i);
    }

  private:
    std::vector<Letter> letters_;
};

// [u, v] = u^-1 v^-1 u v
inline Word commutator(const Word& u, const Word& v) {
    return u.inverse() * v.inverse() * u * v;
}

// applies a generator substitution homomorphism letter by letter
inline Word word_map(const Word& w, const std::function<Word(int)>& image) {
    Word r;
    for (const auto& l : w.letters()) {
        const Word g = image(l.index);
        r = r * (l.sign > 0 ? g : g.inverse());
    }
    return r;
}

// ---- parser ----------------------------------------------------------------
//
//   word := term*
//   term := atom ['^' int]
//   atom := 'x' | 'y' | 'z' uint | '[' word ',' word ']' | '(' word ')'
//
// In H-alphabet mode the atoms are 'a' | 'b' | 'z' uint instead.  With
// `accept_h_aliases` set, 'a' and 'b' are additionally accepted in the
// x/y alphabet and expand to x [y,x] and y.

namespace detail {

class WordParser {
  public:
    enum class Alphabet { phi, h };

    WordParser(std::string_view text, int rank, Alphabet alphabet, bool accept_h_aliases)
        : text_(text), rank_(rank), alphabet_(alphabet), aliases_(accept_h_aliases) {}

    Word parse() {
        Word w = word();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character");
        return w.reduced();
    }

  private:
    Word word() {
        Word w;
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) return w;
            const char c = text_[pos_];
            if (c == ')' || c == ',' || c == ']') return w;
            w = w * term();
        }
    }

    Word term() {
        Word a = atom();
        skip_ws();
        if (match('^')) return a.pow(signed_integer());
        return a;
    }

    Word atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a generator, '[' or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Word w = word();
            skip_ws();
            if (!match(')')) fail("expected ')'");
            return w;
        }
        if (c == '[') {
            ++pos_;
            Word u = word();
            skip_ws();
            if (!match(',')) fail("expected ',' in commutator");
            Word v = word();
            skip_ws();
            if (!match(']')) fail("expected ']'");
            return commutator(u, v);
        }
        if (alphabet_ == Alphabet::phi) {
            if (c == 'x') {
                ++pos_;
                return Word::generator(1);
            }
            if (c == 'y') {
                ++pos_;
                return Word::generator(2);
            }
            if (c == 'z') {
                ++pos_;
                return Word::generator(z_index());
            }
            if (aliases_ && c == 'a') {
                ++pos_;
                // a = x [y, x]
                return Word::generator(1) * commutator(Word::generator(2), Word::generator(1));
            }
            if (aliases_ && c == 'b') {
                ++pos_;
                return Word::generator(2);
            }
            fail("expected a generator, '[' or '('");
        }
        if (c == 'a') {
            ++pos_;
            return Word::generator(1);
        }
        if (c == 'b') {
            ++pos_;
            return Word::generator(2);
        }
        if (c == 'z') {
            ++pos_;
            return Word::generator(z_index());
        }
        fail("expected a generator, '[' or '('");
    }

    int z_index() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a generator index after 'z'");
        const long long i = std::stoll(std::string(text_.substr(start, pos_ - start)));
        if (i < 3 || i > rank_)
            fail("generator index " + std::to_string(i) + " exceeds rank " +
                 std::to_string(rank_));
        return static_cast<int>(i);
    }

    long long signed_integer() {
        skip_ws();
        const bool neg = match('-');
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer exponent");
        const long long v = std::stoll(std::string(text_.substr(start, pos_ - start)));
        return neg ? -v : v;
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
        throw std::invalid_argument("word parse error at position " + std::to_string(pos_) + ": " +
                                    why);
    }

    std::string_view text_;
    int rank_;
    Alphabet alphabet_;
    bool aliases_;
    size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text, int rank, bool accept_h_aliases = false) {
    return detail::WordParser(text, rank, detail::WordParser::Alphabet::phi, accept_h_aliases)
        .parse();
}

// words over the subgroup alphabet a, b, z_j
inline Word parse_h_word(std::string_view text, int rank) {
    return detail::WordParser(text, rank, detail::WordParser::Alphabet::h, false).parse();
}

// ---- evaluation ------------------------------------------------------------

inline MagnusMatrix evaluate(const Word& w, int rank) {
    MagnusMatrix m = MagnusMatrix::identity(rank);
    for (const auto& l : w.letters()) {
        const MagnusMatrix g = MagnusMatrix::generator(rank, l.index);
        m = m * (l.sign > 0 ? g : g.inverse());
    }
    return m;
}

// ---- S_3 and tau -----------------------------------------------------------

// Image notation over {1,2,3}; composition applies the left factor first:
// (p*q)(i) = q(p(i)).
class Permutation {
  public:
    Permutation() : img_{1, 2, 3} {}
    explicit Permutation(std::array<int, 3> images) : img_(images) {
        std::array<bool, 3> seen{false, false, false};
        for (int v : img_) {
            if (v < 1 || v > 3 || seen[static_cast<size_t>(v - 1)])
                throw std::invalid_argument("Permutation: images must be a bijection of {1,2,3}");
            seen[static_cast<size_t>(v - 1)] = true;
        }
    }

    static Permutation transposition(int i, int j) {
        std::array<int, 3> img{1, 2, 3};
        std::swap(img.at(static_cast<size_t>(i - 1)), img.at(static_cast<size_t>(j - 1)));
        return Permutation(img);
    }

    int apply(int i) const { return img_.at(static_cast<size_t>(i - 1)); }

    Permutation operator*(const Permutation& o) const {
        std::array<int, 3> img{};
        for (int i = 1; i <= 3; ++i)
            img[static_cast<size_t>(i - 1)] = o.apply(apply(i));
        return Permutation(img);
    }

    Permutation inverse() const {
        std::array<int, 3> img{};
        for (int i = 1; i <= 3; ++i) img[static_cast<size_t>(apply(i) - 1)] = i;
        return Permutation(img);
    }

    bool is_identity() const { return img_ == std::array<int, 3>{1, 2, 3}; }

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

    std::string str() const {  // cycle notation
        if (is_identity()) return "1";
        std::array<bool, 3> done{false, false, false};
        std::string out;
        for (int i = 1; i <= 3; ++i) {
            if (done[static_cast<size_t>(i - 1)] || apply(i) == i) continue;
            out += "(" + std::to_string(i);
            done[static_cast<size_t>(i - 1)] = true;
            for (int j = apply(i); j != i; j = apply(j)) {
                out += " " + std::to_string(j);
                done[static_cast<size_t>(j - 1)] = true;
            }
            out += ")";
        }
        return out;
    }

  private:
    std::array<int, 3> img_;
};

// tau: x -> (1 2), y -> (2 3), z_i -> 1.  S_3 is metabelian, so this extends
// to a homomorphism on all words.
inline Permutation tau_letter(int index) {
    if (index == 1) return Permutation::transposition(1, 2);
    if (index == 2) return Permutation::transposition(2, 3);
    return Permutation();
}

inline Permutation tau(const Word& w) {
    Permutation p;
    for (const auto& l : w.letters()) {
        const Permutation q = tau_letter(l.index);
        p = p * (l.sign > 0 ? q : q.inverse());
    }
    return p;
}

// subgroup of S_3 generated by the given elements, computed by closure
inline std::set<Permutation> permutation_closure(const std::vector<Permutation>& gens) {
    std::set<Permutation> group{Permutation()};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Permutation> current(group.begin(), group.end());
        for (const auto& p : current)
            for (const auto& g : gens) {
                if (group.insert(p * g).second) grew = true;
                if (group.insert(p * g.inverse()).second) grew = true;
            }
    }
    return group;
}

// true iff tau(w) lies outside the subgroup of S_3 generated by the images
// of `generators` — i.e. tau separates w from that subgroup
inline bool separate_by_tau(const Word& w, const std::vector<Word>& generators) {
    std::vector<Permutation> gens;
    gens.reserve(generators.size());
    for (const auto& g : generators) gens.push_back(tau(g));
    return !permutation_closure(gens).count(tau(w));
}

}  // namespace metabelian
