#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <vector>

#include "hecketrace/numeric.hpp"

namespace hecketrace {

/// One syllable g_i^e of a free-group word. Generator indices are 0-based
/// internally; file formats and printed forms use signed 1-based indices.
struct Syllable {
    int gen;
    long long exp;

    friend bool operator==(const Syllable&, const Syllable&) = default;
    friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Freely reduced word in a free group: adjacent syllables always have
/// distinct generators and no syllable has exponent zero. Reduction modulo
/// finite generator orders is a separate operation since it needs the
/// presentation (see Presentation::reduce_word).
class Word {
public:
    Word() = default;

    explicit Word(std::vector<Syllable> syllables) { append_reduced(std::move(syllables)); }

    static Word generator(int gen, long long exp = 1) {
        Word w;
        if (exp != 0) w.syls_.push_back({gen, exp});
        return w;
    }

    bool empty() const { return syls_.empty(); }
    std::size_t syllable_count() const { return syls_.size(); }
    const std::vector<Syllable>& syllables() const { return syls_; }

    /// Total letter count (sum of |exponents|).
    long long letter_length() const {
        long long n = 0;
        for (const auto& s : syls_) n += s.exp >= 0 ? s.exp : -s.exp;
        return n;
    }

    Word inverse() const {
        Word w;
        w.syls_.reserve(syls_.size());
        for (auto it = syls_.rbegin(); it != syls_.rend(); ++it) w.syls_.push_back({it->gen, -it->exp});
        return w;
    }

    /// Concatenation with free reduction.
    Word operator*(const Word& o) const {
        Word w = *this;
        for (const auto& s : o.syls_) w.push_syllable(s);
        return w;
    }

    void push_syllable(Syllable s) {
        if (s.exp == 0) return;
        if (!syls_.empty() && syls_.back().gen == s.gen) {
            syls_.back().exp += s.exp;
            if (syls_.back().exp == 0) syls_.pop_back();
        } else {
            syls_.push_back(s);
        }
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& x, const Word& y) {
        return x.syls_ <=> y.syls_;
    }

    std::string str() const {
        if (syls_.empty()) return "1";
        std::string s;
        for (const auto& syl : syls_) {
            if (!s.empty()) s += ".";
            s += "g" + std::to_string(syl.gen + 1);
            if (syl.exp != 1) s += "^" + std::to_string(syl.exp);
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

private:
    void append_reduced(std::vector<Syllable> syllables) {
        for (const auto& s : syllables) push_syllable(s);
    }

    std::vector<Syllable> syls_;
};

}  // namespace hecketrace
