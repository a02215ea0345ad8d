#pragma once

#include <map>
#include <ostream>
#include <utility>

#include "hecketrace/numeric.hpp"

namespace hecketrace {

/// Finite formal sum of group-like keys with exact rational coefficients.
/// Zero coefficients are never stored, so equality is map equality.
/// Additive structure and scalar multiplication live here; multiplicative
/// structure comes from the key type (operator* on keys) or from an external
/// ring context when key multiplication needs extra data.
template <class K>
class FormalSum {
public:
    using Terms = std::map<K, Rat>;

    FormalSum() = default;

    explicit FormalSum(const K& key, Rat coeff = Rat(1)) {
        if (coeff != 0) terms_.emplace(key, std::move(coeff));
    }

    static FormalSum zero() { return FormalSum(); }

    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    Rat coeff(const K& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const K& key, const Rat& coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.emplace(key, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    FormalSum& operator*=(const Rat& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    FormalSum& operator/=(const Rat& s) {
        if (s == 0) throw std::invalid_argument("FormalSum: division by zero scalar");
        for (auto& [k, c] : terms_) c /= s;
        return *this;
    }

    friend FormalSum operator+(FormalSum x, const FormalSum& y) { return x += y; }
    friend FormalSum operator-(FormalSum x, const FormalSum& y) { return x -= y; }
    friend FormalSum operator*(FormalSum x, const Rat& s) { return x *= s; }
    friend FormalSum operator*(const Rat& s, FormalSum x) { return x *= s; }
    friend FormalSum operator/(FormalSum x, const Rat& s) { return x /= s; }
    friend FormalSum operator-(const FormalSum& x) {
        FormalSum r;
        for (const auto& [k, c] : x.terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend bool operator==(const FormalSum& x, const FormalSum& y) { return x.terms_ == y.terms_; }

    /// Sum of all coefficients (deg in the trace-formula sense).
    Rat degree() const {
        Rat s(0);
        for (const auto& [k, c] : terms_) s += c;
        return s;
    }

    /// Sum of coefficients over keys satisfying the predicate.
    template <class Pred>
    Rat degree_if(Pred&& pred) const {
        Rat s(0);
        for (const auto& [k, c] : terms_)
            if (pred(k)) s += c;
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const FormalSum& x) {
        if (x.is_zero()) return os << "0";
        bool first = true;
        for (const auto& [k, c] : x.terms_) {
            if (!first) os << " + ";
            os << "(" << rat_to_string(c) << ")*" << k;
            first = false;
        }
        return os;
    }

private:
    Terms terms_;
};

/// Bilinear product for key types that multiply on their own (matrices).
template <class K>
FormalSum<K> operator*(const FormalSum<K>& x, const FormalSum<K>& y) {
    FormalSum<K> r;
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) r.add_term(kx * ky, cx * cy);
    return r;
}

/// Image of a formal sum under a key map (coefficients carried along).
template <class K, class F>
auto map_keys(const FormalSum<K>& x, F&& f) -> FormalSum<std::decay_t<decltype(f(std::declval<const K&>()))>> {
    FormalSum<std::decay_t<decltype(f(std::declval<const K&>()))>> r;
    for (const auto& [k, c] : x.terms()) r.add_term(f(k), c);
    return r;
}

}  // namespace hecketrace
