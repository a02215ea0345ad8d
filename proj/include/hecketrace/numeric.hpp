#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hecketrace {

/// Arbitrary-precision integer. All arithmetic in the library is exact.
using Int = boost::multiprecision::cpp_int;

/// Exact rational number (always stored in lowest terms, denominator > 0).
using Rat = boost::multiprecision::cpp_rational;

/// Thrown when a left-division (1-g)X = y has no finite-support solution.
struct DivisibilityError : std::runtime_error {
    explicit DivisibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an internal consistency check fails. Seeing this means a bug,
/// not bad user input.
struct InternalCheckError : std::logic_error {
    explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

/// Canonical "num/den" form, denominator always written ("3/1", "-1/6").
inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_from_string(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(Int(std::string(s)));
    Int num(std::string(s.substr(0, slash)));
    Int den(std::string(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + std::string(s));
    return Rat(num, den);
}

/// floor(sqrt(n)) for n >= 0.
inline Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt_floor of negative value");
    if (n == 0) return 0;
    Int x = n, y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = isqrt_floor(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

/// Sum of divisors of n (the coset count of the determinant-n double coset).
inline long sigma1(long n) {
    if (n <= 0) throw std::invalid_argument("sigma1 requires n >= 1");
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

/// Deterministic splitmix64 generator. Used instead of <random> distributions
/// so that seeded output is reproducible independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, n). Fine for test-data generation.
    long below(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }

    /// Value in [lo, hi].
    long range(long lo, long hi) { return lo + below(hi - lo + 1); }

private:
    std::uint64_t state_;
};

}  // namespace hecketrace
