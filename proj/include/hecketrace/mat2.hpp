#pragma once

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hecketrace/numeric.hpp"

namespace hecketrace {

/// 2x2 integer matrix with positive determinant, kept in a canonical
/// projective form: the first nonzero entry in the order (a, b, c, d) is
/// positive, so M and -M construct the same value. Equality, ordering and
/// hashing all act on the canonical entries.
class Mat2 {
public:
    /// Identity.
    Mat2() : a_(1), b_(0), c_(0), d_(1) {}

    Mat2(Int a, Int b, Int c, Int d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (a_ * d_ - b_ * c_ <= 0)
            throw std::invalid_argument("Mat2 requires positive determinant: " + raw_str());
        normalize();
    }

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& d() const { return d_; }

    Int det() const { return a_ * d_ - b_ * c_; }

    /// Trace of the canonical representative (sign depends on normalization;
    /// use abs() where a projective invariant is needed).
    Int trace() const { return a_ + d_; }

    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
    bool is_scalar() const { return b_ == 0 && c_ == 0 && a_ == d_; }

    Mat2 operator*(const Mat2& o) const {
        return Mat2(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                    c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
    }

    /// Projective inverse; only defined for determinant 1 (the adjugate).
    Mat2 inverse() const {
        if (det() != 1) throw std::invalid_argument("Mat2::inverse requires determinant 1");
        return Mat2(d_, -b_, -c_, a_);
    }

    /// M^e for determinant-1 matrices, e of either sign.
    Mat2 pow(long long e) const {
        Mat2 base = e >= 0 ? *this : inverse();
        unsigned long long k = e >= 0 ? static_cast<unsigned long long>(e)
                                      : static_cast<unsigned long long>(-e);
        Mat2 acc;
        while (k) {
            if (k & 1ULL) acc = acc * base;
            base = base * base;
            k >>= 1ULL;
        }
        return acc;
    }

    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

    friend std::strong_ordering operator<=>(const Mat2& x, const Mat2& y) {
        if (auto c = x.a_.compare(y.a_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = x.b_.compare(y.b_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = x.c_.compare(y.c_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = x.d_.compare(y.d_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const {
        return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
    }

    friend std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }

private:
    void normalize() {
        const Int* first = &a_;
        if (*first == 0) first = &b_;
        if (*first == 0) first = &c_;
        if (*first == 0) first = &d_;  // det > 0 excludes the zero matrix
        if (*first < 0) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
    }

    std::string raw_str() const {
        return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
    }

    Int a_, b_, c_, d_;
};

}  // namespace hecketrace
