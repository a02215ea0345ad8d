#pragma once

#include <optional>
#include <utility>

#include "hecketrace/mat2.hpp"
#include "hecketrace/numeric.hpp"

namespace hecketrace {

/// Integral binary quadratic form a x^2 + b x y + c y^2. Transforms act by
/// column substitution, (f.M)(v) = f(Mv), so transforms compose on the right
/// and the first column of the accumulated matrix evaluates at (1, 0).
struct BQF {
    Int a, b, c;

    Int disc() const { return b * b - 4 * a * c; }

    Int eval(const Int& x, const Int& y) const { return a * x * x + b * x * y + c * y * y; }

    BQF apply(const Mat2& m) const {
        const Int &p = m.a(), &q = m.b(), &r = m.c(), &s = m.d();
        return BQF{eval(p, r), 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, eval(q, s)};
    }

    friend bool operator==(const BQF&, const BQF&) = default;
};

/// Gaussian reduction of a positive definite form to the canonical
/// representative with -a < b <= a <= c (and b >= 0 when a == c).
inline BQF reduce_definite(BQF f) {
    if (f.disc() >= 0 || f.a <= 0) throw std::invalid_argument("reduce_definite needs a positive definite form");
    for (;;) {
        // translate b into (-a, a]
        Int two_a = 2 * f.a;
        Int r = f.b % two_a;
        if (r > f.a) r -= two_a;
        if (r <= -f.a) r += two_a;
        Int k = (r - f.b) / two_a;
        f.c += k * f.b + k * k * f.a;
        f.b = r;
        if (f.a > f.c) {
            f = BQF{f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

/// Solutions of f(x, y) = 1 for positive definite f, by bounded enumeration:
/// 1 = f(x,y) >= (|disc| y^2) / (4a) bounds y, and x solves a quadratic.
inline std::optional<std::pair<Int, Int>> definite_represents_one(const BQF& f) {
    if (f.a <= 0 || f.disc() >= 0) return std::nullopt;
    Int abs_disc = -f.disc();
    Int y_bound = isqrt_floor(4 * f.a / abs_disc);
    for (Int y = -y_bound; y <= y_bound; ++y) {
        // a x^2 + (b y) x + (c y^2 - 1) = 0
        Int discx = f.b * f.b * y * y - 4 * f.a * (f.c * y * y - 1);
        Int root;
        if (discx < 0 || !is_perfect_square(discx, &root)) continue;
        for (int sgn : {1, -1}) {
            Int num = -f.b * y + sgn * root;
            if (num % (2 * f.a) == 0) return std::make_pair(num / (2 * f.a), y);
        }
    }
    return std::nullopt;
}

namespace detail {

/// Reduced indefinite form of non-square discriminant D with s = floor(sqrt D):
/// 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
inline bool is_reduced_indefinite(const BQF& f, const Int& s) {
    Int two_abs_a = 2 * abs(f.a);
    return f.b > 0 && f.b <= s && two_abs_a + f.b > s && two_abs_a - f.b <= s;
}

/// One rho-step of the reduction/cycle walk; also right-multiplies the
/// accumulated transform.
inline BQF rho_step(const BQF& f, const Int& s, Mat2* transform) {
    Int abs_c = abs(f.c);
    if (abs_c == 0) throw std::invalid_argument("rho_step: square discriminant");
    Int two_c = 2 * abs_c;
    Int r0 = ((-f.b) % two_c + two_c) % two_c;
    Int r;
    if (abs_c > s) {
        r = r0 > abs_c ? r0 - two_c : r0;  // r in (-|c|, |c|]
    } else {
        r = s - ((s - r0) % two_c + two_c) % two_c;  // r in (s - 2|c|, s]
    }
    Int m = (f.b + r) / (2 * f.c);
    if (m * 2 * f.c != f.b + r) throw InternalCheckError("rho_step: non-integral translation");
    if (transform) *transform = *transform * Mat2(0, -1, 1, m);
    Int new_c = (r * r - f.disc()) / (4 * f.c);
    return BQF{f.c, r, new_c};
}

}  // namespace detail

/// Reduction of an indefinite form of non-square discriminant, tracking the
/// transform with f_reduced = f.apply(transform).
inline BQF reduce_indefinite(BQF f, Mat2* transform) {
    Int d = f.disc();
    Int s;
    if (d <= 0 || is_perfect_square(d, &s)) throw std::invalid_argument("reduce_indefinite: need nonsquare disc > 0");
    s = isqrt_floor(d);
    if (transform) *transform = Mat2();
    for (int guard = 0; guard < 100000; ++guard) {
        if (detail::is_reduced_indefinite(f, s)) return f;
        f = detail::rho_step(f, s, transform);
    }
    throw InternalCheckError("reduce_indefinite: did not terminate");
}

/// Solutions of f(x, y) = 1 for indefinite f of non-square discriminant.
/// f represents 1 iff it is properly equivalent to the principal form, i.e.
/// its reduced form lies on the principal cycle; walking the cycle with
/// transforms yields an explicit representation.
inline std::optional<std::pair<Int, Int>> indefinite_represents_one(const BQF& f) {
    Int d = f.disc();
    Int s = isqrt_floor(d);
    Mat2 mf;
    BQF fr = reduce_indefinite(f, &mf);

    Int sigma = ((d % 2) + 2) % 2;
    BQF principal{1, sigma, (sigma * sigma - d) / 4};
    Mat2 mp;
    BQF pr = reduce_indefinite(principal, &mp);

    Mat2 walk;
    BQF cur = fr;
    for (int guard = 0;; ++guard) {
        if (cur == pr) {
            Mat2 total = mf * walk * mp.inverse();
            Int x = total.a(), y = total.c();
            if (f.eval(x, y) != 1 && f.eval(-x, -y) != 1)
                throw InternalCheckError("indefinite_represents_one: witness check failed");
            return std::make_pair(x, y);
        }
        cur = detail::rho_step(cur, s, &walk);
        if (cur == fr) return std::nullopt;  // walked the whole cycle
        if (guard > 1000000) throw InternalCheckError("indefinite_represents_one: cycle walk did not close");
    }
}

}  // namespace hecketrace
