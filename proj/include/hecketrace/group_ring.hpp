#pragma once

#include <map>
#include <optional>
#include <utility>

#include "hecketrace/formal_sum.hpp"
#include "hecketrace/mat2.hpp"

namespace hecketrace {

/// Element of Q[Sigma] (or Q[Gamma]) keyed by projective integer matrices.
using RingElement = FormalSum<Mat2>;

inline RingElement ring_one() { return RingElement(Mat2()); }

namespace detail {

/// Writes R = s*(alpha*I + beta*G) for s in {+1,-1} if possible, where R is a
/// rational 2x2 matrix given entrywise. G must not be scalar. Returns the
/// (alpha, beta) pair of one representative; the caller compares both signs.
inline std::optional<std::pair<Rat, Rat>> in_pencil(const Rat& r00, const Rat& r01, const Rat& r10,
                                                    const Rat& r11, const Mat2& g) {
    Rat beta;
    if (g.b() != 0)
        beta = r01 / Rat(g.b());
    else if (g.c() != 0)
        beta = r10 / Rat(g.c());
    else
        beta = (r00 - r11) / Rat(g.a() - g.d());  // non-scalar, so a != d here
    Rat alpha = r00 - beta * Rat(g.a());
    if (r01 != beta * Rat(g.b())) return std::nullopt;
    if (r10 != beta * Rat(g.c())) return std::nullopt;
    if (r11 != alpha + beta * Rat(g.d())) return std::nullopt;
    return std::make_pair(alpha, beta);
}

/// Smallest k >= 0 with W == g^k * B projectively, if one exists. g must be
/// non-scalar with trace^2 >= 4 det (infinite projective order). Every power
/// of g lies in the pencil alpha*I + beta*g by Cayley-Hamilton, and with the
/// trace-positive representative the beta coefficients increase strictly, so
/// the scan below terminates.
inline std::optional<long> forward_power_offset(const Mat2& g, const Mat2& w, const Mat2& b) {
    Int det_b = b.det();
    // R = W * adj(B) / det(B), entrywise rational.
    Rat r00 = Rat(w.a() * b.d() - w.b() * b.c(), det_b);
    Rat r01 = Rat(-w.a() * b.b() + w.b() * b.a(), det_b);
    Rat r10 = Rat(w.c() * b.d() - w.d() * b.c(), det_b);
    Rat r11 = Rat(-w.c() * b.b() + w.d() * b.a(), det_b);

    // Trace-positive representative of g (projective flip is free).
    Int ga = g.a(), gb = g.b(), gc = g.c(), gd = g.d();
    if (ga + gd < 0) {
        ga = -ga;
        gb = -gb;
        gc = -gc;
        gd = -gd;
    }
    Mat2 gpos(ga, gb, gc, gd);
    auto target = in_pencil(r00, r01, r10, r11, gpos);
    if (!target) return std::nullopt;
    Rat ta = target->first, tb = target->second;
    Rat abs_tb = tb < 0 ? -tb : tb;

    Int trace = ga + gd;  // >= 2 sqrt(det) since g has infinite order
    Int det_g = g.det();
    Int alpha = 1, beta = 0;  // g^0
    for (long k = 0;; ++k) {
        if ((Rat(alpha) == ta && Rat(beta) == tb) || (Rat(alpha) == -ta && Rat(beta) == -tb))
            return k;
        if (k >= 1 && Rat(beta) > abs_tb) return std::nullopt;
        Int alpha_next = -det_g * beta;
        beta = alpha + trace * beta;
        alpha = alpha_next;
    }
}

/// Signed k with W == g^k * B projectively, if one exists.
inline std::optional<long> power_offset(const Mat2& g, const Mat2& w, const Mat2& b) {
    if (auto k = forward_power_offset(g, w, b)) return *k;
    if (auto k = forward_power_offset(g, b, w)) return -*k;
    return std::nullopt;
}

}  // namespace detail

/// Solves (1 - g) * X = y for the unique finite-support X, where g has
/// infinite projective order. The support of y splits into orbits of left
/// multiplication by g; along each orbit chain the coefficients of X are the
/// running prefix sums of the coefficients of y, and the chain must close
/// (total sum zero) for a finite solution to exist.
///
/// Throws std::invalid_argument if g is scalar or elliptic, and
/// DivisibilityError if no finite-support solution exists. The result is
/// verified by back-multiplication before returning.
inline RingElement left_divide_by_one_minus(const Mat2& g, const RingElement& y) {
    if (g.is_scalar())
        throw std::invalid_argument("left_divide_by_one_minus: scalar g has (1-g) = 0 projectively");
    if (g.trace() * g.trace() < 4 * g.det())
        throw std::invalid_argument("left_divide_by_one_minus: elliptic g rejected (finite order)");

    struct Chain {
        Mat2 base;                      // key at offset 0
        std::map<long, std::pair<Mat2, Rat>> entries;  // offset -> (key, coefficient)
    };
    std::vector<Chain> chains;
    for (const auto& [key, coeff] : y.terms()) {
        bool placed = false;
        for (auto& chain : chains) {
            if (auto k = detail::power_offset(g, key, chain.base)) {
                chain.entries.emplace(*k, std::make_pair(key, coeff));
                placed = true;
                break;
            }
        }
        if (!placed) {
            Chain c{key, {}};
            c.entries.emplace(0L, std::make_pair(key, coeff));
            chains.push_back(std::move(c));
        }
    }

    RingElement x;
    for (const auto& chain : chains) {
        long k_min = chain.entries.begin()->first;
        long k_max = chain.entries.rbegin()->first;
        Mat2 key = chain.entries.begin()->second.first;
        Rat running(0);
        for (long k = k_min; k <= k_max; ++k) {
            if (auto it = chain.entries.find(k); it != chain.entries.end()) running += it->second.second;
            if (k == k_max) break;
            if (running != 0) x.add_term(key, running);
            key = g * key;
        }
        if (running != 0)
            throw DivisibilityError("left_divide_by_one_minus: orbit chain does not close");
    }

    RingElement check = x - RingElement(g) * x;
    if (!(check == y))
        throw InternalCheckError("left_divide_by_one_minus: back-multiplication check failed");
    return x;
}

}  // namespace hecketrace
