#pragma once

#include <vector>

#include "hecketrace/formal_sum.hpp"
#include "hecketrace/group_ring.hpp"
#include "hecketrace/presentation.hpp"
#include "hecketrace/word.hpp"

namespace hecketrace {

/// Ring context for Q[Gamma] keyed by realized matrices. Fox calculus is
/// written against this interface so the same code runs over matrix-keyed
/// and word-keyed group rings.
struct MatrixRingCtx {
    const Presentation* pres;

    using Key = Mat2;
    using Elem = FormalSum<Mat2>;

    Key one_key() const { return Mat2(); }
    Key gen_power(int gen, long long exp) const {
        const auto& gi = pres->generator(gen);
        if (!gi.matrix)
            throw std::invalid_argument("matrix ring context needs realized generators (" + gi.name + ")");
        return gi.matrix->pow(exp);
    }
    Key mul_key(const Key& x, const Key& y) const { return x * y; }
    Key key_of_word(const Word& w) const { return pres->word_to_matrix(w); }
    Elem one() const { return Elem(one_key()); }
    Elem mul(const Elem& x, const Elem& y) const { return x * y; }
};

/// Ring context for the word-keyed group ring. Keys are words reduced freely
/// and modulo the finite generator orders, which is a normal form for cusped
/// presentations (free products of cyclic groups). For surface groups the
/// keys are plain reduced words, i.e. the free-group ring; equalities checked
/// there are sufficient for the identities this library verifies, which all
/// hold at that level.
struct WordRingCtx {
    const Presentation* pres;

    using Key = Word;
    using Elem = FormalSum<Word>;

    Key one_key() const { return Word(); }
    Key gen_power(int gen, long long exp) const { return pres->reduce_word(Word::generator(gen, exp)); }
    Key mul_key(const Key& x, const Key& y) const { return pres->reduce_word(x * y); }
    Key key_of_word(const Word& w) const { return pres->reduce_word(w); }
    Elem one() const { return Elem(one_key()); }
    Elem mul(const Elem& x, const Elem& y) const {
        Elem r;
        for (const auto& [kx, cx] : x.terms())
            for (const auto& [ky, cy] : y.terms()) r.add_term(mul_key(kx, ky), cx * cy);
        return r;
    }
};

template <class Ctx>
typename Ctx::Elem right_mul_key(const Ctx& ctx, const typename Ctx::Elem& x, const typename Ctx::Key& k) {
    typename Ctx::Elem r;
    for (const auto& [key, c] : x.terms()) r.add_term(ctx.mul_key(key, k), c);
    return r;
}

template <class Ctx>
typename Ctx::Elem left_mul_key(const Ctx& ctx, const typename Ctx::Key& k, const typename Ctx::Elem& x) {
    typename Ctx::Elem r;
    for (const auto& [key, c] : x.terms()) r.add_term(ctx.mul_key(k, key), c);
    return r;
}

namespace detail {

/// d(g^e)/dg = 1 + g + ... + g^{e-1} for e > 0, and -(g^{-1} + ... + g^{e})
/// for e < 0, which is what the decomposition 1 - g^e = (1 - g) * d(g^e)/dg
/// forces. In particular d(g^{-1})/dg = -g^{-1}.
template <class Ctx>
typename Ctx::Elem syllable_derivative(const Ctx& ctx, int gen, long long exp) {
    typename Ctx::Elem r;
    if (exp > 0) {
        for (long long t = 0; t < exp; ++t) r.add_term(ctx.gen_power(gen, t), Rat(1));
    } else {
        for (long long t = 1; t <= -exp; ++t) r.add_term(ctx.gen_power(gen, -t), Rat(-1));
    }
    return r;
}

}  // namespace detail

/// Fox derivative dw/dg_i as an element of the ring defined by the context,
/// extended from generators by the derivation rule d(gh) = dh + dg * h.
template <class Ctx>
typename Ctx::Elem fox_derivative(const Ctx& ctx, const Word& w, int gen) {
    typename Ctx::Elem result;
    typename Ctx::Key suffix = ctx.one_key();
    const auto& syls = w.syllables();
    for (auto it = syls.rbegin(); it != syls.rend(); ++it) {
        if (it->gen == gen) result += right_mul_key(ctx, detail::syllable_derivative(ctx, gen, it->exp), suffix);
        suffix = ctx.mul_key(ctx.gen_power(it->gen, it->exp), suffix);
    }
    return result;
}

/// Gradient (dw/dg_1, ..., dw/dg_n), sharing the suffix walk across components.
template <class Ctx>
std::vector<typename Ctx::Elem> fox_gradient(const Ctx& ctx, const Word& w) {
    const int n = ctx.pres->generator_count();
    std::vector<typename Ctx::Elem> grad(n);
    typename Ctx::Key suffix = ctx.one_key();
    const auto& syls = w.syllables();
    for (auto it = syls.rbegin(); it != syls.rend(); ++it) {
        grad[it->gen] += right_mul_key(ctx, detail::syllable_derivative(ctx, it->gen, it->exp), suffix);
        suffix = ctx.mul_key(ctx.gen_power(it->gen, it->exp), suffix);
    }
    return grad;
}

/// Exact check of the defining decomposition 1 - w = sum_i (1 - g_i) dw/dg_i.
template <class Ctx>
bool check_decomposition(const Ctx& ctx, const Word& w) {
    auto grad = fox_gradient(ctx, w);
    typename Ctx::Elem rhs;
    for (int i = 0; i < ctx.pres->generator_count(); ++i) {
        typename Ctx::Elem one_minus_gi = ctx.one();
        one_minus_gi.add_term(ctx.gen_power(i, 1), Rat(-1));
        rhs += ctx.mul(one_minus_gi, grad[i]);
    }
    typename Ctx::Elem lhs = ctx.one();
    lhs.add_term(ctx.key_of_word(w), Rat(-1));
    return lhs == rhs;
}

/// Gradients of all relators. For a cusped presentation component i of the
/// i-th gradient is 1 + g_i + ... + g_i^{m_i - 1} and the rest vanish.
template <class Ctx>
std::vector<std::vector<typename Ctx::Elem>> relator_gradients(const Ctx& ctx) {
    std::vector<std::vector<typename Ctx::Elem>> grads;
    grads.reserve(ctx.pres->relators().size());
    for (const auto& r : ctx.pres->relators()) grads.push_back(fox_gradient(ctx, r));
    return grads;
}

}  // namespace hecketrace
