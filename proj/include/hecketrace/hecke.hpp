#pragma once

#include <vector>

#include "hecketrace/cosets.hpp"
#include "hecketrace/fox.hpp"
#include "hecketrace/group_ring.hpp"

namespace hecketrace {

/// The n x n matrix of Sigma-derivatives d_Sigma g_i / d g_j, defined by
/// T_Sigma (1 - g_i) = sum_j (1 - g_j) * entry(i, j). The defining identity
/// is checked exactly on construction.
class SigmaDerivativeMatrix {
public:
    SigmaDerivativeMatrix(int n_gens, std::vector<RingElement> entries)
        : n_(n_gens), entries_(std::move(entries)) {}

    int generator_count() const { return n_; }
    const RingElement& entry(int i, int j) const { return entries_.at(static_cast<std::size_t>(i) * n_ + j); }

private:
    int n_;
    std::vector<RingElement> entries_;  // row-major, entry(i,j) = d_Sigma g_i / d g_j
};

/// d_Sigma g_i / d g_j = sum over source cosets sigma of
/// d(gamma_{sigma,g_i})/d g_j * rep(sigma g_i). Looping over sources instead
/// of targets attaches (sigma g_i)-bar on the right without inverting the
/// coset permutation.
inline SigmaDerivativeMatrix sigma_derivatives(const CosetSystem& cs, const Presentation& pres) {
    const int n = pres.generator_count();
    MatrixRingCtx ctx{&pres};
    std::vector<RingElement> entries(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int sigma = 0; sigma < cs.count(); ++sigma) {
            auto gt = cs.gamma_tau_generator(sigma, i);
            auto grad = fox_gradient(ctx, gt.gamma);
            for (int j = 0; j < n; ++j)
                entries[static_cast<std::size_t>(i) * n + j] += right_mul_key(ctx, grad[j], cs.rep(gt.target));
        }
    }
    SigmaDerivativeMatrix m(n, std::move(entries));

    RingElement t = cs.t_sigma();
    for (int i = 0; i < n; ++i) {
        RingElement lhs = t - t * RingElement(*pres.generator(i).matrix);
        RingElement rhs;
        for (int j = 0; j < n; ++j) {
            RingElement one_minus_gj = ring_one() - RingElement(*pres.generator(j).matrix);
            rhs += one_minus_gj * m.entry(i, j);
        }
        if (!(lhs == rhs))
            throw InternalCheckError("sigma_derivatives: defining identity failed for generator " +
                                     std::to_string(i + 1));
    }
    return m;
}

/// pi_i = (1 + g_i + ... + g_i^{m_i - 1}) / m_i, the idempotent attached to
/// the elliptic generator g_i.
inline RingElement idempotent_pi(const Presentation& pres, int i) {
    const auto& gi = pres.generator(i);
    if (gi.order < 2) throw std::invalid_argument("idempotent_pi: generator has infinite order");
    RingElement sum;
    for (int t = 0; t < gi.order; ++t) sum.add_term(gi.matrix->pow(t), Rat(1));
    return sum / Rat(gi.order);
}

/// Trace-formula element for cusped groups:
/// T~_Sigma = T_Sigma - sum_i d_Sigma g_i/d g_i + sum_{i<=l} pi_i d_Sigma g_i/d g_i.
inline RingElement t_tilde_cusped(const CosetSystem& cs, const Presentation& pres,
                                  const SigmaDerivativeMatrix& sdm) {
    RingElement t = cs.t_sigma();
    const int l = static_cast<int>(pres.elliptic_orders().size());
    for (int i = 0; i < pres.generator_count(); ++i) {
        t -= sdm.entry(i, i);
        if (i < l) t += idempotent_pi(pres, i) * sdm.entry(i, i);
    }
    return t;
}

inline RingElement t_tilde_cusped(const CosetSystem& cs, const Presentation& pres) {
    return t_tilde_cusped(cs, pres, sigma_derivatives(cs, pres));
}

/// Coefficient sums of x over each coset of the system.
inline std::vector<Rat> per_coset_degrees(const CosetSystem& cs, const RingElement& x) {
    std::vector<Rat> deg(cs.count(), Rat(0));
    for (const auto& [m, c] : x.terms()) deg[cs.coset_of(m)] += c;
    return deg;
}

/// The period-polynomial-compatible variant for the modular group:
/// T~'_Sigma = T_Sigma - sum_i (1 - g_i) d_Sigma g_i/d g_i X_i with
/// X_1 = 1/2 and X_2 = (2 + g_2)/3, the elements solving 1 - pi_i = (1 - g_i) X_i.
/// Checks deg_tau = 1 on every coset and the projection identities
/// pi_i T~' = pi_i T_Sigma pi_j (i != j) before returning.
inline RingElement t_tilde_prime(const CosetSystem& cs, const Presentation& pres,
                                 const SigmaDerivativeMatrix& sdm) {
    if (!pres.is_modular()) throw std::invalid_argument("t_tilde_prime is defined for the modular group");
    const Mat2 u = *pres.generator(1).matrix;

    std::vector<RingElement> x_elem(2);
    x_elem[0] = ring_one() / Rat(2);
    x_elem[1] = (ring_one() * Rat(2) + RingElement(u)) / Rat(3);
    for (int i = 0; i < 2; ++i) {
        RingElement one_minus_gi = ring_one() - RingElement(*pres.generator(i).matrix);
        if (!(ring_one() - idempotent_pi(pres, i) == one_minus_gi * x_elem[i]))
            throw InternalCheckError("t_tilde_prime: X_i relation failed");
    }

    RingElement t = cs.t_sigma();
    for (int i = 0; i < 2; ++i) {
        RingElement one_minus_gi = ring_one() - RingElement(*pres.generator(i).matrix);
        t -= one_minus_gi * sdm.entry(i, i) * x_elem[i];
    }

    for (const Rat& d : per_coset_degrees(cs, t))
        if (d != 1) throw InternalCheckError("t_tilde_prime: per-coset degree is not 1");
    RingElement pi1 = idempotent_pi(pres, 0), pi2 = idempotent_pi(pres, 1);
    RingElement ts = cs.t_sigma();
    if (!(pi1 * t == pi1 * ts * pi2) || !(pi2 * t == pi2 * ts * pi1))
        throw InternalCheckError("t_tilde_prime: projection identity failed");
    return t;
}

inline RingElement t_tilde_prime(const CosetSystem& cs, const Presentation& pres) {
    return t_tilde_prime(cs, pres, sigma_derivatives(cs, pres));
}

}  // namespace hecketrace
