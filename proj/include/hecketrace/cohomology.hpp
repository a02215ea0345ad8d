#pragma once

#include <vector>

#include "hecketrace/cosets.hpp"
#include "hecketrace/fox.hpp"
#include "hecketrace/hecke.hpp"
#include "hecketrace/linalg.hpp"
#include "hecketrace/module_rep.hpp"

namespace hecketrace {

/// Basis (rows) of H^0(Gamma, V) = V^Gamma.
inline RatMat invariants_basis(const Presentation& pres, const ModuleRep& mod) {
    const int d = mod.dim();
    RatMat conditions(d, 0);
    for (int i = 0; i < pres.generator_count(); ++i) {
        RatMat gi = mod.act_word(pres, Word::generator(i));
        conditions = hstack(conditions, gi - RatMat::identity(d));
    }
    if (conditions.cols() == 0) return RatMat::identity(d);
    return left_kernel_basis(conditions);
}

/// Cocycle and coboundary bases inside V^n, identified with rows of length
/// n*d. A cocycle is determined by its generator values (v_1, ..., v_n); the
/// relator conditions come from phi(r) = sum_i phi(g_i) | dr/dg_i = 0.
struct CocycleSpace {
    RatMat z1;  // basis rows of Z^1
    RatMat b1;  // basis rows of B^1
    int n = 0;
    int d = 0;

    int h1_dim() const { return z1.rows() - b1.rows(); }
};

inline CocycleSpace cocycle_space(const Presentation& pres, const ModuleRep& mod) {
    const int n = pres.generator_count();
    const int d = mod.dim();

    // Relator conditions: for each relator r, sum_i v_i * act(dr/dg_i) = 0.
    // The columns of the condition matrix are grouped by relator.
    WordRingCtx wctx{&pres};
    RatMat conditions(n * d, 0);
    for (const auto& r : pres.relators()) {
        auto grad = fox_gradient(wctx, r);
        RatMat cond(n * d, d);
        for (int i = 0; i < n; ++i) {
            RatMat block = mod.act_word_elem(pres, grad[i]);
            for (int row = 0; row < d; ++row)
                for (int col = 0; col < d; ++col) cond(i * d + row, col) = block(row, col);
        }
        conditions = hstack(conditions, cond);
    }
    RatMat z1 = conditions.cols() == 0 ? RatMat::identity(n * d) : left_kernel_basis(conditions);

    // B^1 = image of v -> (v | (1 - g_1), ..., v | (1 - g_n)).
    RatMat b_gen(d, n * d);
    for (int i = 0; i < n; ++i) {
        RatMat block = RatMat::identity(d) - mod.act_word(pres, Word::generator(i));
        for (int row = 0; row < d; ++row)
            for (int col = 0; col < d; ++col) b_gen(row, i * d + col) = block(row, col);
    }
    RatMat b1 = row_space_basis(b_gen);

    if (!row_space_contains(z1, b1)) throw InternalCheckError("cocycle_space: B^1 not contained in Z^1");
    return {row_space_basis(z1), b1, n, d};
}

/// Trace of v -> v | T_Sigma restricted to V^Gamma.
inline Rat hecke_trace_h0(const CosetSystem& cs, const Presentation& pres, const ModuleRep& mod) {
    RatMat inv = invariants_basis(pres, mod);
    if (inv.rows() == 0) return Rat(0);
    RatMat op = mod.act_elem(cs.t_sigma());
    Rat tr(0);
    for (int i = 0; i < inv.rows(); ++i) {
        std::vector<Rat> image(inv.cols());
        for (int j = 0; j < inv.cols(); ++j) {
            Rat s(0);
            for (int t = 0; t < inv.cols(); ++t) s += inv(i, t) * op(t, j);
            image[j] = s;
        }
        auto coords = coordinates_in_rows(inv, image);
        if (!coords) throw InternalCheckError("hecke_trace_h0: V^Gamma is not T_Sigma-stable");
        tr += (*coords)[i];
    }
    return tr;
}

/// The (n d) x (n d) matrix of the double-coset action on V^n:
/// (v | [Sigma])_i = sum_j v_j | d_Sigma g_i / d g_j.
inline RatMat hecke_operator_on_vn(const Presentation& pres, const ModuleRep& mod,
                                   const SigmaDerivativeMatrix& sdm) {
    const int n = pres.generator_count();
    const int d = mod.dim();
    RatMat h(n * d, n * d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatMat block = mod.act_elem(sdm.entry(i, j));
            for (int row = 0; row < d; ++row)
                for (int col = 0; col < d; ++col) h(j * d + row, i * d + col) = block(row, col);
        }
    return h;
}

/// Trace of [Sigma] on H^1 = Z^1/B^1, computed by extending a basis of B^1
/// to Z^1 and reading off the block of the induced map on the extension.
/// Stability of both Z^1 and B^1 is asserted first; a failure there would
/// mean the Sigma-derivatives are wrong.
inline Rat hecke_trace_h1(const Presentation& pres, const ModuleRep& mod, const SigmaDerivativeMatrix& sdm) {
    CocycleSpace cs1 = cocycle_space(pres, mod);
    RatMat h = hecke_operator_on_vn(pres, mod, sdm);

    RatMat z_img = cs1.z1 * h;
    if (!row_space_contains(cs1.z1, z_img)) throw InternalCheckError("hecke_trace_h1: Z^1 not stable");
    RatMat b_img = cs1.b1 * h;
    if (!row_space_contains(cs1.b1, b_img)) throw InternalCheckError("hecke_trace_h1: B^1 not stable");

    // Extend B^1-basis to Z^1 by greedily adding independent Z^1 rows.
    RatMat combined = cs1.b1;
    std::vector<int> extension;
    for (int i = 0; i < cs1.z1.rows() && combined.rows() < cs1.z1.rows(); ++i) {
        RatMat probe(1, cs1.z1.cols());
        probe.set_row(0, cs1.z1.row(i));
        RatMat trial = vstack(combined, probe);
        if (rank(trial) > combined.rows()) {
            combined = trial;
            extension.push_back(i);
        }
    }
    if (combined.rows() != cs1.z1.rows())
        throw InternalCheckError("hecke_trace_h1: basis extension failed");

    Rat tr(0);
    const int b_count = cs1.b1.rows();
    for (std::size_t e = 0; e < extension.size(); ++e) {
        std::vector<Rat> image(cs1.z1.cols());
        const int src = extension[e];
        for (int j = 0; j < cs1.z1.cols(); ++j) {
            Rat s(0);
            for (int t = 0; t < cs1.z1.cols(); ++t) s += cs1.z1(src, t) * h(t, j);
            image[j] = s;
        }
        auto coords = coordinates_in_rows(combined, image);
        if (!coords) throw InternalCheckError("hecke_trace_h1: image left Z^1");
        tr += (*coords)[b_count + e];
    }
    return tr;
}

inline Rat hecke_trace_h1(const CosetSystem& cs, const Presentation& pres, const ModuleRep& mod) {
    return hecke_trace_h1(pres, mod, sigma_derivatives(cs, pres));
}

/// Coinvariant description of H^2 for surface groups: V / V*I_Gamma where the
/// denominator is the smallest right-stable subspace containing all rows of
/// (1 - g_i).
inline int h2_dim_surface(const Presentation& pres, const ModuleRep& mod) {
    const int d = mod.dim();
    RatMat span(0, d);
    for (int i = 0; i < pres.generator_count(); ++i) {
        RatMat block = RatMat::identity(d) - mod.act_word(pres, Word::generator(i));
        span = row_space_basis(vstack(span, block));
    }
    for (bool grew = true; grew;) {
        grew = false;
        for (int i = 0; i < pres.generator_count(); ++i) {
            for (int sgn : {1, -1}) {
                RatMat pushed = span * mod.act_word(pres, Word::generator(i, sgn));
                RatMat bigger = row_space_basis(vstack(span, pushed));
                if (bigger.rows() > span.rows()) {
                    span = bigger;
                    grew = true;
                }
            }
        }
    }
    return d - span.rows();
}

/// Both sides of the Euler-characteristic formula. For cusped groups H^2 = 0
/// and the elliptic terms contribute tr(g_i^a, V)/m_i for 1 <= a < m_i; for
/// surface groups the formula applies when H^2 = 0 or H^2 = V, and other
/// regimes are reported as unsupported rather than asserted.
struct EulerReport {
    int h0 = 0, h1 = 0, h2 = 0;
    Rat lhs;  // alternating sum of dimensions
    Rat rhs;  // -area * dim V + elliptic terms
    bool supported = true;
    bool equal = false;
};

inline EulerReport euler_characteristic(const Presentation& pres, const ModuleRep& mod) {
    EulerReport rep;
    rep.h0 = invariants_basis(pres, mod).rows();
    CocycleSpace cs1 = cocycle_space(pres, mod);
    rep.h1 = cs1.h1_dim();
    rep.h2 = pres.cusps() >= 1 ? 0 : h2_dim_surface(pres, mod);
    rep.lhs = Rat(rep.h0 - rep.h1 + rep.h2);

    rep.rhs = -pres.euler_area() * Rat(mod.dim());
    const int l = static_cast<int>(pres.elliptic_orders().size());
    for (int i = 0; i < l; ++i) {
        int m = pres.elliptic_orders()[i];
        for (int a = 1; a < m; ++a) rep.rhs += mod.act_word(pres, Word::generator(i, a)).trace() / Rat(m);
    }

    if (pres.cusps() == 0 && rep.h2 != 0 && rep.h2 != mod.dim()) {
        rep.supported = false;
        rep.equal = rep.lhs == rep.rhs;
        return rep;
    }
    rep.equal = rep.lhs == rep.rhs;
    if (!rep.equal)
        throw InternalCheckError("euler_characteristic: the two sides disagree (" + rat_to_string(rep.lhs) +
                                 " vs " + rat_to_string(rep.rhs) + ")");
    return rep;
}

}  // namespace hecketrace
