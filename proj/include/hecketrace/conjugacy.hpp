#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hecketrace/cosets.hpp"
#include "hecketrace/group_ring.hpp"
#include "hecketrace/hecke.hpp"
#include "hecketrace/presentation.hpp"
#include "hecketrace/quadratic_forms.hpp"

namespace hecketrace {

enum class MatClass { Scalar, Elliptic, Parabolic, SplitHyperbolic, NonsplitHyperbolic };

inline const char* mat_class_name(MatClass c) {
    switch (c) {
        case MatClass::Scalar: return "scalar";
        case MatClass::Elliptic: return "elliptic";
        case MatClass::Parabolic: return "parabolic";
        case MatClass::SplitHyperbolic: return "split-hyperbolic";
        case MatClass::NonsplitHyperbolic: return "nonsplit-hyperbolic";
    }
    return "?";
}

/// Type of M by the discriminant t^2 - 4n; split hyperbolic means square
/// discriminant, which over PSL2(Z) says the two fixed points are cusps.
inline MatClass classify(const Mat2& m) {
    if (m.is_scalar()) return MatClass::Scalar;
    Int disc = m.trace() * m.trace() - 4 * m.det();
    if (disc < 0) return MatClass::Elliptic;
    if (disc == 0) return MatClass::Parabolic;
    return is_perfect_square(disc) ? MatClass::SplitHyperbolic : MatClass::NonsplitHyperbolic;
}

namespace detail {

/// Extended gcd: returns (g, x, y) with x u + y v = g = gcd(u, v) >= 0.
inline std::array<Int, 3> egcd(Int u, Int v) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (v != 0) {
        Int q = u / v;
        Int r = u - q * v;
        u = v;
        v = r;
        Int x2 = x0 - q * x1, y2 = y0 - q * y1;
        x0 = x1;
        y0 = y1;
        x1 = x2;
        y1 = y2;
    }
    if (u < 0) {
        u = -u;
        x0 = -x0;
        y0 = -y0;
    }
    return {u, x0, y0};
}

/// Element of PSL2(Z) sending the cusp u/v (lowest terms) to infinity.
inline Mat2 cusp_to_infinity(const Int& u, const Int& v) {
    auto [g, x, y] = egcd(u, v);
    if (g != 1) throw std::invalid_argument("cusp_to_infinity: u/v not in lowest terms");
    // bottom row (v, -u) kills the cusp; top row completes det 1.
    return Mat2(-x, -y, v, -u);
}

/// Entries of the trace-positive representative of m.
struct RawMat {
    Int a, b, c, d;
};
inline RawMat trace_positive(const Mat2& m) {
    if (m.trace() < 0) return {-m.a(), -m.b(), -m.c(), -m.d()};
    return {m.a(), m.b(), m.c(), m.d()};
}

/// Integer kernel of a 4x4 matrix by unimodular column reduction. The kernel
/// of an integer matrix is saturated, so the zero columns of the echelon give
/// a basis of all integral solutions.
inline std::vector<std::array<Int, 4>> integer_kernel_4x4(std::array<std::array<Int, 4>, 4> k) {
    std::array<std::array<Int, 4>, 4> c{};
    for (int i = 0; i < 4; ++i) c[i][i] = 1;
    int lead = 0;
    for (int row = 0; row < 4 && lead < 4; ++row) {
        for (;;) {
            int best = -1;
            for (int j = lead; j < 4; ++j)
                if (k[row][j] != 0 && (best < 0 || abs(k[row][j]) < abs(k[row][best]))) best = j;
            if (best < 0) break;
            bool cleared = true;
            for (int j = lead; j < 4; ++j) {
                if (j == best || k[row][j] == 0) continue;
                Int q = k[row][j] / k[row][best];
                for (int i = 0; i < 4; ++i) {
                    k[i][j] -= q * k[i][best];
                    c[i][j] -= q * c[i][best];
                }
                if (k[row][j] != 0) cleared = false;
            }
            if (cleared) {
                if (best != lead)
                    for (int i = 0; i < 4; ++i) {
                        std::swap(k[i][best], k[i][lead]);
                        std::swap(c[i][best], c[i][lead]);
                    }
                ++lead;
                break;
            }
        }
    }
    std::vector<std::array<Int, 4>> kernel;
    for (int j = lead; j < 4; ++j) kernel.push_back({c[0][j], c[1][j], c[2][j], c[3][j]});
    return kernel;
}

/// Integral lattice {X : X A = B X} for raw integer matrices A, B.
inline std::vector<std::array<Int, 4>> commuting_lattice(const RawMat& a, const RawMat& b) {
    // X = [[x0, x1],[x2, x3]]; rows of the system are the entries of XA - BX.
    std::array<std::array<Int, 4>, 4> k{};
    // entry (0,0): x0 a.a + x1 a.c - (b.a x0 + b.b x2)
    k[0] = {a.a - b.a, a.c, -b.b, Int(0)};
    // entry (0,1): x0 a.b + x1 a.d - (b.a x1 + b.b x3)
    k[1] = {a.b, a.d - b.a, Int(0), -b.b};
    // entry (1,0): x2 a.a + x3 a.c - (b.c x0 + b.d x2)
    k[2] = {-b.c, Int(0), a.a - b.d, a.c};
    // entry (1,1): x2 a.b + x3 a.d - (b.c x1 + b.d x3)
    k[3] = {Int(0), -b.c, a.b, a.d - b.d};
    return integer_kernel_4x4(k);
}

inline Int det_of(const std::array<Int, 4>& x) { return x[0] * x[3] - x[1] * x[2]; }

/// Canonical data of a parabolic element: gamma1 * M * gamma1^{-1} is upper
/// triangular [[h, shift],[0, h]] with h > 0, and the stabilizer of infinity
/// in PSL2(Z) is generated by T, which fixes the normal form. So (h, shift)
/// is a complete conjugacy invariant.
struct ParabolicForm {
    Int h, shift;
    Mat2 normalizer;
};

inline ParabolicForm parabolic_form(const Mat2& m) {
    RawMat r = trace_positive(m);
    Mat2 gamma1;
    if (r.c != 0) {
        // fixed point (a - d) / (2c)
        Int num = r.a - r.d, den = 2 * r.c;
        auto [g, x, y] = egcd(num, den);
        gamma1 = cusp_to_infinity(num / g, den / g);
        (void)x;
        (void)y;
    }
    Mat2 c = gamma1 * m * gamma1.inverse();
    if (c.c() != 0 || c.a() != c.d()) throw InternalCheckError("parabolic_form: normalization failed");
    return {c.a(), c.b(), gamma1};
}

/// Canonical data of a split hyperbolic element: for each of the two fixed
/// cusps, send it to infinity and translate the off-diagonal entry into
/// [0, |d - a|); the invariant is the lexicographically smaller triple.
struct SplitForm {
    Int lambda, shift, lambda2;
    Mat2 normalizer;

    std::array<Int, 3> key() const { return {lambda, shift, lambda2}; }
};

inline std::vector<SplitForm> split_forms(const Mat2& m) {
    RawMat r = trace_positive(m);
    Int e;
    Int disc = (r.a + r.d) * (r.a + r.d) - 4 * (r.a * r.d - r.b * r.c);
    if (!is_perfect_square(disc, &e) || e == 0)
        throw std::invalid_argument("split_forms: element is not split hyperbolic");

    std::vector<Mat2> normalizers;
    if (r.c != 0) {
        for (int sgn : {1, -1}) {
            Int num = (r.a - r.d) + sgn * e, den = 2 * r.c;
            auto [g, x, y] = egcd(num, den);
            (void)x;
            (void)y;
            normalizers.push_back(cusp_to_infinity(num / g, den / g));
        }
    } else {
        normalizers.push_back(Mat2());  // infinity is fixed
        Int num = r.b, den = r.d - r.a;
        auto [g, x, y] = egcd(num, den);
        (void)x;
        (void)y;
        normalizers.push_back(cusp_to_infinity(num / g, den / g));
    }

    std::vector<SplitForm> forms;
    for (const auto& gamma1 : normalizers) {
        Mat2 c = gamma1 * m * gamma1.inverse();
        if (c.c() != 0) throw InternalCheckError("split_forms: normalization failed");
        Int delta = c.d() - c.a();
        Int abs_delta = abs(delta);
        Int shift = ((c.b() % abs_delta) + abs_delta) % abs_delta;
        Int k = (shift - c.b()) / delta;
        Mat2 tk = Mat2(1, k, 0, 1);
        forms.push_back({c.a(), shift, c.d(), tk * gamma1});
    }
    return forms;
}

}  // namespace detail

struct ConjugacyResult {
    bool conjugate = false;
    std::optional<Mat2> witness;  // verified: witness * A * witness^{-1} == B
};

/// Decides whether A and B are conjugate in PSL2(Z). Same projective trace
/// is necessary; then the integral solutions of gamma A = +-B gamma form a
/// lattice on which the determinant is a binary quadratic form, and A ~ B iff
/// that form represents 1 (definite case: bounded enumeration; indefinite
/// non-square: principal cycle membership). Parabolic and split hyperbolic
/// elements are compared through cusp-normalized canonical forms instead.
inline ConjugacyResult conjugacy_test(const Mat2& a, const Mat2& b) {
    if (a.det() != b.det()) throw std::invalid_argument("conjugacy_test: determinants differ");

    auto verified = [&](const Mat2& w) -> ConjugacyResult {
        if (!(w * a * w.inverse() == b)) throw InternalCheckError("conjugacy_test: witness failed verification");
        return {true, w};
    };

    if (a.is_scalar() || b.is_scalar()) {
        if (a == b) return verified(Mat2());
        return {};
    }
    if (abs(a.trace()) != abs(b.trace())) return {};
    MatClass cls = classify(a);
    if (cls != classify(b)) return {};

    switch (cls) {
        case MatClass::Parabolic: {
            auto fa = detail::parabolic_form(a);
            auto fb = detail::parabolic_form(b);
            if (fa.h == fb.h && fa.shift == fb.shift)
                return verified(fb.normalizer.inverse() * fa.normalizer);
            return {};
        }
        case MatClass::SplitHyperbolic: {
            auto fas = detail::split_forms(a);
            auto fbs = detail::split_forms(b);
            for (const auto& fa : fas)
                for (const auto& fb : fbs)
                    if (fa.key() == fb.key()) return verified(fb.normalizer.inverse() * fa.normalizer);
            return {};
        }
        case MatClass::Elliptic:
        case MatClass::NonsplitHyperbolic: {
            detail::RawMat ra{a.a(), a.b(), a.c(), a.d()};
            std::vector<detail::RawMat> b_variants;
            if (a.trace() == b.trace()) b_variants.push_back({b.a(), b.b(), b.c(), b.d()});
            if (a.trace() == -b.trace()) b_variants.push_back({-b.a(), -b.b(), -b.c(), -b.d()});
            for (const auto& rb : b_variants) {
                auto lattice = detail::commuting_lattice(ra, rb);
                if (lattice.size() != 2) continue;
                const auto& p = lattice[0];
                const auto& q = lattice[1];
                std::array<Int, 4> pq{p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]};
                BQF form{detail::det_of(p), detail::det_of(pq) - detail::det_of(p) - detail::det_of(q),
                         detail::det_of(q)};
                std::optional<std::pair<Int, Int>> sol;
                if (cls == MatClass::Elliptic)
                    sol = definite_represents_one(form);
                else
                    sol = indefinite_represents_one(form);
                if (sol) {
                    auto [x, y] = *sol;
                    Mat2 w(x * p[0] + y * q[0], x * p[1] + y * q[1], x * p[2] + y * q[2], x * p[3] + y * q[3]);
                    return verified(w);
                }
            }
            return {};
        }
        case MatClass::Scalar:;  // handled above
    }
    return {};
}

/// Geometric weight w(M) over the modular group: -area/2pi for scalars,
/// 1/|Gamma_M| for elliptic (order 2 over the class of i, 3 over rho, else 1,
/// decided by reducing the fixed-point form and comparing against the
/// principal forms of discriminant -4 and -3), -1 for split hyperbolic,
/// 0 for parabolic and nonsplit hyperbolic (infinite centralizer).
inline Rat predicted_w(const Mat2& m, const Presentation& pres) {
    if (!pres.is_modular()) throw std::invalid_argument("predicted_w: centralizer orders need the modular group");
    switch (classify(m)) {
        case MatClass::Scalar: return -pres.euler_area();
        case MatClass::Parabolic: return Rat(0);
        case MatClass::NonsplitHyperbolic: return Rat(0);
        case MatClass::SplitHyperbolic: return Rat(-1);
        case MatClass::Elliptic: {
            // fixed point form (c, d - a, -b), primitive, positive leading term
            Int fa = m.c(), fb = m.d() - m.a(), fc = -m.b();
            auto [g1, x1, y1] = detail::egcd(fa, fb);
            auto [g, x, y] = detail::egcd(g1, fc);
            (void)x1;
            (void)y1;
            (void)x;
            (void)y;
            fa /= g;
            fb /= g;
            fc /= g;
            if (fa < 0) {
                fa = -fa;
                fb = -fb;
                fc = -fc;
            }
            BQF reduced = reduce_definite(BQF{fa, fb, fc});
            if (reduced == BQF{1, 0, 1}) return Rat(1, 2);   // point class of i
            if (reduced == BQF{1, 1, 1}) return Rat(1, 3);   // point class of rho
            return Rat(1);
        }
    }
    return Rat(0);
}

/// Partition of the support of a ring element into conjugacy classes with
/// class sums epsilon (the invariants of the trace formula).
struct ConjClass {
    Mat2 rep;  // minimal member in the matrix order
    std::vector<Mat2> members;
    Rat epsilon;
    MatClass type;
};

struct ClassLedger {
    std::vector<ConjClass> classes;

    Rat total() const {
        Rat t(0);
        for (const auto& c : classes) t += c.epsilon;
        return t;
    }
};

inline ClassLedger class_ledger(const RingElement& x) {
    // Bucket by the conjugacy invariants (|trace|, det) first, then decide
    // pairwise within buckets. Iteration over the ordered support keeps the
    // result deterministic.
    std::map<std::pair<Int, Int>, std::vector<std::pair<Mat2, Rat>>> buckets;
    for (const auto& [m, c] : x.terms()) buckets[{abs(m.trace()), m.det()}].push_back({m, c});

    ClassLedger ledger;
    for (auto& [key, entries] : buckets) {
        std::vector<ConjClass> local;
        for (const auto& [m, coeff] : entries) {
            bool placed = false;
            for (auto& cls : local) {
                if (conjugacy_test(m, cls.rep).conjugate) {
                    cls.members.push_back(m);
                    cls.epsilon += coeff;
                    placed = true;
                    break;
                }
            }
            if (!placed) local.push_back({m, {m}, coeff, classify(m)});
        }
        for (auto& cls : local) ledger.classes.push_back(std::move(cls));
    }
    if (!(ledger.total() == x.degree()))
        throw InternalCheckError("class_ledger: class sums do not add up to the degree");
    return ledger;
}

/// Per-class comparison of epsilon = deg_X T~ against the geometric w(X).
struct EpsReport {
    struct Entry {
        Mat2 rep;
        int size;
        Rat epsilon;
        Rat predicted;
        MatClass type;
        bool pass;
    };
    std::vector<Entry> entries;
    bool all_pass = true;
};

inline EpsReport eps_report(const RingElement& t_tilde, const Presentation& pres) {
    EpsReport rep;
    for (const auto& cls : class_ledger(t_tilde).classes) {
        Rat w = predicted_w(cls.rep, pres);
        bool pass = cls.epsilon == w;
        rep.entries.push_back({cls.rep, static_cast<int>(cls.members.size()), cls.epsilon, w, cls.type, pass});
        rep.all_pass = rep.all_pass && pass;
    }
    return rep;
}

inline EpsReport verify_eps(const CosetSystem& cs, const Presentation& pres) {
    return eps_report(t_tilde_cusped(cs, pres), pres);
}

}  // namespace hecketrace
