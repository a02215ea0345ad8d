#pragma once

#include <map>
#include <vector>

#include "hecketrace/group_ring.hpp"
#include "hecketrace/mat2.hpp"
#include "hecketrace/presentation.hpp"
#include "hecketrace/word.hpp"

namespace hecketrace {

/// Left-coset system for Gamma \ Sigma_n over the modular group, Sigma_n the
/// double coset of integral matrices with determinant n. Base representatives
/// are the Hermite forms [[a,b],[0,d]], ad = n, 0 <= b < d, ordered
/// lexicographically by (a, b); they can be twisted by seeded random words
/// for the representative-independence experiments.
class CosetSystem {
public:
    CosetSystem(const Presentation& pres, long n) : pres_(&pres), n_(n) {
        if (!pres.is_modular())
            throw std::invalid_argument("CosetSystem requires the modular presentation");
        if (n <= 0) throw std::invalid_argument("coset system requires n >= 1");
        for (long a = 1; a <= n; ++a) {
            if (n % a != 0) continue;
            long d = n / a;
            for (long b = 0; b < d; ++b) hermite_.push_back(Mat2(a, b, 0, d));
        }
        for (int i = 0; i < static_cast<int>(hermite_.size()); ++i) index_.emplace(hermite_[i], i);
        twists_.assign(hermite_.size(), Word());
        reps_ = hermite_;
    }

    /// Replaces each representative by w_i * rep_i for seeded random words
    /// w_i of length <= 6. Cosets (and everything intrinsic to them) are
    /// unchanged; the chosen representatives are not.
    void randomize_representatives(std::uint64_t seed) {
        Rng rng(seed);
        for (std::size_t i = 0; i < hermite_.size(); ++i) {
            std::vector<Syllable> syls;
            int len = static_cast<int>(rng.range(1, 6));
            for (int j = 0; j < len; ++j) {
                int gen = static_cast<int>(rng.below(2));
                long long exp = gen == 0 ? 1 : rng.range(1, 2);
                syls.push_back({gen, exp});
            }
            twists_[i] = pres_->reduce_word(Word(std::move(syls)));
            reps_[i] = pres_->word_to_matrix(twists_[i]) * hermite_[i];
        }
    }

    long n() const { return n_; }
    int count() const { return static_cast<int>(reps_.size()); }
    const Mat2& rep(int i) const { return reps_.at(i); }
    const std::vector<Mat2>& reps() const { return reps_; }
    const Presentation& presentation() const { return *pres_; }

    /// T_Sigma = sum of the coset representatives.
    RingElement t_sigma() const {
        RingElement t;
        for (const auto& r : reps_) t.add_term(r, Rat(1));
        return t;
    }

    struct Reduction {
        int index;        // coset of m
        Mat2 gamma;       // m = gamma * rep(index), gamma in Gamma
        Word gamma_word;  // gamma as a word in the presentation generators
    };

    /// Hermite reduction by left Euclidean row operations: every integral
    /// matrix of determinant n lies in exactly one coset.
    Reduction reduce(const Mat2& m) const {
        if (m.det() != n_) throw std::invalid_argument("reduce: matrix determinant differs from coset level");
        Int a = m.a(), b = m.b(), c = m.c(), d = m.d();
        // u * m = hermite form, with u accumulated in SL2(Z).
        Mat2 u;
        while (c != 0) {
            if (abs(a) < abs(c) || a == 0) {
                // swap rows with a sign: multiply by S on the left
                Int na = c, nb = d, nc = -a, nd = -b;
                a = na, b = nb, c = nc, d = nd;
                u = mat_S() * u;
            } else {
                Int q = a / c;  // |a - q c| < |c| after truncation when |a| >= |c|
                a -= q * c;
                b -= q * d;
                u = Mat2(1, -q, 0, 1) * u;
            }
        }
        if (a < 0) {
            a = -a, b = -b, d = -d;  // multiply both rows by -1, still in PSL2
        }
        // 0 <= b < d via powers of T on the left.
        Int q = b / d;
        if (b - q * d < 0) q -= 1;
        if (q != 0) {
            b -= q * d;
            u = Mat2(1, -q, 0, 1) * u;
        }
        auto it = index_.find(Mat2(a, b, Int(0), d));
        if (it == index_.end()) throw InternalCheckError("reduce: Hermite form not among representatives");
        int idx = it->second;
        // m = gamma0 * hermite = gamma0 * twist^{-1} * rep(idx).
        Mat2 gamma = u.inverse() * pres_->word_to_matrix(twists_[idx]).inverse();
        Word gw = pres_->matrix_to_word(gamma);
        if (!(gamma * reps_[idx] == m)) throw InternalCheckError("reduce: decomposition check failed");
        return {idx, gamma, gw};
    }

    struct GammaTau {
        Word gamma;  // gamma_{tau,g} with rep(tau) * g = gamma * rep(target)
        int target;
    };

    /// The unique gamma_{tau,g} in Gamma with rep(tau) * g = gamma * rep(tau g).
    GammaTau gamma_tau(int tau, const Mat2& g) const {
        if (g.det() != 1) throw std::invalid_argument("gamma_tau: g must lie in Gamma");
        Reduction r = reduce(rep(tau) * g);
        if (!(pres_->word_to_matrix(r.gamma_word) * rep(r.index) == rep(tau) * g))
            throw InternalCheckError("gamma_tau: verification failed");
        return {r.gamma_word, r.index};
    }

    GammaTau gamma_tau_generator(int tau, int gen) const {
        return gamma_tau(tau, *pres_->generator(gen).matrix);
    }

    /// Coset index of an arbitrary determinant-n matrix (for deg_tau sums).
    int coset_of(const Mat2& m) const { return reduce(m).index; }

private:
    const Presentation* pres_;
    long n_;
    std::vector<Mat2> hermite_;
    std::vector<Word> twists_;
    std::vector<Mat2> reps_;
    std::map<Mat2, int> index_;
};

}  // namespace hecketrace
