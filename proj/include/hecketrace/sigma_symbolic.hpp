#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hecketrace/cosets.hpp"
#include "hecketrace/fox.hpp"
#include "hecketrace/group_ring.hpp"
#include "hecketrace/presentation.hpp"

namespace hecketrace {

/// Element gamma * tau-bar of a double coset, with gamma a word in normal
/// form and tau-bar an abstract coset label. For the trivial double coset the
/// label is always 0 and keys are just group elements.
struct SigmaKey {
    Word gamma;
    int coset = 0;

    friend bool operator==(const SigmaKey&, const SigmaKey&) = default;
    friend auto operator<=>(const SigmaKey& x, const SigmaKey& y) {
        if (auto c = x.coset <=> y.coset; c != 0) return c;
        return x.gamma <=> y.gamma;
    }

    friend std::ostream& operator<<(std::ostream& os, const SigmaKey& k) {
        return os << k.gamma << "@" << k.coset;
    }
};

using SymElem = FormalSum<SigmaKey>;

/// Thrown when externally supplied coset data fails a verification that
/// would hold for genuine double-coset tables.
struct InconsistentCosetData : std::runtime_error {
    explicit InconsistentCosetData(const std::string& what) : std::runtime_error(what) {}
};

/// Abstract coset tables for Gamma \ Sigma: for every coset sigma and
/// generator g, the word gamma_{sigma,g} and target with
/// rep_sigma * g = gamma_{sigma,g} * rep_{sigma g}. Inverse steps are derived.
/// Words are kept in the presentation's normal form, which is exact for
/// cusped groups; for surface groups everything runs in the free-group ring,
/// where all identities verified here hold on the nose.
class SymbolicCosets {
public:
    struct Step {
        Word gamma;
        int target = 0;
    };

    /// The trivial double coset Sigma = Gamma: one coset, gamma = g.
    static SymbolicCosets trivial(const Presentation& pres) {
        SymbolicCosets sc(pres, 1);
        for (int g = 0; g < pres.generator_count(); ++g) {
            sc.fwd_[g][0] = {pres.reduce_word(Word::generator(g)), 0};
            sc.inv_[g][0] = {pres.reduce_word(Word::generator(g, -1)), 0};
        }
        return sc;
    }

    /// Tables from externally supplied data; checks that every (coset,
    /// generator) pair is covered and that tau -> tau g permutes the cosets.
    static SymbolicCosets from_spec(const Presentation& pres, const CosetTablesSpec& spec) {
        SymbolicCosets sc(pres, spec.count);
        std::vector<std::vector<bool>> seen(pres.generator_count(), std::vector<bool>(spec.count, false));
        for (const auto& e : spec.entries) {
            if (e.coset < 0 || e.coset >= spec.count || e.target < 0 || e.target >= spec.count)
                throw InconsistentCosetData("coset index out of range");
            if (e.gen < 0 || e.gen >= pres.generator_count())
                throw InconsistentCosetData("generator index out of range in coset data");
            if (seen[e.gen][e.coset]) throw InconsistentCosetData("duplicate coset_gamma entry");
            seen[e.gen][e.coset] = true;
            sc.fwd_[e.gen][e.coset] = {pres.reduce_word(e.gamma), e.target};
        }
        for (int g = 0; g < pres.generator_count(); ++g) {
            std::vector<bool> hit(spec.count, false);
            for (int c = 0; c < spec.count; ++c) {
                if (!seen[g][c])
                    throw InconsistentCosetData("missing coset_gamma entry for coset " + std::to_string(c) +
                                                ", generator " + std::to_string(g + 1));
                int t = sc.fwd_[g][c].target;
                if (hit[t]) throw InconsistentCosetData("tau -> tau g is not a permutation");
                hit[t] = true;
                sc.inv_[g][t] = {pres.reduce_word(sc.fwd_[g][c].gamma.inverse()), c};
            }
        }
        return sc;
    }

    /// Word-level tables of a concrete modular coset system (used to
    /// cross-check the symbolic machinery against the matrix one).
    static SymbolicCosets from_modular(const Presentation& pres, const CosetSystem& cs) {
        SymbolicCosets sc(pres, cs.count());
        for (int g = 0; g < pres.generator_count(); ++g)
            for (int c = 0; c < cs.count(); ++c) {
                auto gt = cs.gamma_tau_generator(c, g);
                sc.fwd_[g][c] = {gt.gamma, gt.target};
                sc.inv_[g][gt.target] = {pres.reduce_word(gt.gamma.inverse()), c};
            }
        return sc;
    }

    const Presentation& presentation() const { return *pres_; }
    int count() const { return count_; }
    const Step& step(int coset, int gen, bool inverse) const {
        return inverse ? inv_.at(gen).at(coset) : fwd_.at(gen).at(coset);
    }

    /// T_Sigma = sum over cosets of the representative.
    SymElem t_sigma() const {
        SymElem t;
        for (int c = 0; c < count_; ++c) t.add_term({Word(), c}, Rat(1));
        return t;
    }

    /// (gamma, sigma) * w for a word w, folded one letter at a time through
    /// the tables.
    SymElem right_mul_word(const SymElem& x, const Word& w) const {
        SymElem r;
        for (const auto& [key, c] : x.terms()) {
            Word acc = key.gamma;
            int coset = key.coset;
            for (const auto& s : w.syllables()) {
                for (long long t = 0; t < (s.exp >= 0 ? s.exp : -s.exp); ++t) {
                    const Step& st = step(coset, s.gen, s.exp < 0);
                    acc = pres_->reduce_word(acc * st.gamma);
                    coset = st.target;
                }
            }
            r.add_term({acc, coset}, c);
        }
        return r;
    }

    SymElem left_mul_word(const Word& w, const SymElem& x) const {
        SymElem r;
        for (const auto& [key, c] : x.terms()) r.add_term({pres_->reduce_word(w * key.gamma), key.coset}, c);
        return r;
    }

    /// Product of a Z[Gamma] element with a Z[Sigma] element.
    SymElem left_mul_elem(const FormalSum<Word>& g, const SymElem& x) const {
        SymElem r;
        for (const auto& [w, cw] : g.terms()) {
            SymElem shifted = left_mul_word(w, x);
            shifted *= cw;
            r += shifted;
        }
        return r;
    }

    /// x * tau-bar for x in Z[Gamma].
    SymElem attach_coset(const FormalSum<Word>& x, int coset) const {
        SymElem r;
        for (const auto& [w, c] : x.terms()) r.add_term({w, coset}, c);
        return r;
    }

    /// Sigma-derivative entries d_Sigma g_i / d g_j, with the defining
    /// identity T_Sigma (1 - g_i) = sum_j (1 - g_j) entry(i,j) checked in the
    /// symbolic ring.
    std::vector<std::vector<SymElem>> sigma_derivatives() const {
        const int n = pres_->generator_count();
        WordRingCtx ctx{pres_};
        std::vector<std::vector<SymElem>> entries(n, std::vector<SymElem>(n));
        for (int i = 0; i < n; ++i)
            for (int sigma = 0; sigma < count_; ++sigma) {
                const Step& st = step(sigma, i, false);
                auto grad = fox_gradient(ctx, st.gamma);
                for (int j = 0; j < n; ++j) entries[i][j] += attach_coset(grad[j], st.target);
            }

        SymElem t = t_sigma();
        for (int i = 0; i < n; ++i) {
            SymElem lhs = t - right_mul_word(t, Word::generator(i));
            SymElem rhs;
            for (int j = 0; j < n; ++j)
                rhs += entries[i][j] - left_mul_word(Word::generator(j), entries[i][j]);
            if (!(lhs == rhs))
                throw InconsistentCosetData("sigma derivative identity failed in the symbolic ring");
        }
        return entries;
    }

private:
    SymbolicCosets(const Presentation& pres, int count)
        : pres_(&pres), count_(count),
          fwd_(pres.generator_count(), std::vector<Step>(count)),
          inv_(pres.generator_count(), std::vector<Step>(count)) {}

    const Presentation* pres_;
    int count_;
    std::vector<std::vector<Step>> fwd_;  // [gen][coset]
    std::vector<std::vector<Step>> inv_;
};

namespace detail {

/// k with r == w^k in the free group, if any. Powers of a nontrivial reduced
/// word strictly grow in letters, so both scans terminate.
inline std::optional<long> word_power_offset(const Word& w, const Word& r) {
    if (r.empty()) return 0;
    for (int dir : {1, -1}) {
        Word base = dir == 1 ? w : w.inverse();
        Word p = base;
        long k = 1;
        while (p.letter_length() <= r.letter_length()) {
            if (p == r) return dir * k;
            p = base * p;
            ++k;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Symbolic analogue of left_divide_by_one_minus: solves (1 - w) X = y in the
/// Sigma-ring for a nonempty reduced word w.
inline SymElem sym_left_divide_by_one_minus(const SymbolicCosets& sc, const Word& w, const SymElem& y) {
    if (w.empty()) throw std::invalid_argument("sym_left_divide_by_one_minus: trivial word rejected");
    const Presentation& pres = sc.presentation();

    struct Chain {
        SigmaKey base;
        std::map<long, std::pair<SigmaKey, Rat>> entries;
    };
    std::vector<Chain> chains;
    for (const auto& [key, coeff] : y.terms()) {
        bool placed = false;
        for (auto& chain : chains) {
            if (chain.base.coset != key.coset) continue;
            Word rel = pres.reduce_word(key.gamma * chain.base.gamma.inverse());
            if (auto k = detail::word_power_offset(w, rel)) {
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

    SymElem x;
    for (const auto& chain : chains) {
        long k_min = chain.entries.begin()->first;
        long k_max = chain.entries.rbegin()->first;
        SigmaKey key = chain.entries.begin()->second.first;
        Rat running(0);
        for (long k = k_min; k <= k_max; ++k) {
            if (auto it = chain.entries.find(k); it != chain.entries.end()) running += it->second.second;
            if (k == k_max) break;
            if (running != 0) x.add_term(key, running);
            key = SigmaKey{pres.reduce_word(w * key.gamma), key.coset};
        }
        if (running != 0) throw DivisibilityError("sym_left_divide_by_one_minus: orbit chain does not close");
    }

    SymElem check = x - sc.left_mul_word(w, x);
    if (!(check == y)) throw InternalCheckError("sym_left_divide_by_one_minus: back-multiplication failed");
    return x;
}

/// T_Sigma-dual element: the unique solution of M_Sigma grad(r) = grad(r) T,
/// solved from the first component through the factorization
/// dr/dg_1 = s (1 - w') h with h a single group element, then verified on
/// every component. Also reports the degree for the open question about
/// deg T_vee vs the coset count.
struct TVeeResult {
    SymElem t_vee;
    Rat degree;
    int coset_count = 0;
};

inline TVeeResult t_vee(const SymbolicCosets& sc, const std::vector<std::vector<SymElem>>& sdm) {
    const Presentation& pres = sc.presentation();
    if (!pres.is_surface()) throw std::invalid_argument("t_vee: needs a surface presentation (single relator)");
    const int n = pres.generator_count();
    WordRingCtx ctx{&pres};
    auto grad = fox_gradient(ctx, pres.relators().at(0));

    // (M_Sigma grad r)_i = sum_j d_Sigma g_j / d g_i * (grad r)_j.
    std::vector<SymElem> rhs(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [w, c] : grad[j].terms()) {
                SymElem shifted = sc.right_mul_word(sdm[j][i], w);
                shifted *= c;
                rhs[i] += shifted;
            }

    // Factor (grad r)_1 = s (1 - w') h.
    const auto& comp = grad[0];
    if (comp.support_size() != 2)
        throw InternalCheckError("t_vee: relator gradient component does not have binomial support");
    auto it = comp.terms().begin();
    const Word& p = it->first;
    Rat cp = it->second;
    ++it;
    const Word& q = it->first;
    Rat cq = it->second;
    if (cp + cq != 0 || (cp != 1 && cp != -1))
        throw InternalCheckError("t_vee: component is not of the form s(1 - w')h");
    // With h = p and sign s = cp: s(1 - w')p = s p - s (w' p), so w' p = q.
    Word w_prime = pres.reduce_word(q * p.inverse());

    SymElem scaled = rhs[0];
    scaled *= cp;  // s * rhs
    SymElem z = sym_left_divide_by_one_minus(sc, w_prime, scaled);
    SymElem tv = sc.left_mul_word(p.inverse(), z);

    for (int i = 0; i < n; ++i) {
        SymElem lhs = sc.left_mul_elem(grad[i], tv);
        if (!(lhs == rhs[i]))
            throw InconsistentCosetData("t_vee: component " + std::to_string(i + 1) + " verification failed");
    }
    return {tv, tv.degree(), sc.count()};
}

inline TVeeResult t_vee(const SymbolicCosets& sc) { return t_vee(sc, sc.sigma_derivatives()); }

/// Cocompact trace-formula element T_Sigma + T_vee - sum_i d_Sigma g_i/d g_i.
/// At the trivial double coset this is (2 - 2 genus) times the identity.
inline SymElem t_tilde_cocompact(const SymbolicCosets& sc) {
    auto sdm = sc.sigma_derivatives();
    SymElem t = sc.t_sigma() + t_vee(sc, sdm).t_vee;
    for (int i = 0; i < sc.presentation().generator_count(); ++i) t -= sdm[i][i];
    return t;
}

}  // namespace hecketrace
