#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hecketrace/mat2.hpp"
#include "hecketrace/numeric.hpp"
#include "hecketrace/word.hpp"

namespace hecketrace {

/// S = [[0,1],[-1,0]], the order-2 generator of PSL2(Z).
inline const Mat2& mat_S() {
    static const Mat2 s(0, 1, -1, 0);
    return s;
}

/// T = [[1,1],[0,1]]. Not a presentation generator; eliminated via T = U*S.
inline const Mat2& mat_T() {
    static const Mat2 t(1, 1, 0, 1);
    return t;
}

/// U = T*S, the order-3 generator. Projectively U^3 = 1 and T = U*S.
inline const Mat2& mat_U() {
    static const Mat2 u(mat_T() * mat_S());
    return u;
}

struct GeneratorInfo {
    std::string name;
    std::optional<Mat2> matrix;  // realization in PSL2, when the group is concrete
    int order = 0;               // 0 = infinite
};

/// Raw Hecke coset data as read from a group file: for each (coset, generator)
/// pair the word gamma and the target coset with rep_sigma * g = gamma * rep_target.
struct CosetTablesSpec {
    int count = 0;
    struct Entry {
        int coset;
        int gen;
        int target;
        Word gamma;
    };
    std::vector<Entry> entries;
};

/// Fuchsian signature (g; m_1..m_l; h) together with a generating set and
/// relators. Two shapes are supported: cusped groups (h >= 1) presented on
/// n = 2g + l + h - 1 generators with relators g_i^{m_i}, and cocompact
/// torsion-free surface groups (h = l = 0) with the single commutator relator.
class Presentation {
public:
    /// PSL2(Z) with signature (0; 2,3; 1), generators S and U = T*S.
    static Presentation modular() {
        Presentation p;
        p.genus_ = 0;
        p.elliptic_orders_ = {2, 3};
        p.cusps_ = 1;
        p.generators_ = {{"S", mat_S(), 2}, {"U", mat_U(), 3}};
        p.relators_ = {Word({{0, 2}}), Word({{1, 3}})};
        p.modular_ = true;
        return p;
    }

    /// Abstract genus-g surface group, relator [g1,g2]...[g_{2g-1},g_{2g}].
    static Presentation surface(int genus) {
        if (genus < 2) throw std::invalid_argument("surface group requires genus >= 2");
        Presentation p;
        p.genus_ = genus;
        p.cusps_ = 0;
        for (int i = 0; i < 2 * genus; ++i) p.generators_.push_back({"g" + std::to_string(i + 1), std::nullopt, 0});
        p.relators_ = {surface_relator(genus)};
        return p;
    }

    static Word surface_relator(int genus) {
        std::vector<Syllable> syls;
        for (int h = 0; h < genus; ++h) {
            int a = 2 * h, b = 2 * h + 1;
            syls.push_back({a, 1});
            syls.push_back({b, 1});
            syls.push_back({a, -1});
            syls.push_back({b, -1});
        }
        return Word(std::move(syls));
    }

    int genus() const { return genus_; }
    int cusps() const { return cusps_; }
    const std::vector<int>& elliptic_orders() const { return elliptic_orders_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const std::vector<GeneratorInfo>& generators() const { return generators_; }
    const GeneratorInfo& generator(int i) const { return generators_.at(i); }
    const std::vector<Word>& relators() const { return relators_; }
    bool is_modular() const { return modular_; }
    bool is_surface() const { return cusps_ == 0 && elliptic_orders_.empty(); }

    bool fully_realized() const {
        for (const auto& g : generators_)
            if (!g.matrix) return false;
        return !generators_.empty();
    }

    /// |Gamma\H| / 2pi = 2g - 2 + sum(1 - 1/m_j) + h  (Gauss-Bonnet).
    Rat euler_area() const {
        Rat area(2 * genus_ - 2 + cusps_);
        for (int m : elliptic_orders_) area += Rat(m - 1, m);
        return area;
    }

    /// Frees the word of trivial syllables and folds finite-order exponents
    /// into [1, m_i - 1].
    Word reduce_word(const Word& w) const {
        Word out;
        for (const auto& s : w.syllables()) push_mod(out, s);
        return out;
    }

    /// Evaluation homomorphism F -> Gamma for realized presentations.
    Mat2 word_to_matrix(const Word& w) const {
        Mat2 m;
        for (const auto& s : w.syllables()) {
            const auto& gi = generators_.at(s.gen);
            if (!gi.matrix)
                throw std::invalid_argument("word_to_matrix: generator " + gi.name + " has no matrix realization");
            m = m * gi.matrix->pow(s.exp);
        }
        return m;
    }

    /// Word problem for the modular presentation: expresses gamma (det 1) as a
    /// word in S and U. The matrix is peeled from the left by the Euclidean
    /// scheme gamma = T^q * S * gamma' with |c'| <= |c|/2, which terminates
    /// since |c| strictly decreases; T is then eliminated through T = U*S and
    /// exponents are folded modulo the generator orders. The choice of
    /// realization makes the round trip word_to_matrix o matrix_to_word the
    /// identity, which is what the tests certify.
    Word matrix_to_word(const Mat2& gamma) const {
        if (!modular_) throw std::invalid_argument("matrix_to_word is only available for the modular presentation");
        if (gamma.det() != 1) throw std::invalid_argument("matrix_to_word: matrix not in Gamma (det != 1)");

        std::vector<long long> t_exps;  // gamma = T^{q_1} S T^{q_2} S ... T^{q_m} S * T^{tail}
        Mat2 m = gamma;
        while (m.c() != 0) {
            Int q = nearest_quotient(m.a(), m.c());
            // m := S^{-1} T^{-q} m, recorded as prefix T^q S. The new lower-left
            // entry is +-(a - q c), of absolute value <= |c|/2.
            Int na = m.a() - q * m.c(), nb = m.b() - q * m.d();
            Mat2 next(m.c(), m.d(), -na, -nb);
            t_exps.push_back(to_ll(q));
            m = next;
        }
        // Now m = [[1, b],[0, 1]] (a = d = +-1, normalization makes them +1).
        long long tail = to_ll(m.b());

        Word w;
        for (long long q : t_exps) {
            append_t_power(w, q);
            w.push_syllable({0, 1});  // S
        }
        append_t_power(w, tail);
        Word out = reduce_word(w);
        if (!(word_to_matrix(out) == gamma))
            throw InternalCheckError("matrix_to_word: reconstruction mismatch for " + gamma.str());
        return out;
    }

    struct Loaded;
    static Loaded load(const std::string& path);

private:
    Presentation() = default;

    static Int nearest_quotient(const Int& a, const Int& c) {
        // q minimizing |a - q c|. Same q solves (-a, -c), so normalize c > 0.
        Int ca = c >= 0 ? c : Int(-c);
        Int aa = c >= 0 ? a : Int(-a);
        Int q = aa / ca;
        Int r = aa - q * ca;
        if (r < 0) {
            q -= 1;
            r += ca;
        }
        if (2 * r > ca) q += 1;
        return q;
    }

    static long long to_ll(const Int& v) {
        static const Int bound = Int(1) << 62;
        if (v > bound || v < -bound)
            throw std::invalid_argument("word exponent out of range: " + v.str());
        return static_cast<long long>(v);
    }

    static void append_t_power(Word& w, long long q) {
        // T = U*S, so T^q -> (U S)^q and T^{-1} -> S^{-1} U^{-1} (projectively S U^{-1}).
        for (long long i = 0; i < (q >= 0 ? q : -q); ++i) {
            if (q > 0) {
                w.push_syllable({1, 1});
                w.push_syllable({0, 1});
            } else {
                w.push_syllable({0, -1});
                w.push_syllable({1, -1});
            }
        }
    }

    void push_mod(Word& out, Syllable s) const {
        if (s.exp == 0) return;
        const auto& syls = out.syllables();
        if (!syls.empty() && syls.back().gen == s.gen) {
            Syllable merged{s.gen, syls.back().exp + s.exp};
            pop_back(out);
            push_mod(out, merged);
            return;
        }
        int order = generators_.at(s.gen).order;
        if (order > 0) {
            long long e = s.exp % order;
            if (e < 0) e += order;
            s.exp = e;
            if (s.exp == 0) return;
        }
        out.push_syllable(s);
    }

    static void pop_back(Word& w) {
        auto syls = w.syllables();
        syls.pop_back();
        w = Word(std::move(syls));
    }

    int genus_ = 0;
    std::vector<int> elliptic_orders_;
    int cusps_ = 0;
    std::vector<GeneratorInfo> generators_;
    std::vector<Word> relators_;
    bool modular_ = false;

    friend struct PresentationLoader;
};

struct Presentation::Loaded {
    Presentation presentation;
    std::optional<CosetTablesSpec> cosets;
};

struct PresentationLoader {
    /// Parses the structured-text group format. Recognized lines, in any
    /// order, '#' starting a comment:
    ///   genus G
    ///   elliptic_orders m1 m2 ...
    ///   cusps H
    ///   generator NAME [a b c d]        (optional matrix realization)
    ///   relator s1 s2 ...               (signed 1-based generator indices)
    ///   coset_count N                   (optional Hecke coset data)
    ///   coset_gamma SIGMA GEN TARGET : s1 s2 ...
    /// Omitted generators/relators are synthesized from the signature.
    static Presentation::Loaded parse(std::istream& in) {
        Presentation p;
        std::optional<CosetTablesSpec> cosets;
        bool have_orders = false;
        std::vector<GeneratorInfo> gens;
        std::vector<Word> relators;

        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            if (key == "genus") {
                require(static_cast<bool>(ls >> p.genus_), lineno, "genus needs an integer");
            } else if (key == "elliptic_orders") {
                have_orders = true;
                int m;
                while (ls >> m) {
                    require(m >= 2, lineno, "elliptic orders must be >= 2");
                    p.elliptic_orders_.push_back(m);
                }
            } else if (key == "cusps") {
                require(static_cast<bool>(ls >> p.cusps_), lineno, "cusps needs an integer");
            } else if (key == "generator") {
                GeneratorInfo g;
                require(static_cast<bool>(ls >> g.name), lineno, "generator needs a name");
                long long a, b, c, d;
                if (ls >> a >> b >> c >> d) {
                    Mat2 m(a, b, c, d);
                    require(m.det() == 1, lineno, "generator realizations must have determinant 1");
                    g.matrix = m;
                }
                gens.push_back(std::move(g));
            } else if (key == "relator") {
                relators.push_back(read_word(ls, lineno));
            } else if (key == "coset_count") {
                if (!cosets) cosets.emplace();
                require(static_cast<bool>(ls >> cosets->count) && cosets->count >= 1, lineno,
                        "coset_count needs a positive integer");
            } else if (key == "coset_gamma") {
                if (!cosets) cosets.emplace();
                CosetTablesSpec::Entry e;
                std::string colon;
                require(static_cast<bool>(ls >> e.coset >> e.gen >> e.target >> colon) && colon == ":", lineno,
                        "coset_gamma needs 'SIGMA GEN TARGET : word'");
                require(e.gen >= 1, lineno, "coset_gamma generator index is 1-based");
                e.gen -= 1;
                e.gamma = read_word(ls, lineno);
                cosets->entries.push_back(std::move(e));
            } else {
                require(false, lineno, "unknown key '" + key + "'");
            }
        }
        (void)have_orders;

        finalize(p, std::move(gens), std::move(relators));
        return {std::move(p), std::move(cosets)};
    }

    static Presentation::Loaded parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open group file: " + path);
        return parse(in);
    }

private:
    static void require(bool ok, int lineno, const std::string& msg) {
        if (!ok) throw std::invalid_argument("group file line " + std::to_string(lineno) + ": " + msg);
    }

    static Word read_word(std::istream& ls, int lineno) {
        std::vector<Syllable> syls;
        long long s;
        while (ls >> s) {
            require(s != 0, lineno, "word letters are signed 1-based indices, 0 is invalid");
            int gen = static_cast<int>((s > 0 ? s : -s) - 1);
            syls.push_back({gen, s > 0 ? 1LL : -1LL});
        }
        return Word(std::move(syls));
    }

    static void finalize(Presentation& p, std::vector<GeneratorInfo> gens, std::vector<Word> relators) {
        const int l = static_cast<int>(p.elliptic_orders_.size());
        if (p.euler_area() <= 0)
            throw std::invalid_argument("signature violates Gauss-Bonnet: area " + rat_to_string(p.euler_area()) +
                                        " must be positive");
        int n;
        if (p.cusps_ >= 1) {
            n = 2 * p.genus_ + l + p.cusps_ - 1;
        } else if (l == 0) {
            n = 2 * p.genus_;
        } else {
            throw std::invalid_argument("unsupported signature: cocompact groups with torsion are out of scope");
        }

        if (gens.empty()) {
            for (int i = 0; i < n; ++i) gens.push_back({"g" + std::to_string(i + 1), std::nullopt, 0});
        }
        if (static_cast<int>(gens.size()) != n)
            throw std::invalid_argument("expected " + std::to_string(n) + " generators for this signature, got " +
                                        std::to_string(gens.size()));
        for (int i = 0; i < n; ++i) gens[i].order = i < l ? p.elliptic_orders_[i] : 0;
        p.generators_ = std::move(gens);

        if (relators.empty()) {
            if (p.cusps_ >= 1)
                for (int i = 0; i < l; ++i) relators.push_back(Word({{i, p.elliptic_orders_[i]}}));
            else
                relators.push_back(Presentation::surface_relator(p.genus_));
        }
        if (p.cusps_ >= 1) {
            if (static_cast<int>(relators.size()) != l)
                throw std::invalid_argument("cusped presentations have exactly one relator per elliptic order");
            for (int i = 0; i < l; ++i) {
                Word expected({{i, p.elliptic_orders_[i]}});
                if (!(relators[i] == expected))
                    throw std::invalid_argument("cusped relator " + std::to_string(i + 1) + " must be g" +
                                                std::to_string(i + 1) + "^" + std::to_string(p.elliptic_orders_[i]));
            }
        } else {
            if (relators.size() != 1 || !(relators[0] == Presentation::surface_relator(p.genus_)))
                throw std::invalid_argument("surface presentations use the single commutator relator");
        }
        p.relators_ = std::move(relators);

        if (p.fully_realized()) {
            for (const auto& r : p.relators_)
                if (!p.word_to_matrix(r).is_identity())
                    throw std::invalid_argument("relator " + r.str() + " does not evaluate to the identity");
        }
        p.modular_ = p.genus_ == 0 && p.cusps_ == 1 && p.elliptic_orders_ == std::vector<int>{2, 3} &&
                     p.generator_count() == 2 && p.generators_[0].matrix && p.generators_[1].matrix &&
                     *p.generators_[0].matrix == mat_S() && *p.generators_[1].matrix == mat_U();
    }
};

inline Presentation::Loaded Presentation::load(const std::string& path) {
    return PresentationLoader::parse_file(path);
}

}  // namespace hecketrace
