#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "hecketrace/group_ring.hpp"
#include "hecketrace/linalg.hpp"
#include "hecketrace/presentation.hpp"

namespace hecketrace {

/// Finite-dimensional right module over the commensurator (or over a given
/// presentation when only generator images are known). Vectors are rows and
/// v|M = v * act(M); the assignment M -> act(M) is a homomorphism, so the
/// substitution underlying the symmetric powers is x -> ax + by, y -> cx + dy.
class ModuleRep {
public:
    /// V_{k-2}: homogeneous polynomials of degree k-2 in x, y with the
    /// substitution action, basis x^j y^{k-2-j}. k must be even so that -M
    /// and M act identically.
    static ModuleRep sym_power(int k) {
        if (k < 2 || k % 2 != 0)
            throw std::invalid_argument("sym_power: weight k must be even and >= 2 (projective action)");
        ModuleRep m;
        m.dim_ = k - 1;
        m.degree_ = k - 2;
        m.label_ = "V_" + std::to_string(k - 2);
        m.matrix_realized_ = true;
        return m;
    }

    /// One-dimensional trivial module. Every commensurator matrix acts as
    /// [1], so this one carries both interfaces.
    static ModuleRep trivial(const Presentation& pres) {
        std::vector<RatMat> images(pres.generator_count(), RatMat::identity(1));
        ModuleRep m = from_images(pres, std::move(images), "trivial");
        m.matrix_realized_ = true;
        m.degree_ = 0;
        return m;
    }

    /// Module given by generator images; each relator must act as the
    /// identity, otherwise the data does not define a Gamma-module.
    static ModuleRep from_images(const Presentation& pres, std::vector<RatMat> images, std::string label) {
        if (static_cast<int>(images.size()) != pres.generator_count())
            throw std::invalid_argument("from_images: need one matrix per generator");
        ModuleRep m;
        m.dim_ = images.empty() ? 0 : images[0].rows();
        for (const auto& g : images)
            if (g.rows() != m.dim_ || g.cols() != m.dim_)
                throw std::invalid_argument("from_images: generator images must be square of equal size");
        m.label_ = std::move(label);
        m.images_ = std::move(images);
        m.image_inverses_.reserve(m.images_.size());
        for (const auto& g : m.images_) m.image_inverses_.push_back(inverse(g));
        for (const auto& r : pres.relators()) {
            RatMat acted = m.act_word(pres, r);
            if (!(acted == RatMat::identity(m.dim_)))
                throw std::invalid_argument("not a Gamma-module: relator " + r.str() +
                                            " does not act as the identity");
        }
        return m;
    }

    /// Loads the structured-text module format:
    ///   dimension D
    ///   generator_matrix e11 e12 ... eDD     (row-major, entries "num/den")
    /// with one generator_matrix line per presentation generator.
    static ModuleRep from_file(const Presentation& pres, const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open module file: " + path);
        return parse(pres, in, path);
    }

    static ModuleRep parse(const Presentation& pres, std::istream& in, const std::string& name) {
        int dim = -1;
        std::vector<RatMat> images;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            if (key == "dimension") {
                if (!(ls >> dim) || dim <= 0)
                    throw std::invalid_argument(name + ": dimension must be a positive integer");
            } else if (key == "generator_matrix") {
                if (dim <= 0) throw std::invalid_argument(name + ": dimension must precede generator_matrix");
                RatMat g(dim, dim);
                std::string tok;
                for (int i = 0; i < dim * dim; ++i) {
                    if (!(ls >> tok))
                        throw std::invalid_argument(name + " line " + std::to_string(lineno) +
                                                    ": expected " + std::to_string(dim * dim) + " entries");
                    g(i / dim, i % dim) = rat_from_string(tok);
                }
                images.push_back(std::move(g));
            } else {
                throw std::invalid_argument(name + " line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
        }
        return from_images(pres, std::move(images), name);
    }

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    bool matrix_realized() const { return matrix_realized_; }

    /// Action of an arbitrary positive-determinant integer matrix. Only
    /// matrix-realized modules (the symmetric powers) support this.
    RatMat act(const Mat2& m) const {
        if (!matrix_realized_) throw std::invalid_argument("module " + label_ + " has no matrix action");
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            if (cache_->enabled) {
                auto it = cache_->map.find(m);
                if (it != cache_->map.end()) return it->second;
            }
        }
        RatMat r = sym_action(m);
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            if (cache_->enabled) cache_->map.emplace(m, r);
        }
        return r;
    }

    /// Action of a word in the presentation generators.
    RatMat act_word(const Presentation& pres, const Word& w) const {
        if (images_.empty()) return act(pres.word_to_matrix(w));
        RatMat r = RatMat::identity(dim_);
        for (const auto& s : w.syllables()) {
            const RatMat& base = s.exp >= 0 ? images_.at(s.gen) : image_inverses_.at(s.gen);
            for (long long t = 0; t < (s.exp >= 0 ? s.exp : -s.exp); ++t) r = r * base;
        }
        return r;
    }

    /// Linear extension to matrix-keyed ring elements.
    RatMat act_elem(const RingElement& x) const {
        RatMat r(dim_, dim_);
        for (const auto& [m, c] : x.terms()) r += act(m) * c;
        return r;
    }

    /// Linear extension to word-keyed ring elements.
    RatMat act_word_elem(const Presentation& pres, const FormalSum<Word>& x) const {
        RatMat r(dim_, dim_);
        for (const auto& [w, c] : x.terms()) r += act_word(pres, w) * c;
        return r;
    }

    const std::vector<RatMat>& generator_images() const { return images_; }

    /// Memoization must be transparent: disabling it changes nothing but speed.
    void set_cache_enabled(bool on) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        cache_->enabled = on;
        if (!on) cache_->map.clear();
    }

private:
    ModuleRep() = default;

    RatMat sym_action(const Mat2& m) const {
        const int e = degree_;
        // pow_ax_by[j] = coefficients of (a x + b y)^j, pow_cx_dy likewise.
        std::vector<std::vector<Rat>> pax(e + 1), pcd(e + 1);
        pax[0] = {Rat(1)};
        pcd[0] = {Rat(1)};
        for (int j = 1; j <= e; ++j) {
            pax[j] = binomial_step(pax[j - 1], Rat(m.a()), Rat(m.b()));
            pcd[j] = binomial_step(pcd[j - 1], Rat(m.c()), Rat(m.d()));
        }
        RatMat r(dim_, dim_);
        for (int j = 0; j <= e; ++j) {
            const auto& p = pax[j];
            const auto& q = pcd[e - j];
            for (std::size_t s = 0; s < p.size(); ++s) {
                if (p[s] == 0) continue;
                for (std::size_t t = 0; t < q.size(); ++t) {
                    if (q[t] == 0) continue;
                    r(j, static_cast<int>(s + t)) += p[s] * q[t];
                }
            }
        }
        return r;
    }

    static std::vector<Rat> binomial_step(const std::vector<Rat>& prev, const Rat& a, const Rat& b) {
        std::vector<Rat> next(prev.size() + 1, Rat(0));
        for (std::size_t i = 0; i < prev.size(); ++i) {
            next[i + 1] += prev[i] * a;  // multiply by a x
            next[i] += prev[i] * b;      // multiply by b y
        }
        return next;
    }

    struct Cache {
        std::mutex mutex;
        bool enabled = true;
        std::map<Mat2, RatMat> map;
    };

    int dim_ = 0;
    int degree_ = 0;
    std::string label_;
    bool matrix_realized_ = false;
    std::vector<RatMat> images_;
    std::vector<RatMat> image_inverses_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// tr(x, V) = sum of c_M * tr(act(M)).
inline Rat trace_on_module(const RingElement& x, const ModuleRep& m) {
    Rat t(0);
    for (const auto& [mat, c] : x.terms()) t += c * m.act(mat).trace();
    return t;
}

}  // namespace hecketrace
