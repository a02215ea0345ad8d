#pragma once

#include <optional>
#include <vector>

#include "hecketrace/numeric.hpp"

namespace hecketrace {

/// Dense matrix over Q. Row vectors throughout: module elements are rows and
/// group elements act by right multiplication.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, Rat(0)) {}

    static RatMat identity(int n) {
        RatMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& operator()(int r, int c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rat& operator()(int r, int c) const { return d_[static_cast<std::size_t>(r) * cols_ + c]; }

    RatMat& operator+=(const RatMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
        return *this;
    }
    RatMat& operator-=(const RatMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
        return *this;
    }
    RatMat& operator*=(const Rat& s) {
        for (auto& x : d_) x *= s;
        return *this;
    }

    friend RatMat operator+(RatMat a, const RatMat& b) { return a += b; }
    friend RatMat operator-(RatMat a, const RatMat& b) { return a -= b; }
    friend RatMat operator*(RatMat a, const Rat& s) { return a *= s; }
    friend RatMat operator*(const Rat& s, RatMat a) { return a *= s; }

    friend RatMat operator*(const RatMat& a, const RatMat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("RatMat: shape mismatch in product");
        RatMat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rat& aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const Rat& bkj = b(k, j);
                    if (bkj != 0) r(i, j) += aik * bkj;
                }
            }
        return r;
    }

    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

    RatMat transpose() const {
        RatMat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Rat trace() const {
        if (rows_ != cols_) throw std::invalid_argument("RatMat: trace of non-square matrix");
        Rat t(0);
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    std::vector<Rat> row(int r) const {
        std::vector<Rat> v(cols_);
        for (int j = 0; j < cols_; ++j) v[j] = (*this)(r, j);
        return v;
    }

    void set_row(int r, const std::vector<Rat>& v) {
        for (int j = 0; j < cols_; ++j) (*this)(r, j) = v[j];
    }

    bool is_zero() const {
        for (const auto& x : d_)
            if (x != 0) return false;
        return true;
    }

private:
    void check_same_shape(const RatMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RatMat: shape mismatch");
    }

    int rows_ = 0, cols_ = 0;
    std::vector<Rat> d_;
};

inline RatMat vstack(const RatMat& a, const RatMat& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    RatMat r(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) r(a.rows() + i, j) = b(i, j);
    return r;
}

inline RatMat hstack(const RatMat& a, const RatMat& b) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
    RatMat r(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

/// In-place reduced row echelon form; returns pivot column per pivot row.
inline std::vector<int> rref_inplace(RatMat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
        Rat inv = Rat(1) / m(r, c);
        for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(RatMat m) { return static_cast<int>(rref_inplace(m).size()); }

/// Basis of the row space as the nonzero rows of the rref.
inline RatMat row_space_basis(RatMat m) {
    auto pivots = rref_inplace(m);
    RatMat b(static_cast<int>(pivots.size()), m.cols());
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) b(i, j) = m(i, j);
    return b;
}

/// Basis (rows) of {x : m x^T = 0}, i.e. the right kernel written as rows.
inline RatMat right_kernel_basis(RatMat m) {
    const int n = m.cols();
    auto pivots = rref_inplace(m);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    RatMat k(n - static_cast<int>(pivots.size()), n);
    int row = 0;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        k(row, c) = 1;
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i) k(row, pivots[i]) = -m(i, c);
        ++row;
    }
    return k;
}

/// Basis (rows) of {v : v m = 0}.
inline RatMat left_kernel_basis(const RatMat& m) { return right_kernel_basis(m.transpose()); }

/// Is every row of `rows` in the row space of `space`?
inline bool row_space_contains(const RatMat& space, const RatMat& rows) {
    RatMat s = row_space_basis(space);
    for (int i = 0; i < rows.rows(); ++i) {
        RatMat ext = s;
        RatMat one(1, rows.cols());
        one.set_row(0, rows.row(i));
        if (rank(vstack(ext, one)) != s.rows()) return false;
    }
    return true;
}

/// Coordinates x with x * basis = v, when basis rows are independent and v
/// lies in their span.
inline std::optional<std::vector<Rat>> coordinates_in_rows(const RatMat& basis, const std::vector<Rat>& v) {
    // Solve basis^T x^T = v^T by augmented elimination.
    RatMat bt = basis.transpose();
    RatMat rhs(bt.rows(), 1);
    for (int i = 0; i < bt.rows(); ++i) rhs(i, 0) = v[i];
    RatMat aug = hstack(bt, rhs);
    auto pivots = rref_inplace(aug);
    std::vector<Rat> x(basis.rows(), Rat(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == bt.cols()) return std::nullopt;  // inconsistent
        x[pivots[i]] = aug(static_cast<int>(i), bt.cols());
    }
    return x;
}

/// Matrix inverse; throws on singular input.
inline RatMat inverse(const RatMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square matrix");
    RatMat aug = hstack(m, RatMat::identity(m.rows()));
    auto pivots = rref_inplace(aug);
    if (static_cast<int>(pivots.size()) != m.rows() || pivots.back() >= m.rows())
        throw std::invalid_argument("inverse: singular matrix");
    RatMat inv(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) inv(i, j) = aug(i, m.rows() + j);
    return inv;
}

}  // namespace hecketrace
