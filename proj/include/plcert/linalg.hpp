#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "plcert/rational.hpp"

namespace plcert {

/// Dense vector of rationals. Immutable by convention: operations return
/// fresh values.
class RVector {
  public:
    RVector() = default;
    explicit RVector(std::size_t dim) : entries_(dim, Rational(0)) {}
    RVector(std::initializer_list<Rational> init) : entries_(init) {}
    explicit RVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}

    std::size_t dim() const { return entries_.size(); }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }
    Rational& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<Rational>& entries() const { return entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    friend bool operator==(const RVector& a, const RVector& b) = default;

  private:
    std::vector<Rational> entries_;
};

inline void require_same_dim(const RVector& a, const RVector& b, const char* where) {
    if (a.dim() != b.dim())
        throw DimensionError(std::string(where) + ": vector dims " +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

inline RVector operator+(const RVector& a, const RVector& b) {
    require_same_dim(a, b, "operator+");
    RVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RVector operator-(const RVector& a, const RVector& b) {
    require_same_dim(a, b, "operator-");
    RVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RVector operator-(const RVector& a) {
    RVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = -a[i];
    return r;
}

inline RVector operator*(const Rational& c, const RVector& a) {
    RVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = c * a[i];
    return r;
}

inline Rational dot(const RVector& a, const RVector& b) {
    require_same_dim(a, b, "dot");
    Rational s(0);
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline Rational inf_norm(const RVector& a) {
    Rational m(0);
    for (const auto& e : a)
        if (abs(e) > m) m = abs(e);
    return m;
}

inline Rational one_norm(const RVector& a) {
    Rational m(0);
    for (const auto& e : a) m += abs(e);
    return m;
}

inline bool is_zero(const RVector& a) {
    for (const auto& e : a)
        if (e != 0) return false;
    return true;
}

/// Dense row-major matrix of rationals.
class RMatrix {
  public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}
    RMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw DimensionError("RMatrix: entry count does not match rows*cols");
    }

    static RMatrix identity(std::size_t n) {
        RMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    const Rational& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    RVector row(std::size_t i) const {
        std::vector<Rational> r(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
        return RVector(std::move(r));
    }

    RVector apply(const RVector& x) const {
        if (x.dim() != cols_)
            throw DimensionError("RMatrix::apply: vector dim " + std::to_string(x.dim()) +
                                 " vs cols " + std::to_string(cols_));
        RVector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational s(0);
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    friend bool operator==(const RMatrix& a, const RMatrix& b) = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> entries_;
};

inline RMatrix operator-(const RMatrix& a, const RMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix operator-: shape mismatch");
    RMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix operator*: shape mismatch");
    RMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

/// Exact sign of det(M) in {-1, 0, +1} by rational Gaussian elimination.
inline int det_sign(const RMatrix& m) {
    if (!m.square()) throw DimensionError("det_sign: matrix is not square");
    const std::size_t n = m.rows();
    RMatrix a = m;
    int s = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
            s = -s;
        }
        if (a(col, col) < 0) s = -s;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            const Rational f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return s;
}

namespace detail {

/// Reduced row echelon form of [A | B] in place; returns the pivot column of
/// each produced row (pivots only searched among A's columns).
inline std::vector<std::size_t> rref(RMatrix& a, RMatrix& b) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(piv, j), b(r, j));
        }
        const Rational inv = Rational(1) / a(r, c);
        for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
        for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            const Rational f = a(i, c);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Unique solution of A x = c, or nullopt when A is singular.
inline std::optional<RVector> solve_unique(const RMatrix& a, const RVector& c) {
    if (!a.square()) throw DimensionError("solve_unique: matrix is not square");
    if (c.dim() != a.rows()) throw DimensionError("solve_unique: rhs dim mismatch");
    RMatrix m = a;
    RMatrix rhs(c.dim(), 1);
    for (std::size_t i = 0; i < c.dim(); ++i) rhs(i, 0) = c[i];
    const auto pivots = detail::rref(m, rhs);
    if (pivots.size() != a.cols()) return std::nullopt;
    RVector x(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] = rhs(i, 0);
    return x;
}

struct AffineSolutionSet {
    RVector particular;
    std::vector<RVector> kernel_basis;
};

/// Full solution set of A x = c as particular point + kernel basis, or
/// nullopt when the system is inconsistent. Free variables are set to zero.
inline std::optional<AffineSolutionSet> affine_solution_set(const RMatrix& a, const RVector& c) {
    if (c.dim() != a.rows()) throw DimensionError("affine_solution_set: rhs dim mismatch");
    RMatrix m = a;
    RMatrix rhs(c.dim(), 1);
    for (std::size_t i = 0; i < c.dim(); ++i) rhs(i, 0) = c[i];
    const auto pivots = detail::rref(m, rhs);
    for (std::size_t i = pivots.size(); i < a.rows(); ++i)
        if (rhs(i, 0) != 0) return std::nullopt;

    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;

    AffineSolutionSet out{RVector(a.cols()), {}};
    for (std::size_t r = 0; r < pivots.size(); ++r) out.particular[pivots[r]] = rhs(r, 0);
    for (std::size_t c0 = 0; c0 < a.cols(); ++c0) {
        if (is_pivot[c0]) continue;
        RVector k(a.cols());
        k[c0] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) k[pivots[r]] = -m(r, c0);
        out.kernel_basis.push_back(std::move(k));
    }
    return out;
}

/// Basis of { x : A x = 0 }.
inline std::vector<RVector> kernel_basis(const RMatrix& a) {
    return affine_solution_set(a, RVector(a.rows()))->kernel_basis;
}

inline std::size_t rank(const RMatrix& a) {
    RMatrix m = a;
    RMatrix dummy(a.rows(), 0);
    return detail::rref(m, dummy).size();
}

inline std::optional<RMatrix> inverse(const RMatrix& a) {
    if (!a.square()) throw DimensionError("inverse: matrix is not square");
    RMatrix m = a;
    RMatrix id = RMatrix::identity(a.rows());
    const auto pivots = detail::rref(m, id);
    if (pivots.size() != a.rows()) return std::nullopt;
    return id;
}

}  // namespace plcert
