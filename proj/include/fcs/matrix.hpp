#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "fcs/errors.hpp"

namespace fcs {

using cd = std::complex<double>;

// Dense row-major complex matrix. Just enough surface for this project;
// not a general linear-algebra library.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    ComplexMatrix(std::initializer_list<std::initializer_list<cd>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw dimension_error("ragged initializer for ComplexMatrix");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const cd* row_data(std::size_t i) const { return a_.data() + i * cols_; }
    cd* row_data(std::size_t i) { return a_.data() + i * cols_; }

    void set_row(std::size_t i, const ComplexMatrix& src, std::size_t src_row) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = src(src_row, j);
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw dimension_error("matrix product shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cd aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    // y += alpha * M, used to assemble linear combinations of overlap matrices.
    void axpy(cd alpha, const ComplexMatrix& m) {
        check_same_shape(m);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += alpha * m.a_[k];
    }

    double max_abs() const {
        double v = 0.0;
        for (const cd& z : a_) v = std::max(v, std::abs(z));
        return v;
    }

    double max_abs_offdiag() const {
        double v = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j) v = std::max(v, std::abs((*this)(i, j)));
        return v;
    }

    double max_hermiticity_defect() const {
        if (!is_square()) throw dimension_error("hermiticity defect of a non-square matrix");
        double v = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                v = std::max(v, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return v;
    }

  private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw dimension_error("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cd> a_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_error("matrix shape mismatch in max_abs_diff");
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            v = std::max(v, std::abs(a(i, j) - b(i, j)));
    return v;
}

inline double max_abs_diff_from_identity(const ComplexMatrix& a) {
    if (!a.is_square()) throw dimension_error("matrix is not square");
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cd want = (i == j) ? cd(1.0) : cd(0.0);
            v = std::max(v, std::abs(a(i, j) - want));
        }
    return v;
}

} // namespace fcs
