// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace slra {

/// Dense row-major matrix of 64-bit floats. Column vectors are n x 1.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix column(const std::vector<double>& values);

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::string shape_string(const Matrix& m);

/// Throws DimensionError naming both shapes.
void require_same_shape(const Matrix& a, const Matrix& b, const char* op);

// Value-level kernels. The autodiff layer wraps exactly these, so the
// training-time forward and the inference forward are bit-identical.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix relu(const Matrix& a);
Matrix transpose(const Matrix& a);
double sum(const Matrix& a);
void add_in_place(Matrix& dst, const Matrix& src);
bool all_finite(const Matrix& a);

} // namespace slra
