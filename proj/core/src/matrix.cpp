// SPDX-License-Identifier: Apache-2.0
#include "slra/matrix.hpp"

#include <cmath>

#include "slra/errors.hpp"

namespace slra {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionError("from_rows: ragged row " + std::to_string(i));
        }
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::column(const std::vector<double>& values) {
    Matrix m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
}

std::string shape_string(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a) +
                             " vs " + shape_string(b));
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ, " + shape_string(a) +
                             " x " + shape_string(b));
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

Matrix scale(const Matrix& a, double s) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
    return out;
}

Matrix relu(const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double v = a.data()[i];
        out.data()[i] = v > 0.0 ? v : 0.0;
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

double sum(const Matrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += a.data()[i];
    return total;
}

void add_in_place(Matrix& dst, const Matrix& src) {
    require_same_shape(dst, src, "add_in_place");
    for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] += src.data()[i];
}

bool all_finite(const Matrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a.data()[i])) return false;
    }
    return true;
}

} // namespace slra
