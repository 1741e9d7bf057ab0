// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference gradient oracle. Test-only; independent of
// the tape-based backward path it cross-checks.
#pragma once

#include <cmath>
#include <functional>

#include "slra/matrix.hpp"

namespace slra::testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;

/// d f / d m by central differences, perturbing one entry at a time.
inline Matrix finite_difference(const std::function<double(const Matrix&)>& f, Matrix m,
                                double step = kFdStep) {
    Matrix grad(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
        double original = m.data()[i];
        m.data()[i] = original + step;
        double up = f(m);
        m.data()[i] = original - step;
        double down = f(m);
        m.data()[i] = original;
        grad.data()[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

/// Largest relative disagreement between two gradients, with a floor on
/// the denominator so near-zero entries compare absolutely.
inline double max_relative_error(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double av = a.data()[i];
        double bv = b.data()[i];
        double denom = std::max({std::fabs(av), std::fabs(bv), 1e-6});
        worst = std::max(worst, std::fabs(av - bv) / denom);
    }
    return worst;
}

} // namespace slra::testing
