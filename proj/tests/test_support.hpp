#pragma once

#include "sympolar/symplectic.hpp"
#include "sympolar/types.hpp"

#include <doctest.h>

namespace sympolar::testing {

// Random symmetric positive definite matrix with controlled conditioning.
inline Mat random_spd(int d, Rng& rng, double condSpread = 1.0) {
    Mat A = rng.normal_mat(d, d);
    Mat M = sym(A * A.transpose()) + 0.1 * Mat::Identity(d, d);
    if (condSpread != 1.0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(M);
        Vec ev = es.eigenvalues();
        for (int i = 0; i < d; ++i) ev(i) = std::pow(ev(i), condSpread);
        M = sym(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
    }
    return M;
}

inline double rel_err(const Mat& a, const Mat& b) {
    return max_abs(a - b) / std::max(1.0, std::max(max_abs(a), max_abs(b)));
}

}  // namespace sympolar::testing
