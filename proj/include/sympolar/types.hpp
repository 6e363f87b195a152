#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sympolar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Phase-space vectors use the ordering (x_1..x_n, p_1..p_n) throughout.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wrong matrix/vector sizes, odd phase-space dimension, mismatched modes.
struct DimensionError : Error {
    using Error::Error;
};

// A matrix required to be symmetric positive definite is not.
struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

// Input outside the mathematical domain of an operation
// (non-centered ellipsoid where centering is required, non-transversal
// frame, missing containment of a mixed state, ...).
struct DomainError : Error {
    using Error::Error;
};

// Eigensolver failure, integrator blow-up, residual beyond tolerance.
struct NumericalError : Error {
    using Error::Error;
};

namespace defaults {
inline constexpr double kSpTol = 1e-9;        // max-norm slack on S^T J S - J
inline constexpr double kPdTolRel = 1e-12;    // min eigenvalue >= kPdTolRel * ||M||
inline constexpr double kSymTolRel = 1e-8;    // ||M - M^T||_max <= kSymTolRel * ||M||_max
inline constexpr double kAdmissTol = 1e-9;    // shared slack for admissibility verdicts
inline constexpr double kShapeTol = 1e-10;    // relative shape-matrix comparisons
inline constexpr double kHbar = 1.0;
inline constexpr int kPlaneBudget = 64;       // tomography sampler default
}  // namespace defaults

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

inline void require_square(const Mat& m, const std::string& what) {
    if (m.rows() != m.cols())
        throw DimensionError(what + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_even_dim(const Mat& m, const std::string& what) {
    require_square(m, what);
    if (m.rows() % 2 != 0)
        throw DimensionError(what + ": phase-space dimension must be even, got " +
                             std::to_string(m.rows()));
}

inline void require_symmetric(const Mat& m, const std::string& what,
                              double tolRel = defaults::kSymTolRel) {
    require_square(m, what);
    const double scale = std::max(max_abs(m), 1e-300);
    if (max_abs(m - m.transpose()) > tolRel * scale)
        throw DomainError(what + ": matrix is not symmetric within tolerance");
}

// Symmetrize (cheap guard against accumulated round-off in products).
inline Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

// Deterministic random source. Distributions are implemented from raw
// mt19937_64 draws so that identical seeds give identical streams across
// standard libraries (std::normal_distribution is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        // Box-Muller, no cached spare: one value per call, fully reproducible.
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    Vec normal_vec(int d) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v(i) = normal();
        return v;
    }

    Mat normal_mat(int r, int c) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = normal();
        return m;
    }

    // Uniform point in the closed ball of given radius in R^d.
    Vec ball_point(int d, double radius) {
        Vec v = normal_vec(d);
        const double nrm = v.norm();
        if (nrm == 0.0) return Vec::Zero(d);
        const double r = radius * std::pow(uniform(), 1.0 / d);
        return (r / nrm) * v;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace sympolar
