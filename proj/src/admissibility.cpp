#include "sympolar/admissibility.hpp"

#include "sympolar/symplectic.hpp"

#include <cmath>

namespace sympolar {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat pd_inverse(const Mat& Q) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(Q));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("matrix inverse: input not positive definite");
    return sym(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose());
}

void require_phase_space(const Ellipsoid& e, const std::string& what) {
    if (e.dim() % 2 != 0)
        throw DimensionError(what + ": ambient dimension must be even");
    if (!e.is_centered()) throw DomainError(what + ": ellipsoid must be centered");
}

// Sampled test planes: images of the (x1, p1) plane under random
// symplectic maps, preceded by the n conjugate coordinate planes.
std::vector<Subspace> sample_symplectic_planes(int n, int planeBudget, std::uint64_t seed) {
    std::vector<Subspace> planes;
    planes.reserve(static_cast<std::size_t>(n + std::max(planeBudget, 0)));
    Mat pair(2 * n, 2);
    for (int j = 0; j < n; ++j) {
        pair.setZero();
        pair(j, 0) = 1.0;
        pair(n + j, 1) = 1.0;
        planes.emplace_back(pair);
    }
    Rng rng(seed);
    for (int k = 0; k < planeBudget; ++k) {
        const Mat S = random_symplectic(n, rng);
        pair.col(0) = S.col(0);
        pair.col(1) = S.col(n);
        planes.emplace_back(pair);
    }
    return planes;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Mat sigma, double h) : Sigma(sym(sigma)), hbar(h) {
    require_even_dim(Sigma, "CovarianceMatrix");
    require_symmetric(sigma, "CovarianceMatrix");
    if (!(hbar > 0.0)) throw DomainError("CovarianceMatrix: hbar must be positive");
}

Mat CovarianceMatrix::xx() const { return Sigma.topLeftCorner(modes(), modes()); }
Mat CovarianceMatrix::xp() const { return Sigma.topRightCorner(modes(), modes()); }
Mat CovarianceMatrix::pp() const { return Sigma.bottomRightCorner(modes(), modes()); }

bool is_quantum_blob(const Ellipsoid& e, double tol) {
    require_phase_space(e, "is_quantum_blob");
    return is_symplectic(e.Q, tol);
}

SpectrumVerdict admissible_by_spectrum(const Ellipsoid& e, double tol) {
    require_phase_space(e, "admissible_by_spectrum");
    const double lamMax = symplectic_eigenvalues(e.Q).maxCoeff();
    return {lamMax <= 1.0 + tol, 1.0 - lamMax};
}

bool admissible_by_inclusion(const Ellipsoid& e, double tol) {
    require_phase_space(e, "admissible_by_inclusion");
    return contains(e, symplectic_polar_dual(e), tol);
}

bool admissible_by_tomography(const Ellipsoid& e, int planeBudget, std::uint64_t seed,
                              double tol) {
    require_phase_space(e, "admissible_by_tomography");
    const int n = e.dim() / 2;
    const Ellipsoid dual = symplectic_polar_dual(e);
    for (const Subspace& f : sample_symplectic_planes(n, planeBudget, seed)) {
        if (plane_section_area(dual, f) > kPi * e.hbar * (1.0 + tol)) return false;
    }
    return true;
}

PositivityResult positivity_check(const CovarianceMatrix& cov, double tol) {
    const int n = cov.modes();
    const Mat J = standard_J(n);
    Mat embed(4 * n, 4 * n);
    embed.topLeftCorner(2 * n, 2 * n) = cov.Sigma;
    embed.bottomRightCorner(2 * n, 2 * n) = cov.Sigma;
    embed.topRightCorner(2 * n, 2 * n) = -(cov.hbar / 2.0) * J;
    embed.bottomLeftCorner(2 * n, 2 * n) = (cov.hbar / 2.0) * J;
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(embed), Eigen::EigenvaluesOnly);
    const double minEig = es.eigenvalues().minCoeff();
    return {minEig >= -tol * std::max(1.0, max_abs(cov.Sigma)), minEig};
}

std::vector<RSInequality> rs_check(const CovarianceMatrix& cov, double tol) {
    const int n = cov.modes();
    std::vector<RSInequality> out;
    out.reserve(n);
    const double quarter = cov.hbar * cov.hbar / 4.0;
    for (int j = 0; j < n; ++j) {
        RSInequality rs;
        rs.lhs = cov.Sigma(j, j) * cov.Sigma(n + j, n + j);
        rs.rhs = cov.Sigma(j, n + j) * cov.Sigma(j, n + j) + quarter;
        rs.satisfied = rs.lhs >= rs.rhs - tol * std::max(1.0, rs.rhs);
        out.push_back(rs);
    }
    return out;
}

Ellipsoid covariance_ellipsoid(const CovarianceMatrix& cov) {
    return Ellipsoid((cov.hbar / 2.0) * pd_inverse(cov.Sigma), cov.hbar);
}

Ellipsoid info_ellipsoid(const CovarianceMatrix& cov) {
    return Ellipsoid((cov.hbar / 2.0) * cov.Sigma, cov.hbar);
}

Ellipsoid legendre_dual(const Ellipsoid& e) {
    if (!e.is_centered()) throw DomainError("legendre_dual: ellipsoid must be centered");
    const double s = e.hbar / 2.0;
    return Ellipsoid(s * s * pd_inverse(e.Q), e.hbar);
}

NarcowichReport narcowich_report(const CovarianceMatrix& cov, int planeBudget,
                                 std::uint64_t seed, double tol) {
    const int n = cov.modes();
    const Ellipsoid omegaCov = covariance_ellipsoid(cov);
    const Vec spectrum = symplectic_eigenvalues(omegaCov.Q);

    NarcowichReport r;
    r.capacity_cov = kPi * cov.hbar / spectrum.maxCoeff();
    r.orbit_bound_ok = r.capacity_cov >= kPi * cov.hbar * (1.0 - tol);
    r.blob_boundary = std::abs(r.capacity_cov - kPi * cov.hbar) <= tol * kPi * cov.hbar;

    // Omega* = Legendre dual of Omega_cov (= the information ellipsoid);
    // its shape (h/2)^2 M^{-1} has symplectic spectrum (h/2)^2 / lambda_j,
    // so c(Omega*) = (4 pi / hbar) lambda_min^sigma(M).
    const Ellipsoid omegaStar = legendre_dual(omegaCov);
    const Vec starSpectrum = symplectic_eigenvalues(omegaStar.Q);
    r.capacity_star = kPi * cov.hbar / starSpectrum.maxCoeff();
    r.star_threshold = 4.0 * kPi / cov.hbar;
    r.star_le_threshold = r.capacity_star <= r.star_threshold * (1.0 + tol);
    r.star_ge_threshold = r.capacity_star >= r.star_threshold * (1.0 - tol);

    r.max_section_action = 0.0;
    const auto planes = sample_symplectic_planes(n, planeBudget, seed);
    for (const Subspace& f : planes) {
        const double action = plane_section_symplectic_area(omegaStar, f);
        r.max_section_action = std::max(r.max_section_action, std::abs(action));
    }
    r.planes_sampled = static_cast<int>(planes.size());

    // Null planes exist only for n >= 2; span{x_j, x_k} is one.
    r.max_null_action = 0.0;
    if (n >= 2) {
        Mat pair = Mat::Zero(2 * n, 2);
        for (int j = 0; j + 1 < n; ++j) {
            pair.setZero();
            pair(j, 0) = 1.0;
            pair(j + 1, 1) = 1.0;
            const double action = plane_section_symplectic_area(omegaStar, Subspace(pair));
            r.max_null_action = std::max(r.max_null_action, std::abs(action));
        }
    }
    return r;
}

PurityResult purity(const CovarianceMatrix& cov, double tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(cov.Sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("purity: covariance matrix not positive definite");
    const double logdet = es.eigenvalues().array().log().sum();
    const double value =
        std::exp(cov.modes() * std::log(cov.hbar / 2.0) - 0.5 * logdet);
    return {value, value > 1.0 + tol};
}

HardyResult hardy_check(const Mat& A, const Mat& B, double tol) {
    require_symmetric(A, "hardy_check(A)");
    require_symmetric(B, "hardy_check(B)");
    if (A.rows() != B.rows()) throw DimensionError("hardy_check: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> ea(sym(A));
    if (ea.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("hardy_check: A not positive definite");
    const Mat Asqrt = ea.operatorSqrt();
    // AB is similar to A^{1/2} B A^{1/2}; eigenvalues are real positive.
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(Asqrt * B * Asqrt), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("hardy_check: B not positive definite");
    HardyResult r;
    r.eigenvalues = es.eigenvalues();
    r.satisfied = r.eigenvalues.maxCoeff() <= 1.0 + tol;
    r.saturated = (r.eigenvalues.array() - 1.0).abs().maxCoeff() <= tol;
    return r;
}

bool subgaussian_check(const Mat& M, double hbar, double tol) {
    return admissible_by_spectrum(Ellipsoid(M, hbar), tol).admissible;
}

AdmissibilityReport analyze_covariance(const CovarianceMatrix& cov, int planeBudget,
                                       std::uint64_t seed, double tol) {
    AdmissibilityReport rep;
    const Ellipsoid shape = covariance_ellipsoid(cov);
    rep.spectrum = symplectic_eigenvalues(shape.Q);
    const SpectrumVerdict sv = admissible_by_spectrum(shape, tol);
    rep.by_spectrum = sv.admissible;
    rep.spectral_margin = sv.margin;
    rep.by_inclusion = admissible_by_inclusion(shape, tol);
    rep.by_tomography = admissible_by_tomography(shape, planeBudget, seed, tol);
    const PositivityResult pos = positivity_check(cov, tol);
    rep.by_positivity = pos.positive;
    rep.positivity_min_eigenvalue = pos.minEigenvalue;
    rep.by_rs = true;
    for (const RSInequality& rs : rs_check(cov, tol)) rep.by_rs = rep.by_rs && rs.satisfied;
    rep.purity = purity(cov, tol);
    rep.narcowich = narcowich_report(cov, planeBudget, seed, tol);
    return rep;
}

}  // namespace sympolar
