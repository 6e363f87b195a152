#include "sympolar/ellipsoid.hpp"

#include "sympolar/symplectic.hpp"

#include <cmath>

namespace sympolar {

namespace {

void check_shape(const Mat& Q, double hbar, const std::string& what) {
    require_symmetric(Q, what);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(Q), Eigen::EigenvaluesOnly);
    const double scale = std::max(max_abs(Q), 1e-300);
    if (es.eigenvalues().minCoeff() <= defaults::kPdTolRel * scale)
        throw NotPositiveDefiniteError(what + ": shape matrix is not positive definite");
    if (!(hbar > 0.0)) throw DomainError(what + ": hbar must be positive");
}

Mat pd_inverse(const Mat& Q) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(Q));
    return sym(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose());
}

void require_centered(const Ellipsoid& e, const std::string& what) {
    if (!e.is_centered())
        throw DomainError(what + ": operation is defined for centered ellipsoids only "
                          "(Santalo-point duality is not supported)");
}

double sqrt_det_pd(const Mat& Q) {
    Eigen::LLT<Mat> llt(sym(Q));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefiniteError("sqrt_det_pd: Cholesky failed");
    return Mat(llt.matrixL()).diagonal().prod();
}

}  // namespace

Ellipsoid::Ellipsoid(Mat shape, double h) : center(Vec::Zero(shape.rows())), Q(sym(shape)), hbar(h) {
    check_shape(Q, hbar, "Ellipsoid");
}

Ellipsoid::Ellipsoid(Vec c, Mat shape, double h) : center(std::move(c)), Q(sym(shape)), hbar(h) {
    check_shape(Q, hbar, "Ellipsoid");
    if (center.size() != Q.rows())
        throw DimensionError("Ellipsoid: center dimension does not match shape matrix");
}

bool Ellipsoid::is_centered(double tol) const {
    return center.size() == 0 || center.cwiseAbs().maxCoeff() <= tol;
}

bool Ellipsoid::contains_point(const Vec& z, double tol) const {
    if (z.size() != Q.rows()) throw DimensionError("contains_point: dimension mismatch");
    const Vec d = z - center;
    return d.dot(Q * d) <= hbar + tol;
}

Ellipsoid Ellipsoid::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("Ellipsoid::scaled: factor must be positive");
    return Ellipsoid(lambda * center, Q / (lambda * lambda), hbar);
}

Ellipsoid Ellipsoid::mapped(const Mat& A) const {
    require_square(A, "Ellipsoid::mapped");
    if (A.rows() != Q.rows()) throw DimensionError("Ellipsoid::mapped: dimension mismatch");
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) throw DomainError("Ellipsoid::mapped: map is singular");
    const Mat Ainv = lu.inverse();
    return Ellipsoid(A * center, sym(Ainv.transpose() * Q * Ainv), hbar);
}

Subspace::Subspace(const Mat& spanning) {
    if (spanning.cols() < 1 || spanning.cols() > spanning.rows())
        throw DimensionError("Subspace: expected a d x k spanning matrix with 1 <= k <= d");
    Eigen::HouseholderQR<Mat> qr(spanning);
    const int k = static_cast<int>(spanning.cols());
    Mat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
        if (std::abs(R(j, j)) < 1e-10 * std::max(1.0, max_abs(spanning)))
            throw DomainError("Subspace: spanning vectors are rank deficient");
    basis = qr.householderQ() * Mat::Identity(spanning.rows(), k);
    for (int j = 0; j < k; ++j)
        if (R(j, j) < 0.0) basis.col(j) = -basis.col(j);
}

Ellipsoid polar_dual(const Ellipsoid& e) {
    require_centered(e, "polar_dual");
    return Ellipsoid(pd_inverse(e.Q), e.hbar);
}

Ellipsoid symplectic_polar_dual(const Ellipsoid& e) {
    require_centered(e, "symplectic_polar_dual");
    if (e.dim() % 2 != 0)
        throw DimensionError("symplectic_polar_dual: ambient dimension must be even");
    const Mat J = standard_J(e.dim() / 2);
    return Ellipsoid(sym(-J * pd_inverse(e.Q) * J), e.hbar);
}

Ellipsoid project(const Ellipsoid& e, const Subspace& f) {
    require_centered(e, "project");
    if (f.ambient_dim() != e.dim()) throw DimensionError("project: subspace/ellipsoid mismatch");
    const Mat& B = f.basis;
    return Ellipsoid(pd_inverse(sym(B.transpose() * pd_inverse(e.Q) * B)), e.hbar);
}

Ellipsoid intersect_subspace(const Ellipsoid& e, const Subspace& f) {
    require_centered(e, "intersect_subspace");
    if (f.ambient_dim() != e.dim())
        throw DimensionError("intersect_subspace: subspace/ellipsoid mismatch");
    const Mat& B = f.basis;
    return Ellipsoid(sym(B.transpose() * e.Q * B), e.hbar);
}

double plane_section_area(const Ellipsoid& e, const Subspace& f) {
    if (f.dim() != 2) throw DimensionError("plane_section_area: subspace must be 2-dimensional");
    const Ellipsoid section = intersect_subspace(e, f);
    const double det = section.Q.determinant();
    if (!(det > 0.0)) throw DomainError("plane_section_area: degenerate section");
    const double pi = 3.14159265358979323846;
    return pi * e.hbar / std::sqrt(det);
}

double plane_section_symplectic_area(const Ellipsoid& e, const Subspace& f) {
    if (e.dim() % 2 != 0)
        throw DimensionError("plane_section_symplectic_area: ambient dimension must be even");
    return symplectic_form(f.basis.col(0), f.basis.col(1)) * plane_section_area(e, f);
}

double volume(const Ellipsoid& e) {
    const double pi = 3.14159265358979323846;
    const double d = static_cast<double>(e.dim());
    return std::pow(pi * e.hbar, d / 2.0) / std::tgamma(d / 2.0 + 1.0) / sqrt_det_pd(e.Q);
}

double mahler_volume(const Ellipsoid& e) { return volume(e) * volume(polar_dual(e)); }

bool contains(const Ellipsoid& outer, const Ellipsoid& inner, double tol) {
    if (outer.dim() != inner.dim()) throw DimensionError("contains: dimension mismatch");
    if ((outer.center - inner.center).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("contains: ellipsoids must share a center");
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(inner.Q));
    const Mat Wisqrt = es.operatorInverseSqrt();
    const Mat whitened =
        Mat::Identity(inner.dim(), inner.dim()) -
        sym(Wisqrt * outer.Q * Wisqrt) * (inner.hbar / outer.hbar);
    Eigen::SelfAdjointEigenSolver<Mat> ws(sym(whitened), Eigen::EigenvaluesOnly);
    return ws.eigenvalues().minCoeff() >= -tol;
}

namespace {

// Block map Phi = diag(Q1^{-1/2}, sqrt(h2/h1) Q2^{-1/2}) sends
// B(sqrt(h1)) x B(sqrt(h1)) onto E1 x E2; John/Loewner of the ball
// product are balls, and both ellipsoids transform covariantly.
Ellipsoid product_ball_image(const Ellipsoid& e1, const Ellipsoid& e2, double radiusFactor) {
    if (e1.dim() != e2.dim())
        throw DimensionError("john/loewner_of_product: factor dimensions differ");
    require_centered(e1, "john/loewner_of_product");
    require_centered(e2, "john/loewner_of_product");
    const int n = e1.dim();
    Mat Q = Mat::Zero(2 * n, 2 * n);
    Q.topLeftCorner(n, n) = e1.Q;
    Q.bottomRightCorner(n, n) = (e1.hbar / e2.hbar) * e2.Q;
    return Ellipsoid(Q / (radiusFactor * radiusFactor), e1.hbar);
}

}  // namespace

Ellipsoid john_of_product(const Ellipsoid& e1, const Ellipsoid& e2) {
    return product_ball_image(e1, e2, 1.0);
}

Ellipsoid loewner_of_product(const Ellipsoid& e1, const Ellipsoid& e2) {
    // Enclosing-ball radius of B(R) x B(R) is sqrt(2) R: the extreme
    // points (|x| = |p| = R) lie at distance sqrt(2) R. The stated 2R
    // would not be minimal; see the enclosing-ellipsoid oracle tests.
    return product_ball_image(e1, e2, std::sqrt(2.0));
}

}  // namespace sympolar
