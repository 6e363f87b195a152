#include "sympolar/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <complex>
#include <vector>

namespace sympolar {

namespace {

// Symmetric PD eigendecomposition with a positivity check.
Eigen::SelfAdjointEigenSolver<Mat> pd_solver(const Mat& M, double pdTolRel,
                                             const std::string& what) {
    require_symmetric(M, what);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(M));
    if (es.info() != Eigen::Success)
        throw NumericalError(what + ": symmetric eigensolver failed");
    const double scale = std::max(max_abs(M), 1e-300);
    if (es.eigenvalues().minCoeff() <= pdTolRel * scale)
        throw NotPositiveDefiniteError(
            what + ": matrix is not positive definite (min eigenvalue " +
            std::to_string(es.eigenvalues().minCoeff()) + ")");
    return es;
}

// Orthonormal Q with Q^T K Q = [[0, Lambda], [-Lambda, 0]] for skew K,
// Lambda = diag(lambda_1 >= ... >= lambda_n > 0). Eigenpairs of the
// Hermitian iK: for eigenvalue lambda > 0 with eigenvector w = u + iv,
// K u = lambda v and K v = -lambda u; the real pair (v, u) goes into
// columns (j, n + j). Degenerate eigenvalues need re-orthogonalization of
// the u's, which preserves the pairing since v = K u / lambda.
struct SkewCanonical {
    Mat Q;
    Vec lambda;
};

SkewCanonical skew_canonical_form(const Mat& K) {
    const int d = static_cast<int>(K.rows());
    const int n = d / 2;
    Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * K.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("skew canonical form: Hermitian eigensolver failed");

    // Ascending eigenvalues; the top n are the positive ones.
    std::vector<int> idx(n);
    for (int j = 0; j < n; ++j) idx[j] = d - 1 - j;  // descending positives

    Mat Q(d, d);
    Vec lambda(n);
    for (int j = 0; j < n; ++j) {
        const double lam = es.eigenvalues()(idx[j]);
        if (!(lam > 0.0))
            throw NumericalError("skew canonical form: expected positive eigenvalue");
        lambda(j) = lam;
        Eigen::VectorXcd w = es.eigenvectors().col(idx[j]);
        Vec u = w.real();
        Vec v = w.imag();

        // Build u orthogonal to the columns already chosen (matters only
        // for repeated eigenvalues, e.g. M = I).
        Vec cand = u;
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                cand -= cand.dot(Q.col(k)) * Q.col(k);
                cand -= cand.dot(Q.col(n + k)) * Q.col(n + k);
            }
            if (cand.norm() > 1e-6) break;
            cand = v;  // Re(w) degenerate under phase choice; retry with Im(w)
        }
        if (cand.norm() <= 1e-10)
            throw NumericalError("skew canonical form: failed to extract invariant pair");
        cand.normalize();
        Vec mate = K * cand / lam;
        const double mateNorm = mate.norm();
        if (std::abs(mateNorm - 1.0) > 1e-6) mate /= mateNorm;
        Q.col(j) = mate;      // K * mate = -lam * cand
        Q.col(n + j) = cand;  // K * cand = +lam * mate
    }
    return {Q, lambda};
}

}  // namespace

Mat standard_J(int n) {
    if (n < 1) throw DimensionError("standard_J: n must be >= 1");
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return J;
}

double symplectic_form(const Vec& u, const Vec& v) {
    if (u.size() != v.size() || u.size() % 2 != 0)
        throw DimensionError("symplectic_form: vectors must share an even dimension");
    const int n = static_cast<int>(u.size()) / 2;
    // (Ju).v with J = [[0, I], [-I, 0]]: Ju = (u_p, -u_x)
    return u.tail(n).dot(v.head(n)) - u.head(n).dot(v.tail(n));
}

double symplecticity_residual(const Mat& S) {
    require_even_dim(S, "symplecticity_residual");
    const int n = static_cast<int>(S.rows()) / 2;
    const Mat J = standard_J(n);
    return max_abs(S.transpose() * J * S - J);
}

bool is_symplectic(const Mat& S, double tol) {
    return symplecticity_residual(S) <= tol;
}

Vec symplectic_eigenvalues(const Mat& M, double pdTolRel) {
    require_even_dim(M, "symplectic_eigenvalues");
    auto es = pd_solver(M, pdTolRel, "symplectic_eigenvalues");
    const int n = static_cast<int>(M.rows()) / 2;
    const Mat Msqrt = es.operatorSqrt();
    const Mat K = Msqrt * standard_J(n) * Msqrt;
    Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * K.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(H, Eigen::EigenvaluesOnly);
    if (hs.info() != Eigen::Success)
        throw NumericalError("symplectic_eigenvalues: Hermitian eigensolver failed");
    Vec lam(n);
    for (int j = 0; j < n; ++j) lam(j) = hs.eigenvalues()(2 * n - 1 - j);
    return lam;
}

Mat WilliamsonForm::D() const {
    const int n = static_cast<int>(spectrum.size());
    Mat D = Mat::Zero(2 * n, 2 * n);
    D.topLeftCorner(n, n).diagonal() = spectrum;
    D.bottomRightCorner(n, n).diagonal() = spectrum;
    return D;
}

Mat WilliamsonForm::reconstruct() const { return S.transpose() * D() * S; }

WilliamsonForm williamson(const Mat& M, double pdTolRel) {
    require_even_dim(M, "williamson");
    auto es = pd_solver(M, pdTolRel, "williamson");
    const int n = static_cast<int>(M.rows()) / 2;
    const Mat Msqrt = es.operatorSqrt();
    const Mat K = Msqrt * standard_J(n) * Msqrt;

    SkewCanonical c = skew_canonical_form(K);

    // With Q^T K Q = J D one checks that S = D^{-1/2} Q^T M^{1/2} is
    // symplectic and satisfies S^T D S = M.
    Vec dinvsqrt(2 * n);
    for (int j = 0; j < n; ++j) {
        dinvsqrt(j) = 1.0 / std::sqrt(c.lambda(j));
        dinvsqrt(n + j) = dinvsqrt(j);
    }
    WilliamsonForm w;
    w.spectrum = c.lambda;
    w.S = dinvsqrt.asDiagonal() * c.Q.transpose() * Msqrt;

    const double scale = std::max(max_abs(M), 1e-300);
    if (max_abs(w.reconstruct() - M) > 1e-8 * scale)
        throw NumericalError("williamson: reconstruction residual exceeds 1e-8*||M||");
    return w;
}

Mat complete_symplectic_basis(const Mat& e, double isotropyTol) {
    if (e.rows() % 2 != 0 || e.cols() != e.rows() / 2)
        throw DimensionError("complete_symplectic_basis: expected 2n x n input");
    const int n = static_cast<int>(e.cols());

    Eigen::HouseholderQR<Mat> qr(e);
    Mat E = qr.householderQ() * Mat::Identity(2 * n, n);
    const Mat R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        if (std::abs(R(j, j)) < 1e-10 * std::max(1.0, max_abs(e)))
            throw DomainError("complete_symplectic_basis: input vectors are rank deficient");
        if (R(j, j) < 0.0) E.col(j) = -E.col(j);  // deterministic sign gauge
    }

    const Mat J = standard_J(n);
    if (max_abs(E.transpose() * J * E) > isotropyTol)
        throw DomainError("complete_symplectic_basis: input plane is not isotropic");

    Mat S(2 * n, 2 * n);
    S.leftCols(n) = E;
    S.rightCols(n) = -J * E;
    return S;
}

Mat generator_ML(const Mat& L) {
    require_square(L, "generator_ML");
    const int n = static_cast<int>(L.rows());
    Eigen::FullPivLU<Mat> lu(L);
    if (!lu.isInvertible()) throw DomainError("generator_ML: L is singular");
    Mat S = Mat::Zero(2 * n, 2 * n);
    S.topLeftCorner(n, n) = lu.inverse();
    S.bottomRightCorner(n, n) = L.transpose();
    return S;
}

Mat generator_VP(const Mat& P) {
    require_symmetric(P, "generator_VP");
    const int n = static_cast<int>(P.rows());
    Mat S = Mat::Identity(2 * n, 2 * n);
    S.bottomLeftCorner(n, n) = sym(P);
    return S;
}

Mat PreIwasawa::reconstruct() const { return generator_ML(L) * generator_VP(P) * U; }

PreIwasawa pre_iwasawa(const Mat& S, double spTol) {
    require_even_dim(S, "pre_iwasawa");
    if (!is_symplectic(S, std::max(spTol, 1e-6)))
        throw DomainError("pre_iwasawa: input is not symplectic");
    const int n = static_cast<int>(S.rows()) / 2;
    const Mat A = S.topLeftCorner(n, n);
    const Mat B = S.topRightCorner(n, n);
    const Mat C = S.bottomLeftCorner(n, n);
    const Mat D = S.bottomRightCorner(n, n);

    // A + iB = L^{-1} u is a complex polar decomposition: AA^T + BB^T is
    // positive definite for symplectic S, L = (AA^T + BB^T)^{-1/2}, and
    // u = L(A + iB) is unitary. U is the U(n) embedding of u.
    const Mat Gamma = sym(A * A.transpose() + B * B.transpose());
    auto es = pd_solver(Gamma, defaults::kPdTolRel, "pre_iwasawa");
    PreIwasawa f;
    f.L = es.operatorInverseSqrt();
    const Mat X = f.L * A;
    const Mat Y = f.L * B;
    f.U = Mat::Zero(2 * n, 2 * n);
    f.U.topLeftCorner(n, n) = X;
    f.U.topRightCorner(n, n) = Y;
    f.U.bottomLeftCorner(n, n) = -Y;
    f.U.bottomRightCorner(n, n) = X;

    // (S U^T)_{21} = L P with P symmetric.
    const Mat R21 = C * X.transpose() + D * Y.transpose();
    f.P = sym(es.operatorSqrt() * R21);

    if (max_abs(f.reconstruct() - S) > 1e-8 * std::max(1.0, max_abs(S)))
        throw NumericalError("pre_iwasawa: reconstruction residual exceeds 1e-8");
    return f;
}

Mat random_symplectic(int n, Rng& rng, double spread) {
    Mat A = rng.normal_mat(2 * n, 2 * n) * spread;
    A = sym(A);
    return (standard_J(n) * A).exp();
}

}  // namespace sympolar
