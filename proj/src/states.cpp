#include "sympolar/states.hpp"

#include "sympolar/symplectic.hpp"

#include <cmath>

namespace sympolar {

namespace {

Eigen::SelfAdjointEigenSolver<Mat> pd_solver(const Mat& M, const std::string& what) {
    require_symmetric(M, what);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(M));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError(what + ": matrix is not positive definite");
    return es;
}

Mat pd_inverse(const Mat& M, const std::string& what) {
    auto es = pd_solver(M, what);
    return sym(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose());
}

// W = (E^T J E')^{-1}; invertible exactly when the frame is transversal.
Mat frame_pairing_inverse(const LagrangianFrame& frame) {
    const int n = frame.modes();
    const Mat J = standard_J(n);
    const Mat T = frame.ell.basis.transpose() * J * frame.ellPrime.basis;
    Eigen::FullPivLU<Mat> lu(T);
    if (!lu.isInvertible())
        throw DomainError("Lagrangian frame: planes are not transversal");
    return lu.inverse();
}

// Orthonormalize the image S * basis and return (new plane, coordinate
// change R with S * basis = newBasis * R). R is read off against the
// plane's stored basis so the pair stays consistent whatever gauge the
// constructor picks.
std::pair<LagrangianPlane, Mat> push_plane(const Mat& S, const LagrangianPlane& plane) {
    const Mat image = S * plane.basis;
    LagrangianPlane out(image);
    Mat R = out.basis.transpose() * image;
    return {std::move(out), std::move(R)};
}

}  // namespace

LagrangianPlane::LagrangianPlane(const Mat& spanning, double isotropyTol) {
    if (spanning.rows() % 2 != 0 || spanning.cols() != spanning.rows() / 2)
        throw DimensionError("LagrangianPlane: expected a 2n x n spanning matrix");
    const int n = static_cast<int>(spanning.cols());
    Eigen::HouseholderQR<Mat> qr(spanning);
    const Mat R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    basis = qr.householderQ() * Mat::Identity(2 * n, n);
    for (int j = 0; j < n; ++j) {
        if (std::abs(R(j, j)) < 1e-10 * std::max(1.0, max_abs(spanning)))
            throw DomainError("LagrangianPlane: spanning vectors are rank deficient");
        if (R(j, j) < 0.0) basis.col(j) = -basis.col(j);  // deterministic gauge
    }
    const Mat J = standard_J(n);
    if (max_abs(basis.transpose() * J * basis) > isotropyTol)
        throw DomainError("LagrangianPlane: span is not isotropic");
}

double LagrangianPlane::span_distance(const LagrangianPlane& other) const {
    if (basis.rows() != other.basis.rows())
        throw DimensionError("span_distance: dimension mismatch");
    const Mat P1 = basis * basis.transpose();
    const Mat P2 = other.basis * other.basis.transpose();
    return (P1 - P2).norm();
}

LagrangianFrame::LagrangianFrame(LagrangianPlane l, LagrangianPlane lp, double frameTol)
    : ell(std::move(l)), ellPrime(std::move(lp)) {
    if (ell.modes() != ellPrime.modes())
        throw DimensionError("LagrangianFrame: planes have different mode counts");
    const int n = ell.modes();
    Mat joint(2 * n, 2 * n);
    joint.leftCols(n) = ell.basis;
    joint.rightCols(n) = ellPrime.basis;
    Eigen::JacobiSVD<Mat> svd(joint);
    if (svd.singularValues().minCoeff() < frameTol)
        throw DomainError("LagrangianFrame: planes are not transversal");
}

LagrangianFrame canonical_frame(int n) {
    Mat ex = Mat::Zero(2 * n, n);
    ex.topRows(n) = Mat::Identity(n, n);
    Mat ep = Mat::Zero(2 * n, n);
    ep.bottomRows(n) = Mat::Identity(n, n);
    return {LagrangianPlane(ex), LagrangianPlane(ep)};
}

GeometricState::GeometricState(LagrangianFrame f, Mat shape, Vec z0, double h)
    : frame(std::move(f)), shapeX(sym(shape)), center(std::move(z0)), hbar(h) {
    pd_solver(shapeX, "GeometricState shapeX");
    if (shapeX.rows() != frame.modes())
        throw DimensionError("GeometricState: shapeX must be n x n");
    if (center.size() != 2 * frame.modes())
        throw DimensionError("GeometricState: center must have dimension 2n");
    if (!(hbar > 0.0)) throw DomainError("GeometricState: hbar must be positive");
}

bool GeometricState::is_centered(double tol) const {
    return center.cwiseAbs().maxCoeff() <= tol;
}

GaussianState::GaussianState(Mat a, Mat b, Vec z0, double h)
    : A(sym(a)), B(sym(b)), center(std::move(z0)), hbar(h) {
    pd_solver(A, "GaussianState A");
    require_symmetric(b, "GaussianState B");
    if (B.rows() != A.rows()) throw DimensionError("GaussianState: A and B sizes differ");
    if (center.size() != 2 * A.rows())
        throw DimensionError("GaussianState: center must have dimension 2n");
    if (!(hbar > 0.0)) throw DomainError("GaussianState: hbar must be positive");
}

MixedGeometricState::MixedGeometricState(LagrangianFrame f, Mat sx, Mat sp, Vec z0,
                                         double h, double tol)
    : frame(std::move(f)), shapeX(sym(sx)), shapeP(sym(sp)), center(std::move(z0)), hbar(h) {
    pd_solver(shapeX, "MixedGeometricState shapeX");
    pd_solver(shapeP, "MixedGeometricState shapeP");
    if (center.size() != 2 * frame.modes())
        throw DimensionError("MixedGeometricState: center must have dimension 2n");
    const Ellipsoid dual = lagrangian_polar_dual(shapeX, frame, hbar);
    if (!contains(Ellipsoid(shapeP, hbar), dual, tol))
        throw DomainError(
            "MixedGeometricState: P must contain the Lagrangian polar dual of X");
}

Ellipsoid lagrangian_polar_dual(const Mat& shapeX, const LagrangianFrame& frame,
                                double hbar) {
    pd_solver(shapeX, "lagrangian_polar_dual");
    if (shapeX.rows() != frame.modes())
        throw DimensionError("lagrangian_polar_dual: shapeX must be n x n");
    const Mat W = frame_pairing_inverse(frame);
    return Ellipsoid(pd_inverse(sym(W * shapeX * W.transpose()), "lagrangian_polar_dual"),
                     hbar);
}

Mat frame_transport(const LagrangianFrame& frame) {
    const int n = frame.modes();
    const Mat W = frame_pairing_inverse(frame);
    Mat S(2 * n, 2 * n);
    S.leftCols(n) = frame.ell.basis;
    S.rightCols(n) = frame.ellPrime.basis * W;
    return S;
}

Mat canonical_symplectic(const GeometricState& state) {
    // PropStandard: S = S' M_{A^{-1}} with S' the frame transport and
    // A = shapeX^{-1/2}, so the correction block is diag(shapeX^{-1/2},
    // shapeX^{1/2}).
    auto es = pd_solver(state.shapeX, "canonical_symplectic");
    const int n = state.modes();
    Mat correction = Mat::Zero(2 * n, 2 * n);
    correction.topLeftCorner(n, n) = es.operatorInverseSqrt();
    correction.bottomRightCorner(n, n) = es.operatorSqrt();
    return frame_transport(state.frame) * correction;
}

GeometricState state_from_symplectic(const Mat& S, const Vec& z0, double hbar) {
    require_even_dim(S, "state_from_symplectic");
    if (!is_symplectic(S, 1e-6))
        throw DomainError("state_from_symplectic: matrix is not symplectic");
    const int n = static_cast<int>(S.rows()) / 2;
    auto [plane, R] = push_plane(S, canonical_frame(n).ell);
    LagrangianPlane planeP = push_plane(S, canonical_frame(n).ellPrime).first;
    // S(B_X) in the new basis coordinates is R(B^n), shape (R R^T)^{-1}.
    const Mat shape = pd_inverse(sym(R * R.transpose()), "state_from_symplectic");
    return GeometricState(LagrangianFrame(plane, std::move(planeP)), shape, z0, hbar);
}

GeometricState act(const Mat& S, const GeometricState& state) {
    return act_affine(S, Vec::Zero(state.center.size()), state);
}

GeometricState act_affine(const Mat& S, const Vec& translation, const GeometricState& state) {
    require_even_dim(S, "act");
    if (S.rows() != 2 * state.modes()) throw DimensionError("act: dimension mismatch");
    if (!is_symplectic(S, 1e-6)) throw DomainError("act: matrix is not symplectic");
    auto [plane, R] = push_plane(S, state.frame.ell);
    LagrangianPlane planeP = push_plane(S, state.frame.ellPrime).first;
    // Body {E c : shapeX c.c <= h} maps to coordinates c~ = R c.
    const Mat Rinv = R.inverse();
    const Mat newShape = sym(Rinv.transpose() * state.shapeX * Rinv);
    return GeometricState(LagrangianFrame(plane, std::move(planeP)), newShape,
                          S * state.center + translation, state.hbar);
}

Ellipsoid john_of_state(const GeometricState& state) {
    const Mat S = canonical_symplectic(state);
    // S(B^{2n}(sqrt h)) has shape (S S^T)^{-1}.
    const Mat G = pd_inverse(sym(S * S.transpose()), "john_of_state");
    return Ellipsoid(state.center, G, state.hbar);
}

std::pair<Ellipsoid, Ellipsoid> transported_product(const MixedGeometricState& state) {
    // P = {E' c : shapeP c.c <= h} pulls back through S'(0, p) = E' W p
    // to shape W^T shapeP W on ell_P.
    const Mat W = frame_pairing_inverse(state.frame);
    return {Ellipsoid(state.shapeX, state.hbar),
            Ellipsoid(sym(W.transpose() * state.shapeP * W), state.hbar)};
}

Ellipsoid john_of_state(const MixedGeometricState& state) {
    const Mat Sprime = frame_transport(state.frame);
    auto [x0, p0] = transported_product(state);
    const Ellipsoid john = john_of_product(x0, p0);
    const Mat Sinv = Sprime.inverse();
    return Ellipsoid(state.center, sym(Sinv.transpose() * john.Q * Sinv), state.hbar);
}

Mat gaussian_symplectic(const Mat& A, const Mat& B) {
    auto es = pd_solver(A, "gaussian_symplectic");
    require_symmetric(B, "gaussian_symplectic");
    const int n = static_cast<int>(A.rows());
    const Mat Ainvsqrt = es.operatorInverseSqrt();
    Mat S(2 * n, 2 * n);
    S.topLeftCorner(n, n) = Ainvsqrt;
    S.topRightCorner(n, n).setZero();
    S.bottomLeftCorner(n, n) = -B * Ainvsqrt;
    S.bottomRightCorner(n, n) = es.operatorSqrt();
    return S;
}

GaussianState to_gaussian(const GeometricState& state) {
    const Mat S = canonical_symplectic(state);
    const Mat G = pd_inverse(sym(S * S.transpose()), "to_gaussian");
    auto [A, B] = gaussian_from_wigner(G);
    return GaussianState(A, B, state.center, state.hbar);
}

GeometricState from_gaussian(const GaussianState& g) {
    return state_from_symplectic(gaussian_symplectic(g.A, g.B), g.center, g.hbar);
}

Mat wigner_matrix(const GaussianState& g) {
    const int n = g.modes();
    const Mat Ainv = pd_inverse(g.A, "wigner_matrix");
    Mat G(2 * n, 2 * n);
    G.topLeftCorner(n, n) = g.A + g.B * Ainv * g.B;
    G.topRightCorner(n, n) = g.B * Ainv;
    G.bottomLeftCorner(n, n) = Ainv * g.B;
    G.bottomRightCorner(n, n) = Ainv;
    return sym(G);
}

std::pair<Mat, Mat> gaussian_from_wigner(const Mat& G, double spTol) {
    require_even_dim(G, "gaussian_from_wigner");
    const int n = static_cast<int>(G.rows()) / 2;
    require_symmetric(G, "gaussian_from_wigner");
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(G), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw DomainError("gaussian_from_wigner: G is not positive definite");
    if (!is_symplectic(G, spTol))
        throw DomainError("gaussian_from_wigner: G is not symplectic");
    const Mat A = pd_inverse(G.bottomRightCorner(n, n), "gaussian_from_wigner");
    const Mat B = sym(G.topRightCorner(n, n) * A);
    return {A, B};
}

GaussianState metaplectic_act(const Mat& S, const GaussianState& g) {
    require_even_dim(S, "metaplectic_act");
    if (S.rows() != 2 * g.modes()) throw DimensionError("metaplectic_act: dimension mismatch");
    if (!is_symplectic(S, 1e-6)) throw DomainError("metaplectic_act: matrix is not symplectic");
    const Mat Sinv = S.inverse();
    const Mat G = sym(Sinv.transpose() * wigner_matrix(g) * Sinv);
    auto [A, B] = gaussian_from_wigner(G);
    return GaussianState(A, B, S * g.center, g.hbar);
}

GaussianState displace(const Vec& z0, const GaussianState& g) {
    if (z0.size() != g.center.size()) throw DimensionError("displace: dimension mismatch");
    return GaussianState(g.A, g.B, g.center + z0, g.hbar);
}

std::pair<Mat, Mat> marginals_gaussian(const GaussianState& g) {
    const Mat Ginv = pd_inverse(wigner_matrix(g), "marginals_gaussian");
    const int n = g.modes();
    const Mat sigmaXX = (g.hbar / 2.0) * Ginv.topLeftCorner(n, n);
    const Mat sigmaPP = (g.hbar / 2.0) * Ginv.bottomRightCorner(n, n);
    return {sigmaXX, sigmaPP};
}

}  // namespace sympolar
