#include "test_support.hpp"

#include "sympolar/admissibility.hpp"
#include "sympolar/states.hpp"
#include "sympolar/symplectic.hpp"

#include <doctest.h>

#include <cmath>

using namespace sympolar;
using sympolar::testing::random_spd;
using sympolar::testing::rel_err;

namespace {

// Equality of the plane-supported bodies {B c : Q c.c <= h} as subsets of
// phase space: equal spans plus shape agreement under the change of basis.
bool body_equal(const Mat& B1, const Mat& Q1, const Mat& B2, const Mat& Q2,
                double tol = 1e-8) {
    if ((B1 * B1.transpose() - B2 * B2.transpose()).cwiseAbs().maxCoeff() > tol)
        return false;
    const Mat C = B2.transpose() * B1;  // orthogonal within the shared span
    return rel_err(sym(C.transpose() * Q2 * C), sym(Q1)) < tol;
}

GeometricState standard_state(int n, double hbar) {
    return GeometricState(canonical_frame(n), Mat::Identity(n, n), Vec::Zero(2 * n), hbar);
}

}  // namespace

TEST_CASE("Lagrangian plane validation") {
    Mat ok(2, 1);
    ok << 1.0, 0.5;  // any line in R^2 is Lagrangian
    CHECK_NOTHROW(LagrangianPlane{ok});

    Mat bad(4, 2);
    bad.setZero();
    bad(0, 0) = 1.0;  // x1
    bad(2, 1) = 1.0;  // p1: sigma(x1, p1) = 1 != 0
    CHECK_THROWS_AS(LagrangianPlane{bad}, DomainError);
}

TEST_CASE("frame transversality") {
    const LagrangianFrame canonical = canonical_frame(2);
    CHECK(canonical.modes() == 2);
    // ell against itself is maximally non-transversal.
    CHECK_THROWS_AS(LagrangianFrame(canonical.ell, canonical.ell), DomainError);
}

TEST_CASE("Lagrangian polar dual in the canonical frame") {
    const LagrangianFrame frame = canonical_frame(2);
    CHECK(rel_err(lagrangian_polar_dual(Mat::Identity(2, 2), frame).Q,
                  Mat::Identity(2, 2)) < 1e-12);

    Rng rng(55);
    const Mat A = random_spd(2, rng);
    CHECK(rel_err(lagrangian_polar_dual(A, frame).Q, A.inverse()) < 1e-10);
}

TEST_CASE("Lagrangian duality is symplectically covariant") {
    Rng rng(56);
    for (int n : {1, 2, 3}) {
        const GeometricState st0 = standard_state(n, 1.0);
        Rng inner(57 + n);
        const Mat A = random_spd(n, inner);
        const GeometricState shaped(st0.frame, A, Vec::Zero(2 * n), 1.0);
        const Mat S = random_symplectic(n, inner);
        const GeometricState moved = act(S, shaped);

        // dual of S(X) w.r.t. the moved frame == S(dual of X).
        const Ellipsoid dualMoved =
            lagrangian_polar_dual(moved.shapeX, moved.frame, moved.hbar);
        const Ellipsoid dual0 = lagrangian_polar_dual(A, shaped.frame, 1.0);
        const Mat mappedBasis = S * shaped.frame.ellPrime.basis;
        // S(dual0) = {S E' c : dual0.Q c.c <= h}; orthonormalize to compare.
        Eigen::HouseholderQR<Mat> qr(mappedBasis);
        Mat Qb = qr.householderQ() * Mat::Identity(2 * n, n);
        Mat R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        const Mat Rinv = R.inverse();
        const Mat mappedShape = sym(Rinv.transpose() * dual0.Q * Rinv);
        CHECK(body_equal(moved.frame.ellPrime.basis, dualMoved.Q, Qb, mappedShape));
    }
}

TEST_CASE("frame transport") {
    const LagrangianFrame canonical = canonical_frame(2);
    CHECK(max_abs(frame_transport(canonical) - Mat::Identity(4, 4)) < 1e-12);

    // Swapped frame: a J-type rotation.
    const LagrangianFrame swapped(canonical.ellPrime, canonical.ell);
    const Mat S = frame_transport(swapped);
    CHECK(is_symplectic(S, 1e-10));
    CHECK(swapped.ell.span_distance(LagrangianPlane(S.leftCols(2))) < 1e-10);
    CHECK(swapped.ellPrime.span_distance(LagrangianPlane(S.rightCols(2))) < 1e-10);

    Rng rng(58);
    for (int n : {1, 2, 3}) {
        const Mat S0 = random_symplectic(n, rng);
        const LagrangianFrame frame(LagrangianPlane(S0.leftCols(n)),
                                    LagrangianPlane(S0.rightCols(n)));
        const Mat T = frame_transport(frame);
        CHECK(is_symplectic(T, 1e-8));
        CHECK(frame.ell.span_distance(LagrangianPlane(T.leftCols(n))) < 1e-8);
        CHECK(frame.ellPrime.span_distance(LagrangianPlane(T.rightCols(n))) < 1e-8);
        CHECK_THROWS_AS(frame_transport(LagrangianFrame(frame.ell, frame.ell, 0.0)),
                        DomainError);
    }
}

TEST_CASE("symplectic action on states") {
    Rng rng(59);
    const int n = 2;
    const GeometricState st = standard_state(n, 1.0);
    const GeometricState same = act(Mat::Identity(2 * n, 2 * n), st);
    CHECK(same.frame.ell.span_distance(st.frame.ell) < 1e-12);
    CHECK(rel_err(same.shapeX, st.shapeX) < 1e-12);

    // Group action property.
    const Mat S1 = random_symplectic(n, rng);
    const Mat S2 = random_symplectic(n, rng);
    const GeometricState oneShot = act(S2 * S1, st);
    const GeometricState twoStep = act(S2, act(S1, st));
    CHECK(oneShot.frame.ell.span_distance(twoStep.frame.ell) < 1e-8);
    CHECK(oneShot.frame.ellPrime.span_distance(twoStep.frame.ellPrime) < 1e-8);
    CHECK(body_equal(oneShot.frame.ell.basis, oneShot.shapeX, twoStep.frame.ell.basis,
                     twoStep.shapeX));

    // Affine action moves the center.
    Vec shift(2 * n);
    shift << 1.0, -2.0, 0.5, 0.0;
    const GeometricState moved = act_affine(S1, shift, st);
    CHECK(max_abs(moved.center - shift) < 1e-12);

    // Images of Lagrangian planes stay Lagrangian (constructor validates).
    for (int rep = 0; rep < 5; ++rep) CHECK_NOTHROW(act(random_symplectic(n, rng), st));
}

TEST_CASE("canonicalization roundtrip") {
    Rng rng(60);
    for (int n : {1, 2, 3}) {
        const Mat S0 = random_symplectic(n, rng);
        const GeometricState st = state_from_symplectic(S0, Vec::Zero(2 * n), 1.0);
        const Mat Sc = canonical_symplectic(st);
        CHECK(is_symplectic(Sc, 1e-7));
        const GeometricState rebuilt = state_from_symplectic(Sc, st.center, st.hbar);
        CHECK(rebuilt.frame.ell.span_distance(st.frame.ell) < 1e-8);
        CHECK(rebuilt.frame.ellPrime.span_distance(st.frame.ellPrime) < 1e-8);
        CHECK(body_equal(rebuilt.frame.ell.basis, rebuilt.shapeX, st.frame.ell.basis,
                         st.shapeX));
    }
}

TEST_CASE("John ellipsoid of pure states is a quantum blob") {
    const GeometricState std2 = standard_state(2, 1.0);
    CHECK(rel_err(john_of_state(std2).Q, Mat::Identity(4, 4)) < 1e-12);

    Rng rng(61);
    for (int n : {1, 2, 3}) {
        const GeometricState st =
            state_from_symplectic(random_symplectic(n, rng), Vec::Zero(2 * n), 1.0);
        CHECK(is_quantum_blob(Ellipsoid(john_of_state(st).Q, st.hbar), 1e-7));
    }
}

TEST_CASE("John ellipsoid of mixed states is admissible") {
    Rng rng(62);
    const int n = 2;
    const GeometricState pure =
        state_from_symplectic(random_symplectic(n, rng), Vec::Zero(2 * n), 1.0);
    const Ellipsoid dual = lagrangian_polar_dual(pure.shapeX, pure.frame, pure.hbar);
    const MixedGeometricState mixed(pure.frame, pure.shapeX, dual.scaled(1.4).Q,
                                    Vec::Zero(2 * n), pure.hbar);
    const Ellipsoid john = john_of_state(mixed);
    CHECK(admissible_by_spectrum(Ellipsoid(john.Q, john.hbar)).admissible);
    CHECK_FALSE(is_quantum_blob(Ellipsoid(john.Q, john.hbar), 1e-6));
}

TEST_CASE("bijection: standard state <-> standard Gaussian") {
    const GeometricState st = standard_state(2, 1.0);
    const GaussianState g = to_gaussian(st);
    CHECK(rel_err(g.A, Mat::Identity(2, 2)) < 1e-10);
    CHECK(max_abs(g.B) < 1e-10);

    const GeometricState back = from_gaussian(g);
    CHECK(back.frame.ell.span_distance(st.frame.ell) < 1e-10);
    CHECK(rel_err(back.shapeX, st.shapeX) < 1e-10);
}

TEST_CASE("bijection: shear states") {
    // A = I, B = P corresponds to the V_{-P} image of the standard state.
    Rng rng(63);
    const int n = 2;
    const Mat P = sym(rng.normal_mat(n, n));
    const GaussianState g(Mat::Identity(n, n), P, Vec::Zero(2 * n), 1.0);
    const GeometricState viaGaussian = from_gaussian(g);
    const GeometricState viaAction = act(generator_VP(-P), standard_state(n, 1.0));
    CHECK(viaGaussian.frame.ell.span_distance(viaAction.frame.ell) < 1e-8);
    CHECK(viaGaussian.frame.ellPrime.span_distance(viaAction.frame.ellPrime) < 1e-8);
    CHECK(body_equal(viaGaussian.frame.ell.basis, viaGaussian.shapeX,
                     viaAction.frame.ell.basis, viaAction.shapeX));
}

TEST_CASE("bijection roundtrip on (A, B)") {
    Rng rng(64);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + (rep % 3);
        const Mat A = random_spd(n, rng);
        const Mat B = sym(rng.normal_mat(n, n));
        Vec z0 = rng.normal_vec(2 * n);
        const GaussianState g(A, B, z0, 1.0);
        const GaussianState back = to_gaussian(from_gaussian(g));
        CHECK(max_abs(back.A - A) < 1e-8 * std::max(1.0, max_abs(A)));
        CHECK(max_abs(back.B - B) < 1e-8 * std::max(1.0, max_abs(B)));
        CHECK(max_abs(back.center - z0) < 1e-12);
    }
}

TEST_CASE("bijection is O(n)-gauge invariant") {
    Rng rng(65);
    const int n = 2;
    const Mat S = random_symplectic(n, rng);
    // Random H in O(n) via QR.
    Eigen::HouseholderQR<Mat> qr(rng.normal_mat(n, n));
    const Mat H = qr.householderQ();
    Mat MH = Mat::Zero(2 * n, 2 * n);
    MH.topLeftCorner(n, n) = H;
    MH.bottomRightCorner(n, n) = H;
    const GaussianState g1 = to_gaussian(state_from_symplectic(S, Vec::Zero(2 * n), 1.0));
    const GaussianState g2 =
        to_gaussian(state_from_symplectic(S * MH, Vec::Zero(2 * n), 1.0));
    CHECK(max_abs(g1.A - g2.A) < 1e-8);
    CHECK(max_abs(g1.B - g2.B) < 1e-8);
}

TEST_CASE("Wigner matrix closed forms") {
    const GaussianState std1(Mat::Identity(2, 2), Mat::Zero(2, 2), Vec::Zero(4), 1.0);
    CHECK(rel_err(wigner_matrix(std1), Mat::Identity(4, 4)) < 1e-14);

    Mat a(1, 1), b(1, 1);
    a << 1.0;
    b << 1.0;
    const Mat G = wigner_matrix(GaussianState(a, b, Vec::Zero(2), 1.0));
    Mat expected(2, 2);
    expected << 2.0, 1.0, 1.0, 1.0;
    CHECK(rel_err(G, expected) < 1e-14);
    CHECK(G.determinant() == doctest::Approx(1.0));
}

TEST_CASE("Wigner matrix is symmetric positive definite symplectic") {
    Rng rng(66);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = 1 + (rep % 3);
        const Mat A = random_spd(n, rng);
        const Mat B = sym(rng.normal_mat(n, n));
        const GaussianState g(A, B, Vec::Zero(2 * n), 1.0);
        const Mat G = wigner_matrix(g);
        CHECK(max_abs(G - G.transpose()) < 1e-12);
        CHECK(is_symplectic(G, 1e-8));
        Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(std::abs(G.determinant() - 1.0) < 1e-9);

        // The two closed forms agree: G = S^T S for the lower-triangular
        // S with A^{1/2} blocks, and G = (S_AB S_AB^T)^{-1}.
        Eigen::SelfAdjointEigenSolver<Mat> ea(A);
        Mat Slow = Mat::Zero(2 * n, 2 * n);
        Slow.topLeftCorner(n, n) = ea.operatorSqrt();
        Slow.bottomLeftCorner(n, n) = ea.operatorInverseSqrt() * B;
        Slow.bottomRightCorner(n, n) = ea.operatorInverseSqrt();
        CHECK(rel_err(sym(Slow.transpose() * Slow), G) < 1e-10);
        const Mat Sab = gaussian_symplectic(A, B);
        CHECK(rel_err(sym((Sab * Sab.transpose()).inverse()), G) < 1e-9);

        // Block recovery inverts exactly.
        auto [A2, B2] = gaussian_from_wigner(G);
        CHECK(max_abs(A2 - A) < 1e-9 * std::max(1.0, max_abs(A)));
        CHECK(max_abs(B2 - B) < 1e-9 * std::max(1.0, max_abs(B)));
    }
}

TEST_CASE("gaussian_from_wigner rejects invalid input") {
    CHECK_THROWS_AS(gaussian_from_wigner(2.0 * Mat::Identity(4, 4)), DomainError);
    Mat notPd = -Mat::Identity(2, 2);
    CHECK_THROWS_AS(gaussian_from_wigner(notPd), DomainError);
}

TEST_CASE("metaplectic action") {
    const int n = 1;
    const GaussianState std1(Mat::Identity(n, n), Mat::Zero(n, n), Vec::Zero(2 * n), 1.0);

    const GaussianState same = metaplectic_act(Mat::Identity(2, 2), std1);
    CHECK(rel_err(same.A, std1.A) < 1e-12);

    // The standard Gaussian is Fourier invariant.
    const GaussianState fourier = metaplectic_act(standard_J(n), std1);
    CHECK(rel_err(fourier.A, Mat::Identity(n, n)) < 1e-12);
    CHECK(max_abs(fourier.B) < 1e-12);

    // V_{-P}: B -> B - P with A unchanged.
    Rng rng(67);
    for (int m : {1, 3}) {
        const Mat A = random_spd(m, rng);
        const Mat B = sym(rng.normal_mat(m, m));
        const Mat P = sym(rng.normal_mat(m, m));
        const GaussianState g(A, B, Vec::Zero(2 * m), 1.0);
        const GaussianState sheared = metaplectic_act(generator_VP(P), g);
        CHECK(max_abs(sheared.A - A) < 1e-9);
        CHECK(max_abs(sheared.B - (B - P)) < 1e-9);
    }

    // Closure: arbitrary symplectic images remain valid Gaussians.
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + (rep % 3);
        const Mat A = random_spd(m, rng);
        const Mat B = sym(rng.normal_mat(m, m));
        const Mat S = random_symplectic(m, rng);
        const GaussianState g(A, B, rng.normal_vec(2 * m), 1.0);
        const GaussianState out = metaplectic_act(S, g);
        CHECK(max_abs(out.center - S * g.center) < 1e-10);
        Eigen::SelfAdjointEigenSolver<Mat> es(out.A, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        // Consistency with the direct G-transformation.
        const Mat Sinv = S.inverse();
        CHECK(rel_err(wigner_matrix(out), sym(Sinv.transpose() * wigner_matrix(g) * Sinv)) <
              1e-8);
    }
}

TEST_CASE("displacement") {
    Rng rng(68);
    const int n = 2;
    const GaussianState g(random_spd(n, rng), sym(rng.normal_mat(n, n)),
                          rng.normal_vec(2 * n), 1.0);
    const Vec zero = Vec::Zero(2 * n);
    CHECK(max_abs(displace(zero, g).center - g.center) < 1e-15);

    const Vec d1 = rng.normal_vec(2 * n);
    const Vec d2 = rng.normal_vec(2 * n);
    const GaussianState moved = displace(d2, displace(d1, g));
    CHECK(max_abs(moved.center - (g.center + d1 + d2)) < 1e-12);
    CHECK(rel_err(wigner_matrix(moved), wigner_matrix(g)) < 1e-14);
}

TEST_CASE("Gaussian marginals against 1d quadrature") {
    const double h = 1.0;
    Mat a(1, 1), b(1, 1);
    a << 2.0;
    b << 1.0;
    const GaussianState g(a, b, Vec::Zero(2), h);
    const Mat G = wigner_matrix(g);

    auto wigner = [&](double x, double p) {
        const double q = G(0, 0) * x * x + 2.0 * G(0, 1) * x * p + G(1, 1) * p * p;
        return std::exp(-q / h) / (3.14159265358979323846 * h);
    };
    auto psiSq = [&](double x) {
        return std::sqrt(a(0, 0)) / std::sqrt(3.14159265358979323846 * h) *
               std::exp(-a(0, 0) * x * x / h);
    };

    // Simpson quadrature over p for each x on a grid.
    const double L = 12.0;
    const int m = 4000;  // even
    for (double x = -2.0; x <= 2.0; x += 0.25) {
        double integral = wigner(x, -L) + wigner(x, L);
        for (int i = 1; i < m; ++i) {
            const double p = -L + 2.0 * L * i / m;
            integral += (i % 2 == 0 ? 2.0 : 4.0) * wigner(x, p);
        }
        integral *= (2.0 * L / m) / 3.0;
        CHECK(std::abs(integral - psiSq(x)) < 1e-6);
    }

    // Marginal covariances are the blocks of (h/2) G^{-1}.
    auto [sxx, spp] = marginals_gaussian(g);
    const Mat Ginv = G.inverse();
    CHECK(sxx(0, 0) == doctest::Approx(h / 2.0 * Ginv(0, 0)));
    CHECK(spp(0, 0) == doctest::Approx(h / 2.0 * Ginv(1, 1)));
    // Position marginal covariance is (h/2) A^{-1}.
    CHECK(sxx(0, 0) == doctest::Approx(h / (2.0 * a(0, 0))));
}
