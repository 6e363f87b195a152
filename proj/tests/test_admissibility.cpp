#include "test_support.hpp"

#include "sympolar/admissibility.hpp"
#include "sympolar/symplectic.hpp"

#include <doctest.h>

#include <cmath>

using namespace sympolar;
using sympolar::testing::random_spd;
using sympolar::testing::rel_err;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Admissible shape with a prescribed spectral margin, built from a
// Williamson-type form conjugated by a random symplectic matrix.
Mat shape_with_max_eigenvalue(int n, double lamMax, Rng& rng) {
    Vec lam(n);
    lam(0) = lamMax;
    for (int j = 1; j < n; ++j) lam(j) = lamMax * (0.2 + 0.8 * rng.uniform());
    Mat D = Mat::Zero(2 * n, 2 * n);
    D.topLeftCorner(n, n).diagonal() = lam;
    D.bottomRightCorner(n, n).diagonal() = lam;
    const Mat S = random_symplectic(n, rng);
    return sym(S.transpose() * D * S);
}

}  // namespace

TEST_CASE("quantum blob recognition") {
    CHECK(is_quantum_blob(Ellipsoid(Mat::Identity(4, 4), 0.5)));
    Rng rng(31);
    const Mat S = random_symplectic(2, rng);
    CHECK(is_quantum_blob(Ellipsoid(sym(S.transpose() * S), 1.0), 1e-7));
    CHECK_FALSE(is_quantum_blob(Ellipsoid(2.0 * Mat::Identity(2, 2), 1.0)));
}

TEST_CASE("spectral admissibility") {
    const auto idVerdict = admissible_by_spectrum(Ellipsoid(Mat::Identity(2, 2), 1.0));
    CHECK(idVerdict.admissible);
    CHECK(idVerdict.margin == doctest::Approx(0.0));

    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 4.0;
    M(1, 1) = 1.0;
    CHECK_FALSE(admissible_by_spectrum(Ellipsoid(M, 1.0)).admissible);

    const auto halfVerdict = admissible_by_spectrum(Ellipsoid(0.5 * Mat::Identity(4, 4), 1.0));
    CHECK(halfVerdict.admissible);
    CHECK(halfVerdict.margin == doctest::Approx(0.5));
}

TEST_CASE("inclusion admissibility") {
    Rng rng(32);
    const Mat S = random_symplectic(1, rng);
    CHECK(admissible_by_inclusion(Ellipsoid(sym(S.transpose() * S), 1.0), 1e-7));
    CHECK(admissible_by_inclusion(Ellipsoid(0.25 * Mat::Identity(2, 2), 1.0)));
    CHECK_FALSE(admissible_by_inclusion(Ellipsoid(2.0 * Mat::Identity(2, 2), 1.0)));
}

TEST_CASE("tomographic sampler") {
    // Williamson-diagonal blob: every conjugate coordinate section of the
    // dual has area exactly pi*hbar.
    Mat D = Mat::Zero(4, 4);
    D.diagonal() << 2.0, 0.5, 2.0, 0.5;  // M_L-type blob shape
    const Ellipsoid blob(D, 1.0);
    REQUIRE(is_quantum_blob(blob));
    CHECK(admissible_by_tomography(blob, 32, 7));
    const Ellipsoid dual = symplectic_polar_dual(blob);
    for (int j = 0; j < 2; ++j) {
        Mat plane = Mat::Zero(4, 2);
        plane(j, 0) = 1.0;
        plane(2 + j, 1) = 1.0;
        CHECK(plane_section_area(dual, Subspace(plane)) == doctest::Approx(kPi));
    }

    // lambda_max = 2 Williamson form: the (x1, p1) section of the dual has
    // area 2*pi*hbar, so the sampler must refuse.
    Mat bad = Mat::Zero(4, 4);
    bad.diagonal() << 2.0, 1.0, 2.0, 1.0;
    CHECK_FALSE(admissible_by_tomography(Ellipsoid(bad, 1.0), 8, 7));

    // (1/2) I: every section of the dual has area pi*hbar/2.
    CHECK(admissible_by_tomography(Ellipsoid(0.5 * Mat::Identity(4, 4), 1.0), 32, 7));
}

TEST_CASE("positivity of Sigma + i(hbar/2)J") {
    const double h = 0.8;
    const auto sat = positivity_check(CovarianceMatrix((h / 2.0) * Mat::Identity(2, 2), h));
    CHECK(sat.positive);
    CHECK(sat.minEigenvalue == doctest::Approx(0.0).epsilon(1e-12));

    const auto bad = positivity_check(CovarianceMatrix((h / 4.0) * Mat::Identity(2, 2), h));
    CHECK_FALSE(bad.positive);
    CHECK(bad.minEigenvalue == doctest::Approx(-h / 4.0));

    // Blob-induced covariance saturates positivity.
    Rng rng(33);
    const Mat S = random_symplectic(2, rng);
    const Mat G = sym(S.transpose() * S);
    const auto blob = positivity_check(CovarianceMatrix((h / 2.0) * G.inverse(), h));
    CHECK(blob.positive);
    CHECK(std::abs(blob.minEigenvalue) < 1e-9);
}

TEST_CASE("Robertson-Schroedinger inequalities") {
    const double h = 1.0;
    for (const auto& rs : rs_check(CovarianceMatrix(0.5 * Mat::Identity(4, 4), h))) {
        CHECK(rs.satisfied);
        CHECK(rs.lhs == doctest::Approx(rs.rhs));
    }

    Mat Sigma(2, 2);
    Sigma << h, h / 2.0, h / 2.0, h;
    const auto rs = rs_check(CovarianceMatrix(Sigma, h));
    CHECK(rs.size() == 1);
    CHECK(rs[0].lhs == doctest::Approx(h * h));
    CHECK(rs[0].rhs == doctest::Approx(h * h / 2.0));
    CHECK(rs[0].satisfied);

    for (const auto& r : rs_check(CovarianceMatrix(0.25 * Mat::Identity(2, 2), 1.0)))
        CHECK_FALSE(r.satisfied);
}

TEST_CASE("positivity implies Robertson-Schroedinger") {
    Rng rng(34);
    int positives = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 1 + (rep % 3);
        const Mat Sigma = random_spd(2 * n, rng);
        const CovarianceMatrix cov(Sigma, 1.0);
        if (!positivity_check(cov).positive) continue;
        ++positives;
        for (const auto& rs : rs_check(cov)) CHECK(rs.satisfied);
    }
    CHECK(positives > 5);  // the sample must actually exercise the claim
}

TEST_CASE("covariance, information and Legendre-dual ellipsoids") {
    const double h = 0.6;
    const CovarianceMatrix sat((h / 2.0) * Mat::Identity(2, 2), h);
    CHECK(rel_err(covariance_ellipsoid(sat).Q, Mat::Identity(2, 2)) < 1e-12);

    Rng rng(35);
    for (int n : {1, 2}) {
        const Mat Sigma = random_spd(2 * n, rng);
        const CovarianceMatrix cov(Sigma, h);
        const Ellipsoid omegaCov = covariance_ellipsoid(cov);
        const Ellipsoid omegaInfo = info_ellipsoid(cov);
        // The Legendre transform swaps the pair, at every hbar.
        CHECK(rel_err(legendre_dual(omegaCov).Q, omegaInfo.Q) < 1e-10);
        CHECK(rel_err(legendre_dual(omegaInfo).Q, omegaCov.Q) < 1e-10);
        CHECK(rel_err(legendre_dual(legendre_dual(omegaCov)).Q, omegaCov.Q) < 1e-10);
    }
}

TEST_CASE("Narcowich diagnostics") {
    const double h = 1.0;
    const auto sat = narcowich_report(CovarianceMatrix((h / 2.0) * Mat::Identity(2, 2), h), 8, 3);
    CHECK(sat.capacity_cov == doctest::Approx(kPi * h));
    CHECK(sat.orbit_bound_ok);
    CHECK(sat.blob_boundary);
    CHECK(sat.capacity_star == doctest::Approx(4.0 * kPi / h));
    CHECK(sat.star_le_threshold);
    CHECK(sat.star_ge_threshold);

    const auto wide = narcowich_report(CovarianceMatrix(h * Mat::Identity(2, 2), h), 8, 3);
    CHECK(wide.capacity_cov == doctest::Approx(2.0 * kPi * h));
    CHECK(wide.orbit_bound_ok);
    CHECK_FALSE(wide.blob_boundary);

    const auto narrow = narcowich_report(CovarianceMatrix((h / 4.0) * Mat::Identity(2, 2), h), 8, 3);
    CHECK(narrow.capacity_cov == doctest::Approx(kPi * h / 2.0));
    CHECK_FALSE(narrow.orbit_bound_ok);

    // Null planes carry zero action (n >= 2 has such planes).
    Rng rng(36);
    const auto multi = narcowich_report(CovarianceMatrix(random_spd(4, rng), h), 16, 3);
    CHECK(multi.max_null_action == doctest::Approx(0.0));
    CHECK(multi.planes_sampled == 16 + 2);
}

TEST_CASE("purity") {
    const double h = 1.0;
    CHECK(purity(CovarianceMatrix((h / 2.0) * Mat::Identity(2, 2), h)).value ==
          doctest::Approx(1.0));
    CHECK(purity(CovarianceMatrix(h * Mat::Identity(2, 2), h)).value == doctest::Approx(0.5));
    CHECK(purity(CovarianceMatrix(h * Mat::Identity(4, 4), h)).value == doctest::Approx(0.25));
    CHECK(purity(CovarianceMatrix((h / 4.0) * Mat::Identity(2, 2), h)).unphysical);

    // Blob-induced covariances are exactly pure.
    Rng rng(37);
    const Mat S = random_symplectic(3, rng);
    const Mat G = sym(S.transpose() * S);
    const auto p = purity(CovarianceMatrix((h / 2.0) * G.inverse(), h));
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(p.unphysical);
}

TEST_CASE("Hardy criterion") {
    const auto sat = hardy_check(Mat::Identity(2, 2), Mat::Identity(2, 2));
    CHECK(sat.satisfied);
    CHECK(sat.saturated);

    Mat A = Mat::Zero(2, 2);
    A(0, 0) = 0.5;
    A(1, 1) = 1.0 / 3.0;
    const auto pass = hardy_check(A, Mat::Identity(2, 2));
    CHECK(pass.satisfied);
    CHECK_FALSE(pass.saturated);
    CHECK(pass.eigenvalues(0) == doctest::Approx(1.0 / 3.0));
    CHECK(pass.eigenvalues(1) == doctest::Approx(0.5));

    CHECK_FALSE(hardy_check(2.0 * Mat::Identity(2, 2), Mat::Identity(2, 2)).satisfied);
}

TEST_CASE("sub-Gaussian Wigner criterion") {
    CHECK(subgaussian_check(Mat::Identity(4, 4)));
    CHECK_FALSE(subgaussian_check(1.5 * Mat::Identity(4, 4)));
    Rng rng(38);
    const Mat S = random_symplectic(2, rng);
    CHECK(subgaussian_check(sym(S.transpose() * S) / 2.0));
}

TEST_CASE("criterion agreement on random shapes") {
    Rng rng(39);
    int checked = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 1 + (rep % 4);
        const double lamMax = 0.3 + 1.4 * rng.uniform();
        const Mat M = shape_with_max_eigenvalue(n, lamMax, rng);
        const Ellipsoid e(M, 1.0);
        const auto sv = admissible_by_spectrum(e);
        if (std::abs(sv.margin) <= 1e-6) continue;
        ++checked;
        CHECK(admissible_by_inclusion(e) == sv.admissible);
        const CovarianceMatrix cov(0.5 * e.Q.inverse(), 1.0);
        CHECK(positivity_check(cov).positive == sv.admissible);
        if (!sv.admissible) CHECK_FALSE(admissible_by_tomography(e, 16, rep));
    }
    CHECK(checked >= 50);
}

TEST_CASE("verdicts are symplectically invariant") {
    Rng rng(40);
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 1 + (rep % 3);
        const Mat M = shape_with_max_eigenvalue(n, 0.5 + rng.uniform(), rng);
        const Mat S = random_symplectic(n, rng);
        const Ellipsoid e(M, 1.0);
        const Ellipsoid conj(sym(S.transpose() * M * S), 1.0);
        CHECK(admissible_by_spectrum(e).admissible == admissible_by_spectrum(conj).admissible);
        CHECK(admissible_by_inclusion(e) == admissible_by_inclusion(conj));
        const CovarianceMatrix cov(0.5 * M.inverse(), 1.0);
        const Mat SigmaConj = sym(S * cov.Sigma * S.transpose());
        CHECK(positivity_check(cov).positive ==
              positivity_check(CovarianceMatrix(SigmaConj, 1.0)).positive);
    }
}

TEST_CASE("full covariance report") {
    Rng rng(41);
    const Mat S = random_symplectic(2, rng);
    const Mat G = sym(S.transpose() * S);
    const AdmissibilityReport rep =
        analyze_covariance(CovarianceMatrix(0.5 * G.inverse(), 1.0), 16, 5);
    CHECK(rep.by_spectrum);
    CHECK(rep.by_inclusion);
    CHECK(rep.by_tomography);
    CHECK(rep.by_positivity);
    CHECK(rep.by_rs);
    CHECK(rep.purity.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_abs(rep.spectrum - Vec::Ones(2)) < 1e-9);
}
