#pragma once

#include "sympolar/ellipsoid.hpp"
#include "sympolar/types.hpp"

#include <cstdint>
#include <vector>

namespace sympolar {

// Quantum admissibility of phase-space ellipsoids and covariance
// matrices. An ellipsoid {Mz.z <= hbar} is admissible iff it contains a
// quantum blob, iff its symplectic polar dual is contained in it, iff
// lambda_max^sigma(M) <= 1, iff Sigma + (i hbar/2) J >= 0 for the induced
// covariance matrix Sigma = (hbar/2) M^{-1}.

struct CovarianceMatrix {
    Mat Sigma;   // 2n x 2n symmetric positive definite
    double hbar = defaults::kHbar;

    CovarianceMatrix() = default;
    CovarianceMatrix(Mat sigma, double h);
    int modes() const { return static_cast<int>(Sigma.rows()) / 2; }

    Mat xx() const;
    Mat xp() const;
    Mat pp() const;
};

// True iff the shape matrix at level hbar is symplectic (fixed points of
// symplectic polar duality are exactly the quantum blobs).
bool is_quantum_blob(const Ellipsoid& e, double tol = defaults::kSpTol);

struct SpectrumVerdict {
    bool admissible;
    double margin;  // 1 - lambda_max^sigma
};

SpectrumVerdict admissible_by_spectrum(const Ellipsoid& e,
                                       double tol = defaults::kAdmissTol);

bool admissible_by_inclusion(const Ellipsoid& e, double tol = defaults::kAdmissTol);

// One-sided tomographic sampler over Theorem-style symplectic planes:
// checks Area(E^{h,sigma} /\ F) <= pi*hbar on `planeBudget` random
// symplectic planes plus the n coordinate planes. A false verdict is
// conclusive; a true verdict is probabilistic.
bool admissible_by_tomography(const Ellipsoid& e,
                              int planeBudget = defaults::kPlaneBudget,
                              std::uint64_t seed = 0,
                              double tol = defaults::kAdmissTol);

struct PositivityResult {
    bool positive;
    double minEigenvalue;  // of Sigma + (i hbar/2) J
};

// Positivity of the self-adjoint matrix Sigma + (i hbar/2) J, evaluated
// through the real 4n x 4n embedding [[Sigma, -(h/2)J], [(h/2)J, Sigma]].
PositivityResult positivity_check(const CovarianceMatrix& cov,
                                  double tol = defaults::kAdmissTol);

struct RSInequality {
    double lhs;  // sigma_xjxj * sigma_pjpj
    double rhs;  // sigma_xjpj^2 + hbar^2/4
    bool satisfied;
};

// Robertson-Schroedinger inequalities, one per mode.
std::vector<RSInequality> rs_check(const CovarianceMatrix& cov,
                                   double tol = defaults::kAdmissTol);

// Omega_cov = {(1/2) Sigma^{-1} z.z <= 1}, stored as shape (h/2) Sigma^{-1}
// at level hbar.
Ellipsoid covariance_ellipsoid(const CovarianceMatrix& cov);
// Omega_info = {(1/2) Sigma z.z <= 1} = J(Omega_cov^hbar).
Ellipsoid info_ellipsoid(const CovarianceMatrix& cov);
// Legendre dual: Q -> (hbar/2)^2 Q^{-1} at the same level (an involution;
// maps Omega_cov to Omega_info and back).
Ellipsoid legendre_dual(const Ellipsoid& e);

struct NarcowichReport {
    double capacity_cov;        // c(Omega_cov) = pi*hbar / lambda_max^sigma(M)
    bool orbit_bound_ok;        // c(Omega_cov) >= pi*hbar
    bool blob_boundary;         // equality for the shortest orbit
    double capacity_star;       // c(Omega*) = (4 pi/hbar) lambda_min^sigma(M)
    double star_threshold;      // 4 pi / hbar
    bool star_le_threshold;     // the inequality as stated by the theorem
    bool star_ge_threshold;     // the direction its proof derives
    double max_section_action;  // max |action| of Omega* over sampled symplectic planes
    double max_null_action;     // max |action| over sampled null planes (n >= 2)
    int planes_sampled;
};

// Dynamical diagnostics of the covariance/information ellipsoid pair.
// The c(Omega*) vs 4 pi/hbar comparison is reported in both directions:
// the theorem statement and its proof disagree on the inequality sign
// (and the two sides do not even carry the same units), so no single
// verdict is produced.
NarcowichReport narcowich_report(const CovarianceMatrix& cov,
                                 int planeBudget = defaults::kPlaneBudget,
                                 std::uint64_t seed = 0,
                                 double tol = defaults::kAdmissTol);

struct PurityResult {
    double value;       // (hbar/2)^n det(Sigma)^{-1/2}
    bool unphysical;    // value > 1 + tol
};

PurityResult purity(const CovarianceMatrix& cov, double tol = defaults::kAdmissTol);

struct HardyResult {
    bool satisfied;      // all eigenvalues of AB <= 1
    bool saturated;      // all eigenvalues equal 1: Gaussian case
    Vec eigenvalues;     // of AB (= A^{1/2} B A^{1/2}), ascending
};

// Hardy uncertainty test for the bound pair |psi| <= C e^{-Ax.x/2h},
// |Fpsi| <= C e^{-Bp.p/2h}.
HardyResult hardy_check(const Mat& A, const Mat& B, double tol = defaults::kAdmissTol);

// Sub-Gaussian Wigner bound W psi <= C e^{-Mz.z/hbar} is attainable iff
// Omega_M is admissible; delegates to the spectral criterion.
bool subgaussian_check(const Mat& M, double hbar = defaults::kHbar,
                       double tol = defaults::kAdmissTol);

struct AdmissibilityReport {
    Vec spectrum;  // symplectic eigenvalues of the hbar-normalized shape
    bool by_spectrum;
    bool by_inclusion;
    bool by_tomography;
    bool by_positivity;
    bool by_rs;
    double spectral_margin;
    double positivity_min_eigenvalue;
    PurityResult purity;
    NarcowichReport narcowich;
};

// Runs every criterion on a covariance matrix.
AdmissibilityReport analyze_covariance(const CovarianceMatrix& cov,
                                       int planeBudget = defaults::kPlaneBudget,
                                       std::uint64_t seed = 0,
                                       double tol = defaults::kAdmissTol);

}  // namespace sympolar
