#pragma once

#include "sympolar/types.hpp"

namespace sympolar {

// Dense symplectic linear algebra on (R^{2n}, sigma) with
// sigma(z, z') = Jz . z' and coordinates ordered (x_1..x_n, p_1..p_n).

// The standard symplectic matrix J = [[0, I], [-I, 0]].
Mat standard_J(int n);

// sigma(u, v) = (Ju) . v
double symplectic_form(const Vec& u, const Vec& v);

// True iff ||S^T J S - J||_max <= tol. Throws on odd dimension.
bool is_symplectic(const Mat& S, double tol = defaults::kSpTol);

double symplecticity_residual(const Mat& S);

// Symplectic eigenvalues of a symmetric positive definite M (2n x 2n):
// the moduli of the eigenvalues of JM, computed from the skew-symmetric
// K = M^{1/2} J M^{1/2}. Sorted non-increasing.
Vec symplectic_eigenvalues(const Mat& M, double pdTolRel = defaults::kPdTolRel);

// Williamson normal form M = S^T D S, D = diag(Lambda, Lambda),
// spectrum sorted non-increasing. S is symplectic; it is unique only up
// to symplectic-orthogonal block mixing, so callers should compare
// reconstructions, not S itself.
struct WilliamsonForm {
    Mat S;         // 2n x 2n symplectic
    Vec spectrum;  // n symplectic eigenvalues, non-increasing

    Mat D() const;           // diag(spectrum, spectrum)
    Mat reconstruct() const; // S^T D S
};

WilliamsonForm williamson(const Mat& M, double pdTolRel = defaults::kPdTolRel);

// Completes n independent, pairwise sigma-orthogonal vectors (the columns
// of `e`, spanning a Lagrangian plane) to a symplectic basis: returns
// S = [E | -J E] in Sp(n) whose first n columns span the input plane.
Mat complete_symplectic_basis(const Mat& e, double isotropyTol = 1e-8);

// Sp(n) projections of the metaplectic generators:
// M_L = [[L^{-1}, 0], [0, L^T]] and V_{-P} = [[I, 0], [P, I]].
Mat generator_ML(const Mat& L);
Mat generator_VP(const Mat& P);

// Pre-Iwasawa factorization S = M_L V_{-P} U with L symmetric positive
// definite, P symmetric, and U in U(n) = Sp(n) /\ O(2n).
struct PreIwasawa {
    Mat L;  // n x n symmetric positive definite
    Mat P;  // n x n symmetric
    Mat U;  // 2n x 2n symplectic rotation

    Mat reconstruct() const;  // M_L V_{-P} U
};

PreIwasawa pre_iwasawa(const Mat& S, double spTol = defaults::kSpTol);

// Random symplectic matrix exp(J A) with A symmetric, entries scaled by
// `spread`. Used by the tomography sampler and by tests.
Mat random_symplectic(int n, Rng& rng, double spread = 0.5);

}  // namespace sympolar
