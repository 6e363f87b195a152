#pragma once

#include "sympolar/ellipsoid.hpp"
#include "sympolar/types.hpp"

#include <utility>

namespace sympolar {

// Lagrangian frames, geometric quantum states, and their bijection with
// generalized Gaussians psi_{A,B} (modulo global phase) through the
// Wigner matrix G.

struct LagrangianPlane {
    Mat basis;  // 2n x n, orthonormal columns, sigma-isotropic span

    explicit LagrangianPlane(const Mat& spanning, double isotropyTol = 1e-8);
    int modes() const { return static_cast<int>(basis.cols()); }

    // Frobenius distance between orthogonal projectors; zero iff the
    // planes coincide as subspaces.
    double span_distance(const LagrangianPlane& other) const;
};

struct LagrangianFrame {
    LagrangianPlane ell;
    LagrangianPlane ellPrime;

    LagrangianFrame(LagrangianPlane l, LagrangianPlane lp, double frameTol = 1e-10);
    int modes() const { return ell.modes(); }
};

LagrangianFrame canonical_frame(int n);

// X_ell x (X_ell)^hbar_{ell'} + z0: an ellipsoid of shape `shapeX` (in the
// coordinates of ell's orthonormal basis) together with its Lagrangian
// polar dual on the transversal plane.
struct GeometricState {
    LagrangianFrame frame;
    Mat shapeX;   // n x n positive definite
    Vec center;   // 2n
    double hbar = defaults::kHbar;

    GeometricState(LagrangianFrame f, Mat shape, Vec z0, double h);
    int modes() const { return frame.modes(); }
    bool is_centered(double tol = 1e-12) const;
};

// Equivalence class of e^{i gamma} psi_{A,B} displaced to z0 = (x0, p0);
// the global phase is quotiented out.
struct GaussianState {
    Mat A;       // n x n positive definite
    Mat B;       // n x n symmetric
    Vec center;  // 2n
    double hbar = defaults::kHbar;

    GaussianState(Mat a, Mat b, Vec z0, double h);
    int modes() const { return static_cast<int>(A.rows()); }
};

// X_ell x P_{ell'} with the dual strictly inside P: the geometric
// counterpart of a mixed state.
struct MixedGeometricState {
    LagrangianFrame frame;
    Mat shapeX;
    Mat shapeP;  // in ellPrime's basis coordinates; must contain the dual of X
    Vec center;
    double hbar = defaults::kHbar;

    MixedGeometricState(LagrangianFrame f, Mat sx, Mat sp, Vec z0, double h,
                        double tol = defaults::kAdmissTol);
    int modes() const { return frame.modes(); }
};

// The Lagrangian polar dual of {shapeX c.c <= hbar} on ell, taken with
// respect to ellPrime, expressed in ellPrime's basis coordinates:
// shape (W shapeX W^T)^{-1} with W = (E^T J E')^{-1}.
Ellipsoid lagrangian_polar_dual(const Mat& shapeX, const LagrangianFrame& frame,
                                double hbar = defaults::kHbar);

// Some S in Sp(n) with S(ell_X) = ell and S(ell_P) = ell', unique up to
// right multiplication by M_L.
Mat frame_transport(const LagrangianFrame& frame);

// Canonical form of a state: S in Sp(n) with
// state = S(B_X(sqrt h) x B_P(sqrt h)) + z0, unique modulo S M_H, H in O(n).
Mat canonical_symplectic(const GeometricState& state);

// Rebuild the geometric state S(B_X x B_P) + z0 from a symplectic matrix.
GeometricState state_from_symplectic(const Mat& S, const Vec& z0, double hbar);

GeometricState act(const Mat& S, const GeometricState& state);
GeometricState act_affine(const Mat& S, const Vec& translation, const GeometricState& state);

// John ellipsoid of the state's product set; a quantum blob for pure
// states, a quantum-admissible ellipsoid for mixed ones.
Ellipsoid john_of_state(const GeometricState& state);
Ellipsoid john_of_state(const MixedGeometricState& state);

// The factors of a mixed state pulled back to the canonical frame by the
// frame transport: X on ell_X keeps shapeX, P on ell_P becomes
// W^T shapeP W with W = (E^T J E')^{-1}.
std::pair<Ellipsoid, Ellipsoid> transported_product(const MixedGeometricState& state);

GaussianState to_gaussian(const GeometricState& state);
GeometricState from_gaussian(const GaussianState& g);

// G = [[A + B A^{-1} B, B A^{-1}], [A^{-1} B, A^{-1}]]: the shape of the
// Wigner function W psi_{A,B}(z) = (pi h)^{-n} exp(-G z.z / h).
Mat wigner_matrix(const GaussianState& g);

// Inverse block recovery A = G_pp^{-1}, B = G_xp G_pp^{-1}; validates
// that G is symmetric, positive definite and symplectic.
std::pair<Mat, Mat> gaussian_from_wigner(const Mat& G, double spTol = 1e-6);

// G -> (S^{-1})^T G S^{-1}, center -> S z0.
GaussianState metaplectic_act(const Mat& S, const GaussianState& g);

GaussianState displace(const Vec& z0, const GaussianState& g);

// Marginal covariances of the Gaussian Wigner distribution:
// integrating over p gives |psi_{A,B}|^2 with covariance (h/2) A^{-1},
// integrating over x the momentum density with covariance
// (h/2)(A + B A^{-1} B). Both are blocks of (h/2) G^{-1}.
std::pair<Mat, Mat> marginals_gaussian(const GaussianState& g);

// Symplectic matrix S_AB = [[A^{-1/2}, 0], [-B A^{-1/2}, A^{1/2}]] with
// G = (S_AB S_AB^T)^{-1}; sends the standard state to psi_{A,B}'s.
Mat gaussian_symplectic(const Mat& A, const Mat& B);

}  // namespace sympolar
