#pragma once

#include "sympolar/types.hpp"

namespace sympolar {

// The region {z : Q(z - c).(z - c) <= hbar} with Q symmetric positive
// definite. Duality operations require c = 0 (Santalo-point duality for
// non-centered bodies is out of scope).
struct Ellipsoid {
    Vec center;
    Mat Q;
    double hbar = defaults::kHbar;

    Ellipsoid() = default;
    Ellipsoid(Mat shape, double h);               // centered
    Ellipsoid(Vec c, Mat shape, double h);

    int dim() const { return static_cast<int>(Q.rows()); }
    bool is_centered(double tol = 1e-12) const;
    bool contains_point(const Vec& z, double tol = 0.0) const;

    // The dilated set lambda * E (shape scales as Q / lambda^2).
    Ellipsoid scaled(double lambda) const;
    // Image under an invertible linear map: A(E) has shape A^{-T} Q A^{-1}.
    Ellipsoid mapped(const Mat& A) const;
};

// A k-dimensional subspace of R^d stored as a d x k matrix with
// orthonormal columns (input bases are orthonormalized by QR).
struct Subspace {
    Mat basis;

    explicit Subspace(const Mat& spanning);
    int ambient_dim() const { return static_cast<int>(basis.rows()); }
    int dim() const { return static_cast<int>(basis.cols()); }
};

// {Qx.x <= h}^h = {Q^{-1}p.p <= h}.
Ellipsoid polar_dual(const Ellipsoid& e);

// Symplectic polar dual: shape -J Q^{-1} J, same hbar. Equals J applied
// to the ordinary dual.
Ellipsoid symplectic_polar_dual(const Ellipsoid& e);

// Orthogonal shadow of a centered ellipsoid on F, in F's basis
// coordinates: shape (B^T Q^{-1} B)^{-1}.
Ellipsoid project(const Ellipsoid& e, const Subspace& f);

// Restriction of a centered ellipsoid to F: shape B^T Q B.
Ellipsoid intersect_subspace(const Ellipsoid& e, const Subspace& f);

// Euclidean area of the section of a centered ellipsoid by a plane:
// pi*hbar / sqrt(det(B^T Q B)).
double plane_section_area(const Ellipsoid& e, const Subspace& f);

// Signed action of the positively oriented section ellipse,
// sigma(u, v) * pi*hbar / sqrt(det(B^T Q B)); zero on null planes.
double plane_section_symplectic_area(const Ellipsoid& e, const Subspace& f);

double volume(const Ellipsoid& e);

// Vol(E) * Vol(E^h); constant (Vol B^d(sqrt(hbar)))^2 on ellipsoids.
double mahler_volume(const Ellipsoid& e);

// True iff `inner` is contained in `outer` (same center): the whitened
// difference Q_in - Q_out * (h_in / h_out) has min eigenvalue >= -tol
// after conjugation by Q_in^{-1/2}.
bool contains(const Ellipsoid& outer, const Ellipsoid& inner,
              double tol = defaults::kAdmissTol);

// John (max volume inscribed) and Loewner (min volume enclosing)
// ellipsoids of the product E1 x E2 of an ellipsoid in R^n_x with one in
// R^n_p, as 2n-dimensional ellipsoids. Both follow from the ball-product
// case under the covariance of John/Loewner ellipsoids: for B(R) x B(R)
// the John ellipsoid is B^{2n}(R) and the Loewner ellipsoid is
// B^{2n}(sqrt(2) R) (the enclosing-ball radius of the product).
Ellipsoid john_of_product(const Ellipsoid& e1, const Ellipsoid& e2);
Ellipsoid loewner_of_product(const Ellipsoid& e1, const Ellipsoid& e2);

}  // namespace sympolar
