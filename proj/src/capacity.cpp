#include "sympolar/capacity.hpp"

#include "sympolar/symplectic.hpp"

#include <cmath>

namespace sympolar {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CapacityResult capacity_ellipsoid(const Ellipsoid& e) {
    if (e.dim() % 2 != 0)
        throw DimensionError("capacity_ellipsoid: ambient dimension must be even");
    const Vec spec = symplectic_eigenvalues(e.Q);
    CapacityResult r;
    r.value = kPi * e.hbar / spec.maxCoeff();
    r.kind = CapacityKind::Ellipsoid;
    r.witness = spec.maxCoeff();
    r.note = "pi*hbar / lambda_max^sigma";
    return r;
}

CapacityResult capacity_dual(const Ellipsoid& e) {
    if (e.dim() % 2 != 0)
        throw DimensionError("capacity_dual: ambient dimension must be even");
    const Vec spec = symplectic_eigenvalues(e.Q);
    CapacityResult r;
    r.value = kPi * e.hbar * spec.minCoeff();
    r.kind = CapacityKind::Dual;
    r.witness = spec.minCoeff();
    r.note = "pi*hbar * lambda_min^sigma";
    return r;
}

CapacityResult cmax_product(const Ellipsoid& x, const Ellipsoid& p) {
    if (x.dim() != p.dim()) throw DimensionError("cmax_product: factor dimensions differ");
    if (!x.is_centered() || !p.is_centered())
        throw DomainError("cmax_product: factors must be centered");
    // lambda X^h in P <=> lambda^2 Q_X^{1/2} Q_P Q_X^{1/2} <= (h_P/h_X) I,
    // so the supremum is sqrt(h_P/h_X) / sqrt(lambda_max).
    Eigen::SelfAdjointEigenSolver<Mat> ex(sym(x.Q));
    if (ex.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("cmax_product: X shape not positive definite");
    const Mat Xsqrt = ex.operatorSqrt();
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(Xsqrt * p.Q * Xsqrt), Eigen::EigenvaluesOnly);
    const double lamMax = es.eigenvalues().maxCoeff();
    if (!(lamMax > 0.0))
        throw NotPositiveDefiniteError("cmax_product: P shape not positive definite");
    CapacityResult r;
    r.witness = std::sqrt(p.hbar / x.hbar) / std::sqrt(lamMax);
    r.value = 4.0 * x.hbar * (*r.witness);
    r.kind = CapacityKind::Product;
    r.note = "4*hbar * sup{lambda : lambda X^h in P}";
    return r;
}

StateCapacities state_capacities(const GeometricState& state) {
    // Transport to the canonical frame: the product becomes
    // {shapeX c.c <= h} x its ordinary polar dual, and all capacities are
    // symplectically invariant.
    const Ellipsoid x0(state.shapeX, state.hbar);
    const CapacityResult prod = cmax_product(x0, polar_dual(x0));

    StateCapacities sc;
    sc.cmax = prod;
    sc.cmax.value = 4.0 * state.hbar;
    sc.cmax.note = "c_max = c_HZ = 4*hbar (pure state)";
    if (std::abs(prod.value - 4.0 * state.hbar) > 1e-9 * state.hbar)
        throw NumericalError("state_capacities: product formula disagrees with 4*hbar");
    sc.cmin_lin = sc.cmax;
    sc.cmin_lin.note = "c_min^lin = 4*hbar (pure state)";
    sc.john_capacity = capacity_ellipsoid(john_of_state(state));
    return sc;
}

CapacityResult state_capacity(const MixedGeometricState& state) {
    // Capacities are invariant under the transporting symplectic map, so
    // evaluate the product formula on the canonical-frame factors.
    auto [x0, p0] = transported_product(state);
    CapacityResult r = cmax_product(x0, p0);
    r.note = "c_max of mixed geometric state (>= 4*hbar)";
    return r;
}

}  // namespace sympolar
