#pragma once

#include "sympolar/ellipsoid.hpp"
#include "sympolar/states.hpp"
#include "sympolar/types.hpp"

#include <optional>
#include <string>

namespace sympolar {

// Closed-form symplectic capacities. All normalized capacities agree on
// ellipsoids: c({Mz.z <= h}) = pi h / lambda_max^sigma(M), which is also
// the Hofer-Zehnder value (action of the shortest closed orbit on the
// boundary) and the linear minimal capacity.

enum class CapacityKind { Ellipsoid, Product, Dual };

struct CapacityResult {
    double value = 0.0;          // units of action
    CapacityKind kind = CapacityKind::Ellipsoid;
    std::optional<double> witness;  // e.g. the lambda attaining the product supremum
    std::string note;
};

CapacityResult capacity_ellipsoid(const Ellipsoid& e);

// Capacity of the symplectic polar dual, pi*hbar * lambda_min^sigma(M).
CapacityResult capacity_dual(const Ellipsoid& e);

// c_max(X x P) = 4 hbar sup{lambda > 0 : lambda X^h in P} for an
// ellipsoid X in R^n_x and P in R^n_p. The supremum is
// sqrt(h_P / h_X) / sqrt(lambda_max(Q_X Q_P)), stored as the witness.
CapacityResult cmax_product(const Ellipsoid& x, const Ellipsoid& p);

struct StateCapacities {
    CapacityResult cmax;      // = c_HZ
    CapacityResult cmin_lin;
    CapacityResult john_capacity;  // pi*hbar for pure states
};

// Pure elliptic geometric states: c_max = c_HZ = c_min^lin = 4 hbar,
// computed by transporting the product to B x B and invoking symplectic
// invariance; cross-checked against cmax_product on the transported pair.
StateCapacities state_capacities(const GeometricState& state);

// Mixed states: c_max = 4 hbar sup{lambda : lambda X^h in P} >= 4 hbar.
CapacityResult state_capacity(const MixedGeometricState& state);

}  // namespace sympolar
