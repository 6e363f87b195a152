#pragma once

#include "sympolar/admissibility.hpp"
#include "sympolar/beams.hpp"
#include "sympolar/capacity.hpp"
#include "sympolar/ellipsoid.hpp"
#include "sympolar/states.hpp"
#include "sympolar/symplectic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace sympolar::io {

using json = nlohmann::json;

struct ParseError : Error {
    using Error::Error;
};

// Matrices travel as {"n": modes, "rows": [[...]]} (row-major doubles).
// "n" is the mode count: phase-space matrices are 2n x 2n, configuration-
// space matrices n x n; readers validate against the expected kind.
enum class MatrixKind { PhaseSpace, Configuration, Any };

json matrix_to_json(const Mat& m, MatrixKind kind = MatrixKind::Any);
Mat matrix_from_json(const json& j, MatrixKind kind = MatrixKind::Any);

json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j);

// Ellipsoid: {"center": [...], "Q": rows, "hbar": h}.
json ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const json& j, double defaultHbar = defaults::kHbar);

// Subspace: {"basis": rows} with columns as basis vectors.
json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const json& j);

// GeometricState: {"frame": {"ell": rows, "ellPrime": rows},
//                  "shapeX": rows, "center": [...], "hbar": h}.
json geometric_state_to_json(const GeometricState& s);
GeometricState geometric_state_from_json(const json& j, double defaultHbar = defaults::kHbar);

// GaussianState: {"A": rows, "B": rows, "center": [...], "hbar": h}.
json gaussian_state_to_json(const GaussianState& s);
GaussianState gaussian_state_from_json(const json& j, double defaultHbar = defaults::kHbar);

json williamson_to_json(const WilliamsonForm& w, const Mat& input);
json admissibility_report_to_json(const AdmissibilityReport& r);
json capacity_to_json(const CapacityResult& r);
json beam_state_to_json(const BeamState& b);

// Beam experiment configuration:
// {"hamiltonian": {"kind": "quadratic", "M": rows} |
//                 {"kind": "quadratic", "pieces": [{"until": t, "M": rows}, ...]} |
//                 {"kind": "kinetic_potential",
//                  "potential": {"kind": "quadratic", "K": rows} |
//                               {"kind": "quartic", "k2": a, "k4": b},
//                  "cutoff_radius": r?},
//  "z0": [...], "tEnd": t, "dt": h, "state": gaussian-or-geometric}
struct BeamConfig {
    HamiltonianModel hamiltonian;
    Vec z0;
    double tEnd = 1.0;
    double dt = 1e-3;
    BeamPayload state;
};

BeamConfig beam_config_from_json(const json& j, double defaultHbar = defaults::kHbar);

json parse(const std::string& text);

}  // namespace sympolar::io
