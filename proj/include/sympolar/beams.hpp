#pragma once

#include "sympolar/states.hpp"
#include "sympolar/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace sympolar {

// Hamiltonian flows, the variational equation, the symmetrized phase and
// first-order Gaussian-beam propagation (nearby-orbit approximation).

struct HamiltonianModel {
    int dim = 0;  // 2n
    std::function<double(const Vec&, double)> value;
    std::function<Vec(const Vec&, double)> gradient;
    std::function<Mat(const Vec&, double)> hessian;

    // H(z, t) = (1/2) M z . z with constant symmetric M.
    static HamiltonianModel quadratic(const Mat& M);
    // Time-dependent quadratic Hamiltonian (1/2) M(t) z . z.
    static HamiltonianModel quadratic(int n, std::function<Mat(double)> M_of_t);
    // H = |p|^2 / 2 + V(x, t). The boundedness conditions on the
    // derivatives are the caller's responsibility; an optional radius
    // applies a C^2 phase-space cutoff chi(|z|) with chi = 1 inside
    // `cutoff`, 0 outside 2*cutoff.
    static HamiltonianModel kinetic_potential(
        int n, std::function<double(const Vec&, double)> V,
        std::function<Vec(const Vec&, double)> dV,
        std::function<Mat(const Vec&, double)> d2V,
        std::optional<double> cutoff = std::nullopt);

    // Central-difference consistency of gradient and hessian at (z, t);
    // returns the max relative error of the two checks.
    double derivative_consistency(const Vec& z, double t, double step = 1e-5) const;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> z;
};

struct VariationalTrajectory {
    std::vector<double> t;
    std::vector<Vec> z;
    std::vector<Mat> S;     // solutions of dS/dt = J D^2H(z_t, t) S, S_0 = I
    double max_drift = 0.0; // max ||S^T J S - J||_max over samples
};

// Fixed-step RK4 integration of Hamilton's equations z' = J grad H(z, t).
// Samples every `stride` steps (first and last always included).
Trajectory flow(const HamiltonianModel& H, const Vec& z0, double tEnd, double dt,
                int stride = 1);

// Co-integrates the trajectory with the variational equation.
VariationalTrajectory variational_flow(const HamiltonianModel& H, const Vec& z0,
                                       double tEnd, double dt, int stride = 1);

// Symmetrized phase gamma = integral of (1/2) sigma(z, z') - H(z, t),
// accumulated by Simpson quadrature on the RK4 stages.
double phase(const HamiltonianModel& H, const Vec& z0, double tEnd, double dt);

using BeamPayload = std::variant<GaussianState, GeometricState>;

struct BeamState {
    double t = 0.0;
    Vec z;          // z_t
    Mat S;          // S_t^H(z_0)
    double gamma = 0.0;
    double drift = 0.0;
    BeamPayload payload;

    explicit BeamState(BeamPayload p) : payload(std::move(p)) {}
};

// First-order Gaussian beam U^H(z0, t) = T(z_t) o S_t^H(z0) applied to a
// state centered at z0 = payload center: the centered payload evolves by
// the metaplectic/symplectic action of S_t and is re-centered at z_t; the
// phase gamma is carried as diagnostic data outside the equivalence class.
BeamState beam_propagate(const HamiltonianModel& H, const BeamPayload& payload,
                         double tEnd, double dt);

// Same propagation, recording a snapshot every `stride` steps.
std::vector<BeamState> beam_snapshots(const HamiltonianModel& H, const BeamPayload& payload,
                                      double tEnd, double dt, int stride);

struct BlobTransportReport {
    int samples = 0;
    double hbar = defaults::kHbar;
    // Linearized flow: samples of z0 + S(B^{2n}(sqrt h)) must satisfy
    // z(t) = z_t + S_t S (z(0) - z0) exactly; max deviation of the
    // blob-radius coordinate over all samples and recorded times.
    double max_linear_residual = 0.0;
    // Nonlinear flow diagnostics (reported, not asserted).
    double containment_fraction = 1.0; // samples staying inside the transported blob
    double max_excess_radius = 0.0;    // max positive part of r_t - sqrt(hbar)
    // Gronwall envelope |z(t) - z_t| <= e^{k t} |z(0) - z0| with
    // k = max observed ||D^2 H||_2.
    double gronwall_k = 0.0;
    double max_gronwall_ratio = 0.0;
    bool gronwall_ok = true;
};

BlobTransportReport blob_transport_check(const HamiltonianModel& H, const Vec& z0,
                                         const Mat& S, int sampleCount, double tEnd,
                                         double dt, std::uint64_t seed,
                                         double hbar = defaults::kHbar);

}  // namespace sympolar
