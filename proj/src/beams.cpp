#include "sympolar/beams.hpp"

#include "sympolar/symplectic.hpp"

#include <cmath>

namespace sympolar {

namespace {

void check_model(const HamiltonianModel& H, const std::string& what) {
    if (H.dim < 2 || H.dim % 2 != 0)
        throw DimensionError(what + ": Hamiltonian dimension must be even and positive");
    if (!H.value || !H.gradient || !H.hessian)
        throw DomainError(what + ": Hamiltonian model is incomplete");
}

void check_finite(const Vec& z, double t, const std::string& what) {
    if (!z.allFinite())
        throw NumericalError(what + ": trajectory blew up near t = " + std::to_string(t));
}

struct StepPlan {
    int steps;
    double dt;
};

StepPlan plan_steps(double tEnd, double dt) {
    if (!(dt > 0.0)) throw DomainError("flow: dt must be positive");
    if (tEnd < 0.0) throw DomainError("flow: tEnd must be non-negative");
    const int steps = static_cast<int>(std::ceil(tEnd / dt - 1e-12));
    return {std::max(steps, 0), dt};
}

// One RK4 step of the joint system (z, S, gamma). S and gamma are
// optional; gamma accumulates Simpson-weighted stage values of
// (1/2) sigma(z, Jdh) - H, which is Simpson quadrature along the RK4
// stage points.
struct JointState {
    Vec z;
    Mat S;       // empty if not tracked
    double gamma = 0.0;
};

double phase_integrand(const HamiltonianModel& H, const Vec& z, const Vec& zdot, double t) {
    return 0.5 * symplectic_form(z, zdot) - H.value(z, t);
}

void rk4_step(const HamiltonianModel& H, const Mat& J, JointState& s, double t, double h,
              bool trackS, bool trackGamma) {
    const auto zdot = [&](const Vec& z, double tt) -> Vec { return J * H.gradient(z, tt); };

    const Vec k1 = zdot(s.z, t);
    const Vec z2 = s.z + 0.5 * h * k1;
    const Vec k2 = zdot(z2, t + 0.5 * h);
    const Vec z3 = s.z + 0.5 * h * k2;
    const Vec k3 = zdot(z3, t + 0.5 * h);
    const Vec z4 = s.z + h * k3;
    const Vec k4 = zdot(z4, t + h);

    if (trackS) {
        const Mat A1 = J * H.hessian(s.z, t);
        const Mat A2 = J * H.hessian(z2, t + 0.5 * h);
        const Mat A3 = J * H.hessian(z3, t + 0.5 * h);
        const Mat A4 = J * H.hessian(z4, t + h);
        const Mat K1 = A1 * s.S;
        const Mat K2 = A2 * (s.S + 0.5 * h * K1);
        const Mat K3 = A3 * (s.S + 0.5 * h * K2);
        const Mat K4 = A4 * (s.S + h * K3);
        s.S += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    }
    if (trackGamma) {
        const double g1 = phase_integrand(H, s.z, k1, t);
        const double g2 = phase_integrand(H, z2, k2, t + 0.5 * h);
        const double g3 = phase_integrand(H, z3, k3, t + 0.5 * h);
        const double g4 = phase_integrand(H, z4, k4, t + h);
        s.gamma += (h / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
    }
    s.z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

JointState integrate(const HamiltonianModel& H, const Vec& z0, double tEnd, double dt,
                     bool trackS, bool trackGamma,
                     const std::function<void(double, const JointState&)>& record) {
    const int n = H.dim / 2;
    const Mat J = standard_J(n);
    const StepPlan plan = plan_steps(tEnd, dt);

    JointState s;
    s.z = z0;
    if (trackS) s.S = Mat::Identity(H.dim, H.dim);
    double t = 0.0;
    if (record) record(t, s);
    for (int k = 0; k < plan.steps; ++k) {
        const double h = (k + 1 == plan.steps) ? tEnd - t : plan.dt;
        rk4_step(H, J, s, t, h, trackS, trackGamma);
        t = (k + 1 == plan.steps) ? tEnd : t + h;
        check_finite(s.z, t, "flow");
        if (record) record(t, s);
    }
    return s;
}

}  // namespace

HamiltonianModel HamiltonianModel::quadratic(const Mat& M) {
    require_even_dim(M, "HamiltonianModel::quadratic");
    require_symmetric(M, "HamiltonianModel::quadratic");
    const Mat Ms = sym(M);
    HamiltonianModel H;
    H.dim = static_cast<int>(M.rows());
    H.value = [Ms](const Vec& z, double) { return 0.5 * z.dot(Ms * z); };
    H.gradient = [Ms](const Vec& z, double) -> Vec { return Ms * z; };
    H.hessian = [Ms](const Vec&, double) -> Mat { return Ms; };
    return H;
}

HamiltonianModel HamiltonianModel::quadratic(int n, std::function<Mat(double)> M_of_t) {
    if (n < 1) throw DimensionError("HamiltonianModel::quadratic: n must be >= 1");
    HamiltonianModel H;
    H.dim = 2 * n;
    H.value = [M_of_t](const Vec& z, double t) { return 0.5 * z.dot(sym(M_of_t(t)) * z); };
    H.gradient = [M_of_t](const Vec& z, double t) -> Vec { return sym(M_of_t(t)) * z; };
    H.hessian = [M_of_t](const Vec&, double t) -> Mat { return sym(M_of_t(t)); };
    return H;
}

namespace {

// C^2 radial cutoff: 1 on [0, R], quintic smoothstep down to 0 on [R, 2R].
struct Cutoff {
    double R;
    double chi(double r) const {
        if (r <= R) return 1.0;
        if (r >= 2.0 * R) return 0.0;
        const double s = (r - R) / R;
        return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    }
    double dchi(double r) const {
        if (r <= R || r >= 2.0 * R) return 0.0;
        const double s = (r - R) / R;
        return -30.0 * s * s * (s - 1.0) * (s - 1.0) / R;
    }
    double d2chi(double r) const {
        if (r <= R || r >= 2.0 * R) return 0.0;
        const double s = (r - R) / R;
        return -60.0 * s * (s - 1.0) * (2.0 * s - 1.0) / (R * R);
    }
};

}  // namespace

HamiltonianModel HamiltonianModel::kinetic_potential(
    int n, std::function<double(const Vec&, double)> V,
    std::function<Vec(const Vec&, double)> dV,
    std::function<Mat(const Vec&, double)> d2V, std::optional<double> cutoff) {
    if (n < 1) throw DimensionError("HamiltonianModel::kinetic_potential: n must be >= 1");
    HamiltonianModel H;
    H.dim = 2 * n;
    auto bare_value = [n, V](const Vec& z, double t) {
        return 0.5 * z.tail(n).squaredNorm() + V(z.head(n), t);
    };
    auto bare_gradient = [n, dV](const Vec& z, double t) -> Vec {
        Vec g(2 * n);
        g.head(n) = dV(z.head(n), t);
        g.tail(n) = z.tail(n);
        return g;
    };
    auto bare_hessian = [n, d2V](const Vec& z, double t) -> Mat {
        Mat h = Mat::Zero(2 * n, 2 * n);
        h.topLeftCorner(n, n) = d2V(z.head(n), t);
        h.bottomRightCorner(n, n) = Mat::Identity(n, n);
        return h;
    };
    if (!cutoff) {
        H.value = bare_value;
        H.gradient = bare_gradient;
        H.hessian = bare_hessian;
        return H;
    }
    if (!(*cutoff > 0.0))
        throw DomainError("kinetic_potential: cutoff radius must be positive");
    const Cutoff c{*cutoff};
    H.value = [bare_value, c](const Vec& z, double t) {
        return c.chi(z.norm()) * bare_value(z, t);
    };
    H.gradient = [bare_value, bare_gradient, c](const Vec& z, double t) -> Vec {
        const double r = z.norm();
        Vec g = c.chi(r) * bare_gradient(z, t);
        if (r > 0.0) g += (c.dchi(r) * bare_value(z, t) / r) * z;
        return g;
    };
    H.hessian = [bare_value, bare_gradient, bare_hessian, c](const Vec& z, double t) -> Mat {
        const double r = z.norm();
        Mat h = c.chi(r) * bare_hessian(z, t);
        if (r > 0.0) {
            const Vec grad = bare_gradient(z, t);
            const Vec nz = z / r;
            const double v = bare_value(z, t);
            h += c.dchi(r) * (nz * grad.transpose() + grad * nz.transpose());
            h += (c.d2chi(r) * v) * (nz * nz.transpose());
            h += (c.dchi(r) * v / r) *
                 (Mat::Identity(z.size(), z.size()) - nz * nz.transpose());
        }
        return h;
    };
    return H;
}

double HamiltonianModel::derivative_consistency(const Vec& z, double t, double step) const {
    check_model(*this, "derivative_consistency");
    const int d = dim;
    Vec gradFd(d);
    Mat hessFd(d, d);
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e(i) = step;
        gradFd(i) = (value(z + e, t) - value(z - e, t)) / (2.0 * step);
        hessFd.col(i) = (gradient(z + e, t) - gradient(z - e, t)) / (2.0 * step);
    }
    const Vec g = gradient(z, t);
    const Mat h = hessian(z, t);
    const double gScale = std::max(1.0, g.cwiseAbs().maxCoeff());
    const double hScale = std::max(1.0, max_abs(h));
    return std::max((gradFd - g).cwiseAbs().maxCoeff() / gScale,
                    max_abs(sym(hessFd) - h) / hScale);
}

Trajectory flow(const HamiltonianModel& H, const Vec& z0, double tEnd, double dt, int stride) {
    check_model(H, "flow");
    if (z0.size() != H.dim) throw DimensionError("flow: z0 dimension mismatch");
    if (stride < 1) throw DomainError("flow: stride must be >= 1");
    Trajectory traj;
    int count = 0;
    integrate(H, z0, tEnd, dt, false, false,
              [&](double t, const JointState& s) {
                  if (count % stride == 0 || t == tEnd) {
                      traj.t.push_back(t);
                      traj.z.push_back(s.z);
                  }
                  ++count;
              });
    return traj;
}

VariationalTrajectory variational_flow(const HamiltonianModel& H, const Vec& z0, double tEnd,
                                       double dt, int stride) {
    check_model(H, "variational_flow");
    if (z0.size() != H.dim) throw DimensionError("variational_flow: z0 dimension mismatch");
    if (stride < 1) throw DomainError("variational_flow: stride must be >= 1");
    VariationalTrajectory traj;
    int count = 0;
    integrate(H, z0, tEnd, dt, true, false,
              [&](double t, const JointState& s) {
                  if (count % stride == 0 || t == tEnd) {
                      traj.t.push_back(t);
                      traj.z.push_back(s.z);
                      traj.S.push_back(s.S);
                      traj.max_drift = std::max(traj.max_drift, symplecticity_residual(s.S));
                  }
                  ++count;
              });
    return traj;
}

double phase(const HamiltonianModel& H, const Vec& z0, double tEnd, double dt) {
    check_model(H, "phase");
    if (z0.size() != H.dim) throw DimensionError("phase: z0 dimension mismatch");
    return integrate(H, z0, tEnd, dt, false, true, nullptr).gamma;
}

namespace {

Vec payload_center(const BeamPayload& payload) {
    if (std::holds_alternative<GaussianState>(payload))
        return std::get<GaussianState>(payload).center;
    return std::get<GeometricState>(payload).center;
}

BeamPayload evolve_payload(const BeamPayload& centered, const JointState& s) {
    if (std::holds_alternative<GaussianState>(centered)) {
        GaussianState g = metaplectic_act(s.S, std::get<GaussianState>(centered));
        g.center = s.z;
        return g;
    }
    // centered input: the affine action lands the center at z_t.
    return act_affine(s.S, s.z, std::get<GeometricState>(centered));
}

BeamState make_beam_state(const BeamPayload& centered, double t, const JointState& s) {
    BeamState out(evolve_payload(centered, s));
    out.t = t;
    out.z = s.z;
    out.S = s.S;
    out.gamma = s.gamma;
    out.drift = symplecticity_residual(s.S);
    return out;
}

BeamPayload strip_center(const BeamPayload& payload) {
    if (std::holds_alternative<GaussianState>(payload)) {
        GaussianState g = std::get<GaussianState>(payload);
        g.center.setZero();
        return g;
    }
    GeometricState st = std::get<GeometricState>(payload);
    st.center.setZero();
    return st;
}

}  // namespace

std::vector<BeamState> beam_snapshots(const HamiltonianModel& H, const BeamPayload& payload,
                                      double tEnd, double dt, int stride) {
    check_model(H, "beam_propagate");
    if (stride < 1) throw DomainError("beam_propagate: stride must be >= 1");
    const Vec z0 = payload_center(payload);
    if (z0.size() != H.dim)
        throw DimensionError("beam_propagate: payload dimension does not match Hamiltonian");
    const BeamPayload centered = strip_center(payload);
    std::vector<BeamState> out;
    int count = 0;
    integrate(H, z0, tEnd, dt, true, true,
              [&](double t, const JointState& s) {
                  if (count % stride == 0 || t == tEnd)
                      out.push_back(make_beam_state(centered, t, s));
                  ++count;
              });
    return out;
}

BeamState beam_propagate(const HamiltonianModel& H, const BeamPayload& payload, double tEnd,
                         double dt) {
    check_model(H, "beam_propagate");
    const Vec z0 = payload_center(payload);
    if (z0.size() != H.dim)
        throw DimensionError("beam_propagate: payload dimension does not match Hamiltonian");
    const JointState s = integrate(H, z0, tEnd, dt, true, true, nullptr);
    return make_beam_state(strip_center(payload), tEnd, s);
}

BlobTransportReport blob_transport_check(const HamiltonianModel& H, const Vec& z0,
                                         const Mat& S, int sampleCount, double tEnd,
                                         double dt, std::uint64_t seed, double hbar) {
    check_model(H, "blob_transport_check");
    if (z0.size() != H.dim) throw DimensionError("blob_transport_check: z0 dimension mismatch");
    if (S.rows() != H.dim || !is_symplectic(S, 1e-6))
        throw DomainError("blob_transport_check: S must be symplectic of matching dimension");
    if (sampleCount < 1) throw DomainError("blob_transport_check: need at least one sample");
    if (!(hbar > 0.0)) throw DomainError("blob_transport_check: hbar must be positive");

    const int d = H.dim;
    const int n = d / 2;
    const Mat J = standard_J(n);
    const double radius = std::sqrt(hbar);

    // Samples in blob coordinates: u = z(0) - z0 = S * ball point. Every
    // fourth sample is placed exactly on the boundary sphere.
    Rng rng(seed);
    std::vector<Vec> u0(sampleCount);
    std::vector<double> r0(sampleCount);
    for (int i = 0; i < sampleCount; ++i) {
        Vec b = rng.ball_point(d, radius);
        if (i % 4 == 0 && b.norm() > 0.0) b *= radius / b.norm();
        u0[i] = S * b;
        r0[i] = b.norm();
    }

    BlobTransportReport rep;
    rep.samples = sampleCount;
    rep.hbar = hbar;

    // Joint integration. The reference carries a widened variational block
    // [S_t | u_1 .. u_m]: the deviations u_i solve the same linear ODE as
    // the columns of S_t, so propagating them under the linearized
    // Hamiltonian H_0 means stepping them with the identical RK4 stage
    // matrices. Nonlinear samples follow the full flow separately.
    const StepPlan plan = plan_steps(tEnd, dt);
    JointState ref;
    ref.z = z0;
    ref.S = Mat::Zero(d, d + sampleCount);
    ref.S.leftCols(d) = Mat::Identity(d, d);
    for (int i = 0; i < sampleCount; ++i) ref.S.col(d + i) = u0[i];

    std::vector<Vec> zNl(sampleCount);
    for (int i = 0; i < sampleCount; ++i) zNl[i] = z0 + u0[i];

    const auto hess_norm = [&](const Vec& z, double t) {
        Eigen::SelfAdjointEigenSolver<Mat> es(sym(H.hessian(z, t)), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    };

    std::vector<double> maxRadius(sampleCount, 0.0);
    struct Deviation {
        double t;
        std::vector<double> dist;  // |z_nl(t) - z_ref(t)| per sample
    };
    std::vector<Deviation> history;

    const auto record = [&](double t) {
        const Mat St = ref.S.leftCols(d);
        const Mat T = (St * S).inverse();
        for (int i = 0; i < sampleCount; ++i) {
            // Independently integrated deviation vs transported initial one.
            const double rLinIndep = (T * ref.S.col(d + i)).norm();
            const double rLinMapped = (T * (St * u0[i])).norm();
            rep.max_linear_residual =
                std::max({rep.max_linear_residual, std::abs(rLinIndep - r0[i]),
                          std::abs(rLinMapped - r0[i])});
            const double rNl = (T * (zNl[i] - ref.z)).norm();
            maxRadius[i] = std::max(maxRadius[i], rNl);
        }
        Deviation dev;
        dev.t = t;
        dev.dist.resize(sampleCount);
        rep.gronwall_k = std::max(rep.gronwall_k, hess_norm(ref.z, t));
        for (int i = 0; i < sampleCount; ++i) {
            dev.dist[i] = (zNl[i] - ref.z).norm();
            rep.gronwall_k = std::max(rep.gronwall_k, hess_norm(zNl[i], t));
        }
        history.push_back(std::move(dev));
    };

    double t = 0.0;
    record(t);
    for (int k = 0; k < plan.steps; ++k) {
        const double h = (k + 1 == plan.steps) ? tEnd - t : plan.dt;
        for (int i = 0; i < sampleCount; ++i) {
            JointState s;
            s.z = zNl[i];
            rk4_step(H, J, s, t, h, false, false);
            zNl[i] = s.z;
            check_finite(zNl[i], t + h, "blob_transport_check");
        }
        rk4_step(H, J, ref, t, h, true, false);
        t = (k + 1 == plan.steps) ? tEnd : t + h;
        check_finite(ref.z, t, "blob_transport_check");
        record(t);
    }

    int contained = 0;
    for (int i = 0; i < sampleCount; ++i)
        if (maxRadius[i] <= radius * (1.0 + 1e-9)) ++contained;
    rep.containment_fraction = static_cast<double>(contained) / sampleCount;
    for (int i = 0; i < sampleCount; ++i)
        rep.max_excess_radius = std::max(rep.max_excess_radius, maxRadius[i] - radius);
    rep.max_excess_radius = std::max(rep.max_excess_radius, 0.0);

    // Gronwall envelope with the observed k.
    for (const auto& dev : history) {
        for (int i = 0; i < sampleCount; ++i) {
            const double envelope = std::exp(rep.gronwall_k * dev.t) * u0[i].norm();
            if (envelope > 0.0)
                rep.max_gronwall_ratio =
                    std::max(rep.max_gronwall_ratio, dev.dist[i] / envelope);
            else if (dev.dist[i] > 1e-12)
                rep.max_gronwall_ratio = std::max(rep.max_gronwall_ratio, 2.0);
        }
    }
    rep.gronwall_ok = rep.max_gronwall_ratio <= 1.0 + 1e-9;
    return rep;
}

}  // namespace sympolar
