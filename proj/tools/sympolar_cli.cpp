// sympolar command-line front end: JSON in, JSON reports out.
//
// Exit codes: 0 ok, 2 parse error, 3 domain error, 4 numerical error.

#include "sympolar/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace sympolar;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
    std::string input;
    std::string output;       // empty = stdout
    double hbar = defaults::kHbar;
    double tol = defaults::kAdmissTol;
    std::uint64_t seed = 0;
    int planes = defaults::kPlaneBudget;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("input", opts.input, "input JSON file")->required();
    cmd->add_option("--output", opts.output, "output path (default: stdout)");
    cmd->add_option("--hbar", opts.hbar, "value of hbar")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", opts.tol, "verdict tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "RNG seed for sampled checks");
    cmd->add_option("--planes", opts.planes, "tomography plane budget");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io::ParseError("cannot open input file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return io::parse(ss.str());
}

// Reports are accumulated in memory and flushed in one write, so failed
// runs leave no partial output behind.
void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.output, std::ios::trunc);
    if (!out) throw Error("cannot open output file '" + opts.output + "'");
    out << text;
}

int run_williamson(const CommonOpts& opts) {
    const Mat M = io::matrix_from_json(load_json(opts.input), io::MatrixKind::PhaseSpace);
    const WilliamsonForm w = williamson(M);
    emit(opts, io::williamson_to_json(w, M).dump(2) + "\n");
    return kExitOk;
}

int run_admissible(const CommonOpts& opts) {
    const Mat Sigma = io::matrix_from_json(load_json(opts.input), io::MatrixKind::PhaseSpace);
    const CovarianceMatrix cov(Sigma, opts.hbar);
    const AdmissibilityReport rep = analyze_covariance(cov, opts.planes, opts.seed, opts.tol);
    emit(opts, io::admissibility_report_to_json(rep).dump(2) + "\n");
    return kExitOk;
}

int run_dual(const CommonOpts& opts) {
    const Ellipsoid e = io::ellipsoid_from_json(load_json(opts.input), opts.hbar);
    json out;
    out["ordinary"] = io::ellipsoid_to_json(polar_dual(e));
    if (e.dim() % 2 == 0) {
        const Ellipsoid sd = symplectic_polar_dual(e);
        out["symplectic"] = io::ellipsoid_to_json(sd);
        out["is_quantum_blob"] = is_quantum_blob(e);
        const double vol = volume(e);
        const double dualVol = volume(sd);
        out["volume"] = vol;
        out["dual_volume"] = dualVol;
        out["mahler"] = mahler_volume(e);
        const double ball = volume(Ellipsoid(Mat::Identity(e.dim(), e.dim()), e.hbar));
        out["santalo_gap"] = vol * dualVol - ball * ball;
    } else {
        out["volume"] = volume(e);
        out["mahler"] = mahler_volume(e);
    }
    emit(opts, out.dump(2) + "\n");
    return kExitOk;
}

int run_capacity(const CommonOpts& opts) {
    const json j = load_json(opts.input);
    json out;
    if (j.contains("X") && j.contains("P")) {
        const Ellipsoid x = io::ellipsoid_from_json(j.at("X"), opts.hbar);
        const Ellipsoid p = io::ellipsoid_from_json(j.at("P"), opts.hbar);
        out = io::capacity_to_json(cmax_product(x, p));
    } else if (j.contains("frame")) {
        const GeometricState st = io::geometric_state_from_json(j, opts.hbar);
        const StateCapacities sc = state_capacities(st);
        out["cmax"] = io::capacity_to_json(sc.cmax);
        out["cmin_lin"] = io::capacity_to_json(sc.cmin_lin);
        out["john_capacity"] = io::capacity_to_json(sc.john_capacity);
    } else {
        const Ellipsoid e = io::ellipsoid_from_json(j, opts.hbar);
        out = io::capacity_to_json(capacity_ellipsoid(e));
        out["dual"] = io::capacity_to_json(capacity_dual(e));
        const double pi_h = 3.14159265358979323846 * e.hbar;
        out["product_bound"] = pi_h * pi_h;
    }
    emit(opts, out.dump(2) + "\n");
    return kExitOk;
}

int run_state(const CommonOpts& opts) {
    const json j = load_json(opts.input);
    json out;
    if (j.contains("frame")) {
        const GeometricState st = io::geometric_state_from_json(j, opts.hbar);
        const GaussianState g = to_gaussian(st);
        out["gaussian"] = io::gaussian_state_to_json(g);
        out["wigner"] = io::matrix_to_json(wigner_matrix(g), io::MatrixKind::PhaseSpace);
        out["john"] = io::ellipsoid_to_json(john_of_state(st));
        out["john_is_blob"] = is_quantum_blob(john_of_state(st));
        const GeometricState back = from_gaussian(g);
        out["roundtrip"]["frame_distance"] =
            std::max(back.frame.ell.span_distance(st.frame.ell),
                     back.frame.ellPrime.span_distance(st.frame.ellPrime));
        out["roundtrip"]["gaussian_residual"] =
            std::max(max_abs(to_gaussian(back).A - g.A), max_abs(to_gaussian(back).B - g.B));
    } else {
        const GaussianState g = io::gaussian_state_from_json(j, opts.hbar);
        const GeometricState st = from_gaussian(g);
        out["geometric"] = io::geometric_state_to_json(st);
        out["wigner"] = io::matrix_to_json(wigner_matrix(g), io::MatrixKind::PhaseSpace);
        const GaussianState back = to_gaussian(st);
        out["roundtrip"]["A_residual"] = max_abs(back.A - g.A);
        out["roundtrip"]["B_residual"] = max_abs(back.B - g.B);
        auto [sxx, spp] = marginals_gaussian(g);
        out["marginals"]["position_covariance"] = io::matrix_to_json(sxx, io::MatrixKind::Configuration);
        out["marginals"]["momentum_covariance"] = io::matrix_to_json(spp, io::MatrixKind::Configuration);
    }
    emit(opts, out.dump(2) + "\n");
    return kExitOk;
}

int run_beam(const CommonOpts& opts, double dtFlag, double tEndFlag, int stride) {
    const json j = load_json(opts.input);
    io::BeamConfig cfg = io::beam_config_from_json(j, opts.hbar);
    if (dtFlag > 0.0) cfg.dt = dtFlag;
    if (tEndFlag > 0.0) cfg.tEnd = tEndFlag;
    const auto snaps = beam_snapshots(cfg.hamiltonian, cfg.state, cfg.tEnd, cfg.dt, stride);
    std::string lines;
    for (const BeamState& b : snaps) lines += io::beam_state_to_json(b).dump() + "\n";
    emit(opts, lines);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symplectic/Lagrangian polar duality toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    double dtFlag = 0.0;
    double tEndFlag = 0.0;
    int stride = 100;

    auto* williamsonCmd = app.add_subcommand("williamson", "Williamson normal form of a PD matrix");
    add_common(williamsonCmd, opts);
    auto* admissibleCmd = app.add_subcommand("admissible", "quantum admissibility of a covariance matrix");
    add_common(admissibleCmd, opts);
    auto* dualCmd = app.add_subcommand("dual", "polar duals, volumes and blob check of an ellipsoid");
    add_common(dualCmd, opts);
    auto* capacityCmd = app.add_subcommand("capacity", "symplectic capacities of ellipsoids, products, states");
    add_common(capacityCmd, opts);
    auto* stateCmd = app.add_subcommand("state", "geometric <-> Gaussian state bijection");
    add_common(stateCmd, opts);
    auto* beamCmd = app.add_subcommand("beam", "Gaussian-beam propagation of a state");
    add_common(beamCmd, opts);
    beamCmd->add_option("--dt", dtFlag, "integration step (overrides config)");
    beamCmd->add_option("--t-end", tEndFlag, "final time (overrides config)");
    beamCmd->add_option("--stride", stride, "snapshot stride in steps")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    const bool verbose = std::getenv("SDK_LOG") != nullptr;
    try {
        if (williamsonCmd->parsed()) return run_williamson(opts);
        if (admissibleCmd->parsed()) return run_admissible(opts);
        if (dualCmd->parsed()) return run_dual(opts);
        if (capacityCmd->parsed()) return run_capacity(opts);
        if (stateCmd->parsed()) return run_state(opts);
        if (beamCmd->parsed()) return run_beam(opts, dtFlag, tEndFlag, stride);
    } catch (const sympolar::io::ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kExitParse;
    } catch (const sympolar::DimensionError& err) {
        std::cerr << "domain error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const sympolar::NotPositiveDefiniteError& err) {
        std::cerr << "domain error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const sympolar::DomainError& err) {
        std::cerr << "domain error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const sympolar::NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& err) {
        if (verbose) std::cerr << "unexpected error: " << err.what() << "\n";
        else std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
