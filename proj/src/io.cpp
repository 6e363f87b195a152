#include "sympolar/io.hpp"

#include <nlohmann/json.hpp>

namespace sympolar::io {

namespace {

double number_at(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ParseError("expected numeric field \"" + key + "\"");
    return j.at(key).get<double>();
}

Mat rows_to_matrix(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw ParseError("\"rows\" must be a non-empty array");
    const std::size_t r = rows.size();
    if (!rows[0].is_array() || rows[0].empty())
        throw ParseError("\"rows\" must contain non-empty arrays");
    const std::size_t c = rows[0].size();
    Mat m(static_cast<int>(r), static_cast<int>(c));
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c)
            throw ParseError("ragged matrix rows");
        for (std::size_t k = 0; k < c; ++k) {
            if (!rows[i][k].is_number()) throw ParseError("matrix entries must be numbers");
            m(static_cast<int>(i), static_cast<int>(k)) = rows[i][k].get<double>();
        }
    }
    return m;
}

json matrix_rows(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON input");
    return j;
}

json matrix_to_json(const Mat& m, MatrixKind kind) {
    json j;
    const int d = static_cast<int>(m.rows());
    j["n"] = (kind == MatrixKind::PhaseSpace) ? d / 2 : d;
    j["rows"] = matrix_rows(m);
    return j;
}

Mat matrix_from_json(const json& j, MatrixKind kind) {
    if (!j.is_object() || !j.contains("rows"))
        throw ParseError("expected a matrix object with a \"rows\" field");
    Mat m = rows_to_matrix(j.at("rows"));
    if (m.rows() != m.cols()) throw ParseError("matrix must be square");
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) throw ParseError("\"n\" must be an integer");
        const int n = j.at("n").get<int>();
        const bool phaseOk = (m.rows() == 2 * n);
        const bool configOk = (m.rows() == n);
        switch (kind) {
            case MatrixKind::PhaseSpace:
                if (!phaseOk)
                    throw ParseError("phase-space matrix must be 2n x 2n for declared n");
                break;
            case MatrixKind::Configuration:
                if (!configOk)
                    throw ParseError("configuration matrix must be n x n for declared n");
                break;
            case MatrixKind::Any:
                if (!phaseOk && !configOk) throw ParseError("matrix size inconsistent with n");
                break;
        }
    } else if (kind == MatrixKind::PhaseSpace && m.rows() % 2 != 0) {
        throw ParseError("phase-space matrix must have even dimension");
    }
    return m;
}

json vector_to_json(const Vec& v) {
    json j = json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

Vec vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected a numeric array");
    Vec v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError("vector entries must be numbers");
        v(static_cast<int>(i)) = j[i].get<double>();
    }
    return v;
}

json ellipsoid_to_json(const Ellipsoid& e) {
    json j;
    j["center"] = vector_to_json(e.center);
    j["Q"] = matrix_rows(e.Q);
    j["hbar"] = e.hbar;
    return j;
}

Ellipsoid ellipsoid_from_json(const json& j, double defaultHbar) {
    if (!j.is_object() || !j.contains("Q")) throw ParseError("ellipsoid needs a \"Q\" field");
    const Mat Q = rows_to_matrix(j.at("Q"));
    if (Q.rows() != Q.cols()) throw ParseError("ellipsoid shape must be square");
    const double hbar = j.contains("hbar") ? number_at(j, "hbar") : defaultHbar;
    Vec center = Vec::Zero(Q.rows());
    if (j.contains("center")) {
        center = vector_from_json(j.at("center"));
        if (center.size() != Q.rows())
            throw ParseError("ellipsoid center dimension does not match Q");
    }
    return Ellipsoid(center, Q, hbar);
}

json subspace_to_json(const Subspace& s) {
    json j;
    j["basis"] = matrix_rows(s.basis);
    return j;
}

Subspace subspace_from_json(const json& j) {
    if (!j.is_object() || !j.contains("basis"))
        throw ParseError("subspace needs a \"basis\" field");
    return Subspace(rows_to_matrix(j.at("basis")));
}

json geometric_state_to_json(const GeometricState& s) {
    json j;
    j["frame"]["ell"] = matrix_rows(s.frame.ell.basis);
    j["frame"]["ellPrime"] = matrix_rows(s.frame.ellPrime.basis);
    j["shapeX"] = matrix_rows(s.shapeX);
    j["center"] = vector_to_json(s.center);
    j["hbar"] = s.hbar;
    return j;
}

GeometricState geometric_state_from_json(const json& j, double defaultHbar) {
    if (!j.is_object() || !j.contains("frame") || !j.contains("shapeX"))
        throw ParseError("geometric state needs \"frame\" and \"shapeX\" fields");
    const json& f = j.at("frame");
    if (!f.contains("ell") || !f.contains("ellPrime"))
        throw ParseError("frame needs \"ell\" and \"ellPrime\" fields");
    LagrangianPlane ell(rows_to_matrix(f.at("ell")));
    LagrangianPlane ellPrime(rows_to_matrix(f.at("ellPrime")));
    const Mat shapeX = rows_to_matrix(j.at("shapeX"));
    const double hbar = j.contains("hbar") ? number_at(j, "hbar") : defaultHbar;
    Vec center = Vec::Zero(2 * ell.modes());
    if (j.contains("center")) center = vector_from_json(j.at("center"));
    return GeometricState(LagrangianFrame(std::move(ell), std::move(ellPrime)), shapeX,
                          center, hbar);
}

json gaussian_state_to_json(const GaussianState& s) {
    json j;
    j["A"] = matrix_rows(s.A);
    j["B"] = matrix_rows(s.B);
    j["center"] = vector_to_json(s.center);
    j["hbar"] = s.hbar;
    return j;
}

GaussianState gaussian_state_from_json(const json& j, double defaultHbar) {
    if (!j.is_object() || !j.contains("A") || !j.contains("B"))
        throw ParseError("gaussian state needs \"A\" and \"B\" fields");
    const Mat A = rows_to_matrix(j.at("A"));
    const Mat B = rows_to_matrix(j.at("B"));
    const double hbar = j.contains("hbar") ? number_at(j, "hbar") : defaultHbar;
    Vec center = Vec::Zero(2 * A.rows());
    if (j.contains("center")) center = vector_from_json(j.at("center"));
    return GaussianState(A, B, center, hbar);
}

json williamson_to_json(const WilliamsonForm& w, const Mat& input) {
    json j;
    j["S"] = matrix_rows(w.S);
    j["spectrum"] = vector_to_json(w.spectrum);
    j["residuals"]["reconstruction"] = max_abs(w.reconstruct() - input);
    j["residuals"]["symplecticity"] = symplecticity_residual(w.S);
    return j;
}

json admissibility_report_to_json(const AdmissibilityReport& r) {
    json j;
    j["spectrum"] = vector_to_json(r.spectrum);
    j["by_spectrum"] = r.by_spectrum;
    j["by_inclusion"] = r.by_inclusion;
    j["by_tomography"] = r.by_tomography;
    j["by_positivity"] = r.by_positivity;
    j["by_rs"] = r.by_rs;
    j["margins"]["spectral"] = r.spectral_margin;
    j["margins"]["positivity_min_eigenvalue"] = r.positivity_min_eigenvalue;
    j["purity"]["value"] = r.purity.value;
    j["purity"]["unphysical"] = r.purity.unphysical;
    json& nw = j["narcowich"];
    nw["capacity_cov"] = r.narcowich.capacity_cov;
    nw["orbit_bound_ok"] = r.narcowich.orbit_bound_ok;
    nw["blob_boundary"] = r.narcowich.blob_boundary;
    nw["capacity_star"] = r.narcowich.capacity_star;
    nw["star_threshold"] = r.narcowich.star_threshold;
    nw["star_le_threshold"] = r.narcowich.star_le_threshold;
    nw["star_ge_threshold"] = r.narcowich.star_ge_threshold;
    nw["max_section_action"] = r.narcowich.max_section_action;
    nw["max_null_action"] = r.narcowich.max_null_action;
    nw["planes_sampled"] = r.narcowich.planes_sampled;
    return j;
}

json capacity_to_json(const CapacityResult& r) {
    json j;
    j["capacity"] = r.value;
    switch (r.kind) {
        case CapacityKind::Ellipsoid: j["kind"] = "ellipsoid"; break;
        case CapacityKind::Product: j["kind"] = "product"; break;
        case CapacityKind::Dual: j["kind"] = "dual"; break;
    }
    if (r.witness) j["witness"] = *r.witness;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json beam_state_to_json(const BeamState& b) {
    json j;
    j["t"] = b.t;
    j["z"] = vector_to_json(b.z);
    j["S"] = matrix_rows(b.S);
    j["gamma"] = b.gamma;
    j["drift"] = b.drift;
    if (std::holds_alternative<GaussianState>(b.payload))
        j["payload"] = gaussian_state_to_json(std::get<GaussianState>(b.payload));
    else
        j["payload"] = geometric_state_to_json(std::get<GeometricState>(b.payload));
    return j;
}

namespace {

HamiltonianModel hamiltonian_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("hamiltonian needs a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        if (j.contains("M")) return HamiltonianModel::quadratic(rows_to_matrix(j.at("M")));
        if (j.contains("pieces")) {
            const json& pieces = j.at("pieces");
            if (!pieces.is_array() || pieces.empty())
                throw ParseError("\"pieces\" must be a non-empty array");
            std::vector<std::pair<double, Mat>> table;
            for (const json& p : pieces)
                table.emplace_back(number_at(p, "until"), rows_to_matrix(p.at("M")));
            const int dim = static_cast<int>(table.front().second.rows());
            for (const auto& [tu, M] : table)
                if (M.rows() != dim || M.cols() != dim)
                    throw ParseError("piecewise blocks must share dimensions");
            if (dim % 2 != 0) throw ParseError("quadratic M must be 2n x 2n");
            auto M_of_t = [table](double t) -> Mat {
                for (const auto& [until, M] : table)
                    if (t <= until) return M;
                return table.back().second;
            };
            return HamiltonianModel::quadratic(dim / 2, M_of_t);
        }
        throw ParseError("quadratic hamiltonian needs \"M\" or \"pieces\"");
    }
    if (kind == "kinetic_potential") {
        if (!j.contains("potential")) throw ParseError("kinetic_potential needs \"potential\"");
        const json& pot = j.at("potential");
        const std::string pk = pot.at("kind").get<std::string>();
        std::optional<double> cutoff;
        if (j.contains("cutoff_radius")) cutoff = number_at(j, "cutoff_radius");
        if (pk == "quadratic") {
            const Mat K = rows_to_matrix(pot.at("K"));
            if (K.rows() != K.cols()) throw ParseError("potential matrix must be square");
            const int n = static_cast<int>(K.rows());
            return HamiltonianModel::kinetic_potential(
                n, [K](const Vec& x, double) { return 0.5 * x.dot(K * x); },
                [K](const Vec& x, double) -> Vec { return K * x; },
                [K](const Vec&, double) -> Mat { return K; }, cutoff);
        }
        if (pk == "quartic") {
            const double k2 = pot.contains("k2") ? number_at(pot, "k2") : 0.0;
            const double k4 = number_at(pot, "k4");
            const int n = pot.contains("n") ? pot.at("n").get<int>() : 1;
            return HamiltonianModel::kinetic_potential(
                n,
                [k2, k4](const Vec& x, double) {
                    return 0.5 * k2 * x.squaredNorm() +
                           0.25 * k4 * x.squaredNorm() * x.squaredNorm();
                },
                [k2, k4](const Vec& x, double) -> Vec {
                    return k2 * x + k4 * x.squaredNorm() * x;
                },
                [k2, k4](const Vec& x, double) -> Mat {
                    const int d = static_cast<int>(x.size());
                    return k2 * Mat::Identity(d, d) +
                           k4 * (x.squaredNorm() * Mat::Identity(d, d) +
                                 2.0 * x * x.transpose());
                },
                cutoff);
        }
        throw ParseError("unknown potential kind \"" + pk + "\"");
    }
    throw ParseError("unknown hamiltonian kind \"" + kind + "\"");
}

}  // namespace

BeamConfig beam_config_from_json(const json& j, double defaultHbar) {
    if (!j.is_object() || !j.contains("hamiltonian") || !j.contains("state"))
        throw ParseError("beam config needs \"hamiltonian\" and \"state\"");
    BeamConfig cfg{hamiltonian_from_json(j.at("hamiltonian")),
                   Vec(),
                   j.contains("tEnd") ? number_at(j, "tEnd") : 1.0,
                   j.contains("dt") ? number_at(j, "dt") : 1e-3,
                   GaussianState(Mat::Identity(1, 1), Mat::Zero(1, 1), Vec::Zero(2), 1.0)};
    const json& st = j.at("state");
    if (st.contains("A"))
        cfg.state = gaussian_state_from_json(st, defaultHbar);
    else
        cfg.state = geometric_state_from_json(st, defaultHbar);
    if (j.contains("z0")) {
        const Vec z0 = vector_from_json(j.at("z0"));
        if (std::holds_alternative<GaussianState>(cfg.state)) {
            GaussianState& g = std::get<GaussianState>(cfg.state);
            if (z0.size() != g.center.size()) throw ParseError("z0 dimension mismatch");
            g.center = z0;
        } else {
            GeometricState& g = std::get<GeometricState>(cfg.state);
            if (z0.size() != g.center.size()) throw ParseError("z0 dimension mismatch");
            g.center = z0;
        }
    }
    cfg.z0 = std::holds_alternative<GaussianState>(cfg.state)
                 ? std::get<GaussianState>(cfg.state).center
                 : std::get<GeometricState>(cfg.state).center;
    return cfg;
}

}  // namespace sympolar::io
