#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "pum/admissible.hpp"
#include "pum/coupled.hpp"
#include "pum/mesh_io.hpp"
#include "pum/periodic.hpp"
#include "pum/structural.hpp"
#include "pum/version.hpp"

namespace pumrun {

using namespace pum;

namespace {

constexpr const char* kCsvSchemaVersion = "1";

// ============================================================================
// Shared plumbing
// ============================================================================

struct BuiltMesh {
    std::unique_ptr<GeneralMesh> mesh;
    const HatMesh* hat = nullptr;  // set when the cells are P1 hats
};

BuiltMesh build_mesh(const ExperimentConfig& cfg) {
    BuiltMesh out;
    if (!cfg.mesh_file.empty()) {
        if (!std::filesystem::exists(cfg.mesh_file))
            throw ConfigError("mesh file '" + cfg.mesh_file + "' does not exist");
        out.mesh = std::make_unique<MollifiedMesh>(
            mollify_polygon_mesh(read_polygon_mesh(cfg.mesh_file), cfg.radius));
        return out;
    }
    if (cfg.generator == "disc") {
        auto hm = std::make_unique<HatMesh>(hat_mesh_from_triangulation(
            triangulate_disc({0.5 * (cfg.domain.lo.x + cfg.domain.hi.x),
                              0.5 * (cfg.domain.lo.y + cfg.domain.hi.y)},
                             0.5 * std::min(cfg.domain.size().x, cfg.domain.size().y),
                             cfg.refinements),
            cfg.domain));
        out.hat = hm.get();
        out.mesh = std::move(hm);
        return out;
    }
    PolygonMesh poly;
    if (cfg.generator == "cartesian")
        poly = build_cartesian_mesh(cfg.mesh_h, cfg.domain, cfg.margin);
    else if (cfg.generator == "alternating")
        poly = build_alternating_mesh(cfg.mesh_h, cfg.domain, cfg.margin);
    else
        poly = build_hexagonal_mesh(cfg.mesh_h, cfg.domain, cfg.margin);
    try {
        out.mesh = std::make_unique<MollifiedMesh>(mollify_polygon_mesh(std::move(poly),
                                                                        cfg.radius));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("mesh parameters rejected: ") + e.what());
    }
    return out;
}

std::shared_ptr<const VectorField> build_field(const ExperimentConfig& cfg) {
    std::shared_ptr<const VectorField> f;
    if (cfg.field == "constant")
        f = std::make_shared<ConstantField>(Vec2{cfg.bx, cfg.by});
    else if (cfg.field == "rotation")
        f = std::make_shared<RotationField>(Vec2{cfg.cx, cfg.cy}, cfg.omega);
    else if (cfg.field == "shear")
        f = std::make_shared<ShearField>(cfg.rate);
    else
        f = std::make_shared<RoughField>(cfg.max_mode, cfg.decay, cfg.amplitude, cfg.seed);
    if (cfg.oscillate != 0.0) f = std::make_shared<OscillatoryField>(f, cfg.oscillate);
    return f;
}

CellValues initial_values(const GeneralMesh& mesh, const ExperimentConfig& cfg) {
    const Vec2 c{cfg.icx, cfg.icy};
    CellValues u(mesh.cell_count(), 0.0);
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        const double d = dist(mesh.barycenter[i], c);
        if (d >= cfg.iradius) continue;
        u[i] = cfg.initial == "bump" ? 1.0 - (d * d) / (cfg.iradius * cfg.iradius)
                                     : 1.0 - d / cfg.iradius;
    }
    return u;
}

double mass_of(const GeneralMesh& mesh, const CellValues& u) {
    double s = 0.0;
    for (size_t i = 0; i < mesh.cell_count(); ++i) s += u[i] * mesh.pi[i];
    return s;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        out_ << header << "\n";
    }
    void row(const std::vector<double>& vals) {
        char buf[32];
        for (size_t k = 0; k < vals.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
            out_ << (k ? "," : "") << buf;
        }
        out_ << "\n";
        out_.flush();  // keep partial results on disk if a later step fails
    }

  private:
    std::ofstream out_;
};

nlohmann::json structural_json(const GeneralMesh& mesh) {
    const StructuralReport r = validate_structural(mesh);
    return {{"diam_ratio_min", r.diam_ratio_min},
            {"diam_ratio_max", r.diam_ratio_max},
            {"volume_ratio_min", r.volume_ratio_min},
            {"volume_ratio_max", r.volume_ratio_max},
            {"n_sup_times_dx", r.n_sup_times_dx},
            {"max_cells_per_ball", r.max_cells_per_ball}};
}

void write_summary(const ExperimentConfig& cfg, nlohmann::json measured) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["csv_schema_version"] = kCsvSchemaVersion;
    j["config"] = config_to_json(cfg);
    j["measured"] = std::move(measured);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "summary.json");
    out << j.dump(2) << "\n";
}

std::vector<double> output_times(const ExperimentConfig& cfg) {
    std::vector<double> ts;
    for (int k = 1; k <= cfg.outputs; ++k) ts.push_back(cfg.T * k / cfg.outputs);
    return ts;
}

void note(const ExperimentConfig& cfg, const std::string& msg) {
    if (!cfg.quiet) std::printf("%s\n", msg.c_str());
}

// ============================================================================
// Experiments
// ============================================================================

void run_advect(const ExperimentConfig& cfg) {
    const BuiltMesh bm = build_mesh(cfg);
    const GeneralMesh& mesh = *bm.mesh;
    const auto field = build_field(cfg);
    SchemeState s;
    s.u = initial_values(mesh, cfg);

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "trajectory.csv",
                  "t,cell_id,u,pi,leaked_total");
    auto record = [&](const SchemeState& st) {
        for (size_t i = 0; i < mesh.cell_count(); ++i)
            csv.row({st.t, static_cast<double>(i), st.u[i], mesh.pi[i], st.leaked});
    };
    record(s);
    const double m0 = mass_of(mesh, s.u);

    auto coeffs = [&](double t) { return project_to_face(mesh, *field, t); };
    const auto traj = integrate(mesh, s, coeffs, output_times(cfg), cfg.stepper);
    for (const auto& st : traj) record(st);

    const SchemeState& last = traj.back();
    write_summary(cfg, {{"structural", structural_json(mesh)},
                        {"mass_initial", m0},
                        {"mass_final", mass_of(mesh, last.u)},
                        {"mass_drift", mass_of(mesh, last.u) + last.leaked - m0},
                        {"leak_total", last.leaked}});
    note(cfg, "advect: final mass " + std::to_string(mass_of(mesh, last.u)));
}

void run_example16(const ExperimentConfig& cfg) {
    std::vector<double> hs = cfg.h_list;
    if (hs.empty()) hs = {1.0 / 8, 1.0 / 16};
    const auto field = build_field(cfg);

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "fractional.csv", "h,dx,s,norm");
    std::vector<std::vector<double>> norms(hs.size());
    for (size_t k = 0; k < hs.size(); ++k) {
        ExperimentConfig mc = cfg;
        mc.generator = "alternating";
        mc.mesh_h = hs[k];
        mc.radius = hs[k] / 4;
        const BuiltMesh bm = build_mesh(mc);
        const GeneralMesh& mesh = *bm.mesh;
        SchemeState s;
        s.u = initial_values(mesh, cfg);
        auto coeffs = [&](double t) { return project_to_face(mesh, *field, t); };
        const auto traj = integrate(mesh, s, coeffs, {cfg.T}, cfg.stepper);
        for (double sv : cfg.s_list) {
            const double nv = fractional_sobolev(mesh, traj[0].u, sv);
            norms[k].push_back(nv);
            csv.row({hs[k], mesh.dx, sv, nv});
        }
        note(cfg, "example16: h = " + std::to_string(hs[k]) + " done");
    }

    nlohmann::json ratios = nlohmann::json::array();
    for (size_t j = 0; j < cfg.s_list.size(); ++j)
        ratios.push_back({{"s", cfg.s_list[j]},
                          {"finest_over_coarsest", norms.back()[j] / norms.front()[j]}});
    write_summary(cfg, {{"h_list", hs}, {"ratios", ratios}});
}

void run_vcoords_scan(const ExperimentConfig& cfg) {
    const BuiltMesh bm = build_mesh(cfg);
    const GeneralMesh& mesh = *bm.mesh;
    if (!mesh.periodic_hint)
        throw ConfigError("vcoords-scan needs a periodic mesh generator");
    const PeriodicStructure ps = declare_periodic(mesh);
    const AdmissibleFamily fam = build_admissible_family(mesh, ps, cfg.directions);

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "residues.csv",
                  "direction,dir_x,dir_y,beta,xi_interior,residue_max");
    CsvWriter fcsv(std::filesystem::path(cfg.out_dir) / "family.csv",
                   "direction,cell_id,xhat_x,xhat_y,residue");
    for (size_t k = 0; k < fam.directions.size(); ++k) {
        double beta = 0.0, xi = 0.0, rall = 0.0;
        for (size_t i = 0; i < mesh.cell_count(); ++i)
            if (mesh.meets_domain[i])
                beta = std::max(beta, dist(fam.coords[k][i], mesh.barycenter[i]));
        const FaceCoeffs a = project_to_face(mesh, ConstantField(fam.directions[k]));
        const std::vector<Vec2> bcell(mesh.cell_count(), fam.directions[k]);
        const std::vector<Vec2> r = residue_field(mesh, a, bcell, fam.coords[k]);
        for (size_t i = 0; i < mesh.cell_count(); ++i) {
            const double mag = std::max(std::abs(r[i].x), std::abs(r[i].y));
            if (mesh.interior[i]) xi = std::max(xi, mag);
            if (mesh.meets_domain[i]) rall = std::max(rall, mag);
            fcsv.row({static_cast<double>(k), static_cast<double>(i), fam.coords[k][i].x,
                      fam.coords[k][i].y, mag});
        }
        csv.row({static_cast<double>(k), fam.directions[k].x, fam.directions[k].y, beta, xi,
                 rall});
    }

    write_summary(cfg, {{"structural", structural_json(mesh)},
                        {"m_beta", fam.m_beta},
                        {"m_gamma", fam.m_gamma},
                        {"m_xi", fam.m_xi},
                        {"residue_max_all", fam.r_max_all},
                        {"dx", mesh.dx}});
    note(cfg, "vcoords-scan: M_xi = " + std::to_string(fam.m_xi));
}

void run_seminorm_propagation(const ExperimentConfig& cfg) {
    const BuiltMesh bm = build_mesh(cfg);
    const GeneralMesh& mesh = *bm.mesh;
    const auto field = build_field(cfg);
    SchemeState s;
    s.u = initial_values(mesh, cfg);

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "seminorm.csv", "t,value,arg_h,mass");
    const SemiNormValue v0 = discrete_seminorm(mesh, s.u, cfg.seminorm);
    csv.row({0.0, v0.value, v0.arg_h, mass_of(mesh, s.u)});

    auto coeffs = [&](double t) { return project_to_face(mesh, *field, t); };
    const auto traj = integrate(mesh, s, coeffs, output_times(cfg), cfg.stepper);
    SemiNormValue vend = v0;
    for (const auto& st : traj) {
        vend = discrete_seminorm(mesh, st.u, cfg.seminorm);
        csv.row({st.t, vend.value, vend.arg_h, mass_of(mesh, st.u)});
    }

    // per-scale scan of the final state: one row per kernel scale in the grid
    CsvWriter scan(std::filesystem::path(cfg.out_dir) / "scan.csv",
                   "h,raw_double_sum,weighted_value");
    for (double h : seminorm_h_grid(cfg.seminorm)) {
        SemiNormParams one = cfg.seminorm;
        one.h0 = h;
        one.h_count = 1;
        const SemiNormValue v = discrete_seminorm(mesh, traj.back().u, one);
        scan.row({h, v.value * std::pow(std::abs(std::log(h)), one.theta), v.value});
    }

    write_summary(cfg, {{"structural", structural_json(mesh)},
                        {"initial", v0.value},
                        {"final", vend.value},
                        {"growth", v0.value > 0.0 ? vend.value / v0.value : 0.0},
                        {"log_exponent_flagged", divergence_log_exponent_flagged(cfg.seminorm)}});
    note(cfg, "seminorm-propagation: growth " +
                  std::to_string(v0.value > 0.0 ? vend.value / v0.value : 0.0));
}

void run_residue_decay(const ExperimentConfig& cfg) {
    std::vector<double> hs = cfg.h_list;
    if (hs.empty()) hs = {1.0 / 8, 1.0 / 16, 1.0 / 32};

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "residue_decay.csv",
                  "h,dx,m_beta,m_beta_over_dx,m_gamma,m_xi");
    nlohmann::json rows = nlohmann::json::array();
    for (double h : hs) {
        ExperimentConfig mc = cfg;
        mc.generator = "alternating";
        mc.mesh_h = h;
        mc.radius = h / 4;
        const BuiltMesh bm = build_mesh(mc);
        const GeneralMesh& mesh = *bm.mesh;
        const PeriodicStructure ps = declare_periodic(mesh);
        const AdmissibleFamily fam = build_admissible_family(mesh, ps, cfg.directions);
        csv.row({h, mesh.dx, fam.m_beta, fam.m_beta / mesh.dx, fam.m_gamma, fam.m_xi});
        rows.push_back({{"h", h},
                        {"dx", mesh.dx},
                        {"m_beta_over_dx", fam.m_beta / mesh.dx},
                        {"m_xi", fam.m_xi}});
        note(cfg, "residue-decay: h = " + std::to_string(h) + " done");
    }
    write_summary(cfg, {{"rows", rows}});
}

void run_coupled(const ExperimentConfig& cfg) {
    const BuiltMesh bm = build_mesh(cfg);
    if (!bm.hat) throw ConfigError("the coupled experiment needs a triangulated (disc) mesh");
    const HatMesh& mesh = *bm.hat;
    const P1Solver fem(mesh);
    auto g = [](double u) { return u / (1.0 + u); };

    CoupledOptions opt;
    opt.stepper = cfg.stepper;
    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "coupled.csv",
                  "t,cell_id,u,pi,potential_min,potential_max,div_sup,leak_total");
    auto record = [&](const CoupledState& s) {
        double plo = 0.0, phi = 0.0;
        for (double v : s.potential) {
            plo = std::min(plo, v);
            phi = std::max(phi, v);
        }
        for (size_t i = 0; i < mesh.cell_count(); ++i)
            csv.row({s.state.t, static_cast<double>(i), s.state.u[i], mesh.pi[i], plo, phi,
                     s.div_sup, s.state.leaked});
    };

    const CoupledState s0 = coupled_init(fem, initial_values(mesh, cfg), g);
    record(s0);
    const double m0 = mass_of(mesh, s0.state.u);
    const auto traj = coupled_run(fem, s0.state.u, g, output_times(cfg), opt);
    double dsup = s0.div_sup;
    for (const auto& s : traj) {
        record(s);
        dsup = std::max(dsup, s.div_sup);
    }
    const CoupledState& last = traj.back();
    write_summary(cfg, {{"structural", structural_json(mesh)},
                        {"mass_initial", m0},
                        {"mass_final", mass_of(mesh, last.state.u)},
                        {"leak_total", last.state.leaked},
                        {"div_sup_max", dsup}});
    note(cfg, "coupled: final mass " + std::to_string(mass_of(mesh, last.state.u)));
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.experiment == "advect")
        run_advect(cfg);
    else if (cfg.experiment == "example16")
        run_example16(cfg);
    else if (cfg.experiment == "vcoords-scan")
        run_vcoords_scan(cfg);
    else if (cfg.experiment == "seminorm-propagation")
        run_seminorm_propagation(cfg);
    else if (cfg.experiment == "residue-decay")
        run_residue_decay(cfg);
    else
        run_coupled(cfg);
}

}  // namespace pumrun
