// Command-line front end: build complexes, inspect Hodge structure, simulate
// frustrated simplicial Kuramoto flows, sweep parameter grids, analyze stored
// trajectories, and render deterministic SVG figures.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hodgeflow/hodgeflow.hpp"

namespace hf = hodgeflow;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Complex source shared by most subcommands
// ---------------------------------------------------------------------------

struct ComplexSource {
    std::string preset;
    std::string input_path;
    bool flipped = false;    // triangle: reverse the designated edge
    bool flip_blue = false;  // holed: reverse the blue spoke
    bool flip_red = false;   // holed: reverse the red inner edge
    double face_weight = 1.0;
    int points = 40;
    int holes = 2;
    std::uint64_t mesh_seed = 1;
};

void add_complex_options(CLI::App* cmd, ComplexSource& src) {
    cmd->add_option("--preset", src.preset,
                    "built-in complex: triangle | holed | two-triangles | delaunay")
        ->check(CLI::IsMember({"triangle", "holed", "two-triangles", "delaunay"}));
    cmd->add_option("--input", src.input_path, "complex JSON file (overrides --preset)");
    cmd->add_flag("--flipped", src.flipped, "triangle: reverse edge (0,2)");
    cmd->add_flag("--flip-blue", src.flip_blue, "holed: reverse the blue edge");
    cmd->add_flag("--flip-red", src.flip_red, "holed: reverse the red edge");
    cmd->add_option("--w", src.face_weight, "two-triangles: face weight (0 removes the face)");
    cmd->add_option("--points", src.points, "delaunay: number of random points");
    cmd->add_option("--holes", src.holes, "delaunay: number of circular holes");
    cmd->add_option("--mesh-seed", src.mesh_seed, "delaunay: generator seed");
}

hf::SimplicialComplex build_from_source(const ComplexSource& src) {
    if (!src.input_path.empty())
        return hf::complex_from_json(hf::read_json_file(src.input_path));
    if (src.preset == "triangle") return hf::preset_triangle(src.flipped);
    if (src.preset == "holed") return hf::preset_holed(src.flip_blue, src.flip_red);
    if (src.preset == "two-triangles") return hf::preset_two_triangles(src.face_weight);
    if (src.preset == "delaunay")
        return hf::generate_delaunay_with_holes(src.points, hf::standard_holes(src.holes),
                                                src.mesh_seed);
    throw hf::ConfigError("no complex given: use --preset or --input");
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

Eigen::VectorXd vector_from_json(const json& j) {
    std::vector<double> v = j.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd load_vector_file(const std::string& path) {
    return vector_from_json(hf::read_json_file(path));
}

hf::RhsKind parse_rhs(const std::string& name) {
    if (name == "consensus") return hf::RhsKind::consensus;
    if (name == "diffusion") return hf::RhsKind::diffusion;
    throw hf::ConfigError("unknown right-hand side: " + name);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hf::ConfigError("cannot open for writing: " + path);
    out << content;
}

void print_complex_summary(const hf::SimplicialComplex& c) {
    for (int k = 0; k <= c.max_order(); ++k)
        std::cout << "k=" << k << " n_k=" << c.count(k) << " beta_k=" << hf::betti(c, k)
                  << '\n';
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateParams {
    json complex_json;             // inline, lossless
    int k = 1;
    Eigen::VectorXd alpha1, alpha2;  // full cochain vectors
    Eigen::VectorXd theta0;          // explicit initial phases
    std::uint64_t seed = 0;          // informational (theta0 already drawn)
    hf::IntegratorSettings integrator;
    std::string rhs = "consensus";
    bool lyapunov = false;
    double window_fraction = 0.5;
    std::string output = "run";
};

json simulate_params_to_json(const SimulateParams& p) {
    return {{"command", "simulate"},
            {"complex", p.complex_json},
            {"k", p.k},
            {"alpha1", vector_to_json(p.alpha1)},
            {"alpha2", vector_to_json(p.alpha2)},
            {"theta0", vector_to_json(p.theta0)},
            {"seed", p.seed},
            {"integrator", hf::settings_to_json(p.integrator)},
            {"rhs", p.rhs},
            {"lyapunov", p.lyapunov},
            {"window_fraction", p.window_fraction},
            {"output", p.output}};
}

SimulateParams simulate_params_from_json(const json& j) {
    SimulateParams p;
    p.complex_json = j.at("complex");
    p.k = j.at("k").get<int>();
    p.alpha1 = vector_from_json(j.at("alpha1"));
    p.alpha2 = vector_from_json(j.at("alpha2"));
    p.theta0 = vector_from_json(j.at("theta0"));
    p.seed = j.value("seed", std::uint64_t{0});
    p.integrator = hf::settings_from_json(j.at("integrator"));
    p.rhs = j.value("rhs", std::string("consensus"));
    p.lyapunov = j.value("lyapunov", false);
    p.window_fraction = j.value("window_fraction", 0.5);
    p.output = j.value("output", std::string("run"));
    return p;
}

int run_simulate(const SimulateParams& p) {
    hf::SimplicialComplex c = hf::complex_from_json(p.complex_json);
    hf::Operators op = hf::build_operators(c, p.k);
    hf::HodgeBasis basis = hf::hodge_bases(c, p.k);

    hf::Frustration fr;
    fr.level = p.alpha1;
    fr.up = p.alpha2;
    fr.validate(op);

    hf::Trajectory traj = hf::integrate(op, fr, p.theta0, p.integrator, parse_rhs(p.rhs));

    hf::AnalysisOptions aopt;
    aopt.thresholds.window_fraction = p.window_fraction;
    aopt.with_lyapunov = p.lyapunov;
    hf::AnalysisReport report = hf::analyze_trajectory(op, basis, traj, aopt);

    hf::write_trajectory_csv(p.output + ".csv", traj);
    hf::write_json_file(p.output + ".config.json", simulate_params_to_json(p));
    std::string report_text = hf::report_to_json(report).dump(2) + "\n";
    write_text_file(p.output + ".analysis.json", report_text);
    std::cout << report_text;
    return 0;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

struct ScanParams {
    json complex_json;
    int k = 1;
    std::vector<double> alpha1_values, alpha2_values;
    int seeds = 1;
    std::uint64_t root_seed = 0;
    hf::IntegratorSettings integrator;
    std::string rhs = "consensus";
    bool lyapunov = false;
    double window_fraction = 0.5;
    unsigned threads = 0;  // 0: HODGEFLOW_THREADS or hardware
    std::string output = "scan";
};

json scan_params_to_json(const ScanParams& p) {
    return {{"command", "scan"},
            {"complex", p.complex_json},
            {"k", p.k},
            {"alpha1_values", p.alpha1_values},
            {"alpha2_values", p.alpha2_values},
            {"seeds", p.seeds},
            {"root_seed", p.root_seed},
            {"integrator", hf::settings_to_json(p.integrator)},
            {"rhs", p.rhs},
            {"lyapunov", p.lyapunov},
            {"window_fraction", p.window_fraction},
            {"output", p.output}};
}

ScanParams scan_params_from_json(const json& j) {
    ScanParams p;
    p.complex_json = j.at("complex");
    p.k = j.at("k").get<int>();
    p.alpha1_values = j.at("alpha1_values").get<std::vector<double>>();
    p.alpha2_values = j.at("alpha2_values").get<std::vector<double>>();
    p.seeds = j.at("seeds").get<int>();
    p.root_seed = j.value("root_seed", std::uint64_t{0});
    p.integrator = hf::settings_from_json(j.at("integrator"));
    p.rhs = j.value("rhs", std::string("consensus"));
    p.lyapunov = j.value("lyapunov", false);
    p.window_fraction = j.value("window_fraction", 0.5);
    p.output = j.value("output", std::string("scan"));
    return p;
}

int run_scan_cmd(const ScanParams& p, bool quiet) {
    hf::SimplicialComplex c = hf::complex_from_json(p.complex_json);
    hf::ScanConfig cfg;
    cfg.alpha1 = p.alpha1_values;
    cfg.alpha2 = p.alpha2_values;
    cfg.seeds = p.seeds;
    cfg.root_seed = p.root_seed;
    cfg.k = p.k;
    cfg.kind = parse_rhs(p.rhs);
    cfg.integrator = p.integrator;
    cfg.analysis.thresholds.window_fraction = p.window_fraction;
    cfg.analysis.with_lyapunov = p.lyapunov;

    auto progress = [&](std::size_t done, std::size_t total) {
        if (!quiet && (done % 50 == 0 || done == total))
            std::cerr << "scan " << done << '/' << total << '\n';
    };
    std::vector<hf::ScanRecord> records = hf::run_scan(c, cfg, p.threads, progress);

    std::ostringstream csv;
    hf::write_scan_csv(csv, records);
    write_text_file(p.output + ".csv", csv.str());
    hf::write_json_file(p.output + ".config.json", scan_params_to_json(p));

    std::size_t failed = 0;
    for (const auto& r : records)
        if (!r.ok) ++failed;
    std::cout << "records=" << records.size() << " failed=" << failed << " -> " << p.output
              << ".csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

struct PlotParams {
    std::string kind;  // heatmap | line | trajectory
    std::string input;
    std::string output;
    std::string metric = "R2_mean";
    std::string x_column = "alpha1";
    std::string y_column = "alpha2";
    int x_index = 0;  // trajectory: phase column indices
    int y_index = 1;
    bool raw = false;  // trajectory: plot raw phases instead of sines
    std::string title;
};

json plot_params_to_json(const PlotParams& p) {
    return {{"command", "plot"},    {"kind", p.kind},       {"input", p.input},
            {"output", p.output},   {"metric", p.metric},   {"x_column", p.x_column},
            {"y_column", p.y_column}, {"x_index", p.x_index}, {"y_index", p.y_index},
            {"raw", p.raw},         {"title", p.title}};
}

PlotParams plot_params_from_json(const json& j) {
    PlotParams p;
    p.kind = j.at("kind").get<std::string>();
    p.input = j.at("input").get<std::string>();
    p.output = j.at("output").get<std::string>();
    p.metric = j.value("metric", std::string("R2_mean"));
    p.x_column = j.value("x_column", std::string("alpha1"));
    p.y_column = j.value("y_column", std::string("alpha2"));
    p.x_index = j.value("x_index", 0);
    p.y_index = j.value("y_index", 1);
    p.raw = j.value("raw", false);
    p.title = j.value("title", std::string());
    return p;
}

// Numeric view of a CSV cell: plain number, or a regime class name mapped to
// 0 (constant) / 1 (oscillating) / 2 (drifting); anything else is NaN.
double cell_value(const std::string& cell) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (cell == "constant") return 0.0;
    if (cell == "oscillating") return 1.0;
    if (cell == "drifting") return 2.0;
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) return std::numeric_limits<double>::quiet_NaN();
        return v;
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

int require_column(const hf::CsvTable& t, const std::string& name) {
    int idx = t.column(name);
    if (idx < 0) throw hf::ConfigError("input CSV has no column named '" + name + "'");
    return idx;
}

int run_plot(const PlotParams& p) {
    std::ostringstream svg;
    if (p.kind == "heatmap") {
        hf::CsvTable t = hf::read_csv_file(p.input);
        int xc = require_column(t, p.x_column);
        int yc = require_column(t, p.y_column);
        int mc = require_column(t, p.metric);
        std::map<std::pair<double, double>, std::pair<double, int>> cells;
        for (const auto& row : t.rows) {
            double x = cell_value(row[static_cast<std::size_t>(xc)]);
            double y = cell_value(row[static_cast<std::size_t>(yc)]);
            double v = cell_value(row[static_cast<std::size_t>(mc)]);
            if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(v)) continue;
            auto& acc = cells[{x, y}];
            acc.first += v;
            acc.second += 1;
        }
        if (cells.empty()) throw hf::ConfigError("no finite data points to plot");
        std::vector<double> xs, ys;
        for (const auto& [key, acc] : cells) {
            xs.push_back(key.first);
            ys.push_back(key.second);
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        std::vector<std::vector<double>> grid(
            xs.size(),
            std::vector<double>(ys.size(), std::numeric_limits<double>::quiet_NaN()));
        for (const auto& [key, acc] : cells) {
            auto xi = std::lower_bound(xs.begin(), xs.end(), key.first) - xs.begin();
            auto yi = std::lower_bound(ys.begin(), ys.end(), key.second) - ys.begin();
            grid[static_cast<std::size_t>(xi)][static_cast<std::size_t>(yi)] =
                acc.first / acc.second;
        }
        hf::plot::heatmap(svg, xs, ys, grid, p.title.empty() ? p.metric : p.title, p.x_column,
                          p.y_column);
    } else if (p.kind == "line") {
        hf::CsvTable t = hf::read_csv_file(p.input);
        // Line charts run against the alpha2-style column by default.
        int xc = require_column(t, p.y_column);
        int mc = require_column(t, p.metric);
        std::map<double, std::pair<double, int>> groups;
        for (const auto& row : t.rows) {
            double x = cell_value(row[static_cast<std::size_t>(xc)]);
            double v = cell_value(row[static_cast<std::size_t>(mc)]);
            if (!std::isfinite(x) || !std::isfinite(v)) continue;
            auto& acc = groups[x];
            acc.first += v;
            acc.second += 1;
        }
        if (groups.empty()) throw hf::ConfigError("no finite data points to plot");
        hf::plot::Series s;
        s.name = p.metric;
        for (const auto& [x, acc] : groups) {
            s.x.push_back(x);
            s.y.push_back(acc.first / acc.second);
        }
        hf::plot::line_chart(svg, {s}, p.title.empty() ? p.metric : p.title, p.y_column,
                             p.metric);
    } else if (p.kind == "trajectory") {
        hf::Trajectory traj = hf::read_trajectory_csv_file(p.input);
        if (p.x_index < 0 || p.x_index >= traj.phases.cols() || p.y_index < 0 ||
            p.y_index >= traj.phases.cols())
            throw hf::ConfigError("trajectory column index out of range");
        std::vector<double> x(static_cast<std::size_t>(traj.samples()));
        std::vector<double> y(static_cast<std::size_t>(traj.samples()));
        for (Eigen::Index i = 0; i < traj.samples(); ++i) {
            double a = traj.phases(i, p.x_index), b = traj.phases(i, p.y_index);
            x[static_cast<std::size_t>(i)] = p.raw ? a : std::sin(a);
            y[static_cast<std::size_t>(i)] = p.raw ? b : std::sin(b);
        }
        std::string prefix = p.raw ? "theta_" : "sin(theta_";
        std::string suffix = p.raw ? "" : ")";
        hf::plot::trajectory_projection(
            svg, x, y, p.title.empty() ? "trajectory projection" : p.title,
            prefix + std::to_string(p.x_index) + suffix,
            prefix + std::to_string(p.y_index) + suffix);
    } else {
        throw hf::ConfigError("unknown plot kind: " + p.kind);
    }
    write_text_file(p.output, svg.str());
    hf::write_json_file(p.output + ".config.json", plot_params_to_json(p));
    std::cout << "wrote " << p.output << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frustrated Kuramoto dynamics on weighted simplicial complexes"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- complex ----------------------------------------------------------
    auto* cmd_complex = app.add_subcommand("complex", "build a complex and print its summary");
    ComplexSource cx_src;
    std::string cx_output;
    add_complex_options(cmd_complex, cx_src);
    cmd_complex->add_option("--output", cx_output, "write the complex as JSON");
    cmd_complex->callback([&]() {
        hf::SimplicialComplex c = build_from_source(cx_src);
        print_complex_summary(c);
        if (!cx_output.empty()) hf::write_json_file(cx_output, hf::complex_to_json(c));
    });

    // ---- hodge -------------------------------------------------------------
    auto* cmd_hodge = app.add_subcommand("hodge", "Betti numbers and Hodge subspace dumps");
    ComplexSource hg_src;
    int hg_k = 1;
    std::string hg_dump_bases, hg_dump_operators;
    add_complex_options(cmd_hodge, hg_src);
    cmd_hodge->add_option("--k", hg_k, "order for the basis dump");
    cmd_hodge->add_option("--dump-bases", hg_dump_bases,
                          "prefix: write <prefix>.{grad,curl,harm}.csv basis rows at --k");
    cmd_hodge->add_option("--dump-operators", hg_dump_operators,
                          "prefix: write incidence/Laplacian matrices as CSV");
    cmd_hodge->callback([&]() {
        hf::SimplicialComplex c = build_from_source(hg_src);
        print_complex_summary(c);
        if (!hg_dump_bases.empty()) {
            hf::HodgeBasis basis = hf::hodge_bases(c, hg_k);
            for (auto sub : {hf::Subspace::grad, hf::Subspace::curl, hf::Subspace::harm}) {
                std::ostringstream out;
                // Rows are subspace-spanning vectors in simplex coordinates.
                hf::write_matrix_csv(out,
                                     basis.rows(sub) * basis.w_sqrt.asDiagonal());
                write_text_file(hg_dump_bases + "." + hf::subspace_name(sub) + ".csv",
                                out.str());
            }
        }
        if (!hg_dump_operators.empty()) {
            for (int k = 0; k + 1 <= c.max_order(); ++k) {
                std::ostringstream out;
                hf::write_matrix_csv(out, hf::incidence(c, k));
                write_text_file(hg_dump_operators + ".b" + std::to_string(k) + ".csv",
                                out.str());
            }
            for (int k = 0; k <= c.max_order(); ++k) {
                std::ostringstream out;
                hf::write_matrix_csv(out, hf::hodge_laplacian(c, k));
                write_text_file(hg_dump_operators + ".l" + std::to_string(k) + ".csv",
                                out.str());
            }
        }
    });

    // ---- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "integrate one trajectory and analyze it");
    ComplexSource sim_src;
    int sim_k = 1;
    double sim_a1 = 0.0, sim_a2 = 0.0;
    std::string sim_a1_file, sim_a2_file, sim_theta0_file, sim_config, sim_rhs = "consensus";
    std::uint64_t sim_seed = 0;
    double sim_tmax = 1000.0, sim_dt = 0.01, sim_window = 0.5;
    int sim_sample_every = 10;
    bool sim_lyap = false;
    std::string sim_output = "run";
    add_complex_options(cmd_sim, sim_src);
    cmd_sim->add_option("--k", sim_k, "simulated order (default 1: edge phases)");
    cmd_sim->add_option("--alpha1", sim_a1, "constant frustration at order k");
    cmd_sim->add_option("--alpha2", sim_a2, "constant coupling offset at order k+1");
    cmd_sim->add_option("--alpha1-file", sim_a1_file, "JSON array: full alpha1 cochain");
    cmd_sim->add_option("--alpha2-file", sim_a2_file, "JSON array: full alpha2 cochain");
    cmd_sim->add_option("--theta0-file", sim_theta0_file,
                        "JSON array: initial phases (default: random from --seed)");
    cmd_sim->add_option("--seed", sim_seed, "seed for random initial phases");
    cmd_sim->add_option("--t-max", sim_tmax, "integration horizon");
    cmd_sim->add_option("--dt", sim_dt, "integrator step");
    cmd_sim->add_option("--sample-every", sim_sample_every, "steps between samples");
    cmd_sim->add_option("--rhs", sim_rhs, "consensus | diffusion")
        ->check(CLI::IsMember({"consensus", "diffusion"}));
    cmd_sim->add_flag("--lyapunov", sim_lyap, "estimate largest Lyapunov exponents");
    cmd_sim->add_option("--window-fraction", sim_window, "trailing analysis window");
    cmd_sim->add_option("--output", sim_output, "output prefix (default: run)");
    cmd_sim->add_option("--config", sim_config,
                        "rerun from a persisted .config.json (other flags ignored)");
    cmd_sim->callback([&]() {
        SimulateParams p;
        if (!sim_config.empty()) {
            p = simulate_params_from_json(hf::read_json_file(sim_config));
            if (cmd_sim->count("--output") > 0) p.output = sim_output;
        } else {
            hf::SimplicialComplex c = build_from_source(sim_src);
            hf::Operators op = hf::build_operators(c, sim_k);
            p.complex_json = hf::complex_to_json(c);
            p.k = sim_k;
            p.alpha1 = sim_a1_file.empty()
                           ? Eigen::VectorXd::Constant(op.n_mid, sim_a1).eval()
                           : load_vector_file(sim_a1_file);
            p.alpha2 = sim_a2_file.empty()
                           ? Eigen::VectorXd::Constant(op.n_up, sim_a2).eval()
                           : load_vector_file(sim_a2_file);
            p.theta0 = sim_theta0_file.empty() ? hf::random_phases(op.n_mid, sim_seed)
                                               : load_vector_file(sim_theta0_file);
            p.seed = sim_seed;
            p.integrator.t_max = sim_tmax;
            p.integrator.dt = sim_dt;
            p.integrator.sample_every = sim_sample_every;
            p.rhs = sim_rhs;
            p.lyapunov = sim_lyap;
            p.window_fraction = sim_window;
            p.output = sim_output;
        }
        exit_code = run_simulate(p);
    });

    // ---- scan ----------------------------------------------------------------
    auto* cmd_scan = app.add_subcommand("scan", "sweep an (alpha1, alpha2, seed) grid");
    ComplexSource scan_src;
    int scan_k = 1, scan_a1_steps = 26, scan_a2_steps = 18, scan_seeds = 1;
    double scan_a1_min = 0.0, scan_a1_max = 2.5;
    double scan_a2_min = 0.0, scan_a2_max = std::numbers::pi / 2.0;
    std::uint64_t scan_root_seed = 0;
    double scan_tmax = 200.0, scan_dt = 0.01, scan_window = 0.5;
    int scan_sample_every = 10;
    unsigned scan_threads = 0;
    bool scan_lyap = false, scan_quiet = false;
    std::string scan_rhs = "consensus", scan_output = "scan", scan_config;
    add_complex_options(cmd_scan, scan_src);
    cmd_scan->add_option("--k", scan_k, "simulated order");
    cmd_scan->add_option("--alpha1-min", scan_a1_min);
    cmd_scan->add_option("--alpha1-max", scan_a1_max);
    cmd_scan->add_option("--alpha1-steps", scan_a1_steps, "grid points along alpha1");
    cmd_scan->add_option("--alpha2-min", scan_a2_min);
    cmd_scan->add_option("--alpha2-max", scan_a2_max);
    cmd_scan->add_option("--alpha2-steps", scan_a2_steps, "grid points along alpha2");
    cmd_scan->add_option("--seeds", scan_seeds, "initial conditions per grid point");
    cmd_scan->add_option("--root-seed", scan_root_seed, "root of the seed substreams");
    cmd_scan->add_option("--t-max", scan_tmax, "integration horizon per run");
    cmd_scan->add_option("--dt", scan_dt, "integrator step");
    cmd_scan->add_option("--sample-every", scan_sample_every, "steps between samples");
    cmd_scan->add_option("--rhs", scan_rhs, "consensus | diffusion")
        ->check(CLI::IsMember({"consensus", "diffusion"}));
    cmd_scan->add_flag("--lyapunov", scan_lyap, "estimate Lyapunov exponents per run");
    cmd_scan->add_option("--window-fraction", scan_window, "trailing analysis window");
    cmd_scan->add_option("--threads", scan_threads,
                         "worker threads (default: HODGEFLOW_THREADS or hardware)");
    cmd_scan->add_flag("--quiet", scan_quiet, "suppress progress output");
    cmd_scan->add_option("--output", scan_output, "output prefix (default: scan)");
    cmd_scan->add_option("--config", scan_config,
                         "rerun from a persisted .config.json (other flags ignored)");
    cmd_scan->callback([&]() {
        ScanParams p;
        if (!scan_config.empty()) {
            p = scan_params_from_json(hf::read_json_file(scan_config));
            if (cmd_scan->count("--output") > 0) p.output = scan_output;
            if (cmd_scan->count("--threads") > 0) p.threads = scan_threads;
        } else {
            hf::SimplicialComplex c = build_from_source(scan_src);
            p.complex_json = hf::complex_to_json(c);
            p.k = scan_k;
            p.alpha1_values = hf::linspace(scan_a1_min, scan_a1_max, scan_a1_steps);
            p.alpha2_values = hf::linspace(scan_a2_min, scan_a2_max, scan_a2_steps);
            p.seeds = scan_seeds;
            p.root_seed = scan_root_seed;
            p.integrator.t_max = scan_tmax;
            p.integrator.dt = scan_dt;
            p.integrator.sample_every = scan_sample_every;
            p.rhs = scan_rhs;
            p.lyapunov = scan_lyap;
            p.window_fraction = scan_window;
            p.threads = scan_threads;
            p.output = scan_output;
        }
        exit_code = run_scan_cmd(p, scan_quiet);
    });

    // ---- analyze ---------------------------------------------------------------
    auto* cmd_analyze = app.add_subcommand("analyze", "re-analyze a stored trajectory CSV");
    ComplexSource an_src;
    int an_k = 1;
    bool an_lyap = false;
    double an_window = 0.5;
    std::string an_input, an_output;
    add_complex_options(cmd_analyze, an_src);
    cmd_analyze->add_option("--trajectory", an_input, "trajectory CSV to analyze")->required();
    cmd_analyze->add_option("--k", an_k, "order the trajectory lives at");
    cmd_analyze->add_flag("--lyapunov", an_lyap, "estimate largest Lyapunov exponents");
    cmd_analyze->add_option("--window-fraction", an_window, "trailing analysis window");
    cmd_analyze->add_option("--output", an_output, "write the report JSON here");
    cmd_analyze->callback([&]() {
        hf::SimplicialComplex c = build_from_source(an_src);
        hf::Operators op = hf::build_operators(c, an_k);
        hf::HodgeBasis basis = hf::hodge_bases(c, an_k);
        hf::Trajectory traj = hf::read_trajectory_csv_file(an_input);
        if (traj.phases.cols() != op.n_mid)
            throw hf::DimensionError("trajectory has " + std::to_string(traj.phases.cols()) +
                                     " phase columns, complex has " +
                                     std::to_string(op.n_mid) + " simplices at order " +
                                     std::to_string(an_k));
        hf::AnalysisOptions aopt;
        aopt.thresholds.window_fraction = an_window;
        aopt.with_lyapunov = an_lyap;
        hf::AnalysisReport report = hf::analyze_trajectory(op, basis, traj, aopt);
        std::string text = hf::report_to_json(report).dump(2) + "\n";
        if (!an_output.empty()) write_text_file(an_output, text);
        std::cout << text;
    });

    // ---- plot ------------------------------------------------------------------
    auto* cmd_plot = app.add_subcommand("plot", "render scan/trajectory data as SVG");
    PlotParams plot_p;
    std::string plot_config;
    cmd_plot->add_option("--kind", plot_p.kind, "heatmap | line | trajectory");
    cmd_plot->add_option("--input", plot_p.input, "CSV produced by scan or simulate");
    cmd_plot->add_option("--output", plot_p.output, "SVG file to write");
    cmd_plot->add_option("--metric", plot_p.metric, "CSV column to render (default R2_mean)");
    cmd_plot->add_option("--x-column", plot_p.x_column, "heatmap x column (default alpha1)");
    cmd_plot->add_option("--y-column", plot_p.y_column,
                         "heatmap y / line x column (default alpha2)");
    cmd_plot->add_option("--x-col", plot_p.x_index, "trajectory: phase index on x");
    cmd_plot->add_option("--y-col", plot_p.y_index, "trajectory: phase index on y");
    cmd_plot->add_flag("--raw", plot_p.raw, "trajectory: plot raw phases, not sines");
    cmd_plot->add_option("--title", plot_p.title, "plot title");
    cmd_plot->add_option("--config", plot_config,
                         "rerun from a persisted .config.json (other flags ignored)");
    cmd_plot->callback([&]() {
        PlotParams p = plot_p;
        if (!plot_config.empty()) {
            p = plot_params_from_json(hf::read_json_file(plot_config));
            if (cmd_plot->count("--output") > 0) p.output = plot_p.output;
        } else {
            if (p.kind.empty() || p.input.empty() || p.output.empty())
                throw hf::ConfigError("plot needs --kind, --input and --output");
        }
        exit_code = run_plot(p);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::ComplexError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::WeightError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::OrderError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::IndexError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const hf::IntegrationError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 3;
    }
    return exit_code;
}
