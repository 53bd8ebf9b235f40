#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgeflow/analysis.hpp"
#include "hodgeflow/complex.hpp"
#include "hodgeflow/dynamics.hpp"
#include "hodgeflow/errors.hpp"

namespace hodgeflow {

/** Shortest round-trippable decimal rendering of a double. */
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Complex <-> JSON
//
// Schema: one entry per simplex order, all keyed by the order as a string.
//   {
//     "simplices":    {"0": [[0],[1],[2]], "1": [[0,1],[0,2]], ...},
//     "orientations": {"1": [1,-1], ...},
//     "weights":      {"0": [1.0,1.0,1.0], ...}
//   }
// Simplices are stored in the library's canonical (lexicographic) order, so
// serializing a loaded complex reproduces the input byte for byte.
// ---------------------------------------------------------------------------

inline nlohmann::json complex_to_json(const SimplicialComplex& c) {
    nlohmann::json simplices = nlohmann::json::object();
    nlohmann::json orientations = nlohmann::json::object();
    nlohmann::json weights = nlohmann::json::object();
    for (int k = 0; k <= c.max_order(); ++k) {
        std::string key = std::to_string(k);
        nlohmann::json verts = nlohmann::json::array();
        nlohmann::json orient = nlohmann::json::array();
        for (int i = 0; i < c.count(k); ++i) {
            const Simplex& s = c.simplex(k, i);
            verts.push_back(s.vertices);
            orient.push_back(s.orientation);
        }
        simplices[key] = std::move(verts);
        orientations[key] = std::move(orient);
        const Eigen::VectorXd& w = c.weights[static_cast<std::size_t>(k)];
        weights[key] = std::vector<double>(w.data(), w.data() + w.size());
    }
    return {{"simplices", std::move(simplices)},
            {"orientations", std::move(orientations)},
            {"weights", std::move(weights)}};
}

inline SimplicialComplex complex_from_json(const nlohmann::json& j) {
    if (!j.contains("simplices")) throw ComplexError("missing 'simplices' object");
    const auto& simplices = j.at("simplices");

    // Collect per-order simplex lists, then rebuild through the normal
    // constructor path so every invariant is re-validated.
    int max_order = -1;
    for (auto it = simplices.begin(); it != simplices.end(); ++it)
        max_order = std::max(max_order, std::stoi(it.key()));
    if (max_order < 0) throw ComplexError("complex has no simplices");

    std::vector<std::vector<std::vector<int>>> levels(max_order + 1);
    for (auto it = simplices.begin(); it != simplices.end(); ++it) {
        int k = std::stoi(it.key());
        for (const auto& v : it.value()) {
            auto verts = v.get<std::vector<int>>();
            // Stored vertex lists carry sign semantics through the
            // orientation array, so they must already be ascending.
            if (!std::is_sorted(verts.begin(), verts.end()))
                throw ComplexError("stored simplices must list vertices in ascending order");
            levels[k].push_back(std::move(verts));
        }
    }

    // Feed every stored simplex in as its own tuple: downward closure adds
    // nothing new if the file was closed, and repairs the file if it wasn't.
    SimplicialComplex c = build_complex(levels);

    if (j.contains("orientations")) {
        for (auto it = j.at("orientations").begin(); it != j.at("orientations").end(); ++it) {
            int k = std::stoi(it.key());
            const auto& arr = it.value();
            if (static_cast<int>(arr.size()) != static_cast<int>(levels[k].size()))
                throw ComplexError("orientation list length mismatch at order " +
                                   std::to_string(k));
            for (std::size_t i = 0; i < arr.size(); ++i) {
                int idx = c.index_of(k, levels[k][i]);
                int o = arr[i].get<int>();
                if (o != 1 && o != -1)
                    throw ComplexError("orientation entries must be +1 or -1");
                if (o == -1) c = flip_orientation(c, k, idx);
            }
        }
    }
    if (j.contains("weights")) {
        for (auto it = j.at("weights").begin(); it != j.at("weights").end(); ++it) {
            int k = std::stoi(it.key());
            std::vector<double> w = it.value().get<std::vector<double>>();
            // Weights are listed in file order; map them to canonical order.
            Eigen::VectorXd wk = c.weights[static_cast<std::size_t>(k)];
            if (static_cast<int>(w.size()) != static_cast<int>(levels[k].size()))
                throw ComplexError("weight list length mismatch at order " + std::to_string(k));
            for (std::size_t i = 0; i < w.size(); ++i)
                wk[c.index_of(k, levels[k][i])] = w[i];
            c.set_weights(k, wk);
        }
    }
    return c;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

// ---------------------------------------------------------------------------
// Trajectory <-> CSV  (header "t,theta_0,...", full double precision)
// ---------------------------------------------------------------------------

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    for (Eigen::Index c = 0; c < traj.phases.cols(); ++c) out << ",theta_" << c;
    out << '\n';
    for (Eigen::Index r = 0; r < traj.samples(); ++r) {
        out << format_double(traj.times[r]);
        for (Eigen::Index c = 0; c < traj.phases.cols(); ++c)
            out << ',' << format_double(traj.phases(r, c));
        out << '\n';
    }
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_trajectory_csv(out, traj);
}

inline Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty trajectory file");
    std::size_t cols = std::count(line.begin(), line.end(), ',');
    if (cols == 0) throw ConfigError("trajectory header has no phase columns");

    std::vector<double> times;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != cols + 1) throw ConfigError("ragged trajectory row");
        times.push_back(row[0]);
        flat.insert(flat.end(), row.begin() + 1, row.end());
    }
    Trajectory traj;
    traj.times = Eigen::Map<Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
    traj.phases =
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            flat.data(), static_cast<Eigen::Index>(times.size()),
            static_cast<Eigen::Index>(cols));
    return traj;
}

inline Trajectory read_trajectory_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    return read_trajectory_csv(in);
}

// ---------------------------------------------------------------------------
// Matrix -> CSV (operator dumps)
// ---------------------------------------------------------------------------

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Generic CSV table (comma-separated, no quoting — matches our own writers)
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            cells.resize(t.header.size());
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw ConfigError("empty CSV input");
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    return read_csv(in);
}

// ---------------------------------------------------------------------------
// Analysis report JSON
// ---------------------------------------------------------------------------

inline nlohmann::json regime_to_json(const RegimeClass& rc) {
    return {{"class", regime_name(rc.kind)},
            {"slope", rc.slope},
            {"slope_dominant", rc.slope_dominant},
            {"residual_std", rc.residual_std}};
}

inline nlohmann::json report_to_json(const AnalysisReport& rep) {
    nlohmann::json j = {{"R2_mean", rep.r2.mean},
                        {"R2_std", rep.r2.std},
                        {"regime",
                         {{"grad", regime_to_json(rep.grad)},
                          {"curl", regime_to_json(rep.curl)},
                          {"harm", regime_to_json(rep.harm)}}}};
    if (rep.has_lyapunov) {
        j["lyapunov"] = {{"mean", rep.lyapunov.mean},
                         {"q25", rep.lyapunov.q25},
                         {"q75", rep.lyapunov.q75},
                         {"constant_signals", rep.lyapunov.constant_signals}};
    } else {
        j["lyapunov"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Run configuration sidecar
// ---------------------------------------------------------------------------

inline nlohmann::json settings_to_json(const IntegratorSettings& s) {
    return {{"t_max", s.t_max}, {"dt", s.dt}, {"sample_every", s.sample_every}};
}

inline IntegratorSettings settings_from_json(const nlohmann::json& j) {
    IntegratorSettings s;
    if (j.contains("t_max")) s.t_max = j.at("t_max").get<double>();
    if (j.contains("dt")) s.dt = j.at("dt").get<double>();
    if (j.contains("sample_every")) s.sample_every = j.at("sample_every").get<int>();
    s.validate();
    return s;
}

}  // namespace hodgeflow
