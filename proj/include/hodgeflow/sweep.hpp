#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "hodgeflow/analysis.hpp"
#include "hodgeflow/complex.hpp"
#include "hodgeflow/dynamics.hpp"
#include "hodgeflow/errors.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/io.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rng.hpp"

namespace hodgeflow {

/** Inclusive uniform grid helper: n values from lo to hi. */
inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

struct ScanConfig {
    std::vector<double> alpha1;  // frustration at the simulated order
    std::vector<double> alpha2;  // frustration one order up
    int seeds = 1;               // independent initial conditions per grid cell
    std::uint64_t root_seed = 0;
    int k = 1;                   // simulated order
    RhsKind kind = RhsKind::consensus;
    IntegratorSettings integrator;
    AnalysisOptions analysis;

    void validate() const {
        if (alpha1.empty() || alpha2.empty()) throw ConfigError("scan grid is empty");
        if (seeds < 1) throw ConfigError("scan needs at least one seed per cell");
        integrator.validate();
    }
};

struct ScanRecord {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    int seed = 0;  // seed index within the cell
    AnalysisReport report;
    bool ok = false;
    std::string error;  // populated when !ok
};

/**
 * Number of worker threads: the HODGEFLOW_THREADS environment variable if it
 * parses to a positive integer, otherwise the hardware concurrency (at least
 * one either way).
 */
inline unsigned scan_thread_count() {
    if (const char* env = std::getenv("HODGEFLOW_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 4096) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/**
 * Runs the full (alpha1 x alpha2 x seed) grid and returns one record per
 * combination, ordered by (alpha1 index, alpha2 index, seed index). Each task
 * draws its initial phases from a seed derived from (root_seed, i, j, s), so
 * results are bit-identical regardless of how many workers execute them.
 * A task that throws is captured in its record instead of aborting the scan.
 */
inline std::vector<ScanRecord> run_scan(
    const SimplicialComplex& c, const ScanConfig& cfg, unsigned threads = 0,
    const std::function<void(std::size_t, std::size_t)>& progress = {}) {
    cfg.validate();
    const Operators op = build_operators(c, cfg.k);
    const HodgeBasis basis = hodge_bases(c, cfg.k);
    if (threads == 0) threads = scan_thread_count();

    const std::size_t n1 = cfg.alpha1.size(), n2 = cfg.alpha2.size(),
                      ns = static_cast<std::size_t>(cfg.seeds);
    const std::size_t total = n1 * n2 * ns;
    std::vector<ScanRecord> records(total);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            std::size_t i = idx / (n2 * ns);
            std::size_t j = (idx / ns) % n2;
            std::size_t s = idx % ns;

            ScanRecord& rec = records[idx];
            rec.alpha1 = cfg.alpha1[i];
            rec.alpha2 = cfg.alpha2[j];
            rec.seed = static_cast<int>(s);
            try {
                Frustration fr = Frustration::uniform(op, rec.alpha1, rec.alpha2);
                Eigen::VectorXd theta0 = random_phases(
                    op.n_mid, substream_seed(cfg.root_seed, static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(j),
                                             static_cast<std::uint64_t>(s)));
                Trajectory traj = integrate(op, fr, theta0, cfg.integrator, cfg.kind);
                rec.report = analyze_trajectory(op, basis, traj, cfg.analysis);
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
            std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, total);
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

namespace detail {

inline std::string sanitize_csv(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return s;
}

}  // namespace detail

/**
 * One CSV row per scan record, in scan order. Lyapunov columns are empty when
 * the scan did not request exponents; all numeric cells of a failed run are
 * empty and its status carries the error text.
 */
inline void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
    out << "alpha1,alpha2,seed,R2_mean,R2_std,grad_class,grad_slope,curl_class,curl_slope,"
           "harm_class,harm_slope,lyap_mean,lyap_q25,lyap_q75,status\n";
    for (const ScanRecord& r : records) {
        out << format_double(r.alpha1) << ',' << format_double(r.alpha2) << ',' << r.seed << ',';
        if (r.ok) {
            const AnalysisReport& rep = r.report;
            out << format_double(rep.r2.mean) << ',' << format_double(rep.r2.std) << ','
                << regime_name(rep.grad.kind) << ',' << format_double(rep.grad.slope) << ','
                << regime_name(rep.curl.kind) << ',' << format_double(rep.curl.slope) << ','
                << regime_name(rep.harm.kind) << ',' << format_double(rep.harm.slope) << ',';
            if (rep.has_lyapunov)
                out << format_double(rep.lyapunov.mean) << ',' << format_double(rep.lyapunov.q25)
                    << ',' << format_double(rep.lyapunov.q75) << ',';
            else
                out << ",,,";
            out << "ok\n";
        } else {
            out << ",,,,,,,,,,,error: " << detail::sanitize_csv(r.error) << '\n';
        }
    }
}

/** Per-cell aggregate across seeds (numbers from successful runs only). */
struct CellAggregate {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    int runs = 0;
    int failed = 0;
    double r2_mean = 0.0;  // mean over seeds of the per-run means
    double r2_std = 0.0;   // population std of the per-run means across seeds
    double drifting_grad = 0.0;  // fraction of successful runs drifting
    double drifting_curl = 0.0;
    double drifting_harm = 0.0;
    double lyap_mean = 0.0;  // mean over seeds (0 when exponents were off)
};

inline std::vector<CellAggregate> aggregate_scan(const std::vector<ScanRecord>& records,
                                                 int seeds) {
    if (seeds < 1) throw ConfigError("aggregation needs the per-cell seed count");
    if (records.size() % static_cast<std::size_t>(seeds) != 0)
        throw ConfigError("record count is not a multiple of the seed count");
    std::vector<CellAggregate> cells;
    cells.reserve(records.size() / static_cast<std::size_t>(seeds));
    for (std::size_t base = 0; base < records.size(); base += static_cast<std::size_t>(seeds)) {
        CellAggregate cell;
        cell.alpha1 = records[base].alpha1;
        cell.alpha2 = records[base].alpha2;
        std::vector<double> r2s;
        for (int s = 0; s < seeds; ++s) {
            const ScanRecord& r = records[base + static_cast<std::size_t>(s)];
            ++cell.runs;
            if (!r.ok) {
                ++cell.failed;
                continue;
            }
            r2s.push_back(r.report.r2.mean);
            if (r.report.grad.kind == RegimeKind::drifting) cell.drifting_grad += 1.0;
            if (r.report.curl.kind == RegimeKind::drifting) cell.drifting_curl += 1.0;
            if (r.report.harm.kind == RegimeKind::drifting) cell.drifting_harm += 1.0;
            if (r.report.has_lyapunov) cell.lyap_mean += r.report.lyapunov.mean;
        }
        const double n_ok = static_cast<double>(cell.runs - cell.failed);
        if (n_ok > 0) {
            double mean = 0.0;
            for (double v : r2s) mean += v;
            mean /= n_ok;
            double var = 0.0;
            for (double v : r2s) var += (v - mean) * (v - mean);
            cell.r2_mean = mean;
            cell.r2_std = std::sqrt(var / n_ok);
            cell.drifting_grad /= n_ok;
            cell.drifting_curl /= n_ok;
            cell.drifting_harm /= n_ok;
            cell.lyap_mean /= n_ok;
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace hodgeflow
