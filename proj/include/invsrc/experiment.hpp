#pragma once

// Rod-cooling study driver: reconstruct the source that cools the rod from
// phi(x) = x^3 (pi - x)^3 to zero, sweep the series truncation, verify each
// reconstruction with the finite-difference oracle, and emit CSV tables,
// optional SVG plots, and a JSON manifest.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

#include <json.hpp>

#include "invsrc/forward_oracle.hpp"
#include "invsrc/inverse_solver.hpp"
#include "invsrc/operator_catalog.hpp"

namespace invsrc {

struct ExperimentConfig {
    OperatorSpec op = OperatorSpec::involution(0.9);
    FractionalOrder alpha{1.0};
    double horizon = 5.0;
    std::vector<std::size_t> truncations{7, 10, 20};
    std::vector<double> snapshot_times{0.5, 2.5, 4.5};
    std::size_t space_points = 401;
    std::size_t time_steps = 4000;
    std::filesystem::path output_dir = "out";
    bool emit_plots = false;
    double verify_tolerance = 0.0; // 0 = pick by alpha: 5e-3 at alpha = 1, 1e-2 otherwise
};

struct ManifestEntry {
    std::string filename;
    std::string role;
    std::string checksum; // crc32, hex
};

struct Manifest {
    std::vector<ManifestEntry> files;
    std::filesystem::path manifest_path;
};

struct EnergyRow {
    double epsilon = 0.0;
    double f_l2 = 0.0;                    // ||f||_2 of the reconstructed source
    std::vector<double> u_l2;             // ||u(.,t)||_2 of the cooled solution per snapshot
    std::vector<double> free_cooling_l2;  // ||u(.,t)||_2 with f = 0 per snapshot
    double verify_error = 0.0;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string crc32_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot reopen " + path.string() + " for checksumming");
    uLong crc = ::crc32(0L, Z_NULL, 0);
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
    char out[16];
    std::snprintf(out, sizeof(out), "%08lx", static_cast<unsigned long>(crc));
    return out;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path, std::ios::binary); // binary: byte-identical output across platforms
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << fmt17(columns[c][r]);
        out << "\n";
    }
}

// Minimal static SVG: one polyline per series over a fixed viewport.
inline void write_svg(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series,
                      const std::string& title) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#e8b310", "#2ca02c", "#9467bd", "#8c564b"};
    const double width = 640.0, height = 420.0, margin = 48.0;
    double ymin = 0.0, ymax = 0.0;
    for (const auto& [name, ys] : series)
        for (double v : ys) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin) ymax = ymin + 1.0;
    const double xmin = x.front(), xmax = x.back();
    auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(0.0 < ymin ? ymin : (0.0 > ymax ? ymax : 0.0)) << "\" x2=\""
        << px(xmax) << "\" y2=\"" << py(0.0 < ymin ? ymin : (0.0 > ymax ? ymax : 0.0))
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(xmin) << "\" y2=\"" << py(ymax)
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    std::size_t idx = 0;
    for (const auto& [name, ys] : series) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[idx % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out << ' ';
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f", px(x[i]), py(ys[i]));
            out << buf;
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16.0 * static_cast<double>(idx)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << palette[idx % 6] << "\">" << name
            << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

inline FieldSample rod_initial_state(const QuadratureRule& quad) {
    return sample(quad, [](double x) { return x * x * x * (M_PI - x) * (M_PI - x) * (M_PI - x); });
}

// Closed-form image of the rod profile under L u = -u'' + eps u''(pi - x).
// The profile is symmetric about pi/2, so the reflected second derivative
// equals the plain one and L phi = (eps - 1) phi''.
inline FieldSample rod_initial_lphi(const QuadratureRule& quad, double eps) {
    return sample(quad, [eps](double x) {
        const double pp = 6.0 * M_PI * M_PI * M_PI * x - 36.0 * M_PI * M_PI * x * x + 60.0 * M_PI * x * x * x -
                          30.0 * x * x * x * x;
        return (eps - 1.0) * pp;
    });
}

inline double experiment_epsilon(const ExperimentConfig& cfg) {
    switch (cfg.op.kind) {
    case OperatorKind::involution:
        return cfg.op.epsilon;
    case OperatorKind::dirichlet_laplacian:
        if (std::abs(cfg.op.a) > 1e-14 || std::abs(cfg.op.b - M_PI) > 1e-12)
            throw std::invalid_argument("run_experiment: the rod study needs the interval (0, pi)");
        return 0.0;
    default:
        throw std::invalid_argument("run_experiment: the rod study supports the involution family on (0, pi)");
    }
}

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.truncations.empty()) throw std::invalid_argument("config: truncations must not be empty");
    if (!std::is_sorted(cfg.truncations.begin(), cfg.truncations.end()) ||
        std::adjacent_find(cfg.truncations.begin(), cfg.truncations.end()) != cfg.truncations.end())
        throw std::invalid_argument("config: truncations must be strictly increasing");
    if (cfg.truncations.front() < 1) throw std::invalid_argument("config: truncations must be >= 1");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
    for (double t : cfg.snapshot_times)
        if (t < 0.0 || t > cfg.horizon)
            throw std::invalid_argument("config: snapshot times must lie in [0, T]");
    experiment_epsilon(cfg);
}

inline std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    return buf;
}

} // namespace detail

/// Snapshot times actually emitted: t = 0 always comes first.
inline std::vector<double> emitted_snapshots(const ExperimentConfig& cfg) {
    std::vector<double> times{0.0};
    for (double t : cfg.snapshot_times)
        if (t != 0.0) times.push_back(t);
    return times;
}

inline Manifest run_experiment(const ExperimentConfig& cfg) {
    detail::validate(cfg);
    const double eps = detail::experiment_epsilon(cfg);
    std::filesystem::create_directories(cfg.output_dir);

    const EigenSystem sys = make_operator(cfg.op);
    const FieldSample phi = detail::rod_initial_state(sys.quadrature);
    const FieldSample psi(sys.quadrature.size(), 0.0);
    const FieldSample lphi = detail::rod_initial_lphi(sys.quadrature, eps);
    const ProblemData data{phi, psi, cfg.horizon, cfg.alpha};
    const std::vector<double> times = emitted_snapshots(cfg);
    const double tol = cfg.verify_tolerance > 0.0 ? cfg.verify_tolerance : (cfg.alpha.value() == 1.0 ? 5e-3 : 1e-2);

    Manifest manifest;
    auto record = [&](const std::filesystem::path& p, const std::string& role) {
        manifest.files.push_back({p.filename().string(), role, detail::crc32_hex(p)});
    };

    const std::string tag = "eps" + detail::eps_tag(eps);
    std::vector<std::vector<double>> verify_cols(6);
    for (std::size_t l : cfg.truncations) {
        const InverseSolution sol = solve(sys, data, l);
        const FieldSample f_field = evaluate_f(sol, lphi);

        std::vector<std::string> header{"x"};
        std::vector<std::vector<double>> cols{sys.quadrature.nodes};
        for (double t : times) {
            header.push_back("u_t" + detail::fmt17(t));
            cols.push_back(evaluate_u(sol, t).values);
        }
        const auto upath = cfg.output_dir / ("u_" + tag + "_l" + std::to_string(l) + ".csv");
        detail::write_csv(upath, header, cols);
        record(upath, "u-snapshots");

        const auto fpath = cfg.output_dir / ("f_" + tag + "_l" + std::to_string(l) + ".csv");
        detail::write_csv(fpath, {"x", "f"}, {sys.quadrature.nodes, f_field.values});
        record(fpath, "source");

        VerificationReport rep;
        try {
            rep = verify_reconstruction(eps, data, sol, SpaceGrid(cfg.space_points), TimeGrid(cfg.time_steps, cfg.horizon),
                                        tol, &f_field);
        } catch (const std::exception& e) {
            throw std::runtime_error("verification failed at (l=" + std::to_string(l) + ", eps=" + detail::eps_tag(eps) +
                                     "): " + e.what());
        }
        verify_cols[0].push_back(eps);
        verify_cols[1].push_back(static_cast<double>(l));
        verify_cols[2].push_back(cfg.alpha.value());
        verify_cols[3].push_back(rep.terminal_rel_error);
        verify_cols[4].push_back(rep.tolerance);
        verify_cols[5].push_back(rep.pass ? 1.0 : 0.0);

        if (cfg.emit_plots) {
            std::vector<std::pair<std::string, std::vector<double>>> useries;
            for (std::size_t i = 0; i < times.size(); ++i)
                useries.emplace_back("t=" + detail::fmt17(times[i]).substr(0, 4), cols[i + 1]);
            const auto usvg = cfg.output_dir / ("u_" + tag + "_l" + std::to_string(l) + ".svg");
            detail::write_svg(usvg, sys.quadrature.nodes, useries,
                              "u(x,t), eps=" + detail::eps_tag(eps) + ", l=" + std::to_string(l));
            record(usvg, "plot");
            const auto fsvg = cfg.output_dir / ("f_" + tag + "_l" + std::to_string(l) + ".svg");
            detail::write_svg(fsvg, sys.quadrature.nodes, {{"f", f_field.values}},
                              "f(x), eps=" + detail::eps_tag(eps) + ", l=" + std::to_string(l));
            record(fsvg, "plot");
        }
    }

    const auto vpath = cfg.output_dir / ("verification_" + tag + ".csv");
    detail::write_csv(vpath, {"epsilon", "l", "alpha", "terminal_rel_error", "tolerance", "pass"}, verify_cols);
    record(vpath, "verification");

    manifest.manifest_path = cfg.output_dir / ("manifest_" + tag + ".json");
    nlohmann::json doc;
    doc["files"] = nlohmann::json::array();
    for (const auto& entry : manifest.files)
        doc["files"].push_back({{"filename", entry.filename}, {"role", entry.role}, {"checksum", entry.checksum}});
    std::ofstream mout(manifest.manifest_path, std::ios::binary);
    mout << doc.dump(2) << "\n";
    return manifest;
}

/// Side-by-side energy comparison across involution strengths: the source
/// norm, the cooled-solution norms, and the free-cooling norms per snapshot.
inline std::vector<EnergyRow> compare_energy(const ExperimentConfig& cfg, const std::vector<double>& epsilons,
                                             std::size_t l) {
    if (epsilons.size() < 2) throw std::invalid_argument("compare_energy: needs at least two epsilon values");
    if (l < 1) throw std::invalid_argument("compare_energy: mode count must be >= 1");
    detail::validate(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const std::vector<double> times = emitted_snapshots(cfg);
    const double tol = cfg.verify_tolerance > 0.0 ? cfg.verify_tolerance : (cfg.alpha.value() == 1.0 ? 5e-3 : 1e-2);

    std::vector<EnergyRow> rows;
    for (double eps : epsilons) {
        ExperimentConfig local = cfg;
        local.op = OperatorSpec::involution(eps, cfg.op.grid_nodes);
        const EigenSystem sys = make_operator(local.op);
        const FieldSample phi = detail::rod_initial_state(sys.quadrature);
        const FieldSample psi(sys.quadrature.size(), 0.0);
        const FieldSample lphi = detail::rod_initial_lphi(sys.quadrature, eps);
        const FieldSample zero(sys.quadrature.size(), 0.0);
        const ProblemData data{phi, psi, cfg.horizon, cfg.alpha};

        const InverseSolution sol = solve(sys, data, l);
        const FieldSample f_field = evaluate_f(sol, lphi);
        EnergyRow row;
        row.epsilon = eps;
        row.f_l2 = l2_norm(sys.quadrature, f_field);
        const auto free_states = forward_modal(sys, phi, zero, cfg.alpha, cfg.horizon, l, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            row.u_l2.push_back(l2_norm(sys.quadrature, evaluate_u(sol, times[i])));
            row.free_cooling_l2.push_back(l2_norm(sys.quadrature, free_states[i]));
        }
        row.verify_error = verify_reconstruction(eps, data, sol, SpaceGrid(cfg.space_points),
                                                 TimeGrid(cfg.time_steps, cfg.horizon), tol, &f_field)
                               .terminal_rel_error;
        rows.push_back(std::move(row));
    }

    std::vector<std::string> header{"epsilon", "f_l2"};
    for (double t : times) header.push_back("u_l2_t" + detail::fmt17(t));
    for (double t : times) header.push_back("ufree_l2_t" + detail::fmt17(t));
    header.push_back("verify_rel_error");
    std::vector<std::vector<double>> cols(header.size());
    for (const auto& row : rows) {
        std::size_t c = 0;
        cols[c++].push_back(row.epsilon);
        cols[c++].push_back(row.f_l2);
        for (double v : row.u_l2) cols[c++].push_back(v);
        for (double v : row.free_cooling_l2) cols[c++].push_back(v);
        cols[c++].push_back(row.verify_error);
    }
    detail::write_csv(cfg.output_dir / "energy_compare.csv", header, cols);
    return rows;
}

} // namespace invsrc
