#pragma once
/**
 * @file regime.hpp
 * @brief Closed-form regime classification and (rho, v) grid sweeps with CSV/SVG export.
 *
 * Every predicate uses the closed-region convention: a point within 1e-12 of
 * a boundary counts as inside the region.
 */

#include "conic_defense/adversary.hpp"
#include "conic_defense/geometry.hpp"
#include "conic_defense/io.hpp"
#include "conic_defense/policies.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace conic_defense {

inline constexpr double kRegimeTol = 1e-12;

struct RegimeClassification {
    bool valid{false};  ///< false for grid cells with rho <= r; every flag is then false
    bool thm1_impossible{false};
    bool thm2_at_least_2{false};
    bool sweep_1_competitive{false};
    bool concac_2_competitive{false};
    bool snp_feasible{false};
    std::optional<double> snp_ratio;
    std::optional<int> snp_n_s;
};

/// No algorithm captures every intruder: the corner-to-corner time exceeds (1 - rho)/v.
inline bool thm1_condition(const ProblemParams& p) {
    const auto tr = min_traverse_time(p);
    if (tr.degenerate) return false;
    return tr.time >= (1.0 - p.rho) / p.v - kRegimeTol;
}

inline RegimeClassification classify(const ProblemParams& p, SnpFeasibilityForm form = SnpFeasibilityForm::body) {
    RegimeClassification c;
    if (!params_valid(p)) return c;
    c.valid = true;
    c.thm1_impossible = thm1_condition(p);
    c.thm2_at_least_2 = (1.0 - p.rho) / p.v <= thm2_quantities(p).leg_time + kRegimeTol;
    const Interval sw = sweep_interval_raw(p);
    c.sweep_1_competitive = sw.lo <= sw.hi + kRegimeTol;
    const Interval cc = concac_interval_raw(p);
    c.concac_2_competitive = cc.lo <= cc.hi + kRegimeTol;
    const auto part = snp_partition(p);
    c.snp_n_s = part.n_s;
    c.snp_feasible = part.resting_radius <= 1.0 + kRegimeTol && snp_feasible(p, form);
    if (c.snp_feasible) c.snp_ratio = part.ratio_bound;
    return c;
}

struct GridCell {
    double rho{};
    double v{};
    RegimeClassification cls;
};

struct Range {
    double lo{0.0};
    double hi{1.0};
};

/// Worker count: CONIC_DEFENSE_THREADS if set and positive, else hardware concurrency.
inline unsigned regime_threads() {
    if (const char* env = std::getenv("CONIC_DEFENSE_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Row-major over rho (outer) then v; cell centers (i + 0.5)/N of each range.
inline std::vector<GridCell> sweep_grid(double theta, double r, Range rho_range, Range v_range, int resolution,
                                        SnpFeasibilityForm form = SnpFeasibilityForm::body,
                                        std::optional<unsigned> threads = std::nullopt) {
    if (resolution < 2) throw ValidationError("grid resolution must be at least 2");
    auto inside = [](const Range& g) { return g.lo >= 0.0 && g.hi <= 1.0 && g.lo < g.hi; };
    if (!inside(rho_range) || !inside(v_range)) throw ValidationError("grid ranges must lie within [0, 1]");
    const auto n = static_cast<std::size_t>(resolution);
    std::vector<GridCell> cells(n * n);
    auto center = [&](const Range& g, std::size_t i) { return g.lo + (g.hi - g.lo) * (i + 0.5) / n; };
    auto row = [&](std::size_t i) {
        const double rho = center(rho_range, i);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = center(v_range, j);
            cells[i * n + j] = {rho, v, classify({theta, rho, v, r}, form)};
        }
    };
    const unsigned workers = std::min<unsigned>(threads.value_or(regime_threads()), static_cast<unsigned>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) row(i);
        return cells;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) row(i);
        });
    for (auto& t : pool) t.join();
    return cells;
}

inline std::string regime_csv(const std::vector<GridCell>& cells) {
    std::ostringstream os;
    os << "rho,v,thm1_impossible,thm2_ge2,sweep1,concac2,snp_feasible,snp_ns,snp_ratio\n";
    for (const auto& c : cells) {
        const auto& k = c.cls;
        os << format_number(c.rho, 12) << ',' << format_number(c.v, 12) << ',' << k.thm1_impossible << ','
           << k.thm2_at_least_2 << ',' << k.sweep_1_competitive << ',' << k.concac_2_competitive << ','
           << k.snp_feasible << ',';
        if (k.snp_n_s) os << *k.snp_n_s;
        os << ',';
        if (k.snp_ratio) os << format_number(*k.snp_ratio, 12);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

struct Layer {
    const char* label;
    const char* color;
    bool (*flag)(const RegimeClassification&);
};

inline const std::vector<Layer>& regime_layers() {
    static const std::vector<Layer> layers{
        {"no finite ratio", "#d62728", [](const RegimeClassification& c) { return c.thm1_impossible; }},
        {"ratio at least 2", "#ff7f0e", [](const RegimeClassification& c) { return c.thm2_at_least_2; }},
        {"SNP", "#9467bd", [](const RegimeClassification& c) { return c.snp_feasible; }},
        {"ConCaC 2-competitive", "#1f77b4", [](const RegimeClassification& c) { return c.concac_2_competitive; }},
        {"sweep 1-competitive", "#2ca02c", [](const RegimeClassification& c) { return c.sweep_1_competitive; }},
    };
    return layers;
}

}  // namespace detail

/// Layered filled regions plus boundary polylines on [0,1] x [0,1] axes (rho right, v up).
inline std::string regime_svg(const std::vector<GridCell>& cells, int resolution, double theta, double r) {
    const auto n = static_cast<std::size_t>(resolution);
    if (cells.size() != n * n) throw ValidationError("cell count does not match the grid resolution");
    constexpr double margin = 60.0, side = 500.0;
    auto px = [&](double rho) { return margin + rho * side; };
    auto py = [&](double v) { return margin + (1.0 - v) * side; };
    auto f = [](double x) { return format_number(x, 6); };

    std::vector<double> rho_edge(n + 1), v_edge(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double half_r = i + 1 < n ? 0.5 * (cells[(i + 1) * n].rho - cells[i * n].rho)
                                        : 0.5 * (cells[i * n].rho - cells[(i - 1) * n].rho);
        const double half_v = i + 1 < n ? 0.5 * (cells[i + 1].v - cells[i].v) : 0.5 * (cells[i].v - cells[i - 1].v);
        rho_edge[i] = cells[i * n].rho - half_r;
        v_edge[i] = cells[i].v - half_v;
        if (i + 1 == n) {
            rho_edge[n] = cells[i * n].rho + half_r;
            v_edge[n] = cells[i].v + half_v;
        }
    }

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(2 * margin + side + 200) << "\" height=\""
       << f(2 * margin + side) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << f(margin) << "\" y=\"30\" font-size=\"16\">theta = " << f(theta) << ", r = " << f(r)
       << "</text>\n";

    const auto& layers = detail::regime_layers();
    for (const auto& layer : layers) {
        os << "<g fill=\"" << layer.color << "\" fill-opacity=\"0.35\" stroke=\"none\">\n";
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = 0;
            while (j < n) {
                if (!layer.flag(cells[i * n + j].cls)) {
                    ++j;
                    continue;
                }
                std::size_t k = j;
                while (k < n && layer.flag(cells[i * n + k].cls)) ++k;
                os << "<rect x=\"" << f(px(rho_edge[i])) << "\" y=\"" << f(py(v_edge[k])) << "\" width=\""
                   << f(px(rho_edge[i + 1]) - px(rho_edge[i])) << "\" height=\"" << f(py(v_edge[j]) - py(v_edge[k]))
                   << "\"/>\n";
                j = k;
            }
        }
        os << "</g>\n";
    }

    // boundary polylines: the k-th flag transition of each column joined across columns
    for (const auto& layer : layers) {
        std::vector<std::vector<double>> transitions(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                if (layer.flag(cells[i * n + j].cls) != layer.flag(cells[i * n + j - 1].cls))
                    transitions[i].push_back(v_edge[j]);
        std::size_t depth = 0;
        for (const auto& t : transitions) depth = std::max(depth, t.size());
        for (std::size_t k = 0; k < depth; ++k) {
            std::string points;
            auto flush = [&] {
                if (points.find(' ') != std::string::npos)
                    os << "<polyline fill=\"none\" stroke=\"" << layer.color << "\" stroke-width=\"1.5\" points=\""
                       << points << "\"/>\n";
                points.clear();
            };
            for (std::size_t i = 0; i < n; ++i) {
                if (k >= transitions[i].size()) {
                    flush();
                    continue;
                }
                if (!points.empty()) points += ' ';
                points += f(px(cells[i * n].rho)) + "," + f(py(transitions[i][k]));
            }
            flush();
        }
    }

    // axes and legend
    os << "<rect x=\"" << f(margin) << "\" y=\"" << f(margin) << "\" width=\"" << f(side) << "\" height=\"" << f(side)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 10; ++t) {
        const double x = t / 10.0;
        os << "<text x=\"" << f(px(x) - 8) << "\" y=\"" << f(margin + side + 18) << "\" font-size=\"11\">"
           << f(x) << "</text>\n";
        os << "<text x=\"" << f(margin - 30) << "\" y=\"" << f(py(x) + 4) << "\" font-size=\"11\">" << f(x)
           << "</text>\n";
    }
    os << "<text x=\"" << f(margin + side / 2) << "\" y=\"" << f(margin + side + 40) << "\">rho</text>\n";
    os << "<text x=\"15\" y=\"" << f(margin + side / 2) << "\">v</text>\n";
    double ly = margin + 10;
    for (const auto& layer : layers) {
        os << "<rect x=\"" << f(margin + side + 20) << "\" y=\"" << f(ly) << "\" width=\"14\" height=\"14\" fill=\""
           << layer.color << "\" fill-opacity=\"0.5\"/>\n";
        os << "<text x=\"" << f(margin + side + 40) << "\" y=\"" << f(ly + 12) << "\" font-size=\"12\">" << layer.label
           << "</text>\n";
        ly += 22;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace conic_defense
