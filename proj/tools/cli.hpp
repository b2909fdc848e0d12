#pragma once
// Command-line front end. Exit codes: 0 ok, 1 usage, 2 invalid input, 3 regime or configuration.

#include "conic_defense.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace conic_defense::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct ParamFlags {
    double theta{}, rho{}, v{}, r{};

    void add_to(CLI::App* app, bool required = true) {
        auto* a = app->add_option("--theta", theta, "half-angle of the sector");
        auto* b = app->add_option("--rho", rho, "perimeter radius");
        auto* c = app->add_option("--v", v, "intruder speed");
        auto* d = app->add_option("--r", r, "capture radius");
        if (required) {
            a->required();
            b->required();
            c->required();
            d->required();
        }
    }
    [[nodiscard]] ProblemParams params() const { return validate_params({theta, rho, v, r}); }
};

inline ordered_json params_json(const ProblemParams& p) {
    return {{"theta", p.theta}, {"rho", p.rho}, {"v", p.v}, {"r", p.r}};
}

inline ordered_json schedule_json(const OracleResult& res) {
    ordered_json out = ordered_json::array();
    for (const auto& e : res.schedule)
        out.push_back({{"intruder_id", e.intruder_id},
                       {"time", e.time},
                       {"radius", e.pose.radius},
                       {"angle", e.pose.angle}});
    return out;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct PolicyFlags {
    std::string name;
    std::optional<double> xs, xc;
    bool checked{false};

    void add_to(CLI::App* app) {
        app->add_option("--policy", name, "stationary, sweep, concac or snp")->required();
        auto* s = app->add_option("--xs", xs, "sweep radius x_S");
        auto* c = app->add_option("--xc", xc, "ConCaC radius x_C");
        s->excludes(c);
        app->add_flag("--checked", checked, "reject parameters outside the policy's regime (exit 3)");
    }
    [[nodiscard]] std::unique_ptr<Policy> make(const ProblemParams& p) const {
        return make_policy(name, p, {xs, xc, checked ? Admission::checked : Admission::unchecked});
    }
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Single-vehicle perimeter defense in a conical environment"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a policy on an instance");
    std::string sim_instance, sim_trace, sim_summary;
    ParamFlags sim_params;
    std::optional<std::size_t> sim_n;
    double sim_horizon = 20.0;
    std::optional<std::uint64_t> sim_seed;
    PolicyFlags sim_policy;
    auto* sim_inst_opt = sim->add_option("--instance", sim_instance, "instance file");
    sim_params.add_to(sim, false);
    auto* sim_n_opt = sim->add_option("--n", sim_n, "generate a random instance with this many arrivals");
    sim->add_option("--horizon", sim_horizon, "arrival window for --n");
    sim->add_option("--seed", sim_seed, "seed for --n");
    sim_inst_opt->excludes(sim_n_opt);
    sim_policy.add_to(sim);
    sim->add_option("--trace", sim_trace, "trace CSV output");
    sim->add_option("--summary", sim_summary, "summary JSON output");

    // gen
    auto* gen = app.add_subcommand("gen", "write instance files");
    gen->alias("adversary");
    gen->require_subcommand(1);
    auto* gen_random = gen->add_subcommand("random", "uniform random arrivals");
    ParamFlags gr_params;
    std::size_t gr_n = 10;
    double gr_horizon = 20.0, gr_offset = 0.0;
    std::uint64_t gr_seed = 0;
    std::string gr_out;
    gr_params.add_to(gen_random);
    gen_random->add_option("--n", gr_n, "number of arrivals");
    gen_random->add_option("--horizon", gr_horizon, "arrival window length");
    gen_random->add_option("--offset", gr_offset, "shift of every arrival time");
    gen_random->add_option("--seed", gr_seed, "random seed")->required();
    gen_random->add_option("--out", gr_out, "output file")->required();

    auto* gen_thm2 = gen->add_subcommand("thm2", "two-intruder instances I1..I5");
    ParamFlags g2_params;
    std::string g2_dir = ".";
    double g2_fraction = 0.5;
    bool g2_strict = false;
    g2_params.add_to(gen_thm2);
    gen_thm2->add_option("--out-dir", g2_dir, "directory for I1.json..I5.json");
    gen_thm2->add_option("--eps-fraction", g2_fraction, "I2/I3 gap as a fraction of L");
    gen_thm2->add_flag("--strict", g2_strict, "fail instead of writing I4/I5 with a non-positive gap");

    auto* gen_thm1 = gen->add_subcommand("thm1", "stream and burst realized against a policy");
    ParamFlags g1_params;
    PolicyFlags g1_policy;
    int g1_burst = 5, g1_cap = 6;
    std::string g1_out;
    g1_params.add_to(gen_thm1);
    g1_policy.add_to(gen_thm1);
    gen_thm1->add_option("--burst", g1_burst, "burst size");
    gen_thm1->add_option("--stream-cap", g1_cap, "maximum stream length");
    gen_thm1->add_option("--out", g1_out, "output file")->required();

    // oracle
    auto* orc = app.add_subcommand("oracle", "offline optimum of an instance");
    std::string orc_instance, orc_out;
    std::size_t orc_limit = 10;
    orc->add_option("--instance", orc_instance, "instance file")->required();
    orc->add_option("--limit", orc_limit, "maximum number of distinct arrivals");
    orc->add_option("--out", orc_out, "JSON output (default stdout)");

    // ratio
    auto* rat = app.add_subcommand("ratio", "offline optimum over policy captures");
    std::string rat_instance, rat_out;
    PolicyFlags rat_policy;
    std::size_t rat_limit = 10;
    rat->add_option("--instance", rat_instance, "instance file")->required();
    rat_policy.add_to(rat);
    rat->add_option("--limit", rat_limit, "maximum number of distinct arrivals");
    rat->add_option("--out", rat_out, "JSON output (default stdout)");

    // regime
    auto* reg = app.add_subcommand("regime", "classify a (rho, v) grid");
    double reg_theta = 0, reg_r = 0;
    int reg_grid = 200;
    std::string reg_csv, reg_svg, reg_form = "body";
    reg->add_option("--theta", reg_theta, "half-angle of the sector")->required();
    reg->add_option("--r", reg_r, "capture radius")->required();
    reg->add_option("--grid", reg_grid, "cells per axis");
    reg->add_option("--csv", reg_csv, "CSV output");
    reg->add_option("--svg", reg_svg, "SVG output");
    reg->add_option("--snp-form", reg_form, "SNP feasibility form")->check(CLI::IsMember({"body", "theorem"}));

    // classify
    auto* cls = app.add_subcommand("classify", "classify one parameter point");
    ParamFlags cls_params;
    std::string cls_form = "body";
    cls_params.add_to(cls);
    cls->add_option("--snp-form", cls_form, "SNP feasibility form")->check(CLI::IsMember({"body", "theorem"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    auto emit = [&](const std::string& path, const std::string& text) {
        if (path.empty()) {
            out << text;
        } else {
            write_text_file(path, text);
        }
    };
    auto form_of = [](const std::string& s) { return s == "theorem" ? SnpFeasibilityForm::theorem : SnpFeasibilityForm::body; };

    try {
        if (*sim) {
            InputInstance inst;
            std::optional<std::uint64_t> seed;
            if (!sim_instance.empty()) {
                inst = load_instance(sim_instance);
            } else if (sim_n) {
                if (!sim_seed) throw ConfigError("--seed is required with --n");
                seed = sim_seed;
                inst = random_instance(sim_params.params(), *sim_n, sim_horizon, *sim_seed);
            } else {
                throw ConfigError("simulate needs --instance or --n with --theta --rho --v --r --seed");
            }
            auto policy = sim_policy.make(inst.params);
            const auto res = simulate(inst, *policy);
            if (!sim_trace.empty()) write_text_file(sim_trace, trace_csv(res));
            ordered_json summary{{"captured", res.captured},
                                 {"lost", res.lost},
                                 {"total", res.total()},
                                 {"end_time", res.end_time},
                                 {"policy", policy->name()},
                                 {"params", params_json(inst.params)},
                                 {"seed", seed ? ordered_json(*seed) : ordered_json(nullptr)}};
            emit(sim_summary, dump(summary));
        } else if (*gen_random) {
            save_instance(gr_out, random_instance_after(gr_params.params(), gr_n, gr_horizon, gr_seed, gr_offset));
        } else if (*gen_thm2) {
            const auto p = g2_params.params();
            fs::create_directories(g2_dir);
            const bool strict_ok = thm2_strict_gap(p) > 0.0;
            for (int k = 1; k <= 5; ++k) {
                if (k >= 4 && !strict_ok) {
                    if (g2_strict) thm2_instance(p, k, g2_fraction);  // throws RegimeError
                    err << "warning: I" << k << " gap " << thm2_strict_gap(p)
                        << " is not positive; the instance is written but the construction does not apply\n";
                }
                const auto inst = thm2_instance(p, k, g2_fraction, Admission::unchecked);
                save_instance((fs::path(g2_dir) / ("I" + std::to_string(k) + ".json")).string(), inst);
            }
        } else if (*gen_thm1) {
            const auto p = g1_params.params();
            auto policy = g1_policy.make(p);
            const auto run = run_stream_burst(*policy, p, g1_burst, g1_cap);
            save_instance(g1_out, run.realized);
        } else if (*orc) {
            const auto inst = load_instance(orc_instance);
            OracleOptions opts;
            opts.limit = orc_limit;
            const auto res = offline_opt(inst, opts);
            emit(orc_out, dump({{"max_captured", res.max_captured},
                                {"schedule", schedule_json(res)},
                                {"nodes_explored", res.nodes_explored}}));
        } else if (*rat) {
            const auto inst = load_instance(rat_instance);
            OracleOptions opts;
            opts.limit = rat_limit;
            auto policy = rat_policy.make(inst.params);
            const auto est = competitive_ratio_estimate(inst, *policy, opts);
            emit(rat_out, dump({{"policy", policy->name()},
                                {"opt", est.opt},
                                {"alg", est.alg},
                                {"ratio", std::isinf(est.ratio) ? ordered_json("inf") : ordered_json(est.ratio)}}));
        } else if (*reg) {
            if (!(reg_theta > 0.0 && reg_theta <= kPi)) throw ValidationError("theta must lie in (0, pi]");
            if (!(reg_r > 0.0 && reg_r < 1.0)) throw ValidationError("r must lie in (0, 1)");
            const auto cells = sweep_grid(reg_theta, reg_r, {0.0, 1.0}, {0.0, 1.0}, reg_grid, form_of(reg_form));
            if (!reg_csv.empty()) write_text_file(reg_csv, regime_csv(cells));
            if (!reg_svg.empty()) write_text_file(reg_svg, regime_svg(cells, reg_grid, reg_theta, reg_r));
            if (reg_csv.empty() && reg_svg.empty()) out << regime_csv(cells);
        } else if (*cls) {
            const auto p = cls_params.params();
            const auto c = classify(p, form_of(cls_form));
            ordered_json j{{"params", params_json(p)},
                           {"thm1_impossible", c.thm1_impossible},
                           {"thm2_ge2", c.thm2_at_least_2},
                           {"sweep1", c.sweep_1_competitive},
                           {"concac2", c.concac_2_competitive},
                           {"snp_feasible", c.snp_feasible},
                           {"snp_ns", c.snp_n_s ? ordered_json(*c.snp_n_s) : ordered_json(nullptr)},
                           {"snp_ratio", c.snp_ratio ? ordered_json(*c.snp_ratio) : ordered_json(nullptr)}};
            out << dump(j);
        }
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        err << "outside regime: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        err << "configuration: " << e.what() << "\n";
        return 3;
    } catch (const OracleLimitError& e) {
        err << "configuration: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace conic_defense::cli
