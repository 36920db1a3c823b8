#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtnep/assess.hpp"
#include "rtnep/case_io.hpp"
#include "rtnep/driver.hpp"
#include "rtnep/oracle.hpp"
#include "rtnep/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rtnep;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string fnv1a64_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool stamp_times() {
    const char* v = std::getenv("RTNEP_STAMP_TIMES");
    return v && std::string(v) == "1";
}

json timestamps_json(long long started, long long finished) {
    // zeroed by default so re-runs are byte identical
    bool stamp = stamp_times();
    return json{{"started_unix", stamp ? started : 0}, {"finished_unix", stamp ? finished : 0}};
}

long long now_unix() {
    return static_cast<long long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

std::string plan_to_json(const GridCase& c, const ExpansionPlan& plan, double worst_cost,
                         double total_cost) {
    json doc;
    doc["built"] = json::array();
    doc["vector"] = json::array();
    for (size_t k = 0; k < plan.built.size(); ++k) {
        doc["vector"].push_back(static_cast<int>(plan.built[k]));
        if (plan.built[k]) doc["built"].push_back(c.lines[c.candidate_idx[k]].id);
    }
    doc["investment_cost"] = plan.investment_cost;
    doc["worst_case_cost"] = worst_cost;
    doc["total_cost"] = total_cost;
    return doc.dump(2) + "\n";
}

ExpansionPlan plan_from_json(const GridCase& c, const std::string& text, const std::string& origin,
                             double* worst_cost) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin, "byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.contains("vector") || !doc.at("vector").is_array())
        throw ParseError(origin, "$", "missing plan 'vector'");
    auto vec = doc.at("vector");
    if (vec.size() != c.candidate_idx.size())
        throw ParseError(origin, "vector",
                         "plan dimension " + std::to_string(vec.size()) + " does not match case (" +
                             std::to_string(c.candidate_idx.size()) + " candidates)");
    std::vector<uint8_t> built;
    for (const auto& v : vec) built.push_back(v.get<int>() != 0);
    if (worst_cost) *worst_cost = doc.value("worst_case_cost", std::numeric_limits<double>::quiet_NaN());
    return make_plan(c, built);
}

struct CommonArgs {
    std::string case_path;
    std::string format = "native";
    std::string out_dir = "out";
};

GridCase load(const CommonArgs& args) {
    return load_case(args.case_path,
                     args.format == "matpower" ? CaseFormat::MatpowerLike : CaseFormat::NativeJson);
}

json config_json(const SolveConfig& cfg) {
    return json{{"gamma_d", cfg.budgets.gamma_d},
                {"gamma_g", cfg.budgets.gamma_g},
                {"eps_ol", cfg.eps_ol},
                {"eps_il", cfg.eps_il},
                {"multistart", cfg.multistart},
                {"seed", cfg.seed},
                {"max_outer", cfg.max_outer},
                {"inner_max_iter", cfg.inner_max_iter},
                {"big_m_theta_span", cfg.big_m.theta_span},
                {"mip_gap_tol", cfg.mip_tol.mip_gap_tol},
                {"feas_tol", cfg.lp_tol.feas_tol}};
}

void write_manifest(const fs::path& dir, const std::string& command, const std::string& case_path,
                    uint64_t seed, const json& config, long long started) {
    json doc;
    doc["tool"] = "rtnep";
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["case_checksum"] = "fnv1a64:" + fnv1a64_hex(read_file(case_path));
    doc["seed"] = seed;
    doc["config"] = config;
    doc["timestamps"] = timestamps_json(started, now_unix());
    write_file(dir / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust transmission expansion planning solver"};
    app.require_subcommand(1);

    CommonArgs common;
    SolveConfig cfg;
    long samples = 10000;
    std::string mode = "within";
    std::string plan_path;
    double worst_ref_override = std::numeric_limits<double>::quiet_NaN();
    unsigned long long cap = 1000000ull;
    std::string oracle_kind;
    int synth_buses = 2000, synth_lines = 2500, synth_candidates = 100;
    std::string synth_out = "case.json";

    auto add_common = [&](CLI::App* sub, bool need_case = true) {
        auto* opt = sub->add_option("--case", common.case_path, "case file");
        if (need_case) opt->required();
        sub->add_option("--format", common.format, "case format: native | matpower")
            ->check(CLI::IsMember({"native", "matpower"}));
        sub->add_option("--out", common.out_dir, "output directory");
    };
    auto add_budgets = [&](CLI::App* sub) {
        sub->add_option("--gamma-d", cfg.budgets.gamma_d, "demand uncertainty budget")->required();
        sub->add_option("--gamma-g", cfg.budgets.gamma_g, "generation uncertainty budget")->required();
    };

    double budget_override = std::numeric_limits<double>::quiet_NaN();
    double sigma_override = std::numeric_limits<double>::quiet_NaN();
    CLI::App* solve = app.add_subcommand("solve", "solve the robust expansion problem");
    add_common(solve);
    add_budgets(solve);
    solve->add_option("--budget", budget_override, "override the case investment budget");
    solve->add_option("--sigma", sigma_override, "override the case weighting factor");
    solve->add_option("--eps-ol", cfg.eps_ol, "outer loop tolerance")->envname("RTNEP_EPS_OL");
    solve->add_option("--eps-il", cfg.eps_il, "inner loop tolerance")->envname("RTNEP_EPS_IL");
    solve->add_option("--multistart", cfg.multistart, "random inner-loop starts");
    solve->add_option("--seed", cfg.seed, "random seed");
    solve->add_option("--max-outer", cfg.max_outer, "outer iteration limit");
    solve->add_option("--time-limit", cfg.time_limit_s, "wall time limit, seconds");
    solve->add_option("--mip-gap", cfg.mip_tol.mip_gap_tol, "master mip gap")->envname("RTNEP_MIP_GAP_TOL");
    solve->add_option("--feas-tol", cfg.lp_tol.feas_tol, "lp feasibility tolerance")->envname("RTNEP_FEAS_TOL");

    CLI::App* assess = app.add_subcommand("assess", "out-of-sample assessment of a plan");
    add_common(assess);
    add_budgets(assess);
    assess->add_option("--plan", plan_path, "plan file produced by solve or the oracle")->required();
    assess->add_option("--samples", samples, "number of samples");
    assess->add_option("--seed", cfg.seed, "random seed");
    assess->add_option("--mode", mode, "exact | within")->check(CLI::IsMember({"exact", "within"}));
    assess->add_option("--worst-ref", worst_ref_override, "override the worst-case reference cost");

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force ground truth");
    oracle->add_option("kind", oracle_kind, "worst-case | robust-plan")
        ->required()
        ->check(CLI::IsMember({"worst-case", "robust-plan"}));
    add_common(oracle);
    add_budgets(oracle);
    oracle->add_option("--plan", plan_path, "plan file (worst-case only; defaults to no builds)");
    oracle->add_option("--cap", cap, "enumeration cap");
    oracle->add_option("--seed", cfg.seed, "recorded in the manifest");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic large case");
    synth->add_option("--buses", synth_buses, "bus count");
    synth->add_option("--lines", synth_lines, "existing line count");
    synth->add_option("--candidates", synth_candidates, "candidate count");
    synth->add_option("--seed", cfg.seed, "random seed");
    synth->add_option("--out-file", synth_out, "output case file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    long long started = now_unix();
    try {
        if (app.got_subcommand(synth)) {
            GridCase c = make_scale_case(synth_buses, synth_lines, synth_candidates, cfg.seed);
            write_file(synth_out, serialize_case(c));
            std::cout << "wrote " << synth_out << "\n";
            return 0;
        }

        GridCase c = load(common);
        if (app.got_subcommand(solve)) {
            if (!std::isnan(budget_override)) c.investment_budget = budget_override;
            if (!std::isnan(sigma_override)) c.sigma = sigma_override;
            require_valid(c);
            fs::create_directories(common.out_dir);
            fs::path dir(common.out_dir);
            RobustSolveResult res = solve_robust_tnep(c, cfg);
            double worst_cost = res.log.iterations.empty() ? 0.0 : res.log.iterations.back().sub_cost;
            write_file(dir / "plan.json", plan_to_json(c, res.plan, worst_cost, res.total_cost));
            write_file(dir / "worst.json", realization_to_json(c, res.worst));
            {
                std::ostringstream os;
                write_log_csv(res.log, os, stamp_times());
                write_file(dir / "log.csv", os.str());
            }
            write_file(dir / "log.json", log_to_json(c, res.log, stamp_times()));
            write_manifest(dir, "solve", common.case_path, cfg.seed, config_json(cfg), started);
            std::cout << "total_cost " << res.total_cost << (res.log.converged ? " (converged)" : "")
                      << "\n";
            if (res.log.converged) return 0;
            return 2;
        }

        if (app.got_subcommand(assess)) {
            double plan_worst = 0.0;
            ExpansionPlan plan = plan_from_json(c, read_file(plan_path), plan_path, &plan_worst);
            double ref = !std::isnan(worst_ref_override) ? worst_ref_override : plan_worst;
            if (std::isnan(ref)) {
                auto starts = default_starts(c, cfg.budgets, cfg.multistart, cfg.seed);
                ref = multistart_worst_case(c, plan, cfg.budgets, starts, cfg.eps_il)
                          .dispatch.operating_cost;
            }
            AssessmentReport rep =
                assess_plan(c, plan, cfg.budgets, samples, cfg.seed,
                            mode == "exact" ? SampleMode::ExactBudget : SampleMode::WithinBudget, ref);
            fs::create_directories(common.out_dir);
            fs::path dir(common.out_dir);
            {
                std::ostringstream os;
                write_assess_csv(rep, os);
                write_file(dir / "assess.csv", os.str());
            }
            {
                std::ostringstream os;
                write_histogram_csv(rep, os);
                write_file(dir / "hist.csv", os.str());
            }
            write_file(dir / "assess_summary.json", assess_summary_json(rep));
            json cfgj{{"gamma_d", cfg.budgets.gamma_d}, {"gamma_g", cfg.budgets.gamma_g},
                      {"samples", samples},             {"mode", mode},
                      {"worst_ref", ref},               {"plan", plan_path}};
            write_manifest(dir, "assess", common.case_path, cfg.seed, cfgj, started);
            std::cout << "samples " << rep.samples << " exceedances " << rep.exceedances
                      << " infeasible " << rep.infeasible_count << "\n";
            return 0;
        }

        if (app.got_subcommand(oracle)) {
            fs::create_directories(common.out_dir);
            fs::path dir(common.out_dir);
            json cfgj{{"kind", oracle_kind},
                      {"gamma_d", cfg.budgets.gamma_d},
                      {"gamma_g", cfg.budgets.gamma_g},
                      {"cap", cap}};
            if (oracle_kind == "worst-case") {
                ExpansionPlan plan = plan_path.empty()
                                         ? empty_plan(c)
                                         : plan_from_json(c, read_file(plan_path), plan_path, nullptr);
                auto [worst, cost] = exact_worst_case(c, plan, cfg.budgets, cap);
                write_file(dir / "worst.json", realization_to_json(c, worst));
                json summary{{"worst_cost", cost}, {"investment_cost", plan.investment_cost}};
                write_file(dir / "oracle_summary.json", summary.dump(2) + "\n");
            } else {
                OracleCaps caps;
                caps.max_plans = cap;
                caps.max_vertices = cap;
                ExactPlanResult res = exact_robust_plan(c, cfg.budgets, caps);
                write_file(dir / "plan.json",
                           plan_to_json(c, res.plan, res.worst_cost, res.total_cost));
                write_file(dir / "worst.json", realization_to_json(c, res.worst));
                json summary{{"total_cost", res.total_cost}, {"worst_cost", res.worst_cost}};
                write_file(dir / "oracle_summary.json", summary.dump(2) + "\n");
            }
            write_manifest(dir, "oracle", common.case_path, cfg.seed, cfgj, started);
            return 0;
        }
    } catch (const CapExceededError& e) {
        std::cerr << "cap exceeded: " << e.what() << " (exact count " << e.exact_count << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
