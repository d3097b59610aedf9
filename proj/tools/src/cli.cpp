#include "gwgauss_cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gwgauss/balanced.hpp"
#include "gwgauss/barycenter.hpp"
#include "gwgauss/error.hpp"
#include "gwgauss/unbalanced.hpp"
#include "gwgauss_cli/json_io.hpp"
#include "gwgauss_cli/verify.hpp"

namespace gwgauss::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

json span_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json plan_json(const CouplingPlan& plan, const std::vector<double>& kappas) {
    return {{"mass", plan.mass()},
            {"sigma_x", span_json(plan.sigma_x())},
            {"sigma_y", span_json(plan.sigma_y())},
            {"k_xy", span_json(plan.k_xy())},
            {"kappa", kappas}};
}

std::vector<GaussianMeasure> read_all(const std::vector<std::string>& inputs) {
    std::vector<GaussianMeasure> out;
    out.reserve(inputs.size());
    for (const auto& path : inputs) out.push_back(read_measure(path));
    return out;
}

json header(const char* command) { return {{"schema", kSchema}, {"command", command}}; }

json run_igw(const RunConfig& cfg, const std::vector<std::string>& inputs) {
    if (inputs.size() != 2) invalid("igw needs exactly two measure files");
    if (cfg.tau) invalid("--tau is only valid for uigw");
    const auto m = read_all(inputs);
    const IgwResult r = igw_entropic(m[0], m[1], cfg.epsilon);
    json doc = header("igw");
    doc["epsilon"] = cfg.epsilon;
    doc["value"] = r.value;
    doc["plan"] = plan_json(r.plan, r.kappas);
    doc["diagnostics"] = {{"swapped", r.swapped}, {"degenerate", r.degenerate}};
    doc["formula_flags"] = json::object();
    return doc;
}

json run_uigw(const RunConfig& cfg, const std::vector<std::string>& inputs) {
    if (inputs.size() != 2) invalid("uigw needs exactly two measure files");
    if (!cfg.tau) invalid("uigw requires --tau");
    const auto m = read_all(inputs);
    const UigwResult r = uigw_entropic(m[0], m[1], cfg.epsilon, *cfg.tau);
    json coords = json::array();
    for (const auto& c : r.coords) {
        json e = {{"x", c.x},
                  {"psi", c.psi},
                  {"branch", c.branch == Branch::Correlated ? "correlated" : "decoupled"},
                  {"g_value", c.g_value},
                  {"other_branch_value", c.other_branch_value}};
        if (c.y) e["y"] = *c.y;
        coords.push_back(std::move(e));
    }
    json doc = header("uigw");
    doc["epsilon"] = cfg.epsilon;
    doc["tau"] = *cfg.tau;
    doc["value"] = r.value;
    doc["mass"] = r.mass;
    doc["mass_squared"] = r.mass_squared;
    doc["upsilon"] = r.upsilon;
    doc["plan"] = plan_json(r.plan, r.plan.kappas());
    doc["diagnostics"] = {{"swapped", r.swapped}, {"order_consistent", r.order_consistent}, {"coordinates", coords}};
    doc["formula_flags"] = json::object();
    return doc;
}

json run_barycenter(const RunConfig& cfg, const std::vector<std::string>& inputs) {
    if (!cfg.weights || !cfg.target_dim) invalid("barycenter requires --weights and --dim");
    if (cfg.tau) invalid("--tau is only valid for uigw");
    if (inputs.empty()) invalid("barycenter needs at least one measure file");
    BarycenterSpec spec{read_all(inputs), *cfg.weights, *cfg.target_dim, cfg.epsilon};
    const BarycenterResult r = cfg.epsilon == 0.0 ? igw_barycenter(spec) : entropic_igw_barycenter(spec);
    std::vector<std::string> per_j;
    for (FormulaFlag f : r.formula_flags) per_j.emplace_back(to_string(f));
    json doc = header("barycenter");
    doc["epsilon"] = cfg.epsilon;
    doc["spectrum"] = r.spectrum;
    doc["kappas"] = r.kappas;
    doc["diagnostics"] = {{"A", r.A},
                          {"B", r.B},
                          {"condition_ok", std::vector<bool>(r.condition_ok.begin(), r.condition_ok.end())},
                          {"oracle_used", r.oracle_used}};
    doc["formula_flags"] = {{"kappa", std::string(to_string(r.formula_flag))}, {"per_coordinate", per_j}};
    return doc;
}

json report_json(const oracle::SolverReport& r) {
    return {{"objective_trace", r.objective_trace},
            {"marginal_error", r.marginal_error},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

verify::Checks run_suite(const std::string& name, std::uint64_t seed) {
    using namespace verify;
    const auto s = [&](const char* part) { return derive_seed(seed, name + "/" + part); };
    Checks out;
    const auto add = [&](Checks c) { out.insert(out.end(), c.begin(), c.end()); };
    if (name == "balanced") {
        add(balanced_golden(s("golden"), 50));
        add(balanced_structure(s("structure"), 50));
    } else if (name == "uigw") {
        add(branch_solvers(s("branch"), 50));
        add(uigw_composed(s("composed"), 10));
        add(uigw_scaling_law(s("scaling"), 10));
        add(mass_stationarity(s("mass"), 50));
    } else if (name == "barycenter") {
        add(barycenter_quadratic(s("quadratic"), 50));
        add(barycenter_arbitration(s("arbitration"), 20));
        add(subset_search(s("subset"), 30));
    } else if (name == "oracles") {
        add(discrete_solver());
        add(kl_identities(s("kl"), 50));
        add(monte_carlo(s("mc"), 5, 200000));
    } else {
        invalid("unknown suite '" + name + "'");
    }
    return out;
}

json run_verify(const RunConfig& cfg, const std::vector<std::string>& inputs) {
    if (!inputs.empty()) invalid("verify takes no measure files");
    std::vector<std::string> suites;
    if (cfg.suite == "all") {
        suites = {"balanced", "uigw", "barycenter", "oracles"};
    } else {
        suites = {cfg.suite};
    }
    json checks = json::array();
    json tolerances = json::object();
    json reports = json::array();
    bool passed = true;
    bool converged = true;
    for (const auto& name : suites) {
        for (const auto& c : run_suite(name, cfg.seed)) {
            checks.push_back({{"suite", name},
                              {"name", c.name},
                              {"instances", c.instances},
                              {"max_delta", c.max_delta},
                              {"threshold", c.threshold},
                              {"passed", c.passed},
                              {"converged", c.converged},
                              {"detail", c.detail}});
            tolerances[c.name] = c.threshold;
            for (const auto& r : c.reports) reports.push_back(report_json(r));
            passed = passed && c.passed;
            converged = converged && c.converged;
        }
    }
    json doc = header("verify");
    doc["seed"] = cfg.seed;
    doc["suite"] = cfg.suite;
    doc["checks"] = checks;
    doc["tolerances"] = tolerances;
    doc["solver_reports"] = reports;
    doc["passed"] = passed;
    doc["converged"] = converged;
    return doc;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"all", "balanced", "uigw", "barycenter", "oracles"};
    return names;
}

std::vector<double> parse_csv(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            invalid("cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) invalid("empty list");
    return out;
}

json execute(const RunConfig& config, const std::vector<std::string>& inputs) {
    if (!(config.epsilon >= 0.0)) throw Error(ErrorCode::NegativeEpsilon, "--epsilon must be >= 0");
    switch (config.command) {
        case Command::Igw: return run_igw(config, inputs);
        case Command::Uigw: return run_uigw(config, inputs);
        case Command::Barycenter: return run_barycenter(config, inputs);
        case Command::Verify: return run_verify(config, inputs);
    }
    invalid("unknown command");
}

int run(const RunConfig& config, const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
    json doc;
    try {
        doc = execute(config, inputs);
    } catch (const EpsilonConditionError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kEpsilonCondition;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code::kValidation;
    }

    if (config.output_path.empty()) {
        write_json(out, doc);
    } else {
        std::ofstream file(config.output_path);
        if (!file) {
            err << "error: cannot write " << config.output_path << '\n';
            return exit_code::kValidation;
        }
        write_json(file, doc);
    }

    if (config.command == Command::Verify) {
        if (!doc.at("converged").get<bool>()) {
            err << "verify: an iterative oracle did not converge\n";
            return exit_code::kNotConverged;
        }
        if (!doc.at("passed").get<bool>()) {
            err << "verify: some checks exceeded their thresholds\n";
            return exit_code::kCheckFailed;
        }
    }
    return exit_code::kOk;
}

}  // namespace gwgauss::cli
