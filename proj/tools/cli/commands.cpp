#include "cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "infocontract/agent.hpp"
#include "infocontract/elasticity.hpp"
#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"
#include "infocontract/rng.hpp"

namespace infocontract::cli {

using nlohmann::json;

namespace {

constexpr double kCertificationTol = 1e-3;

// CSV with a header row and 12 significant digits per value.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header) : out_(path) {
        if (!out_) {
            throw ConfigError("cannot write " + path.string());
        }
        bool first = true;
        for (std::string_view h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        char buffer[32];
        bool first = true;
        for (double v : values) {
            std::snprintf(buffer, sizeof buffer, "%.12g", v);
            out_ << (first ? "" : ",") << buffer;
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

json density_report(const SignalDensity& density) {
    json params = json::object();
    for (const auto& [k, v] : density.parameters()) {
        params[k] = v;
    }
    return {{"family", std::string(family_name(density.family()))},
            {"dimension", density.dimension()},
            {"parameters", params},
            {"piecewise_differentiable", density.piecewise_differentiable()}};
}

json cost_report(const CostFunction& cost) {
    json params = json::object();
    for (const auto& [k, v] : cost.parameters()) {
        params[k] = v;
    }
    return {{"description", cost.description()}, {"parameters", params}};
}

json solve_report(const SolveResult& r) {
    json j{{"d_bar", r.d_bar},
           {"d_star", r.d_star},
           {"lambda_star", r.lambda_star},
           {"agent_payoff", r.agent_payoff},
           {"region", std::string(region_name(r.region))},
           {"ir_binding", r.ir_binding},
           {"boundary_product", r.boundary_product},
           {"threshold", r.threshold},
           {"boundary_unreached", r.boundary_unreached},
           {"iea_holds", r.iea_holds},
           {"warnings", r.warnings}};
    j["posterior_precision"] = r.posterior_precision ? json(*r.posterior_precision) : json(nullptr);
    return j;
}

json transfer_report(const Transfer& t) { return {{"edges", t.edges()}, {"values", t.values()}}; }

bool is_classic(const RunConfig& config) { return std::holds_alternative<ClassicVariant>(config.variant); }

void require_base(const RunConfig& config, Command command) {
    if (!std::holds_alternative<BaseVariant>(config.variant) && !is_classic(config)) {
        throw ConfigError("'" + std::string(command_name(command)) + "' supports the base and classic_pa variants");
    }
}

json run_analyze(const RunConfig& config) {
    const SignalDensity density = make_density(config.density);
    const ElasticityAnalyzer analyzer(density);
    const ElasticityProfile p = analyzer.profile(density.dimension());
    CsvWriter csv(config.out / "elasticity.csv", {"x", "eta", "pdf"});
    const double step = config.analyze.x_max / static_cast<double>(config.analyze.points);
    for (std::size_t i = 1; i <= config.analyze.points; ++i) {
        const double x = step * static_cast<double>(i);
        csv.row({x, analyzer.eta(x), density.pdf(x)});
    }
    json j{{"density", density_report(density)},
           {"n", p.n},
           {"eta_inverse_n", p.eta_inverse_n},
           {"eta_inverse_overflow", p.overflow},
           {"crossing_point", p.crossing_point},
           {"iea_holds", p.iea_holds},
           {"global_mlrp", p.global_mlrp},
           {"strongly_unimodal", p.strongly_unimodal}};
    j["iea_witness"] = p.iea_witness ? json{p.iea_witness->first, p.iea_witness->second} : json(nullptr);
    write_json(config.out / "condition.json", j);
    return j;
}

json run_solve(const RunConfig& config) {
    const CostFunction cost = make_cost(config.cost);
    if (const auto* classic = std::get_if<ClassicVariant>(&config.variant)) {
        const OutputModel model = make_output_model(*classic);
        ClassicOptions options;
        options.threads = config.threads;
        const ClassicResult r = solve_classic_pa(model, cost, options);
        json j{{"variant", "classic_pa"},
               {"output", std::string(output_family_name(model.family()))},
               {"cost", cost_report(cost)},
               {"d_star", r.d_star},
               {"e_star", r.e_star},
               {"agent_payoff", r.agent_payoff},
               {"mlrp_holds", r.mlrp_holds}};
        write_json(config.out / "solve.json", j);
        return j;
    }

    const SignalDensity density = make_density(config.density);
    SolveResult r;
    std::string variant = "base";
    if (const auto* prior = std::get_if<GaussianPriorVariant>(&config.variant)) {
        variant = "gaussian_prior";
        r = solve_gaussian_prior(density, prior->prior_precision, cost, config.solver);
    } else if (const auto* hidden = std::get_if<UnobservedVariant>(&config.variant)) {
        variant = "unobserved";
        r = solve_unobserved_state(density, hidden->prior, hidden->prior_precision, hidden->principal_precision, cost,
                                   config.solver);
    } else {
        r = optimal_cutoff(density, cost, config.solver);
    }
    json j = solve_report(r);
    j["variant"] = variant;
    j["density"] = density_report(density);
    j["cost"] = cost_report(cost);
    write_json(config.out / "solve.json", j);
    if (config.scan_csv) {
        CsvWriter csv(config.out / "scan.csv", {"d", "lambda", "payoff", "product"});
        for (const CutoffSample& s : r.scan) {
            csv.row({s.d, s.lambda, s.payoff, s.product});
        }
    }
    return j;
}

void write_pipeline_csv(const std::filesystem::path& path, const Transfer& original, const Improvement& imp,
                        double reach) {
    CsvWriter csv(path, {"x", "original", "recentred", "symmetric", "augmented", "cutoff"});
    const PipelineTrace& trace = *imp.trace;
    for (double x : numeric::lin_space(-reach, reach, 601)) {
        csv.row({x, original(x), trace.recentred(x), trace.symmetric(x), trace.augmented(x),
                 std::abs(x) <= imp.d ? 1.0 : 0.0});
    }
}

json run_verify_classic(const RunConfig& config) {
    const CostFunction cost = make_cost(config.cost);
    const OutputModel model = make_output_model(std::get<ClassicVariant>(config.variant));
    ClassicOptions options;
    options.threads = config.threads;
    const ClassicResult quota = solve_classic_pa(model, cost, options);
    const OutputBruteForce search =
        brute_force_output_transfer(model, cost, config.brute.cells, config.brute.reach, {}, config.threads);
    const double resolution = (model.e_max() - model.e_min()) / static_cast<double>(EffortOptions{}.grid_points);
    json j{{"variant", "classic_pa"},
           {"mlrp_holds", quota.mlrp_holds},
           {"quota", {{"d_star", quota.d_star}, {"e_star", quota.e_star}}},
           {"brute_force",
            {{"values", search.values}, {"effort", search.effort}, {"evaluated", search.evaluated}}},
           {"tolerance", resolution},
           {"certified", search.effort <= quota.e_star + resolution}};
    write_json(config.out / "verify.json", j);
    return j;
}

json run_verify(const RunConfig& config) {
    if (is_classic(config)) {
        return run_verify_classic(config);
    }
    const SignalDensity density = make_density(config.density);
    const CostFunction cost = make_cost(config.cost);
    const SolveResult best = optimal_cutoff(density, cost, config.solver);
    const BruteForceResult search = brute_force_best_transfer(density, cost, config.brute);
    json j{{"density", density_report(density)},
           {"cost", cost_report(cost)},
           {"best_cutoff", {{"d_star", best.d_star}, {"lambda_star", best.lambda_star}}},
           {"brute_force",
            {{"values", search.values},
             {"lambda", search.lambda},
             {"payoff", search.payoff},
             {"evaluated", search.evaluated},
             {"exhaustive", search.exhaustive}}},
           {"tolerance", kCertificationTol},
           {"margin", search.lambda - best.lambda_star},
           {"certified", search.lambda <= best.lambda_star + kCertificationTol},
           {"iea_holds", best.iea_holds}};

    json improvements = json::array();
    if (best.iea_holds) {
        ImprovementOptions options;
        options.response = config.solver.response;
        const double reach = config.verify.random_reach * density.scale();
        const double width = 2.0 * reach / static_cast<double>(config.verify.random_cells);
        CounterRng rng(config.seed, 1);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < config.verify.random_transfers; ++i) {
            std::vector<double> values(config.verify.random_cells);
            for (double& v : values) {
                v = rng.uniform();
            }
            const Transfer t = Transfer::uniform_cells(-reach, width, values);
            const Improvement imp = improve_to_cutoff(density, t, cost, options);
            worst = std::min(worst, imp.lambda_d - imp.lambda_t);
            json entry{{"lambda_t", imp.lambda_t}, {"d", imp.d}, {"lambda_d", imp.lambda_d}};
            if (imp.trace) {
                entry["report_offset"] = imp.trace->report_offset;
                entry["max_truthful_excess"] = imp.trace->max_truthful_excess;
                entry["max_symmetrization_gap"] = imp.trace->max_symmetrization_gap;
                entry["min_augmentation_gain"] = imp.trace->min_augmentation_gain;
                if (config.verify.pipeline_csv && i == 0) {
                    write_pipeline_csv(config.out / "pipeline.csv", t, imp, reach);
                }
            }
            improvements.push_back(entry);
        }
        j["improvement_worst_gap"] = config.verify.random_transfers > 0 ? json(worst) : json(nullptr);
    } else {
        j["improvement_skipped"] = "increasing elasticity fails, so the improvement pipeline does not apply";
    }
    j["improvements"] = improvements;
    write_json(config.out / "verify.json", j);
    return j;
}

json run_refute(const RunConfig& config) {
    const SignalDensity density = make_density(config.density);
    const RefuteSettings& s = config.refute;
    RefutationOptions options;
    options.curvature = s.curvature;
    options.counterexample.delta_fraction = s.delta_fraction;
    options.brute = config.brute;
    options.brute.cells = s.cells;
    options.solver = config.solver;
    const RefutationReport r = refute_cutoff_optimality(density, s.lambda_ref, s.d_ref, s.x_inner, s.x_outer, options);
    const Counterexample& ce = r.counterexample;
    json j{{"density", density_report(density)},
           {"tangent_cost", {{"lambda_ref", s.lambda_ref}, {"d_ref", s.d_ref}, {"curvature", s.curvature}}},
           {"counterexample",
            {{"transfer", transfer_report(ce.t)},
             {"delta_inner", ce.delta_inner},
             {"delta_outer", ce.delta_outer},
             {"inner_mass", ce.inner_mass},
             {"outer_mass", ce.outer_mass},
             {"slope_gap", ce.slope_gap},
             {"retries", ce.retries},
             {"lambda", r.counterexample_lambda}}},
           {"best_cutoff", {{"d", r.best_cutoff_d}, {"lambda", r.best_cutoff_lambda}}},
           {"brute_force",
            {{"values", r.brute_force.values},
             {"lambda", r.brute_force.lambda},
             {"evaluated", r.brute_force.evaluated},
             {"exhaustive", r.brute_force.exhaustive}}},
           {"counterexample_margin", r.counterexample_margin},
           {"brute_force_margin", r.brute_force_margin},
           {"refuted", r.counterexample_margin > 0.0 && r.brute_force_margin > 0.0}};
    write_json(config.out / "refute.json", j);
    return j;
}

json run_sweep(const RunConfig& config) {
    const SignalDensity density = make_density(config.density);
    const int n = density.dimension();
    const ElasticityAnalyzer analyzer(density);
    const double threshold = analyzer.eta_inverse(n).value;
    const SweepSettings& w = config.sweep;
    const auto lambdas = numeric::lin_space(w.lambda_min, w.lambda_max, w.lambda_points);
    const auto ds = numeric::lin_space(w.d_min, w.d_max, w.d_points);
    {
        CsvWriter csv(config.out / "surface.csv", {"lambda", "d", "expected_transfer", "complement"});
        for (double l : lambdas) {
            for (double d : ds) {
                csv.row({l, d, expected_transfer_cutoff(density, l, d, n), l * d < threshold ? 1.0 : 0.0});
            }
        }
    }
    CsvWriter boundary(config.out / "boundary.csv", {"lambda", "d"});
    for (double l : lambdas) {
        boundary.row({l, threshold / l});
    }
    json j{{"density", density_report(density)},
           {"threshold", threshold},
           {"surface_rows", lambdas.size() * ds.size()},
           {"boundary_rows", lambdas.size()}};
    write_json(config.out / "sweep.json", j);
    return j;
}

json run_compare(const RunConfig& config) {
    const SignalDensity density = make_density(config.density);
    const CostFunction low = make_cost(config.cost);
    const CostFunction high = low.scaled(config.compare.factor);
    const ComparativeStatics c = comparative_statics(density, low, high, config.solver);
    json j{{"density", density_report(density)},
           {"factor", config.compare.factor},
           {"hypothesis_holds", c.hypothesis_holds},
           {"message", c.message},
           {"d_star_ordered", c.d_star_ordered},
           {"lambda_ordered", c.lambda_ordered}};
    j["lower_cost"] = c.lower_cost ? solve_report(*c.lower_cost) : json(nullptr);
    j["higher_cost"] = c.higher_cost ? solve_report(*c.higher_cost) : json(nullptr);
    write_json(config.out / "compare.json", j);
    return j;
}

}  // namespace

Command parse_command(std::string_view name) {
    for (Command c : {Command::analyze, Command::solve, Command::verify, Command::refute, Command::sweep,
                      Command::compare}) {
        if (command_name(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) noexcept {
    switch (command) {
        case Command::analyze: return "analyze";
        case Command::solve: return "solve";
        case Command::verify: return "verify";
        case Command::refute: return "refute";
        case Command::sweep: return "sweep";
        case Command::compare: return "compare";
    }
    return "unknown";
}

void run(Command command, const RunConfig& config, std::ostream& report) {
    std::filesystem::create_directories(config.out);
    json j;
    switch (command) {
        case Command::analyze: j = run_analyze(config); break;
        case Command::solve: j = run_solve(config); break;
        case Command::verify:
            require_base(config, command);
            j = run_verify(config);
            break;
        case Command::refute: j = run_refute(config); break;
        case Command::sweep: j = run_sweep(config); break;
        case Command::compare: j = run_compare(config); break;
    }
    report << j.dump(2) << '\n';
}

int run_guarded(Command command, const RunConfig& config, std::ostream& report, std::ostream& errors) {
    try {
        run(command, config, report);
        return ExitCode::success;
    } catch (const InfeasibleContract& e) {
        errors << e.what() << '\n';
        return ExitCode::infeasible;
    } catch (const ConfigError& e) {
        errors << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        errors << "error: " << e.what() << '\n';
    }
    return ExitCode::config_error;
}

}  // namespace infocontract::cli
