#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "infocontract/error.hpp"

namespace infocontract::cli {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object and rejects any key it was not asked about.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError("'" + path_ + "' must be an object");
        }
    }

    [[nodiscard]] bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    template <class T>
    void read(const std::string& key, T& out) {
        if (!has(key)) {
            return;
        }
        try {
            out = node_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("'" + name(key) + "' has the wrong type");
        }
    }

    template <class T>
    void read_positive(const std::string& key, T& out) {
        read(key, out);
        if (!(out > T{})) {
            throw ConfigError("'" + name(key) + "' must be positive");
        }
    }

    void read_path(const std::string& key, std::filesystem::path& out, const std::filesystem::path& base) {
        std::string text;
        read(key, text);
        if (text.empty()) {
            return;
        }
        out = std::filesystem::path(text).is_absolute() ? std::filesystem::path(text) : base / text;
        if (!std::filesystem::exists(out)) {
            throw ConfigError("'" + name(key) + "' names a missing file: " + out.string());
        }
    }

    [[nodiscard]] Section child(const std::string& key) {
        seen_.insert(key);
        return {node_.at(key), name(key)};
    }

    [[nodiscard]] std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) {
                throw ConfigError("unknown key '" + name(key) + "'");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

CostKind parse_cost_kind(const std::string& name) {
    if (name == "power") return CostKind::power;
    if (name == "affine_power") return CostKind::affine_power;
    if (name == "tabulated") return CostKind::tabulated;
    throw ConfigError("unknown cost kind '" + name + "'");
}

std::string cost_kind_name(CostKind kind) {
    switch (kind) {
        case CostKind::power: return "power";
        case CostKind::affine_power: return "affine_power";
        case CostKind::tabulated: return "tabulated";
        case CostKind::custom: return "custom";
    }
    return "custom";
}

DensitySpec parse_density(Section s, const std::filesystem::path& base) {
    DensitySpec spec;
    std::string family = "gaussian";
    s.read("family", family);
    spec.family = parse_family(family);
    s.read_positive("dimension", spec.dimension);
    s.read_positive("halfwidth", spec.halfwidth);
    s.read_positive("epsilon", spec.epsilon);
    s.read_path("csv", spec.csv, base);
    if (spec.family == Family::tabulated && spec.csv.empty()) {
        throw ConfigError("'" + s.name("csv") + "' is required for a tabulated density");
    }
    s.finish();
    return spec;
}

CostSpec parse_cost(Section s, const std::filesystem::path& base) {
    CostSpec spec;
    std::string kind = "power";
    s.read("kind", kind);
    spec.kind = parse_cost_kind(kind);
    s.read("fixed", spec.fixed);
    s.read_positive("a", spec.a);
    s.read_positive("p", spec.p);
    s.read_path("csv", spec.csv, base);
    if (spec.fixed < 0.0) {
        throw ConfigError("'" + s.name("fixed") + "' must be nonnegative");
    }
    if (spec.kind == CostKind::tabulated && spec.csv.empty()) {
        throw ConfigError("'" + s.name("csv") + "' is required for a tabulated cost");
    }
    s.finish();
    return spec;
}

Variant parse_variant(Section s, const std::filesystem::path& base) {
    std::string kind = "base";
    s.read("kind", kind);
    Variant variant;
    if (kind == "base") {
        variant = BaseVariant{};
    } else if (kind == "gaussian_prior") {
        GaussianPriorVariant v;
        s.read_positive("prior_precision", v.prior_precision);
        variant = v;
    } else if (kind == "unobserved") {
        UnobservedVariant v;
        std::string prior = "uniform";
        s.read("prior", prior);
        if (prior == "uniform") {
            v.prior = StatePrior::uniform;
        } else if (prior == "gaussian") {
            v.prior = StatePrior::gaussian;
        } else {
            throw ConfigError("unknown prior '" + prior + "' in '" + s.name("prior") + "'");
        }
        if (s.has("prior_precision")) {
            double p = 0.0;
            s.read_positive("prior_precision", p);
            v.prior_precision = p;
        }
        s.read_positive("principal_precision", v.principal_precision);
        variant = v;
    } else if (kind == "classic_pa") {
        ClassicVariant v;
        std::string output = "exponential_mean_e";
        s.read("output", output);
        v.output = parse_output_family(output);
        s.read_positive("e_max", v.e_max);
        s.read_positive("sigma", v.sigma);
        s.read_path("csv", v.csv, base);
        if (v.output == OutputFamily::tabulated && v.csv.empty()) {
            throw ConfigError("'" + s.name("csv") + "' is required for tabulated output");
        }
        variant = v;
    } else {
        throw ConfigError("unknown variant '" + kind + "' in '" + s.name("kind") + "'");
    }
    s.finish();
    return variant;
}

void parse_numeric(Section s, SolverOptions& solver) {
    ResponseOptions& r = solver.response;
    s.read_positive("lambda_min", r.lambda_min);
    s.read_positive("lambda_max", r.lambda_max);
    s.read_positive("grid_points", r.grid_points);
    s.read_positive("tie_tol", r.tie_tol);
    s.read_positive("participation_tol", r.participation_tol);
    s.read_positive("d_max", solver.d_max);
    s.read_positive("scan_points", solver.scan_points);
    s.read_positive("refine_points", solver.refine_points);
    s.read("refine_rounds", solver.refine_rounds);
    s.read_positive("bisection_tol", solver.bisection_tol);
    s.read_positive("boundary_tol", solver.boundary_tol);
    if (!(r.lambda_max > r.lambda_min)) {
        throw ConfigError("'" + s.name("lambda_max") + "' must exceed lambda_min");
    }
    if (solver.refine_rounds < 0) {
        throw ConfigError("'" + s.name("refine_rounds") + "' must be nonnegative");
    }
    s.finish();
}

void parse_oracle(Section s, BruteForceOptions& brute) {
    s.read_positive("cells", brute.cells);
    s.read_positive("levels", brute.levels);
    s.read_positive("reach", brute.reach);
    s.read_positive("max_exhaustive", brute.max_exhaustive);
    s.read_positive("direct_limit", brute.direct_limit);
    s.read_positive("rescore", brute.rescore);
    s.read("restarts", brute.restarts);
    if (brute.levels < 2) {
        throw ConfigError("'" + s.name("levels") + "' must be at least 2");
    }
    s.finish();
}

template <class F>
void optional_section(Section& root, const std::string& key, F&& parse) {
    if (root.has(key)) {
        parse(root.child(key));
    }
}

void sync_derived(RunConfig& config) {
    config.brute.seed = config.seed;
    config.brute.threads = config.threads;
    config.brute.response = config.solver.response;
    config.solver.threads = config.threads;
}

json density_json(const DensitySpec& d) {
    json j{{"family", std::string(family_name(d.family))}, {"dimension", d.dimension}};
    if (d.family == Family::uniform || d.family == Family::triangular) j["halfwidth"] = d.halfwidth;
    if (d.family == Family::truncated_exp_inverse) j["epsilon"] = d.epsilon;
    if (!d.csv.empty()) j["csv"] = d.csv.string();
    return j;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig config;
    Section root(doc, "");
    optional_section(root, "density", [&](Section s) { config.density = parse_density(std::move(s), base_dir); });
    optional_section(root, "cost", [&](Section s) { config.cost = parse_cost(std::move(s), base_dir); });
    optional_section(root, "variant", [&](Section s) { config.variant = parse_variant(std::move(s), base_dir); });
    optional_section(root, "numeric", [&](Section s) { parse_numeric(std::move(s), config.solver); });
    optional_section(root, "oracle", [&](Section s) { parse_oracle(std::move(s), config.brute); });
    optional_section(root, "analyze", [&](Section s) {
        s.read_positive("x_max", config.analyze.x_max);
        s.read_positive("points", config.analyze.points);
        s.finish();
    });
    optional_section(root, "verify", [&](Section s) {
        s.read("random_transfers", config.verify.random_transfers);
        s.read_positive("random_cells", config.verify.random_cells);
        s.read_positive("random_reach", config.verify.random_reach);
        s.read("pipeline_csv", config.verify.pipeline_csv);
        s.finish();
    });
    optional_section(root, "refute", [&](Section s) {
        RefuteSettings& r = config.refute;
        s.read_positive("lambda_ref", r.lambda_ref);
        s.read_positive("d_ref", r.d_ref);
        s.read_positive("x_inner", r.x_inner);
        s.read_positive("x_outer", r.x_outer);
        s.read_positive("curvature", r.curvature);
        s.read_positive("delta_fraction", r.delta_fraction);
        s.read_positive("cells", r.cells);
        s.finish();
    });
    optional_section(root, "sweep", [&](Section s) {
        SweepSettings& w = config.sweep;
        s.read_positive("lambda_min", w.lambda_min);
        s.read_positive("lambda_max", w.lambda_max);
        s.read_positive("lambda_points", w.lambda_points);
        s.read_positive("d_min", w.d_min);
        s.read_positive("d_max", w.d_max);
        s.read_positive("d_points", w.d_points);
        if (!(w.lambda_max > w.lambda_min) || !(w.d_max > w.d_min)) {
            throw ConfigError("'sweep' ranges must be increasing");
        }
        s.finish();
    });
    optional_section(root, "compare", [&](Section s) {
        s.read_positive("factor", config.compare.factor);
        s.finish();
    });
    optional_section(root, "output", [&](Section s) {
        std::string dir = config.out.string();
        s.read("dir", dir);
        config.out = dir;
        s.read("scan_csv", config.scan_csv);
        s.finish();
    });
    root.read("seed", config.seed);
    root.read_positive("threads", config.threads);
    root.finish();
    sync_derived(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

void override_density(RunConfig& config, const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error&) {
            throw ConfigError("--density is not valid JSON");
        }
        config.density = parse_density(Section(j, "--density"), std::filesystem::current_path());
        return;
    }
    const int dimension = config.density.dimension;
    config.density = DensitySpec{};
    config.density.family = parse_family(text);
    config.density.dimension = dimension;
    if (config.density.family == Family::tabulated) {
        throw ConfigError("--density tabulated needs a JSON object with a csv path");
    }
}

void override_cost(RunConfig& config, const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error&) {
            throw ConfigError("--cost is not valid JSON");
        }
        config.cost = parse_cost(Section(j, "--cost"), std::filesystem::current_path());
        return;
    }
    config.cost = CostSpec{};
    config.cost.kind = parse_cost_kind(text);
    if (config.cost.kind == CostKind::tabulated) {
        throw ConfigError("--cost tabulated needs a JSON object with a csv path");
    }
}

void override_dimension(RunConfig& config, int dimension) {
    if (dimension < 1) {
        throw ConfigError("--dim must be positive");
    }
    config.density.dimension = dimension;
}

void override_seed(RunConfig& config, std::uint64_t seed) {
    config.seed = seed;
    sync_derived(config);
}

void override_threads(RunConfig& config, unsigned threads) {
    if (threads == 0) {
        throw ConfigError("--threads must be positive");
    }
    config.threads = threads;
    sync_derived(config);
}

SignalDensity make_density(const DensitySpec& spec) {
    switch (spec.family) {
        case Family::gaussian: return SignalDensity::gaussian(spec.dimension);
        case Family::laplace: return SignalDensity::laplace(spec.dimension);
        case Family::logistic: return SignalDensity::logistic(spec.dimension);
        case Family::uniform: return SignalDensity::uniform(spec.halfwidth, spec.dimension);
        case Family::triangular: return SignalDensity::triangular(spec.halfwidth, spec.dimension);
        case Family::truncated_exp_inverse: return SignalDensity::truncated_exp_inverse(spec.epsilon, spec.dimension);
        case Family::tabulated: return SignalDensity::tabulated_csv(spec.csv, spec.dimension);
    }
    throw ConfigError("unsupported density family");
}

CostFunction make_cost(const CostSpec& spec) {
    switch (spec.kind) {
        case CostKind::power: return CostFunction::power(spec.a, spec.p);
        case CostKind::affine_power: return CostFunction::affine_power(spec.fixed, spec.a, spec.p);
        case CostKind::tabulated: return CostFunction::tabulated_csv(spec.csv);
        case CostKind::custom: break;
    }
    throw ConfigError("custom costs cannot be configured");
}

OutputModel make_output_model(const ClassicVariant& spec) {
    switch (spec.output) {
        case OutputFamily::exponential_mean_e: return OutputModel::exponential_mean_e(spec.e_max);
        case OutputFamily::lognormal_scale_e: return OutputModel::lognormal_scale_e(spec.sigma, spec.e_max);
        case OutputFamily::tabulated: break;
    }
    // Long format: one "effort,output,density" row per grid node.
    std::ifstream in(spec.csv);
    std::string line;
    std::set<double> efforts;
    std::set<double> outputs;
    std::map<std::pair<double, double>, double> cells;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream row(line);
        double e = 0.0;
        double y = 0.0;
        double g = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> e >> c1 >> y >> c2 >> g) || c1 != ',' || c2 != ',') {
            if (line_no == 1) {
                continue;
            }
            throw ConfigError("malformed output table row " + std::to_string(line_no) + " in " + spec.csv.string());
        }
        efforts.insert(e);
        outputs.insert(y);
        cells[{e, y}] = g;
    }
    std::vector<std::vector<double>> densities;
    for (double e : efforts) {
        std::vector<double> row;
        for (double y : outputs) {
            const auto it = cells.find({e, y});
            if (it == cells.end()) {
                throw ConfigError("output table " + spec.csv.string() + " is not a full grid");
            }
            row.push_back(it->second);
        }
        densities.push_back(std::move(row));
    }
    return OutputModel::tabulated({efforts.begin(), efforts.end()}, {outputs.begin(), outputs.end()},
                                  std::move(densities));
}

json default_config_json() {
    const RunConfig d;
    const ResponseOptions& r = d.solver.response;
    return {
        {"density", density_json(d.density)},
        {"cost", {{"kind", cost_kind_name(d.cost.kind)}, {"a", d.cost.a}, {"p", d.cost.p}, {"fixed", d.cost.fixed}}},
        {"variant", {{"kind", "base"}}},
        {"numeric",
         {{"lambda_min", r.lambda_min},
          {"lambda_max", r.lambda_max},
          {"grid_points", r.grid_points},
          {"tie_tol", r.tie_tol},
          {"participation_tol", r.participation_tol},
          {"d_max", d.solver.d_max},
          {"scan_points", d.solver.scan_points},
          {"refine_points", d.solver.refine_points},
          {"refine_rounds", d.solver.refine_rounds},
          {"bisection_tol", d.solver.bisection_tol},
          {"boundary_tol", d.solver.boundary_tol}}},
        {"oracle",
         {{"cells", d.brute.cells},
          {"levels", d.brute.levels},
          {"reach", d.brute.reach},
          {"max_exhaustive", d.brute.max_exhaustive},
          {"direct_limit", d.brute.direct_limit},
          {"rescore", d.brute.rescore},
          {"restarts", d.brute.restarts}}},
        {"analyze", {{"x_max", d.analyze.x_max}, {"points", d.analyze.points}}},
        {"verify",
         {{"random_transfers", d.verify.random_transfers},
          {"random_cells", d.verify.random_cells},
          {"random_reach", d.verify.random_reach},
          {"pipeline_csv", d.verify.pipeline_csv}}},
        {"refute",
         {{"lambda_ref", d.refute.lambda_ref},
          {"d_ref", d.refute.d_ref},
          {"x_inner", d.refute.x_inner},
          {"x_outer", d.refute.x_outer},
          {"curvature", d.refute.curvature},
          {"delta_fraction", d.refute.delta_fraction},
          {"cells", d.refute.cells}}},
        {"sweep",
         {{"lambda_min", d.sweep.lambda_min},
          {"lambda_max", d.sweep.lambda_max},
          {"lambda_points", d.sweep.lambda_points},
          {"d_min", d.sweep.d_min},
          {"d_max", d.sweep.d_max},
          {"d_points", d.sweep.d_points}}},
        {"compare", {{"factor", d.compare.factor}}},
        {"output", {{"dir", d.out.string()}, {"scan_csv", d.scan_csv}}},
        {"seed", d.seed},
        {"threads", d.threads},
    };
}

}  // namespace infocontract::cli
