#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "infocontract/classic.hpp"
#include "infocontract/cost.hpp"
#include "infocontract/density.hpp"
#include "infocontract/oracle.hpp"
#include "infocontract/solver.hpp"

namespace infocontract::cli {

struct DensitySpec {
    Family family = Family::gaussian;
    int dimension = 1;
    double halfwidth = 1.0;
    double epsilon = 0.1;
    std::filesystem::path csv;
};

struct CostSpec {
    CostKind kind = CostKind::power;
    double fixed = 0.0;
    double a = 0.125;
    double p = 2.0;
    std::filesystem::path csv;
};

struct BaseVariant {};
struct GaussianPriorVariant {
    double prior_precision = 1.0;
};
struct UnobservedVariant {
    StatePrior prior = StatePrior::uniform;
    std::optional<double> prior_precision;
    double principal_precision = 2.0;
};
struct ClassicVariant {
    OutputFamily output = OutputFamily::exponential_mean_e;
    double e_max = 5.0;
    double sigma = 1.0;
    /// Rows "effort,output,density" for the tabulated output family.
    std::filesystem::path csv;
};
using Variant = std::variant<BaseVariant, GaussianPriorVariant, UnobservedVariant, ClassicVariant>;

struct AnalyzeSettings {
    double x_max = 5.0;
    std::size_t points = 200;
};

struct VerifySettings {
    std::size_t random_transfers = 8;
    std::size_t random_cells = 64;
    double random_reach = 3.0;
    bool pipeline_csv = false;
};

struct RefuteSettings {
    double lambda_ref = 1.0;
    double d_ref = 0.5;
    double x_inner = 0.2;
    double x_outer = 0.8;
    double curvature = 0.5;
    double delta_fraction = 0.01;
    std::size_t cells = 16;
};

struct SweepSettings {
    double lambda_min = 0.05;
    double lambda_max = 4.0;
    std::size_t lambda_points = 80;
    double d_min = 0.05;
    double d_max = 3.0;
    std::size_t d_points = 60;
};

struct CompareSettings {
    double factor = 2.0;
};

struct RunConfig {
    DensitySpec density;
    CostSpec cost;
    Variant variant;
    SolverOptions solver;
    BruteForceOptions brute;
    AnalyzeSettings analyze;
    VerifySettings verify;
    RefuteSettings refute;
    SweepSettings sweep;
    CompareSettings compare;
    bool scan_csv = false;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::filesystem::path out = "out";
};

/// Parses and validates a config document. Relative CSV paths resolve against `base_dir`.
/// Throws ConfigError naming the offending key.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Replaces the density by a family name or an inline JSON object.
void override_density(RunConfig& config, const std::string& text);
/// Replaces the cost by a kind name (default parameters) or an inline JSON object.
void override_cost(RunConfig& config, const std::string& text);
void override_dimension(RunConfig& config, int dimension);
void override_seed(RunConfig& config, std::uint64_t seed);
void override_threads(RunConfig& config, unsigned threads);

[[nodiscard]] SignalDensity make_density(const DensitySpec& spec);
[[nodiscard]] CostFunction make_cost(const CostSpec& spec);
[[nodiscard]] OutputModel make_output_model(const ClassicVariant& spec);

/// The documented defaults as a config document.
[[nodiscard]] nlohmann::json default_config_json();

}  // namespace infocontract::cli
