#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "output.hpp"

namespace beliefcoop::cli {

struct CommonArgs {
    double b = 3.0;
    double m = 50.0;
    double ell_bar = 8.0;
    std::optional<double> pi;  ///< single belief; otherwise the grid is used
    std::size_t pi_grid = 200;
    double pi_max = 0.99;
    double tol = 1e-10;
    std::string select = "all";  ///< all | lowest | highest
};

struct DiverseArgs {
    double b = 2.0;
    double m = 8.0;
    std::size_t grid_n = 1001;
    double tol = 1e-10;
    int max_iter = 10000;
    std::string alpha_beta = "exact";  ///< exact | approx
};

struct CompareArgs {
    double b = 2.0;
    double m = 8.0;
    std::size_t pi_grid = 200;
    double pi_max = 0.99;
    std::string alpha_beta = "approx";
};

struct ExanteArgs {
    double b = 2.0;
    double m = 8.0;
    std::optional<std::array<double, 2>> b_range;  ///< set together with m_range for grid mode
    std::optional<std::array<double, 2>> m_range;
    std::size_t cells = 100;
};

struct AsymmetricArgs {
    double b = 3.0;
    double m = 50.0;
    double ell_bar = 8.0;
    double pi1 = 0.02;
    double pi2 = 0.06;
    std::size_t sweep_pi2 = 0;  ///< 0: single row at pi2; N: N beliefs on [0, pi2_max]
    double pi2_max = 0.2;
};

struct GroupArgs {
    int n = 3;
    double b = 2.0;
    double m = 8.0;
    double ell_bar = 1.0;
    std::string variant = "consistent";  ///< consistent | as-printed
    std::size_t pi_grid = 200;
    double pi_max = 0.99;
    std::size_t grid_n = 1001;
    double tol = 1e-12;
    int max_iter = 500;
};

struct SimulateArgs {
    std::string scenario = "common";  ///< common | diverse | asymmetric
    double b = 3.0;
    double m = 50.0;
    double ell_bar = 8.0;
    double pi = 0.03;
    double pi1 = 0.02;
    double pi2 = 0.06;
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 1;
};

struct ReproduceArgs {
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
};

using Command = std::variant<CommonArgs, DiverseArgs, CompareArgs, ExanteArgs, AsymmetricArgs, GroupArgs, SimulateArgs,
                             ReproduceArgs>;

std::string_view command_name(const Command& command);

/// Manifest body for a command: model, grid, tolerances, seed and options sections.
Json manifest_sections(const Command& command);

/// Rebuilds a command from a manifest. Throws beliefcoop::ValidationError on
/// an unknown command or missing fields.
Command command_from_manifest(const Json& manifest);

/// Runs `command`, writes its outputs and `<command>.manifest.json` into
/// `dir`, and returns the written paths relative to `dir`.
std::vector<std::string> execute(const Command& command, const std::filesystem::path& dir);

}  // namespace beliefcoop::cli
