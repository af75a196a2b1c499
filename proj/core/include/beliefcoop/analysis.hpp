#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "beliefcoop/diverse.hpp"
#include "beliefcoop/params.hpp"

namespace beliefcoop {

// Everything here is the uniform case: losses and beliefs on [0, 1], b >= 2.

/// l*_c(pi) - l*_d(pi). Positive where common beliefs support more cooperation.
double crossing_gap(double pi, const GameParams& params, const AlphaBeta& ab);

/// d l*_c / d pi on pi < (b-1)/m.
double common_slope_uniform(double pi, const GameParams& params);

/// d l*_d / d pi on the middle branch.
double diverse_slope_uniform(double pi, const GameParams& params, const AlphaBeta& ab);

struct PiDaggerOptions {
    int scan_points = 500;
    double tol = 1e-12;
};

/// Unique belief where the common and diverse cooperation likelihoods cross.
/// Scans the open interval (beta, 1 - (1+m-b)/(alpha+beta)) and requires exactly
/// one sign change of crossing_gap (InvariantViolation otherwise).
double solve_pi_dagger(const GameParams& params, const AlphaBeta& ab, const PiDaggerOptions& options = {});

enum class ExAnteMethod { ClosedForm, Quadrature };
std::string_view to_string(ExAnteMethod method) noexcept;

/// Ex-ante probability that a strategic player cooperates under common beliefs.
double ex_ante_p_common(const GameParams& params, ExAnteMethod method);

/// Same under diverse beliefs. The closed form is built on the approximate
/// (alpha, beta); the quadrature integrates (1+m-b)/(alpha + beta l) for the
/// supplied pair.
double ex_ante_p_diverse(const GameParams& params, const AlphaBeta& ab, ExAnteMethod method);

/// True when gamma = sqrt(1 + 4(b-1)/(1+m-b)) is so close to 1 that the
/// diverse closed form switches to its series limit.
bool ex_ante_diverse_series_fallback(const GameParams& params);

struct RegimeBounds {
    double beta = 0.0;
    double diverse_upper = 0.0;  ///< 1 - (1+m-b)/(alpha+beta)
    double pi_low = 0.0;         ///< (b-1)/m
};

struct CooperationReport {
    double pi_dagger = 0.0;
    double p_common = 0.0;
    double p_diverse = 0.0;
    double phi = 0.0;        ///< sqrt(1+m-b+b^2/4)
    double gamma_aux = 0.0;  ///< sqrt(1+4(b-1)/(1+m-b))
    RegimeBounds bounds;
    AlphaBetaMode mode = AlphaBetaMode::Approximate;
};

CooperationReport cooperation_report(const GameParams& params, AlphaBetaMode mode = AlphaBetaMode::Approximate);

struct RegionCell {
    double b = 0.0;
    double m = 0.0;
    bool valid = false;  ///< false when (b, m) violates m > b - 1 or b >= 2
    double p_common = 0.0;
    double p_diverse = 0.0;
    bool diverse_wins = false;
};

/// Row-major over b (outer) then m (inner).
struct RegionGrid {
    std::vector<double> b_grid;
    std::vector<double> m_grid;
    std::vector<RegionCell> cells;

    const RegionCell& at(std::size_t bi, std::size_t mi) const { return cells[bi * m_grid.size() + mi]; }
};

RegionGrid diversity_region(std::span<const double> b_grid, std::span<const double> m_grid);

struct PiDaggerSensitivity {
    double d_db = 0.0;
    double d_dm = 0.0;
};

/// Central differences of pi-dagger with relative step `step`.
PiDaggerSensitivity pi_dagger_sensitivity(const GameParams& params, double step = 1e-4,
                                          AlphaBetaMode mode = AlphaBetaMode::Approximate);

}  // namespace beliefcoop
