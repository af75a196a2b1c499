#include "commands.hpp"

#include <cmath>

#include "beliefcoop/analysis.hpp"
#include "beliefcoop/common.hpp"
#include "beliefcoop/diverse.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/extensions.hpp"
#include "beliefcoop/montecarlo.hpp"

namespace beliefcoop::cli {

namespace {

namespace fs = std::filesystem;

std::vector<double> belief_grid(std::size_t n, double top) {
    if (n == 0) throw ValidationError("grid needs at least one point");
    if (!(top >= 0.0 && top < 1.0)) throw ValidationError("grid top belief must lie in [0, 1)");
    if (n == 1) return {0.0};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = top * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> linear_grid(std::array<double, 2> range, std::size_t n) {
    if (n < 2) throw ValidationError("range grid needs at least two cells per axis");
    if (!(range[1] > range[0])) throw ValidationError("range must be increasing");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = range[0] + (range[1] - range[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

AlphaBetaMode alpha_beta_mode(const std::string& s) {
    if (s == "exact") return AlphaBetaMode::Exact;
    if (s == "approx") return AlphaBetaMode::Approximate;
    throw ValidationError("alpha-beta mode must be exact or approx, got '" + s + "'");
}

GroupVariant group_variant(const std::string& s) {
    if (s == "consistent") return GroupVariant::Consistent;
    if (s == "as-printed") return GroupVariant::AsPrinted;
    throw ValidationError("group variant must be consistent or as-printed, got '" + s + "'");
}

Scenario scenario_of(const std::string& s) {
    if (s == "common") return Scenario::Common;
    if (s == "diverse") return Scenario::Diverse;
    if (s == "asymmetric") return Scenario::Asymmetric;
    throw ValidationError("scenario must be common, diverse or asymmetric, got '" + s + "'");
}

std::string flag(bool v) { return v ? "1" : "0"; }

Json optional_pair(const std::optional<std::array<double, 2>>& v) { return v ? Json{(*v)[0], (*v)[1]} : Json(nullptr); }

std::optional<std::array<double, 2>> read_pair(const Json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 2) throw ValidationError("range must be a two-element array");
    return std::array<double, 2>{j[0].get<double>(), j[1].get<double>()};
}

Json sections(Json model, Json grid, Json tolerances, Json seed, Json options) {
    Json j;
    j["model"] = std::move(model);
    j["grid"] = std::move(grid);
    j["tolerances"] = std::move(tolerances);
    j["seed"] = std::move(seed);
    j["options"] = std::move(options);
    return j;
}

Json to_sections(const CommonArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}, {"ell_bar", a.ell_bar}},
                    {{"pi", a.pi ? Json(*a.pi) : Json(nullptr)}, {"pi_grid", a.pi_grid}, {"pi_max", a.pi_max}},
                    {{"tol", a.tol}}, nullptr, {{"select", a.select}});
}

Json to_sections(const DiverseArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}, {"loss", "uniform[0,1]"}, {"belief", "uniform[0,1]"}},
                    {{"grid_n", a.grid_n}}, {{"tol", a.tol}, {"max_iter", a.max_iter}}, nullptr,
                    {{"alpha_beta", a.alpha_beta}});
}

Json to_sections(const CompareArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}}, {{"pi_grid", a.pi_grid}, {"pi_max", a.pi_max}}, Json::object(), nullptr,
                    {{"alpha_beta", a.alpha_beta}});
}

Json to_sections(const ExanteArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}},
                    {{"b_range", optional_pair(a.b_range)}, {"m_range", optional_pair(a.m_range)}, {"cells", a.cells}},
                    Json::object(), nullptr, Json::object());
}

Json to_sections(const AsymmetricArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}, {"ell_bar", a.ell_bar}, {"pi1", a.pi1}, {"pi2", a.pi2}},
                    {{"sweep_pi2", a.sweep_pi2}, {"pi2_max", a.pi2_max}}, Json::object(), nullptr, Json::object());
}

Json to_sections(const GroupArgs& a) {
    return sections({{"n", a.n}, {"b", a.b}, {"m", a.m}, {"ell_bar", a.ell_bar}},
                    {{"pi_grid", a.pi_grid}, {"pi_max", a.pi_max}, {"grid_n", a.grid_n}},
                    {{"tol", a.tol}, {"max_iter", a.max_iter}}, nullptr, {{"variant", a.variant}});
}

Json to_sections(const SimulateArgs& a) {
    return sections({{"b", a.b}, {"m", a.m}, {"ell_bar", a.ell_bar}, {"pi", a.pi}, {"pi1", a.pi1}, {"pi2", a.pi2}},
                    {{"n_samples", a.n_samples}}, Json::object(), a.seed, {{"scenario", a.scenario}});
}

Json to_sections(const ReproduceArgs& a) {
    return sections(Json::object(), {{"n_samples", a.n_samples}}, Json::object(), a.seed, Json::object());
}

template <class T>
void load(const Json& j, const char* section, const char* key, T& out) {
    out = j.at(section).at(key).get<T>();
}

Command from_sections(const std::string& name, const Json& j) {
    if (name == "common") {
        CommonArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "model", "ell_bar", a.ell_bar);
        const Json& pi = j.at("grid").at("pi");
        if (!pi.is_null()) a.pi = pi.get<double>();
        load(j, "grid", "pi_grid", a.pi_grid);
        load(j, "grid", "pi_max", a.pi_max);
        load(j, "tolerances", "tol", a.tol);
        load(j, "options", "select", a.select);
        return a;
    }
    if (name == "diverse") {
        DiverseArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "grid", "grid_n", a.grid_n);
        load(j, "tolerances", "tol", a.tol);
        load(j, "tolerances", "max_iter", a.max_iter);
        load(j, "options", "alpha_beta", a.alpha_beta);
        return a;
    }
    if (name == "compare") {
        CompareArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "grid", "pi_grid", a.pi_grid);
        load(j, "grid", "pi_max", a.pi_max);
        load(j, "options", "alpha_beta", a.alpha_beta);
        return a;
    }
    if (name == "exante") {
        ExanteArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        a.b_range = read_pair(j.at("grid").at("b_range"));
        a.m_range = read_pair(j.at("grid").at("m_range"));
        load(j, "grid", "cells", a.cells);
        return a;
    }
    if (name == "asymmetric") {
        AsymmetricArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "model", "ell_bar", a.ell_bar);
        load(j, "model", "pi1", a.pi1);
        load(j, "model", "pi2", a.pi2);
        load(j, "grid", "sweep_pi2", a.sweep_pi2);
        load(j, "grid", "pi2_max", a.pi2_max);
        return a;
    }
    if (name == "group") {
        GroupArgs a;
        load(j, "model", "n", a.n);
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "model", "ell_bar", a.ell_bar);
        load(j, "grid", "pi_grid", a.pi_grid);
        load(j, "grid", "pi_max", a.pi_max);
        load(j, "grid", "grid_n", a.grid_n);
        load(j, "tolerances", "tol", a.tol);
        load(j, "tolerances", "max_iter", a.max_iter);
        load(j, "options", "variant", a.variant);
        return a;
    }
    if (name == "simulate") {
        SimulateArgs a;
        load(j, "model", "b", a.b);
        load(j, "model", "m", a.m);
        load(j, "model", "ell_bar", a.ell_bar);
        load(j, "model", "pi", a.pi);
        load(j, "model", "pi1", a.pi1);
        load(j, "model", "pi2", a.pi2);
        load(j, "grid", "n_samples", a.n_samples);
        a.seed = j.at("seed").get<std::uint64_t>();
        load(j, "options", "scenario", a.scenario);
        return a;
    }
    if (name == "reproduce-all") {
        ReproduceArgs a;
        load(j, "grid", "n_samples", a.n_samples);
        a.seed = j.at("seed").get<std::uint64_t>();
        return a;
    }
    throw ValidationError("unknown command '" + name + "' in manifest");
}

std::string write_manifest(const Command& command, const fs::path& dir, const std::vector<std::string>& outputs) {
    Json j;
    j["command"] = command_name(command);
    j["version"] = BELIEFCOOP_VERSION;
    const Json body = manifest_sections(command);
    for (const auto& [key, value] : body.items()) j[key] = value;
    j["outputs"] = outputs;
    return write_file(dir, std::string(command_name(command)) + ".manifest.json", j.dump(2) + "\n");
}

std::vector<std::string> run(const CommonArgs& a, const fs::path& dir) {
    const GameParams p = validate_params(a.b, a.m);
    const auto F = LossDistribution::uniform(a.ell_bar);
    if (a.select != "all" && a.select != "lowest" && a.select != "highest") {
        throw ValidationError("select must be all, lowest or highest, got '" + a.select + "'");
    }
    CommonSolverOptions opts;
    opts.tol = a.tol;
    const std::vector<double> beliefs = a.pi ? std::vector<double>{*a.pi} : belief_grid(a.pi_grid, a.pi_max);

    CsvTable csv({"pi", "regime", "ell_low", "ell_high", "ell_corner"});
    for (double pi : beliefs) {
        const EquilibriumSet eq = solve_common_equilibria(pi, p, F, opts);
        std::optional<double> low = eq.low();
        std::optional<double> high = eq.high();
        std::optional<double> corner = eq.corner();
        if (a.select != "all") {
            const double keep = a.select == "lowest" ? eq.lowest() : eq.highest();
            if (low && *low != keep) low.reset();
            if (high && *high != keep) high.reset();
            if (corner && *corner != keep) corner.reset();
        }
        csv.add({format_number(pi), std::string(to_string(eq.regime)), format_number(low), format_number(high),
                 format_number(corner)});
    }
    return {write_file(dir, "common.csv", csv.str())};
}

std::vector<std::string> run(const DiverseArgs& a, const fs::path& dir) {
    const GameParams p = validate_params(a.b, a.m);
    const AlphaBetaMode mode = alpha_beta_mode(a.alpha_beta);
    const auto F = LossDistribution::uniform(1.0);
    const auto G = BeliefDistribution::uniform();
    DiverseOptions opts;
    opts.grid_size = a.grid_n;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    const DiverseSolution sol = solve_diverse_threshold(p, F, G, opts);
    const AlphaBeta ab = solve_alpha_beta(p, mode);

    CsvTable csv({"ell", "pi_star_d"});
    const auto knots = sol.threshold.knots();
    const auto values = sol.threshold.values();
    for (std::size_t i = 0; i < knots.size(); ++i) csv.add({format_number(knots[i]), format_number(values[i])});

    Json summary;
    summary["alpha"] = ab.alpha;
    summary["beta"] = ab.beta;
    summary["alpha_beta"] = std::string(to_string(ab.mode));
    summary["iterations"] = sol.iterations;
    summary["residual"] = sol.residual;
    summary["contraction_gamma"] = sol.contraction_gamma;
    summary["damped"] = sol.damped;
    summary["p_coop"] = sol.coop_prob;
    return {write_file(dir, "diverse.csv", csv.str()), write_file(dir, "diverse.json", summary.dump(2) + "\n")};
}

std::vector<std::string> run(const CompareArgs& a, const fs::path& dir) {
    const GameParams p = validate_params(a.b, a.m);
    const AlphaBeta ab = solve_alpha_beta(p, alpha_beta_mode(a.alpha_beta));
    CsvTable csv({"pi", "ell_star_c", "ell_star_d", "diff"});
    for (double pi : belief_grid(a.pi_grid, a.pi_max)) {
        const double c = closed_form_common_uniform(pi, p);
        const double d = closed_form_diverse_uniform(pi, p, ab);
        csv.add({format_number(pi), format_number(c), format_number(d), format_number(c - d)});
    }

    Json summary;
    summary["alpha"] = ab.alpha;
    summary["beta"] = ab.beta;
    summary["alpha_beta"] = std::string(to_string(ab.mode));
    summary["pi_dagger"] = solve_pi_dagger(p, ab);
    summary["crossing_interval"] = {ab.beta, diverse_upper_kink(p, ab)};
    summary["pi_low"] = p.pi_low();
    try {
        const PiDaggerSensitivity s = pi_dagger_sensitivity(p, 1e-4, ab.mode);
        summary["d_pi_dagger_db"] = s.d_db;
        summary["d_pi_dagger_dm"] = s.d_dm;
    } catch (const ValidationError&) {
        // b at the lower edge: no two-sided difference in b.
        summary["d_pi_dagger_db"] = nullptr;
        summary["d_pi_dagger_dm"] = nullptr;
    }
    return {write_file(dir, "compare.csv", csv.str()), write_file(dir, "compare.json", summary.dump(2) + "\n")};
}

std::vector<std::string> run(const ExanteArgs& a, const fs::path& dir) {
    if (a.b_range.has_value() != a.m_range.has_value()) {
        throw ValidationError("range mode needs both --b-range and --m-range");
    }
    if (a.b_range) {
        const auto bs = linear_grid(*a.b_range, a.cells);
        const auto ms = linear_grid(*a.m_range, a.cells);
        const RegionGrid grid = diversity_region(bs, ms);
        CsvTable csv({"b", "m", "p_c", "p_d", "diverse_wins"});
        for (const RegionCell& c : grid.cells) {
            if (c.valid) {
                csv.add({format_number(c.b), format_number(c.m), format_number(c.p_common), format_number(c.p_diverse),
                         flag(c.diverse_wins)});
            } else {
                csv.add({format_number(c.b), format_number(c.m), "", "", ""});
            }
        }
        return {write_file(dir, "exante.csv", csv.str())};
    }
    const GameParams p = validate_params(a.b, a.m);
    if (p.b() < 2.0) throw ValidationError("ex-ante probabilities need b >= 2");
    const AlphaBeta ab = solve_alpha_beta(p, AlphaBetaMode::Approximate);
    CsvTable csv({"b", "m", "method", "p_c", "p_d", "diverse_wins"});
    for (ExAnteMethod method : {ExAnteMethod::ClosedForm, ExAnteMethod::Quadrature}) {
        const double pc = ex_ante_p_common(p, method);
        const double pd = ex_ante_p_diverse(p, ab, method);
        csv.add({format_number(a.b), format_number(a.m), std::string(to_string(method)), format_number(pc),
                 format_number(pd), flag(pd > pc)});
    }
    return {write_file(dir, "exante.csv", csv.str())};
}

std::vector<std::string> run(const AsymmetricArgs& a, const fs::path& dir) {
    const GameParams p = validate_params(a.b, a.m);
    const auto F = LossDistribution::uniform(a.ell_bar);
    std::vector<double> pi2s{a.pi2};
    if (a.sweep_pi2 > 0) pi2s = belief_grid(a.sweep_pi2, a.pi2_max);

    CsvTable csv({"pi1", "pi2", "ell1_hat", "ell2_hat", "d_ell1_d_pi2"});
    for (double pi2 : pi2s) {
        const AsymmetricEquilibrium eq = solve_asymmetric(a.pi1, pi2, p, F);
        std::optional<double> slope;
        if (a.pi1 < p.pi_low() && p.pi_low() < pi2) {
            try {
                slope = asymmetric_sensitivity(a.pi1, pi2, p, F);
            } catch (const RegimeError&) {
            } catch (const ValidationError&) {
            }
        }
        csv.add({format_number(a.pi1), format_number(pi2), format_number(eq.ell1_hat), format_number(eq.ell2_hat),
                 format_number(slope)});
    }
    return {write_file(dir, "asymmetric.csv", csv.str())};
}

std::vector<std::string> run(const GroupArgs& a, const fs::path& dir) {
    if (a.n < 1) throw ValidationError("group size n must be at least 1");
    const GameParams p = validate_params(a.b, a.m);
    const GroupVariant variant = group_variant(a.variant);
    const auto F = LossDistribution::uniform(a.ell_bar);
    const auto G = BeliefDistribution::uniform();
    GroupDiverseOptions opts;
    opts.grid_size = a.grid_n;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    const GroupDiverseSolution diverse = solve_group_diverse(a.n, p, F, G, variant, opts);

    CsvTable csv({"n", "pi", "ell_n_common", "ell_n_diverse"});
    for (double pi : belief_grid(a.pi_grid, a.pi_max)) {
        const GroupSolution common = solve_group_common(a.n, pi, p, F, variant);
        csv.add({std::to_string(a.n), format_number(pi), format_number(common.threshold),
                 format_number(diverse.threshold.eval(pi))});
    }
    return {write_file(dir, "group.csv", csv.str())};
}

Json report_json(const SimReport& r) {
    static constexpr const char* kCells[2][2] = {{"CC", "CD"}, {"DC", "DD"}};
    Json j;
    j["scenario"] = std::string(to_string(r.scenario));
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["coop_rate_strategic"] = r.coop_rate_strategic;
    j["half_width"] = r.half_width;
    j["analytic_prediction"] = r.analytic_prediction;
    j["max_deviation_gain"] = r.max_deviation_gain;
    j["mean_payoff_cooperate"] = r.mean_payoff_cooperate;
    j["mean_payoff_defect"] = r.mean_payoff_defect;
    Json counts;
    Json means;
    for (std::size_t own = 0; own < 2; ++own) {
        for (std::size_t partner = 0; partner < 2; ++partner) {
            counts[kCells[own][partner]] = r.cell_counts[own][partner];
            means[kCells[own][partner]] = r.cell_mean_payoff[own][partner];
        }
    }
    j["cell_counts"] = counts;
    j["cell_mean_payoff"] = means;
    return j;
}

std::vector<std::string> run(const SimulateArgs& a, const fs::path& dir) {
    const GameParams p = validate_params(a.b, a.m);
    SimConfig cfg;
    cfg.scenario = scenario_of(a.scenario);
    cfg.pi = a.pi;
    cfg.pi1 = a.pi1;
    cfg.pi2 = a.pi2;
    cfg.n_samples = a.n_samples;
    cfg.seed = a.seed;
    validate(cfg);
    // The diverse scenario lives on uniform losses over [0, 1].
    const auto F = LossDistribution::uniform(cfg.scenario == Scenario::Diverse ? 1.0 : a.ell_bar);
    const SimReport r = simulate(cfg, p, F, BeliefDistribution::uniform());
    return {write_file(dir, "simulate.json", report_json(r).dump(2) + "\n")};
}

std::vector<std::string> run(const ReproduceArgs& a, const fs::path& dir) {
    std::vector<std::pair<std::string, Command>> jobs;

    CommonArgs regimes;
    regimes.pi_grid = 401;
    regimes.pi_max = 0.1;
    jobs.emplace_back("regimes_common", regimes);

    CommonArgs unit_losses;
    unit_losses.b = 2.0;
    unit_losses.m = 8.0;
    unit_losses.ell_bar = 1.0;
    unit_losses.select = "lowest";
    jobs.emplace_back("thresholds_common", unit_losses);

    jobs.emplace_back("thresholds_diverse", DiverseArgs{});
    jobs.emplace_back("crossing", CompareArgs{});
    CompareArgs sens;
    sens.b = 3.0;
    sens.m = 20.0;
    jobs.emplace_back("crossing_b3_m20", sens);

    AsymmetricArgs sweep;
    sweep.sweep_pi2 = 101;
    jobs.emplace_back("asymmetric_sweep", sweep);

    ExanteArgs region;
    region.b_range = std::array<double, 2>{2.0, 6.0};
    region.m_range = std::array<double, 2>{1.5, 60.0};
    jobs.emplace_back("exante_region", region);

    jobs.emplace_back("group", GroupArgs{});

    SimulateArgs sim;
    sim.n_samples = a.n_samples;
    sim.seed = a.seed;
    jobs.emplace_back("simulate_common", sim);
    sim.scenario = "diverse";
    sim.b = 2.0;
    sim.m = 8.0;
    jobs.emplace_back("simulate_diverse", sim);

    std::vector<std::string> written;
    for (const auto& [sub, job] : jobs) {
        for (const std::string& name : execute(job, dir / sub)) written.push_back(sub + "/" + name);
    }
    return written;
}

}  // namespace

std::string_view command_name(const Command& command) {
    static constexpr std::string_view kNames[] = {"common", "diverse",  "compare",  "exante",
                                                  "asymmetric", "group", "simulate", "reproduce-all"};
    return kNames[command.index()];
}

Json manifest_sections(const Command& command) {
    return std::visit([](const auto& a) { return to_sections(a); }, command);
}

Command command_from_manifest(const Json& manifest) {
    try {
        return from_sections(manifest.at("command").get<std::string>(), manifest);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("incomplete manifest: ") + e.what());
    }
}

std::vector<std::string> execute(const Command& command, const fs::path& dir) {
    std::vector<std::string> outputs = std::visit([&](const auto& a) { return run(a, dir); }, command);
    outputs.push_back(write_manifest(command, dir, outputs));
    return outputs;
}

}  // namespace beliefcoop::cli
