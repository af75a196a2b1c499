#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "beliefcoop/errors.hpp"
#include "commands.hpp"

using namespace beliefcoop;
using namespace beliefcoop::cli;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kConvergence = 3, kIo = 4 };

std::string default_out_dir() {
    if (const char* env = std::getenv("BELIEFCOOP_OUT_DIR"); env && *env) return env;
    return "beliefcoop_out";
}

void add_model(CLI::App* sub, double& b, double& m) {
    sub->add_option("--b", b, "Temptation payoff b (> 1)")->capture_default_str();
    sub->add_option("--m", m, "Moral cost m (> b - 1)")->capture_default_str();
}

void add_range(CLI::App* sub, const std::string& name, std::optional<std::array<double, 2>>& target,
               const std::string& help) {
    sub->add_option_function<std::vector<double>>(
           name, [&target](const std::vector<double>& v) { target = std::array<double, 2>{v[0], v[1]}; }, help)
        ->expected(2)
        ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold equilibria of the prisoner's dilemma with honest types and belief heterogeneity"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(BELIEFCOOP_VERSION));

    std::string out_dir = default_out_dir();
    app.add_option("--out", out_dir, "Output directory (default $BELIEFCOOP_OUT_DIR or ./beliefcoop_out)");

    std::optional<Command> command;
    std::string manifest_path;
    bool replay = false;

    CommonArgs common;
    auto* c = app.add_subcommand("common", "Symmetric thresholds under a commonly known belief");
    add_model(c, common.b, common.m);
    c->add_option("--ell-bar", common.ell_bar, "Upper end of the uniform loss support")->capture_default_str();
    auto* c_pi = c->add_option("--pi", common.pi, "Single belief in [0, 1)");
    c->add_option("--pi-grid", common.pi_grid, "Number of beliefs on [0, pi-max]")
        ->capture_default_str()
        ->excludes(c_pi);
    c->add_option("--pi-max", common.pi_max, "Largest grid belief")->capture_default_str();
    c->add_option("--tol", common.tol, "Residual tolerance for interior roots")->capture_default_str();
    c->add_option("--select", common.select, "Which equilibria to report")
        ->check(CLI::IsMember({"all", "lowest", "highest"}))
        ->capture_default_str();
    c->callback([&] { command = common; });

    DiverseArgs diverse;
    auto* d = app.add_subcommand("diverse", "Belief-threshold fixed point under diverse beliefs (uniform/uniform)");
    add_model(d, diverse.b, diverse.m);
    d->add_option("--grid-n", diverse.grid_n, "Knots on the loss grid (odd)")->capture_default_str();
    d->add_option("--tol", diverse.tol, "Sup-norm stopping tolerance")->capture_default_str();
    d->add_option("--max-iter", diverse.max_iter, "Iteration cap")->capture_default_str();
    d->add_option("--alpha-beta", diverse.alpha_beta, "Coefficient pair reported in the summary")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->capture_default_str();
    d->callback([&] { command = diverse; });

    CompareArgs compare;
    auto* k = app.add_subcommand("compare", "Common versus diverse loss thresholds and their crossing belief");
    add_model(k, compare.b, compare.m);
    k->add_option("--pi-grid", compare.pi_grid, "Number of beliefs on [0, pi-max]")->capture_default_str();
    k->add_option("--pi-max", compare.pi_max, "Largest grid belief")->capture_default_str();
    k->add_option("--alpha-beta", compare.alpha_beta, "Coefficient pair for the diverse curve")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->capture_default_str();
    k->callback([&] { command = compare; });

    ExanteArgs exante;
    auto* e = app.add_subcommand("exante", "Ex-ante cooperation probabilities, single pair or (b, m) grid");
    add_model(e, exante.b, exante.m);
    add_range(e, "--b-range", exante.b_range, "lo,hi for b (grid mode)");
    add_range(e, "--m-range", exante.m_range, "lo,hi for m (grid mode)");
    e->add_option("--cells", exante.cells, "Grid points per axis")->capture_default_str();
    e->callback([&] { command = exante; });

    AsymmetricArgs asym;
    auto* a = app.add_subcommand("asymmetric", "Equilibrium with two different commonly known beliefs");
    add_model(a, asym.b, asym.m);
    a->add_option("--ell-bar", asym.ell_bar, "Upper end of the uniform loss support")->capture_default_str();
    a->add_option("--pi1", asym.pi1, "Belief held about player 2")->capture_default_str();
    a->add_option("--pi2", asym.pi2, "Belief held about player 1")->capture_default_str();
    a->add_option("--sweep-pi2", asym.sweep_pi2, "Sweep pi2 over N points on [0, pi2-max]");
    a->add_option("--pi2-max", asym.pi2_max, "Top of the pi2 sweep")->capture_default_str();
    a->callback([&] { command = asym; });

    GroupArgs group;
    auto* g = app.add_subcommand("group", "Thresholds in the n-partner group game");
    g->add_option("--n", group.n, "Number of partners")->capture_default_str();
    add_model(g, group.b, group.m);
    g->add_option("--ell-bar", group.ell_bar, "Upper end of the uniform loss support")->capture_default_str();
    g->add_option("--variant", group.variant, "Indifference equation")
        ->check(CLI::IsMember({"consistent", "as-printed"}))
        ->capture_default_str();
    g->add_option("--pi-grid", group.pi_grid, "Number of beliefs on [0, pi-max]")->capture_default_str();
    g->add_option("--pi-max", group.pi_max, "Largest grid belief")->capture_default_str();
    g->add_option("--grid-n", group.grid_n, "Knots for the diverse threshold curve")->capture_default_str();
    g->add_option("--tol", group.tol, "Tolerance of the diverse fixed point")->capture_default_str();
    g->add_option("--max-iter", group.max_iter, "Iteration cap of the diverse fixed point")->capture_default_str();
    g->callback([&] { command = group; });

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo check of an equilibrium strategy");
    s->add_option("--scenario", sim.scenario, "Belief structure")
        ->check(CLI::IsMember({"common", "diverse", "asymmetric"}))
        ->capture_default_str();
    add_model(s, sim.b, sim.m);
    s->add_option("--ell-bar", sim.ell_bar, "Upper end of the uniform loss support (common, asymmetric)")
        ->capture_default_str();
    s->add_option("--pi", sim.pi, "Common belief")->capture_default_str();
    s->add_option("--pi1", sim.pi1, "Asymmetric: belief of the tallied player")->capture_default_str();
    s->add_option("--pi2", sim.pi2, "Asymmetric: belief of the partner")->capture_default_str();
    s->add_option("--n-samples", sim.n_samples, "Matches to play")->capture_default_str();
    s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    s->callback([&] { command = sim; });

    ReproduceArgs all;
    auto* r = app.add_subcommand("reproduce-all", "Generate every reference dataset into subdirectories of --out");
    r->add_option("--n-samples", all.n_samples, "Matches per simulation")->capture_default_str();
    r->add_option("--seed", all.seed, "Random seed for the simulations")->capture_default_str();
    r->callback([&] { command = all; });

    auto* p = app.add_subcommand("replay", "Re-run a manifest; outputs go next to it unless --out is given");
    p->add_option("--manifest", manifest_path, "Path to a *.manifest.json")->required()->check(CLI::ExistingFile);
    p->callback([&] { replay = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForVersion& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kValidation;
    }

    try {
        std::filesystem::path dir = out_dir;
        if (replay) {
            command = command_from_manifest(read_json(manifest_path));
            if (app.get_option("--out")->count() == 0) {
                dir = std::filesystem::path(manifest_path).parent_path();
                if (dir.empty()) dir = ".";
            }
        }
        for (const std::string& name : execute(*command, dir)) std::cout << (dir / name).string() << '\n';
        return kOk;
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kValidation;
    } catch (const DomainError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kValidation;
    } catch (const RegimeError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kValidation;
    } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << " (last residual " << err.last_residual() << ")\n";
        return kConvergence;
    } catch (const InvariantViolation& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kConvergence;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kIo;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kFailure;
    }
}
