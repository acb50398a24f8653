#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ellpoisson/commands.hpp>
#include <ellpoisson/report_io.hpp>

using namespace ellpoisson;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

int emit(const Report &rep, const std::string &format, const std::string &output)
{
    for (const auto &w : rep.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const std::string text = format == "csv" ? to_csv(rep) : to_json(rep).dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << output << '\n';
            return exit_usage;
        }
        f << text;
    }
    return rep.passed() ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Numerical and exact checks for elliptic Poisson structures"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::vector<double> tau{cfg.tau_re, cfg.tau_im};
    std::vector<double> eta{cfg.eta_re, cfg.eta_im};
    double tol = 0;
    int samples = 0;
    std::string format = "json";
    std::string output;

    app.add_option("--n", cfg.n, "level n (number of generators)")->capture_default_str();
    app.add_option("--k", cfg.k, "second index k, coprime to n")->capture_default_str();
    app.add_option("--tau", tau, "tau as RE IM")->expected(2)->allow_extra_args(false);
    app.add_option("--eta", eta, "eta as RE IM")->expected(2)->allow_extra_args(false);
    app.add_option("--truncation-eps", cfg.truncation_eps, "theta series truncation")
        ->envname("ELLPOISSON_TRUNCATION_EPS")
        ->capture_default_str();
    auto *tol_opt = app.add_option("--tol", tol, "override every floating-point tolerance")->envname("ELLPOISSON_TOL");
    app.add_option("--quad-points", cfg.quad_points, "points on each residue circle")->capture_default_str();
    app.add_option("--radius", cfg.radius, "residue circle radius, 0 for 1/(4n)")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    auto *samples_opt = app.add_option("--samples", samples, "number of random samples or instances");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--output", output, "write the report here instead of stdout");
    app.add_flag("--inject-sign-flip", cfg.inject_sign_flip, "flip the sign in the cone isomorphism (test mode)");

    const std::map<std::string, std::function<Report(const RunConfig &)>> commands{
        {"theta", cmd_theta},
        {"sklyanin", cmd_sklyanin},
        {"moduli-compare", cmd_moduli_compare},
        {"leaves", cmd_leaves},
        {"homology", cmd_homology},
    };
    const std::map<std::string, std::string> help{
        {"theta", "automorphy and derivative identities of the theta basis"},
        {"sklyanin", "Jacobi identity, C = F and the semiclassical limit"},
        {"moduli-compare", "moduli bracket against the projective Sklyanin bracket"},
        {"leaves", "leaf dimensions by torsion type and the divisor constraint"},
        {"homology", "exact cone isomorphism on random Kronecker complexes"},
    };
    for (const auto &[name, text] : help) {
        app.add_subcommand(name, text);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }

    cfg.tau_re = tau[0];
    cfg.tau_im = tau[1];
    cfg.eta_re = eta[0];
    cfg.eta_im = eta[1];
    if (*tol_opt) {
        cfg.tol = tol;
    }
    if (*samples_opt) {
        cfg.samples = samples;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return emit(commands.at(name)(cfg), format, output);
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed;
    }
}
