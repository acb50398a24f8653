#ifndef ELLPOISSON_COMMANDS_HPP
#define ELLPOISSON_COMMANDS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cech.hpp"
#include "fo_algebra.hpp"
#include "homological.hpp"
#include "leaves.hpp"
#include "poisson.hpp"
#include "report.hpp"
#include "theta.hpp"

namespace ellpoisson
{

struct RunConfig {
    int n = 3;
    int k = 1;
    double tau_re = 0.0;
    double tau_im = 1.0;
    double eta_re = 1e-2;
    double eta_im = 0.0;
    double truncation_eps = 1e-12;
    // Overrides every per-check tolerance when set.
    std::optional<double> tol;
    int quad_points = 128;
    double radius = 0.0; // 0 selects 1/(4n)
    std::uint64_t seed = 1;
    std::optional<int> samples;
    bool inject_sign_flip = false;

    std::complex<double> tau() const
    {
        return {tau_re, tau_im};
    }
    std::complex<double> eta() const
    {
        return {eta_re, eta_im};
    }
    double tolerance(double fallback) const
    {
        return tol.value_or(fallback);
    }
    QuadratureConfig<double> quadrature() const
    {
        return {quad_points, radius};
    }

    void validate() const
    {
        if (!(tau_im > 0)) {
            throw usage_error("Im(tau) must be positive");
        }
        if (n < 1) {
            throw usage_error("n must be at least 1");
        }
        if (!(truncation_eps > 0 && truncation_eps < 1)) {
            throw usage_error("truncation-eps must lie in (0, 1)");
        }
        if (tol && !(*tol > 0)) {
            throw usage_error("tol must be positive");
        }
        if (quad_points < 32) {
            throw usage_error("quad-points must be at least 32");
        }
        if (radius != 0 && !(radius > 0 && radius < 1.0 / (2.0 * n))) {
            throw usage_error("radius must satisfy 0 < radius < 1/(2n)");
        }
        if (samples && *samples < 0) {
            throw usage_error("samples must be non-negative");
        }
    }

    std::vector<std::pair<std::string, Cell>> describe() const
    {
        std::vector<std::pair<std::string, Cell>> p{
            {"n", std::int64_t{n}},
            {"k", std::int64_t{k}},
            {"tau_re", tau_re},
            {"tau_im", tau_im},
            {"eta_re", eta_re},
            {"eta_im", eta_im},
            {"truncation_eps", truncation_eps},
            {"quad_points", std::int64_t{quad_points}},
            {"radius", radius == 0 ? 1.0 / (4.0 * n) : radius},
            {"seed", static_cast<std::int64_t>(seed)},
        };
        if (tol) {
            p.push_back({"tol", *tol});
        }
        if (samples) {
            p.push_back({"samples", std::int64_t{*samples}});
        }
        if (inject_sign_flip) {
            p.push_back({"inject_sign_flip", true});
        }
        return p;
    }
};

namespace detail
{

inline Report start_report(const std::string &name, const RunConfig &cfg)
{
    cfg.validate();
    Report r;
    r.command = name;
    r.params = cfg.describe();
    return r;
}

class Stopwatch
{
public:
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - m_start).count();
    }

private:
    std::chrono::steady_clock::time_point m_start = std::chrono::steady_clock::now();
};

inline double rel_gap(std::complex<double> a, std::complex<double> b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline ThetaBasis<double> basis_for(const RunConfig &cfg)
{
    if (cfg.n < 2) {
        throw usage_error("n must be at least 2");
    }
    return ThetaBasis<double>(CurveParams<double>(cfg.tau(), cfg.n), cfg.truncation_eps);
}

inline void check_coprime_usage(int n, int k)
{
    if (k < 1 || k >= n || gcd_int(n, k) != 1) {
        throw usage_error("gcd(n,k) must be 1");
    }
}

} // namespace detail

/// Points of the unit disc in each affine coordinate t_1..t_{n−1}, with t_0 = 1.
inline std::vector<std::complex<double>> sample_chart_point(int n, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::complex<double>> t(static_cast<std::size_t>(n));
    t[0] = 1;
    for (int a = 1; a < n; ++a) {
        const double r = std::sqrt(u(rng));
        const double phi = 2 * pi_v<double> * u(rng);
        t[static_cast<std::size_t>(a)] = std::polar(r, phi);
    }
    return t;
}

/// Automorphy (1)–(3) of θ_α at seeded random points, θ''_0(0)/θ'_0(0) = 2πin, and the character c = (n−1)/2.
inline Report cmd_theta(const RunConfig &cfg)
{
    detail::Stopwatch sw;
    Report rep = detail::start_report("theta", cfg);
    const auto B = detail::basis_for(cfg);
    const int n = cfg.n;
    const auto tau = cfg.tau();
    const std::complex<double> tpi(0, 2 * pi_v<double>);
    const int points = cfg.samples.value_or(100);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-0.5, 0.5);
    double r1 = 0, r2 = 0, r3 = 0;
    for (int s = 0; s < points; ++s) {
        const std::complex<double> z(ux(rng), uy(rng) * tau.imag());
        for (int a = 0; a < n; ++a) {
            const auto ta = B.value(a, z);
            r1 = std::max(r1, detail::rel_gap(B.value(a, z + 1.0 / n), B.params().omega_pow(a) * ta));
            const auto f2 = std::exp(-tpi * (z + 1.0 / (2.0 * n) - (n - 1.0) * tau / (2.0 * n)));
            r2 = std::max(r2, detail::rel_gap(B.value(a, z + tau / double(n)), f2 * B.value(a + 1, z)));
            const auto f3 = -std::exp(-tpi * double(a) / double(n)) * std::exp(-tpi * double(n) * z);
            r3 = std::max(r3, detail::rel_gap(B.value(-a, -z), f3 * ta));
        }
    }
    if (points == 0) {
        rep.warnings.push_back("samples = 0: automorphy checks are vacuous");
    }
    const double tol = cfg.tolerance(1e-8);
    rep.check_at_most("theta_alpha(z+1/n) = omega^alpha theta_alpha(z)", r1, tol);
    rep.check_at_most("theta_alpha(z+tau/n) = e(...) theta_alpha+1(z)", r2, tol);
    rep.check_at_most("theta_-alpha(-z) = -e(-alpha/n) e(-nz) theta_alpha(z)", r3, tol);
    const std::complex<double> tpin(0, 2 * pi_v<double> * n);
    rep.check_at_most("theta_0''(0)/theta_0'(0) = 2 pi i n", std::abs(B.dd_at_zero(0) / B.d_at_zero(0) - tpin) / std::abs(tpin),
                      tol);
    double aut = 0;
    for (int a = 0; a < n; ++a) {
        aut = std::max(aut, verify_automorphy(B, (n - 1) / 2.0, [&](std::complex<double> z) { return B.value(a, z); }));
    }
    rep.check_at_most("theta_alpha in Theta_{n,(n-1)/2}", aut, tol);

    Table t{"theta_at_zero", {"alpha", "re_theta", "im_theta", "re_dtheta", "im_dtheta"}, {}};
    for (int a = 0; a < n; ++a) {
        t.rows.push_back({std::int64_t{a}, B.at_zero(a).real(), B.at_zero(a).imag(), B.d_at_zero(a).real(),
                          B.d_at_zero(a).imag()});
    }
    rep.tables.push_back(std::move(t));
    rep.elapsed_ms = sw.ms();
    return rep;
}

/// Sklyanin bracket: Jacobi, skew-symmetry, C = F when k = 1, semiclassical convergence from the relations.
inline Report cmd_sklyanin(const RunConfig &cfg)
{
    detail::Stopwatch sw;
    Report rep = detail::start_report("sklyanin", cfg);
    detail::check_coprime_usage(cfg.n, cfg.k);
    const auto B = detail::basis_for(cfg);
    const auto S = sklyanin_bracket(B, cfg.k);
    rep.check_at_most("jacobi defect", jacobi_defect(S), cfg.tolerance(1e-8));
    rep.check_at_most("skew symmetry", S.skew_defect(), cfg.tolerance(1e-12));
    const auto F = f_constants(B);
    if (cfg.k == 1) {
        const auto C = hn_canonical_extract(S);
        rep.check_at_most("C = F", C.max_abs_difference(F.as_hn_bracket()), cfg.tolerance(1e-10));
    }
    Table ft{"F", {"alpha", "beta", "re", "im"}, {}};
    for (int a = 0; a < cfg.n; ++a) {
        for (int b = 0; b < cfg.n; ++b) {
            ft.rows.push_back({std::int64_t{a}, std::int64_t{b}, F(a, b).real(), F(a, b).imag()});
        }
    }
    rep.tables.push_back(std::move(ft));

    // Three η on a geometric ratio of 10, starting at --eta.
    const std::complex<double> eta0 = cfg.eta();
    if (eta0 == std::complex<double>(0)) {
        throw usage_error("eta must be nonzero");
    }
    const std::vector<std::complex<double>> etas{eta0, eta0 / 10.0, eta0 / 100.0};
    const auto d = semiclassical_diagnostics(B, cfg.k, etas);
    Table st{"semiclassical", {"re_eta", "im_eta", "raw_deviation", "extrapolated_deviation"}, {}};
    std::vector<double> dev;
    for (std::size_t m = 0; m < etas.size(); ++m) {
        dev.push_back(d.extrapolated[m].max_abs_difference(S));
        st.rows.push_back({etas[m].real(), etas[m].imag(), d.raw[m].max_abs_difference(S), dev.back()});
    }
    rep.tables.push_back(std::move(st));
    const double slope = (std::log(dev.front()) - std::log(dev.back())) / std::log(100.0);
    rep.check_at_least("semiclassical log-log slope >= 1", slope, 1.0);
    rep.check_at_most("semiclassical deviation at smallest eta", dev.back(), cfg.tolerance(1e-4));
    rep.elapsed_ms = sw.ms();
    return rep;
}

/// Poisson structure on the moduli of extensions against the projective Sklyanin bracket, k = 1.
inline Report cmd_moduli_compare(const RunConfig &cfg)
{
    detail::Stopwatch sw;
    Report rep = detail::start_report("moduli-compare", cfg);
    if (cfg.k != 1) {
        throw usage_error("unproven case: the comparison is only established for k = 1");
    }
    const auto B = detail::basis_for(cfg);
    const CechContext<double> ctx(B, cfg.quadrature());
    const auto C = f_constants(B).as_hn_bracket();
    const int samples = cfg.samples.value_or(20);
    if (samples == 0) {
        rep.warnings.push_back("samples = 0: comparison is vacuous");
    }
    std::mt19937_64 rng(cfg.seed);
    double agree = 0, deviation = 0;
    Table tab{"samples", {"sample", "agreement", "deviation"}, {}};
    for (int s = 0; s < samples; ++s) {
        const auto t = sample_chart_point(cfg.n, rng);
        const auto a = moduli_bracket(t, ctx, ModuliMethod::closed_form);
        const auto b = moduli_bracket(t, ctx, ModuliMethod::trace_form);
        double ag = 0, th = 0;
        for (int i = 1; i < cfg.n; ++i) {
            for (int j = 1; j < cfg.n; ++j) {
                ag = std::max(ag, std::abs(a[i][j] - b[i][j]));
                th = std::max(th, std::abs(a[i][j] - projective_bracket(C, t, i, j)));
                th = std::max(th, std::abs(b[i][j] - projective_bracket(C, t, i, j)));
            }
        }
        tab.rows.push_back({std::int64_t{s}, ag, th});
        agree = std::max(agree, ag);
        deviation = std::max(deviation, th);
    }
    rep.check_at_most("closed_form vs trace_form", agree, cfg.tolerance(1e-7));
    rep.check_at_most("moduli bracket vs projective Sklyanin bracket", deviation, cfg.tolerance(1e-6));
    rep.tables.push_back(std::move(tab));
    rep.elapsed_ms = sw.ms();
    return rep;
}

/// Stratification by torsion type, the (P^2)^[3] table, and constructed divisor-class instances.
inline Report cmd_leaves(const RunConfig &cfg)
{
    detail::Stopwatch sw;
    Report rep = detail::start_report("leaves", cfg);
    const int n = cfg.n;
    const auto strata = enumerate_strata(n);
    Table t{"strata", {"l", "torsion", "end_dim_torsion", "d_F", "feasible", "table_row"}, {}};
    std::int64_t bound_violations = 0, end_violations = 0;
    std::vector<std::pair<int, long>> tagged;
    for (const auto &r : strata) {
        t.rows.push_back({std::int64_t{r.l}, r.label, std::int64_t{r.end_dim_torsion}, std::int64_t{r.expected_dim},
                          r.feasible, r.table_row});
        if (end_dim_sheaf(r.torsion) < 2 * r.l + 1) {
            ++end_violations;
        }
        if (r.feasible && r.expected_dim > 2 * n - 2 * r.l) {
            ++bound_violations;
        }
        if (!r.table_row.empty()) {
            tagged.push_back({r.l, r.expected_dim});
        }
    }
    rep.tables.push_back(std::move(t));
    rep.check_at_most("end_dim_sheaf >= 2l+1", double(end_violations), 0);
    rep.check_at_most("d_F <= 2n-2l on feasible strata", double(bound_violations), 0);
    if (n == 3) {
        const std::vector<std::pair<int, long>> want{{0, 6}, {1, 4}, {2, 2}, {2, 0}, {3, 0}};
        std::int64_t mismatches = std::abs(static_cast<long>(tagged.size()) - static_cast<long>(want.size()));
        for (std::size_t i = 0; i < std::min(tagged.size(), want.size()); ++i) {
            mismatches += tagged[i] != want[i] ? 1 : 0;
        }
        rep.check_at_most("(P^2)^[3] table rows (l, d_F)", double(mismatches), 0);
    }

    // Z chosen so that Σ Z − Σ D = −3nη, then one point of Z moved by 0.01.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int instances = cfg.samples.value_or(10);
    const double tol = cfg.tolerance(1e-9);
    double worst_ok = 0, worst_bad = std::numeric_limits<double>::infinity();
    const int deg = std::max(1, std::min(n, 3));
    for (int s = 0; s < instances; ++s) {
        DivisorDatum<double> D, Z;
        for (int p = 0; p < deg; ++p) {
            D.points.push_back({{u(rng), u(rng)}, 1});
            Z.points.push_back({{u(rng), u(rng)}, 1});
        }
        Z.points[0].first += D.sum() - Z.sum() - 3.0 * n * cfg.eta();
        worst_ok = std::max(worst_ok, divisor_constraint(n, cfg.eta(), D, Z, cfg.tau(), tol).defect);
        Z.points.back().first += 0.01;
        worst_bad = std::min(worst_bad, divisor_constraint(n, cfg.eta(), D, Z, cfg.tau(), tol).defect);
    }
    if (instances == 0) {
        rep.warnings.push_back("samples = 0: divisor checks are vacuous");
    } else {
        rep.check_at_most("divisor constraint on constructed instances", worst_ok, tol);
        rep.check_at_least("perturbed instances detected (min defect)", worst_bad, tol);
    }
    rep.elapsed_ms = sw.ms();
    return rep;
}

/// Exact cone isomorphism and bivector identities on seeded random Kronecker complexes of dims (n, 2n+1, n).
inline Report cmd_homology(const RunConfig &cfg)
{
    detail::Stopwatch sw;
    Report rep = detail::start_report("homology", cfg);
    const int samples = cfg.samples.value_or(5);
    if (samples == 0) {
        rep.warnings.push_back("samples = 0: no complexes generated, vacuous pass");
    }
    const auto dims = kronecker_dims(1, cfg.n);
    std::mt19937_64 rng(cfg.seed);
    Table t{"instances", {"instance", "dim_C-2", "dim_C-1", "dim_C0", "dim_C1", "dim_C2", "H0_cone", "H0_target"}, {}};
    for (int s = 0; s < samples; ++s) {
        const auto e = random_kronecker_complex(static_cast<std::size_t>(dims[0]), 1, rng);
        const HomComplex H(e);
        const auto report = cone_iso_check(H, {cfg.inject_sign_flip, true});
        const std::string tag = "instance " + std::to_string(s) + ": ";
        if (report.ok) {
            rep.check_at_most(tag + "cone isomorphism identities", 0, 0);
        } else {
            for (const auto &c : report.checks) {
                if (!c.holds) {
                    rep.check_at_most(tag + c.name, double(c.nonzeros), 0);
                }
            }
        }
        const auto pi = pi_bivector(H);
        rep.check_at_most(tag + "Pi chain map", pi.is_chain_map(H) ? 0 : 1, 0);
        rep.check_at_most(tag + "Pi self-dual", pi.is_self_dual() ? 0 : 1, 0);
        const long chi = e.euler_characteristic();
        rep.check_at_most(tag + "Euler characteristic", double(std::abs(H.complex().euler_characteristic() - chi * chi)),
                          0);
        std::vector<Cell> row{std::int64_t{s}};
        for (int d = -2; d <= 2; ++d) {
            row.push_back(static_cast<std::int64_t>(H.dim(d)));
        }
        row.push_back(static_cast<std::int64_t>(report.cone_cohomology[2]));
        row.push_back(static_cast<std::int64_t>(report.target_cohomology[2]));
        t.rows.push_back(std::move(row));
    }
    rep.tables.push_back(std::move(t));
    rep.elapsed_ms = sw.ms();
    return rep;
}

} // namespace ellpoisson

#endif
