#ifndef ELLPOISSON_TESTS_ORACLES_HPP
#define ELLPOISSON_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <ellpoisson/poisson.hpp>
#include <ellpoisson/polynomial.hpp>

namespace oracle
{

using cd = std::complex<double>;
inline const double pi = std::acos(-1.0);

// Direct sum of the theta series over |m| <= M, no tail bookkeeping.
inline cd theta_bruteforce(cd tau, cd z, int M = 50)
{
    cd s = 0;
    for (int m = -M; m <= M; ++m) {
        const cd e = std::exp(cd(0, 2 * pi) * (double(m) * z + double(m) * double(m - 1) / 2.0 * tau));
        s += (m % 2 == 0) ? e : -e;
    }
    return s;
}

// θ_α straight from the product formula, built on the brute-force series.
inline cd theta_alpha_bruteforce(cd tau, int n, int alpha, cd z)
{
    cd p = 1;
    for (int m = 0; m < n; ++m) {
        p *= theta_bruteforce(tau, z + double(m) / n + double(alpha) * tau / double(n));
    }
    const double a = alpha;
    return p * std::exp(cd(0, 2 * pi) * (a * z + a * (a - n) * tau / (2.0 * n) + a / (2.0 * n)));
}

template <typename F>
cd central_difference(F &&f, cd z, double h = 1e-5)
{
    return (f(z + h) - f(z - h)) / (2 * h);
}

template <typename F>
cd central_second_difference(F &&f, cd z, double h = 1e-4)
{
    return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
}

// {f, g} = Σ_{i,j} {x_i, x_j} ∂_i f ∂_j g, contracting the bivector directly.
inline ellpoisson::Polynomial<double> bivector_contraction(const ellpoisson::QuadraticBracket<double> &b,
                                                           const ellpoisson::Polynomial<double> &f,
                                                           const ellpoisson::Polynomial<double> &g)
{
    const int n = b.n();
    ellpoisson::Polynomial<double> out(n);
    for (int i = 0; i < n; ++i) {
        const auto fi = f.derivative(i);
        if (fi.is_zero()) {
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const auto gj = g.derivative(j);
            if (gj.is_zero()) {
                continue;
            }
            ellpoisson::Polynomial<double> lam(n);
            for (int k = 0; k < n; ++k) {
                for (int l = k; l < n; ++l) {
                    std::vector<int> e(static_cast<std::size_t>(n), 0);
                    ++e[static_cast<std::size_t>(k)];
                    ++e[static_cast<std::size_t>(l)];
                    lam.add_term(e, b.coeff(i, j, k, l));
                }
            }
            out += lam * fi * gj;
        }
    }
    return out;
}

// {x_i/x_0, x_j/x_0} at x = t, t_0 = 1, from the homogeneous bracket via the quotient rule.
inline cd chart_rule(const ellpoisson::QuadraticBracket<double> &b, const std::vector<cd> &t, int i, int j)
{
    auto ev = [&](int a, int c) {
        cd s = 0;
        for (int k = 0; k < b.n(); ++k) {
            for (int l = k; l < b.n(); ++l) {
                s += b.coeff(a, c, k, l) * t[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(l)];
            }
        }
        return s;
    };
    return ev(i, j) - t[static_cast<std::size_t>(i)] * ev(0, j) - t[static_cast<std::size_t>(j)] * ev(i, 0);
}

inline ellpoisson::Polynomial<double> random_poly(int n, int degree, int terms, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> var(0, n - 1);
    std::uniform_real_distribution<double> u(-1, 1);
    ellpoisson::Polynomial<double> p(n);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        for (int d = 0; d < degree; ++d) {
            ++e[static_cast<std::size_t>(var(rng))];
        }
        p.add_term(e, cd(u(rng), u(rng)));
    }
    return p;
}

inline cd random_point(std::mt19937_64 &rng, double re_span = 1.0, double im_lo = -0.4, double im_hi = 0.4)
{
    std::uniform_real_distribution<double> re(0, re_span);
    std::uniform_real_distribution<double> im(im_lo, im_hi);
    return {re(rng), im(rng)};
}

} // namespace oracle

#endif
