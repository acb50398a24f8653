#ifndef ELLPOISSON_THETA_HPP
#define ELLPOISSON_THETA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "types.hpp"

namespace ellpoisson
{

/// Lattice parameter τ of C = ℂ/(ℤ + ℤτ) together with the level n and ω = e^{2πi/n}.
template <typename Real = double>
class CurveParams
{
public:
    using complex_type = complex_t<Real>;

    CurveParams(complex_type tau, int n) : m_tau(tau), m_n(n)
    {
        if (!(tau.imag() > Real(0))) {
            throw std::invalid_argument("Im(tau) must be positive");
        }
        if (n < 2) {
            throw std::invalid_argument("the level n must be at least 2");
        }
        m_omega_pow.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            m_omega_pow.push_back(std::exp(two_pi_i<Real>() * (Real(k) / Real(n))));
        }
    }

    complex_type tau() const
    {
        return m_tau;
    }
    int n() const
    {
        return m_n;
    }
    complex_type omega() const
    {
        return m_omega_pow[1];
    }
    // ω^k for any integer k, read from a table so that equal exponents give bit-identical values.
    complex_type omega_pow(long long k) const
    {
        return m_omega_pow[static_cast<std::size_t>(mod_n(k, m_n))];
    }
    complex_type nome() const
    {
        return std::exp(two_pi_i<Real>() * m_tau);
    }

private:
    complex_type m_tau;
    int m_n;
    std::vector<complex_type> m_omega_pow;
};

/// Value with first and second derivative, multiplied by the Leibniz rule.
template <typename Real>
struct Jet {
    complex_t<Real> value{};
    complex_t<Real> d1{};
    complex_t<Real> d2{};

    friend Jet operator*(const Jet &a, const Jet &b)
    {
        return {a.value * b.value, a.value * b.d1 + a.d1 * b.value,
                a.value * b.d2 + Real(2) * a.d1 * b.d1 + a.d2 * b.value};
    }
    const complex_t<Real> &operator[](int order) const
    {
        return order == 0 ? value : (order == 1 ? d1 : d2);
    }
};

// Smallest M such that every omitted term of θ at an argument with |Im w| <= y_abs
// is below eps/10, including a geometric tail margin.
template <typename Real>
int theta_series_bound(const complex_t<Real> &tau, Real eps, Real y_abs)
{
    const Real s = tau.imag();
    const Real target = std::log(Real(10) / eps) / (Real(2) * pi_v<Real>);
    const Real y = std::abs(y_abs);
    for (int m = 1; m < 100000; ++m) {
        const Real p = Real(m + 1);
        const Real exponent = s * p * (p - Real(1)) / Real(2) - p * y;
        if (exponent >= target + Real(1) && s * p - y >= Real(1)) {
            return m;
        }
    }
    throw std::domain_error("theta series bound does not converge; Im(tau) too small");
}

/// θ(w) = Σ_m (−1)^m e^{2πi(mw + m(m−1)τ/2)} and its first two derivatives,
/// summed over |m| <= terms with term-wise differentiation.
template <typename Real>
Jet<Real> theta_jet(const complex_t<Real> &tau, const complex_t<Real> &w, int terms)
{
    using C = complex_t<Real>;
    const C tpi = two_pi_i<Real>();
    Jet<Real> out;
    // Sum from the outside in so the small tail terms are accumulated first.
    for (int a = terms; a >= 0; --a) {
        for (int m : {a, -a}) {
            if (a == 0 && m != 0) {
                continue;
            }
            const Real mm = Real(m);
            const C e = std::exp(tpi * (mm * w + mm * (mm - Real(1)) / Real(2) * tau));
            const C term = (m % 2 == 0) ? e : -e;
            const C k = tpi * mm;
            out.value += term;
            out.d1 += k * term;
            out.d2 += k * k * term;
            if (a == 0) {
                break;
            }
        }
    }
    return out;
}

/// θ(z; τ) with the truncation chosen so the omitted terms sum below eps.
template <typename Real>
complex_t<Real> theta_eval(const complex_t<Real> &tau, const complex_t<Real> &z, Real eps = Real(1e-12))
{
    if (!(tau.imag() > Real(0))) {
        throw std::invalid_argument("Im(tau) must be positive");
    }
    return theta_jet(tau, z, theta_series_bound(tau, eps, z.imag())).value;
}

template <typename Real>
complex_t<Real> theta_eval(const CurveParams<Real> &params, const complex_t<Real> &z, Real eps = Real(1e-12))
{
    return theta_eval(params.tau(), z, eps);
}

/**
 * The canonical basis θ_0, …, θ_{n−1} of level-n theta functions,
 *
 *   θ_α(z) = Π_{m=0}^{n−1} θ(z + m/n + ατ/n) · exp 2πi(αz + α(α−n)τ/(2n) + α/(2n)),
 *
 * diagonalising translation by 1/n. Values at 0 are tabulated at construction.
 * Immutable after construction.
 */
template <typename Real = double>
class ThetaBasis
{
public:
    using complex_type = complex_t<Real>;

    explicit ThetaBasis(CurveParams<Real> params, Real truncation_eps = Real(1e-12))
        : m_params(std::move(params)), m_eps(truncation_eps)
    {
        if (!(truncation_eps > Real(0))) {
            throw std::invalid_argument("truncation_eps must be positive");
        }
        m_series_bound = theta_series_bound(m_params.tau(), m_eps, m_params.tau().imag());
        const int n = m_params.n();
        m_at_zero.reserve(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            m_at_zero.push_back(jet(a, complex_type(0)));
        }
        if (std::abs(m_at_zero[0].value) > m_eps * std::max(Real(1), std::abs(m_at_zero[0].d1))) {
            throw std::logic_error("theta_0(0) does not vanish; series truncation is broken");
        }
        if (std::abs(m_at_zero[0].d1) == Real(0)) {
            throw degenerate_tau_error("theta_0'(0) vanishes");
        }
    }

    const CurveParams<Real> &params() const
    {
        return m_params;
    }
    int n() const
    {
        return m_params.n();
    }
    complex_type tau() const
    {
        return m_params.tau();
    }
    Real truncation_eps() const
    {
        return m_eps;
    }
    int series_bound() const
    {
        return m_series_bound;
    }

    // Jet of θ_α at z; α is reduced mod n before the defining product is evaluated.
    Jet<Real> jet(long long alpha, const complex_type &z) const
    {
        const int n = m_params.n();
        const int a = mod_n(alpha, n);
        const complex_type tau = m_params.tau();
        const Real rn = Real(n);
        const Real ra = Real(a);

        const complex_type shift = ra * tau / rn;
        const Real y_max = std::abs((z + shift).imag()) + Real(1);
        const int terms = std::max(m_series_bound, theta_series_bound(tau, m_eps, y_max));

        Jet<Real> prod{complex_type(1), complex_type(0), complex_type(0)};
        for (int m = 0; m < n; ++m) {
            prod = prod * theta_jet(tau, z + Real(m) / rn + shift, terms);
        }
        const complex_type k = two_pi_i<Real>() * ra;
        const complex_type e
            = std::exp(two_pi_i<Real>() * (ra * z + ra * (ra - rn) * tau / (Real(2) * rn) + ra / (Real(2) * rn)));
        return prod * Jet<Real>{e, k * e, k * k * e};
    }

    complex_type value(long long alpha, const complex_type &z) const
    {
        return jet(alpha, z).value;
    }

    complex_type deriv(long long alpha, const complex_type &z, int order) const
    {
        if (order < 1 || order > 2) {
            throw std::invalid_argument("derivative order must be 1 or 2");
        }
        return jet(alpha, z)[order];
    }

    // θ_α(0) and θ'_α(0).
    complex_type at_zero(long long alpha) const
    {
        return m_at_zero[static_cast<std::size_t>(mod_n(alpha, n()))].value;
    }
    complex_type d_at_zero(long long alpha) const
    {
        return m_at_zero[static_cast<std::size_t>(mod_n(alpha, n()))].d1;
    }
    complex_type dd_at_zero(long long alpha) const
    {
        return m_at_zero[static_cast<std::size_t>(mod_n(alpha, n()))].d2;
    }

    // Multiplier ζ(z) = −e^{−2πi(z−b)} of the shift by τ/n, with b = (n−1)τ/(2n) + c/n, c = (n−1)/2.
    complex_type zeta(const complex_type &z) const
    {
        const Real rn = Real(n());
        const complex_type b = (rn - Real(1)) * tau() / (Real(2) * rn) + ((rn - Real(1)) / Real(2)) / rn;
        return -std::exp(-two_pi_i<Real>() * (z - b));
    }

private:
    CurveParams<Real> m_params;
    Real m_eps;
    int m_series_bound = 0;
    std::vector<Jet<Real>> m_at_zero;
};

template <typename Real>
complex_t<Real> theta_alpha_eval(const ThetaBasis<Real> &basis, long long alpha, const complex_t<Real> &z)
{
    return basis.value(alpha, z);
}

template <typename Real>
complex_t<Real> theta_alpha_deriv(const ThetaBasis<Real> &basis, long long alpha, const complex_t<Real> &z, int order)
{
    return basis.deriv(alpha, z, order);
}

/// Element Σ_α coeffs[α] θ_α of the level-n theta space.
template <typename Real = double>
struct ThetaSection {
    std::vector<complex_t<Real>> coeffs;

    complex_t<Real> operator()(const ThetaBasis<Real> &basis, const complex_t<Real> &z) const
    {
        check_length(basis.n());
        complex_t<Real> s(0);
        for (std::size_t a = 0; a < coeffs.size(); ++a) {
            if (coeffs[a] != complex_t<Real>(0)) {
                s += coeffs[a] * basis.value(static_cast<long long>(a), z);
            }
        }
        return s;
    }

    void check_length(int n) const
    {
        if (coeffs.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("theta section must have exactly n coefficients");
        }
    }

    static ThetaSection basis_vector(int n, int alpha)
    {
        ThetaSection s{std::vector<complex_t<Real>>(static_cast<std::size_t>(n))};
        s.coeffs[static_cast<std::size_t>(mod_n(alpha, n))] = complex_t<Real>(1);
        return s;
    }
};

enum class HeisenbergGenerator { shift_one_over_n, shift_tau_over_n };

// Action on coefficient vectors: T_{1/n} θ_α = ω^α θ_α and T_{τ/n} θ_α = θ_{α+1}.
template <typename Real>
ThetaSection<Real> heisenberg_act(const ThetaBasis<Real> &basis, HeisenbergGenerator g, const ThetaSection<Real> &s)
{
    const int n = basis.n();
    s.check_length(n);
    ThetaSection<Real> out{std::vector<complex_t<Real>>(static_cast<std::size_t>(n))};
    for (int a = 0; a < n; ++a) {
        const auto &c = s.coeffs[static_cast<std::size_t>(a)];
        if (g == HeisenbergGenerator::shift_one_over_n) {
            out.coeffs[static_cast<std::size_t>(a)] = basis.params().omega_pow(a) * c;
        } else {
            out.coeffs[static_cast<std::size_t>(mod_n(a + 1, n))] = c;
        }
    }
    return out;
}

// The same operators acting on functions: (T_{1/n} f)(z) = f(z + 1/n), (T_{τ/n} f)(z) = ζ(z)^{−1} f(z + τ/n).
template <typename Real, typename F>
complex_t<Real> heisenberg_pointwise(const ThetaBasis<Real> &basis, HeisenbergGenerator g, F &&f, const complex_t<Real> &z)
{
    if (g == HeisenbergGenerator::shift_one_over_n) {
        return f(z + Real(1) / Real(basis.n()));
    }
    return f(z + basis.tau() / Real(basis.n())) / basis.zeta(z);
}

/**
 * Largest normalised residual of the automorphy conditions
 *   f(z+1) = f(z),   f(z+τ) = (−1)^n e^{−2πi(nz−c)} f(z)
 * over a fixed 8×8 grid in the period parallelogram. Returns 0 for f ≡ 0.
 */
template <typename Real, typename F>
Real verify_automorphy(const complex_t<Real> &tau, int n, Real c, F &&f)
{
    using C = complex_t<Real>;
    constexpr int grid = 8;
    Real worst = 0;
    Real scale = 0;
    const Real sign = (n % 2 == 0) ? Real(1) : Real(-1);
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const C z = (Real(a) + Real(0.37)) / Real(grid) + (Real(b) + Real(0.29)) / Real(grid) * tau - Real(0.5) * tau;
            const C fz = f(z);
            const C f1 = f(z + Real(1));
            const C ft = f(z + tau);
            if (!is_finite(fz) || !is_finite(f1) || !is_finite(ft)) {
                std::ostringstream os;
                os << "non-finite sample of f near z = " << z;
                throw std::domain_error(os.str());
            }
            scale = std::max({scale, std::abs(fz), std::abs(f1), std::abs(ft)});
            const C factor = sign * std::exp(-two_pi_i<Real>() * (Real(n) * z - c));
            worst = std::max({worst, std::abs(f1 - fz), std::abs(ft - factor * fz)});
        }
    }
    return scale == Real(0) ? Real(0) : worst / scale;
}

template <typename Real, typename F>
Real verify_automorphy(const ThetaBasis<Real> &basis, Real c, F &&f)
{
    return verify_automorphy(basis.tau(), basis.n(), c, std::forward<F>(f));
}

/// Scans c over {m/(2n) : 0 <= m < 2n} and returns the value of c (mod 1) with the smallest residual.
template <typename Real, typename F>
std::pair<Real, Real> identify_character(const ThetaBasis<Real> &basis, F &&f)
{
    const int n = basis.n();
    std::pair<Real, Real> best{Real(0), std::numeric_limits<Real>::infinity()};
    for (int m = 0; m < 2 * n; ++m) {
        const Real c = Real(m) / Real(2 * n);
        const Real r = verify_automorphy(basis, c, f);
        if (r < best.second) {
            best = {c, r};
        }
    }
    return best;
}

} // namespace ellpoisson

#endif
