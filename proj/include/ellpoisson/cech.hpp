#ifndef ELLPOISSON_CECH_HPP
#define ELLPOISSON_CECH_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fo_algebra.hpp"
#include "theta.hpp"
#include "types.hpp"

namespace ellpoisson
{

/// Trapezoid rule on the circle |z − center| = radius; radius 0 selects 1/(4n).
template <typename Real = double>
struct QuadratureConfig {
    int circle_points = 128;
    Real radius = 0;

    Real resolved_radius(int n) const
    {
        return radius == Real(0) ? Real(1) / Real(4 * n) : radius;
    }

    void validate(int n) const
    {
        if (circle_points < 32) {
            throw std::invalid_argument("quad_points must be at least 32");
        }
        const Real r = resolved_radius(n);
        if (!(r > Real(0)) || !(r < Real(1) / Real(2 * n))) {
            throw std::invalid_argument("radius must satisfy 0 < radius < 1/(2n)");
        }
    }
};

namespace detail
{

template <typename Real>
std::vector<complex_t<Real>> circle_offsets(int m, Real radius)
{
    std::vector<complex_t<Real>> u(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        u[static_cast<std::size_t>(j)] = std::polar(radius, Real(2) * pi_v<Real> * Real(j) / Real(m));
    }
    return u;
}

} // namespace detail

/// Laurent coefficients c_m of f around center, m_min <= m <= m_max, from circle samples.
template <typename Real, typename F>
std::vector<complex_t<Real>> laurent_coeffs(F &&f, complex_t<Real> center, int m_min, int m_max, int circle_points,
                                            Real radius)
{
    if (m_min > m_max) {
        throw std::invalid_argument("empty Laurent window");
    }
    if (circle_points < 1 || !(radius > Real(0))) {
        throw std::invalid_argument("invalid quadrature configuration");
    }
    const auto u = detail::circle_offsets(circle_points, radius);
    std::vector<complex_t<Real>> vals(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        vals[j] = f(center + u[j]);
        if (!is_finite(vals[j])) {
            std::ostringstream os;
            os << "contour hits a singularity: non-finite sample at z = " << center + u[j];
            throw contour_error(os.str());
        }
    }
    std::vector<complex_t<Real>> c;
    for (int m = m_min; m <= m_max; ++m) {
        complex_t<Real> s(0);
        for (std::size_t j = 0; j < u.size(); ++j) {
            s += vals[j] * std::pow(u[j], -m);
        }
        c.push_back(s / Real(circle_points));
    }
    return c;
}

template <typename Real, typename F>
std::vector<complex_t<Real>> laurent_coeffs(F &&f, complex_t<Real> center, int m_min, int m_max,
                                            const QuadratureConfig<Real> &q, int n)
{
    q.validate(n);
    return laurent_coeffs<Real>(std::forward<F>(f), center, m_min, m_max, q.circle_points, q.resolved_radius(n));
}

/// A function on the punctured disc around k/n, given by its values at absolute z.
template <typename Real = double>
struct DiscLocalFunction {
    int center_index = 0;
    std::function<complex_t<Real>(complex_t<Real>)> evaluator;
    int pole_order_bound = 1;
};

/// One local function per point k/n of D.
template <typename Real = double>
struct CechCocycle {
    std::vector<DiscLocalFunction<Real>> locals;
};

/// Σ_α coeffs[α] φ_α with φ_α = θ_α/θ_0.
template <typename Real = double>
struct GlobalSection {
    std::vector<complex_t<Real>> coeffs;

    complex_t<Real> operator()(const ThetaBasis<Real> &basis, complex_t<Real> z) const
    {
        if (coeffs.size() != static_cast<std::size_t>(basis.n())) {
            throw std::invalid_argument("global section must have n coefficients");
        }
        const complex_t<Real> t0 = basis.value(0, z);
        complex_t<Real> s(0);
        for (std::size_t a = 0; a < coeffs.size(); ++a) {
            if (coeffs[a] != complex_t<Real>(0)) {
                s += coeffs[a] * (a == 0 ? t0 : basis.value(static_cast<long long>(a), z));
            }
        }
        return s / t0;
    }
};

template <typename Real>
complex_t<Real> phi_eval(const ThetaBasis<Real> &basis, long long alpha, complex_t<Real> z)
{
    return basis.value(alpha, z) / basis.value(0, z);
}

/// tr(c) = (1/n) Σ_k Res_{z=k/n} c.
template <typename Real>
complex_t<Real> trace(const CechCocycle<Real> &c, int n, const QuadratureConfig<Real> &q)
{
    if (c.locals.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("cocycle must have one local function per point of D");
    }
    complex_t<Real> s(0);
    for (const auto &loc : c.locals) {
        const complex_t<Real> center(Real(loc.center_index) / Real(n), Real(0));
        s += laurent_coeffs<Real>(loc.evaluator, center, -1, -1, q, n)[0];
    }
    return s / Real(n);
}

namespace detail
{

template <typename Real>
void check_psi_nondegenerate(const ThetaBasis<Real> &basis)
{
    const Real scale = std::abs(basis.d_at_zero(0));
    for (int a = 1; a < basis.n(); ++a) {
        if (std::abs(basis.at_zero(a)) < Real(1e-10) * scale) {
            std::ostringstream os;
            os << "theta_" << a << "(k/n) vanishes for this tau";
            throw degenerate_tau_error(os.str());
        }
    }
}

} // namespace detail

/// ψ_α on disc k: θ'_0(0)/θ_α(k/n) = θ'_0(0) ω^{−αk}/θ_α(0) for α ≠ 0, and 1/(z − k/n) for α = 0.
template <typename Real>
complex_t<Real> psi_constant(const ThetaBasis<Real> &basis, long long alpha, int k)
{
    return basis.d_at_zero(0) * basis.params().omega_pow(-alpha * k) / basis.at_zero(alpha);
}

template <typename Real>
std::vector<CechCocycle<Real>> psi_basis(const ThetaBasis<Real> &basis)
{
    detail::check_psi_nondegenerate(basis);
    const int n = basis.n();
    std::vector<CechCocycle<Real>> out(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        for (int k = 0; k < n; ++k) {
            DiscLocalFunction<Real> loc;
            loc.center_index = k;
            if (a == 0) {
                const Real c = Real(k) / Real(n);
                loc.evaluator = [c](complex_t<Real> z) { return complex_t<Real>(1) / (z - c); };
                loc.pole_order_bound = 1;
            } else {
                const complex_t<Real> v = psi_constant(basis, a, k);
                loc.evaluator = [v](complex_t<Real>) { return v; };
                loc.pole_order_bound = 0;
            }
            out[static_cast<std::size_t>(a)].locals.push_back(std::move(loc));
        }
    }
    return out;
}

/// Σ_γ phi[γ] φ_γ + Σ_γ dphi[γ] φ'_γ, the shape every P_+ closed form takes.
template <typename Real = double>
struct PhiCombination {
    std::vector<complex_t<Real>> phi;
    std::vector<complex_t<Real>> dphi;

    explicit PhiCombination(int n = 0)
        : phi(static_cast<std::size_t>(n)), dphi(static_cast<std::size_t>(n))
    {}

    PhiCombination &operator+=(const PhiCombination &o)
    {
        for (std::size_t a = 0; a < phi.size(); ++a) {
            phi[a] += o.phi[a];
            dphi[a] += o.dphi[a];
        }
        return *this;
    }
    PhiCombination &operator*=(complex_t<Real> s)
    {
        for (std::size_t a = 0; a < phi.size(); ++a) {
            phi[a] *= s;
            dphi[a] *= s;
        }
        return *this;
    }
};

/// Closed forms for P_+(ψ_α φ_β).
/// Diagonal products ψ_α φ_α are only covered inside combinations with zero coefficient sum.
template <typename Real>
PhiCombination<Real> p_plus(long long alpha, long long beta, const FConstants<Real> &F)
{
    const int n = F.n();
    const int a = mod_n(alpha, n);
    const int b = mod_n(beta, n);
    PhiCombination<Real> out(n);
    if (a == b) {
        throw std::invalid_argument("P_+(psi_a phi_a) is defined only for combinations with zero coefficient sum");
    }
    if (b == 0) {
        return out;
    }
    if (a == 0) {
        out.dphi[static_cast<std::size_t>(b)] = complex_t<Real>(-1);
        out.phi[static_cast<std::size_t>(b)] = F(0, b);
        return out;
    }
    out.phi[static_cast<std::size_t>(mod_n(b - a, n))] = F(a, b - a);
    return out;
}

template <typename Real>
PhiCombination<Real> p_plus(long long alpha, long long beta, const ThetaBasis<Real> &basis)
{
    return p_plus(alpha, beta, f_constants(basis));
}

// P_+(Σ c_α ψ_α φ_α) = 0 when Σ c_α = 0.
template <typename Real>
PhiCombination<Real> p_plus_diagonal(const std::vector<complex_t<Real>> &c, Real tol = Real(1e-12))
{
    complex_t<Real> s(0);
    Real scale = 0;
    for (const auto &x : c) {
        s += x;
        scale = std::max(scale, std::abs(x));
    }
    if (std::abs(s) > tol * std::max(Real(1), scale)) {
        throw std::invalid_argument("diagonal combination must have zero coefficient sum");
    }
    return PhiCombination<Real>(static_cast<int>(c.size()));
}

/**
 * Samples of φ_α, φ'_α and ψ_α at the quadrature nodes around every point k/n, shared by the
 * residue computations below. Immutable after construction.
 */
template <typename Real = double>
class CechContext
{
public:
    using complex_type = complex_t<Real>;
    using samples = std::vector<complex_type>;

    CechContext(ThetaBasis<Real> basis, QuadratureConfig<Real> q = {})
        : m_basis(std::move(basis)), m_q(q), m_f(m_basis)
    {
        const int n = m_basis.n();
        m_q.validate(n);
        detail::check_psi_nondegenerate(m_basis);
        const int M = m_q.circle_points;
        m_u = detail::circle_offsets(M, m_q.resolved_radius(n));
        m_phi.assign(static_cast<std::size_t>(n * n), samples(static_cast<std::size_t>(M)));
        m_dphi = m_phi;
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < M; ++j) {
                const complex_type z = Real(k) / Real(n) + m_u[static_cast<std::size_t>(j)];
                const Jet<Real> t0 = m_basis.jet(0, z);
                for (int a = 0; a < n; ++a) {
                    const Jet<Real> ta = a == 0 ? t0 : m_basis.jet(a, z);
                    const complex_type v = ta.value / t0.value;
                    const complex_type dv = (ta.d1 * t0.value - ta.value * t0.d1) / (t0.value * t0.value);
                    if (!is_finite(v) || !is_finite(dv)) {
                        throw contour_error("contour hits a singularity of phi");
                    }
                    m_phi[slot(k, a)][static_cast<std::size_t>(j)] = v;
                    m_dphi[slot(k, a)][static_cast<std::size_t>(j)] = dv;
                }
            }
        }
        m_inv_u.resize(m_u.size());
        for (std::size_t j = 0; j < m_u.size(); ++j) {
            m_inv_u[j] = complex_type(1) / m_u[j];
        }
    }

    const ThetaBasis<Real> &basis() const
    {
        return m_basis;
    }
    const FConstants<Real> &f() const
    {
        return m_f;
    }
    const QuadratureConfig<Real> &quadrature() const
    {
        return m_q;
    }
    int n() const
    {
        return m_basis.n();
    }
    int points() const
    {
        return m_q.circle_points;
    }

    const samples &phi(int k, long long a) const
    {
        return m_phi[slot(k, mod_n(a, n()))];
    }
    const samples &dphi(int k, long long a) const
    {
        return m_dphi[slot(k, mod_n(a, n()))];
    }
    samples psi(int k, long long a) const
    {
        if (mod_n(a, n()) == 0) {
            return m_inv_u;
        }
        return samples(m_u.size(), psi_constant(m_basis, a, k));
    }
    samples combination(int k, const PhiCombination<Real> &c) const
    {
        samples v(m_u.size());
        for (int a = 0; a < n(); ++a) {
            axpy(v, c.phi[static_cast<std::size_t>(a)], phi(k, a));
            axpy(v, c.dphi[static_cast<std::size_t>(a)], dphi(k, a));
        }
        return v;
    }

    // Coefficient of u^m in the Laurent expansion around k/n.
    complex_type laurent(const samples &v, int m) const
    {
        complex_type s(0);
        for (std::size_t j = 0; j < v.size(); ++j) {
            s += v[j] * std::pow(m_u[j], -m);
        }
        return s / Real(v.size());
    }
    complex_type residue(const samples &v) const
    {
        complex_type s(0);
        for (std::size_t j = 0; j < v.size(); ++j) {
            s += v[j] * m_u[j];
        }
        return s / Real(v.size());
    }

    // (1/n) Σ_k Res of the local functions fn(k).
    template <typename Fn>
    complex_type trace_of(Fn &&fn) const
    {
        complex_type s(0);
        for (int k = 0; k < n(); ++k) {
            s += residue(fn(k));
        }
        return s / Real(n());
    }

    static samples product(const samples &a, const samples &b)
    {
        samples v(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            v[j] = a[j] * b[j];
        }
        return v;
    }
    static samples product(const samples &a, const samples &b, const samples &c)
    {
        samples v(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            v[j] = a[j] * b[j] * c[j];
        }
        return v;
    }
    static void axpy(samples &y, complex_type a, const samples &x)
    {
        if (a == complex_type(0)) {
            return;
        }
        for (std::size_t j = 0; j < y.size(); ++j) {
            y[j] += a * x[j];
        }
    }

private:
    std::size_t slot(int k, int a) const
    {
        return static_cast<std::size_t>(k * n() + a);
    }

    ThetaBasis<Real> m_basis;
    QuadratureConfig<Real> m_q;
    FConstants<Real> m_f;
    std::vector<complex_type> m_u;
    std::vector<complex_type> m_inv_u;
    std::vector<samples> m_phi;
    std::vector<samples> m_dphi;
};

/// Matrix tr(φ_α ψ_β), which should be the identity.
template <typename Real>
std::vector<std::vector<complex_t<Real>>> pairing_matrix(const CechContext<Real> &ctx)
{
    const int n = ctx.n();
    std::vector<std::vector<complex_t<Real>>> m(static_cast<std::size_t>(n),
                                                std::vector<complex_t<Real>>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                = ctx.trace_of([&](int k) { return CechContext<Real>::product(ctx.phi(k, a), ctx.psi(k, b)); });
        }
    }
    return m;
}

/// Largest principal-part coefficient (orders −2, −1) of ψ_α φ_β − P over all points of D.
template <typename Real>
Real principal_part_residual(const CechContext<Real> &ctx, const std::vector<complex_t<Real>> &diag_c,
                             const std::vector<std::pair<std::pair<int, int>, complex_t<Real>>> &terms,
                             const PhiCombination<Real> &candidate)
{
    Real worst = 0;
    for (int k = 0; k < ctx.n(); ++k) {
        auto v = ctx.combination(k, candidate);
        for (auto &x : v) {
            x = -x;
        }
        for (std::size_t a = 0; a < diag_c.size(); ++a) {
            CechContext<Real>::axpy(v, diag_c[a],
                                    CechContext<Real>::product(ctx.psi(k, static_cast<long long>(a)),
                                                               ctx.phi(k, static_cast<long long>(a))));
        }
        for (const auto &[ab, c] : terms) {
            CechContext<Real>::axpy(v, c, CechContext<Real>::product(ctx.psi(k, ab.first), ctx.phi(k, ab.second)));
        }
        worst = std::max({worst, std::abs(ctx.laurent(v, -1)), std::abs(ctx.laurent(v, -2))});
    }
    return worst;
}

template <typename Real>
Real verify_p_plus(const CechContext<Real> &ctx, long long alpha, long long beta)
{
    return principal_part_residual<Real>(ctx, {}, {{{mod_n(alpha, ctx.n()), mod_n(beta, ctx.n())}, complex_t<Real>(1)}},
                                         p_plus(alpha, beta, ctx.f()));
}

template <typename Real>
Real verify_p_plus(long long alpha, long long beta, const ThetaBasis<Real> &basis, const QuadratureConfig<Real> &q)
{
    return verify_p_plus(CechContext<Real>(basis, q), alpha, beta);
}

template <typename Real>
Real verify_p_plus_diagonal(const CechContext<Real> &ctx, const std::vector<complex_t<Real>> &c)
{
    return principal_part_residual<Real>(ctx, c, {}, p_plus_diagonal(c));
}

/// |F(i,j−i)·tr(φ_{j−i}φ_iψ_j) − (θ'_i/θ_i + θ'_{j−i}/θ_{j−i} − 2πin)| for i, j ≠ 0, i ≠ j.
template <typename Real>
Real verify_trace_identity(const CechContext<Real> &ctx, long long i, long long j)
{
    const int n = ctx.n();
    i = mod_n(i, n);
    j = mod_n(j, n);
    if (i == 0 || j == 0 || i == j) {
        throw std::invalid_argument("trace identity needs i, j nonzero and distinct");
    }
    const auto &B = ctx.basis();
    const complex_t<Real> tr = ctx.trace_of(
        [&](int k) { return CechContext<Real>::product(ctx.phi(k, j - i), ctx.phi(k, i), ctx.psi(k, j)); });
    const complex_t<Real> lhs = ctx.f()(i, j - i) * tr;
    const complex_t<Real> rhs = B.d_at_zero(i) / B.at_zero(i) + B.d_at_zero(j - i) / B.at_zero(j - i)
                                - complex_t<Real>(Real(0), Real(2) * pi_v<Real> * Real(n));
    return std::abs(lhs - rhs);
}

enum class ModuliMethod { closed_form, trace_form };

namespace detail
{

template <typename Real>
void check_chart_point(const std::vector<complex_t<Real>> &t, int n)
{
    if (t.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("t must have n components");
    }
    if (std::abs(t[0] - complex_t<Real>(1)) > Real(1e-12)) {
        throw std::invalid_argument("t[0] must equal 1 on the chart");
    }
    for (const auto &x : t) {
        if (!is_finite(x)) {
            throw std::invalid_argument("t must be finite");
        }
    }
}

template <typename Real>
complex_t<Real> closed_form_entry(const CechContext<Real> &ctx, const std::vector<complex_t<Real>> &t, int i, int j)
{
    using S = CechContext<Real>;
    const int n = ctx.n();
    const auto &F = ctx.f();
    auto T = [&](long long a) { return t[static_cast<std::size_t>(mod_n(a, n))]; };
    auto tr3 = [&](long long a, long long b, long long c) {
        return ctx.trace_of([&](int k) { return S::product(ctx.phi(k, a), ctx.phi(k, b), ctx.psi(k, c)); });
    };
    complex_t<Real> tot(0);
    for (int r = 1; r < n; ++r) {
        tot += T(j - r) * T(i + r) * F(j - r, r) * tr3(r, i, i + r);
        tot -= T(i + r) * T(j - r) * F(i + r, -r) * tr3(-r, j, j - r);
    }
    for (int r = 0; r < n; ++r) {
        if (r != mod_n(j, n)) {
            tot -= T(i) * T(r) * T(j - r) * F(r, j - r);
        }
        if (r != mod_n(i, n)) {
            tot += T(j) * T(r) * T(i - r) * F(r, i - r);
        }
    }
    const int s = mod_n(i + j, n);
    const complex_t<Real> a
        = ctx.trace_of([&](int k) { return S::product(ctx.dphi(k, j), ctx.phi(k, i), ctx.psi(k, s)); });
    const complex_t<Real> b
        = ctx.trace_of([&](int k) { return S::product(ctx.dphi(k, i), ctx.phi(k, j), ctx.psi(k, s)); });
    tot += T(s) * (b - a);
    return tot;
}

// P_+[ψ_t (φ_i − t_i φ_0)] on disc k; the diagonal part t_i(ψ_iφ_i − ψ_0φ_0) projects to 0.
template <typename Real>
PhiCombination<Real> p_plus_chart(const CechContext<Real> &ctx, const std::vector<complex_t<Real>> &t, int i)
{
    const int n = ctx.n();
    PhiCombination<Real> c(n);
    for (int a = 0; a < n; ++a) {
        if (a != i) {
            auto p = p_plus(a, i, ctx.f());
            p *= t[static_cast<std::size_t>(a)];
            c += p;
        }
    }
    for (int a = 1; a < n; ++a) {
        auto p = p_plus(a, 0, ctx.f());
        p *= -t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(a)];
        c += p;
    }
    return c;
}

template <typename Real>
typename CechContext<Real>::samples psi_t(const CechContext<Real> &ctx, const std::vector<complex_t<Real>> &t, int k)
{
    typename CechContext<Real>::samples v(static_cast<std::size_t>(ctx.points()));
    for (int a = 0; a < ctx.n(); ++a) {
        CechContext<Real>::axpy(v, t[static_cast<std::size_t>(a)], ctx.psi(k, a));
    }
    return v;
}

} // namespace detail

/// {t_i, t_j} on the chart t_0 = 1 as an n×n antisymmetric matrix; row and column 0 are zero.
template <typename Real>
std::vector<std::vector<complex_t<Real>>> moduli_bracket(const std::vector<complex_t<Real>> &t,
                                                         const CechContext<Real> &ctx, ModuliMethod method)
{
    using S = CechContext<Real>;
    const int n = ctx.n();
    detail::check_chart_point(t, n);
    std::vector<std::vector<complex_t<Real>>> m(static_cast<std::size_t>(n),
                                                std::vector<complex_t<Real>>(static_cast<std::size_t>(n)));
    std::vector<std::vector<typename S::samples>> P, A;
    if (method == ModuliMethod::trace_form) {
        P.resize(static_cast<std::size_t>(n));
        A.resize(static_cast<std::size_t>(n));
        for (int i = 1; i < n; ++i) {
            const auto c = detail::p_plus_chart(ctx, t, i);
            for (int k = 0; k < n; ++k) {
                P[static_cast<std::size_t>(i)].push_back(ctx.combination(k, c));
                auto a = detail::psi_t(ctx, t, k);
                const auto &ph = ctx.phi(k, i);
                for (std::size_t j = 0; j < a.size(); ++j) {
                    a[j] *= ph[j] - t[static_cast<std::size_t>(i)];
                }
                A[static_cast<std::size_t>(i)].push_back(std::move(a));
            }
        }
    }
    for (int i = 1; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            complex_t<Real> v;
            if (method == ModuliMethod::closed_form) {
                v = detail::closed_form_entry(ctx, t, i, j);
            } else {
                const auto ui = static_cast<std::size_t>(i);
                const auto uj = static_cast<std::size_t>(j);
                v = ctx.trace_of([&](int k) {
                    const auto uk = static_cast<std::size_t>(k);
                    auto x = S::product(P[uj][uk], A[ui][uk]);
                    S::axpy(x, complex_t<Real>(-1), S::product(P[ui][uk], A[uj][uk]));
                    return x;
                });
            }
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -v;
        }
    }
    return m;
}

/// Coordinates y_γ = tr(φ_γ π_t(φ)) of π_t(φ) = (ψ_tφ − 2P_+(ψ_tφ))ψ_t, defined modulo the vector t.
/// Requires tr(ψ_t φ) = Σ t_α c_α = 0 so that P_+(ψ_t φ) is defined.
template <typename Real>
std::vector<complex_t<Real>> pi_t_class(const std::vector<complex_t<Real>> &t, const GlobalSection<Real> &phi,
                                        const CechContext<Real> &ctx, Real tol = Real(1e-10))
{
    using S = CechContext<Real>;
    const int n = ctx.n();
    detail::check_chart_point(t, n);
    if (phi.coeffs.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("global section must have n coefficients");
    }
    complex_t<Real> pairing(0);
    Real scale = 0;
    std::vector<complex_t<Real>> diag(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        diag[ua] = t[ua] * phi.coeffs[ua];
        pairing += diag[ua];
        scale = std::max(scale, std::abs(diag[ua]));
    }
    if (std::abs(pairing) > tol * std::max(Real(1), scale)) {
        throw std::invalid_argument("phi is not in the kernel of t*: tr(psi_t phi) != 0");
    }
    PhiCombination<Real> P = p_plus_diagonal(diag, tol);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const complex_t<Real> c = t[static_cast<std::size_t>(a)] * phi.coeffs[static_cast<std::size_t>(b)];
            if (a != b && c != complex_t<Real>(0)) {
                auto p = p_plus(a, b, ctx.f());
                p *= c;
                P += p;
            }
        }
    }
    std::vector<complex_t<Real>> y(static_cast<std::size_t>(n));
    std::vector<typename S::samples> cls;
    for (int k = 0; k < n; ++k) {
        const auto pt = detail::psi_t(ctx, t, k);
        typename S::samples f(pt.size());
        for (int b = 0; b < n; ++b) {
            S::axpy(f, phi.coeffs[static_cast<std::size_t>(b)], ctx.phi(k, b));
        }
        auto v = S::product(pt, f);
        S::axpy(v, complex_t<Real>(-2), ctx.combination(k, P));
        cls.push_back(S::product(v, pt));
    }
    for (int g = 0; g < n; ++g) {
        y[static_cast<std::size_t>(g)]
            = ctx.trace_of([&](int k) { return S::product(ctx.phi(k, g), cls[static_cast<std::size_t>(k)]); });
    }
    return y;
}

} // namespace ellpoisson

#endif
