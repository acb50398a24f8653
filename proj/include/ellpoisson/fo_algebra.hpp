#ifndef ELLPOISSON_FO_ALGEBRA_HPP
#define ELLPOISSON_FO_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poisson.hpp"
#include "theta.hpp"
#include "types.hpp"

namespace ellpoisson
{

namespace detail
{

inline void check_coprime(int n, int k)
{
    if (gcd_int(n, k) != 1) {
        throw std::invalid_argument("gcd(n,k) must be 1");
    }
}

template <typename Real>
void check_nonzero_theta_at_zero(const ThetaBasis<Real> &basis)
{
    const Real scale = std::abs(basis.d_at_zero(0));
    for (int a = 1; a < basis.n(); ++a) {
        if (std::abs(basis.at_zero(a)) < Real(1e-10) * scale) {
            std::ostringstream os;
            os << "theta_" << a << "(0) vanishes for this tau";
            throw degenerate_tau_error(os.str());
        }
    }
}

} // namespace detail

/// F(α,β) = θ'_0(0)θ_{α+β}(0)/(θ_α(0)θ_β(0)) off the axes, F(0,α) = θ'_α(0)/θ_α(0) − πin, F(0,0) = 0.
template <typename Real = double>
class FConstants
{
public:
    using complex_type = complex_t<Real>;

    explicit FConstants(const ThetaBasis<Real> &basis) : m_n(basis.n())
    {
        detail::check_nonzero_theta_at_zero(basis);
        const int n = m_n;
        const complex_type ipn(Real(0), pi_v<Real> * Real(n));
        m_f.resize(static_cast<std::size_t>(n * n));
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                complex_type v(0);
                if (a != 0 && b != 0) {
                    v = basis.d_at_zero(0) * basis.at_zero(a + b) / (basis.at_zero(a) * basis.at_zero(b));
                } else if (a != 0 || b != 0) {
                    const int c = a != 0 ? a : b;
                    v = basis.d_at_zero(c) / basis.at_zero(c) - ipn;
                }
                m_f[static_cast<std::size_t>(a * n + b)] = v;
            }
        }
    }

    int n() const
    {
        return m_n;
    }
    complex_type operator()(long long a, long long b) const
    {
        return m_f[static_cast<std::size_t>(mod_n(a, m_n) * m_n + mod_n(b, m_n))];
    }
    const std::vector<complex_type> &table() const
    {
        return m_f;
    }

    // Absolute residual of F(α,β) − F(β,α) and F(α,β) + F(−α,−β), together with |F(0,0)|.
    Real symmetry_defect() const
    {
        Real m = std::abs((*this)(0, 0));
        for (int a = 0; a < m_n; ++a) {
            for (int b = 0; b < m_n; ++b) {
                m = std::max({m, std::abs((*this)(a, b) - (*this)(b, a)), std::abs((*this)(a, b) + (*this)(-a, -b))});
            }
        }
        return m;
    }

    HnBracket<Real> as_hn_bracket() const
    {
        return HnBracket<Real>(m_n, m_f, Real(1e-8));
    }

private:
    int m_n;
    std::vector<complex_type> m_f;
};

template <typename Real>
FConstants<Real> f_constants(const ThetaBasis<Real> &basis)
{
    return FConstants<Real>(basis);
}

/// Coefficients R[i][j][r] = θ_{j−i+r(k−1)}(0) / (θ_{kr}(η) θ_{j−i−r}(−η)) of the relations
/// Σ_r R[i][j][r] x_{j−r} x_{i+r} = 0.
template <typename Real = double>
class FORelationTensor
{
public:
    using complex_type = complex_t<Real>;

    FORelationTensor(const ThetaBasis<Real> &basis, int k, complex_type eta) : m_n(basis.n()), m_k(k), m_eta(eta)
    {
        const int n = m_n;
        if (k <= 0 || k >= n) {
            throw std::invalid_argument("k must satisfy 0 < k < n");
        }
        detail::check_coprime(n, k);
        if (eta == complex_type(0)) {
            throw degenerate_eta_error("eta must be nonzero");
        }
        const Real threshold = Real(1e-10) * std::abs(basis.d_at_zero(0)) * std::abs(eta);
        // θ_a(η) and θ_a(−η) depend only on a, so tabulate them once.
        std::vector<complex_type> plus(static_cast<std::size_t>(n));
        std::vector<complex_type> minus(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            plus[static_cast<std::size_t>(a)] = basis.value(a, eta);
            minus[static_cast<std::size_t>(a)] = basis.value(a, -eta);
        }
        auto degenerate = [&](int r, int index, const char *which) {
            std::ostringstream os;
            os << "degenerate eta: " << which << " vanishes at (r=" << r << ", index=" << index << ")";
            throw degenerate_eta_error(os.str());
        };
        m_r.resize(static_cast<std::size_t>(n * n * n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    continue;
                }
                const int s = mod_n(j - i, n);
                for (int r = 0; r < n; ++r) {
                    const int a = mod_n(static_cast<long long>(k) * r, n);
                    const int b = mod_n(s - r, n);
                    const complex_type da = plus[static_cast<std::size_t>(a)];
                    const complex_type db = minus[static_cast<std::size_t>(b)];
                    if (!(std::abs(da) >= threshold)) {
                        degenerate(r, a, "theta_{kr}(eta)");
                    }
                    if (!(std::abs(db) >= threshold)) {
                        degenerate(r, b, "theta_{j-i-r}(-eta)");
                    }
                    const complex_type v = basis.at_zero(s + static_cast<long long>(r) * (k - 1)) / (da * db);
                    if (!is_finite(v)) {
                        degenerate(r, a, "relation coefficient");
                    }
                    m_r[flat(i, j, r)] = v;
                }
            }
        }
    }

    int n() const
    {
        return m_n;
    }
    int k() const
    {
        return m_k;
    }
    complex_type eta() const
    {
        return m_eta;
    }

    complex_type operator()(int i, int j, long long r) const
    {
        if (i == j) {
            throw std::invalid_argument("relations are indexed by i != j");
        }
        return m_r[flat(mod_n(i, m_n), mod_n(j, m_n), mod_n(r, m_n))];
    }

    // Number of unordered pairs {i, j}, i ≠ j.
    int relation_count() const
    {
        return m_n * (m_n - 1) / 2;
    }

private:
    std::size_t flat(int i, int j, int r) const
    {
        return static_cast<std::size_t>((i * m_n + j) * m_n + r);
    }

    int m_n;
    int m_k;
    complex_type m_eta;
    std::vector<complex_type> m_r;
};

template <typename Real>
FORelationTensor<Real> fo_relations(const ThetaBasis<Real> &basis, int k, complex_t<Real> eta)
{
    return FORelationTensor<Real>(basis, k, eta);
}

/// The right-hand side of {x_i, x_j} as printed, for an ordered pair i ≠ j; keys are (min, max) index pairs.
template <typename Real>
std::map<std::pair<int, int>, complex_t<Real>> sklyanin_terms(const ThetaBasis<Real> &basis, int k, int i, int j)
{
    const int n = basis.n();
    std::map<std::pair<int, int>, complex_t<Real>> out;
    if (i == j) {
        return out;
    }
    auto add = [&](int a, int b, complex_t<Real> v) {
        a = mod_n(a, n);
        b = mod_n(b, n);
        out[{std::min(a, b), std::max(a, b)}] += v;
    };
    const int s = mod_n(j - i, n);
    const long long ks = static_cast<long long>(k) * s;
    add(i, j,
        basis.d_at_zero(s) / basis.at_zero(s) + basis.d_at_zero(ks) / basis.at_zero(ks)
            - complex_t<Real>(Real(0), Real(2) * pi_v<Real> * Real(n)));
    for (int r = 1; r < n; ++r) {
        if (r == s) {
            continue;
        }
        const complex_t<Real> num = basis.at_zero(s + static_cast<long long>(r) * (k - 1)) * basis.d_at_zero(0);
        const complex_t<Real> den = basis.at_zero(static_cast<long long>(k) * r) * basis.at_zero(s - r);
        add(j - r, i + r, num / den);
    }
    return out;
}

/// The semiclassical bracket q_{n,k} of the relations above.
template <typename Real>
QuadraticBracket<Real> sklyanin_bracket(const ThetaBasis<Real> &basis, int k)
{
    const int n = basis.n();
    if (k <= 0 || k >= n) {
        throw std::invalid_argument("k must satisfy 0 < k < n");
    }
    detail::check_coprime(n, k);
    detail::check_nonzero_theta_at_zero(basis);
    QuadraticBracket<Real> b(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (const auto &[key, v] : sklyanin_terms(basis, k, i, j)) {
                b.add(i, j, key.first, key.second, v);
            }
        }
    }
    return b;
}

/// [x_i, x_j]/η read off from the relation at a single η, variables treated as commuting.
/// With the x_i x_j coefficient normalised to 1 the relation gives
///   x_i x_j − x_j x_i = −(1 + R_0/R_{j−i}) x_j x_i − Σ_{r≠0,j−i} (R_r/R_{j−i}) x_{j−r} x_{i+r}.
template <typename Real>
QuadraticBracket<Real> semiclassical_estimate(const FORelationTensor<Real> &rel)
{
    const int n = rel.n();
    const complex_t<Real> eta = rel.eta();
    QuadraticBracket<Real> b(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int s = mod_n(j - i, n);
            const complex_t<Real> norm = rel(i, j, s);
            b.add(i, j, i, j, -(complex_t<Real>(1) + rel(i, j, 0) / norm) / eta);
            for (int r = 1; r < n; ++r) {
                if (r != s) {
                    b.add(i, j, mod_n(j - r, n), mod_n(i + r, n), -(rel(i, j, r) / norm) / eta);
                }
            }
        }
    }
    return b;
}

/// Raw per-η estimates and the successive polynomial (Neville) extrapolations to η = 0.
template <typename Real>
struct SemiclassicalDiagnostics {
    std::vector<complex_t<Real>> etas;
    std::vector<QuadraticBracket<Real>> raw;
    // extrapolated[m] uses etas[0..m]; extrapolated.back() is the reported bracket.
    std::vector<QuadraticBracket<Real>> extrapolated;
    // |extrapolated[m] − extrapolated[m−1]| for m >= 1.
    std::vector<Real> increments;
};

namespace detail
{

template <typename Real>
std::vector<complex_t<Real>> flatten(const QuadraticBracket<Real> &b)
{
    const int n = b.n();
    std::vector<complex_t<Real>> v;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = k; l < n; ++l) {
                    v.push_back(b.coeff(i, j, k, l));
                }
            }
        }
    }
    return v;
}

template <typename Real>
QuadraticBracket<Real> unflatten(int n, const std::vector<complex_t<Real>> &v)
{
    QuadraticBracket<Real> b(n);
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = k; l < n; ++l) {
                    b.add(i, j, k, l, v[p++]);
                }
            }
        }
    }
    return b;
}

} // namespace detail

template <typename Real>
SemiclassicalDiagnostics<Real> semiclassical_diagnostics(const ThetaBasis<Real> &basis, int k,
                                                         const std::vector<complex_t<Real>> &etas)
{
    if (etas.empty()) {
        throw std::invalid_argument("eta sequence is empty");
    }
    for (std::size_t a = 0; a < etas.size(); ++a) {
        for (std::size_t b = a + 1; b < etas.size(); ++b) {
            if (etas[a] == etas[b]) {
                throw std::invalid_argument("eta values must be distinct");
            }
        }
    }
    const int n = basis.n();
    SemiclassicalDiagnostics<Real> d;
    d.etas = etas;
    std::vector<std::vector<complex_t<Real>>> raw;
    for (const auto &eta : etas) {
        d.raw.push_back(semiclassical_estimate(fo_relations(basis, k, eta)));
        raw.push_back(detail::flatten(d.raw.back()));
    }
    // Neville tableau evaluated at η = 0; column m holds the interpolant through etas[0..m].
    std::vector<std::vector<complex_t<Real>>> p = raw;
    d.extrapolated.push_back(d.raw.front());
    for (std::size_t m = 1; m < etas.size(); ++m) {
        for (std::size_t a = m; a-- > 0;) {
            const complex_t<Real> ea = etas[a];
            const complex_t<Real> em = etas[m];
            for (std::size_t c = 0; c < p[a].size(); ++c) {
                p[a][c] = (ea * p[a + 1][c] - em * p[a][c]) / (ea - em);
            }
        }
        d.extrapolated.push_back(detail::unflatten<Real>(n, p[0]));
        d.increments.push_back(d.extrapolated[m].max_abs_difference(d.extrapolated[m - 1]));
    }
    return d;
}

/// Bracket obtained as lim_{η→0} [x_i, x_j]/η by extrapolation over eta_sequence.
/// Throws verification_error when successive extrapolations stop improving.
template <typename Real>
QuadraticBracket<Real> semiclassical_from_relations(const ThetaBasis<Real> &basis, int k,
                                                    const std::vector<complex_t<Real>> &eta_sequence)
{
    if (eta_sequence.size() < 2) {
        throw std::invalid_argument("at least two eta values are needed for extrapolation");
    }
    auto d = semiclassical_diagnostics(basis, k, eta_sequence);
    const auto &inc = d.increments;
    if (inc.size() >= 2) {
        bool non_decreasing = true;
        for (std::size_t m = 1; m < inc.size(); ++m) {
            non_decreasing = non_decreasing && !(inc[m] < inc[m - 1]);
        }
        if (non_decreasing) {
            throw verification_error("eta extrapolation diverges: increments do not decrease",
                                     static_cast<double>(inc.back()));
        }
    }
    return std::move(d.extrapolated.back());
}

} // namespace ellpoisson

#endif
