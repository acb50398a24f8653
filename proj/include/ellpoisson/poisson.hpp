#ifndef ELLPOISSON_POISSON_HPP
#define ELLPOISSON_POISSON_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polynomial.hpp"
#include "types.hpp"

namespace ellpoisson
{

/**
 * Quadratic bracket {x_i, x_j} = Σ_{k<=l} λ_{ij}^{kl} x_k x_l on n variables.
 * Only pairs i < j are stored, so skew-symmetry holds by construction.
 * Coefficients with magnitude below drop_threshold are removed on write.
 */
template <typename Real = double>
class QuadraticBracket
{
public:
    using complex_type = complex_t<Real>;
    using monomial_key = std::pair<int, int>;
    using generator_type = std::map<monomial_key, complex_type>;

    static constexpr Real drop_threshold = Real(1e-14);

    explicit QuadraticBracket(int n) : m_n(n)
    {
        if (n < 1) {
            throw std::invalid_argument("bracket needs at least one variable");
        }
        m_gen.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    }

    int n() const
    {
        return m_n;
    }

    // Adds v to the coefficient of x_k x_l in {x_i, x_j}; {x_j, x_i} changes by −v.
    void add(int i, int j, int k, int l, complex_type v)
    {
        check_index(i);
        check_index(j);
        check_index(k);
        check_index(l);
        if (i == j) {
            if (std::abs(v) >= drop_threshold) {
                throw std::invalid_argument("{x_i, x_i} must vanish");
            }
            return;
        }
        if (i > j) {
            std::swap(i, j);
            v = -v;
        }
        if (k > l) {
            std::swap(k, l);
        }
        auto &g = slot(i, j);
        complex_type &c = g[{k, l}];
        c += v;
        if (std::abs(c) < drop_threshold) {
            g.erase({k, l});
        }
    }

    complex_type coeff(int i, int j, int k, int l) const
    {
        check_index(i);
        check_index(j);
        if (i == j) {
            return complex_type(0);
        }
        Real sign = 1;
        if (i > j) {
            std::swap(i, j);
            sign = -1;
        }
        if (k > l) {
            std::swap(k, l);
        }
        const auto &g = slot(i, j);
        auto it = g.find({k, l});
        return it == g.end() ? complex_type(0) : sign * it->second;
    }

    // Stored terms of {x_i, x_j} with i < j.
    const generator_type &terms(int i, int j) const
    {
        if (!(i < j)) {
            throw std::invalid_argument("terms() expects i < j");
        }
        check_index(j);
        check_index(i);
        return slot(i, j);
    }

    Real max_abs_coeff() const
    {
        Real m = 0;
        for (const auto &g : m_gen) {
            for (const auto &[key, c] : g) {
                m = std::max(m, std::abs(c));
            }
        }
        return m;
    }

    // Structural, hence always zero; kept as the assertion hook.
    Real skew_defect() const
    {
        Real m = 0;
        for (int i = 0; i < m_n; ++i) {
            for (int j = 0; j < m_n; ++j) {
                for (int k = 0; k < m_n; ++k) {
                    for (int l = k; l < m_n; ++l) {
                        m = std::max(m, std::abs(coeff(i, j, k, l) + coeff(j, i, k, l)));
                    }
                }
            }
        }
        return m;
    }

    Real max_abs_difference(const QuadraticBracket &o) const
    {
        if (o.m_n != m_n) {
            throw std::invalid_argument("variable-count mismatch");
        }
        Real m = 0;
        for (int i = 0; i < m_n; ++i) {
            for (int j = i + 1; j < m_n; ++j) {
                for (int k = 0; k < m_n; ++k) {
                    for (int l = k; l < m_n; ++l) {
                        m = std::max(m, std::abs(coeff(i, j, k, l) - o.coeff(i, j, k, l)));
                    }
                }
            }
        }
        return m;
    }

private:
    void check_index(int i) const
    {
        if (i < 0 || i >= m_n) {
            throw std::out_of_range("variable index out of range");
        }
    }
    generator_type &slot(int i, int j)
    {
        return m_gen[static_cast<std::size_t>(i * m_n + j)];
    }
    const generator_type &slot(int i, int j) const
    {
        return m_gen[static_cast<std::size_t>(i * m_n + j)];
    }

    int m_n;
    std::vector<generator_type> m_gen;
};

/// H_n-invariant bracket {x_i, x_j} = Σ_r C(r, j−i−r) x_{i+r} x_{j−r}, C stored as an n×n table.
template <typename Real = double>
class HnBracket
{
public:
    using complex_type = complex_t<Real>;

    explicit HnBracket(int n) : m_n(n), m_c(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    {
        if (n < 1) {
            throw std::invalid_argument("bracket needs at least one variable");
        }
    }

    // Validates the symmetries C(β,α) = C(α,β), C(α,β) = −C(−α,−β), C(0,0) = 0 relative to the table scale.
    HnBracket(int n, std::vector<complex_type> table, Real tol = Real(1e-10)) : HnBracket(n)
    {
        if (table.size() != m_c.size()) {
            throw std::invalid_argument("C table must have n*n entries");
        }
        m_c = std::move(table);
        const Real d = symmetry_defect();
        if (d > tol) {
            std::ostringstream os;
            os << "C table violates the H_n symmetries (defect " << d << ")";
            throw std::invalid_argument(os.str());
        }
    }

    int n() const
    {
        return m_n;
    }
    complex_type operator()(long long a, long long b) const
    {
        return m_c[index(a, b)];
    }
    // Sets C(a,b), C(b,a), C(−a,−b), C(−b,−a) consistently.
    void set(long long a, long long b, complex_type v)
    {
        if (index(a, b) == index(-a, -b) || index(a, b) == index(-b, -a)) {
            v = complex_type(0); // forced by the two symmetries
        }
        m_c[index(a, b)] = v;
        m_c[index(b, a)] = v;
        m_c[index(-a, -b)] = -v;
        m_c[index(-b, -a)] = -v;
    }
    const std::vector<complex_type> &table() const
    {
        return m_c;
    }

    Real scale() const
    {
        Real m = 0;
        for (const auto &c : m_c) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    Real symmetry_defect() const
    {
        Real m = std::abs((*this)(0, 0));
        for (int a = 0; a < m_n; ++a) {
            for (int b = 0; b < m_n; ++b) {
                m = std::max({m, std::abs((*this)(a, b) - (*this)(b, a)), std::abs((*this)(a, b) + (*this)(-a, -b))});
            }
        }
        const Real s = scale();
        return s > Real(0) ? m / s : m;
    }

    Real max_abs_difference(const HnBracket &o) const
    {
        if (o.m_n != m_n) {
            throw std::invalid_argument("order mismatch");
        }
        Real m = 0;
        for (std::size_t i = 0; i < m_c.size(); ++i) {
            m = std::max(m, std::abs(m_c[i] - o.m_c[i]));
        }
        return m;
    }

private:
    std::size_t index(long long a, long long b) const
    {
        return static_cast<std::size_t>(mod_n(a, m_n) * m_n + mod_n(b, m_n));
    }

    int m_n;
    std::vector<complex_type> m_c;
};

// Expands the sum; coinciding monomials for small n are summed.
template <typename Real>
QuadraticBracket<Real> to_quadratic(const HnBracket<Real> &h)
{
    const int n = h.n();
    QuadraticBracket<Real> b(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int r = 0; r < n; ++r) {
                b.add(i, j, mod_n(i + r, n), mod_n(j - r, n), h(r, j - i - r));
            }
        }
    }
    return b;
}

template <typename Real>
Polynomial<Real> bracket_generators(const QuadraticBracket<Real> &b, int i, int j)
{
    const int n = b.n();
    if (i < 0 || i >= n || j < 0 || j >= n) {
        throw std::out_of_range("generator index out of range");
    }
    Polynomial<Real> p(n);
    if (i == j) {
        return p;
    }
    const Real sign = i < j ? Real(1) : Real(-1);
    for (const auto &[key, c] : b.terms(std::min(i, j), std::max(i, j))) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        ++e[static_cast<std::size_t>(key.first)];
        ++e[static_cast<std::size_t>(key.second)];
        p.add_term(e, sign * c);
    }
    return p;
}

namespace detail
{

template <typename Real>
Polynomial<Real> monomial_bracket(const QuadraticBracket<Real> &b, const std::vector<int> &ea, const std::vector<int> &eb)
{
    const int n = b.n();
    auto degree = [](const std::vector<int> &e) {
        int s = 0;
        for (int x : e) {
            s += x;
        }
        return s;
    };
    auto first_var = [](const std::vector<int> &e) {
        return static_cast<int>(std::find_if(e.begin(), e.end(), [](int x) { return x > 0; }) - e.begin());
    };
    const int da = degree(ea);
    const int db = degree(eb);
    if (da == 0 || db == 0) {
        return Polynomial<Real>(n);
    }
    if (da == 1 && db == 1) {
        return bracket_generators(b, first_var(ea), first_var(eb));
    }
    if (da > 1) {
        // {x_i u, g} = x_i {u, g} + u {x_i, g}
        const int i = first_var(ea);
        std::vector<int> u = ea;
        --u[static_cast<std::size_t>(i)];
        std::vector<int> xi(static_cast<std::size_t>(n), 0);
        xi[static_cast<std::size_t>(i)] = 1;
        return Polynomial<Real>::monomial(n, xi) * monomial_bracket(b, u, eb)
               + Polynomial<Real>::monomial(n, u) * monomial_bracket(b, xi, eb);
    }
    // {f, x_j v} = {f, x_j} v + x_j {f, v}
    const int j = first_var(eb);
    std::vector<int> v = eb;
    --v[static_cast<std::size_t>(j)];
    std::vector<int> xj(static_cast<std::size_t>(n), 0);
    xj[static_cast<std::size_t>(j)] = 1;
    return monomial_bracket(b, ea, xj) * Polynomial<Real>::monomial(n, v)
           + Polynomial<Real>::monomial(n, xj) * monomial_bracket(b, ea, v);
}

} // namespace detail

/// Leibniz extension of the generator brackets to arbitrary polynomials.
template <typename Real>
Polynomial<Real> bracket_poly(const QuadraticBracket<Real> &b, const Polynomial<Real> &f, const Polynomial<Real> &g)
{
    if (f.nvars() != b.n() || g.nvars() != b.n()) {
        throw std::invalid_argument("variable-count mismatch");
    }
    Polynomial<Real> out(b.n());
    for (const auto &[ea, ca] : f.terms()) {
        for (const auto &[eb, cb] : g.terms()) {
            out += detail::monomial_bracket(b, ea, eb) * (ca * cb);
        }
    }
    return out;
}

/// Largest coefficient of the Jacobiator over distinct triples, relative to the largest bracket coefficient.
template <typename Real>
Real jacobi_defect(const QuadraticBracket<Real> &b)
{
    const int n = b.n();
    const Real scale = b.max_abs_coeff();
    if (scale == Real(0)) {
        return Real(0);
    }
    auto x = [n](int i) { return Polynomial<Real>::variable(n, i); };
    Real worst = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const Polynomial<Real> J = bracket_poly(b, x(i), bracket_generators(b, j, k))
                                           + bracket_poly(b, x(j), bracket_generators(b, k, i))
                                           + bracket_poly(b, x(k), bracket_generators(b, i, j));
                worst = std::max(worst, J.max_abs_coefficient());
            }
        }
    }
    return worst / scale;
}

/// Canonical H_n data read off from {x_0, x_s}, with the measured invariance violation.
template <typename Real>
struct HnExtraction {
    HnBracket<Real> bracket;
    Real violation;
};

template <typename Real>
HnExtraction<Real> hn_canonical_try(const QuadraticBracket<Real> &b)
{
    const int n = b.n();
    HnBracket<Real> h(n);
    // C(r, s−r) is the coefficient of x_r x_{s−r} in {x_0, x_s}, halved when the two indices differ
    // because C(r, s−r) and C(s−r, r) both land on that monomial.
    for (int s = 1; s < n; ++s) {
        for (int r = 0; r < n; ++r) {
            const int a = r;
            const int c = mod_n(s - r, n);
            if (a > c) {
                continue;
            }
            complex_t<Real> v = b.coeff(0, s, a, c);
            if (a != c) {
                v /= Real(2);
            }
            h.set(a, c, v);
        }
    }
    const QuadraticBracket<Real> rebuilt = to_quadratic(h);
    Real violation = rebuilt.max_abs_difference(b);
    const Real scale = b.max_abs_coeff();
    if (scale > Real(0)) {
        violation /= scale;
    }
    violation = std::max(violation, h.symmetry_defect());
    return {std::move(h), violation};
}

/// Largest relative deviation of b from H_n-invariance.
template <typename Real>
Real hn_invariance_violation(const QuadraticBracket<Real> &b)
{
    return hn_canonical_try(b).violation;
}

template <typename Real>
HnBracket<Real> hn_canonical_extract(const QuadraticBracket<Real> &b, Real tol = Real(1e-10))
{
    auto r = hn_canonical_try(b);
    if (!(r.violation <= tol)) {
        std::ostringstream os;
        os << "bracket is not H_n-invariant: violation " << r.violation << " exceeds " << tol;
        throw verification_error(os.str(), static_cast<double>(r.violation));
    }
    return std::move(r.bracket);
}

/// {t_i, t_j} on the chart x_0 = 1 for an H_n-invariant bracket.
template <typename Real>
complex_t<Real> projective_bracket(const HnBracket<Real> &h, const std::vector<complex_t<Real>> &t, int i, int j)
{
    const int n = h.n();
    if (t.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("t must have n components");
    }
    if (std::abs(t[0] - complex_t<Real>(1)) > Real(1e-12)) {
        throw std::invalid_argument("t[0] must equal 1 on the chart");
    }
    if (i <= 0 || i >= n || j <= 0 || j >= n) {
        throw std::out_of_range("chart indices must lie in 1..n-1");
    }
    if (i == j) {
        return complex_t<Real>(0);
    }
    auto T = [&](long long a) { return t[static_cast<std::size_t>(mod_n(a, n))]; };
    const int s = mod_n(j - i, n);
    complex_t<Real> tot(0);
    for (int r = 0; r < n; ++r) {
        if (r != 0 && r != s) {
            tot += h(r, s - r) * T(i + r) * T(j - r);
        }
        if (r != 0 && r != mod_n(j, n)) {
            tot -= T(i) * h(r, j - r) * T(r) * T(j - r);
        }
        if (r != 0 && r != mod_n(-i, n)) {
            tot -= T(j) * h(r, -i - r) * T(i + r) * T(-r);
        }
    }
    tot += Real(2) * (h(0, s) - h(0, j) - h(0, -i)) * T(i) * T(j);
    return tot;
}

/// The bracket transported by x_α ↦ ω^α x_α (T_{1/n}) or x_α ↦ x_{α+1} (T_{τ/n}).
template <typename Real>
QuadraticBracket<Real> act_scale(const QuadraticBracket<Real> &b)
{
    const int n = b.n();
    auto w = [n](long long k) { return std::exp(two_pi_i<Real>() * (Real(mod_n(k, n)) / Real(n))); };
    QuadraticBracket<Real> out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (const auto &[key, c] : b.terms(i, j)) {
                out.add(i, j, key.first, key.second, c * w(key.first + key.second - i - j));
            }
        }
    }
    return out;
}

template <typename Real>
QuadraticBracket<Real> act_shift(const QuadraticBracket<Real> &b)
{
    const int n = b.n();
    QuadraticBracket<Real> out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (const auto &[key, c] : b.terms(i, j)) {
                out.add(mod_n(i + 1, n), mod_n(j + 1, n), mod_n(key.first + 1, n), mod_n(key.second + 1, n), c);
            }
        }
    }
    return out;
}

} // namespace ellpoisson

#endif
