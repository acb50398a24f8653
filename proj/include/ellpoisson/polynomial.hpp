#ifndef ELLPOISSON_POLYNOMIAL_HPP
#define ELLPOISSON_POLYNOMIAL_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace ellpoisson
{

// Sparse polynomial in n commuting variables with complex coefficients.
// Exact zeros are never stored.
template <typename Real = double>
class Polynomial
{
public:
    using complex_type = complex_t<Real>;
    using exponent_type = std::vector<int>;
    using container_type = std::map<exponent_type, complex_type>;

    explicit Polynomial(int n = 0) : m_n(n)
    {
        if (n < 0) {
            throw std::invalid_argument("negative variable count");
        }
    }

    static Polynomial constant(int n, complex_type c)
    {
        Polynomial p(n);
        p.add_term(exponent_type(static_cast<std::size_t>(n), 0), c);
        return p;
    }

    static Polynomial variable(int n, int i)
    {
        Polynomial p(n);
        exponent_type e(static_cast<std::size_t>(n), 0);
        e.at(static_cast<std::size_t>(i)) = 1;
        p.add_term(std::move(e), complex_type(1));
        return p;
    }

    static Polynomial monomial(int n, const exponent_type &e, complex_type c = complex_type(1))
    {
        Polynomial p(n);
        p.add_term(e, c);
        return p;
    }

    int nvars() const
    {
        return m_n;
    }
    const container_type &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }

    void add_term(const exponent_type &e, complex_type c)
    {
        if (e.size() != static_cast<std::size_t>(m_n)) {
            throw std::invalid_argument("exponent length does not match variable count");
        }
        if (std::any_of(e.begin(), e.end(), [](int x) { return x < 0; })) {
            throw std::invalid_argument("negative exponent");
        }
        if (c == complex_type(0)) {
            return;
        }
        auto [it, inserted] = m_terms.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == complex_type(0)) {
                m_terms.erase(it);
            }
        }
    }

    complex_type coefficient(const exponent_type &e) const
    {
        auto it = m_terms.find(e);
        return it == m_terms.end() ? complex_type(0) : it->second;
    }

    Real max_abs_coefficient() const
    {
        Real m = 0;
        for (const auto &[e, c] : m_terms) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    int degree() const
    {
        int d = 0;
        for (const auto &[e, c] : m_terms) {
            int s = 0;
            for (int x : e) {
                s += x;
            }
            d = std::max(d, s);
        }
        return d;
    }

    Polynomial derivative(int i) const
    {
        Polynomial out(m_n);
        for (const auto &[e, c] : m_terms) {
            const int p = e.at(static_cast<std::size_t>(i));
            if (p == 0) {
                continue;
            }
            exponent_type f = e;
            --f[static_cast<std::size_t>(i)];
            out.add_term(f, c * Real(p));
        }
        return out;
    }

    complex_type evaluate(const std::vector<complex_type> &x) const
    {
        if (x.size() != static_cast<std::size_t>(m_n)) {
            throw std::invalid_argument("point dimension does not match variable count");
        }
        complex_type s(0);
        for (const auto &[e, c] : m_terms) {
            complex_type t = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (int p = 0; p < e[i]; ++p) {
                    t *= x[i];
                }
            }
            s += t;
        }
        return s;
    }

    Polynomial &operator+=(const Polynomial &o)
    {
        check_same(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, c);
        }
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o)
    {
        check_same(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, -c);
        }
        return *this;
    }
    Polynomial &operator*=(complex_type s)
    {
        if (s == complex_type(0)) {
            m_terms.clear();
            return *this;
        }
        for (auto &[e, c] : m_terms) {
            c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b)
    {
        return a += b;
    }
    friend Polynomial operator-(Polynomial a, const Polynomial &b)
    {
        return a -= b;
    }
    friend Polynomial operator*(Polynomial a, complex_type s)
    {
        return a *= s;
    }
    friend Polynomial operator*(complex_type s, Polynomial a)
    {
        return a *= s;
    }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        a.check_same(b);
        Polynomial out(a.m_n);
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                exponent_type e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    void check_same(const Polynomial &o) const
    {
        if (o.m_n != m_n) {
            throw std::invalid_argument("variable-count mismatch");
        }
    }

private:
    int m_n;
    container_type m_terms;
};

// Largest coefficient magnitude of a - b.
template <typename Real>
Real max_abs_difference(const Polynomial<Real> &a, const Polynomial<Real> &b)
{
    return (a - b).max_abs_coefficient();
}

} // namespace ellpoisson

#endif
