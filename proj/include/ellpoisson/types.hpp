#ifndef ELLPOISSON_TYPES_HPP
#define ELLPOISSON_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ellpoisson
{

template <typename Real>
using complex_t = std::complex<Real>;

template <typename Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

template <typename Real>
constexpr complex_t<Real> two_pi_i()
{
    return complex_t<Real>(Real(0), Real(2) * pi_v<Real>);
}

template <typename Real>
bool is_finite(const complex_t<Real> &z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Non-negative representative of a mod n.
constexpr int mod_n(long long a, int n)
{
    const long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

constexpr int gcd_int(int a, int b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Raised when a theta value that must be nonzero (θ_α(0), θ_α(k/n)) vanishes for the chosen τ.
class degenerate_tau_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Raised when η sits on (or numerically near) a point where the relation denominators vanish.
class degenerate_eta_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Raised when a contour sample is non-finite, i.e. the circle passes through a singularity.
class contour_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Raised when a quantity fails a structural check (invariance, convergence) above its tolerance.
class verification_error : public std::runtime_error
{
public:
    verification_error(const std::string &what, double residual)
        : std::runtime_error(what), m_residual(residual)
    {}
    double residual() const noexcept
    {
        return m_residual;
    }

private:
    double m_residual;
};

} // namespace ellpoisson

#endif
