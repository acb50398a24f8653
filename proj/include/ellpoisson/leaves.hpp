#ifndef ELLPOISSON_LEAVES_HPP
#define ELLPOISSON_LEAVES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace ellpoisson
{

/// Local type at one point: j ↦ r_j, the multiplicity of O_{j·p}.
using LocalType = std::map<int, int>;

inline int local_length(const LocalType &r)
{
    int l = 0;
    for (const auto &[j, m] : r) {
        l += j * m;
    }
    return l;
}

/// Torsion sheaf ⊕_points ⊕_j O_{j·p}^{r_j}, points unlabeled.
struct TorsionType {
    std::vector<LocalType> points;

    int length() const
    {
        int l = 0;
        for (const auto &p : points) {
            l += local_length(p);
        }
        return l;
    }

    void validate() const
    {
        for (const auto &p : points) {
            bool any = false;
            for (const auto &[j, m] : p) {
                if (j < 1 || m < 0) {
                    throw std::invalid_argument("local type needs j >= 1 and r_j >= 0");
                }
                any = any || m > 0;
            }
            if (!any) {
                throw std::invalid_argument("every listed point needs a positive multiplicity");
            }
        }
    }
};

inline long end_dim_local(const LocalType &r)
{
    long s = 0;
    for (const auto &[i, ri] : r) {
        for (const auto &[j, rj] : r) {
            s += static_cast<long>(std::min(i, j)) * ri * rj;
        }
    }
    return s;
}

inline long end_dim_torsion(const TorsionType &t)
{
    long s = 0;
    for (const auto &p : t.points) {
        s += end_dim_local(p);
    }
    return s;
}

/// dim End(O(−D) ⊕ T) = 1 + l + dim End(T).
inline long end_dim_sheaf(const TorsionType &t)
{
    t.validate();
    return 1 + t.length() + end_dim_torsion(t);
}

// "O_p^2 + O_{2q}" style label; points named p, q, r, s, ...
inline std::string describe(const TorsionType &t)
{
    if (t.points.empty()) {
        return "0";
    }
    static const char names[] = "pqrsuvwxyz";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < t.points.size(); ++k) {
        const std::string pt = k < sizeof(names) - 1 ? std::string(1, names[k]) : "p" + std::to_string(k);
        for (const auto &[j, m] : t.points[k]) {
            if (m == 0) {
                continue;
            }
            os << (first ? "" : " + ") << "O_" << (j == 1 ? pt : "{" + std::to_string(j) + pt + "}");
            if (m > 1) {
                os << "^" << m;
            }
            first = false;
        }
    }
    return os.str();
}

struct LeafRecord {
    TorsionType torsion;
    int l = 0;
    long end_dim_torsion = 0;
    long expected_dim = 0;
    bool feasible = false;
    std::string label;
    std::string table_row; // nonempty for the rows of the (P^2)^[3] table
};

inline LeafRecord leaf_dimension(int n, const TorsionType &t)
{
    t.validate();
    const int l = t.length();
    if (l > n) {
        throw std::invalid_argument("torsion length exceeds n");
    }
    LeafRecord rec;
    rec.torsion = t;
    rec.l = l;
    rec.end_dim_torsion = end_dim_torsion(t);
    rec.expected_dim = 2L * n + 1 - end_dim_sheaf(t);
    rec.feasible = rec.expected_dim >= 0;
    rec.label = describe(t);
    return rec;
}

/// All partitions of m as local types, in a fixed order.
inline std::vector<LocalType> local_types_of_length(int m)
{
    std::vector<LocalType> out;
    std::vector<int> parts;
    auto rec = [&](auto &self, int rest, int max_part) -> void {
        if (rest == 0) {
            LocalType t;
            for (int p : parts) {
                ++t[p];
            }
            out.push_back(std::move(t));
            return;
        }
        for (int p = std::min(rest, max_part); p >= 1; --p) {
            parts.push_back(p);
            self(self, rest - p, p);
            parts.pop_back();
        }
    };
    if (m > 0) {
        rec(rec, m, m);
    }
    return out;
}

namespace detail
{

inline std::string table_row_for(int n, const TorsionType &t)
{
    if (n != 3) {
        return {};
    }
    const int l = t.length();
    const bool all_reduced_distinct = std::all_of(t.points.begin(), t.points.end(), [](const LocalType &p) {
        return p.size() == 1 && p.begin()->first == 1 && p.begin()->second == 1;
    });
    if (all_reduced_distinct) {
        switch (l) {
        case 0:
            return "O_C";
        case 1:
            return "O_C(-p) + O_p";
        case 2:
            return "O_C(-p-q) + O_{p u q}";
        case 3:
            return "O_C(-p-q-r) + O_{p u q u r}";
        default:
            return {};
        }
    }
    if (t.points.size() == 1 && t.points[0] == LocalType{{1, 2}}) {
        return "O_C(-2p) + O_p + O_p";
    }
    return {};
}

} // namespace detail

/// Every isomorphism type of torsion sheaf of length l ≤ n, as multisets of local types.
inline std::vector<LeafRecord> enumerate_strata(int n)
{
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    // Catalogue of local types ordered by (length, partition order).
    std::vector<LocalType> catalogue;
    for (int m = 1; m <= n; ++m) {
        for (auto &t : local_types_of_length(m)) {
            catalogue.push_back(std::move(t));
        }
    }
    std::vector<LeafRecord> out;
    for (int l = 0; l <= n; ++l) {
        std::vector<LocalType> chosen;
        auto rec = [&](auto &self, std::size_t from, int rest) -> void {
            if (rest == 0) {
                TorsionType t{chosen};
                LeafRecord r = leaf_dimension(n, t);
                r.table_row = detail::table_row_for(n, t);
                out.push_back(std::move(r));
                return;
            }
            for (std::size_t c = from; c < catalogue.size(); ++c) {
                const int len = local_length(catalogue[c]);
                if (len > rest) {
                    break; // catalogue is sorted by length
                }
                chosen.push_back(catalogue[c]);
                self(self, c, rest - len);
                chosen.pop_back();
            }
        };
        rec(rec, 0, l);
    }
    return out;
}

/// Effective or anti-effective divisor as points of C/Γ with multiplicities.
template <typename Real = double>
struct DivisorDatum {
    std::vector<std::pair<complex_t<Real>, int>> points;

    int degree() const
    {
        int d = 0;
        for (const auto &p : points) {
            d += p.second;
        }
        return d;
    }
    complex_t<Real> sum() const
    {
        complex_t<Real> s(0);
        for (const auto &[z, m] : points) {
            s += Real(m) * z;
        }
        return s;
    }
};

template <typename Real = double>
struct DivisorCheck {
    bool holds = false;
    Real defect = 0;
    complex_t<Real> reduced{}; // representative of the Abel–Jacobi defect closest to 0
};

/// Distance from w to the lattice Z + Zτ, with the nearest representative.
template <typename Real>
std::pair<Real, complex_t<Real>> reduce_mod_lattice(complex_t<Real> w, complex_t<Real> tau)
{
    if (!(tau.imag() > 0)) {
        throw std::invalid_argument("Im(tau) must be positive");
    }
    const Real b = w.imag() / tau.imag();
    const Real a = w.real() - b * tau.real();
    const Real a0 = std::round(a), b0 = std::round(b);
    Real best = std::numeric_limits<Real>::infinity();
    complex_t<Real> rep = w;
    for (int da = -1; da <= 1; ++da) {
        for (int db = -1; db <= 1; ++db) {
            const complex_t<Real> c = w - (a0 + da) - (b0 + db) * tau;
            if (std::abs(c) < best) {
                best = std::abs(c);
                rep = c;
            }
        }
    }
    return {best, rep};
}

/// Z(T) − D ∼ [o] − [3n·η]: Σ Z − Σ D + 3nη ≡ 0 modulo Γ.
template <typename Real>
DivisorCheck<Real> divisor_constraint(int n, complex_t<Real> eta, const DivisorDatum<Real> &D,
                                      const DivisorDatum<Real> &Z, complex_t<Real> tau, Real tol = Real(1e-9))
{
    if (D.degree() != Z.degree()) {
        std::ostringstream os;
        os << "degree mismatch: deg Z = " << Z.degree() << ", deg D = " << D.degree();
        throw std::invalid_argument(os.str());
    }
    const complex_t<Real> w = Z.sum() - D.sum() + Real(3 * n) * eta;
    const auto [dist, rep] = reduce_mod_lattice(w, tau);
    return {dist < tol, dist, rep};
}

/// Dimension vector (dim V_{−1}, dim V_0, dim V_1) of the Kronecker complex for degree d = 0.
inline std::array<int, 3> kronecker_dims(int r, int n, int d = 0)
{
    if (d != 0) {
        throw std::invalid_argument("dimension vector for d != 0 is not specified");
    }
    if (r < 1 || n < 0) {
        throw std::invalid_argument("need r >= 1 and n >= 0");
    }
    return {n, 2 * n + r, n};
}

} // namespace ellpoisson

#endif
