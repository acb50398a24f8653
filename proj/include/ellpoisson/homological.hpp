#ifndef ELLPOISSON_HOMOLOGICAL_HPP
#define ELLPOISSON_HOMOLOGICAL_HPP

#include <cstddef>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational_matrix.hpp"

namespace ellpoisson
{

/// Bounded complex of finite-dimensional ℚ-vector spaces; degrees outside the window are zero.
class GradedComplex
{
public:
    GradedComplex() = default;

    // diffs[k] maps degree min_degree + k to min_degree + k + 1.
    GradedComplex(int min_degree, std::vector<std::size_t> dims, std::vector<RationalMatrix> diffs)
        : m_min(min_degree), m_dims(std::move(dims)), m_diffs(std::move(diffs))
    {
        if (m_dims.empty()) {
            throw std::invalid_argument("complex needs at least one degree");
        }
        if (m_diffs.size() + 1 != m_dims.size()) {
            throw std::invalid_argument("need exactly one differential between consecutive degrees");
        }
        for (std::size_t k = 0; k < m_diffs.size(); ++k) {
            if (m_diffs[k].rows() != m_dims[k + 1] || m_diffs[k].cols() != m_dims[k]) {
                std::ostringstream os;
                os << "differential out of degree " << m_min + static_cast<int>(k) << " has shape "
                   << m_diffs[k].rows() << "x" << m_diffs[k].cols() << ", expected " << m_dims[k + 1] << "x"
                   << m_dims[k];
                throw std::invalid_argument(os.str());
            }
        }
    }

    int min_degree() const
    {
        return m_min;
    }
    int max_degree() const
    {
        return m_min + static_cast<int>(m_dims.size()) - 1;
    }
    std::size_t dim(int d) const
    {
        return in_window(d) ? m_dims[static_cast<std::size_t>(d - m_min)] : 0;
    }
    // The differential out of degree d, zero outside the window.
    RationalMatrix d(int deg) const
    {
        if (in_window(deg) && in_window(deg + 1)) {
            return m_diffs[static_cast<std::size_t>(deg - m_min)];
        }
        return RationalMatrix(dim(deg + 1), dim(deg));
    }

    // Degree of the first failure of d∘d = 0, if any.
    bool is_complex(int *failing_degree = nullptr) const
    {
        for (int k = m_min; k + 2 <= max_degree(); ++k) {
            if (!(d(k + 1) * d(k)).is_zero()) {
                if (failing_degree) {
                    *failing_degree = k;
                }
                return false;
            }
        }
        return true;
    }

    std::size_t cohomology_dim(int deg) const
    {
        return dim(deg) - d(deg).rank() - d(deg - 1).rank();
    }

    long euler_characteristic() const
    {
        long s = 0;
        for (int k = m_min; k <= max_degree(); ++k) {
            s += ((k % 2 == 0) ? 1 : -1) * static_cast<long>(dim(k));
        }
        return s;
    }

private:
    bool in_window(int d) const
    {
        return d >= m_min && d <= max_degree();
    }

    int m_min = 0;
    std::vector<std::size_t> m_dims;
    std::vector<RationalMatrix> m_diffs;
};

/// The complex E with differentials φ_i : E^i → E^{i+1}.
using VSComplex = GradedComplex;

inline VSComplex make_vs_complex(int min_degree, std::vector<std::size_t> dims, std::vector<RationalMatrix> phis)
{
    VSComplex e(min_degree, std::move(dims), std::move(phis));
    int bad = 0;
    if (!e.is_complex(&bad)) {
        std::ostringstream os;
        os << "phi_" << bad + 1 << " * phi_" << bad << " != 0";
        throw std::invalid_argument(os.str());
    }
    return e;
}

/**
 * C^d = ⊕_i Hom(E^i, E^{i+d}) with ∂(f_i) = φ_{i+d} f_i − (−1)^d f_{i+1} φ_i.
 * Each block f_i is stored as a dims[i+d] × dims[i] matrix, flattened row-major, blocks in increasing i.
 */
class HomComplex
{
public:
    struct Block {
        int i;              // source degree
        std::size_t offset; // first coordinate in C^d
        std::size_t rows;   // dim E^{i+d}
        std::size_t cols;   // dim E^i
    };

    explicit HomComplex(VSComplex e) : m_e(std::move(e))
    {
        int bad = 0;
        if (!m_e.is_complex(&bad)) {
            throw std::invalid_argument("source is not a complex");
        }
        m_span = m_e.max_degree() - m_e.min_degree();
        for (int d = -m_span; d <= m_span; ++d) {
            std::vector<Block> blocks;
            std::size_t off = 0;
            for (int i = m_e.min_degree(); i <= m_e.max_degree(); ++i) {
                const std::size_t r = m_e.dim(i + d);
                const std::size_t c = m_e.dim(i);
                blocks.push_back({i, off, r, c});
                off += r * c;
            }
            m_blocks.push_back(std::move(blocks));
            m_dims.push_back(off);
        }
        std::vector<RationalMatrix> diffs;
        for (int d = -m_span; d < m_span; ++d) {
            diffs.push_back(build_differential(d));
        }
        m_c = GradedComplex(-m_span, m_dims, std::move(diffs));
        if (!m_c.is_complex()) {
            throw std::logic_error("hom complex differential does not square to zero");
        }
    }

    const VSComplex &source() const
    {
        return m_e;
    }
    const GradedComplex &complex() const
    {
        return m_c;
    }
    int span() const
    {
        return m_span;
    }
    std::size_t dim(int d) const
    {
        return m_c.dim(d);
    }
    RationalMatrix d(int deg) const
    {
        return m_c.d(deg);
    }
    const std::vector<Block> &blocks(int d) const
    {
        return m_blocks.at(static_cast<std::size_t>(d + m_span));
    }

private:
    const Block *find_block(int d, int i) const
    {
        if (d < -m_span || d > m_span) {
            return nullptr;
        }
        for (const auto &b : blocks(d)) {
            if (b.i == i) {
                return &b;
            }
        }
        return nullptr;
    }

    RationalMatrix build_differential(int d) const
    {
        RationalMatrix D(m_dims[static_cast<std::size_t>(d + 1 + m_span)], m_dims[static_cast<std::size_t>(d + m_span)]);
        const long sign = (d % 2 == 0) ? 1 : -1; // (−1)^d
        for (const auto &b : blocks(d)) {
            const int i = b.i;
            // φ_{i+d} f_i lands in Hom(E^i, E^{i+d+1}), block i of C^{d+1}.
            const Block *tgt1 = find_block(d + 1, i);
            const RationalMatrix phi_a = m_e.d(i + d);
            // −(−1)^d f_i φ_{i−1} lands in Hom(E^{i−1}, E^{i+d}), block i−1 of C^{d+1}.
            const Block *tgt2 = find_block(d + 1, i - 1);
            const RationalMatrix phi_b = m_e.d(i - 1);
            for (std::size_t p = 0; p < b.rows; ++p) {
                for (std::size_t q = 0; q < b.cols; ++q) {
                    const std::size_t col = b.offset + p * b.cols + q;
                    if (tgt1) {
                        for (std::size_t r = 0; r < tgt1->rows; ++r) {
                            const mpq_class &v = phi_a(r, p);
                            if (sgn(v) != 0) {
                                D(tgt1->offset + r * tgt1->cols + q, col) += v;
                            }
                        }
                    }
                    if (tgt2) {
                        for (std::size_t s = 0; s < tgt2->cols; ++s) {
                            const mpq_class &v = phi_b(q, s);
                            if (sgn(v) != 0) {
                                D(tgt2->offset + p * tgt2->cols + s, col) -= sign * v;
                            }
                        }
                    }
                }
            }
        }
        return D;
    }

    VSComplex m_e;
    int m_span = 0;
    std::vector<std::vector<Block>> m_blocks;
    std::vector<std::size_t> m_dims;
    GradedComplex m_c;
};

inline HomComplex hom_complex(const VSComplex &e)
{
    return HomComplex(e);
}

/// 𝔱 : (C^0)^∨ → C^0, block i equal to (−1)^i times the trace duality Hom(E^i,E^i)^∨ ≅ Hom(E^i,E^i).
/// In the dual coordinate basis the trace duality sends e_{pq}^∨ to e_{qp}.
inline RationalMatrix duality_t(const HomComplex &H)
{
    RationalMatrix t(H.dim(0), H.dim(0));
    for (const auto &b : H.blocks(0)) {
        const long sign = (b.i % 2 == 0) ? 1 : -1;
        for (std::size_t p = 0; p < b.rows; ++p) {
            for (std::size_t q = 0; q < b.cols; ++q) {
                t(b.offset + q * b.cols + p, b.offset + p * b.cols + q) = sign;
            }
        }
    }
    return t;
}

/// ad : C^{≤0} → C^{≥0}[1], read off the displayed diagram: ∂ out of C^{−1}, 0 out of C^0.
struct AdMap {
    RationalMatrix from_minus_one; // C^{−1} → C^0
    RationalMatrix from_zero;      // C^0 → C^1

    // Commutation with the differentials of C^{≤0} and C^{≥0}[1] (the latter is −∂).
    bool is_chain_map(const HomComplex &H) const
    {
        const mpq_class minus_one(-1);
        const bool at_minus_two = (from_minus_one * H.d(-2)).is_zero();
        const bool at_minus_one = (minus_one * H.d(0)) * from_minus_one == from_zero * H.d(-1);
        const bool at_zero = (H.d(1) * from_zero).is_zero();
        return at_minus_two && at_minus_one && at_zero;
    }
};

inline AdMap ad_map(const HomComplex &H)
{
    return {H.d(-1), RationalMatrix(H.dim(1), H.dim(0))};
}

/// Π = ad∘𝔱 on the two degrees where it is nonzero after dualising:
/// pi_one : (C^0)^∨ → C^1 equals ∂_0 𝔱, pi_zero : (C^1)^∨ → C^0 equals 𝔱 ∂_0^T.
struct PiBivector {
    RationalMatrix pi_zero;
    RationalMatrix pi_one;

    bool is_chain_map(const HomComplex &H) const
    {
        return H.d(0) * pi_zero == pi_one * H.d(0).transpose() && (H.d(1) * pi_one).is_zero()
               && (pi_zero * H.d(1).transpose()).is_zero();
    }
    // ⟨ξ, Π η⟩ = ⟨η, Π ξ⟩ for ξ ∈ (C^1)^∨, η ∈ (C^0)^∨.
    bool is_self_dual() const
    {
        return pi_zero == pi_one.transpose();
    }
};

inline PiBivector pi_bivector(const HomComplex &H)
{
    const RationalMatrix t = duality_t(H);
    return {t * H.d(0).transpose(), H.d(0) * t};
}

struct IdentityCheck {
    std::string name;
    bool holds;
    std::size_t nonzeros; // entries of the difference that fail to vanish
};

struct ConeIsoReport {
    bool ok = true;
    std::string first_failure;
    std::vector<IdentityCheck> checks;
    GradedComplex cone;
    GradedComplex target;
    std::vector<std::size_t> cone_cohomology;
    std::vector<std::size_t> target_cohomology;
};

struct ConeOptions {
    // Replaces A = (1 0; 1 −1) by (1 0; 1 1).
    bool flip_sign = false;
    bool compute_cohomology = true;
};

namespace detail
{

inline RationalMatrix stack_rows(const RationalMatrix &top, const RationalMatrix &bottom)
{
    RationalMatrix m(top.rows() + bottom.rows(), top.cols());
    m.set_block(0, 0, top);
    m.set_block(top.rows(), 0, bottom);
    return m;
}

inline RationalMatrix stack_cols(const RationalMatrix &left, const RationalMatrix &right)
{
    RationalMatrix m(left.rows(), left.cols() + right.cols());
    m.set_block(0, 0, left);
    m.set_block(0, left.cols(), right);
    return m;
}

} // namespace detail

/**
 * Builds Cone(ad)[−1] (degree 0 ordered as C^{≥0}-part, C^{≤0}-part) and C^•⊕C^0, the map a
 * (A in degree 0, identity elsewhere) and checks: both are complexes, a is a chain map,
 * a is invertible, and a∘ι = Δ on C^{≥0}. The first failing identity is named in the report.
 */
inline ConeIsoReport cone_iso_check(const HomComplex &H, ConeOptions opt = {})
{
    const int s = H.span();
    const AdMap ad = ad_map(H);
    const std::size_t c0 = H.dim(0);
    const RationalMatrix I0 = RationalMatrix::identity(c0);
    const RationalMatrix Z0(c0, c0);

    std::vector<std::size_t> dims;
    for (int d = -s; d <= s; ++d) {
        dims.push_back(d == 0 ? 2 * c0 : H.dim(d));
    }
    std::vector<RationalMatrix> cone_d, target_d;
    for (int d = -s; d < s; ++d) {
        if (d == -1) {
            cone_d.push_back(detail::stack_rows(ad.from_minus_one, H.d(-1)));
            target_d.push_back(detail::stack_rows(H.d(-1), RationalMatrix(c0, H.dim(-1))));
        } else if (d == 0) {
            cone_d.push_back(detail::stack_cols(H.d(0), ad.from_zero));
            target_d.push_back(detail::stack_cols(H.d(0), RationalMatrix(H.dim(1), c0)));
        } else {
            cone_d.push_back(H.d(d));
            target_d.push_back(H.d(d));
        }
    }
    ConeIsoReport rep;
    rep.cone = GradedComplex(-s, dims, std::move(cone_d));
    rep.target = GradedComplex(-s, dims, std::move(target_d));

    auto record = [&rep](std::string name, const RationalMatrix &diff) {
        const std::size_t nz = diff.nonzeros();
        rep.checks.push_back({name, nz == 0, nz});
        if (nz != 0 && rep.ok) {
            rep.ok = false;
            rep.first_failure = std::move(name);
        }
    };
    auto record_bool = [&rep](std::string name, bool holds) {
        rep.checks.push_back({name, holds, holds ? 0u : 1u});
        if (!holds && rep.ok) {
            rep.ok = false;
            rep.first_failure = std::move(name);
        }
    };

    for (int d = -s; d + 2 <= s; ++d) {
        const std::string deg = std::to_string(d);
        record("cone complex: d_" + std::to_string(d + 1) + " d_" + deg + " = 0", rep.cone.d(d + 1) * rep.cone.d(d));
        record("target complex: d_" + std::to_string(d + 1) + " d_" + deg + " = 0",
               rep.target.d(d + 1) * rep.target.d(d));
    }

    RationalMatrix A(2 * c0, 2 * c0);
    A.set_block(0, 0, I0);
    A.set_block(c0, 0, I0);
    A.set_block(c0, c0, opt.flip_sign ? I0 : mpq_class(-1) * I0);
    auto a = [&](int d) { return d == 0 ? A : RationalMatrix::identity(H.dim(d)); };

    for (int d = -s; d < s; ++d) {
        record("a chain map: a_" + std::to_string(d + 1) + " d_cone = d_target a_" + std::to_string(d),
               a(d + 1) * rep.cone.d(d) - rep.target.d(d) * a(d));
    }
    for (int d = -s; d <= s; ++d) {
        const RationalMatrix m = a(d);
        record_bool("a invertible in degree " + std::to_string(d), m.rows() == m.cols() && m.rank() == m.rows());
    }
    // ι(y) = (y, 0) and Δ(y) = (y, y) in degree 0, identities above.
    record("a iota = Delta in degree 0", A * detail::stack_rows(I0, Z0) - detail::stack_rows(I0, I0));

    if (opt.compute_cohomology) {
        for (int d = -s; d <= s; ++d) {
            rep.cone_cohomology.push_back(rep.cone.cohomology_dim(d));
            rep.target_cohomology.push_back(rep.target.cohomology_dim(d));
        }
        record_bool("quasi-isomorphism: equal cohomology dimensions", rep.cone_cohomology == rep.target_cohomology);
    }
    return rep;
}

/// Random integer complex E^{−1} → E^0 → E^1 of dimensions (n, 2n+r, n), φ_0 surjective and φ_{−1} injective.
template <typename Rng>
VSComplex random_kronecker_complex(std::size_t n, std::size_t r, Rng &rng, long entry_bound = 3)
{
    const std::size_t m = 2 * n + r;
    std::uniform_int_distribution<long> u(-entry_bound, entry_bound);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        RationalMatrix a(n, m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                a(i, j) = u(rng);
            }
        }
        if (a.rank() != n) {
            continue;
        }
        const RationalMatrix k = a.kernel().integer_columns(); // m × (m − n)
        RationalMatrix c(k.cols(), n);
        for (std::size_t i = 0; i < c.rows(); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                c(i, j) = u(rng);
            }
        }
        RationalMatrix b = k * c;
        if (b.rank() != n) {
            continue;
        }
        return make_vs_complex(-1, {n, m, n}, {b, a});
    }
    throw std::runtime_error("failed to draw a rank-generic Kronecker complex");
}

} // namespace ellpoisson

#endif
