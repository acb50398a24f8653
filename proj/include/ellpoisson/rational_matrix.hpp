#ifndef ELLPOISSON_RATIONAL_MATRIX_HPP
#define ELLPOISSON_RATIONAL_MATRIX_HPP

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ellpoisson
{

/// Dense matrix over ℚ, row-major.
class RationalMatrix
{
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : m_rows(rows), m_cols(cols), m_a(rows * cols) {}

    static RationalMatrix identity(std::size_t n)
    {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    static RationalMatrix from_rows(const std::vector<std::vector<long>> &rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        RationalMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) {
                throw std::invalid_argument("ragged matrix literal");
            }
            for (std::size_t j = 0; j < c; ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const
    {
        return m_rows;
    }
    std::size_t cols() const
    {
        return m_cols;
    }

    mpq_class &operator()(std::size_t i, std::size_t j)
    {
        return m_a[i * m_cols + j];
    }
    const mpq_class &operator()(std::size_t i, std::size_t j) const
    {
        return m_a[i * m_cols + j];
    }

    bool is_zero() const
    {
        for (const auto &x : m_a) {
            if (sgn(x) != 0) {
                return false;
            }
        }
        return true;
    }

    // Number of nonzero entries; the exact analogue of a residual.
    std::size_t nonzeros() const
    {
        std::size_t c = 0;
        for (const auto &x : m_a) {
            c += sgn(x) != 0 ? 1 : 0;
        }
        return c;
    }

    RationalMatrix transpose() const
    {
        RationalMatrix t(m_cols, m_rows);
        for (std::size_t i = 0; i < m_rows; ++i) {
            for (std::size_t j = 0; j < m_cols; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend bool operator==(const RationalMatrix &a, const RationalMatrix &b)
    {
        return a.m_rows == b.m_rows && a.m_cols == b.m_cols && a.m_a == b.m_a;
    }

    friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix &b)
    {
        a.check_same_shape(b);
        for (std::size_t k = 0; k < a.m_a.size(); ++k) {
            a.m_a[k] += b.m_a[k];
        }
        return a;
    }
    friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix &b)
    {
        a.check_same_shape(b);
        for (std::size_t k = 0; k < a.m_a.size(); ++k) {
            a.m_a[k] -= b.m_a[k];
        }
        return a;
    }
    friend RationalMatrix operator*(const mpq_class &s, RationalMatrix a)
    {
        for (auto &x : a.m_a) {
            x *= s;
        }
        return a;
    }
    friend RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b)
    {
        if (a.m_cols != b.m_rows) {
            throw std::invalid_argument("matrix shapes do not compose");
        }
        RationalMatrix c(a.m_rows, b.m_cols);
        for (std::size_t i = 0; i < a.m_rows; ++i) {
            for (std::size_t k = 0; k < a.m_cols; ++k) {
                const mpq_class &x = a(i, k);
                if (sgn(x) == 0) {
                    continue;
                }
                for (std::size_t j = 0; j < b.m_cols; ++j) {
                    if (sgn(b(k, j)) != 0) {
                        c(i, j) += x * b(k, j);
                    }
                }
            }
        }
        return c;
    }

    // Copies src into the block starting at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const RationalMatrix &src)
    {
        if (r0 + src.m_rows > m_rows || c0 + src.m_cols > m_cols) {
            throw std::out_of_range("block does not fit");
        }
        for (std::size_t i = 0; i < src.m_rows; ++i) {
            for (std::size_t j = 0; j < src.m_cols; ++j) {
                (*this)(r0 + i, c0 + j) = src(i, j);
            }
        }
    }

    // Row-reduced echelon form in place; returns the pivot columns.
    std::vector<std::size_t> rref()
    {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < m_cols && r < m_rows; ++c) {
            std::size_t p = r;
            while (p < m_rows && sgn((*this)(p, c)) == 0) {
                ++p;
            }
            if (p == m_rows) {
                continue;
            }
            if (p != r) {
                for (std::size_t j = 0; j < m_cols; ++j) {
                    std::swap((*this)(p, j), (*this)(r, j));
                }
            }
            const mpq_class inv = 1 / (*this)(r, c);
            for (std::size_t j = c; j < m_cols; ++j) {
                (*this)(r, j) *= inv;
            }
            for (std::size_t i = 0; i < m_rows; ++i) {
                if (i == r || sgn((*this)(i, c)) == 0) {
                    continue;
                }
                const mpq_class f = (*this)(i, c);
                for (std::size_t j = c; j < m_cols; ++j) {
                    if (sgn((*this)(r, j)) != 0) {
                        (*this)(i, j) -= f * (*this)(r, j);
                    }
                }
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const
    {
        RationalMatrix m = *this;
        return m.rref().size();
    }

    // Columns span the right kernel.
    RationalMatrix kernel() const
    {
        RationalMatrix m = *this;
        const auto piv = m.rref();
        std::vector<bool> is_pivot(m_cols, false);
        for (auto c : piv) {
            is_pivot[c] = true;
        }
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < m_cols; ++c) {
            if (!is_pivot[c]) {
                free.push_back(c);
            }
        }
        RationalMatrix k(m_cols, free.size());
        for (std::size_t f = 0; f < free.size(); ++f) {
            k(free[f], f) = 1;
            for (std::size_t r = 0; r < piv.size(); ++r) {
                k(piv[r], f) = -m(r, free[f]);
            }
        }
        return k;
    }

    // Scales every column to integer entries.
    RationalMatrix integer_columns() const
    {
        RationalMatrix out = *this;
        for (std::size_t j = 0; j < m_cols; ++j) {
            mpz_class l = 1;
            for (std::size_t i = 0; i < m_rows; ++i) {
                mpz_class d = out(i, j).get_den();
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
            }
            for (std::size_t i = 0; i < m_rows; ++i) {
                out(i, j) *= l;
            }
        }
        return out;
    }

    // Largest |entry| as a double.
    double max_abs() const
    {
        double m = 0;
        for (const auto &x : m_a) {
            const double v = mpq_class(abs(x)).get_d();
            m = v > m ? v : m;
        }
        return m;
    }

    friend std::ostream &operator<<(std::ostream &os, const RationalMatrix &m)
    {
        for (std::size_t i = 0; i < m.m_rows; ++i) {
            for (std::size_t j = 0; j < m.m_cols; ++j) {
                os << (j ? " " : "") << m(i, j);
            }
            os << '\n';
        }
        return os;
    }

private:
    void check_same_shape(const RationalMatrix &b) const
    {
        if (m_rows != b.m_rows || m_cols != b.m_cols) {
            throw std::invalid_argument("matrix shape mismatch");
        }
    }

    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<mpq_class> m_a;
};

} // namespace ellpoisson

#endif
