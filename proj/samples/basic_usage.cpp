// Tour of the library: theta basis, Sklyanin bracket, moduli bracket, cone check, leaf table.

#include <complex>
#include <iostream>
#include <random>

#include <ellpoisson/cech.hpp>
#include <ellpoisson/fo_algebra.hpp>
#include <ellpoisson/homological.hpp>
#include <ellpoisson/leaves.hpp>

using namespace ellpoisson;
using cd = std::complex<double>;

int main()
{
    const int n = 3;
    const ThetaBasis<double> B(CurveParams<double>(cd(0, 1), n));

    std::cout << "theta_alpha(0):\n";
    for (int a = 0; a < n; ++a) {
        std::cout << "  alpha=" << a << "  " << B.at_zero(a) << "\n";
    }

    const auto S = sklyanin_bracket(B, 1);
    std::cout << "Jacobi defect of the Sklyanin bracket: " << jacobi_defect(S) << "\n";
    std::cout << "{x_0, x_1} coefficients:\n";
    for (const auto &[key, v] : sklyanin_terms(B, 1, 0, 1)) {
        std::cout << "  x_" << key.first << " x_" << key.second << " : " << v << "\n";
    }

    // Bracket on the moduli of extensions at a chart point, against the projective Sklyanin bracket.
    const CechContext<double> ctx(B);
    const std::vector<cd> t{1, cd(0.3, -0.2), cd(-0.1, 0.4)};
    const auto m = moduli_bracket(t, ctx, ModuliMethod::trace_form);
    const auto C = f_constants(B).as_hn_bracket();
    std::cout << "{t_1, t_2}: moduli " << m[1][2] << "  projective Sklyanin " << projective_bracket(C, t, 1, 2)
              << "\n";

    // Exact chain-level check on a random Kronecker complex of dims (3, 7, 3).
    std::mt19937_64 rng(1);
    const HomComplex H(random_kronecker_complex(3, 1, rng));
    const auto rep = cone_iso_check(H);
    std::cout << "cone isomorphism on dims (3,7,3): " << (rep.ok ? "holds" : "fails at " + rep.first_failure) << "\n";

    std::cout << "strata of length <= 3 (l, type, d_F):\n";
    for (const auto &r : enumerate_strata(3)) {
        std::cout << "  " << r.l << "  " << r.label << "  " << r.expected_dim << (r.feasible ? "" : "  (infeasible)")
                  << (r.table_row.empty() ? "" : "  [" + r.table_row + "]") << "\n";
    }
    return 0;
}
