#ifndef FFVAR_RMT_HPP
#define FFVAR_RMT_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace ffvar {

/// I_k(n;R): mean square over Haar-random R x R unitaries of the T^n
/// coefficient of det(1 + T U)^k.  Evaluated exactly as a lattice-point
/// count: k x k integer matrices with entries in [0,R], rows weakly
/// increasing left to right, columns weakly decreasing downward, and
/// anti-diagonal sum kR - n.  Returns 0 for n outside [0, kR].
mpz_class lattice_count(int k, long n, int R);

/// Column orientation of the monotone-matrix count.  DecreasingDown is the
/// calibrated direction (it reproduces the closed forms); IncreasingDown is
/// kept so the calibration can be demonstrated and pinned by tests.
enum class ColumnOrder { DecreasingDown, IncreasingDown };
mpz_class lattice_count_with_order(int k, long n, int R, ColumnOrder order);

/// Closed forms on the two strict ranges: binom(n+k^2-1, k^2-1) for n < R,
/// binom(kR-n+k^2-1, k^2-1) for (k-1)R < n < kR; nullopt elsewhere.
std::optional<mpz_class> closed_form(int k, long n, int R);

mpz_class binomial(long n, long k);

struct HaarSample {
    int R = 0;
    std::vector<std::complex<double>> u; // row-major R x R

    std::complex<double>& at(int i, int j) { return u[size_t(i) * R + j]; }
    const std::complex<double>& at(int i, int j) const { return u[size_t(i) * R + j]; }
};

/// Haar-distributed unitary: complex Ginibre matrix, QR factorization, then
/// the R-diagonal phase correction.  Deterministic given the seed.
HaarSample haar_sample(int R, uint64_t seed);

/// max-norm of U U* - I
double unitarity_residual(const HaarSample& s);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;
    uint64_t seed = 0;
};

/// Monte-Carlo evaluation of I_k(n;R): per sample, power sums of the unitary
/// feed Newton's identities to give the coefficients of det(1 + T U); the
/// degree-R polynomial is raised to the k-th power and |coefficient n|^2 is
/// averaged.  Deterministic given the seed, independent of worker count.
McEstimate haar_mc_integral(int k, long n, int R, uint64_t samples, uint64_t seed,
                            int workers = 1);

/// gamma_k(c), the leading coefficient of I_k(cR;R) ~ gamma_k(c) R^{k^2-1}:
/// Monte-Carlo over the hyperplane slice w_1+...+w_k = c of the unit cube,
/// with the Vandermonde-squared weight and the delta absorbed into the last
/// coordinate.
McEstimate gamma_mc(int k, double c, uint64_t samples, uint64_t seed, int workers = 1);

/// Exact finite-R counterpart lattice_count(k, round(cR), R) / R^{k^2-1}.
mpq_class gamma_from_lattice(int k, double c, int R);

} // namespace ffvar

#endif
