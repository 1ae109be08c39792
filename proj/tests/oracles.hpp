// Test-only reference implementations, kept independent of the library's
// computation paths.
#ifndef FFVAR_TESTS_ORACLES_HPP
#define FFVAR_TESTS_ORACLES_HPP

#include <vector>

#include <gmpxx.h>

#include "ffvar/lfunction.hpp"
#include "ffvar/poly.hpp"
#include "ffvar/rmt.hpp"

namespace ffvar::oracles {

/// Brute-force projective point count of y^2 = x(x-1)(x-theta): scan every
/// (x, y) pair and add the point at infinity.
inline long legendre_points_bruteforce(const ResidueField& F, uint64_t theta) {
    long count = 1;
    for (uint64_t x = 0; x < F.size(); ++x) {
        uint64_t rhs = F.mul(F.mul(x, F.sub(x, F.one())), F.sub(x, theta));
        for (uint64_t y = 0; y < F.size(); ++y)
            if (F.mul(y, y) == rhs) ++count;
    }
    return count;
}

/// All monic divisors of f, from its factorization.
inline std::vector<Poly> monic_divisors(const Poly& f) {
    const FieldCtx& F = f.ctx();
    std::vector<Poly> divs{Poly::one(F)};
    for (const auto& [prime, e] : factorize_trial(f).parts) {
        std::vector<Poly> next;
        Poly pw = Poly::one(F);
        for (int i = 0; i <= e; ++i) {
            for (const auto& d : divs) next.push_back(d * pw);
            if (i < e) pw = pw * prime;
        }
        divs = std::move(next);
    }
    return divs;
}

/// d_{k,rho}(f) as the literal sum over ordered k-tuples (f_1, ..., f_k)
/// of monics with product f of a_{f_1} ... a_{f_k}.
inline mpz_class divisor_value_bruteforce(const CoeffTable& a, int k, const Poly& f) {
    if (k == 1) return a.at(f);
    mpz_class acc = 0;
    for (const auto& d : monic_divisors(f)) {
        Poly rest = divrem(f, d).first;
        acc += a.at(d) * divisor_value_bruteforce(a, k - 1, rest);
    }
    return acc;
}

/// Direct enumeration of the lattice-point count of the monotone-matrix
/// description (rows weakly increasing rightward, columns weakly decreasing
/// downward unless flipped, anti-diagonal sum kR - n).
inline mpz_class lattice_count_bruteforce(int k, long n, int R, bool decreasing_down = true) {
    const int cells = k * k;
    std::vector<int> x(size_t(cells), 0); // row-major: x[i*k + j], 0-based
    mpz_class count = 0;
    for (;;) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            for (int j = 0; j + 1 < k && ok; ++j)
                if (x[size_t(i) * k + j] > x[size_t(i) * k + j + 1]) ok = false;
        for (int j = 0; j < k && ok; ++j)
            for (int i = 0; i + 1 < k && ok; ++i) {
                int upper = x[size_t(i) * k + j], lower = x[size_t(i + 1) * k + j];
                if (decreasing_down ? lower > upper : upper > lower) ok = false;
            }
        if (ok) {
            long s = 0;
            for (int i = 0; i < k; ++i) s += x[size_t(i) * k + (k - 1 - i)];
            if (s == long(k) * R - n) ++count;
        }
        int pos = 0;
        while (pos < cells && ++x[size_t(pos)] > R) x[size_t(pos++)] = 0;
        if (pos == cells) break;
    }
    return count;
}

} // namespace ffvar::oracles

#endif
