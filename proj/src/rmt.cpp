#include "ffvar/rmt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ffvar/errors.hpp"
#include "ffvar/rng.hpp"

namespace ffvar {

namespace {

using cplx = std::complex<double>;

size_t ipow_sz(size_t base, int e) {
    size_t out = 1;
    while (e-- > 0) out *= base;
    return out;
}

// ---------------------------------------------------------------------------
// Lattice-point count, evaluated by a transfer over anti-diagonal slices.
//
// The k x k matrix is filled along the diagonals i + j = c, c = 2..2k.  Cells
// of one slice carry no mutual constraints, and the order constraints couple
// only adjacent slices, where they take the interlacing form
//     d_j in [e_{j+1}, e_j]             (columns weakly decreasing downward)
// between an old slice d (m cells) and the next slice e (m+1 cells), both
// walking toward the anti-diagonal i + j = k + 1.  A forward pass from the
// top-left corner and a backward pass from the bottom-right corner meet at
// the anti-diagonal, whose entries are exactly the ones whose sum is pinned
// to kR - n; no running-sum dimension is ever needed.
// ---------------------------------------------------------------------------

template <class Acc>
void prefix_sums(std::vector<Acc>& a, int m, int R1) {
    const size_t total = a.size();
    size_t stride = 1;
    for (int dim = 0; dim < m; ++dim) {
        for (size_t i = 0; i < total; ++i) {
            size_t coord = (i / stride) % size_t(R1);
            if (coord > 0) a[i] += a[i - stride];
        }
        stride *= size_t(R1);
    }
}

template <class Acc>
std::vector<Acc> slice_transition(const std::vector<Acc>& old_dp, int m, int R,
                                  ColumnOrder order, bool forward) {
    const int R1 = R + 1;
    std::vector<Acc> P(old_dp);
    prefix_sums(P, m, R1);

    std::vector<size_t> stride(size_t(m) + 1);
    stride[0] = 1;
    for (int j = 1; j <= m; ++j) stride[size_t(j)] = stride[size_t(j - 1)] * size_t(R1);

    const size_t ntotal = stride[size_t(m)] * size_t(R1);
    std::vector<Acc> out(ntotal, Acc(0));
    std::vector<int> e(size_t(m) + 1, 0);
    std::vector<int> lo(static_cast<size_t>(m)), hi(static_cast<size_t>(m));

    for (size_t flat = 0;;) {
        bool empty = false;
        for (int j = 0; j < m; ++j) {
            int a, b;
            if (order == ColumnOrder::DecreasingDown) {
                a = e[size_t(j) + 1];
                b = e[size_t(j)];
            } else if (forward) {
                a = 0;
                b = std::min(e[size_t(j)], e[size_t(j) + 1]);
            } else {
                a = std::max(e[size_t(j)], e[size_t(j) + 1]);
                b = R;
            }
            if (a > b) {
                empty = true;
                break;
            }
            lo[size_t(j)] = a;
            hi[size_t(j)] = b;
        }
        if (!empty) {
            Acc acc(0);
            for (uint32_t mask = 0; mask < (1u << m); ++mask) {
                size_t idx = 0;
                bool dead = false;
                int bits = 0;
                for (int j = 0; j < m; ++j) {
                    int corner = (mask >> j & 1u) ? lo[size_t(j)] - 1 : hi[size_t(j)];
                    if (corner < 0) {
                        dead = true;
                        break;
                    }
                    idx += size_t(corner) * stride[size_t(j)];
                    bits += int(mask >> j & 1u);
                }
                if (dead) continue;
                if (bits & 1)
                    acc -= P[idx];
                else
                    acc += P[idx];
            }
            out[flat] = acc;
        }
        if (++flat >= ntotal) break;
        for (int j = 0; j <= m; ++j) {
            if (++e[size_t(j)] <= R) break;
            e[size_t(j)] = 0;
        }
    }
    return out;
}

template <class Acc>
mpz_class to_mpz(const Acc& v);

template <>
mpz_class to_mpz<uint64_t>(const uint64_t& v) {
    mpz_class out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

template <>
mpz_class to_mpz<unsigned __int128>(const unsigned __int128& v) {
    uint64_t hi = uint64_t(v >> 64), lo = uint64_t(v);
    mpz_class out = to_mpz(hi);
    out <<= 64;
    out += to_mpz(lo);
    return out;
}

template <>
mpz_class to_mpz<mpz_class>(const mpz_class& v) {
    return v;
}

template <class Acc>
mpz_class lattice_count_impl(int k, long n, int R, ColumnOrder order) {
    const int R1 = R + 1;
    // Both passes start from a single corner cell and walk to the
    // anti-diagonal; under either orientation the local transition shape is
    // identical at every step.
    std::vector<Acc> fwd(size_t(R1), Acc(1)), bwd(size_t(R1), Acc(1));
    for (int m = 1; m < k; ++m) {
        fwd = slice_transition(fwd, m, R, order, true);
        bwd = slice_transition(bwd, m, R, order, false);
    }
    const long target = long(k) * R - n;
    std::vector<int> y(size_t(k), 0);
    long sum = 0;
    Acc total(0);
    const size_t ntotal = ipow_sz(size_t(R1), k);
    for (size_t flat = 0;;) {
        if (sum == target) total += fwd[flat] * bwd[flat];
        if (++flat >= ntotal) break;
        for (int j = 0; j < k; ++j) {
            if (++y[size_t(j)] <= R) {
                sum += 1;
                break;
            }
            y[size_t(j)] = 0;
            sum -= R;
        }
    }
    return to_mpz(total);
}

} // namespace

mpz_class lattice_count_with_order(int k, long n, int R, ColumnOrder order) {
    if (k < 1) throw std::invalid_argument("lattice_count: k must be >= 1");
    if (R < 1) throw std::invalid_argument("lattice_count: R must be >= 1");
    if (n < 0 || n > long(k) * R) return 0;

    const double bits = double(k) * k * std::log2(double(R) + 1.0) + 2.0;
    if (bits <= 62.0) return lattice_count_impl<uint64_t>(k, n, R, order);
    if (bits <= 124.0) return lattice_count_impl<unsigned __int128>(k, n, R, order);
    if (ipow_sz(size_t(R) + 1, k) > (size_t(1) << 26))
        throw BudgetExceededError("lattice count state space too large for exact evaluation");
    return lattice_count_impl<mpz_class>(k, n, R, order);
}

mpz_class lattice_count(int k, long n, int R) {
    return lattice_count_with_order(k, n, R, ColumnOrder::DecreasingDown);
}

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

std::optional<mpz_class> closed_form(int k, long n, int R) {
    if (k < 1 || R < 1) throw std::invalid_argument("closed_form: k and R must be >= 1");
    const long kk1 = long(k) * k - 1;
    if (n >= 0 && n < R) return binomial(n + kk1, kk1);
    if (n > long(k - 1) * R && n < long(k) * R) return binomial(long(k) * R - n + kk1, kk1);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Haar sampling and Monte-Carlo paths
// ---------------------------------------------------------------------------

namespace {

// Householder QR of a complex Ginibre matrix; the triangular factor's
// diagonal phases are pushed into Q so the result is exactly Haar.
HaarSample haar_from_rng(int R, Rng& rng) {
    const int N = R;
    std::vector<cplx> A(size_t(N) * N);
    for (auto& z : A) z = cplx(rng.gauss(), rng.gauss());

    std::vector<std::vector<cplx>> vs;
    std::vector<double> vnorm2s;
    auto at = [&](std::vector<cplx>& M, int i, int j) -> cplx& { return M[size_t(i) * N + j]; };

    std::vector<cplx> diag(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        double norm2 = 0;
        for (int i = j; i < N; ++i) norm2 += std::norm(at(A, i, j));
        double norm = std::sqrt(norm2);
        cplx ajj = at(A, j, j);
        cplx alpha = (std::abs(ajj) == 0.0) ? cplx(norm, 0) : -(ajj / std::abs(ajj)) * norm;
        std::vector<cplx> v(size_t(N), cplx(0, 0));
        for (int i = j + 1; i < N; ++i) v[size_t(i)] = at(A, i, j);
        v[size_t(j)] = ajj - alpha;
        double vn2 = 0;
        for (int i = j; i < N; ++i) vn2 += std::norm(v[size_t(i)]);
        if (vn2 > 1e-300 && j < N - 1) {
            for (int c = j; c < N; ++c) {
                cplx s(0, 0);
                for (int i = j; i < N; ++i) s += std::conj(v[size_t(i)]) * at(A, i, c);
                s *= 2.0 / vn2;
                for (int i = j; i < N; ++i) at(A, i, c) -= s * v[size_t(i)];
            }
            vs.push_back(std::move(v));
            vnorm2s.push_back(vn2);
        } else {
            vs.emplace_back();
            vnorm2s.push_back(0);
        }
        diag[size_t(j)] = at(A, j, j);
    }

    // Q = H_0 H_1 ... H_{N-2} applied to the identity.
    std::vector<cplx> Q(size_t(N) * N, cplx(0, 0));
    for (int i = 0; i < N; ++i) at(Q, i, i) = cplx(1, 0);
    for (int j = N - 1; j >= 0; --j) {
        if (vnorm2s[size_t(j)] == 0) continue;
        const auto& v = vs[size_t(j)];
        for (int c = 0; c < N; ++c) {
            cplx s(0, 0);
            for (int i = j; i < N; ++i) s += std::conj(v[size_t(i)]) * at(Q, i, c);
            s *= 2.0 / vnorm2s[size_t(j)];
            for (int i = j; i < N; ++i) at(Q, i, c) -= s * v[size_t(i)];
        }
    }

    HaarSample out;
    out.R = N;
    out.u.assign(size_t(N) * N, cplx(0, 0));
    for (int c = 0; c < N; ++c) {
        double ad = std::abs(diag[size_t(c)]);
        cplx phase = ad == 0.0 ? cplx(1, 0) : diag[size_t(c)] / ad;
        for (int i = 0; i < N; ++i) out.at(i, c) = at(Q, i, c) * phase;
    }
    return out;
}

// |coefficient of T^n in det(1 + T U)^k|^2 for one sample.
double char_poly_power_coeff_sq(const HaarSample& U, int k, long n) {
    const int R = U.R;
    const int M = int(std::min<long>(n, R));
    // Power sums tr(U^m), m = 1..M.
    std::vector<cplx> p(size_t(M) + 1, cplx(0, 0));
    std::vector<cplx> cur(U.u), next(size_t(R) * R);
    for (int m = 1; m <= M; ++m) {
        cplx tr(0, 0);
        for (int i = 0; i < R; ++i) tr += cur[size_t(i) * R + i];
        p[size_t(m)] = tr;
        if (m == M) break;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < R; ++j) {
                cplx s(0, 0);
                for (int l = 0; l < R; ++l) s += cur[size_t(i) * R + l] * U.u[size_t(l) * R + j];
                next[size_t(i) * R + j] = s;
            }
        std::swap(cur, next);
    }
    // Newton's identities: elementary symmetric e_j of the eigenvalues,
    // i.e. the coefficients of det(1 + T U).
    std::vector<cplx> e(size_t(M) + 1, cplx(0, 0));
    e[0] = cplx(1, 0);
    for (int j = 1; j <= M; ++j) {
        cplx s(0, 0);
        for (int i = 1; i <= j; ++i) {
            cplx term = p[size_t(i)] * e[size_t(j - i)];
            if (i % 2 == 0) term = -term;
            s += term;
        }
        e[size_t(j)] = s / double(j);
    }
    // (sum_j e_j T^j)^k truncated at degree n.
    std::vector<cplx> acc(e), tmp;
    const size_t nlen = size_t(n) + 1;
    if (acc.size() < nlen) acc.resize(nlen, cplx(0, 0));
    acc.resize(nlen);
    std::vector<cplx> base(acc);
    for (int rep = 1; rep < k; ++rep) {
        tmp.assign(nlen, cplx(0, 0));
        for (size_t i = 0; i < nlen; ++i) {
            if (acc[i] == cplx(0, 0)) continue;
            for (size_t j = 0; i + j < nlen && j < base.size(); ++j)
                tmp[i + j] += acc[i] * base[j];
        }
        std::swap(acc, tmp);
    }
    return std::norm(acc[size_t(n)]);
}

// Deterministic block-structured Monte-Carlo driver: the sample stream is
// split into fixed blocks with derived seeds, workers pick blocks
// dynamically, and the merge runs in block order.
McEstimate run_blocks(uint64_t samples, uint64_t seed, int workers,
                      const std::function<void(Rng&, uint64_t, double*, double*)>& block_fn,
                      uint64_t block_size) {
    const uint64_t nblocks = (samples + block_size - 1) / block_size;
    std::vector<double> sums(nblocks, 0.0), sumsqs(nblocks, 0.0);
    std::atomic<uint64_t> counter{0};
    auto work = [&] {
        for (;;) {
            uint64_t b = counter.fetch_add(1);
            if (b >= nblocks) return;
            uint64_t count = std::min(block_size, samples - b * block_size);
            Rng rng(block_seed(seed, b));
            block_fn(rng, count, &sums[b], &sumsqs[b]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    double sum = 0, sumsq = 0;
    for (uint64_t b = 0; b < nblocks; ++b) {
        sum += sums[b];
        sumsq += sumsqs[b];
    }
    McEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.estimate = sum / double(samples);
    if (samples > 1) {
        double var = (sumsq - sum * sum / double(samples)) / double(samples - 1);
        out.std_error = var > 0 ? std::sqrt(var / double(samples)) : 0.0;
    }
    return out;
}

} // namespace

HaarSample haar_sample(int R, uint64_t seed) {
    if (R < 1) throw std::invalid_argument("haar_sample: R must be >= 1");
    Rng rng(splitmix64(seed));
    return haar_from_rng(R, rng);
}

double unitarity_residual(const HaarSample& s) {
    const int R = s.R;
    double worst = 0;
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) {
            cplx acc(0, 0);
            for (int l = 0; l < R; ++l) acc += s.at(i, l) * std::conj(s.at(j, l));
            if (i == j) acc -= cplx(1, 0);
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

McEstimate haar_mc_integral(int k, long n, int R, uint64_t samples, uint64_t seed, int workers) {
    if (k < 1 || R < 1) throw std::invalid_argument("haar_mc_integral: k and R must be >= 1");
    if (R > 12)
        throw std::invalid_argument("haar_mc_integral: R capped at 12 (double-precision "
                                    "Newton chain loses significance beyond)");
    if (samples < 1000) throw std::invalid_argument("haar_mc_integral: needs >= 1000 samples");
    if (n < 0 || n > long(k) * R) {
        // the coefficient is absent: the integrand is identically zero
        McEstimate out;
        out.samples = samples;
        out.seed = seed;
        return out;
    }
    auto block_fn = [k, n, R](Rng& rng, uint64_t count, double* sum, double* sumsq) {
        double s = 0, s2 = 0;
        for (uint64_t i = 0; i < count; ++i) {
            HaarSample u = haar_from_rng(R, rng);
            double v = char_poly_power_coeff_sq(u, k, n);
            s += v;
            s2 += v * v;
        }
        *sum = s;
        *sumsq = s2;
    };
    return run_blocks(samples, seed, workers, block_fn, 4096);
}

McEstimate gamma_mc(int k, double c, uint64_t samples, uint64_t seed, int workers) {
    if (k < 1 || k > 12) throw std::invalid_argument("gamma_mc: k must be in [1, 12]");
    if (c < 0.0 || c > double(k))
        throw COutOfRangeError("gamma_mc: c must lie in [0, k]");
    if (samples < 10000) throw std::invalid_argument("gamma_mc: needs >= 10000 samples");
    // 1 / (k! * G(1+k)^2) with G(1+k) = 1! 2! ... (k-1)!
    double norm = 1.0;
    for (int i = 2; i <= k; ++i) norm *= i;
    double g = 1.0, fact = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
        fact *= i;
        g *= fact;
    }
    norm *= g * g;
    const double scale = 1.0 / norm;

    auto block_fn = [k, c, scale](Rng& rng, uint64_t count, double* sum, double* sumsq) {
        double s = 0, s2 = 0;
        std::vector<double> w(static_cast<size_t>(k));
        for (uint64_t i = 0; i < count; ++i) {
            double acc = 0;
            for (int j = 0; j < k - 1; ++j) {
                w[size_t(j)] = rng.uniform();
                acc += w[size_t(j)];
            }
            w[size_t(k) - 1] = c - acc;
            double v = 0;
            if (w[size_t(k) - 1] >= 0.0 && w[size_t(k) - 1] <= 1.0) {
                double prod = 1;
                for (int a = 0; a < k; ++a)
                    for (int b = a + 1; b < k; ++b) {
                        double d = w[size_t(a)] - w[size_t(b)];
                        prod *= d * d;
                    }
                v = prod * scale;
            }
            s += v;
            s2 += v * v;
        }
        *sum = s;
        *sumsq = s2;
    };
    return run_blocks(samples, seed, workers, block_fn, 65536);
}

mpq_class gamma_from_lattice(int k, double c, int R) {
    if (k < 1 || R < 1) throw std::invalid_argument("gamma_from_lattice: k and R must be >= 1");
    long n = std::lround(c * R);
    if (n < 0 || n > long(k) * R)
        throw COutOfRangeError("gamma_from_lattice: round(c*R) outside [0, kR]");
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(R),
                  static_cast<unsigned long>(k * k - 1));
    mpq_class out(lattice_count(k, n, R), denom);
    out.canonicalize();
    return out;
}

} // namespace ffvar
