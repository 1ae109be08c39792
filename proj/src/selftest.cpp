#include "ffvar/selftest.hpp"

#include <cmath>
#include <complex>

#include "ffvar/characters.hpp"
#include "ffvar/progression.hpp"
#include "ffvar/rmt.hpp"

namespace ffvar {

namespace {

struct Harness {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    }
};

} // namespace

int run_selftest(std::ostream& out) {
    Harness h{out};

    // Column-order calibration: the frozen orientation reproduces the closed
    // forms on both strict ranges; the flipped orientation must not.
    {
        bool calibrated_ok = true;
        bool flipped_differs = false;
        for (int k = 2; k <= 3; ++k)
            for (int R = 2; R <= 6; ++R)
                for (long n = 0; n <= long(k) * R; ++n) {
                    auto cf = closed_form(k, n, R);
                    if (!cf) continue;
                    if (lattice_count(k, n, R) != *cf) calibrated_ok = false;
                    if (lattice_count_with_order(k, n, R, ColumnOrder::IncreasingDown) != *cf)
                        flipped_differs = true;
                }
        h.check("lattice column-order calibration (closed forms, k<=3, R<=6)", calibrated_ok);
        h.check("flipped column order rejected by calibration", flipped_differs);
    }

    // U(1) reduction and the functional-equation symmetry.
    {
        bool ok = true;
        for (int k = 1; k <= 5; ++k)
            for (long n = 0; n <= k + 1; ++n) {
                mpz_class want = binomial(k, n) * binomial(k, n);
                if (lattice_count(k, n, 1) != want) ok = false;
            }
        h.check("U(1) reduction lattice_count(k,n,1) = binom(k,n)^2", ok);

        bool sym = true;
        for (int k = 2; k <= 3; ++k)
            for (int R = 1; R <= 5; ++R)
                for (long n = 0; n <= long(k) * R; ++n)
                    if (lattice_count(k, n, R) != lattice_count(k, long(k) * R - n, R)) sym = false;
        h.check("functional-equation symmetry I_k(n;R) = I_k(kR-n;R)", sym);
    }

    // Haar samples are unitary and deterministic.
    {
        bool ok = true;
        for (int R : {1, 3, 6}) {
            HaarSample s = haar_sample(R, 12345);
            if (unitarity_residual(s) > 1e-10) ok = false;
            HaarSample s2 = haar_sample(R, 12345);
            if (s.u != s2.u) ok = false;
        }
        h.check("haar_sample unitarity residual <= 1e-10 and determinism", ok);
    }

    // Orthogonality relations mod t(t+1) over GF(5).
    {
        FieldCtx F(5, 1);
        Poly Q = Poly::from_ints(F, {0, 1, 1});
        ResidueSystem rs(F, Q);
        CharacterGroup G(rs);
        double worst = 0;
        for (uint64_t a = 0; a < G.size(); ++a) {
            auto ea = G.expo_from_ordinal(a);
            for (uint64_t b = 0; b < G.size(); ++b) {
                auto eb = G.expo_from_ordinal(b);
                std::complex<double> acc(0, 0);
                for (size_t pos = 0; pos < rs.phi(); ++pos)
                    acc += G.value(ea, pos) * std::conj(G.value(eb, pos));
                acc /= double(rs.phi());
                double want = a == b ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(acc - want));
            }
        }
        h.check("character orthogonality (q=5, Q=t(t+1)) within 1e-10", worst <= 1e-10);
    }

    // Two-path variance identity, trivial model.
    {
        FieldCtx F(5, 1);
        Poly Q = Poly::from_ints(F, {0, 1, 1});
        LModel model = LModel::trivial();
        CoeffTable ct(F, model, 3);
        DivisorTable dk(2, ct);
        ResidueSystem rs(F, Q);
        bool ok = true;
        for (int n = 1; n <= 3; ++n) {
            auto rep = variance_report(progression_sums(dk, rs, n), rs, model);
            double direct = rep.variance.get_d();
            double via = variance_via_characters(F, model, 2, n, Q);
            double denom = std::max(1e-12, std::fabs(direct));
            if (std::fabs(direct - via) / denom > 1e-6) ok = false;
        }
        h.check("two-path variance identity (trivial, q=5, Q=t(t+1), n<=3)", ok);
    }

    // Necklace identity: sum over d | n of d * (#irreducibles of degree d)
    // equals q^n.
    {
        bool ok = true;
        for (uint32_t p : {3u, 5u}) {
            FieldCtx F(p, 1);
            PrimeSieve sieve(F, 5);
            for (int n = 1; n <= 5; ++n) {
                uint64_t acc = 0;
                for (int d = 1; d <= n; ++d)
                    if (n % d == 0) acc += uint64_t(d) * sieve.prime_count(d);
                if (acc != pow_u64(F.q(), uint32_t(n))) ok = false;
            }
        }
        h.check("necklace identity sum d*N_d = q^n (q in {3,5}, n<=5)", ok);
    }

    // gamma routes agree to leading order.
    {
        mpq_class g = gamma_from_lattice(2, 0.5, 200);
        double rel = std::fabs(g.get_d() - 1.0 / 48.0) * 48.0;
        h.check("gamma_from_lattice(2, 0.5, 200) within 7% of 1/48", rel <= 0.07);
    }

    out << (h.failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return h.failures;
}

} // namespace ffvar
