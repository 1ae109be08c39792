#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "ffvar/lfunction.hpp"
#include "oracles.hpp"

using namespace ffvar;

TEST_CASE("legendre point counts match the xy-scan oracle") {
    FieldCtx f3(3, 1);
    {
        ResidueField F(f3, Poly::from_ints(f3, {1, 1})); // pi = t + 1, theta = 2
        CHECK(F.element_of_t() == 2);
        CHECK(legendre_point_count(F, 2) == 4);
        CHECK(oracles::legendre_points_bruteforce(F, 2) == 4);
    }
    {
        ResidueField F(f3, Poly::t(f3)); // theta = 0, singular
        CHECK(legendre_point_count(F, 0) == 5);
        CHECK(oracles::legendre_points_bruteforce(F, 0) == 5);
    }
    FieldCtx f5(5, 1);
    {
        ResidueField F(f5, Poly::from_ints(f5, {-2, 1})); // theta = 2
        long want = oracles::legendre_points_bruteforce(F, 2);
        CHECK(legendre_point_count(F, 2) == want);
    }
    // a degree-2 prime over GF(3): count over GF(9)
    {
        Poly pi = Poly::from_ints(f3, {1, 0, 1});
        ResidueField F(f3, pi);
        uint64_t theta = F.element_of_t();
        CHECK(legendre_point_count(F, theta) == oracles::legendre_points_bruteforce(F, theta));
    }
    FieldCtx f2(2, 1);
    ResidueField F2(f2, Poly::t(f2));
    CHECK_THROWS_AS(legendre_point_count(F2, 0), EvenCharacteristicError);
}

TEST_CASE("local factors") {
    FieldCtx f3(3, 1);
    LModel leg = LModel::legendre();
    {
        LocalFactor lf = leg.local_factor(Poly::from_ints(f3, {1, 1})); // good
        REQUIRE(lf.coeffs.size() == 3);
        CHECK(lf.coeffs[0] == 1);
        CHECK(lf.coeffs[1] == 0); // a = 3 + 1 - 4 = 0
        CHECK(lf.coeffs[2] == 3);
    }
    {
        LocalFactor lf = leg.local_factor(Poly::t(f3)); // bad: nonsplit node
        REQUIRE(lf.coeffs.size() == 2);
        CHECK(lf.coeffs[1] == 1); // a = -1
    }
    {
        // pi = t - 1 = t + 2: split node, a = +1 for every odd q
        LocalFactor lf = leg.local_factor(Poly::from_ints(f3, {2, 1}));
        REQUIRE(lf.coeffs.size() == 2);
        CHECK(lf.coeffs[1] == -1);
    }
    LModel triv = LModel::trivial();
    LocalFactor lt = triv.local_factor(Poly::t(f3));
    CHECK(lt.coeffs == std::vector<mpz_class>{1, -1});

    FieldCtx f4(2, 2);
    CHECK_THROWS_AS(leg.local_factor(Poly::t(f4)), EvenCharacteristicError);
}

TEST_CASE("prime power coefficients are the reciprocal-factor coefficients") {
    auto mk = [](std::vector<mpz_class> c) {
        LocalFactor lf;
        lf.coeffs = std::move(c);
        return lf;
    };
    auto ones = prime_power_coeffs(mk({1, -1}), 5);
    for (int m = 1; m <= 5; ++m) CHECK(ones[size_t(m)] == 1);

    // 1/(1 + 3T^2) = 1 - 3T^2 + 9T^4 - ...
    auto leg = prime_power_coeffs(mk({1, 0, 3}), 4);
    CHECK(leg[0] == 1);
    CHECK(leg[1] == 0);
    CHECK(leg[2] == -3);
    CHECK(leg[3] == 0);
    CHECK(leg[4] == 9);

    auto alt = prime_power_coeffs(mk({1, 1}), 5);
    for (int m = 1; m <= 5; ++m) CHECK(alt[size_t(m)] == (m % 2 ? -1 : 1));

    // convolving back against the factor recovers the identity series
    for (auto coeffs : {std::vector<mpz_class>{1, -2, 7}, {1, 3}, {1, 0, -5, 2}}) {
        auto h = prime_power_coeffs(mk(coeffs), 6);
        for (int m = 1; m <= 6; ++m) {
            mpz_class conv = 0;
            for (int j = 0; j <= m && j < int(coeffs.size()); ++j)
                conv += coeffs[size_t(j)] * h[size_t(m - j)];
            REQUIRE(conv == 0);
        }
    }
}

TEST_CASE("legendre coefficient sums vanish: the complete L-function has degree zero") {
    // conductor degree 4 over P^1 makes L(T, E/F_q(t)) = 1 for the Legendre
    // curve, so sum over all monic f of a_f T^{deg f} must telescope to 1.
    for (auto [p, r, nmax] :
         std::vector<std::tuple<uint32_t, uint32_t, int>>{{3, 1, 6}, {5, 1, 5}, {7, 1, 4}}) {
        FieldCtx F(p, r);
        CoeffTable ct(F, LModel::legendre(), nmax);
        for (int n = 1; n <= nmax; ++n) {
            mpz_class s = 0;
            for_each_monic(F, n, [&](const Poly&, uint64_t idx) { s += ct.at(n, idx); });
            REQUIRE(s == 0);
        }
    }
}

TEST_CASE("coefficient tables") {
    FieldCtx f3(3, 1);
    CoeffTable triv(f3, LModel::trivial(), 4);
    for (int d = 0; d <= 4; ++d)
        for_each_monic(f3, d, [&](const Poly&, uint64_t idx) { REQUIRE(triv.at(d, idx) == 1); });

    CoeffTable leg(f3, LModel::legendre(), 4);
    Poly t1 = Poly::from_ints(f3, {1, 1});
    CHECK(leg.at(t1) == 0);
    CHECK(leg.at(t1 * t1) == -3); // 1/(1 + 3T^2) at T^2
    CHECK(leg.at(Poly::t(f3) * t1) == 0); // multiplicativity with a_t = 1... a_{t} * 0
    CHECK(leg.at(Poly::one(f3)) == 1);

    // multiplicativity on random coprime pairs over GF(5)
    FieldCtx f5(5, 1);
    CoeffTable leg5(f5, LModel::legendre(), 4);
    int checked = 0;
    for (uint64_t i = 0; i < 25 && checked < 40; ++i)
        for (uint64_t j = 0; j < 5 && checked < 40; ++j) {
            Poly a = Poly::monic_from_index(f5, 2, i);
            Poly b = Poly::monic_from_index(f5, 1, j);
            if (!gcd_monic(a, b).is_one()) continue;
            REQUIRE(leg5.at(a * b) == leg5.at(a) * leg5.at(b));
            ++checked;
        }
    CHECK(checked == 40);
}

TEST_CASE("hasse bound and local functional shape, exhaustive deg <= 4") {
    for (auto [p, r] : std::vector<std::pair<uint32_t, uint32_t>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        FieldCtx F(p, r);
        LModel leg = LModel::legendre();
        const int maxd = 4;
        PrimeSieve sieve(F, maxd);
        Poly bad = Poly::t(F) * (Poly::t(F) - Poly::one(F));
        for (int d = 1; d <= maxd; ++d) {
            for (uint64_t idx : sieve.prime_indices(d)) {
                Poly pi = Poly::monic_from_index(F, d, idx);
                if (!gcd_monic(pi, bad).is_one()) continue;
                LocalFactor lf = leg.local_factor(pi);
                REQUIRE(lf.coeffs.size() == 3);
                mpz_class qd;
                mpz_ui_pow_ui(qd.get_mpz_t(), F.q(), uint32_t(d));
                REQUIRE(lf.coeffs[2] == qd); // inverse roots multiply to q^d
                mpz_class bound = 4 * qd;    // (2 q^{d/2})^2
                REQUIRE(lf.coeffs[1] * lf.coeffs[1] <= bound);
            }
        }
    }
}

TEST_CASE("point counts satisfy the quadratic-extension trace relation") {
    // For a good fiber, #E(F_{q^2}) = q^2 + 1 - (a^2 - 2q) with
    // a = q + 1 - #E(F_q): an independent consistency check across fields.
    for (uint32_t p : {3u, 5u, 7u}) {
        FieldCtx F(p, 1);
        FieldCtx F2(p, 2);
        for (uint32_t c = 2; c < p; ++c) { // theta = c, good when c != 0, 1
            ResidueField fiber(F, Poly::from_ints(F, {int64_t(p - c), 1}));
            long n1 = legendre_point_count(fiber, c);
            long a = long(p) + 1 - n1;
            // constants embed index-preservingly into GF(p^2)
            ResidueField fiber2(F2, Poly::from_ints(F2, {int64_t(p - c), 1}));
            long n2 = legendre_point_count(fiber2, c);
            REQUIRE(n2 == long(p) * p + 1 - (a * a - 2 * long(p)));
        }
    }
}

TEST_CASE("divisor tables and the ordered-factorization oracle") {
    FieldCtx f3(3, 1);
    CoeffTable triv(f3, LModel::trivial(), 4);
    DivisorTable d2(2, triv);
    Poly t = Poly::t(f3);
    CHECK(d2.at(t) == 2);
    CHECK(d2.at(t * t) == 3);
    CHECK(d2.at(Poly::one(f3)) == 1);

    CoeffTable leg(f3, LModel::legendre(), 4);
    DivisorTable dleg(2, leg);
    Poly t1 = Poly::from_ints(f3, {1, 1});
    CHECK(dleg.at(t1 * t1) == -6); // 2 a_{pi^2} + a_pi^2

    // d_k multiplicative evaluation == brute-force ordered-factorization sum
    for (int k = 1; k <= 3; ++k) {
        DivisorTable dk(k, leg);
        for (int deg = 0; deg <= 3; ++deg)
            for_each_monic(f3, deg, [&](const Poly& f, uint64_t idx) {
                REQUIRE(dk.at(deg, idx) == oracles::divisor_value_bruteforce(leg, k, f));
            });
    }
}

TEST_CASE("global convolution identity, n <= 6") {
    // sum over M_n (optionally coprime to Q) of d_k(f) equals the T^n
    // coefficient of (sum_n c_{1,n} T^n)^k with c_{1,n} the matching
    // first-order sums.
    FieldCtx f3(3, 1);
    Poly Q = Poly::from_ints(f3, {0, 1, 1});
    for (bool coprime : {false, true}) {
        for (const LModel& model : {LModel::trivial(), LModel::legendre()}) {
            const int N = 6;
            CoeffTable ct(f3, model, N);
            auto keep = [&](const Poly& f) { return !coprime || gcd_monic(f, Q).is_one(); };
            std::vector<mpz_class> c1(N + 1);
            for (int n = 0; n <= N; ++n)
                for_each_monic(f3, n, [&](const Poly& f, uint64_t idx) {
                    if (keep(f)) c1[size_t(n)] += ct.at(n, idx);
                });
            for (int k = 1; k <= 3; ++k) {
                DivisorTable dk(k, ct);
                // k-fold convolution of c1
                std::vector<mpz_class> acc(c1), base(c1);
                for (int rep = 1; rep < k; ++rep) {
                    std::vector<mpz_class> next(size_t(N) + 1);
                    for (int i = 0; i <= N; ++i)
                        for (int j = 0; i + j <= N; ++j)
                            next[size_t(i + j)] += acc[size_t(i)] * base[size_t(j)];
                    acc = std::move(next);
                }
                for (int n = 0; n <= N; ++n) {
                    mpz_class direct = 0;
                    for_each_monic(f3, n, [&](const Poly& f, uint64_t idx) {
                        if (keep(f)) direct += dk.at(n, idx);
                    });
                    REQUIRE(direct == acc[size_t(n)]);
                }
            }
        }
    }
}

TEST_CASE("degree_R rules") {
    FieldCtx f5(5, 1);
    LModel triv = LModel::trivial();
    Poly cubic = Poly::from_ints(f5, {1, 1, 0, 1});
    CHECK(triv.degree_R(cubic) == 2);
    CHECK_THROWS_AS(triv.degree_R(Poly::t(f5)), HypothesisViolatedError);

    LModel leg = LModel::legendre();
    Poly Q = Poly::from_ints(f5, {0, 1, 1}); // t(t+1)
    CHECK(leg.degree_R(Q) == 3);
    Poly bad = Poly::from_ints(f5, {-1, 0, 1}); // (t-1)(t+1)
    CHECK_THROWS_AS(leg.degree_R(bad), HypothesisViolatedError);
}

TEST_CASE("custom model files") {
    FieldCtx f3(3, 1);
    const char* path = "custom_model_test.txt";
    {
        std::ofstream out(path);
        out << "dim=1 weight=0 R=2\n";
        // the zeta model spelled out for primes of degree <= 2
        PrimeSieve sieve(f3, 2);
        for (int d = 1; d <= 2; ++d)
            for (uint64_t idx : sieve.prime_indices(d)) {
                Poly pi = Poly::monic_from_index(f3, d, idx);
                out << "pi=" << pi.text() << " coeffs=1,-1\n";
            }
    }
    LModel custom = LModel::custom_from_file(f3, path);
    CHECK(custom.kind() == ModelKind::Custom);
    CHECK(custom.weight() == 0);
    CHECK(custom.degree_R(Poly::from_ints(f3, {0, 1, 1})) == 2);

    CoeffTable ct(f3, custom, 2);
    CoeffTable want(f3, LModel::trivial(), 2);
    for (int d = 0; d <= 2; ++d)
        for_each_monic(f3, d, [&](const Poly&, uint64_t idx) {
            REQUIRE(ct.at(d, idx) == want.at(d, idx));
        });

    // unlisted primes are an error, making coverage gaps explicit
    CHECK_THROWS_AS(CoeffTable(f3, custom, 3), MissingLocalFactorError);
    std::remove(path);

    {
        std::ofstream out("custom_bad_test.txt");
        out << "dim=1 weight=0 R=1\n";
        out << "pi=[0,1] coeffs=2,-1\n"; // b0 != 1
    }
    CHECK_THROWS_AS(LModel::custom_from_file(f3, "custom_bad_test.txt"), ConfigParseError);
    std::remove("custom_bad_test.txt");
}

TEST_CASE("budget guard") {
    FieldCtx f17(17, 1);
    CHECK_THROWS_AS(check_budget(17, 8, false), BudgetExceededError);
    CHECK_NOTHROW(check_budget(17, 4, false));
    CHECK_NOTHROW(check_budget(17, 8, true));
}
