#include "doctest.h"

#include <cmath>

#include "ffvar/rmt.hpp"
#include "oracles.hpp"

using namespace ffvar;

TEST_CASE("lattice count pinned values") {
    CHECK(lattice_count(2, 2, 5) == 10);
    CHECK(lattice_count(2, 9, 5) == 4);
    CHECK(lattice_count(2, 1, 1) == 4);
    for (int k = 1; k <= 4; ++k)
        for (int R = 1; R <= 4; ++R) {
            CHECK(lattice_count(k, 0, R) == 1);
            CHECK(lattice_count(k, long(k) * R, R) == 1);
            CHECK(lattice_count(k, -1, R) == 0);
            CHECK(lattice_count(k, long(k) * R + 1, R) == 0);
        }
}

TEST_CASE("lattice count equals the direct enumeration oracle") {
    for (int R = 1; R <= 3; ++R)
        for (long n = 0; n <= 2 * R; ++n)
            CHECK(lattice_count(2, n, R) == oracles::lattice_count_bruteforce(2, n, R));
    for (int R = 1; R <= 2; ++R)
        for (long n = 0; n <= 3 * R; ++n)
            CHECK(lattice_count(3, n, R) == oracles::lattice_count_bruteforce(3, n, R));
    // and the flipped orientation agrees with its own brute force
    for (long n = 0; n <= 4; ++n)
        CHECK(lattice_count_with_order(2, n, 2, ColumnOrder::IncreasingDown) ==
              oracles::lattice_count_bruteforce(2, n, 2, false));
}

TEST_CASE("closed forms") {
    CHECK(*closed_form(2, 3, 7) == 20);
    CHECK(*closed_form(3, 17, 6) == 9);
    CHECK_FALSE(closed_form(2, 5, 5).has_value());  // n = R
    CHECK_FALSE(closed_form(2, 10, 5).has_value()); // n = kR
    CHECK_FALSE(closed_form(3, 12, 6).has_value()); // n = (k-1)R
}

TEST_CASE("column order is pinned: flipped direction fails the closed form") {
    CHECK(lattice_count_with_order(2, 1, 1, ColumnOrder::DecreasingDown) == 4);
    CHECK(lattice_count_with_order(2, 1, 1, ColumnOrder::IncreasingDown) == 2);
    // somewhere on the closed-form ranges the flipped orientation must disagree
    bool differs = false;
    for (int k = 2; k <= 3 && !differs; ++k)
        for (int R = 1; R <= 4 && !differs; ++R)
            for (long n = 0; n <= long(k) * R && !differs; ++n) {
                auto cf = closed_form(k, n, R);
                if (cf && lattice_count_with_order(k, n, R, ColumnOrder::IncreasingDown) != *cf)
                    differs = true;
            }
    CHECK(differs);
}

TEST_CASE("lattice count agrees with closed forms, k in {2,3}, R <= 8") {
    for (int k = 2; k <= 3; ++k)
        for (int R = 2; R <= (k == 2 ? 8 : 5); ++R)
            for (long n = 0; n <= long(k) * R; ++n) {
                auto cf = closed_form(k, n, R);
                if (cf) REQUIRE(lattice_count(k, n, R) == *cf);
                REQUIRE(lattice_count(k, n, R) == lattice_count(k, long(k) * R - n, R));
            }
}

TEST_CASE("value-type dispatch boundaries") {
    // uint64 path (k=2, R=400), the 128-bit path (k=3, R=127) and the
    // big-int path (k=12, R=1) must all agree with closed forms.
    CHECK(lattice_count(2, 200, 400) == binomial(203, 3));
    CHECK(lattice_count(3, 100, 127) == binomial(108, 8));
    CHECK(lattice_count(12, 5, 1) == binomial(12, 5) * binomial(12, 5));
    CHECK(lattice_count(3, 30, 60) == *closed_form(3, 30, 60));
}

TEST_CASE("haar samples") {
    for (int R : {1, 2, 5, 8}) {
        HaarSample s = haar_sample(R, 77);
        CHECK(unitarity_residual(s) <= 1e-10);
    }
    HaarSample a = haar_sample(4, 123), b = haar_sample(4, 123), c = haar_sample(4, 124);
    CHECK(a.u == b.u);
    CHECK(a.u != c.u);
}

TEST_CASE("mean of |Tr U|^2 at R=4 is 1 within 3 standard errors") {
    const int samples = 100000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < samples; ++i) {
        HaarSample s = haar_sample(4, 9000 + uint64_t(i));
        std::complex<double> tr(0, 0);
        for (int j = 0; j < 4; ++j) tr += s.at(j, j);
        double v = std::norm(tr);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / samples;
    double se = std::sqrt((sumsq - sum * sum / samples) / (samples - 1.0) / samples);
    CHECK(std::fabs(mean - 1.0) <= 3 * se);
}

TEST_CASE("haar_mc_integral basics") {
    auto r = haar_mc_integral(1, 1, 3, 20000, 42);
    CHECK(std::fabs(r.estimate - 1.0) <= 3 * r.std_error);

    auto zero = haar_mc_integral(2, 11, 5, 1000, 42);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.std_error == 0.0);

    auto det = haar_mc_integral(2, 10, 5, 1000, 42); // n = kR: |det|^2k = 1
    CHECK(std::fabs(det.estimate - 1.0) <= 1e-9);

    CHECK_THROWS_AS(haar_mc_integral(2, 2, 13, 2000, 1), std::invalid_argument);
    CHECK_THROWS_AS(haar_mc_integral(2, 2, 5, 10, 1), std::invalid_argument);
}

TEST_CASE("monte-carlo estimates are independent of the worker count") {
    auto one = haar_mc_integral(2, 2, 4, 30000, 7, 1);
    auto four = haar_mc_integral(2, 2, 4, 30000, 7, 4);
    CHECK(one.estimate == four.estimate);
    CHECK(one.std_error == four.std_error);

    auto g1 = gamma_mc(2, 0.5, 50000, 11, 1);
    auto g3 = gamma_mc(2, 0.5, 50000, 11, 3);
    CHECK(g1.estimate == g3.estimate);
}

TEST_CASE("gamma_mc") {
    auto r = gamma_mc(2, 0.5, 200000, 5);
    double want = 0.5 * 0.5 * 0.5 / 6.0;
    CHECK(std::fabs(r.estimate - want) <= 3 * r.std_error);

    auto z = gamma_mc(2, 0.0, 10000, 5);
    CHECK(z.estimate == 0.0);

    CHECK_THROWS_AS(gamma_mc(2, 2.5, 10000, 5), COutOfRangeError);
    CHECK_THROWS_AS(gamma_mc(2, -0.1, 10000, 5), COutOfRangeError);
    CHECK_THROWS_AS(gamma_mc(2, 0.5, 500, 5), std::invalid_argument);

    // k = 1: gamma_1(c) = 1 on (0,1)
    auto one = gamma_mc(1, 0.5, 10000, 5);
    CHECK(one.estimate == doctest::Approx(1.0));
}

TEST_CASE("gamma_from_lattice") {
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 200, 3);
    mpq_class want(binomial(103, 3), denom);
    want.canonicalize();
    CHECK(gamma_from_lattice(2, 0.5, 200) == want);
    double rel = std::fabs(gamma_from_lattice(2, 0.5, 200).get_d() * 48.0 - 1.0);
    CHECK(rel <= 0.07);

    CHECK(gamma_from_lattice(1, 0.25, 7) == 1);
    CHECK(gamma_from_lattice(1, 0.75, 13) == 1);

    // asymptotic trend on the R grid
    double prev = 1e9;
    for (int R : {50, 100, 200, 400}) {
        double dev = std::fabs(gamma_from_lattice(2, 0.5, R).get_d() * 48.0 - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("haar mc agrees with the exact lattice value (spot checks)") {
    for (auto [k, n, R] : std::vector<std::tuple<int, long, int>>{{2, 2, 5}, {2, 3, 3}, {3, 4, 2}}) {
        auto mc = haar_mc_integral(k, n, R, 30000, 2024);
        double exact = lattice_count(k, n, R).get_d();
        CHECK(std::fabs(mc.estimate - exact) <= 3 * mc.std_error + 1e-9 * std::max(1.0, exact));
    }
}
