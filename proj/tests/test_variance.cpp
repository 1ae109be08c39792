#include "doctest.h"

#include "ffvar/progression.hpp"
#include "ffvar/report_io.hpp"

using namespace ffvar;

TEST_CASE("constant-count case: trivial model, k=1, n >= deg Q") {
    FieldCtx f5(5, 1);
    LModel triv = LModel::trivial();
    CoeffTable ct(f5, triv, 3);
    DivisorTable d1(1, ct);
    ResidueSystem rs(f5, Poly::t(f5));
    ProgressionSums ps = progression_sums(d1, rs, 3);
    for (const auto& s : ps.sums) CHECK(s == 25); // q^{n - deg Q}
    VarianceReport rep = variance_report(ps, rs, triv);
    CHECK(rep.variance == 0);
    CHECK(rep.zero_variance);
    CHECK(rep.expectation == 25);
}

TEST_CASE("legendre bucket example: q=3, k=2, n=1, Q=t(t+1)") {
    FieldCtx f3(3, 1);
    LModel leg = LModel::legendre();
    CoeffTable ct(f3, leg, 1);
    DivisorTable d2(2, ct);
    Poly Q = Poly::from_ints(f3, {0, 1, 1});
    ResidueSystem rs(f3, Q);
    ProgressionSums ps = progression_sums(d2, rs, 1);
    // only f = t + 2 is a unit-class monic of degree 1; d_2(t+2) = 2 a_{t+2}
    Poly t2 = Poly::from_ints(f3, {2, 1});
    mpz_class want = 2 * ct.at(t2);
    int nonzero = 0;
    for (size_t pos = 0; pos < rs.phi(); ++pos) {
        if (ps.sums[pos] != 0) {
            ++nonzero;
            CHECK(ps.sums[pos] == want);
            CHECK(rs.unit(pos) == t2);
        }
    }
    CHECK(nonzero == 1);
}

TEST_CASE("bucket sums add up to the coprime total") {
    FieldCtx f5(5, 1);
    LModel leg = LModel::legendre();
    CoeffTable ct(f5, leg, 3);
    DivisorTable d2(2, ct);
    Poly Q = Poly::from_ints(f5, {0, 1, 1});
    ResidueSystem rs(f5, Q);
    for (int n = 1; n <= 3; ++n) {
        ProgressionSums ps = progression_sums(d2, rs, n);
        mpz_class total = 0;
        for (const auto& s : ps.sums) total += s;
        mpz_class want = 0;
        for_each_monic(f5, n, [&](const Poly& f, uint64_t idx) {
            if (gcd_monic(f, Q).is_one()) want += d2.at(n, idx);
        });
        REQUIRE(total == want);
    }
}

TEST_CASE("progression sums are independent of the worker count") {
    FieldCtx f7(7, 1);
    CoeffTable ct(f7, LModel::trivial(), 4);
    DivisorTable d3(3, ct);
    ResidueSystem rs(f7, Poly::from_ints(f7, {3, 1, 1}));
    RunOptions serial, parallel;
    parallel.workers = 5;
    ProgressionSums a = progression_sums(d3, rs, 4, serial);
    ProgressionSums b = progression_sums(d3, rs, 4, parallel);
    REQUIRE(a.sums.size() == b.sums.size());
    for (size_t i = 0; i < a.sums.size(); ++i) REQUIRE(a.sums[i] == b.sums[i]);
}

TEST_CASE("exactness: phi^2 Var and phi E are integers") {
    FieldCtx f5(5, 1);
    CoeffTable ct(f5, LModel::legendre(), 3);
    DivisorTable d2(2, ct);
    Poly Q = Poly::from_ints(f5, {0, 1, 1});
    ResidueSystem rs(f5, Q);
    for (int n = 1; n <= 3; ++n) {
        VarianceReport rep = variance_report(progression_sums(d2, rs, n), rs, LModel::legendre());
        mpq_class e_scaled = rep.expectation * mpq_class(rep.phi);
        mpq_class v_scaled = rep.variance * mpq_class(rep.phi * rep.phi);
        CHECK(e_scaled.get_den() == 1);
        CHECK(v_scaled.get_den() == 1);
        CHECK(rep.variance >= 0);
    }
}

TEST_CASE("variance report fields: legendre q=5, Q=t(t+1)") {
    FieldCtx f5(5, 1);
    LModel leg = LModel::legendre();
    CoeffTable ct(f5, leg, 2);
    DivisorTable d2(2, ct);
    Poly Q = Poly::from_ints(f5, {0, 1, 1});
    ResidueSystem rs(f5, Q);
    VarianceReport rep = variance_report(progression_sums(d2, rs, 2), rs, leg);
    CHECK(rep.R == 3);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.n_in_range);
    CHECK(rep.predicted == 10); // I_2(2;3) = binom(5,3)
    CHECK(rep.phi == 16);
    // normalized = phi * Var / q^{2n}
    mpq_class qpow(625);
    CHECK(rep.normalized == rep.variance * mpq_class(16) / qpow);
}

TEST_CASE("hypothesis flag: legendre with gcd(Q, t(t-1)) != t") {
    FieldCtx f5(5, 1);
    LModel leg = LModel::legendre();
    CoeffTable ct(f5, leg, 2);
    DivisorTable d2(2, ct);
    Poly Q = Poly::from_ints(f5, {-1, 0, 1}); // (t-1)(t+1)
    ResidueSystem rs(f5, Q);
    VarianceReport rep = variance_report(progression_sums(d2, rs, 2), rs, leg);
    CHECK_FALSE(rep.hypothesis_ok);
    CHECK(rep.R == 3); // formula value still reported
}

TEST_CASE("out-of-range n gets predicted = 0 and a flag") {
    FieldCtx f5(5, 1);
    LModel triv = LModel::trivial();
    CoeffTable ct(f5, triv, 5);
    DivisorTable d1(1, ct);
    Poly Q = Poly::from_ints(f5, {1, 1, 0, 1}); // irreducible cubic, R = 2
    ResidueSystem rs(f5, Q);
    VarianceReport rep = variance_report(progression_sums(d1, rs, 5), rs, triv);
    CHECK_FALSE(rep.n_in_range); // n = 5 > kR = 2
    CHECK(rep.predicted == 0);
    CHECK(std::isnan(rep.deviation));
}

TEST_CASE("q template resolution") {
    FieldCtx f5(5, 1);
    CHECK(resolve_q_template(f5, "[0,1,1]") == Poly::from_ints(f5, {0, 1, 1}));
    Poly irr = resolve_q_template(f5, "irred:3");
    CHECK(irr.degree() == 3);
    CHECK(is_irreducible(irr));
    CHECK(irr == Poly::from_ints(f5, {1, 1, 0, 1})); // smallest-index irreducible cubic
    CHECK_THROWS_AS(resolve_q_template(f5, "[1,0]"), ConfigParseError);
    CHECK_THROWS_AS(resolve_q_template(f5, "irred:0"), ConfigParseError);
}

TEST_CASE("prime power split") {
    CHECK(prime_power_split(9) == std::pair<uint32_t, uint32_t>{3, 2});
    CHECK(prime_power_split(13) == std::pair<uint32_t, uint32_t>{13, 1});
    CHECK(prime_power_split(32) == std::pair<uint32_t, uint32_t>{2, 5});
    CHECK_THROWS_AS(prime_power_split(12), ConfigParseError);
}

TEST_CASE("convergence sweep carries per-q errors without aborting") {
    auto rows = convergence_sweep(ModelKind::Legendre, 2, 2, "[0,1,1]", {3, 4, 5});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].report.has_value());
    CHECK_FALSE(rows[1].report.has_value()); // q = 4 is even: legendre undefined
    CHECK(rows[1].error.find("EvenCharacteristic") != std::string::npos);
    CHECK(rows[2].report.has_value());
    CHECK(rows[2].report->predicted == 10);
}

TEST_CASE("budget refusal propagates") {
    FieldCtx f17(17, 1);
    CoeffTable ct(f17, LModel::trivial(), 4);
    DivisorTable d1(1, ct);
    ResidueSystem rs(f17, Poly::t(f17));
    (void)d1;
    (void)rs;
    CHECK_THROWS_AS(CoeffTable(f17, LModel::trivial(), 8), BudgetExceededError);
}

TEST_CASE("csv row format is frozen") {
    FieldCtx f5(5, 1);
    LModel triv = LModel::trivial();
    CoeffTable ct(f5, triv, 3);
    DivisorTable d1(1, ct);
    ResidueSystem rs(f5, Poly::t(f5));
    VarianceReport rep = variance_report(progression_sums(d1, rs, 3), rs, triv);
    CHECK(std::string(kVarianceCsvHeader) ==
          "q,p,r,model,k,n,Q,phi,R,expectation,variance,normalized,predicted,deviation");
    // deg Q = 1 (trivial model needs deg Q >= 2): hypothesis flagged, R = 0,
    // predicted 0, deviation nan; exact cells as num/den
    CHECK(variance_csv_row(rep) == "5,5,1,trivial,1,3,\"[0,1]\",4,0,25/1,0/1,0/1,0,nan");
    CHECK(format_rational(mpq_class(3, 6)) == "1/2");
}
