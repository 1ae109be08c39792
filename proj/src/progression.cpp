#include "ffvar/progression.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "ffvar/rmt.hpp"

namespace ffvar {

ProgressionSums progression_sums(const DivisorTable& dk, const ResidueSystem& rs, int n,
                                 RunOptions opts) {
    const FieldCtx& F = dk.ctx();
    if (n < 1) throw std::invalid_argument("progression_sums: n must be >= 1");
    if (n > dk.max_degree())
        throw std::invalid_argument("progression_sums: divisor table too shallow for n");
    check_budget(F.q(), n, opts.budget_override);

    const Poly& Q = rs.Q();
    const uint64_t total = pow_u64(F.q(), uint32_t(n));
    const int workers = std::max(1, opts.workers);
    const uint64_t nparts = std::min<uint64_t>(uint64_t(workers), total);

    std::vector<std::vector<mpz_class>> parts(nparts);
    auto run_range = [&](uint64_t part) {
        auto& buckets = parts[part];
        buckets.assign(rs.phi(), mpz_class(0));
        uint64_t lo = total / nparts * part + std::min(total % nparts, part);
        uint64_t len = total / nparts + (part < total % nparts ? 1 : 0);
        for_each_monic(F, n, lo, lo + len, [&](const Poly& f, uint64_t idx) {
            Poly rem = divrem(f, Q).second;
            int64_t pos = rs.unit_pos(rem.residue_index(Q.degree()));
            if (pos >= 0) buckets[size_t(pos)] += dk.at(n, idx);
        });
    };
    if (nparts == 1) {
        run_range(0);
    } else {
        std::vector<std::thread> pool;
        for (uint64_t w = 1; w < nparts; ++w) pool.emplace_back(run_range, w);
        run_range(0);
        for (auto& t : pool) t.join();
    }
    ProgressionSums out;
    out.model = dk.coeffs().model().name();
    out.k = dk.k();
    out.n = n;
    out.Q = Q;
    out.sums = std::move(parts[0]);
    for (uint64_t w = 1; w < nparts; ++w)
        for (size_t i = 0; i < out.sums.size(); ++i) out.sums[i] += parts[w][i];
    return out;
}

VarianceReport variance_report(const ProgressionSums& ps, const ResidueSystem& rs,
                               const LModel& model) {
    const FieldCtx& F = rs.ctx();
    const mpz_class phi = mpz_class(static_cast<unsigned long>(rs.phi()));

    mpz_class sum1 = 0, sum2 = 0;
    for (const auto& s : ps.sums) {
        sum1 += s;
        sum2 += s * s;
    }
    mpq_class expectation(sum1, phi);
    expectation.canonicalize();
    mpq_class variance = mpq_class(sum2, phi) - mpq_class(sum1 * sum1, phi * phi);
    variance.canonicalize();

    // Cross-check against the definition: (1/phi) * sum (S_A - E)^2.
    mpz_class defsum = 0;
    for (const auto& s : ps.sums) {
        mpz_class d = s * phi - sum1;
        defsum += d * d;
    }
    mpq_class variance_def(defsum, phi * phi * phi);
    variance_def.canonicalize();
    if (variance != variance_def)
        throw std::logic_error("variance forms disagree; exact arithmetic is broken");

    VarianceReport rep;
    rep.q = F.q();
    rep.p = F.p();
    rep.r = F.r();
    rep.model = ps.model;
    rep.k = ps.k;
    rep.n = ps.n;
    rep.Q = ps.Q;
    rep.phi = phi;
    rep.expectation = expectation;
    rep.variance = variance;
    rep.zero_variance = (variance == 0);

    try {
        rep.R = model.degree_R(ps.Q);
        rep.hypothesis_ok = true;
    } catch (const HypothesisViolatedError&) {
        rep.R = model.degree_R_formula(ps.Q);
        rep.hypothesis_ok = false;
    }

    mpz_class qpow;
    mpz_ui_pow_ui(qpow.get_mpz_t(), static_cast<unsigned long>(F.q()),
                  static_cast<unsigned long>(uint64_t(ps.n) * (1 + model.weight())));
    rep.normalized = variance * mpq_class(phi, qpow);
    rep.normalized.canonicalize();

    rep.n_in_range = rep.R >= 1 && ps.n >= 1 && ps.n <= ps.k * rep.R;
    rep.predicted = rep.n_in_range ? lattice_count(ps.k, ps.n, rep.R) : mpz_class(0);
    if (rep.predicted > 0) {
        mpq_class dev = rep.normalized / mpq_class(rep.predicted) - 1;
        rep.deviation = std::fabs(dev.get_d());
    } else {
        rep.deviation = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

Poly resolve_q_template(const FieldCtx& F, const std::string& tmpl) {
    if (tmpl.rfind("irred:", 0) == 0) {
        int d = 0;
        try {
            d = std::stoi(tmpl.substr(6));
        } catch (const std::exception&) {
            throw ConfigParseError("bad irreducible-degree template: " + tmpl);
        }
        if (d < 1 || d > 12) throw ConfigParseError("irred:<d> needs 1 <= d <= 12");
        uint64_t count = pow_u64(F.q(), uint32_t(d));
        for (uint64_t idx = 0; idx < count; ++idx) {
            Poly cand = Poly::monic_from_index(F, d, idx);
            if (is_irreducible(cand)) return cand;
        }
        throw ConfigParseError("no irreducible of degree " + std::to_string(d));
    }
    Poly Q = Poly::parse(F, tmpl);
    if (!Q.is_monic() || Q.degree() < 1)
        throw ConfigParseError("Q must be monic of degree >= 1: " + tmpl);
    return Q;
}

std::pair<uint32_t, uint32_t> prime_power_split(uint64_t q) {
    if (q < 2) throw ConfigParseError("q must be >= 2");
    uint64_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q; // q itself is prime
    uint32_t r = 0;
    uint64_t v = q;
    while (v % p == 0) {
        v /= p;
        ++r;
    }
    if (v != 1)
        throw ConfigParseError("q = " + std::to_string(q) + " is not a prime power");
    return {uint32_t(p), r};
}

std::vector<SweepEntry> convergence_sweep(ModelKind kind, int k, int n, const std::string& qtmpl,
                                          const std::vector<uint64_t>& qs, RunOptions opts) {
    std::vector<SweepEntry> out;
    for (uint64_t q : qs) {
        SweepEntry entry;
        entry.q = q;
        try {
            auto [p, r] = prime_power_split(q);
            FieldCtx F(p, r);
            Poly Q = resolve_q_template(F, qtmpl);
            LModel model = kind == ModelKind::Trivial ? LModel::trivial() : LModel::legendre();
            if (kind == ModelKind::Custom)
                throw ConfigParseError("sweeps support the trivial and legendre models only");
            CoeffTable ct(F, model, n, TableOptions{opts.budget_override});
            DivisorTable dk(k, ct);
            ResidueSystem rs(F, Q);
            ProgressionSums ps = progression_sums(dk, rs, n, opts);
            entry.report = variance_report(ps, rs, model);
        } catch (const Error& e) {
            entry.error = e.code() + ": " + e.what();
        } catch (const std::exception& e) {
            entry.error = std::string("error: ") + e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace ffvar
