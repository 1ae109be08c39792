#include "ffvar/lfunction.hpp"

#include <fstream>
#include <sstream>

namespace ffvar {

long legendre_point_count(const ResidueField& F, uint64_t theta) {
    if (F.ctx().p() == 2)
        throw EvenCharacteristicError("the Legendre curve needs odd characteristic");
    const uint64_t one = F.one();
    long count = 1; // point at infinity
    for (uint64_t x = 0; x < F.size(); ++x) {
        uint64_t c = F.mul(F.mul(x, F.sub(x, one)), F.sub(x, theta));
        if (c == 0)
            count += 1;
        else if (F.chi2(c) == 1)
            count += 2;
    }
    return count;
}

std::vector<mpz_class> prime_power_coeffs(const LocalFactor& lf, int mmax) {
    if (mmax < 1) throw std::invalid_argument("prime_power_coeffs: mmax must be >= 1");
    auto b = [&](int j) -> mpz_class {
        return j < int(lf.coeffs.size()) ? lf.coeffs[size_t(j)] : mpz_class(0);
    };
    // Coefficients of the reciprocal local factor: L(T) * sum_m a_{pi^m} T^m = 1,
    // so a_{pi^m} = -sum_{j=1}^{m} b_j a_{pi^{m-j}}.  These are the Dirichlet
    // coefficients the Euler-product expansion needs; for degree-one factors
    // they coincide with the inverse-root power sums.
    std::vector<mpz_class> h(size_t(mmax) + 1);
    h[0] = 1;
    for (int m = 1; m <= mmax; ++m) {
        mpz_class acc = 0;
        for (int j = 1; j <= m; ++j) acc -= b(j) * h[size_t(m - j)];
        h[size_t(m)] = acc;
    }
    return h;
}

LModel LModel::trivial() { return LModel(ModelKind::Trivial, 0, 1, "trivial"); }

LModel LModel::legendre() { return LModel(ModelKind::Legendre, 1, 2, "legendre"); }

LModel LModel::custom(CustomSpec spec) {
    LModel m(ModelKind::Custom, spec.weight, spec.dim, "custom");
    m.custom_ = std::move(spec);
    return m;
}

uint64_t prime_key(const Poly& pi) {
    return (uint64_t(pi.degree()) << 40) | pi.monic_index();
}

LModel LModel::custom_from_file(const FieldCtx& F, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open custom model file: " + path);
    CustomSpec spec;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        if (!have_header) {
            std::string kd, kw, kr;
            is >> kd >> kw >> kr;
            auto expect = [&](const std::string& tok, const std::string& key) {
                if (tok.rfind(key + "=", 0) != 0)
                    throw ConfigParseError("custom model header must read dim=<d> weight=<w> R=<R>");
                return std::stoi(tok.substr(key.size() + 1));
            };
            spec.dim = expect(kd, "dim");
            spec.weight = expect(kw, "weight");
            spec.R = expect(kr, "R");
            if (spec.dim < 1 || spec.weight < 0 || spec.R < 0)
                throw ConfigParseError("custom model header values out of range");
            have_header = true;
            continue;
        }
        std::string kpi, kco;
        is >> kpi >> kco;
        if (kpi.rfind("pi=", 0) != 0 || kco.rfind("coeffs=", 0) != 0)
            throw ConfigParseError("custom model line must read pi=<poly> coeffs=<b0,b1,...>: " + line);
        Poly pi = Poly::parse(F, kpi.substr(3));
        if (!pi.is_monic() || pi.degree() < 1 || !is_irreducible(pi))
            throw ConfigParseError("custom model prime is not a monic irreducible: " + kpi);
        std::vector<mpz_class> coeffs;
        std::istringstream cs(kco.substr(7));
        std::string tok;
        while (std::getline(cs, tok, ',')) coeffs.emplace_back(tok);
        if (coeffs.empty() || coeffs[0] != 1)
            throw ConfigParseError("custom local factor must have b_0 = 1: " + line);
        if (int(coeffs.size()) - 1 > spec.dim)
            throw ConfigParseError("custom local factor degree exceeds dim: " + line);
        spec.factors[prime_key(pi)] = std::move(coeffs);
    }
    if (!have_header) throw ConfigParseError("custom model file has no header: " + path);
    return custom(std::move(spec));
}

void LModel::check_usable(const FieldCtx& F) const {
    if (kind_ == ModelKind::Legendre && F.p() == 2)
        throw EvenCharacteristicError("the Legendre model needs odd q");
}

LocalFactor LModel::local_factor(const Poly& pi) const {
    const FieldCtx& F = pi.ctx();
    LocalFactor lf;
    lf.prime = pi;
    switch (kind_) {
        case ModelKind::Trivial:
            lf.coeffs = {1, -1};
            return lf;
        case ModelKind::Legendre: {
            check_usable(F);
            const int d = pi.degree();
            ResidueField Fp(F, pi);
            const uint64_t theta = Fp.element_of_t();
            // bad reduction at pi | t(t-1), i.e. theta in {0, 1}
            if (theta == 0 || theta == Fp.one()) {
                long n_all = legendre_point_count(Fp, theta);
                long n_smooth = n_all - 1; // drop the node
                mpz_class a = mpz_class(long(F.q())) - n_smooth;
                lf.coeffs = {1, -a};
                return lf;
            }
            long n_pts = legendre_point_count(Fp, theta);
            mpz_class qd;
            mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(F.q()),
                          static_cast<unsigned long>(d));
            mpz_class a = qd + 1 - n_pts;
            lf.coeffs = {1, -a, qd};
            return lf;
        }
        case ModelKind::Custom: {
            auto it = custom_.factors.find(prime_key(pi));
            if (it == custom_.factors.end())
                throw MissingLocalFactorError("custom model has no local factor at pi = " +
                                              pi.text());
            lf.coeffs = it->second;
            return lf;
        }
    }
    throw std::logic_error("unreachable");
}

int LModel::degree_R_formula(const Poly& Q) const {
    switch (kind_) {
        case ModelKind::Trivial:
            return Q.degree() - 1;
        case ModelKind::Legendre:
            return 2 * Q.degree() - 1;
        case ModelKind::Custom:
            return custom_.R;
    }
    throw std::logic_error("unreachable");
}

int LModel::degree_R(const Poly& Q) const {
    const FieldCtx& F = Q.ctx();
    switch (kind_) {
        case ModelKind::Trivial:
            if (Q.degree() < 2)
                throw HypothesisViolatedError("trivial model requires deg Q >= 2");
            break;
        case ModelKind::Legendre: {
            check_usable(F);
            // gcd(Q, t(t-1)) must be exactly t
            Poly tt1 = Poly::from_ints(F, {0, -1, 1}); // t^2 - t
            Poly g = gcd_monic(Q, tt1);
            if (!(g == Poly::t(F)))
                throw HypothesisViolatedError("legendre model requires gcd(Q, t(t-1)) = t, got " +
                                              g.text());
            break;
        }
        case ModelKind::Custom:
            break;
    }
    return degree_R_formula(Q);
}

void check_budget(uint64_t q, int n, bool budget_override) {
    if (budget_override) return;
    long double total = 1;
    for (int i = 0; i < n; ++i) {
        total *= (long double)q;
        if (total > (long double)kDeskBudget)
            throw BudgetExceededError("q^n = " + std::to_string(q) + "^" + std::to_string(n) +
                                      " exceeds the desk-scale budget of 1e8; pass the override "
                                      "flag to proceed anyway");
    }
}

CoeffTable::CoeffTable(const FieldCtx& F, const LModel& model, int N, TableOptions opts)
    : F_(&F), model_(model), N_(N) {
    if (N < 0) throw std::invalid_argument("CoeffTable: N must be >= 0");
    model.check_usable(F);
    check_budget(F.q(), N, opts.budget_override);
    sieve_ = std::make_shared<PrimeSieve>(F, std::max(N, 1));
    a_.resize(size_t(N) + 1);
    a_[0] = {mpz_class(1)};
    for (int d = 1; d <= N; ++d) {
        const uint64_t count = pow_u64(F.q(), uint32_t(d));
        a_[size_t(d)].resize(count);
        for_each_monic(F, d, [&](const Poly& f, uint64_t idx) {
            mpz_class acc = 1;
            for (const auto& [pi, e] : sieve_->factorize(f).parts)
                acc *= prime_powers(pi, N_ / pi.degree())[size_t(e)];
            a_[size_t(d)][idx] = std::move(acc);
        });
    }
}

const mpz_class& CoeffTable::at(const Poly& f) const {
    if (!f.is_monic()) throw IndexOutOfRangeError("coefficient lookup requires monic f");
    if (f.degree() > N_) throw IndexOutOfRangeError("degree beyond table range");
    return at(f.degree(), f.degree() == 0 ? 0 : f.monic_index());
}

const std::vector<mpz_class>& CoeffTable::prime_powers(const Poly& pi, int mmax) const {
    uint64_t key = prime_key(pi);
    auto it = ppow_.find(key);
    if (it != ppow_.end() && int(it->second.size()) > mmax) return it->second;
    LocalFactor lf = model_.local_factor(pi);
    std::vector<mpz_class> pp = prime_power_coeffs(lf, std::max(mmax, 1));
    auto [pos, ok] = ppow_.insert_or_assign(key, std::move(pp));
    (void)ok;
    return pos->second;
}

DivisorTable::DivisorTable(int k, const CoeffTable& coeffs) : k_(k), ct_(&coeffs) {
    if (k < 1) throw std::invalid_argument("DivisorTable: k must be >= 1");
    const FieldCtx& F = coeffs.ctx();
    const int N = coeffs.max_degree();
    d_.resize(size_t(N) + 1);
    d_[0] = {mpz_class(1)};
    // d_k(pi^e): T^e coefficient of the k-th power of the local series.
    std::map<uint64_t, std::vector<mpz_class>> local;
    auto local_dk = [&](const Poly& pi) -> const std::vector<mpz_class>& {
        uint64_t key = prime_key(pi);
        auto it = local.find(key);
        if (it != local.end()) return it->second;
        const int emax = N / pi.degree();
        const auto& pp = ct_->prime_powers(pi, emax);
        std::vector<mpz_class> acc(pp.begin(), pp.begin() + emax + 1);
        std::vector<mpz_class> base = acc;
        for (int rep = 1; rep < k_; ++rep) {
            std::vector<mpz_class> next(size_t(emax) + 1);
            for (int i = 0; i <= emax; ++i) {
                if (acc[size_t(i)] == 0) continue;
                for (int j = 0; i + j <= emax; ++j)
                    next[size_t(i + j)] += acc[size_t(i)] * base[size_t(j)];
            }
            acc = std::move(next);
        }
        return local.emplace(key, std::move(acc)).first->second;
    };
    for (int deg = 1; deg <= N; ++deg) {
        const uint64_t count = pow_u64(F.q(), uint32_t(deg));
        d_[size_t(deg)].resize(count);
        for_each_monic(F, deg, [&](const Poly& f, uint64_t idx) {
            mpz_class acc = 1;
            for (const auto& [pi, e] : ct_->sieve().factorize(f).parts)
                acc *= local_dk(pi)[size_t(e)];
            d_[size_t(deg)][idx] = std::move(acc);
        });
    }
}

const mpz_class& DivisorTable::at(const Poly& f) const {
    if (!f.is_monic()) throw IndexOutOfRangeError("divisor lookup requires monic f");
    if (f.degree() > max_degree()) throw IndexOutOfRangeError("degree beyond table range");
    return at(f.degree(), f.degree() == 0 ? 0 : f.monic_index());
}

} // namespace ffvar
