#include "ffvar/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ffvar {

Poly::Poly(const FieldCtx& F, std::vector<uint32_t> coeffs) : ctx_(&F), c_(std::move(coeffs)) {
    for (uint32_t v : c_) F.check_index(v);
    trim();
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::require_same(const Poly& a, const Poly& b) {
    if (!a.ctx_ || !b.ctx_ || !a.ctx_->same_field(*b.ctx_))
        throw CtxMismatchError("polynomials belong to different fields");
}

Poly Poly::from_ints(const FieldCtx& F, const std::vector<int64_t>& c) {
    std::vector<uint32_t> v(c.size());
    for (size_t i = 0; i < c.size(); ++i) v[i] = F.from_int(c[i]);
    return Poly(F, std::move(v));
}

uint32_t Poly::eval(uint32_t x) const {
    uint32_t acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = ctx_->add(ctx_->mul(acc, x), c_[i]);
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly::zero(*ctx_);
    std::vector<uint32_t> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = ctx_->mul(c_[i], ctx_->from_int(int64_t(i)));
    return Poly(*ctx_, std::move(d));
}

Poly Poly::make_monic() const {
    if (is_zero() || is_monic()) return *this;
    uint32_t s = ctx_->inv(c_.back());
    std::vector<uint32_t> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = ctx_->mul(c_[i], s);
    return Poly(*ctx_, std::move(v));
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly::require_same(a, b);
    const FieldCtx& F = a.ctx();
    std::vector<uint32_t> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F.add(a[i], b[i]);
    return Poly(F, std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly::require_same(a, b);
    const FieldCtx& F = a.ctx();
    std::vector<uint32_t> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F.sub(a[i], b[i]);
    return Poly(F, std::move(v));
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly::require_same(a, b);
    const FieldCtx& F = a.ctx();
    if (a.is_zero() || b.is_zero()) return Poly::zero(F);
    std::vector<uint32_t> v(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            v[i + j] = F.add(v[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return Poly(F, std::move(v));
}

bool operator==(const Poly& a, const Poly& b) {
    Poly::require_same(a, b);
    return a.c_ == b.c_;
}

bool Poly::operator<(const Poly& other) const {
    require_same(*this, other);
    if (degree() != other.degree()) return degree() < other.degree();
    for (size_t i = c_.size(); i-- > 0;)
        if (c_[i] != other.c_[i]) return c_[i] < other.c_[i];
    return false;
}

Poly Poly::monic_from_index(const FieldCtx& F, int deg, uint64_t index) {
    if (deg < 0) throw IndexOutOfRangeError("monic degree must be >= 0");
    uint64_t count = pow_u64(F.q(), uint32_t(deg));
    if (index >= count) throw IndexOutOfRangeError("monic index out of range");
    std::vector<uint32_t> v(size_t(deg) + 1, 0);
    for (int i = 0; i < deg; ++i) {
        v[size_t(i)] = uint32_t(index % F.q());
        index /= F.q();
    }
    v[size_t(deg)] = 1;
    return Poly(F, std::move(v));
}

uint64_t Poly::monic_index() const {
    if (!is_monic()) throw IndexOutOfRangeError("canonical index requires a monic polynomial");
    uint64_t idx = 0;
    for (size_t i = c_.size() - 1; i-- > 0;) idx = idx * ctx_->q() + c_[i];
    return idx;
}

Poly Poly::residue_from_index(const FieldCtx& F, int m, uint64_t index) {
    std::vector<uint32_t> v(size_t(m), 0);
    for (int i = 0; i < m; ++i) {
        v[size_t(i)] = uint32_t(index % F.q());
        index /= F.q();
    }
    return Poly(F, std::move(v));
}

uint64_t Poly::residue_index(int m) const {
    if (degree() >= m) throw IndexOutOfRangeError("residue degree not below modulus degree");
    uint64_t idx = 0;
    for (int i = m; i-- > 0;) idx = idx * ctx_->q() + (*this)[size_t(i)];
    return idx;
}

std::string Poly::text() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ",";
        os << c_[i];
    }
    os << "]";
    return os.str();
}

Poly Poly::parse(const FieldCtx& F, const std::string& s) {
    size_t a = s.find('['), b = s.rfind(']');
    if (a == std::string::npos || b == std::string::npos || b < a)
        throw ConfigParseError("polynomial text must look like [c0,c1,...]: " + s);
    std::string inner = s.substr(a + 1, b - a - 1);
    std::vector<uint32_t> v;
    std::istringstream is(inner);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        size_t pos = 0;
        long long val = 0;
        try {
            val = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            throw ConfigParseError("bad coefficient '" + tok + "' in " + s);
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw ConfigParseError("bad coefficient '" + tok + "' in " + s);
        if (val < 0 || uint64_t(val) >= F.q())
            throw ConfigParseError("coefficient " + tok + " not an element index in [0, q)");
        v.push_back(uint32_t(val));
    }
    return Poly(F, std::move(v));
}

std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw DivisionByZeroError("polynomial division by zero");
    const FieldCtx& F = f.ctx();
    if (f.degree() < g.degree()) return {Poly::zero(F), f};
    std::vector<uint32_t> rem(f.coeffs());
    std::vector<uint32_t> quot(size_t(f.degree() - g.degree()) + 1, 0);
    uint32_t lead_inv = F.inv(g.coeffs().back());
    int dg = g.degree();
    for (int i = f.degree(); i >= dg; --i) {
        uint32_t c = rem[size_t(i)];
        if (c == 0) continue;
        uint32_t fct = F.mul(c, lead_inv);
        quot[size_t(i - dg)] = fct;
        for (int j = 0; j <= dg; ++j)
            rem[size_t(i - dg + j)] = F.sub(rem[size_t(i - dg + j)], F.mul(fct, g[size_t(j)]));
    }
    return {Poly(F, std::move(quot)), Poly(F, std::move(rem))};
}

Poly gcd_monic(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divrem(x, y).second;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.make_monic();
}

bool is_squarefree(const Poly& Q) { return gcd_monic(Q, Q.derivative()).degree() == 0; }

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) throw IndexOutOfRangeError("irreducibility requires degree >= 1");
    const FieldCtx& F = f.ctx();
    for (int d = 1; d <= f.degree() / 2; ++d) {
        uint64_t count = pow_u64(F.q(), uint32_t(d));
        for (uint64_t idx = 0; idx < count; ++idx) {
            Poly g = Poly::monic_from_index(F, d, idx);
            if (divrem(f, g).second.is_zero()) return false;
        }
    }
    return true;
}

Poly Factorization::unfactor(const FieldCtx& F) const {
    Poly acc = Poly::one(F);
    for (const auto& [prime, e] : parts)
        for (int i = 0; i < e; ++i) acc = acc * prime;
    return acc;
}

Factorization factorize_trial(const Poly& f) {
    if (!f.is_monic()) throw IndexOutOfRangeError("factorization requires a monic polynomial");
    Factorization out;
    const FieldCtx& F = f.ctx();
    Poly rest = f;
    // Divisors found in ascending (degree, index) order are prime because all
    // smaller factors have already been divided out.
    for (int d = 1; rest.degree() >= 1 && 2 * d <= rest.degree(); ++d) {
        uint64_t count = pow_u64(F.q(), uint32_t(d));
        for (uint64_t idx = 0; idx < count && 2 * d <= rest.degree(); ++idx) {
            Poly g = Poly::monic_from_index(F, d, idx);
            int e = 0;
            while (true) {
                auto [quot, rem] = divrem(rest, g);
                if (!rem.is_zero()) break;
                rest = quot;
                ++e;
            }
            if (e > 0) out.parts.emplace_back(g, e);
        }
    }
    if (rest.degree() >= 1) out.parts.emplace_back(rest, 1);
    std::sort(out.parts.begin(), out.parts.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.monic_index() < b.first.monic_index();
    });
    return out;
}

uint64_t pow_u64(uint64_t base, uint32_t e) {
    uint64_t out = 1;
    while (e--) out *= base;
    return out;
}

void for_each_monic(const FieldCtx& F, int deg, uint64_t lo, uint64_t hi,
                    const std::function<void(const Poly&, uint64_t)>& fn) {
    if (deg < 0 || lo >= hi) return;
    const uint64_t q = F.q();
    Poly cur = Poly::monic_from_index(F, deg, lo);
    // Odometer over the non-leading coefficient digits; the leading 1 stays
    // put, so the monic invariant is preserved throughout.
    auto& digits = cur.c_;
    for (uint64_t idx = lo;;) {
        fn(cur, idx);
        if (++idx >= hi) break;
        for (int i = 0; i < deg; ++i) {
            if (++digits[size_t(i)] < q) break;
            digits[size_t(i)] = 0;
        }
    }
}

void for_each_monic(const FieldCtx& F, int deg,
                    const std::function<void(const Poly&, uint64_t)>& fn) {
    for_each_monic(F, deg, 0, pow_u64(F.q(), uint32_t(deg)), fn);
}

// ---------------------------------------------------------------------------
// PrimeSieve
// ---------------------------------------------------------------------------

PrimeSieve::PrimeSieve(const FieldCtx& F, int max_degree) : F_(&F), maxdeg_(max_degree) {
    if (max_degree < 1) throw IndexOutOfRangeError("sieve degree must be >= 1");
    const uint64_t q = F.q();
    {
        // Guard against absurd table sizes before allocating.
        uint64_t total = 0, pw = 1;
        for (int d = 1; d <= max_degree; ++d) {
            pw *= q;
            total += pw;
            if (total > (uint64_t(1) << 32))
                throw BudgetExceededError("prime sieve would need " + std::to_string(total) +
                                          " entries; reduce q or the degree");
        }
    }
    spf_.resize(size_t(max_degree) + 1);
    primes_.resize(size_t(max_degree) + 1);
    for (int d = 1; d <= max_degree; ++d) spf_[size_t(d)].assign(pow_u64(q, uint32_t(d)), 0);

    for (int d = 1; d <= max_degree; ++d) {
        const uint64_t count = pow_u64(q, uint32_t(d));
        for (uint64_t idx = 0; idx < count; ++idx) {
            if (spf_[size_t(d)][idx] != 0) continue; // composite
            primes_[size_t(d)].push_back(idx);
            const uint64_t packed = (uint64_t(d) << 40 | idx) + 1;
            Poly prime = Poly::monic_from_index(F, d, idx);
            for (int e = 1; d + e <= max_degree; ++e) {
                for_each_monic(F, e, [&](const Poly& g, uint64_t) {
                    Poly prod = prime * g;
                    uint64_t pidx = prod.monic_index();
                    auto& slot = spf_[size_t(d + e)][pidx];
                    if (slot == 0) slot = packed;
                });
            }
        }
    }
}

bool PrimeSieve::is_irreducible(const Poly& f) const {
    if (f.degree() < 1 || f.degree() > maxdeg_)
        throw IndexOutOfRangeError("polynomial degree outside sieve range");
    if (!f.is_monic()) throw IndexOutOfRangeError("sieve lookup requires a monic polynomial");
    return spf_[size_t(f.degree())][f.monic_index()] == 0;
}

Factorization PrimeSieve::factorize(const Poly& f) const {
    if (!f.is_monic()) throw IndexOutOfRangeError("factorization requires a monic polynomial");
    if (f.degree() > maxdeg_) throw IndexOutOfRangeError("polynomial degree outside sieve range");
    Factorization out;
    Poly rest = f;
    while (rest.degree() >= 1) {
        uint64_t packed = spf_[size_t(rest.degree())][rest.monic_index()];
        Poly prime = packed == 0 ? rest
                                 : Poly::monic_from_index(*F_, int((packed - 1) >> 40),
                                                          (packed - 1) & ((uint64_t(1) << 40) - 1));
        int e = 0;
        while (true) {
            auto [quot, rem] = divrem(rest, prime);
            if (!rem.is_zero()) break;
            rest = quot;
            ++e;
        }
        out.parts.emplace_back(prime, e);
    }
    return out; // smallest-prime peeling yields (degree, index) order already
}

// ---------------------------------------------------------------------------
// ResidueSystem
// ---------------------------------------------------------------------------

ResidueSystem::ResidueSystem(const FieldCtx& F, const Poly& Q) : F_(&F), Q_(Q) {
    if (Q.degree() < 1 || !Q.is_monic())
        throw NotSquarefreeError("modulus must be monic of degree >= 1");
    if (!is_squarefree(Q))
        throw NotSquarefreeError("modulus " + Q.text() + " is not squarefree");
    size_ = pow_u64(F.q(), uint32_t(Q.degree()));
    if (size_ > (uint64_t(1) << 26))
        throw BudgetExceededError("residue system with q^deg(Q) = " + std::to_string(size_) +
                                  " residues is beyond desk scale");
    pos_.assign(size_, -1);
    for (uint64_t idx = 0; idx < size_; ++idx) {
        Poly a = Poly::residue_from_index(F, Q.degree(), idx);
        if (gcd_monic(a, Q).is_one()) {
            pos_[idx] = int64_t(units_.size());
            units_.push_back(idx);
        }
    }
    // Completeness: phi must match the product over the prime degrees of Q.
    uint64_t expect = 1;
    for (const auto& [prime, e] : factorize_trial(Q).parts) {
        (void)e;
        expect *= pow_u64(F.q(), uint32_t(prime.degree())) - 1;
    }
    if (expect != units_.size())
        throw NotSquarefreeError("unit count mismatch for modulus " + Q.text());
}

Poly ResidueSystem::unit(size_t pos) const {
    return Poly::residue_from_index(*F_, Q_.degree(), units_[pos]);
}

// ---------------------------------------------------------------------------
// ResidueField
// ---------------------------------------------------------------------------

ResidueField::ResidueField(const FieldCtx& F, const Poly& pi)
    : F_(&F), pi_(pi), d_(pi.degree()) {
    if (d_ < 1 || !pi.is_monic())
        throw IndexOutOfRangeError("residue field modulus must be monic of degree >= 1");
    size_ = pow_u64(F.q(), uint32_t(d_));
}

void ResidueField::decode(uint64_t a, uint32_t* out) const {
    for (int i = 0; i < d_; ++i) {
        out[i] = uint32_t(a % F_->q());
        a /= F_->q();
    }
}

uint64_t ResidueField::encode(const uint32_t* c) const {
    uint64_t idx = 0;
    for (int i = d_; i-- > 0;) idx = idx * F_->q() + c[i];
    return idx;
}

uint64_t ResidueField::add(uint64_t a, uint64_t b) const {
    uint32_t ca[32], cb[32];
    decode(a, ca);
    decode(b, cb);
    for (int i = 0; i < d_; ++i) ca[i] = F_->add(ca[i], cb[i]);
    return encode(ca);
}

uint64_t ResidueField::sub(uint64_t a, uint64_t b) const {
    uint32_t ca[32], cb[32];
    decode(a, ca);
    decode(b, cb);
    for (int i = 0; i < d_; ++i) ca[i] = F_->sub(ca[i], cb[i]);
    return encode(ca);
}

uint64_t ResidueField::mul(uint64_t a, uint64_t b) const {
    uint32_t ca[32], cb[32];
    uint32_t prod[64] = {0};
    decode(a, ca);
    decode(b, cb);
    for (int i = 0; i < d_; ++i) {
        if (ca[i] == 0) continue;
        for (int j = 0; j < d_; ++j)
            prod[i + j] = F_->add(prod[i + j], F_->mul(ca[i], cb[j]));
    }
    for (int i = 2 * d_ - 2; i >= d_; --i) {
        uint32_t lead = prod[i];
        if (lead == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < d_; ++j)
            prod[i - d_ + j] = F_->sub(prod[i - d_ + j], F_->mul(lead, pi_[size_t(j)]));
    }
    return encode(prod);
}

uint64_t ResidueField::pow(uint64_t a, uint64_t e) const {
    uint64_t result = 1, base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint64_t ResidueField::inv(uint64_t a) const {
    if (a == 0) throw DivisionByZeroError("inverse of zero residue");
    return pow(a, size_ - 2);
}

uint64_t ResidueField::element_of_t() const {
    if (d_ >= 2) return F_->q(); // the residue "t" itself
    return F_->neg(pi_[0]);      // linear modulus: t = -c0
}

uint64_t ResidueField::from_poly(const Poly& f) const {
    Poly r = divrem(f, pi_).second;
    return r.residue_index(d_);
}

Poly ResidueField::to_poly(uint64_t a) const { return Poly::residue_from_index(*F_, d_, a); }

int ResidueField::chi2(uint64_t a) const {
    if (F_->p() == 2) throw EvenCharacteristicError("quadratic character needs odd characteristic");
    if (chi2_.empty()) {
        if (size_ > (uint64_t(1) << 24))
            throw BudgetExceededError("quadratic character table too large: q^d = " +
                                      std::to_string(size_));
        chi2_.assign(size_, -1);
        chi2_[0] = 0;
        for (uint64_t y = 1; y < size_; ++y) chi2_[mul(y, y)] = 1;
    }
    return chi2_[a];
}

} // namespace ffvar
