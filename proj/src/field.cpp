#include "ffvar/field.hpp"

#include <array>
#include <sstream>

namespace ffvar {

namespace {

bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Scratch polynomials over GF(p) for modulus selection, coefficients
// lowest-first, not trimmed.
using PVec = std::vector<uint32_t>;

int pdeg(const PVec& a) {
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

// a mod b over GF(p), b monic of degree db.
PVec pmod(PVec a, const PVec& b, int db, uint32_t p) {
    int da = pdeg(a);
    while (da >= db) {
        uint64_t lead = a[da];
        for (int j = 0; j <= db; ++j) {
            uint64_t t = (uint64_t)b[j] * lead % p;
            a[da - db + j] = uint32_t((a[da - db + j] + p - t) % p);
        }
        da = pdeg(a);
    }
    a.resize(db > 0 ? db : 1, 0);
    return a;
}

bool divides(const PVec& d, int dd, const PVec& f, uint32_t p) {
    return pdeg(pmod(f, d, dd, p)) < 0;
}

// Monic f of degree >= 1 over GF(p): irreducible iff no monic divisor of
// degree in [1, deg f / 2].
bool irreducible_modp(const PVec& f, uint32_t p) {
    int df = pdeg(f);
    for (int dd = 1; dd <= df / 2; ++dd) {
        uint64_t count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        PVec d(dd + 1, 0);
        d[dd] = 1;
        for (uint64_t idx = 0; idx < count; ++idx) {
            uint64_t v = idx;
            for (int i = 0; i < dd; ++i) {
                d[i] = uint32_t(v % p);
                v /= p;
            }
            if (divides(d, dd, f, p)) return false;
        }
    }
    return true;
}

} // namespace

FieldCtx::FieldCtx(uint32_t p, uint32_t r, uint64_t bound) : p_(p), r_(r) {
    if (!is_prime_u32(p)) throw NonPrimeError("p = " + std::to_string(p) + " is not prime");
    if (r == 0) throw DegreeZeroError("extension degree r must be >= 1");
    q_ = 1;
    for (uint32_t i = 0; i < r; ++i) {
        q_ *= p;
        if (q_ > bound)
            throw BoundExceededError("p^r = " + std::to_string(p) + "^" + std::to_string(r) +
                                     " exceeds the field bound " + std::to_string(bound));
    }

    // Smallest monic irreducible of degree r, tuple (c_0..c_{r-1}) ascending.
    PVec cand(r + 1, 0);
    cand[r] = 1;
    for (uint64_t idx = 0;; ++idx) {
        uint64_t v = idx;
        for (uint32_t i = 0; i < r; ++i) {
            cand[i] = uint32_t(v % p);
            v /= p;
        }
        if (irreducible_modp(cand, p)) break;
    }
    modulus_.assign(cand.begin(), cand.end());

    if (q_ <= kTableLimit) {
        uint32_t q = uint32_t(q_);
        add_tab_.resize(size_t(q) * q);
        sub_tab_.resize(size_t(q) * q);
        mul_tab_.resize(size_t(q) * q);
        neg_tab_.resize(q);
        inv_tab_.assign(q, 0);
        for (uint32_t a = 0; a < q; ++a) {
            neg_tab_[a] = neg_slow(a);
            for (uint32_t b = 0; b < q; ++b) {
                add_tab_[size_t(a) * q + b] = add_slow(a, b);
                sub_tab_[size_t(a) * q + b] = sub_slow(a, b);
                mul_tab_[size_t(a) * q + b] = mul_slow(a, b);
            }
        }
        for (uint32_t a = 1; a < q; ++a) inv_tab_[a] = inv_slow(a);
    }
}

void FieldCtx::check_index(uint64_t idx) const {
    if (idx >= q_)
        throw IndexOutOfRangeError("element index " + std::to_string(idx) + " not in [0, " +
                                   std::to_string(q_) + ")");
}

std::vector<uint32_t> FieldCtx::coeffs(uint32_t idx) const {
    check_index(idx);
    std::vector<uint32_t> c(r_);
    uint64_t v = idx;
    for (uint32_t i = 0; i < r_; ++i) {
        c[i] = uint32_t(v % p_);
        v /= p_;
    }
    return c;
}

uint32_t FieldCtx::from_coeffs(const std::vector<uint32_t>& c) const {
    if (c.size() != r_) throw IndexOutOfRangeError("coefficient vector must have length r");
    uint64_t idx = 0;
    for (uint32_t i = r_; i-- > 0;) {
        if (c[i] >= p_) throw IndexOutOfRangeError("coefficient not in [0, p)");
        idx = idx * p_ + c[i];
    }
    return uint32_t(idx);
}

uint32_t FieldCtx::from_int(int64_t v) const {
    int64_t m = v % int64_t(p_);
    if (m < 0) m += p_;
    return uint32_t(m);
}

uint32_t FieldCtx::add(uint32_t a, uint32_t b) const {
    if (!add_tab_.empty()) return add_tab_[size_t(a) * q_ + b];
    return add_slow(a, b);
}

uint32_t FieldCtx::sub(uint32_t a, uint32_t b) const {
    if (!sub_tab_.empty()) return sub_tab_[size_t(a) * q_ + b];
    return sub_slow(a, b);
}

uint32_t FieldCtx::mul(uint32_t a, uint32_t b) const {
    if (!mul_tab_.empty()) return mul_tab_[size_t(a) * q_ + b];
    return mul_slow(a, b);
}

uint32_t FieldCtx::neg(uint32_t a) const {
    if (!neg_tab_.empty()) return neg_tab_[a];
    return neg_slow(a);
}

uint32_t FieldCtx::inv(uint32_t a) const {
    if (a == 0) throw DivisionByZeroError("inverse of zero");
    if (!inv_tab_.empty()) return inv_tab_[a];
    return inv_slow(a);
}

uint32_t FieldCtx::pow(uint32_t a, uint64_t e) const {
    uint32_t result = 1;
    uint32_t base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint32_t FieldCtx::add_slow(uint32_t a, uint32_t b) const {
    if (r_ == 1) return uint32_t((uint64_t(a) + b) % p_);
    uint64_t idx = 0, pw = 1;
    for (uint32_t i = 0; i < r_; ++i) {
        uint64_t da = a % p_, db = b % p_;
        a /= p_;
        b /= p_;
        idx += (da + db) % p_ * pw;
        pw *= p_;
    }
    return uint32_t(idx);
}

uint32_t FieldCtx::sub_slow(uint32_t a, uint32_t b) const {
    if (r_ == 1) return uint32_t((uint64_t(a) + p_ - b) % p_);
    uint64_t idx = 0, pw = 1;
    for (uint32_t i = 0; i < r_; ++i) {
        uint64_t da = a % p_, db = b % p_;
        a /= p_;
        b /= p_;
        idx += (da + p_ - db) % p_ * pw;
        pw *= p_;
    }
    return uint32_t(idx);
}

uint32_t FieldCtx::neg_slow(uint32_t a) const { return sub_slow(0, a); }

uint32_t FieldCtx::mul_slow(uint32_t a, uint32_t b) const {
    if (r_ == 1) return uint32_t(uint64_t(a) * b % p_);
    std::array<uint64_t, 64> prod{};
    std::array<uint32_t, 32> da{}, db{};
    for (uint32_t i = 0; i < r_; ++i) {
        da[i] = a % p_;
        a /= p_;
        db[i] = b % p_;
        b /= p_;
    }
    for (uint32_t i = 0; i < r_; ++i) {
        if (da[i] == 0) continue;
        for (uint32_t j = 0; j < r_; ++j) prod[i + j] += uint64_t(da[i]) * db[j];
    }
    // Reduce modulo the monic modulus.
    for (int i = int(2 * r_ - 2); i >= int(r_); --i) {
        uint64_t lead = prod[i] % p_;
        if (lead == 0) continue;
        prod[i] = 0;
        for (uint32_t j = 0; j < r_; ++j) {
            uint64_t t = lead * modulus_[j] % p_;
            prod[i - r_ + j] = prod[i - r_ + j] + (uint64_t(p_) - t);
        }
    }
    uint64_t idx = 0, pw = 1;
    for (uint32_t i = 0; i < r_; ++i) {
        idx += (prod[i] % p_) * pw;
        pw *= p_;
    }
    return uint32_t(idx);
}

uint32_t FieldCtx::inv_slow(uint32_t a) const {
    if (a == 0) throw DivisionByZeroError("inverse of zero");
    const uint32_t p = p_;
    auto inv_scalar = [&](uint32_t s) {
        uint32_t result = 1, base = s, e = p - 2;
        while (e) {
            if (e & 1) result = uint32_t(uint64_t(result) * base % p);
            base = uint32_t(uint64_t(base) * base % p);
            e >>= 1;
        }
        return result;
    };
    if (r_ == 1) return inv_scalar(a);

    // Extended Euclid in GF(p)[u] against the modulus.
    auto divmod = [&](PVec num, const PVec& den) {
        int dd = pdeg(den);
        PVec quot(num.size(), 0);
        uint32_t lead_inv = inv_scalar(den[dd]);
        for (int dn = pdeg(num); dn >= dd; dn = pdeg(num)) {
            uint64_t f = uint64_t(num[dn]) * lead_inv % p;
            quot[dn - dd] = uint32_t(f);
            for (int j = 0; j <= dd; ++j) {
                uint64_t t = f * den[j] % p;
                num[dn - dd + j] = uint32_t((num[dn - dd + j] + p - t) % p);
            }
        }
        return std::pair<PVec, PVec>(quot, num);
    };
    auto mul_sub = [&](const PVec& s0, const PVec& quot, const PVec& s1) {
        // s0 - quot * s1
        PVec out(std::max(s0.size(), quot.size() + s1.size()), 0);
        for (size_t i = 0; i < s0.size(); ++i) out[i] = s0[i];
        for (size_t i = 0; i < quot.size(); ++i) {
            if (!quot[i]) continue;
            for (size_t j = 0; j < s1.size(); ++j) {
                uint64_t t = uint64_t(quot[i]) * s1[j] % p;
                out[i + j] = uint32_t((out[i + j] + p - t) % p);
            }
        }
        return out;
    };

    PVec r0(modulus_.begin(), modulus_.end());
    PVec r1 = [&] {
        PVec v(r_, 0);
        uint32_t x = a;
        for (uint32_t i = 0; i < r_; ++i) {
            v[i] = x % p;
            x /= p;
        }
        return v;
    }();
    PVec s0{0}, s1{1};
    while (pdeg(r1) >= 0) {
        auto [quot, rem] = divmod(r0, r1);
        PVec s2 = mul_sub(s0, quot, s1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 is a nonzero constant gcd; inverse = s0 / r0.
    uint64_t scale = inv_scalar(r0[0]);
    PVec red = pmod(s0, PVec(modulus_.begin(), modulus_.end()), int(r_), p);
    red.resize(r_, 0);
    std::vector<uint32_t> c(r_);
    for (uint32_t i = 0; i < r_; ++i) c[i] = uint32_t(red[i] * scale % p);
    return from_coeffs(c);
}

std::string FieldCtx::modulus_text() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < modulus_.size(); ++i) {
        if (i) os << ",";
        os << modulus_[i];
    }
    os << "]";
    return os.str();
}

void FieldElement::require_same(const FieldElement& a, const FieldElement& b) {
    if (a.ctx_ == nullptr || b.ctx_ == nullptr || !a.ctx_->same_field(*b.ctx_))
        throw CtxMismatchError("operands belong to different fields");
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    FieldElement::require_same(a, b);
    return FieldElement(a.ctx(), a.ctx().add(a.idx_, b.idx_));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    FieldElement::require_same(a, b);
    return FieldElement(a.ctx(), a.ctx().sub(a.idx_, b.idx_));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    FieldElement::require_same(a, b);
    return FieldElement(a.ctx(), a.ctx().mul(a.idx_, b.idx_));
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    FieldElement::require_same(a, b);
    return a.idx_ == b.idx_;
}

FieldElement FieldElement::inverse() const { return FieldElement(*ctx_, ctx_->inv(idx_)); }

FieldElement FieldElement::pow(uint64_t e) const { return FieldElement(*ctx_, ctx_->pow(idx_, e)); }

} // namespace ffvar
