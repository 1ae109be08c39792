#ifndef FFVAR_FIELD_HPP
#define FFVAR_FIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ffvar/errors.hpp"

namespace ffvar {

/// GF(p^r) with a frozen element indexing: the element
/// c_0 + c_1*u + ... + c_{r-1}*u^{r-1} has index sum_i c_i * p^i,
/// giving a bijection GF(q) <-> {0, ..., q-1}.  All file formats and
/// enumeration orders downstream rely on this encoding.
///
/// The modulus is chosen deterministically: the lexicographically smallest
/// monic irreducible of degree r over GF(p), scanning the coefficient tuple
/// (c_0, ..., c_{r-1}) in ascending base-p order.
class FieldCtx {
  public:
    static constexpr uint64_t kDefaultBound = uint64_t(1) << 20;

    FieldCtx(uint32_t p, uint32_t r, uint64_t bound = kDefaultBound);

    uint32_t p() const { return p_; }
    uint32_t r() const { return r_; }
    uint64_t q() const { return q_; }

    // Modulus as coefficients over GF(p), lowest first, length r+1, leading 1.
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    // Two contexts are interchangeable iff (p, r) match; the modulus is a
    // deterministic function of (p, r).
    bool same_field(const FieldCtx& other) const { return p_ == other.p_ && r_ == other.r_; }

    // Index-level arithmetic.  All arguments and results are element indices.
    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const;
    uint32_t inv(uint32_t a) const; // extended gcd; throws DivisionByZero on 0
    uint32_t pow(uint32_t a, uint64_t e) const;

    uint32_t from_int(int64_t v) const; // v mod p, embedded as a constant

    std::vector<uint32_t> coeffs(uint32_t idx) const;
    uint32_t from_coeffs(const std::vector<uint32_t>& c) const;

    void check_index(uint64_t idx) const;

    std::string modulus_text() const;

  private:
    uint32_t p_ = 0;
    uint32_t r_ = 0;
    uint64_t q_ = 0;
    std::vector<uint32_t> modulus_;

    // Dense op tables for small fields; empty when q > kTableLimit.
    static constexpr uint64_t kTableLimit = 256;
    std::vector<uint32_t> add_tab_, sub_tab_, mul_tab_, inv_tab_, neg_tab_;

    uint32_t add_slow(uint32_t a, uint32_t b) const;
    uint32_t sub_slow(uint32_t a, uint32_t b) const;
    uint32_t mul_slow(uint32_t a, uint32_t b) const;
    uint32_t neg_slow(uint32_t a) const;
    uint32_t inv_slow(uint32_t a) const;
};

/// Element of a FieldCtx: a thin (context, index) pair with value semantics.
class FieldElement {
  public:
    FieldElement() : ctx_(nullptr), idx_(0) {}
    FieldElement(const FieldCtx& ctx, uint32_t idx) : ctx_(&ctx), idx_(idx) { ctx.check_index(idx); }

    uint32_t index() const { return idx_; }
    const FieldCtx& ctx() const { return *ctx_; }
    std::vector<uint32_t> coeffs() const { return ctx_->coeffs(idx_); }
    bool is_zero() const { return idx_ == 0; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    FieldElement inverse() const;
    FieldElement pow(uint64_t e) const;

  private:
    const FieldCtx* ctx_;
    uint32_t idx_;

    static void require_same(const FieldElement& a, const FieldElement& b);
};

} // namespace ffvar

#endif
