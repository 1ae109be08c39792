#ifndef FFVAR_POLY_HPP
#define FFVAR_POLY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ffvar/field.hpp"

namespace ffvar {

/// Dense polynomial over GF(q), coefficients stored as element indices,
/// lowest degree first, trailing zeros trimmed (empty vector = the zero
/// polynomial).  The canonical index of a monic polynomial of degree n is
/// the base-q integer formed from its n non-leading coefficients.
class Poly {
  public:
    Poly() : ctx_(nullptr) {}
    Poly(const FieldCtx& F, std::vector<uint32_t> coeffs);

    static Poly zero(const FieldCtx& F) { return Poly(F, {}); }
    static Poly one(const FieldCtx& F) { return Poly(F, {1}); }
    static Poly t(const FieldCtx& F) { return Poly(F, {0, 1}); }
    static Poly constant(const FieldCtx& F, uint32_t idx) { return Poly(F, {idx}); }
    // Integer coefficient list, reduced mod p into constants (CLI/test sugar).
    static Poly from_ints(const FieldCtx& F, const std::vector<int64_t>& c);

    const FieldCtx& ctx() const { return *ctx_; }
    bool valid() const { return ctx_ != nullptr; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    uint32_t operator[](size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<uint32_t>& coeffs() const { return c_; }

    uint32_t eval(uint32_t x) const;
    Poly derivative() const;
    Poly make_monic() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    bool operator<(const Poly& other) const; // by (degree, canonical coeffs)

    // Canonical monic indexing.
    static Poly monic_from_index(const FieldCtx& F, int deg, uint64_t index);
    uint64_t monic_index() const;

    // Residues mod a degree-m modulus: any poly of degree < m, indexed by
    // the base-q integer of all m coefficient slots.
    static Poly residue_from_index(const FieldCtx& F, int m, uint64_t index);
    uint64_t residue_index(int m) const;

    std::string text() const; // "[c0,c1,...]"
    static Poly parse(const FieldCtx& F, const std::string& s);

  private:
    const FieldCtx* ctx_;
    std::vector<uint32_t> c_;

    void trim();
    static void require_same(const Poly& a, const Poly& b);

    friend void for_each_monic(const FieldCtx&, int, uint64_t, uint64_t,
                               const std::function<void(const Poly&, uint64_t)>&);
};

std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g);
Poly gcd_monic(const Poly& a, const Poly& b);
bool is_squarefree(const Poly& Q);

/// Deterministic irreducibility by trial division: true iff f has no monic
/// factor of degree in [1, deg f / 2].
bool is_irreducible(const Poly& f);

struct Factorization {
    std::vector<std::pair<Poly, int>> parts; // sorted by (degree, index)
    Poly unfactor(const FieldCtx& F) const;
};

/// Trial-division factorization, no precomputed tables.
Factorization factorize_trial(const Poly& f);

uint64_t pow_u64(uint64_t base, uint32_t e);

/// Visit monic polynomials of the given degree with canonical index in
/// [lo, hi), ascending.  The Poly reference is reused between calls.
void for_each_monic(const FieldCtx& F, int deg, uint64_t lo, uint64_t hi,
                    const std::function<void(const Poly&, uint64_t)>& fn);
void for_each_monic(const FieldCtx& F, int deg,
                    const std::function<void(const Poly&, uint64_t)>& fn);

/// Smallest-prime-factor sieve over all monics of degree <= max_degree,
/// built Eratosthenes-style in canonical index order; shared by
/// factorization, irreducibility and the residue machinery.
class PrimeSieve {
  public:
    PrimeSieve(const FieldCtx& F, int max_degree);

    const FieldCtx& ctx() const { return *F_; }
    int max_degree() const { return maxdeg_; }

    bool is_irreducible(const Poly& f) const;
    Factorization factorize(const Poly& f) const;
    const std::vector<uint64_t>& prime_indices(int deg) const { return primes_[size_t(deg)]; }
    size_t prime_count(int deg) const { return primes_[size_t(deg)].size(); }

  private:
    const FieldCtx* F_;
    int maxdeg_;
    // spf_[d][idx]: packed (degree<<40 | index) + 1 of the smallest prime
    // factor, or 0 when the polynomial is itself irreducible.
    std::vector<std::vector<uint64_t>> spf_;
    std::vector<std::vector<uint64_t>> primes_;
};

/// The unit group (F_q[t]/Q)^* for squarefree Q: unit representatives in
/// ascending residue-index order plus the inverse lookup.
class ResidueSystem {
  public:
    ResidueSystem(const FieldCtx& F, const Poly& Q);

    const FieldCtx& ctx() const { return *F_; }
    const Poly& Q() const { return Q_; }
    uint64_t phi() const { return units_.size(); }
    uint64_t modulus_size() const { return size_; } // q^{deg Q}
    const std::vector<uint64_t>& units() const { return units_; }
    Poly unit(size_t pos) const;
    // Position of a residue index among the units, -1 if not a unit.
    int64_t unit_pos(uint64_t residue_index) const { return pos_[residue_index]; }

  private:
    const FieldCtx* F_;
    Poly Q_;
    uint64_t size_;
    std::vector<uint64_t> units_;
    std::vector<int64_t> pos_;
};

/// The residue field F_q[t]/pi for irreducible pi: arithmetic on residue
/// indices, with a lazily built quadratic-character table.
class ResidueField {
  public:
    ResidueField(const FieldCtx& F, const Poly& pi);

    const FieldCtx& ctx() const { return *F_; }
    const Poly& modulus() const { return pi_; }
    int extension_degree() const { return d_; }
    uint64_t size() const { return size_; } // q^d

    uint64_t add(uint64_t a, uint64_t b) const;
    uint64_t sub(uint64_t a, uint64_t b) const;
    uint64_t mul(uint64_t a, uint64_t b) const;
    uint64_t pow(uint64_t a, uint64_t e) const;
    uint64_t inv(uint64_t a) const;
    uint64_t one() const { return 1; }
    uint64_t element_of_t() const; // image of t
    uint64_t from_poly(const Poly& f) const;
    Poly to_poly(uint64_t a) const;

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    /// Odd characteristic only; the table is built on first use.
    int chi2(uint64_t a) const;

  private:
    const FieldCtx* F_;
    Poly pi_;
    int d_;
    uint64_t size_;
    mutable std::vector<int8_t> chi2_;

    void decode(uint64_t a, uint32_t* out) const;
    uint64_t encode(const uint32_t* c) const;
};

} // namespace ffvar

#endif
