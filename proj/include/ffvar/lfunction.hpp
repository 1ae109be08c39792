#ifndef FFVAR_LFUNCTION_HPP
#define FFVAR_LFUNCTION_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ffvar/poly.hpp"

namespace ffvar {

/// Local factor at an irreducible pi: the polynomial L(T) = sum_j b_j T^j
/// with b_0 = 1, whose reciprocal is the Euler factor at pi.
struct LocalFactor {
    Poly prime;
    std::vector<mpz_class> coeffs;
};

enum class ModelKind { Trivial, Legendre, Custom };

/// Projective point count of y^2 = x(x-1)(x-theta) over the residue field,
/// counting affine solutions plus the point at infinity.  Singular curves
/// (theta = 0 or 1) include the singular point; the smooth-locus correction
/// happens in the local-factor rule.
long legendre_point_count(const ResidueField& F, uint64_t theta);

/// Dirichlet coefficients a_{pi^m}, m = 0..mmax: the coefficients of the
/// reciprocal local factor 1 / L(T, rho_pi), which is what the Euler-product
/// expansion of the partial L-function sums over.
std::vector<mpz_class> prime_power_coeffs(const LocalFactor& lf, int mmax);

/// The L-function data the pipeline sees: weight, dimension, a local-factor
/// rule and a rule Q -> R for the degree of the twisted L-polynomial.
class LModel {
  public:
    struct CustomSpec {
        int dim = 0;
        int weight = 0;
        int R = 0;
        // key: packed (degree << 40 | monic index) of the prime
        std::map<uint64_t, std::vector<mpz_class>> factors;
    };

    static LModel trivial();
    static LModel legendre();
    static LModel custom(CustomSpec spec);
    static LModel custom_from_file(const FieldCtx& F, const std::string& path);

    ModelKind kind() const { return kind_; }
    int weight() const { return weight_; }
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }

    LocalFactor local_factor(const Poly& pi) const;

    /// Degree of the twisted L-polynomial: deg Q - 1 (trivial, deg Q >= 2),
    /// 2 deg Q - 1 (legendre, requires gcd(Q, t(t-1)) = t), declared value
    /// (custom).  Throws HypothesisViolated when the hypothesis fails.
    int degree_R(const Poly& Q) const;
    int degree_R_formula(const Poly& Q) const; // no hypothesis check

    void check_usable(const FieldCtx& F) const; // legendre needs odd q

  private:
    ModelKind kind_;
    int weight_;
    int dim_;
    std::string name_;
    CustomSpec custom_;

    LModel(ModelKind kind, int weight, int dim, std::string name)
        : kind_(kind), weight_(weight), dim_(dim), name_(std::move(name)) {}
};

uint64_t prime_key(const Poly& pi);

struct TableOptions {
    bool budget_override = false;
};

constexpr uint64_t kDeskBudget = 100000000; // refuse q^n beyond this without override

void check_budget(uint64_t q, int n, bool budget_override);

/// Exact Dirichlet-series coefficients a_f for all monic f with deg f <= N,
/// computed multiplicatively from the smallest-prime-factor sieve.
class CoeffTable {
  public:
    CoeffTable(const FieldCtx& F, const LModel& model, int N, TableOptions opts = {});

    const FieldCtx& ctx() const { return *F_; }
    const LModel& model() const { return model_; }
    const PrimeSieve& sieve() const { return *sieve_; }
    int max_degree() const { return N_; }

    const mpz_class& at(int deg, uint64_t index) const { return a_[size_t(deg)][index]; }
    const mpz_class& at(const Poly& f) const;

    /// a_{pi^m} for m = 0..mmax (mmax <= N / deg pi), cached per prime.
    const std::vector<mpz_class>& prime_powers(const Poly& pi, int mmax) const;

  private:
    const FieldCtx* F_;
    LModel model_;
    std::shared_ptr<PrimeSieve> sieve_;
    int N_;
    std::vector<std::vector<mpz_class>> a_;
    mutable std::map<uint64_t, std::vector<mpz_class>> ppow_;
};

/// Exact values of the k-divisor function d_{k,rho}(f) for deg f <= N;
/// per prime, d_k(pi^e) is the T^e coefficient of the k-th power of the
/// local coefficient series.
class DivisorTable {
  public:
    DivisorTable(int k, const CoeffTable& coeffs);

    int k() const { return k_; }
    const CoeffTable& coeffs() const { return *ct_; }
    const FieldCtx& ctx() const { return ct_->ctx(); }
    int max_degree() const { return ct_->max_degree(); }

    const mpz_class& at(int deg, uint64_t index) const { return d_[size_t(deg)][index]; }
    const mpz_class& at(const Poly& f) const;

  private:
    int k_;
    const CoeffTable* ct_;
    std::vector<std::vector<mpz_class>> d_;
};

} // namespace ffvar

#endif
