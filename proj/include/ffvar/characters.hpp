#ifndef FFVAR_CHARACTERS_HPP
#define FFVAR_CHARACTERS_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "ffvar/lfunction.hpp"
#include "ffvar/poly.hpp"

namespace ffvar {

/// Dirichlet characters mod squarefree Q, built by CRT: per prime factor,
/// a generator of the residue field's multiplicative group and its discrete
/// log table.  A character is an exponent tuple (e_1, ..., e_r) with
/// e_i in [0, q^{d_i} - 1); values are exact roots of unity evaluated in
/// complex doubles.
class CharacterGroup {
  public:
    CharacterGroup(const ResidueSystem& rs);

    uint64_t size() const { return phi_; }          // number of characters = |units|
    size_t components() const { return comps_.size(); }
    uint64_t component_order(size_t i) const { return comps_[i].order; }
    const Poly& component_prime(size_t i) const { return comps_[i].pi; }
    uint64_t component_generator(size_t i) const { return comps_[i].generator; }

    std::vector<uint32_t> expo_from_ordinal(uint64_t ordinal) const;
    uint64_t ordinal_from_expo(const std::vector<uint32_t>& expo) const;
    bool is_trivial(const std::vector<uint32_t>& expo) const;
    std::vector<uint32_t> conjugate(const std::vector<uint32_t>& expo) const;

    /// chi_e(A) for the unit at position pos (see ResidueSystem::units()).
    std::complex<double> value(const std::vector<uint32_t>& expo, size_t unit_pos) const;

  private:
    struct Component {
        Poly pi;
        uint64_t order = 0;     // q^{deg pi} - 1
        uint64_t generator = 0; // residue index of the smallest generator
        std::vector<uint32_t> dlog;
    };

    uint64_t phi_ = 0;
    uint64_t lcm_order_ = 1;
    std::vector<Component> comps_;
    std::vector<uint64_t> weight_;              // lcm / order_i
    std::vector<std::vector<uint32_t>> unit_dlogs_; // per unit, per component
    std::vector<std::complex<double>> roots_;   // exp(2 pi i j / lcm)
};

/// Twisted coefficient vectors c_{1,rho x chi, n} = sum_{f in M_n, (f,Q)=1}
/// a_f chi(f), n = 0..n_max.  The per-class aggregates sum_{f = A (Q)} a_f
/// are computed once; each character is then a |units|-term sum.
class TwistScanner {
  public:
    TwistScanner(const CoeffTable& coeffs, const ResidueSystem& rs, const CharacterGroup& group,
                 int n_max);

    int n_max() const { return nmax_; }
    const CharacterGroup& group() const { return *group_; }
    const ResidueSystem& residues() const { return *rs_; }
    const CoeffTable& coeffs_table() const { return *ct_; }

    std::vector<std::complex<double>> coeffs(const std::vector<uint32_t>& expo) const;

  private:
    const CoeffTable* ct_;
    const ResidueSystem* rs_;
    const CharacterGroup* group_;
    int nmax_;
    std::vector<std::vector<double>> class_sums_; // [degree][unit]
};

/// One-shot form of TwistScanner::coeffs for a single character.
std::vector<std::complex<double>> twisted_coeffs(const FieldCtx& F, const LModel& model,
                                                 const std::vector<uint32_t>& expo, int n_max,
                                                 const Poly& Q);

struct ClassifyResult {
    bool good_like = false;
    std::vector<double> scaled_moduli; // |root| * q^{(1+w)/2}, one per root
    double max_tail = 0;               // max |c_n| / scale over R < n <= R+3
    int effective_degree = 0;
};

/// Empirical good/bad classification of a nontrivial character by the
/// moduli of the zeros of sum_{n<=R} c_n T^n.  Requires the scanner to
/// reach degree R+3 for the truncation check; throws TruncationFailure
/// when coefficients beyond degree R are non-negligible.
ClassifyResult classify_character(const TwistScanner& scanner, const LModel& model,
                                  const std::vector<uint32_t>& expo, const Poly& Q);

/// Var = (1/|Phi|^2) sum_{chi != chi_0} |c_{k,rho x chi,n}|^2, with the k-th
/// coefficients built by convolving the first-order ones.  The independent
/// cross-check of the exact direct variance.
double variance_via_characters(const TwistScanner& scanner, int k, int n);
double variance_via_characters(const FieldCtx& F, const LModel& model, int k, int n,
                               const Poly& Q);

/// Roots of a complex polynomial (Durand-Kerner); exposed for tests.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs);

} // namespace ffvar

#endif
