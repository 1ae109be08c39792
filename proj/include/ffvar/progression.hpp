#ifndef FFVAR_PROGRESSION_HPP
#define FFVAR_PROGRESSION_HPP

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ffvar/lfunction.hpp"
#include "ffvar/poly.hpp"

namespace ffvar {

struct RunOptions {
    int workers = 1;
    bool budget_override = false;
};

/// S_{k,n,Q}(A) for every unit class A: one exact integer bucket per unit,
/// indexed like ResidueSystem::units().
struct ProgressionSums {
    std::string model;
    int k = 0;
    int n = 0;
    Poly Q;
    std::vector<mpz_class> sums;
};

/// Single pass over the monics of degree n; each f lands in the bucket of
/// its residue class when that class is a unit.  Partitioned ranges merge
/// exactly, so the result is independent of the worker count.
ProgressionSums progression_sums(const DivisorTable& dk, const ResidueSystem& rs, int n,
                                 RunOptions opts = {});

struct VarianceReport {
    uint64_t q = 0;
    uint32_t p = 0;
    uint32_t r = 0;
    std::string model;
    int k = 0;
    int n = 0;
    Poly Q;
    mpz_class phi;
    int R = 0;
    mpq_class expectation;
    mpq_class variance;
    mpq_class normalized; // phi * Var / q^{n(1+w)}
    mpz_class predicted;  // I_k(n;R), 0 when n outside [1, kR]
    double deviation = 0; // |normalized - predicted| / predicted
    bool hypothesis_ok = true;
    bool n_in_range = true;
    bool zero_variance = false;
};

/// Expectation and variance over the unit classes, in exact rationals; the
/// two algebraic forms of the variance are computed and compared before the
/// report is emitted.
VarianceReport variance_report(const ProgressionSums& ps, const ResidueSystem& rs,
                               const LModel& model);

/// Q templates for sweeps: "[c0,c1,...]" (fixed element indices) or
/// "irred:<d>" (smallest canonical monic irreducible of degree d).
Poly resolve_q_template(const FieldCtx& F, const std::string& tmpl);

/// (p, r) with p^r = q; ConfigParse when q is not a prime power.
std::pair<uint32_t, uint32_t> prime_power_split(uint64_t q);

struct SweepEntry {
    uint64_t q = 0;
    std::optional<VarianceReport> report;
    std::string error; // non-empty when this q failed
};

/// One report per q at fixed (k, n, Q-template); per-q errors are recorded
/// and the sweep continues.
std::vector<SweepEntry> convergence_sweep(ModelKind kind, int k, int n, const std::string& qtmpl,
                                          const std::vector<uint64_t>& qs, RunOptions opts = {});

} // namespace ffvar

#endif
