#ifndef FFVAR_REPORT_IO_HPP
#define FFVAR_REPORT_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "ffvar/progression.hpp"
#include "ffvar/rmt.hpp"

namespace ffvar {

constexpr int kFormatVersion = 1;

std::string format_double(double v);
std::string format_rational(const mpq_class& v); // always "num/den"
std::string csv_quote(const std::string& field); // RFC-style quoting when needed

/// Variance CSV layout, frozen:
/// q,p,r,model,k,n,Q,phi,R,expectation,variance,normalized,predicted,deviation
extern const char* kVarianceCsvHeader;
std::string variance_csv_row(const VarianceReport& rep);

/// Matrix-integral CSV layout, frozen:
/// k,n,R,lattice,closed_form,mc_estimate,mc_stderr,mc_samples,seed
extern const char* kRmtCsvHeader;

/// "# key=value" header lines carrying the fully resolved configuration.
std::string config_header_csv(const std::vector<std::pair<std::string, std::string>>& kv);

} // namespace ffvar

#endif
