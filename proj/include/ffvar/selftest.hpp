#ifndef FFVAR_SELFTEST_HPP
#define FFVAR_SELFTEST_HPP

#include <ostream>

namespace ffvar {

/// Calibration and invariant suite exercised by the `selftest` subcommand:
/// lattice/closed-form calibration (including the rejected column order),
/// U(1) reduction, Haar unitarity, character orthogonality, the two-path
/// variance identity and the necklace count.  Returns the number of failed
/// checks.
int run_selftest(std::ostream& out);

} // namespace ffvar

#endif
