#include "ffvar/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ffvar {

const char* kVarianceCsvHeader =
    "q,p,r,model,k,n,Q,phi,R,expectation,variance,normalized,predicted,deviation";

const char* kRmtCsvHeader = "k,n,R,lattice,closed_form,mc_estimate,mc_stderr,mc_samples,seed";

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_rational(const mpq_class& v) {
    mpq_class c = v;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string variance_csv_row(const VarianceReport& rep) {
    std::ostringstream os;
    os << rep.q << "," << rep.p << "," << rep.r << "," << rep.model << "," << rep.k << ","
       << rep.n << "," << csv_quote(rep.Q.text()) << "," << rep.phi.get_str() << "," << rep.R
       << "," << format_rational(rep.expectation) << "," << format_rational(rep.variance) << ","
       << format_rational(rep.normalized) << "," << rep.predicted.get_str() << ","
       << format_double(rep.deviation);
    return os.str();
}

std::string config_header_csv(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream os;
    os << "# format_version=" << kFormatVersion << "\n";
    for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
    return os.str();
}

} // namespace ffvar
