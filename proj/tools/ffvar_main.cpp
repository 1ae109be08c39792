// ffvar: exact variance of generalized divisor sums in arithmetic
// progressions over F_q[t], with the matching unitary-group matrix
// integrals.  One binary, subcommands per experiment, CSV/JSON output with
// a self-describing config header.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ffvar/characters.hpp"
#include "ffvar/progression.hpp"
#include "ffvar/report_io.hpp"
#include "ffvar/rmt.hpp"
#include "ffvar/selftest.hpp"

using json = nlohmann::ordered_json;
using namespace ffvar;

namespace {

struct OutputSink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;

    void open(const std::string& path, const std::string& command, const std::string& ext) {
        std::string resolved = path;
        if (resolved.empty()) {
            const char* dir = std::getenv("FFVAR_OUT_DIR");
            if (dir && *dir) resolved = std::string(dir) + "/" + command + "." + ext;
        }
        if (!resolved.empty()) {
            file = std::make_unique<std::ofstream>(resolved);
            if (!*file) throw ConfigParseError("cannot open output file: " + resolved);
            os = file.get();
        }
    }
    std::ostream& out() { return *os; }
};

using KV = std::vector<std::pair<std::string, std::string>>;

void emit_csv(OutputSink& sink, const KV& config, const std::string& header,
              const std::vector<std::string>& rows) {
    sink.out() << config_header_csv(config) << header << "\n";
    for (const auto& r : rows) sink.out() << r << "\n";
}

void emit_json(OutputSink& sink, const KV& config, const json& rows) {
    json doc;
    doc["format_version"] = kFormatVersion;
    json cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    doc["config"] = cfg;
    doc["rows"] = rows;
    sink.out() << doc.dump(2) << "\n";
}

std::vector<uint64_t> parse_q_list(const std::string& spec) {
    std::vector<uint64_t> out;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw ConfigParseError("bad q value: " + tok);
        }
    }
    if (out.empty()) throw ConfigParseError("empty q list");
    return out;
}

std::pair<long, long> parse_n_range(const std::string& spec) {
    auto dots = spec.find("..");
    try {
        if (dots == std::string::npos) {
            long v = std::stol(spec);
            return {v, v};
        }
        return {std::stol(spec.substr(0, dots)), std::stol(spec.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ConfigParseError("bad n specification: " + spec);
    }
}

json variance_row_json(const VarianceReport& rep) {
    json row;
    row["q"] = rep.q;
    row["p"] = rep.p;
    row["r"] = rep.r;
    row["model"] = rep.model;
    row["k"] = rep.k;
    row["n"] = rep.n;
    row["Q"] = rep.Q.text();
    row["phi"] = rep.phi.get_str();
    row["R"] = rep.R;
    row["expectation"] = format_rational(rep.expectation);
    row["variance"] = format_rational(rep.variance);
    row["normalized"] = format_rational(rep.normalized);
    row["predicted"] = rep.predicted.get_str();
    row["deviation"] = format_double(rep.deviation);
    row["hypothesis_ok"] = rep.hypothesis_ok;
    row["n_in_range"] = rep.n_in_range;
    row["zero_variance"] = rep.zero_variance;
    return row;
}

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact divisor-sum variances over F_q[t] and unitary matrix integrals"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "csv", out_path;
    int workers = default_workers();
    bool budget_override = false;
    app.add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (default stdout, or $FFVAR_OUT_DIR)");
    app.add_option("--workers", workers, "worker threads (default: hardware concurrency)");
    app.add_flag("--budget-override", budget_override,
                 "run past the q^n <= 1e8 desk-scale budget");

    // ---- variance ----------------------------------------------------------
    auto* variance = app.add_subcommand("variance", "variance of divisor sums over progressions");
    variance->fallthrough();
    std::string v_model = "trivial", v_q = "5", v_Q = "[0,1]", v_n = "2", v_custom_file;
    int v_k = 2;
    variance->add_option("--model", v_model)->check(CLI::IsMember({"trivial", "legendre", "custom"}));
    variance->add_option("--custom-file", v_custom_file, "custom model file (model=custom)");
    variance->add_option("--k", v_k, "divisor order k");
    variance->add_option("--q", v_q, "prime power q, or comma list for a sweep");
    variance->add_option("--Q", v_Q, "modulus: [c0,c1,...] or irred:<d>");
    variance->add_option("--n", v_n, "degree n or range a..b");

    // ---- rmt ---------------------------------------------------------------
    auto* rmt = app.add_subcommand("rmt", "unitary-group matrix integrals");
    rmt->require_subcommand(1);
    rmt->fallthrough();
    int r_k = 2, r_R = 5;
    std::string r_n = "0..10";
    uint64_t r_samples = 100000, r_seed = 1;
    double r_c = 0.5;
    auto* rmt_lattice = rmt->add_subcommand("lattice", "exact lattice-point values");
    auto* rmt_closed = rmt->add_subcommand("closed", "closed forms where the ranges apply");
    auto* rmt_mc = rmt->add_subcommand("mc", "Monte-Carlo Haar estimates");
    auto* rmt_gamma = rmt->add_subcommand("gamma", "gamma_k(c) slice integrals");
    for (auto* sc : {rmt_lattice, rmt_closed, rmt_mc, rmt_gamma}) sc->fallthrough();
    for (auto* sc : {rmt_lattice, rmt_closed, rmt_mc}) {
        sc->add_option("--k", r_k);
        sc->add_option("--R", r_R);
        sc->add_option("--n", r_n, "single n or range a..b");
    }
    rmt_mc->add_option("--samples", r_samples);
    rmt_mc->add_option("--seed", r_seed);
    rmt_gamma->add_option("--k", r_k);
    rmt_gamma->add_option("--c", r_c);
    rmt_gamma->add_option("--samples", r_samples);
    rmt_gamma->add_option("--seed", r_seed);
    rmt_gamma->add_option("--R", r_R, "also report the exact lattice route at this R");

    // ---- twist-scan --------------------------------------------------------
    auto* twist = app.add_subcommand("twist-scan", "classify characters by twisted-zero moduli");
    twist->fallthrough();
    std::string t_model = "trivial", t_q = "5", t_Q = "[0,1,1]", t_custom_file;
    twist->add_option("--model", t_model)->check(CLI::IsMember({"trivial", "legendre", "custom"}));
    twist->add_option("--custom-file", t_custom_file);
    twist->add_option("--q", t_q);
    twist->add_option("--Q", t_Q);

    // ---- divisor-table -----------------------------------------------------
    auto* dump = app.add_subcommand("divisor-table", "dump d_k values up to a degree");
    dump->fallthrough();
    std::string d_model = "trivial", d_q = "5", d_custom_file;
    int d_k = 2, d_maxdeg = 3;
    dump->add_option("--model", d_model)->check(CLI::IsMember({"trivial", "legendre", "custom"}));
    dump->add_option("--custom-file", d_custom_file);
    dump->add_option("--q", d_q);
    dump->add_option("--k", d_k);
    dump->add_option("--max-deg", d_maxdeg);

    auto* selftest = app.add_subcommand("selftest", "calibration and invariant checks");

    CLI11_PARSE(app, argc, argv);

    auto make_model = [&](const std::string& kind, const std::string& file,
                          const FieldCtx& F) -> LModel {
        if (kind == "trivial") return LModel::trivial();
        if (kind == "legendre") return LModel::legendre();
        if (file.empty()) throw ConfigParseError("model=custom needs --custom-file");
        return LModel::custom_from_file(F, file);
    };

    try {
        OutputSink sink;
        RunOptions opts;
        opts.workers = workers;
        opts.budget_override = budget_override;

        if (*selftest) {
            return run_selftest(std::cout) == 0 ? 0 : 1;
        }

        if (*variance) {
            auto qs = parse_q_list(v_q);
            auto [n_lo, n_hi] = parse_n_range(v_n);
            if (n_lo < 1 || n_hi < n_lo) throw ConfigParseError("need 1 <= n_lo <= n_hi");
            sink.open(out_path, "variance", format);
            KV config{{"command", "variance"}, {"model", v_model},   {"k", std::to_string(v_k)},
                      {"q", v_q},              {"Q_template", v_Q},  {"n", v_n},
                      {"workers", std::to_string(workers)},
                      {"budget_override", budget_override ? "1" : "0"}};
            std::vector<std::string> rows;
            json jrows = json::array();
            size_t ok_rows = 0;
            std::string first_error;
            for (uint64_t q : qs) {
                // per-q failures are recorded and the sweep continues
                try {
                    auto [p, r] = prime_power_split(q);
                    FieldCtx F(p, r);
                    config.emplace_back("modulus_q" + std::to_string(q), F.modulus_text());
                    LModel model = make_model(v_model, v_custom_file, F);
                    Poly Q = resolve_q_template(F, v_Q);
                    CoeffTable ct(F, model, int(n_hi), TableOptions{budget_override});
                    DivisorTable dk(v_k, ct);
                    ResidueSystem rs(F, Q);
                    for (long n = n_lo; n <= n_hi; ++n) {
                        VarianceReport rep =
                            variance_report(progression_sums(dk, rs, int(n), opts), rs, model);
                        rows.push_back(variance_csv_row(rep));
                        jrows.push_back(variance_row_json(rep));
                        ++ok_rows;
                    }
                } catch (const Error& e) {
                    std::string msg = e.code() + std::string(": ") + e.what();
                    if (first_error.empty()) first_error = msg;
                    config.emplace_back("error_q" + std::to_string(q), msg);
                    json row;
                    row["q"] = q;
                    row["error"] = msg;
                    jrows.push_back(row);
                }
            }
            if (ok_rows == 0 && !first_error.empty()) throw ConfigParseError(first_error);
            if (format == "csv")
                emit_csv(sink, config, kVarianceCsvHeader, rows);
            else
                emit_json(sink, config, jrows);
            return 0;
        }

        if (*rmt) {
            auto [n_lo, n_hi] = parse_n_range(r_n);
            KV config{{"command", "rmt"}, {"k", std::to_string(r_k)}, {"R", std::to_string(r_R)}};
            std::vector<std::string> rows;
            json jrows = json::array();
            auto push_row = [&](long n, const std::string& lattice, const std::string& closed,
                                const std::string& mc, const std::string& se,
                                const std::string& samples, const std::string& seed) {
                rows.push_back(std::to_string(r_k) + "," + std::to_string(n) + "," +
                               std::to_string(r_R) + "," + lattice + "," + closed + "," + mc +
                               "," + se + "," + samples + "," + seed);
                json row;
                row["k"] = r_k;
                row["n"] = n;
                row["R"] = r_R;
                row["lattice"] = lattice;
                row["closed_form"] = closed;
                row["mc_estimate"] = mc;
                row["mc_stderr"] = se;
                row["mc_samples"] = samples;
                row["seed"] = seed;
                jrows.push_back(row);
            };
            if (*rmt_gamma) {
                config.emplace_back("c", format_double(r_c));
                config.emplace_back("samples", std::to_string(r_samples));
                config.emplace_back("seed", std::to_string(r_seed));
                sink.open(out_path, "rmt-gamma", format);
                McEstimate est = gamma_mc(r_k, r_c, r_samples, r_seed, workers);
                std::string lattice_cell = "NA";
                if (rmt_gamma->count("--R")) {
                    mpq_class g = gamma_from_lattice(r_k, r_c, r_R);
                    lattice_cell = format_rational(g);
                }
                push_row(std::lround(r_c * r_R), lattice_cell, "NA", format_double(est.estimate),
                         format_double(est.std_error), std::to_string(est.samples),
                         std::to_string(est.seed));
            } else {
                sink.open(out_path, "rmt", format);
                config.emplace_back("n", r_n);
                if (*rmt_mc) {
                    config.emplace_back("samples", std::to_string(r_samples));
                    config.emplace_back("seed", std::to_string(r_seed));
                }
                for (long n = n_lo; n <= n_hi; ++n) {
                    std::string lattice = lattice_count(r_k, n, r_R).get_str();
                    auto cf = closed_form(r_k, n, r_R);
                    std::string closed = cf ? cf->get_str() : "NA";
                    std::string mc = "NA", se = "NA", samples = "0", seed = "0";
                    if (*rmt_mc) {
                        McEstimate est = haar_mc_integral(r_k, n, r_R, r_samples, r_seed, workers);
                        mc = format_double(est.estimate);
                        se = format_double(est.std_error);
                        samples = std::to_string(est.samples);
                        seed = std::to_string(est.seed);
                    }
                    push_row(n, lattice, closed, mc, se, samples, seed);
                }
            }
            if (format == "csv")
                emit_csv(sink, config, kRmtCsvHeader, rows);
            else
                emit_json(sink, config, jrows);
            return 0;
        }

        if (*twist) {
            uint64_t q = parse_q_list(t_q).at(0);
            auto [p, r] = prime_power_split(q);
            FieldCtx F(p, r);
            LModel model = make_model(t_model, t_custom_file, F);
            Poly Q = resolve_q_template(F, t_Q);
            int R = model.degree_R(Q);
            CoeffTable ct(F, model, R + 3, TableOptions{budget_override});
            ResidueSystem rs(F, Q);
            CharacterGroup G(rs);
            TwistScanner scanner(ct, rs, G, R + 3);
            sink.open(out_path, "twist-scan", format);
            KV config{{"command", "twist-scan"},
                      {"model", t_model},
                      {"q", std::to_string(q)},
                      {"modulus", F.modulus_text()},
                      {"Q", Q.text()},
                      {"R", std::to_string(R)}};
            std::vector<std::string> rows;
            json jrows = json::array();
            for (uint64_t ord = 1; ord < G.size(); ++ord) {
                auto expo = G.expo_from_ordinal(ord);
                std::string expo_txt;
                for (size_t i = 0; i < expo.size(); ++i)
                    expo_txt += (i ? ";" : "") + std::to_string(expo[i]);
                std::string cls, tail, moduli;
                try {
                    ClassifyResult res = classify_character(scanner, model, expo, Q);
                    cls = res.good_like ? "good-like" : "bad-like";
                    tail = format_double(res.max_tail);
                    for (size_t i = 0; i < res.scaled_moduli.size(); ++i)
                        moduli += (i ? ";" : "") + format_double(res.scaled_moduli[i]);
                } catch (const TruncationFailureError&) {
                    cls = "truncation-failure";
                    tail = "nan";
                }
                rows.push_back(expo_txt + "," + tail + "," + moduli + "," + cls);
                json row;
                row["chi"] = expo_txt;
                row["max_tail"] = tail;
                row["scaled_root_moduli"] = moduli;
                row["class"] = cls;
                jrows.push_back(row);
            }
            if (format == "csv")
                emit_csv(sink, config, "chi,max_tail,scaled_root_moduli,class", rows);
            else
                emit_json(sink, config, jrows);
            return 0;
        }

        if (*dump) {
            uint64_t q = parse_q_list(d_q).at(0);
            auto [p, r] = prime_power_split(q);
            FieldCtx F(p, r);
            LModel model = make_model(d_model, d_custom_file, F);
            CoeffTable ct(F, model, d_maxdeg, TableOptions{budget_override});
            DivisorTable dk(d_k, ct);
            sink.open(out_path, "divisor-table", format);
            KV config{{"command", "divisor-table"}, {"model", d_model},
                      {"q", std::to_string(q)},     {"modulus", F.modulus_text()},
                      {"k", std::to_string(d_k)},   {"max_deg", std::to_string(d_maxdeg)}};
            std::vector<std::string> rows;
            json jrows = json::array();
            for (int deg = 0; deg <= d_maxdeg; ++deg)
                for_each_monic(F, deg, [&](const Poly& f, uint64_t idx) {
                    rows.push_back(std::to_string(deg) + "," + std::to_string(idx) + "," +
                                   csv_quote(f.text()) + "," + dk.at(deg, idx).get_str());
                    json row;
                    row["deg"] = deg;
                    row["index"] = idx;
                    row["f"] = f.text();
                    row["d_k"] = dk.at(deg, idx).get_str();
                    jrows.push_back(row);
                });
            if (format == "csv")
                emit_csv(sink, config, "deg,index,f,d_k", rows);
            else
                emit_json(sink, config, jrows);
            return 0;
        }
    } catch (const Error& e) {
        json err;
        err["error"]["code"] = e.code();
        err["error"]["module"] = e.subsystem();
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err;
        err["error"]["code"] = "Internal";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 0;
}
