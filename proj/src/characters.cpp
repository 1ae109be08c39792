#include "ffvar/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ffvar {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<uint64_t> prime_divisors(uint64_t n) {
    std::vector<uint64_t> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace

CharacterGroup::CharacterGroup(const ResidueSystem& rs) {
    const FieldCtx& F = rs.ctx();
    const Poly& Q = rs.Q();
    phi_ = rs.phi();

    for (const auto& [pi, e] : factorize_trial(Q).parts) {
        (void)e;
        Component comp;
        comp.pi = pi;
        ResidueField Fp(F, pi);
        comp.order = Fp.size() - 1;
        // smallest-index generator of the cyclic group F_pi^*
        auto divs = prime_divisors(comp.order);
        for (uint64_t g = 1; g < Fp.size(); ++g) {
            bool ok = true;
            for (uint64_t ell : divs)
                if (Fp.pow(g, comp.order / ell) == 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                comp.generator = g;
                break;
            }
        }
        comp.dlog.assign(Fp.size(), 0);
        uint64_t acc = 1;
        for (uint64_t j = 0; j < comp.order; ++j) {
            comp.dlog[acc] = uint32_t(j);
            acc = Fp.mul(acc, comp.generator);
        }
        comps_.push_back(std::move(comp));
    }

    lcm_order_ = 1;
    for (const auto& c : comps_) lcm_order_ = std::lcm(lcm_order_, c.order);
    if (lcm_order_ > (uint64_t(1) << 22))
        throw BudgetExceededError("character group exponent " + std::to_string(lcm_order_) +
                                  " is beyond desk scale");
    weight_.resize(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i) weight_[i] = lcm_order_ / comps_[i].order;

    roots_.resize(lcm_order_);
    for (uint64_t j = 0; j < lcm_order_; ++j) {
        double a = kTwoPi * double(j) / double(lcm_order_);
        roots_[j] = std::complex<double>(std::cos(a), std::sin(a));
    }

    unit_dlogs_.assign(rs.phi(), std::vector<uint32_t>(comps_.size(), 0));
    for (size_t i = 0; i < comps_.size(); ++i) {
        ResidueField Fp(F, comps_[i].pi);
        for (size_t pos = 0; pos < rs.phi(); ++pos)
            unit_dlogs_[pos][i] = comps_[i].dlog[Fp.from_poly(rs.unit(pos))];
    }
}

std::vector<uint32_t> CharacterGroup::expo_from_ordinal(uint64_t ordinal) const {
    std::vector<uint32_t> e(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i) {
        e[i] = uint32_t(ordinal % comps_[i].order);
        ordinal /= comps_[i].order;
    }
    return e;
}

uint64_t CharacterGroup::ordinal_from_expo(const std::vector<uint32_t>& expo) const {
    uint64_t ord = 0;
    for (size_t i = comps_.size(); i-- > 0;) ord = ord * comps_[i].order + expo[i];
    return ord;
}

bool CharacterGroup::is_trivial(const std::vector<uint32_t>& expo) const {
    for (uint32_t e : expo)
        if (e != 0) return false;
    return true;
}

std::vector<uint32_t> CharacterGroup::conjugate(const std::vector<uint32_t>& expo) const {
    std::vector<uint32_t> out(expo.size());
    for (size_t i = 0; i < expo.size(); ++i)
        out[i] = expo[i] == 0 ? 0 : uint32_t(comps_[i].order - expo[i]);
    return out;
}

std::complex<double> CharacterGroup::value(const std::vector<uint32_t>& expo,
                                           size_t unit_pos) const {
    const auto& dlogs = unit_dlogs_[unit_pos];
    uint64_t acc = 0;
    for (size_t i = 0; i < comps_.size(); ++i)
        acc = (acc + uint64_t(expo[i]) * dlogs[i] % lcm_order_ * weight_[i]) % lcm_order_;
    return roots_[acc];
}

TwistScanner::TwistScanner(const CoeffTable& coeffs, const ResidueSystem& rs,
                           const CharacterGroup& group, int n_max)
    : ct_(&coeffs), rs_(&rs), group_(&group), nmax_(n_max) {
    if (n_max < 0 || n_max > coeffs.max_degree())
        throw std::invalid_argument("TwistScanner: n_max outside coefficient table range");
    const FieldCtx& F = coeffs.ctx();
    const Poly& Q = rs.Q();
    class_sums_.assign(size_t(n_max) + 1, std::vector<double>(rs.phi(), 0.0));
    std::vector<mpz_class> acc(rs.phi());
    for (int d = 0; d <= n_max; ++d) {
        std::fill(acc.begin(), acc.end(), mpz_class(0));
        for_each_monic(F, d, [&](const Poly& f, uint64_t idx) {
            Poly rem = divrem(f, Q).second;
            int64_t pos = rs.unit_pos(rem.residue_index(Q.degree()));
            if (pos >= 0) acc[size_t(pos)] += ct_->at(d, idx);
        });
        for (size_t i = 0; i < acc.size(); ++i) class_sums_[size_t(d)][i] = acc[i].get_d();
    }
}

std::vector<std::complex<double>> TwistScanner::coeffs(const std::vector<uint32_t>& expo) const {
    std::vector<std::complex<double>> out(size_t(nmax_) + 1);
    for (int d = 0; d <= nmax_; ++d) {
        std::complex<double> s(0, 0);
        const auto& w = class_sums_[size_t(d)];
        for (size_t pos = 0; pos < w.size(); ++pos)
            if (w[pos] != 0.0) s += group_->value(expo, pos) * w[pos];
        out[size_t(d)] = s;
    }
    return out;
}

std::vector<std::complex<double>> twisted_coeffs(const FieldCtx& F, const LModel& model,
                                                 const std::vector<uint32_t>& expo, int n_max,
                                                 const Poly& Q) {
    CoeffTable ct(F, model, n_max);
    ResidueSystem rs(F, Q);
    CharacterGroup group(rs);
    TwistScanner scanner(ct, rs, group, n_max);
    return scanner.coeffs(expo);
}

std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs) {
    using cplx = std::complex<double>;
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    const size_t deg = coeffs.size() - 1;
    for (auto& c : coeffs) c /= coeffs.back(); // monic

    std::vector<cplx> z(deg);
    cplx seed(0.4, 0.9);
    cplx w(1, 0);
    for (size_t j = 0; j < deg; ++j) {
        w *= seed;
        z[j] = w;
    }
    for (int iter = 0; iter < 600; ++iter) {
        double worst = 0;
        for (size_t j = 0; j < deg; ++j) {
            cplx num(0, 0);
            for (size_t i = coeffs.size(); i-- > 0;) num = num * z[j] + coeffs[i];
            cplx den(1, 0);
            for (size_t m = 0; m < deg; ++m)
                if (m != j) den *= z[j] - z[m];
            if (std::abs(den) == 0.0) {
                z[j] += cplx(1e-8, 1e-8);
                worst = 1;
                continue;
            }
            cplx step = num / den;
            z[j] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

ClassifyResult classify_character(const TwistScanner& scanner, const LModel& model,
                                  const std::vector<uint32_t>& expo, const Poly& Q) {
    if (scanner.group().is_trivial(expo))
        throw std::invalid_argument("classify_character: the trivial character is excluded");
    const int R = model.degree_R(Q);
    if (scanner.n_max() < R + 3)
        throw std::invalid_argument("classify_character: scanner must reach degree R+3");

    auto c = scanner.coeffs(expo);
    double scale = 0;
    for (int n = 0; n <= R; ++n) scale = std::max(scale, std::abs(c[size_t(n)]));
    scale = std::max(scale, 1.0);

    ClassifyResult out;
    for (int n = R + 1; n <= R + 3; ++n)
        out.max_tail = std::max(out.max_tail, std::abs(c[size_t(n)]) / scale);
    if (out.max_tail > 1e-6)
        throw TruncationFailureError(
            "coefficients beyond degree R are non-negligible (tail ratio " +
            std::to_string(out.max_tail) + "); mixed/heavy twist or wrong R");

    std::vector<std::complex<double>> poly(c.begin(), c.begin() + R + 1);
    while (!poly.empty() && std::abs(poly.back()) < 1e-9 * scale) poly.pop_back();
    out.effective_degree = poly.empty() ? 0 : int(poly.size()) - 1;

    const double unitary = std::pow(double(scanner.residues().ctx().q()),
                                    0.5 * (1.0 + model.weight()));
    out.good_like = true;
    for (const auto& root : polynomial_roots(poly)) {
        double m = std::abs(root) * unitary;
        out.scaled_moduli.push_back(m);
        if (std::fabs(m - 1.0) > 1e-4) out.good_like = false;
    }
    // A polynomial of degree < R cannot be the characteristic polynomial of
    // an R x R unitary class.
    if (out.effective_degree != R) out.good_like = false;
    std::sort(out.scaled_moduli.begin(), out.scaled_moduli.end());
    return out;
}

double variance_via_characters(const TwistScanner& scanner, int k, int n) {
    if (k < 1) throw std::invalid_argument("variance_via_characters: k must be >= 1");
    if (n < 1 || n > scanner.n_max())
        throw std::invalid_argument("variance_via_characters: n outside scanner range");
    const CharacterGroup& G = scanner.group();
    const double phi = double(G.size());
    double acc = 0;
    for (uint64_t ord = 1; ord < G.size(); ++ord) {
        auto expo = G.expo_from_ordinal(ord);
        auto c1 = scanner.coeffs(expo);
        // c_{k,n} by k-fold convolution of the degree-<=n prefix
        std::vector<std::complex<double>> cur(c1.begin(), c1.begin() + n + 1);
        std::vector<std::complex<double>> base = cur;
        for (int rep = 1; rep < k; ++rep) {
            std::vector<std::complex<double>> next(size_t(n) + 1);
            for (int i = 0; i <= n; ++i)
                for (int j = 0; i + j <= n; ++j) next[size_t(i + j)] += cur[size_t(i)] * base[size_t(j)];
            cur = std::move(next);
        }
        acc += std::norm(cur[size_t(n)]);
    }
    return acc / (phi * phi);
}

double variance_via_characters(const FieldCtx& F, const LModel& model, int k, int n,
                               const Poly& Q) {
    CoeffTable ct(F, model, n);
    ResidueSystem rs(F, Q);
    CharacterGroup group(rs);
    TwistScanner scanner(ct, rs, group, n);
    return variance_via_characters(scanner, k, n);
}

} // namespace ffvar
