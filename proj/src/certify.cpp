#include "pixelent/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pixelent {

namespace {

using nlohmann::json;

bool is_odd_prime(int d) {
    if (d < 3 || d % 2 == 0) return false;
    for (int f = 3; f * f <= d; f += 2)
        if (d % f == 0) return false;
    return true;
}

struct SettingsIndex {
    int d = 0;
    std::optional<std::size_t> standard;
    std::map<int, std::size_t> wf;  // k -> position in the counts vector
};

SettingsIndex index_settings(const std::vector<CountMatrix>& counts) {
    if (counts.empty())
        throw std::invalid_argument("certify: no count matrices supplied");
    SettingsIndex idx;
    idx.d = counts.front().d;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const CountMatrix& c = counts[i];
        c.validate();
        if (c.d != idx.d)
            throw std::invalid_argument("certify: inconsistent dimensions across settings");
        if (c.total() == 0)
            throw std::invalid_argument("certify: setting " + std::to_string(i) +
                                        " has zero total counts");
        if (!c.basis_a.is_wf() && !c.basis_b.is_wf()) {
            idx.standard = i;
            continue;
        }
        if (c.basis_a.is_wf() && c.basis_b.is_wf() && c.basis_a.k == c.basis_b.k) {
            if (!c.basis_b.conjugate)
                throw std::invalid_argument(
                    "certify: WF setting k=" + std::to_string(c.basis_a.k) +
                    " must declare arm B conjugated (|m~ m~*> convention)");
            if (c.basis_a.k < 0 || c.basis_a.k >= idx.d)
                throw std::invalid_argument("certify: WF index k out of range");
            if (idx.wf.count(c.basis_a.k))
                throw std::invalid_argument("certify: duplicate WF setting k=" +
                                            std::to_string(c.basis_a.k));
            idx.wf[c.basis_a.k] = i;
            continue;
        }
        throw std::invalid_argument(
            "certify: unsupported basis pairing (" + to_string(c.basis_a) + ", " +
            to_string(c.basis_b) + "); expected matched standard or WF settings");
    }
    return idx;
}

std::pair<int, int> pick_wf_pair(const SettingsIndex& idx,
                                 const CertificationOptions& options) {
    if (options.wf_pair) {
        const auto [k, kp] = *options.wf_pair;
        if (!idx.wf.count(k) || !idx.wf.count(kp))
            throw std::invalid_argument("certify: requested WF pair not in the data");
        if (!wf_pair_unbiased(k, kp, idx.d))
            throw std::invalid_argument("certify: requested WF bases are not unbiased");
        return {k, kp};
    }
    for (auto a = idx.wf.begin(); a != idx.wf.end(); ++a)
        for (auto b = std::next(a); b != idx.wf.end(); ++b)
            if (wf_pair_unbiased(a->first, b->first, idx.d))
                return {a->first, b->first};
    throw std::invalid_argument(
        "certify: insufficient basis coverage (need two unbiased WF settings, "
        "a standard+WF pair, or the complete MUB set)");
}

enum class Method { all_mub_exact, two_wf, standard_wf };

// The estimator evaluated on observed counts and on every bootstrap
// resample; returns (fidelity, eof raw, eof clamped).
struct Estimates {
    double fidelity = 0.0;
    double eof_raw = 0.0;
    double eof = 0.0;
};

}  // namespace

CertificationReport certify_counts(const std::vector<CountMatrix>& counts,
                                   const CertificationOptions& options) {
    const SettingsIndex idx = index_settings(counts);
    const int d = idx.d;

    Method method;
    std::pair<int, int> pair{0, 0};
    if (idx.standard && static_cast<int>(idx.wf.size()) == d && is_odd_prime(d)) {
        method = Method::all_mub_exact;
        pair = pick_wf_pair(idx, options);  // EoF still uses two WF bases
    } else if (idx.wf.size() >= 2) {
        method = Method::two_wf;
        pair = pick_wf_pair(idx, options);
    } else if (idx.standard && idx.wf.size() == 1) {
        method = Method::standard_wf;
        pair = {idx.wf.begin()->first, idx.wf.begin()->first};
    } else {
        throw std::invalid_argument(
            "certify: insufficient basis coverage (need two unbiased WF settings, "
            "a standard+WF pair, or the complete MUB set)");
    }

    const auto estimate = [&, method, pair](const std::vector<CountMatrix>& cs) {
        Estimates est;
        FidelityResult fr;
        switch (method) {
            case Method::all_mub_exact: {
                std::vector<Eigen::MatrixXd> wf_probs;
                for (int k = 0; k < d; ++k)
                    wf_probs.push_back(counts_to_probs(cs[idx.wf.at(k)]));
                fr = fidelity_exact_all_mubs(counts_to_probs(cs[*idx.standard]),
                                             wf_probs, d);
                break;
            }
            case Method::two_wf:
                fr = fidelity_lower_bound_two_wf(counts_to_probs(cs[idx.wf.at(pair.first)]),
                                                 counts_to_probs(cs[idx.wf.at(pair.second)]),
                                                 pair.first, pair.second, d);
                break;
            case Method::standard_wf:
                fr = fidelity_lower_bound_standard_wf(
                    counts_to_probs(cs[*idx.standard]),
                    counts_to_probs(cs[idx.wf.at(pair.first)]), pair.first, d);
                break;
        }
        est.fidelity = fr.value;

        const Eigen::MatrixXd eof_1 =
            method == Method::standard_wf
                ? counts_to_probs(cs[*idx.standard])
                : counts_to_probs(cs[idx.wf.at(pair.first)]);
        const Eigen::MatrixXd eof_2 =
            method == Method::standard_wf
                ? counts_to_probs(cs[idx.wf.at(pair.first)])
                : counts_to_probs(cs[idx.wf.at(pair.second)]);
        const EofBound eof =
            eof_bound(eof_1, eof_2, d, options.transpose_eof_marginal);
        est.eof_raw = eof.raw;
        est.eof = eof.value;
        return est;
    };

    const Estimates observed = estimate(counts);

    const BootstrapResult fid_boot = poisson_bootstrap(
        counts,
        [&](const std::vector<CountMatrix>& cs) { return estimate(cs).fidelity; },
        options.n_resamples, options.seed);
    const BootstrapResult eof_boot = poisson_bootstrap(
        counts, [&](const std::vector<CountMatrix>& cs) { return estimate(cs).eof; },
        options.n_resamples, options.seed);

    CertificationReport report;
    report.d = d;
    report.n_resamples = options.n_resamples;
    report.seed = options.seed;
    switch (method) {
        case Method::all_mub_exact: {
            report.method = "all-mub-exact";
            report.fidelity.kind = FidelityResult::Kind::exact;
            report.fidelity.bases_used.push_back(BasisSpec::standard_basis());
            for (int k = 0; k < d; ++k)
                report.fidelity.bases_used.push_back(BasisSpec::wf(k));
            break;
        }
        case Method::two_wf:
            report.method = "two-wf";
            report.fidelity.kind = FidelityResult::Kind::lower_bound;
            report.fidelity.bases_used = {BasisSpec::wf(pair.first),
                                          BasisSpec::wf(pair.second)};
            break;
        case Method::standard_wf:
            report.method = "standard-wf";
            report.fidelity.kind = FidelityResult::Kind::lower_bound;
            report.fidelity.bases_used = {BasisSpec::standard_basis(),
                                          BasisSpec::wf(pair.first)};
            break;
    }
    report.fidelity.value = observed.fidelity;
    report.fidelity_sigma = fid_boot.std;

    const TargetState target = TargetState::maximally_entangled(d);
    report.d_ent = certify_dimension(observed.fidelity, target);
    report.d_ent_low = certify_dimension(observed.fidelity - fid_boot.std, target);
    report.d_ent_high = certify_dimension(observed.fidelity + fid_boot.std, target);

    report.eof_ebits = observed.eof;
    report.eof_raw = observed.eof_raw;
    report.eof_sigma = eof_boot.std;
    if (method == Method::standard_wf)
        report.eof_bases = {BasisSpec::standard_basis(), BasisSpec::wf(pair.first)};
    else
        report.eof_bases = {BasisSpec::wf(pair.first), BasisSpec::wf(pair.second)};
    return report;
}

void write_report_json(const std::filesystem::path& path,
                       const CertificationReport& report) {
    json doc;
    doc["d"] = report.d;
    doc["method"] = report.method;
    doc["fidelity"] = {
        {"value", report.fidelity.value},
        {"kind",
         report.fidelity.kind == FidelityResult::Kind::exact ? "exact" : "lower_bound"},
        {"sigma", report.fidelity_sigma}};
    json bases = json::array();
    for (const auto& b : report.fidelity.bases_used) bases.push_back(to_string(b));
    doc["fidelity"]["bases"] = std::move(bases);
    doc["d_ent"] = {{"value", report.d_ent},
                    {"at_minus_sigma", report.d_ent_low},
                    {"at_plus_sigma", report.d_ent_high}};
    doc["eof"] = {{"ebits", report.eof_ebits},
                  {"raw", report.eof_raw},
                  {"sigma", report.eof_sigma}};
    json eof_bases = json::array();
    for (const auto& b : report.eof_bases) eof_bases.push_back(to_string(b));
    doc["eof"]["bases"] = std::move(eof_bases);
    doc["bootstrap"] = {{"n_resamples", report.n_resamples}, {"seed", report.seed}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

CertificationReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
        CertificationReport r;
        r.d = doc.at("d").get<int>();
        r.method = doc.at("method").get<std::string>();
        r.fidelity.value = doc.at("fidelity").at("value").get<double>();
        r.fidelity.kind = doc.at("fidelity").at("kind").get<std::string>() == "exact"
                              ? FidelityResult::Kind::exact
                              : FidelityResult::Kind::lower_bound;
        for (const auto& b : doc.at("fidelity").at("bases"))
            r.fidelity.bases_used.push_back(parse_basis_spec(b.get<std::string>()));
        r.fidelity_sigma = doc.at("fidelity").at("sigma").get<double>();
        r.d_ent = doc.at("d_ent").at("value").get<int>();
        r.d_ent_low = doc.at("d_ent").at("at_minus_sigma").get<int>();
        r.d_ent_high = doc.at("d_ent").at("at_plus_sigma").get<int>();
        r.eof_ebits = doc.at("eof").at("ebits").get<double>();
        r.eof_raw = doc.at("eof").at("raw").get<double>();
        r.eof_sigma = doc.at("eof").at("sigma").get<double>();
        for (const auto& b : doc.at("eof").at("bases"))
            r.eof_bases.push_back(parse_basis_spec(b.get<std::string>()));
        r.n_resamples = doc.at("bootstrap").at("n_resamples").get<int>();
        r.seed = doc.at("bootstrap").at("seed").get<std::uint64_t>();
        return r;
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": bad report: " + e.what());
    }
}

std::string format_report(const CertificationReport& report) {
    std::ostringstream out;
    out.precision(4);
    out << "certification (d = " << report.d << ", method: " << report.method
        << ")\n";
    out << "  fidelity "
        << (report.fidelity.kind == FidelityResult::Kind::exact ? "(exact)      "
                                                                : "(lower bound)")
        << " : " << report.fidelity.value << " +/- " << report.fidelity_sigma
        << "  [bases:";
    for (const auto& b : report.fidelity.bases_used) out << ' ' << to_string(b);
    out << "]\n";
    out << "  d_ent                  : " << report.d_ent << "  (interval "
        << report.d_ent_low << " .. " << report.d_ent_high << ")\n";
    out << "  EoF (ebits)            : " << report.eof_ebits << " +/- "
        << report.eof_sigma << "  (raw " << report.eof_raw << ", max "
        << std::log2(static_cast<double>(report.d)) << ")\n";
    out << "  bootstrap              : " << report.n_resamples
        << " resamples, seed " << report.seed << "\n";
    return out.str();
}

}  // namespace pixelent
