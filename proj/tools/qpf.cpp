// Command-line front end: table reproduction, probability evaluation,
// seeded simulation, factoring benchmarks, scheme detection and the
// exhaustive group audit.
#include <CLI11.hpp>
#include <json.hpp>

#include "qpf/asymptotics.hpp"
#include "qpf/factor_bench.hpp"
#include "qpf/group_audit.hpp"
#include "qpf/numthy.hpp"
#include "qpf/period_prob.hpp"
#include "qpf/sampler.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using qpf::numthy::Int;
using qpf::numthy::SemiprimeSpec;
using qpf::period::PeriodSpec;
using qpf::period::RegisterSpec;
namespace as = qpf::asymptotics;
namespace au = qpf::audit;
namespace fb = qpf::bench;
namespace nt = qpf::numthy;
namespace pp = qpf::period;
namespace sm = qpf::sampler;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitResourceCap = 3;

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json envelope(const std::string& command, json parameters, json results,
              std::optional<std::uint64_t> seed = std::nullopt) {
    json env;
    env["command"] = command;
    env["parameters"] = std::move(parameters);
    env["results"] = std::move(results);
    env["tool_version"] = kVersion;
    if (seed) {
        env["seed"] = *seed;
        env["rng_id"] = sm::kRngId;
    }
    return env;
}

void emit_json(const json& env) { std::printf("%s\n", env.dump(2).c_str()); }

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// splits N into its two odd prime factors, or reports why it cannot
SemiprimeSpec resolve_spec(const Int& n, const std::optional<Int>& p,
                           const std::optional<Int>& q) {
    if (p && q) {
        if (*p * *q != n) {
            throw PreconditionError("p * q does not equal N");
        }
        return SemiprimeSpec::make(*p, *q);
    }
    if (n > Int("1000000000000")) {
        throw PreconditionError("supply --p and --q: N too large to factor here");
    }
    for (Int d = 3; d * d <= n; d += 2) {
        if (n % d == 0) {
            return SemiprimeSpec::make(d, n / d);
        }
    }
    throw PreconditionError("N is not an odd square-free semiprime");
}

int cmd_prob(std::int64_t r, int q, std::optional<std::int64_t> k, bool oracle, bool averaged,
             bool csv) {
    const PeriodSpec spec = PeriodSpec::from_r(r);
    if (q < pp::q_min(spec)) {
        throw PreconditionError("q below q_min = " + std::to_string(pp::q_min(spec)) +
                                ": the register 2^m must be at least 2r");
    }
    const RegisterSpec reg = pp::register_for(spec, q);
    json results;
    results["r"] = r;
    results["r_o"] = spec.r_o;
    results["n_r"] = spec.n_r;
    results["q"] = q;
    results["m"] = reg.m;
    results["q_min"] = pp::q_min(spec);
    double exact;
    if (averaged || !k) {
        exact = pp::p_tot_averaged(reg);
        results["averaged"] = true;
    } else {
        exact = pp::p_tot_exact(*k, reg);
        results["k"] = *k;
    }
    results["exact"] = exact;
    if (oracle) {
        if (reg.m > pp::kOracleMaxM) {
            throw ResourceCapError("oracle requires m <= 26");
        }
        if (averaged || !k) {
            throw PreconditionError("--oracle needs a specific --k");
        }
        results["oracle"] = pp::p_tot_oracle(*k, reg);
    }
    results["asymptotic"] = as::p_asym(spec, q);
    results["limit"] = as::p_inf(q);
    json params = {{"r", r}, {"q", q}};
    if (k) params["k"] = *k;
    const json env = envelope("prob", params, results);
    if (csv) {
        std::printf("field,value\n");
        for (const auto& [key, value] : results.items()) {
            std::printf("%s,%s\n", key.c_str(), value.dump().c_str());
        }
    } else {
        emit_json(env);
    }
    return kExitOk;
}

int cmd_table(const std::string& which, bool csv) {
    json results;
    std::vector<std::string> csv_lines;
    if (which == "qc2") {
        // column precision mirrors the reference table
        csv_lines.push_back("r_o,q0,q1,q2");
        json rows = json::array();
        for (std::int64_t r_o = 3; r_o <= 15; r_o += 2) {
            const PeriodSpec spec = PeriodSpec::from_r(r_o);
            const double p0 = as::p_asym(spec, 0);
            const double p1 = as::p_asym(spec, 1);
            const double p2 = as::p_asym(spec, 2);
            rows.push_back({{"r_o", r_o}, {"q0", p0}, {"q1", p1}, {"q2", p2}});
            csv_lines.push_back(std::to_string(r_o) + "," + fmt(p0, 4) + "," + fmt(p1, 7) +
                                "," + fmt(p2, 8));
        }
        rows.push_back({{"r_o", "inf"},
                        {"q0", as::p_inf(0)},
                        {"q1", as::p_inf(1)},
                        {"q2", as::p_inf(2)}});
        csv_lines.push_back("inf," + fmt(as::p_inf(0), 4) + "," + fmt(as::p_inf(1), 7) + "," +
                            fmt(as::p_inf(2), 8));
        results["rows"] = rows;
    } else if (which == "qc3") {
        csv_lines.push_back("r_o,d_minus2");
        json rows = json::array();
        for (std::int64_t r_o = 3; r_o <= 31; r_o += 2) {
            const double d = as::scaled_deviation(PeriodSpec::from_r(r_o), -2);
            rows.push_back({{"r_o", r_o}, {"d_minus2", d}});
            csv_lines.push_back(std::to_string(r_o) + "," + fmt(d, 4));
        }
        json limits = json::array();
        for (unsigned nu : {1u, 3u, 5u, 7u}) {
            // limit of the residue four-cycle: sinc^2(1/8) (1 - nu/4)
            const double s = as::sinc(0.125);
            const double limit = s * s * (1.0 - static_cast<double>(nu) / 4.0);
            limits.push_back({{"nu", nu}, {"limit", limit}});
            csv_lines.push_back("limit_nu" + std::to_string(nu) + "," + fmt(limit, 4));
        }
        results["rows"] = rows;
        results["limits"] = limits;
    } else if (which == "fig1") {
        csv_lines.push_back("q,p_inf");
        json rows = json::array();
        for (const auto& [q, p] : as::fig1_series(-4.0, 4.0, 0.05)) {
            rows.push_back({{"q", q}, {"p_inf", p}});
            csv_lines.push_back(fmt(q, 2) + "," + fmt(p, 8));
        }
        json markers = json::array();
        for (int q = -4; q <= 4; ++q) {
            markers.push_back({{"q", q}, {"p_inf", as::p_inf(q)}});
        }
        results["rows"] = rows;
        results["markers"] = markers;
    } else if (which == "fig3") {
        csv_lines.push_back("r_o,q,p,p_limit");
        json rows = json::array();
        for (std::int64_t r_o = 3; r_o <= 31; r_o += 2) {
            const PeriodSpec spec = PeriodSpec::from_r(r_o);
            for (int q = pp::q_min(spec); q <= -1; ++q) {
                const double p = as::p_asym(spec, q);
                rows.push_back({{"r_o", r_o}, {"q", q}, {"p", p}, {"p_limit", as::p_inf(q)}});
                csv_lines.push_back(std::to_string(r_o) + "," + std::to_string(q) + "," +
                                    fmt(p, 6) + "," + fmt(as::p_inf(q), 6));
            }
        }
        results["rows"] = rows;
    } else {
        throw PreconditionError("unknown table: " + which);
    }
    if (csv) {
        for (const std::string& line : csv_lines) {
            std::printf("%s\n", line.c_str());
        }
    } else {
        emit_json(envelope("table", {{"which", which}}, results));
    }
    return kExitOk;
}

int cmd_simulate(std::int64_t r, int q, std::uint64_t trials, std::uint64_t seed, bool csv) {
    const PeriodSpec spec = PeriodSpec::from_r(r);
    if (q < pp::q_min(spec)) {
        throw PreconditionError("q below q_min = " + std::to_string(pp::q_min(spec)));
    }
    const RegisterSpec reg = pp::register_for(spec, q);
    if (reg.m > sm::kSamplerMaxM) {
        throw ResourceCapError("register too large to simulate: m = " + std::to_string(reg.m) +
                               " > " + std::to_string(sm::kSamplerMaxM));
    }
    const sm::TrialSummary s = sm::run_trials(spec, q, trials, seed);
    json results = {{"r", r},
                    {"q", q},
                    {"m", reg.m},
                    {"trials", s.trials},
                    {"successes", s.successes},
                    {"empirical_rate", s.empirical_rate},
                    {"predicted", s.predicted},
                    {"z_score", s.z_score}};
    if (csv) {
        std::printf("field,value\n");
        for (const auto& [key, value] : results.items()) {
            std::printf("%s,%s\n", key.c_str(), value.dump().c_str());
        }
    } else {
        emit_json(envelope("simulate", {{"r", r}, {"q", q}, {"trials", trials}}, results, seed));
    }
    return kExitOk;
}

int cmd_bench(std::optional<unsigned> cp, std::optional<unsigned> cq, const std::string& scheme,
              std::uint64_t runs, std::uint64_t seed, std::int64_t dmax,
              std::optional<std::string> n_str, std::optional<std::string> p_str,
              std::optional<std::string> q_str, bool csv) {
    SemiprimeSpec spec;
    if (n_str) {
        std::optional<Int> p, q;
        if (p_str) p = Int(*p_str);
        if (q_str) q = Int(*q_str);
        spec = resolve_spec(Int(*n_str), p, q);
    } else if (cp && cq) {
        sm::RandomStream rng(seed, ~std::uint64_t{0});
        spec = fb::gen_semiprime(*cp, *cq, dmax, rng);
    } else {
        throw PreconditionError("supply either --N or both --cp and --cq");
    }
    fb::Scheme s;
    if (scheme == "A") {
        s = fb::Scheme::A;
    } else if (scheme == "B") {
        s = fb::Scheme::B;
    } else if (scheme == "auto") {
        s = spec.c_p > spec.c_q ? fb::Scheme::A : fb::Scheme::B;
    } else {
        throw PreconditionError("scheme must be A, B or auto");
    }
    const fb::CampaignReport report = fb::run_campaign(spec, s, runs, seed);
    json run_rows = json::array();
    for (const auto& run : report.records) {
        run_rows.push_back({{"b", run.b.get_str()},
                            {"r", run.r.get_str()},
                            {"f_b", run.f_b.get_str()},
                            {"success", run.success},
                            {"tag", fb::to_string(run.tag)}});
    }
    json results = {{"N", spec.N.get_str()},
                    {"p", spec.p.get_str()},
                    {"q_factor", spec.q_.get_str()},
                    {"c_p", spec.c_p},
                    {"c_q", spec.c_q},
                    {"scheme", fb::to_string(s)},
                    {"runs", report.runs},
                    {"successes", report.successes},
                    {"predicted", report.predicted},
                    {"records", run_rows}};
    if (csv) {
        std::printf("b,r,f_b,success,tag\n");
        for (const auto& run : report.records) {
            std::printf("%s,%s,%s,%d,%s\n", run.b.get_str().c_str(), run.r.get_str().c_str(),
                        run.f_b.get_str().c_str(), run.success ? 1 : 0,
                        fb::to_string(run.tag).c_str());
        }
    } else {
        emit_json(envelope("bench",
                           {{"scheme", scheme}, {"runs", runs}, {"N", spec.N.get_str()}},
                           results, seed));
    }
    return kExitOk;
}

int cmd_detect(const std::string& n_str, std::optional<std::string> p_str,
               std::optional<std::string> q_str, bool csv) {
    std::optional<Int> p, q;
    if (p_str) p = Int(*p_str);
    if (q_str) q = Int(*q_str);
    const SemiprimeSpec spec = resolve_spec(Int(n_str), p, q);
    const fb::SchemeDecision decision = fb::detect_scheme(spec);
    json evidence = json::array();
    for (const auto& [what, value] : decision.evidence) {
        evidence.push_back({{"test", what}, {"value", value}});
    }
    json results = {{"N", spec.N.get_str()},
                    {"scheme", fb::to_string(decision.scheme)},
                    {"inferred", decision.inferred},
                    {"evidence", evidence}};
    if (decision.scheme == fb::Scheme::Undetermined) {
        // the s_k probe narrows c_q when the symbols are silent
        try {
            results["c_q_by_sk"] = fb::find_cq_by_sk(spec);
        } catch (const std::domain_error&) {
            results["c_q_by_sk"] = nullptr;
        }
        results["r_max"] = fb::r_max(spec, 3).get_str();
    }
    if (csv) {
        std::printf("field,value\n");
        std::printf("N,%s\nscheme,%s\ninferred,%s\n", spec.N.get_str().c_str(),
                    fb::to_string(decision.scheme).c_str(), decision.inferred.c_str());
        for (const auto& [what, value] : decision.evidence) {
            std::printf("%s,%d\n", what.c_str(), value);
        }
    } else {
        emit_json(envelope("detect", {{"N", spec.N.get_str()}}, results));
    }
    return kExitOk;
}

int cmd_audit(std::int64_t max_n, bool csv) {
    std::int64_t cap = 1000000;
    if (const char* env = std::getenv("QPF_AUDIT_MAX_N")) {
        cap = std::strtoll(env, nullptr, 10);
    }
    if (max_n > cap) {
        throw ResourceCapError("audit bound exceeds the cap of " + std::to_string(cap));
    }
    const auto rows = au::audit_all(max_n);
    std::int64_t failed = 0;
    json row_json = json::array();
    std::vector<std::string> csv_lines;
    csv_lines.push_back("N,p,q,c_p,c_q,ee,eo,oe,oo,leander,pass");
    for (const au::AuditRow& row : rows) {
        if (!row.pass) ++failed;
        row_json.push_back({{"N", row.N},
                            {"p", row.p},
                            {"q", row.q},
                            {"c_p", row.c_p},
                            {"c_q", row.c_q},
                            {"observed",
                             {{"ee", row.observed.ee},
                              {"eo", row.observed.eo},
                              {"oe", row.observed.oe},
                              {"oo", row.observed.oo}}},
                            {"predicted",
                             {{"ee", row.predicted.ee},
                              {"eo", row.predicted.eo},
                              {"oe", row.predicted.oe},
                              {"oo", row.predicted.oo}}},
                            {"leander", row.leander_observed.get_str()},
                            {"pass", row.pass}});
        csv_lines.push_back(std::to_string(row.N) + "," + std::to_string(row.p) + "," +
                            std::to_string(row.q) + "," + std::to_string(row.c_p) + "," +
                            std::to_string(row.c_q) + "," + std::to_string(row.observed.ee) +
                            "," + std::to_string(row.observed.eo) + "," +
                            std::to_string(row.observed.oe) + "," +
                            std::to_string(row.observed.oo) + "," +
                            row.leander_observed.get_str() + "," + (row.pass ? "1" : "0"));
    }
    json results = {{"max_n", max_n},
                    {"semiprimes", rows.size()},
                    {"failed", failed},
                    {"rows", row_json}};
    if (csv) {
        for (const std::string& line : csv_lines) {
            std::printf("%s\n", line.c_str());
        }
    } else {
        emit_json(envelope("audit", {{"max_n", max_n}}, results));
    }
    return failed == 0 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Period-finding statistics and factoring benchmarks"};
    app.require_subcommand(1);
    bool csv = false;
    bool json_out = false;
    app.add_flag("--csv", csv, "CSV output");
    app.add_flag("--json", json_out, "JSON output (default)");

    auto* prob = app.add_subcommand("prob", "Success probability of period finding");
    std::int64_t prob_r = 0;
    int prob_q = 0;
    std::optional<std::int64_t> prob_k;
    bool prob_oracle = false;
    bool prob_averaged = false;
    prob->add_option("--r", prob_r, "period")->required();
    prob->add_option("--q", prob_q, "register increment")->required();
    prob->add_option("--k", prob_k, "residue offset (default: k-averaged)");
    prob->add_flag("--oracle", prob_oracle, "also run the direct-sum oracle");
    prob->add_flag("--averaged", prob_averaged, "average over k");

    auto* table = app.add_subcommand("table", "Reproduce a table or figure data set");
    std::string table_which;
    table->add_option("which", table_which, "qc2 | qc3 | fig1 | fig3")->required();

    auto* simulate = app.add_subcommand("simulate", "Seeded Monte-Carlo trials");
    std::int64_t sim_r = 0;
    int sim_q = 0;
    std::uint64_t sim_trials = 100000;
    std::uint64_t sim_seed = 0;
    simulate->add_option("--r", sim_r, "period")->required();
    simulate->add_option("--q", sim_q, "register increment")->required();
    simulate->add_option("--trials", sim_trials, "number of trials");
    simulate->add_option("--seed", sim_seed, "RNG seed");

    auto* bench = app.add_subcommand("bench", "Factoring benchmark campaign");
    std::optional<unsigned> bench_cp, bench_cq;
    std::string bench_scheme = "auto";
    std::uint64_t bench_runs = 50;
    std::uint64_t bench_seed = 0;
    std::int64_t bench_dmax = 99;
    std::optional<std::string> bench_n, bench_p, bench_q;
    bench->add_option("--cp", bench_cp, "2-adic valuation of p-1");
    bench->add_option("--cq", bench_cq, "2-adic valuation of q-1");
    bench->add_option("--scheme", bench_scheme, "A | B | auto");
    bench->add_option("--runs", bench_runs, "campaign length");
    bench->add_option("--seed", bench_seed, "RNG seed");
    bench->add_option("--dmax", bench_dmax, "odd cofactor bound for generation");
    bench->add_option("--N", bench_n, "semiprime to factor");
    bench->add_option("--p", bench_p, "known prime factor");
    bench->add_option("--q", bench_q, "known prime factor");

    auto* detect = app.add_subcommand("detect", "Scheme selection from Jacobi symbols");
    std::string detect_n;
    std::optional<std::string> detect_p, detect_q;
    detect->add_option("--N", detect_n, "semiprime")->required();
    detect->add_option("--p", detect_p, "known prime factor");
    detect->add_option("--q", detect_q, "known prime factor");

    auto* audit = app.add_subcommand("audit", "Exhaustive coset-count verification");
    std::int64_t audit_max_n = 3000;
    audit->add_option("--max-n", audit_max_n, "upper bound on N");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prob->parsed()) {
            return cmd_prob(prob_r, prob_q, prob_k, prob_oracle, prob_averaged, csv);
        }
        if (table->parsed()) {
            return cmd_table(table_which, csv);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_r, sim_q, sim_trials, sim_seed, csv);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_cp, bench_cq, bench_scheme, bench_runs, bench_seed,
                             bench_dmax, bench_n, bench_p, bench_q, csv);
        }
        if (detect->parsed()) {
            return cmd_detect(detect_n, detect_p, detect_q, csv);
        }
        if (audit->parsed()) {
            return cmd_audit(audit_max_n, csv);
        }
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPrecondition;
    } catch (const ResourceCapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitResourceCap;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
