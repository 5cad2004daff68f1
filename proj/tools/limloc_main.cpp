// limloc - simulation and verification toolkit for Brownian paths with
// limited local time at the origin.

#include "limloc/analytics.hpp"
#include "limloc/constraints.hpp"
#include "limloc/local_time.hpp"
#include "limloc/mc.hpp"
#include "limloc/path_engine.hpp"
#include "limloc/samplers.hpp"
#include "limloc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

// exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget exhausted
constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::uint64_t fnv1a64_file(const std::string& filename) {
    std::ifstream f(filename, std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (f) {
        f.read(buf, sizeof(buf));
        const std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

nlohmann::json output_entry(const std::string& path) {
    nlohmann::json j;
    j["path"] = path;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    j["fnv1a64"] = hex;
    return j;
}

nlohmann::json manifest(const std::string& command, nlohmann::json params,
                        std::uint64_t seed_root,
                        const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["command"] = command;
    j["params"] = std::move(params);
    j["seed_root"] = seed_root;
    j["artifact_version"] = kArtifactVersion;
    auto arr = nlohmann::json::array();
    for (const auto& o : outputs) arr.push_back(output_entry(o));
    j["outputs"] = std::move(arr);
    return j;
}

limloc::ConstraintSpec load_constraint(const std::string& spec) {
    namespace fs = std::filesystem;
    try {
        if (!spec.empty() && spec.front() == '{')
            return limloc::ConstraintSpec::from_json(spec);
        if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv")
            return limloc::ConstraintSpec::from_table_csv(spec);
        if (fs::exists(spec)) {
            std::ifstream f(spec);
            std::string text((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
            return limloc::ConstraintSpec::from_json(text);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed constraint spec: ") + e.what());
    }
    throw std::invalid_argument("constraint spec is neither inline JSON nor a file: " + spec);
}

int cmd_simulate(const std::string& process, double horizon, double dt,
                 std::uint64_t seed, double epsilon, double start,
                 const std::string& method, const std::string& out) {
    limloc::Path path;
    const limloc::Seed s{seed, 0};
    if (process == "bm") {
        path = limloc::gen_brownian(s, horizon, dt);
    } else if (process == "bridge") {
        path = limloc::gen_bridge(s, horizon, dt);
    } else if (process == "bessel3") {
        const auto m = method == "euler" ? limloc::Bessel3Method::euler
                                         : limloc::Bessel3Method::norm3d;
        path = limloc::gen_bessel3(s, horizon, dt, start, m);
    } else if (process == "bessel3-bridge") {
        path = limloc::gen_bessel3_bridge(s, horizon, dt);
    } else {
        throw CLI::ValidationError("--process must be one of bm, bridge, bessel3, bessel3-bridge");
    }
    const double eps = epsilon > 0.0 ? epsilon : limloc::default_bandwidth(dt);
    const auto profile = limloc::occupation_estimate(path, eps);

    const std::string path_file = out + "_path.csv";
    const std::string prof_file = out + "_local_time.csv";
    limloc::write_path_csv(path, path_file);
    limloc::write_profile_csv(profile, prof_file);

    nlohmann::json params;
    params["process"] = process;
    params["horizon"] = horizon;
    params["dt"] = dt;
    params["epsilon"] = eps;
    params["start"] = start;
    params["method"] = method;
    std::cout << manifest("simulate", params, seed, {path_file, prof_file}).dump(2)
              << "\n";
    return kExitOk;
}

int cmd_figure1(std::vector<double> gammas, double t, double dt,
                std::uint64_t seed, std::uint64_t budget, const std::string& out_dir) {
    if (gammas.empty()) gammas = {0.5, 0.9, 1.1};
    const auto results = limloc::run_figure1(gammas, t, dt, seed, budget, out_dir);

    nlohmann::json params;
    params["gamma"] = gammas;
    params["t"] = t;
    params["dt"] = dt;
    params["budget"] = budget;

    bool exhausted = false;
    auto summary = nlohmann::json::array();
    std::vector<std::string> outputs;
    for (const auto& fr : results) {
        nlohmann::json je;
        je["gamma"] = fr.gamma;
        je["accepted"] = fr.accepted;
        je["attempts"] = fr.attempts;
        if (fr.accepted) {
            je["local_time"] = fr.local_time;
            je["allowance_at_t"] = fr.allowance_at_t;
            je["ratio"] = fr.ratio;
            je["constraint_holds"] = fr.constraint_holds;
            outputs.push_back(fr.trajectory_file);
            outputs.push_back(fr.profile_file);
        } else {
            je["error"] = "rejection budget exhausted";
            exhausted = true;
        }
        summary.push_back(std::move(je));
    }
    auto m = manifest("figure1", params, seed, outputs);
    m["summary"] = std::move(summary);
    std::cout << m.dump(2) << "\n";
    return exhausted ? kExitBudget : kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t n, std::uint64_t seed,
               unsigned threads, const std::string& out) {
    limloc::VerifyOptions opt;
    opt.seed_root = seed;
    opt.n_override = n;
    opt.threads = threads;

    const auto results = limloc::run_suite(suite, opt);
    bool any_fail = false, any_inconclusive = false;
    for (const auto& r : results) {
        const char* tag = r.verdict == limloc::Verdict::pass
                              ? "PASS"
                              : (r.verdict == limloc::Verdict::fail ? "FAIL" : "INCONCLUSIVE");
        std::printf("[%s] %02d %s (%.1fs)\n", tag, r.id, r.name.c_str(), r.seconds);
        for (const auto& line : r.lines) std::printf("       %s\n", line.c_str());
        if (r.verdict == limloc::Verdict::fail) any_fail = true;
        if (r.verdict == limloc::Verdict::inconclusive) any_inconclusive = true;
    }
    const std::string report = limloc::results_to_json(results, opt);
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        f << report << "\n";
        std::printf("report written to %s\n", out.c_str());
    }
    if (any_inconclusive)
        std::printf("warning: some verdicts are inconclusive (sample size below %llu)\n",
                    static_cast<unsigned long long>(limloc::kVerdictFloor));
    return any_fail ? kExitFail : kExitOk;
}

int cmd_classify(const std::string& spec_text) {
    const auto f = load_constraint(spec_text);
    const auto res = limloc::classify(f);
    if (res.verdict == limloc::IntegralClass::convergent)
        std::printf("transient regime (Theorem 1)\n");
    else
        std::printf("conjectured recurrent regime (Conjecture 1)\n");
    if (!res.symbolic) {
        std::printf("numerical verdict: integral over [1, %.6g] = %.8g, last doubling window = %.3g\n",
                    res.t_reached, res.integral, res.last_window);
        std::printf("partial integrals:");
        for (double p : res.partials) std::printf(" %.6g", p);
        std::printf("\n");
    }
    return kExitOk;
}

int cmd_probe(double gamma, std::vector<double> ts, std::uint64_t n,
              std::uint64_t seed, std::uint64_t budget, unsigned threads,
              const std::string& out) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw CLI::ValidationError("--gamma must be in (0,1) for the probe");
    if (ts.empty()) ts = {100.0, 1000.0, 10000.0};
    std::sort(ts.begin(), ts.end());
    const auto f = limloc::ConstraintSpec::power_log(gamma);
    const double dt = 1e-2;

    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open for writing: " + out);
    csv << "t,n_accepted,q10,q50,q90\n";

    bool exhausted = false;
    auto rows = nlohmann::json::array();
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        const double t = ts[ti];
        const double f_t = f(t);
        auto ratios = limloc::mc_map<double>(n, threads, [&](std::uint64_t i) {
            try {
                const auto d = limloc::reject_condition(
                    limloc::Seed{seed, (static_cast<std::uint64_t>(ti) << 40) + i}, f,
                    limloc::ConditionEvent::K, t, dt, budget);
                return d.profile.final_value() / f_t;
            } catch (const limloc::RejectionBudgetError&) {
                return -1.0;
            }
        });
        std::vector<double> ok;
        for (double v : ratios)
            if (v >= 0.0) ok.push_back(v);
        if (ok.size() < ratios.size()) exhausted = true;
        std::sort(ok.begin(), ok.end());
        auto q = [&](double p) {
            if (ok.empty()) return 0.0;
            const auto idx = static_cast<std::size_t>(p * (ok.size() - 1));
            return ok[idx];
        };
        char row[160];
        std::snprintf(row, sizeof(row), "%.17g,%zu,%.6f,%.6f,%.6f\n", t, ok.size(),
                      q(0.10), q(0.50), q(0.90));
        csv << row;
        nlohmann::json jr;
        jr["t"] = t;
        jr["n_accepted"] = ok.size();
        jr["q10"] = q(0.10);
        jr["q50"] = q(0.50);
        jr["q90"] = q(0.90);
        rows.push_back(std::move(jr));
    }
    csv.close();

    nlohmann::json params;
    params["gamma"] = gamma;
    params["t"] = ts;
    params["n"] = n;
    params["budget"] = budget;
    params["dt"] = dt;
    auto m = manifest("probe-conjecture", params, seed, {out});
    m["exploratory"] = true;
    m["note"] = "quantiles of the terminal allowance ratio among accepted draws; no pass/fail claim";
    m["rows"] = std::move(rows);
    std::cout << m.dump(2) << "\n";
    return exhausted ? kExitBudget : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and statistical verification of Brownian paths "
                 "with limited local time at the origin"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate one path and its local-time profile");
    std::string process = "bm", method = "norm3d", out_prefix = "limloc_run";
    double horizon = 1.0, dt = 1e-3, epsilon = 0.0, start = 0.0;
    std::uint64_t seed = 1;
    sim->add_option("--process", process, "bm | bridge | bessel3 | bessel3-bridge");
    sim->add_option("--horizon", horizon, "time horizon (duration for bridges)")
        ->check(CLI::PositiveNumber);
    sim->add_option("--dt", dt, "grid step")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "seed root");
    sim->add_option("--epsilon", epsilon, "occupation bandwidth (default 2 sqrt(dt))");
    sim->add_option("--start", start, "start value (bessel3 only)");
    sim->add_option("--method", method, "bessel3 construction: norm3d | euler");
    sim->add_option("--out", out_prefix, "output file prefix");

    // figure1
    auto* fig = app.add_subcommand("figure1", "Conditioned trajectories for a list of gamma");
    std::vector<double> gammas;
    double fig_t = 1e4, fig_dt = 1e-2;
    std::uint64_t fig_budget = 40000, fig_seed = 1;
    std::string fig_out = "figure1_out";
    fig->add_option("--gamma", gammas, "gamma values (default 0.5 0.9 1.1)");
    fig->add_option("--t", fig_t, "conditioning time")->check(CLI::PositiveNumber);
    fig->add_option("--dt", fig_dt, "grid step")->check(CLI::PositiveNumber);
    fig->add_option("--seed", fig_seed, "seed root");
    fig->add_option("--budget", fig_budget, "rejection attempts per gamma");
    fig->add_option("--out", fig_out, "output directory");

    // verify
    auto* ver = app.add_subcommand("verify", "Run the statistical verification suite");
    std::string suite = "all", report_out;
    std::uint64_t ver_n = 0, ver_seed = 0x11d0c5eedULL;
    unsigned threads = 0;
    ver->add_option("--suite", suite, "all | limit-laws | scaling | dominance | analytics | figure");
    ver->add_option("--n", ver_n, "sample-size override (0 = pinned full scale)");
    ver->add_option("--seed", ver_seed, "seed root");
    ver->add_option("--threads", threads, "worker threads (default: LIMLOC_THREADS or hardware)");
    ver->add_option("--out", report_out, "write the JSON report here");

    // classify
    auto* cls = app.add_subcommand("classify", "Integral test for an allowance function");
    std::string spec_text;
    cls->add_option("--f", spec_text,
                    "inline JSON {\"variant\":...}, a JSON file, or a CSV table t,f")
        ->required();

    // probe-conjecture
    auto* probe = app.add_subcommand("probe-conjecture",
                                     "Exploratory quantiles of the allowance ratio");
    double probe_gamma = 0.5;
    std::vector<double> probe_ts;
    std::uint64_t probe_n = 200, probe_seed = 1, probe_budget = 20000;
    unsigned probe_threads = 0;
    std::string probe_out = "probe_conjecture.csv";
    probe->add_option("--gamma", probe_gamma, "gamma in (0,1)");
    probe->add_option("--t", probe_ts, "conditioning times (default 100 1000 10000)");
    probe->add_option("--n", probe_n, "accepted draws per t");
    probe->add_option("--seed", probe_seed, "seed root");
    probe->add_option("--budget", probe_budget, "rejection attempts per draw");
    probe->add_option("--threads", probe_threads, "worker threads");
    probe->add_option("--out", probe_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(process, horizon, dt, seed, epsilon, start, method,
                                out_prefix);
        if (fig->parsed())
            return cmd_figure1(gammas, fig_t, fig_dt, fig_seed, fig_budget, fig_out);
        if (ver->parsed())
            return cmd_verify(suite, ver_n, ver_seed, threads, report_out);
        if (cls->parsed()) return cmd_classify(spec_text);
        if (probe->parsed())
            return cmd_probe(probe_gamma, probe_ts, probe_n, probe_seed, probe_budget,
                             probe_threads, probe_out);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const limloc::RejectionBudgetError& e) {
        std::fprintf(stderr, "budget exhausted: %s (attempts=%llu)\n", e.what(),
                     static_cast<unsigned long long>(e.attempts()));
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
    return kExitUsage;
}
