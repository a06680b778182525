// Command line front end: reproduces the fidelity/mode-function data sets as
// CSV or JSON files and runs the moment-identity self checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "heralded_fock/correlation.hpp"
#include "heralded_fock/covariance.hpp"
#include "heralded_fock/fock.hpp"
#include "heralded_fock/optimizer.hpp"
#include "heralded_fock/two_mode.hpp"
#include "heralded_fock/wick.hpp"
#include "heralded_fock/wigner.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitBadConfig = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> parse_range(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0 ||
        stop < start)
        throw CLI::ValidationError("range", "expected start:stop:step with step > 0, got " + spec);
    std::vector<double> out;
    for (double v = start; v <= stop + 0.5 * step; v += step) out.push_back(v);
    return out;
}

unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("HERALDED_FOCK_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1 && v < static_cast<long>(n)) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Run fn(i) for i in [0, jobs) on a small worker pool; results land in input
/// order regardless of scheduling.
template <typename F>
std::vector<double> parallel_map(std::size_t jobs, F&& fn) {
    std::vector<double> out(jobs);
    const unsigned workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1))
                out[i] = fn(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_output(const Table& table, const std::string& path, const std::string& format,
                  const nlohmann::json& params) {
    if (format == "csv") {
        std::ofstream os(path);
        if (!os) throw CLI::ValidationError("--out", "cannot open " + path);
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            os << (c ? "," : "") << table.columns[c];
        os << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt(row[c]);
            os << "\n";
        }
    } else {
        nlohmann::json j;
        j["metadata"] = {{"version", kVersion},
                         {"params", params},
                         {"runtime", {{"threads", worker_count(table.rows.size())}}}};
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        std::ofstream os(path);
        if (!os) throw CLI::ValidationError("--out", "cannot open " + path);
        os << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded photon-number states from a continuous-wave OPO: fidelity curves, "
                 "optimal temporal modes and moment-identity checks"};
    app.set_config("--config", "", "flat key=value configuration file; flags take precedence");
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand name

    std::string out_path = "out.csv";
    std::string format = "csv";
    app.add_option("--out", out_path, "output file path")->capture_default_str();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    double gamma = 1.0, eta_t = 1.0, eta_s = 1.0;
    app.add_option("--gamma", gamma, "OPO output mirror leakage rate")->capture_default_str();
    app.add_option("--eta-t", eta_t, "trigger detector efficiency")->capture_default_str();
    app.add_option("--eta-s", eta_s, "signal detector efficiency")->capture_default_str();

    // two-mode
    auto* two_mode = app.add_subcommand("two-mode", "single-pulse two-mode model");
    double r = 0.5;
    int n_max = 50;
    two_mode->add_option("--r", r, "squeezing parameter")->required();
    two_mode->add_option("--n-max", n_max, "photon number cutoff")->capture_default_str();

    // fidelity-sweep
    auto* sweep = app.add_subcommand("fidelity-sweep", "F2 versus click separation");
    std::vector<double> eps_list;
    std::string dt_range = "0:10:0.5";
    std::string sweep_mode = "both";
    sweep->add_option("--eps-over-gamma", eps_list, "one or more epsilon/gamma values")
        ->required()
        ->expected(-1);
    sweep->add_option("--dt-range", dt_range, "gamma*dt sweep start:stop:step")
        ->capture_default_str();
    sweep->add_option("--mode", sweep_mode, "which signal mode to use")
        ->check(CLI::IsMember({"optimized", "fixed", "both"}))
        ->capture_default_str();

    // optimize-mode
    auto* opt = app.add_subcommand("optimize-mode", "optimal signal mode at one separation");
    double opt_eps = 0.08, opt_dt = 4.0;
    opt->add_option("--eps-over-gamma", opt_eps, "epsilon/gamma")->required();
    opt->add_option("--dt", opt_dt, "gamma * click separation")->required();

    // fock-n
    auto* fock = app.add_subcommand("fock-n", "n-photon fidelity in the low intensity limit");
    int fock_n = 3;
    std::string pattern = "equal";
    std::string fock_range = "0:20:0.2";
    fock->add_option("--n", fock_n, "photon number (2 or 3)")->required();
    fock->add_option("--pattern", pattern, "click pattern for n = 3")
        ->check(CLI::IsMember({"equal", "pair"}))
        ->capture_default_str();
    fock->add_option("--range", fock_range, "separation sweep start:stop:step")
        ->capture_default_str();

    // wick-check
    auto* wick = app.add_subcommand("wick-check", "moment identity and detector-splitting report");
    int configs = 50;
    unsigned seed = 20240811u;
    double wick_eps = 0.01;
    wick->add_option("--configs", configs, "random moment configurations")->capture_default_str();
    wick->add_option("--seed", seed, "random seed")->capture_default_str();
    wick->add_option("--eps-over-gamma", wick_eps, "epsilon/gamma for the splitting check")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitBadConfig;
    }

    try {
        hfock::OpoParams(0.0, gamma, eta_t, eta_s); // validate the shared physics flags
        if (*two_mode) {
            const hfock::NumberDistribution d = hfock::conditional_number_distribution(r, n_max);
            const double f_closed = hfock::two_mode_fidelity_closed_form(r);
            const double f_wigner = hfock::two_mode_fidelity_via_wigner(r);
            Table t;
            t.columns = {"n", "p_n"};
            for (std::size_t n = 0; n < d.p.size(); ++n)
                t.rows.push_back({static_cast<double>(n), d.p[n]});
            write_output(t, out_path, format,
                         {{"r", r}, {"n_max", n_max}, {"F2_closed_form", f_closed},
                          {"F2_wigner_route", f_wigner}, {"tail", d.tail}});
            std::printf("F2 = %s (closed form), %s (wigner route), tail beyond n_max = %s\n",
                        fmt(f_closed).c_str(), fmt(f_wigner).c_str(), fmt(d.tail).c_str());
        } else if (*sweep) {
            const std::vector<double> seps = parse_range(dt_range);
            const bool do_opt = sweep_mode != "fixed";
            const bool do_fixed = sweep_mode != "optimized";
            Table t;
            t.columns = {"gamma_dt"};
            std::vector<std::vector<double>> cols;
            for (double eg : eps_list) {
                const hfock::OpoParams params(eg * gamma, gamma, eta_t, eta_s);
                if (do_opt) {
                    t.columns.push_back("F2_optimized_eps" + fmt(eg));
                    cols.push_back(parallel_map(seps.size(), [&](std::size_t i) {
                        return hfock::fidelity_curve(params, {seps[i]}, true)[0].fidelity;
                    }));
                }
                if (do_fixed) {
                    t.columns.push_back("F2_zero_intensity_mode_eps" + fmt(eg));
                    cols.push_back(parallel_map(seps.size(), [&](std::size_t i) {
                        return hfock::fidelity_curve(params, {seps[i]}, false)[0].fidelity;
                    }));
                }
            }
            for (std::size_t i = 0; i < seps.size(); ++i) {
                std::vector<double> row = {seps[i]};
                for (const auto& c : cols) row.push_back(c[i]);
                t.rows.push_back(row);
            }
            write_output(t, out_path, format,
                         {{"eps_over_gamma", eps_list}, {"gamma", gamma}, {"eta_t", eta_t},
                          {"eta_s", eta_s}, {"dt_range", dt_range}, {"mode", sweep_mode}});
            std::printf("wrote %zu sweep points to %s\n", t.rows.size(), out_path.c_str());
        } else if (*opt) {
            const hfock::OpoParams params(opt_eps * gamma, gamma, eta_t, eta_s);
            const hfock::ClickTimes clicks{-0.5 * opt_dt / gamma, 0.5 * opt_dt / gamma};
            const hfock::OptimizeResult res = hfock::optimize_mode(params, clicks);
            if (!res.converged)
                std::fprintf(stderr, "warning: optimizer did not meet its convergence target; "
                                     "reporting best found\n");
            const hfock::SampledModeFunction f0 = hfock::optimal_mode_zero_intensity(
                clicks[0], clicks[1], res.mode.grid(), gamma);
            const double f0_fid = hfock::two_photon_fidelity_for_mode(params, clicks, f0);
            Table t;
            t.columns = {"t", "f_optimized", "f_zero_intensity"};
            for (std::size_t k = 0; k < res.mode.size(); ++k)
                t.rows.push_back({res.mode.grid().time(k), res.mode[k], f0[k]});
            write_output(t, out_path, format,
                         {{"eps_over_gamma", opt_eps}, {"gamma_dt", opt_dt}, {"eta_t", eta_t},
                          {"eta_s", eta_s}, {"F2_optimized", res.fidelity},
                          {"F2_zero_intensity_mode", f0_fid}, {"converged", res.converged}});
            std::printf("F2 = %s (optimized) vs %s (zero-intensity mode)\n",
                        fmt(res.fidelity).c_str(), fmt(f0_fid).c_str());
            if (!res.converged) return kExitNumerical;
        } else if (*fock) {
            const std::vector<double> seps = parse_range(fock_range);
            Table t;
            if (fock_n == 2) {
                t.columns = {"gamma_dt", "F2", "p_b2"};
                for (double s : seps) {
                    const auto d =
                        hfock::two_click_state_decomposition(hfock::ClickTimes{0.0, s / gamma},
                                                             gamma);
                    t.rows.push_back({s, d.p_a2, d.p_b2});
                }
            } else if (fock_n == 3) {
                const auto pat = (pattern == "equal") ? hfock::ThreeClickPattern::EqualSpacing
                                                      : hfock::ThreeClickPattern::CoincidentPair;
                t.columns = {"gamma_dt", "F3"};
                const std::vector<double> fids = parallel_map(seps.size(), [&](std::size_t i) {
                    return hfock::three_photon_fidelity_curve(pat, {seps[i]}, gamma)[0].fidelity;
                });
                for (std::size_t i = 0; i < seps.size(); ++i) t.rows.push_back({seps[i], fids[i]});
            } else {
                std::fprintf(stderr, "fock-n: only n = 2 and n = 3 sweeps are supported\n");
                return kExitBadConfig;
            }
            write_output(t, out_path, format,
                         {{"n", fock_n}, {"pattern", pattern}, {"range", fock_range}});
            std::printf("wrote %zu points to %s\n", t.rows.size(), out_path.c_str());
        } else if (*wick) {
            std::mt19937 rng(seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const hfock::OpoParams params(wick_eps * gamma, gamma, eta_t, eta_s);
            double worst_identity = 0.0;
            Table t;
            t.columns = {"n", "m", "lhs", "rhs", "abs_deviation"};
            for (int c = 0; c < configs; ++c) {
                const std::size_t n = 1 + static_cast<std::size_t>(unif(rng) * 2.999);
                std::vector<double> ct(n);
                ct[0] = 0.0;
                for (std::size_t i = 1; i < n; ++i) ct[i] = ct[i - 1] + 2.5 * unif(rng) / gamma;
                const hfock::ClickTimes clicks(ct);
                const std::size_t m = static_cast<std::size_t>(unif(rng) * (n + 0.999));
                std::vector<double> primed(m), dprimed(m);
                for (auto& x : primed) x = (-2.0 + (ct.back() * gamma + 4.0) * unif(rng)) / gamma;
                for (auto& x : dprimed) x = (-2.0 + (ct.back() * gamma + 4.0) * unif(rng)) / gamma;
                const double lhs =
                    hfock::conditional_moment_lhs(clicks, primed, dprimed, params).value;
                const double rhs = hfock::conditional_moment_rhs(clicks, primed, dprimed, gamma);
                const double dev = std::abs(lhs - rhs);
                worst_identity = std::max(worst_identity, dev / std::max(1.0, std::abs(rhs)));
                t.rows.push_back({static_cast<double>(n), static_cast<double>(m), lhs, rhs, dev});
            }

            const double s = 1.0 / std::sqrt(2.0);
            const hfock::SplitReport rep2 = hfock::detector_splitting_check(
                hfock::ClickTimes{0.0, 1.3 / gamma}, {{s, s}, {s, -s}}, params);
            Eigen::MatrixXcd a(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    a(i, j) = std::complex<double>(unif(rng) - 0.5, unif(rng) - 0.5);
            const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
            std::vector<std::vector<std::complex<double>>> rows3(3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) rows3[static_cast<std::size_t>(i)].push_back(q(i, j));
            const hfock::SplitReport rep3 = hfock::detector_splitting_check(
                hfock::ClickTimes{0.0, 0.8 / gamma}, rows3, params);

            write_output(t, out_path, format,
                         {{"configs", configs}, {"seed", seed}, {"eps_over_gamma", wick_eps},
                          {"max_rel_identity_deviation", worst_identity},
                          {"splitting_dev_2way", rep2.max_rel_deviation},
                          {"splitting_dev_3way", rep3.max_rel_deviation}});
            std::printf("moment identity: max rel deviation %s over %d configurations\n",
                        fmt(worst_identity).c_str(), configs);
            std::printf("detector splitting: max rel deviation %s (2-way), %s (3-way)\n",
                        fmt(rep2.max_rel_deviation).c_str(), fmt(rep3.max_rel_deviation).c_str());
            if (worst_identity > 1e-8 || rep2.max_rel_deviation > 1e-10 ||
                rep3.max_rel_deviation > 1e-10) {
                std::fprintf(stderr, "wick-check: deviations exceed tolerance\n");
                return kExitNumerical;
            }
        }
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return kExitBadConfig;
    } catch (const hfock::ConvergenceFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
