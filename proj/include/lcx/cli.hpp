#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lcx/chernoff.hpp"
#include "lcx/classify.hpp"
#include "lcx/entropy.hpp"
#include "lcx/io.hpp"
#include "lcx/moments.hpp"
#include "lcx/suites.hpp"

namespace lcx::cli {

namespace detail {

// Family spec grammar: name:param[,param], e.g. geometric:0.5, geometric0:0.5
// (the {0,1,...} variant), poisson:1, binomial:10,0.3, exponential:1,
// uniform:0,2, gaussian:0,1.
inline std::vector<double> spec_params(const std::string& spec, std::string& name) {
    const auto colon = spec.find(':');
    name = spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
    }
    return params;
}

inline DiscreteDist parse_discrete_family(const std::string& spec) {
    std::string name;
    const std::vector<double> p = spec_params(spec, name);
    if (name == "geometric" && p.size() == 1) return geometric(p[0]);
    if (name == "geometric0" && p.size() == 1) return geometric_variant(p[0]);
    if (name == "poisson" && p.size() == 1) return poisson(p[0]);
    if (name == "binomial" && p.size() == 2) return binomial(int(p[0]), p[1]);
    throw CLI::ValidationError("family", "unknown discrete family spec '" + spec + "'");
}

inline ContinuousDist parse_continuous_family(const std::string& spec) {
    std::string name;
    const std::vector<double> p = spec_params(spec, name);
    if (name == "exponential" && p.size() == 1) return ContinuousDist::exponential(p[0]);
    if (name == "uniform" && p.size() == 2) return ContinuousDist::uniform(p[0], p[1]);
    if (name == "gaussian" && p.size() == 2) return ContinuousDist::gaussian(p[0], p[1]);
    throw CLI::ValidationError("family", "unknown continuous family spec '" + spec + "'");
}

// t grid grammar: "lo:hi:step", a comma list, or a single value.
inline std::vector<double> parse_t_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        const double lo = std::stod(a), hi = std::stod(b), step = std::stod(c);
        if (!(step > 0.0)) throw CLI::ValidationError("--t", "step must be > 0");
        for (double t = lo; t <= hi + 1e-12; t += step) grid.push_back(t);
        return grid;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    if (grid.empty()) throw CLI::ValidationError("--t", "empty grid");
    return grid;
}

inline std::vector<double> parse_csv_doubles(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct OutFile {
    std::ofstream file;
    std::ostream* stream;
    OutFile(const std::string& path, std::ostream& fallback) : stream(&fallback) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
            stream = &file;
        }
    }
};

}  // namespace detail

/// Run the command line.  Exit codes: 0 all-pass / member, 1 inequality
/// violation or non-member, 2 usage or parse error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lcx: classification, concentration bounds, moment and entropy "
                 "reports for log-concave distributions"};
    app.require_subcommand(1);

    // classify ---------------------------------------------------------
    auto* classify = app.add_subcommand(
        "classify", "Class membership verdicts for a PMF file or a named family");
    std::string pmf_path, family_spec, relative_spec, class_name = "lc";
    bool strict = false;
    auto* pmf_opt = classify->add_option("--pmf", pmf_path, "PMF CSV file (header k,p)");
    auto* fam_opt =
        classify->add_option("--family", family_spec,
                             "family spec, e.g. geometric:0.5 or binomial:10,0.3");
    pmf_opt->excludes(fam_opt);
    classify->add_option("--relative-to", relative_spec,
                         "reference family or PMF file; tests relative log-concavity");
    classify->add_option("--class", class_name,
                         "class to test: lc (default), ulc, ulc:N, log-affine");
    classify->add_flag("--strict", strict, "zero tolerance instead of 1e-9 log slack");

    // bound ------------------------------------------------------------
    auto* bound = app.add_subcommand(
        "bound", "Bound-vs-oracle curves; CSV columns t,bound,oracle,dominated");
    std::string theorem, means_spec = "2", weights_spec = "1,1", t_spec = "1:3:0.5";
    std::string side_name = "geq", oracle_mode = "on", out_path, chern_family = "poisson:1";
    std::string summand_spec = "uniform:0,2";
    int arg_n = 10;
    double arg_mu = 0.5, arg_mean = 1.0;
    std::uint64_t seed = 12345;
    std::size_t mc_samples = 1000000;
    bound->add_option("theorem", theorem, "t1_1 | t1_2 | t1_3 | t1_4 | c3_3 | chernoff")
        ->required();
    bound->add_option("--means", means_spec, "summand means for t1_1 (comma list)");
    bound->add_option("--weights", weights_spec, "positive weights for t1_2 (comma list)");
    bound->add_option("--summands", summand_spec,
                      "unit-mean continuous summand family for the t1_2 oracle");
    bound->add_option("--n", arg_n, "order n for t1_3");
    bound->add_option("--mu", arg_mu, "success fraction mu for t1_3");
    bound->add_option("--mean", arg_mean, "mean for t1_4 / c3_3");
    bound->add_option("--family", chern_family, "reference family for the chernoff engine");
    bound->add_option("--t", t_spec, "deviation grid: lo:hi:step, comma list, or one value");
    bound->add_option("--side", side_name, "geq (default) or leq");
    bound->add_option("--oracle", oracle_mode, "on (default) or off");
    bound->add_option("--mc-samples", mc_samples, "Monte Carlo sample count for t1_2");
    bound->add_option("--seed", seed, "Monte Carlo seed (LCX_SEED overrides)");
    bound->add_option("--out", out_path, "write CSV here instead of stdout");

    // report -----------------------------------------------------------
    auto* report = app.add_subcommand(
        "report", "Run seeded property suites; CSV columns property,pass,fail,min_slack");
    std::string suite;
    std::uint64_t report_seed = 7;
    int draws = 100;
    std::string report_out;
    report->add_option("suite", suite, "majorize | moments | entropy | all")->required();
    report->add_option("--seed", report_seed, "corpus seed (LCX_SEED overrides)");
    report->add_option("--draws", draws, "draws per property")->check(CLI::PositiveNumber);
    report->add_option("--out", report_out, "write CSV here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("lcx");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (const char* env_seed = std::getenv("LCX_SEED")) {
        seed = std::strtoull(env_seed, nullptr, 10);
        report_seed = seed;
    }

    try {
        if (classify->parsed()) {
            DiscreteDist x = pmf_path.empty() ? detail::parse_discrete_family(family_spec)
                                              : read_pmf_csv_file(pmf_path);
            const double tol = strict ? 0.0 : kDiscreteLogTol;
            ClassVerdict v;
            if (!relative_spec.empty()) {
                const DiscreteDist z =
                    relative_spec.find(':') != std::string::npos
                        ? detail::parse_discrete_family(relative_spec)
                        : read_pmf_csv_file(relative_spec);
                v = relative_lc(x, z, tol);
            } else if (class_name == "lc") {
                v = is_log_concave_discrete(x, tol);
            } else if (class_name == "ulc") {
                v = is_ulc(x, std::nullopt, tol);
            } else if (class_name.rfind("ulc:", 0) == 0) {
                v = is_ulc(x, std::stoi(class_name.substr(4)), tol);
            } else if (class_name == "log-affine") {
                v = is_log_affine(x,
                                  IntSupport{x.offset(),
                                             x.unbounded_family()
                                                 ? std::nullopt
                                                 : std::optional<long long>(x.max_support())},
                                  tol);
            } else {
                err << "error: unknown --class '" << class_name << "'\n";
                return 2;
            }
            out << "is_member," << (v.is_member ? "true" : "false") << '\n';
            out << "witness,";
            if (v.witness) out << *v.witness;
            out << '\n';
            out << "margin," << format_g12(v.margin) << '\n';
            return v.is_member ? 0 : 1;
        }

        if (bound->parsed()) {
            const Side side = side_name == "leq" ? Side::leq : Side::geq;
            const bool with_oracle = oracle_mode != "off";
            const std::vector<double> t_grid = detail::parse_t_grid(t_spec);
            BoundCurve curve;
            if (theorem == "t1_1") {
                curve = curve_sum_discrete_lc(detail::parse_csv_doubles(means_spec), t_grid,
                                              side, with_oracle);
            } else if (theorem == "t1_2") {
                const std::vector<double> w = detail::parse_csv_doubles(weights_spec);
                std::vector<ContinuousDist> summands(
                    w.size(), detail::parse_continuous_family(summand_spec));
                curve = curve_weighted_continuous(w, summands, t_grid, side, with_oracle,
                                                  mc_samples, seed);
            } else if (theorem == "t1_3") {
                curve = curve_ulc_n(arg_n, arg_mu, t_grid, side, with_oracle);
            } else if (theorem == "t1_4") {
                curve = curve_ulc(arg_mean, t_grid, side, with_oracle);
            } else if (theorem == "c3_3") {
                curve = curve_single_lc(arg_mean, t_grid, side, with_oracle);
            } else if (theorem == "chernoff") {
                if (chern_family.rfind("exponential", 0) == 0 ||
                    chern_family.rfind("uniform", 0) == 0 ||
                    chern_family.rfind("gaussian", 0) == 0) {
                    curve = curve_chernoff(detail::parse_continuous_family(chern_family),
                                           t_grid, side, with_oracle);
                } else {
                    curve = curve_chernoff(detail::parse_discrete_family(chern_family), t_grid,
                                           side, with_oracle);
                }
            } else {
                err << "error: unknown theorem '" << theorem << "'\n";
                return 2;
            }
            detail::OutFile sink(out_path, out);
            curve.write_csv(*sink.stream);
            return with_oracle && !curve.all_dominated() ? 1 : 0;
        }

        if (report->parsed()) {
            std::vector<SuiteRow> rows;
            if (suite == "majorize") {
                rows = majorize_suite(report_seed, draws);
            } else if (suite == "moments") {
                rows = moments_suite(report_seed, draws);
            } else if (suite == "entropy") {
                rows = entropy_suite(report_seed, draws);
            } else if (suite == "all") {
                rows = all_suites(report_seed, draws);
            } else {
                err << "error: unknown suite '" << suite << "'\n";
                return 2;
            }
            detail::OutFile sink(report_out, out);
            write_suite_csv(*sink.stream, rows);
            return all_gating_pass(rows) ? 0 : 1;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace lcx::cli
