#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ehcoop/analytic.hpp"
#include "ehcoop/params.hpp"
#include "ehcoop/simulate.hpp"
#include "ehcoop/sweep.hpp"

using namespace ehcoop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitCheckFailed = 3;

struct CliOptions {
    std::string config;
    std::string out_dir = ".";
    std::string snr_db;
    std::string pex;
    std::string source;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    double confidence = 0.95;
    bool svg = false;
    bool script = false;
    bool csv = false;
    bool check = false;
};

// "a:b:step" or a single dB value (start == stop).
SnrRange parse_snr_range(const std::string& text) {
    SnrRange r;
    const auto c1 = text.find(':');
    try {
        if (c1 == std::string::npos) {
            r.start_db = r.stop_db = std::stod(text);
            r.step_db = 1.0;
            return r;
        }
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw std::invalid_argument("");
        }
        r.start_db = std::stod(text.substr(0, c1));
        r.stop_db = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        r.step_db = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("--snr-db expects \"start:stop:step\" or a "
                                    "single value, got \"" + text + "\"");
    }
    return r;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("--pex expects comma-separated numbers, "
                                        "got \"" + item + "\"");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

void add_common_flags(CLI::App* sub, CliOptions* opt) {
    sub->add_option("--config", opt->config, "JSON config file (keys: system, energy, sweep)");
    sub->add_option("--trials", opt->trials, "Monte Carlo trials per cell");
    sub->add_option("--seed", opt->seed, "master PRNG seed");
    sub->add_option("--workers", opt->workers, "worker threads (0 = all cores)");
    sub->add_option("--confidence", opt->confidence, "CI level, e.g. 0.95");
    sub->add_option("--out-dir", opt->out_dir, "output directory");
    sub->add_option("--snr-db", opt->snr_db, "SNR in dB: start:stop:step or a single value");
    sub->add_option("--pex", opt->pex, "comma-separated energy-exhausted probabilities");
    sub->add_flag("--svg", opt->svg, "also write an SVG chart");
    sub->add_flag("--script", opt->script, "also write a gnuplot script");
    sub->add_flag("--check", opt->check, "verify MC agrees with the exact form (exit 3 on failure)");
}

SweepSpec build_spec(const CLI::App* sub, const CliOptions& opt, SweepMode mode) {
    SweepSpec spec;
    if (sub->count("--config")) {
        spec = load_config_file(opt.config);
    }
    spec.mode = mode;
    if (sub->count("--trials")) spec.trials = opt.trials;
    if (sub->count("--seed")) spec.seed = opt.seed;
    if (sub->count("--workers")) spec.workers = opt.workers;
    if (sub->count("--confidence")) spec.confidence = opt.confidence;
    if (sub->count("--svg")) spec.write_svg = true;
    if (sub->count("--script")) spec.write_script = true;
    if (sub->count("--pex")) {
        if (mode == SweepMode::kSinglePoint) {
            const auto values = parse_double_list(opt.pex);
            if (values.size() != 1) {
                throw std::invalid_argument("eval takes a single --pex value");
            }
            spec.energy.p_ex = values.front();
        } else {
            spec.pex_values = parse_double_list(opt.pex);
        }
    }
    if (sub->count("--snr-db")) {
        const SnrRange r = parse_snr_range(opt.snr_db);
        if (mode == SweepMode::kSinglePoint) {
            spec.system = system_from_snr_db(r.start_db, spec.system.bandwidth,
                                             spec.system.rate_min);
        } else if (mode == SweepMode::kPexSweep) {
            spec.fixed_snr_db = r.start_db;
        } else {
            spec.snr_db = r;
        }
    }
    return spec;
}

// Z-test of every row's MC column against the exact analytic value,
// with the binomial standard error taken at the analytic outage.
int check_agreement(const SweepResult& table) {
    int bad = 0;
    for (const auto& r : table.rows) {
        const double se = std::sqrt(r.p_coop_exact * (1.0 - r.p_coop_exact) /
                                    static_cast<double>(r.trials));
        if (std::fabs(r.p_mc - r.p_coop_exact) > 4.0 * se) {
            ++bad;
            std::fprintf(stderr,
                         "check: snr_db=%g p_ex=%g: |%.6g - %.6g| > 4*%.3g\n",
                         r.snr_db, r.p_ex, r.p_mc, r.p_coop_exact, se);
        }
    }
    std::printf("agreement check: %zu/%zu rows within 4 standard errors\n",
                table.rows.size() - bad, table.rows.size());
    return bad == 0 ? kExitOk : kExitCheckFailed;
}

void report_outputs(const std::vector<std::string>& paths,
                    const std::vector<std::string>& clamp_notes) {
    for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
    for (const auto& n : clamp_notes) {
        std::fprintf(stderr, "note: %s\n", n.c_str());
    }
}

int run_eval(const CLI::App* sub, const CliOptions& opt) {
    SweepSpec spec = build_spec(sub, opt, SweepMode::kSinglePoint);
    spec.write_csv = opt.csv;  // eval prints by default, writes on request

    const ParamBundle bundle = validate(spec.system, spec.energy);
    const SweepRow row = eval_point(spec);

    std::printf("operating point: rho_s=%.6g rho_r=%.6g (%.4g dB), p_ex=%g\n",
                bundle.rho_s, bundle.rho_r, linear_to_db(bundle.rho_s),
                bundle.energy.p_ex);
    std::printf("  thresholds: g1=%.17g g2=%.17g\n", bundle.g1, bundle.g2);
    std::printf("  direct outage (exact):     %.17g\n", row.p_direct_exact);
    std::printf("  coop outage (exact):       %.17g\n", row.p_coop_exact);
    std::printf("  coop outage (closed form): %.17g\n", row.p_coop_closed);
    std::printf("  relay outage (exact):      %.17g\n", relay_outage_exact(bundle));
    std::printf("  multiplicative gain:       %.17g\n", multiplicative_gain(bundle));
    std::printf("  predicted diversity:       %d\n",
                diversity_predicted(bundle.energy));
    std::printf("  Monte Carlo: p=%.6g se=%.3g CI[%.6g, %.6g] "
                "(trials=%llu seed=%llu)\n",
                row.p_mc, row.mc_se, row.mc_ci_lo, row.mc_ci_hi,
                static_cast<unsigned long long>(row.trials),
                static_cast<unsigned long long>(row.seed));

    if (spec.write_csv || spec.write_svg || spec.write_script) {
        SweepResult table;
        table.mode = SweepMode::kSinglePoint;
        table.rows.push_back(row);
        report_outputs(emit_outputs(table, spec, opt.out_dir), {});
    }
    if (opt.check) {
        SweepResult table;
        table.rows.push_back(row);
        return check_agreement(table);
    }
    return kExitOk;
}

int run_sweep(const CLI::App* sub, const CliOptions& opt, SweepMode mode) {
    const SweepSpec spec = build_spec(sub, opt, mode);
    const SweepResult table =
        mode == SweepMode::kSnrSweep ? run_snr_sweep(spec) : run_pex_sweep(spec);
    report_outputs(emit_outputs(table, spec, opt.out_dir), table.clamp_notes);
    if (opt.check) return check_agreement(table);
    return kExitOk;
}

int run_diversity_cmd(const CLI::App* sub, const CliOptions& opt) {
    SweepSpec spec = build_spec(sub, opt, SweepMode::kDiversity);
    if (sub->count("--source")) {
        if (opt.source == "analytic") {
            spec.diversity_source = CurveSource::kAnalytic;
        } else if (opt.source == "mc") {
            spec.diversity_source = CurveSource::kMonteCarlo;
        } else {
            throw std::invalid_argument("--source must be analytic or mc");
        }
    }
    const std::vector<DiversityRow> rows = run_diversity(spec);

    std::printf("%-10s %-10s %-12s %-12s %-8s %s\n", "p_ex", "predicted",
                "slope", "intercept", "points", "residual_rms");
    for (const auto& r : rows) {
        std::printf("%-10g %-10d %-12.5g %-12.5g %-8d %.3g\n", r.p_ex,
                    r.predicted, r.fit.slope, r.fit.intercept,
                    r.fit.points_used, r.fit.residual_rms);
    }

    if (spec.write_csv) {
        namespace fs = std::filesystem;
        fs::path dir(opt.out_dir.empty() ? "." : opt.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string());
        const fs::path path = dir / "diversity.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open " + path.string() + " for writing");
        out << to_csv(rows, spec.diversity_source);
        if (!out.good()) throw IoError("short write to " + path.string());
        std::printf("wrote %s\n", path.string().c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage probability of an energy-harvesting relay network: "
                 "closed forms and seeded Monte Carlo"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* eval = app.add_subcommand(
        "eval", "evaluate one operating point (analytic + Monte Carlo)");
    add_common_flags(eval, &opt);
    eval->add_flag("--csv", opt.csv, "also write eval.csv");

    CLI::App* snr = app.add_subcommand(
        "sweep-snr", "sweep SNR, one curve per p_ex value");
    add_common_flags(snr, &opt);

    CLI::App* pex = app.add_subcommand(
        "sweep-pex", "sweep p_ex at fixed SNR");
    add_common_flags(pex, &opt);

    CLI::App* div = app.add_subcommand(
        "diversity", "fit diversity order over a high-SNR window");
    add_common_flags(div, &opt);
    div->add_option("--source", opt.source,
                    "curve source for the fit: analytic or mc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (eval->parsed()) return run_eval(eval, opt);
        if (snr->parsed()) return run_sweep(snr, opt, SweepMode::kSnrSweep);
        if (pex->parsed()) return run_sweep(pex, opt, SweepMode::kPexSweep);
        if (div->parsed()) return run_diversity_cmd(div, opt);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
