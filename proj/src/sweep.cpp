#include "ehcoop/sweep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ehcoop/chart.hpp"
#include "ehcoop/simulate.hpp"

namespace ehcoop {

namespace {

constexpr const char* kCsvHeader =
    "snr_db,p_ex,p_direct_exact,p_coop_exact,p_coop_closed,"
    "p_mc,mc_se,mc_ci_lo,mc_ci_hi,trials,seed";

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// System scaled so that rho_s hits the requested SNR while the
// p_s : p_r ratio from the template is preserved.
SystemParams system_at_snr(const SystemParams& base, double snr_db) {
    const double factor = db_to_linear(snr_db) / (base.p_s / base.noise);
    SystemParams s = base;
    s.p_s *= factor;
    s.p_r *= factor;
    return s;
}

SweepRow make_row(const ParamBundle& bundle, double snr_db, double p_ex,
                  const SweepSpec& spec, std::uint64_t row_seed,
                  std::vector<std::string>* clamp_notes) {
    SweepRow row;
    row.snr_db = snr_db;
    row.p_ex = p_ex;
    row.p_direct_exact = direct_outage_exact(bundle);
    row.p_coop_exact = coop_outage_exact(bundle);
    bool clamped = false;
    row.p_coop_closed = coop_outage_closed_form(bundle, &clamped);
    if (clamped && clamp_notes) {
        clamp_notes->push_back("snr_db=" + fmt_short(snr_db) + " p_ex=" +
                               fmt_short(p_ex) + ": closed form clamped to [0,1]");
    }
    const OutageEstimate est = estimate_outage(
        bundle, spec.trials, row_seed,
        EstimateOptions{spec.workers, spec.confidence});
    row.p_mc = est.p_hat;
    row.mc_se = est.std_err;
    row.mc_ci_lo = est.ci_lo;
    row.mc_ci_hi = est.ci_hi;
    row.trials = est.trials;
    row.seed = est.seed;
    return row;
}

std::vector<double> default_pex_grid() {
    // 0 plus a quarter-decade log grid on [1e-4, 1].
    std::vector<double> grid = {0.0};
    for (int k = 0; k <= 16; ++k) {
        grid.push_back(std::pow(10.0, -4.0 + 0.25 * k));
    }
    grid.back() = 1.0;  // kill the last rounding wobble
    return grid;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out.good()) {
        throw IoError("short write to " + path.string());
    }
}

std::vector<ChartSeries> snr_chart_series(const SweepResult& table) {
    std::vector<double> pex_order;
    for (const auto& r : table.rows) {
        if (std::find(pex_order.begin(), pex_order.end(), r.p_ex) == pex_order.end()) {
            pex_order.push_back(r.p_ex);
        }
    }
    std::vector<ChartSeries> series;
    for (std::size_t i = 0; i < pex_order.size(); ++i) {
        const double pex = pex_order[i];
        const std::string color = kPalette[i % std::size(kPalette)];
        ChartSeries exact{"p_ex=" + fmt_short(pex), {}, color, false, false};
        ChartSeries closed{"", {}, color, true, false};
        ChartSeries mc{"", {}, color, false, true};
        for (const auto& r : table.rows) {
            if (r.p_ex != pex) continue;
            exact.points.emplace_back(r.snr_db, r.p_coop_exact);
            closed.points.emplace_back(r.snr_db, r.p_coop_closed);
            mc.points.emplace_back(r.snr_db, r.p_mc);
        }
        series.push_back(std::move(exact));
        series.push_back(std::move(closed));
        series.push_back(std::move(mc));
    }
    return series;
}

std::vector<ChartSeries> pex_chart_series(const SweepResult& table) {
    ChartSeries exact{"energy harvesting relay", {}, kPalette[0], false, false};
    ChartSeries mc{"Monte Carlo", {}, kPalette[0], false, true};
    double pex_min = 1.0, pex_max = 0.0;
    for (const auto& r : table.rows) {
        if (r.p_ex > 0.0) {
            exact.points.emplace_back(r.p_ex, r.p_coop_exact);
            mc.points.emplace_back(r.p_ex, r.p_mc);
            pex_min = std::min(pex_min, r.p_ex);
            pex_max = std::max(pex_max, r.p_ex);
        }
    }
    std::vector<ChartSeries> series{exact, mc};

    // Horizontal references: plain direct transmission, and the
    // constant-supply relay (the p_ex = 0 row when present).
    if (!table.rows.empty() && pex_max > pex_min) {
        const double direct = table.rows.back().p_direct_exact;
        series.push_back(ChartSeries{"direct only",
                                     {{pex_min, direct}, {pex_max, direct}},
                                     kPalette[1], true, false});
        if (table.rows.front().p_ex == 0.0) {
            const double constant = table.rows.front().p_coop_exact;
            series.push_back(ChartSeries{"constant supply",
                                         {{pex_min, constant}, {pex_max, constant}},
                                         kPalette[2], true, false});
        }
    }
    return series;
}

std::string render_svg(const SweepResult& table, const SweepSpec& spec) {
    ChartSpec cs;
    cs.y_label = "outage probability";
    cs.log_y = true;
    if (table.mode == SweepMode::kPexSweep) {
        cs.title = "Outage vs energy-exhausted probability at " +
                   fmt_short(spec.fixed_snr_db) + " dB";
        cs.x_label = "p_ex";
        cs.log_x = true;
        return render_line_chart(cs, pex_chart_series(table));
    }
    cs.title = "Outage vs SNR";
    cs.note = "solid: analytic exact, dashed: closed form, circles: Monte Carlo";
    cs.x_label = "SNR (dB)";
    return render_line_chart(cs, snr_chart_series(table));
}

std::string render_gnuplot(const SweepResult& table, const std::string& csv_name) {
    std::ostringstream gp;
    gp << "# gnuplot script; expects " << csv_name << " next to it\n"
       << "set datafile separator \",\"\n"
       << "set ylabel \"outage probability\"\n"
       << "set logscale y\n"
       << "set key bottom left\n";
    if (table.mode == SweepMode::kPexSweep) {
        gp << "set xlabel \"p_ex\"\n"
           << "set logscale x\n"
           << "plot \\\n"
           << "  \"" << csv_name << "\" using 2:($2>0?$4:1/0) with lines "
           << "title \"exact\", \\\n"
           << "  \"" << csv_name << "\" using 2:($2>0?$6:1/0) with points "
           << "title \"Monte Carlo\", \\\n"
           << "  \"" << csv_name << "\" using 2:($2>0?$3:1/0) with lines dt 2 "
           << "title \"direct only\"\n";
        return gp.str();
    }
    std::vector<double> pex_order;
    for (const auto& r : table.rows) {
        if (std::find(pex_order.begin(), pex_order.end(), r.p_ex) == pex_order.end()) {
            pex_order.push_back(r.p_ex);
        }
    }
    gp << "set xlabel \"SNR (dB)\"\n"
       << "plot \\\n";
    for (std::size_t i = 0; i < pex_order.size(); ++i) {
        const std::string v = fmt17(pex_order[i]);
        gp << "  \"" << csv_name << "\" using 1:($2==" << v
           << "?$4:1/0) with linespoints title \"p_ex=" << fmt_short(pex_order[i])
           << "\"" << (i + 1 < pex_order.size() ? ", \\\n" : "\n");
    }
    return gp.str();
}

}  // namespace

const char* mode_name(SweepMode mode) {
    switch (mode) {
        case SweepMode::kSinglePoint: return "single_point";
        case SweepMode::kSnrSweep: return "snr_sweep";
        case SweepMode::kPexSweep: return "pex_sweep";
        case SweepMode::kDiversity: return "diversity";
    }
    return "unknown";
}

void validate_spec(const SweepSpec& spec) {
    validate(spec.system, spec.energy);
    if (spec.trials == 0) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (!(spec.confidence > 0.0 && spec.confidence < 1.0)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }
    if (spec.workers < 0) {
        throw std::invalid_argument("workers must be >= 0");
    }
    if (spec.snr_db) {
        if (!(spec.snr_db->step_db > 0.0)) {
            throw std::invalid_argument("snr_db_range step must be > 0");
        }
        if (!(spec.snr_db->stop_db >= spec.snr_db->start_db)) {
            throw std::invalid_argument("snr_db_range is empty (stop < start)");
        }
    }
    for (double p : spec.pex_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("pex_values entries must lie in [0, 1]");
        }
    }
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t snr_index) {
    CounterRng rng(master_seed, static_cast<std::uint64_t>(snr_index));
    return rng.next_raw();
}

std::vector<double> snr_grid(const SnrRange& range) {
    std::vector<double> grid;
    const int count = static_cast<int>(
        std::floor((range.stop_db - range.start_db) / range.step_db + 1e-9));
    for (int i = 0; i <= count; ++i) {
        grid.push_back(range.start_db + i * range.step_db);
    }
    return grid;
}

SweepResult run_snr_sweep(const SweepSpec& spec) {
    if (spec.mode != SweepMode::kSnrSweep) {
        throw std::invalid_argument("run_snr_sweep requires mode snr_sweep");
    }
    validate_spec(spec);
    const std::vector<double> pex_list =
        spec.pex_values.empty() ? std::vector<double>{1.0, 0.1, 0.01, 0.0}
                                : spec.pex_values;

    SweepResult table;
    table.mode = spec.mode;
    const std::vector<double> grid =
        snr_grid(spec.snr_db.value_or(SnrRange{5.0, 40.0, 5.0}));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SystemParams sys = system_at_snr(spec.system, grid[i]);
        const std::uint64_t row_seed = cell_seed(spec.seed, i);
        for (double pex : pex_list) {
            EnergyModel energy = spec.energy;
            energy.p_ex = pex;
            const ParamBundle bundle = validate(sys, energy);
            table.rows.push_back(make_row(bundle, grid[i], pex, spec, row_seed,
                                          &table.clamp_notes));
        }
    }
    return table;
}

SweepResult run_pex_sweep(const SweepSpec& spec) {
    if (spec.mode != SweepMode::kPexSweep) {
        throw std::invalid_argument("run_pex_sweep requires mode pex_sweep");
    }
    validate_spec(spec);
    std::vector<double> pex_list =
        spec.pex_values.empty() ? default_pex_grid() : spec.pex_values;
    std::sort(pex_list.begin(), pex_list.end());

    SweepResult table;
    table.mode = spec.mode;
    const SystemParams sys = system_at_snr(spec.system, spec.fixed_snr_db);
    // One shared seed: common random numbers across the whole p_ex axis.
    const std::uint64_t row_seed = cell_seed(spec.seed, 0);
    for (double pex : pex_list) {
        EnergyModel energy = spec.energy;
        energy.p_ex = pex;
        const ParamBundle bundle = validate(sys, energy);
        table.rows.push_back(make_row(bundle, spec.fixed_snr_db, pex, spec,
                                      row_seed, &table.clamp_notes));
    }
    return table;
}

SweepRow eval_point(const SweepSpec& spec) {
    validate_spec(spec);
    const ParamBundle bundle = validate(spec.system, spec.energy);
    return make_row(bundle, linear_to_db(bundle.rho_s), spec.energy.p_ex, spec,
                    cell_seed(spec.seed, 0), nullptr);
}

std::vector<DiversityRow> run_diversity(const SweepSpec& spec) {
    if (spec.mode != SweepMode::kDiversity) {
        throw std::invalid_argument("run_diversity requires mode diversity");
    }
    validate_spec(spec);
    const std::vector<double> grid =
        snr_grid(spec.snr_db.value_or(SnrRange{30.0, 50.0, 2.0}));
    if (grid.size() < 2) {
        throw std::invalid_argument("diversity window needs at least 2 SNR points");
    }
    const std::vector<double> pex_list =
        spec.pex_values.empty() ? std::vector<double>{1.0, 0.1, 0.01, 0.0}
                                : spec.pex_values;

    std::vector<DiversityRow> rows;
    for (double pex : pex_list) {
        std::vector<std::pair<double, double>> points;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SystemParams sys = system_at_snr(spec.system, grid[i]);
            EnergyModel energy = spec.energy;
            energy.p_ex = pex;
            const ParamBundle bundle = validate(sys, energy);
            double p;
            if (spec.diversity_source == CurveSource::kAnalytic) {
                p = coop_outage_exact(bundle);
            } else {
                const OutageEstimate est = estimate_outage(
                    bundle, spec.trials, cell_seed(spec.seed, i),
                    EstimateOptions{spec.workers, spec.confidence});
                p = est.p_hat;
                if (p <= 0.0 || p >= 1.0) {
                    std::ostringstream msg;
                    msg << "Monte Carlo outage is " << p << " at "
                        << fmt_short(grid[i]) << " dB for p_ex=" << fmt_short(pex)
                        << "; raise --trials or use --source analytic";
                    throw std::invalid_argument(msg.str());
                }
            }
            points.emplace_back(bundle.rho_s, p);
        }
        DiversityRow row;
        row.p_ex = pex;
        EnergyModel energy = spec.energy;
        energy.p_ex = pex;
        row.predicted = diversity_predicted(energy);
        row.fit = diversity_fit(points);
        rows.push_back(row);
    }
    return rows;
}

std::string to_csv(const SweepResult& table) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& r : table.rows) {
        out << fmt17(r.snr_db) << ',' << fmt17(r.p_ex) << ','
            << fmt17(r.p_direct_exact) << ',' << fmt17(r.p_coop_exact) << ','
            << fmt17(r.p_coop_closed) << ',' << fmt17(r.p_mc) << ','
            << fmt17(r.mc_se) << ',' << fmt17(r.mc_ci_lo) << ','
            << fmt17(r.mc_ci_hi) << ','
            << static_cast<unsigned long long>(r.trials) << ','
            << static_cast<unsigned long long>(r.seed) << "\n";
    }
    return out.str();
}

std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("unexpected CSV header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 11) {
            throw std::invalid_argument("malformed CSV row: " + line);
        }
        auto as_double = [](const std::string& s) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
                throw std::invalid_argument("bad CSV number: " + s);
            }
            return v;
        };
        auto as_u64 = [](const std::string& s) {
            errno = 0;
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
            if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
                throw std::invalid_argument("bad CSV integer: " + s);
            }
            return static_cast<std::uint64_t>(v);
        };
        SweepRow r;
        r.snr_db = as_double(fields[0]);
        r.p_ex = as_double(fields[1]);
        r.p_direct_exact = as_double(fields[2]);
        r.p_coop_exact = as_double(fields[3]);
        r.p_coop_closed = as_double(fields[4]);
        r.p_mc = as_double(fields[5]);
        r.mc_se = as_double(fields[6]);
        r.mc_ci_lo = as_double(fields[7]);
        r.mc_ci_hi = as_double(fields[8]);
        r.trials = as_u64(fields[9]);
        r.seed = as_u64(fields[10]);
        rows.push_back(r);
    }
    return rows;
}

std::string to_csv(const std::vector<DiversityRow>& rows, CurveSource source) {
    std::ostringstream out;
    out << "p_ex,d_predicted,slope,intercept,points_used,residual_rms,source\n";
    for (const auto& r : rows) {
        out << fmt17(r.p_ex) << ',' << r.predicted << ',' << fmt17(r.fit.slope)
            << ',' << fmt17(r.fit.intercept) << ',' << r.fit.points_used << ','
            << fmt17(r.fit.residual_rms) << ','
            << (source == CurveSource::kAnalytic ? "analytic" : "mc") << "\n";
    }
    return out.str();
}

std::vector<std::string> emit_outputs(const SweepResult& table,
                                      const SweepSpec& spec,
                                      const std::string& out_dir) {
    if (table.rows.empty()) {
        throw IoError("refusing to write an empty table");
    }
    namespace fs = std::filesystem;
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " +
                      ec.message());
    }

    std::string base;
    switch (table.mode) {
        case SweepMode::kSnrSweep: base = "sweep_snr"; break;
        case SweepMode::kPexSweep: base = "sweep_pex"; break;
        case SweepMode::kSinglePoint: base = "eval"; break;
        case SweepMode::kDiversity: base = "diversity"; break;
    }

    std::vector<std::string> written;
    if (spec.write_csv) {
        const fs::path p = dir / (base + ".csv");
        write_text_file(p, to_csv(table));
        written.push_back(p.string());
    }
    if (spec.write_svg) {
        const fs::path p = dir / (base + ".svg");
        write_text_file(p, render_svg(table, spec));
        written.push_back(p.string());
    }
    if (spec.write_script) {
        const fs::path p = dir / (base + ".gp");
        write_text_file(p, render_gnuplot(table, base + ".csv"));
        written.push_back(p.string());
    }
    return written;
}

namespace {

SweepMode mode_from_name(const std::string& name) {
    if (name == "single_point") return SweepMode::kSinglePoint;
    if (name == "snr_sweep") return SweepMode::kSnrSweep;
    if (name == "pex_sweep") return SweepMode::kPexSweep;
    if (name == "diversity") return SweepMode::kDiversity;
    throw std::invalid_argument(
        "unknown mode \"" + name +
        "\" (expected single_point, snr_sweep, pex_sweep or diversity)");
}

}  // namespace

SweepSpec load_config(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                    e.what());
    }

    SweepSpec spec;
    try {
        if (j.contains("system")) {
            const auto& s = j.at("system");
            spec.system.p_s = s.value("p_s", spec.system.p_s);
            spec.system.p_r = s.value("p_r", spec.system.p_r);
            spec.system.noise = s.value("noise", spec.system.noise);
            spec.system.bandwidth = s.value("bandwidth", spec.system.bandwidth);
            spec.system.rate_min = s.value("rate_min", spec.system.rate_min);
        }
        if (j.contains("energy")) {
            const auto& e = j.at("energy");
            spec.energy.p_ex = e.value("p_ex", spec.energy.p_ex);
            if (e.contains("p_av") && !e.at("p_av").is_null()) {
                spec.energy.p_av = e.at("p_av").get<double>();
            }
            if (e.contains("t_block") && !e.at("t_block").is_null()) {
                spec.energy.t_block = e.at("t_block").get<double>();
            }
        }
        if (j.contains("sweep")) {
            const auto& w = j.at("sweep");
            if (w.contains("mode")) {
                spec.mode = mode_from_name(w.at("mode").get<std::string>());
            }
            if (w.contains("snr_db_range")) {
                const auto& r = w.at("snr_db_range");
                if (!r.is_array() || r.size() != 3) {
                    throw std::invalid_argument(
                        "snr_db_range must be [start, stop, step]");
                }
                spec.snr_db = SnrRange{r[0].get<double>(), r[1].get<double>(),
                                       r[2].get<double>()};
            }
            if (w.contains("pex_values")) {
                spec.pex_values = w.at("pex_values").get<std::vector<double>>();
            }
            spec.fixed_snr_db = w.value("fixed_snr_db", spec.fixed_snr_db);
            spec.trials = w.value("trials", spec.trials);
            spec.seed = w.value("seed", spec.seed);
            spec.confidence = w.value("confidence", spec.confidence);
            spec.workers = w.value("workers", spec.workers);
            if (w.contains("outputs")) {
                const auto& o = w.at("outputs");
                spec.write_csv = o.value("csv", spec.write_csv);
                spec.write_svg = o.value("svg", spec.write_svg);
                spec.write_script = o.value("script", spec.write_script);
            }
            if (w.contains("source")) {
                const std::string src = w.at("source").get<std::string>();
                if (src == "analytic") {
                    spec.diversity_source = CurveSource::kAnalytic;
                } else if (src == "mc") {
                    spec.diversity_source = CurveSource::kMonteCarlo;
                } else {
                    throw std::invalid_argument(
                        "source must be \"analytic\" or \"mc\"");
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return spec;
}

SweepSpec load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    return load_config(in);
}

}  // namespace ehcoop
