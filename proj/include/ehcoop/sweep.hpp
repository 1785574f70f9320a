#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehcoop/analytic.hpp"
#include "ehcoop/params.hpp"

namespace ehcoop {

enum class SweepMode { kSinglePoint, kSnrSweep, kPexSweep, kDiversity };
enum class CurveSource { kAnalytic, kMonteCarlo };

struct SnrRange {
    double start_db = 5.0;
    double stop_db = 40.0;
    double step_db = 5.0;
};

// One experiment description: what to sweep, how hard to simulate, and
// what to write. `system` fixes bandwidth, rate target and the
// p_s : p_r ratio; SNR points rescale both powers together.
struct SweepSpec {
    SweepMode mode = SweepMode::kSnrSweep;
    // Empty selects the per-mode default: 5:40:5 dB for SNR sweeps,
    // the 30:50:2 dB high-SNR window for diversity fits.
    std::optional<SnrRange> snr_db;
    // Empty selects the per-mode default: the figure's curve set
    // {1, 0.1, 0.01, 0} for SNR sweeps and diversity, a logarithmic
    // grid over [1e-4, 1] (plus 0) for p_ex sweeps.
    std::vector<double> pex_values;
    double fixed_snr_db = 20.0;                       // pex_sweep
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 12345;
    double confidence = 0.95;
    int workers = 0;
    bool write_csv = true;
    bool write_svg = false;
    bool write_script = false;
    CurveSource diversity_source = CurveSource::kAnalytic;
    SystemParams system;
    EnergyModel energy;
};

// One sweep cell; the columns of the CSV schema, in order.
struct SweepRow {
    double snr_db = 0.0;
    double p_ex = 0.0;
    double p_direct_exact = 0.0;
    double p_coop_exact = 0.0;
    double p_coop_closed = 0.0;
    double p_mc = 0.0;
    double mc_se = 0.0;
    double mc_ci_lo = 0.0;
    double mc_ci_hi = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    SweepMode mode = SweepMode::kSnrSweep;
    std::vector<SweepRow> rows;
    std::vector<std::string> clamp_notes;  // cells where a clamp fired
};

struct DiversityRow {
    double p_ex = 0.0;
    int predicted = 0;
    DiversityFit fit;
};

// Thrown for unwritable/unreadable output paths (CLI exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Range/field checks shared by all runners; throws std::invalid_argument.
void validate_spec(const SweepSpec& spec);

// Derived per-cell seed: a function of the master seed and the SNR grid
// index only, so every p_ex value at one SNR reuses the same random
// numbers (common random numbers -> per-trial monotone coupling).
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t snr_index);

// dB grid described by an SnrRange, endpoints included.
std::vector<double> snr_grid(const SnrRange& range);

// Fig.-2-style experiment: rows ordered SNR-major, then by pex_values.
SweepResult run_snr_sweep(const SweepSpec& spec);

// Fig.-3-style experiment at fixed SNR over a p_ex grid (ascending,
// with 0 and 1 present as the constant-supply and direct references).
// An empty spec.pex_values selects the default logarithmic grid.
SweepResult run_pex_sweep(const SweepSpec& spec);

// Single operating point taken verbatim from spec.system / spec.energy.
SweepRow eval_point(const SweepSpec& spec);

// Per-p_ex diversity-order fit over the configured SNR window. MC source
// with a zero (or saturated) estimate in the window throws with
// guidance to raise trials.
std::vector<DiversityRow> run_diversity(const SweepSpec& spec);

// CSV with the fixed schema header, floats at 17 significant digits.
std::string to_csv(const SweepResult& table);
std::vector<SweepRow> parse_csv(std::istream& in);

std::string to_csv(const std::vector<DiversityRow>& rows, CurveSource source);

// Writes CSV/SVG/script per the configured output flags into out_dir,
// returning the
// paths. Refuses to write an empty table (IoError).
std::vector<std::string> emit_outputs(const SweepResult& table,
                                      const SweepSpec& spec,
                                      const std::string& out_dir);

// JSON config document with top-level keys "system", "energy", "sweep".
// Missing keys keep their defaults.
SweepSpec load_config(std::istream& in);
SweepSpec load_config_file(const std::string& path);

const char* mode_name(SweepMode mode);

}  // namespace ehcoop
