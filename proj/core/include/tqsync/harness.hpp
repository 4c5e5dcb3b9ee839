#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tqsync/protocols.hpp"
#include "tqsync/rng.hpp"

namespace tqsync::harness {

/// Invalid experiment configuration. The message names the violated
/// precondition. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A self-test property failed. Maps to exit code 3.
class InvariantFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

enum class ProtocolId { SimpleOneWay, SimpleTwoWay, Improved, EntangledOneshot, EntangledBitwise, Hybrid };

std::string_view to_string(ProtocolId p);
std::optional<ProtocolId> parse_protocol(std::string_view s);

/// Offset in units of pi (T = omega t_BA / pi): a fixed value when lo == hi,
/// otherwise drawn uniformly from [lo, hi] for every run.
struct TruthSpec {
    double lo = 0.5;
    double hi = 0.5;
    bool fixed() const { return lo == hi; }
};

struct ExperimentConfig {
    ProtocolId protocol = ProtocolId::Improved;
    double omega = 1.0;
    TruthSpec T;
    double eta = 1.0;
    int k = 4;
    std::optional<int> k1;
    double eps = 0.1;
    std::uint64_t shots = 1000;
    std::uint64_t runs = 1;
    std::uint64_t qubits = 2;
    std::optional<std::uint64_t> seed;
    QuadratureMode mode = QuadratureMode::TwoQuadrature;
    bool count_lost_sends = true;
    std::string out;
};

/// Reads a JSON object. Unknown keys are rejected. Recognised keys: protocol,
/// omega, T (number), T_range ([lo, hi]), eta, k, k1, eps, shots, runs,
/// qubits, seed, mode, count_lost_sends, out.
ExperimentConfig parse_config(std::string_view json_text);
/// Applies every key present in `json_text` on top of `base`.
void merge_config(ExperimentConfig &base, std::string_view json_text);

/// Throws ConfigError unless the config satisfies the targeted protocol's
/// preconditions, including the fringe of the simple protocols.
void validate(const ExperimentConfig &cfg);

/// Compact, key-sorted JSON of every parameter that affects results (the
/// output path is excluded).
std::string canonical_json(const ExperimentConfig &cfg);
/// FNV-1a of canonical_json, as 16 hex digits.
std::string fingerprint(const ExperimentConfig &cfg);

/// Expected one-way sends the simulator records for one run, under the
/// config's channel and counting policy. A lost send leg is not followed by a
/// return leg, so a bounce attempt costs 1 + eta sends on average.
double expected_sends(const ExperimentConfig &cfg);

/// Upper bound on expected_sends for a single run.
inline constexpr double kMaxExpectedSends = 1e9;

/// One run with its hidden truth.
struct RunRecord {
    TruthModel truth;
    ProtocolReport report;
};

/// Draws the truth from rng.child("truth") and runs the protocol on
/// rng.child("protocol"). Does not validate.
RunRecord run_once(const ExperimentConfig &cfg, const RngStream &rng);

struct SingleResult {
    RunRecord record;
    std::string fingerprint;
    std::string json;
    std::string csv;  // header + one row
};

/// Validates, runs once on RngStream(seed).child("single"), renders.
SingleResult run_single(const ExperimentConfig &cfg);

std::string report_json(const ExperimentConfig &cfg, const RunRecord &rec);

/// Cartesian grid over the listed axes; an absent axis keeps the base value.
/// Rows enumerate eta (outermost), k, eps, shots, T (innermost).
struct SweepGrid {
    ExperimentConfig base;
    std::optional<std::vector<double>> eta;
    std::optional<std::vector<int>> k;
    std::optional<std::vector<double>> eps;
    std::optional<std::vector<std::uint64_t>> shots;
    std::optional<std::vector<double>> T;
};

/// Throws ConfigError for an explicitly empty axis.
std::vector<ExperimentConfig> expand(const SweepGrid &grid);

struct SweepRow {
    ExperimentConfig config;
    std::string fingerprint;
    std::uint64_t completed_runs = 0;
    double mean_estimate_t = 0.0;
    double rms_error_t = 0.0;
    /// Runs that threw or, for bitwise protocols, decided a wrong bit.
    double failure_rate = 0.0;
    double mean_sends = 0.0;
    double analytic_sends = 0.0;
    /// mean_sends / analytic_sends.
    double ratio = 0.0;
    std::string error;  // empty on success
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string to_csv() const;
};

/// Runs every grid row `base.runs` times. Row i uses
/// RngStream(seed).child("row", i).child("run", r), so output does not depend
/// on `jobs`. Invalid rows are recorded with their error and skipped.
SweepResult run_sweep(const SweepGrid &grid, unsigned jobs);

/// Rule for the error budget of each fig1 row.
struct EpsRule {
    /// eps = 2^{-k} when true, `fixed` otherwise.
    bool pow2 = true;
    double fixed = 0.01;
};

struct Fig1Row {
    double eta;
    int k;
    double cost_improved;
    double cost_sql;
    double ratio;
};

std::vector<Fig1Row> fig1_rows(const std::vector<double> &etas, int k_max, EpsRule rule);
/// Header `eta,k,cost_improved,cost_sql,ratio`, shortest round-trip decimals.
std::string fig1_csv(const std::vector<Fig1Row> &rows);

/// First k past the ratio's minimum (and past any region below 1) at which
/// lossy_improved / lossy_sql exceeds 1. Empty if the ratio never comes back
/// above 1 within [1, k_max].
std::optional<int> crossover_k(const std::vector<Fig1Row> &rows, double eta);

// RFC-4180 helpers.
std::string csv_field(std::string_view s);
std::string csv_number(double v);
std::string csv_line(const std::vector<std::string> &fields);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string &path, const std::string &text);

}  // namespace tqsync::harness
