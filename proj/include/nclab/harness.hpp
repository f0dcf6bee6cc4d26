#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nclab/analysis.hpp"
#include "nclab/central.hpp"
#include "nclab/channel.hpp"
#include "nclab/coop.hpp"
#include "nclab/galois.hpp"

namespace nclab {

// How a cooperative experiment covers the n clients: one cluster of the
// configured size, or all n clients split into consecutive clusters.
enum class CoopLayout { single, partition };

struct ExperimentConfig {
  std::string scenario = "central";  // central | coop | predict | demo
  std::size_t n = 20;
  std::vector<std::size_t> r_values{10};
  FieldSpec field = FieldSpec::binary(8);
  std::size_t m_len = 32;
  std::vector<double> p_values{0.3};
  double p_prime = 0.05;
  std::size_t cluster = 8;
  Variant variant = Variant::basic;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string output;
  PredictorMode mode = PredictorMode::corrected;
  CoopLayout layout = CoopLayout::single;
  bool payloads = true;  // carry payloads and verify every decode
  bool audit = true;
  bool serial = false;   // run trials on one thread
};

/// Applies one key = value setting. Lists accept "a,b,c" and integer
/// ranges "lo..hi". Throws UsageError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Reads "key = value" lines; '#' starts a comment.
void load_config(ExperimentConfig& config, std::istream& in);
void load_config_file(ExperimentConfig& config, const std::string& path);
/// Checks every parameter before a trial runs.
void validate(const ExperimentConfig& config);

/// Seed of one trial. The cell id comes from the parameters, so a cell keeps
/// its seeds whatever grid it appears in and whatever variant runs on it.
std::uint64_t cell_id(std::size_t n, std::size_t r, double p);
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial);

struct CentralTrial {
  std::size_t n = 0, r = 0;
  double p = 0.0;
  Variant variant = Variant::basic;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t T = 0;
  double throughput_ratio = 1.0;
  double mean_listens = 0.0;  // recovery phase, per client
  std::vector<std::size_t> removed_per_round;
  std::size_t initial_vertices = 0;
  std::vector<RoundRecord> transcript;  // kept on request
};

struct CoopTrial {
  std::size_t n = 0, r = 0;
  double p = 0.0, p_prime = 0.0;
  std::size_t cluster = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t Tc = 0;
  double Uc = 0.0;
  std::optional<double> gain;
  std::uint64_t seed_retx = 0;
  std::size_t wanted_union = 0;
  std::vector<std::size_t> removed_per_round;
  std::size_t initial_vertices = 0;
  std::vector<RoundRecord> transcript;
};

/// Keys, matrix, messages, encoding, broadcast, status, recovery (audited),
/// then a decode of every message against the original.
CentralTrial run_central_trial(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial,
                               bool keep_transcript = false);
CoopTrial run_coop_trial(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial,
                         bool keep_transcript = false);

// All trials of one cell, in trial order. Parallel unless config.serial.
std::vector<CentralTrial> run_central_cell(const ExperimentConfig& config, std::size_t r, double p);
std::vector<CoopTrial> run_coop_cell(const ExperimentConfig& config, std::size_t r, double p);

void write_central_csv(std::ostream& out, const std::vector<CentralTrial>& trials, const FieldSpec& field);
void write_coop_csv(std::ostream& out, const std::vector<CoopTrial>& trials, const FieldSpec& field);
void write_predict_csv(std::ostream& out, const AnalysisTrace& trace);

struct SweepRow {
  std::string scenario;
  std::size_t n = 0, r = 0;
  double p = 0.0;
  std::size_t trials = 0;
  double mean_T = 0.0;
  double std_T = 0.0;
  double mean_ratio = 0.0;  // central only
  std::optional<double> mean_gain;  // coop only
  double mean_listens = 0.0;
  std::optional<std::uint64_t> predicted_T;
  std::vector<double> mean_removals;  // per round, over trials
  std::string status = "ok";
  std::vector<double> per_trial_T;    // kept so aggregates can be recomputed
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Every (r, p) cell of the config. A cell whose trials throw becomes a
/// diagnostic row instead of aborting the sweep.
SweepResult run_sweep(const ExperimentConfig& config, bool with_predictor = true);
void write_sweep_csv(std::ostream& out, const SweepResult& result, const ExperimentConfig& config);

struct ComparisonRow {
  std::uint64_t t = 0;  // 1-based transmission
  double sim_mean_removed = 0.0;
  double predicted_removal = 0.0;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double sim_mean_total = 0.0;
  double sim_std_total = 0.0;
  std::uint64_t predicted_total = 0;
  AnalysisTrace trace;
};

/// Simulated per-round removals against the predictor trace for the first
/// r and p of the config.
Comparison compare_theory(const ExperimentConfig& config);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

/// The four-client instance with Gamma_1 = {1,2,3}, ..., Gamma_4 = {4,1,2}
/// and alpha_jj = 0, over GF(256).
struct IntroExample {
  FieldPtr field;
  std::vector<Packet> packets;
  std::vector<Message> messages;
  std::optional<DecodingMatrix> matrix;
  std::vector<BitSet> has;
};
IntroExample make_intro_example(std::uint64_t seed = 7);

struct IntroOutcome {
  CentralMetrics central;
  CoopMetrics coop;
};
IntroOutcome run_intro_example(std::uint64_t seed = 7);

/// NCLAB_OUTPUT_DIR when set, else empty.
std::string default_output_dir();

}  // namespace nclab
