// nclab: command-line front end for the simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <fmt/format.h>

#include "nclab/analysis.hpp"
#include "nclab/errors.hpp"
#include "nclab/harness.hpp"
#include "nclab/keyshare.hpp"
#include "oracle/oracle.hpp"

namespace {

using nclab::ExperimentConfig;

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

// Options shared by the experiment subcommands. Every flag maps to a config
// key; flags given on the command line override the config file.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_path, "key = value config file");
    for (const auto& key : keys) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      app->add_option(flag, values[key], "overrides '" + key + "'");
    }
  }

  ExperimentConfig build(const CLI::App* app, ExperimentConfig config) const {
    if (!config_path.empty()) nclab::load_config_file(config, config_path);
    for (const auto& [key, value] : values) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app->count(flag) > 0) nclab::apply_setting(config, key, value);
    }
    nclab::validate(config);
    return config;
  }
};

const std::vector<std::string> kExperimentKeys = {"n",     "r",       "field",  "m_len",  "p",    "p_prime",
                                                  "cluster", "variant", "trials", "seed",   "output", "mode",
                                                  "layout", "payloads", "audit", "serial"};

// Writes through `emit` to the configured output, NCLAB_OUTPUT_DIR/<name>, or stdout.
template <class Emit>
void write_output(const ExperimentConfig& config, const std::string& default_name, Emit emit) {
  std::string path = config.output;
  if (path.empty()) {
    const std::string dir = nclab::default_output_dir();
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  emit(out);
  std::cerr << "wrote " << path << '\n';
}

int security_cost(std::uint64_t q, std::uint64_t r, std::uint64_t n) {
  const nclab::BigRational cost = nclab::brute_force_cost(q, r, n);
  using Dec = boost::multiprecision::cpp_dec_float_50;
  const Dec approx = Dec(boost::multiprecision::numerator(cost)) / Dec(boost::multiprecision::denominator(cost));
  std::cout << "exact: " << cost << '\n';
  std::cout << "decimal: " << approx.str(12, std::ios::scientific) << '\n';
  return 0;
}

// Reads the edge-list dump written by IdncGraph::write_edge_list.
oracle::SmallGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t vertices = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "v") {
      ++vertices;
    } else if (tag == "e") {
      std::size_t a = 0, b = 0;
      if (!(fields >> a >> b)) throw nclab::UsageError("bad edge line: " + line);
      edges.emplace_back(a, b);
    }
  }
  oracle::SmallGraph g(vertices);
  for (auto [a, b] : edges) {
    if (a >= vertices || b >= vertices) throw nclab::UsageError("edge names an unknown vertex");
    g.connect(a, b);
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nclab: secure multiple-unicast network coding simulator"};
  app.require_subcommand(1);

  // simulate central|coop
  auto* simulate = app.add_subcommand("simulate", "run Monte-Carlo trials of one cell and write per-trial CSV");
  std::string sim_scenario;
  simulate->add_option("scenario", sim_scenario, "central or coop")->required()->check(CLI::IsMember({"central", "coop"}));
  ConfigFlags sim_flags;
  sim_flags.attach(simulate, kExperimentKeys);
  std::string transcript_path;
  std::size_t transcript_trial = 0;
  simulate->add_option("--transcript", transcript_path, "write the round transcript of one trial here");
  simulate->add_option("--transcript-trial", transcript_trial, "trial whose transcript is written (default 0)");

  auto* predict = app.add_subcommand("predict", "iterate the analytical predictor and write its trace");
  std::string pred_scenario = "central";
  predict->add_option("scenario", pred_scenario, "central or coop")->check(CLI::IsMember({"central", "coop"}));
  ConfigFlags pred_flags;
  pred_flags.attach(predict, kExperimentKeys);

  auto* sweep = app.add_subcommand("sweep", "grid over r and p with per-cell aggregates");
  std::string sweep_scenario = "central";
  sweep->add_option("scenario", sweep_scenario, "central or coop")->check(CLI::IsMember({"central", "coop"}));
  ConfigFlags sweep_flags;
  sweep_flags.attach(sweep, kExperimentKeys);

  auto* compare = app.add_subcommand("compare", "simulated vs predicted removals per round");
  std::string cmp_scenario = "central";
  compare->add_option("scenario", cmp_scenario, "central or coop")->check(CLI::IsMember({"central", "coop"}));
  ConfigFlags cmp_flags;
  cmp_flags.attach(compare, kExperimentKeys);

  auto* cost = app.add_subcommand("security-cost", "brute-force guessing cost of a decoding row");
  std::uint64_t cost_q = 0, cost_r = 0, cost_n = 0;
  cost->add_option("--q", cost_q, "field order")->required();
  cost->add_option("--r", cost_r, "nonzeros per row")->required();
  cost->add_option("--n", cost_n, "clients")->required();

  auto* demo = app.add_subcommand("demo-intro", "run the four-client example in both scenarios");
  bool demo_verbose = false;
  demo->add_flag("-v,--verbose", demo_verbose, "print the transcripts");

  auto* instance = app.add_subcommand("instance", "write a generated instance file");
  std::size_t inst_n = 8, inst_r = 3, inst_mlen = 4;
  std::uint64_t inst_seed = 1;
  std::string inst_field = "gf256", inst_out;
  instance->add_option("--n", inst_n);
  instance->add_option("--r", inst_r);
  instance->add_option("--m-len", inst_mlen);
  instance->add_option("--seed", inst_seed);
  instance->add_option("--field", inst_field);
  instance->add_option("--output", inst_out);

  auto* oracle_cmd = app.add_subcommand("oracle", "exact clique checks on an edge-list dump");
  oracle_cmd->group("");  // hidden
  std::string oracle_path;
  oracle_cmd->add_option("graph", oracle_path, "edge-list file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*simulate) {
      ExperimentConfig base;
      base.scenario = sim_scenario;
      const auto config = sim_flags.build(simulate, base);
      const std::size_t r = config.r_values.front();
      const double p = config.p_values.front();
      if (!transcript_path.empty()) {
        std::ofstream out(transcript_path);
        if (!out) throw std::runtime_error("cannot write " + transcript_path);
        const auto rounds = sim_scenario == "central"
                                ? nclab::run_central_trial(config, r, p, transcript_trial, true).transcript
                                : nclab::run_coop_trial(config, r, p, transcript_trial, true).transcript;
        for (const auto& rec : rounds) out << nclab::format_round(rec) << '\n';
      }
      if (sim_scenario == "central") {
        const auto trials = nclab::run_central_cell(config, r, p);
        write_output(config, "central.csv", [&](std::ostream& out) { nclab::write_central_csv(out, trials, config.field); });
      } else {
        const auto trials = nclab::run_coop_cell(config, r, p);
        write_output(config, "coop.csv", [&](std::ostream& out) { nclab::write_coop_csv(out, trials, config.field); });
      }
    } else if (*predict) {
      ExperimentConfig base;
      base.scenario = "predict";
      const auto config = pred_flags.build(predict, base);
      nclab::PredictorParams params{config.n, config.r_values.front(), config.p_values.front(), config.p_prime,
                                    config.cluster, config.mode};
      const auto trace = pred_scenario == "central" ? nclab::predict_central(params) : nclab::predict_coop(params);
      write_output(config, "predict.csv", [&](std::ostream& out) { nclab::write_predict_csv(out, trace); });
      std::cerr << fmt::format("predicted {}={}{}\n", pred_scenario == "central" ? "T" : "T_c", trace.predicted,
                               trace.stalled ? " (stalled)" : "");
    } else if (*sweep) {
      ExperimentConfig base;
      base.scenario = sweep_scenario;
      const auto config = sweep_flags.build(sweep, base);
      const auto result = nclab::run_sweep(config);
      write_output(config, "sweep.csv", [&](std::ostream& out) { nclab::write_sweep_csv(out, result, config); });
    } else if (*compare) {
      ExperimentConfig base;
      base.scenario = cmp_scenario;
      const auto config = cmp_flags.build(compare, base);
      const auto cmp = nclab::compare_theory(config);
      write_output(config, "compare.csv", [&](std::ostream& out) { nclab::write_comparison_csv(out, cmp); });
      std::cerr << fmt::format("simulated mean {:.3f} (sd {:.3f}), predicted {}, ratio {:.3f}\n", cmp.sim_mean_total,
                               cmp.sim_std_total, cmp.predicted_total,
                               cmp.sim_mean_total > 0 ? static_cast<double>(cmp.predicted_total) / cmp.sim_mean_total : 0.0);
    } else if (*cost) {
      return security_cost(cost_q, cost_r, cost_n);
    } else if (*demo) {
      const auto outcome = nclab::run_intro_example();
      if (demo_verbose) {
        for (const auto& rec : outcome.central.transcript) std::cout << "central " << nclab::format_round(rec) << '\n';
        for (const auto& rec : outcome.coop.transcript) std::cout << "coop " << nclab::format_round(rec) << '\n';
      }
      std::cout << fmt::format("centralized T={}, cooperative T_c={}\n", outcome.central.T, outcome.coop.Tc);
    } else if (*instance) {
      const auto inst = nclab::make_instance(inst_n, inst_r, nclab::FieldSpec::parse(inst_field), inst_mlen, inst_seed);
      if (inst_out.empty()) {
        nclab::write_instance(std::cout, inst);
      } else {
        std::ofstream out(inst_out);
        if (!out) throw std::runtime_error("cannot write " + inst_out);
        nclab::write_instance(out, inst);
      }
    } else if (*oracle_cmd) {
      std::ifstream in(oracle_path);
      if (!in) throw nclab::UsageError("cannot open " + oracle_path);
      const auto g = read_edge_list(in);
      std::cout << "max_clique " << oracle::max_clique_exact(g).size() << '\n';
      if (g.size() <= 10) std::cout << "min_clique_cover " << oracle::min_clique_cover_exact(g) << '\n';
    }
  } catch (const nclab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return 0;
}
