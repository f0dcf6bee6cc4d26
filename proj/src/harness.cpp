#include "nclab/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "nclab/errors.hpp"
#include "nclab/idnc.hpp"

namespace nclab {

namespace {

std::size_t parse_size(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || text.front() == '-')
    throw UsageError(fmt::format("{}: expected a nonnegative integer, got '{}'", key, text));
  return static_cast<std::size_t>(value);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) throw UsageError(fmt::format("{}: expected a number, got '{}'", key, text));
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& part : parts) boost::trim(part);
  parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
  return parts;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : split_list(text)) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_size(key, part));
      continue;
    }
    const std::size_t lo = parse_size(key, part.substr(0, dots));
    const std::size_t hi = parse_size(key, part.substr(dots + 2));
    if (lo > hi) throw UsageError(fmt::format("{}: empty range '{}'", key, part));
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw UsageError(fmt::format("{}: empty list", key));
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(parse_double(key, part));
  if (out.empty()) throw UsageError(fmt::format("{}: empty list", key));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

}  // namespace

void apply_setting(ExperimentConfig& config, const std::string& raw_key, const std::string& raw_value) {
  std::string key = boost::trim_copy(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = boost::trim_copy(raw_value);
  if (key == "scenario") {
    if (value != "central" && value != "coop" && value != "predict" && value != "demo")
      throw UsageError(fmt::format("scenario: unknown '{}' (central|coop|predict|demo)", value));
    config.scenario = value;
  } else if (key == "n") {
    config.n = parse_size(key, value);
  } else if (key == "r") {
    config.r_values = parse_size_list(key, value);
  } else if (key == "field" || key == "q") {
    config.field = FieldSpec::parse(value);
  } else if (key == "m_len" || key == "mlen") {
    config.m_len = parse_size(key, value);
  } else if (key == "p") {
    config.p_values = parse_double_list(key, value);
  } else if (key == "p_prime") {
    config.p_prime = parse_double(key, value);
  } else if (key == "cluster") {
    config.cluster = parse_size(key, value);
  } else if (key == "variant") {
    config.variant = parse_variant(value);
  } else if (key == "trials") {
    config.trials = parse_size(key, value);
  } else if (key == "seed") {
    config.seed = parse_size(key, value);
  } else if (key == "output") {
    config.output = value;
  } else if (key == "mode") {
    config.mode = parse_mode(value);
  } else if (key == "layout") {
    if (value == "single") config.layout = CoopLayout::single;
    else if (value == "partition") config.layout = CoopLayout::partition;
    else throw UsageError(fmt::format("layout: unknown '{}' (single|partition)", value));
  } else if (key == "payloads") {
    config.payloads = parse_bool(key, value);
  } else if (key == "audit") {
    config.audit = parse_bool(key, value);
  } else if (key == "serial") {
    config.serial = parse_bool(key, value);
  } else {
    throw UsageError(fmt::format("unknown config key '{}'", raw_key));
  }
}

void load_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("config line {}: expected key = value", number));
    std::string value = boost::trim_copy(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    apply_setting(config, line.substr(0, eq), value);
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", path));
  load_config(config, in);
}

void validate(const ExperimentConfig& config) {
  if (config.n < 1) throw UsageError("n must be at least 1");
  if (config.m_len < 1) throw UsageError("m_len must be at least 1");
  const std::size_t q = config.field.order;
  for (std::size_t r : config.r_values)
    if (r < 1 || r > config.n || r > q - 1)
      throw UsageError(fmt::format("r = {} must satisfy 1 <= r <= min(n, q-1) = {}", r, std::min(config.n, q - 1)));
  for (double p : config.p_values)
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError(fmt::format("p = {} must lie in [0, 1]", p));
  if (!(config.p_prime >= 0.0 && config.p_prime <= 1.0)) throw UsageError("p' must lie in [0, 1]");
  if (config.scenario == "coop") {
    if (config.cluster < 1) throw UsageError("cluster must have at least one member");
    if (config.layout == CoopLayout::single && config.cluster > config.n)
      throw UsageError(fmt::format("cluster = {} exceeds n = {}", config.cluster, config.n));
    if (config.p_prime >= 1.0) throw UsageError("p' = 1 leaves the cooperative phase without a finite baseline");
    for (double p : config.p_values)
      if (p >= 1.0) throw UsageError("cooperative seeding needs p < 1");
  }
}

std::uint64_t cell_id(std::size_t n, std::size_t r, double p) {
  return derive_seed(n, r, std::bit_cast<std::uint64_t>(p));
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial) {
  return derive_seed(config.seed, cell_id(config.n, r, p), trial);
}

namespace {

struct Setup {
  FieldPtr field;
  std::optional<KeyedMatrix> keyed;
  std::vector<Message> messages;
  std::vector<Packet> packets;
};

Setup prepare(const ExperimentConfig& config, std::size_t r, Rng& rng) {
  Setup s;
  s.field = make_field(config.field);
  s.keyed.emplace(generate_keyed_matrix(config.n, r, s.field, rng));
  if (config.payloads) {
    s.messages = random_messages(config.n, config.m_len, *s.field, rng);
    s.packets = encode(s.keyed->matrix, s.messages);
  }
  return s;
}

std::size_t vertex_count(std::span<const ClientState> states) {
  std::size_t total = 0;
  for (const auto& s : states) total += s.want_count();
  return total;
}

void verify_decodes(const Setup& s, std::span<const ClientState> states) {
  for (const auto& st : states) {
    const Message got = decode_client(s.keyed->matrix, st.id, st.buffer);
    if (got.payload != s.messages[st.id].payload)
      throw AuditFailure(fmt::format("client {} decoded a wrong message", st.id + 1));
  }
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Runs body(trial) for every trial, in parallel unless serial, and rethrows
// the lowest-indexed failure.
template <class T, class Body>
std::vector<T> run_trials(std::size_t trials, bool serial, Body body) {
  std::vector<T> out(trials);
  std::vector<std::exception_ptr> errors(trials);
  const auto count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic) if (!serial)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = body(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

CentralTrial run_central_trial(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial,
                               bool keep_transcript) {
  CentralTrial out;
  out.n = config.n;
  out.r = r;
  out.p = p;
  out.variant = config.variant;
  out.trial = trial;
  out.seed = trial_seed(config, r, p, trial);
  Rng rng(out.seed);
  const Setup s = prepare(config, r, rng);
  const auto has = initial_broadcast_centralized(config.n, config.n, p, rng);
  auto states = build_status(s.keyed->matrix, has, s.packets, config.n);
  out.initial_vertices = vertex_count(states);

  CentralOptions options;
  options.variant = config.variant;
  options.erasure = p;
  options.audit = config.audit;
  options.keep_transcript = keep_transcript;
  options.payloads = {s.field.get(), s.packets};
  auto metrics = run_central(states, options, rng);
  if (config.payloads) verify_decodes(s, states);

  out.T = metrics.T;
  out.throughput_ratio = metrics.throughput_ratio;
  out.mean_listens = static_cast<double>(std::accumulate(metrics.listens.begin(), metrics.listens.end(), std::uint64_t{0})) /
                     static_cast<double>(config.n);
  out.removed_per_round = std::move(metrics.removed_per_round);
  out.transcript = std::move(metrics.transcript);
  return out;
}

CoopTrial run_coop_trial(const ExperimentConfig& config, std::size_t r, double p, std::size_t trial,
                         bool keep_transcript) {
  CoopTrial out;
  out.n = config.n;
  out.r = r;
  out.p = p;
  out.p_prime = config.p_prime;
  out.cluster = config.cluster;
  out.trial = trial;
  out.seed = trial_seed(config, r, p, trial);
  Rng rng(out.seed);
  const Setup s = prepare(config, r, rng);

  std::vector<std::vector<std::size_t>> clusters;
  if (config.layout == CoopLayout::single) {
    clusters.emplace_back(config.cluster);
    std::iota(clusters.back().begin(), clusters.back().end(), std::size_t{0});
  } else {
    for (std::size_t first = 0; first < config.n; first += config.cluster) {
      clusters.emplace_back();
      for (std::size_t i = first; i < std::min(config.n, first + config.cluster); ++i) clusters.back().push_back(i);
    }
  }

  double uc = 0.0;
  std::uint64_t round_offset = 0;
  for (const auto& ids : clusters) {
    const auto seeding = initial_broadcast_cooperative(ids.size(), config.n, p, rng);
    out.seed_retx += seeding.retransmissions(config.n);
    auto members = build_status(s.keyed->matrix, seeding.has, ids, s.packets, config.n);
    out.initial_vertices += vertex_count(members);

    CoopOptions options;
    options.erasure = config.p_prime;
    options.audit = config.audit;
    options.keep_transcript = keep_transcript;
    options.field = s.field.get();
    auto metrics = run_coop(members, options, rng);
    if (config.payloads) verify_decodes(s, members);

    out.Tc += metrics.Tc;
    out.wanted_union += metrics.baseline.wanted_union;
    uc += metrics.baseline.value();
    out.removed_per_round.insert(out.removed_per_round.end(), metrics.removed_per_round.begin(),
                                 metrics.removed_per_round.end());
    for (auto& rec : metrics.transcript) {
      // Transcript client numbers become matrix rows.
      rec.t += round_offset;
      auto remap = [&](std::vector<std::size_t>& v) {
        for (auto& c : v) c = ids[c];
      };
      remap(rec.targets);
      remap(rec.listeners);
      remap(rec.receivers);
      if (rec.transmitter) rec.transmitter = ids[*rec.transmitter];
      for (auto& c : rec.credits) c.client = ids[c.client];
      out.transcript.push_back(std::move(rec));
    }
    round_offset += metrics.Tc;
  }
  out.Uc = uc;
  if (out.Tc > 0) out.gain = uc / static_cast<double>(out.Tc);
  return out;
}

std::vector<CentralTrial> run_central_cell(const ExperimentConfig& config, std::size_t r, double p) {
  return run_trials<CentralTrial>(config.trials, config.serial,
                                  [&](std::size_t k) { return run_central_trial(config, r, p, k); });
}

std::vector<CoopTrial> run_coop_cell(const ExperimentConfig& config, std::size_t r, double p) {
  return run_trials<CoopTrial>(config.trials, config.serial,
                               [&](std::size_t k) { return run_coop_trial(config, r, p, k); });
}

void write_central_csv(std::ostream& out, const std::vector<CentralTrial>& trials, const FieldSpec& field) {
  out << "scenario,n,r,q,p,variant,trial,seed,T,throughput_ratio,mean_listens\n";
  for (const auto& t : trials)
    out << fmt::format("central,{},{},{},{},{},{},{},{},{},{}\n", t.n, t.r, field.order, t.p, variant_name(t.variant),
                       t.trial, t.seed, t.T, t.throughput_ratio, t.mean_listens);
}

void write_coop_csv(std::ostream& out, const std::vector<CoopTrial>& trials, const FieldSpec& field) {
  out << "scenario,n,r,q,p,p_prime,cluster,trial,seed,Tc,Uc,gain,seed_retx\n";
  for (const auto& t : trials)
    out << fmt::format("coop,{},{},{},{},{},{},{},{},{},{},{},{}\n", t.n, t.r, field.order, t.p, t.p_prime, t.cluster,
                       t.trial, t.seed, t.Tc, t.Uc, t.gain ? fmt::format("{}", *t.gain) : std::string(), t.seed_retx);
}

void write_predict_csv(std::ostream& out, const AnalysisTrace& trace) {
  out << "t,N_t,p_hat,pi,clique_est,removal\n";
  for (const auto& row : trace.rows)
    out << fmt::format("{},{},{},{},{},{}\n", row.t, row.n_t, row.p_hat, row.pi, row.clique_est, row.removal);
}

namespace {

std::vector<double> mean_removals(const std::vector<std::vector<std::size_t>>& per_trial) {
  std::size_t longest = 0;
  for (const auto& v : per_trial) longest = std::max(longest, v.size());
  std::vector<double> out(longest, 0.0);
  for (const auto& v : per_trial)
    for (std::size_t t = 0; t < v.size(); ++t) out[t] += static_cast<double>(v[t]);
  for (auto& x : out) x /= static_cast<double>(per_trial.size());
  return out;
}

PredictorParams predictor_params(const ExperimentConfig& config, std::size_t r, double p) {
  PredictorParams params;
  params.n = config.n;
  params.r = r;
  params.p = p;
  params.p_prime = config.p_prime;
  params.cluster = config.cluster;
  params.mode = config.mode;
  return params;
}

std::string sanitize(std::string text) {
  for (auto& ch : text)
    if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
  return text;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, bool with_predictor) {
  validate(config);
  SweepResult result;
  const bool coop = config.scenario == "coop";
  for (double p : config.p_values) {
    for (std::size_t r : config.r_values) {
      SweepRow row;
      row.scenario = coop ? "coop" : "central";
      row.n = config.n;
      row.r = r;
      row.p = p;
      row.trials = config.trials;
      try {
        std::vector<std::vector<std::size_t>> removals;
        std::vector<double> listens, ratios, gains;
        if (coop) {
          for (auto& t : run_coop_cell(config, r, p)) {
            row.per_trial_T.push_back(static_cast<double>(t.Tc));
            if (t.gain) gains.push_back(*t.gain);
            removals.push_back(std::move(t.removed_per_round));
          }
          if (!gains.empty()) row.mean_gain = mean(gains);
        } else {
          for (auto& t : run_central_cell(config, r, p)) {
            row.per_trial_T.push_back(static_cast<double>(t.T));
            ratios.push_back(t.throughput_ratio);
            listens.push_back(t.mean_listens);
            removals.push_back(std::move(t.removed_per_round));
          }
        }
        row.mean_T = mean(row.per_trial_T);
        row.std_T = stddev(row.per_trial_T);
        row.mean_ratio = mean(ratios);
        row.mean_listens = mean(listens);
        row.mean_removals = mean_removals(removals);
      } catch (const std::exception& e) {
        row.status = sanitize(fmt::format("error: {}", e.what()));
      }
      if (with_predictor) {
        try {
          const auto params = predictor_params(config, r, p);
          if (coop) {
            if (config.cluster >= 3 && p < 1.0) row.predicted_T = predict_coop(params).predicted;
          } else if (p > 0.0 && p < 1.0) {
            row.predicted_T = predict_central(params).predicted;
          } else if (p == 0.0) {
            row.predicted_T = 0;
          }
        } catch (const std::exception&) {
          // Predictor outside its domain; the column stays empty.
        }
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const ExperimentConfig& config) {
  out << "scenario,n,r,q,p,p_prime,cluster,variant,trials,mean_T,std_T,mean_throughput_ratio,mean_gain,"
         "mean_listens,predicted_T,mean_removals,status\n";
  const bool coop = config.scenario == "coop";
  for (const auto& row : result.rows) {
    std::string removals;
    for (std::size_t t = 0; t < row.mean_removals.size(); ++t)
      removals += fmt::format("{}{}", t ? ";" : "", row.mean_removals[t]);
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", row.scenario, row.n, row.r,
                       config.field.order, row.p, coop ? fmt::format("{}", config.p_prime) : std::string(),
                       coop ? fmt::format("{}", config.cluster) : std::string(),
                       coop ? std::string() : std::string(variant_name(config.variant)), row.trials, row.mean_T,
                       row.std_T, coop ? std::string() : fmt::format("{}", row.mean_ratio),
                       row.mean_gain ? fmt::format("{}", *row.mean_gain) : std::string(),
                       coop ? std::string() : fmt::format("{}", row.mean_listens),
                       row.predicted_T ? fmt::format("{}", *row.predicted_T) : std::string(), removals, row.status);
  }
}

Comparison compare_theory(const ExperimentConfig& config) {
  validate(config);
  const std::size_t r = config.r_values.front();
  const double p = config.p_values.front();
  const bool coop = config.scenario == "coop";
  Comparison cmp;
  const auto params = predictor_params(config, r, p);
  cmp.trace = coop ? predict_coop(params) : predict_central(params);
  cmp.predicted_total = cmp.trace.predicted;

  std::vector<std::vector<std::size_t>> removals;
  std::vector<double> totals;
  if (coop) {
    for (auto& t : run_coop_cell(config, r, p)) {
      totals.push_back(static_cast<double>(t.Tc));
      removals.push_back(std::move(t.removed_per_round));
    }
  } else {
    for (auto& t : run_central_cell(config, r, p)) {
      totals.push_back(static_cast<double>(t.T));
      removals.push_back(std::move(t.removed_per_round));
    }
  }
  cmp.sim_mean_total = mean(totals);
  cmp.sim_std_total = stddev(totals);
  const auto sim = mean_removals(removals);
  const std::size_t rounds = std::max(sim.size(), cmp.trace.rows.size());
  for (std::size_t t = 0; t < rounds; ++t) {
    ComparisonRow row;
    row.t = t + 1;
    row.sim_mean_removed = t < sim.size() ? sim[t] : 0.0;
    row.predicted_removal = t < cmp.trace.rows.size() ? cmp.trace.rows[t].removal : 0.0;
    cmp.rows.push_back(row);
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison) {
  out << "t,sim_mean_removed,predicted_removal\n";
  for (const auto& row : comparison.rows)
    out << fmt::format("{},{},{}\n", row.t, row.sim_mean_removed, row.predicted_removal);
}

IntroExample make_intro_example(std::uint64_t seed) {
  IntroExample ex;
  ex.field = make_field(FieldSpec::binary(8));
  constexpr std::size_t n = 4;
  // alpha_jj = 0, every other coefficient nonzero. J - I is invertible over GF(256).
  std::vector<Symbol> entries(n * n, 0);
  const Symbol coeff[n][n] = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = coeff[i][j];
  ex.matrix.emplace(ex.field, n, std::move(entries));
  Rng rng(seed);
  ex.messages = random_messages(n, 8, *ex.field, rng);
  ex.packets = encode(*ex.matrix, ex.messages);
  const std::size_t holdings[n][3] = {{0, 1, 2}, {1, 2, 3}, {2, 3, 0}, {3, 0, 1}};
  for (const auto& row : holdings) {
    BitSet has(n);
    for (std::size_t j : row) has.set(j);
    ex.has.push_back(has);
  }
  return ex;
}

IntroOutcome run_intro_example(std::uint64_t seed) {
  const IntroExample ex = make_intro_example(seed);
  IntroOutcome out;
  Rng rng(seed);
  {
    auto states = build_status(*ex.matrix, ex.has, ex.packets, 4);
    CentralOptions options;
    options.keep_transcript = true;
    options.payloads = {ex.field.get(), ex.packets};
    out.central = run_central(states, options, rng);
    for (const auto& s : states)
      if (decode_client(*ex.matrix, s.id, s.buffer).payload != ex.messages[s.id].payload)
        throw AuditFailure("intro example: centralized decode mismatch");
  }
  {
    auto states = build_status(*ex.matrix, ex.has, ex.packets, 4);
    CoopOptions options;
    options.keep_transcript = true;
    options.field = ex.field.get();
    out.coop = run_coop(states, options, rng);
    for (const auto& s : states)
      if (decode_client(*ex.matrix, s.id, s.buffer).payload != ex.messages[s.id].payload)
        throw AuditFailure("intro example: cooperative decode mismatch");
  }
  return out;
}

std::string default_output_dir() {
  const char* dir = std::getenv("NCLAB_OUTPUT_DIR");
  return dir ? std::string(dir) : std::string();
}

}  // namespace nclab
