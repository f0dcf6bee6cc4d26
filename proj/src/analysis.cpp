#include "nclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

double clique_size_estimate(double n_vertices, double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw DomainError(fmt::format("edge probability must lie in (0, 1), got {}", pi));
  if (n_vertices <= 1.0) return 1.0;
  return 2.0 * std::log(n_vertices) / std::log(1.0 / pi);
}

double p_eff(double p, std::size_t cluster) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError(fmt::format("p_eff needs p in [0, 1), got {}", p));
  if (cluster == 0) throw DomainError("p_eff needs a nonempty cluster");
  return 1.0 - (1.0 - p) / (1.0 - std::pow(p, static_cast<double>(cluster)));
}

std::string_view mode_name(PredictorMode mode) {
  return mode == PredictorMode::corrected ? "corrected" : "paper-literal";
}

PredictorMode parse_mode(std::string_view text) {
  if (text == "corrected") return PredictorMode::corrected;
  if (text == "paper-literal") return PredictorMode::paper_literal;
  throw UsageError(fmt::format("unknown predictor mode '{}' (corrected|paper-literal)", text));
}

namespace {

void check_common(const PredictorParams& params) {
  if (params.n < 1) throw UsageError("predictor needs n >= 1");
  if (params.r < 1 || params.r > params.n) throw UsageError("predictor needs 1 <= r <= n");
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw UsageError("p must lie in [0, 1]");
}

// Shared recursion. `edge_probability` maps p^(t) to pi(t); `delivery` is 1-p
// or 1-p'.
AnalysisTrace iterate(double n0, double p_hat0, double delivery, double nr, PredictorMode mode,
                      const std::function<double(double)>& edge_probability) {
  AnalysisTrace trace;
  double n_t = n0;
  double p_hat = p_hat0;
  for (std::uint64_t t = 0;; ++t) {
    TraceRow row{t, n_t, p_hat, 0.0, 0.0, 0.0, 0};
    double pi = edge_probability(p_hat);
    if (pi < kPiEpsilon || pi > 1.0 - kPiEpsilon) {
      pi = std::clamp(pi, kPiEpsilon, 1.0 - kPiEpsilon);
      row.flags |= kPiClamped;
    }
    row.pi = pi;
    if (n_t <= 1.0) {
      trace.rows.push_back(row);
      break;
    }
    const double raw = clique_size_estimate(n_t, pi);
    const double clique = std::min(n_t, std::max(1.0, raw));
    if (clique != raw) row.flags |= kCliqueClamped;
    row.clique_est = clique;
    row.removal = delivery * clique;
    if (row.removal < kStallRemoval) {
      row.removal = 0.0;
      trace.rows.push_back(row);
      trace.stalled = true;
      break;
    }
    trace.rows.push_back(row);
    const double next = n_t - row.removal;
    const double step = (n_t - next) / nr;  // vertices delivered, as a share of nr
    p_hat = mode == PredictorMode::corrected ? p_hat - step : p_hat + step;
    if (p_hat < 0.0 || p_hat > 1.0) {
      p_hat = std::clamp(p_hat, 0.0, 1.0);
      trace.rows.back().flags |= kPHatClamped;
    }
    n_t = next;
  }
  std::uint64_t last = 0;
  for (const auto& row : trace.rows)
    if (row.n_t > 0.0) last = row.t;
  trace.predicted = last;
  return trace;
}

}  // namespace

AnalysisTrace predict_central(const PredictorParams& params) {
  check_common(params);
  if (params.p >= 1.0) throw DomainError("the centralized predictor needs p < 1");
  const double n = static_cast<double>(params.n);
  const double nr = n * static_cast<double>(params.r);
  return iterate(nr * params.p, params.p, 1.0 - params.p, nr, params.mode, [n](double ph) {
    return (n - 1.0) / n * ((1.0 - ph) * (1.0 - ph) + ph * ph);
  });
}

AnalysisTrace predict_coop(const PredictorParams& params) {
  check_common(params);
  if (params.cluster < 3) throw DomainError("the cooperative predictor needs a cluster of at least 3 members");
  if (!(params.p_prime >= 0.0 && params.p_prime < 1.0)) throw DomainError("the cooperative predictor needs p' < 1");
  const double c = static_cast<double>(params.cluster);
  const double pe = p_eff(params.p, params.cluster);
  const double nr = static_cast<double>(params.n) * static_cast<double>(params.r);
  const double scale = (c - 2.0) * (c - 1.0) / (c * c);
  return iterate(nr * pe, pe, 1.0 - params.p_prime, nr, params.mode, [scale](double ph) {
    const double q = 1.0 - ph;
    return scale * (q * q * q * q + q * ph * ph);
  });
}

}  // namespace nclab
