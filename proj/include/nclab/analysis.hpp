#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nclab {

/// Largest clique in G(N, pi): 2 ln N / ln(1/pi). Returns 1 for N <= 1.
/// Throws DomainError unless 0 < pi < 1.
double clique_size_estimate(double n_vertices, double pi);

/// Marginal miss probability after repeat-until-covered seeding:
/// 1 - (1 - p) / (1 - p^c). Throws DomainError for p outside [0, 1) or c = 0.
double p_eff(double p, std::size_t cluster);

enum class PredictorMode { corrected, paper_literal };

std::string_view mode_name(PredictorMode mode);
PredictorMode parse_mode(std::string_view text);

struct PredictorParams {
  std::size_t n = 0;
  std::size_t r = 0;
  double p = 0.0;
  double p_prime = 0.0;     // coop only
  std::size_t cluster = 0;  // coop only
  PredictorMode mode = PredictorMode::corrected;
};

enum TraceFlag : unsigned {
  kPiClamped = 1U << 0,
  kPHatClamped = 1U << 1,
  kCliqueClamped = 1U << 2,
};

struct TraceRow {
  std::uint64_t t = 0;
  double n_t = 0.0;
  double p_hat = 0.0;
  double pi = 0.0;
  double clique_est = 0.0;
  double removal = 0.0;  // N_t - N_{t+1}; 0 on the final row
  unsigned flags = 0;
};

struct AnalysisTrace {
  std::vector<TraceRow> rows;  // t = 0, 1, ...
  std::uint64_t predicted = 0;  // T or T_c: the last t with N_t > 0
  bool stalled = false;
};

inline constexpr double kPiEpsilon = 1e-9;
inline constexpr double kStallRemoval = 1e-6;

/// Centralized recursion: N_0 = n r p, pi = ((n-1)/n)[(1-p^)^2 + p^^2],
/// N_{t+1} = N_t - 2(1-p) ln N_t / ln(1/pi). The recursion runs while
/// N_t > 1, where the clique estimate is defined.
AnalysisTrace predict_central(const PredictorParams& params);

/// Cooperative recursion with N_0 = n r p_eff and
/// pi_u = ((c-2)(c-1)/c^2)[(1-p^)^4 + (1-p^) p^^2]. Needs c >= 3.
AnalysisTrace predict_coop(const PredictorParams& params);

}  // namespace nclab
