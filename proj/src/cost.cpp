#include "tokprune/cost.hpp"

#include <cmath>
#include <string>

namespace tokprune {
namespace {

std::string fmt_snprintf(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

void CostParams::validate() const {
  if (total_layers < 1) {
    throw Error(Errc::invalid_argument,
                "total_layers must be >= 1, got " + std::to_string(total_layers));
  }
  if (prune_layer < 0 || prune_layer > total_layers) {
    throw Error(Errc::invalid_argument,
                "prune_layer must lie in [0, total_layers], got " +
                    std::to_string(prune_layer));
  }
  if (text_len < 0 || orig_visual < 0) {
    throw Error(Errc::invalid_argument, "token counts must be >= 0");
  }
  if (pruned_visual < 0 || pruned_visual > orig_visual) {
    throw Error(Errc::invalid_argument,
                "pruned_visual must lie in [0, orig_visual], got " +
                    std::to_string(pruned_visual));
  }
  if (hidden_dim < 1 || ffn_dim < 1) {
    throw Error(Errc::invalid_argument, "model dims must be >= 1");
  }
  // Per-layer cost 4*mu*d^2 - 2*mu^2*d + 2*mu*d*m peaks at mu = d + m/2;
  // beyond it the quadratic attention term dominates negatively and the
  // formula stops modelling a real forward pass.
  const double peak = static_cast<double>(hidden_dim) +
                      static_cast<double>(ffn_dim) / 2.0;
  if (static_cast<double>(full_seq_len()) >= peak) {
    throw Error(Errc::invalid_argument,
                "sequence length " + std::to_string(full_seq_len()) +
                    " is outside the monotone regime (must be < d + m/2 = " +
                    fmt_snprintf("%.1f", peak) + ")");
  }
}

double layer_flops(std::int64_t seq_len, std::int64_t hidden_dim,
                   std::int64_t ffn_dim) {
  if (seq_len < 0 || hidden_dim < 1 || ffn_dim < 1) {
    throw Error(Errc::invalid_argument,
                "layer_flops requires seq_len >= 0 and dims >= 1");
  }
  const double mu = static_cast<double>(seq_len);
  const double d = static_cast<double>(hidden_dim);
  const double m = static_cast<double>(ffn_dim);
  return 4.0 * mu * d * d - 2.0 * mu * mu * d + 2.0 * mu * d * m;
}

double tflops_ratio(const CostParams& params) {
  params.validate();
  const double f_full = layer_flops(params.full_seq_len(), params.hidden_dim,
                                    params.ffn_dim);
  if (!(f_full > 0.0)) {
    throw Error(Errc::degenerate_model,
                "unpruned layer cost is not positive (sequence length " +
                    std::to_string(params.full_seq_len()) + ")");
  }
  // Identity cases return exactly 1.0: K*x + (T-K)*x need not equal T*x in
  // floating point, so they must not go through the general expression.
  if (params.pruned_visual == params.orig_visual ||
      params.prune_layer == params.total_layers) {
    return 1.0;
  }
  const double f_pruned = layer_flops(params.pruned_seq_len(),
                                      params.hidden_dim, params.ffn_dim);
  const double kept = static_cast<double>(params.prune_layer) * f_full +
                      static_cast<double>(params.total_layers - params.prune_layer) *
                          f_pruned;
  return kept / (static_cast<double>(params.total_layers) * f_full);
}

std::int64_t tokens_for_ratio(double target, const CostParams& params) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw Error(Errc::invalid_argument,
                "target ratio must lie in (0, 1], got " +
                    fmt_snprintf("%.17g", target));
  }
  CostParams probe = params;
  probe.pruned_visual = 0;
  const double floor_ratio = tflops_ratio(probe);
  if (floor_ratio > target) {
    throw Error(Errc::target_unachievable,
                "ratio at zero retained tokens is " +
                    fmt_snprintf("%.6f", floor_ratio) +
                    ", above the target " + fmt_snprintf("%.6f", target));
  }
  // tflops_ratio is nondecreasing in pruned_visual inside the validated
  // regime, so bisect for the largest count still within target.
  std::int64_t lo = 0;                    // ratio(lo) <= target
  std::int64_t hi = params.orig_visual;   // candidate upper end
  probe.pruned_visual = hi;
  if (tflops_ratio(probe) <= target) return hi;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    probe.pruned_visual = mid;
    if (tflops_ratio(probe) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace tokprune
