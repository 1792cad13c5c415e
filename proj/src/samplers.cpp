#include "pns/samplers.hpp"

#include <stdexcept>

namespace pns {

void validate_sampler_config(const SamplerConfig& cfg, int move_count,
                             int degree) {
  if (cfg.budget < 1) throw std::invalid_argument("budget must be >= 1");
  const auto& s = cfg.scheme;
  auto check_subset_size = [&](int limit) {
    if (s.set_size < 1 || s.set_size > limit)
      throw std::invalid_argument("invalid scheme: set size out of range");
  };
  switch (cfg.method) {
    case Method::MH:
    case Method::RF:
      break;  // scheme ignored
    case Method::BasicPNS:
      if (s.kind == SchemeKind::Full) break;  // degenerate: full neighbor set
      check_subset_size(degree);
      break;
    case Method::MHAlternating:
    case Method::RFAlternating:
    case Method::UnbiasedPNS:
    case Method::UnbiasedPNSNaive:
      if (s.budget_l0 < 1)
        throw std::invalid_argument("window length L0 must be >= 1");
      switch (s.kind) {
        case SchemeKind::Full:
          break;
        case SchemeKind::SystematicPartition:
        case SchemeKind::RandomSubset:
          check_subset_size(move_count);
          break;
        case SchemeKind::ExplicitSets:
          if (s.explicit_sets.empty())
            throw std::invalid_argument("explicit scheme needs sets");
          break;
        case SchemeKind::ContinuousSymmetricPairs:
          throw std::invalid_argument(
              "continuous scheme on a discrete sampler");
      }
      break;
    case Method::MHContinuous:
    case Method::UnbiasedPNSContinuous:
      throw std::invalid_argument(
          "continuous methods do not run on discrete models");
  }
}

}  // namespace pns
