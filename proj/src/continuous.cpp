#include "pns/continuous.hpp"

namespace pns {

ContinuousChain run_mh_continuous(const DonutsModel& model,
                                  double proposal_std, std::uint64_t budget,
                                  std::uint64_t seed) {
  ContinuousChain chain;
  mh_continuous_into(model, proposal_std, budget, seed,
                     [&chain](const Vec2& s, std::uint64_t m) {
                       chain.append(s, m);
                     });
  return chain;
}

ContinuousChain run_unbiased_pns_continuous(const DonutsModel& model,
                                            int num_pairs, std::uint64_t l0,
                                            std::uint64_t budget,
                                            std::uint64_t seed,
                                            ContinuousRunStats* stats) {
  ContinuousChain chain;
  unbiased_pns_continuous_into(model, num_pairs, l0, budget, seed,
                               [&chain](const Vec2& s, std::uint64_t m) {
                                 chain.append(s, m);
                               },
                               stats);
  return chain;
}

}  // namespace pns
