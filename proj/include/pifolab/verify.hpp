#ifndef PIFOLAB_VERIFY_HPP
#define PIFOLAB_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "pifolab/instance.hpp"
#include "pifolab/rng.hpp"

namespace pifo {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string message;
};

/// All registered invariant checks whose name starts with `scope`
/// (empty scope = everything), evaluated with reproducible randomness.
std::vector<VerifyResult> run_verification(const std::string& scope, std::uint64_t seed);

// Individual checks on caller-supplied instances (used by the registry and
// directly by tests that inject doctored instances).
VerifyResult verify_regularity(const FiniteSumInstance& inst, Rng& rng);
VerifyResult verify_convex_concavity(const FiniteSumInstance& inst, Rng& rng);
VerifyResult verify_aggregate_consistency(const FiniteSumInstance& inst, Rng& rng);
VerifyResult verify_gradient_fd(const FiniteSumInstance& inst, Rng& rng);
VerifyResult verify_prox_optimality(const FiniteSumInstance& inst, Rng& rng);
VerifyResult verify_jump(const FiniteSumInstance& inst, int points, Rng& rng);

}  // namespace pifo

#endif
