#pragma once

#include "toti/permgroup.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toti {

enum class CertMethod { BruteClosure, StabilizerChain, TranspositionGraph };

const char* method_name(CertMethod m);

/// Exact finite answer to "does <generators> contain every target?".
struct GroupCertificate {
  std::size_t degree = 0;
  int level = -1;  // dyadic level of the atom grid, when there is one
  std::size_t generator_count = 0;
  std::string targets;
  bool verdict = false;
  CertMethod method = CertMethod::BruteClosure;
  std::optional<BigInt> order;  // |<generators>| when the method computes it
  std::string note;
};

nlohmann::ordered_json to_json(const GroupCertificate& c);

/// Brute-force closure below this many elements.
inline constexpr std::size_t kBruteClosureCap = 100000;

/// Membership of targets in <gens>. Degree <= 16: brute closure, falling back
/// to a stabilizer chain once the closure exceeds kBruteClosureCap. Larger
/// degrees first try the transposition-class test (which can only prove
/// containment) and otherwise build a stabilizer chain.
GroupCertificate group_contains(std::size_t degree, const std::vector<Perm>& gens,
                                const std::vector<Perm>& targets, std::string target_label);

}  // namespace toti
