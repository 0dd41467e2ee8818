#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

struct RandomSignature {
  std::size_t unary = 1;
  std::size_t binary = 1;
  std::size_t ternary = 0;
  double density = 0.35;
};

FiniteStructure random_structure(std::mt19937_64& rng, std::size_t size, const RandomSignature& sig = {});

// Finite part plus one Antichain(2) tail above some finite elements.
PosetPresentation random_nbc_presentation(std::mt19937_64& rng, std::size_t finite_size);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  std::string detail;  // first failure
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t sweep = 40;  // random instances per randomized check
  Caps caps;
};

// Cross-module invariant suite; every check is deterministic given the seed.
std::vector<CheckResult> run_verification(const VerifyOptions& opt);

}  // namespace scottlab
