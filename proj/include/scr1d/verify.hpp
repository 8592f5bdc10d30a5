#pragma once

#include <cstdint>
#include <string>

#include "scr1d/charge_moment.hpp"

namespace scr1d {

// Randomized charge regions for the voltage-identity equivalence suites.
// Profiles cycle through polynomials (degree <= 6), piecewise constants
// (<= 5 pieces), Gaussian bumps and two-component mixtures, over bench-top,
// device (micrometer / C/m^3) and log-uniform magnitude regimes. About half
// the generated densities carry closed-form antiderivatives so both
// evaluation paths are exercised. E2 is always derived from E1 through
// Gauss's law, so every region passes the boundary-consistency check.
class RegionGenerator {
 public:
  explicit RegionGenerator(std::uint64_t seed);
  ~RegionGenerator();
  RegionGenerator(const RegionGenerator&) = delete;
  RegionGenerator& operator=(const RegionGenerator&) = delete;

  struct Case {
    ChargeRegion region;
    std::string description;
  };

  // A generic consistent region with arbitrary boundary fields.
  Case next();

  // A zero-net-charge region translated well away from the origin and given
  // equal nonzero boundary fields; exercises the x1*E1 - x2*E2 boundary
  // term of the voltage identity.
  Case next_translated();

 private:
  struct Impl;
  Impl* impl_;
};

struct EquivalenceReport {
  int cases = 0;
  double max_residual = 0.0;  // max of |scr_voltage - direct| / max(1, |V|)
  double bound = 0.0;
  int worst_index = -1;
  std::string worst_description;
  bool pass = false;
};

// Compares scr_voltage against potential_drop_direct on `cases` generated
// regions; passes when every residual is within 1e-8 * max(1, |V|).
EquivalenceReport run_equivalence_suite(std::uint64_t seed, int cases);

// Same comparison on translated zero-net-charge regions with nonzero
// boundary fields.
EquivalenceReport run_translation_suite(std::uint64_t seed, int cases);

}  // namespace scr1d
