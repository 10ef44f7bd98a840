#pragma once

#include <string>

#include "bobak/domain.hpp"
#include "bobak/gp.hpp"
#include "bobak/rng.hpp"

namespace bobak {

enum class AcquisitionKind { ExpectedImprovement, LowerConfidenceBound };

struct AcquisitionConfig {
  AcquisitionKind kind = AcquisitionKind::ExpectedImprovement;
  double beta = 2.0;               // LCB exploration weight
  int candidate_count = 2000;      // uniform candidates per proposal
  int refine_steps = 20;           // coordinate-perturbation sweeps around the best candidate

  void validate() const;
};

std::string to_string(AcquisitionKind kind);
/// Accepts "ei" or "lcb" (case-insensitive); throws InvalidArgument otherwise.
AcquisitionKind parse_acquisition_kind(const std::string& text);

/// Expected improvement below best_y (minimization).
double expected_improvement(const Prediction& pred, double best_y);

/// mean - beta * stddev; lower is better.
double lcb(const Prediction& pred, double beta);

/// Acquisition expressed as a utility to maximize: EI itself, or -LCB.
double acquisition_utility(const Prediction& pred, double best_y, const AcquisitionConfig& cfg);

/// Maximizes the acquisition over `domain`: scores candidate_count uniform samples (ties go to
/// the earliest), then runs refine_steps sweeps of coordinate-wise perturbation with a shrinking
/// radius, accepting strict improvements only. The result always lies inside the box.
Point propose_next(const PosteriorModel& model, const Domain& domain, const AcquisitionConfig& cfg, Rng& rng);

}  // namespace bobak
