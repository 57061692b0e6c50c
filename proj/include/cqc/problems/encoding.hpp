#pragma once

#include "cqc/model.hpp"

namespace cqc {

/// Output of a problem encoder: everything in the cooling model except the
/// coupling strength, plus the encoder's default cavity configuration.
struct ProblemEncoding {
  ProblemHamiltonian problem;
  TransitionTerm transition;
  CavityBank cavities;
  int alpha0 = 0;

  CoolingModelSpec model(double lambda) const {
    CoolingModelSpec spec{problem, transition, cavities, lambda, alpha0};
    spec.validate();
    return spec;
  }
};

}  // namespace cqc
