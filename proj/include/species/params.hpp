#pragma once

#include <cmath>
#include <string>

#include "species/errors.hpp"

namespace species {

enum class Family { NGG, PD };

inline std::string to_string(Family f) { return f == Family::NGG ? "ngg" : "pd"; }

/// Prior configuration: NGG(σ, β) or PD(σ, θ). β = 0 is admitted as the
/// normalized σ-stable boundary case, which coincides with PD(σ, 0).
struct ModelParams {
  Family family = Family::NGG;
  double sigma = 0.5;
  double beta = 1.0;   // NGG only
  double theta = 0.0;  // PD only

  static ModelParams ngg(double sigma, double beta) {
    ModelParams p{Family::NGG, sigma, beta, 0.0};
    p.validate();
    return p;
  }
  static ModelParams pd(double sigma, double theta) {
    ModelParams p{Family::PD, sigma, 0.0, theta};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("ModelParams: sigma must lie in (0, 1)");
    if (family == Family::NGG && !(beta >= 0.0 && std::isfinite(beta))) {
      throw DomainError("ModelParams: beta must be a finite value >= 0");
    }
    if (family == Family::PD && !(theta > -sigma && std::isfinite(theta))) {
      throw DomainError("ModelParams: theta must be finite and > -sigma");
    }
  }

  bool is_stable() const { return family == Family::NGG ? beta == 0.0 : theta == 0.0; }

  /// β^{1/σ}, the exponential tilt of the NGG total mass.
  double tau() const { return family == Family::NGG ? std::pow(beta, 1.0 / sigma) : 0.0; }
};

/// Basic sample of size n showing j distinct species.
struct SampleSummary {
  long n = 1;
  long j = 1;

  void validate() const {
    if (n < 1) throw DomainError("SampleSummary: n must be >= 1");
    if (j < 1 || j > n) throw DomainError("SampleSummary: j must lie in [1, n]");
  }
};

}  // namespace species
