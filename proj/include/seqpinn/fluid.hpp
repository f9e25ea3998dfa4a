#pragma once

namespace seqpinn {

/// Physical fluid constants and characteristic scales. Re = rho*U*D/mu and
/// nu = mu/rho are stored redundantly and re-checked by validate().
struct FluidConstants {
  double rho = 0;  // density, kg/m^3
  double mu = 0;   // dynamic viscosity, Pa*s
  double nu = 0;   // kinematic viscosity, m^2/s
  double U = 0;    // characteristic velocity, m/s
  double D = 0;    // characteristic length, m
  double Re = 0;   // Reynolds number

  /// Derive nu and Re from the four independent quantities.
  static FluidConstants from_physical(double rho, double mu, double U, double D);

  /// All entries strictly positive and mutually consistent to rel. 1e-12.
  void validate() const;

  bool operator==(const FluidConstants&) const = default;
};

}  // namespace seqpinn
