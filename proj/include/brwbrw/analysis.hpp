#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "brwbrw/lattice.hpp"
#include "brwbrw/walk.hpp"

namespace brwbrw::analysis {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Unit vector ell along (log(p(e_j)/p(-e_j)))_j and its norm log(beta).
// A balanced distribution has log_beta == 0 and, by convention, ell = e1.
struct ConductanceDirection {
  std::vector<double> ell;
  double log_beta = 0.0;
  bool balanced = false;

  double beta() const;
};

ConductanceDirection conductance_direction(const StepDistribution& dist1);

// c(x,y) = prod_j p(-e_j)^{|y_j-x_j|} * beta^{(x v y).ell} for a unit edge
// {x,y}, where x v y is the coordinatewise maximum. The log form avoids
// overflow of beta^{...} far from the origin. Throws NotAnEdgePair.
double log_edge_conductance(const StepDistribution& dist1, const ConductanceDirection& dir, const LatticePosition& x,
                            const LatticePosition& y);
double edge_conductance(const StepDistribution& dist1, const ConductanceDirection& dir, const LatticePosition& x,
                        const LatticePosition& y);
double edge_conductance(const StepDistribution& dist1, const LatticePosition& x, const LatticePosition& y);

// phi(t) = E[exp(-t X_1.ell)] under dist0. Evaluated as 1 + sum p (e^{...} - 1)
// so that phi(0) == 1 exactly.
double mgf(const StepDistribution& dist0, std::span<const double> ell, double t);

struct AlphaRoot {
  double t_root = kInfinity;  // +inf when dist0 cannot step against ell
  double alpha = kInfinity;   // exp(t_root)

  bool finite() const { return t_root < kInfinity; }
};

// Unique t > 0 with phi(t) = 1. Requires drift(dist0).ell > 0, else
// NotTransient. The bracket is found by doubling t (capped at 700),
// narrowed by bisection and finished with one guarded Newton step.
AlphaRoot solve_alpha(const StepDistribution& dist0, std::span<const double> ell);

struct DoobTransform {
  StepDistribution dist;      // p(e) alpha^{-e.ell}
  std::vector<double> drift;  // E[alpha^{-X_1.ell} X_1]
};

// Tilt of dist0 by the harmonic function alpha^{-x.ell}. Throws AlphaNotRoot
// if |phi(log alpha) - 1| > 1e-9.
DoobTransform doob_transform(const StepDistribution& dist0, std::span<const double> ell, double alpha);

enum class Regime { Recurrent, Ballistic, SubBallistic, Boundary };
std::string_view to_string(Regime regime);

// Absolute tolerance on |log beta - log alpha| below which a transient
// parameter set is reported as Boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

struct AnalyticProfile {
  ConductanceDirection direction;
  std::vector<double> drift0;
  std::vector<double> drift1;
  double drift0_dot_ell = 0.0;
  bool transient = false;
  Regime regime = Regime::Recurrent;
  // Present whenever drift0.ell > 0; +inf when no back-tracking step exists.
  std::optional<double> t_root;
  std::optional<double> alpha;
  // log(alpha)/log(beta); +inf when alpha is infinite or beta == 1.
  std::optional<double> kappa;
  std::optional<DoobTransform> doob;

  double beta() const { return direction.beta(); }
};

AnalyticProfile classify(const StepDistribution& dist0, const StepDistribution& dist1);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace brwbrw::analysis
