#include "brwbrw/analysis.hpp"

#include <cmath>
#include <string>

#include "brwbrw/error.hpp"

namespace brwbrw::analysis {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

double ConductanceDirection::beta() const { return std::exp(log_beta); }

ConductanceDirection conductance_direction(const StepDistribution& dist1) {
  const int d = dist1.dim();
  ConductanceDirection dir;
  dir.ell.assign(static_cast<std::size_t>(d), 0.0);
  double norm2 = 0.0;
  for (int j = 0; j < d; ++j) {
    const double r = std::log(dist1[direction_of(j, 1)] / dist1[direction_of(j, -1)]);
    dir.ell[static_cast<std::size_t>(j)] = r;
    norm2 += r * r;
  }
  dir.log_beta = std::sqrt(norm2);
  if (dir.log_beta == 0.0) {
    dir.balanced = true;
    dir.ell.assign(static_cast<std::size_t>(d), 0.0);
    dir.ell[0] = 1.0;
    return dir;
  }
  for (double& c : dir.ell) c /= dir.log_beta;
  return dir;
}

double log_edge_conductance(const StepDistribution& dist1, const ConductanceDirection& dir, const LatticePosition& x,
                            const LatticePosition& y) {
  if (unit_step_between(x, y) < 0 || x.dim() != dist1.dim()) {
    throw Error(ErrorCode::NotAnEdgePair, x.to_string() + " and " + y.to_string() + " are not lattice neighbours");
  }
  double log_c = 0.0;
  double top_dot_ell = 0.0;
  for (int j = 0; j < x.dim(); ++j) {
    const std::int64_t gap = std::llabs(y[j] - x[j]);
    if (gap != 0) log_c += static_cast<double>(gap) * std::log(dist1[direction_of(j, -1)]);
    top_dot_ell += static_cast<double>(std::max(x[j], y[j])) * dir.ell[static_cast<std::size_t>(j)];
  }
  return log_c + dir.log_beta * top_dot_ell;
}

double edge_conductance(const StepDistribution& dist1, const ConductanceDirection& dir, const LatticePosition& x,
                        const LatticePosition& y) {
  return std::exp(log_edge_conductance(dist1, dir, x, y));
}

double edge_conductance(const StepDistribution& dist1, const LatticePosition& x, const LatticePosition& y) {
  return edge_conductance(dist1, conductance_direction(dist1), x, y);
}

namespace {

// Projection e.ell of each direction.
std::vector<double> projections(int dim, std::span<const double> ell) {
  std::vector<double> s(static_cast<std::size_t>(2 * dim));
  for (Direction k = 0; k < 2 * dim; ++k) s[static_cast<std::size_t>(k)] = sign_of(k) * ell[static_cast<std::size_t>(axis_of(k))];
  return s;
}

// phi(t) - 1 and phi'(t).
struct MgfTerms {
  double excess;
  double slope;
};

MgfTerms mgf_terms(const StepDistribution& dist0, const std::vector<double>& proj, double t) {
  MgfTerms out{0.0, 0.0};
  for (std::size_t k = 0; k < proj.size(); ++k) {
    const double p = dist0[static_cast<Direction>(k)];
    if (p == 0.0) continue;
    out.excess += p * std::expm1(-t * proj[k]);
    out.slope -= p * proj[k] * std::exp(-t * proj[k]);
  }
  return out;
}

constexpr double kMaxRootT = 700.0;
constexpr double kBisectionWidth = 1e-13;

}  // namespace

double mgf(const StepDistribution& dist0, std::span<const double> ell, double t) {
  return 1.0 + mgf_terms(dist0, projections(dist0.dim(), ell), t).excess;
}

AlphaRoot solve_alpha(const StepDistribution& dist0, std::span<const double> ell) {
  const auto delta = drift(dist0);
  const double forward = dot(delta, ell);
  if (!(forward > 0.0)) {
    throw Error(ErrorCode::NotTransient, "drift.ell = " + std::to_string(forward) + " is not positive");
  }
  const auto proj = projections(dist0.dim(), ell);
  bool can_backtrack = false;
  for (std::size_t k = 0; k < proj.size(); ++k) {
    if (dist0[static_cast<Direction>(k)] > 0.0 && proj[k] < 0.0) can_backtrack = true;
  }
  if (!can_backtrack) return {};

  auto excess = [&](double t) { return mgf_terms(dist0, proj, t).excess; };

  // phi is convex with phi(0) = 1 and phi'(0) < 0: negative excess on (0, root).
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) <= 0.0) {
    if (hi >= kMaxRootT) return {};
    lo = hi;
    hi = std::min(2.0 * hi, kMaxRootT);
  }
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }

  double t = 0.5 * (lo + hi);
  const MgfTerms at = mgf_terms(dist0, proj, t);
  if (at.slope != 0.0) {
    const double polished = t - at.excess / at.slope;
    if (polished >= lo && polished <= hi && std::fabs(excess(polished)) <= std::fabs(at.excess)) t = polished;
  }
  return {t, std::exp(t)};
}

DoobTransform doob_transform(const StepDistribution& dist0, std::span<const double> ell, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::AlphaNotRoot, "alpha must be finite and positive, got " + std::to_string(alpha));
  }
  const double t = std::log(alpha);
  const double residual = mgf(dist0, ell, t) - 1.0;
  if (std::fabs(residual) > 1e-9) {
    throw Error(ErrorCode::AlphaNotRoot, "phi(log alpha) - 1 = " + std::to_string(residual));
  }
  const auto proj = projections(dist0.dim(), ell);
  std::vector<double> tilted(proj.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < proj.size(); ++k) {
    tilted[k] = dist0[static_cast<Direction>(k)] * std::exp(-t * proj[k]);
    sum += tilted[k];
  }
  for (double& w : tilted) w /= sum;
  DoobTransform out{validate_distribution(tilted, Layer::Generic), {}};
  out.drift = drift(out.dist);
  return out;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Recurrent: return "recurrent";
    case Regime::Ballistic: return "ballistic";
    case Regime::SubBallistic: return "sub-ballistic";
    case Regime::Boundary: return "boundary";
  }
  return "unknown";
}

AnalyticProfile classify(const StepDistribution& dist0, const StepDistribution& dist1) {
  if (dist0.dim() != dist1.dim()) throw Error(ErrorCode::InvalidArgument, "layer dimensions differ");
  AnalyticProfile profile;
  profile.direction = conductance_direction(dist1);
  profile.drift0 = drift(dist0);
  profile.drift1 = drift(dist1);
  profile.drift0_dot_ell = dot(profile.drift0, profile.direction.ell);

  if (profile.drift0_dot_ell > 0.0) {
    const AlphaRoot root = solve_alpha(dist0, profile.direction.ell);
    profile.t_root = root.t_root;
    profile.alpha = root.alpha;
    if (root.finite()) {
      profile.doob = doob_transform(dist0, profile.direction.ell, root.alpha);
      profile.kappa = profile.direction.balanced ? kInfinity : root.t_root / profile.direction.log_beta;
    } else {
      profile.kappa = kInfinity;
    }
  }

  // With beta == 1 every edge has unit resistance, so the resistance to
  // infinity along the one-ended trace diverges: recurrent.
  profile.transient = profile.drift0_dot_ell > 0.0 && !profile.direction.balanced;
  if (!profile.transient) {
    profile.regime = Regime::Recurrent;
  } else if (!std::isfinite(*profile.t_root)) {
    profile.regime = Regime::Ballistic;
  } else if (std::fabs(profile.direction.log_beta - *profile.t_root) < kBoundaryTolerance) {
    profile.regime = Regime::Boundary;
  } else {
    profile.regime = profile.direction.log_beta < *profile.t_root ? Regime::Ballistic : Regime::SubBallistic;
  }
  return profile;
}

}  // namespace brwbrw::analysis
