#include "sbd/policies.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sbd {

PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "LG") return PolicyKind::LG;
  if (s == "LR") return PolicyKind::LR;
  if (s == "LO") return PolicyKind::LO;
  if (s == "GG") return PolicyKind::GG;
  if (s == "GO") return PolicyKind::GO;
  throw std::invalid_argument("unknown policy kind: " + s);
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::LG: return "LG";
    case PolicyKind::LR: return "LR";
    case PolicyKind::LO: return "LO";
    case PolicyKind::GG: return "GG";
    case PolicyKind::GO: return "GO";
  }
  return "?";
}

double TieBreaker::location_unit(const Point& z) const {
  std::uint64_t h = seed_;
  for (double c : z) {
    h = rng::mix64(h + rng::kGolden + std::bit_cast<std::uint64_t>(c));
  }
  return rng::to_unit(rng::mix64(h));
}

void validate_policy_space(const PolicySpec& policy, const SpaceSpec& space) {
  if (!(policy.radius > 0.0)) {
    throw std::invalid_argument("policy: radius must be positive");
  }
  if (policy.kind == PolicyKind::GO && space.kind() == SpaceKind::Torus) {
    // no global orthant on the torus; LO works through the radius-limited
    // fundamental-domain order instead
    throw std::invalid_argument("policy: GO is not defined on a torus");
  }
}

namespace {

bool needs_orthant(PolicyKind kind) {
  return kind == PolicyKind::LO || kind == PolicyKind::GO;
}

bool radius_limited(PolicyKind kind) {
  return kind == PolicyKind::LG || kind == PolicyKind::LR || kind == PolicyKind::LO;
}

}  // namespace

std::optional<Point> select_target(const PolicySpec& policy, const SpaceSpec& space,
                                   const Configuration& config, const Point& x,
                                   const TieBreaker& tie) {
  validate_policy_space(policy, space);
  const bool orthant = needs_orthant(policy.kind);
  const bool limited = radius_limited(policy.kind);
  const bool argmin = policy.kind != PolicyKind::LR;

  // pass 1: minimal admissible distance
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& atom : config.atoms()) {
    if (orthant && !leq_orthant(x, atom.location)) continue;
    const double d = distance(space, x, atom.location);
    if (limited && !(d < policy.radius)) continue;  // strict, as defined
    any = true;
    if (d < best) best = d;
  }
  if (!any) return std::nullopt;

  // pass 2: uniform choice among the candidates via the keyed uniforms
  // (LR: all admissible locations; argmin policies: the tied set)
  double best_key = std::numeric_limits<double>::infinity();
  const Point* pick = nullptr;
  for (const auto& atom : config.atoms()) {
    if (orthant && !leq_orthant(x, atom.location)) continue;
    const double d = distance(space, x, atom.location);
    if (limited && !(d < policy.radius)) continue;
    if (argmin && d > best + kTieTolerance) continue;
    const double key = tie.location_unit(atom.location);
    if (key < best_key) {
      best_key = key;
      pick = &atom.location;
    }
  }
  return *pick;
}

std::pair<std::optional<Point>, std::optional<Point>> coupled_select(
    const PolicySpec& policy, const SpaceSpec& space, const Configuration& p,
    const Configuration& q, const Point& x, const TieBreaker& tie) {
  if (!is_dominated(p, q)) {
    throw std::invalid_argument("coupled_select: p is not dominated by q");
  }
  // The keyed tie-break makes the independent selections a monotone
  // coupling already: q's pick, when present in p, is admissible there
  // with the smallest key, so p picks the same atom.
  auto target_q = select_target(policy, space, q, x, tie);
  auto target_p = select_target(policy, space, p, x, tie);
  return {std::move(target_p), std::move(target_q)};
}

}  // namespace sbd
