#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sbd/geometry.hpp"

#include "json.hpp"

namespace sbd {

/// A finite point process: a multiset of locations with multiplicities.
/// Atoms are kept sorted lexicographically, so multiset equality,
/// domination and serialization are all canonical. Instances are cheap
/// value types; treat a configuration handed to another thread as an
/// immutable snapshot (mutating builders are single-owner).
class Configuration {
 public:
  struct Atom {
    Point location;
    std::uint32_t multiplicity;
    bool operator==(const Atom&) const = default;
  };

  Configuration() = default;
  explicit Configuration(const std::vector<Point>& points);
  Configuration(std::initializer_list<Point> points);

  /// Multiplicity of x increases by one. Exact coordinate equality.
  void add(const Point& x);
  /// Multiplicity of x decreases by one. Removing an absent atom is a
  /// contract violation (it signals a policy bug) and throws std::logic_error.
  void remove(const Point& x);

  std::uint64_t total_mass() const { return mass_; }
  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::uint32_t multiplicity_of(const Point& x) const;

  bool operator==(const Configuration&) const = default;

 private:
  std::vector<Atom> atoms_;  // sorted by location, lexicographic
  std::uint64_t mass_ = 0;
};

/// Value-returning forms of the single-atom mutations.
Configuration add_atom(Configuration config, const Point& x);
Configuration remove_atom(Configuration config, const Point& x);

/// All atoms at distance strictly less than r from x (linear scan).
std::vector<std::pair<Point, std::uint32_t>> ball_atoms(const Configuration& config,
                                                        const SpaceSpec& space,
                                                        const Point& x, double r);

std::uint64_t count_in_ball(const Configuration& config, const SpaceSpec& space,
                            const Point& x, double r);

/// The << order: true iff p's multiset is contained in q's with
/// multiplicities (equivalently p(A) <= q(A) for every Borel A).
bool is_dominated(const Configuration& p, const Configuration& q);

/// True iff some atom z satisfies z >= x coordinatewise, i.e. x is not in
/// the dead zone D(config). Interval and box only; the torus carries no
/// global orthant and needs the radius-restricted overload.
bool has_point_in_orthant(const Configuration& config, const SpaceSpec& space,
                          const Point& x);

/// Torus variant used by the one-sided local policy: some atom z with
/// z >= x (fundamental-domain coordinates) within torus distance < radius.
bool has_point_in_orthant(const Configuration& config, const SpaceSpec& space,
                          const Point& x, double radius);

/// Flat record serialization, one row per atom: coordinates, multiplicity.
void write_configuration_csv(std::ostream& os, const Configuration& config,
                             const SpaceSpec& space);
nlohmann::json configuration_to_json(const Configuration& config);
Configuration configuration_from_json(const nlohmann::json& j, const SpaceSpec& space);

}  // namespace sbd
