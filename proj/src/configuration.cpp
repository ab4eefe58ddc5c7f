#include "sbd/configuration.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sbd {

namespace {

struct LocationLess {
  bool operator()(const Configuration::Atom& a, const Point& x) const {
    return a.location < x;
  }
};

}  // namespace

Configuration::Configuration(const std::vector<Point>& points) {
  for (const auto& p : points) add(p);
}

Configuration::Configuration(std::initializer_list<Point> points) {
  for (const auto& p : points) add(p);
}

void Configuration::add(const Point& x) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, LocationLess{});
  if (it != atoms_.end() && it->location == x) {
    ++it->multiplicity;
  } else {
    atoms_.insert(it, Atom{x, 1});
  }
  ++mass_;
}

void Configuration::remove(const Point& x) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, LocationLess{});
  if (it == atoms_.end() || it->location != x) {
    throw std::logic_error("configuration: removing an absent atom");
  }
  if (--it->multiplicity == 0) atoms_.erase(it);
  --mass_;
}

std::uint32_t Configuration::multiplicity_of(const Point& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, LocationLess{});
  if (it == atoms_.end() || it->location != x) return 0;
  return it->multiplicity;
}

Configuration add_atom(Configuration config, const Point& x) {
  config.add(x);
  return config;
}

Configuration remove_atom(Configuration config, const Point& x) {
  config.remove(x);
  return config;
}

std::vector<std::pair<Point, std::uint32_t>> ball_atoms(const Configuration& config,
                                                        const SpaceSpec& space,
                                                        const Point& x, double r) {
  std::vector<std::pair<Point, std::uint32_t>> out;
  for (const auto& atom : config.atoms()) {
    if (distance(space, x, atom.location) < r) {
      out.emplace_back(atom.location, atom.multiplicity);
    }
  }
  return out;
}

std::uint64_t count_in_ball(const Configuration& config, const SpaceSpec& space,
                            const Point& x, double r) {
  std::uint64_t n = 0;
  for (const auto& atom : config.atoms()) {
    if (distance(space, x, atom.location) < r) n += atom.multiplicity;
  }
  return n;
}

bool is_dominated(const Configuration& p, const Configuration& q) {
  const auto& pa = p.atoms();
  const auto& qa = q.atoms();
  std::size_t j = 0;
  for (const auto& atom : pa) {
    while (j < qa.size() && qa[j].location < atom.location) ++j;
    if (j == qa.size() || qa[j].location != atom.location ||
        qa[j].multiplicity < atom.multiplicity) {
      return false;
    }
  }
  return true;
}

bool has_point_in_orthant(const Configuration& config, const SpaceSpec& space,
                          const Point& x) {
  if (space.kind() == SpaceKind::Torus) {
    throw std::invalid_argument(
        "has_point_in_orthant: torus requires a radius restriction");
  }
  for (const auto& atom : config.atoms()) {
    if (leq_orthant(x, atom.location)) return true;
  }
  return false;
}

bool has_point_in_orthant(const Configuration& config, const SpaceSpec& space,
                          const Point& x, double radius) {
  for (const auto& atom : config.atoms()) {
    if (leq_orthant(x, atom.location) && distance(space, x, atom.location) < radius) {
      return true;
    }
  }
  return false;
}

void write_configuration_csv(std::ostream& os, const Configuration& config,
                             const SpaceSpec& space) {
  for (int i = 0; i < space.dim(); ++i) os << "x" << i << ",";
  os << "multiplicity\n";
  char buf[32];
  for (const auto& atom : config.atoms()) {
    for (double c : atom.location) {
      std::snprintf(buf, sizeof(buf), "%.17g", c);
      os << buf << ",";
    }
    os << atom.multiplicity << "\n";
  }
}

nlohmann::json configuration_to_json(const Configuration& config) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : config.atoms()) {
    atoms.push_back({{"location", atom.location}, {"multiplicity", atom.multiplicity}});
  }
  return {{"mass", config.total_mass()}, {"atoms", std::move(atoms)}};
}

Configuration configuration_from_json(const nlohmann::json& j, const SpaceSpec& space) {
  Configuration config;
  if (!j.contains("atoms")) throw std::invalid_argument("configuration json: missing 'atoms'");
  for (const auto& entry : j.at("atoms")) {
    Point x;
    std::uint32_t mult = 1;
    if (entry.is_array()) {
      x = entry.get<Point>();
    } else {
      x = entry.at("location").get<Point>();
      mult = entry.value("multiplicity", 1u);
    }
    if (!space.contains(x)) {
      throw std::invalid_argument("configuration json: atom outside the space");
    }
    for (std::uint32_t k = 0; k < mult; ++k) config.add(x);
  }
  return config;
}

}  // namespace sbd
