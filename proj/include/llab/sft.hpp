#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/rational.hpp"
#include "llab/reeb.hpp"

// SFT bookkeeping for neck stretching around an irrational ellipsoid boundary
// in the projective plane: virtual dimensions of punctured-sphere moduli
// spaces, per-component area accounting, and exhaustive enumeration of the
// holomorphic buildings admissible for a degree-d curve through fixed points.

namespace llab {

struct Puncture {
  Axis axis;
  int mult;

  friend bool operator==(const Puncture& a, const Puncture& b) {
    return a.axis == b.axis && a.mult == b.mult;
  }
  friend bool operator<(const Puncture& a, const Puncture& b) {
    if (a.axis != b.axis) return a.axis < b.axis;
    return a.mult < b.mult;
  }
};

using PunctureSet = std::vector<Puncture>;  // kept sorted

inline Rational total_action(const EllipsoidSpec& spec, const PunctureSet& ps) {
  Rational sum(0);
  for (const auto& p : ps) sum = sum + orbit_action(spec, p.axis, p.mult);
  return sum;
}

inline std::string puncture_set_str(const PunctureSet& ps) {
  std::string out = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ps[i].mult);
    out += ps[i].axis == Axis::Minus ? "g-" : "g+";
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Virtual dimensions.

inline int virtdim_inside(const EllipsoidSpec& spec, const PunctureSet& asym, int k_points) {
  int dim = -2 - 2 * k_points;
  for (const auto& p : asym) dim += cz_index(spec, p.axis, p.mult) + 1;
  return dim;
}

inline int virtdim_outside(const EllipsoidSpec& spec, const PunctureSet& asym, int k_points,
                           int degree) {
  if (degree < 0) throw PreconditionError("degree must be nonnegative", "m >= 0");
  int dim = 6 * degree - 2 - 2 * k_points;
  for (const auto& p : asym) dim += 1 - cz_index(spec, p.axis, p.mult);
  return dim;
}

// ---------------------------------------------------------------------------
// Building data model.

enum class LayerKind { Inside, Intermediate, Outside };

inline const char* layer_name(LayerKind k) {
  switch (k) {
    case LayerKind::Inside: return "inside";
    case LayerKind::Intermediate: return "intermediate";
    default: return "outside";
  }
}

struct BuildingComponent {
  LayerKind layer = LayerKind::Inside;
  int level = 0;        // 0 inside, 1..L intermediate, L+1 outside
  PunctureSet top;      // positive asymptotes (facing the outside layer)
  PunctureSet bottom;   // negative asymptotes (facing the inside layer)
  int degree = 0;       // outside components: class (degree L) rel asymptotes
  int points = 0;       // point constraints carried

  std::string str() const {
    std::ostringstream os;
    os << layer_name(layer);
    if (layer == LayerKind::Outside) os << "[m=" << degree << "]";
    if (layer == LayerKind::Inside || layer == LayerKind::Intermediate)
      os << "+" << puncture_set_str(top);
    if (layer == LayerKind::Outside || layer == LayerKind::Intermediate)
      os << "-" << puncture_set_str(bottom);
    if (points > 0) os << "#" << points;
    return os.str();
  }
};

inline Rational component_area(const EllipsoidSpec& spec, const BuildingComponent& comp) {
  switch (comp.layer) {
    case LayerKind::Inside:
      return total_action(spec, comp.top);
    case LayerKind::Outside:
      return Rational(comp.degree) - total_action(spec, comp.bottom);
    default:
      return total_action(spec, comp.top) - total_action(spec, comp.bottom);
  }
}

// A component may be a multiple cover only if all its asymptote multiplicities
// (and, outside, the degree) share a factor; only certified-simple components
// are subject to the virtual-dimension filter.
inline bool simple_certified(const BuildingComponent& comp) {
  int g = comp.layer == LayerKind::Outside ? comp.degree : 0;
  for (const auto& p : comp.top) g = std::gcd(g, p.mult);
  for (const auto& p : comp.bottom) g = std::gcd(g, p.mult);
  return g <= 1;
}

struct BuildingCandidate {
  std::vector<BuildingComponent> components;
  int degree = 0;
  int points_inside = 0;
  int points_outside = 0;
  std::vector<std::pair<int, int>> pairing;  // witness matched-puncture edges

  std::string str() const {
    std::vector<std::string> parts;
    for (const auto& c : components) parts.push_back(c.str());
    std::sort(parts.begin(), parts.end());
    std::string out = "d=" + std::to_string(degree) + " ";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += " | ";
      out += parts[i];
    }
    return out;
  }

  // identity key ignoring the pairing witness and point distribution
  std::string key() const {
    std::vector<std::string> parts;
    for (auto c : components) {
      c.points = 0;
      parts.push_back(std::to_string(c.level) + ":" + c.str());
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += p + ";";
    return out;
  }
};

struct RejectedCandidate {
  std::string description;
  std::string killed_by;
};

struct EnumerationResult {
  std::vector<BuildingCandidate> survivors;
  std::vector<RejectedCandidate> rejected;  // traced mode only
  long pruned_component_shapes = 0;         // aggregated F1 prunes (traced)
  bool cap_limited = false;
};

struct EnumerationOptions {
  int mult_cap = 0;                 // 0: default ceil(d / a_minus)
  int max_intermediate_layers = 2;
  int max_outside = 0;              // 0: d + 1
  int max_punctures = 0;            // 0: mult_cap
  std::optional<Rational> point_area_bound;  // F6 per-point capacity
  bool traced = false;
  int trace_component_limit = 50;
};

// ---------------------------------------------------------------------------
// Candidate re-check, independent of the enumeration path: areas re-summed,
// matching and tree property re-verified, dimensions recomputed.

namespace sft_detail {

inline std::map<Puncture, int> puncture_histogram(const PunctureSet& ps) {
  std::map<Puncture, int> h;
  for (const auto& p : ps) ++h[p];
  return h;
}

// Existence of a puncture pairing across level interfaces that makes the
// component graph a tree; returns the witness edges if one exists.
inline std::optional<std::vector<std::pair<int, int>>> find_tree_pairing(
    const std::vector<BuildingComponent>& comps) {
  const std::size_t n = comps.size();
  if (n == 0) return std::nullopt;
  int max_level = 0;
  for (const auto& c : comps) max_level = std::max(max_level, c.level);

  // slots per interface: (component index, orbit) for tops at level l and
  // bottoms at level l+1
  struct Slot {
    int comp;
    Puncture orbit;
  };
  std::vector<std::vector<Slot>> tops(max_level + 1), bottoms(max_level + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : comps[i].top) {
      if (comps[i].level >= max_level) return std::nullopt;  // outside has no top
      tops[comps[i].level].push_back({static_cast<int>(i), p});
    }
    for (const auto& p : comps[i].bottom) {
      if (comps[i].level == 0) return std::nullopt;
      bottoms[comps[i].level - 1].push_back({static_cast<int>(i), p});
    }
  }
  std::size_t edges = 0;
  for (int l = 0; l < max_level; ++l) {
    auto key = [](const Slot& s) { return s.orbit; };
    std::map<Puncture, int> th, bh;
    for (const auto& s : tops[l]) ++th[key(s)];
    for (const auto& s : bottoms[l]) ++bh[key(s)];
    if (th != bh) return std::nullopt;  // matching fails
    edges += tops[l].size();
  }
  if (edges != n - 1) return std::nullopt;

  // enumerate pairings orbit-type by orbit-type; edges are forced up to
  // permutations inside each type class
  std::vector<std::pair<int, int>> chosen;
  std::function<bool(int)> solve = [&](int level) -> bool {
    if (level >= max_level) {
      // connectivity check: n nodes, n-1 edges, connected <=> tree
      std::vector<std::vector<int>> adj(n);
      for (const auto& [a, b] : chosen) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      std::vector<bool> seen(n, false);
      std::vector<int> stack{0};
      seen[0] = true;
      std::size_t count = 1;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (!seen[w]) {
            seen[w] = true;
            ++count;
            stack.push_back(w);
          }
      }
      return count == n;
    }
    // group this interface's slots by orbit type
    std::map<Puncture, std::pair<std::vector<int>, std::vector<int>>> groups;
    for (const auto& s : tops[level]) groups[s.orbit].first.push_back(s.comp);
    for (const auto& s : bottoms[level]) groups[s.orbit].second.push_back(s.comp);
    std::vector<std::pair<std::vector<int>, std::vector<int>>> glist;
    for (auto& [orbit, g] : groups) glist.push_back(g);
    std::function<bool(std::size_t)> pair_groups = [&](std::size_t gi) -> bool {
      if (gi >= glist.size()) return solve(level + 1);
      auto& [up, down] = glist[gi];
      std::vector<int> perm(down.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::sort(perm.begin(), perm.end());
      do {
        const std::size_t base = chosen.size();
        for (std::size_t i = 0; i < up.size(); ++i)
          chosen.emplace_back(up[i], down[perm[i]]);
        if (pair_groups(gi + 1)) return true;
        chosen.resize(base);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    };
    return pair_groups(0);
  };
  if (solve(0)) return chosen;
  return std::nullopt;
}

// F3 + F6: some distribution of the point constraints makes every
// certified-simple component dimension nonnegative and satisfies the
// per-component area bound.  Fills comp.points on success.
inline bool assign_points(const EllipsoidSpec& spec, BuildingCandidate& cand,
                          const std::optional<Rational>& per_point_bound) {
  std::vector<int> inside, outside;
  for (std::size_t i = 0; i < cand.components.size(); ++i) {
    auto& c = cand.components[i];
    c.points = 0;
    if (c.layer == LayerKind::Inside) inside.push_back(static_cast<int>(i));
    if (c.layer == LayerKind::Outside) outside.push_back(static_cast<int>(i));
  }
  if (cand.points_inside > 0 && inside.empty()) return false;
  if (cand.points_outside > 0 && outside.empty()) return false;

  auto component_ok = [&](const BuildingComponent& c, int pts) {
    if (per_point_bound && c.layer == LayerKind::Inside && pts > 0) {
      if (component_area(spec, c) < Rational(pts) * (*per_point_bound)) return false;
    }
    if (!simple_certified(c)) return true;
    if (c.layer == LayerKind::Inside) return virtdim_inside(spec, c.top, pts) >= 0;
    if (c.layer == LayerKind::Outside)
      return virtdim_outside(spec, c.bottom, pts, c.degree) >= 0;
    return true;  // no index rule enforced on symplectization layers
  };

  // intermediate components carry no points but must still be admissible
  for (const auto& c : cand.components)
    if (c.layer == LayerKind::Intermediate && !component_ok(c, 0)) return false;

  std::function<bool(const std::vector<int>&, std::size_t, int)> distribute =
      [&](const std::vector<int>& comps, std::size_t idx, int remaining) -> bool {
    if (idx + 1 == comps.size() || comps.empty()) {
      if (comps.empty()) return remaining == 0;
      auto& c = cand.components[comps[idx]];
      c.points = remaining;
      if (component_ok(c, remaining)) return true;
      c.points = 0;
      return false;
    }
    auto& c = cand.components[comps[idx]];
    for (int take = 0; take <= remaining; ++take) {
      c.points = take;
      if (component_ok(c, take) && distribute(comps, idx + 1, remaining - take)) return true;
    }
    c.points = 0;
    return false;
  };

  // nested search: inside distribution, then outside distribution
  std::function<bool(std::size_t, int)> search_inside = [&](std::size_t idx,
                                                            int remaining) -> bool {
    if (idx == inside.size()) {
      if (remaining != 0) return false;
      return distribute(outside, 0, cand.points_outside);
    }
    auto& c = cand.components[inside[idx]];
    const int hi = (idx + 1 == inside.size()) ? remaining : remaining;
    for (int take = (idx + 1 == inside.size()) ? remaining : 0; take <= hi; ++take) {
      c.points = take;
      if (component_ok(c, take) && search_inside(idx + 1, remaining - take)) return true;
    }
    c.points = 0;
    return false;
  };
  if (inside.empty()) {
    if (cand.points_inside != 0) return false;
    return distribute(outside, 0, cand.points_outside);
  }
  return search_inside(0, cand.points_inside);
}

}  // namespace sft_detail

// Re-verifies an emitted candidate from scratch: exact area conservation,
// puncture matching, tree property, and nonnegative dimensions under the
// stored distribution.
inline bool recheck_candidate(const EllipsoidSpec& spec, const BuildingCandidate& cand,
                              const std::optional<Rational>& per_point_bound = std::nullopt) {
  Rational area(0);
  int pts_in = 0, pts_out = 0;
  for (const auto& c : cand.components) {
    const Rational a = component_area(spec, c);
    if (!(a > Rational(0))) return false;
    area = area + a;
    if (c.layer == LayerKind::Inside) pts_in += c.points;
    if (c.layer == LayerKind::Outside) pts_out += c.points;
    if (simple_certified(c)) {
      if (c.layer == LayerKind::Inside && virtdim_inside(spec, c.top, c.points) < 0)
        return false;
      if (c.layer == LayerKind::Outside &&
          virtdim_outside(spec, c.bottom, c.points, c.degree) < 0)
        return false;
    }
    if (per_point_bound && c.layer == LayerKind::Inside && c.points > 0 &&
        component_area(spec, c) < Rational(c.points) * (*per_point_bound))
      return false;
  }
  if (area != Rational(cand.degree)) return false;
  if (pts_in != cand.points_inside || pts_out != cand.points_outside) return false;
  return sft_detail::find_tree_pairing(cand.components).has_value();
}

// ---------------------------------------------------------------------------
// Enumerator.

namespace sft_detail {

// all sorted puncture multisets of size in [1, max_size], mult <= mult_cap
inline std::vector<PunctureSet> all_puncture_sets(int mult_cap, int max_size) {
  std::vector<PunctureSet> out;
  std::vector<Puncture> types;
  for (Axis axis : {Axis::Minus, Axis::Plus})
    for (int m = 1; m <= mult_cap; ++m) types.push_back({axis, m});
  std::function<void(std::size_t, PunctureSet&)> rec = [&](std::size_t start, PunctureSet& cur) {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) >= max_size) return;
    for (std::size_t i = start; i < types.size(); ++i) {
      cur.push_back(types[i]);
      rec(i, cur);
      cur.pop_back();
    }
  };
  PunctureSet cur;
  rec(0, cur);
  return out;
}

// partitions of the multiset `ps` into nonempty parts (as sorted part lists)
inline std::vector<std::vector<PunctureSet>> multiset_partitions(const PunctureSet& ps) {
  std::vector<std::vector<PunctureSet>> out;
  std::set<std::string> seen;
  const std::size_t n = ps.size();
  std::vector<int> part_of(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
    if (i == n) {
      std::vector<PunctureSet> parts(max_used);
      for (std::size_t j = 0; j < n; ++j) parts[part_of[j]].push_back(ps[j]);
      for (auto& p : parts) std::sort(p.begin(), p.end());
      std::sort(parts.begin(), parts.end());
      std::string key;
      for (const auto& p : parts) key += puncture_set_str(p) + "|";
      if (seen.insert(key).second) out.push_back(parts);
      return;
    }
    for (int p = 0; p <= max_used && p < static_cast<int>(n); ++p) {
      part_of[i] = p;
      rec(i + 1, std::max(max_used, p + 1));
    }
  };
  if (n > 0) rec(0, 0);
  return out;
}

inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx + 1 == parts) {
      cur[idx] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[idx] = v;
      rec(idx + 1, remaining - v);
    }
  };
  if (parts > 0) rec(0, total);
  return out;
}

}  // namespace sft_detail

// Exhaustive enumeration of admissible buildings for a degree-d sphere
// through the given point constraints.  Filters:
//   F1 strict area positivity per component (applied during generation)
//   F2 exact area conservation (structural, re-verified)
//   F3 nonnegative virtual dimension of certified-simple components under
//      some distribution of the points
//   F4 matched punctures forming a tree
//   F5 outside component count <= d
//   F6 optional per-point area lower bound on inside components
inline EnumerationResult enumerate_buildings(const EllipsoidSpec& spec, int degree,
                                             int points_inside, int points_outside,
                                             EnumerationOptions opt = {}) {
  if (degree < 1 || degree > 2)
    throw PreconditionError("enumeration supports degree 1 and 2", "d in {1,2}");
  const int default_cap = static_cast<int>((Rational(degree) / spec.a_minus).ceil());
  if (opt.mult_cap == 0) opt.mult_cap = default_cap;
  if (opt.max_outside == 0) opt.max_outside = degree + 1;
  if (opt.max_punctures == 0) opt.max_punctures = opt.mult_cap;

  EnumerationResult result;
  result.cap_limited = opt.mult_cap < default_cap;

  const auto all_sets = sft_detail::all_puncture_sets(opt.mult_cap, opt.max_punctures);

  // outside component shapes per degree value, F1-filtered; traced mode
  // records the rejected shapes in aggregate
  struct OutsideShape {
    int m;
    PunctureSet bottom;
  };
  std::vector<std::vector<OutsideShape>> shapes_by_m(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    for (const auto& ps : all_sets) {
      if (total_action(spec, ps) < Rational(m)) {
        shapes_by_m[m].push_back({m, ps});
      } else if (opt.traced) {
        ++result.pruned_component_shapes;
        if (static_cast<int>(result.rejected.size()) < opt.trace_component_limit)
          result.rejected.push_back(
              {"outside[m=" + std::to_string(m) + "]-" + puncture_set_str(ps), "F1"});
      }
    }
  }

  std::vector<BuildingCandidate> raw;

  // assemble the layers below a given multiset of outstanding punctures
  std::function<void(BuildingCandidate&, const PunctureSet&, int)> descend =
      [&](BuildingCandidate& cand, const PunctureSet& outstanding, int layers_left) {
        if (outstanding.empty()) {
          if (points_inside == 0) raw.push_back(cand);
          return;
        }
        // close with the inside layer
        for (const auto& parts : sft_detail::multiset_partitions(outstanding)) {
          const std::size_t base = cand.components.size();
          for (const auto& part : parts) {
            BuildingComponent c;
            c.layer = LayerKind::Inside;
            c.level = 0;
            c.top = part;
            cand.components.push_back(c);
          }
          raw.push_back(cand);
          cand.components.resize(base);
        }
        // or insert one more intermediate layer
        if (layers_left > 0) {
          for (const auto& parts : sft_detail::multiset_partitions(outstanding)) {
            // choose a bottom multiset for every part, area strictly positive
            std::vector<std::vector<const PunctureSet*>> choices(parts.size());
            bool feasible = true;
            for (std::size_t i = 0; i < parts.size() && feasible; ++i) {
              const Rational top_action = total_action(spec, parts[i]);
              for (const auto& ps : all_sets)
                if (total_action(spec, ps) < top_action) choices[i].push_back(&ps);
              if (choices[i].empty()) feasible = false;
            }
            if (!feasible) continue;
            std::function<void(std::size_t, PunctureSet&)> pick = [&](std::size_t i,
                                                                      PunctureSet& below) {
              if (i == parts.size()) {
                PunctureSet sorted_below = below;
                std::sort(sorted_below.begin(), sorted_below.end());
                descend(cand, sorted_below, layers_left - 1);
                return;
              }
              for (const PunctureSet* bottom : choices[i]) {
                BuildingComponent c;
                c.layer = LayerKind::Intermediate;
                c.top = parts[i];
                c.bottom = *bottom;
                cand.components.push_back(c);
                const std::size_t mark = below.size();
                below.insert(below.end(), bottom->begin(), bottom->end());
                pick(i + 1, below);
                below.resize(mark);
                cand.components.pop_back();
              }
            };
            PunctureSet below;
            pick(0, below);
          }
        }
      };

  // outside layer: multisets of shapes with degree sum d
  std::function<void(BuildingCandidate&, int, std::size_t, int)> outside_rec =
      [&](BuildingCandidate& cand, int remaining_degree, std::size_t min_shape, int n_comps) {
        if (remaining_degree == 0 && n_comps > 0) {
          PunctureSet outstanding;
          for (const auto& c : cand.components)
            outstanding.insert(outstanding.end(), c.bottom.begin(), c.bottom.end());
          std::sort(outstanding.begin(), outstanding.end());
          descend(cand, outstanding, opt.max_intermediate_layers);
          return;
        }
        if (n_comps >= opt.max_outside) return;
        // flattened shape index across degrees, nondecreasing for canonicity
        std::size_t idx = 0;
        for (int m = 0; m <= remaining_degree; ++m) {
          for (const auto& shape : shapes_by_m[m]) {
            if (idx >= min_shape) {
              BuildingComponent c;
              c.layer = LayerKind::Outside;
              c.degree = shape.m;
              c.bottom = shape.bottom;
              cand.components.push_back(c);
              outside_rec(cand, remaining_degree - m, idx, n_comps + 1);
              cand.components.pop_back();
            }
            ++idx;
          }
        }
      };

  BuildingCandidate seed;
  seed.degree = degree;
  seed.points_inside = points_inside;
  seed.points_outside = points_outside;
  outside_rec(seed, degree, 0, 0);

  // closed outside sphere with no punctures: only when nothing is inside
  if (points_inside == 0) {
    BuildingCandidate closed = seed;
    BuildingComponent c;
    c.layer = LayerKind::Outside;
    c.degree = degree;
    closed.components.push_back(c);
    raw.push_back(closed);
  }

  // set final levels: intermediate components were created top-down, so the
  // layer count fixes the level numbers
  auto fix_levels = [&](BuildingCandidate& cand) {
    // depth of each intermediate component = creation order of its layer;
    // rebuild from matching: levels are determined by repeatedly peeling
    // layers whose tops are all accounted for
    int max_inter = 0;
    for (auto& c : cand.components)
      if (c.layer == LayerKind::Intermediate) ++max_inter;
    if (max_inter == 0) {
      for (auto& c : cand.components)
        if (c.layer == LayerKind::Outside) c.level = 1;
      return;
    }
    // intermediate components appear in generation order: all components of
    // the first generated layer come before the next layer's; recover layer
    // boundaries by matching tops against the outside bottoms downward
    std::map<Puncture, int> need;  // punctures the layer above expects
    for (auto& c : cand.components)
      if (c.layer == LayerKind::Outside)
        for (const auto& p : c.bottom) ++need[p];
    std::vector<BuildingComponent*> inter;
    for (auto& c : cand.components)
      if (c.layer == LayerKind::Intermediate) inter.push_back(&c);
    int layer_count = 0;
    std::size_t i = 0;
    while (i < inter.size()) {
      ++layer_count;
      std::map<Puncture, int> next;
      while (i < inter.size()) {
        // component belongs to the current layer while its top is needed
        bool fits = true;
        auto tentative = need;
        for (const auto& p : inter[i]->top) {
          if (--tentative[p] < 0) {
            fits = false;
            break;
          }
        }
        if (!fits) break;
        need = tentative;
        for (const auto& p : inter[i]->bottom) ++next[p];
        inter[i]->level = layer_count;  // provisional, renumbered below
        ++i;
      }
      need = next;
    }
    // levels count from the inside up
    for (auto* c : inter) c->level = layer_count - c->level + 1;
    for (auto& c : cand.components)
      if (c.layer == LayerKind::Outside) c.level = layer_count + 1;
  };

  // filter pipeline
  std::set<std::string> seen;
  for (auto& cand : raw) {
    fix_levels(cand);
    if (!seen.insert(cand.key()).second) continue;

    int n_outside = 0;
    bool area_ok = true;
    Rational area(0);
    for (const auto& c : cand.components) {
      if (c.layer == LayerKind::Outside) ++n_outside;
      const Rational a = component_area(spec, c);
      if (!(a > Rational(0))) area_ok = false;
      area = area + a;
    }
    auto reject = [&](const std::string& filter) {
      if (opt.traced) result.rejected.push_back({cand.str(), filter});
    };
    if (!area_ok) {
      reject("F1");
      continue;
    }
    if (area != Rational(cand.degree)) {
      reject("F2");
      continue;
    }
    if (n_outside > degree) {
      reject("F5");
      continue;
    }
    const auto pairing = sft_detail::find_tree_pairing(cand.components);
    if (!pairing) {
      reject("F4");
      continue;
    }
    cand.pairing = *pairing;
    if (!sft_detail::assign_points(spec, cand, opt.point_area_bound)) {
      reject(opt.point_area_bound ? "F3/F6" : "F3");
      continue;
    }
    result.survivors.push_back(cand);
  }
  std::sort(result.survivors.begin(), result.survivors.end(),
            [](const BuildingCandidate& a, const BuildingCandidate& b) {
              return a.key() < b.key();
            });
  return result;
}

// ---------------------------------------------------------------------------
// Classification drivers.

struct ClassificationReport {
  EllipsoidSpec spec;
  EnumerationResult result;
  std::string expected;  // description of the expected unique survivor
  bool unique = false;
};

struct ClassificationError : std::runtime_error {
  explicit ClassificationError(const std::string& what) : std::runtime_error(what) {}
};

// Degeneration of a line (degree 1 through one point on each side of the
// ellipsoid boundary): the outside layer must be a single disk asymptotic to
// the short-axis orbit.
inline ClassificationReport classify_line_degeneration(const EllipsoidSpec& spec,
                                                       EnumerationOptions opt = {}) {
  if (!(spec.a_plus < Rational(1)))
    throw PreconditionError("line degeneration needs small axes", "a_+ < 1");
  opt.traced = true;
  ClassificationReport report{spec, enumerate_buildings(spec, 1, 1, 1, opt),
                              "outside disk asymptotic to g-", false};
  const auto& sv = report.result.survivors;
  report.unique = sv.size() == 1;
  if (report.unique) {
    for (const auto& c : sv[0].components) {
      if (c.layer == LayerKind::Outside &&
          !(c.degree == 1 && c.bottom.size() == 1 && c.bottom[0].axis == Axis::Minus &&
            c.bottom[0].mult == 1))
        report.unique = false;
      if (c.layer == LayerKind::Intermediate) report.unique = false;
    }
  }
  if (!report.unique) {
    std::string msg = "line classification not unique; survivors:";
    for (const auto& s : sv) msg += " [" + s.str() + "]";
    throw ClassificationError(msg);
  }
  return report;
}

// Degeneration of a conic through five points inside a long thin ellipsoid:
// unique building with one outside disk asymptotic to g+ and one inside disk
// through all five points, no intermediate layer.
inline ClassificationReport classify_conic_degeneration(const EllipsoidSpec& spec,
                                                        EnumerationOptions opt = {}) {
  if (!(spec.a_plus > Rational(1)))
    throw PreconditionError("conic range violated", "a_+ > 1");
  if (!(spec.a_plus < Rational(2)))
    throw PreconditionError("conic range violated", "a_+ < 2");
  if (!(Rational(4) * spec.a_minus < spec.a_plus))
    throw PreconditionError("conic range violated", "4 a_- < a_+");
  if (!(Rational(2) < Rational(5) * spec.a_minus))
    throw PreconditionError("conic range violated", "2 < 5 a_-");
  if (!opt.point_area_bound) {
    const Rational eps = (spec.a_plus - Rational(4) * spec.a_minus) / Rational(10);
    opt.point_area_bound = spec.a_plus / Rational(5) - eps;
  }
  opt.traced = true;
  ClassificationReport report{spec, enumerate_buildings(spec, 2, 5, 0, opt),
                              "outside disk asymptotic to g+, no intermediate layer", false};
  const auto& sv = report.result.survivors;
  report.unique = sv.size() == 1;
  if (report.unique) {
    int outside_disks = 0;
    for (const auto& c : sv[0].components) {
      if (c.layer == LayerKind::Intermediate) report.unique = false;
      if (c.layer == LayerKind::Outside) {
        ++outside_disks;
        if (!(c.degree == 2 && c.bottom.size() == 1 && c.bottom[0].axis == Axis::Plus &&
              c.bottom[0].mult == 1))
          report.unique = false;
      }
    }
    if (outside_disks != 1) report.unique = false;
  }
  if (!report.unique) {
    std::string msg = "conic classification not unique; survivors:";
    for (const auto& s : sv) msg += " [" + s.str() + "]";
    throw ClassificationError(msg);
  }
  return report;
}

}  // namespace llab
