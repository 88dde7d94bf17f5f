#pragma once

// The projection model: Sigma = PG(k-1, q) inside Sigma* = PG(k-1, q^h),
// projected from Pi onto Omega.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linset/linear_set.hpp"

namespace linset {

struct TypeOrbit {
  Fe rep;                  // least code in the orbit
  int degree = 0;          // [F_q(alpha) : F_q]
  std::vector<Fe> orbit;   // S_alpha, sorted
  std::vector<Fe> cosets;  // least element of each F_q^*-coset in S_alpha, sorted
};

TypeOrbit type_orbit(const FieldTower& t, Fe alpha);
// Least code in S_alpha, without materializing the cosets.
Fe type_representative(const FieldTower& t, Fe alpha);

// A vector of F_q^k, stored as GroundField indices.
using SigmaVec = std::vector<std::uint8_t>;

struct ProjectionScene {
  int k = 0;        // Sigma* = PG(k-1, q^h)
  int r = 0;        // Omega = PG(r-1, q^h)
  ExtRows pi;       // k - r rows
  ExtRows omega;    // r rows
  ExtRows omega_map;  // row i: Omega-coordinates of the projection of e_i
};

// Validates rank conditions and disjointness; throws DegenerateScene or PiNotDisjoint.
ProjectionScene make_scene(const FieldTower& t, int k, ExtRows pi, ExtRows omega);

bool in_sigma(const FieldTower& t, std::span<const Fe> v);
// Omega-coordinates of the image of a point of Sigma. Throws NotInSigma.
ProjPoint project(const FieldTower& t, const ProjectionScene& sc, const ProjPoint& p);
ProjPoint project(const FieldTower& t, const ProjectionScene& sc, const SigmaVec& x);
// Omega-coordinates to Sigma*-coordinates.
ExtVec omega_to_ambient(const FieldTower& t, const ProjectionScene& sc, std::span<const Fe> c);

// The normalized vectors of F_q^k (one per point of Sigma), in enumeration order.
std::vector<SigmaVec> sigma_points(const FieldTower& t, int k);
ExtVec sigma_to_ext(const FieldTower& t, const SigmaVec& x);

// Image of Sigma, weights from fiber sizes.
LinearSet projected_linear_set(const FieldTower& t, const ProjectionScene& sc);
// F_q-span of the images of e_1..e_k in Omega-coordinates; its linear set is the projection.
FqSubspace scene_subspace(const FieldTower& t, const ProjectionScene& sc);

struct PiLine {
  FqSubspace line;     // 2-dim subspace of F_q^k
  SigmaVec p1, p2;     // RREF rows of line
  ExtVec rank2_point;  // normalized p1 - alpha p2 in Sigma* coordinates
  Fe alpha;
  Fe type;             // type_representative(alpha)
  int degree = 0;
  ProjPoint image;     // common image of the line's points
};

// All Pi-lines, sorted by line.
std::vector<PiLine> find_pi_lines(const FieldTower& t, const ProjectionScene& sc);
// The Pi-line spanned by two points of Sigma, if that line is one.
std::optional<PiLine> pi_line_through(const FieldTower& t, const ProjectionScene& sc, const SigmaVec& a,
                                      const SigmaVec& b);

struct PiLineBounds {
  std::uint64_t points = 0;
  std::uint64_t pi_lines = 0;
  std::uint64_t heavy_fibers = 0;       // fibers with weight >= 3
  std::uint64_t threshold_hits = 0;     // (fiber, type) pairs meeting the count threshold
  std::vector<std::string> violations;
};
PiLineBounds check_pi_line_bounds(const FieldTower& t, const ProjectionScene& sc);

struct RegulusReport {
  std::vector<FqSubspace> regulus;  // the q+1 lines
  bool all_pi_lines = false;
  bool same_type = false;
  Fe type;
  int degree = 0;
  bool fourth_line = false;     // a Pi-line in H off the regulus meeting M
  bool partitioned = false;     // H covered by disjoint Pi-lines of the common type
  std::vector<std::string> violations;
};
// l1, l2, l3 pairwise disjoint in a 3-space with rank-2 points on a line of Pi.
// Throws NotDisjoint or NotCollinearInPi.
RegulusReport check_regulus(const FieldTower& t, const ProjectionScene& sc, const PiLine& l1, const PiLine& l2,
                            const PiLine& l3);

}  // namespace linset
