#pragma once

// Text formats: subspace files, scene files and JSON renderings.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "linset/constructions.hpp"
#include "linset/directions.hpp"
#include "linset/linear_set.hpp"
#include "linset/linearity.hpp"
#include "linset/projection.hpp"

namespace linset {

// "2", "4" or "2^2" -> (p, e). Throws ParseError or NonPrime.
std::pair<int, int> parse_prime_power(std::string_view text);

// Subspace file:
//   r=<r> q=<p^e> h=<h>
//   c_1,c_2,...,c_r      one basis row per line, element codes
// Blank lines and lines starting with '#' are skipped.
struct SubspaceFile {
  int r = 0;
  int p = 0, e = 1, h = 0;
  std::vector<std::vector<Fe>> rows;
};
SubspaceFile parse_subspace_file(std::istream& in);
SubspaceFile read_subspace_file(const std::string& path);
// Header plus the canonical F_q-basis of u.
std::string format_subspace_file(const FieldTower& t, const FqSubspace& u);
// Checks the header against the tower and returns the F_q-span of the rows.
FqSubspace subspace_from_file(const FieldTower& t, const SubspaceFile& f);

// Scene file, key=value lines:
//   field=2^1:6
//   k=4
//   pi=c,c,c,c;c,c,c,c      rows separated by ';'
//   omega=c,c,c,c;c,c,c,c
struct SceneFile {
  FieldSpec field;
  int k = 0;
  ExtRows pi, omega;
};
SceneFile parse_scene_file(std::istream& in);
SceneFile read_scene_file(const std::string& path);
std::string format_scene_file(const FieldTower& t, const ProjectionScene& sc);

// "key=value" lines; '#' comments. Throws ParseError on malformed lines.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

nlohmann::ordered_json point_json(const ProjPoint& p);
nlohmann::ordered_json linear_set_json(const LinearSet& l);
nlohmann::ordered_json linearity_json(const LinearityReport& r, int algebraic);
nlohmann::ordered_json pi_line_json(const PiLine& l);

}  // namespace linset
