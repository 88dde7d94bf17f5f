#include "linset/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "linset/error.hpp"

namespace linset {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long long parse_int(std::string_view s, const std::string& what) {
  s = trim(s);
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "bad " + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<Fe> parse_row(std::string_view s) {
  std::vector<Fe> row;
  for (auto tok : split(s, ',')) {
    const long long v = parse_int(tok, "element code");
    if (v < 0 || v > 0xffffffffLL) throw Error(ErrorCode::ParseError, "element code out of range");
    row.push_back(Fe{static_cast<std::uint32_t>(v)});
  }
  return row;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return in;
}

bool skip_line(std::string_view line) { return line.empty() || line.front() == '#'; }

void check_codes(const FieldTower& t, const std::vector<Fe>& row) {
  for (Fe x : row)
    if (x.code >= t.order()) throw Error(ErrorCode::ParseError, "element code " + std::to_string(x.code) + " too large");
}

std::string join_row(std::span<const Fe> row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + std::to_string(row[i].code);
  return s;
}

}  // namespace

std::pair<int, int> parse_prime_power(std::string_view text) {
  text = trim(text);
  const auto caret = text.find('^');
  if (caret != std::string_view::npos) {
    const int p = static_cast<int>(parse_int(text.substr(0, caret), "prime"));
    const int e = static_cast<int>(parse_int(text.substr(caret + 1), "exponent"));
    if (e < 1) throw Error(ErrorCode::ParseError, "exponent must be positive");
    return {p, e};
  }
  long long q = parse_int(text, "field size");
  if (q < 2) throw Error(ErrorCode::NonPrime, std::string(text) + " is not a prime power");
  long long p = 2;
  while (q % p != 0) ++p;
  int e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) throw Error(ErrorCode::NonPrime, std::string(text) + " is not a prime power");
  return {static_cast<int>(p), e};
}

SubspaceFile parse_subspace_file(std::istream& in) {
  SubspaceFile f;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const auto s = trim(line);
    if (skip_line(s)) continue;
    if (!header) {
      bool got_r = false, got_q = false, got_h = false;
      std::istringstream hs{std::string(s)};
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "bad header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "r") {
          f.r = static_cast<int>(parse_int(val, "r"));
          got_r = true;
        } else if (key == "q") {
          std::tie(f.p, f.e) = parse_prime_power(val);
          got_q = true;
        } else if (key == "h") {
          f.h = static_cast<int>(parse_int(val, "h"));
          got_h = true;
        } else {
          throw Error(ErrorCode::ParseError, "unknown header key '" + key + "'");
        }
      }
      if (!got_r || !got_q || !got_h) throw Error(ErrorCode::ParseError, "header needs r=, q= and h=");
      header = true;
      continue;
    }
    auto row = parse_row(s);
    if (static_cast<int>(row.size()) != f.r)
      throw Error(ErrorCode::ParseError, "row has " + std::to_string(row.size()) + " entries, expected " +
                                             std::to_string(f.r));
    f.rows.push_back(std::move(row));
  }
  if (!header) throw Error(ErrorCode::ParseError, "missing header line");
  return f;
}

SubspaceFile read_subspace_file(const std::string& path) {
  auto in = open(path);
  return parse_subspace_file(in);
}

std::string format_subspace_file(const FieldTower& t, const FqSubspace& u) {
  const int r = u.ambient_dim() / t.h();
  std::string out = "r=" + std::to_string(r) + " q=" + std::to_string(t.p()) + "^" + std::to_string(t.e()) +
                    " h=" + std::to_string(t.h()) + "\n";
  for (const auto& row : ext_basis(t, u)) out += join_row(row) + "\n";
  return out;
}

FqSubspace subspace_from_file(const FieldTower& t, const SubspaceFile& f) {
  if (f.p != t.p() || f.e != t.e() || f.h != t.h())
    throw Error(ErrorCode::AmbientMismatch, "subspace file field does not match the tower");
  if (f.r < 1) throw Error(ErrorCode::ParseError, "r must be positive");
  for (const auto& row : f.rows) check_codes(t, row);
  if (f.rows.empty()) return FqSubspace::zero(f.r * t.h());
  return canonicalize(t, f.rows);
}

SceneFile parse_scene_file(std::istream& in) {
  SceneFile f;
  bool got_field = false, got_k = false, got_pi = false, got_omega = false;
  std::string line;
  auto rows = [](std::string_view v) {
    ExtRows out;
    v = trim(v);
    if (v.empty()) return out;
    for (auto r : split(v, ';')) out.push_back(parse_row(r));
    return out;
  };
  while (std::getline(in, line)) {
    const auto s = trim(line);
    if (skip_line(s)) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected key=value: '" + line + "'");
    const auto key = trim(s.substr(0, eq));
    const auto val = trim(s.substr(eq + 1));
    if (key == "field") {
      f.field = parse_field_spec(val);
      got_field = true;
    } else if (key == "k") {
      f.k = static_cast<int>(parse_int(val, "k"));
      got_k = true;
    } else if (key == "pi") {
      f.pi = rows(val);
      got_pi = true;
    } else if (key == "omega") {
      f.omega = rows(val);
      got_omega = true;
    } else {
      throw Error(ErrorCode::ParseError, "unknown scene key '" + std::string(key) + "'");
    }
  }
  if (!got_field || !got_k || !got_pi || !got_omega)
    throw Error(ErrorCode::ParseError, "scene needs field=, k=, pi= and omega=");
  for (const auto* m : {&f.pi, &f.omega})
    for (const auto& row : *m)
      if (static_cast<int>(row.size()) != f.k) throw Error(ErrorCode::ParseError, "scene row length differs from k");
  return f;
}

SceneFile read_scene_file(const std::string& path) {
  auto in = open(path);
  return parse_scene_file(in);
}

std::string format_scene_file(const FieldTower& t, const ProjectionScene& sc) {
  auto rows = [](const ExtRows& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ";" : "") + join_row(m[i]);
    return s;
  };
  return "field=" + t.spec_string() + "\nk=" + std::to_string(sc.k) + "\npi=" + rows(sc.pi) +
         "\nomega=" + rows(sc.omega) + "\n";
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  auto in = open(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto s = trim(line);
    if (skip_line(s)) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, "config line without '=': '" + line + "'");
    out.emplace_back(std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))));
  }
  return out;
}

nlohmann::ordered_json point_json(const ProjPoint& p) {
  auto j = nlohmann::ordered_json::array();
  for (Fe x : p.coords) j.push_back(x.code);
  return j;
}

nlohmann::ordered_json linear_set_json(const LinearSet& l) {
  nlohmann::ordered_json j;
  j["q"] = l.q();
  j["h"] = l.h();
  j["r"] = l.r();
  j["rank"] = l.rank();
  j["size"] = l.size();
  auto spec = nlohmann::ordered_json::array();
  for (auto [w, n] : weight_spectrum(l)) spec.push_back({w, n});
  j["spectrum"] = spec;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& wp : l.points()) {
    nlohmann::ordered_json p;
    p["coords"] = point_json(wp.point);
    p["weight"] = wp.weight;
    pts.push_back(p);
  }
  j["points"] = pts;
  return j;
}

nlohmann::ordered_json linearity_json(const LinearityReport& r, int algebraic) {
  nlohmann::ordered_json j;
  j["algebraic_max_s"] = algebraic;
  j["geometric_max_s"] = r.geometric_max_s;
  auto fields = nlohmann::ordered_json::array();
  for (const auto& f : r.fields) {
    nlohmann::ordered_json e;
    e["s"] = f.s;
    e["status"] = to_string(f.status);
    e["nodes"] = f.nodes;
    if (f.witness) e["witness_rank"] = f.witness->rank();
    fields.push_back(e);
  }
  j["fields"] = fields;
  return j;
}

nlohmann::ordered_json pi_line_json(const PiLine& l) {
  nlohmann::ordered_json j;
  auto vec = [](const SigmaVec& v) {
    auto a = nlohmann::ordered_json::array();
    for (auto x : v) a.push_back(x);
    return a;
  };
  j["p1"] = vec(l.p1);
  j["p2"] = vec(l.p2);
  j["alpha"] = l.alpha.code;
  j["type"] = l.type.code;
  j["degree"] = l.degree;
  auto rp = nlohmann::ordered_json::array();
  for (Fe x : l.rank2_point) rp.push_back(x.code);
  j["rank2_point"] = rp;
  j["image"] = point_json(l.image);
  return j;
}

}  // namespace linset
