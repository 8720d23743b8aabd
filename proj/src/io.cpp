#include "fiberbody/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fiberbody/sphere.hpp"

namespace fiber {

using nlohmann::json;

namespace {

// Reports schema problems with a line number. nlohmann does not keep source
// positions, so the line is that of the first occurrence of the key.
class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg, const std::string& ptr, const std::string& key) const {
    throw ParseError(msg + " at " + (ptr.empty() ? "/" : ptr), line_of(key), ptr);
  }

  int line_of(const std::string& key) const {
    if (key.empty()) return 0;
    auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }

  void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& ptr) const {
    if (!obj.is_object()) fail("expected an object", ptr, last(ptr));
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
      if (!ok) fail("unknown field '" + it.key() + "'", ptr + "/" + it.key(), it.key());
    }
  }

  const json& need(const json& obj, const char* key, const std::string& ptr) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(std::string("missing field '") + key + "'", ptr + "/" + key, last(ptr));
    return *it;
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail("expected a number", ptr, last(ptr));
    double x = j.get<double>();
    if (!std::isfinite(x)) fail("number must be finite", ptr, last(ptr));
    return x;
  }

  int integer(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) fail("expected an integer", ptr, last(ptr));
    return j.get<int>();
  }

  Vec vec(const json& j, const std::string& ptr) const {
    if (!j.is_array() || j.empty()) fail("expected a nonempty array of numbers", ptr, last(ptr));
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], ptr + "/" + std::to_string(i));
    return v;
  }

  std::vector<Vec> vecs(const json& j, const std::string& ptr) const {
    if (!j.is_array() || j.empty()) fail("expected a nonempty array of vectors", ptr, last(ptr));
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec(j[i], ptr + "/" + std::to_string(i)));
    return out;
  }

  // rows given as arrays
  Mat matrix(const json& j, const std::string& ptr) const {
    auto rows = vecs(j, ptr);
    Mat m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols()) fail("matrix rows differ in length", ptr + "/" + std::to_string(i), last(ptr));
      m.row(i) = rows[i].transpose();
    }
    return m;
  }

  static std::string last(const std::string& ptr) {
    auto pos = ptr.rfind('/');
    return pos == std::string::npos ? ptr : ptr.substr(pos + 1);
  }

 private:
  const std::string& text_;
};

Body parse_body(const Reader& r, const json& j, const std::string& ptr) {
  if (!j.is_object()) r.fail("body must be an object", ptr, Reader::last(ptr));
  const json& tj = r.need(j, "type", ptr);
  if (!tj.is_string()) r.fail("type must be a string", ptr + "/type", "type");
  const std::string type = tj.get<std::string>();

  if (type == "polytope") {
    r.only_keys(j, {"type", "vertices"}, ptr);
    return Body::polytope(r.vecs(r.need(j, "vertices", ptr), ptr + "/vertices"));
  }
  if (type == "zonotope") {
    r.only_keys(j, {"type", "generators"}, ptr);
    return Body::zonotope(r.vecs(r.need(j, "generators", ptr), ptr + "/generators"));
  }
  if (type == "disc") {
    r.only_keys(j, {"type", "axis"}, ptr);
    return Body::disc(r.vec(r.need(j, "axis", ptr), ptr + "/axis"));
  }
  if (type == "discotope") {
    r.only_keys(j, {"type", "axes"}, ptr);
    return Body::discotope(r.vecs(r.need(j, "axes", ptr), ptr + "/axes"));
  }
  if (type == "schneider") {
    r.only_keys(j, {"type", "alpha"}, ptr);
    return Body::schneider(r.number(r.need(j, "alpha", ptr), ptr + "/alpha"));
  }
  if (type == "elliptope") {
    r.only_keys(j, {"type"}, ptr);
    return Body::elliptope();
  }
  if (type == "dice" || type == "cube" || type == "tetrahedron") {
    r.only_keys(j, {"type"}, ptr);
    return type == "dice" ? Body::dice() : type == "cube" ? Body::cube() : Body::tetrahedron();
  }
  if (type == "puffed") {
    r.only_keys(j, {"type", "facets", "vertices", "order", "boundary_samples"}, ptr);
    int order = j.contains("order") ? r.integer(j["order"], ptr + "/order") : 1;
    int samples = j.contains("boundary_samples") ? r.integer(j["boundary_samples"], ptr + "/boundary_samples") : 2000;
    if (j.contains("facets") == j.contains("vertices"))
      r.fail("puffed body needs exactly one of 'facets' or 'vertices'", ptr, "puffed");
    if (j.contains("vertices"))
      return Body::puffed(facets_from_vertices(r.vecs(j["vertices"], ptr + "/vertices"), order), samples);
    const json& fj = j["facets"];
    if (!fj.is_array() || fj.empty()) r.fail("facets must be a nonempty array", ptr + "/facets", "facets");
    std::vector<Facet> facets;
    for (std::size_t i = 0; i < fj.size(); ++i) {
      std::string fp = ptr + "/facets/" + std::to_string(i);
      r.only_keys(fj[i], {"normal", "offset"}, fp);
      facets.push_back({r.vec(r.need(fj[i], "normal", fp), fp + "/normal"),
                        r.number(r.need(fj[i], "offset", fp), fp + "/offset")});
    }
    return Body::puffed(FacetSystem(std::move(facets), order), samples);
  }
  if (type == "ball") {
    r.only_keys(j, {"type", "radius", "dim"}, ptr);
    double radius = r.number(r.need(j, "radius", ptr), ptr + "/radius");
    int dim = j.contains("dim") ? r.integer(j["dim"], ptr + "/dim") : 3;
    return Body::ball(radius, dim);
  }
  if (type == "sum") {
    r.only_keys(j, {"type", "terms"}, ptr);
    const json& terms = r.need(j, "terms", ptr);
    if (!terms.is_array() || terms.empty()) r.fail("terms must be a nonempty array", ptr + "/terms", "terms");
    std::vector<Body> bodies;
    for (std::size_t i = 0; i < terms.size(); ++i)
      bodies.push_back(parse_body(r, terms[i], ptr + "/terms/" + std::to_string(i)));
    return Body::sum(std::move(bodies));
  }
  if (type == "scaled") {
    r.only_keys(j, {"type", "lambda", "inner"}, ptr);
    return Body::scaled(r.number(r.need(j, "lambda", ptr), ptr + "/lambda"),
                        parse_body(r, r.need(j, "inner", ptr), ptr + "/inner"));
  }
  if (type == "linear_image") {
    r.only_keys(j, {"type", "matrix", "inner"}, ptr);
    return Body::linear_image(r.matrix(r.need(j, "matrix", ptr), ptr + "/matrix"),
                              parse_body(r, r.need(j, "inner", ptr), ptr + "/inner"));
  }
  r.fail("unknown body type '" + type + "'", ptr + "/type", "type");
}

ProjectionSplit parse_split(const Reader& r, const json& j, int dim) {
  const std::string ptr = "/split";
  r.only_keys(j, {"n", "m", "basis_V", "basis_W"}, ptr);
  int n = j.contains("n") ? r.integer(j["n"], ptr + "/n") : 1;
  int m = j.contains("m") ? r.integer(j["m"], ptr + "/m") : dim - n;
  if (n < 1 || m < 1) r.fail("split needs n >= 1 and m >= 1", ptr, "split");
  if (n + m != dim)
    throw ValidationError("split n + m = " + std::to_string(n + m) + " but the body lives in R^" +
                          std::to_string(dim));
  if (j.contains("basis_V") != j.contains("basis_W"))
    r.fail("give both basis_V and basis_W or neither", ptr, "split");
  if (!j.contains("basis_V")) return ProjectionSplit::coordinate(n, m);
  // bases listed as vectors, stored as columns
  Mat bv = r.matrix(j["basis_V"], ptr + "/basis_V").transpose();
  Mat bw = r.matrix(j["basis_W"], ptr + "/basis_W").transpose();
  if (bv.cols() != n || bw.cols() != m || bv.rows() != dim || bw.rows() != dim)
    throw ValidationError("split bases do not match n, m and the body dimension");
  return ProjectionSplit(bv, bw);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

BodyFile parse_body_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw ParseError(std::string("malformed body file: ") + e.what(), line, "");
  }
  Reader r(text);
  r.only_keys(root, {"body", "split"}, "");
  Body body = parse_body(r, r.need(root, "body", ""), "/body");
  if (body.dim() < 2) throw ValidationError("body must live in dimension >= 2");
  json split = root.contains("split") ? root["split"] : json::object();
  return {body, parse_split(r, split, body.dim()), fnv1a(text)};
}

BodyFile read_body_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open body file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body_spec(ss.str());
}

std::string describe_split(const ProjectionSplit& split) {
  std::string s = "n=" + std::to_string(split.n()) + " m=" + std::to_string(split.m());
  return s + (split.is_coordinate() ? " coordinate" : " custom");
}

std::vector<std::string> RunManifest::lines() const {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, body_hash);
  std::vector<std::string> out = {
      "command: " + command,
      std::string("body_hash: ") + hash,
      "split: " + split,
      "rule: " + rule,
      "seed: " + std::to_string(seed),
      "version: " + version,
  };
  if (wall_seconds) out.push_back("wall_seconds: " + fmt6(*wall_seconds));
  return out;
}

void write_support_csv(std::ostream& os, const SampledSupport& s, const RunManifest& manifest) {
  s.validate();
  for (const auto& line : manifest.lines()) os << "# " << line << '\n';
  os << "# method: " << (s.method.empty() ? "-" : s.method) << " nodes: " << s.nodes << " samples: " << s.samples << '\n';
  for (int k = 0; k < s.dim; ++k) os << "u_" << (k + 1) << ',';
  os << "h,stderr\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int k = 0; k < s.dim; ++k) os << fmt17(s.directions[i](k)) << ',';
    os << fmt17(s.values[i]) << ',' << (s.stochastic() ? fmt17(s.std_errors[i]) : std::string("0")) << '\n';
  }
}

SampledSupport read_support_csv(std::istream& is) {
  SampledSupport s;
  std::string line;
  int lineno = 0;
  bool header = false;
  bool any_error = false;
  std::vector<double> errors;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string key;
      while (ms >> key) {
        if (key == "method:") {
          ms >> s.method;
          if (s.method == "-") s.method.clear();
        }
        else if (key == "nodes:") ms >> s.nodes;
        else if (key == "samples:") ms >> s.samples;
        else if (key == "seed:") ms >> s.seed;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      if (cells.size() < 3 || cells[cells.size() - 2] != "h" || cells.back() != "stderr")
        throw ParseError("CSV header must be u_1,...,u_m,h,stderr", lineno, "header");
      s.dim = static_cast<int>(cells.size()) - 2;
      header = true;
      continue;
    }
    if (static_cast<int>(cells.size()) != s.dim + 2)
      throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells", lineno, "row");
    std::vector<double> nums;
    for (const auto& c : cells) {
      char* end = nullptr;
      double x = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') throw ParseError("not a number: '" + c + "'", lineno, "row");
      nums.push_back(x);
    }
    Vec u(s.dim);
    for (int k = 0; k < s.dim; ++k) u(k) = nums[k];
    s.directions.push_back(u);
    s.values.push_back(nums[s.dim]);
    errors.push_back(nums[s.dim + 1]);
    any_error = any_error || nums[s.dim + 1] != 0.0;
  }
  if (!header) throw ParseError("CSV has no header row", lineno, "header");
  if (any_error || s.samples > 0) s.std_errors = errors;
  s.validate();
  return s;
}

SampledSupport read_support_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open support file '" + path + "'");
  return read_support_csv(in);
}

void write_svg(std::ostream& os, const std::vector<SvgPolygon>& polygons, const RunManifest& manifest) {
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (const auto& p : polygons)
    for (const auto& v : p.vertices) {
      lo_x = std::min(lo_x, v(0));
      hi_x = std::max(hi_x, v(0));
      lo_y = std::min(lo_y, v(1));
      hi_y = std::max(hi_y, v(1));
    }
  double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  double margin = 0.05 * span;
  double x0 = lo_x - margin, y0 = lo_y - margin;
  double w = hi_x - lo_x + 2 * margin, h = hi_y - lo_y + 2 * margin;
  // SVG y grows downwards: draw with y flipped
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
  for (const auto& line : manifest.lines()) os << "  " << line << '\n';
  os << "-->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt6(x0) << ' ' << fmt6(-(y0 + h)) << ' '
     << fmt6(w) << ' ' << fmt6(h) << "\">\n";
  const double stroke = span / 300;
  os << "  <g stroke=\"#999\" stroke-width=\"" << fmt6(stroke) << "\">\n";
  os << "    <line x1=\"" << fmt6(x0) << "\" y1=\"0\" x2=\"" << fmt6(x0 + w) << "\" y2=\"0\"/>\n";
  os << "    <line x1=\"0\" y1=\"" << fmt6(-(y0 + h)) << "\" x2=\"0\" y2=\"" << fmt6(-y0) << "\"/>\n";
  os << "  </g>\n";
  static const char* colors[] = {"#1f4e9a", "#b5452b", "#2e7d32", "#6a1b9a", "#8d6e00"};
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    const auto& p = polygons[i];
    if (p.vertices.empty()) continue;
    os << "  <path id=\"" << p.label << "\" fill=\"" << (p.vertices.size() > 2 ? colors[i % 5] : "none")
       << "\" fill-opacity=\"0.25\" stroke=\"" << colors[i % 5] << "\" stroke-width=\"" << fmt6(2 * stroke)
       << "\" d=\"";
    for (std::size_t k = 0; k < p.vertices.size(); ++k)
      os << (k ? " L " : "M ") << fmt6(p.vertices[k](0)) << ' ' << fmt6(-p.vertices[k](1));
    if (p.vertices.size() > 2) os << " Z";
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

PointCloud boundary_point_cloud(const Body& body, int samples) {
  if (body.dim() != 3) throw DimensionError("point clouds are exported for 3-dimensional bodies only");
  if (samples < 1) throw DomainError("need at least one sample");
  PointCloud cloud;
  for (const auto& u : sphere_sample(3, samples, SphereMode::Fibonacci)) {
    if (auto g = exact_gradient(body, u)) {
      cloud.points.push_back(*g);
    } else {
      cloud.points.push_back(support_gradient(body, u));
      ++cloud.nonsmooth;
    }
  }
  return cloud;
}

void write_point_cloud(std::ostream& os, const PointCloud& cloud, CloudFormat format,
                       const RunManifest& manifest) {
  auto lines = manifest.lines();
  lines.push_back("points: " + std::to_string(cloud.points.size()));
  if (cloud.nonsmooth > 0)
    lines.push_back("finite_difference_points: " + std::to_string(cloud.nonsmooth) +
                    " (subgradients where h is not smooth)");
  if (format == CloudFormat::Obj) {
    for (const auto& l : lines) os << "# " << l << '\n';
    for (const auto& p : cloud.points)
      os << "v " << fmt17(p(0)) << ' ' << fmt17(p(1)) << ' ' << fmt17(p(2)) << '\n';
    return;
  }
  os << "ply\nformat ascii 1.0\n";
  for (const auto& l : lines) os << "comment " << l << '\n';
  os << "element vertex " << cloud.points.size() << "\n";
  os << "property double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& p : cloud.points) os << fmt17(p(0)) << ' ' << fmt17(p(1)) << ' ' << fmt17(p(2)) << '\n';
}

}  // namespace fiber
