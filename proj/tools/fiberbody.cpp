// fiberbody: fiber bodies of convex bodies from the command line.
//
//   fiberbody fiber  BODY.json [--method M] [--directions N] [--nodes N] [--samples N] [--seed S] [--out PATH]
//   fiberbody support BODY.json [--directions N] [--out PATH]
//   fiberbody verify BODY.json [--suite NAME|all] [--method M] ...
//   fiberbody compare A.csv B.csv [--tol T]
//   fiberbody export BODY.json|DATA.csv [--format svg|obj|ply] [--samples N] [--out PATH]
//
// exit codes: 0 ok, 1 check failed, 2 usage or input error, 3 numeric error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fiberbody/io.hpp"
#include "fiberbody/routes.hpp"
#include "fiberbody/sphere.hpp"

using namespace fiber;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct Flags {
  std::string method = "auto";
  int directions = 64;
  int nodes = 64;
  long samples = 200000;
  std::uint64_t seed = 1;
  std::string out;
  bool timing = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--method", f.method, "auto, slicer, curved, zonoid-exact, zonoid-mc, closed-form");
  cmd->add_option("--directions", f.directions, "number of sample directions")->check(CLI::Range(1, 1 << 20));
  cmd->add_option("--nodes", f.nodes, "quadrature nodes per axis")->check(CLI::Range(1, 4096));
  cmd->add_option("--samples", f.samples, "Monte-Carlo samples / point-cloud size")->check(CLI::Range(1L, 1L << 40));
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_flag("--timing", f.timing, "record wall time in the manifest");
}

RouteOptions route_options(const Flags& f) {
  RouteOptions o;
  o.method = parse_method(f.method);
  o.nodes = f.nodes;
  o.samples = f.samples;
  o.seed = f.seed;
  return o;
}

template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

RunManifest manifest_for(const std::string& command, const BodyFile& bf, const Flags& f, const std::string& rule) {
  RunManifest m;
  m.command = command;
  m.body_hash = bf.hash;
  m.split = describe_split(bf.split);
  m.rule = rule;
  m.seed = f.seed;
  return m;
}

std::string rule_text(const SampledSupport& s) {
  std::ostringstream os;
  os << s.method << " nodes=" << s.nodes << " samples=" << s.samples;
  return os.str();
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiber bodies of convex bodies"};
  app.require_subcommand(1);
  Flags f;
  std::string body_path, other_path, suite = "all", format;
  double tol = 1e-3;

  auto* fiber_cmd = app.add_subcommand("fiber", "sampled support function of the fiber body");
  fiber_cmd->add_option("body", body_path, "body description (JSON)")->required();
  add_common(fiber_cmd, f);

  auto* support_cmd = app.add_subcommand("support", "sampled support function of the body itself");
  support_cmd->add_option("body", body_path, "body description (JSON)")->required();
  add_common(support_cmd, f);

  auto* verify_cmd = app.add_subcommand("verify", "run invariant checks");
  verify_cmd->add_option("body", body_path, "body description (JSON)")->required();
  verify_cmd->add_option("--suite", suite, "homogeneity, symmetry, equivariance, subadditivity, sandwich, "
                                           "route-agreement or all");
  add_common(verify_cmd, f);

  auto* compare_cmd = app.add_subcommand("compare", "sup-norm distance of two support files");
  compare_cmd->add_option("a", body_path, "first CSV")->required();
  compare_cmd->add_option("b", other_path, "second CSV")->required();
  compare_cmd->add_option("--tol", tol, "fail above this distance");
  add_common(compare_cmd, f);

  auto* export_cmd = app.add_subcommand("export", "SVG of a planar fiber body or point cloud of a 3-d body");
  export_cmd->add_option("input", body_path, "body description (JSON) or support CSV")->required();
  export_cmd->add_option("--format", format, "svg, obj or ply (default from --out, else svg)");
  add_common(export_cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto stamp = [&](RunManifest& m) {
    if (f.timing) m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (fiber_cmd->parsed()) {
      BodyFile bf = read_body_file(body_path);
      auto dirs = sphere_sample(bf.split.m(), f.directions, SphereMode::UniformGrid, f.seed);
      SampledSupport s = fiber_route(bf.body, bf.split, dirs, route_options(f));
      RunManifest m = manifest_for("fiber", bf, f, rule_text(s));
      stamp(m);
      emit(f.out, [&](std::ostream& os) { write_support_csv(os, s, m); });
      return kOk;
    }
    if (support_cmd->parsed()) {
      BodyFile bf = read_body_file(body_path);
      SampledSupport s;
      s.dim = bf.body.dim();
      s.directions = sphere_sample(s.dim, f.directions, SphereMode::UniformGrid, f.seed);
      for (const auto& u : s.directions) s.values.push_back(support(bf.body, u));
      s.method = "support";
      RunManifest m = manifest_for("support", bf, f, "direct");
      stamp(m);
      emit(f.out, [&](std::ostream& os) { write_support_csv(os, s, m); });
      return kOk;
    }
    if (verify_cmd->parsed()) {
      BodyFile bf = read_body_file(body_path);
      std::vector<Suite> suites = suite == "all" ? all_suites() : std::vector<Suite>{parse_suite(suite)};
      RouteOptions o = route_options(f);
      bool ok = true;
      emit(f.out, [&](std::ostream& os) {
        for (Suite s : suites) {
          VerifyReport rep = run_verify(bf.body, bf.split, s, o, std::min(f.directions, 16));
          for (const auto& c : rep.checks) {
            char line[256];
            std::snprintf(line, sizeof line, "%-4s %-60s residual %.3e  tol %.1e", c.passed ? "PASS" : "FAIL",
                          c.name.c_str(), c.residual, c.tolerance);
            os << line << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
          }
          ok = ok && rep.passed();
        }
      });
      return ok ? kOk : kCheckFailed;
    }
    if (compare_cmd->parsed()) {
      SampledSupport a = read_support_csv_file(body_path);
      SampledSupport b = read_support_csv_file(other_path);
      double d = hausdorff_distance(a, b);
      std::printf("hausdorff (sampled lower bound) %.17g over %zu directions\n", d, a.size());
      return d <= tol ? kOk : kCheckFailed;
    }
    if (export_cmd->parsed()) {
      if (format.empty()) format = ends_with(f.out, ".obj") ? "obj" : ends_with(f.out, ".ply") ? "ply" : "svg";
      if (format != "svg" && format != "obj" && format != "ply") throw InputError("unknown format '" + format + "'");
      if (format == "svg") {
        SampledSupport s;
        RunManifest m;
        if (ends_with(body_path, ".csv")) {
          s = read_support_csv_file(body_path);
          m.command = "export svg";
          m.rule = rule_text(s);
          m.seed = s.seed;
          m.split = "from " + body_path;
        } else {
          BodyFile bf = read_body_file(body_path);
          if (bf.split.m() != 2) throw InputError("SVG export needs a planar fiber body (m = 2)");
          auto dirs = sphere_sample(2, std::max(f.directions, 3), SphereMode::UniformGrid, f.seed);
          s = fiber_route(bf.body, bf.split, dirs, route_options(f));
          m = manifest_for("export svg", bf, f, rule_text(s));
        }
        if (s.dim != 2) throw InputError("SVG export needs planar support data");
        stamp(m);
        std::vector<SvgPolygon> polys{{"fiber_body", polygon_from_support(s)}};
        emit(f.out, [&](std::ostream& os) { write_svg(os, polys, m); });
        return kOk;
      }
      BodyFile bf = read_body_file(body_path);
      PointCloud cloud = boundary_point_cloud(bf.body, static_cast<int>(f.samples));
      RunManifest m = manifest_for("export " + format, bf, f, "gradient samples");
      stamp(m);
      emit(f.out, [&](std::ostream& os) {
        write_point_cloud(os, cloud, format == "obj" ? CloudFormat::Obj : CloudFormat::Ply, m);
      });
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << '\n';
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const MethodError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
