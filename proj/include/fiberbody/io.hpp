#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fiberbody/body.hpp"
#include "fiberbody/sampled.hpp"

namespace fiber {

inline constexpr const char* kToolVersion = "0.3.1";

struct BodyFile {
  Body body;
  ProjectionSplit split;
  std::uint64_t hash = 0;  // FNV-1a of the raw text
};

/// Structured-text (JSON) body description:
///   {"body": {"type": ..., ...}, "split": {"n":1, "m":2, "basis_V": [...], "basis_W": [...]}}
/// Missing split means the coordinate split n = 1, m = d - 1.
BodyFile parse_body_spec(const std::string& text);
BodyFile read_body_file(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::uint64_t body_hash = 0;
  std::string split;
  std::string rule;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::optional<double> wall_seconds;

  std::vector<std::string> lines() const;
};

std::string describe_split(const ProjectionSplit& split);

/// CSV: '#' manifest lines, header u_1..u_m,h,stderr, one row per direction, %.17g.
void write_support_csv(std::ostream& os, const SampledSupport& s, const RunManifest& manifest);
SampledSupport read_support_csv(std::istream& is);
SampledSupport read_support_csv_file(const std::string& path);

struct SvgPolygon {
  std::string label;
  std::vector<Vec> vertices;  // counter-clockwise; two points for a segment
};

/// One path per polygon plus coordinate axes; viewBox fitted with a 5% margin.
void write_svg(std::ostream& os, const std::vector<SvgPolygon>& polygons, const RunManifest& manifest);

enum class CloudFormat { Obj, Ply };

struct PointCloud {
  std::vector<Vec> points;
  int nonsmooth = 0;  // points taken from a finite-difference subgradient
};

/// Boundary points grad h(u) for u on a Fibonacci sphere sample.
PointCloud boundary_point_cloud(const Body& body, int samples);
void write_point_cloud(std::ostream& os, const PointCloud& cloud, CloudFormat format,
                       const RunManifest& manifest);

}  // namespace fiber
