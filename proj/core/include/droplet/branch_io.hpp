#pragma once

// Branch persistence and export: JSONL stream format (header line, one
// point object per line, trailing status line), CSV export, and SVG
// rendering of drop shapes. All floating-point fields are serialized with
// 17 significant digits so parsed values match bitwise.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "droplet/continuation.hpp"

namespace droplet {

struct BranchFileHeader {
  int format_version = 1;
  int m = 2;
  int k = 1;
  int sign = 1;
  int n_modes = 64;
  int grid_size = 1024;
  double c_bif = 0.0;
  ContinuationConfig config;
  std::string created;  // ISO-8601 UTC
};

struct BranchFile {
  BranchFileHeader header;
  std::vector<SolutionPoint> points;
  std::optional<BranchStatus> status;
};

/// %.17g, round-trip exact for finite doubles.
std::string format_g17(double value);

/// Current UTC time as ISO-8601 (e.g. 2026-01-31T12:00:00Z).
std::string iso8601_utc_now();

BranchFileHeader make_header(const BifurcationPoint& bp, int direction,
                             const ContinuationConfig& cfg);

std::string header_line(const BranchFileHeader& header);
std::string point_line(const SolutionPoint& point);
std::string status_line(BranchStatus status);

BranchFileHeader parse_header_line(const std::string& line);
/// m comes from the already-parsed header.
SolutionPoint parse_point_line(const std::string& line, int m);

/// Reads and validates a full branch file. Throws ParseError on malformed
/// content or a header whose c_bif disagrees with bifurcation_speed(m, k)
/// beyond 1e-12, IoError when the file cannot be opened.
BranchFile read_branch_file(const std::string& path);

/// Streams a branch to disk incrementally: header at construction, one
/// line per point, status line on finish(). Flushes after every line.
class BranchFileWriter {
 public:
  BranchFileWriter(const std::string& path, const BranchFileHeader& header);
  ~BranchFileWriter();

  BranchFileWriter(const BranchFileWriter&) = delete;
  BranchFileWriter& operator=(const BranchFileWriter&) = delete;

  void write_point(const SolutionPoint& point);
  void finish(BranchStatus status);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// CSV export: header row then s, c, residual_complex, chord_arc, c1_norm,
/// curvature_min, curvature_max, decay_slope per point, RFC-4180 quoting.
void write_csv(const BranchFile& file, std::ostream& out);

/// Closed polyline of Z on grid_size nodes with a dashed unit-circle
/// reference, viewBox fitted with a 5% margin. Byte-deterministic for
/// fixed input.
std::string render_svg(const SolutionPoint& point, int grid_size);

}  // namespace droplet
