#include "droplet/branch_io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "droplet/bifurcation.hpp"

namespace droplet {

namespace {

using nlohmann::json;

// JSON has no infinity literal; a degenerate chord-arc sentinel is clamped
// to a representable magnitude on write.
double finite_for_json(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? 1e308 : -1e308;
}

void append_field(std::string& out, const char* key, double value,
                  bool first = false) {
  if (!first) out += ',';
  out += '"';
  out += key;
  out += "\":";
  out += format_g17(finite_for_json(value));
}

void append_field(std::string& out, const char* key, int value,
                  bool first = false) {
  if (!first) out += ',';
  out += '"';
  out += key;
  out += "\":";
  out += std::to_string(value);
}

double require_number(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ParseError(std::string("missing numeric field '") + key + "'");
  }
  return obj[key].get<double>();
}

int require_int(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw ParseError(std::string("missing integer field '") + key + "'");
  }
  return obj[key].get<int>();
}

json parse_json_line(const std::string& line) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError("malformed JSONL line: " + line.substr(0, 80));
  }
  return obj;
}

}  // namespace

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

BranchFileHeader make_header(const BifurcationPoint& bp, int direction,
                             const ContinuationConfig& cfg) {
  BranchFileHeader h;
  h.m = bp.m;
  h.k = bp.k;
  h.sign = direction;
  h.n_modes = cfg.n_modes;
  h.grid_size = cfg.grid_size;
  h.c_bif = bp.c;
  h.config = cfg;
  h.created = iso8601_utc_now();
  return h;
}

std::string header_line(const BranchFileHeader& h) {
  std::string out = "{";
  append_field(out, "format_version", h.format_version, true);
  append_field(out, "m", h.m);
  append_field(out, "k", h.k);
  append_field(out, "sign", h.sign);
  append_field(out, "N", h.n_modes);
  append_field(out, "M", h.grid_size);
  append_field(out, "c_bif", h.c_bif);
  out += ",\"config\":{";
  append_field(out, "N", h.config.n_modes, true);
  append_field(out, "M", h.config.grid_size);
  append_field(out, "tol_newton", h.config.tol_newton);
  append_field(out, "max_newton", h.config.max_newton);
  append_field(out, "ds_init", h.config.ds_init);
  append_field(out, "ds_min", h.config.ds_min);
  append_field(out, "ds_max", h.config.ds_max);
  append_field(out, "c1_max", h.config.c1_max);
  append_field(out, "chord_arc_max", h.config.chord_arc_max);
  append_field(out, "loop_eps", h.config.loop_eps);
  append_field(out, "loop_s_min", h.config.loop_s_min);
  append_field(out, "max_steps", h.config.max_steps);
  append_field(out, "deriv_floor", h.config.deriv_floor);
  append_field(out, "sym_tol", h.config.sym_tol);
  out += "},\"created\":\"";
  out += h.created;
  out += "\"}";
  return out;
}

std::string point_line(const SolutionPoint& p) {
  std::string out = "{";
  append_field(out, "s", p.s, true);
  append_field(out, "c", p.c);
  out += ",\"coeffs\":[";
  for (int i = 0; i < p.z.modes(); ++i) {
    if (i > 0) out += ',';
    out += format_g17(p.z.a[static_cast<size_t>(i)]);
  }
  out += ']';
  append_field(out, "residual_complex", p.norm_complex);
  append_field(out, "residual_real", p.norm_real);
  append_field(out, "chord_arc", p.diagnostics.chord_arc);
  append_field(out, "c1_norm", p.diagnostics.c1_norm);
  append_field(out, "curvature_min", p.diagnostics.curvature_min);
  append_field(out, "curvature_max", p.diagnostics.curvature_max);
  append_field(out, "decay_slope", p.diagnostics.decay_slope);
  append_field(out, "newton_iters", p.newton_iters);
  out += '}';
  return out;
}

std::string status_line(BranchStatus status) {
  return "{\"status\":\"" + to_string(status) + "\"}";
}

BranchFileHeader parse_header_line(const std::string& line) {
  const json obj = parse_json_line(line);
  BranchFileHeader h;
  h.format_version = require_int(obj, "format_version");
  if (h.format_version != 1) {
    throw ParseError("unsupported format_version " +
                     std::to_string(h.format_version));
  }
  h.m = require_int(obj, "m");
  h.k = require_int(obj, "k");
  h.sign = require_int(obj, "sign");
  h.n_modes = require_int(obj, "N");
  h.grid_size = require_int(obj, "M");
  h.c_bif = require_number(obj, "c_bif");
  if (std::abs(h.c_bif - bifurcation_speed(h.m, h.k)) > 1e-12) {
    throw ParseError("header c_bif inconsistent with bifurcation speed for (m,k)");
  }
  if (obj.contains("config") && obj["config"].is_object()) {
    const json& c = obj["config"];
    h.config.n_modes = require_int(c, "N");
    h.config.grid_size = require_int(c, "M");
    h.config.tol_newton = require_number(c, "tol_newton");
    h.config.max_newton = require_int(c, "max_newton");
    h.config.ds_init = require_number(c, "ds_init");
    h.config.ds_min = require_number(c, "ds_min");
    h.config.ds_max = require_number(c, "ds_max");
    h.config.c1_max = require_number(c, "c1_max");
    h.config.chord_arc_max = require_number(c, "chord_arc_max");
    h.config.loop_eps = require_number(c, "loop_eps");
    h.config.loop_s_min = require_number(c, "loop_s_min");
    h.config.max_steps = require_int(c, "max_steps");
    h.config.deriv_floor = require_number(c, "deriv_floor");
    h.config.sym_tol = require_number(c, "sym_tol");
  }
  if (obj.contains("created") && obj["created"].is_string()) {
    h.created = obj["created"].get<std::string>();
  }
  return h;
}

SolutionPoint parse_point_line(const std::string& line, int m) {
  const json obj = parse_json_line(line);
  SolutionPoint p;
  p.s = require_number(obj, "s");
  p.c = require_number(obj, "c");
  if (!obj.contains("coeffs") || !obj["coeffs"].is_array() ||
      obj["coeffs"].empty()) {
    throw ParseError("point line without coeffs array");
  }
  std::vector<double> a;
  a.reserve(obj["coeffs"].size());
  for (const json& x : obj["coeffs"]) {
    if (!x.is_number()) throw ParseError("non-numeric coefficient");
    a.push_back(x.get<double>());
  }
  p.z = LatticeCoeffs(m, std::move(a));
  p.norm_complex = require_number(obj, "residual_complex");
  p.norm_real = require_number(obj, "residual_real");
  p.diagnostics.chord_arc = require_number(obj, "chord_arc");
  p.diagnostics.c1_norm = require_number(obj, "c1_norm");
  p.diagnostics.curvature_min = require_number(obj, "curvature_min");
  p.diagnostics.curvature_max = require_number(obj, "curvature_max");
  p.diagnostics.decay_slope = require_number(obj, "decay_slope");
  p.newton_iters = require_int(obj, "newton_iters");
  return p;
}

BranchFile read_branch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  BranchFile file;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_header) {
      file.header = parse_header_line(line);
      have_header = true;
      continue;
    }
    const json probe = parse_json_line(line);
    if (probe.contains("status")) {
      if (!probe["status"].is_string()) throw ParseError("non-string status");
      file.status = branch_status_from_string(probe["status"].get<std::string>());
      continue;
    }
    file.points.push_back(parse_point_line(line, file.header.m));
  }
  if (!have_header) throw ParseError("branch file has no header line");
  return file;
}

struct BranchFileWriter::Impl {
  std::ofstream out;
  bool finished = false;
};

BranchFileWriter::BranchFileWriter(const std::string& path,
                                   const BranchFileHeader& header)
    : impl_(std::make_unique<Impl>()) {
  impl_->out.open(path);
  if (!impl_->out) throw IoError("cannot open '" + path + "' for writing");
  impl_->out << header_line(header) << '\n';
  impl_->out.flush();
}

BranchFileWriter::~BranchFileWriter() = default;

void BranchFileWriter::write_point(const SolutionPoint& point) {
  impl_->out << point_line(point) << '\n';
  impl_->out.flush();
  if (!impl_->out) throw IoError("write failure on branch file");
}

void BranchFileWriter::finish(BranchStatus status) {
  if (impl_->finished) return;
  impl_->out << status_line(status) << '\n';
  impl_->out.flush();
  impl_->finished = true;
  if (!impl_->out) throw IoError("write failure on branch file");
}

namespace {

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_csv(const BranchFile& file, std::ostream& out) {
  out << "s,c,residual_complex,chord_arc,c1_norm,curvature_min,curvature_max,"
         "decay_slope\r\n";
  for (const SolutionPoint& p : file.points) {
    out << csv_field(format_g17(p.s)) << ',' << csv_field(format_g17(p.c)) << ','
        << csv_field(format_g17(p.norm_complex)) << ','
        << csv_field(format_g17(finite_for_json(p.diagnostics.chord_arc))) << ','
        << csv_field(format_g17(p.diagnostics.c1_norm)) << ','
        << csv_field(format_g17(p.diagnostics.curvature_min)) << ','
        << csv_field(format_g17(p.diagnostics.curvature_max)) << ','
        << csv_field(format_g17(p.diagnostics.decay_slope)) << "\r\n";
  }
}

std::string render_svg(const SolutionPoint& point, int grid_size) {
  const BoundaryGrid boundary = to_grid(point.z, grid_size);

  // Fit the union of the drop and the unit-circle overlay; SVG y points down.
  double min_x = -1.0, max_x = 1.0, min_y = -1.0, max_y = 1.0;
  for (const cplx& z : boundary.v) {
    min_x = std::min(min_x, z.real());
    max_x = std::max(max_x, z.real());
    min_y = std::min(min_y, -z.imag());
    max_y = std::max(max_y, -z.imag());
  }
  const double margin = 0.05 * std::max(max_x - min_x, max_y - min_y);
  min_x -= margin;
  min_y -= margin;
  max_x += margin;
  max_y += margin;

  char buffer[160];
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" ";
  std::snprintf(buffer, sizeof(buffer), "viewBox=\"%.9g %.9g %.9g %.9g\">\n",
                min_x, min_y, max_x - min_x, max_y - min_y);
  svg += buffer;
  svg += "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999999\" "
         "stroke-width=\"0.008\" stroke-dasharray=\"0.05 0.05\"/>\n";
  svg += "  <path fill=\"none\" stroke=\"#0b5fa5\" stroke-width=\"0.015\" d=\"";
  for (int j = 0; j < boundary.size(); ++j) {
    std::snprintf(buffer, sizeof(buffer), "%c%.9g %.9g", j == 0 ? 'M' : 'L',
                  boundary[j].real(), -boundary[j].imag());
    svg += buffer;
    if (j + 1 < boundary.size()) svg += ' ';
  }
  svg += "Z\"/>\n</svg>\n";
  return svg;
}

}  // namespace droplet
