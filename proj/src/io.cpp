#include "krf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "krf/error.hpp"

namespace krf {

using nlohmann::json;
namespace fs = std::filesystem;

std::string csv_header() {
  std::string h;
  for (size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) h += ',';
    h += kCsvColumns[i];
  }
  return h;
}

std::string csv_row(const CsvRow& row) {
  std::string out;
  char buf[40];
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", row[i]);
    out += buf;
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to '" + path.string() + "'");
  out << line << '\n';
  out.flush();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec from_json_array(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) throw Error("snapshot: missing array '" + key + "'");
  const auto& a = j[key];
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw Error("snapshot: non-numeric entry in '" + key + "'");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

}  // namespace

json snapshot_json(const FlowState& s, const json& residuals) {
  const auto& g = *s.phi.geom;
  json j;
  j["format_version"] = kSnapshotFormatVersion;
  j["n"] = g.n();
  j["N"] = g.N();
  j["volume"] = g.volume();
  j["t"] = s.t;
  j["c"] = s.c;
  j["a"] = s.a;
  j["x"] = to_std(g.x());
  j["phi"] = to_std(s.phi.values);
  j["u"] = to_std(s.u.values);
  j["density"] = to_std(s.metric.f);
  j["residuals"] = residuals;
  return j;
}

SnapshotData read_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read snapshot '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("snapshot '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (j.value("format_version", -1) != kSnapshotFormatVersion)
    throw Error("snapshot '" + path.string() + "' has an unsupported format_version");
  SnapshotData d;
  try {
    d.n = j.at("n").get<int>();
    d.N = j.at("N").get<int>();
    d.t = j.at("t").get<double>();
    d.c = j.at("c").get<double>();
    d.a = j.at("a").get<double>();
  } catch (const json::exception& e) {
    throw Error("snapshot '" + path.string() + "': " + e.what());
  }
  d.x = from_json_array(j, "x");
  d.phi = from_json_array(j, "phi");
  d.u = from_json_array(j, "u");
  d.residuals = j.value("residuals", json::object());
  if (d.phi.size() != d.N + 1 || d.u.size() != d.N + 1 || d.x.size() != d.N + 1)
    throw Error("snapshot '" + path.string() + "': arrays do not have N + 1 entries");
  return d;
}

Vec resample(const Vec& values, const GeometryPtr& geom) {
  if (values.size() == geom->size()) return values;
  if (values.size() < 2) throw Error("cannot resample fewer than two nodes");
  const ChebyshevGrid src(static_cast<int>(values.size()) - 1);
  return src.interpolate(values, geom->x());
}

}  // namespace krf
