#include "krf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "krf/catalog.hpp"
#include "krf/error.hpp"

namespace krf {

using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// First line on which "key" appears as an object key; -1 if not found.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    size_t q = pos + quoted.size();
    while (q < text.size() && std::isspace(static_cast<unsigned char>(text[q]))) ++q;
    if (q < text.size() && text[q] == ':') return line_of_offset(text, pos);
    pos = q;
  }
  return -1;
}

class Section {
 public:
  Section(const json& obj, std::string path, const std::string& text) : obj_(obj), path_(std::move(path)), text_(text) {
    if (!obj_.is_object()) fail(path_.empty() ? "(root)" : path_, "must be an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string leaf = key.substr(key.find_last_of('.') + 1);
    const int line = line_of_key(text_, leaf);
    std::string msg = "config: '" + key + "' " + what;
    if (line > 0) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(msg, key, line);
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* take(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double def, bool required = false) {
    const json* v = take(key);
    if (!v) {
      if (required) fail(full(key), "is required");
      return def;
    }
    if (!v->is_number()) fail(full(key), "must be a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(full(key), "must be finite");
    return d;
  }

  long integer(const std::string& key, long def, bool required = false) {
    const json* v = take(key);
    if (!v) {
      if (required) fail(full(key), "is required");
      return def;
    }
    if (!v->is_number_integer()) fail(full(key), "must be an integer");
    return v->get<long>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_string()) fail(full(key), "must be a string");
    return v->get<std::string>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(full(key), "must be a boolean");
    return v->get<bool>();
  }

  Section sub(const std::string& key) {
    const json* v = take(key);
    static const json empty = json::object();
    return Section(v ? *v : empty, full(key), text_);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) fail(full(it.key()), "is not a recognized key");
  }

 private:
  const json& obj_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::rk4 ? "rk4" : "semi-implicit"; }

FlowOptions RunConfig::flow_options() const {
  FlowOptions o;
  o.scheme = scheme;
  o.dt = dt;
  o.t_max = t_max;
  o.convergence_tol = tolerances.convergence;
  o.stop_on_convergence = stop_on_convergence;
  o.snapshot_stride = snapshot_stride;
  return o;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config: malformed document (line " + std::to_string(line) + "): " + e.what(), "", line);
  }
  RunConfig c;
  Section root(doc, "", text);

  const long version = root.integer("format_version", kConfigFormatVersion);
  if (version != kConfigFormatVersion)
    root.fail("format_version", "must be " + std::to_string(kConfigFormatVersion));

  // Geometry may be given as a section or as top-level n and N.
  if (root.has("geometry") && (root.has("n") || root.has("N")))
    root.fail("geometry", "conflicts with top-level n/N");
  if (root.has("geometry")) {
    Section g = root.sub("geometry");
    c.n = static_cast<int>(g.integer("n", 0, true));
    c.N = static_cast<int>(g.integer("N", 0, true));
    if (c.n < 1 || c.n > 8) g.fail("geometry.n", "must lie in [1, 8]");
    if (c.N < 16) g.fail("geometry.N", "must be at least 16");
    g.finish();
  } else {
    c.n = static_cast<int>(root.integer("n", 0, true));
    c.N = static_cast<int>(root.integer("N", 0, true));
    if (c.n < 1 || c.n > 8) root.fail("n", "must lie in [1, 8]");
    if (c.N < 16) root.fail("N", "must be at least 16");
  }

  {
    Section ip = root.sub("initial_potential");
    c.initial.kind = ip.string("kind", c.initial.kind);
    c.initial.amplitude = ip.number("amplitude", c.initial.amplitude);
    c.initial.profile = ip.string("profile", c.initial.profile);
    c.initial.path = ip.string("path", c.initial.path);
    if (c.initial.kind != "zero" && c.initial.kind != "perturbation" && c.initial.kind != "file")
      ip.fail("initial_potential.kind", "must be one of zero, perturbation, file");
    if (c.initial.kind == "perturbation" && !known_profile(c.initial.profile))
      ip.fail("initial_potential.profile", "names an unknown profile '" + c.initial.profile + "'");
    if (c.initial.kind == "file" && c.initial.path.empty())
      ip.fail("initial_potential.path", "is required when kind is file");
    ip.finish();
  }

  const std::string scheme = root.string("scheme", scheme_name(c.scheme));
  if (scheme == "semi-implicit")
    c.scheme = Scheme::semi_implicit;
  else if (scheme == "rk4")
    c.scheme = Scheme::rk4;
  else
    root.fail("scheme", "must be semi-implicit or rk4");

  c.dt = root.number("dt", 0.0, true);
  if (!(c.dt > 0.0)) root.fail("dt", "must be positive");
  c.t_max = root.number("t_max", 0.0, true);
  if (!(c.t_max > 0.0)) root.fail("t_max", "must be positive");

  {
    Section tol = root.sub("tolerances");
    c.tolerances.normalization = tol.number("normalization", c.tolerances.normalization);
    c.tolerances.convergence = tol.number("convergence", c.tolerances.convergence);
    c.tolerances.invariant = tol.number("invariant", c.tolerances.invariant);
    if (!(c.tolerances.normalization > 0.0)) tol.fail("tolerances.normalization", "must be positive");
    if (!(c.tolerances.convergence > 0.0)) tol.fail("tolerances.convergence", "must be positive");
    if (!(c.tolerances.invariant > 0.0)) tol.fail("tolerances.invariant", "must be positive");
    tol.finish();
  }

  if (const json* m = root.take("monitors")) {
    if (!m->is_array()) root.fail("monitors", "must be an array of monitor names");
    c.monitors.clear();
    for (const auto& e : *m) {
      if (!e.is_string() || !kKnownMonitors.count(e.get<std::string>()))
        root.fail("monitors", "contains an unknown monitor " + e.dump());
      c.monitors.insert(e.get<std::string>());
    }
  }

  {
    Section out = root.sub("output");
    c.output_directory = out.string("directory", c.output_directory);
    c.snapshot_stride = static_cast<int>(out.integer("snapshot_stride", c.snapshot_stride));
    if (c.output_directory.empty()) out.fail("output.directory", "must not be empty");
    if (c.snapshot_stride < 1) out.fail("output.snapshot_stride", "must be at least 1");
    out.finish();
  }

  const long seed = root.integer("seed", static_cast<long>(c.seed));
  if (seed < 0) root.fail("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.stop_on_convergence = root.boolean("stop_on_convergence", c.stop_on_convergence);
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'", "", -1);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
  json j;
  j["format_version"] = c.format_version;
  j["geometry"] = {{"n", c.n}, {"N", c.N}};
  j["initial_potential"] = {{"kind", c.initial.kind},
                            {"amplitude", c.initial.amplitude},
                            {"profile", c.initial.profile},
                            {"path", c.initial.path}};
  j["scheme"] = scheme_name(c.scheme);
  j["dt"] = c.dt;
  j["t_max"] = c.t_max;
  j["tolerances"] = {{"normalization", c.tolerances.normalization},
                     {"convergence", c.tolerances.convergence},
                     {"invariant", c.tolerances.invariant}};
  j["monitors"] = std::vector<std::string>(c.monitors.begin(), c.monitors.end());
  j["output"] = {{"directory", c.output_directory}, {"snapshot_stride", c.snapshot_stride}};
  j["seed"] = c.seed;
  j["stop_on_convergence"] = c.stop_on_convergence;
  return j;
}

}  // namespace krf
