#include "kinlim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kinlim/errors.hpp"

namespace kinlim {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

json parse_json_strict(const std::string& text, const std::string& origin) {
  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  auto cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        if (!seen.empty()) seen.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!seen.empty() && !seen.back().insert(key).second && duplicate.empty()) duplicate = key;
        break;
      }
      default:
        break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": malformed JSON: " + e.what());
  }
  if (!duplicate.empty()) throw InputError(origin + ": duplicate key '" + duplicate + "'");
  return j;
}

Coupling CouplingSpec::build() const {
  if (use_taps) return Coupling::from_taps(taps);
  return Coupling::nearest_neighbor(omega0, A);
}

Profile ProfileSpec::function() const {
  const double c = center, w = width, a = amplitude;
  return [c, w, a](double k) {
    const double z = (std::abs(k) - c) / w;
    return a * std::exp(-0.5 * z * z);
  };
}

ControlParams1D Config::controls() const {
  if (N < 1 || m.empty()) throw InputError("config: controls are required (keys N and m, or controls_file)");
  return ControlParams1D(N, m);
}

namespace {

// Typed access that names the offending key.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::set<std::string> allowed) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj.is_object()) throw InputError("config: '" + name("") + "' must be an object");
    for (const auto& [k, v] : obj.items()) {
      if (!allowed.count(k)) throw InputError("config: unknown key '" + name(k) + "'");
    }
  }
  bool has(const std::string& k) const { return obj_.contains(k) && !obj_.at(k).is_null(); }
  const json& raw(const std::string& k) const { return obj_.at(k); }
  std::string name(const std::string& k) const {
    if (prefix_.empty()) return k;
    return k.empty() ? prefix_ : prefix_ + "." + k;
  }

  void get(const std::string& k, int& out) const {
    if (!has(k)) return;
    const auto& v = obj_.at(k);
    if (!v.is_number_integer()) throw InputError("config: '" + name(k) + "' must be an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) throw InputError("config: '" + name(k) + "' is out of range");
    out = static_cast<int>(x);
  }
  void get(const std::string& k, std::uint64_t& out) const {
    if (!has(k)) return;
    const auto& v = obj_.at(k);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw InputError("config: '" + name(k) + "' must be a nonnegative integer");
    }
    out = v.get<std::uint64_t>();
  }
  void get(const std::string& k, double& out) const {
    if (!has(k)) return;
    const auto& v = obj_.at(k);
    if (!v.is_number()) throw InputError("config: '" + name(k) + "' must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw InputError("config: '" + name(k) + "' must be finite");
  }
  void get(const std::string& k, bool& out) const {
    if (!has(k)) return;
    if (!obj_.at(k).is_boolean()) throw InputError("config: '" + name(k) + "' must be true or false");
    out = obj_.at(k).get<bool>();
  }
  void get(const std::string& k, std::string& out) const {
    if (!has(k)) return;
    if (!obj_.at(k).is_string()) throw InputError("config: '" + name(k) + "' must be a string");
    out = obj_.at(k).get<std::string>();
  }
  void get(const std::string& k, std::vector<double>& out) const {
    if (!has(k)) return;
    const auto& v = obj_.at(k);
    if (!v.is_array()) throw InputError("config: '" + name(k) + "' must be an array of numbers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) throw InputError("config: '" + name(k) + "' must be an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) throw InputError("config: '" + name(k) + "' entries must be finite");
    }
  }
  void get(const std::string& k, std::vector<int>& out) const {
    if (!has(k)) return;
    const auto& v = obj_.at(k);
    if (!v.is_array()) throw InputError("config: '" + name(k) + "' must be an array of integers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw InputError("config: '" + name(k) + "' must be an array of integers");
      out.push_back(e.get<int>());
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
};

void apply_override(json& raw, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--set expects key=value, got '" + spec + "'");
  const std::string path = spec.substr(0, eq), text = spec.substr(eq + 1);
  json value;
  try {
    value = parse_json_strict(text, "--set " + path);
  } catch (const InputError&) {
    value = text;
  }
  json* node = &raw;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw InputError("--set: empty key segment in '" + path + "'");
    if (!node->is_object()) throw InputError("--set: '" + path + "' does not name an object member");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw InputError("config: '" + key + "' " + why);
}

}  // namespace

Config resolve_config(json raw, const std::vector<std::string>& overrides, const std::string& base_dir) {
  if (raw.is_null()) raw = json::object();
  for (const auto& o : overrides) apply_override(raw, o);
  const Reader r(raw, "",
                 {"N", "m", "controls_file", "L", "oracle_ring", "coupling", "epsilon", "T", "snapshot_times",
                  "ensemble", "dt", "seed", "profile", "grid", "kinetic_dt", "transport", "C", "dim", "D", "list",
                  "mc_file", "kinetic_file", "nd", "simd", "threads"});
  Config c;
  r.get("N", c.N);
  r.get("m", c.m);
  if (r.has("controls_file")) {
    std::string file;
    r.get("controls_file", file);
    std::filesystem::path p(file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    const json cj = parse_json_strict(read_file(p.string()), p.string());
    const Reader cr(cj, "controls_file", {"N", "m"});
    int n = 0;
    std::vector<double> m;
    cr.get("N", n);
    cr.get("m", m);
    require(!r.has("N") && !r.has("m"), "controls_file", "conflicts with inline N/m");
    c.N = n;
    c.m = m;
    c.consumed_files.push_back(p.string());
  }
  if (c.N != 0 || !c.m.empty()) {
    require(c.N >= 1, "N", "must be a positive integer");
    require(c.m.empty() || static_cast<int>(c.m.size()) == c.N,
            "m", "must have exactly N = " + std::to_string(c.N) + " entries");
  }
  r.get("L", c.L);
  if (r.has("L")) {
    require(c.L >= 2, "L", "must be at least 2");
    if (c.N > 0) {
      require(c.L >= 8 * c.N + 1, "L",
              "= " + std::to_string(c.L) + " is below 8N+1 = " + std::to_string(8 * c.N + 1) + " (ring too small)");
    }
  } else {
    c.L = std::max(512, 8 * c.N + 1);
  }
  r.get("oracle_ring", c.oracle_ring);
  if (c.oracle_ring != 0 && c.N > 0) {
    require(c.oracle_ring >= 8 * c.N + 1, "oracle_ring", "must be at least 8N+1");
  }
  if (r.has("coupling")) {
    const Reader cr(r.raw("coupling"), "coupling", {"omega0", "A", "taps"});
    if (cr.has("taps")) {
      require(!cr.has("omega0") && !cr.has("A"), "coupling", "takes either {omega0, A} or {taps}, not both");
      c.coupling.use_taps = true;
      cr.get("taps", c.coupling.taps);
    } else {
      cr.get("omega0", c.coupling.omega0);
      cr.get("A", c.coupling.A);
    }
  }
  try {
    (void)c.coupling.build();
  } catch (const InputError& e) {
    throw InputError(std::string("config: 'coupling' ") + e.what());
  }
  r.get("epsilon", c.epsilon);
  require(c.epsilon > 0.0, "epsilon", "must be positive");
  r.get("T", c.T);
  require(c.T >= 0.0, "T", "must be nonnegative");
  r.get("snapshot_times", c.snapshot_times);
  for (double t : c.snapshot_times) require(t >= 0.0 && t <= c.T, "snapshot_times", "entries must lie in [0, T]");
  r.get("ensemble", c.ensemble);
  require(c.ensemble >= 1, "ensemble", "must be at least 1");
  r.get("dt", c.dt);
  require(c.dt >= 0.0, "dt", "must be positive (or 0 for the default)");
  r.get("seed", c.seed);
  if (r.has("profile")) {
    const Reader pr(r.raw("profile"), "profile", {"center", "width", "amplitude"});
    pr.get("center", c.profile.center);
    pr.get("width", c.profile.width);
    pr.get("amplitude", c.profile.amplitude);
    require(c.profile.width > 0.0, "profile.width", "must be positive");
    require(c.profile.amplitude >= 0.0, "profile.amplitude", "must be nonnegative");
  }
  r.get("grid", c.grid);
  require(c.grid >= 2 && c.grid % 2 == 0, "grid", "must be a positive even integer");
  r.get("kinetic_dt", c.kinetic_dt);
  require(c.kinetic_dt > 0.0, "kinetic_dt", "must be positive");
  if (r.has("transport")) {
    const Reader tr(r.raw("transport"), "transport", {"X", "length", "interp", "modulation"});
    tr.get("X", c.transport.X);
    tr.get("modulation", c.transport.modulation);
    require(std::abs(c.transport.modulation) <= 1.0, "transport.modulation", "must lie in [-1, 1]");
    tr.get("length", c.transport.length);
    tr.get("interp", c.transport.interp);
    require(c.transport.X == 0 || c.transport.X >= 4, "transport.X", "must be 0 or at least 4");
    require(c.transport.length > 0.0, "transport.length", "must be positive");
    require(c.transport.interp == "cubic" || c.transport.interp == "linear", "transport.interp",
            "must be \"cubic\" or \"linear\"");
  }
  r.get("C", c.C);
  r.get("dim", c.dim);
  require(c.dim >= 1 && c.dim <= 6, "dim", "must be in 1..6");
  r.get("D", c.D);
  r.get("list", c.list);
  r.get("mc_file", c.mc_file);
  r.get("kinetic_file", c.kinetic_file);
  for (std::string* f : {&c.mc_file, &c.kinetic_file}) {
    if (f->empty()) continue;
    std::filesystem::path p(*f);
    if (p.is_relative()) p = std::filesystem::absolute(std::filesystem::path(base_dir) / p);
    *f = p.lexically_normal().string();
  }
  if (r.has("nd")) c.nd = r.raw("nd");
  r.get("simd", c.simd);
  r.get("threads", c.threads);
  require(c.threads >= 0, "threads", "must be nonnegative");
  return c;
}

Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                         const std::string& base_dir) {
  return resolve_config(parse_json_strict(text), overrides, base_dir);
}

Config parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  json raw = parse_json_strict(read_file(path), path);
  // A run manifest carries the resolved config under "config".
  if (raw.is_object() && raw.contains("manifest_version") && raw.contains("config")) raw = raw.at("config");
  const auto base = std::filesystem::path(path).parent_path();
  return resolve_config(std::move(raw), overrides, base.empty() ? "." : base.string());
}

json Config::to_json() const {
  json j;
  if (N > 0) j["N"] = N;
  if (!m.empty()) j["m"] = m;
  j["L"] = L;
  j["oracle_ring"] = oracle_ring;
  if (coupling.use_taps) {
    j["coupling"] = {{"taps", coupling.taps}};
  } else {
    j["coupling"] = {{"omega0", coupling.omega0}, {"A", coupling.A}};
  }
  j["epsilon"] = epsilon;
  j["T"] = T;
  j["snapshot_times"] = snapshot_times;
  j["ensemble"] = ensemble;
  j["dt"] = dt;
  j["seed"] = seed;
  j["profile"] = {{"center", profile.center}, {"width", profile.width}, {"amplitude", profile.amplitude}};
  j["grid"] = grid;
  j["kinetic_dt"] = kinetic_dt;
  j["transport"] = {{"X", transport.X}, {"length", transport.length}, {"interp", transport.interp},
                    {"modulation", transport.modulation}};
  j["C"] = C;
  j["dim"] = dim;
  j["D"] = D;
  j["list"] = list;
  if (!mc_file.empty()) j["mc_file"] = mc_file;
  if (!kinetic_file.empty()) j["kinetic_file"] = kinetic_file;
  if (!nd.is_null()) j["nd"] = nd;
  j["simd"] = simd;
  j["threads"] = threads;
  return j;
}

}  // namespace kinlim
