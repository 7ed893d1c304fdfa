#include "kinlim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "kinlim/achievable.hpp"
#include "kinlim/chain_sim.hpp"
#include "kinlim/config.hpp"
#include "kinlim/errors.hpp"
#include "kinlim/kernel1d.hpp"
#include "kinlim/kernel_nd.hpp"
#include "kinlim/kinetic.hpp"
#include "kinlim/lattice_nd.hpp"
#include "kinlim/manifest.hpp"
#include "kinlim/output.hpp"
#include "kinlim/simd.hpp"

namespace kinlim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  Config cfg;
  std::string out_dir;
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;

  void emit(const std::string& name, const std::string& content) {
    const auto path = (fs::path(out_dir) / name).string();
    write_file(path, content);
    manifest.outputs.emplace_back(name, sha256_hex(content));
    out << "wrote " << path << '\n';
  }
  void finish() {
    if (manifest.outputs.empty()) return;
    manifest.finished = utc_timestamp();
    write_file((fs::path(out_dir) / "manifest.json").string(), manifest.to_json().dump(2) + "\n");
  }
};

// Integer-valued controls run in exact arithmetic so repeated tables agree bit for bit.
bool integer_valued(const ControlParams1D& p) {
  for (double v : p.m) {
    if (std::abs(v) > 1e15 || v != std::floor(v)) return false;
  }
  return true;
}

// ---- d-dimensional controls -----------------------------------------------------------

struct NdInput {
  std::string variant;
  std::shared_ptr<const PathFamily> family;
  std::unique_ptr<SimpleIndexControls> simple;
  std::unique_ptr<DualIndexControls> dual;
};

std::size_t nd_path(const PathFamily& fam, const json& e, const std::string& where) {
  if (!e.contains("p") || !e.contains("moves")) throw InputError("nd: " + where + " needs 'p' and 'moves'");
  try {
    return fam.index_of(e.at("p").get<unsigned>(), e.at("moves").get<std::vector<int>>());
  } catch (const json::exception&) {
    throw InputError("nd: " + where + " has a malformed 'p' or 'moves'");
  }
}

NdInput load_nd(const json& nd) {
  if (!nd.is_object()) throw InputError("config: 'nd' must be an object");
  static const std::set<std::string> allowed{"dim", "N", "variant", "entries", "signs"};
  for (const auto& [k, v] : nd.items()) {
    if (!allowed.count(k)) throw InputError("config: unknown key 'nd." + k + "'");
  }
  NdInput in;
  int dim = 0, N = 0;
  try {
    dim = nd.at("dim").get<int>();
    N = nd.at("N").get<int>();
    in.variant = nd.value("variant", std::string("simple"));
  } catch (const json::exception&) {
    throw InputError("config: 'nd' needs integer 'dim' and 'N' and a string 'variant'");
  }
  if (dim < 1 || dim > 3 || N < 1 || N > 5) throw InputError("config: 'nd' supports dim 1..3 and N 1..5");
  in.family = std::make_shared<PathFamily>(dim, N);
  const json entries = nd.value("entries", json::array());
  try {
    if (in.variant == "simple") {
      in.simple = std::make_unique<SimpleIndexControls>(in.family);
      for (const auto& e : entries) {
        in.simple->set(nd_path(*in.family, e, "entry"), e.at("distance").get<int>(),
                       e.at("value").get<std::vector<double>>());
      }
    } else if (in.variant == "dual") {
      in.dual = std::make_unique<DualIndexControls>(in.family);
      for (const auto& e : nd.value("signs", json::array())) {
        in.dual->set_sign(e.at("i").get<int>(), e.at("j").get<int>(), nd_path(*in.family, e, "sign"),
                          e.at("sign").get<int>());
      }
      for (const auto& e : entries) {
        in.dual->set(e.at("i").get<int>(), e.at("j").get<int>(), nd_path(*in.family, e, "entry"),
                     e.at("distance").get<int>(), e.at("value").get<double>());
      }
    } else {
      throw InputError("config: 'nd.variant' must be \"simple\" or \"dual\"");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: malformed 'nd' entry: ") + e.what());
  }
  return in;
}

// ---- subcommands ------------------------------------------------------------------------

int cmd_validate(Run& r) {
  if (!r.cfg.nd.is_null()) {
    const auto in = load_nd(r.cfg.nd);
    const NdReport rep = in.simple ? validate(*in.simple) : validate(*in.dual);
    for (const auto& p : rep.problems) r.out << "fail: " << p << '\n';
    r.out << (rep.ok() ? "pass" : "fail") << '\n';
    return rep.ok() ? 0 : 1;
  }
  const auto rep = validate_controls(r.cfg.controls());
  r.out << rep.summary() << '\n' << (rep.ok() ? "pass" : "fail") << '\n';
  return rep.ok() ? 0 : 1;
}

int cmd_kernel(Run& r, bool oracle) {
  if (!r.cfg.nd.is_null()) {
    const auto in = load_nd(r.cfg.nd);
    const int side = r.cfg.oracle_ring > 0 ? r.cfg.oracle_ring : 8 * in.family->N() + 1;
    std::string text;
    if (in.simple) {
      text = to_json_lines(oracle ? nd_coeffs_oracle(*in.simple, side) : simple_index_coeffs(*in.simple));
    } else {
      for (auto [i, j] : in.dual->pairs()) {
        text += to_json_lines(oracle ? nd_coeffs_oracle(*in.dual, i, j, side) : dual_index_coeffs(*in.dual, i, j));
      }
    }
    r.emit(oracle ? "oracle_nd.jsonl" : "kernel_nd.jsonl", text);
    return 0;
  }
  const auto p = r.cfg.controls();
  const auto rep = validate_controls(p);
  if (!rep.ok()) throw InputError("invalid controls: " + rep.summary());
  const int ring = r.cfg.oracle_ring > 0 ? r.cfg.oracle_ring : 8 * p.N + 1;
  KernelCoeffs1D c;
  if (integer_valued(p)) {
    const auto e = to_exact(p);
    c = to_double(oracle ? kernel_coeffs_oracle(e, ring) : kernel_coeffs(e));
  } else {
    c = oracle ? kernel_coeffs_oracle(p, ring) : kernel_coeffs(p);
  }
  r.emit(oracle ? "oracle.csv" : "kernel.csv", kernel_csv(c));
  if (!oracle) r.emit("kernel.json", kernel_json(c).dump() + "\n");
  return 0;
}

int cmd_basis(Run& r) {
  if (r.cfg.N < 1) throw InputError("config: 'N' is required for basis");
  const auto form = basis_polys(r.cfg.N);
  json all = json::array();
  for (const auto& [ij, coeffs] : form.polys) {
    json terms = json::array();
    const int E = 2 * form.N;
    for (int d1 = 0; d1 < E; ++d1) {
      for (int d2 = 0; d2 < E; ++d2) {
        const Rational& q = coeffs[static_cast<std::size_t>(d1) * E + d2];
        if (q.numerator() == 0) continue;
        terms.push_back({{"d1", d1}, {"d2", d2}, {"coeff", to_double(q)},
                         {"exact", std::to_string(q.numerator()) + "/" + std::to_string(q.denominator())}});
      }
    }
    all.push_back({{"N", form.N}, {"i", ij.first}, {"j", ij.second}, {"terms", terms}});
  }
  r.emit("basis.json", all.dump(2) + "\n");
  return 0;
}

int cmd_synthesize(Run& r) {
  if (r.cfg.N < 1) throw InputError("config: 'N' is required for synthesize");
  const auto p = synthesize_controls(r.cfg.N, r.cfg.C);
  r.emit("controls.json", json{{"N", p.N}, {"m", p.m}}.dump() + "\n");
  return 0;
}

int cmd_paths(Run& r) {
  const int dim = r.cfg.dim, N = r.cfg.N;
  if (N < 1) throw InputError("config: 'N' is required for paths");
  if (dim > 3 || N > 5) throw InputError("config: paths supports dim <= 3 and N <= 5");
  json summary{{"dim", dim}, {"N", N}};
  json parts = json::array();
  std::string listing;
  for (unsigned p = 0; p < (1u << dim); ++p) {
    const PartIndex part(dim, p);
    const auto paths = enumerate_paths(dim, N, part);
    json entry{{"p", p}, {"count", paths.size()}};
    if (!r.cfg.D.empty()) {
      if (static_cast<int>(r.cfg.D.size()) != dim) throw InputError("config: 'D' must have dim entries");
      if (part.contains(r.cfg.D)) entry["through_D"] = count_paths_through(dim, N, part, r.cfg.D);
    }
    parts.push_back(entry);
    if (r.cfg.list) {
      for (const auto& path : paths) listing += to_json_line(path) + "\n";
    }
  }
  summary["parts"] = parts;
  if (!r.cfg.D.empty()) summary["D"] = r.cfg.D;
  r.emit("paths.json", summary.dump(2) + "\n");
  if (r.cfg.list) r.emit("paths.jsonl", listing);
  return 0;
}

int cmd_simulate(Run& r) {
  ExperimentConfig e;
  e.L = r.cfg.L;
  e.controls = r.cfg.controls();
  e.coupling = r.cfg.coupling.build();
  e.epsilon = r.cfg.epsilon;
  e.T = r.cfg.T;
  e.snapshot_times = r.cfg.snapshot_times;
  e.ensemble = r.cfg.ensemble;
  e.dt = r.cfg.dt;
  e.seed = r.cfg.seed;
  e.profile = r.cfg.profile.function();
  e.threads = r.cfg.threads;
  const auto res = run_experiment(e);
  for (const auto& w : res.warnings) r.err << "warning: " << w << '\n';
  CsvWriter spec({"time", "k", "spectrum"});
  for (std::size_t s = 0; s < res.times.size(); ++s) {
    const auto& w = res.spectra[s];
    for (std::size_t j = 0; j < w.k.size(); ++j) spec.row({res.times[s], w.k[j], w.value[j]});
  }
  CsvWriter tr({"time", "total_energy", "total_momentum"});
  for (const auto& t : res.trace) tr.row({t.time, t.energy, t.momentum});
  r.emit("spectrum.csv", spec.str());
  r.emit("traces.csv", tr.str());
  r.out << "dt " << format_double(res.dt) << '\n';
  return 0;
}

std::vector<double> snapshot_list(const Config& cfg) {
  std::vector<double> t = cfg.snapshot_times;
  t.push_back(0.0);
  t.push_back(cfg.T);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

int cmd_kinetic(Run& r) {
  const auto p = r.cfg.controls();
  const auto c = kernel_coeffs(p);
  const TorusGrid grid(r.cfg.grid);
  // The random-phase initial state has spectrum profile / 2.
  const auto prof = r.cfg.profile.function();
  const auto nu0 = SpectralDensity::from_profile(grid, [&](double k) { return 0.5 * prof(k); });
  const auto times = snapshot_list(r.cfg);
  if (r.cfg.transport.X == 0) {
    const auto series = evolve_homogeneous_series(nu0, c, times, r.cfg.kinetic_dt);
    CsvWriter w({"time", "k", "value"});
    for (const auto& s : series)
      for (int j = 0; j < grid.size(); ++j) w.row({s.t, grid.node(j), s.values[j]});
    r.emit("kinetic.csv", w.str());
    return 0;
  }
  const auto& ts = r.cfg.transport;
  const Dispersion disp(r.cfg.coupling.build());
  PhaseSpaceDensity mu(ts.X, ts.length, grid);
  for (int i = 0; i < ts.X; ++i) {
    const double x = (i + 0.5) * mu.dx();
    const double f = 1.0 + ts.modulation * std::cos(2.0 * std::numbers::pi * x / ts.length);
    for (int j = 0; j < grid.size(); ++j) mu.at(i, j) = f * nu0.values[j];
  }
  const Interp interp = ts.interp == "linear" ? Interp::Linear : Interp::Cubic;
  CsvWriter w({"time", "x", "k", "value"});
  auto dump = [&](const PhaseSpaceDensity& m) {
    for (int i = 0; i < m.X; ++i)
      for (int j = 0; j < grid.size(); ++j) w.row({m.t, (i + 0.5) * m.dx(), grid.node(j), m.at(i, j)});
  };
  for (double t : times) {
    if (t > mu.t) mu = evolve_transport(mu, c, disp, t - mu.t, r.cfg.kinetic_dt, interp);
    dump(mu);
  }
  r.emit("kinetic.csv", w.str());
  return 0;
}

// Rows grouped by time, in file order.
std::map<double, std::vector<std::pair<double, double>>> group_by_time(const CsvTable& t, const std::string& value) {
  const int ct = t.column("time"), ck = t.column("k"), cv = t.column(value);
  std::map<double, std::vector<std::pair<double, double>>> g;
  for (const auto& row : t.rows) g[row[ct]].emplace_back(row[ck], row[cv]);
  return g;
}

int cmd_compare(Run& r) {
  if (r.cfg.mc_file.empty() || r.cfg.kinetic_file.empty()) {
    throw InputError("config: compare needs 'mc_file' and 'kinetic_file'");
  }
  r.manifest.inputs.emplace_back(r.cfg.mc_file, sha256_file(r.cfg.mc_file));
  r.manifest.inputs.emplace_back(r.cfg.kinetic_file, sha256_file(r.cfg.kinetic_file));
  const auto mc = read_csv(r.cfg.mc_file);
  const auto kin = read_csv(r.cfg.kinetic_file);
  if (std::find(kin.header.begin(), kin.header.end(), "x") != kin.header.end()) {
    throw InputError("compare: kinetic file holds a transport solution; expected time,k,value");
  }
  const auto gm = group_by_time(mc, "spectrum");
  const auto gk = group_by_time(kin, "value");
  if (gk.empty()) throw InputError("compare: kinetic file has no rows");
  const int G = static_cast<int>(gk.begin()->second.size());
  if (G < 2 || G % 2) throw InputError("compare: kinetic grid must have an even number of nodes");
  const TorusGrid grid(G);
  std::vector<double> kt;
  std::vector<std::vector<double>> kv;
  for (const auto& [t, rows] : gk) {
    if (static_cast<int>(rows.size()) != G) throw InputError("compare: kinetic grid changes between times");
    std::vector<double> v(G);
    for (int j = 0; j < G; ++j) {
      if (std::abs(rows[j].first - grid.node(j)) > 1e-12) throw InputError("compare: kinetic nodes are not a midpoint grid");
      v[j] = rows[j].second;
    }
    kt.push_back(t);
    kv.push_back(std::move(v));
  }
  std::vector<double> mt;
  std::vector<std::vector<double>> mv;
  for (const auto& [t, rows] : gm) {
    WignerEstimate w;
    for (const auto& [k, v] : rows) {
      w.k.push_back(k);
      w.value.push_back(v);
    }
    mt.push_back(t);
    mv.push_back(project_to_grid(w, grid));
  }
  const auto d = compare_sampled(mt, mv, kt, kv);
  CsvWriter w({"time", "l1_distance"});
  for (std::size_t s = 0; s < d.size(); ++s) w.row({mt[s], d[s]});
  r.emit("compare.csv", w.str());
  return 0;
}

const char* kUsage =
    "usage: kinlim <subcommand> [--config FILE] [--set key=value ...] [--seed N] [--out-dir DIR]\n"
    "subcommands: validate kernel oracle basis synthesize paths simulate kinetic compare\n";

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controlled collision kernels: coefficients, oracles, chain simulation and kinetic limits", "kinlim"};
  app.fallthrough();
  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file or a run manifest to replay");
  app.add_option("--set", overrides, "Override a config key, e.g. --set coupling.omega0=0.5");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out-dir", out_dir, "Directory for outputs and the run manifest");
  const std::vector<std::pair<std::string, std::string>> subs{
      {"validate", "Check control conditions"},
      {"kernel", "Closed-form kernel coefficients"},
      {"oracle", "Brute-force coefficients from the quadratic form"},
      {"basis", "Chebyshev basis polynomials P_ij"},
      {"synthesize", "Controls from a free-parameter vector C"},
      {"paths", "Lattice path counts and listings"},
      {"simulate", "Monte-Carlo chain ensemble and energy spectra"},
      {"kinetic", "Kinetic equation solution"},
      {"compare", "L1 distance between simulated and kinetic spectra"}};
  for (const auto& [name, help] : subs) app.add_subcommand(name, help);
  app.require_subcommand(1, 1);

  // Name the first stray positional token when it is not a known subcommand.
  for (int a = 1; a < argc; ++a) {
    const std::string tok = argv[a];
    if (tok.rfind("-", 0) == 0) {
      if (tok.find('=') == std::string::npos && tok != "--help" && tok != "-h") ++a;
      continue;
    }
    const bool known = std::any_of(subs.begin(), subs.end(), [&](const auto& s) { return s.first == tok; });
    if (!known) {
      err << "error: unknown subcommand '" << tok << "'\n" << kUsage;
      return 1;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << kUsage;
    return 1;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    Config cfg = config_path.empty() ? resolve_config(json::object(), overrides) : parse_config_file(config_path, overrides);
    if (seed_opt->count() > 0) cfg.seed = seed;
    simd::set_backend(simd::parse_backend(cfg.simd));
    cfg.simd = simd::to_string(simd::active_backend());
    fs::create_directories(out_dir);

    Run r{cfg, out_dir, out, err, {}};
    r.manifest.subcommand = sub;
    r.manifest.seed = cfg.seed;
    r.manifest.started = utc_timestamp();
    if (!config_path.empty()) r.manifest.inputs.emplace_back(config_path, sha256_file(config_path));
    for (const auto& f : cfg.consumed_files) r.manifest.inputs.emplace_back(f, sha256_file(f));
    r.manifest.config = cfg.to_json();

    int code = 0;
    if (sub == "validate") code = cmd_validate(r);
    else if (sub == "kernel") code = cmd_kernel(r, false);
    else if (sub == "oracle") code = cmd_kernel(r, true);
    else if (sub == "basis") code = cmd_basis(r);
    else if (sub == "synthesize") code = cmd_synthesize(r);
    else if (sub == "paths") code = cmd_paths(r);
    else if (sub == "simulate") code = cmd_simulate(r);
    else if (sub == "kinetic") code = cmd_kinetic(r);
    else if (sub == "compare") code = cmd_compare(r);
    r.finish();
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace kinlim
