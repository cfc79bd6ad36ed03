#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlat.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  bool force = false;
  std::optional<unsigned long long> seed;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open config: " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
  return cfg;
}

json section(const json& cfg, const char* name, std::initializer_list<const char*> allowed) {
  if (!cfg.contains(name)) return json::object();
  const json& s = cfg.at(name);
  if (!s.is_object())
    throw ConfigError(std::string("config: ") + name + " must be an object");
  for (const auto& item : s.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
      return item.key() == k;
    });
    if (!known)
      throw ConfigError(std::string("config: unknown key ") + name + "." + item.key());
  }
  return s;
}

double num_or(const json& s, const char* key, double def) {
  if (!s.contains(key)) return def;
  const json& v = s.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
  return v.get<double>();
}

long long int_or(const json& s, const char* key, long long def) {
  if (!s.contains(key)) return def;
  const json& v = s.at(key);
  if (!v.is_number_integer())
    throw ConfigError(std::string("config: ") + key + " must be an integer");
  return v.get<long long>();
}

bool bool_or(const json& s, const char* key, bool def) {
  if (!s.contains(key)) return def;
  const json& v = s.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("config: ") + key + " must be a boolean");
  return v.get<bool>();
}

std::string str_or(const json& s, const char* key, const std::string& def) {
  if (!s.contains(key)) return def;
  const json& v = s.at(key);
  if (!v.is_string()) throw ConfigError(std::string("config: ") + key + " must be a string");
  return v.get<std::string>();
}

mlat_error_model_kind model_from_name(const std::string& name) {
  if (name == "constant") return MLAT_MODEL_CONSTANT;
  if (name == "random") return MLAT_MODEL_RANDOM;
  if (name == "linear") return MLAT_MODEL_LINEAR;
  if (name == "logarithmic") return MLAT_MODEL_LOGARITHMIC;
  throw ConfigError("config: unknown error model \"" + name + "\"");
}

int method_from_name(const std::string& name) {
  if (name == "m1" || name == "M1") return 1;
  if (name == "m2" || name == "M2") return 2;
  if (name == "m3" || name == "M3") return 3;
  throw ConfigError("unknown method \"" + name + "\"");
}

unsigned methods_mask(const std::vector<std::string>& names) {
  unsigned mask = 0;
  for (const auto& n : names) mask |= 1u << (method_from_name(n) - 1);
  return mask;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void refuse_overwrite(const fs::path& p, bool force) {
  if (!force && fs::exists(p))
    throw IoFailure("refusing to overwrite " + p.string() + " (pass --force)");
}

fs::path prepare_out(const Common& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw IoFailure("cannot create output directory " + c.out_dir + ": " + ec.message());
  return fs::path(c.out_dir);
}

int fail(mlat_status st) {
  std::fprintf(stderr, "error: %s\n", mlat_last_error());
  return static_cast<int>(st);
}

mlat_network_config network_config(const json& cfg, const Common& c) {
  const json s = section(cfg, "network", {"width", "height", "node_count", "radius", "seed"});
  mlat_network_config out;
  out.width = num_or(s, "width", 1.0);
  out.height = num_or(s, "height", 1.0);
  out.node_count = static_cast<int>(int_or(s, "node_count", 100));
  out.radius = num_or(s, "radius", 0.128);
  out.seed = static_cast<unsigned long long>(int_or(s, "seed", 42));
  if (c.seed) out.seed = *c.seed;
  return out;
}

struct TopoHandle {
  mlat_topology* t = nullptr;
  ~TopoHandle() { mlat_topology_free(t); }
};

mlat_status resolve_topology(const json& cfg, const Common& c, TopoHandle& topo) {
  const json s = section(cfg, "topology", {"json", "csv"});
  if (s.contains("json") || s.contains("csv")) {
    const std::string jp = str_or(s, "json", "");
    const std::string cp = str_or(s, "csv", "");
    if (jp.empty() || cp.empty())
      throw ConfigError("config: topology needs both json and csv paths");
    return mlat_topology_load(jp.c_str(), cp.c_str(), &topo.t);
  }
  const mlat_network_config nc = network_config(cfg, c);
  return mlat_topology_generate(&nc, &topo.t);
}

int run_generate(const json& cfg, const Common& c) {
  const mlat_network_config nc = network_config(cfg, c);
  TopoHandle topo;
  if (mlat_status st = mlat_topology_generate(&nc, &topo.t); st != MLAT_OK) return fail(st);
  const fs::path out = prepare_out(c);
  const fs::path jp = out / "topology.json";
  const fs::path cp = out / "topology.csv";
  refuse_overwrite(jp, c.force);
  refuse_overwrite(cp, c.force);
  if (mlat_status st = mlat_topology_save(topo.t, jp.string().c_str(), cp.string().c_str());
      st != MLAT_OK)
    return fail(st);
  std::printf("mean_connectivity=%.9g\n", mlat_topology_mean_connectivity(topo.t));
  return 0;
}

int run_sweep(const json& cfg, const Common& c, const std::string& methods_flag,
              bool plot_data, bool details, bool strict_pairs, std::optional<int> threads) {
  const json s = section(cfg, "sweep",
                         {"e_start", "e_step", "steps", "model", "max_range", "max_retries",
                          "seed", "methods", "threads", "strict_pairs"});
  mlat_sweep_config sc;
  sc.e_start = num_or(s, "e_start", 0.0);
  sc.e_step = num_or(s, "e_step", 0.001);
  sc.steps = static_cast<int>(int_or(s, "steps", 200));
  sc.model = model_from_name(str_or(s, "model", "random"));
  sc.max_range = num_or(s, "max_range", 1.0);
  sc.max_retries = static_cast<int>(int_or(s, "max_retries", 50));
  sc.seed = static_cast<unsigned long long>(int_or(s, "seed", 42));
  sc.threads = static_cast<int>(int_or(s, "threads", 1));
  sc.strict_pairs = bool_or(s, "strict_pairs", false) ? 1 : 0;
  sc.methods = 0;
  if (s.contains("methods")) {
    const json& m = s.at("methods");
    if (!m.is_array()) throw ConfigError("config: methods must be an array of names");
    std::vector<std::string> names;
    for (const auto& v : m) {
      if (!v.is_string()) throw ConfigError("config: methods must be an array of names");
      names.push_back(v.get<std::string>());
    }
    sc.methods = methods_mask(names);
  }
  if (!methods_flag.empty()) sc.methods = methods_mask(split_commas(methods_flag));
  if (strict_pairs) sc.strict_pairs = 1;
  if (threads) sc.threads = *threads;
  if (c.seed) sc.seed = *c.seed;

  TopoHandle topo;
  if (mlat_status st = resolve_topology(cfg, c, topo); st != MLAT_OK) return fail(st);

  mlat_sweep_result* result = nullptr;
  if (mlat_status st = mlat_sweep_run(topo.t, &sc, &result); st != MLAT_OK) return fail(st);

  int code = 0;
  const fs::path out = prepare_out(c);
  const fs::path rp = out / "results.csv";
  try {
    refuse_overwrite(rp, c.force);
    if (mlat_status st = mlat_sweep_results_write(result, rp.string().c_str()); st != MLAT_OK)
      code = fail(st);
    const unsigned mask = sc.methods == 0 ? 7u : sc.methods;
    if (code == 0 && plot_data) {
      for (int m = 1; m <= 3; ++m) {
        if (!(mask & (1u << (m - 1)))) continue;
        const fs::path pp = out / ("plot_m" + std::to_string(m) + ".csv");
        refuse_overwrite(pp, c.force);
        if (mlat_status st = mlat_sweep_plot_write(result, m, pp.string().c_str());
            st != MLAT_OK) {
          code = fail(st);
          break;
        }
      }
    }
    if (code == 0 && details) {
      const fs::path dp = out / "node_details.csv";
      refuse_overwrite(dp, c.force);
      if (mlat_status st = mlat_sweep_details_write(result, dp.string().c_str());
          st != MLAT_OK)
        code = fail(st);
    }
  } catch (...) {
    mlat_sweep_result_free(result);
    throw;
  }
  mlat_sweep_result_free(result);
  return code;
}

int run_localize_one(const json& cfg, const Common& c, std::optional<int> node_arg,
                     bool strict_pairs) {
  const json s = section(cfg, "localize",
                         {"node", "e", "model", "max_range", "method", "seed", "max_retries",
                          "strict_pairs"});
  const int node = node_arg ? *node_arg : static_cast<int>(int_or(s, "node", 0));
  mlat_error_model model;
  model.kind = model_from_name(str_or(s, "model", "random"));
  model.e = num_or(s, "e", 0.0);
  model.max_range = num_or(s, "max_range", 1.0);
  const int method = method_from_name(str_or(s, "method", "m1"));
  unsigned long long seed = static_cast<unsigned long long>(int_or(s, "seed", 42));
  if (c.seed) seed = *c.seed;
  const int max_retries = static_cast<int>(int_or(s, "max_retries", 50));
  const bool strict = strict_pairs || bool_or(s, "strict_pairs", false);

  TopoHandle topo;
  if (mlat_status st = resolve_topology(cfg, c, topo); st != MLAT_OK) return fail(st);

  const fs::path out = prepare_out(c);
  const fs::path p = out / ("localize_node_" + std::to_string(node) + ".csv");
  refuse_overwrite(p, c.force);
  if (mlat_status st = mlat_localize_write(topo.t, node, &model, method, seed, max_retries,
                                           strict ? 1 : 0, p.string().c_str());
      st != MLAT_OK)
    return fail(st);
  return 0;
}

int run_error_models(const json& cfg, const Common& c) {
  const json s = section(cfg, "error_models", {"e", "max_range", "samples", "seed"});
  const double e = num_or(s, "e", 0.1);
  const double max_range = num_or(s, "max_range", 30.0);
  const int samples = static_cast<int>(int_or(s, "samples", 301));
  unsigned long long seed = static_cast<unsigned long long>(int_or(s, "seed", 42));
  if (c.seed) seed = *c.seed;

  const fs::path out = prepare_out(c);
  const struct {
    mlat_error_model_kind kind;
    const char* file;
  } curves[] = {
      {MLAT_MODEL_CONSTANT, "constant.csv"},
      {MLAT_MODEL_RANDOM, "random.csv"},
      {MLAT_MODEL_LINEAR, "linear.csv"},
      {MLAT_MODEL_LOGARITHMIC, "logarithmic.csv"},
  };
  for (const auto& curve : curves) {
    mlat_error_model model;
    model.kind = curve.kind;
    model.e = e;
    model.max_range = max_range;
    const fs::path p = out / curve.file;
    refuse_overwrite(p, c.force);
    if (mlat_status st =
            mlat_error_model_curve_write(&model, max_range, samples, seed, p.string().c_str());
        st != MLAT_OK)
      return fail(st);
  }
  return 0;
}

int run_rssi(const json& cfg, const Common& c, bool synthetic) {
  const json s = section(cfg, "rssi",
                         {"rssi0", "d0", "n", "sigma", "trace", "seed", "synthetic"});
  mlat_shadowing_params params;
  params.rssi0 = num_or(s, "rssi0", -40.0);
  params.d0 = num_or(s, "d0", 1.0);
  params.n = num_or(s, "n", 2.0);
  params.sigma = num_or(s, "sigma", 0.0);
  unsigned long long seed = static_cast<unsigned long long>(int_or(s, "seed", 42));
  if (c.seed) seed = *c.seed;

  const fs::path out = prepare_out(c);
  std::string trace_path = str_or(s, "trace", "");
  if (synthetic) {
    const json sp = section(s, "synthetic",
                            {"stations", "locations", "messages", "d_min", "d_max"});
    mlat_synthetic_spec spec;
    spec.stations = static_cast<int>(int_or(sp, "stations", 1));
    spec.locations = static_cast<int>(int_or(sp, "locations", 82));
    spec.messages = static_cast<int>(int_or(sp, "messages", 200));
    spec.d_min = num_or(sp, "d_min", 1.0);
    spec.d_max = num_or(sp, "d_max", 30.0);
    const fs::path tp = out / "synthetic_trace.csv";
    refuse_overwrite(tp, c.force);
    if (mlat_status st = mlat_rssi_synthetic_write(&params, &spec, seed, tp.string().c_str());
        st != MLAT_OK)
      return fail(st);
    trace_path = tp.string();
  }
  if (trace_path.empty())
    throw ConfigError("rssi: no trace configured (set rssi.trace or pass --synthetic)");

  mlat_rssi_trace* trace = nullptr;
  if (mlat_status st = mlat_rssi_trace_load(trace_path.c_str(), &trace); st != MLAT_OK)
    return fail(st);
  int code = 0;
  try {
    const fs::path cp = out / "rssi_curve.csv";
    refuse_overwrite(cp, c.force);
    if (mlat_status st = mlat_rssi_curve_write(trace, &params, cp.string().c_str());
        st != MLAT_OK)
      code = fail(st);
  } catch (...) {
    mlat_rssi_trace_free(trace);
    throw;
  }
  mlat_rssi_trace_free(trace);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"range-based localization toolkit"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--config", common.config_path, "JSON config file");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_flag("--force", common.force, "overwrite existing output files");
  unsigned long long seed_flag = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "override every configured seed");

  CLI::App* gen = app.add_subcommand("generate", "generate a network topology");
  gen->fallthrough();
  CLI::App* sweep = app.add_subcommand("sweep", "run an e-sweep over a topology");
  sweep->fallthrough();
  std::string methods_flag;
  sweep->add_option("--methods", methods_flag, "comma-separated subset of m1,m2,m3");
  bool plot_data = false;
  sweep->add_flag("--plot-data", plot_data, "write per-method plot files");
  bool details = false;
  sweep->add_flag("--details", details, "write per-node detail rows");
  bool sweep_strict = false;
  sweep->add_flag("--strict-pairs", sweep_strict, "abort Method 1 when any anchor pair is disjoint");
  std::optional<int> threads;
  sweep->add_option("--threads", threads, "worker thread count");
  CLI::App* loc = app.add_subcommand("localize-one", "dump one node's localization geometry");
  loc->fallthrough();
  std::optional<int> node_arg;
  loc->add_option("node", node_arg, "node id");
  bool loc_strict = false;
  loc->add_flag("--strict-pairs", loc_strict, "abort Method 1 when any anchor pair is disjoint");
  CLI::App* errs = app.add_subcommand("error-models", "write the four error-model curves");
  errs->fallthrough();
  CLI::App* rssi = app.add_subcommand("rssi", "convert an RSSI trace to a distance curve");
  rssi->fallthrough();
  bool synthetic = false;
  rssi->add_flag("--synthetic", synthetic, "generate a synthetic trace first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) common.seed = seed_flag;

  try {
    const json cfg = load_config(common.config_path);
    if (gen->parsed()) return run_generate(cfg, common);
    if (sweep->parsed())
      return run_sweep(cfg, common, methods_flag, plot_data, details, sweep_strict, threads);
    if (loc->parsed()) return run_localize_one(cfg, common, node_arg, loc_strict);
    if (errs->parsed()) return run_error_models(cfg, common);
    if (rssi->parsed()) return run_rssi(cfg, common, synthetic);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 7;
  }
  return 2;
}
