#include "mlat.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlat/errors.hpp"
#include "mlat/format.hpp"
#include "mlat/harness.hpp"

struct mlat_topology {
  mlat::NetworkTopology t;
};

struct mlat_sweep_result {
  mlat::SweepResult r;
};

struct mlat_rssi_trace {
  std::vector<mlat::RssiSample> samples;
};

namespace {

thread_local std::string t_last_error;

mlat_status set_error(mlat_status s, std::string msg) {
  t_last_error = std::move(msg);
  return s;
}

template <class Fn>
mlat_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mlat::ParseError& e) {
    return set_error(MLAT_ERR_PARSE, e.what());
  } catch (const mlat::IoError& e) {
    return set_error(MLAT_ERR_IO, e.what());
  } catch (const mlat::TooFewAnchors& e) {
    return set_error(MLAT_ERR_PRECONDITION, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(MLAT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(MLAT_ERR_INTERNAL, e.what());
  }
}

mlat_status null_arg(const char* what) {
  return set_error(MLAT_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

std::ofstream open_out(const char* path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw mlat::IoError(std::string("cannot open for writing: ") + path);
  return f;
}

std::ifstream open_in(const char* path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw mlat::IoError(std::string("cannot open for reading: ") + path);
  return f;
}

void finish_write(std::ofstream& f, const char* path) {
  f.flush();
  if (!f.good()) throw mlat::IoError(std::string("write failed: ") + path);
}

mlat::ErrorModel to_model(const mlat_error_model& m) {
  mlat::ErrorModel out;
  switch (m.kind) {
    case MLAT_MODEL_CONSTANT: out.kind = mlat::ErrorModelKind::Constant; break;
    case MLAT_MODEL_RANDOM: out.kind = mlat::ErrorModelKind::Random; break;
    case MLAT_MODEL_LINEAR: out.kind = mlat::ErrorModelKind::Linear; break;
    case MLAT_MODEL_LOGARITHMIC: out.kind = mlat::ErrorModelKind::Logarithmic; break;
    default: throw std::invalid_argument("unknown error model kind");
  }
  out.e = m.e;
  out.max_range = m.max_range;
  return out;
}

mlat::ShadowingParams to_shadowing(const mlat_shadowing_params& p) {
  return {p.rssi0, p.d0, p.n, p.sigma};
}

mlat::NetworkConfig to_network(const mlat_network_config& c) {
  mlat::NetworkConfig out;
  out.width = c.width;
  out.height = c.height;
  out.node_count = c.node_count;
  out.radius = c.radius;
  out.seed = c.seed;
  return out;
}

mlat::Method to_method(int m) {
  switch (m) {
    case 1: return mlat::Method::M1;
    case 2: return mlat::Method::M2;
    case 3: return mlat::Method::M3;
  }
  throw std::invalid_argument("method must be 1, 2 or 3");
}

int from_method(mlat::Method m) {
  switch (m) {
    case mlat::Method::M1: return 1;
    case mlat::Method::M2: return 2;
    case mlat::Method::M3: return 3;
  }
  return 0;
}

}  // namespace

extern "C" {

const char* mlat_last_error(void) { return t_last_error.c_str(); }

mlat_status mlat_circle_intersections(const mlat_circle* a, const mlat_circle* b,
                                      mlat_intersection* out) {
  if (!a || !b || !out) return null_arg("circle arguments");
  return guarded([&] {
    const mlat::Circle ca{{a->center.x, a->center.y}, a->radius};
    const mlat::Circle cb{{b->center.x, b->center.y}, b->radius};
    const mlat::Intersection isect = mlat::circle_intersections(ca, cb);
    out->kind = static_cast<mlat_intersect_kind>(isect.kind);
    out->a = {isect.a.x, isect.a.y};
    out->b = {isect.b.x, isect.b.y};
    return MLAT_OK;
  });
}

int mlat_point_in_circle(const mlat_point* p, const mlat_circle* c, double eps) {
  if (!p || !c) {
    null_arg("point/circle arguments");
    return -1;
  }
  return mlat::point_in_circle({p->x, p->y}, {{c->center.x, c->center.y}, c->radius}, eps) ? 1
                                                                                          : 0;
}

mlat_status mlat_apply_error(const mlat_error_model* model, double real_dist,
                             unsigned long long seed, int sign_minus, double* out) {
  if (!model || !out) return null_arg("model/out");
  return guarded([&] {
    mlat::Rng g(seed);
    *out = mlat::apply_error(to_model(*model), real_dist, g,
                             sign_minus ? mlat::Sign::Minus : mlat::Sign::Plus);
    return MLAT_OK;
  });
}

mlat_status mlat_error_model_curve_write(const mlat_error_model* model, double max_range,
                                         int samples, unsigned long long seed,
                                         const char* path) {
  if (!model || !path) return null_arg("model/path");
  return guarded([&] {
    if (samples < 2) throw std::invalid_argument("samples must be >= 2");
    if (!(max_range > 0.0)) throw std::invalid_argument("max_range must be positive");
    const mlat::ErrorModel m = to_model(*model);
    auto f = open_out(path);
    f << "real_distance,estimated_distance\n";
    mlat::Rng g(seed);
    for (int i = 0; i < samples; ++i) {
      const double real = max_range * i / (samples - 1);
      f << mlat::format_double(real) << ','
        << mlat::format_double(mlat::apply_error(m, real, g)) << '\n';
    }
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_rssi_from_distance(const mlat_shadowing_params* p, double dist, double* out) {
  if (!p || !out) return null_arg("params/out");
  return guarded([&] {
    *out = mlat::rssi_from_distance(to_shadowing(*p), dist);
    return MLAT_OK;
  });
}

mlat_status mlat_distance_from_rssi(const mlat_shadowing_params* p, double rssi, double* out) {
  if (!p || !out) return null_arg("params/out");
  return guarded([&] {
    *out = mlat::distance_from_rssi(to_shadowing(*p), rssi);
    return MLAT_OK;
  });
}

mlat_status mlat_rssi_trace_load(const char* path, mlat_rssi_trace** out) {
  if (!path || !out) return null_arg("path/out");
  return guarded([&] {
    auto f = open_in(path);
    auto trace = std::make_unique<mlat_rssi_trace>();
    trace->samples = mlat::ingest_rssi_trace(f);
    *out = trace.release();
    return MLAT_OK;
  });
}

void mlat_rssi_trace_free(mlat_rssi_trace* trace) { delete trace; }

int mlat_rssi_trace_count(const mlat_rssi_trace* trace) {
  return trace ? static_cast<int>(trace->samples.size()) : 0;
}

mlat_status mlat_rssi_trace_sample(const mlat_rssi_trace* trace, int index,
                                   const char** station_id, const char** location_id,
                                   double* true_distance, double* rssi) {
  if (!trace) return null_arg("trace");
  if (index < 0 || index >= static_cast<int>(trace->samples.size()))
    return set_error(MLAT_ERR_INVALID_ARGUMENT, "sample index out of range");
  const mlat::RssiSample& s = trace->samples[index];
  if (station_id) *station_id = s.station_id.c_str();
  if (location_id) *location_id = s.location_id.c_str();
  if (true_distance) *true_distance = s.true_distance;
  if (rssi) *rssi = s.rssi;
  return MLAT_OK;
}

mlat_status mlat_rssi_curve_write(const mlat_rssi_trace* trace, const mlat_shadowing_params* p,
                                  const char* path) {
  if (!trace || !p || !path) return null_arg("trace/params/path");
  return guarded([&] {
    auto f = open_out(path);
    mlat::write_distance_curve(f, trace->samples, to_shadowing(*p));
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_rssi_synthetic_write(const mlat_shadowing_params* p,
                                      const mlat_synthetic_spec* spec, unsigned long long seed,
                                      const char* path) {
  if (!p || !spec || !path) return null_arg("params/spec/path");
  return guarded([&] {
    auto f = open_out(path);
    const mlat::SyntheticTraceSpec s{spec->stations, spec->locations, spec->messages,
                                     spec->d_min, spec->d_max};
    mlat::write_synthetic_trace(f, to_shadowing(*p), s, seed);
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_topology_generate(const mlat_network_config* cfg, mlat_topology** out) {
  if (!cfg || !out) return null_arg("config/out");
  return guarded([&] {
    auto topo = std::make_unique<mlat_topology>();
    topo->t = mlat::generate(to_network(*cfg));
    *out = topo.release();
    return MLAT_OK;
  });
}

mlat_status mlat_topology_load(const char* json_path, const char* csv_path,
                               mlat_topology** out) {
  if (!json_path || !csv_path || !out) return null_arg("paths/out");
  return guarded([&] {
    auto jf = open_in(json_path);
    auto cf = open_in(csv_path);
    auto topo = std::make_unique<mlat_topology>();
    topo->t = mlat::load_topology(jf, cf);
    *out = topo.release();
    return MLAT_OK;
  });
}

mlat_status mlat_topology_save(const mlat_topology* topo, const char* json_path,
                               const char* csv_path) {
  if (!topo || !json_path || !csv_path) return null_arg("topology/paths");
  return guarded([&] {
    auto jf = open_out(json_path);
    auto cf = open_out(csv_path);
    mlat::save_topology(topo->t, jf, cf);
    finish_write(jf, json_path);
    finish_write(cf, csv_path);
    return MLAT_OK;
  });
}

void mlat_topology_free(mlat_topology* topo) { delete topo; }

int mlat_topology_node_count(const mlat_topology* topo) {
  return topo ? static_cast<int>(topo->t.positions.size()) : 0;
}

double mlat_topology_radius(const mlat_topology* topo) {
  return topo ? topo->t.config.radius : 0.0;
}

double mlat_topology_mean_connectivity(const mlat_topology* topo) {
  return topo ? mlat::mean_connectivity(topo->t) : 0.0;
}

int mlat_topology_degree(const mlat_topology* topo, int node) {
  if (!topo || node < 0 || node >= static_cast<int>(topo->t.adjacency.size())) {
    set_error(MLAT_ERR_INVALID_ARGUMENT, "bad topology/node");
    return -1;
  }
  return static_cast<int>(topo->t.adjacency[node].size());
}

mlat_status mlat_topology_position(const mlat_topology* topo, int node, mlat_point* out) {
  if (!topo || !out) return null_arg("topology/out");
  if (node < 0 || node >= static_cast<int>(topo->t.positions.size()))
    return set_error(MLAT_ERR_INVALID_ARGUMENT, "node index out of range");
  out->x = topo->t.positions[node].x;
  out->y = topo->t.positions[node].y;
  return MLAT_OK;
}

mlat_status mlat_calibrate_radius(const mlat_network_config* cfg, double target_mean,
                                  int seed_count, double* out_radius) {
  if (!cfg || !out_radius) return null_arg("config/out");
  return guarded([&] {
    *out_radius = mlat::calibrate_radius(to_network(*cfg), target_mean, seed_count);
    return MLAT_OK;
  });
}

mlat_status mlat_sweep_run(const mlat_topology* topo, const mlat_sweep_config* cfg,
                           mlat_sweep_result** out) {
  if (!topo || !cfg || !out) return null_arg("topology/config/out");
  return guarded([&] {
    mlat::SweepConfig c;
    c.e_start = cfg->e_start;
    c.e_step = cfg->e_step;
    c.steps = cfg->steps;
    switch (cfg->model) {
      case MLAT_MODEL_CONSTANT: c.model = mlat::ErrorModelKind::Constant; break;
      case MLAT_MODEL_RANDOM: c.model = mlat::ErrorModelKind::Random; break;
      case MLAT_MODEL_LINEAR: c.model = mlat::ErrorModelKind::Linear; break;
      case MLAT_MODEL_LOGARITHMIC: c.model = mlat::ErrorModelKind::Logarithmic; break;
      default: throw std::invalid_argument("unknown error model kind");
    }
    c.max_range = cfg->max_range;
    c.max_retries = cfg->max_retries;
    c.seed = cfg->seed;
    c.threads = cfg->threads;
    c.strict_pairs = cfg->strict_pairs != 0;
    c.methods.clear();
    const unsigned mask = cfg->methods == 0
                              ? (MLAT_METHOD_M1 | MLAT_METHOD_M2 | MLAT_METHOD_M3)
                              : cfg->methods;
    if (mask & MLAT_METHOD_M1) c.methods.push_back(mlat::Method::M1);
    if (mask & MLAT_METHOD_M2) c.methods.push_back(mlat::Method::M2);
    if (mask & MLAT_METHOD_M3) c.methods.push_back(mlat::Method::M3);
    if (mask & ~unsigned(MLAT_METHOD_M1 | MLAT_METHOD_M2 | MLAT_METHOD_M3))
      throw std::invalid_argument("unknown bits in the methods mask");
    auto result = std::make_unique<mlat_sweep_result>();
    result->r = mlat::run_sweep(topo->t, c);
    *out = result.release();
    return MLAT_OK;
  });
}

void mlat_sweep_result_free(mlat_sweep_result* result) { delete result; }

int mlat_sweep_record_count(const mlat_sweep_result* result) {
  return result ? static_cast<int>(result->r.records.size()) : 0;
}

mlat_status mlat_sweep_record_at(const mlat_sweep_result* result, int index,
                                 mlat_sweep_record* out) {
  if (!result || !out) return null_arg("result/out");
  if (index < 0 || index >= static_cast<int>(result->r.records.size()))
    return set_error(MLAT_ERR_INVALID_ARGUMENT, "record index out of range");
  const mlat::SweepRecord& r = result->r.records[index];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->e = r.e;
  out->method = from_method(r.method);
  out->total_error = r.total_error.value_or(nan);
  out->total_error_pct_range = r.total_error_pct_range.value_or(nan);
  out->localized_count = r.localized_count;
  out->node_count = r.node_count;
  return MLAT_OK;
}

mlat_status mlat_sweep_results_write(const mlat_sweep_result* result, const char* path) {
  if (!result || !path) return null_arg("result/path");
  return guarded([&] {
    auto f = open_out(path);
    mlat::emit_results(result->r.records, f);
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_sweep_plot_write(const mlat_sweep_result* result, int method,
                                  const char* path) {
  if (!result || !path) return null_arg("result/path");
  return guarded([&] {
    auto f = open_out(path);
    mlat::emit_plot_data(result->r.records, to_method(method), f);
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_sweep_details_write(const mlat_sweep_result* result, const char* path) {
  if (!result || !path) return null_arg("result/path");
  return guarded([&] {
    auto f = open_out(path);
    mlat::emit_node_details(result->r.details, f);
    finish_write(f, path);
    return MLAT_OK;
  });
}

mlat_status mlat_localize_write(const mlat_topology* topo, int node,
                                const mlat_error_model* model, int method,
                                unsigned long long seed, int max_retries, int strict_pairs,
                                const char* path) {
  if (!topo || !model || !path) return null_arg("topology/model/path");
  return guarded([&] {
    const mlat::ClusterOptions opts{strict_pairs != 0};
    const mlat::LocalizeDetail d = mlat::localize_detail(
        topo->t, node, to_model(*model), to_method(method), seed, max_retries, opts);
    auto f = open_out(path);
    mlat::write_localize_detail(d, f);
    finish_write(f, path);
    return MLAT_OK;
  });
}

}  // extern "C"
