/* C surface of the localization library. Handles are opaque; every function
 * that can fail returns an mlat_status, and mlat_last_error() carries the
 * matching message for the calling thread. */
#ifndef MLAT_H
#define MLAT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlat_status {
  MLAT_OK = 0,
  MLAT_ERR_INVALID_ARGUMENT = 2,
  MLAT_ERR_IO = 3,
  MLAT_ERR_PRECONDITION = 4,
  MLAT_ERR_PARSE = 5,
  MLAT_ERR_EMPTY_CLUSTER = 6,
  MLAT_ERR_INTERNAL = 7
} mlat_status;

/* Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread. */
const char* mlat_last_error(void);

/* ---- geometry ---- */

typedef struct mlat_point {
  double x;
  double y;
} mlat_point;

typedef struct mlat_circle {
  mlat_point center;
  double radius;
} mlat_circle;

typedef enum mlat_intersect_kind {
  MLAT_ISECT_NONE = 0,
  MLAT_ISECT_TANGENT = 1,
  MLAT_ISECT_TWO = 2,
  MLAT_ISECT_COINCIDENT = 3
} mlat_intersect_kind;

typedef struct mlat_intersection {
  mlat_intersect_kind kind;
  mlat_point a; /* set for TANGENT and TWO */
  mlat_point b; /* set for TWO */
} mlat_intersection;

mlat_status mlat_circle_intersections(const mlat_circle* a, const mlat_circle* b,
                                      mlat_intersection* out);
/* 1 when inside (inclusive, radius + eps), else 0; -1 on bad arguments. */
int mlat_point_in_circle(const mlat_point* p, const mlat_circle* c, double eps);

/* ---- ranging ---- */

typedef enum mlat_error_model_kind {
  MLAT_MODEL_CONSTANT = 0,
  MLAT_MODEL_RANDOM = 1,
  MLAT_MODEL_LINEAR = 2,
  MLAT_MODEL_LOGARITHMIC = 3
} mlat_error_model_kind;

typedef struct mlat_error_model {
  mlat_error_model_kind kind;
  double e;         /* [0, 1) */
  double max_range; /* CONSTANT model only, > 0 */
} mlat_error_model;

/* One estimated distance; seed feeds the RANDOM model's draws, sign_minus
 * selects the LINEAR model's negative branch. */
mlat_status mlat_apply_error(const mlat_error_model* model, double real_dist,
                             unsigned long long seed, int sign_minus, double* out);

/* real_distance,estimated_distance CSV over an even grid of `samples` points
 * on [0, max_range]. */
mlat_status mlat_error_model_curve_write(const mlat_error_model* model, double max_range,
                                         int samples, unsigned long long seed,
                                         const char* path);

typedef struct mlat_shadowing_params {
  double rssi0; /* dBm at d0 */
  double d0;    /* m, > 0 */
  double n;     /* path loss exponent, > 0 */
  double sigma; /* dB */
} mlat_shadowing_params;

mlat_status mlat_rssi_from_distance(const mlat_shadowing_params* p, double dist, double* out);
mlat_status mlat_distance_from_rssi(const mlat_shadowing_params* p, double rssi, double* out);

typedef struct mlat_rssi_trace mlat_rssi_trace;

/* Loads and averages a station_id,location_id,true_distance,rssi CSV. */
mlat_status mlat_rssi_trace_load(const char* path, mlat_rssi_trace** out);
void mlat_rssi_trace_free(mlat_rssi_trace* trace);
int mlat_rssi_trace_count(const mlat_rssi_trace* trace);
/* Borrowed strings, valid while the trace lives. */
mlat_status mlat_rssi_trace_sample(const mlat_rssi_trace* trace, int index,
                                   const char** station_id, const char** location_id,
                                   double* true_distance, double* rssi);
mlat_status mlat_rssi_curve_write(const mlat_rssi_trace* trace, const mlat_shadowing_params* p,
                                  const char* path);

typedef struct mlat_synthetic_spec {
  int stations;
  int locations;
  int messages;
  double d_min;
  double d_max;
} mlat_synthetic_spec;

mlat_status mlat_rssi_synthetic_write(const mlat_shadowing_params* p,
                                      const mlat_synthetic_spec* spec, unsigned long long seed,
                                      const char* path);

/* ---- network ---- */

typedef struct mlat_network_config {
  double width;
  double height;
  int node_count;
  double radius;
  unsigned long long seed;
} mlat_network_config;

typedef struct mlat_topology mlat_topology;

mlat_status mlat_topology_generate(const mlat_network_config* cfg, mlat_topology** out);
mlat_status mlat_topology_load(const char* json_path, const char* csv_path, mlat_topology** out);
mlat_status mlat_topology_save(const mlat_topology* topo, const char* json_path,
                               const char* csv_path);
void mlat_topology_free(mlat_topology* topo);

int mlat_topology_node_count(const mlat_topology* topo);
double mlat_topology_radius(const mlat_topology* topo);
double mlat_topology_mean_connectivity(const mlat_topology* topo);
/* Neighbour count, or -1 on bad arguments. */
int mlat_topology_degree(const mlat_topology* topo, int node);
mlat_status mlat_topology_position(const mlat_topology* topo, int node, mlat_point* out);

mlat_status mlat_calibrate_radius(const mlat_network_config* cfg, double target_mean,
                                  int seed_count, double* out_radius);

/* ---- sweep ---- */

enum {
  MLAT_METHOD_M1 = 1,
  MLAT_METHOD_M2 = 2,
  MLAT_METHOD_M3 = 4
};

typedef struct mlat_sweep_config {
  double e_start;
  double e_step;
  int steps; /* grid has steps+1 points */
  mlat_error_model_kind model;
  double max_range;
  int max_retries;
  unsigned long long seed;
  unsigned methods; /* OR of MLAT_METHOD_*, 0 means all three */
  int threads;      /* >= 1 */
  int strict_pairs;
} mlat_sweep_config;

typedef struct mlat_sweep_result mlat_sweep_result;

typedef struct mlat_sweep_record {
  double e;
  int method; /* 1, 2 or 3 */
  double total_error;           /* NaN when localized_count is 0 */
  double total_error_pct_range; /* NaN when localized_count is 0 */
  int localized_count;
  int node_count;
} mlat_sweep_record;

mlat_status mlat_sweep_run(const mlat_topology* topo, const mlat_sweep_config* cfg,
                           mlat_sweep_result** out);
void mlat_sweep_result_free(mlat_sweep_result* result);
int mlat_sweep_record_count(const mlat_sweep_result* result);
mlat_status mlat_sweep_record_at(const mlat_sweep_result* result, int index,
                                 mlat_sweep_record* out);
mlat_status mlat_sweep_results_write(const mlat_sweep_result* result, const char* path);
mlat_status mlat_sweep_plot_write(const mlat_sweep_result* result, int method, const char* path);
mlat_status mlat_sweep_details_write(const mlat_sweep_result* result, const char* path);

/* ---- single node dump ---- */

/* Writes the ANCHORS/POINTS/ESTIMATE/TRUE sections for one node's solve.
 * Fails with MLAT_ERR_PRECONDITION when the node has < 3 neighbours. */
mlat_status mlat_localize_write(const mlat_topology* topo, int node,
                                const mlat_error_model* model, int method,
                                unsigned long long seed, int max_retries, int strict_pairs,
                                const char* path);

#ifdef __cplusplus
}
#endif

#endif /* MLAT_H */
