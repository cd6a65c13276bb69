//
// Copyright 2026 The invcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

/*
 * C interface to the invcert library. Every function that can fail returns an
 * invcert_status; on failure invcert_last_error() describes the problem until
 * the next call on the same thread. Objects are opaque handles released with
 * the matching *_destroy function (NULL is accepted).
 */

#ifndef INVCERT_INVCERT_H_
#define INVCERT_INVCERT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(INVCERT_BUILDING_LIBRARY)
#define INVCERT_API __attribute__((visibility("default")))
#else
#define INVCERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  INVCERT_OK = 0,
  INVCERT_E_DOMAIN = 1,    /* invalid argument or unsupported combination */
  INVCERT_E_IO = 2,        /* unreadable or malformed file */
  INVCERT_E_NUMERICAL = 3, /* NaN statistic or similar numerical failure */
  INVCERT_E_NULL = 4,      /* required pointer argument was NULL */
  INVCERT_E_INTERNAL = 5
} invcert_status;

INVCERT_API const char* invcert_version(void);
INVCERT_API const char* invcert_last_error(void);

/* ---- Point clouds ------------------------------------------------------ */

typedef struct invcert_cloud invcert_cloud;

/* data holds n_points * dim values, row-major (one point per row). */
INVCERT_API invcert_status invcert_cloud_create(const double* data,
                                                int32_t n_points, int32_t dim,
                                                invcert_cloud** out);
INVCERT_API invcert_status invcert_cloud_read_csv(const char* path,
                                                  invcert_cloud** out);
INVCERT_API invcert_status invcert_cloud_write_csv(const invcert_cloud* cloud,
                                                   const char* path);
INVCERT_API void invcert_cloud_destroy(invcert_cloud* cloud);
INVCERT_API int32_t invcert_cloud_n_points(const invcert_cloud* cloud);
INVCERT_API int32_t invcert_cloud_dim(const invcert_cloud* cloud);
/* Copies n_points * dim values, row-major. */
INVCERT_API invcert_status invcert_cloud_copy_data(const invcert_cloud* cloud,
                                                   double* out, size_t capacity);

/* ---- Groups and orbit projections -------------------------------------- */

typedef enum {
  INVCERT_GROUP_NONE = 0, /* black-box smoothing */
  INVCERT_GROUP_T = 1,
  INVCERT_GROUP_SO = 2,
  INVCERT_GROUP_O = 3,
  INVCERT_GROUP_SE = 4,
  INVCERT_GROUP_S = 5,
  INVCERT_GROUP_SXSE = 6
} invcert_group;

/* Accepts none, blackbox, T, SO, O, SE, S, SxSE. */
INVCERT_API invcert_status invcert_group_parse(const char* tag,
                                               invcert_group* out);
INVCERT_API const char* invcert_group_tag(invcert_group group);

typedef struct invcert_projection invcert_projection;

/* max_iters only matters for INVCERT_GROUP_SXSE (default 50 when <= 0). */
INVCERT_API invcert_status invcert_project(invcert_group group,
                                           const invcert_cloud* x,
                                           const invcert_cloud* x_prime,
                                           int32_t max_iters,
                                           invcert_projection** out);
INVCERT_API void invcert_projection_destroy(invcert_projection* p);
INVCERT_API double invcert_projection_residual(const invcert_projection* p);
INVCERT_API int32_t invcert_projection_exact(const invcert_projection* p);
INVCERT_API int32_t invcert_projection_dim(const invcert_projection* p);
/* dim * dim values, row-major. */
INVCERT_API invcert_status invcert_projection_rotation(
    const invcert_projection* p, double* out, size_t capacity);
INVCERT_API invcert_status invcert_projection_translation(
    const invcert_projection* p, double* out, size_t capacity);
/* Number of permutation entries (0 when the group has no S(N) factor). */
INVCERT_API int32_t invcert_projection_permutation_size(
    const invcert_projection* p);
INVCERT_API invcert_status invcert_projection_permutation(
    const invcert_projection* p, int32_t* out, size_t capacity);

/* ---- Certificates ------------------------------------------------------ */

#define INVCERT_FLAG_P_CLAMPED 0x1u
#define INVCERT_FLAG_THRESHOLD_UNDETERMINED 0x2u
#define INVCERT_FLAG_ZERO_RADIUS 0x4u
#define INVCERT_FLAG_INCONCLUSIVE 0x8u
#define INVCERT_FLAG_NOT_SEPARATED 0x10u
#define INVCERT_FLAG_PMIN_CLAMPED 0x20u

typedef enum {
  INVCERT_METHOD_ORBIT = 0,
  INVCERT_METHOD_TIGHT_TRANSLATION = 1,
  INVCERT_METHOD_TIGHT_ROTATION = 2,
  INVCERT_METHOD_BLACKBOX = 3
} invcert_method;

typedef enum { INVCERT_SO3_FULL = 0, INVCERT_SO3_ZERO_PADDED = 1 } invcert_so3_layout;

typedef struct {
  int64_t n1;
  int64_t n2;
  int64_t n3;
  double alpha;
  int32_t quadrature_degree;
  int32_t so3_layout; /* invcert_so3_layout */
} invcert_mc;

/* n1 = n2 = n3 = 10000, alpha = 0.001, degree 20, full layout. */
INVCERT_API void invcert_mc_default(invcert_mc* mc);

typedef struct {
  int32_t certified;
  int32_t method; /* invcert_method */
  double bound_value;
  double radius;
  double residual;
  double margin;
  double p_lower;
  double confidence;
  double bound_confidence[3];
  int32_t has_log_kappa;
  double log_kappa;
  int64_t n_star;
  double mc_stderr;
  int32_t has_competitor_bound;
  double competitor_bound;
  uint32_t flags;
} invcert_outcome;

INVCERT_API const char* invcert_method_name(int32_t method);
/* Name of a single flag bit, or NULL. */
INVCERT_API const char* invcert_flag_name(uint32_t bit);

INVCERT_API invcert_status invcert_blackbox_radius(double p_lower, double sigma,
                                                   double* out);
INVCERT_API invcert_status invcert_multiclass_radius(double p_a, double p_b,
                                                     double sigma, double* out);

INVCERT_API invcert_status invcert_certify_orbit(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_lower, double sigma, int32_t max_iters, invcert_outcome* out);
INVCERT_API invcert_status invcert_certify_orbit_multiclass(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_a_lower, double p_b_upper, double sigma, int32_t max_iters,
    invcert_outcome* out);

/* Tight certificate: closed form for NONE and T, Monte Carlo for SO / SE. */
INVCERT_API invcert_status invcert_certify_tight(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_lower, double sigma, const invcert_mc* mc, uint64_t seed,
    invcert_outcome* out);
/* Upper bound on a competing class with clean probability <= p_upper (SO/SE). */
INVCERT_API invcert_status invcert_upper_bound_tight(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_upper, double sigma, const invcert_mc* mc, uint64_t seed,
    invcert_outcome* out);
INVCERT_API invcert_status invcert_certify_multiclass(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_a_lower, double p_b_upper, double sigma, const invcert_mc* mc,
    uint64_t seed, invcert_outcome* out);
/* p_min upper bound in out->bound_value. */
INVCERT_API invcert_status invcert_inverse_tight(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double sigma, const invcert_mc* mc, uint64_t seed, invcert_outcome* out);
INVCERT_API invcert_status invcert_inverse_orbit(invcert_group group,
                                                 const invcert_cloud* x,
                                                 const invcert_cloud* x_prime,
                                                 double sigma,
                                                 invcert_outcome* out);

/* ---- Synthetic classifiers and smoothed prediction --------------------- */

typedef struct invcert_classifier invcert_classifier;

/* kind: "norm" or "centered-norm" (uses tau), "pairwise-centroid" (uses the
   n_refs reference clouds). */
INVCERT_API invcert_status invcert_classifier_create(
    const char* kind, double tau, const invcert_cloud* const* refs,
    int32_t n_refs, invcert_classifier** out);
INVCERT_API void invcert_classifier_destroy(invcert_classifier* c);
INVCERT_API invcert_status invcert_classifier_classify(
    const invcert_classifier* c, const invcert_cloud* x, int32_t* label);

#define INVCERT_ABSTAIN (-1)

typedef struct {
  int32_t label; /* INVCERT_ABSTAIN when p_lower <= 0.5 */
  int32_t top_label;
  int64_t top_count;
  int64_t n;
  double p_lower;
} invcert_prediction;

INVCERT_API invcert_status invcert_smooth_predict(const invcert_classifier* c,
                                                  const invcert_cloud* x,
                                                  double sigma, int64_t n,
                                                  double alpha, uint64_t seed,
                                                  invcert_prediction* out);

/* Tight certificate with p_lower estimated from mc->n1 classifier
   evaluations (the first rung of the confidence ladder). */
INVCERT_API invcert_status invcert_certify_tight_classifier(
    invcert_group group, const invcert_classifier* c, const invcert_cloud* x,
    const invcert_cloud* x_prime, double sigma, const invcert_mc* mc,
    uint64_t seed, invcert_outcome* out);

/* ---- Perturbation geometry --------------------------------------------- */

typedef struct {
  double eps1;
  double eps2;
  double norm_x;
  double norm_delta;
} invcert_eps;

/* Requires D == 2. */
INVCERT_API invcert_status invcert_epsilon_params(const invcert_cloud* x,
                                                  const invcert_cloud* x_prime,
                                                  invcert_eps* out);
/* Writes up to two points; *count is 0 when norm_delta > 2 norm_x. */
INVCERT_API invcert_status invcert_adversarial_locus(double norm_x,
                                                     double norm_delta,
                                                     invcert_eps out[2],
                                                     int32_t* count);

/* ---- p_min sweep ------------------------------------------------------- */

typedef enum {
  INVCERT_PMIN_BLACKBOX = 0,
  INVCERT_PMIN_SO2_TIGHT = 1,
  INVCERT_PMIN_SO2_ORBIT = 2
} invcert_pmin_method;

typedef enum { INVCERT_RANGE_UNIT = 0, INVCERT_RANGE_FULL = 1 } invcert_pmin_range;

typedef struct {
  int32_t method; /* invcert_pmin_method */
  int32_t range;  /* invcert_pmin_range */
  double norm_x;
  double norm_delta;
  double sigma;
  int32_t resolution;
  invcert_mc mc;
  uint64_t seed;
} invcert_pmin_request;

typedef struct invcert_pmin_grid invcert_pmin_grid;

INVCERT_API invcert_status invcert_pmin_grid_compute(
    const invcert_pmin_request* req, invcert_pmin_grid** out);
INVCERT_API void invcert_pmin_grid_destroy(invcert_pmin_grid* g);
INVCERT_API int32_t invcert_pmin_grid_resolution(const invcert_pmin_grid* g);
INVCERT_API double invcert_pmin_grid_axis(const invcert_pmin_grid* g, int32_t k);
/* Row i indexes normalized eps2, column j normalized eps1. */
INVCERT_API double invcert_pmin_grid_value(const invcert_pmin_grid* g, int32_t i,
                                           int32_t j);
INVCERT_API int32_t invcert_pmin_grid_feasible(const invcert_pmin_grid* g,
                                               int32_t i, int32_t j);
INVCERT_API double invcert_pmin_grid_blackbox(const invcert_pmin_grid* g);
INVCERT_API uint32_t invcert_pmin_grid_flags(const invcert_pmin_grid* g);
INVCERT_API int32_t invcert_pmin_grid_n_loci(const invcert_pmin_grid* g);
INVCERT_API invcert_status invcert_pmin_grid_locus(const invcert_pmin_grid* g,
                                                   int32_t k, double* eps1,
                                                   double* eps2);

/* ---- Fixtures ---------------------------------------------------------- */

typedef enum {
  INVCERT_SCENARIO_SCALING = 0,
  INVCERT_SCENARIO_ROTATION = 1,
  INVCERT_SCENARIO_RANDOM = 2
} invcert_scenario;

typedef struct {
  int32_t scenario; /* invcert_scenario */
  double norm_x;
  int32_t has_norm_delta;
  double norm_delta;
  int32_t has_theta;
  double theta;
  int32_t n_points;
  int32_t dim;
  uint64_t seed;
} invcert_fixture_request;

INVCERT_API invcert_status invcert_fixture(const invcert_fixture_request* req,
                                           invcert_cloud** clean,
                                           invcert_cloud** perturbed);

#ifdef __cplusplus
}
#endif

#endif /* INVCERT_INVCERT_H_ */
