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

#include "invcert/invcert.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invcert/errors.h"
#include "invcert/fixtures.h"
#include "invcert/geometry.h"
#include "invcert/mc_engine.h"
#include "invcert/numerics.h"
#include "invcert/oracles.h"
#include "invcert/orbit_cert.h"
#include "invcert/point_cloud_io.h"
#include "invcert/tight_cert.h"

struct invcert_cloud {
  invcert::PointCloud cloud;
};

struct invcert_projection {
  invcert::OrbitProjection projection;
};

struct invcert_classifier {
  invcert::SyntheticClassifier classifier;
};

struct invcert_pmin_grid {
  invcert::PminGrid grid;
};

namespace {

thread_local std::string g_last_error;

invcert_status Fail(invcert_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
invcert_status Guard(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return INVCERT_OK;
  } catch (const invcert::DomainError& e) {
    return Fail(INVCERT_E_DOMAIN, e.what());
  } catch (const invcert::InputError& e) {
    return Fail(INVCERT_E_IO, e.what());
  } catch (const invcert::NumericalError& e) {
    return Fail(INVCERT_E_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return Fail(INVCERT_E_INTERNAL, e.what());
  } catch (...) {
    return Fail(INVCERT_E_INTERNAL, "unknown error");
  }
}

template <typename... Ptrs>
bool AnyNull(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

invcert_status NullError() { return Fail(INVCERT_E_NULL, "required argument is NULL"); }

invcert::GroupKind ToKind(invcert_group g) {
  switch (g) {
    case INVCERT_GROUP_NONE: return invcert::GroupKind::kTrivial;
    case INVCERT_GROUP_T: return invcert::GroupKind::kTranslation;
    case INVCERT_GROUP_SO: return invcert::GroupKind::kRotation;
    case INVCERT_GROUP_O: return invcert::GroupKind::kOrthogonal;
    case INVCERT_GROUP_SE: return invcert::GroupKind::kRotoTranslation;
    case INVCERT_GROUP_S: return invcert::GroupKind::kPermutation;
    case INVCERT_GROUP_SXSE: return invcert::GroupKind::kPermutationRotoTranslation;
  }
  throw invcert::DomainError("unknown group code " + std::to_string(static_cast<int>(g)));
}

invcert_group FromKind(invcert::GroupKind k) {
  switch (k) {
    case invcert::GroupKind::kTrivial: return INVCERT_GROUP_NONE;
    case invcert::GroupKind::kTranslation: return INVCERT_GROUP_T;
    case invcert::GroupKind::kRotation: return INVCERT_GROUP_SO;
    case invcert::GroupKind::kOrthogonal: return INVCERT_GROUP_O;
    case invcert::GroupKind::kRotoTranslation: return INVCERT_GROUP_SE;
    case invcert::GroupKind::kPermutation: return INVCERT_GROUP_S;
    case invcert::GroupKind::kPermutationRotoTranslation: return INVCERT_GROUP_SXSE;
  }
  return INVCERT_GROUP_NONE;
}

invcert::GroupSpec Spec(invcert_group g, const invcert_cloud* x) {
  return {ToKind(g), x->cloud.dim()};
}

invcert::TightOptions Options(const invcert_mc* mc) {
  invcert::TightOptions opts;
  if (mc == nullptr) return opts;
  opts.mc.n1 = mc->n1;
  opts.mc.n2 = mc->n2;
  opts.mc.n3 = mc->n3;
  opts.mc.alpha = mc->alpha;
  opts.quadrature_degree = mc->quadrature_degree;
  if (mc->so3_layout == INVCERT_SO3_FULL) {
    opts.layout = invcert::So3Layout::kFull;
  } else if (mc->so3_layout == INVCERT_SO3_ZERO_PADDED) {
    opts.layout = invcert::So3Layout::kZeroPadded;
  } else {
    throw invcert::DomainError("unknown SO(3) layout code");
  }
  return opts;
}

void Export(const invcert::CertificateOutcome& in, invcert_outcome* out) {
  *out = invcert_outcome{};
  out->certified = in.certified ? 1 : 0;
  out->method = static_cast<int32_t>(in.method);
  out->bound_value = in.bound_value;
  out->radius = in.radius;
  out->residual = in.residual;
  out->margin = in.margin;
  out->p_lower = in.p_lower;
  out->confidence = in.confidence;
  for (int i = 0; i < 3; ++i) out->bound_confidence[i] = in.bound_confidences[i];
  out->has_log_kappa = in.has_log_kappa ? 1 : 0;
  out->log_kappa = in.log_kappa;
  out->n_star = in.n_star;
  out->mc_stderr = in.mc_stderr;
  out->has_competitor_bound = in.has_competitor_bound ? 1 : 0;
  out->competitor_bound = in.competitor_bound;
  out->flags = in.flags;
}

void CopyOut(const double* src, size_t n, double* dst, size_t capacity) {
  if (capacity < n) {
    throw invcert::DomainError("output buffer too small: need " + std::to_string(n));
  }
  std::copy(src, src + n, dst);
}

}  // namespace

extern "C" {

const char* invcert_version(void) { return INVCERT_VERSION_STRING; }

const char* invcert_last_error(void) { return g_last_error.c_str(); }

invcert_status invcert_cloud_create(const double* data, int32_t n_points,
                                    int32_t dim, invcert_cloud** out) {
  if (AnyNull(data, out)) return NullError();
  return Guard([&] {
    if (n_points < 1 || dim < 1) throw invcert::DomainError("empty point cloud");
    Eigen::MatrixXd m(n_points, dim);
    for (int32_t i = 0; i < n_points; ++i) {
      for (int32_t j = 0; j < dim; ++j) m(i, j) = data[static_cast<size_t>(i) * dim + j];
    }
    *out = new invcert_cloud{invcert::PointCloud(std::move(m))};
  });
}

invcert_status invcert_cloud_read_csv(const char* path, invcert_cloud** out) {
  if (AnyNull(path, out)) return NullError();
  return Guard([&] { *out = new invcert_cloud{invcert::ReadPointCloudCsv(path)}; });
}

invcert_status invcert_cloud_write_csv(const invcert_cloud* cloud,
                                       const char* path) {
  if (AnyNull(cloud, path)) return NullError();
  return Guard([&] { invcert::WritePointCloudCsv(cloud->cloud, path); });
}

void invcert_cloud_destroy(invcert_cloud* cloud) { delete cloud; }

int32_t invcert_cloud_n_points(const invcert_cloud* cloud) {
  return cloud ? cloud->cloud.n_points() : 0;
}

int32_t invcert_cloud_dim(const invcert_cloud* cloud) {
  return cloud ? cloud->cloud.dim() : 0;
}

invcert_status invcert_cloud_copy_data(const invcert_cloud* cloud, double* out,
                                       size_t capacity) {
  if (AnyNull(cloud, out)) return NullError();
  return Guard([&] {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        rm = cloud->cloud.data();
    CopyOut(rm.data(), static_cast<size_t>(rm.size()), out, capacity);
  });
}

invcert_status invcert_group_parse(const char* tag, invcert_group* out) {
  if (AnyNull(tag, out)) return NullError();
  return Guard([&] { *out = FromKind(invcert::ParseGroupTag(tag)); });
}

const char* invcert_group_tag(invcert_group group) {
  try {
    return invcert::GroupTag(ToKind(group)).data();
  } catch (...) {
    return "unknown";
  }
}

invcert_status invcert_project(invcert_group group, const invcert_cloud* x,
                               const invcert_cloud* x_prime, int32_t max_iters,
                               invcert_projection** out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    const int iters = max_iters > 0 ? max_iters : invcert::kDefaultRegistrationIters;
    *out = new invcert_projection{
        invcert::ProjectOntoOrbit(ToKind(group), x->cloud, x_prime->cloud, iters)};
  });
}

void invcert_projection_destroy(invcert_projection* p) { delete p; }

double invcert_projection_residual(const invcert_projection* p) {
  return p ? p->projection.residual : 0.0;
}

int32_t invcert_projection_exact(const invcert_projection* p) {
  return p && p->projection.exact ? 1 : 0;
}

int32_t invcert_projection_dim(const invcert_projection* p) {
  return p ? static_cast<int32_t>(p->projection.rotation.rows()) : 0;
}

invcert_status invcert_projection_rotation(const invcert_projection* p,
                                           double* out, size_t capacity) {
  if (AnyNull(p, out)) return NullError();
  return Guard([&] {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        rm = p->projection.rotation;
    CopyOut(rm.data(), static_cast<size_t>(rm.size()), out, capacity);
  });
}

invcert_status invcert_projection_translation(const invcert_projection* p,
                                              double* out, size_t capacity) {
  if (AnyNull(p, out)) return NullError();
  return Guard([&] {
    const auto& t = p->projection.translation;
    CopyOut(t.data(), static_cast<size_t>(t.size()), out, capacity);
  });
}

int32_t invcert_projection_permutation_size(const invcert_projection* p) {
  return p ? static_cast<int32_t>(p->projection.permutation.size()) : 0;
}

invcert_status invcert_projection_permutation(const invcert_projection* p,
                                              int32_t* out, size_t capacity) {
  if (AnyNull(p, out)) return NullError();
  return Guard([&] {
    const auto& perm = p->projection.permutation;
    if (capacity < perm.size()) throw invcert::DomainError("output buffer too small");
    std::copy(perm.begin(), perm.end(), out);
  });
}

void invcert_mc_default(invcert_mc* mc) {
  if (mc == nullptr) return;
  const invcert::McConfig def;
  mc->n1 = def.n1;
  mc->n2 = def.n2;
  mc->n3 = def.n3;
  mc->alpha = def.alpha;
  mc->quadrature_degree = invcert::kDefaultQuadratureDegree;
  mc->so3_layout = INVCERT_SO3_FULL;
}

const char* invcert_method_name(int32_t method) {
  if (method < 0 || method > INVCERT_METHOD_BLACKBOX) return "unknown";
  return invcert::CertMethodName(static_cast<invcert::CertMethod>(method));
}

const char* invcert_flag_name(uint32_t bit) {
  switch (bit) {
    case INVCERT_FLAG_P_CLAMPED: return "probability_clamped";
    case INVCERT_FLAG_THRESHOLD_UNDETERMINED: return "threshold_undetermined";
    case INVCERT_FLAG_ZERO_RADIUS: return "zero_radius";
    case INVCERT_FLAG_INCONCLUSIVE: return "inconclusive_approximate";
    case INVCERT_FLAG_NOT_SEPARATED: return "classes_not_separated";
    case INVCERT_FLAG_PMIN_CLAMPED: return "p_min_clamped_to_half";
    default: return nullptr;
  }
}

invcert_status invcert_blackbox_radius(double p_lower, double sigma, double* out) {
  if (AnyNull(out)) return NullError();
  return Guard([&] { *out = invcert::BlackboxRadius(p_lower, sigma); });
}

invcert_status invcert_multiclass_radius(double p_a, double p_b, double sigma,
                                         double* out) {
  if (AnyNull(out)) return NullError();
  return Guard([&] { *out = invcert::MulticlassRadius(p_a, p_b, sigma); });
}

invcert_status invcert_certify_orbit(invcert_group group, const invcert_cloud* x,
                                     const invcert_cloud* x_prime, double p_lower,
                                     double sigma, int32_t max_iters,
                                     invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    const int iters = max_iters > 0 ? max_iters : invcert::kDefaultRegistrationIters;
    Export(invcert::CertifyOrbit(Spec(group, x), x->cloud, x_prime->cloud,
                                 p_lower, sigma, iters),
           out);
  });
}

invcert_status invcert_certify_orbit_multiclass(
    invcert_group group, const invcert_cloud* x, const invcert_cloud* x_prime,
    double p_a_lower, double p_b_upper, double sigma, int32_t max_iters,
    invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    const int iters = max_iters > 0 ? max_iters : invcert::kDefaultRegistrationIters;
    Export(invcert::CertifyOrbitMulticlass(Spec(group, x), x->cloud,
                                           x_prime->cloud, p_a_lower, p_b_upper,
                                           sigma, iters),
           out);
  });
}

invcert_status invcert_certify_tight(invcert_group group, const invcert_cloud* x,
                                     const invcert_cloud* x_prime, double p_lower,
                                     double sigma, const invcert_mc* mc,
                                     uint64_t seed, invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    Export(invcert::CertifyTight(Spec(group, x), x->cloud, x_prime->cloud,
                                 p_lower, sigma, Options(mc), seed),
           out);
  });
}

invcert_status invcert_upper_bound_tight(invcert_group group,
                                         const invcert_cloud* x,
                                         const invcert_cloud* x_prime,
                                         double p_upper, double sigma,
                                         const invcert_mc* mc, uint64_t seed,
                                         invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    Export(invcert::UpperBoundRotationTight(Spec(group, x), x->cloud,
                                            x_prime->cloud, p_upper, sigma,
                                            Options(mc), seed),
           out);
  });
}

invcert_status invcert_certify_multiclass(invcert_group group,
                                          const invcert_cloud* x,
                                          const invcert_cloud* x_prime,
                                          double p_a_lower, double p_b_upper,
                                          double sigma, const invcert_mc* mc,
                                          uint64_t seed, invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    Export(invcert::CertifyMulticlass(Spec(group, x), x->cloud, x_prime->cloud,
                                      p_a_lower, p_b_upper, sigma, Options(mc),
                                      seed),
           out);
  });
}

invcert_status invcert_inverse_tight(invcert_group group, const invcert_cloud* x,
                                     const invcert_cloud* x_prime, double sigma,
                                     const invcert_mc* mc, uint64_t seed,
                                     invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    Export(invcert::InverseCertificate(Spec(group, x), x->cloud, x_prime->cloud,
                                       sigma, Options(mc), seed),
           out);
  });
}

invcert_status invcert_inverse_orbit(invcert_group group, const invcert_cloud* x,
                                     const invcert_cloud* x_prime, double sigma,
                                     invcert_outcome* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    Export(invcert::InverseCertificateOrbit(Spec(group, x), x->cloud,
                                            x_prime->cloud, sigma),
           out);
  });
}

invcert_status invcert_classifier_create(const char* kind, double tau,
                                         const invcert_cloud* const* refs,
                                         int32_t n_refs,
                                         invcert_classifier** out) {
  if (AnyNull(kind, out)) return NullError();
  return Guard([&] {
    switch (invcert::ParseSyntheticKind(kind)) {
      case invcert::SyntheticKind::kNormThreshold:
        *out = new invcert_classifier{invcert::SyntheticClassifier::NormThreshold(tau)};
        return;
      case invcert::SyntheticKind::kCenteredNormThreshold:
        *out = new invcert_classifier{
            invcert::SyntheticClassifier::CenteredNormThreshold(tau)};
        return;
      case invcert::SyntheticKind::kPairwiseCentroid: {
        if (n_refs < 1 || refs == nullptr) {
          throw invcert::DomainError("pairwise-centroid needs reference clouds");
        }
        std::vector<invcert::PointCloud> clouds;
        for (int32_t i = 0; i < n_refs; ++i) {
          if (refs[i] == nullptr) throw invcert::DomainError("NULL reference cloud");
          clouds.push_back(refs[i]->cloud);
        }
        *out = new invcert_classifier{
            invcert::SyntheticClassifier::PairwiseCentroid(clouds)};
        return;
      }
    }
  });
}

void invcert_classifier_destroy(invcert_classifier* c) { delete c; }

invcert_status invcert_classifier_classify(const invcert_classifier* c,
                                           const invcert_cloud* x,
                                           int32_t* label) {
  if (AnyNull(c, x, label)) return NullError();
  return Guard([&] { *label = c->classifier.Classify(x->cloud.data()); });
}

invcert_status invcert_smooth_predict(const invcert_classifier* c,
                                      const invcert_cloud* x, double sigma,
                                      int64_t n, double alpha, uint64_t seed,
                                      invcert_prediction* out) {
  if (AnyNull(c, x, out)) return NullError();
  return Guard([&] {
    const invcert::SmoothPrediction p = invcert::SmoothPredict(
        c->classifier.AsBaseClassifier(), x->cloud, sigma, n, alpha, seed);
    out->label = p.label;
    out->top_label = p.top_label;
    out->top_count = p.top_count;
    out->n = p.n;
    out->p_lower = p.p_lower;
  });
}

invcert_status invcert_certify_tight_classifier(
    invcert_group group, const invcert_classifier* c, const invcert_cloud* x,
    const invcert_cloud* x_prime, double sigma, const invcert_mc* mc,
    uint64_t seed, invcert_outcome* out) {
  if (AnyNull(c, x, x_prime, out)) return NullError();
  return Guard([&] {
    const invcert::TightOptions opts = Options(mc);
    const invcert::GroupSpec spec = Spec(group, x);
    if (spec.kind == invcert::GroupKind::kRotation ||
        spec.kind == invcert::GroupKind::kRotoTranslation) {
      const invcert::RotationCertProblem problem = invcert::BuildRotationProblem(
          spec, x->cloud, x_prime->cloud, sigma, opts.quadrature_degree,
          opts.layout);
      Export(invcert::ProbCertifyReduced(c->classifier.AsBaseClassifier(),
                                         x->cloud, sigma, problem,
                                         invcert::StatisticFor(problem), opts.mc,
                                         seed),
             out);
      return;
    }
    opts.mc.Validate();
    const invcert::SmoothPrediction p = invcert::SmoothPredict(
        c->classifier.AsBaseClassifier(), x->cloud, sigma, opts.mc.n1,
        opts.mc.alpha, invcert::MixSeed(seed, 1));
    invcert::CertificateOutcome o = invcert::CertifyTight(
        spec, x->cloud, x_prime->cloud, p.p_lower, sigma, opts, seed);
    o.bound_confidences = invcert::ConfidenceLadder(opts.mc.alpha);
    o.confidence = 1.0 - opts.mc.alpha;
    Export(o, out);
  });
}

invcert_status invcert_epsilon_params(const invcert_cloud* x,
                                      const invcert_cloud* x_prime,
                                      invcert_eps* out) {
  if (AnyNull(x, x_prime, out)) return NullError();
  return Guard([&] {
    const invcert::EpsilonParams p = invcert::ComputeEpsilonParams(
        x->cloud, invcert::Perturbation::Between(x->cloud, x_prime->cloud));
    *out = {p.eps1, p.eps2, p.norm_x, p.norm_delta};
  });
}

invcert_status invcert_adversarial_locus(double norm_x, double norm_delta,
                                         invcert_eps out[2], int32_t* count) {
  if (AnyNull(out, count)) return NullError();
  return Guard([&] {
    const auto locus = invcert::AdversarialRotationLocus(norm_x, norm_delta);
    *count = static_cast<int32_t>(std::min<size_t>(locus.size(), 2));
    for (int32_t k = 0; k < *count; ++k) {
      out[k] = {locus[k].eps1, locus[k].eps2, locus[k].norm_x, locus[k].norm_delta};
    }
  });
}

invcert_status invcert_pmin_grid_compute(const invcert_pmin_request* req,
                                         invcert_pmin_grid** out) {
  if (AnyNull(req, out)) return NullError();
  return Guard([&] {
    invcert::PminGridRequest r;
    switch (req->method) {
      case INVCERT_PMIN_BLACKBOX: r.method = invcert::PminMethod::kBlackBox; break;
      case INVCERT_PMIN_SO2_TIGHT: r.method = invcert::PminMethod::kSo2Tight; break;
      case INVCERT_PMIN_SO2_ORBIT: r.method = invcert::PminMethod::kSo2Orbit; break;
      default: throw invcert::DomainError("unknown p_min method code");
    }
    switch (req->range) {
      case INVCERT_RANGE_UNIT: r.range = invcert::PminRange::kUnit; break;
      case INVCERT_RANGE_FULL: r.range = invcert::PminRange::kFull; break;
      default: throw invcert::DomainError("unknown p_min range code");
    }
    r.norm_x = req->norm_x;
    r.norm_delta = req->norm_delta;
    r.sigma = req->sigma;
    r.resolution = req->resolution;
    r.mc = Options(&req->mc).mc;
    r.seed = req->seed;
    *out = new invcert_pmin_grid{invcert::ComputePminGrid(r)};
  });
}

void invcert_pmin_grid_destroy(invcert_pmin_grid* g) { delete g; }

int32_t invcert_pmin_grid_resolution(const invcert_pmin_grid* g) {
  return g ? static_cast<int32_t>(g->grid.axis.size()) : 0;
}

double invcert_pmin_grid_axis(const invcert_pmin_grid* g, int32_t k) {
  if (!g || k < 0 || k >= static_cast<int32_t>(g->grid.axis.size())) return 0.0;
  return g->grid.axis[k];
}

double invcert_pmin_grid_value(const invcert_pmin_grid* g, int32_t i, int32_t j) {
  const int32_t r = invcert_pmin_grid_resolution(g);
  if (i < 0 || j < 0 || i >= r || j >= r) return 0.0;
  return g->grid.values(i, j);
}

int32_t invcert_pmin_grid_feasible(const invcert_pmin_grid* g, int32_t i,
                                   int32_t j) {
  const int32_t r = invcert_pmin_grid_resolution(g);
  if (i < 0 || j < 0 || i >= r || j >= r) return 0;
  return g->grid.feasible(i, j) ? 1 : 0;
}

double invcert_pmin_grid_blackbox(const invcert_pmin_grid* g) {
  return g ? g->grid.blackbox : 0.0;
}

uint32_t invcert_pmin_grid_flags(const invcert_pmin_grid* g) {
  return g ? g->grid.flags : 0u;
}

int32_t invcert_pmin_grid_n_loci(const invcert_pmin_grid* g) {
  return g ? static_cast<int32_t>(g->grid.loci.size()) : 0;
}

invcert_status invcert_pmin_grid_locus(const invcert_pmin_grid* g, int32_t k,
                                       double* eps1, double* eps2) {
  if (AnyNull(g, eps1, eps2)) return NullError();
  if (k < 0 || k >= static_cast<int32_t>(g->grid.loci.size())) {
    return Fail(INVCERT_E_DOMAIN, "locus index out of range");
  }
  *eps1 = g->grid.loci[k](0);
  *eps2 = g->grid.loci[k](1);
  return INVCERT_OK;
}

invcert_status invcert_fixture(const invcert_fixture_request* req,
                               invcert_cloud** clean, invcert_cloud** perturbed) {
  if (AnyNull(req, clean, perturbed)) return NullError();
  return Guard([&] {
    invcert::FixtureRequest r;
    switch (req->scenario) {
      case INVCERT_SCENARIO_SCALING: r.scenario = invcert::FixtureScenario::kScaling; break;
      case INVCERT_SCENARIO_ROTATION: r.scenario = invcert::FixtureScenario::kRotation; break;
      case INVCERT_SCENARIO_RANDOM: r.scenario = invcert::FixtureScenario::kRandom; break;
      default: throw invcert::DomainError("unknown fixture scenario code");
    }
    r.norm_x = req->norm_x;
    if (req->has_norm_delta) r.norm_delta = req->norm_delta;
    if (req->has_theta) r.theta = req->theta;
    r.n_points = req->n_points;
    r.dim = req->dim;
    r.seed = req->seed;
    invcert::FixturePair pair = invcert::MakeFixture(r);
    auto c = std::make_unique<invcert_cloud>(invcert_cloud{std::move(pair.clean)});
    auto p = std::make_unique<invcert_cloud>(invcert_cloud{std::move(pair.perturbed)});
    *clean = c.release();
    *perturbed = p.release();
  });
}

}  // extern "C"
