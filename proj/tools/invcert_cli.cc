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

// invcert command-line front end. Talks to the library only through the C
// interface in invcert/invcert.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "invcert/invcert.h"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

// Error carrying the exit code it maps to.
struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void InputFail(const std::string& message) {
  throw CliError{kExitInput, message};
}

void Check(invcert_status status, const std::string& context) {
  if (status == INVCERT_OK) return;
  const std::string msg = context + ": " + invcert_last_error();
  if (status == INVCERT_E_NUMERICAL || status == INVCERT_E_INTERNAL) {
    throw CliError{kExitNumerical, msg};
  }
  throw CliError{kExitInput, msg};
}

struct CloudDeleter {
  void operator()(invcert_cloud* c) const { invcert_cloud_destroy(c); }
};
using CloudPtr = std::unique_ptr<invcert_cloud, CloudDeleter>;

struct ClassifierDeleter {
  void operator()(invcert_classifier* c) const { invcert_classifier_destroy(c); }
};
using ClassifierPtr = std::unique_ptr<invcert_classifier, ClassifierDeleter>;

std::string Fnv1a64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) InputFail("cannot open " + path);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CloudPtr LoadCloud(const std::string& path, const std::string& flag) {
  invcert_cloud* raw = nullptr;
  const invcert_status s = invcert_cloud_read_csv(path.c_str(), &raw);
  if (s != INVCERT_OK) InputFail(flag + ": " + invcert_last_error());
  return CloudPtr(raw);
}

invcert_group ParseGroup(const std::string& tag) {
  invcert_group g;
  if (invcert_group_parse(tag.c_str(), &g) != INVCERT_OK) {
    InputFail("--group: " + std::string(invcert_last_error()));
  }
  return g;
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json FlagsJson(uint32_t flags) {
  ordered_json out = ordered_json::array();
  for (uint32_t bit = 1; bit != 0 && bit <= flags; bit <<= 1) {
    if (flags & bit) {
      const char* name = invcert_flag_name(bit);
      out.push_back(name ? name : "unknown");
    }
  }
  return out;
}

ordered_json OutcomeJson(const invcert_outcome& o) {
  ordered_json j;
  j["certified"] = o.certified != 0;
  j["method"] = invcert_method_name(o.method);
  j["bound_value"] = o.bound_value;
  j["radius"] = o.radius;
  j["residual"] = o.residual;
  j["margin"] = o.margin;
  j["p_lower"] = o.p_lower;
  j["confidence"] = o.confidence;
  j["bound_confidences"] = {o.bound_confidence[0], o.bound_confidence[1],
                            o.bound_confidence[2]};
  j["log_kappa"] = o.has_log_kappa ? ordered_json(o.log_kappa) : ordered_json(nullptr);
  j["n_star"] = o.n_star;
  j["mc_stderr"] = o.mc_stderr;
  if (o.has_competitor_bound) j["competitor_bound"] = o.competitor_bound;
  j["flags"] = FlagsJson(o.flags);
  return j;
}

ordered_json MatrixJson(const std::vector<double>& data, int rows, int cols) {
  ordered_json m = ordered_json::array();
  for (int i = 0; i < rows; ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < cols; ++k) row.push_back(data[static_cast<size_t>(i) * cols + k]);
    m.push_back(row);
  }
  return m;
}

ordered_json Manifest(const std::string& command, ordered_json parameters,
                      ordered_json inputs) {
  ordered_json m;
  m["command"] = command;
  m["version"] = invcert_version();
  m["parameters"] = std::move(parameters);
  m["inputs"] = std::move(inputs);
  return m;
}

void Emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

ordered_json InputDigest(const std::string& path) {
  return {{"path", path}, {"fnv1a64", Fnv1a64(path)}};
}

// ---- shared option groups --------------------------------------------------

struct McFlags {
  int64_t n1 = 10000;
  int64_t n2 = 10000;
  int64_t n3 = 10000;
  double alpha = 0.001;
  int quad_degree = 20;
  std::string so3_layout = "full";

  invcert_mc ToC() const {
    invcert_mc mc;
    invcert_mc_default(&mc);
    mc.n1 = n1;
    mc.n2 = n2;
    mc.n3 = n3;
    mc.alpha = alpha;
    mc.quadrature_degree = quad_degree;
    if (so3_layout == "full") {
      mc.so3_layout = INVCERT_SO3_FULL;
    } else if (so3_layout == "zero-padded") {
      mc.so3_layout = INVCERT_SO3_ZERO_PADDED;
    } else {
      InputFail("--so3-layout must be full or zero-padded");
    }
    return mc;
  }

  ordered_json Json() const {
    return {{"n1", n1}, {"n2", n2}, {"n3", n3}, {"alpha", alpha},
            {"quad_degree", quad_degree}, {"so3_layout", so3_layout}};
  }
};

void AddMcFlags(CLI::App* cmd, McFlags& f, bool with_n1) {
  if (with_n1) cmd->add_option("--n1", f.n1, "Samples for p_lower");
  cmd->add_option("--n2", f.n2, "Samples for the threshold");
  cmd->add_option("--n3", f.n3, "Samples for the final bound");
  cmd->add_option("--alpha", f.alpha, "Overall significance");
  cmd->add_option("--quad-degree", f.quad_degree, "SO(3) quadrature degree");
  cmd->add_option("--so3-layout", f.so3_layout, "full or zero-padded");
}

struct ClassifierFlags {
  std::string kind;
  std::optional<double> threshold;
  std::vector<std::string> references;

  ClassifierPtr Build() const {
    std::vector<CloudPtr> refs;
    std::vector<const invcert_cloud*> raw;
    for (const auto& path : references) {
      refs.push_back(LoadCloud(path, "--reference"));
      raw.push_back(refs.back().get());
    }
    if ((kind == "norm" || kind == "centered-norm") && !threshold) {
      InputFail("--threshold is required for --classifier " + kind);
    }
    invcert_classifier* c = nullptr;
    const invcert_status s = invcert_classifier_create(
        kind.c_str(), threshold.value_or(0.0), raw.data(),
        static_cast<int32_t>(raw.size()), &c);
    if (s != INVCERT_OK) InputFail("--classifier: " + std::string(invcert_last_error()));
    return ClassifierPtr(c);
  }

  ordered_json Json() const {
    ordered_json j{{"kind", kind}};
    j["threshold"] = threshold ? ordered_json(*threshold) : ordered_json(nullptr);
    j["references"] = ordered_json::array();
    for (const auto& r : references) j["references"].push_back(InputDigest(r));
    return j;
  }
};

void AddClassifierFlags(CLI::App* cmd, ClassifierFlags& f, bool required) {
  auto* opt = cmd->add_option("--classifier", f.kind,
                              "norm, centered-norm or pairwise-centroid");
  if (required) opt->required();
  cmd->add_option("--threshold", f.threshold, "Threshold for norm classifiers");
  cmd->add_option("--reference", f.references,
                  "Reference clouds for pairwise-centroid (repeatable)");
}

// ---- certify ---------------------------------------------------------------

struct CertifyArgs {
  std::string group;
  std::string clean;
  std::string perturbed;
  double sigma = 0.0;
  std::optional<double> p_lower;
  std::optional<double> p_upper;
  bool multiclass = false;
  std::string method = "both";
  std::optional<uint64_t> seed;
  int max_iters = 50;
  McFlags mc;
  ClassifierFlags classifier;
};

bool NeedsMonteCarlo(invcert_group g) {
  return g == INVCERT_GROUP_SO || g == INVCERT_GROUP_SE;
}

bool HasTight(invcert_group g) {
  return g == INVCERT_GROUP_NONE || g == INVCERT_GROUP_T || NeedsMonteCarlo(g);
}

int RunCertify(const CertifyArgs& a) {
  const invcert_group group = ParseGroup(a.group);
  if (a.method != "orbit" && a.method != "tight" && a.method != "both") {
    InputFail("--method must be orbit, tight or both");
  }
  const bool want_orbit = a.method != "tight";
  const bool want_tight = a.method != "orbit";
  if (want_tight && !HasTight(group)) {
    InputFail("--method " + a.method + " is not available for --group " + a.group +
              " (no tight certificate; use --method orbit)");
  }
  if (!(a.sigma > 0.0)) InputFail("--sigma must be > 0");
  const bool use_classifier = !a.classifier.kind.empty();
  if (use_classifier == a.p_lower.has_value()) {
    InputFail("give exactly one of --p-lower or --classifier");
  }
  if (a.multiclass) {
    if (!a.p_lower || !a.p_upper) {
      InputFail("--multiclass needs --p-lower (top class) and --p-upper (runner-up)");
    }
  } else if (a.p_upper) {
    InputFail("--p-upper is only used with --multiclass");
  }
  const bool mc_used = use_classifier || (want_tight && NeedsMonteCarlo(group));
  if (mc_used && !a.seed) InputFail("--seed is required for Monte-Carlo certificates");
  const uint64_t seed = a.seed.value_or(0);

  CloudPtr x = LoadCloud(a.clean, "--clean");
  CloudPtr xp = LoadCloud(a.perturbed, "--perturbed");
  if (invcert_cloud_n_points(x.get()) != invcert_cloud_n_points(xp.get()) ||
      invcert_cloud_dim(x.get()) != invcert_cloud_dim(xp.get())) {
    InputFail("--perturbed: shape differs from --clean");
  }
  const invcert_mc mc = a.mc.ToC();

  ordered_json results;
  ordered_json prediction = nullptr;
  double p_lower = a.p_lower.value_or(0.0);
  ClassifierPtr classifier;
  if (use_classifier) {
    classifier = a.classifier.Build();
    invcert_prediction pred;
    Check(invcert_smooth_predict(classifier.get(), x.get(), a.sigma, mc.n1, mc.alpha,
                                 seed, &pred),
          "smooth prediction");
    p_lower = pred.p_lower;
    prediction = {{"label", pred.label == INVCERT_ABSTAIN ? ordered_json("ABSTAIN")
                                                          : ordered_json(pred.label)},
                  {"top_label", pred.top_label},
                  {"top_count", pred.top_count},
                  {"n", pred.n},
                  {"p_lower", pred.p_lower}};
  }

  if (want_orbit) {
    invcert_outcome o;
    if (a.multiclass) {
      Check(invcert_certify_orbit_multiclass(group, x.get(), xp.get(), *a.p_lower,
                                             *a.p_upper, a.sigma, a.max_iters, &o),
            "orbit certificate");
    } else {
      Check(invcert_certify_orbit(group, x.get(), xp.get(), p_lower, a.sigma,
                                  a.max_iters, &o),
            "orbit certificate");
    }
    results["orbit"] = OutcomeJson(o);
  }
  if (want_tight) {
    invcert_outcome o;
    if (a.multiclass) {
      Check(invcert_certify_multiclass(group, x.get(), xp.get(), *a.p_lower,
                                       *a.p_upper, a.sigma, &mc, seed, &o),
            "tight certificate");
    } else if (use_classifier) {
      Check(invcert_certify_tight_classifier(group, classifier.get(), x.get(),
                                             xp.get(), a.sigma, &mc, seed, &o),
            "tight certificate");
    } else {
      Check(invcert_certify_tight(group, x.get(), xp.get(), p_lower, a.sigma, &mc,
                                  seed, &o),
            "tight certificate");
    }
    results["tight"] = OutcomeJson(o);
  }

  ordered_json params{{"group", a.group},
                      {"sigma", a.sigma},
                      {"method", a.method},
                      {"multiclass", a.multiclass},
                      {"p_lower", a.p_lower ? ordered_json(*a.p_lower) : ordered_json(nullptr)},
                      {"p_upper", a.p_upper ? ordered_json(*a.p_upper) : ordered_json(nullptr)},
                      {"seed", a.seed ? ordered_json(*a.seed) : ordered_json(nullptr)},
                      {"max_iters", a.max_iters},
                      {"mc", a.mc.Json()}};
  if (use_classifier) params["classifier"] = a.classifier.Json();

  ordered_json doc;
  doc["schema"] = 1;
  doc["manifest"] = Manifest(
      "certify", params,
      {{"clean", InputDigest(a.clean)}, {"perturbed", InputDigest(a.perturbed)}});
  if (use_classifier) doc["prediction"] = prediction;
  doc["results"] = results;
  Emit(doc);
  return kExitOk;
}

// ---- pmin-grid -------------------------------------------------------------

struct PminArgs {
  double norm_x = -1.0;
  double norm_delta = -1.0;
  double sigma = 0.0;
  int resolution = 100;
  std::string group = "SO2";
  std::string method = "tight";
  std::string range = "unit";
  std::string diff;
  std::string output;
  std::optional<uint64_t> seed;
  McFlags mc;
};

invcert_pmin_grid* ComputeGrid(int32_t method, const PminArgs& a,
                               const invcert_mc& mc, int32_t range) {
  invcert_pmin_request req;
  req.method = method;
  req.range = range;
  req.norm_x = a.norm_x;
  req.norm_delta = a.norm_delta;
  req.sigma = a.sigma;
  req.resolution = a.resolution;
  req.mc = mc;
  req.seed = a.seed.value_or(0);
  invcert_pmin_grid* grid = nullptr;
  Check(invcert_pmin_grid_compute(&req, &grid), "p_min grid");
  return grid;
}

int RunPminGrid(const PminArgs& a) {
  if (!(a.norm_x >= 0.0)) InputFail("--norm-x must be >= 0");
  if (!(a.norm_delta >= 0.0)) InputFail("--norm-delta must be >= 0");
  if (!(a.sigma > 0.0)) InputFail("--sigma must be > 0");
  if (a.resolution < 2) InputFail("--resolution must be >= 2");
  int32_t method;
  if (a.group == "blackbox") {
    method = INVCERT_PMIN_BLACKBOX;
  } else if (a.group == "SO2") {
    if (a.method == "tight") {
      method = INVCERT_PMIN_SO2_TIGHT;
    } else if (a.method == "orbit") {
      method = INVCERT_PMIN_SO2_ORBIT;
    } else {
      InputFail("--method must be tight or orbit");
    }
  } else {
    InputFail("--group must be blackbox or SO2");
  }
  if (!a.diff.empty() && a.diff != "blackbox") InputFail("--diff accepts only blackbox");
  int32_t range;
  if (a.range == "unit") {
    range = INVCERT_RANGE_UNIT;
  } else if (a.range == "full") {
    range = INVCERT_RANGE_FULL;
  } else {
    InputFail("--range must be unit or full");
  }
  if (!a.seed) InputFail("--seed is required for Monte-Carlo commands");
  const invcert_mc mc = a.mc.ToC();

  struct GridDeleter {
    void operator()(invcert_pmin_grid* g) const { invcert_pmin_grid_destroy(g); }
  };
  std::unique_ptr<invcert_pmin_grid, GridDeleter> grid(ComputeGrid(method, a, mc, range));
  const int r = invcert_pmin_grid_resolution(grid.get());
  const double blackbox = invcert_pmin_grid_blackbox(grid.get());

  std::ostringstream csv;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (j) csv << ',';
      if (!invcert_pmin_grid_feasible(grid.get(), i, j)) {
        csv << "INF";
        continue;
      }
      double v = invcert_pmin_grid_value(grid.get(), i, j);
      if (!a.diff.empty()) v = blackbox - v;
      csv << FormatNumber(v);
    }
    csv << '\n';
  }
  if (a.output.empty()) {
    InputFail("--output is required");
  }
  {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) InputFail("--output: cannot write " + a.output);
    out << csv.str();
  }

  ordered_json axis = ordered_json::array();
  for (int k = 0; k < r; ++k) axis.push_back(invcert_pmin_grid_axis(grid.get(), k));
  ordered_json loci = ordered_json::array();
  for (int k = 0; k < invcert_pmin_grid_n_loci(grid.get()); ++k) {
    double e1, e2;
    Check(invcert_pmin_grid_locus(grid.get(), k, &e1, &e2), "locus");
    loci.push_back({{"eps1_tilde", e1}, {"eps2_tilde", e2}});
  }
  int feasible = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) feasible += invcert_pmin_grid_feasible(grid.get(), i, j);
  }

  ordered_json params{{"group", a.group},       {"method", a.method},
                      {"norm_x", a.norm_x},     {"norm_delta", a.norm_delta},
                      {"sigma", a.sigma},       {"resolution", a.resolution},
                      {"range", a.range},       {"diff", a.diff.empty() ? ordered_json(nullptr) : ordered_json(a.diff)},
                      {"seed", *a.seed},        {"mc", a.mc.Json()}};
  ordered_json doc;
  doc["schema"] = 1;
  doc["manifest"] = Manifest("pmin-grid", params, ordered_json::object());
  doc["csv"] = {{"path", a.output},
                {"rows", "eps2_tilde ascending"},
                {"columns", "eps1_tilde ascending"},
                {"infeasible_marker", "INF"},
                {"values", a.diff.empty() ? "p_min" : "p_min(blackbox) - p_min"}};
  doc["axis"] = axis;
  doc["blackbox_p_min"] = blackbox;
  doc["feasible_cells"] = feasible;
  doc["adversarial_rotation_loci"] = loci;
  doc["flags"] = FlagsJson(invcert_pmin_grid_flags(grid.get()));
  Emit(doc);
  return kExitOk;
}

// ---- project ---------------------------------------------------------------

struct ProjectArgs {
  std::string group;
  std::string clean;
  std::string perturbed;
  int max_iters = 50;
};

int RunProject(const ProjectArgs& a) {
  const invcert_group group = ParseGroup(a.group);
  if (a.max_iters < 1) InputFail("--max-iters must be >= 1");
  CloudPtr x = LoadCloud(a.clean, "--clean");
  CloudPtr xp = LoadCloud(a.perturbed, "--perturbed");
  invcert_projection* raw = nullptr;
  Check(invcert_project(group, x.get(), xp.get(), a.max_iters, &raw), "projection");
  std::unique_ptr<invcert_projection, void (*)(invcert_projection*)> proj(
      raw, invcert_projection_destroy);

  const int d = invcert_projection_dim(proj.get());
  std::vector<double> rot(static_cast<size_t>(d) * d), trans(d);
  Check(invcert_projection_rotation(proj.get(), rot.data(), rot.size()), "rotation");
  Check(invcert_projection_translation(proj.get(), trans.data(), trans.size()),
        "translation");
  ordered_json perm = nullptr;
  if (const int n = invcert_projection_permutation_size(proj.get()); n > 0) {
    std::vector<int32_t> p(n);
    Check(invcert_projection_permutation(proj.get(), p.data(), p.size()), "permutation");
    perm = p;
  }

  ordered_json doc;
  doc["schema"] = 1;
  doc["manifest"] = Manifest(
      "project", {{"group", a.group}, {"max_iters", a.max_iters}},
      {{"clean", InputDigest(a.clean)}, {"perturbed", InputDigest(a.perturbed)}});
  doc["residual"] = invcert_projection_residual(proj.get());
  doc["exact"] = invcert_projection_exact(proj.get()) != 0;
  doc["transform"] = {{"rotation", MatrixJson(rot, d, d)},
                      {"translation", trans},
                      {"permutation", perm}};
  Emit(doc);
  return kExitOk;
}

// ---- smooth-predict --------------------------------------------------------

struct SmoothArgs {
  std::string input;
  double sigma = 0.0;
  int64_t n1 = 10000;
  double alpha = 0.001;
  std::optional<uint64_t> seed;
  ClassifierFlags classifier;
};

int RunSmoothPredict(const SmoothArgs& a) {
  if (!(a.sigma > 0.0)) InputFail("--sigma must be > 0");
  if (a.n1 < 1) InputFail("--n1 must be >= 1");
  if (!a.seed) InputFail("--seed is required for Monte-Carlo commands");
  ClassifierPtr c = a.classifier.Build();
  CloudPtr x = LoadCloud(a.input, "--input");
  invcert_prediction pred;
  Check(invcert_smooth_predict(c.get(), x.get(), a.sigma, a.n1, a.alpha, *a.seed, &pred),
        "smooth prediction");
  ordered_json doc;
  doc["schema"] = 1;
  doc["manifest"] = Manifest("smooth-predict",
                             {{"classifier", a.classifier.Json()},
                              {"sigma", a.sigma},
                              {"n1", a.n1},
                              {"alpha", a.alpha},
                              {"seed", *a.seed}},
                             {{"input", InputDigest(a.input)}});
  doc["label"] = pred.label == INVCERT_ABSTAIN ? ordered_json("ABSTAIN")
                                               : ordered_json(pred.label);
  doc["top_label"] = pred.top_label;
  doc["top_count"] = pred.top_count;
  doc["n"] = pred.n;
  doc["p_lower"] = pred.p_lower;
  Emit(doc);
  return kExitOk;
}

// ---- fixture ---------------------------------------------------------------

struct FixtureArgs {
  std::string scenario;
  double norm_x = -1.0;
  std::optional<double> norm_delta;
  std::optional<double> theta;
  int n_points = 16;
  int dim = 2;
  std::optional<uint64_t> seed;
  std::string clean_out;
  std::string perturbed_out;
};

int RunFixture(const FixtureArgs& a) {
  invcert_fixture_request req{};
  if (a.scenario == "scaling") {
    req.scenario = INVCERT_SCENARIO_SCALING;
  } else if (a.scenario == "rotation") {
    req.scenario = INVCERT_SCENARIO_ROTATION;
  } else if (a.scenario == "random") {
    req.scenario = INVCERT_SCENARIO_RANDOM;
  } else {
    InputFail("--scenario must be scaling, rotation or random");
  }
  if (!a.seed) InputFail("--seed is required");
  req.norm_x = a.norm_x;
  req.has_norm_delta = a.norm_delta ? 1 : 0;
  req.norm_delta = a.norm_delta.value_or(0.0);
  req.has_theta = a.theta ? 1 : 0;
  req.theta = a.theta.value_or(0.0);
  req.n_points = a.n_points;
  req.dim = a.dim;
  req.seed = *a.seed;
  invcert_cloud* c = nullptr;
  invcert_cloud* p = nullptr;
  Check(invcert_fixture(&req, &c, &p), "fixture");
  CloudPtr clean(c), perturbed(p);
  Check(invcert_cloud_write_csv(clean.get(), a.clean_out.c_str()), "--clean-out");
  Check(invcert_cloud_write_csv(perturbed.get(), a.perturbed_out.c_str()),
        "--perturbed-out");

  ordered_json doc;
  doc["schema"] = 1;
  doc["manifest"] = Manifest(
      "fixture",
      {{"scenario", a.scenario},
       {"norm_x", a.norm_x},
       {"norm_delta", a.norm_delta ? ordered_json(*a.norm_delta) : ordered_json(nullptr)},
       {"theta", a.theta ? ordered_json(*a.theta) : ordered_json(nullptr)},
       {"n_points", a.n_points},
       {"dim", a.dim},
       {"seed", *a.seed}},
      ordered_json::object());
  doc["outputs"] = {{"clean", InputDigest(a.clean_out)},
                    {"perturbed", InputDigest(a.perturbed_out)}};
  if (a.dim == 2) {
    invcert_eps eps;
    Check(invcert_epsilon_params(clean.get(), perturbed.get(), &eps), "epsilon");
    const double scale = eps.norm_x * eps.norm_delta;
    doc["epsilon"] = {{"eps1", eps.eps1},
                      {"eps2", eps.eps2},
                      {"norm_x", eps.norm_x},
                      {"norm_delta", eps.norm_delta},
                      {"eps1_tilde", scale > 0 ? ordered_json(eps.eps1 / scale) : ordered_json(nullptr)},
                      {"eps2_tilde", scale > 0 ? ordered_json(eps.eps2 / scale) : ordered_json(nullptr)}};
  }
  Emit(doc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gray-box robustness certificates for invariant point-cloud classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(invcert_version()));

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "Certify a clean/perturbed pair");
  c->add_option("--group", certify.group, "none, T, SO, O, SE, S, SxSE")->required();
  c->add_option("--clean", certify.clean, "Clean cloud CSV")->required();
  c->add_option("--perturbed", certify.perturbed, "Perturbed cloud CSV")->required();
  c->add_option("--sigma", certify.sigma, "Smoothing standard deviation")->required();
  c->add_option("--p-lower", certify.p_lower, "Lower bound on the clean probability");
  c->add_option("--p-upper", certify.p_upper, "Upper bound on the runner-up (multi-class)");
  c->add_flag("--multiclass", certify.multiclass, "Two-class margin certificate");
  c->add_option("--method", certify.method, "orbit, tight or both");
  c->add_option("--seed", certify.seed, "Random seed");
  c->add_option("--max-iters", certify.max_iters, "Registration iterations (SxSE)");
  AddMcFlags(c, certify.mc, /*with_n1=*/true);
  AddClassifierFlags(c, certify.classifier, /*required=*/false);

  PminArgs pmin;
  auto* g = app.add_subcommand("pmin-grid", "Sweep p_min over normalized (eps1, eps2)");
  g->add_option("--norm-x", pmin.norm_x, "||X||")->required();
  g->add_option("--norm-delta", pmin.norm_delta, "||Delta||")->required();
  g->add_option("--sigma", pmin.sigma, "Smoothing standard deviation")->required();
  g->add_option("--resolution", pmin.resolution, "Grid nodes per axis");
  g->add_option("--group", pmin.group, "blackbox or SO2");
  g->add_option("--method", pmin.method, "tight or orbit (SO2 only)");
  g->add_option("--range", pmin.range, "unit ([0,1]^2) or full ([-1,1]^2)");
  g->add_option("--diff", pmin.diff, "blackbox: write p_min(blackbox) - p_min");
  g->add_option("--output", pmin.output, "CSV output path")->required();
  g->add_option("--seed", pmin.seed, "Random seed");
  AddMcFlags(g, pmin.mc, /*with_n1=*/false);

  ProjectArgs project;
  auto* p = app.add_subcommand("project", "Project a perturbed cloud onto the orbit");
  p->add_option("--group", project.group, "none, T, SO, O, SE, S, SxSE")->required();
  p->add_option("--clean", project.clean, "Clean cloud CSV")->required();
  p->add_option("--perturbed", project.perturbed, "Perturbed cloud CSV")->required();
  p->add_option("--max-iters", project.max_iters, "Registration iterations (SxSE)");

  SmoothArgs smooth;
  auto* s = app.add_subcommand("smooth-predict", "Smoothed prediction of a synthetic classifier");
  s->add_option("--input", smooth.input, "Input cloud CSV")->required();
  s->add_option("--sigma", smooth.sigma, "Smoothing standard deviation")->required();
  s->add_option("--n1", smooth.n1, "Sample count");
  s->add_option("--alpha", smooth.alpha, "Significance");
  s->add_option("--seed", smooth.seed, "Random seed");
  AddClassifierFlags(s, smooth.classifier, /*required=*/true);

  FixtureArgs fixture;
  auto* f = app.add_subcommand("fixture", "Write synthetic clean/perturbed clouds");
  f->add_option("--scenario", fixture.scenario, "scaling, rotation or random")->required();
  f->add_option("--norm-x", fixture.norm_x, "||X||")->required();
  f->add_option("--norm-delta", fixture.norm_delta, "||Delta||");
  f->add_option("--theta", fixture.theta, "Rotation angle (rotation scenario)");
  f->add_option("--n-points", fixture.n_points, "Points per cloud");
  f->add_option("--dim", fixture.dim, "2 or 3");
  f->add_option("--seed", fixture.seed, "Random seed");
  f->add_option("--clean-out", fixture.clean_out, "Clean CSV path")->required();
  f->add_option("--perturbed-out", fixture.perturbed_out, "Perturbed CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c->parsed()) return RunCertify(certify);
    if (g->parsed()) return RunPminGrid(pmin);
    if (p->parsed()) return RunProject(project);
    if (s->parsed()) return RunSmoothPredict(smooth);
    if (f->parsed()) return RunFixture(fixture);
  } catch (const CliError& e) {
    std::cerr << "invcert: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "invcert: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
