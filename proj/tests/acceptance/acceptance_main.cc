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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "invcert/errors.h"
#include "invcert/fixtures.h"
#include "invcert/geometry.h"
#include "invcert/mc_engine.h"
#include "invcert/numerics.h"
#include "invcert/oracles.h"
#include "invcert/orbit_cert.h"
#include "invcert/tight_cert.h"
#include "test_oracles.h"

namespace invcert {
namespace {

using ::invcert::testing::NormalCdf;
using ::invcert::testing::NormalQuantile;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Eigen::MatrixXd RandomMatrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
  }
  return m;
}

McConfig Mc(int64_t n, double alpha = 0.001) {
  McConfig mc;
  mc.n1 = mc.n2 = mc.n3 = n;
  mc.alpha = alpha;
  return mc;
}

TightOptions Tight(int64_t n) {
  TightOptions o;
  o.mc = Mc(n);
  return o;
}

int RunCli(const std::string& args, std::string* out) {
  const std::string cmd = std::string(INVCERT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return -1;
  char buf[4096];
  size_t n;
  out->clear();
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out->append(buf, n);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Verdict BlackboxBaseline() {
  const double radius = BlackboxRadius(0.8, 0.5);
  const double oracle = 0.5 * NormalQuantile(0.8);
  bool ok = std::fabs(radius - oracle) < 1e-4 && std::fabs(radius - 0.4208) < 1e-4;

  const std::string dir =
      (std::filesystem::temp_directory_path() / "invcert_acceptance").string();
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/x.csv") << "0,0\n";
  std::string verdicts;
  for (const char* d : {"0.42", "0.43"}) {
    std::ofstream(dir + "/xp.csv") << d << ",0\n";
    std::string out;
    const int code = RunCli("certify --group none --clean " + dir + "/x.csv --perturbed " +
                                dir + "/xp.csv --sigma 0.5 --p-lower 0.8",
                            &out);
    const bool certified = out.find("\"certified\": true") != std::string::npos;
    ok &= code == 0 && certified == (std::string(d) == "0.42");
    verdicts += std::string(" ") + d + (certified ? "=certified" : "=not");
  }
  std::filesystem::remove_all(dir);
  return {ok, Format("radius %.6f (oracle %.6f);", radius, oracle) + verdicts};
}

Verdict TightVsBaseline() {
  TightOptions o = Tight(100000);
  auto bound_at = [&](double nd) {
    FixtureRequest req;
    req.scenario = FixtureScenario::kScaling;
    req.norm_x = 0.01;
    req.norm_delta = nd;
    req.seed = 1;
    const FixturePair f = MakeFixture(req);
    return CertifyRotationTight({GroupKind::kRotation, 2}, f.clean, f.perturbed, 0.8, 0.5,
                                o, 1);
  };
  const CertificateOutcome at70 = bound_at(0.70);
  const CertificateOutcome at80 = bound_at(0.80);
  return {at70.certified && !at80.certified,
          Format("bound %.4f at ||Delta||=0.70, %.4f at 0.80 (black-box radius 0.4208)",
                 at70.bound_value, at80.bound_value)};
}

Verdict TranslationEquivalence() {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const int dim = 2 + i % 2;
    const int n = 1 + static_cast<int>(gen() % 20);
    const PointCloud x(RandomMatrix(n, dim, gen));
    const PointCloud xp(x.data() + 2.0 * u(gen) * RandomMatrix(n, dim, gen));
    const double p = 0.5 + 0.4999 * u(gen);
    const double sigma = 0.05 + 2.0 * u(gen);
    const CertificateOutcome tight = TightTranslation(x, xp, p, sigma);
    const Eigen::MatrixXd delta = xp.data() - x.data();
    const Eigen::RowVectorXd mean = delta.colwise().mean();
    const double res = (delta.rowwise() - mean).norm();
    const double expected = NormalCdf(NormalQuantile(p) - res / sigma);
    worst = std::max(worst, std::fabs(tight.bound_value - expected));
    mismatches += tight.certified !=
                  CertifyOrbit({GroupKind::kTranslation, dim}, x, xp, p, sigma).certified;
  }
  return {worst < 1e-12 && mismatches == 0,
          Format("max |error| %.2e, verdict mismatches %d / 500", worst, mismatches)};
}

Verdict SeReduction() {
  std::mt19937_64 gen(4);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    const int dim = i < 50 ? 2 : 3;
    const int n = 3 + static_cast<int>(gen() % 6);
    const PointCloud x(RandomMatrix(n, dim, gen));
    Eigen::MatrixXd moved = x.data() + 0.5 * RandomMatrix(n, dim, gen);
    moved.rowwise() += RandomMatrix(1, dim, gen).row(0) * 3.0;
    const PointCloud xp(moved);
    const TightOptions o = Tight(dim == 2 ? 2000 : 300);
    const uint64_t seed = 1000 + i;
    const auto se =
        CertifyRotationTight({GroupKind::kRotoTranslation, dim}, x, xp, 0.85, 0.6, o, seed);
    const auto so = CertifyRotationTight({GroupKind::kRotation, dim}, Center(x), Center(xp),
                                         0.85, 0.6, o, seed);
    identical += se.bound_value == so.bound_value && se.log_kappa == so.log_kappa &&
                 se.certified == so.certified;
  }
  return {identical == 100, Format("%d / 100 bit-identical (50 in 2D, 50 in 3D)", identical)};
}

Verdict Strictness() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sigma = 0.5;
  int not_below = 0, strictly_above = 0;
  double mean_gain = 0.0;
  for (int i = 0; i < 100; ++i) {
    FixtureRequest req;
    req.scenario = FixtureScenario::kRandom;
    req.norm_x = sigma * (0.01 + 0.09 * u(gen));
    req.norm_delta = sigma * (0.4 + 1.2 * u(gen));
    req.n_points = 4 + static_cast<int>(gen() % 13);
    req.seed = gen();
    const FixturePair f = MakeFixture(req);
    const double p = 0.7 + 0.29 * u(gen);
    const auto tight = CertifyRotationTight({GroupKind::kRotation, 2}, f.clean, f.perturbed,
                                            p, sigma, Tight(10000), 500 + i);
    const auto orbit = CertifyOrbit({GroupKind::kRotation, 2}, f.clean, f.perturbed, p, sigma);
    const double gain = tight.bound_value - orbit.bound_value;
    not_below += gain > -3.0 * tight.mc_stderr;
    strictly_above += gain > 0.01;
    mean_gain += gain / 100;
  }
  return {not_below == 100 && strictly_above >= 50,
          Format("tight >= orbit - 3 se in %d / 100, > orbit + 0.01 in %d / 100 "
                 "(mean gain %.4f)",
                 not_below, strictly_above, mean_gain)};
}

Verdict HaarSo2ClosedForm() {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(gen() % 15);
    const double sigma = 0.2 + 1.8 * u(gen);
    const PointCloud x(RandomMatrix(n, 2, gen) * (0.1 + u(gen)));
    const PointCloud z(x.data() + sigma * RandomMatrix(n, 2, gen));
    const Eigen::MatrixXd w = So2Weights(x, x, sigma);
    const Eigen::VectorXd q =
        w * Eigen::Map<const Eigen::VectorXd>(z.data().data(), z.data().size());
    const double closed = std::log(2 * std::numbers::pi) + LogBesselI0(std::hypot(q(2), q(3)));
    const double oracle = HaarOracleSo2(x, z, sigma, 100000);
    worst = std::max(worst, std::fabs(closed - oracle) / std::fabs(oracle));
  }
  return {worst < 1e-7, Format("max relative error %.2e over 200 triples", worst)};
}

Verdict So3Quadrature(int oracle_grid, double tolerance) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const So3BetaHat d20(20), d40(40);
  double worst = 0.0, drift = 0.0;
  for (int i = 0; i < 50; ++i) {
    // M = X^T Z / sigma^2 with ||X|| = 1 and Z a smoothing sample.
    const int n = 3 + static_cast<int>(gen() % 8);
    const double sigma = 0.5 + u(gen);
    const Eigen::MatrixXd x = RandomMatrix(n, 3, gen).normalized();
    const Eigen::MatrixXd z = x + sigma * RandomMatrix(n, 3, gen);
    const Eigen::Matrix3d m = x.transpose() * z;
    const double fast = d20(m, sigma);
    const double slow = HaarOracleSo3(m, sigma, oracle_grid);
    worst = std::max(worst, std::fabs(fast - slow) / std::fabs(slow));
    drift = std::max(drift, std::fabs(fast - d40(m, sigma)) / std::fabs(d40(m, sigma)));
  }
  return {worst < tolerance && drift < 1e-6,
          Format("max relative error %.2e vs %d^3 oracle, degree 20->40 drift %.2e",
                 worst, oracle_grid, drift)};
}

Verdict ProcrustesHungarian() {
  std::mt19937_64 gen(8);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(gen() % 12);
    const PointCloud x(RandomMatrix(n, 2, gen));
    const PointCloud xp(RandomMatrix(n, 2, gen));
    worst = std::max(worst, std::fabs(ProjectRotation(x, xp).residual -
                                      BruteForceProcrustes2d(x, xp, 100000)));
  }
  int mismatches = 0, cases = 0;
  for (int n = 1; n <= 7; ++n) {
    for (int t = 0; t < 30; ++t, ++cases) {
      const int dim = 2 + t % 2;
      const PointCloud a(RandomMatrix(n, dim, gen));
      const PointCloud b(RandomMatrix(n, dim, gen));
      mismatches +=
          std::fabs(ProjectPermutation(a, b).residual - BruteForcePermutation(a, b)) > 1e-12;
    }
  }
  return {worst < 1e-6 && mismatches == 0,
          Format("Procrustes max |error| %.2e (200 instances); Hungarian mismatches %d / %d",
                 worst, mismatches, cases)};
}

Verdict Coverage() {
  // Norm-threshold classifier (rotation invariant); X' is a scaled copy.
  std::mt19937_64 gen(9);
  const double sigma = 0.5;
  const PointCloud x(RandomMatrix(4, 2, gen).normalized());
  const PointCloud xp(1.25 * x.data());
  const SyntheticClassifier g = SyntheticClassifier::NormThreshold(2.0);
  const int label = g.Classify(x.data());
  const ReferenceEstimate ref = ReferenceProbability(g, xp, sigma, label, 10000000, 99);
  const RotationCertProblem problem =
      BuildRotationProblem({GroupKind::kRotation, 2}, x, xp, sigma);
  const LikelihoodStatistic rho = StatisticFor(problem);
  const BaseClassifier base = g.AsBaseClassifier();
  int covered = 0;
  double slack = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const CertificateOutcome out =
        ProbCertifyReduced(base, x, sigma, problem, rho, Mc(10000), 10000 + t);
    covered += out.bound_value <= ref.p;
    slack += (ref.p - out.bound_value) / 1000;
  }
  return {covered >= 999,
          Format("bound <= reference (%.5f +- %.5f) in %d / 1000 trials, mean slack %.4f",
                 ref.p, ref.standard_error, covered, slack)};
}

// Shift problem along a single direction u: q = <Z, u> / sigma with u a unit
// matrix. The perturbed mean is <Delta, u> / sigma; clean mean 0.
Verdict InverseConsistency() {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_excess = -1.0;
  bool ok = true;
  std::string detail;
  for (GroupKind kind : {GroupKind::kTrivial, GroupKind::kTranslation}) {
    for (int i = 0; i < 5; ++i) {
      const PointCloud x(RandomMatrix(6, 2, gen));
      const PointCloud xp(x.data() + (0.1 + 0.4 * u(gen)) * RandomMatrix(6, 2, gen));
      const double sigma = 0.5;
      Eigen::MatrixXd d = xp.data() - x.data();
      if (kind == GroupKind::kTranslation) d = Center(d);
      const double mu = d.norm() / sigma;
      RotationCertProblem problem;
      problem.mean_perturbed = Eigen::VectorXd::Constant(1, mu);
      problem.mean_clean = Eigen::VectorXd::Zero(1);
      problem.covariance = Eigen::MatrixXd::Identity(1, 1);
      const LikelihoodStatistic rho(1, [mu](const double* q) { return mu * q[0] - 0.5 * mu * mu; });
      const CertificateOutcome mc = InverseCertifyReduced(problem, rho, Mc(100000), 20 + i);
      const CertificateOutcome closed =
          InverseCertificate({kind, 2}, x, xp, sigma, Tight(1000), 1);
      const double width = 3.0 * mc.mc_stderr;
      const double excess = std::fabs(mc.bound_value - closed.bound_value) - width;
      worst_excess = std::max(worst_excess, excess);
      ok &= excess <= 0.01;
    }
  }
  const PointCloud x(RandomMatrix(8, 2, gen));
  const CertificateOutcome same =
      InverseCertificate({GroupKind::kRotation, 2}, x, x, 0.5, Tight(100000), 3);
  ok &= same.bound_value >= 0.50 && same.bound_value <= 0.53;
  return {ok, Format("max |MC - closed form| - width %.4f (limit 0.01); identical-law "
                     "p_min %.4f",
                     worst_excess, same.bound_value)};
}

Verdict RotationLocus() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    FixtureRequest req;
    req.scenario = FixtureScenario::kRotation;
    req.norm_x = 0.1 + 3.0 * u(gen);
    req.theta = 2 * std::numbers::pi * (u(gen) - 0.5);
    req.n_points = 2 + static_cast<int>(gen() % 20);
    req.seed = gen();
    const FixturePair f = MakeFixture(req);
    const Perturbation d = Perturbation::Between(f.clean, f.perturbed);
    const EpsilonParams e = ComputeEpsilonParams(f.clean, d);
    const double nd2 = d.Norm() * d.Norm();
    const double e2 = 0.5 * std::sqrt(std::max(0.0, nd2 * (4 * req.norm_x * req.norm_x - nd2)));
    worst = std::max({worst, std::fabs(e.eps1 + 0.5 * nd2), std::fabs(std::fabs(e.eps2) - e2)});
  }
  int wrong = 0;
  for (int i = 0; i < 1000; ++i) {
    const double nx = 0.05 + 2.0 * u(gen);
    const double nd = (i % 10 == 0) ? 2.0 * nx : 4.5 * nx * u(gen);
    const bool infeasible = AdversarialRotationLocus(nx, nd).empty();
    wrong += infeasible != (nd > 2.0 * nx);
  }
  return {worst < 1e-9 && wrong == 0,
          Format("max |eps error| %.2e over 200 rotations; feasibility errors %d / 1000",
                 worst, wrong)};
}

Verdict MulticlassRadiusCheck() {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double pa = 0.2 + 0.79 * u(gen);
    const double pb = (1.0 - pa) * (0.01 + 0.98 * u(gen));
    const double sigma = 0.1 + 2.0 * u(gen);
    const double expected = 0.5 * sigma * (NormalQuantile(pa) - NormalQuantile(pb));
    worst = std::max(worst, std::fabs(MulticlassRadius(pa, pb, sigma) - expected));
  }
  return {worst < 1e-6, Format("max |error| %.2e over 100 pairs", worst)};
}

}  // namespace
}  // namespace invcert

int main() {
  using invcert::Verdict;
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"blackbox baseline radius and CLI verdict flip", 1, invcert::BlackboxBaseline},
      {"tight SO(2) certificate beats black-box on scaling", 10, invcert::TightVsBaseline},
      {"translation tight bound equals closed form and orbit verdict", 5,
       invcert::TranslationEquivalence},
      {"SE path bit-identical to SO path on centered inputs", 60, invcert::SeReduction},
      {"tight SO(2) dominates orbit bound for small clouds", 60, invcert::Strictness},
      {"SO(2) Haar integral oracle vs Bessel closed form", 30, invcert::HaarSo2ClosedForm},
      {"SO(3) quadrature vs trapezoid oracle and refinement", 600,
       [] { return invcert::So3Quadrature(200, 1e-5); }},
      {"Procrustes vs angle grid and Hungarian vs exhaustive", 30,
       invcert::ProcrustesHungarian},
      {"coverage of the estimated-p lower bound", 900, invcert::Coverage},
      {"inverse certificate consistency", 30, invcert::InverseConsistency},
      {"adversarial rotation locus and feasibility", 1, invcert::RotationLocus},
      {"multi-class black-box radius", 1, invcert::MulticlassRadiusCheck},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= criteria[i].budget_seconds;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %zu: %s -- %s [%.2fs, budget %.0fs%s]\n", pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, v.detail.c_str(), secs, criteria[i].budget_seconds,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d / %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
