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

#include "invcert/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "invcert/errors.h"
#include "invcert/numerics.h"
#include "invcert/parallel.h"

namespace invcert {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd GaussianMatrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = normal(gen);
  }
  return m;
}

Eigen::MatrixXd HaarOrthogonal(int d, std::mt19937_64& gen, bool proper) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(GaussianMatrix(d, d, gen));
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  }
  if (proper && q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

// Online log-sum-exp accumulator.
class LogSum {
 public:
  void Add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > top_) {
      acc_ = acc_ * std::exp(top_ - log_term) + 1.0;
      top_ = log_term;
    } else {
      acc_ += std::exp(log_term - top_);
    }
  }
  double Value() const { return top_ + std::log(acc_); }

 private:
  double top_ = -std::numeric_limits<double>::infinity();
  double acc_ = 0.0;
};

void CheckSigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and > 0");
  }
}

}  // namespace

SyntheticKind ParseSyntheticKind(std::string_view name) {
  if (name == "norm") return SyntheticKind::kNormThreshold;
  if (name == "centered-norm") return SyntheticKind::kCenteredNormThreshold;
  if (name == "pairwise-centroid") return SyntheticKind::kPairwiseCentroid;
  throw DomainError("unknown classifier kind '" + std::string(name) +
                    "' (expected norm, centered-norm or pairwise-centroid)");
}

SyntheticClassifier SyntheticClassifier::NormThreshold(double tau) {
  if (std::isnan(tau)) throw DomainError("threshold must not be NaN");
  return SyntheticClassifier(SyntheticKind::kNormThreshold, tau, {});
}

SyntheticClassifier SyntheticClassifier::CenteredNormThreshold(double tau) {
  if (std::isnan(tau)) throw DomainError("threshold must not be NaN");
  return SyntheticClassifier(SyntheticKind::kCenteredNormThreshold, tau, {});
}

SyntheticClassifier SyntheticClassifier::PairwiseCentroid(
    const std::vector<PointCloud>& references) {
  if (references.empty()) {
    throw DomainError("pairwise-centroid classifier needs at least one reference");
  }
  std::vector<Eigen::VectorXd> signatures;
  for (const auto& ref : references) {
    if (!ref.SameShape(references.front())) {
      throw DomainError("pairwise-centroid references differ in shape");
    }
    signatures.push_back(PairwiseDistanceSignature(ref.data()));
  }
  return SyntheticClassifier(SyntheticKind::kPairwiseCentroid, 0.0,
                             std::move(signatures));
}

std::vector<GroupKind> SyntheticClassifier::InvarianceGroups() const {
  if (kind_ == SyntheticKind::kNormThreshold) {
    return {GroupKind::kRotation, GroupKind::kOrthogonal, GroupKind::kPermutation};
  }
  return {GroupKind::kTranslation,     GroupKind::kRotation,
          GroupKind::kOrthogonal,      GroupKind::kRotoTranslation,
          GroupKind::kPermutation,     GroupKind::kPermutationRotoTranslation};
}

int SyntheticClassifier::Classify(const Eigen::MatrixXd& z) const {
  switch (kind_) {
    case SyntheticKind::kNormThreshold:
      return z.norm() <= tau_ ? 0 : 1;
    case SyntheticKind::kCenteredNormThreshold:
      return Center(z).norm() <= tau_ ? 0 : 1;
    case SyntheticKind::kPairwiseCentroid: {
      const Eigen::VectorXd sig = PairwiseDistanceSignature(z);
      if (sig.size() != signatures_.front().size()) {
        throw DomainError("input shape does not match the reference clouds");
      }
      int best = 0;
      double best_d = (sig - signatures_[0]).squaredNorm();
      for (size_t k = 1; k < signatures_.size(); ++k) {
        const double d = (sig - signatures_[k]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(k);
        }
      }
      return best;
    }
  }
  return 0;
}

BaseClassifier SyntheticClassifier::AsBaseClassifier() const {
  return [self = *this](const Eigen::MatrixXd& z) { return self.Classify(z); };
}

Eigen::VectorXd PairwiseDistanceSignature(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd out(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) out(k++) = (x.row(a) - x.row(b)).norm();
  }
  std::sort(out.data(), out.data() + out.size());
  return out;
}

Eigen::MatrixXd RandomGroupAction(GroupKind group, const Eigen::MatrixXd& x,
                                  uint64_t seed) {
  std::mt19937_64 gen(seed);
  const int d = static_cast<int>(x.cols());
  const bool rotate = group == GroupKind::kRotation ||
                      group == GroupKind::kOrthogonal ||
                      group == GroupKind::kRotoTranslation ||
                      group == GroupKind::kPermutationRotoTranslation;
  const bool translate = group == GroupKind::kTranslation ||
                         group == GroupKind::kRotoTranslation ||
                         group == GroupKind::kPermutationRotoTranslation;
  const bool permute = group == GroupKind::kPermutation ||
                       group == GroupKind::kPermutationRotoTranslation;

  Eigen::MatrixXd out = x;
  if (permute) {
    std::vector<int> perm(x.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(perm[i]);
  }
  if (rotate) {
    const Eigen::MatrixXd r =
        HaarOrthogonal(d, gen, group != GroupKind::kOrthogonal);
    out = out * r.transpose();
  }
  if (translate) {
    const Eigen::RowVectorXd b = 3.0 * GaussianMatrix(1, d, gen);
    out = out.rowwise() + b;
  }
  return out;
}

int AuditInvariance(const SyntheticClassifier& g, const PointCloud& x,
                    int trials, double noise_sigma, uint64_t seed) {
  std::mt19937_64 gen(seed);
  int flips = 0;
  const auto groups = g.InvarianceGroups();
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd z =
        x.data() + noise_sigma * GaussianMatrix(x.n_points(), x.dim(), gen);
    const int label = g.Classify(z);
    for (size_t k = 0; k < groups.size(); ++k) {
      const Eigen::MatrixXd moved = RandomGroupAction(groups[k], z, MixSeed(seed, t, k));
      if (g.Classify(moved) != label) ++flips;
    }
  }
  return flips;
}

double HaarOracleSo2(const PointCloud& x, const PointCloud& z, double sigma,
                     int grid) {
  CheckSigma(sigma);
  if (x.dim() != 2 || !x.SameShape(z)) {
    throw DomainError("SO(2) oracle needs two N x 2 clouds");
  }
  if (grid < 1000) throw DomainError("SO(2) oracle grid must be >= 1000");
  const double h = 2.0 * kPi / grid;
  const double s2 = sigma * sigma;
  LogSum sum;
  Eigen::Matrix2d r;
  for (int k = 0; k < grid; ++k) {
    const double w = h * k;
    r << std::cos(w), -std::sin(w), std::sin(w), std::cos(w);
    const double inner = (z.data() * r.transpose()).cwiseProduct(x.data()).sum();
    sum.Add(inner / s2);
  }
  return std::log(h) + sum.Value();
}

double HaarOracleSo3(const Eigen::Matrix3d& m_raw, double sigma, int grid) {
  CheckSigma(sigma);
  if (grid < 50) throw DomainError("SO(3) oracle grid must be >= 50");
  const Eigen::Matrix3d m = m_raw / (sigma * sigma);
  const int g2 = grid + (grid % 2);  // Simpson needs an even interval count
  const double h1 = 2.0 * kPi / grid;
  const double h2 = kPi / g2;

  std::vector<double> c3(grid), s3(grid);
  for (int k = 0; k < grid; ++k) {
    c3[k] = std::cos(h1 * k);
    s3[k] = std::sin(h1 * k);
  }

  std::vector<LogSum> partial(g2 + 1);
  ParallelFor(g2 + 1, [&](int64_t begin, int64_t end) {
    for (int64_t i = begin; i < end; ++i) {
      const double w2 = -kPi / 2 + h2 * static_cast<double>(i);
      const double cw2 = std::cos(w2);
      if (!(cw2 > 0.0)) continue;
      const double simpson = (i == 0 || i == g2) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double log_w = std::log(h1 * h1 * h2 / 3.0 * simpson * cw2);
      Eigen::Matrix3d ry;
      ry << cw2, 0.0, std::sin(w2), 0.0, 1.0, 0.0, -std::sin(w2), 0.0, cw2;
      for (int a = 0; a < grid; ++a) {
        Eigen::Matrix3d rz;
        rz << c3[a], -s3[a], 0.0, s3[a], c3[a], 0.0, 0.0, 0.0, 1.0;
        // <Rz Ry Rx, M> = <Rx, (Rz Ry)^T M>.
        const Eigen::Matrix3d b = (rz * ry).transpose() * m;
        const double alpha = b(0, 0);
        const double beta = b(1, 1) + b(2, 2);
        const double gamma = b(2, 1) - b(1, 2);
        for (int c = 0; c < grid; ++c) {
          partial[i].Add(log_w + alpha + c3[c] * beta + s3[c] * gamma);
        }
      }
    }
  });
  LogSum total;
  for (const auto& p : partial) {
    const double v = p.Value();
    if (std::isfinite(v)) total.Add(v);
  }
  return total.Value();
}

double BruteForceProcrustes2d(const PointCloud& x, const PointCloud& x_prime,
                              int grid) {
  if (x.dim() != 2 || !x.SameShape(x_prime)) {
    throw DomainError("Procrustes oracle needs two N x 2 clouds");
  }
  if (grid < 10000) throw DomainError("Procrustes oracle grid must be >= 1e4");
  double best = std::numeric_limits<double>::infinity();
  Eigen::Matrix2d r;
  for (int k = 0; k < grid; ++k) {
    const double t = 2.0 * kPi * k / grid;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    best = std::min(best, (x_prime.data() * r.transpose() - x.data()).norm());
  }
  return best;
}

double BruteForcePermutation(const PointCloud& x, const PointCloud& x_prime) {
  if (!x.SameShape(x_prime)) throw DomainError("clouds differ in shape");
  if (x.n_points() > 8) throw DomainError("exhaustive search limited to N <= 8");
  std::vector<int> perm(x.n_points());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < x.n_points(); ++i) {
      cost += (x_prime.data().row(perm[i]) - x.data().row(i)).squaredNorm();
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

ReferenceEstimate ReferenceProbability(const SyntheticClassifier& g,
                                       const PointCloud& x, double sigma,
                                       int label, int64_t n, uint64_t seed) {
  CheckSigma(sigma);
  if (n < 1000000) throw DomainError("reference runs need n >= 1e6");
  constexpr int64_t kChunk = 1 << 16;
  const int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<int64_t> hits(chunks, 0);
  ParallelFor(chunks, [&](int64_t begin, int64_t end) {
    Eigen::MatrixXd z(x.n_points(), x.dim());
    for (int64_t c = begin; c < end; ++c) {
      std::mt19937_64 gen(MixSeed(seed, c));
      std::normal_distribution<double> normal(0.0, sigma);
      const int64_t count = std::min(kChunk, n - c * kChunk);
      for (int64_t s = 0; s < count; ++s) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
          for (Eigen::Index i = 0; i < z.rows(); ++i) {
            z(i, j) = x.data()(i, j) + normal(gen);
          }
        }
        if (g.Classify(z) == label) ++hits[c];
      }
    }
  });
  ReferenceEstimate out;
  out.n = n;
  out.p = static_cast<double>(std::accumulate(hits.begin(), hits.end(), int64_t{0})) /
          static_cast<double>(n);
  out.standard_error = std::sqrt(out.p * (1.0 - out.p) / static_cast<double>(n));
  return out;
}

}  // namespace invcert
