// Copyright 2026 The qdeepclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdc/statevector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdc/error.hpp"

namespace qdc {
namespace {

constexpr double kUnitNormTolerance = 1e-10;

std::atomic<std::uint64_t> g_audit_states{0};
std::atomic<double> g_audit_max_dev{0.0};

void audit(const CVector& amps) {
  const double dev = std::abs(amps.norm() - 1.0);
  g_audit_states.fetch_add(1, std::memory_order_relaxed);
  double cur = g_audit_max_dev.load(std::memory_order_relaxed);
  while (dev > cur &&
         !g_audit_max_dev.compare_exchange_weak(cur, dev, std::memory_order_relaxed)) {
  }
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

// Unitary V diag(exp(-i lambda t)) V^dagger of a Hermitian matrix.
CMatrix unitary_of(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const RVector& lambda = eig.eigenvalues();
  CVector phases(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    phases[i] = std::polar(1.0, -lambda[i] * t);
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

StateVec::StateVec(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "StateVec: dimension must be >= 1");
  }
  const double n = amps_.norm();
  if (!std::isfinite(n)) {
    throw Error(ErrorCode::kNonFinite, "StateVec: non-finite amplitude");
  }
  if (std::abs(n - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorCode::kNotNormalized,
                "StateVec: norm " + std::to_string(n) + " is not 1");
  }
  audit(amps_);
}

StateVec::StateVec(CVector amplitudes, Trusted) : amps_(std::move(amplitudes)) {
  audit(amps_);
}

StateVec StateVec::normalized(CVector amplitudes) {
  if (amplitudes.size() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "StateVec: dimension must be >= 1");
  }
  const double n = amplitudes.norm();
  if (!std::isfinite(n)) {
    throw Error(ErrorCode::kNonFinite, "StateVec: non-finite amplitude");
  }
  if (n == 0.0) {
    throw Error(ErrorCode::kZeroVector, "StateVec: cannot normalize a zero vector");
  }
  amplitudes /= n;
  return StateVec(std::move(amplitudes), Trusted{});
}

StateVec StateVec::basis(Index dim, Index index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw Error(ErrorCode::kInvalidArgument, "StateVec::basis: index out of range");
  }
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return StateVec(std::move(v), Trusted{});
}

StateVec StateVec::uniform(Index dim) {
  if (dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "StateVec::uniform: dimension must be >= 1");
  }
  return normalized(CVector::Ones(dim));
}

RVector StateVec::probabilities() const { return amps_.cwiseAbs2(); }

Complex StateVec::inner(const StateVec& other) const {
  require_same_dim(dim(), other.dim(), "inner product");
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left operand
}

StateVec StateVec::negated() const { return StateVec(-amps_, Trusted{}); }

NormAuditStats norm_audit() {
  return {g_audit_states.load(), g_audit_max_dev.load()};
}

void reset_norm_audit() {
  g_audit_states.store(0);
  g_audit_max_dev.store(0.0);
}

ShotPlan ShotPlan::sampled(std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ShotPlan: sampled mode needs shots >= 1");
  }
  return {MeasureMode::kSampled, shots, seed};
}

ShotPlan ShotPlan::derive(std::uint64_t tag) const {
  ShotPlan p = *this;
  p.seed = derive_seed(seed, tag);
  return p;
}

ShotPlan ShotPlan::with_shots(std::uint64_t n) const {
  ShotPlan p = *this;
  p.shots = n;
  return p;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EncodedVector encode_amplitudes(std::span<const double> v) {
  CVector amps(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) amps[static_cast<Index>(i)] = v[i];
  const double norm = amps.norm();
  return {StateVec::normalized(std::move(amps)), norm};
}

EncodedVector encode_amplitudes(const RVector& v) {
  return encode_amplitudes(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

double swap_test_probability(const StateVec& t, const StateVec& q, const ShotPlan& plan) {
  require_same_dim(t.dim(), q.dim(), "swap test");
  const double p = std::clamp(0.5 * (1.0 - t.inner(q).real()), 0.0, 1.0);
  if (!plan.is_sampled()) return p;
  std::mt19937_64 rng(plan.seed);
  std::binomial_distribution<std::uint64_t> draw(plan.shots, p);
  return static_cast<double>(draw(rng)) / static_cast<double>(plan.shots);
}

Histogram sample_measurement(const StateVec& s, const ShotPlan& plan) {
  if (!plan.is_sampled()) {
    throw Error(ErrorCode::kInvalidArgument, "sample_measurement requires a sampled ShotPlan");
  }
  // Multinomial as a chain of conditional binomials; cost is O(dim).
  std::mt19937_64 rng(plan.seed);
  const RVector p = s.probabilities();
  Histogram hist;
  std::uint64_t left = plan.shots;
  double mass = p.sum();
  for (Index i = 0; i < p.size() && left > 0; ++i) {
    std::uint64_t n = left;
    if (i + 1 < p.size()) {
      const double q = mass > 0.0 ? std::clamp(p[i] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::uint64_t> draw(left, q);
      n = draw(rng);
    }
    if (n > 0) hist[i] = n;
    left -= n;
    mass -= p[i];
  }
  return hist;
}

Index measure_once(const StateVec& s, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const RVector p = s.probabilities();
  const double u = unit(rng) * p.sum();
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  // Rounding can leave u at the top edge; return the last populated index.
  for (Index i = p.size() - 1; i > 0; --i) {
    if (p[i] > 0.0) return i;
  }
  return 0;
}

void require_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "Hamiltonian must be square");
  }
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= tol)) {
    throw Error(ErrorCode::kNonHermitian,
                "matrix is not Hermitian (max |H - H^dagger| = " + std::to_string(asym) + ")");
  }
}

StateVec evolve(const StateVec& s, const CMatrix& hamiltonian, double t) {
  require_hermitian(hamiltonian);
  require_same_dim(hamiltonian.rows(), s.dim(), "evolve");
  return StateVec(unitary_of(hamiltonian, t) * s.amplitudes());
}

StateVec evolve_trotter(const StateVec& s, std::span<const CMatrix> terms, double t,
                        int steps, TrotterOrder order) {
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "evolve_trotter: steps must be >= 1");
  if (terms.empty()) return s;
  for (const auto& h : terms) {
    require_hermitian(h);
    require_same_dim(h.rows(), s.dim(), "evolve_trotter");
  }
  const double dt = t / steps;
  const Index n = s.dim();
  CMatrix step = CMatrix::Identity(n, n);
  if (order == TrotterOrder::kFirst) {
    // exp(-i H_0 dt) ... exp(-i H_{m-1} dt): the last term acts first.
    for (const auto& h : terms) step = step * unitary_of(h, dt);
  } else {
    const std::size_t m = terms.size();
    for (std::size_t k = 0; k + 1 < m; ++k) step = step * unitary_of(terms[k], dt / 2);
    step = step * unitary_of(terms[m - 1], dt);
    for (std::size_t k = m - 1; k-- > 0;) step = step * unitary_of(terms[k], dt / 2);
  }
  CVector psi = s.amplitudes();
  for (int i = 0; i < steps; ++i) psi = step * psi;
  return StateVec(std::move(psi));
}

RVector qpe_outcome_distribution(double phase, int clock_bits) {
  if (clock_bits < 1 || clock_bits > 24) {
    throw Error(ErrorCode::kInvalidArgument, "clock_bits must be in [1, 24]");
  }
  const Index n = Index{1} << clock_bits;
  const double nd = static_cast<double>(n);
  RVector p(n);
  for (Index k = 0; k < n; ++k) {
    double delta = phase - static_cast<double>(k) / nd;
    delta -= std::round(delta);
    const double den = std::sin(std::numbers::pi * delta);
    if (std::abs(den) < 1e-15) {
      p[k] = 1.0;
    } else {
      const double num = std::sin(std::numbers::pi * nd * delta);
      p[k] = (num * num) / (nd * nd * den * den);
    }
  }
  return p / p.sum();
}

InversionResult spectral_invert(const CMatrix& a, const StateVec& y, double eps_k,
                                std::optional<QpeSettings> qpe) {
  require_hermitian(a);
  require_same_dim(a.rows(), y.dim(), "spectral_invert");
  if (!(eps_k >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps_K must be >= 0");

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  const RVector& lambda = eig.eigenvalues();
  const CMatrix& vecs = eig.eigenvectors();
  const CVector beta = vecs.adjoint() * y.amplitudes();
  const double lambda_max = lambda.cwiseAbs().maxCoeff();

  RVector inv = RVector::Zero(lambda.size());
  double t0 = 0.0;
  Index retained = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < lambda.size(); ++j) {
    const double mag = std::abs(lambda[j]);
    if (mag >= eps_k && mag > 0.0) {
      ++retained;
      smallest = std::min(smallest, mag);
    }
  }

  if (!qpe) {
    for (Index j = 0; j < lambda.size(); ++j) {
      const double mag = std::abs(lambda[j]);
      if (mag >= eps_k && mag > 0.0) inv[j] = 1.0 / lambda[j];
    }
  } else {
    if (lambda_max == 0.0) throw Error(ErrorCode::kAllFiltered, "zero matrix cannot be inverted");
    t0 = qpe->t0 > 0.0 ? qpe->t0 : 0.8 * std::numbers::pi / lambda_max;
    const Index n = Index{1} << qpe->clock_bits;
    // Eigenvalue read from clock outcome k (two's-complement signed phase).
    RVector estimate(n);
    for (Index k = 0; k < n; ++k) {
      const double signed_k = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k - n);
      const double lam = 2.0 * std::numbers::pi * signed_k / (static_cast<double>(n) * t0);
      estimate[k] = (std::abs(lam) >= eps_k && lam != 0.0) ? 1.0 / lam : 0.0;
    }
    for (Index j = 0; j < lambda.size(); ++j) {
      if (std::abs(beta[j]) == 0.0) continue;
      const RVector p =
          qpe_outcome_distribution(lambda[j] * t0 / (2.0 * std::numbers::pi), qpe->clock_bits);
      inv[j] = p.dot(estimate);
    }
  }

  const CVector x = vecs * (inv.cast<Complex>().asDiagonal() * beta);
  const double scale = x.norm();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kAllFiltered,
                "every eigencomponent of the input fell below eps_K = " + std::to_string(eps_k));
  }
  return {StateVec::normalized(x), scale, retained,
          retained > 0 ? lambda_max / smallest : std::numeric_limits<double>::infinity(), t0};
}

}  // namespace qdc
