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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "qdc/types.hpp"

namespace qdc {

/// Normalized complex amplitude vector. The dimension is an arbitrary
/// positive integer; composite registers are flattened index products
/// declared by whoever builds the state.
///
/// Every construction is reported to the process-wide norm audit (see
/// norm_audit()).
class StateVec {
 public:
  /// Takes amplitudes that are already unit norm within 1e-10.
  explicit StateVec(CVector amplitudes);

  /// Divides by the L2 norm. Throws kZeroVector on a zero vector.
  static StateVec normalized(CVector amplitudes);
  static StateVec basis(Index dim, Index index);
  static StateVec uniform(Index dim);

  Index dim() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](Index i) const { return amps_[i]; }

  double probability(Index i) const { return std::norm(amps_[i]); }
  RVector probabilities() const;

  /// <this|other>
  Complex inner(const StateVec& other) const;
  StateVec negated() const;

 private:
  struct Trusted {};
  StateVec(CVector amplitudes, Trusted);

  CVector amps_;
};

struct NormAuditStats {
  std::uint64_t states = 0;
  double max_deviation = 0.0;
};

/// Running count of constructed states and the worst | ||psi|| - 1 | seen.
NormAuditStats norm_audit();
void reset_norm_audit();

enum class MeasureMode { kExact, kSampled };

/// How a probability is read out: closed form, or estimated from `shots`
/// Bernoulli/multinomial draws seeded by `seed`.
struct ShotPlan {
  MeasureMode mode = MeasureMode::kExact;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;

  static ShotPlan exact() { return {}; }
  static ShotPlan sampled(std::uint64_t shots, std::uint64_t seed);

  bool is_sampled() const { return mode == MeasureMode::kSampled; }
  /// Independent sub-stream for a call tagged `tag`.
  ShotPlan derive(std::uint64_t tag) const;
  ShotPlan with_shots(std::uint64_t n) const;
};

/// splitmix64 mix of (master, tag); the seed of a derived RNG stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

struct EncodedVector {
  StateVec state;
  double norm;
};

/// Amplitude encoding: direction as a state, length carried classically.
EncodedVector encode_amplitudes(std::span<const double> v);
EncodedVector encode_amplitudes(const RVector& v);

/// 1/2 (1 - Re<t|q>). In sampled mode, the fraction of ancilla successes
/// over plan.shots draws.
double swap_test_probability(const StateVec& t, const StateVec& q,
                             const ShotPlan& plan = ShotPlan::exact());

using Histogram = std::map<Index, std::uint64_t>;

/// Computational-basis measurement repeated plan.shots times.
Histogram sample_measurement(const StateVec& s, const ShotPlan& plan);

/// Draws a single basis index from |amplitude|^2 using `rng_seed`.
Index measure_once(const StateVec& s, std::uint64_t rng_seed);

/// exp(-i H t) |s> by diagonalizing H.
StateVec evolve(const StateVec& s, const CMatrix& hamiltonian, double t);

enum class TrotterOrder { kFirst, kSecond };

/// exp(-i (sum of terms) t) |s> by product formula with `steps` slices.
/// First order is the plain Lie product (local error O(dt^2)); second
/// order is the symmetric split (global error O(dt^2)).
StateVec evolve_trotter(const StateVec& s, std::span<const CMatrix> terms,
                        double t, int steps,
                        TrotterOrder order = TrotterOrder::kFirst);

/// Phase-estimation settings for spectral_invert. t0 = 0 picks the
/// evolution time so the largest |eigenvalue| maps to phase 0.4.
struct QpeSettings {
  int clock_bits = 12;
  double t0 = 0.0;
};

struct InversionResult {
  StateVec state;
  /// Norm of the unnormalized filtered inverse applied to y.
  double scale;
  /// Eigencomponents that survived the eps_K filter.
  Index retained;
  /// Ratio of largest to smallest retained |eigenvalue|.
  double condition;
  /// Evolution time used by phase estimation (0 in exact mode).
  double t0;
};

/// Filtered eigenvalue inversion A^{-1}|y>: components with |lambda| <
/// eps_k are dropped, the rest scaled by 1/lambda, then renormalized.
/// With `qpe`, 1/lambda is replaced by its expectation over the
/// phase-estimation outcome distribution of a clock register.
InversionResult spectral_invert(const CMatrix& a, const StateVec& y, double eps_k,
                                std::optional<QpeSettings> qpe = std::nullopt);

/// Probability of each clock outcome k for an eigenphase `phase` (in
/// cycles) on `clock_bits` bits.
RVector qpe_outcome_distribution(double phase, int clock_bits);

/// Throws kNonHermitian unless ||H - H^dagger||_max <= tol.
void require_hermitian(const CMatrix& h, double tol = 1e-10);

}  // namespace qdc
