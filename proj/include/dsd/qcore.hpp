#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Dense complex linear algebra on n-qubit tensor-product spaces.
//
// Basis convention used by the whole library: party 0 is the most
// significant bit of the computational-basis index, so for n = 2 the
// amplitudes are ordered |00>, |01>, |10>, |11>.

namespace dsd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Shared tolerances.
inline constexpr double kAtolUnit = 1e-12;  // normalization, Hermiticity, completeness
inline constexpr double kAtolEig = 1e-10;   // eigenpair residuals, PSD slack
inline constexpr int kMaxExactParties = 12; // cap for exhaustive partition work

/// 2^n, with a range check on n.
int dim_for_parties(int n_parties);
/// Inverse of dim_for_parties; throws unless dim is a power of two.
int parties_for_dim(Eigen::Index dim);

/// Unit-norm amplitude vector over an n-party qubit space.
class PureState {
 public:
  PureState(int n_parties, Vector amplitudes);

  int n_parties() const { return n_parties_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  /// |<0...0|psi>|^2, the weight on the all-zeros basis state.
  double vacuum_weight() const { return std::norm(amplitudes_[0]); }

 private:
  int n_parties_;
  Vector amplitudes_;
};

/// Square complex matrix equal to its conjugate transpose within kAtolUnit.
class HermitianOp {
 public:
  explicit HermitianOp(Matrix entries);

  static HermitianOp identity(Eigen::Index dim);
  /// |v><v| for a given (not necessarily unit) vector.
  static HermitianOp outer(const Vector& v);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  /// <psi|A|psi>, real by Hermiticity.
  double expectation(const PureState& psi) const;

 private:
  Matrix entries_;
};

/// Two-outcome measurement: positive elements summing to the identity.
class BinaryMeasurement {
 public:
  BinaryMeasurement(HermitianOp element0, HermitianOp element1);

  Eigen::Index dim() const { return element0_.dim(); }
  const HermitianOp& element(int outcome) const;

 private:
  HermitianOp element0_;
  HermitianOp element1_;
};

/// Kronecker product of states in the given party order.
PureState tensor(const std::vector<PureState>& factors);
/// Kronecker product of operators in the given party order.
HermitianOp tensor(const std::vector<HermitianOp>& factors);

/// Reduce op (on 2^n_parties dims) to the parties listed in keep,
/// tracing out the rest. Party order is preserved among the kept ones.
HermitianOp partial_trace(const HermitianOp& op, int n_parties,
                          const std::vector<int>& keep);

/// Re-index amplitudes so that factor i of the input becomes factor
/// perm[i] of the output.
PureState permute_parties(const PureState& state, const std::vector<int>& perm);

struct EigPair {
  double value;
  Vector vector;
};

/// Largest eigenvalue and a unit eigenvector of a Hermitian operator.
EigPair top_eigenpair(const HermitianOp& op);

/// Apply a one-qubit operator to the given party of an n-party amplitude
/// vector. The input need not be normalized (used for intermediate values).
Vector apply_on_party(const Eigen::Matrix2cd& op, const Vector& amplitudes,
                      int n_parties, int party);

}  // namespace dsd
