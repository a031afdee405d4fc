#include "dsd/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsd {

namespace {

void check_parties(int n_parties) {
  if (n_parties < 1 || n_parties > 30) {
    throw std::invalid_argument("party count must be in [1, 30], got " +
                                std::to_string(n_parties));
  }
}

// Bit position (from the least significant end) of a party's qubit.
inline int bit_pos(int n_parties, int party) { return n_parties - 1 - party; }

}  // namespace

int dim_for_parties(int n_parties) {
  check_parties(n_parties);
  return 1 << n_parties;
}

int parties_for_dim(Eigen::Index dim) {
  if (dim < 2) {
    throw std::invalid_argument("dimension must be at least 2");
  }
  Eigen::Index d = dim;
  int n = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++n;
  }
  if (d != 1) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  return n;
}

PureState::PureState(int n_parties, Vector amplitudes)
    : n_parties_(n_parties), amplitudes_(std::move(amplitudes)) {
  check_parties(n_parties_);
  const Eigen::Index want = Eigen::Index{1} << n_parties_;
  if (amplitudes_.size() != want) {
    throw std::invalid_argument(
        "amplitude vector has size " + std::to_string(amplitudes_.size()) +
        ", expected " + std::to_string(want) + " for " +
        std::to_string(n_parties_) + " parties");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kAtolUnit) {
    throw std::invalid_argument("state is not normalized: |psi|^2 = " +
                                std::to_string(norm2));
  }
}

HermitianOp::HermitianOp(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw std::invalid_argument("operator must be a nonempty square matrix");
  }
  const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kAtolUnit) {
    throw std::invalid_argument("matrix is not Hermitian (deviation " +
                                std::to_string(dev) + ")");
  }
}

HermitianOp HermitianOp::identity(Eigen::Index dim) {
  return HermitianOp(Matrix::Identity(dim, dim));
}

HermitianOp HermitianOp::outer(const Vector& v) {
  return HermitianOp(v * v.adjoint());
}

double HermitianOp::expectation(const PureState& psi) const {
  if (psi.dim() != dim()) {
    throw std::invalid_argument("state/operator dimension mismatch");
  }
  const Complex val = psi.amplitudes().dot(entries_ * psi.amplitudes());
  return val.real();
}

BinaryMeasurement::BinaryMeasurement(HermitianOp element0, HermitianOp element1)
    : element0_(std::move(element0)), element1_(std::move(element1)) {
  if (element0_.dim() != element1_.dim()) {
    throw std::invalid_argument("measurement elements differ in dimension");
  }
  const Matrix sum = element0_.entries() + element1_.entries();
  const double dev =
      (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
  if (dev > kAtolUnit) {
    throw std::invalid_argument(
        "measurement elements do not sum to the identity (deviation " +
        std::to_string(dev) + ")");
  }
  for (const HermitianOp* el : {&element0_, &element1_}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(el->entries(),
                                             Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -kAtolEig) {
      throw std::invalid_argument("measurement element has eigenvalue " +
                                  std::to_string(lo));
    }
  }
}

const HermitianOp& BinaryMeasurement::element(int outcome) const {
  if (outcome == 0) return element0_;
  if (outcome == 1) return element1_;
  throw std::invalid_argument("outcome must be 0 or 1");
}

namespace {

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

PureState tensor(const std::vector<PureState>& factors) {
  if (factors.empty()) {
    throw std::invalid_argument("tensor product of zero states");
  }
  Vector amps = factors[0].amplitudes();
  int n = factors[0].n_parties();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    amps = kron(amps, factors[i].amplitudes());
    n += factors[i].n_parties();
  }
  return PureState(n, std::move(amps));
}

HermitianOp tensor(const std::vector<HermitianOp>& factors) {
  if (factors.empty()) {
    throw std::invalid_argument("tensor product of zero operators");
  }
  Matrix m = factors[0].entries();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    m = kron(m, factors[i].entries());
  }
  return HermitianOp(std::move(m));
}

HermitianOp partial_trace(const HermitianOp& op, int n_parties,
                          const std::vector<int>& keep) {
  check_parties(n_parties);
  const Eigen::Index dim = Eigen::Index{1} << n_parties;
  if (op.dim() != dim) {
    throw std::invalid_argument("operator dimension does not match party count");
  }
  if (keep.empty()) {
    throw std::invalid_argument("must keep at least one party");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_parties), false);
  for (int p : keep) {
    if (p < 0 || p >= n_parties) {
      throw std::invalid_argument("kept party index out of range");
    }
    if (seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("duplicate kept party index");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  std::vector<int> kept(keep);
  std::sort(kept.begin(), kept.end());
  const int k = static_cast<int>(kept.size());

  // Masks that extract, for a full basis index, the bits of the kept and
  // traced parties packed into contiguous reduced indices.
  auto split = [&](Eigen::Index idx, Eigen::Index& kept_bits,
                   Eigen::Index& traced_bits) {
    kept_bits = 0;
    traced_bits = 0;
    int kpos = 0;
    for (int p = 0; p < n_parties; ++p) {
      const Eigen::Index bit = (idx >> bit_pos(n_parties, p)) & 1;
      if (kpos < k && kept[static_cast<std::size_t>(kpos)] == p) {
        kept_bits = (kept_bits << 1) | bit;
        ++kpos;
      } else {
        traced_bits = (traced_bits << 1) | bit;
      }
    }
  };

  const Eigen::Index rdim = Eigen::Index{1} << k;
  Matrix out = Matrix::Zero(rdim, rdim);
  const Matrix& m = op.entries();
  for (Eigen::Index r = 0; r < dim; ++r) {
    Eigen::Index rk, rt;
    split(r, rk, rt);
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::Index ck, ct;
      split(c, ck, ct);
      if (rt == ct) {
        out(rk, ck) += m(r, c);
      }
    }
  }
  return HermitianOp(std::move(out));
}

PureState permute_parties(const PureState& state, const std::vector<int>& perm) {
  const int n = state.n_parties();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permutation length does not match party count");
  }
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || hit[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("not a permutation of the parties");
    }
    hit[static_cast<std::size_t>(p)] = true;
  }
  const Eigen::Index dim = state.dim();
  Vector out(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index dst = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::Index bit = (idx >> bit_pos(n, i)) & 1;
      dst |= bit << bit_pos(n, perm[static_cast<std::size_t>(i)]);
    }
    out[dst] = state.amplitudes()[idx];
  }
  return PureState(n, std::move(out));
}

EigPair top_eigenpair(const HermitianOp& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }
  const Eigen::Index last = op.dim() - 1;
  EigPair out;
  out.value = es.eigenvalues()[last];
  out.vector = es.eigenvectors().col(last);
  return out;
}

Vector apply_on_party(const Eigen::Matrix2cd& op, const Vector& amplitudes,
                      int n_parties, int party) {
  check_parties(n_parties);
  const Eigen::Index dim = Eigen::Index{1} << n_parties;
  if (amplitudes.size() != dim) {
    throw std::invalid_argument("amplitude vector size does not match parties");
  }
  if (party < 0 || party >= n_parties) {
    throw std::invalid_argument("party index out of range");
  }
  const Eigen::Index stride = Eigen::Index{1} << bit_pos(n_parties, party);
  Vector out(dim);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & stride) continue;  // handle each (0,1) pair once
    const Complex a0 = amplitudes[base];
    const Complex a1 = amplitudes[base | stride];
    out[base] = op(0, 0) * a0 + op(0, 1) * a1;
    out[base | stride] = op(1, 0) * a0 + op(1, 1) * a1;
  }
  return out;
}

}  // namespace dsd
