#include "dsd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace dsd {

namespace {

constexpr double kFeasSlack = 1e-10;

struct TopSpace {
  double lambda;
  Matrix basis;   // orthonormal columns spanning the near-top eigenspace
  double w_max;   // largest vacuum weight available inside the span
};

TopSpace top_space(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }
  const auto& ev = es.eigenvalues();
  const Eigen::Index d = a.rows();
  const double lam = ev[d - 1];
  const double tol = 1e-10 * std::max(1.0, std::abs(lam));
  Eigen::Index first = d - 1;
  while (first > 0 && ev[first - 1] >= lam - tol) --first;
  TopSpace out;
  out.lambda = lam;
  out.basis = es.eigenvectors().rightCols(d - first);
  out.w_max = out.basis.row(0).squaredNorm();
  return out;
}

// Unit vector in the span whose vacuum weight is exactly w (needs
// w <= w_max). Works because the span splits into the vacuum-max direction
// and a vacuum-free orthogonal complement.
Vector span_state_with_weight(const TopSpace& ts, double w) {
  const Eigen::Index k = ts.basis.cols();
  if (ts.w_max <= 1e-300) {
    return ts.basis.col(0);
  }
  Vector coef = ts.basis.row(0).adjoint();
  coef /= std::sqrt(ts.w_max);
  Vector u_par = ts.basis * coef;
  if (k == 1) return u_par;
  Vector u_perp;
  double best = -1.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector cand = ts.basis.col(j) - u_par * u_par.dot(ts.basis.col(j));
    const double norm = cand.norm();
    if (norm > best) {
      best = norm;
      u_perp = cand / norm;
    }
  }
  if (best <= 1e-8) return u_par;
  const double frac = std::clamp(w / ts.w_max, 0.0, 1.0);
  return std::sqrt(frac) * u_par + std::sqrt(1.0 - frac) * u_perp;
}

double rayleigh(const Matrix& s, const Vector& v) {
  return v.dot(s * v).real();
}

// Ascent over the saturated parametrization
// psi = sqrt(1-omega) |0..0> + sqrt(omega) u, u unit and vacuum-free.
// Only reached if the multiplier bisection cannot bracket the constraint.
Vector constrained_ascent_state(const Matrix& s, double omega) {
  const Eigen::Index d = s.rows();
  const double wv = 1.0 - omega;
  auto offvac = [](Vector v) {
    v[0] = Complex{0.0, 0.0};
    return v;
  };
  Vector c = offvac(s.col(0));
  Vector u;
  if (c.norm() > 1e-14) {
    u = c / c.norm();
  } else {
    u = Vector::Zero(d);
    u[1] = 1.0;
  }
  auto value = [&](const Vector& uu) {
    return wv * s(0, 0).real() +
           2.0 * std::sqrt(omega * wv) * s.col(0).dot(uu).real() +
           omega * rayleigh(s, uu);
  };
  double val = value(u);
  double eta = 1.0;
  for (int it = 0; it < 2000; ++it) {
    const Vector g =
        std::sqrt(omega * wv) * offvac(s.col(0)) + omega * offvac(s * u);
    bool moved = false;
    for (int bt = 0; bt < 50 && !moved; ++bt) {
      Vector cand = offvac(u + eta * g);
      const double norm = cand.norm();
      if (norm < 1e-300) {
        eta *= 0.5;
        continue;
      }
      cand /= norm;
      const double v2 = value(cand);
      if (v2 > val + 1e-16) {
        u = std::move(cand);
        val = v2;
        eta *= 1.3;
        moved = true;
      } else {
        eta *= 0.5;
      }
    }
    if (!moved) break;
  }
  Vector psi = std::sqrt(omega) * u;
  psi[0] = std::sqrt(wv);
  return psi;
}

}  // namespace

PureState optimal_state_given_measurements(const HermitianOp& score_op,
                                           double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1]");
  }
  const int n = parties_for_dim(score_op.dim());
  const Eigen::Index d = score_op.dim();
  const double target = 1.0 - omega;
  if (target >= 1.0 - 1e-15) {
    Vector e0 = Vector::Zero(d);
    e0[0] = 1.0;
    return PureState(n, std::move(e0));
  }
  const Matrix& s = score_op.entries();
  const TopSpace unc = top_space(s);
  if (unc.w_max >= target - 1e-12) {
    // The unconstrained optimum is already feasible; take the in-span
    // state with the most vacuum weight (all of them score lambda).
    Vector psi = span_state_with_weight(unc, unc.w_max);
    psi.normalize();
    return PureState(n, std::move(psi));
  }

  // Bisection on the multiplier mu of the vacuum projector: the top
  // eigenvector of s + mu |0><0| gains vacuum weight as mu grows.
  const double scale = std::max(std::abs(unc.lambda), 1.0);
  double lo = 0.0;
  double hi = scale / 1e-12;
  double best_val = -std::numeric_limits<double>::infinity();
  Vector best_psi;
  auto consider = [&](const TopSpace& ts) {
    if (ts.w_max < target - kFeasSlack) return;
    Vector psi = span_state_with_weight(ts, std::min(target, ts.w_max));
    psi.normalize();
    if (std::norm(psi[0]) < target - kFeasSlack) return;
    const double v = rayleigh(s, psi);
    if (v > best_val) {
      best_val = v;
      best_psi = std::move(psi);
    }
  };
  {
    Matrix shifted = s;
    shifted(0, 0) += hi;
    const TopSpace ts = top_space(shifted);
    if (ts.w_max < target - kFeasSlack) {
      return PureState(n, constrained_ascent_state(s, omega));
    }
    consider(ts);
  }
  for (int it = 0; it < 200; ++it) {
    const double mu = 0.5 * (lo + hi);
    Matrix shifted = s;
    shifted(0, 0) += mu;
    const TopSpace ts = top_space(shifted);
    if (std::abs(ts.w_max - target) <= kFeasSlack) {
      consider(ts);
      break;
    }
    if (ts.w_max < target) {
      lo = mu;
    } else {
      hi = mu;
      consider(ts);
    }
    if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
  }
  return PureState(n, std::move(best_psi));
}

BinaryMeasurement optimal_measurement_given_states(const HermitianOp& eff0,
                                                   const HermitianOp& eff1) {
  if (eff0.dim() != eff1.dim()) {
    throw std::invalid_argument("effective score operators differ in dimension");
  }
  for (const HermitianOp* e : {&eff0, &eff1}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(e->entries(),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kAtolEig) {
      throw std::invalid_argument(
          "effective score operator is not positive semidefinite");
    }
  }
  const Matrix diff = eff0.entries() - eff1.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  const auto& ev = es.eigenvalues();
  const double tie =
      1e-12 *
      std::max(1.0, std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1])));
  Matrix p = Matrix::Zero(diff.rows(), diff.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tie) {
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  p = 0.5 * (p + p.adjoint().eval());
  Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  q = 0.5 * (q + q.adjoint().eval());
  return BinaryMeasurement(HermitianOp(std::move(p)), HermitianOp(std::move(q)));
}

SeesawConfig::SeesawConfig(int n_parties, double omega_total,
                           PartitionSpec split)
    : n(n_parties), omega(omega_total), structure(std::move(split)) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument(
        "exact see-saw supports between 1 and 4 parties");
  }
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::domain_error("energy budget must lie in [0, 1]");
  }
  if (structure.n() != n) {
    throw std::invalid_argument("partition does not cover the stated parties");
  }
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Block {
  int size = 0;
  int offset = 0;
  int dim = 0;
  std::vector<PureState> states;  // one per sub-message
};

int sub_message(int x, int n, const Block& b) {
  return (x >> (n - b.offset - b.size)) & (b.dim - 1);
}

HermitianOp block_score(const Block& b, int sub_msg,
                        const std::vector<BinaryMeasurement>& ms) {
  std::vector<HermitianOp> factors;
  factors.reserve(static_cast<std::size_t>(b.size));
  for (int j = 0; j < b.size; ++j) {
    const int bit = (sub_msg >> (b.size - 1 - j)) & 1;
    factors.push_back(ms[static_cast<std::size_t>(b.offset + j)].element(bit));
  }
  return tensor(factors);
}

double block_average(const Block& b,
                     const std::vector<BinaryMeasurement>& ms) {
  double acc = 0.0;
  for (int sub = 0; sub < b.dim; ++sub) {
    acc += block_score(b, sub, ms)
               .expectation(b.states[static_cast<std::size_t>(sub)]);
  }
  return acc / b.dim;
}

double block_vmin(const Block& b) {
  double v = 1.0;
  for (const auto& s : b.states) v = std::min(v, s.vacuum_weight());
  return v;
}

double objective(const std::vector<Block>& blocks,
                 const std::vector<BinaryMeasurement>& ms) {
  double acc = 1.0;
  for (const auto& b : blocks) acc *= block_average(b, ms);
  return acc;
}

std::vector<Block> init_blocks(const SeesawConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Block> blocks;
  int offset = 0;
  for (int k : cfg.structure.group_sizes()) {
    Block b;
    b.size = k;
    b.offset = offset;
    b.dim = 1 << k;
    const double v = std::pow(1.0 - cfg.omega, static_cast<double>(k) / cfg.n);
    for (int sub = 0; sub < b.dim; ++sub) {
      Vector amps;
      if (v >= 1.0) {
        amps = Vector::Zero(b.dim);
        amps[0] = 1.0;
      } else {
        Vector u = Vector::Zero(b.dim);
        for (int i = 1; i < b.dim; ++i) {
          u[i] = Complex(gauss(rng), gauss(rng));
        }
        double norm = u.norm();
        if (norm < 1e-12) {
          u.setZero();
          u[1] = 1.0;
          norm = 1.0;
        }
        amps = std::sqrt(1.0 - v) * (u / norm);
        amps[0] = std::sqrt(v);
      }
      b.states.emplace_back(k, std::move(amps));
    }
    blocks.push_back(std::move(b));
    offset += k;
  }
  return blocks;
}

std::vector<BinaryMeasurement> init_measurements(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<BinaryMeasurement> ms;
  ms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2cd r;
    r << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));
    if (r.norm() < 1e-9) r << Complex(1.0, 0.0), Complex(0.0, 0.0);
    r.normalize();
    Matrix p = r * r.adjoint();
    p = 0.5 * (p + p.adjoint().eval());
    Matrix q = Matrix::Identity(2, 2) - p;
    q = 0.5 * (q + q.adjoint().eval());
    ms.emplace_back(HermitianOp(std::move(p)), HermitianOp(std::move(q)));
  }
  return ms;
}

void measurement_step(const std::vector<Block>& blocks,
                      std::vector<BinaryMeasurement>& ms, int n) {
  const int count = 1 << n;
  std::vector<Vector> fulls;
  fulls.reserve(static_cast<std::size_t>(count));
  for (int x = 0; x < count; ++x) {
    std::vector<PureState> parts;
    parts.reserve(blocks.size());
    for (const auto& b : blocks) {
      parts.push_back(b.states[static_cast<std::size_t>(sub_message(x, n, b))]);
    }
    fulls.push_back(tensor(parts).amplitudes());
  }
  for (int party = 0; party < n; ++party) {
    Eigen::Matrix2cd g0 = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd g1 = Eigen::Matrix2cd::Zero();
    const int shift = n - 1 - party;
    const Eigen::Index stride = Eigen::Index{1} << shift;
    for (int x = 0; x < count; ++x) {
      Vector w = fulls[static_cast<std::size_t>(x)];
      for (int l = 0; l < n; ++l) {
        if (l == party) continue;
        const int bit = (x >> (n - 1 - l)) & 1;
        w = apply_on_party(
            Eigen::Matrix2cd(
                ms[static_cast<std::size_t>(l)].element(bit).entries()),
            w, n, l);
      }
      // Reduce |psi><psi| (other parties' elements applied) onto this party.
      Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
      const Vector& psi = fulls[static_cast<std::size_t>(x)];
      for (Eigen::Index idx = 0; idx < count; ++idx) {
        if (idx & stride) continue;
        const Complex p0 = psi[idx];
        const Complex p1 = psi[idx | stride];
        const Complex w0 = std::conj(w[idx]);
        const Complex w1 = std::conj(w[idx | stride]);
        e(0, 0) += p0 * w0;
        e(0, 1) += p0 * w1;
        e(1, 0) += p1 * w0;
        e(1, 1) += p1 * w1;
      }
      if ((x >> shift) & 1) {
        g1 += e;
      } else {
        g0 += e;
      }
    }
    g0 /= count;
    g1 /= count;
    Matrix m0 = 0.5 * (Matrix(g0) + Matrix(g0).adjoint());
    Matrix m1 = 0.5 * (Matrix(g1) + Matrix(g1).adjoint());
    ms[static_cast<std::size_t>(party)] = optimal_measurement_given_states(
        HermitianOp(std::move(m0)), HermitianOp(std::move(m1)));
  }
}

void state_step(std::vector<Block>& blocks,
                const std::vector<BinaryMeasurement>& ms, double omega) {
  const double wv = 1.0 - omega;
  const int m = static_cast<int>(blocks.size());
  for (int g = 0; g < m; ++g) {
    double others = 1.0;
    for (int h = 0; h < m; ++h) {
      if (h != g) others *= block_vmin(blocks[h]);
    }
    double w_req;
    if (wv <= 0.0) {
      w_req = 0.0;
    } else if (others <= wv) {
      w_req = 1.0;
    } else {
      w_req = wv / others;
    }
    const double omega_eff = std::clamp(1.0 - w_req, 0.0, 1.0);
    Block& blk = blocks[static_cast<std::size_t>(g)];
    for (int sub = 0; sub < blk.dim; ++sub) {
      const HermitianOp score = block_score(blk, sub, ms);
      PureState cand = optimal_state_given_measurements(score, omega_eff);
      PureState& cur = blk.states[static_cast<std::size_t>(sub)];
      if (score.expectation(cand) > score.expectation(cur)) {
        cur = std::move(cand);
      }
    }
  }
}

struct QEval {
  double value = 0.0;
  std::vector<PureState> states;
};

QEval q_eval(const Block& b, double omega_block,
             const std::vector<BinaryMeasurement>& ms) {
  QEval out;
  out.states.reserve(static_cast<std::size_t>(b.dim));
  for (int sub = 0; sub < b.dim; ++sub) {
    const HermitianOp score = block_score(b, sub, ms);
    PureState st = optimal_state_given_measurements(score, omega_block);
    out.value += score.expectation(st);
    out.states.push_back(std::move(st));
  }
  out.value /= b.dim;
  return out;
}

// The block steps can only spend the energy each block was handed at
// initialization, so the split itself has to be optimized separately:
// for each pair of blocks, golden-section search over moving vacuum
// weight from one to the other (their product is pinned by the budget),
// accepting only if the pair's best-response values improve.
void rebalance(std::vector<Block>& blocks,
               const std::vector<BinaryMeasurement>& ms, double omega) {
  const double wv = 1.0 - omega;
  const int m = static_cast<int>(blocks.size());
  if (m < 2 || wv <= 0.0) return;
  for (int g = 0; g < m; ++g) {
    for (int h = g + 1; h < m; ++h) {
      double others = 1.0;
      for (int l = 0; l < m; ++l) {
        if (l != g && l != h) others *= block_vmin(blocks[static_cast<std::size_t>(l)]);
      }
      if (others <= 0.0) continue;
      const double qpair = std::clamp(wv / others, 0.0, 1.0);
      const double tmax = -std::log(std::max(qpair, 1e-300));
      if (tmax <= 1e-12) continue;
      Block& bg = blocks[static_cast<std::size_t>(g)];
      Block& bh = blocks[static_cast<std::size_t>(h)];
      const double cur = block_average(bg, ms) * block_average(bh, ms);

      double best_val = -1.0;
      QEval best_g, best_h;
      auto eval = [&](double t) {
        const double wg = std::exp(-t);
        const double wh = std::min(1.0, qpair / wg);
        QEval eg = q_eval(bg, std::clamp(1.0 - wg, 0.0, 1.0), ms);
        QEval eh = q_eval(bh, std::clamp(1.0 - wh, 0.0, 1.0), ms);
        const double v = eg.value * eh.value;
        if (v > best_val) {
          best_val = v;
          best_g = std::move(eg);
          best_h = std::move(eh);
        }
        return v;
      };
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double lo = 0.0;
      double hi = tmax;
      double c = hi - invphi * (hi - lo);
      double d = lo + invphi * (hi - lo);
      double fc = eval(c);
      double fd = eval(d);
      const double width_tol = std::max(1e-7, 1e-7 * tmax);
      for (int it = 0; it < 80 && hi - lo > width_tol; ++it) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - invphi * (hi - lo);
          fc = eval(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + invphi * (hi - lo);
          fd = eval(d);
        }
      }
      if (best_val > cur + 1e-15) {
        bg.states = std::move(best_g.states);
        bh.states = std::move(best_h.states);
      }
    }
  }
}

std::vector<PureState> assemble_full_states(const std::vector<Block>& blocks,
                                            int n) {
  const int count = 1 << n;
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int x = 0; x < count; ++x) {
    std::vector<PureState> parts;
    parts.reserve(blocks.size());
    for (const auto& b : blocks) {
      parts.push_back(b.states[static_cast<std::size_t>(sub_message(x, n, b))]);
    }
    out.push_back(tensor(parts));
  }
  return out;
}

}  // namespace

SeesawReport seesaw(const SeesawConfig& config) {
  if (config.restarts < 1) {
    throw std::invalid_argument("need at least one restart");
  }
  if (config.max_iters < 1) {
    throw std::invalid_argument("need at least one iteration");
  }
  if (!(config.tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  SeesawReport report;
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(r)));
    std::vector<Block> blocks = init_blocks(config, rng);
    std::vector<BinaryMeasurement> ms = init_measurements(config.n, rng);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(config.max_iters));
    double prev = -1.0;
    bool conv = false;
    int used = config.max_iters;
    for (int it = 1; it <= config.max_iters; ++it) {
      measurement_step(blocks, ms, config.n);
      state_step(blocks, ms, config.omega);
      if (blocks.size() > 1) rebalance(blocks, ms, config.omega);
      const double val = objective(blocks, ms);
      trace.push_back(val);
      if (it >= 2 && val - prev <= config.tol * std::max(val, 1e-12)) {
        conv = true;
        used = it;
        break;
      }
      prev = val;
    }
    const double final_val = trace.back();
    report.per_restart_values.push_back(final_val);
    if (final_val > best) {
      best = final_val;
      report.best_value = final_val;
      report.converged = conv;
      report.iterations_used = used;
      report.best_trace = trace;
      report.best_states = assemble_full_states(blocks, config.n);
      report.best_measurements = ms;
    }
  }
  return report;
}

}  // namespace dsd
