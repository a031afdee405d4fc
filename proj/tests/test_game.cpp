#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dsd/bounds.hpp"
#include "dsd/constructions.hpp"
#include "dsd/game.hpp"

using namespace dsd;

namespace {

Strategy uniform_strategy(int n, double omega) {
  std::vector<BinaryMeasurement> ms(static_cast<std::size_t>(n),
                                    plus_measurement());
  return Strategy(entangled_family(n, omega), std::move(ms));
}

Strategy separable_strategy(int n, double omega) {
  std::vector<BinaryMeasurement> ms(static_cast<std::size_t>(n),
                                    plus_measurement());
  return Strategy(separable_family(n, omega), std::move(ms));
}

}  // namespace

// Independently derived reference: uniform signal states read out with
// |+>/|-> attain the unrestricted ceiling.
namespace ref {
constexpr double p_ent_03_2 = 0.7968626966596885885752423630458890638565;
constexpr double p_sep_04_3 = 0.6436126893905818601257081853302253826958;
}  // namespace ref

TEST_CASE("strategy validation") {
  auto states = entangled_family(2, 0.3);
  std::vector<BinaryMeasurement> ms(2, plus_measurement());
  CHECK_NOTHROW(Strategy(states, ms));
  // Wrong number of states for the announced parties.
  std::vector<PureState> short_states(states.begin(), states.begin() + 3);
  CHECK_THROWS_AS(Strategy(short_states, ms), std::invalid_argument);
  // States whose party count disagrees with the measurement list.
  std::vector<BinaryMeasurement> three(3, plus_measurement());
  CHECK_THROWS_AS(Strategy(states, three), std::invalid_argument);
}

TEST_CASE("born success of the uniform construction") {
  CHECK(born_success(uniform_strategy(2, 0.3)) ==
        doctest::Approx(ref::p_ent_03_2).epsilon(1e-13));
  // Matches the closed form across parties and budgets, including the
  // saturation region where the ceiling is exactly 1.
  for (int n = 1; n <= 4; ++n) {
    const double sat = 1.0 - std::ldexp(1.0, -n);
    for (int i = 0; i <= 10; ++i) {
      const double w = sat * i / 10.0;
      CHECK(std::abs(born_success(uniform_strategy(n, w)) - p_ent(w, n)) <
            1e-12);
    }
  }
  // Zero budget: all states are the vacuum, success is pure guessing.
  CHECK(born_success(uniform_strategy(3, 0.0)) ==
        doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("born success of the separable construction") {
  CHECK(born_success(separable_strategy(3, 0.4)) ==
        doctest::Approx(ref::p_sep_04_3).epsilon(1e-13));
  for (int n = 1; n <= 4; ++n) {
    const double sat = 1.0 - std::ldexp(1.0, -n);
    for (int i = 0; i <= 10; ++i) {
      const double w = sat * i / 10.0;
      CHECK(std::abs(born_success(separable_strategy(n, w)) - p_sep(w, n)) <
            1e-12);
    }
  }
}

TEST_CASE("hybrid constructions attain the partition bound value") {
  const double w = 0.75;
  StrategySpec spec = StrategySpec::balanced(4, w, PartitionSpec({2, 2}));
  std::vector<BinaryMeasurement> ms(4, plus_measurement());
  const double got = born_success(Strategy(hybrid_family(spec), ms));
  CHECK(got == doctest::Approx(p_ent(0.5, 2) * p_ent(0.5, 2)).epsilon(1e-12));
}

TEST_CASE("success is invariant under relabeling parties") {
  // Permuting parties, message bits, and measurements together leaves the
  // score unchanged; with identical measurements it suffices to permute
  // states and their message indices.
  const int n = 3;
  const double w = 0.45;
  auto family = entangled_family(n, w);
  std::vector<int> perm{2, 0, 1};
  std::vector<PureState> permuted_states;
  permuted_states.reserve(family.size());
  for (int idx = 0; idx < 8; ++idx) {
    // Message whose permuted bits give idx.
    MessageVector src(3);
    const MessageVector dst = message_from_index(idx, n);
    for (int i = 0; i < n; ++i) {
      src[static_cast<std::size_t>(i)] =
          dst[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    permuted_states.push_back(
        permute_parties(family[static_cast<std::size_t>(message_index(src))],
                        perm));
  }
  std::vector<BinaryMeasurement> ms(3, plus_measurement());
  const double base = born_success(Strategy(family, ms));
  const double after = born_success(Strategy(permuted_states, ms));
  CHECK(after == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("noisy success interpolates linearly") {
  Strategy s = uniform_strategy(2, 0.3);
  const double clean = born_success(s);
  CHECK(noisy_success(s, NoiseModel(1.0)) ==
        doctest::Approx(clean).epsilon(1e-13));
  // Fully mixed input: each projective local element has trace 1, so the
  // guess probability is 1/2^n per message.
  CHECK(noisy_success(s, NoiseModel(0.0)) ==
        doctest::Approx(0.25).epsilon(1e-13));
  const double mid = noisy_success(s, NoiseModel(0.6));
  CHECK(mid == doctest::Approx(0.6 * clean + 0.4 * 0.25).epsilon(1e-13));
  CHECK_THROWS_AS(NoiseModel(1.5), std::domain_error);
  CHECK_THROWS_AS(NoiseModel(-0.1), std::domain_error);
}

TEST_CASE("critical visibility equalizes noisy and separable success") {
  for (int n : {2, 3}) {
    const double sat = 1.0 - std::ldexp(1.0, -n);
    for (double frac : {0.2, 0.5, 0.8}) {
      const double w = frac * sat;
      const double nu = nu_crit(w, n);
      const double noisy = noisy_success(uniform_strategy(n, w), NoiseModel(nu));
      CHECK(std::abs(noisy - p_sep(w, n)) < 1e-10);
    }
  }
}

TEST_CASE("single-excitation weight scan") {
  // The best weight is omega/3, where the adjustable family becomes the
  // uniform one.
  for (double w : {0.1, 0.3, 0.6}) {
    ScanAResult res = scan_a(w);
    CHECK(std::abs(res.a_star - w / 3.0) < 1e-6);
    CHECK(res.p_star == doctest::Approx(p_ent(w, 2)).epsilon(1e-10));
  }
  ScanAResult zero = scan_a(0.0);
  CHECK(zero.a_star == 0.0);
  CHECK(zero.p_star == doctest::Approx(0.25).epsilon(1e-13));
  // The scan never beats the ceiling and never loses to the endpoints.
  ScanAResult res = scan_a(0.5, 200);
  CHECK(res.p_star <= p_ent(0.5, 2) + 1e-12);
  std::vector<BinaryMeasurement> ms(2, plus_measurement());
  std::vector<PureState> ends;
  for (int idx = 0; idx < 4; ++idx) {
    ends.push_back(bipartite_state(message_from_index(idx, 2), 0.5, 0.0));
  }
  CHECK(res.p_star >= born_success(Strategy(ends, ms)) - 1e-12);
  CHECK_THROWS_AS(scan_a(1.2), std::domain_error);
  CHECK_THROWS_AS(scan_a(0.3, 2), std::invalid_argument);
}

TEST_CASE("born success with mismatched dimensions throws") {
  auto states = entangled_family(2, 0.3);
  Matrix big = Matrix::Identity(4, 4);
  Matrix zero = Matrix::Zero(4, 4);
  CHECK_THROWS_AS(Strategy(states, {BinaryMeasurement(HermitianOp(big),
                                                      HermitianOp(zero)),
                                    plus_measurement()}),
                  std::invalid_argument);
}
