#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "botsim/rng.hpp"
#include "botsim/trust.hpp"

using namespace botsim;
using namespace botsim::trust;

namespace {

TrustParams params(TrustModel m, double thr, std::uint32_t min_exp) {
  TrustParams p;
  p.model = m;
  p.threshold = thr;
  p.min_experiences = min_exp;
  return p;
}

// Independent oracle: recount the whole outcome sequence from scratch.
EvidenceRecord recount(const std::vector<Outcome>& seq, std::size_t upto) {
  EvidenceRecord ev;
  for (std::size_t i = 0; i < upto; ++i) {
    if (seq[i] == Outcome::Positive)
      ++ev.positive;
    else
      ++ev.negative;
  }
  return ev;
}

}  // namespace

TEST_CASE("record_experience increments exactly one counter") {
  CHECK(record_experience({0, 0}, Outcome::Positive) == EvidenceRecord{1, 0});
  CHECK(record_experience({0, 0}, Outcome::Negative) == EvidenceRecord{0, 1});
  CHECK(record_experience({4, 2}, Outcome::Negative) == EvidenceRecord{4, 3});
}

TEST_CASE("ebay score is positives minus negatives") {
  CHECK(ebay_score({0, 0}) == 0);
  CHECK(ebay_score({5, 2}) == 3);
  CHECK(ebay_score({1, 4}) == -3);
}

TEST_CASE("beta expectation is the posterior mean") {
  CHECK(beta_expectation({0, 0}) == doctest::Approx(0.5));
  CHECK(beta_expectation({8, 2}) == doctest::Approx(0.75));
  CHECK(beta_expectation({0, 10}) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("subjective logic opinion mapping") {
  auto op = sl_opinion({0, 0}, 0.5);
  CHECK(op.belief == doctest::Approx(0.0));
  CHECK(op.disbelief == doctest::Approx(0.0));
  CHECK(op.uncertainty == doctest::Approx(1.0));

  op = sl_opinion({2, 2}, 0.5);
  CHECK(op.belief == doctest::Approx(1.0 / 3.0));
  CHECK(op.disbelief == doctest::Approx(1.0 / 3.0));
  CHECK(op.uncertainty == doctest::Approx(1.0 / 3.0));

  op = sl_opinion({8, 0}, 0.5);
  CHECK(op.belief == doctest::Approx(0.8));
  CHECK(op.disbelief == doctest::Approx(0.0));
  CHECK(op.uncertainty == doctest::Approx(0.2));
}

TEST_CASE("subjective logic expectation") {
  CHECK(sl_expectation({0, 0, 1, 0.5}) == doctest::Approx(0.5));
  CHECK(sl_expectation({0.8, 0, 0.2, 0.5}) == doctest::Approx(0.9));
  CHECK(sl_expectation({0, 0.8, 0.2, 0.5}) == doctest::Approx(0.1));
}

TEST_CASE("certain trust expectation") {
  CHECK(certain_trust_expectation({0, 0}, 10, 0.5) == doctest::Approx(0.5));
  CHECK(certain_trust_expectation({0, 5}, 10, 0.5) == doctest::Approx(0.25));
  CHECK(certain_trust_expectation({10, 0}, 10, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("certain trust boundary identities") {
  for (std::uint32_t N : {1u, 3u, 10u, 25u}) {
    for (double f : {0.0, 0.3, 0.5, 1.0}) {
      CHECK(certain_trust_expectation({0, 0}, N, f) == doctest::Approx(f));
      // once total >= N the prior is fully washed out
      for (std::uint32_t p = 0; p <= 2 * N; ++p) {
        for (std::uint32_t n = 0; n <= 2 * N; ++n) {
          if (p + n < N || p + n == 0) continue;
          const double t = static_cast<double>(p) / (p + n);
          CHECK(certain_trust_expectation({p, n}, N, f) == doctest::Approx(t));
        }
      }
    }
  }
}

TEST_CASE("opinion components sum to one and stay in range") {
  for (std::uint32_t p = 0; p <= 50; ++p) {
    for (std::uint32_t n = 0; n <= 50; ++n) {
      const auto op = sl_opinion({p, n}, 0.5);
      CHECK(std::abs(op.belief + op.disbelief + op.uncertainty - 1.0) < 1e-12);
      for (double c : {op.belief, op.disbelief, op.uncertainty}) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
      }
    }
  }
}

TEST_CASE("sl expectation with base rate 1/2 equals beta expectation") {
  for (std::uint32_t p = 0; p <= 50; ++p) {
    for (std::uint32_t n = 0; n <= 50; ++n) {
      const double sl = sl_expectation(sl_opinion({p, n}, 0.5));
      const double beta = beta_expectation({p, n});
      CHECK(std::abs(sl - beta) < 1e-12);
    }
  }
}

TEST_CASE("beta expectation is monotone in the evidence") {
  for (std::uint32_t p = 0; p < 30; ++p) {
    for (std::uint32_t n = 0; n < 30; ++n) {
      CHECK(beta_expectation({p + 1, n}) > beta_expectation({p, n}));
      CHECK(beta_expectation({p, n + 1}) < beta_expectation({p, n}));
    }
  }
}

TEST_CASE("is_untrusted examples") {
  auto v = is_untrusted({0, 1}, params(TrustModel::Beta, 0.25, 3));
  CHECK_FALSE(v.untrusted);  // min_experiences gate

  v = is_untrusted({0, 5}, params(TrustModel::Beta, 0.25, 3));
  CHECK(v.score == doctest::Approx(1.0 / 7.0));
  CHECK(v.untrusted);

  v = is_untrusted({1, 4}, params(TrustModel::Ebay, -3.0, 3));
  CHECK(v.score == doctest::Approx(-3.0));
  CHECK(v.untrusted);
}

TEST_CASE("untrusted never fires below the experience floor") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto model = static_cast<TrustModel>(rng.below(4));
    auto p = default_params(model);
    p.min_experiences = 1 + static_cast<std::uint32_t>(rng.below(10));
    EvidenceRecord ev;
    for (int step = 0; step < 30; ++step) {
      ev = record_experience(
          ev, rng.chance(0.7) ? Outcome::Negative : Outcome::Positive);
      const auto v = is_untrusted(ev, p);
      if (ev.total() < p.min_experiences) CHECK_FALSE(v.untrusted);
    }
  }
}

TEST_CASE("model scores are pure functions of the evidence") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    EvidenceRecord ev{static_cast<std::uint32_t>(rng.below(100)),
                      static_cast<std::uint32_t>(rng.below(100))};
    for (int m = 0; m < 4; ++m) {
      const auto p = default_params(static_cast<TrustModel>(m));
      const double a = model_score(ev, p);
      const double b = model_score(ev, p);
      CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
    }
  }
}

TEST_CASE("incremental evidence matches a full recount at every step") {
  Rng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t len = 1 + rng.below(100);
    std::vector<Outcome> seq;
    for (std::size_t i = 0; i < len; ++i)
      seq.push_back(rng.chance(0.5) ? Outcome::Positive : Outcome::Negative);
    const auto p = default_params(static_cast<TrustModel>(rng.below(4)));

    EvidenceRecord incremental;
    for (std::size_t i = 0; i < len; ++i) {
      incremental = record_experience(incremental, seq[i]);
      const auto oracle = recount(seq, i + 1);
      REQUIRE(incremental == oracle);
      const auto v1 = is_untrusted(incremental, p);
      const auto v2 = is_untrusted(oracle, p);
      REQUIRE(v1.untrusted == v2.untrusted);
      REQUIRE(v1.score == v2.score);
    }
  }
}
