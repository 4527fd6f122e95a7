#include "tokprune/core.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

using namespace tokprune;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return Errc::invalid_argument;
}

TokenMatrix random_tokens(std::mt19937_64& gen, TokenIndex n, TokenIndex d) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> data(static_cast<std::size_t>(n) * d);
  for (double& v : data) v = dist(gen);
  return TokenMatrix(std::move(data), n, d);
}

}  // namespace

TEST_CASE("cosine matches hand-computed values") {
  const std::vector<double> u = {1.0, 2.0, 2.0};
  const std::vector<double> v = {2.0, 1.0, 2.0};
  // dot = 8, both norms exactly 3, so the quotient is exactly 8/9.
  CHECK(cosine(u, v) == 8.0 / 9.0);
  CHECK(cosine(u, u) == 1.0);

  const std::vector<double> e0 = {1.0, 0.0};
  const std::vector<double> e1 = {0.0, 1.0};
  CHECK(cosine(e0, e1) == 0.0);
  const std::vector<double> neg = {-1.0, 0.0};
  CHECK(cosine(e0, neg) == -1.0);
}

TEST_CASE("cosine is clamped and scale invariant") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 50.0);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> u(6), v(6);
    for (auto& x : u) x = dist(gen);
    for (auto& x : v) x = dist(gen);
    const double c = cosine(u, v);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);

    std::vector<double> su = u;
    const double s = scale(gen);
    for (auto& x : su) x *= s;
    CHECK(cosine(su, v) == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("dot kernel keeps its fixed accumulation order") {
  // Mirror the kernel's eight independent accumulator chains in plain
  // scalar code.  Any deviation -- reassociation, fused multiply-adds, or a
  // dispatched variant with different rounding -- breaks the bitwise match,
  // and with it every frozen selection in this suite.
  std::mt19937_64 gen(13);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 4096);
  for (int it = 0; it < 30; ++it) {
    const std::size_t n = len(gen);
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = dist(gen);
    for (auto& x : b) x = dist(gen);

    double s[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      for (std::size_t j = 0; j < 8; ++j) s[j] += a[i + j] * b[i + j];
    }
    for (; i < n; ++i) s[0] += a[i] * b[i];
    const double expected =
        ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7]));
    CHECK(detail::dot(a, b) == expected);  // bitwise
  }
}

TEST_CASE("cosine argument order does not change the result") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> u(7), v(7);
    for (auto& x : u) x = dist(gen);
    for (auto& x : v) x = dist(gen);
    CHECK(cosine(u, v) == cosine(v, u));  // bitwise
  }
}

TEST_CASE("cosine rejects degenerate input") {
  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> b = {1.0, 0.0, 0.0};
  const std::vector<double> zero = {0.0, 0.0};
  const std::vector<double> empty;
  CHECK(code_of([&] { cosine(a, b); }) == Errc::dimension_mismatch);
  CHECK(code_of([&] { cosine(empty, empty); }) == Errc::dimension_mismatch);
  CHECK(code_of([&] { cosine(a, zero); }) == Errc::zero_norm_vector);
  CHECK(code_of([&] { cosine(zero, a); }) == Errc::zero_norm_vector);
}

TEST_CASE("detail::dot agrees with the naive sum on exact inputs") {
  // Integer-valued doubles below 2^50 add exactly, so any summation order
  // gives the same answer and the blocked kernel must match it.
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> small(-8, 8);
  for (int len : {1, 2, 3, 4, 5, 7, 8, 13}) {
    std::vector<double> u(len), v(len);
    double naive = 0.0;
    for (int i = 0; i < len; ++i) {
      u[i] = small(gen);
      v[i] = small(gen);
      naive += u[i] * v[i];
    }
    CHECK(detail::dot(u, v) == naive);
  }
  CHECK(detail::norm(std::vector<double>{3.0, 4.0}) == 5.0);
}

TEST_CASE("TokenMatrix validates shape and values") {
  std::vector<double> data = {1.0, 2.0, 3.0, 4.0};
  const TokenMatrix m(data, 2, 2);
  CHECK(m.count() == 2);
  CHECK(m.dim() == 2);
  CHECK(m.row(1)[0] == 3.0);
  CHECK(m.row(1).size() == 2);

  CHECK(code_of([&] { TokenMatrix(data, 3, 2); }) == Errc::dimension_mismatch);
  CHECK(code_of([&] { TokenMatrix(data, 2, 0); }) == Errc::invalid_argument);
  CHECK(code_of([&] { TokenMatrix(data, -1, 2); }) == Errc::invalid_argument);
  CHECK(code_of([&] { m.row(2); }) == Errc::index_out_of_range);
  CHECK(code_of([&] { m.row(-1); }) == Errc::index_out_of_range);

  std::vector<double> bad = {1.0, std::nan(""), 3.0, 4.0};
  CHECK(code_of([&] { TokenMatrix(bad, 2, 2); }) == Errc::non_finite_value);

  const TokenMatrix empty(std::vector<double>{}, 0, 5);
  CHECK(empty.count() == 0);
  CHECK(empty.dim() == 5);
}

TEST_CASE("SimilarityMatrix stores symmetric pairs with a unit diagonal") {
  SimilarityMatrix sim(3);
  CHECK(sim.size() == 3);
  for (TokenIndex i = 0; i < 3; ++i) CHECK(sim.at(i, i) == 1.0);
  CHECK(sim.at(0, 1) == 0.0);

  sim.set_pair(0, 2, -0.25);
  CHECK(sim.at(0, 2) == -0.25);
  CHECK(sim.at(2, 0) == -0.25);

  sim.set_pair(1, 2, 1.0 + 5e-7);  // slack for round-off survives
  CHECK(code_of([&] { sim.set_pair(0, 1, 1.01); }) == Errc::invalid_argument);
  CHECK(code_of([&] { sim.set_pair(0, 1, -1.01); }) == Errc::invalid_argument);
  CHECK(code_of([&] { sim.set_pair(0, 1, std::nan("")); }) ==
        Errc::invalid_argument);
  CHECK(code_of([&] { sim.set_pair(0, 3, 0.5); }) == Errc::index_out_of_range);
  CHECK(code_of([&] { sim.at(3, 0); }) == Errc::index_out_of_range);
  CHECK(code_of([&] { SimilarityMatrix(-1); }) == Errc::invalid_argument);
}

TEST_CASE("pairwise_similarities of orthonormal rows is the identity") {
  std::vector<double> data = {1.0, 0.0, 0.0,   //
                              0.0, 1.0, 0.0,   //
                              0.0, 0.0, 1.0};
  const SimilarityMatrix sim = pairwise_similarities(TokenMatrix(data, 3, 3));
  for (TokenIndex i = 0; i < 3; ++i) {
    for (TokenIndex j = 0; j < 3; ++j) {
      CHECK(sim.at(i, j) == (i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("pairwise_similarities matches cosine entry by entry") {
  std::mt19937_64 gen(14);
  for (int it = 0; it < 30; ++it) {
    const TokenIndex n = 2 + static_cast<TokenIndex>(gen() % 10);
    const TokenIndex d = 2 + static_cast<TokenIndex>(gen() % 7);
    const TokenMatrix tokens = random_tokens(gen, n, d);
    const SimilarityMatrix sim = pairwise_similarities(tokens);
    for (TokenIndex i = 0; i < n; ++i) {
      CHECK(sim.at(i, i) == 1.0);
      for (TokenIndex j = i + 1; j < n; ++j) {
        CHECK(sim.at(i, j) == cosine(tokens.row(i), tokens.row(j)));  // bitwise
        CHECK(sim.at(i, j) == sim.at(j, i));
      }
    }
  }
}

TEST_CASE("pairwise_similarities names the zero-norm row") {
  std::vector<double> data = {1.0, 0.0, 0.0, 0.0};
  try {
    pairwise_similarities(TokenMatrix(data, 2, 2));
    FAIL("expected zero_norm_vector");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_norm_vector);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("objective_value sums selected weights in stored order") {
  const SaliencyVector w = {0.5, 0.3, 0.2};
  Selection sel;
  sel.indices = {0, 2};
  CHECK(objective_value(w, sel) == 0.5 + 0.2);

  Selection empty;
  CHECK(objective_value(w, empty) == 0.0);

  Selection bad;
  bad.indices = {3};
  CHECK(code_of([&] { objective_value(w, bad); }) == Errc::index_out_of_range);
  bad.indices = {-1};
  CHECK(code_of([&] { objective_value(w, bad); }) == Errc::index_out_of_range);
}

TEST_CASE("objective_value is additive over disjoint selections") {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    const TokenIndex n = 4 + static_cast<TokenIndex>(gen() % 40);
    SaliencyVector w(static_cast<std::size_t>(n));
    for (auto& x : w) x = weight(gen);
    Selection a, b, both;
    for (TokenIndex i = 0; i < n; ++i) {
      switch (gen() % 3) {
        case 0: a.indices.push_back(i); both.indices.push_back(i); break;
        case 1: b.indices.push_back(i); both.indices.push_back(i); break;
        default: break;
      }
    }
    const double split = objective_value(w, a) + objective_value(w, b);
    CHECK(objective_value(w, both) == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("feasibility_violations reports pairs strictly above tau") {
  SimilarityMatrix sim(4);
  sim.set_pair(0, 1, 0.95);
  sim.set_pair(0, 2, 0.9);
  sim.set_pair(1, 3, 0.99);
  Selection sel;
  sel.indices = {3, 0, 1, 2};  // out of order on purpose

  const auto v = feasibility_violations(sim, sel, 0.9);
  REQUIRE(v.size() == 2);
  // Ascending lexicographic (i, j) order with i < j.
  CHECK(v[0].i == 0);
  CHECK(v[0].j == 1);
  CHECK(v[0].cosine == 0.95);
  CHECK(v[1].i == 1);
  CHECK(v[1].j == 3);
  CHECK(v[1].cosine == 0.99);

  // cos == tau is feasible: at tau = 1 even identical tokens pass.
  CHECK(feasibility_violations(sim, sel, 1.0).empty());
  SimilarityMatrix twins(2);
  twins.set_pair(0, 1, 1.0);
  Selection pair;
  pair.indices = {0, 1};
  CHECK(feasibility_violations(twins, pair, 1.0).empty());
  const auto dup = feasibility_violations(twins, pair, 0.9);
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].cosine == 1.0);

  Selection bad;
  bad.indices = {4};
  CHECK(code_of([&] { feasibility_violations(sim, bad, 0.5); }) ==
        Errc::index_out_of_range);
}

TEST_CASE("Selection::feasible_prefix drops the backfilled tail") {
  Selection sel;
  sel.indices = {5, 1, 8, 2};
  sel.budget = 4;
  sel.backfilled = 2;
  const Selection prefix = sel.feasible_prefix();
  CHECK(prefix.indices == std::vector<TokenIndex>{5, 1});
  CHECK(prefix.backfilled == 0);
  CHECK(prefix.budget == 4);
  CHECK(sel.size() == 4);
}

TEST_CASE("errc_name returns stable identifiers") {
  CHECK(std::string(errc_name(Errc::zero_norm_vector)) == "zero_norm_vector");
  CHECK(std::string(errc_name(Errc::bad_magic)) == "bad_magic");
  CHECK(std::string(errc_name(Errc::target_unachievable)) ==
        "target_unachievable");
}
