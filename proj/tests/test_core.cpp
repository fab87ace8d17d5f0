#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tropreg/core.hpp"

using namespace tropreg;

TEST_CASE("extended reals form a semiring with absorbing bottom") {
  const ExtReal samples[] = {ExtReal::bottom(), -2.5, -1.0, 0.0, 0.75, 3.0};
  for (auto a : samples) {
    CHECK((a + ExtReal::bottom()).is_bottom());
    CHECK((ExtReal::bottom() + a).is_bottom());
    CHECK(oplus(ExtReal::bottom(), a) == a);
    CHECK(a + ExtReal(0.0) == a);
    for (auto b : samples) {
      CHECK(oplus(a, b) == oplus(b, a));
      CHECK(a + b == b + a);
      for (auto c : samples) {
        CHECK(oplus(oplus(a, b), c) == oplus(a, oplus(b, c)));
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + oplus(b, c) == oplus(a + b, a + c));
      }
    }
  }
  CHECK(ExtReal::bottom().str() == "-inf");
  CHECK(ExtReal(0.1).str() == "0.1");
}

TEST_CASE("zero-column condition") {
  auto ok = check_zc(fx::from_mat({{0, -1}, {-2, 0}}), {0, 1});
  CHECK(ok.ok);
  auto bad = check_zc(fx::from_mat({{0, fx::NEG}, {fx::NEG, fx::NEG}}), {0, 1});
  CHECK_FALSE(bad.ok);
  CHECK(bad.bad_rows == std::vector<Index>{1});
  CHECK(bad.bad_cols == std::vector<Index>{1});
  auto z = Kernel::banded_uniform(IndexSet::integers(), 0.0, {}, KernelTail::minus_infinity());
  CHECK(check_zc(z, {-20, 20}).ok);
  auto hole = Kernel::banded(IndexSet::integers(), 2, {0.0, ExtReal::bottom()}, 0, {}, KernelTail::minus_infinity());
  auto r = check_zc(hole, {-3, 3});
  CHECK_FALSE(r.ok);
  CHECK(r.bad_rows == std::vector<Index>{-3, -1, 1, 3});
}

TEST_CASE("tightness condition and envelopes") {
  auto lin = Kernel::banded_uniform(IndexSet::integers(), 0.0, {}, KernelTail::linear(1, 0));
  auto t = check_tc(lin);
  CHECK(t.holds);
  REQUIRE(t.envelope.size() == 3);
  for (size_t m = 1; m <= 3; ++m) CHECK(t.envelope[m - 1] == ExtReal(-static_cast<double>(m)));

  auto ce = fx::ce();
  auto c = check_tc(ce);
  CHECK_FALSE(c.holds);
  REQUIRE(c.profile.size() == 4);
  for (size_t m = 1; m <= 4; ++m) {
    CHECK(c.profile[m - 1] == ExtReal(-1.0 / static_cast<double>(m)));
    // the supremum over all distances >= m is the limit 0
    CHECK(c.envelope[m - 1] == ExtReal(0.0));
  }
  CHECK(check_tc(fx::k2()).holds);
}

TEST_CASE("banded entries, transpose and transforms") {
  // period 2, one off-diagonal offset on each side
  auto k = Kernel::banded(IndexSet::integers(), 2, {0.0, -0.5}, 1, {{-1.0, -2.0}, {-3.0, -4.0}},
                          KernelTail::power(1, 2));
  CHECK(k(0, 0) == ExtReal(0.0));
  CHECK(k(1, 1) == ExtReal(-0.5));
  CHECK(k(-1, -1) == ExtReal(-0.5));
  CHECK(k(2, 1) == ExtReal(-1.0));
  CHECK(k(3, 2) == ExtReal(-2.0));
  CHECK(k(2, 3) == ExtReal(-3.0));
  CHECK(k(0, 3) == ExtReal(-9.0));
  auto t = k.transpose();
  for (Index x = -5; x <= 5; ++x)
    for (Index y = -5; y <= 5; ++y) CHECK(t(x, y) == k(y, x));
  CHECK(k.envelope(1) == ExtReal(-1.0));
  CHECK(k.envelope(2) == ExtReal(-4.0));

  Func phi = Func::from_values(-1, {0.25, -0.5, 1.0});
  auto H = Bijection::transposition(0, 1);
  auto c = Kernel::transformed(k, H, Bijection::identity(), phi, Func::zero());
  for (Index x = -4; x <= 4; ++x)
    for (Index y = -4; y <= 4; ++y) CHECK(c(x, y) == k(H(x), y) - phi(x));
  for (Index m = 0; m <= 4; ++m) {
    ExtReal s = ExtReal::bottom();
    for (Index x = -12; x <= 12; ++x)
      for (Index y = -12; y <= 12; ++y)
        if (IndexSet::distance(x, y) >= m) s = oplus(s, c(x, y));
    CHECK(s <= c.envelope(m));
  }
  auto ct = c.transpose();
  for (Index x = -4; x <= 4; ++x)
    for (Index y = -4; y <= 4; ++y) CHECK(ct(x, y) == c(y, x));
}

TEST_CASE("seminorm on windows") {
  CHECK(seminorm_01(Func::constant(1.0), 1, {-3, 3}) == 0.0);
  CHECK(seminorm_01(Func::constant(1.0), 2, {-3, 3}) == 0.0);
  Func s = Func::from_values(0, {0, 1, 0});
  // oracle: enumerate all permutations of {0,1,2} moving points by at most 1
  double best = 0.0;
  std::vector<int> p{0, 1, 2};
  do {
    bool ok = true;
    double sum = 0.0;
    for (int x = 0; x < 3; ++x) {
      ok = ok && std::abs(p[static_cast<size_t>(x)] - x) <= 1;
      sum += std::abs(s(p[static_cast<size_t>(x)]) - s(x));
    }
    if (ok) best = std::max(best, sum);
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(best == 2.0);
  CHECK(seminorm_01(s, 1, {0, 2}) == best);
  CHECK_THROWS_AS(seminorm_01(s, 2, {0, 2}), DegenerateWindow);

  std::mt19937_64 rng(7);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> v;
    for (int i = 0; i < 9; ++i) v.push_back(oracle::dyadic(rng, -2, 2));
    Func f = Func::from_values(-4, v);
    Window w{-8, 8};
    double l1 = f.l1_bound(IndexSet::integers());
    for (Index M = 1; M <= 3; ++M) {
      double n = seminorm_01(f, M, w);
      CHECK(n <= 2.0 * l1);
      CHECK(n >= 0.0);
      CHECK(seminorm_01_prime(f, M, w) >= 0.0);
    }
    // invariance under a windowed relabelling
    Bijection F = Bijection::cycle({-2, 0, 1});
    Index R = rho(F);
    Func fF = f.compose(F);
    for (Index M = 1; M <= 2; ++M)
      CHECK(seminorm_01(fF, M, {-6, 6}) <= seminorm_01(f, M + R, {-8, 8}) + seminorm_01(f, R, {-8, 8}));
  }
}

TEST_CASE("distance between bijections") {
  CHECK(rho(Bijection::identity(), Bijection::identity()) == 0);
  CHECK(rho(Bijection::transposition(0, 1)) == 1);
  CHECK(rho(Bijection::cycle({-3, 2, 5})) == 8);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    auto random_bij = [&] {
      std::uniform_int_distribution<Index> lo(-10, 10), len(1, 6);
      Index a = lo(rng);
      std::vector<Index> img(static_cast<size_t>(len(rng)));
      std::iota(img.begin(), img.end(), a);
      std::shuffle(img.begin(), img.end(), rng);
      return Bijection({a, a + static_cast<Index>(img.size()) - 1}, img);
    };
    Bijection F = random_bij(), G = random_bij();
    Bijection FG = compose(F, G);
    CHECK(rho(FG) <= rho(F) + rho(G));
    CHECK(compose(F, F.inverse()).is_identity());
    CHECK(rho(F, G) == rho(G, F));
  }
}

TEST_CASE("sequence space chain") {
  auto Z = IndexSet::integers();
  std::vector<Func> fs = {Func::zero(), Func::constant(2.0), Func::from_values(-2, {1, -1, 3}),
                          Func({0, -1}, {}, FuncTail::power_decay(1.0, 0.5)),
                          Func({0, -1}, {}, FuncTail::power_decay(-3.0, 2.0))};
  for (auto& f : fs) {
    if (f.in_space(Z, Space::L1)) CHECK(f.in_space(Z, Space::L01));
    if (f.in_space(Z, Space::L01)) CHECK(f.in_space(Z, Space::L0));
    if (f.in_space(Z, Space::L0)) CHECK(f.in_space(Z, Space::Linf));
  }
  CHECK_FALSE(fs[1].in_space(Z, Space::L1));
  CHECK(fs[4].in_space(Z, Space::L1));
  CHECK_FALSE(fs[3].in_space(Z, Space::L1));
}
