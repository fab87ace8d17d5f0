#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tropreg/conjugacy.hpp"

using namespace tropreg;

namespace {

std::vector<double> vals(const CertifiedFunc& c) {
  std::vector<double> v;
  for (auto& x : c.values) v.push_back(x.value.value());
  return v;
}

Func as_func(const oracle::Vec& v) { return Func::from_values(0, v); }

}  // namespace

TEST_CASE("conjugacy on small kernels") {
  auto k = fx::from_mat({{0, -1}, {-2, 0}});
  auto bf = apply_B(k, Func::zero(), {0, 1});
  CHECK(vals(bf) == std::vector<double>{0, 0});
  CHECK(bf.all_exact());
  CHECK(bf.at(0).argmax == std::vector<Index>{0});
  CHECK(bf.at(1).argmax == std::vector<Index>{1});
  CHECK(vals(apply_BT(k, Func::zero(), {0, 1})) == std::vector<double>{0, 0});

  auto k3 = fx::from_mat({{0, 0, -1}, {-1, 0, -1}, {-1, -1, 0}});
  auto b3 = apply_B(k3, as_func({1, 0, 0}), {0, 2});
  CHECK(vals(b3) == oracle::apply_B(fx::to_mat(k3), {1, 0, 0}));
  CHECK(vals(b3) == std::vector<double>{0, 0, 0});

  auto f = apply_BT(fx::k2(), as_func({0, -0.25, 0}), {0, 2});
  CHECK(vals(f) == std::vector<double>{0, 0.25, 0});
  CHECK(vals(f) == oracle::apply_BT(fx::to_mat(fx::k2()), {0, -0.25, 0}));
}

TEST_CASE("conjugacy agrees with the dense oracle") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 300; ++it) {
    size_t n = 1 + it % 7;
    auto m = oracle::random_matrix(rng, n, -3, 3, 0.25);
    for (size_t x = 0; x < n; ++x) m[x][x] = oracle::dyadic(rng, -1, 1);
    auto k = fx::from_mat(m);
    oracle::Vec f, f2;
    for (size_t i = 0; i < n; ++i) {
      f.push_back(oracle::dyadic(rng, -2, 2));
      f2.push_back(f.back() + oracle::dyadic(rng, 0, 1));
    }
    Window w{0, static_cast<Index>(n) - 1};
    auto b = apply_B(k, as_func(f), w);
    CHECK(b.all_exact());
    CHECK(vals(b) == oracle::apply_B(m, f));
    auto bt = apply_BT(k, as_func(f), w);
    CHECK(vals(bt) == oracle::apply_BT(m, f));
    CHECK(vals(bt) == vals(apply_B(k.transpose(), as_func(f), w)));
    // antitone
    auto b2 = apply_B(k, as_func(f2), w);
    for (size_t x = 0; x < n; ++x) CHECK(b2.values[x].value <= b.values[x].value);
    // g >= B Bᵀ g
    auto bbt = apply_B(k, bt, w);
    for (size_t x = 0; x < n; ++x) CHECK(bbt.values[x].value <= ExtReal(f[x]));
    // B Bᵀ B = B
    auto g = galois_check(k, as_func(f), w);
    CHECK(g.status == Verdict::True);
    auto fb = oracle::apply_B(m, f);
    CHECK(oracle::apply_B(m, oracle::apply_BT(m, fb)) == fb);
  }
  auto k = fx::from_mat({{0, -1}, {-2, 0}});
  CHECK(galois_check(k, as_func({5, -3}), {0, 1}).status == Verdict::True);
}

TEST_CASE("counter-example tail is certified but never exact") {
  auto ce = fx::ce();
  Func h({0, -1}, {}, FuncTail::power_decay(1.0, 2.0));
  Window w{0, 200};
  auto bh = apply_B(ce, h, w);
  for (Index x = w.lo; x <= w.hi; ++x) {
    const auto& v = bh.at(x);
    CHECK_FALSE(v.exact());
    // the supremum 0 is a limit, not attained: it sits inside the certified interval
    CHECK(v.value.value() < 0.0);
    CHECK(v.value.value() + v.eps == 0.0);
    // far candidate y = 401 alone already reaches within this distance of 0
    double far = 1.0 / static_cast<double>(401 - x) + 1.0 / (402.0 * 402.0);
    CHECK(v.eps <= far);
  }
  // brute force over a much larger range never beats value + eps
  for (Index x : {0, 57, 200}) {
    double best = oracle::NEG;
    for (Index y = 0; y < 20000; ++y) best = std::max(best, ce(x, y).value() - h(y));
    CHECK(best <= bh.at(x).value.value() + bh.at(x).eps);
    CHECK(best >= bh.at(x).value.value());
  }
  CHECK(galois_check(ce, Func::zero(), {0, 20}).status == Verdict::Inconclusive);
}

TEST_CASE("within-eps bounds on tight banded kernels") {
  std::mt19937_64 rng(17);
  auto k = Kernel::banded(IndexSet::integers(), 2, {0.0, -0.25}, 2, {{-2, -1}, {-0.5, -1}, {-0.75, -1}, {-3, -2}},
                          KernelTail::power(0.5, 1.5));
  for (int it = 0; it < 20; ++it) {
    std::vector<double> v;
    for (int i = 0; i < 11; ++i) v.push_back(oracle::dyadic(rng, -3, 3));
    Func f = Func::from_values(-5, v, FuncTail::constant(oracle::dyadic(rng, -1, 1)));
    Window w{-4, 4};
    ConjugacyOptions opt{1.25};
    auto b = apply_B(k, f, w, opt);
    for (Index x = w.lo; x <= w.hi; ++x) {
      double best = oracle::NEG;
      for (Index y = -300; y <= 300; ++y) best = std::max(best, k(x, y).value() - f(y));
      const auto& c = b.at(x);
      CHECK(best >= c.value.value());
      CHECK(best <= c.value.value() + c.eps);
      if (c.exact()) CHECK(best == c.value.value());
    }
  }
}

TEST_CASE("solving Bf = g") {
  auto k = fx::from_mat({{0, -1}, {-2, 0}});
  auto r = solve_equation(k, Func::zero(), {0, 1});
  CHECK(r.status == Verdict::True);
  CHECK(vals(r.candidate) == std::vector<double>{0, 0});

  auto z = fx::from_mat({{0, 0}, {0, 0}});
  auto n = solve_equation(z, as_func({0, -1}), {0, 1});
  CHECK(vals(n.candidate) == std::vector<double>{1, 1});
  CHECK(n.status == Verdict::False);
  REQUIRE(n.witness);
  CHECK(*n.witness == 0);

  auto s = solve_equation(fx::k2(), as_func({0, -0.25, 0}), {0, 2});
  CHECK(s.status == Verdict::True);
  CHECK(vals(s.candidate) == std::vector<double>{0, 0.25, 0});
  CHECK(s.residual == 0.0);
}
