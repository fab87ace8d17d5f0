#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tropreg/similarity.hpp"

using namespace tropreg;

namespace {

Func as_func(const oracle::Vec& v) { return Func::from_values(0, v); }

Bijection random_perm(std::mt19937_64& rng, Index n) {
  std::vector<Index> p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return Bijection({0, n - 1}, p);
}

Func random_func(std::mt19937_64& rng, Index n) {
  oracle::Vec v;
  for (Index i = 0; i < n; ++i) v.push_back(oracle::dyadic(rng, -3, 3));
  return as_func(v);
}

bool same_entries(const Kernel& a, const Kernel& b, const Window& w) {
  for (Index x = w.lo; x <= w.hi; ++x)
    for (Index y = w.lo; y <= w.hi; ++y)
      if (a(x, y) != b(x, y)) return false;
  return true;
}

}  // namespace

TEST_CASE("applying similarities") {
  auto k2 = fx::k2();
  CHECK(apply_similarity(k2, Similarity::identity()) == k2);
  CHECK(same_entries(apply_similarity(fx::ce(), Similarity::identity()), fx::ce(), {0, 30}));

  oracle::Vec ph{0, -0.25, 0}, ps{0, 0.25, 0};
  auto c = apply_similarity(k2, Similarity::right(Bijection::identity(), as_func(ph), as_func(ps)));
  auto m = fx::to_mat(k2);
  for (size_t x = 0; x < 3; ++x)
    for (size_t y = 0; y < 3; ++y) CHECK(c(Index(x), Index(y)) == ExtReal(m[x][y] - ph[x] - ps[y]));
  CHECK(c(0, 1) == ExtReal(-0.25));
  CHECK(c(1, 0) == ExtReal(-0.75));
  auto sn = is_strongly_normal(c);
  CHECK(sn.ok);
  CHECK(sn.margin == 0.25);

  // rows and columns really move
  auto sw = apply_similarity(k2, Similarity::left(Bijection::transposition(0, 2), Func::zero(), Func::zero()));
  CHECK(sw(0, 0) == k2(2, 0));
  CHECK(sw(2, 1) == k2(0, 1));
}

TEST_CASE("refused similarities") {
  Similarity bad_right = Similarity::right(Bijection::identity(), Func::zero(), Func::zero());
  bad_right.H = Bijection::transposition(0, 1);
  CHECK_THROWS_AS(apply_similarity(fx::k2(), bad_right), SimilarityRefused);
  // constant tail is not summable
  auto s = Similarity::right(Bijection::identity(), Func::constant(1.0), Func::zero(), Space::L1);
  CHECK_THROWS_AS(apply_similarity(fx::ce(), s), SimilarityRefused);
  s.space = Space::L0;
  CHECK_NOTHROW(apply_similarity(fx::ce(), s));
  // tails that cannot be added
  auto a = Similarity::right(Bijection::identity(), Func({0, -1}, {}, FuncTail::power_decay(1, 2)), Func::zero());
  auto b = Similarity::right(Bijection::identity(), Func({0, -1}, {}, FuncTail::power_decay(1, 3)), Func::zero());
  CHECK_THROWS_AS(compose(a, b), SimilarityRefused);
  CHECK_THROWS_AS(apply_similarity(fx::k2(), Similarity::left(Bijection::transposition(0, 5), Func::zero(),
                                                              Func::zero())),
                  SimilarityRefused);
}

TEST_CASE("similarity is an equivalence relation") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    Index n = 2 + it % 6;
    auto k = fx::from_mat(oracle::random_matrix(rng, static_cast<size_t>(n), -4, 4, 0.2));
    Window w{0, n - 1};
    Similarity s{random_perm(rng, n), random_perm(rng, n), random_func(rng, n), random_func(rng, n),
                 SimilarityVariant::TwoSided, Space::L1};
    Similarity t{random_perm(rng, n), random_perm(rng, n), random_func(rng, n), random_func(rng, n),
                 SimilarityVariant::TwoSided, Space::L1};
    auto c = apply_similarity(k, s);
    CHECK(apply_similarity(c, s.inverse()) == k);
    CHECK(apply_similarity(k, compose(s, s.inverse())) == k);
    CHECK(apply_similarity(apply_similarity(k, s), t) == apply_similarity(k, compose(s, t)));
    // direct evaluation of the defining formula
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) CHECK(c(x, y) == k(s.H(x), s.K(y)) - s.phi(x) - s.psi(y));
    // transported bijections stay at finite distance from each other
    auto F = random_perm(rng, n), G = random_perm(rng, n);
    auto tf = compose(compose(s.K, F), s.H.inverse()), tg = compose(compose(s.K, G), s.H.inverse());
    CHECK(rho(tf, tg) <= n - 1);
    CHECK(same_entries(c, apply_similarity(k, s), w));
  }
}

TEST_CASE("normal and strongly normal kernels") {
  auto a = is_strongly_normal(fx::from_mat({{0, -1}, {-2, 0}}));
  CHECK(a.ok);
  CHECK(a.margin == 1.0);
  CHECK(a.margin_attained);

  CHECK(is_normal(fx::k2()).ok);
  auto k2 = is_strongly_normal(fx::k2());
  CHECK_FALSE(k2.ok);
  REQUIRE(k2.offending);
  CHECK(*k2.offending == std::pair<Index, Index>{0, 1});

  auto ce = is_strongly_normal(fx::ce());
  CHECK(ce.ok);
  CHECK(ce.margin == 0.0);
  CHECK_FALSE(ce.margin_attained);
  CHECK(ce.detail.find("margin-zero") != std::string::npos);

  auto off = is_normal(fx::from_mat({{3, 1}, {0, 4}}));
  CHECK_FALSE(off.ok);
  CHECK(off.detail.find("diagonal") != std::string::npos);

  auto lin = Kernel::banded_uniform(IndexSet::integers(), 0.0, {-1, -1}, KernelTail::linear(1, 0));
  auto l = is_strongly_normal(lin);
  CHECK(l.ok);
  CHECK(l.margin == 1.0);
  auto pos = Kernel::banded_uniform(IndexSet::integers(), 0.0, {-1, 0.5}, KernelTail::linear(1, 0));
  CHECK_FALSE(is_normal(pos).ok);
  CHECK(is_strongly_normal(Kernel::dense({{ExtReal(0.0)}})).margin == std::numeric_limits<double>::infinity());
}

TEST_CASE("normalisation of finite kernels") {
  auto r = normalize_finite(fx::from_mat({{3, 1}, {0, 4}}));
  CHECK(r.F.is_identity());
  CHECK(r.value == 7.0);
  CHECK(is_normal(r.normal).ok);
  CHECK(r.normal(0, 0) == ExtReal(0.0));
  CHECK(r.normal(1, 1) == ExtReal(0.0));
  // the split of the off-diagonal mass depends on the duals; the circuit weight does not
  CHECK(r.normal(0, 1).value() + r.normal(1, 0).value() == -6.0);

  auto k2 = normalize_finite(fx::k2());
  CHECK(k2.F.is_identity());
  CHECK(k2.phi_star == std::vector<double>{0, 0, 0});
  CHECK(k2.psi_star == std::vector<double>{0, 0, 0});
  CHECK(k2.normal == fx::k2());

  auto d = fx::from_mat({{0, fx::NEG}, {fx::NEG, 0}});
  CHECK(normalize_finite(d).normal == d);
  CHECK_THROWS_AS(normalize_finite(fx::from_mat({{fx::NEG, fx::NEG}, {0, 0}})), Infeasible);

  std::mt19937_64 rng(23);
  for (int it = 0; it < 200; ++it) {
    size_t n = 1 + it % 8;
    auto m = oracle::random_matrix(rng, n, -4, 4, 0.25);
    for (size_t x = 0; x < n; ++x) m[x][(x + static_cast<size_t>(it)) % n] = oracle::dyadic(rng, -2, 2);
    auto k = fx::from_mat(m);
    auto nz = normalize_finite(k);
    CHECK(is_normal(nz.normal).ok);
    double total = 0;
    for (size_t x = 0; x < n; ++x) total += nz.phi_star[x] + nz.psi_star[x];
    CHECK(total == nz.value);
    CHECK(nz.value == oracle::best_perms(m).value);
    for (size_t x = 0; x < n; ++x)
      for (size_t y = 0; y < n; ++y) {
        if (m[x][y] == fx::NEG) continue;
        CHECK(nz.phi_star[x] + nz.psi_star[y] >= m[x][y]);
        if (Index(y) == nz.F(Index(x))) CHECK(nz.phi_star[x] + nz.psi_star[y] == m[x][y]);
      }
  }
}

TEST_CASE("invariance suites") {
  auto k2 = fx::k2();
  auto s = Similarity::right(Bijection::identity(), as_func({0, -0.25, 0}), as_func({0, 0.25, 0}));
  InvarianceOptions opt;
  opt.window = {0, 2};
  opt.candidates = {as_func({0, -0.25, 0})};
  auto r = invariance_suite(k2, s, {Property::ZC, Property::TC, Property::StrongRegularity}, opt);
  CHECK(r.all_agree());
  CHECK(r.outcomes[2].before == "certified");
  CHECK(r.outcomes[2].after == "certified");

  // l1 right similarity of a strongly normal banded kernel
  auto band = Kernel::banded_uniform(IndexSet::integers(), 0.0, {-1, -1}, KernelTail::linear(1, 0));
  auto l1 = Similarity::right(Bijection::identity(), Func({-2, 2}, {0.5, -0.25, 1, 0, 0.125},
                                                          FuncTail::power_decay(1, 2)),
                              Func({0, -1}, {}, FuncTail::power_decay(-0.5, 3)));
  InvarianceOptions so;
  so.window = {-10, 10};
  so.distance = 1;
  auto sr = invariance_suite(band, l1, {Property::SolutionExistence}, so);
  REQUIRE(sr.outcomes.size() == 1);
  CHECK(sr.outcomes[0].agreement == Agreement::Agree);
  CHECK(sr.outcomes[0].before == "holds");
  REQUIRE(sr.outcomes[0].transported);
  CHECK(sr.outcomes[0].transported->is_identity());

  // l0 potentials on Z in compact mode are outside what is known to transport
  auto l0 = Similarity::right(Bijection::identity(), Func::zero(),
                              Func({0, -1}, {}, FuncTail::power_decay(1, 0.5)), Space::L0);
  auto ref = invariance_suite(band, l0, {Property::SolutionExistence, Property::ZC}, so);
  CHECK(ref.outcomes[0].agreement == Agreement::Refused);
  CHECK(ref.outcomes[1].agreement == Agreement::Agree);
  so.mode = SolutionMode::RestrictedBalls;
  CHECK(invariance_suite(band, l0, {Property::SolutionExistence}, so).outcomes[0].agreement == Agreement::Agree);
  auto left = Similarity::left(Bijection::transposition(0, 1), Func::zero(), Func::zero());
  CHECK(invariance_suite(band, left, {Property::SolutionExistence}, so).outcomes[0].agreement ==
        Agreement::Refused);
  so.mode = SolutionMode::Compact;
  auto lt = invariance_suite(band, left, {Property::SolutionExistence}, so);
  CHECK(lt.outcomes[0].agreement == Agreement::Agree);
  CHECK(*lt.outcomes[0].transported == Bijection::transposition(0, 1));

  // random finite instances: transported solutions keep their status
  std::mt19937_64 rng(29);
  for (int it = 0; it < 100; ++it) {
    Index n = 2 + it % 5;
    auto m = oracle::random_matrix(rng, static_cast<size_t>(n), -3, 1, 0.2);
    for (Index x = 0; x < n; ++x) m[size_t(x)][size_t(x)] = 0;
    auto k = fx::from_mat(m);
    Similarity t{random_perm(rng, n), random_perm(rng, n), random_func(rng, n), random_func(rng, n),
                 SimilarityVariant::TwoSided, Space::L1};
    InvarianceOptions o;
    o.window = {0, n - 1};
    o.solution = random_perm(rng, n);
    o.distance = n;
    auto rep = invariance_suite(k, t, {Property::ZC, Property::TC, Property::StrongRegularity,
                                       Property::SolutionExistence}, o);
    CHECK(rep.consistent());
    CHECK(rep.outcomes[3].agreement == Agreement::Agree);
  }
}
