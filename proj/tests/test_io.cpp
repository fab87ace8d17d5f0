#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tropreg/io.hpp"

using namespace tropreg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".trk"; }

ExtReal random_entry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5, 1);
  double r = u(rng);
  return r < -4.5 ? ExtReal::bottom() : ExtReal(r);  // arbitrary doubles exercise full precision
}

KernelTail random_tail(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.01, 3);
  switch (rng() % 4) {
    case 0: return KernelTail::linear(pos(rng), pos(rng) - 1.5);
    case 1: return KernelTail::power(pos(rng), pos(rng));
    case 2: return KernelTail::reciprocal(pos(rng), pos(rng));
    default: return KernelTail::minus_infinity();
  }
}

Kernel random_banded(std::mt19937_64& rng) {
  Index p = 1 + static_cast<Index>(rng() % 3), W = static_cast<Index>(rng() % 4);
  auto row = [&] {
    std::vector<ExtReal> v;
    for (Index i = 0; i < p; ++i) v.push_back(random_entry(rng));
    return v;
  };
  std::vector<std::vector<ExtReal>> band;
  for (Index i = 0; i < 2 * W; ++i) band.push_back(row());
  auto set = rng() % 2 ? IndexSet::naturals() : IndexSet::integers();
  return Kernel::banded(set, p, row(), W, band, random_tail(rng));
}

Kernel random_dense(std::mt19937_64& rng) {
  Index n = 1 + static_cast<Index>(rng() % 6);
  std::vector<ExtReal> e;
  for (Index i = 0; i < n * n; ++i) e.push_back(random_entry(rng));
  return Kernel::dense(n, e);
}

// What the parser should report for a broken file.
struct Broken {
  std::string text;
  int line, column;
  std::string field;
};

}  // namespace

TEST_CASE("shipped fixtures are canonical") {
  for (const char* name : {"k1", "k2", "ce", "zeros2"}) {
    CAPTURE(name);
    std::string text = slurp(fixture(name));
    REQUIRE_FALSE(text.empty());
    auto f = parse_kernel_file(text);
    CHECK(serialize(f) == text);
    CHECK(parse_kernel_file(serialize(f)).kernel == f.kernel);
  }
  CHECK(read_kernel_file(fixture("k2")).kernel == fx::k2());
  CHECK(read_kernel_file(fixture("ce")).kernel == fx::ce());
  auto k1 = read_kernel_file(fixture("k1")).kernel;
  for (Index x = -6; x <= 6; ++x)
    for (Index y = -6; y <= 6; ++y)
      if (x != y) CHECK(k1(x, y) < ExtReal(0.0));
}

TEST_CASE("finite table with a -inf entry") {
  const std::string text =
      "tropreg-kernel 1\n"
      "index finite 2\n"
      "table\n"
      "0 -inf\n"
      "-1.5 0\n"
      "end\n";
  auto f = parse_kernel_file(text);
  CHECK(f.kernel(0, 1).is_bottom());
  CHECK(f.kernel(1, 0) == ExtReal(-1.5));
  CHECK(serialize(f) == text);
}

TEST_CASE("comments, spacing and tail spelling") {
  auto a = parse_kernel_file(
      "# reciprocal tail\n"
      "tropreg-kernel 1\n\n"
      "index integers   # Z\n"
      "period 1\nbandwidth 1\ndiagonal 0\n"
      "band -1 : -1\nband 1:-1\n"
      "tail reciprocal 1 1\n");
  auto b = parse_kernel_file(
      "tropreg-kernel 1\nindex integers\nperiod 1\nbandwidth 1\ndiagonal 0\nband -1 : -1\nband 1 : -1\n"
      "tail reciprocal( 1 , 1 )\n");
  CHECK(a.kernel == b.kernel);
}

TEST_CASE("reciprocal tail on Z gives b_xy = -1/|x-y|") {
  auto f = parse_kernel_file(
      "tropreg-kernel 1\nindex integers\nperiod 1\nbandwidth 1\ndiagonal 0\nband -1 : -1\nband 1 : -1\n"
      "tail reciprocal(1,1)\n");
  for (Index x = -15; x <= 15; ++x)
    for (Index y = -15; y <= 15; ++y) {
      double expected = x == y ? 0.0 : -1.0 / static_cast<double>(std::abs(x - y));
      CHECK(f.kernel(x, y) == ExtReal(expected));
    }
  CHECK_FALSE(f.kernel.satisfies_tc());
}

TEST_CASE("random round trips") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 300; ++it) {
    Kernel k = it % 2 ? random_banded(rng) : random_dense(rng);
    KernelFile f{1, k, std::nullopt, std::nullopt};
    if (it % 3 == 0) {
      std::uniform_real_distribution<double> u(-3, 3);
      Index lo = static_cast<Index>(rng() % 5) - 2, len = static_cast<Index>(rng() % 5);
      std::vector<double> v;
      for (Index i = 0; i < len; ++i) v.push_back(u(rng));
      FuncTail tails[] = {FuncTail::zero(), FuncTail::constant(u(rng)), FuncTail::power_decay(u(rng), 1.5)};
      f.func = Func({lo, lo + len - 1}, v, tails[rng() % 3]);
    }
    if (it % 4 == 0) {
      Index n = 1 + static_cast<Index>(rng() % 5);
      std::vector<Index> p;
      for (Index i = 0; i < n; ++i) p.push_back(i);
      std::shuffle(p.begin(), p.end(), rng);
      f.bijection = Bijection({0, n - 1}, p);
    }
    std::string text = serialize(f);
    auto g = parse_kernel_file(text);
    CHECK(g.kernel == f.kernel);
    CHECK(g.func == f.func);
    CHECK(g.bijection == f.bijection);
    CHECK(serialize(g) == text);
  }
}

TEST_CASE("numbers keep full precision") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456789.123456789, -0.0, 5e-324}) {
    std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(ExtReal::bottom()) == "-inf");
}

TEST_CASE("positioned parse errors") {
  const std::string band = "tropreg-kernel 1\nindex naturals\nperiod 1\nbandwidth 1\ndiagonal 0\nband -1 : -1\nband 1 : -1\n";
  std::vector<Broken> cases{
      {band + "tail exponential(1,2)\n", 8, 6, "tail"},
      {band + "tail power(1)\n", 8, 13, "tail.q"},
      {band + "tail linear(0,1)\n", 8, 13, "tail.a"},
      {band + "tail reciprocal(1,x)\n", 8, 19, "tail.q"},
      {band + "tail reciprocal(1,-2)\n", 8, 19, "tail.q"},
      {band + "tail linear(1,2,3)\n", 8, 17, "tail"},
      {"tropreg-kernel 1\nindex integers\nperiod -1\n", 3, 8, "period"},
      {"tropreg-kernel 1\nindex integers\nperiod 0\n", 3, 8, "period"},
      {"tropreg-kernel 1\nindex finite 2\ntable\n0 0 0\n0 0\nend\n", 4, 1, "table"},
      {"tropreg-kernel 1\nindex finite 3\ntable\n0 0 0\n0 0 0\nend\n", 3, 1, "table"},
      {"tropreg-kernel 1\nindex finite 2\ntable\n0 abc\n0 0\nend\n", 4, 3, "table"},
      {"tropreg-kernel 2\n", 1, 16, "version"},
      {"tropreg-kernel 1\nindex rationals\n", 2, 7, "index"},
      {"tropreg-kernel 1\nindex integers\nperiod 1\nbandwidth 1\ndiagonal 0\nband 1 : -1\n", 6, 6, "band -1"},
      {"tropreg-kernel 1\nindex finite 1\ntable\n0\nend\nfunc\nwindow 0 1\nvalues 1\ntail zero\nend\n", 8, 9,
       "func.values"},
      {"tropreg-kernel 1\nindex finite 1\ntable\n0\nend\nbijection\nwindow 0 1\nimages 0 0\nend\n", 8, 1,
       "bijection.images"},
      {"tropreg-kernel 1\nindex finite 1\ntable\n0\nend\nextra\n", 6, 1, "extra"},
      {"tropreg-kernel 1\nindex finite 2\ntable\n0 0\n", 5, 1, "table"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      parse_kernel_file(c.text);
      FAIL("accepted a broken file");
    } catch (const ParseError& e) {
      CHECK(e.field == c.field);
      CHECK(e.line == c.line);
      CHECK(e.column == c.column);
      CHECK(std::string(e.what()).find(c.field) != std::string::npos);
    }
  }
}

TEST_CASE("transformed countable kernels have no file form") {
  auto t = Kernel::transformed(fx::ce(), Bijection::transposition(0, 1), Bijection::identity(), Func::zero(),
                               Func::zero());
  CHECK_THROWS_AS(serialize(KernelFile{1, t, std::nullopt, std::nullopt}), std::invalid_argument);
}
