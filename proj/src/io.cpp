#include "tropreg/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tropreg {

ParseError::ParseError(int line, int column, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": "
                                    : std::string()) +
                         field + ": " + message),
      line(line), column(column), field(std::move(field)), message(message) {}

std::string format_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  if (v == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_number(ExtReal v) { return format_number(v.value()); }

namespace {

struct Token {
  std::string text;
  int col = 0;
};

struct Line {
  int no = 0;
  std::vector<Token> toks;
};

// Whitespace, parentheses and commas separate tokens; ':' is a token of its own.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{no, {}};
    std::string cur;
    int start = 0;
    auto flush = [&] {
      if (!cur.empty()) line.toks.push_back({cur, start});
      cur.clear();
    };
    for (size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',') {
        flush();
      } else if (c == ':') {
        flush();
        line.toks.push_back({":", static_cast<int>(i) + 1});
      } else {
        if (cur.empty()) start = static_cast<int>(i) + 1;
        cur += c;
      }
    }
    flush();
    if (!line.toks.empty()) lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return at_ >= lines_.size(); }
  const Line& peek() const { return lines_[at_]; }
  const Line& next(const std::string& field) {
    if (done()) fail_eof(field);
    return lines_[at_++];
  }

  [[noreturn]] void fail_eof(const std::string& field) const {
    int line = lines_.empty() ? 1 : lines_.back().no + 1;
    throw ParseError(line, 1, field, "unexpected end of input");
  }

  // A line that starts with `key`; returns its remaining tokens.
  std::vector<Token> keyed(const std::string& key) {
    const Line& l = next(key);
    if (l.toks[0].text != key) throw ParseError(l.no, l.toks[0].col, key, "expected '" + key + "', found '" + l.toks[0].text + "'");
    last_ = &l;
    return {l.toks.begin() + 1, l.toks.end()};
  }
  int line_no() const { return last_ ? last_->no : 1; }
  int end_col() const {
    if (!last_) return 1;
    const Token& t = last_->toks.back();
    return t.col + static_cast<int>(t.text.size());
  }

  const Line* last_ = nullptr;

 private:
  std::vector<Line> lines_;
  size_t at_ = 0;
};

ExtReal parse_ext(const Token& t, int line, const std::string& field, bool allow_bottom) {
  if (t.text == "-inf") {
    if (allow_bottom) return ExtReal::bottom();
    throw ParseError(line, t.col, field, "-inf is not allowed here");
  }
  double v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    throw ParseError(line, t.col, field, "'" + t.text + "' is not a real number");
  return v;
}

double parse_real(const Token& t, int line, const std::string& field) {
  return parse_ext(t, line, field, false).value();
}

Index parse_int(const Token& t, int line, const std::string& field) {
  Index v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(line, t.col, field, "'" + t.text + "' is not an integer");
  return v;
}

void expect_count(const std::vector<Token>& toks, size_t n, Parser& ps, const std::string& field,
                  const std::string& what) {
  if (toks.size() == n) return;
  int col = toks.size() > n ? toks[n].col : ps.end_col();
  throw ParseError(ps.line_no(), col, field,
                   "expected " + std::to_string(n) + " " + what + ", found " + std::to_string(toks.size()));
}

std::vector<ExtReal> parse_row(const std::vector<Token>& toks, size_t from, int line, const std::string& field) {
  std::vector<ExtReal> row;
  for (size_t i = from; i < toks.size(); ++i) row.push_back(parse_ext(toks[i], line, field, true));
  return row;
}

KernelTail parse_kernel_tail(const std::vector<Token>& toks, Parser& ps) {
  if (toks.empty()) throw ParseError(ps.line_no(), ps.end_col(), "tail", "missing tail family");
  const std::string& fam = toks[0].text;
  int line = ps.line_no();
  if (fam == "minus-infinity") {
    expect_count(toks, 1, ps, "tail", "tokens for minus-infinity");
    return KernelTail::minus_infinity();
  }
  std::pair<const char*, const char*> names;
  if (fam == "linear")
    names = {"tail.a", "tail.b"};
  else if (fam == "power" || fam == "reciprocal")
    names = {"tail.c", "tail.q"};
  else
    throw ParseError(line, toks[0].col, "tail",
                     "unknown tail family '" + fam + "' (linear, power, reciprocal, minus-infinity)");
  if (toks.size() != 3) {
    int col = toks.size() > 3 ? toks[3].col : ps.end_col();
    const char* missing = toks.size() < 2 ? names.first : names.second;
    throw ParseError(line, col, toks.size() > 3 ? "tail" : missing,
                     fam + " takes exactly 2 parameters, found " + std::to_string(toks.size() - 1));
  }
  double a = parse_real(toks[1], line, names.first);
  double b = parse_real(toks[2], line, names.second);
  if (!(a > 0)) throw ParseError(line, toks[1].col, names.first, "must be > 0");
  if (fam == "linear") return KernelTail::linear(a, b);
  if (!(b > 0)) throw ParseError(line, toks[2].col, names.second, "must be > 0");
  return fam == "power" ? KernelTail::power(a, b) : KernelTail::reciprocal(a, b);
}

Window parse_window(Parser& ps, const std::string& block) {
  auto t = ps.keyed("window");
  expect_count(t, 2, ps, block + ".window", "bounds");
  return {parse_int(t[0], ps.line_no(), block + ".window"), parse_int(t[1], ps.line_no(), block + ".window")};
}

void expect_end(Parser& ps, const std::string& block) {
  auto t = ps.keyed("end");
  if (!t.empty()) throw ParseError(ps.line_no(), t[0].col, block, "unexpected text after 'end'");
}

Func parse_func(Parser& ps) {
  Window w = parse_window(ps, "func");
  auto vt = ps.keyed("values");
  std::vector<double> values;
  for (auto& t : vt) values.push_back(parse_real(t, ps.line_no(), "func.values"));
  if (static_cast<Index>(values.size()) != w.size())
    throw ParseError(ps.line_no(), ps.end_col(), "func.values",
                     "window holds " + std::to_string(w.size()) + " points, found " + std::to_string(values.size()) +
                         " values");
  auto tt = ps.keyed("tail");
  if (tt.empty()) throw ParseError(ps.line_no(), ps.end_col(), "func.tail", "missing tail kind");
  FuncTail tail;
  const std::string& kind = tt[0].text;
  int line = ps.line_no();
  if (kind == "zero") {
    expect_count(tt, 1, ps, "func.tail", "tokens for zero");
  } else if (kind == "constant") {
    expect_count(tt, 2, ps, "func.tail.c", "tokens for constant(c)");
    tail = FuncTail::constant(parse_real(tt[1], line, "func.tail.c"));
  } else if (kind == "power-decay") {
    expect_count(tt, 3, ps, "func.tail", "tokens for power-decay(c,q)");
    double c = parse_real(tt[1], line, "func.tail.c");
    double q = parse_real(tt[2], line, "func.tail.q");
    if (!(q > 0)) throw ParseError(line, tt[2].col, "func.tail.q", "must be > 0");
    tail = FuncTail::power_decay(c, q);
  } else {
    throw ParseError(line, tt[0].col, "func.tail", "unknown tail kind '" + kind + "' (zero, constant, power-decay)");
  }
  expect_end(ps, "func");
  return Func(w, std::move(values), tail);
}

Bijection parse_bijection(Parser& ps) {
  Window w = parse_window(ps, "bijection");
  auto it = ps.keyed("images");
  std::vector<Index> images;
  for (auto& t : it) images.push_back(parse_int(t, ps.line_no(), "bijection.images"));
  try {
    Bijection b(w, std::move(images));
    expect_end(ps, "bijection");
    return b;
  } catch (const std::invalid_argument& e) {
    throw ParseError(ps.line_no(), 1, "bijection.images", e.what());
  }
}

Kernel parse_finite(Parser& ps, Index n) {
  ps.keyed("table");
  int table_line = ps.line_no();
  std::vector<std::vector<ExtReal>> rows;
  while (true) {
    if (ps.done()) ps.fail_eof("table");
    if (ps.peek().toks[0].text == "end") break;
    const Line& l = ps.next("table");
    auto row = parse_row(l.toks, 0, l.no, "table");
    if (static_cast<Index>(row.size()) != n)
      throw ParseError(l.no, l.toks.front().col, "table",
                       "non-square table: row " + std::to_string(rows.size()) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(n));
    rows.push_back(std::move(row));
  }
  expect_end(ps, "table");
  if (static_cast<Index>(rows.size()) != n)
    throw ParseError(table_line, 1, "table",
                     "non-square table: " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n));
  return Kernel::dense(std::move(rows));
}

Kernel parse_banded(Parser& ps, IndexSet set) {
  auto pt = ps.keyed("period");
  expect_count(pt, 1, ps, "period", "value");
  Index p = parse_int(pt[0], ps.line_no(), "period");
  if (p < 1) throw ParseError(ps.line_no(), pt[0].col, "period", "must be >= 1, found " + pt[0].text);

  auto wt = ps.keyed("bandwidth");
  expect_count(wt, 1, ps, "bandwidth", "value");
  Index W = parse_int(wt[0], ps.line_no(), "bandwidth");
  if (W < 0) throw ParseError(ps.line_no(), wt[0].col, "bandwidth", "must be >= 0, found " + wt[0].text);

  auto dt = ps.keyed("diagonal");
  expect_count(dt, static_cast<size_t>(p), ps, "diagonal", "entries (one per residue)");
  auto diag = parse_row(dt, 0, ps.line_no(), "diagonal");

  std::vector<std::vector<ExtReal>> band;
  for (Index k = -W; k <= W; ++k) {
    if (k == 0) continue;
    auto bt = ps.keyed("band");
    std::string field = "band " + std::to_string(k);
    if (bt.size() < 2 || bt[1].text != ":")
      throw ParseError(ps.line_no(), bt.empty() ? ps.end_col() : bt[0].col, field, "expected 'band <offset> : <entries>'");
    Index off = parse_int(bt[0], ps.line_no(), "band");
    if (off != k)
      throw ParseError(ps.line_no(), bt[0].col, field, "offsets must run -W..-1, 1..W in order; found " + bt[0].text);
    std::vector<Token> vals(bt.begin() + 2, bt.end());
    expect_count(vals, static_cast<size_t>(p), ps, field, "entries (one per residue)");
    band.push_back(parse_row(vals, 0, ps.line_no(), field));
  }
  auto tt = ps.keyed("tail");
  KernelTail tail = parse_kernel_tail(tt, ps);
  return Kernel::banded(set, p, std::move(diag), W, std::move(band), tail);
}

}  // namespace

KernelFile parse_kernel_file(std::string_view text) {
  Parser ps(tokenize(text));
  auto head = ps.keyed("tropreg-kernel");
  expect_count(head, 1, ps, "version", "version number");
  Index version = parse_int(head[0], ps.line_no(), "version");
  if (version != kKernelFileVersion)
    throw ParseError(ps.line_no(), head[0].col, "version", "unsupported version " + head[0].text);

  auto it = ps.keyed("index");
  if (it.empty()) throw ParseError(ps.line_no(), ps.end_col(), "index", "missing index set");
  std::optional<Kernel> kernel;
  const std::string& kind = it[0].text;
  if (kind == "finite") {
    expect_count(it, 2, ps, "index", "tokens for 'finite N'");
    Index n = parse_int(it[1], ps.line_no(), "index");
    if (n < 1) throw ParseError(ps.line_no(), it[1].col, "index", "finite size must be >= 1");
    kernel = parse_finite(ps, n);
  } else if (kind == "naturals" || kind == "integers") {
    expect_count(it, 1, ps, "index", "tokens");
    kernel = parse_banded(ps, kind == "naturals" ? IndexSet::naturals() : IndexSet::integers());
  } else {
    throw ParseError(ps.line_no(), it[0].col, "index", "unknown index set '" + kind + "' (finite, naturals, integers)");
  }

  KernelFile file{static_cast<int>(version), std::move(*kernel), std::nullopt, std::nullopt};
  while (!ps.done()) {
    const Line& l = ps.peek();
    const std::string& key = l.toks[0].text;
    if (key == "func" && !file.func) {
      ps.keyed("func");
      file.func = parse_func(ps);
    } else if (key == "bijection" && !file.bijection) {
      ps.keyed("bijection");
      file.bijection = parse_bijection(ps);
    } else {
      throw ParseError(l.no, l.toks[0].col, key,
                       key == "func" || key == "bijection" ? "block given twice" : "unexpected '" + key + "'");
    }
  }
  return file;
}

KernelFile read_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "file", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kernel_file(ss.str());
}

namespace {

std::string join(const std::vector<ExtReal>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
  return s;
}

std::string tail_text(const KernelTail& t) {
  auto pair = [&](const char* name) { return std::string(name) + "(" + format_number(t.p1) + "," + format_number(t.p2) + ")"; };
  switch (t.family) {
    case TailFamily::MinusInfinity: return "minus-infinity";
    case TailFamily::Linear: return pair("linear");
    case TailFamily::Power: return pair("power");
    case TailFamily::Reciprocal: return pair("reciprocal");
  }
  return "";
}

std::string func_tail_text(const FuncTail& t) {
  switch (t.kind) {
    case FuncTailKind::Zero: return "zero";
    case FuncTailKind::Constant: return "constant(" + format_number(t.c) + ")";
    case FuncTailKind::PowerDecay: return "power-decay(" + format_number(t.c) + "," + format_number(t.q) + ")";
  }
  return "";
}

}  // namespace

std::string serialize(const KernelFile& file) {
  const Kernel& k = file.kernel;
  std::ostringstream out;
  out << "tropreg-kernel " << file.version << "\n";
  if (k.is_transformed()) throw std::invalid_argument("transformed countable kernels have no file form");
  if (k.is_dense()) {
    const auto& d = k.dense_body();
    out << "index finite " << d.n << "\ntable\n";
    for (Index x = 0; x < d.n; ++x) {
      auto first = d.entries.begin() + x * d.n;
      out << join({first, first + d.n}) << "\n";
    }
    out << "end\n";
  } else {
    const auto& b = k.banded_body();
    out << "index " << (k.index_set().kind() == IndexKind::Naturals ? "naturals" : "integers") << "\n";
    out << "period " << b.period << "\nbandwidth " << b.width << "\ndiagonal " << join(b.diagonal) << "\n";
    size_t i = 0;
    for (Index off = -b.width; off <= b.width; ++off) {
      if (off == 0) continue;
      out << "band " << off << " : " << join(b.band[i++]) << "\n";
    }
    out << "tail " << tail_text(b.tail) << "\n";
  }
  if (file.func) {
    const Func& f = *file.func;
    out << "func\nwindow " << f.window().lo << " " << f.window().hi << "\nvalues";
    for (double v : f.values()) out << " " << format_number(v);
    out << "\ntail " << func_tail_text(f.tail()) << "\nend\n";
  }
  if (file.bijection) {
    const Bijection& F = *file.bijection;
    const Window& w = F.support();
    out << "bijection\nwindow " << w.lo << " " << w.hi << "\nimages";
    for (Index x = w.lo; x <= w.hi; ++x) out << " " << F(x);
    out << "\nend\n";
  }
  return out.str();
}

}  // namespace tropreg
