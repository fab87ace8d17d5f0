#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tropreg/bijection.hpp"
#include "tropreg/func.hpp"
#include "tropreg/kernel.hpp"

namespace tropreg {

/// Text form of a kernel with optional embedded function and bijection.
///
///     tropreg-kernel 1
///     index finite 3              | index naturals | index integers
///     table                       (finite: n rows of n entries, "-inf" allowed)
///     0 0 -1
///     ...
///     end
///     period 1                    (countable: banded form)
///     bandwidth 1
///     diagonal 0                  (one entry per residue class mod period)
///     band -1 : -1                (one line per offset -W..-1, 1..W)
///     band 1 : -1
///     tail reciprocal(1,1)        | linear(a,b) | power(c,q) | minus-infinity
///     func                        (optional)
///     window 0 2
///     values 0 -0.25 0
///     tail zero                   | constant(c) | power-decay(c,q)
///     end
///     bijection                   (optional)
///     window 0 1
///     images 1 0
///     end
///
/// `#` starts a comment. Numbers are written in shortest round-trip decimal
/// form, so serialize(parse(text)) == text for text produced by serialize.
struct KernelFile {
  int version = 1;
  Kernel kernel;
  std::optional<Func> func;
  std::optional<Bijection> bijection;
};

inline constexpr int kKernelFileVersion = 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string field, const std::string& message);
  int line, column;
  std::string field;
  std::string message;
};

KernelFile parse_kernel_file(std::string_view text);
KernelFile read_kernel_file(const std::string& path);

/// Throws std::invalid_argument for transformed kernels, which have no file form.
std::string serialize(const KernelFile& file);

/// Shortest decimal string that reads back to the same double; "-inf" and "inf".
std::string format_number(double v);
std::string format_number(ExtReal v);

}  // namespace tropreg
