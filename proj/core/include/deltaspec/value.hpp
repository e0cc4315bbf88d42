#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace deltaspec {

enum class Type : std::uint8_t { Void, Int, Real, Bool, IntArray, RealArray };

using IntArray = std::vector<std::int64_t>;
using RealArray = std::vector<double>;

/// Runtime value of a DL expression. Arrays have value semantics.
using Value = std::variant<std::monostate, std::int64_t, double, bool, IntArray, RealArray>;

Type type_of(const Value& v);
Value default_value(Type t);

std::string_view type_name(Type t);
bool is_array(Type t);
bool is_numeric(Type t);
Type element_type(Type arrayType);
Type array_of(Type elementType);

/// Shortest text that round-trips through strtod; always carries a '.' or
/// exponent so it re-lexes as a real literal. `nan`, `inf`, `-inf` for
/// non-finite values.
std::string format_real(double x);

/// Fixed 17-significant-digit rendering used by the observable output.
std::string format_real17(double x);

std::string format_value(const Value& v);

/// Java-style Math.max / Math.min on doubles: NaN propagates and -0.0 < 0.0.
double java_max(double a, double b);
double java_min(double a, double b);

}  // namespace deltaspec
