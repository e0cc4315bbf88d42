#include "deltaspec/value.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "deltaspec/error.hpp"
#include "deltaspec/rng.hpp"

namespace deltaspec {

Type type_of(const Value& v) {
  switch (v.index()) {
    case 1: return Type::Int;
    case 2: return Type::Real;
    case 3: return Type::Bool;
    case 4: return Type::IntArray;
    case 5: return Type::RealArray;
    default: return Type::Void;
  }
}

Value default_value(Type t) {
  switch (t) {
    case Type::Int: return std::int64_t{0};
    case Type::Real: return 0.0;
    case Type::Bool: return false;
    case Type::IntArray: return IntArray{};
    case Type::RealArray: return RealArray{};
    case Type::Void: break;
  }
  return std::monostate{};
}

std::string_view type_name(Type t) {
  switch (t) {
    case Type::Void: return "void";
    case Type::Int: return "int";
    case Type::Real: return "real";
    case Type::Bool: return "bool";
    case Type::IntArray: return "int[]";
    case Type::RealArray: return "real[]";
  }
  return "?";
}

bool is_array(Type t) { return t == Type::IntArray || t == Type::RealArray; }
bool is_numeric(Type t) { return t == Type::Int || t == Type::Real; }
Type element_type(Type t) { return t == Type::IntArray ? Type::Int : t == Type::RealArray ? Type::Real : Type::Void; }
Type array_of(Type t) { return t == Type::Int ? Type::IntArray : t == Type::Real ? Type::RealArray : Type::Void; }

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x && std::signbit(std::strtod(buf, nullptr)) == std::signbit(x)) break;
  }
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string format_real17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_value(const Value& v) {
  switch (v.index()) {
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: return format_real(std::get<double>(v));
    case 3: return std::get<bool>(v) ? "true" : "false";
    case 4: {
      std::string s = "[";
      const auto& a = std::get<IntArray>(v);
      for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + std::to_string(a[i]);
      return s + "]";
    }
    case 5: {
      std::string s = "[";
      const auto& a = std::get<RealArray>(v);
      for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + format_real(a[i]);
      return s + "]";
    }
    default: return "none";
  }
}

double java_max(double a, double b) {
  if (std::isnan(a)) return a;
  if (std::isnan(b)) return b;
  if (a == 0.0 && b == 0.0) return std::signbit(a) ? b : a;
  return a >= b ? a : b;
}

double java_min(double a, double b) {
  if (std::isnan(a)) return a;
  if (std::isnan(b)) return b;
  if (a == 0.0 && b == 0.0) return std::signbit(a) ? a : b;
  return a <= b ? a : b;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::NameMismatch: return "NameMismatch";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::MatrixMismatch: return "MatrixMismatch";
    case ErrorCode::NoSharedTests: return "NoSharedTests";
    case ErrorCode::CandidateMismatch: return "CandidateMismatch";
    case ErrorCode::UndefinedScore: return "UndefinedScore";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::MissingTruth: return "MissingTruth";
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Error";
}

std::string format_diagnostic(std::string_view file, const Diagnostic& d) {
  return std::string(file) + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.severity +
         ": " + d.message;
}

}  // namespace deltaspec
