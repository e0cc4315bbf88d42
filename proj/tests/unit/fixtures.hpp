#pragma once

#include <deltaspec/minilang.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace fixtures {

inline constexpr const char* kSumPre = R"(class Sum {
  field value: real;
  field n: int;

  init() {
    n := 0;
    value := nan;
  }

  method increment(d: real) {
    if (n == 0) {
      value := d;
    } else {
      value := value + d;
    }
    n := n + 1;
  }

  method getResult(): real {
    return value;
  }
}
)";

inline constexpr const char* kSumPost = R"(class Sum {
  field value: real;
  field n: int;

  init() {
    n := 0;
    value := 0.0;
  }

  method increment(d: real) {
    value := value + d;
    n := n + 1;
  }

  method getResult(): real {
    return value;
  }
}
)";

inline std::string corpus_path(const std::string& rel) { return std::string(DELTASPEC_CORPUS_DIR) + "/" + rel; }

inline std::string read_corpus(const std::string& rel) {
  std::ifstream in(corpus_path(rel));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline deltaspec::Unit sum_pre() { return deltaspec::parse_unit(kSumPre); }
inline deltaspec::Unit sum_post() { return deltaspec::parse_unit(kSumPost); }

}  // namespace fixtures
