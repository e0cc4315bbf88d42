#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "deltaspec/dl_ast.hpp"

namespace deltaspec {

enum class TokenKind : std::uint8_t { Ident, Int, Real, Punct, End, Invalid };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLoc loc;
};

/// Shared tokenizer for DL sources and assertion text. `//` comments run to
/// end of line. Invalid characters produce a single Invalid token.
std::vector<Token> tokenize(std::string_view source);

/// Token texts only, without the End token.
std::vector<std::string> token_texts(std::string_view source);

}  // namespace deltaspec
