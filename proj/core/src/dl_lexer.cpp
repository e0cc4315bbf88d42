#include "deltaspec/dl_lexer.hpp"

#include <cctype>

namespace deltaspec {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

constexpr std::string_view kPuncts[] = {"==>", ":=", "<=", ">=", "==", "!=", "&&", "||", "{", "}", "(", ")",
                                        "[",   "]",  ";",  ",",  ":",  "+",  "-",  "*",  "/", "%", "<", ">", "!"};

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    std::size_t start = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = TokenKind::Ident;
      t.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else if (digit(c)) {
      std::size_t j = i;
      while (j < src.size() && digit(src[j])) ++j;
      bool real = false;
      if (j + 1 < src.size() && src[j] == '.' && digit(src[j + 1])) {
        real = true;
        ++j;
        while (j < src.size() && digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && digit(src[k])) {
          real = true;
          j = k;
          while (j < src.size() && digit(src[j])) ++j;
        }
      }
      t.kind = real ? TokenKind::Real : TokenKind::Int;
      t.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else {
      bool matched = false;
      for (auto p : kPuncts) {
        if (src.substr(i, p.size()) == p) {
          t.kind = TokenKind::Punct;
          t.text = std::string(p);
          advance(p.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        t.kind = TokenKind::Invalid;
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

std::vector<std::string> token_texts(std::string_view source) {
  std::vector<std::string> out;
  for (auto& t : tokenize(source)) {
    if (t.kind != TokenKind::End) out.push_back(t.text);
  }
  return out;
}

}  // namespace deltaspec
