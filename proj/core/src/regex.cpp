#include <algorithm>
#include <cstdint>
#include <string>

#include "dnc/channel_spec.hpp"
#include "dnc/error.hpp"

namespace dnc {

namespace {

constexpr char32_t kEpsilon = U'ε';
constexpr char32_t kDot = U'·';
constexpr int kMaxNesting = 256;
constexpr int kMaxStars = 8;

bool is_space(char32_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_operator(char32_t c) {
  return c == '(' || c == ')' || c == '|' || c == '*' || c == kEpsilon || c == kDot;
}

std::string at(std::size_t offset) { return "@" + std::to_string(offset); }

// Decodes one UTF-8 code point starting at `pos`; returns its byte length.
std::size_t decode_utf8(std::string_view s, std::size_t pos, char32_t& out) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    out = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    out = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    out = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    out = b0 & 0x07;
  } else {
    throw SpecError(at(pos), "invalid UTF-8");
  }
  if (pos + len > s.size()) throw SpecError(at(pos), "truncated UTF-8 sequence");
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) throw SpecError(at(pos), "invalid UTF-8");
    out = (out << 6) | (b & 0x3F);
  }
  return len;
}

enum class Tok { Name, Epsilon, LParen, RParen, Bar, Star, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  Lexer(std::string_view src, const std::vector<std::string>& symbols)
      : src_(src), symbols_(symbols) {
    single_ = std::all_of(symbols.begin(), symbols.end(), [](const std::string& n) {
      if (n.empty()) return false;
      char32_t c;
      return decode_utf8(n, 0, c) == n.size();
    });
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < src_.size()) {
      char32_t c;
      const std::size_t len = decode_utf8(src_, pos, c);
      if (is_space(c)) {
        pos += len;
        continue;
      }
      switch (c) {
        case '(': out.push_back({Tok::LParen, "(", pos}); break;
        case ')': out.push_back({Tok::RParen, ")", pos}); break;
        case '|': out.push_back({Tok::Bar, "|", pos}); break;
        case '*': out.push_back({Tok::Star, "*", pos}); break;
        case kEpsilon: out.push_back({Tok::Epsilon, "ε", pos}); break;
        case kDot: out.push_back({Tok::Dot, "·", pos}); break;
        default: {
          std::size_t end = pos + len;
          if (!single_) {
            while (end < src_.size()) {
              char32_t d;
              const std::size_t l = decode_utf8(src_, end, d);
              if (is_space(d) || is_operator(d)) break;
              end += l;
            }
          }
          std::string name(src_.substr(pos, end - pos));
          if (std::find(symbols_.begin(), symbols_.end(), name) == symbols_.end())
            throw SpecError(at(pos), "undeclared symbol '" + name + "'");
          out.push_back({Tok::Name, std::move(name), pos});
          pos = end;
          continue;
        }
      }
      pos += len;
    }
    out.push_back({Tok::End, "", src_.size()});
    return out;
  }

 private:
  std::string_view src_;
  const std::vector<std::string>& symbols_;
  bool single_ = false;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RegexNode parse() {
    RegexNode n = parse_union();
    if (peek().kind == Tok::RParen) throw SpecError(at(peek().offset), "unbalanced ')'");
    if (peek().kind != Tok::End) throw SpecError(at(peek().offset), "unexpected '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  static bool starts_item(Tok k) { return k == Tok::Name || k == Tok::Epsilon || k == Tok::LParen; }

  RegexNode parse_union() {
    std::vector<RegexNode> items;
    items.push_back(parse_concat());
    while (peek().kind == Tok::Bar) {
      next();
      items.push_back(parse_concat());
    }
    return items.size() == 1 ? std::move(items.front()) : RegexNode::alt(std::move(items));
  }

  RegexNode parse_concat() {
    if (!starts_item(peek().kind)) {
      if (peek().kind == Tok::End) throw SpecError(at(peek().offset), "expression expected");
      throw SpecError(at(peek().offset), "dangling operator '" + peek().text + "'");
    }
    std::vector<RegexNode> items;
    items.push_back(parse_postfix());
    for (;;) {
      if (peek().kind == Tok::Dot) {
        const std::size_t off = next().offset;
        if (!starts_item(peek().kind)) throw SpecError(at(off), "dangling operator '·'");
      } else if (!starts_item(peek().kind)) {
        break;
      }
      items.push_back(parse_postfix());
    }
    return items.size() == 1 ? std::move(items.front()) : RegexNode::seq(std::move(items));
  }

  RegexNode parse_postfix() {
    RegexNode n = parse_atom();
    int stars = 0;
    while (peek().kind == Tok::Star) {
      if (++stars > kMaxStars) throw SpecError(at(peek().offset), "too many consecutive '*'");
      next();
      n = RegexNode::star(std::move(n));
    }
    return n;
  }

  RegexNode parse_atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Name: return RegexNode::literal(t.text);
      case Tok::Epsilon: return RegexNode::epsilon();
      case Tok::LParen: {
        if (++depth_ > kMaxNesting) throw SpecError(at(t.offset), "parentheses nested too deeply");
        RegexNode inner = parse_union();
        if (peek().kind != Tok::RParen) throw SpecError(at(t.offset), "unbalanced '('");
        next();
        --depth_;
        return inner;
      }
      default: throw SpecError(at(t.offset), "dangling operator '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

int precedence(const RegexNode& n) {
  switch (n.kind) {
    case RegexNode::Kind::Union: return 1;
    case RegexNode::Kind::Concat: return 2;
    case RegexNode::Kind::Star: return 3;
    default: return 4;
  }
}

void render(const RegexNode& n, bool single, std::string& out) {
  auto child = [&](const RegexNode& c, int min_prec) {
    const bool parens = precedence(c) <= min_prec;
    if (parens) out += '(';
    render(c, single, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case RegexNode::Kind::Epsilon: out += "ε"; break;
    case RegexNode::Kind::Symbol: out += n.symbol; break;
    case RegexNode::Kind::Union:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += " | ";
        child(n.children[i], 1);
      }
      break;
    case RegexNode::Kind::Concat:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i && !single) out += ' ';
        child(n.children[i], 2);
      }
      break;
    case RegexNode::Kind::Star:
      child(n.children.front(), 2);
      out += '*';
      break;
  }
}

}  // namespace

RegexNode parse_regex(std::string_view expr, const std::vector<std::string>& symbols) {
  return Parser(Lexer(expr, symbols).run()).parse();
}

std::string render_regex(const RegexNode& node, bool single_character_names) {
  std::string out;
  render(node, single_character_names, out);
  return out;
}

std::vector<std::string> tokenize_pattern(std::string_view text,
                                          const std::vector<std::string>& symbols) {
  std::vector<std::string> out;
  for (auto& t : Lexer(text, symbols).run()) {
    if (t.kind == Tok::End) break;
    if (t.kind != Tok::Name)
      throw SpecError(at(t.offset), "operator '" + t.text + "' is not allowed in a pattern");
    out.push_back(std::move(t.text));
  }
  if (out.empty()) throw SpecError(at(0), "empty pattern");
  return out;
}

}  // namespace dnc
