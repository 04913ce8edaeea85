#include "kgframe/rdf/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Cursor over one line of input.
class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  // Returns false for blank/comment-only lines.
  bool parse(Triple& out) {
    skip_ws();
    if (at_end() || peek() == '#') return false;
    Term subject = parse_subject();
    skip_ws();
    Term predicate = parse_iri();
    skip_ws();
    Term object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after object");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected trailing content");
    out = Triple{std::move(subject), std::move(predicate), std::move(object)};
    return true;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t end = pos_;
    while (end < s_.size() && s_[end] != ' ' && s_[end] != '\t') ++end;
    std::string token(s_.substr(std::min(pos_, s_.size()), std::min<std::size_t>(end - std::min(pos_, s_.size()), 40)));
    if (token.empty() && at_end()) token = "<end of line>";
    throw ParseError(line_no_, token, what);
  }

  Term parse_subject() {
    if (at_end()) fail("expected subject");
    if (peek() == '<') return parse_iri();
    if (peek() == '_') return parse_blank();
    fail("subject must be an IRI or blank node");
  }

  Term parse_object() {
    if (at_end()) fail("expected object");
    switch (peek()) {
      case '<': return parse_iri();
      case '_': return parse_blank();
      case '"': return parse_literal();
      default: fail("expected IRI, blank node or literal");
    }
  }

  char32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
      else fail("bad hex digit in unicode escape");
    }
    return cp;
  }

  std::string parse_iri_text() {
    if (at_end() || peek() != '<') fail("expected '<'");
    ++pos_;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = s_[pos_++];
      if (c == '>') break;
      if (c == ' ' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        --pos_;
        fail("illegal character in IRI");
      }
      if (c == '\\') {
        if (at_end()) fail("dangling escape in IRI");
        char e = s_[pos_++];
        if (e == 'u') append_utf8(out, parse_hex(4));
        else if (e == 'U') append_utf8(out, parse_hex(8));
        else fail("illegal escape in IRI");
        continue;
      }
      out += c;
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  Term parse_iri() { return Term::iri(parse_iri_text()); }

  Term parse_blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected blank node label");
    pos_ += 2;
    std::size_t start = pos_;
    while (!at_end() && peek() != ' ' && peek() != '\t' && peek() != '.' && peek() != '<' && peek() != '"') ++pos_;
    // A trailing '.' directly after the label terminates the statement.
    if (pos_ == start) fail("empty blank node label");
    return Term::blank(std::string(s_.substr(start, pos_ - start)));
  }

  Term parse_literal() {
    ++pos_;  // opening quote
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("dangling escape in literal");
        char e = s_[pos_++];
        switch (e) {
          case 't': lexical += '\t'; break;
          case 'b': lexical += '\b'; break;
          case 'n': lexical += '\n'; break;
          case 'r': lexical += '\r'; break;
          case 'f': lexical += '\f'; break;
          case '"': lexical += '"'; break;
          case '\'': lexical += '\''; break;
          case '\\': lexical += '\\'; break;
          case 'u': append_utf8(lexical, parse_hex(4)); break;
          case 'U': append_utf8(lexical, parse_hex(8)); break;
          default: --pos_; fail("illegal escape in literal");
        }
        continue;
      }
      lexical += c;
    }
    if (!at_end() && peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
      return Term::lang_literal(std::move(lexical), std::string(s_.substr(start, pos_ - start)));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      return Term::literal(std::move(lexical), parse_iri_text());
    }
    return Term::literal(std::move(lexical));
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Triple> parse_ntriples(std::istream& in) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Triple t;
    if (LineParser(line, line_no).parse(t)) triples.push_back(std::move(t));
  }
  return triples;
}

std::vector<Triple> parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

std::vector<Triple> parse_ntriples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open N-Triples file: " + path);
  return parse_ntriples(in);
}

void write_ntriples(std::ostream& out, std::span<const Triple> triples) {
  for (const auto& t : triples)
    out << t.subject.to_ntriples() << ' ' << t.predicate.to_ntriples() << ' ' << t.object.to_ntriples() << " .\n";
}

std::string to_ntriples(std::span<const Triple> triples) {
  std::ostringstream out;
  write_ntriples(out, triples);
  return out.str();
}

}  // namespace kgframe
