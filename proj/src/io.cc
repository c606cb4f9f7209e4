#include "rexinfer/io.h"

#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>

#include "rexinfer/error.h"

namespace rexinfer {

namespace {

std::string located(const std::string& source, std::size_t line, const std::string& msg) {
  return source + ":" + std::to_string(line) + ": " + msg;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

Sample read_sample(std::istream& in, const std::string& source) {
  Sample s;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    Word w;
    std::size_t i = 0;
    while (i < line.size()) {
      std::size_t j = line.find(' ', i);
      if (j == std::string::npos) j = line.size();
      if (j == i) throw InputError(located(source, no, "empty symbol (leading, trailing or doubled space)"));
      std::string sym = line.substr(i, j - i);
      for (char c : sym)
        if (is_space(c) || static_cast<unsigned char>(c) < 0x20)
          throw InputError(located(source, no, "control or tab character in symbol '" + sym + "'"));
      w.push_back(std::move(sym));
      i = j + 1;
      if (j + 1 == line.size()) throw InputError(located(source, no, "empty symbol (leading, trailing or doubled space)"));
    }
    s.add(w);
  }
  if (in.bad()) throw InputError(source + ": read error");
  return s;
}

Sample read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sample file '" + path + "'");
  return read_sample(in, path);
}

void write_sample(std::ostream& out, const Sample& s) {
  for (const auto& [w, m] : s.words()) {
    std::string line;
    for (std::size_t i = 0; i < w.size(); ++i) line += (i ? " " : "") + w[i];
    for (std::size_t k = 0; k < m; ++k) out << line << '\n';
  }
}

void write_sample_file(const std::string& path, const Sample& s) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_sample(out, s);
}

nlohmann::json koa_to_json(const Koa& g) {
  nlohmann::json states = nlohmann::json::array();
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::string label = s == Koa::kSrc ? "src" : s == Koa::kSink ? "sink" : g.label(s).str();
    states.push_back({{"id", s}, {"label", label}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [x, y] : g.edges()) edges.push_back({x, y});
  return {{"states", states}, {"edges", edges}};
}

Koa koa_from_json(const nlohmann::json& j) {
  try {
    Koa g;
    const auto& states = j.at("states");
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].at("id").get<std::size_t>() != i) throw InputError("state ids must be 0, 1, 2, ... in order");
      if (i < 2) continue;
      Regex a = parse(states[i].at("label").get<std::string>());
      if (!a.is(RegexKind::kAtom)) throw InputError("state label must be a symbol");
      g.add_state(a.symbol());
    }
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<StateId>(), e.at(1).get<StateId>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed automaton JSON: ") + e.what());
  }
}

nlohmann::json pomm_to_json(const Pomm& p) {
  nlohmann::json j = koa_to_json(p.graph);
  nlohmann::json alpha = nlohmann::json::array();
  for (const auto& [x, y] : p.graph.edges()) alpha.push_back({{"from", x}, {"to", y}, {"p", p.alpha[x][y]}});
  j["alpha"] = alpha;
  return j;
}

namespace {

class XmlScanner {
 public:
  XmlScanner(std::string text, std::string source, XmlExtraction& into)
      : text_(std::move(text)), source_(std::move(source)), into_(into) {}

  void run() {
    bool seen_root = false;
    while (!at_end()) {
      if (peek() != '<') {
        std::size_t at = pos_;
        std::string t = text_run();
        if (!stack_.empty()) {
          if (t.find_first_not_of(" \t\r\n") != std::string::npos) stack_.back().has_text = true;
        } else if (t.find_first_not_of(" \t\r\n") != std::string::npos) {
          fail_at(at, "text outside the root element");
        }
        continue;
      }
      if (starts("<?")) {
        skip_past("?>", "unterminated processing instruction");
      } else if (starts("<!--")) {
        skip_past("-->", "unterminated comment");
      } else if (starts("<![CDATA[")) {
        if (stack_.empty()) fail("CDATA outside the root element");
        std::size_t at = pos_;
        skip_past("]]>", "unterminated CDATA section");
        std::string body = text_.substr(at + 9, pos_ - at - 12);
        if (body.find_first_not_of(" \t\r\n") != std::string::npos) stack_.back().has_text = true;
      } else if (starts("<!DOCTYPE")) {
        if (seen_root || !stack_.empty()) fail("DOCTYPE after the root element");
        doctype();
      } else if (starts("</")) {
        end_tag();
      } else {
        if (stack_.empty() && seen_root) fail("second root element");
        seen_root = true;
        start_tag();
      }
    }
    if (!stack_.empty()) fail("unclosed element <" + stack_.back().name + ">");
    if (!seen_root) fail("no root element");
  }

 private:
  struct Open {
    std::string name;
    Word children;
    bool has_text = false;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts(const char* s) const { return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0; }

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  std::string text_run() {
    std::size_t at = pos_;
    while (!at_end() && peek() != '<') {
      if (peek() == '&') entity();
      else ++pos_;
    }
    return text_.substr(at, pos_ - at);
  }

  void entity() {
    std::size_t end = text_.find(';', pos_);
    if (end == std::string::npos || end == pos_ + 1 || end - pos_ > 32) fail("malformed entity reference");
    pos_ = end + 1;
  }

  void skip_past(const std::string& close, const char* msg) {
    std::size_t end = text_.find(close, pos_);
    if (end == std::string::npos) fail(msg);
    pos_ = end + close.size();
  }

  void doctype() {
    int depth = 0;
    for (; !at_end(); ++pos_) {
      char c = peek();
      if (c == '[') ++depth;
      else if (c == ']') --depth;
      else if (c == '>' && depth == 0) {
        ++pos_;
        return;
      }
    }
    fail("unterminated DOCTYPE");
  }

  static bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool name_char(char c) {
    return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
  }

  std::string name() {
    if (at_end() || !name_start(peek())) fail("expected a name");
    std::size_t at = pos_;
    while (!at_end() && name_char(peek())) ++pos_;
    return text_.substr(at, pos_ - at);
  }

  void spaces() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void start_tag() {
    ++pos_;
    std::string n = name();
    std::set<std::string> attrs;
    for (;;) {
      bool had_space = !at_end() && is_space(peek());
      spaces();
      if (at_end()) fail("unterminated start tag <" + n + ">");
      if (starts("/>")) {
        pos_ += 2;
        open(n);
        close();
        return;
      }
      if (peek() == '>') {
        ++pos_;
        open(n);
        return;
      }
      if (!had_space) fail("expected whitespace before attribute");
      std::size_t at = pos_;
      std::string a = name();
      if (!attrs.insert(a).second) fail_at(at, "duplicate attribute '" + a + "'");
      spaces();
      if (at_end() || peek() != '=') fail("expected '=' after attribute name");
      ++pos_;
      spaces();
      if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
      char q = peek();
      std::size_t end = text_.find(q, pos_ + 1);
      if (end == std::string::npos) fail("unterminated attribute value");
      if (text_.substr(pos_ + 1, end - pos_ - 1).find('<') != std::string::npos) fail("'<' in attribute value");
      pos_ = end + 1;
    }
  }

  void end_tag() {
    std::size_t at = pos_;
    pos_ += 2;
    std::string n = name();
    spaces();
    if (at_end() || peek() != '>') fail("unterminated end tag");
    ++pos_;
    if (stack_.empty()) fail_at(at, "end tag </" + n + "> without a start tag");
    if (stack_.back().name != n) fail_at(at, "end tag </" + n + "> does not match <" + stack_.back().name + ">");
    close();
  }

  void open(const std::string& n) {
    if (!stack_.empty()) stack_.back().children.push_back(n);
    stack_.push_back({n, {}, false});
  }

  void close() {
    Open e = std::move(stack_.back());
    stack_.pop_back();
    if (e.has_text && !e.children.empty())
      into_.warnings.push_back(source_ + ": element <" + e.name + "> has mixed content; text ignored");
    into_.samples[e.name].add(e.children);
  }

  std::string text_;
  std::string source_;
  XmlExtraction& into_;
  std::size_t pos_ = 0;
  std::vector<Open> stack_;
};

}  // namespace

void extract_child_sequences(std::istream& in, const std::string& source, XmlExtraction& into) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // Scan into a copy so a malformed document leaves `into` untouched.
  XmlExtraction local;
  XmlScanner(std::move(text), source, local).run();
  for (auto& [name, s] : local.samples)
    for (const auto& [w, m] : s.words()) into.samples[name].add(w, m);
  into.warnings.insert(into.warnings.end(), local.warnings.begin(), local.warnings.end());
}

void extract_child_sequences_file(const std::string& path, XmlExtraction& into) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open XML file '" + path + "'");
  extract_child_sequences(in, path, into);
}

namespace {

std::string dtd_term(const Regex& r) {
  auto join = [](const Regex& g, const char* sep) {
    std::string out = "(";
    for (std::size_t i = 0; i < g.children().size(); ++i) out += (i ? sep : "") + dtd_term(g.children()[i]);
    return out + ")";
  };
  switch (r.kind()) {
    case RegexKind::kAtom:
      return r.symbol().name;
    case RegexKind::kConcat:
      return join(r, ", ");
    case RegexKind::kDisj:
      return join(r, " | ");
    case RegexKind::kOptional:
      if (r.child().is(RegexKind::kPlus)) return dtd_term(r.child().child()) + "*";
      return dtd_term(r.child()) + "?";
    case RegexKind::kPlus:
      return dtd_term(r.child()) + "+";
    case RegexKind::kEpsilon:
    case RegexKind::kEmptySet:
      break;
  }
  throw PreconditionError("no DTD form for " + render(r));
}

}  // namespace

std::string to_dtd_content(const Regex& r) {
  Regex n = normalize(r);
  if (n.is(RegexKind::kEpsilon)) return "EMPTY";
  if (n.is(RegexKind::kEmptySet)) throw PreconditionError("no DTD form for an empty language");
  std::string t = dtd_term(n);
  return t.front() == '(' ? t : "(" + t + ")";
}

}  // namespace rexinfer
