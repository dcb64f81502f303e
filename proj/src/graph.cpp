#include "shaclup/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "shaclup/error.hpp"

namespace shaclup {

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == ':' ||
         c == '/' || c == '.' || c == '#' || c == '-';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

enum class Sort { Class, Property, Node };

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Class: return "class";
    case Sort::Property: return "property";
    case Sort::Node: return "node";
  }
  return "?";
}

// Line-oriented cursor over one facts line. Columns are 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "line " << line_no_ << ", column " << column() << ": " << what;
    throw Error(ErrorKind::Syntax, msg.str());
  }

  // The identifier grammar allows '.', so a trailing terminator is only
  // recognized after ')'.
  std::string identifier() {
    skip_space();
    if (pos_ >= line_.size() || !is_ident_start(line_[pos_]))
      fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < line_.size() && is_ident_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

class SymbolTable {
 public:
  void declare(const std::string& token, Sort sort, std::size_t line_no) {
    auto [it, inserted] = sorts_.emplace(token, sort);
    if (!inserted && it->second != sort) {
      std::ostringstream msg;
      msg << "line " << line_no << ": '" << token << "' used as "
          << sort_name(sort) << " but previously as "
          << sort_name(it->second);
      throw Error(ErrorKind::NameSortClash, msg.str());
    }
  }

 private:
  std::map<std::string, Sort> sorts_;
};

}  // namespace

std::string to_string(const Atom& atom) {
  if (const auto* c = std::get_if<ClassAtom>(&atom))
    return c->cls + "(" + c->node.name() + ")";
  const auto& p = std::get<PropertyAtom>(atom);
  return p.prop + "(" + p.subject.name() + "," + p.object.name() + ")";
}

bool is_identifier(std::string_view token) {
  if (token.empty() || !is_ident_start(token.front())) return false;
  return std::all_of(token.begin(), token.end(), is_ident_char);
}

void DataGraph::add(const Atom& atom) {
  if (const auto* c = std::get_if<ClassAtom>(&atom)) {
    nodes_.insert(c->node);
  } else {
    const auto& p = std::get<PropertyAtom>(atom);
    nodes_.insert(p.subject);
    nodes_.insert(p.object);
  }
  atoms_.insert(atom);
}

void DataGraph::add_class(const std::string& cls, const Node& node) {
  add(ClassAtom{cls, node});
}

void DataGraph::add_property(const std::string& prop, const Node& subject,
                             const Node& object) {
  add(PropertyAtom{prop, subject, object});
}

void DataGraph::remove(const Atom& atom) { atoms_.erase(atom); }

void DataGraph::add_node(const Node& node) { nodes_.insert(node); }

std::set<Node> DataGraph::isolated_nodes() const {
  std::set<Node> used;
  for (const auto& atom : atoms_) {
    if (const auto* c = std::get_if<ClassAtom>(&atom)) {
      used.insert(c->node);
    } else {
      const auto& p = std::get<PropertyAtom>(atom);
      used.insert(p.subject);
      used.insert(p.object);
    }
  }
  std::set<Node> result;
  std::set_difference(nodes_.begin(), nodes_.end(), used.begin(), used.end(),
                      std::inserter(result, result.end()));
  return result;
}

std::set<std::string> DataGraph::class_names() const {
  std::set<std::string> names;
  for (const auto& atom : atoms_)
    if (const auto* c = std::get_if<ClassAtom>(&atom)) names.insert(c->cls);
  return names;
}

std::set<std::string> DataGraph::property_names() const {
  std::set<std::string> names;
  for (const auto& atom : atoms_)
    if (const auto* p = std::get_if<PropertyAtom>(&atom)) names.insert(p->prop);
  return names;
}

DataGraph graph_union(const DataGraph& a, const DataGraph& b) {
  DataGraph result = a;
  for (const auto& atom : b.atoms()) result.add(atom);
  for (const auto& node : b.nodes()) result.add_node(node);
  return result;
}

DataGraph graph_difference(const DataGraph& a, const DataGraph& b) {
  DataGraph result = a;
  for (const auto& atom : b.atoms()) result.remove(atom);
  return result;
}

DataGraph parse_data_graph(std::string_view text) {
  DataGraph graph;
  SymbolTable symbols;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    LineCursor cur(line, line_no);
    if (cur.at_end() || cur.accept('#')) {
      if (end == text.size()) break;
      continue;
    }
    std::string head = cur.identifier();
    cur.expect('(');
    std::string first = cur.identifier();
    if (cur.accept(',')) {
      std::string second = cur.identifier();
      cur.expect(')');
      cur.expect('.');
      if (!cur.at_end()) cur.fail("trailing characters after '.'");
      symbols.declare(head, Sort::Property, line_no);
      symbols.declare(first, Sort::Node, line_no);
      symbols.declare(second, Sort::Node, line_no);
      graph.add_property(head, Node(first), Node(second));
    } else {
      cur.expect(')');
      cur.expect('.');
      if (!cur.at_end()) cur.fail("trailing characters after '.'");
      symbols.declare(first, Sort::Node, line_no);
      if (head == "node") {
        graph.add_node(Node(first));
      } else {
        symbols.declare(head, Sort::Class, line_no);
        graph.add_class(head, Node(first));
      }
    }
    if (end == text.size()) break;
  }
  return graph;
}

std::string serialize_data_graph(const DataGraph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.atoms().size());
  for (const auto& atom : graph.atoms()) lines.push_back(to_string(atom) + ".");
  for (const auto& node : graph.isolated_nodes())
    lines.push_back("node(" + node.name() + ").");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

namespace {

constexpr std::string_view kRdfTypeIri =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

std::string ntriples_term(LineCursor& cur, std::string_view line,
                          std::size_t& pos, std::size_t line_no) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos >= line.size()) cur.fail("unexpected end of triple");
  char c = line[pos];
  if (c == '"') {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line_no) +
                                       ": literals are not supported");
  }
  if (c == '_' && pos + 1 < line.size() && line[pos + 1] == ':') {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line_no) +
                                       ": blank nodes are not supported");
  }
  std::string token;
  if (c == '<') {
    std::size_t close = line.find('>', pos);
    if (close == std::string_view::npos) cur.fail("unterminated IRI");
    token = std::string(line.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  } else {
    std::size_t s = pos;
    while (pos < line.size() && !is_space(line[pos])) ++pos;
    token = std::string(line.substr(s, pos - s));
  }
  if (!is_identifier(token)) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line_no) +
                                       ": '" + token +
                                       "' is not a valid identifier");
  }
  return token;
}

}  // namespace

DataGraph parse_ntriples(std::string_view text) {
  DataGraph graph;
  SymbolTable symbols;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    LineCursor cur(line, line_no);
    if (cur.at_end() || cur.accept('#')) continue;
    std::size_t pos = 0;
    std::string s = ntriples_term(cur, line, pos, line_no);
    std::string p = ntriples_term(cur, line, pos, line_no);
    while (pos < line.size() && is_space(line[pos])) ++pos;
    // The object may be directly followed by the terminating '.'.
    std::string_view rest = line.substr(pos);
    std::size_t dot = rest.rfind('.');
    if (dot == std::string_view::npos) cur.fail("missing '.' after triple");
    std::string_view obj_text = rest.substr(0, dot);
    while (!obj_text.empty() && is_space(obj_text.back()))
      obj_text.remove_suffix(1);
    std::size_t opos = 0;
    std::string o = ntriples_term(cur, obj_text, opos, line_no);

    if (p == kRdfTypeIri || p == "rdf:type" || p == "a") {
      symbols.declare(s, Sort::Node, line_no);
      symbols.declare(o, Sort::Class, line_no);
      graph.add_class(o, Node(s));
    } else {
      symbols.declare(s, Sort::Node, line_no);
      symbols.declare(o, Sort::Node, line_no);
      symbols.declare(p, Sort::Property, line_no);
      graph.add_property(p, Node(s), Node(o));
    }
  }
  return graph;
}

}  // namespace shaclup
