#pragma once

// Text formats: extended Newick, edge lists, LP models, JSON reports.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orchardist/core.hpp"
#include "orchardist/errors.hpp"
#include "orchardist/solver.hpp"

namespace orchardist {

// ---------------------------------------------------------------------------
// Extended Newick

namespace detail {

class ENewickParser {
 public:
  explicit ENewickParser(std::string_view text) : text_(text) {}

  PhyloNetwork parse() {
    skip();
    const std::size_t top = subtree();
    skip();
    if (pos_ >= text_.size() || text_[pos_] != ';') fail("expected ';'");
    ++pos_;
    skip();
    if (pos_ != text_.size()) fail("trailing input after ';'");
    for (const auto& [tag, h] : hybrids_) {
      if (h.seen != 2) {
        throw ParseError(ParseError::Reason::kUnbalancedHybridTag,
                         "hybrid tag #" + tag + " appears " + std::to_string(h.seen) +
                             " time(s)",
                         h.first_pos);
      }
    }
    // A top-level node with one child is the root; otherwise the root is
    // implicit and sits above it.
    if (children_count(top) != 1) {
      const std::size_t root = raw_.add_vertex();
      raw_.add_arc(root, top);
    }
    return validate(raw_);
  }

 private:
  struct Hybrid {
    std::size_t vertex;
    int seen = 0;
    std::size_t first_pos = 0;
    bool has_children = false;
    std::string name;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ParseError::Reason::kSyntax, what, pos_);
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {  // comment
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  std::size_t children_count(std::size_t v) const {
    return static_cast<std::size_t>(std::count_if(
        raw_.arcs.begin(), raw_.arcs.end(), [v](const auto& a) { return a.first == v; }));
  }

  std::string name() {
    skip();
    std::string out;
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        if (text_[pos_] == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += text_[pos_++];
      }
      return out;
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ';' || c == ':' || c == '#' ||
          c == '[' || c == '\'' || std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      out += c;
      ++pos_;
    }
    return out;
  }

  void skip_length() {
    skip();
    // Branch lengths, support and probability fields are ignored.
    while (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      skip();
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+')) {
        ++pos_;
      }
      skip();
    }
  }

  // Parses one subtree and returns its vertex.
  std::size_t subtree() {
    skip();
    std::vector<std::size_t> kids;
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      while (true) {
        kids.push_back(subtree());
        skip();
        if (pos_ >= text_.size()) fail("unbalanced parenthesis");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    std::string label = name();
    std::optional<std::string> tag;
    skip();
    if (pos_ < text_.size() && text_[pos_] == '#') {
      ++pos_;
      std::string t;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        t += text_[pos_++];
      }
      if (t.empty() || !std::isdigit(static_cast<unsigned char>(t.back()))) {
        fail("malformed hybrid tag");
      }
      tag = t;
    }
    skip_length();
    if (kids.empty() && label.empty() && !tag) {
      if (pos_ == start) fail("expected a label or '('");
    }

    std::size_t v;
    if (tag) {
      auto [it, fresh] = hybrids_.try_emplace(*tag);
      Hybrid& h = it->second;
      if (fresh) {
        h.vertex = raw_.add_vertex();
        h.first_pos = start;
      }
      ++h.seen;
      if (h.seen > 2) {
        throw ParseError(ParseError::Reason::kUnbalancedHybridTag,
                         "hybrid tag #" + *tag + " appears more than twice", start);
      }
      if (!kids.empty()) {
        if (h.has_children) fail("hybrid #" + *tag + " has two subtrees");
        h.has_children = true;
      }
      if (!label.empty()) h.name = label;
      v = h.vertex;
      if (h.seen == 2) {
        if (!h.has_children && !h.name.empty()) {
          // Both occurrences are leaf-like: the name is a leaf below the hybrid.
          kids.push_back(raw_.add_vertex(h.name));
          h.name.clear();
        }
        raw_.names[v] = h.name.empty() ? "#" + *tag : h.name;
      }
    } else {
      v = raw_.add_vertex(label);
    }
    for (std::size_t c : kids) raw_.add_arc(v, c);
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  RawDigraph raw_;
  std::map<std::string, Hybrid> hybrids_;
};

inline bool plain_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

inline std::string quote_name(const std::string& s) {
  if (plain_name(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace detail

inline PhyloNetwork parse_enewick(std::string_view text) {
  return detail::ENewickParser(text).parse();
}

// Children are written in id order; a reticulation's subtree is written at
// its first visit and later visits emit only the tag. Internal names are
// kept when they are plain identifiers.
inline std::string serialize_enewick(const PhyloNetwork& net) {
  std::map<VertexId, int> tags;
  std::string out;
  auto write = [&](auto&& self, VertexId v) -> void {
    std::optional<int> tag;
    if (net.is_reticulation(v)) {
      auto it = tags.find(v);
      if (it != tags.end()) {
        out += "#H" + std::to_string(it->second);
        return;
      }
      const int k = static_cast<int>(tags.size()) + 1;
      tags[v] = k;
      tag = k;
    }
    auto kids = net.children(v);
    std::sort(kids.begin(), kids.end());
    if (!kids.empty()) {
      out += '(';
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += ',';
        self(self, kids[i]);
      }
      out += ')';
    }
    if (net.is_leaf(v)) {
      out += detail::quote_name(net.label(v));
    } else if (!tag && detail::plain_name(net.name(v))) {
      out += net.name(v);
    }
    if (tag) out += "#H" + std::to_string(*tag);
  };
  write(write, net.root());
  out += ';';
  return out;
}

// ---------------------------------------------------------------------------
// Edge lists

// One "tail head" pair per line; '#' starts a comment. Vertex ids follow
// first appearance, arc ids follow line order.
inline PhyloNetwork parse_edge_list(std::string_view text) {
  RawDigraph raw;
  std::map<std::string, std::size_t> ids;
  auto id = [&](const std::string& name) {
    auto [it, fresh] = ids.try_emplace(name, raw.names.size());
    if (fresh) raw.add_vertex(name);
    return it->second;
  };
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(offset, end - offset));
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string u, v, extra;
    if (in >> u) {
      if (!(in >> v) || (in >> extra)) {
        throw ParseError(ParseError::Reason::kSyntax,
                         "expected exactly two names per line", offset);
      }
      const std::size_t a = id(u);
      const std::size_t b = id(v);
      raw.add_arc(a, b);
    }
    offset = end + 1;
  }
  return validate(raw);
}

// Names every vertex: leaves by label, internal vertices by their name when
// all internal names are plain, distinct and disjoint from the labels, and
// otherwise "n<k>" with k the topological position.
inline std::vector<std::string> output_names(const PhyloNetwork& net) {
  const auto order = net.topological_order();
  std::vector<std::string> names(net.num_vertices());
  std::set<std::string> used;
  for (VertexId v : net.leaves()) used.insert(net.label(v));
  bool keep = true;
  std::set<std::string> internal;
  for (VertexId v : order) {
    if (net.is_leaf(v)) continue;
    const std::string& n = net.name(v);
    keep = keep && detail::plain_name(n) && !used.count(n) && internal.insert(n).second;
  }
  std::size_t k = 0;
  for (VertexId v : order) {
    if (net.is_leaf(v)) {
      names[index(v)] = net.label(v);
      continue;
    }
    if (keep) {
      names[index(v)] = net.name(v);
    } else {
      std::string n;
      do {
        n = "n" + std::to_string(k++);
      } while (used.count(n));
      names[index(v)] = n;
    }
  }
  return names;
}

// Arcs ordered by the topological positions of tail, then head.
inline std::string serialize_edge_list(const PhyloNetwork& net) {
  const auto order = net.topological_order();
  std::vector<std::size_t> pos(net.num_vertices());
  for (std::size_t i = 0; i < order.size(); ++i) pos[index(order[i])] = i;
  const auto names = output_names(net);
  std::vector<ArcId> arcs;
  for (std::size_t i = 0; i < net.num_arcs(); ++i) arcs.push_back(arc_id(i));
  std::sort(arcs.begin(), arcs.end(), [&](ArcId a, ArcId b) {
    return std::pair(pos[index(net.tail(a))], pos[index(net.head(a))]) <
           std::pair(pos[index(net.tail(b))], pos[index(net.head(b))]);
  });
  std::string out;
  for (ArcId a : arcs) {
    out += names[index(net.tail(a))] + " " + names[index(net.head(a))] + "\n";
  }
  return out;
}

enum class NetworkFormat { kENewick, kEdgeList };

// eNewick when the text (ignoring whitespace) ends in ';', edges otherwise.
inline NetworkFormat sniff_format(std::string_view text) {
  auto end = text.find_last_not_of(" \t\r\n");
  if (end != std::string_view::npos && text[end] == ';') return NetworkFormat::kENewick;
  return NetworkFormat::kEdgeList;
}

inline PhyloNetwork parse_network(std::string_view text, NetworkFormat format) {
  return format == NetworkFormat::kENewick ? parse_enewick(text) : parse_edge_list(text);
}

// ---------------------------------------------------------------------------
// LP files

namespace detail {

inline std::string lp_terms(const std::vector<LinearTerm>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (i == 0) {
      if (t.coef < 0) out += "- ";
    } else {
      out += t.coef < 0 ? " - " : " + ";
    }
    if (mag != 1) out += std::to_string(mag) + " ";
    out += t.var;
  }
  return out;
}

}  // namespace detail

inline std::string write_lp(const MilpModel& model) {
  std::string out = "\\ orchard distance model, big-M = " + std::to_string(model.big_m) + "\n";
  out += "Minimize\n obj: ";
  if (model.objective.empty()) {
    out += "0";
  } else {
    for (std::size_t i = 0; i < model.objective.size(); ++i) {
      if (i > 0) out += " + ";
      out += model.objective[i];
    }
  }
  out += "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out += " " + c.name + ": " + detail::lp_terms(c.terms) +
           (c.sense == Sense::kLessEqual ? " <= " : " >= ") + std::to_string(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : model.continuous) out += " " + v + " >= 0\n";
  out += "Binaries\n";
  for (const auto& v : model.binaries) out += " " + v + "\n";
  out += "General\nEnd\n";
  return out;
}

// Counts read back from LP text, section by section.
struct LpCounts {
  std::size_t binaries = 0;
  std::size_t x_vars = 0;
  std::size_t h_vars = 0;
  std::size_t l_vars = 0;
  std::size_t general = 0;
  std::map<int, std::size_t> family;  // constraints per equation number
};

inline LpCounts count_lp(std::string_view text) {
  LpCounts counts;
  std::istringstream in{std::string(text)};
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line[0] != ' ') {
      section = line;
      continue;
    }
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (section == "Subject To" && first.size() > 2 && first[0] == 'c') {
      ++counts.family[first[1] - '0'];
    } else if (section == "Bounds" && first.rfind("l_v", 0) == 0) {
      ++counts.l_vars;
    } else if (section == "Binaries") {
      ++counts.binaries;
      if (first.rfind("x_a", 0) == 0) ++counts.x_vars;
      if (first.rfind("h_v", 0) == 0) ++counts.h_vars;
    } else if (section == "General") {
      ++counts.general;
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// JSON reports

using Json = nlohmann::ordered_json;

// Additions as {arc, tail, head, label} objects.
inline Json additions_json(const PhyloNetwork& net, const std::vector<LeafAddition>& adds) {
  const auto names = output_names(net);
  Json list = Json::array();
  for (const auto& a : adds) {
    list.push_back({{"arc", index(a.arc)},
                    {"tail", names[index(net.tail(a.arc))]},
                    {"head", names[index(net.head(a.arc))]},
                    {"label", a.label}});
  }
  return list;
}

inline Json labelling_json(const PhyloNetwork& net, const NonTemporalLabelling& t) {
  const auto names = output_names(net);
  Json obj = Json::object();
  for (std::size_t i = 0; i < net.num_vertices(); ++i) obj[names[i]] = t.t[i];
  return obj;
}

// First schema violation of a report, or nullopt. Distances, flags and
// certificate fields are optional but typed when present.
inline std::optional<std::string> report_violation(const Json& doc) {
  if (!doc.is_object()) return "report is not an object";
  for (const char* key : {"is_tree_child", "is_orchard", "is_tree_based", "optimal"}) {
    if (doc.contains(key) && !doc[key].is_boolean()) return std::string(key) + " is not a boolean";
  }
  for (const char* key : {"l_tc", "l_tb", "l_or"}) {
    if (doc.contains(key) && !(doc[key].is_number_integer() && doc[key].get<std::int64_t>() >= 0)) {
      return std::string(key) + " is not a nonnegative integer";
    }
  }
  if (doc.contains("additions")) {
    if (!doc["additions"].is_array()) return "additions is not an array";
    for (const auto& a : doc["additions"]) {
      if (!a.is_object() || !a.contains("arc") || !a["arc"].is_number_integer() || a["arc"].get<std::int64_t>() < 0 ||
          !a.contains("label") || !a["label"].is_string()) {
        return "malformed addition";
      }
    }
    if (doc.contains("l_or") && doc["additions"].size() != doc["l_or"].get<std::size_t>()) {
      return "additions and l_or disagree";
    }
  }
  if (doc.contains("labelling")) {
    if (!doc["labelling"].is_object()) return "labelling is not an object";
    for (const auto& [k, v] : doc["labelling"].items()) {
      if (!v.is_number_integer()) return "label of " + k + " is not an integer";
    }
  }
  if (doc.contains("timings") && !doc["timings"].is_object()) return "timings is not an object";
  if (doc.contains("l_tb") && doc.contains("l_or") &&
      doc["l_tb"].get<std::size_t>() > doc["l_or"].get<std::size_t>()) {
    return "l_tb exceeds l_or";
  }
  if (doc.contains("l_or") && doc.contains("l_tc") &&
      doc["l_or"].get<std::size_t>() > doc["l_tc"].get<std::size_t>()) {
    return "l_or exceeds l_tc";
  }
  return std::nullopt;
}

}  // namespace orchardist
