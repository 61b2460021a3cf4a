#include "prionet/config.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace prionet {

ParseError::ParseError(std::size_t line, const std::string& message)
    : ModelError(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::regex& header_global() {
  static const std::regex re(R"(^\[\s*global\s*\]$)");
  return re;
}
const std::regex& header_neuron() {
  static const std::regex re(R"(^\[\s*neuron\s+(\d+)\s*\]$)");
  return re;
}
const std::regex& header_edge() {
  static const std::regex re(R"(^\[\s*edge\s+(\d+)\s*->\s*(\d+)\s*\]$)");
  return re;
}
const std::regex& entry_re() {
  static const std::regex re(R"(^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)$)");
  return re;
}
const std::regex& number_re() {
  static const std::regex re(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  return re;
}

std::size_t parse_id(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(line, "invalid index '" + s + "'");
  if (v == 0) throw ParseError(line, "neuron indices start at 1");
  return v;
}

double parse_number(const std::string& s, std::size_t line) {
  if (!std::regex_match(s, number_re())) throw ParseError(line, "syntax error: '" + s + "' is not a number");
  // from_chars rejects a leading '+'
  const std::size_t skip = (!s.empty() && s[0] == '+') ? 1 : 0;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data() + skip, s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(line, "number out of range: '" + s + "'");
  }
  return v;
}

const std::set<std::string>& allowed_keys(char kind) {
  static const std::set<std::string> global{"d", "p", "y_c", "T", "K", "mu", "alpha_sink"};
  static const std::set<std::string> neuron{"K", "mu", "T", "alpha_sink"};
  static const std::set<std::string> edge{"alpha", "kappa"};
  return kind == 'g' ? global : kind == 'n' ? neuron : edge;
}

}  // namespace

ModelDocument parse_document(std::string_view text) {
  ModelDocument doc;
  Section* current = nullptr;
  char kind = 0;
  std::string label;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line(trim(raw));
    if (line.empty()) continue;

    std::smatch m;
    if (line.front() == '[') {
      if (std::regex_match(line, header_global())) {
        if (doc.global) throw ParseError(line_no, "duplicate section [global]");
        doc.global.emplace();
        current = &*doc.global;
        kind = 'g';
        label = "[global]";
      } else if (std::regex_match(line, m, header_neuron())) {
        const std::size_t id = parse_id(m[1], line_no);
        if (doc.neurons.count(id)) throw ParseError(line_no, "duplicate section [neuron " + m[1].str() + "]");
        current = &doc.neurons[id];
        kind = 'n';
        label = "[neuron " + m[1].str() + "]";
      } else if (std::regex_match(line, m, header_edge())) {
        const std::size_t from = parse_id(m[1], line_no);
        const std::size_t to = parse_id(m[2], line_no);
        if (from == to) throw ParseError(line_no, "self-edge on neuron " + m[1].str());
        const auto key = std::make_pair(from, to);
        if (doc.edges.count(key)) {
          throw ParseError(line_no, "duplicate section [edge " + m[1].str() + " -> " + m[2].str() + "]");
        }
        current = &doc.edges[key];
        doc.edge_order.push_back(key);
        kind = 'e';
        label = "[edge " + m[1].str() + " -> " + m[2].str() + "]";
      } else {
        throw ParseError(line_no, "syntax error: unrecognised section header '" + line + "'");
      }
      current->line = line_no;
      continue;
    }

    if (!std::regex_match(line, m, entry_re())) {
      throw ParseError(line_no, "syntax error: expected 'key = value', got '" + line + "'");
    }
    if (current == nullptr) throw ParseError(line_no, "entry outside of any section");
    const std::string key = m[1];
    if (!allowed_keys(kind).count(key)) throw ParseError(line_no, "unknown key '" + key + "' in " + label);
    if (current->values.count(key)) throw ParseError(line_no, "duplicate key '" + key + "' in " + label);
    current->values[key] = parse_number(m[2], line_no);
    current->lines[key] = line_no;
  }
  return doc;
}

NetworkModel to_model(const ModelDocument& doc) {
  if (!doc.global) throw ParseError(0, "missing [global] section");
  const Section& g = *doc.global;
  auto require_global = [&](const char* key) {
    const auto it = g.values.find(key);
    if (it == g.values.end()) throw ParseError(g.line, std::string("missing key '") + key + "' in [global]");
    return it->second;
  };
  const double d = require_global("d");
  const HillResponse hill{require_global("p"), require_global("y_c")};

  if (doc.neurons.empty()) throw ParseError(0, "model defines no neurons");
  const std::size_t n = doc.neurons.rbegin()->first;
  for (std::size_t id = 1; id <= n; ++id) {
    if (!doc.neurons.count(id)) {
      const auto after = doc.neurons.upper_bound(id);
      throw ParseError(after->second.line,
                       "non-contiguous neuron ids: neuron " + std::to_string(id) + " is missing");
    }
  }

  std::vector<NeuronParams> neurons;
  neurons.reserve(n);
  for (const auto& [id, sec] : doc.neurons) {
    auto value = [&](const char* key, std::optional<double> fallback) {
      if (const auto it = sec.values.find(key); it != sec.values.end()) return it->second;
      if (const auto it = g.values.find(key); it != g.values.end()) return it->second;
      if (fallback) return *fallback;
      throw ParseError(sec.line, "neuron " + std::to_string(id) + ": missing key '" + key +
                                     "' and no [global] default");
    };
    NeuronParams p;
    p.K = value("K", std::nullopt);
    p.mu = value("mu", std::nullopt);
    p.T = value("T", std::nullopt);
    p.alpha_sink = value("alpha_sink", 0.0);
    neurons.push_back(p);
  }

  std::vector<Edge> edges;
  edges.reserve(doc.edge_order.size());
  for (const auto& key : doc.edge_order) {
    const Section& sec = doc.edges.at(key);
    const std::string label = "[edge " + std::to_string(key.first) + " -> " + std::to_string(key.second) + "]";
    if (key.first > n || key.second > n) throw ParseError(sec.line, "edge to unknown neuron in " + label);
    auto value = [&](const char* k) {
      const auto it = sec.values.find(k);
      if (it == sec.values.end()) throw ParseError(sec.line, std::string("missing key '") + k + "' in " + label);
      return it->second;
    };
    edges.push_back(Edge{key.first - 1, key.second - 1, value("alpha"), value("kappa")});
  }
  return NetworkModel(std::move(neurons), std::move(edges), d, hill);
}

NetworkModel parse_model(std::string_view text) { return to_model(parse_document(text)); }

NetworkModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_full(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, p);
}

std::string emit_model(const NetworkModel& model) {
  std::ostringstream os;
  os << "[global]\n";
  os << "d = " << format_number(model.d()) << '\n';
  os << "p = " << format_number(model.hill().p) << '\n';
  os << "y_c = " << format_number(model.hill().y_c) << '\n';
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& nrn = model.neuron(i);
    os << "\n[neuron " << i + 1 << "]\n";
    os << "K = " << format_number(nrn.K) << '\n';
    os << "mu = " << format_number(nrn.mu) << '\n';
    os << "T = " << format_number(nrn.T) << '\n';
    os << "alpha_sink = " << format_number(nrn.alpha_sink) << '\n';
  }
  for (const auto& e : model.edges()) {
    os << "\n[edge " << e.from + 1 << " -> " << e.to + 1 << "]\n";
    os << "alpha = " << format_number(e.alpha) << '\n';
    os << "kappa = " << format_number(e.kappa) << '\n';
  }
  return os.str();
}

}  // namespace prionet
