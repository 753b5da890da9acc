#include "pgibbs/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pgibbs/errors.hpp"

namespace pgibbs {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::uint64_t to_index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw InvalidInput(std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

// JSON numbers are read from their shortest decimal form, so 0.1 means 1/10.
Rational weight_of(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw InvalidInput("weight must be a number or a decimal string");
}

std::vector<Rational> weight_vector(const json& j, std::size_t q) {
  if (!j.is_array() || j.size() != q) throw InvalidInput("weight vector must have q entries");
  std::vector<Rational> out;
  for (const json& x : j) out.push_back(weight_of(x));
  return out;
}

WeightMatrix<Rational> weight_matrix(const json& j, std::size_t q) {
  if (!j.is_array() || j.size() != q) throw InvalidInput("matrix must have q rows");
  std::vector<Rational> flat;
  for (const json& row : j) {
    const auto r = weight_vector(row, q);
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return WeightMatrix<Rational>(q, std::move(flat));
}

Edge edge_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("edge must be a pair [u, v]");
  const auto u = static_cast<Vertex>(to_index(j[0], "edge endpoint"));
  const auto v = static_cast<Vertex>(to_index(j[1], "edge endpoint"));
  if (u == v) throw SelfLoop("self-loop at vertex " + std::to_string(u));
  return u < v ? Edge{u, v} : Edge{v, u};
}

json weight_json(const Rational& x) { return x.str(); }

}  // namespace

ExactSpinSystem parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t q = to_index(field(doc, "q"), "q");
  const std::size_t n = to_index(field(doc, "n"), "n");
  if (q == 0) throw InvalidInput("q must be positive");

  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw InvalidInput("edges must be an array");
    for (const json& e : doc["edges"]) edges.push_back(edge_of(e));
  }
  Graph g(n, edges);

  std::vector<std::vector<Rational>> b;
  const json& bj = field(doc, "b");
  if (bj.is_string()) {
    if (bj.get<std::string>() != "uniform") throw InvalidInput("b must be an array or \"uniform\"");
    b.assign(n, std::vector<Rational>(q, Rational(1)));
  } else {
    if (!bj.is_array() || bj.size() != n) throw InvalidInput("b must list one vector per vertex");
    for (const json& row : bj) b.push_back(weight_vector(row, q));
  }

  std::vector<WeightMatrix<Rational>> a;
  if (g.num_edges() > 0) {
    const json& aj = field(doc, "A");
    std::optional<WeightMatrix<Rational>> fallback;
    if (aj.contains("default")) fallback = weight_matrix(aj["default"], q);
    std::map<Edge, WeightMatrix<Rational>> overrides;
    if (aj.contains("overrides")) {
      for (const json& o : aj["overrides"]) {
        const Edge e = edge_of(field(o, "edge"));
        if (!g.has_edge(e.u, e.v)) throw InvalidInput("override for an edge not in the graph");
        if (!overrides.emplace(e, weight_matrix(field(o, "matrix"), q)).second)
          throw DuplicateEdge("edge overridden twice");
      }
    }
    for (const Edge& e : g.edges()) {
      if (const auto it = overrides.find(e); it != overrides.end())
        a.push_back(it->second);
      else if (fallback)
        a.push_back(*fallback);
      else
        throw InvalidInput("edge without a matrix and no default");
    }
  }
  return ExactSpinSystem(std::move(g), q, std::move(b), std::move(a));
}

ExactSpinSystem load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

std::string instance_to_json(const ExactSpinSystem& sys) {
  const std::size_t q = sys.q();
  json doc;
  doc["q"] = q;
  doc["n"] = sys.num_vertices();
  doc["edges"] = json::array();
  for (const Edge& e : sys.graph().edges()) doc["edges"].push_back({e.u, e.v});
  doc["b"] = json::array();
  for (Vertex v = 0; v < sys.num_vertices(); ++v) {
    json row = json::array();
    for (const Rational& x : sys.vertex_weights(v)) row.push_back(weight_json(x));
    doc["b"].push_back(row);
  }
  json overrides = json::array();
  for (EdgeId e = 0; e < sys.graph().num_edges(); ++e) {
    json m = json::array();
    for (Spin i = 0; i < q; ++i) {
      json row = json::array();
      for (Spin j = 0; j < q; ++j) row.push_back(weight_json(sys.edge_weights(e)(i, j)));
      m.push_back(row);
    }
    const Edge& ed = sys.graph().edge(e);
    overrides.push_back({{"edge", {ed.u, ed.v}}, {"matrix", m}});
  }
  doc["A"] = {{"overrides", overrides}};
  return doc.dump();
}

UpdateBatch<Rational> parse_update(std::string_view text, std::size_t q) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InvalidInput("update must be a JSON object");
  UpdateBatch<Rational> upd;
  if (doc.contains("vertices")) {
    for (const json& vj : doc["vertices"])
      upd.vertices.push_back({static_cast<Vertex>(to_index(field(vj, "v"), "v")), weight_vector(field(vj, "b"), q)});
  }
  if (doc.contains("edges")) {
    for (const json& ej : doc["edges"]) upd.edges.push_back({edge_of(field(ej, "edge")), weight_matrix(field(ej, "matrix"), q)});
  }
  return upd;
}

UpdateBatch<Rational> load_update(const std::filesystem::path& path, std::size_t q) {
  return parse_update(read_file(path), q);
}

UpdateBatch<double> to_float(const UpdateBatch<Rational>& upd) {
  UpdateBatch<double> out;
  for (const auto& vu : upd.vertices) {
    std::vector<double> b;
    for (const Rational& x : vu.b) b.push_back(x.convert_to<double>());
    out.vertices.push_back({vu.v, std::move(b)});
  }
  for (const auto& eu : upd.edges) {
    const std::size_t q = eu.matrix.q();
    std::vector<double> m;
    for (Spin i = 0; i < q; ++i)
      for (Spin j = 0; j < q; ++j) m.push_back(eu.matrix(i, j).convert_to<double>());
    out.edges.push_back({eu.edge, WeightMatrix<double>(q, std::move(m))});
  }
  return out;
}

void write_configurations(std::ostream& out, std::span<const Configuration> samples) {
  std::string line;
  for (const Configuration& x : samples) {
    line.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(x[i]);
    }
    line += '\n';
    out << line;
  }
}

std::vector<Configuration> read_configurations(std::istream& in) {
  std::vector<Configuration> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Configuration x;
    long long s;
    while (ss >> s) {
      if (s < 0) throw InvalidInput("negative spin in configuration file");
      x.push_back(static_cast<Spin>(s));
    }
    if (!ss.eof()) throw InvalidInput("malformed configuration line: " + line);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace pgibbs
