#include "stochopt/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "stochopt/error.hpp"

namespace stochopt {

namespace {

/// A JSON value together with its path from the document root.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SchemaError, (path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) Node(j_, child(key)).fail("missing field");
    return Node(j_.at(key), child(key));
  }
  std::optional<Node> find(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) return std::nullopt;
    return Node(j_.at(key), child(key));
  }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  Node operator[](std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].number());
    return out;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].str());
    return out;
  }
  Eigen::VectorXd vector(Eigen::Index expected = -1) const {
    const auto v = numbers();
    if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected)
      fail("expected " + std::to_string(expected) + " entries, found " + std::to_string(v.size()));
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  /// Row-major array of rows. `cols` fixes the width when known, which also
  /// lets an empty array stand for a 0 × cols matrix.
  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) const {
    const std::size_t r = size();
    if (rows >= 0 && static_cast<Eigen::Index>(r) != rows)
      fail("expected " + std::to_string(rows) + " rows, found " + std::to_string(r));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), cols);
    for (std::size_t i = 0; i < r; ++i) m.row(static_cast<Eigen::Index>(i)) = (*this)[i].vector(cols).transpose();
    return m;
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& j_;
  std::string path_;
};

using Index = std::map<std::string, int>;

Index index_of(const std::vector<std::string>& ids, const Node& where) {
  Index idx;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!idx.emplace(ids[i], static_cast<int>(i)).second) where[i].fail("duplicate id '" + ids[i] + "'");
  return idx;
}

int lookup(const Index& idx, const Node& n, const char* what) {
  const std::string id = n.str();
  const auto it = idx.find(id);
  if (it == idx.end()) n.fail(std::string("unknown ") + what + " '" + id + "'");
  return it->second;
}

Mask lookup_set(const Index& idx, const Node& n, const char* what) {
  Mask m = 0;
  for (std::size_t i = 0; i < n.size(); ++i) m |= bit(lookup(idx, n[i], what));
  return m;
}

std::pair<int, int> lookup_pair(const Index& idx, const Node& n, const char* what) {
  if (n.size() != 2) n.fail("expected a pair");
  return {lookup(idx, n[0], what), lookup(idx, n[1], what)};
}

Json names_of(Mask m, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (int i : members(m)) out.push_back(names[i]);
  return out;
}

// Library errors raised while assembling a value are re-tagged with the
// field they came from.
template <class F>
auto at_field(const Node& n, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaError) throw;
    n.fail(e.what());
  }
}

ProblemPayload payload_from(const Node& p, const Index& clients, const Index& elements, int num_elements,
                            int num_clients) {
  const std::string kind = p.at("kind").str();
  if (kind == "steiner") {
    SteinerGraph g;
    const Node edges = p.at("edges");
    if (static_cast<int>(edges.size()) != num_elements) edges.fail("one edge per element is required");
    for (std::size_t e = 0; e < edges.size(); ++e) g.endpoints.push_back(lookup_pair(clients, edges[e], "client"));
    if (auto root = p.find("root")) g.root = lookup(clients, *root, "client");
    return g;
  }
  if (kind == "ufl") {
    FacilityLocation fl;
    const Node fac = p.at("facilities");
    for (std::size_t i = 0; i < fac.size(); ++i) fl.facilities.push_back(lookup(elements, fac[i], "element"));
    const Node links = p.at("links");
    for (std::size_t k = 0; k < links.size(); ++k) {
      const Node l = links[k];
      fl.links.push_back({lookup(elements, l.at("element"), "element"), lookup(elements, l.at("facility"), "element"),
                          lookup(clients, l.at("client"), "client")});
    }
    return fl;
  }
  if (kind == "set_cover") {
    SetSystem s;
    const Node sets = p.at("sets");
    if (static_cast<int>(sets.size()) != num_elements) sets.fail("one member list per element is required");
    for (std::size_t e = 0; e < sets.size(); ++e) s.covers.push_back(lookup_set(clients, sets[e], "client"));
    return s;
  }
  if (kind == "vertex_cover") {
    VertexCoverGraph g;
    const Node edges = p.at("edges");
    if (static_cast<int>(edges.size()) != num_clients) edges.fail("one endpoint pair per client is required");
    for (std::size_t j = 0; j < edges.size(); ++j) g.endpoints.push_back(lookup_pair(elements, edges[j], "element"));
    return g;
  }
  p.at("kind").fail("unknown problem kind '" + kind + "' (steiner, ufl, set_cover, vertex_cover)");
}

ScenarioDistribution distribution_from(const Node& d, const Index& clients, int n) {
  const std::string kind = d.at("kind").str();
  if (kind == "explicit") {
    std::vector<WeightedScenario> sc;
    const Node list = d.at("scenarios");
    for (std::size_t k = 0; k < list.size(); ++k)
      sc.push_back({lookup_set(clients, list[k].at("clients"), "client"), list[k].at("p").number()});
    return at_field(d, [&] { return ScenarioDistribution::explicit_support(n, std::move(sc)); });
  }
  if (kind == "independent") {
    std::vector<double> p(n, 0.0);
    const Node m = d.at("marginals");
    if (!m.json().is_object()) m.fail("expected an object mapping client ids to probabilities");
    for (const auto& [key, value] : m.json().items()) {
      const auto it = clients.find(key);
      if (it == clients.end()) m.at(key).fail("unknown client '" + key + "'");
      p[it->second] = m.at(key).number();
    }
    return at_field(d, [&] { return ScenarioDistribution::independent(std::move(p)); });
  }
  if (kind == "k_partition") {
    std::vector<Mask> blocks;
    const Node b = d.at("blocks");
    for (std::size_t k = 0; k < b.size(); ++k) blocks.push_back(lookup_set(clients, b[k], "client"));
    return at_field(d, [&] { return ScenarioDistribution::k_partition(n, std::move(blocks)); });
  }
  d.at("kind").fail("unknown distribution kind '" + kind + "' (explicit, independent, k_partition)");
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

InstanceKind detect_instance_kind(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "<root>: expected an object");
  if (j.contains("function")) return InstanceKind::Gap;
  if (j.contains("first_stage_cost") || j.contains("two_stage_ufl")) return InstanceKind::StochasticLP;
  return InstanceKind::TwoStage;
}

TwoStageInstance two_stage_from_json(const Json& j) {
  const Node root(j, "");
  const Node cl = root.at("clients");
  const auto client_ids = cl.strings();
  const Index clients = index_of(client_ids, cl);
  const Node el = root.at("elements");
  std::vector<std::string> element_ids;
  std::vector<double> costs;
  for (std::size_t e = 0; e < el.size(); ++e) {
    element_ids.push_back(el[e].at("id").str());
    const Node cost = el[e].at("cost");
    costs.push_back(cost.number());
    if (costs.back() < 0) cost.fail("cost must be nonnegative");
  }
  const Index elements = index_of(element_ids, el);
  const double sigma = root.find("sigma") ? root.at("sigma").number() : 1.0;
  if (sigma < 1.0) root.at("sigma").fail("inflation factor must be at least 1");
  const int n = static_cast<int>(client_ids.size());
  const int m = static_cast<int>(element_ids.size());
  if (n > kMaxGround) cl.fail("too many clients");
  if (m > kMaxGround) el.fail("too many elements");
  ProblemPayload payload = payload_from(root.at("problem"), clients, elements, m, n);
  ProblemInstance problem = at_field(root, [&] {
    return ProblemInstance(client_ids, element_ids, costs, sigma, std::move(payload));
  });
  ScenarioDistribution dist = root.find("distribution")
                                  ? distribution_from(root.at("distribution"), clients, n)
                                  : ScenarioDistribution::point_mass(n, full_mask(n));
  return {std::move(problem), std::move(dist)};
}

Json to_json(const ProblemInstance& problem, const ScenarioDistribution& dist) {
  const auto& cn = problem.clients();
  const auto& en = problem.elements();
  Json j;
  j["clients"] = cn;
  j["elements"] = Json::array();
  for (int e = 0; e < problem.num_elements(); ++e) j["elements"].push_back({{"id", en[e]}, {"cost", problem.costs()[e]}});
  j["sigma"] = problem.sigma();

  Json p;
  p["kind"] = to_string(problem.kind());
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, SteinerGraph>) {
          p["edges"] = Json::array();
          for (auto [u, v] : payload.endpoints) p["edges"].push_back({cn[u], cn[v]});
          if (payload.root >= 0) p["root"] = cn[payload.root];
        } else if constexpr (std::is_same_v<T, FacilityLocation>) {
          p["facilities"] = Json::array();
          for (int f : payload.facilities) p["facilities"].push_back(en[f]);
          p["links"] = Json::array();
          for (const auto& l : payload.links)
            p["links"].push_back({{"element", en[l.element]}, {"facility", en[l.facility]}, {"client", cn[l.client]}});
        } else if constexpr (std::is_same_v<T, SetSystem>) {
          p["sets"] = Json::array();
          for (Mask c : payload.covers) p["sets"].push_back(names_of(c, cn));
        } else if constexpr (std::is_same_v<T, VertexCoverGraph>) {
          p["edges"] = Json::array();
          for (auto [u, v] : payload.endpoints) p["edges"].push_back({en[u], en[v]});
        } else {
          throw Error(ErrorKind::InvalidArgument, "custom oracles cannot be serialised");
        }
      },
      problem.payload());
  j["problem"] = p;

  Json d;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScenarioDistribution::Explicit>) {
          d["kind"] = "explicit";
          d["scenarios"] = Json::array();
          for (const auto& s : v.scenarios) d["scenarios"].push_back({{"clients", names_of(s.clients, cn)}, {"p", s.probability}});
        } else if constexpr (std::is_same_v<T, ScenarioDistribution::IndependentBernoulli>) {
          d["kind"] = "independent";
          d["marginals"] = Json::object();
          for (std::size_t i = 0; i < v.marginals.size(); ++i) d["marginals"][cn[i]] = v.marginals[i];
        } else {
          d["kind"] = "k_partition";
          d["blocks"] = Json::array();
          for (Mask b : v.blocks) d["blocks"].push_back(names_of(b, cn));
        }
      },
      dist.variant());
  j["distribution"] = d;
  return j;
}

GapInstance gap_from_json(const Json& j) {
  const Node root(j, "");
  const Node it = root.at("items");
  const auto names = it.strings();
  index_of(names, it);
  const int n = static_cast<int>(names.size());
  const Node marg = root.at("marginals");
  const auto p = marg.numbers();
  if (static_cast<int>(p.size()) != n) marg.fail("one marginal per item is required");

  const Node f = root.at("function");
  const std::string kind = f.at("kind").str();
  auto build = [&]() -> SetFunction {
    if (kind == "table") {
      if (n > 16) it.fail("value tables are limited to 16 items");
      const Node v = f.at("values");
      if (v.size() != (std::size_t{1} << n)) v.fail("expected 2^" + std::to_string(n) + " values indexed by item mask");
      return at_field(v, [&] { return SetFunction(n, v.numbers()); });
    }
    if (kind == "cardinality") return SetFunction::cardinality(n);
    if (kind == "coverage") {
      const Node w = f.at("weights");
      const auto weights = w.numbers();
      const Node c = f.at("covers");
      if (static_cast<int>(c.size()) != n) c.fail("one cover list per item is required");
      std::vector<Mask> covers;
      for (std::size_t i = 0; i < c.size(); ++i) {
        Mask m = 0;
        for (std::size_t k = 0; k < c[i].size(); ++k) {
          const long long pt = c[i][k].integer();
          if (pt < 0 || pt >= static_cast<long long>(weights.size())) c[i][k].fail("point index out of range");
          m |= bit(static_cast<int>(pt));
        }
        covers.push_back(m);
      }
      return at_field(f, [&] { return SetFunction::coverage(covers, weights); });
    }
    if (kind == "weighted_rank") {
      const Node w = f.at("weights");
      if (w.size() != static_cast<std::size_t>(n)) w.fail("one weight per item is required");
      return at_field(f, [&] { return SetFunction::weighted_rank(w.numbers(), static_cast<int>(f.at("rank").integer())); });
    }
    f.at("kind").fail("unknown function kind '" + kind + "' (table, cardinality, coverage, weighted_rank)");
  };
  if (n > kMaxTabulatedGround) it.fail("too many items");
  SetFunction fn = build();
  return at_field(root, [&] { return GapInstance(std::move(fn), p, names); });
}

Json gap_to_json(const CoverageSpec& spec, const std::vector<double>& marginals) {
  Json j;
  j["items"] = Json::array();
  for (std::size_t i = 0; i < spec.covers.size(); ++i) j["items"].push_back("i" + std::to_string(i + 1));
  j["marginals"] = marginals;
  Json f;
  f["kind"] = "coverage";
  f["weights"] = spec.weights;
  f["covers"] = Json::array();
  for (Mask c : spec.covers) f["covers"].push_back(members(c));
  j["function"] = f;
  return j;
}

StochasticLPInstance stochastic_lp_from_json(const Json& j) {
  const Node root(j, "");
  if (auto u = root.find("two_stage_ufl")) {
    TwoStageUfl ufl;
    ufl.first_stage_opening = u->at("first_stage_opening").vector();
    const Eigen::Index nf = ufl.first_stage_opening.size();
    const Node dist = u->at("distance");
    const Eigen::Index nc = dist.size() > 0 ? static_cast<Eigen::Index>(dist[0].size()) : 0;
    ufl.distance = dist.matrix(nf, nc);
    const Node sc = u->at("scenarios");
    for (std::size_t k = 0; k < sc.size(); ++k) {
      TwoStageUfl::Scenario s;
      s.probability = sc[k].at("probability").number();
      const Node cl = sc[k].at("clients");
      for (std::size_t i = 0; i < cl.size(); ++i) {
        const long long c = cl[i].integer();
        if (c < 0 || c >= nc) cl[i].fail("client index out of range");
        s.clients.push_back(static_cast<int>(c));
      }
      s.opening_cost = sc[k].at("opening_cost").vector(nf);
      ufl.scenarios.push_back(std::move(s));
    }
    return at_field(*u, [&] { return encode_ufl(ufl); });
  }

  const Eigen::VectorXd wi = root.at("first_stage_cost").vector();
  const Eigen::Index m = wi.size();
  Polytope poly;
  if (auto p = root.find("polytope")) {
    poly.rows = p->at("rows").matrix(-1, m);
    poly.rhs = p->at("rhs").vector(poly.rows.rows());
  }
  const double radius = root.find("radius") ? root.at("radius").number() : 0.0;
  std::vector<ScenarioBlock> blocks;
  const Node sc = root.at("scenarios");
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const Node s = sc[k];
    ScenarioBlock b;
    b.label = s.find("label") ? s.at("label").str() : "A" + std::to_string(k);
    b.probability = s.at("probability").number();
    b.recourse_cost = s.at("recourse_cost").vector(m);
    b.assignment_cost = s.at("assignment_cost").vector();
    b.requirement = s.at("j").vector();
    b.technology = s.at("T").matrix(b.requirement.size(), m);
    b.assignment_matrix = s.at("D").matrix(b.requirement.size(), b.assignment_cost.size());
    blocks.push_back(std::move(b));
  }
  return at_field(root, [&] { return StochasticLPInstance(wi, std::move(blocks), std::move(poly), radius); });
}

Json to_json(const StochasticLPInstance& inst) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  auto mat = [&](const Eigen::MatrixXd& a) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) rows.push_back(vec(a.row(r).transpose()));
    return rows;
  };
  Json j;
  j["first_stage_cost"] = vec(inst.first_stage_cost());
  if (inst.polytope().rows.rows() > 0) j["polytope"] = {{"rows", mat(inst.polytope().rows)}, {"rhs", vec(inst.polytope().rhs)}};
  j["radius"] = inst.radius();
  j["scenarios"] = Json::array();
  for (const auto& s : inst.scenarios()) {
    j["scenarios"].push_back({{"label", s.label},
                              {"probability", s.probability},
                              {"recourse_cost", vec(s.recourse_cost)},
                              {"assignment_cost", vec(s.assignment_cost)},
                              {"D", mat(s.assignment_matrix)},
                              {"T", mat(s.technology)},
                              {"j", vec(s.requirement)}});
  }
  return j;
}

}  // namespace stochopt
