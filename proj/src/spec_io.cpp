#include "rtg/spec_io.hpp"

#include <map>

#include "rtg/error.hpp"

namespace rtg {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(std::string("spec is missing \"") + key + "\"");
  return j.at(key);
}

std::string kind_of(const json& j) {
  const json& k = need(j, "kind");
  if (!k.is_string()) throw SpecError("\"kind\" must be a string");
  return k.get<std::string>();
}

json rat(const Rational& r) { return to_string(r); }

template <class T>
T get_as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("bad value for ") + what);
  }
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw SpecError("expected a rational (\"p/q\" string or number)");
}

json partition_to_json(const Partition& p) { return {{"n", p.n()}, {"blocks", p.blocks()}}; }

Partition partition_from_json(const json& j) {
  int n = get_as<int>(need(j, "n"), "n");
  auto blocks = get_as<std::vector<std::vector<int>>>(need(j, "blocks"), "blocks");
  return Partition(n, blocks);
}

json family_to_json(const PartitionFamily& f) {
  if (auto s = dynamic_cast<const StepFamily*>(&f)) {
    json ph = json::array();
    for (const auto& p : s->phases()) ph.push_back({{"from", p.from}, {"x", rat(p.x.rational())}});
    return {{"kind", "step"}, {"start", s->start()}, {"phases", ph}};
  }
  if (auto m = dynamic_cast<const ModuloFamily*>(&f)) return {{"kind", "modulo"}, {"m", m->modulus()}};
  if (auto p = dynamic_cast<const PaintboxFamily*>(&f))
    return {{"kind", "paintbox"}, {"s", p->frequencies()}, {"seed", p->seed()}};
  throw SpecError("family cannot be serialized: " + f.describe());
}

FamilyPtr family_from_json(const json& j) {
  const std::string k = kind_of(j);
  if (k == "step") {
    int start = get_as<int>(need(j, "start"), "start");
    std::vector<StepFamily::Phase> phases;
    for (const auto& p : need(j, "phases"))
      phases.push_back({get_as<std::int64_t>(need(p, "from"), "from"), StepRatio::of(rational_from_json(need(p, "x")))});
    return std::make_shared<StepFamily>(start, std::move(phases));
  }
  if (k == "modulo") return std::make_shared<ModuloFamily>(get_as<int>(need(j, "m"), "m"));
  if (k == "paintbox")
    return std::make_shared<PaintboxFamily>(get_as<std::vector<double>>(need(j, "s"), "s"),
                                            j.value("seed", std::uint64_t{1}));
  throw SpecError("unknown family kind \"" + k + "\"");
}

json model_to_json(const GrowthModel& m) {
  switch (m.kind()) {
    case ModelKind::Ford: return {{"kind", "ford"}, {"alpha", rat(m.alpha())}};
    case ModelKind::AlphaGamma: return {{"kind", "alpha_gamma"}, {"alpha", rat(m.alpha())}, {"gamma", rat(m.second())}};
    case ModelKind::AlphaTheta: return {{"kind", "alpha_theta"}, {"alpha", rat(m.alpha())}, {"theta", rat(m.second())}};
    case ModelKind::PoissonDirichlet:
      return {{"kind", "poisson_dirichlet"}, {"alpha", rat(m.alpha())}, {"theta", rat(m.second())}};
    case ModelKind::FromKappa: return {{"kind", "from_kappa"}, {"measure", measure_to_json(*m.kappa())}};
  }
  throw SpecError("unknown model");
}

GrowthModel model_from_json(const json& j) {
  const std::string k = kind_of(j);
  auto r = [&](const char* key) { return rational_from_json(need(j, key)); };
  if (k == "ford") return GrowthModel::ford(r("alpha"));
  if (k == "alpha_gamma") return GrowthModel::alpha_gamma(r("alpha"), r("gamma"));
  if (k == "alpha_theta") return GrowthModel::alpha_theta(r("alpha"), r("theta"));
  if (k == "poisson_dirichlet") return GrowthModel::poisson_dirichlet(r("alpha"), r("theta"));
  if (k == "from_kappa")
    return GrowthModel::from_kappa(std::make_shared<const DislocationMeasure>(measure_from_json(need(j, "measure"))));
  throw SpecError("unknown model kind \"" + k + "\"");
}

json measure_to_json(const DislocationMeasure& d) {
  using K = DislocationMeasure::Kind;
  json out;
  switch (d.kind()) {
    case K::FiniteAtomic: {
      json atoms = json::array();
      for (const auto& a : d.atoms()) {
        json w = a.exact ? rat(*a.exact) : json(a.weight);
        atoms.push_back({{"family", family_to_json(*a.family)}, {"weight", w}});
      }
      out = {{"kind", "finite_atomic"}, {"atoms", atoms}};
      if (d.tail()) out["tail"] = {{"gamma", d.tail()->gamma}, {"first", d.tail()->first}};
      break;
    }
    case K::OrderedBeta: out = {{"kind", "ordered_beta"}, {"alpha", rat(d.alpha())}, {"theta", rat(d.theta())}}; break;
    case K::PaintboxAtoms: {
      json atoms = json::array();
      for (const auto& a : d.paintbox()) {
        json s = json::array();
        for (const auto& x : a.s) s.push_back(rat(x));
        atoms.push_back({{"s", s}, {"weight", rat(a.weight)}});
      }
      out = {{"kind", "paintbox"}, {"atoms", atoms}};
      break;
    }
    case K::BrownianPaintbox: return {{"kind", "brownian"}, {"scale", d.scale_d()}};
    case K::FromGrowthRule:
      out = {{"kind", "from_growth_rule"}, {"model", model_to_json(*d.model())}, {"lambda2", rat(d.lambda2())}};
      break;
  }
  if (d.scale_exact()) {
    if (d.scale() != 1) out["scale"] = rat(d.scale());
  } else if (d.scale_d() != 1.0) {
    out["scale"] = d.scale_d();
  }
  return out;
}

DislocationMeasure measure_from_json(const json& j) {
  const std::string k = kind_of(j);
  DislocationMeasure d;
  if (k == "finite_atomic") {
    std::vector<Atom> atoms;
    for (const auto& a : need(j, "atoms")) {
      Atom at;
      at.family = family_from_json(need(a, "family"));
      const json& w = need(a, "weight");
      if (w.is_number_float()) at.weight = w.get<double>();
      else at.exact = rational_from_json(w);
      atoms.push_back(std::move(at));
    }
    std::optional<PowerTail> tail;
    if (j.contains("tail")) {
      const json& t = j.at("tail");
      tail = PowerTail{get_as<double>(need(t, "gamma"), "gamma"), get_as<int>(need(t, "first"), "first")};
    }
    d = DislocationMeasure::finite_atomic(std::move(atoms), tail);
  } else if (k == "ordered_beta") {
    d = DislocationMeasure::ordered_beta(rational_from_json(need(j, "alpha")), rational_from_json(need(j, "theta")));
  } else if (k == "paintbox") {
    std::vector<PaintboxAtom> atoms;
    for (const auto& a : need(j, "atoms")) {
      PaintboxAtom p;
      for (const auto& x : need(a, "s")) p.s.push_back(rational_from_json(x));
      p.weight = a.contains("weight") ? rational_from_json(a.at("weight")) : Rational(1);
      atoms.push_back(std::move(p));
    }
    d = DislocationMeasure::paintbox_atoms(std::move(atoms));
  } else if (k == "brownian") {
    return DislocationMeasure::brownian_paintbox(j.contains("scale") ? get_as<double>(j.at("scale"), "scale") : 1.0);
  } else if (k == "from_growth_rule") {
    Rational l2 = j.contains("lambda2") ? rational_from_json(j.at("lambda2")) : Rational(1);
    d = DislocationMeasure::from_growth_rule(model_from_json(need(j, "model")), l2);
  } else {
    throw SpecError("unknown measure kind \"" + k + "\"");
  }
  if (j.contains("scale")) {
    const json& s = j.at("scale");
    d = s.is_number_float() ? d.scaled(s.get<double>()) : d.scaled(rational_from_json(s));
  }
  return d;
}

json tree_to_json(const LabelledTree& t) {
  json edges = json::array(), labels = json::object();
  for (int v = 0; v < t.node_count(); ++v) {
    const auto& nd = t.node(v);
    for (int c : nd.children) edges.push_back({v, c, t.node(c).length});
    if (t.is_leaf(v)) labels[std::to_string(v)] = nd.label;
  }
  return {{"root", 0}, {"edges", edges}, {"leaf_labels", labels}};
}

LabelledTree tree_from_json(const json& j) {
  const long root = get_as<long>(need(j, "root"), "root");
  std::map<long, int> id{{root, 0}};
  LabelledTree t;
  auto& nodes = t.raw_nodes();
  nodes.assign(1, LabelledTree::Node{});
  auto node = [&](long ext) {
    auto [it, fresh] = id.emplace(ext, static_cast<int>(nodes.size()));
    if (fresh) nodes.emplace_back();
    return it->second;
  };
  for (const auto& e : need(j, "edges")) {
    if (!e.is_array() || e.size() < 2) throw SpecError("edges are [parent, child, length?]");
    int p = node(get_as<long>(e[0], "parent")), c = node(get_as<long>(e[1], "child"));
    if (nodes[c].parent != -1 || c == 0) throw SpecError("node has two parents");
    nodes[c].parent = p;
    nodes[c].length = e.size() > 2 ? get_as<double>(e[2], "length") : 0.0;
    nodes[p].children.push_back(c);
  }
  for (const auto& [k, v] : need(j, "leaf_labels").items()) {
    auto it = id.find(std::stol(k));
    if (it == id.end()) throw SpecError("leaf label on an unknown node");
    nodes[it->second].label = get_as<int>(v, "label");
  }
  t.recompute();
  std::string why;
  if (!t.check_invariants(&why)) throw SpecError("invalid tree: " + why);
  return t;
}

json massfrag_to_json(const MassFragTree& t) {
  if (t.nodes.empty()) return json::object();
  // iterative post-order so deep trees do not exhaust the stack
  std::vector<json> built(t.nodes.size());
  std::vector<std::pair<int, bool>> stack{{0, false}};
  while (!stack.empty()) {
    auto [v, done] = stack.back();
    stack.pop_back();
    const auto& nd = t.nodes[static_cast<size_t>(v)];
    if (!done) {
      stack.emplace_back(v, true);
      for (int c : nd.children) stack.emplace_back(c, false);
      continue;
    }
    json kids = json::array();
    for (int c : nd.children) kids.push_back(std::move(built[static_cast<size_t>(c)]));
    built[static_cast<size_t>(v)] = {{"mass", nd.mass}, {"hold", nd.hold}, {"children", std::move(kids)}};
  }
  return std::move(built[0]);
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("bad JSON: ") + e.what());
  }
}

}  // namespace rtg
