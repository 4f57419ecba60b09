#include "rtg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "rtg/diagnostics.hpp"
#include "rtg/error.hpp"
#include "rtg/fragsim.hpp"
#include "rtg/growth.hpp"
#include "rtg/lamperti.hpp"
#include "rtg/laws.hpp"
#include "rtg/parallel.hpp"
#include "rtg/residual.hpp"
#include "rtg/schedules.hpp"
#include "rtg/stats.hpp"

namespace rtg {

namespace {

struct Table {
  std::string name;
  std::vector<std::string> cols;
  std::vector<std::vector<json>> rows;
};

struct Report {
  explicit Report(std::string c) : command(std::move(c)) {}
  std::string command;
  json meta = json::object();
  std::vector<Table> tables;
  std::vector<std::string> verdicts;
};

std::string cell(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    s = os.str();
  } else if (v.is_null()) {
    s = "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") {
    json out = {{"command", r.command}, {"meta", r.meta}};
    json tables = json::object();
    for (const auto& t : r.tables) {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json o = json::object();
        for (size_t i = 0; i < t.cols.size(); ++i) o[t.cols[i]] = row[i];
        rows.push_back(std::move(o));
      }
      tables[t.name] = std::move(rows);
    }
    out["tables"] = std::move(tables);
    if (!r.verdicts.empty()) out["verdict"] = r.verdicts;
    return out.dump(2) + "\n";
  }
  if (format != "csv") throw SpecError("format must be csv or json for " + r.command);
  std::ostringstream os;
  os << "# command: " << r.command << "\n";
  for (const auto& [k, v] : r.meta.items()) os << "# " << k << ": " << v.dump() << "\n";
  for (const auto& t : r.tables) {
    os << "# table: " << t.name << "\n";
    for (size_t i = 0; i < t.cols.size(); ++i) os << (i ? "," : "") << t.cols[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
      os << "\n";
    }
  }
  for (const auto& v : r.verdicts) os << "# verdict: " << v << "\n";
  return os.str();
}

template <class T>
T opt(const json& q, const char* key, T fallback) {
  if (!q.contains(key) || q.at(key).is_null()) return fallback;
  try {
    return q.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("bad value for \"") + key + "\"");
  }
}

template <class T>
T req(const json& q, const char* key) {
  if (!q.contains(key)) throw SpecError(std::string("request is missing \"") + key + "\"");
  return opt<T>(q, key, T{});
}

std::string fmt(const json& q, const std::string& fallback = "csv") { return opt<std::string>(q, "format", fallback); }
std::uint64_t seed_of(const json& q) { return opt<std::uint64_t>(q, "seed", 1); }
int threads_of(const json& q) { return std::max(1, opt<int>(q, "threads", 1)); }
bool flag(const json& q, const char* key) { return opt<bool>(q, key, false); }
Rational lambda2_of(const json& q) { return q.contains("lambda2") ? rational_from_json(q.at("lambda2")) : Rational(1); }

int positive(const json& q, const char* key, int fallback) {
  int v = opt<int>(q, key, fallback);
  if (v < 1) throw SpecError(std::string("\"") + key + "\" must be positive");
  return v;
}

std::vector<double> times_of(const json& q) {
  auto t = opt<std::vector<double>>(q, "times", {0.25, 0.5});
  for (double x : t)
    if (!(x >= 0)) throw SpecError("times must be non-negative");
  return t;
}

std::string tcol(double t) {
  std::ostringstream os;
  os << "t=" << t;
  return os.str();
}

double as_double(double v) { return v; }
double as_double(const Rational& v) { return v.get_d(); }

std::shared_ptr<IndexedExample> example_of(const json& e) {
  std::string name = e.is_string() ? e.get<std::string>() : req<std::string>(e, "name");
  json o = e.is_object() ? e : json::object();
  double gamma = opt<double>(o, "gamma", 0.5);
  if (name == "power_tail")
    return std::make_shared<IndexedExample>(example_good(gamma, opt<long>(o, "horizon", 1000000)));
  if (name == "half_delay")
    return std::make_shared<IndexedExample>(example_half_delay(gamma, opt<long>(o, "horizon", 200000)));
  if (name == "mixed") return std::make_shared<IndexedExample>(example_mixed(gamma, opt<int>(o, "windows", 2)));
  throw SpecError("unknown example \"" + name + "\" (power_tail, half_delay, mixed)");
}

struct Target {
  std::shared_ptr<const GrowthModel> model;
  std::shared_ptr<const DislocationMeasure> measure;
  std::shared_ptr<const IndexedExample> example;
  json spec;
};

// model -> measure uses lambda2 from the request (1 when absent)
Target target_of(const json& q, bool want_measure, bool unit_lambda2 = false) {
  Target t;
  if (q.contains("example")) {
    t.example = example_of(q.at("example"));
    t.spec = {{"example", q.at("example")}};
    return t;
  }
  if (q.contains("measure")) {
    t.measure = std::make_shared<DislocationMeasure>(measure_from_json(q.at("measure")));
    t.spec = {{"measure", measure_to_json(*t.measure)}};
    return t;
  }
  if (q.contains("model")) {
    t.model = std::make_shared<GrowthModel>(model_from_json(q.at("model")));
    t.spec = {{"model", model_to_json(*t.model)}};
    if (want_measure) {
      Rational l2 = unit_lambda2 ? Rational(1) : lambda2_of(q);
      t.measure = std::make_shared<DislocationMeasure>(DislocationMeasure::from_growth_rule(*t.model, l2));
      t.spec["lambda2"] = to_string(l2);
    }
    return t;
  }
  throw SpecError("request needs a model, measure or example");
}

GrowthModel model_of(const json& q) {
  if (!q.contains("model")) throw SpecError("request needs a model");
  return model_from_json(q.at("model"));
}

double gamma_of(const Target& t, const json& q) {
  if (q.contains("gamma")) return req<double>(q, "gamma");
  if (t.example) return t.example->gamma;
  const GrowthModel* m = t.model.get();
  if (!m && t.measure && t.measure->kind() == DislocationMeasure::Kind::FromGrowthRule) m = t.measure->model().get();
  if (!m && t.measure && t.measure->kind() == DislocationMeasure::Kind::OrderedBeta) return t.measure->alpha().get_d();
  if (!m && t.measure && t.measure->kind() == DislocationMeasure::Kind::FiniteAtomic && t.measure->tail())
    return t.measure->tail()->gamma;
  if (m) {
    switch (m->kind()) {
      case ModelKind::Ford:
      case ModelKind::AlphaTheta:
      case ModelKind::PoissonDirichlet: return m->alpha().get_d();
      case ModelKind::AlphaGamma: return m->second().get_d();
      case ModelKind::FromKappa: break;
    }
  }
  if (!t.measure) throw SpecError("cannot infer gamma; pass \"gamma\"");
  long top = std::min<long>(t.measure->max_level(), 4096);
  std::vector<double> lam(static_cast<size_t>(top + 1), 0.0);
  for (long n = 2; n <= top; ++n) lam[static_cast<size_t>(n)] = t.measure->lambda<double>(static_cast<int>(n));
  return lambda_index(lam, top);
}

// ---------------------------------------------------------------- laws

template <class T>
void laws_tables(const GrowthModel& m, int n, const Rational& l2, bool force, Report& r) {
  auto ex = [](const T& v) -> json {
    if constexpr (std::is_same_v<T, Rational>) return to_string(v);
    else return nullptr;
  };
  Table sp{"splitting", {"partition", "exact", "value"}, {}};
  T total = 0;
  if (n >= 2) {
    for (auto& [pi, p] : splitting_distribution<T>(m, n, force)) {
      sp.rows.push_back({pi.str(), ex(p), as_double(p)});
      total += p;
    }
    sp.rows.push_back({"total", ex(total), as_double(total)});
  }
  r.tables.push_back(std::move(sp));

  Table tr{"trees", {"tree", "exact", "value"}, {}};
  T ttotal = 0;
  for_each_tree(
      n,
      [&](const LabelledTree& t) {
        T p = tree_prob<T>(m, t);
        ttotal += p;
        tr.rows.push_back({to_newick(t), ex(p), as_double(p)});
      },
      force);
  tr.rows.push_back({"total", ex(ttotal), as_double(ttotal)});
  r.tables.push_back(std::move(tr));

  Table lt{"lambda", {"n", "exact", "value", "g0"}, {}};
  auto lam = lambda_seq<T>(m, from_rational<T>(l2), std::max(n, 2));
  for (int k = 1; k <= n; ++k) lt.rows.push_back({k, ex(lam[static_cast<size_t>(k)]), as_double(lam[static_cast<size_t>(k)]), as_double(m.g0<T>(k))});
  r.tables.push_back(std::move(lt));
}

Report cmd_laws(const json& q) {
  GrowthModel m = model_of(q);
  int n = positive(q, "n", 4);
  bool exact = m.exact_capable() && !(q.contains("exact") && !flag(q, "exact"));
  if (flag(q, "exact") && !m.exact_capable()) throw SpecError("exact mode is not available for " + m.describe());
  Report r("laws");
  r.meta = {{"model", model_to_json(m)}, {"n", n}, {"lambda2", to_string(lambda2_of(q))}, {"exact", exact}};
  if (exact) laws_tables<Rational>(m, n, lambda2_of(q), flag(q, "force"), r);
  else laws_tables<double>(m, n, lambda2_of(q), flag(q, "force"), r);
  return r;
}

// ---------------------------------------------------------------- kappa

Report cmd_kappa(const json& q) {
  Target t = target_of(q, true);
  const auto& d = *t.measure;
  int n = positive(q, "n", 3);
  bool exact = d.supports_exact() && !(q.contains("exact") && !flag(q, "exact"));
  if (flag(q, "exact") && !d.supports_exact()) throw SpecError("exact cylinders are not available for " + d.describe());
  Report r("kappa");
  r.meta = t.spec;
  r.meta["n"] = n;
  r.meta["exact"] = exact;
  Table c{"cylinders", {"partition", "exact", "value"}, {}};
  if (n >= 2) {
    for (const auto& pi : nontrivial_partitions(n, flag(q, "force"))) {
      if (exact) {
        Rational v = d.cylinder<Rational>(pi);
        c.rows.push_back({pi.str(), to_string(v), v.get_d()});
      } else {
        c.rows.push_back({pi.str(), nullptr, d.cylinder<double>(pi)});
      }
    }
  }
  r.tables.push_back(std::move(c));
  Table l{"lambda", {"n", "exact", "value"}, {}};
  for (int k = 1; k <= n; ++k) {
    if (exact) {
      Rational v = d.lambda<Rational>(k);
      l.rows.push_back({k, to_string(v), v.get_d()});
    } else {
      l.rows.push_back({k, nullptr, d.lambda<double>(k)});
    }
  }
  r.tables.push_back(std::move(l));
  if (q.contains("laplace")) {
    Table p{"laplace", {"s", "psi", "psi_uniform"}, {}};
    for (double s : opt<std::vector<double>>(q, "laplace", {})) {
      json u = nullptr;
      try {
        u = d.uniform_leaf_exponent(s);
      } catch (const SpecError&) {
      }
      p.rows.push_back({s, d.laplace_exponent(s), u});
    }
    r.tables.push_back(std::move(p));
  }
  return r;
}

// ---------------------------------------------------------------- residual

std::shared_ptr<ResidualSampler> sampler_of(const Target& t, long n) {
  if (t.example) return std::make_shared<ResidualSampler>(t.example);
  if (t.model && t.model->size_based()) return std::make_shared<ResidualSampler>(*t.model, static_cast<int>(n));
  if (t.measure) return std::make_shared<ResidualSampler>(t.measure);
  throw SpecError("no residual sampler for this target");
}

Report cmd_residual(const json& q) {
  // model chains run with lambda_2 = 1 so that times match the limit's scale
  Target t = target_of(q, !q.contains("model") || !model_from_json(q.at("model")).size_based(), true);
  long n = positive(q, "n", 1000);
  int samples = positive(q, "samples", 1);
  auto times = times_of(q);
  auto chain = sampler_of(t, n);
  const double lam = chain->lambda(n);
  Report r("residual");
  r.meta = t.spec;
  r.meta.update({{"n", n}, {"samples", samples}, {"seed", seed_of(q)}, {"lambda_n", lam}});
  Table s{"samples", {"sample", "absorption", "scaled_absorption"}, {}};
  for (double x : times) s.cols.push_back(tcol(x));
  if (flag(q, "composition")) s.cols.push_back("composition");
  s.rows.resize(static_cast<size_t>(samples));
  parallel_samples(static_cast<size_t>(samples), seed_of(q), threads_of(q), [&](std::size_t i, Rng& rng) {
    MassChainPath p = chain->sample(n, rng);
    std::vector<json> row{static_cast<long>(i), p.absorption(), static_cast<double>(p.absorption()) / lam};
    for (double x : times) row.push_back(scaled_value(p, lam, x));
    if (flag(q, "composition")) {
      std::string c;
      for (long v : composition_of(p)) c += (c.empty() ? "" : " ") + std::to_string(v);
      row.push_back(c);
    }
    s.rows[i] = std::move(row);
  });
  std::vector<double> a;
  for (auto& row : s.rows) a.push_back(row[2].get<double>());
  r.tables.push_back(std::move(s));
  if (samples >= 2) {
    Summary sm = summarize(a);
    r.tables.push_back({"summary", {"quantity", "mean", "se"}, {{"scaled_absorption", sm.mean, sm.se()}}});
  }
  return r;
}

// ---------------------------------------------------------------- lamperti

struct LimitLaw {
  JumpLaw law;
  double gamma = 0, psi = 0;
};

LimitLaw limit_of(const Target& t, const json& q) {
  LimitLaw l;
  l.gamma = gamma_of(t, q);
  double tol = opt<double>(q, "drift_tol", 1e-4);
  std::shared_ptr<const DislocationMeasure> d = t.measure;
  if (t.example) {
    long jmax = opt<long>(q, "atoms", std::min<long>(t.example->horizon, 100000));
    d = std::make_shared<DislocationMeasure>(t.example->measure(jmax));
  }
  if (!d) throw SpecError("no measure for the limit");
  l.law = jump_law_for(*d, tol);
  l.psi = q.contains("psi") ? req<double>(q, "psi") : d->laplace_exponent(l.gamma);
  return l;
}

Report cmd_lamperti(const json& q) {
  Target t = target_of(q, true, true);
  LimitLaw l = limit_of(t, q);
  int samples = positive(q, "samples", 1);
  auto times = times_of(q);
  auto sorted = times;
  std::sort(sorted.begin(), sorted.end());
  double stop = opt<double>(q, "stop", 1e-6);
  Report r("lamperti");
  r.meta = t.spec;
  r.meta.update({{"gamma", l.gamma}, {"psi_gamma", l.psi}, {"jump_law", l.law.describe},
                 {"neglected_drift", l.law.neglected_drift}, {"samples", samples}, {"seed", seed_of(q)},
                 {"stop", stop}});
  Table s{"samples", {"sample", "absorption", "jumps"}, {}};
  for (double x : sorted) s.cols.push_back(tcol(x));
  s.rows.resize(static_cast<size_t>(samples));
  parallel_samples(static_cast<size_t>(samples), seed_of(q), threads_of(q), [&](std::size_t i, Rng& rng) {
    LampertiPath p = lamperti_path(l.law, l.gamma, sorted, rng, stop, l.psi);
    std::vector<json> row{static_cast<long>(i), p.absorption, p.jumps};
    for (double v : p.values) row.push_back(v);
    s.rows[i] = std::move(row);
  });
  std::vector<double> a;
  for (auto& row : s.rows) a.push_back(row[1].get<double>());
  r.tables.push_back(std::move(s));
  if (samples >= 2) {
    Summary sm = summarize(a);
    r.tables.push_back({"summary",
                        {"quantity", "mean", "se", "predicted"},
                        {{"absorption", sm.mean, sm.se(), l.psi > 0 ? json(1.0 / l.psi) : json(nullptr)}}});
  }
  return r;
}

// ---------------------------------------------------------------- ctmc

Report ctmc_report(const json& q, const char* name) {
  GrowthModel m = model_of(q);
  int n = positive(q, "n", 4);
  int samples = positive(q, "samples", 100000);
  double l2 = lambda2_of(q).get_d();
  CtmcReport c = ctmc_check(m, l2, n, samples, seed_of(q), threads_of(q));
  Report r(name);
  r.meta = {{"model", model_to_json(m)}, {"lambda2", to_string(lambda2_of(q))}, {"n", n}, {"samples", samples},
            {"seed", seed_of(q)}};
  r.tables.push_back({"chi_square",
                      {"test", "statistic", "dof", "pvalue"},
                      {{"shape", c.shape.statistic, c.shape.dof, c.shape.pvalue},
                       {"projective", c.projective.statistic, c.projective.dof, c.projective.pvalue}}});
  Table h{"holding", {"block_size", "count", "ks_pvalue"}, {}};
  for (auto& [k, p] : c.holding_ks_p) h.rows.push_back({k, c.holding_count[k], p});
  r.tables.push_back(std::move(h));
  bool ok = c.shape.pvalue > 0.01 && c.projective.pvalue > 0.01;
  for (auto& [k, p] : c.holding_ks_p) ok = ok && p > 0.01;
  r.verdicts.push_back(std::string(ok ? "CONSISTENT" : "REJECTED") + " at the 1% level");
  return r;
}

std::string cmd_ctmc(const json& q) {
  if (opt<int>(q, "samples", 1) > 1) return render(ctmc_report(q, "ctmc"), fmt(q));
  GrowthModel m = model_of(q);
  int n = positive(q, "n", 4);
  Rng rng(seed_of(q));
  TimedGenealogy g = ctmc_genealogy(m, lambda2_of(q).get_d(), n, rng);
  std::string f = fmt(q, "newick");
  if (f == "newick") return to_newick(g.tree, true) + "\n";
  if (f == "json") {
    json h = json::array();
    for (auto& [size, hold] : g.holds) h.push_back({{"size", size}, {"hold", hold}});
    json out = {{"model", model_to_json(m)}, {"seed", seed_of(q)}, {"tree", tree_to_json(g.tree)}, {"holds", h}};
    return out.dump(2) + "\n";
  }
  Report r("ctmc");
  r.meta = {{"model", model_to_json(m)}, {"n", n}, {"seed", seed_of(q)}, {"newick", to_newick(g.tree, true)}};
  Table h{"holds", {"block_size", "hold"}, {}};
  for (auto& [size, hold] : g.holds) h.rows.push_back({size, hold});
  r.tables.push_back(std::move(h));
  return render(r, f);
}

// ---------------------------------------------------------------- massfrag

std::unique_ptr<BinaryNu> nu_of(const json& q) {
  json nu = q.contains("nu") ? q.at("nu") : json{{"kind", "brownian"}};
  std::string k = opt<std::string>(nu, "kind", "brownian");
  if (k == "brownian")
    return std::make_unique<BrownianNu>(opt<double>(nu, "eps", 1e-2), opt<double>(nu, "scale", 1.0));
  if (k == "atom") return std::make_unique<AtomNu>(req<double>(nu, "s1"), opt<double>(nu, "w", 1.0));
  throw SpecError("nu kind must be brownian or atom");
}

std::string cmd_massfrag(const json& q) {
  double gamma = opt<double>(q, "gamma", 0.5);
  auto nu = nu_of(q);
  double floor = opt<double>(q, "floor", 1e-4);
  bool erosion = flag(q, "erosion");
  int samples = positive(q, "samples", 1);
  std::string f = fmt(q, samples == 1 ? "json" : "csv");
  if (samples == 1 && f == "json") {
    Rng rng(seed_of(q));
    MassFragTree t = mass_frag_tree(gamma, *nu, floor, rng, erosion);
    json out = {{"gamma", gamma}, {"floor", floor}, {"seed", seed_of(q)}, {"erosion", erosion},
                {"height", t.height()}, {"tree", massfrag_to_json(t)}};
    return out.dump(1) + "\n";
  }
  Report r("massfrag");
  r.meta = {{"gamma", gamma}, {"nu", q.contains("nu") ? q.at("nu") : json{{"kind", "brownian"}}},
            {"floor", floor}, {"erosion", erosion}, {"samples", samples}, {"seed", seed_of(q)}};
  Table h{"heights", {"sample", "height"}, {}};
  h.rows.resize(static_cast<size_t>(samples));
  parallel_samples(static_cast<size_t>(samples), seed_of(q), threads_of(q), [&](std::size_t i, Rng& rng) {
    h.rows[i] = {static_cast<long>(i), mass_frag_height(gamma, *nu, floor, rng, erosion)};
  });
  std::vector<double> v;
  for (auto& row : h.rows) v.push_back(row[1].get<double>());
  r.tables.push_back(std::move(h));
  if (samples >= 2) {
    Summary s = summarize(v);
    r.tables.push_back({"summary", {"quantity", "mean", "se"}, {{"height", s.mean, s.se()}}});
  }
  return render(r, f);
}

// ---------------------------------------------------------------- check

void series_table(Report& r, const std::string& name, const std::vector<SeriesPoint>& s) {
  Table t{name, {"n", "value", "lo", "hi"}, {}};
  for (const auto& p : s) t.rows.push_back({p.n, p.value, p.lo, p.hi});
  r.tables.push_back(std::move(t));
}

Report cmd_check(const json& q) {
  std::string which = opt<std::string>(q, "which", "tree");
  Report r("check");
  double thr = opt<double>(q, "threshold", 0.01);
  int points = positive(q, "points", 25);
  if (which == "hm") {
    GrowthModel m = model_of(q);
    int n = positive(q, "n", 5);
    Rational l2 = lambda2_of(q);
    auto lam = lambda_seq<Rational>(m, l2, std::max(n, 2));
    Rational an = q.contains("a_n") ? rational_from_json(q.at("a_n")) : lam[static_cast<size_t>(n)];
    std::vector<RankedTest> tests{[](const std::vector<Rational>&) { return Rational(1); },
                                  [](const std::vector<Rational>& s) { return s[0]; },
                                  [](const std::vector<Rational>& s) { return Rational(s[0] * s[0]); }};
    HmCheck h = hm_condition_measure(m, l2, n, an, tests);
    r.meta = {{"model", model_to_json(m)}, {"n", n}, {"lambda2", to_string(l2)}, {"a_n", to_string(an)}};
    Table a{"atoms", {"sizes", "exact", "value"}, {}};
    for (auto& [sizes, mass] : h.atoms) {
      std::string s;
      for (int x : sizes) s += (s.empty() ? "" : " ") + std::to_string(x);
      a.rows.push_back({s, to_string(mass), mass.get_d()});
    }
    r.tables.push_back(std::move(a));
    Table id{"identity", {"test", "lhs", "rhs", "equal"}, {}};
    const char* names[] = {"1", "s1", "s1^2"};
    for (size_t i = 0; i < tests.size(); ++i)
      id.rows.push_back({names[i], to_string(h.lhs[i]), to_string(h.rhs[i]), h.lhs[i] == h.rhs[i]});
    r.tables.push_back(std::move(id));
    r.verdicts.push_back(h.identity_holds() ? "IDENTITY HOLDS (exact)" : "IDENTITY FAILS");
    return r;
  }
  Target t = target_of(q, true);
  r.meta = t.spec;
  r.meta["which"] = which;
  r.meta["threshold"] = thr;
  long nmax;
  if (t.example) {
    nmax = opt<long>(q, "n_max", t.example->horizon);
    if (nmax > t.example->horizon) throw SpecError("n_max exceeds the example's horizon");
  } else {
    nmax = opt<long>(q, "n_max", std::min<long>(10000, t.measure->max_level()));
  }
  if (nmax < 2) throw SpecError("n_max must be at least 2");
  const long nmin = opt<long>(q, "n_min", 2);
  if (nmin < 2 || nmin > nmax) throw SpecError("n_min must lie in [2, n_max]");
  std::vector<long> ns = log_spaced(nmin, nmax, points);
  r.meta["n_max"] = nmax;
  auto verdict = [&](const std::string& label, const std::vector<SeriesPoint>& s) {
    Verdict v = convergence_verdict(s, thr);
    r.verdicts.push_back(label + ": " + v.text());
  };
  if (which == "tree" || which == "mass") {
    std::vector<SeriesPoint> s;
    if (t.example)
      s = which == "tree" ? tree_condition_series(*t.example, ns) : mass_condition_series(*t.example, ns);
    else
      s = which == "tree" ? tree_condition_series(*t.measure, ns) : mass_condition_series(*t.measure, ns);
    series_table(r, which + "_series", s);
    if (t.example && which == "mass") {
      Table d{"deficiency", {"n", "deficiency"}, {}};
      for (long n : ns) d.rows.push_back({n, mass_deficiency(*t.example, n)});
      r.tables.push_back(std::move(d));
    }
    if (t.example && t.example->onset > 0 && t.example->onset <= nmax) {
      double floor = -std::numeric_limits<double>::infinity();
      for (const auto& p : s)
        if (p.n >= t.example->onset) floor = std::max(floor, p.hi);
      r.meta["onset"] = t.example->onset;
      r.meta["max_beyond_onset"] = floor;
    }
    verdict(which, s);
    return r;
  }
  if (which == "equal_set") {
    EqualSetTerms c = t.example ? equal_set_terms(*t.example, ns) : equal_set_terms(*t.measure, ns);
    r.meta["mismatch_mass"] = c.mismatch_mass;
    series_table(r, "equal_set", c.equal_set);
    r.verdicts.push_back(std::string("mismatch mass ") + (std::isfinite(c.mismatch_mass) ? "finite" : "infinite"));
    verdict("equal_set", c.equal_set);
    return r;
  }
  throw SpecError("check must be tree, mass, equal_set or hm");
}

// ---------------------------------------------------------------- experiments

Report cmd_experiment(const json& q) {
  std::string kind = req<std::string>(q, "kind");
  if (kind == "ctmc") return ctmc_report(q, "experiment");
  Report r("experiment");
  r.meta = {{"kind", kind}, {"request", q}};
  if (kind == "height") {
    GrowthModel m = model_of(q);
    auto ns = opt<std::vector<long>>(q, "ns", {500, 1000, 2000});
    int samples = positive(q, "samples", 200);
    auto rows = height_scaling_experiment(m, ns, samples, seed_of(q), threads_of(q));
    Table t{"height", {"n", "lambda_n", "mean", "se", "q10", "q50", "q90", "drift"}, {}};
    for (auto& h : rows) t.rows.push_back({h.n, h.lambda, h.mean, h.se, h.q10, h.q50, h.q90, h.drift});
    r.tables.push_back(std::move(t));
    if (q.contains("reference")) {
      const json& ref = q.at("reference");
      double gamma = opt<double>(ref, "gamma", 0.5);
      BrownianNu nu(opt<double>(ref, "eps", 1e-2), opt<double>(ref, "scale", 1 / std::sqrt(2 * std::numbers::pi)));
      double floor = opt<double>(ref, "floor", 1e-5);
      bool erosion = opt<bool>(ref, "erosion", true);
      int rs = positive(ref, "samples", 1000);
      std::vector<double> hv(static_cast<size_t>(rs));
      parallel_samples(static_cast<size_t>(rs), mix_seed(seed_of(q), 99), threads_of(q),
                       [&](std::size_t i, Rng& rng) { hv[i] = mass_frag_height(gamma, nu, floor, rng, erosion); });
      Summary s = summarize(hv);
      Table k{"reference", {"n", "ks", "reference_mean", "reference_se"}, {}};
      for (auto& h : rows) k.rows.push_back({h.n, ks_two_sample(h.values, hv), s.mean, s.se()});
      r.tables.push_back(std::move(k));
    }
    return r;
  }
  if (kind == "residual") {
    Target t = target_of(q, !q.contains("model"), true);
    if (t.model) t.measure = std::make_shared<DislocationMeasure>(DislocationMeasure::from_growth_rule(*t.model, 1));
    long n = positive(q, "n", 10000);
    int samples = positive(q, "samples", 2000);
    auto times = times_of(q);
    auto chain = sampler_of(t, n);
    LimitLaw l = limit_of(t, q);
    ResidualLimitReport rep = residual_limit_test(*chain, l.law, l.gamma, n, times, samples, seed_of(q),
                                                  threads_of(q), l.psi);
    r.meta.update({{"gamma", l.gamma}, {"psi_gamma", l.psi}, {"jump_law", rep.jump_law}});
    Table k{"ks", {"t", "ks"}, {}};
    for (size_t i = 0; i < times.size(); ++i) k.rows.push_back({times[i], rep.ks[i]});
    r.tables.push_back(std::move(k));
    r.tables.push_back({"absorption",
                        {"source", "mean", "se"},
                        {{"chain A_n/lambda_n", rep.absorption_mean, rep.absorption_se},
                         {"limit", rep.limit_mean, rep.limit_se}}});
    return r;
  }
  throw SpecError("experiment kind must be height, residual or ctmc");
}

}  // namespace

std::string run_command(const std::string& name, const json& q) {
  if (!q.is_object()) throw SpecError("request must be a JSON object");
  if (name == "laws") return render(cmd_laws(q), fmt(q));
  if (name == "kappa") return render(cmd_kappa(q), fmt(q));
  if (name == "residual") return render(cmd_residual(q), fmt(q));
  if (name == "lamperti") return render(cmd_lamperti(q), fmt(q));
  if (name == "ctmc") return cmd_ctmc(q);
  if (name == "massfrag") return cmd_massfrag(q);
  if (name == "check") return render(cmd_check(q), fmt(q));
  if (name == "experiment") return render(cmd_experiment(q), fmt(q));
  throw SpecError("unknown command \"" + name + "\"");
}

}  // namespace rtg
