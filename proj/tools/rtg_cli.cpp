// Command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtg/rtg.h"

using nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string msg;
};

void check(rtg_status s) {
  if (s != RTG_OK) throw Failure{static_cast<int>(s), rtg_last_error()};
}

std::string take(char* p) {
  std::string s = p ? p : "";
  rtg_free_string(p);
  return s;
}

// inline JSON or a file holding it
json load_spec(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] != '{') {
    std::ifstream in(arg);
    if (!in) throw Failure{2, "cannot read " + arg};
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Failure{2, std::string("bad JSON: ") + e.what()};
  }
}

struct Globals {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string format;
  bool exact = false, force = false;
  std::string out;
};

struct ModelArgs {
  std::string spec, kind, alpha, theta, gamma;
  std::string measure, example;
  std::string lambda2;
  long horizon = 0;
  int windows = 0;

  void add(CLI::App* c, bool targets) {
    c->add_option("--spec", spec, "model spec JSON (inline or file)");
    c->add_option("--model", kind, "ford | alpha_gamma | alpha_theta | poisson_dirichlet");
    c->add_option("--alpha", alpha, "rational, e.g. 1/2");
    c->add_option("--theta", theta, "rational");
    c->add_option("--gamma-param", gamma, "gamma of the alpha-gamma model");
    c->add_option("--lambda2", lambda2, "lambda_2 (default 1)");
    if (targets) {
      c->add_option("--measure", measure, "dislocation measure JSON (inline or file)");
      c->add_option("--example", example, "power_tail | half_delay | mixed");
      c->add_option("--horizon", horizon, "largest level listed by power_tail / half_delay");
      c->add_option("--windows", windows, "release windows of mixed (1 or 2)");
    }
  }

  std::optional<json> model() const {
    if (!spec.empty()) return load_spec(spec);
    if (kind.empty()) return std::nullopt;
    json m = {{"kind", kind}};
    if (!alpha.empty()) m["alpha"] = alpha;
    if (!theta.empty()) m["theta"] = theta;
    if (!gamma.empty()) m["gamma"] = gamma;
    return m;
  }

  // adds the target keys to a request
  void fill(json& q) const {
    if (!example.empty()) {
      json e = {{"name", example}};
      if (horizon > 0) e["horizon"] = horizon;
      if (windows > 0) e["windows"] = windows;
      q["example"] = e;
    }
    else if (!measure.empty()) q["measure"] = load_spec(measure);
    else if (auto m = model()) q["model"] = *m;
    if (!lambda2.empty()) q["lambda2"] = lambda2;
  }
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Failure{2, "cannot write " + g.out};
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

json base_request(const Globals& g, const std::string& fallback_format) {
  json q = {{"seed", g.seed}, {"threads", g.threads}, {"format", g.format.empty() ? fallback_format : g.format}};
  if (g.exact) q["exact"] = true;
  if (g.force) q["force"] = true;
  return q;
}

void run(const Globals& g, const char* command, const json& q) {
  char* out = nullptr;
  check(rtg_run(command, q.dump().c_str(), &out));
  emit(g, take(out));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random growth of labelled trees: simulation, exact laws and diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "csv | json | newick")->check(CLI::IsMember({"csv", "json", "newick"}));
  app.add_flag("--exact", g.exact, "exact rational arithmetic (fails if unavailable)");
  app.add_flag("--force", g.force, "lift enumeration guards (trees n > 8, partitions n > 10)");
  app.add_option("-o,--out", g.out, "write output here instead of stdout");

  ModelArgs ma;
  int n = 0;
  int samples = 0;
  std::vector<double> times;
  std::vector<double> laplace;
  std::vector<long> ns;

  auto* grow = app.add_subcommand("grow", "grow T_n and write it as Newick or JSON");
  ma.add(grow, false);
  grow->add_option("-n", n, "leaves")->required();

  auto* laws = app.add_subcommand("laws", "splitting distribution, tree probabilities, lambda table");
  ma.add(laws, false);
  laws->add_option("-n", n, "size")->required();

  auto* kappa = app.add_subcommand("kappa", "cylinder masses kappa(P^pi) and lambda_n");
  ma.add(kappa, true);
  kappa->add_option("-n", n, "size")->required();
  kappa->add_option("--laplace", laplace, "evaluate the Laplace exponents at these s");

  bool composition = false;
  auto* residual = app.add_subcommand("residual", "residual-mass chain samples");
  ma.add(residual, true);
  residual->add_option("-n", n, "start size")->required();
  residual->add_option("--samples", samples, "number of chains");
  residual->add_option("--times", times, "scaled times");
  residual->add_flag("--composition", composition, "include the composition of each path");

  double gamma = -1, stop = 1e-6, drift_tol = 1e-4;
  auto* lamperti = app.add_subcommand("lamperti", "Lamperti limit paths");
  ma.add(lamperti, true);
  lamperti->add_option("--gamma", gamma, "self-similarity index (inferred when omitted)");
  lamperti->add_option("--times", times, "times");
  lamperti->add_option("--samples", samples, "number of paths");
  lamperti->add_option("--stop", stop, "stop once exp(-gamma xi) falls below this");
  lamperti->add_option("--drift-tol", drift_tol, "neglected small-jump drift");

  auto* ctmc = app.add_subcommand("ctmc", "continuous-time genealogy (samples > 1 runs the law check)");
  ma.add(ctmc, false);
  ctmc->add_option("-n", n, "leaves")->required();
  ctmc->add_option("--samples", samples, "genealogies");

  double eps = 1e-2, nu_scale = 1.0, floor = 1e-4, atom = -1;
  bool erosion = false;
  auto* massfrag = app.add_subcommand("massfrag", "self-similar binary mass fragmentation");
  massfrag->add_option("--gamma", gamma, "index (default 1/2)");
  massfrag->add_option("--eps", eps, "Brownian truncation s1 <= 1 - eps");
  massfrag->add_option("--nu-scale", nu_scale, "scale of the Brownian measure");
  massfrag->add_option("--atom", atom, "use a single atom at (s1, 1 - s1) instead");
  massfrag->add_option("--floor", floor, "blocks below this mass are not split");
  massfrag->add_flag("--erosion", erosion, "replace truncated splits by their mean mass loss");
  massfrag->add_option("--samples", samples, "heights to sample (1 writes the tree)");

  std::string which = "tree", target_pos;
  long n_max = 0, n_min = 0;
  int points = 25;
  double threshold = 0.01;
  auto* chk = app.add_subcommand("check", "convergence-condition series with a verdict");
  ma.add(chk, true);
  chk->add_option("target", target_pos, "named example (power_tail, half_delay, mixed)");
  chk->add_option("--which,--check", which, "tree | mass | equal_set | hm")
      ->check(CLI::IsMember({"tree", "mass", "equal_set", "hm"}));
  chk->add_option("--n-max", n_max, "largest n");
  chk->add_option("--n-min", n_min, "smallest n (default 2)");
  chk->add_option("--points", points, "log-spaced levels");
  chk->add_option("--threshold", threshold, "verdict threshold");
  chk->add_option("-n", n, "size for --which hm");

  std::string kind;
  double ref_eps = 1e-2, ref_floor = 1e-5;
  int ref_samples = 0;
  auto* exp = app.add_subcommand("experiment", "height | residual | ctmc report bundles");
  ma.add(exp, true);
  exp->add_option("kind", kind, "height | residual | ctmc")->required()->check(
      CLI::IsMember({"height", "residual", "ctmc"}));
  exp->add_option("--ns", ns, "sizes for the height experiment");
  exp->add_option("-n", n, "size");
  exp->add_option("--samples", samples, "samples");
  exp->add_option("--times", times, "times for the residual experiment");
  exp->add_option("--reference-samples", ref_samples, "Brownian fragmentation reference heights (height)");
  exp->add_option("--reference-eps", ref_eps, "reference truncation");
  exp->add_option("--reference-floor", ref_floor, "reference mass floor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto need_model = [&]() {
      auto m = ma.model();
      if (!m) throw Failure{2, "a model is required (--model ... or --spec)"};
      return *m;
    };
    if (*grow) {
      json spec = need_model();
      rtg_model* m = nullptr;
      check(rtg_model_from_json(spec.dump().c_str(), &m));
      rtg_tree* t = nullptr;
      rtg_status s = rtg_grow(m, n, g.seed, &t);
      rtg_model_free(m);
      check(s);
      char* text = nullptr;
      std::string f = g.format.empty() ? "newick" : g.format;
      if (f == "csv") {
        rtg_tree_free(t);
        throw Failure{2, "grow writes newick or json"};
      }
      s = f == "json" ? rtg_tree_json(t, &text) : rtg_tree_newick(t, 0, &text);
      if (s != RTG_OK) rtg_tree_free(t);
      check(s);
      std::string body = take(text);
      std::cerr << "height: " << rtg_tree_height(t) << "\n";
      char* split = nullptr;
      if (rtg_tree_leaf_count(t) >= 2 && rtg_tree_first_split(t, &split) == RTG_OK)
        std::cerr << "first split: " << take(split) << "\n";
      else
        std::cerr << "first split: none\n";
      rtg_tree_free(t);
      emit(g, body);
      return 0;
    }
    if (*laws) {
      json q = base_request(g, "csv");
      q["model"] = need_model();
      q["n"] = n;
      if (!ma.lambda2.empty()) q["lambda2"] = ma.lambda2;
      run(g, "laws", q);
      return 0;
    }
    if (*kappa) {
      json q = base_request(g, "csv");
      ma.fill(q);
      q["n"] = n;
      if (!laplace.empty()) q["laplace"] = laplace;
      run(g, "kappa", q);
      return 0;
    }
    if (*residual) {
      json q = base_request(g, "csv");
      ma.fill(q);
      q["n"] = n;
      if (samples > 0) q["samples"] = samples;
      if (!times.empty()) q["times"] = times;
      if (composition) q["composition"] = true;
      run(g, "residual", q);
      return 0;
    }
    if (*lamperti) {
      json q = base_request(g, "csv");
      ma.fill(q);
      if (gamma > 0) q["gamma"] = gamma;
      if (samples > 0) q["samples"] = samples;
      if (!times.empty()) q["times"] = times;
      q["stop"] = stop;
      q["drift_tol"] = drift_tol;
      run(g, "lamperti", q);
      return 0;
    }
    if (*ctmc) {
      json q = base_request(g, samples > 1 ? "csv" : "newick");
      q["model"] = need_model();
      q["n"] = n;
      if (samples > 0) q["samples"] = samples;
      if (!ma.lambda2.empty()) q["lambda2"] = ma.lambda2;
      run(g, "ctmc", q);
      return 0;
    }
    if (*massfrag) {
      json q = base_request(g, samples > 1 ? "csv" : "json");
      q["gamma"] = gamma > 0 ? gamma : 0.5;
      q["nu"] = atom > 0 ? json{{"kind", "atom"}, {"s1", atom}} : json{{"kind", "brownian"}, {"eps", eps}, {"scale", nu_scale}};
      q["floor"] = floor;
      q["erosion"] = erosion;
      if (samples > 0) q["samples"] = samples;
      run(g, "massfrag", q);
      return 0;
    }
    if (*chk) {
      json q = base_request(g, "csv");
      if (!target_pos.empty()) ma.example = target_pos;
      ma.fill(q);
      q["which"] = which;
      if (n_max > 0) q["n_max"] = n_max;
      if (n_min > 0) q["n_min"] = n_min;
      q["points"] = points;
      q["threshold"] = threshold;
      if (n > 0) q["n"] = n;
      run(g, "check", q);
      return 0;
    }
    if (*exp) {
      json q = base_request(g, "csv");
      ma.fill(q);
      q["kind"] = kind;
      if (!ns.empty()) q["ns"] = ns;
      if (n > 0) q["n"] = n;
      if (samples > 0) q["samples"] = samples;
      if (!times.empty()) q["times"] = times;
      if (ref_samples > 0)
        q["reference"] = {{"samples", ref_samples}, {"eps", ref_eps}, {"floor", ref_floor}, {"erosion", true}};
      run(g, "experiment", q);
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.msg << "\n";
    return f.code == RTG_ERR_INTERNAL ? 1 : f.code;
  }
  return 0;
}
