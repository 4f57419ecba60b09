#include "rtg/rtg.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "rtg/commands.hpp"
#include "rtg/error.hpp"
#include "rtg/growth.hpp"
#include "rtg/laws.hpp"
#include "rtg/spec_io.hpp"

struct rtg_model {
  rtg::GrowthModel m;
};
struct rtg_measure {
  rtg::DislocationMeasure d;
};
struct rtg_tree {
  rtg::LabelledTree t;
};

namespace {

thread_local std::string g_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
rtg_status guard(F&& f) {
  try {
    g_error.clear();
    f();
    return RTG_OK;
  } catch (const rtg::ResourceError& e) {
    g_error = e.what();
    return RTG_ERR_RESOURCE;
  } catch (const rtg::SpecError& e) {
    g_error = e.what();
    return RTG_ERR_SPEC;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return RTG_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return RTG_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw rtg::SpecError(std::string("null ") + what);
}

void put_exact(char** exact_out, const rtg::Rational& v) {
  if (exact_out) *exact_out = dup(rtg::to_string(v));
}

}  // namespace

extern "C" {

const char* rtg_last_error(void) { return g_error.c_str(); }
void rtg_free_string(char* s) { std::free(s); }
const char* rtg_version(void) { return "0.1.0"; }

rtg_status rtg_model_from_json(const char* spec, rtg_model** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "output");
    *out = new rtg_model{rtg::model_from_json(rtg::parse_json_text(spec))};
  });
}

rtg_status rtg_model_to_json(const rtg_model* m, char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "output");
    *out = dup(rtg::model_to_json(m->m).dump());
  });
}

rtg_status rtg_model_describe(const rtg_model* m, char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "output");
    *out = dup(m->m.describe());
  });
}

void rtg_model_free(rtg_model* m) { delete m; }

rtg_status rtg_splitting_prob(const rtg_model* m, const char* partition, char** exact_out, double* value) {
  return guard([&] {
    need(m, "model");
    need(partition, "partition");
    rtg::Partition pi = rtg::parse_partition(partition);
    if (exact_out) *exact_out = nullptr;
    if (m->m.exact_capable()) {
      rtg::Rational p = rtg::splitting_prob<rtg::Rational>(m->m, pi);
      put_exact(exact_out, p);
      if (value) *value = p.get_d();
    } else if (value) {
      *value = rtg::splitting_prob<double>(m->m, pi);
    }
  });
}

rtg_status rtg_tree_prob(const rtg_model* m, const rtg_tree* t, char** exact_out, double* value) {
  return guard([&] {
    need(m, "model");
    need(t, "tree");
    if (exact_out) *exact_out = nullptr;
    if (m->m.exact_capable()) {
      rtg::Rational p = rtg::tree_prob<rtg::Rational>(m->m, t->t);
      put_exact(exact_out, p);
      if (value) *value = p.get_d();
    } else if (value) {
      *value = rtg::tree_prob<double>(m->m, t->t);
    }
  });
}

rtg_status rtg_lambda(const rtg_model* m, const char* lambda2, int n, char** exact_out, double* value) {
  return guard([&] {
    need(m, "model");
    if (n < 1) throw rtg::SpecError("n must be positive");
    rtg::Rational l2 = lambda2 ? rtg::parse_rational(lambda2) : rtg::Rational(1);
    if (exact_out) *exact_out = nullptr;
    if (m->m.exact_capable()) {
      auto lam = rtg::lambda_seq<rtg::Rational>(m->m, l2, std::max(n, 2));
      put_exact(exact_out, lam[static_cast<size_t>(n)]);
      if (value) *value = lam[static_cast<size_t>(n)].get_d();
    } else if (value) {
      *value = rtg::lambda_seq<double>(m->m, l2.get_d(), std::max(n, 2))[static_cast<size_t>(n)];
    }
  });
}

rtg_status rtg_measure_from_json(const char* spec, rtg_measure** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "output");
    *out = new rtg_measure{rtg::measure_from_json(rtg::parse_json_text(spec))};
  });
}

rtg_status rtg_measure_from_model(const rtg_model* m, const char* lambda2, rtg_measure** out) {
  return guard([&] {
    need(m, "model");
    need(out, "output");
    rtg::Rational l2 = lambda2 ? rtg::parse_rational(lambda2) : rtg::Rational(1);
    *out = new rtg_measure{rtg::DislocationMeasure::from_growth_rule(m->m, l2)};
  });
}

rtg_status rtg_measure_to_json(const rtg_measure* d, char** out) {
  return guard([&] {
    need(d, "measure");
    need(out, "output");
    *out = dup(rtg::measure_to_json(d->d).dump());
  });
}

rtg_status rtg_measure_cylinder(const rtg_measure* d, const char* partition, char** exact_out, double* value) {
  return guard([&] {
    need(d, "measure");
    need(partition, "partition");
    rtg::Partition pi = rtg::parse_partition(partition);
    if (exact_out) *exact_out = nullptr;
    if (d->d.supports_exact()) {
      rtg::Rational v = d->d.cylinder<rtg::Rational>(pi);
      put_exact(exact_out, v);
      if (value) *value = v.get_d();
    } else if (value) {
      *value = d->d.cylinder<double>(pi);
    }
  });
}

rtg_status rtg_measure_laplace(const rtg_measure* d, double s, double* value) {
  return guard([&] {
    need(d, "measure");
    need(value, "output");
    *value = d->d.laplace_exponent(s);
  });
}

void rtg_measure_free(rtg_measure* d) { delete d; }

rtg_status rtg_grow(const rtg_model* m, int n, uint64_t seed, rtg_tree** out) {
  return guard([&] {
    need(m, "model");
    need(out, "output");
    if (n < 1) throw rtg::SpecError("n must be positive");
    rtg::Rng rng(seed);
    *out = new rtg_tree{rtg::grow(m->m, n, rng)};
  });
}

rtg_status rtg_tree_from_newick(const char* text, rtg_tree** out) {
  return guard([&] {
    need(text, "text");
    need(out, "output");
    *out = new rtg_tree{rtg::parse_newick(text)};
  });
}

rtg_status rtg_tree_from_json(const char* text, rtg_tree** out) {
  return guard([&] {
    need(text, "text");
    need(out, "output");
    *out = new rtg_tree{rtg::tree_from_json(rtg::parse_json_text(text))};
  });
}

rtg_status rtg_tree_newick(const rtg_tree* t, int with_lengths, char** out) {
  return guard([&] {
    need(t, "tree");
    need(out, "output");
    *out = dup(rtg::to_newick(t->t, with_lengths != 0));
  });
}

rtg_status rtg_tree_json(const rtg_tree* t, char** out) {
  return guard([&] {
    need(t, "tree");
    need(out, "output");
    *out = dup(rtg::tree_to_json(t->t).dump());
  });
}

int rtg_tree_leaf_count(const rtg_tree* t) { return t ? t->t.leaf_count() : 0; }
int rtg_tree_height(const rtg_tree* t) { return t ? t->t.height() : 0; }

rtg_status rtg_tree_first_split(const rtg_tree* t, char** out) {
  return guard([&] {
    need(t, "tree");
    need(out, "output");
    *out = dup(rtg::first_split(t->t).str());
  });
}

void rtg_tree_free(rtg_tree* t) { delete t; }

rtg_status rtg_run(const char* command, const char* request_json, char** out) {
  return guard([&] {
    need(command, "command");
    need(out, "output");
    rtg::json q = request_json ? rtg::parse_json_text(request_json) : rtg::json::object();
    *out = dup(rtg::run_command(command, q));
  });
}

}  // extern "C"
