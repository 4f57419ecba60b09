#include "rtg/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rtg/error.hpp"
#include "rtg/random.hpp"

namespace rtg {

namespace {

constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max() / 4;

StepRatio early_ratio(IndexedExample::Early e, std::int64_t j) {
  switch (e) {
    case IndexedExample::Early::Half: return {1, 2};
    case IndexedExample::Early::Reciprocal: return {1, j};
    case IndexedExample::Early::None: break;
  }
  return {j - 1, j};
}

void check_gamma(double g) {
  if (!(g > 0 && g < 1)) throw SpecError("gamma must lie in (0,1)");
}

}  // namespace

double IndexedExample::weight(std::int64_t j) const { return gamma * std::pow(static_cast<double>(j), gamma - 1.0); }

std::int64_t IndexedExample::first_block_count(std::int64_t j, std::int64_t n) const {
  if (n < j) return n;
  const StepRatio late{j - 1, j};
  const Entry& e = entries[j];
  if (e.early == Early::None || e.release <= j) return step_closed_form(j, j - 1, late, n);
  std::int64_t upto = std::min(n, e.release);
  std::int64_t b = step_closed_form(j, j - 1, early_ratio(e.early, j), upto);
  if (n <= e.release) return b;
  return step_closed_form(e.release, b, late, n);
}

std::shared_ptr<StepFamily> IndexedExample::family(std::int64_t j) const {
  const StepRatio late{j - 1, j};
  const Entry& e = entries[j];
  if (e.early == Early::None || e.release <= j) return StepFamily::good(static_cast<int>(j));
  return StepFamily::delayed(static_cast<int>(j), early_ratio(e.early, j), e.release, late);
}

void IndexedExample::finalize() {
  prefix_.assign(static_cast<size_t>(horizon + 1), 0.0);
  for (std::int64_t n = 2; n <= horizon; ++n) prefix_[n] = prefix_[n - 1] + weight(n);
}

double IndexedExample::lambda(std::int64_t n) const {
  if (n > horizon) throw SpecError("lambda requested beyond the schedule horizon");
  return n < 2 ? 0.0 : prefix_[n];
}

std::int64_t IndexedExample::sample_first_block(std::int64_t n, Rng& rng) const {
  if (n < 2) return n;
  double u = rng.uniform() * prefix_[n];
  // prefix_ is increasing on [1, n]; find the first j with prefix_[j] > u
  auto it = std::upper_bound(prefix_.begin() + 2, prefix_.begin() + n + 1, u);
  std::int64_t j = it - prefix_.begin();
  if (j > n) j = n;
  return first_block_count(j, n);
}

DislocationMeasure IndexedExample::measure(std::int64_t jmax) const {
  jmax = std::min(jmax, horizon);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<size_t>(jmax));
  for (std::int64_t j = 2; j <= jmax; ++j) {
    Atom a;
    a.family = family(j);
    a.weight = weight(j);
    atoms.push_back(std::move(a));
  }
  return DislocationMeasure::finite_atomic(std::move(atoms), PowerTail{gamma, static_cast<int>(jmax + 1)});
}

IndexedExample example_good(double gamma, std::int64_t horizon) {
  check_gamma(gamma);
  if (horizon < 2) throw SpecError("horizon must be at least 2");
  IndexedExample ex;
  ex.name = "good";
  ex.gamma = gamma;
  ex.horizon = horizon;
  ex.entries.assign(static_cast<size_t>(horizon + 1), {});
  ex.finalize();
  return ex;
}

IndexedExample example_half_delay(double gamma, std::int64_t horizon) {
  check_gamma(gamma);
  if (horizon < 8) throw SpecError("horizon must be at least 8");
  IndexedExample ex;
  ex.name = "half_delay";
  ex.gamma = gamma;
  ex.horizon = horizon;
  ex.entries.assign(static_cast<size_t>(horizon + 1), {0, IndexedExample::Early::Half});
  for (auto& e : ex.entries) e.release = kNever;
  ex.active_weight.assign(static_cast<size_t>(horizon + 1), 0.0);
  ex.active_low.assign(static_cast<size_t>(horizon + 1), 0);
  // Family i is held near 1/2 on levels [2i, a_i]. Levels are scanned upward; the
  // window of level n opens for i = n/2 and the oldest family is released as soon as
  // the remaining held weight still exceeds 1.
  std::deque<std::int64_t> active;
  double W = 0;
  for (std::int64_t n = 2; n <= horizon; ++n) {
    if (n % 2 == 0 && n / 2 >= 2) {
      active.push_back(n / 2);
      W += ex.weight(n / 2);
    }
    while (active.size() > 1 && W - ex.weight(active.front()) > 1.0) {
      ex.entries[active.front()].release = n - 1;
      W -= ex.weight(active.front());
      active.pop_front();
    }
    ex.active_weight[n] = W;
    ex.active_low[n] = active.empty() ? 0 : active.front();
  }
  // onset: from here on the held weight exceeds 1 and each held family sits
  // at least 1/3 below its limit (x_lo - 1/2 - 1/n >= 1/3)
  ex.onset = horizon + 1;
  for (std::int64_t n = horizon; n >= 4; --n) {
    std::int64_t lo = ex.active_low[n];
    bool ok = ex.active_weight[n] > 1.0 && lo >= 2 &&
              (1.0 - 1.0 / static_cast<double>(lo)) - 0.5 - 1.0 / static_cast<double>(n) >= 1.0 / 3.0;
    if (!ok) break;
    ex.onset = n;
  }
  ex.finalize();
  return ex;
}

IndexedExample example_mixed(double gamma, int windows) {
  check_gamma(gamma);
  if (windows < 1 || windows > 2) throw SpecError("the mixed schedule supports 1 or 2 windows");
  IndexedExample ex;
  ex.name = "mixed";
  ex.gamma = gamma;
  using E = IndexedExample::Early;
  // classification grows as the windows are placed; size generously then trim
  std::vector<IndexedExample::Entry> entries(16, {0, E::None});
  auto ensure = [&](std::int64_t j) {
    if (static_cast<std::int64_t>(entries.size()) <= j) entries.resize(static_cast<size_t>(j + 1), {0, E::None});
  };
  ex.entries = {};
  auto freq = [&](std::int64_t j, std::int64_t n) {
    ex.entries.swap(entries);
    double f = static_cast<double>(ex.first_block_count(j, n)) / static_cast<double>(n);
    ex.entries.swap(entries);
    return f;
  };
  auto near = [](double f, double target) { return std::abs(f - target) <= kScheduleTolerance * target; };

  // Two evil families at j = 2, 3; l = 3 / (1 - x_3) = 9; good families 4..9.
  entries[2] = {kNever, E::Reciprocal};
  entries[3] = {kNever, E::Reciprocal};
  std::deque<std::int64_t> evil{2, 3};
  std::int64_t jm = 10;
  for (int m = 1; m <= windows; ++m) {
    std::int64_t e = evil.front();
    evil.pop_front();
    entries[e].release = jm;
    const double target_w = ex.weight(e);
    double acc = 0;
    std::int64_t k = jm;
    while (acc < target_w) {
      ++k;
      acc += ex.weight(k);
    }
    ensure(k);
    for (std::int64_t i = jm; i <= k; ++i) entries[i] = {kNever, E::Reciprocal};
    std::int64_t l = k;
    for (;; ++l) {
      bool ok = near(freq(e, l), 1.0 - 1.0 / static_cast<double>(e));
      for (std::int64_t i = k; ok && i >= jm; --i) ok = near(freq(i, l), 1.0 / static_cast<double>(i));
      if (ok) break;
      if (l > 50000000) throw ResourceError("mixed schedule window did not settle below 5e7");
    }
    ensure(l);
    for (std::int64_t i = k + 1; i <= l; ++i) entries[i] = {0, E::None};
    for (std::int64_t i = jm; i <= k; ++i) evil.push_back(i);
    ex.windows.push_back({m, e, jm, k, l});
    jm = l + 1;
  }
  ex.horizon = jm - 1;
  entries.resize(static_cast<size_t>(ex.horizon + 1), {0, E::None});
  ex.entries = std::move(entries);
  ex.finalize();
  return ex;
}

}  // namespace rtg
