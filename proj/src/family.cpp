#include "rtg/family.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rtg/error.hpp"
#include "rtg/random.hpp"

namespace rtg {

long PartitionFamily::first_block_count(long n) const { return restrict_to(static_cast<int>(n)).block_size(0); }

StepRatio StepRatio::of(const Rational& x) {
  if (x < 0 || x > 1) throw SpecError("step ratio must lie in [0,1], got " + x.get_str());
  if (!x.get_num().fits_slong_p() || !x.get_den().fits_slong_p() || x.get_den() > 1000000000L)
    throw SpecError("step ratio denominator too large: " + x.get_str());
  return StepRatio{x.get_num().get_si(), x.get_den().get_si()};
}

std::int64_t step_closed_form(std::int64_t n0, std::int64_t b0, StepRatio x, std::int64_t n) {
  if (n <= n0) return b0;
  const std::int64_t p = x.p, q = x.q;
  if (p == 0) return b0;
  if (p == q) return b0 + (n - n0);
  auto tracking = [&](std::int64_t m) { return (p * (m - 1)) / q + 1; };
  if (b0 * q > p * n0) {
    std::int64_t mstar = (b0 * q + p - 1) / p;  // first level with b0/m <= x
    return n <= mstar ? b0 : tracking(n);
  }
  std::int64_t tstar = (p * n0 - b0 * q) / (q - p) + 1;  // length of the climb
  return n - n0 <= tstar ? b0 + (n - n0) : tracking(n);
}

StepFamily::StepFamily(int start, std::vector<Phase> phases) : start_(start), phases_(std::move(phases)) {
  if (start_ < 2) throw SpecError("step family must start at j >= 2");
  if (phases_.empty()) throw SpecError("step family needs at least one phase");
  if (phases_.front().from != start_) throw SpecError("first phase must start at level j");
  for (size_t i = 1; i < phases_.size(); ++i)
    if (phases_[i].from <= phases_[i - 1].from) throw SpecError("step phases must have increasing start levels");
  for (auto& ph : phases_)
    if (ph.x.p < 0 || ph.x.q <= 0 || ph.x.p > ph.x.q) throw SpecError("step ratio outside [0,1]");
}

std::shared_ptr<StepFamily> StepFamily::good(int j) {
  return std::make_shared<StepFamily>(j, std::vector<Phase>{{j, StepRatio{j - 1, j}}});
}

std::shared_ptr<StepFamily> StepFamily::delayed(int j, StepRatio early, std::int64_t release, StepRatio late) {
  if (release <= j) return std::make_shared<StepFamily>(j, std::vector<Phase>{{j, late}});
  return std::make_shared<StepFamily>(j, std::vector<Phase>{{j, early}, {release, late}});
}

long StepFamily::first_block_count(long n) const {
  if (n < start_) return n;
  std::int64_t n0 = start_, b0 = start_ - 1;
  for (size_t k = 0; k < phases_.size(); ++k) {
    std::int64_t end = k + 1 < phases_.size() ? phases_[k + 1].from : std::numeric_limits<std::int64_t>::max();
    std::int64_t upto = std::min<std::int64_t>(n, end);
    b0 = step_closed_form(n0, b0, phases_[k].x, upto);
    n0 = upto;
    if (upto == n) break;
  }
  return static_cast<long>(b0);
}

long StepFamily::first_block_count_iterated(long n) const {
  if (n < start_) return n;
  std::int64_t b = start_ - 1;
  size_t k = 0;
  for (std::int64_t m = start_; m < n; ++m) {
    while (k + 1 < phases_.size() && phases_[k + 1].from <= m) ++k;
    if (step_joins_first(b, m, phases_[k].x)) ++b;
  }
  return static_cast<long>(b);
}

Partition StepFamily::restrict_to(int n) const {
  std::vector<int> ids(static_cast<size_t>(n), 0);
  if (n >= start_) {
    ids[start_ - 1] = 1;
    std::int64_t b = start_ - 1;
    size_t k = 0;
    for (std::int64_t m = start_; m < n; ++m) {
      while (k + 1 < phases_.size() && phases_[k + 1].from <= m) ++k;
      if (step_joins_first(b, m, phases_[k].x)) {
        ++b;
      } else {
        ids[m] = 1;
      }
    }
  }
  return Partition::from_block_ids(ids);
}

std::vector<double> StepFamily::limit_frequencies() const {
  double x = final_ratio().value();
  return {x, 1.0 - x};
}

std::string StepFamily::describe() const {
  std::ostringstream os;
  os << "step(j=" << start_;
  for (auto& ph : phases_) os << ", A_" << ph.x.p << "/" << ph.x.q << " from " << ph.from;
  os << ")";
  return os.str();
}

ModuloFamily::ModuloFamily(int m) : m_(m) {
  if (m < 1) throw SpecError("modulus must be positive");
}

Partition ModuloFamily::restrict_to(int n) const {
  std::vector<int> ids(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ids[i] = i % m_;
  return Partition::from_block_ids(ids);
}

std::vector<double> ModuloFamily::limit_frequencies() const { return std::vector<double>(static_cast<size_t>(m_), 1.0 / m_); }

std::string ModuloFamily::describe() const { return "mod(" + std::to_string(m_) + ")"; }

PaintboxFamily::PaintboxFamily(std::vector<double> s, std::uint64_t seed) : s_(std::move(s)), seed_(seed) {
  double total = 0;
  for (double v : s_) {
    if (v < 0) throw SpecError("paintbox frequencies must be non-negative");
    total += v;
  }
  if (total > 1 + 1e-12) throw SpecError("paintbox frequencies sum above 1");
}

int PaintboxFamily::colour(int label) const {
  Rng r(mix_seed(seed_, static_cast<std::uint64_t>(label)));
  double u = r.uniform();
  for (size_t c = 0; c < s_.size(); ++c) {
    if (u < s_[c]) return static_cast<int>(c);
    u -= s_[c];
  }
  return -1;
}

Partition PaintboxFamily::restrict_to(int n) const {
  std::vector<int> ids(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    int c = colour(i);
    ids[i - 1] = c >= 0 ? c : static_cast<int>(s_.size()) + i;
  }
  return Partition::from_block_ids(ids);
}

int PaintboxFamily::first_split_level() const {
  int c1 = colour(1);
  for (int i = 2; i < 1000000; ++i) {
    int c = colour(i);
    if (c1 < 0 || c != c1) return i;
  }
  return std::numeric_limits<int>::max();
}

std::vector<double> PaintboxFamily::limit_frequencies() const {
  // colours in order of first appearance; dust labels have frequency 0
  std::vector<double> out;
  std::vector<bool> seen(s_.size(), false);
  size_t found = 0;
  for (int i = 1; i <= 100000 && found < s_.size(); ++i) {
    int c = colour(i);
    if (c < 0) {
      out.push_back(0.0);
    } else if (!seen[c]) {
      seen[c] = true;
      ++found;
      out.push_back(s_[c]);
    }
  }
  return out;
}

std::string PaintboxFamily::describe() const {
  std::ostringstream os;
  os << "paintbox(";
  for (size_t i = 0; i < s_.size(); ++i) os << (i ? "," : "") << s_[i];
  os << "; seed " << seed_ << ")";
  return os.str();
}

Partition sample_paintbox(const std::vector<double>& s, int n, Rng& rng) {
  std::vector<int> ids(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    int c = -1;
    for (size_t k = 0; k < s.size(); ++k) {
      if (u < s[k]) {
        c = static_cast<int>(k);
        break;
      }
      u -= s[k];
    }
    ids[i] = c >= 0 ? c : static_cast<int>(s.size()) + i;
  }
  return Partition::from_block_ids(ids);
}

Partition ordered_paintbox_sample(double u, int n, Rng& rng) {
  if (!(u > 0 && u < 1)) throw SpecError("ordered paintbox needs u in (0,1)");
  std::vector<int> ids(static_cast<size_t>(n), 0);
  for (int i = 1; i < n; ++i) ids[i] = rng.uniform() < u ? 0 : 1;
  return Partition::from_block_ids(ids);
}

Partition step_ax(const Partition& pi, StepRatio x) {
  if (pi.num_blocks() > 2) throw SpecError("step A_x acts on partitions with at most two blocks");
  const std::int64_t b = pi.block_size(0);
  return pi.extended(step_joins_first(b, pi.n(), x) ? 0 : 1);
}

}  // namespace rtg
