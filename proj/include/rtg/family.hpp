#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "rtg/partition.hpp"
#include "rtg/rational.hpp"

namespace rtg {

// A consistent family (Gamma^[n], n >= 1), i.e. one partition of N.
class PartitionFamily {
 public:
  virtual ~PartitionFamily() = default;
  virtual Partition restrict_to(int n) const = 0;
  // Least n with a non-trivial restriction (max int if never).
  virtual int first_split_level() const = 0;
  // |Gamma_1^[n]| as a count.
  virtual long first_block_count(long n) const;
  // Asymptotic frequencies in least-element order when known.
  virtual std::vector<double> limit_frequencies() const = 0;
  virtual bool is_two_block() const { return false; }
  virtual std::string describe() const = 0;
};
using FamilyPtr = std::shared_ptr<const PartitionFamily>;

// x = p/q in [0,1] held as machine integers for the step rule.
struct StepRatio {
  std::int64_t p = 0, q = 1;
  static StepRatio of(const Rational& x);
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  Rational rational() const { return Rational(static_cast<long>(p), static_cast<long>(q)); }
};

// Step A_x: element n+1 joins block 1 unless b/n > x.
inline bool step_joins_first(std::int64_t b, std::int64_t n, StepRatio x) { return !(b * x.q > x.p * n); }

// One step of A_x on a partition with at most two blocks.
Partition step_ax(const Partition& pi, StepRatio x);

// Closed form for b(n) under A_x started from b(n0) = b0 (n >= n0).
std::int64_t step_closed_form(std::int64_t n0, std::int64_t b0, StepRatio x, std::int64_t n);

// Two-block family started at ([j-1],{j}) driven by step rules A_x on level ranges.
class StepFamily final : public PartitionFamily {
 public:
  struct Phase {
    std::int64_t from;  // rule applies to levels n >= from (moving n -> n+1)
    StepRatio x;
  };
  StepFamily(int start, std::vector<Phase> phases);

  // A_x from level j onward.
  static std::shared_ptr<StepFamily> good(int j);
  // A_{x_early} for n < release, then A_{x_late}.
  static std::shared_ptr<StepFamily> delayed(int j, StepRatio early, std::int64_t release, StepRatio late);

  Partition restrict_to(int n) const override;
  int first_split_level() const override { return start_; }
  long first_block_count(long n) const override;
  // Same quantity by direct iteration of the step rule (reference route).
  long first_block_count_iterated(long n) const;
  std::vector<double> limit_frequencies() const override;
  bool is_two_block() const override { return true; }
  std::string describe() const override;

  int start() const { return start_; }
  const std::vector<Phase>& phases() const { return phases_; }
  StepRatio final_ratio() const { return phases_.back().x; }

 private:
  int start_;
  std::vector<Phase> phases_;
};

// Label i goes to block (i mod m), i.e. m infinite blocks of frequency 1/m.
class ModuloFamily final : public PartitionFamily {
 public:
  explicit ModuloFamily(int m);
  Partition restrict_to(int n) const override;
  int first_split_level() const override { return m_ > 1 ? 2 : std::numeric_limits<int>::max(); }
  std::vector<double> limit_frequencies() const override;
  std::string describe() const override;
  int modulus() const { return m_; }

 private:
  int m_;
};

// Kingman paintbox realisation for ranked frequencies s with a fixed seed.
// Label i is coloured by its own uniform, so restrictions are consistent.
class PaintboxFamily final : public PartitionFamily {
 public:
  PaintboxFamily(std::vector<double> s, std::uint64_t seed);
  Partition restrict_to(int n) const override;
  int first_split_level() const override;
  std::vector<double> limit_frequencies() const override;
  std::string describe() const override;
  // Colour of label i: index into s, or -1 for dust.
  int colour(int label) const;
  const std::vector<double>& frequencies() const { return s_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<double> s_;
  std::uint64_t seed_;
};

// Sample a paintbox partition of [n] (ranked frequencies s, dust = 1 - sum).
Partition sample_paintbox(const std::vector<double>& s, int n, class Rng& rng);
// 1 in block 1; every i >= 2 joins block 1 with probability u, else block 2.
Partition ordered_paintbox_sample(double u, int n, class Rng& rng);

}  // namespace rtg
