#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rtg/model.hpp"
#include "rtg/partition.hpp"
#include "rtg/rational.hpp"
#include "rtg/tree.hpp"

namespace rtg {

// p_n(pi) = g_{m-1}(0) prod_{j=m}^{n-1} g_j(pi^[j], I_j), m = min B_2, g_1(0) = 1.
template <class T>
T splitting_prob(const GrowthModel& m, const Partition& pi);

// All non-trivial partitions of [n] with their probabilities (guarded at n <= 10).
template <class T>
std::vector<std::pair<Partition, T>> splitting_distribution(const GrowthModel& m, int n, bool force = false);

// P(T_n = t): product over branch points of p_{#B}(relabelled split).
template <class T>
T tree_prob(const GrowthModel& m, const LabelledTree& t);

// lambda_1..lambda_nmax (index n), lambda_1 = 0, lambda_{n+1} = lambda_n / (1 - g_n(0)).
template <class T>
std::vector<T> lambda_seq(const GrowthModel& m, const T& lambda2, int nmax);

// kappa(P^pi) = lambda_n p_n(pi).
template <class T>
T kappa_cylinder(const GrowthModel& m, const T& lambda2, const Partition& pi);

// p_n^o(n_1,...,n_k): p_n summed over partitions with these decreasing block sizes.
template <class T>
std::map<std::vector<int>, T> unlabelled_split(const GrowthModel& m, int n, bool force = false);

}  // namespace rtg
