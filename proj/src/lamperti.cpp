#include "rtg/lamperti.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtg/error.hpp"

namespace rtg {

JumpLaw single_atom_jumps(double y, double rate) {
  if (!(y > 0) || !(rate > 0)) throw SpecError("atom jump needs y > 0 and rate > 0");
  JumpLaw j;
  j.proposal_rate = rate;
  j.propose = [y](Rng&) -> std::optional<double> { return y; };
  std::ostringstream os;
  os << "atom(y=" << y << ", rate=" << rate << ")";
  j.describe = os.str();
  return j;
}

JumpLaw atom_jumps(std::vector<double> y, std::vector<double> w) {
  if (y.size() != w.size() || y.empty()) throw SpecError("atom jump law needs matching non-empty lists");
  double total = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0) || !(w[i] >= 0)) throw SpecError("atom jumps need y > 0 and w >= 0");
    total += w[i];
  }
  if (!(total > 0)) throw SpecError("atom jump law has zero rate");
  JumpLaw j;
  j.proposal_rate = total;
  j.propose = [y = std::move(y), w = std::move(w), total](Rng& rng) -> std::optional<double> {
    return y[rng.categorical(w, total)];
  };
  j.describe = "atoms(" + std::to_string(j.proposal_rate) + ")";
  return j;
}

JumpLaw ordered_beta_jumps(double alpha, double theta, double scale, double drift_tol) {
  if (!(alpha >= 0 && alpha < 1) || !(theta > 0)) throw SpecError("ordered beta jumps need 0 <= alpha < 1, theta > 0");
  const double raw = std::exp(std::lgamma(theta + 1) + std::lgamma(1 - alpha) - std::lgamma(theta + 1 - alpha));
  const double c = scale / raw;
  const double amax = std::max(alpha, theta);
  // density in v = 1 - u near 0 is at most M2 v^{-alpha-1}; -log(1-v) <= 2v for v <= 1/2
  const double M2 = amax * std::max(1.0, std::pow(2.0, 1.0 - theta));
  double delta = std::pow(drift_tol * (1 - alpha) / (2 * c * M2), 1.0 / (1 - alpha));
  delta = std::min(delta, 0.25);
  const double M1 = amax * std::pow(2.0, alpha + 1);
  const double E1 = M1 * std::pow(0.5, theta) / theta;
  const double E2 = alpha > 0 ? M2 * (std::pow(delta, -alpha) - std::pow(2.0, alpha)) / alpha
                              : M2 * std::log(0.5 / delta);
  auto rho = [alpha, theta](double u, double v) {
    return (alpha * u + theta * v) * std::pow(u, theta - 1) * std::pow(v, -alpha - 1);
  };
  JumpLaw j;
  j.proposal_rate = c * (E1 + E2);
  j.neglected_drift = 2 * c * M2 * std::pow(delta, 1 - alpha) / (1 - alpha);
  j.propose = [=](Rng& rng) -> std::optional<double> {
    if (rng.uniform() * (E1 + E2) < E1) {
      double u = 0.5 * std::pow(rng.uniform_pos(), 1.0 / theta);
      if (rng.uniform() * M1 * std::pow(u, theta - 1) < rho(u, 1 - u)) return -std::log(u);
      return std::nullopt;
    }
    double w = rng.uniform();
    double v;
    if (alpha > 0) {
      double a = std::pow(delta, -alpha), b = std::pow(2.0, alpha);
      v = std::pow(a - w * (a - b), -1.0 / alpha);
    } else {
      v = delta * std::pow(0.5 / delta, w);
    }
    if (rng.uniform() * M2 * std::pow(v, -alpha - 1) < rho(1 - v, v)) return -std::log1p(-v);
    return std::nullopt;
  };
  std::ostringstream os;
  os << "ordered_beta(alpha=" << alpha << ", theta=" << theta << ", scale=" << scale << ", v_min=" << delta << ")";
  j.describe = os.str();
  return j;
}

JumpLaw power_atom_jumps(double gamma, long first, double drift_tol, std::vector<double> extra_y,
                         std::vector<double> extra_w) {
  if (!(gamma > 0 && gamma < 1)) throw SpecError("power atom jumps need gamma in (0,1)");
  if (first < 2) throw SpecError("power atoms start at j >= 2");
  if (extra_y.size() != extra_w.size()) throw SpecError("extra atoms need matching lists");
  // tail drift sum_{j > J} gamma j^{gamma-1} (-log(1 - 1/j)) <= 2 gamma J^{gamma-1} / (1 - gamma)
  double Jd = std::pow(drift_tol * (1 - gamma) / (2 * gamma), 1.0 / (gamma - 1));
  const double J = std::max(static_cast<double>(first), std::ceil(Jd));
  const double lo = static_cast<double>(first - 1);
  const double glo = std::pow(lo, gamma), ghi = std::pow(J, gamma);
  const double power_rate = ghi - glo;
  double extra_total = 0;
  for (double w : extra_w) extra_total += w;
  JumpLaw j;
  j.proposal_rate = power_rate + extra_total;
  j.neglected_drift = 2 * gamma * std::pow(J, gamma - 1) / (1 - gamma);
  j.propose = [=](Rng& rng) -> std::optional<double> {
    if (extra_total > 0 && rng.uniform() * (power_rate + extra_total) < extra_total)
      return extra_y[rng.categorical(extra_w, extra_total)];
    double x = std::pow(glo + rng.uniform() * (ghi - glo), 1.0 / gamma);
    double jj = std::max(static_cast<double>(first), std::ceil(x));
    // weight gamma j^{gamma-1} against envelope gamma x^{gamma-1}
    if (rng.uniform() < std::pow(jj / x, gamma - 1)) return -std::log1p(-1.0 / jj);
    return std::nullopt;
  };
  std::ostringstream os;
  os << "power_atoms(gamma=" << gamma << ", j=" << first << ".." << static_cast<long long>(J) << ")";
  j.describe = os.str();
  return j;
}

namespace {

JumpLaw scaled_law(JumpLaw j, double c) {
  j.proposal_rate *= c;
  j.neglected_drift *= c;
  return j;
}

}  // namespace

JumpLaw jump_law_for(const DislocationMeasure& d, double drift_tol) {
  using K = DislocationMeasure::Kind;
  const double sc = d.scale_d();
  switch (d.kind()) {
    case K::OrderedBeta:
      return ordered_beta_jumps(d.alpha().get_d(), d.theta().get_d(), sc, drift_tol);
    case K::FromGrowthRule: {
      const auto& m = *d.model();
      if (m.kind() == ModelKind::AlphaTheta)
        return ordered_beta_jumps(m.alpha().get_d(), m.second().get_d(), sc * d.lambda2().get_d(), drift_tol);
      if (m.kind() == ModelKind::Ford)
        return ordered_beta_jumps(m.alpha().get_d(), 1 - m.alpha().get_d(), sc * d.lambda2().get_d(), drift_tol);
      break;
    }
    case K::FiniteAtomic: {
      std::vector<double> y, w;
      for (const auto& a : d.atoms()) {
        double f = a.family->limit_frequencies().front();
        if (!(f > 0)) throw SpecError("an atom has |Gamma_1| = 0; the jump -log|Gamma_1| is undefined");
        if (f < 1) {
          y.push_back(-std::log(f));
          w.push_back(a.weight);
        }
      }
      if (d.tail()) {
        return scaled_law(power_atom_jumps(d.tail()->gamma, d.tail()->first, drift_tol / sc, y, w), sc);
      }
      return scaled_law(atom_jumps(y, w), sc);
    }
    case K::PaintboxAtoms: {
      std::vector<double> y, w;
      for (const auto& a : d.paintbox()) {
        double sum = 0;
        for (const auto& s : a.s) {
          double x = s.get_d();
          sum += x;
          if (x > 0 && x < 1) {
            y.push_back(-std::log(x));
            w.push_back(a.weight.get_d() * x);
          }
        }
        if (sum < 1 - 1e-15) throw SpecError("paintbox with dust gives |Gamma_1| = 0 with positive mass");
      }
      return scaled_law(atom_jumps(y, w), sc);
    }
    case K::BrownianPaintbox: break;
  }
  throw SpecError("no jump sampler for " + d.describe());
}

LampertiPath lamperti_path(const JumpLaw& law, double gamma, const std::vector<double>& times, Rng& rng,
                           double stop, double psi_gamma) {
  if (!(gamma > 0)) throw SpecError("gamma must be positive");
  if (!std::is_sorted(times.begin(), times.end())) throw SpecError("times must be sorted");
  LampertiPath out;
  out.values.assign(times.size(), 0.0);
  double xi = 0, I = 0;
  size_t k = 0;
  for (;;) {
    const double level = std::exp(-gamma * xi);
    if (level < stop) {
      const double rest = psi_gamma > 0 ? level / psi_gamma : 0.0;
      out.absorption = I + rest;
      for (; k < times.size(); ++k) out.values[k] = times[k] < out.absorption ? std::exp(-xi) : 0.0;
      return out;
    }
    const double hold = rng.exponential(law.proposal_rate);
    const double next = I + level * hold;
    for (; k < times.size() && times[k] < next; ++k) out.values[k] = std::exp(-xi);
    I = next;
    if (auto y = law.propose(rng)) {
      xi += *y;
      ++out.jumps;
    }
  }
}

}  // namespace rtg
