#include "beamlab/energy.hpp"

#include <fmt/format.h>

#include <cmath>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

// Derivative fields shared by every functional at one snapshot.
struct SnapshotFields {
  std::vector<Field> f;  // f, f_y, f_yy, f_yyy
  std::vector<Field> g;  // g, g_y
  Field h_y;
  Field nl0, nl1, nl2;  // (e^s/a) N, (e^s/a) d_y N, (e^s/a) d_y^2 N

  SnapshotFields(const ScaledState& st, const NonlinearityModel& nonlin, bool need_nonlinear)
      : f(derivatives(st.f, 3)),
        g(derivatives(st.g, 1)),
        h_y(remainder_h_y(st.m, st.m_s, st.factors, st.y_grid)),
        nl0(st.y_grid),
        nl1(st.y_grid),
        nl2(st.y_grid) {
    if (!need_nonlinear || nonlin.is_zero()) return;
    const std::vector<Field> v = derivatives(st.v, 3);
    const ScaledFactors& k = st.factors;
    const double inv_a = 1.0 / k.a;
    for (std::size_t j = 0; j < st.v.size(); ++j) {
      const double z = k.exp_minus_s * v[1][j];
      const double n1 = n_eval(nonlin, z, 1);
      nl0[j] = k.growth * n_eval(nonlin, z, 0);
      nl1[j] = n1 * v[2][j] * inv_a;
      nl2[j] = (n_eval(nonlin, z, 2) * k.exp_minus_s * v[2][j] * v[2][j] + n1 * v[3][j]) * inv_a;
    }
  }
};

double sq(const Field& a, int w = 0) { return inner(a, a, w); }

E0Values e0_from(const ScaledState& st, const SnapshotFields& d) {
  const ScaledFactors& k = st.factors;
  return {0.5 * sq(st.f) + 0.5 * k.c4 * sq(d.f[1]) + 0.5 * k.c1 * sq(st.G_anti),
          0.5 * sq(st.F) + k.c1 * inner(st.F, st.G_anti)};
}

E1Values e1_from(const ScaledState& st, const SnapshotFields& d, int n) {
  const ScaledFactors& k = st.factors;
  const int w = 2 * n;
  return {0.5 * sq(d.f[1], w) + 0.5 * k.c4 * sq(d.f[2], w) + 0.5 * k.c1 * sq(st.g, w),
          0.5 * sq(st.f, w) + k.c1 * inner(st.f, st.g, w)};
}

E2Values e2_from(const ScaledState& st, const SnapshotFields& d) {
  const ScaledFactors& k = st.factors;
  return {0.5 * (sq(d.f[2]) + k.c4 * sq(d.f[3]) + k.c1 * sq(d.g[1])),
          0.5 * sq(d.f[1]) + k.c1 * inner(d.f[1], d.g[1])};
}

void require_weight_order(int n) {
  if (n != 0 && n != 1) throw InvalidConfigError(fmt::format("weight order n must be 0 or 1, got {}", n));
}

IdentityTerms identity_terms_from(const ScaledState& st, const SnapshotFields& d) {
  const ScaledFactors& k = st.factors;
  const double A = k.a_prime_over_ra2;
  const double B = k.ra_prime_over_a2;
  const double cross = k.c2 - B;
  const Field& f = st.f;
  const Field& g = st.g;
  const Field& F = st.F;
  const Field& G = st.G_anti;
  const Field& H = st.H_anti;
  IdentityTerms out;

  const E0Values e0 = e0_from(st, d);
  out.energy[0] = e0.E01;
  out.rhs[0] = -sq(G) + 0.5 * e0.E01 - 0.5 * A * sq(d.f[1]) - 0.5 * B * sq(G) + inner(G, d.nl0) +
               inner(G, H);
  out.energy[1] = e0.E02;
  out.rhs[1] = -0.5 * e0.E02 - 2.0 * e0.E01 + 2.0 * k.c1 * sq(G) + cross * inner(F, G) +
               inner(F, d.nl0) + inner(F, H);

  const Field source = d.nl1 + st.h;
  for (int n = 0; n <= 1; ++n) {
    const int w = 2 * n;
    const E1Values e1 = e1_from(st, d, n);
    const std::size_t i1 = 2 + 2 * static_cast<std::size_t>(n);
    double r11 = -sq(g, w) + 0.5 * (3 - 2 * n) * e1.E11 - 0.5 * A * sq(d.f[2], w) -
                 0.5 * B * sq(g, w) + inner(g, source, w);
    double r12 = 0.5 * (1 - 2 * n) * e1.E12 - 2.0 * e1.E11 + 2.0 * k.c1 * sq(g, w) +
                 cross * inner(f, g, w) + inner(f, source, w);
    if (n == 1) {
      r11 += -2.0 * inner(d.f[1], g, 1) - 2.0 * k.c4 * inner(d.f[2], g, 0) -
             4.0 * k.c4 * inner(d.f[2], d.g[1], 1);
      r12 += -2.0 * inner(f, d.f[1], 1) - 4.0 * k.c4 * inner(d.f[1], d.f[2], 1) -
             2.0 * k.c4 * inner(f, d.f[2], 0);
    }
    out.energy[i1] = e1.E11;
    out.rhs[i1] = r11;
    out.energy[i1 + 1] = e1.E12;
    out.rhs[i1 + 1] = r12;
  }

  const E2Values e2 = e2_from(st, d);
  const Field source_y = d.nl2 + d.h_y;
  out.energy[6] = e2.E21;
  out.rhs[6] = -sq(d.g[1]) + 2.5 * e2.E21 - 0.5 * A * sq(d.f[3]) - 0.5 * B * sq(d.g[1]) +
               inner(d.g[1], source_y);
  out.energy[7] = e2.E22;
  out.rhs[7] = -2.0 * e2.E21 + 1.5 * e2.E22 + 2.0 * k.c1 * sq(d.g[1]) +
               cross * inner(d.f[1], d.g[1]) + inner(d.f[1], source_y);

  const EmValues em = eval_Em(st.m, st.m_s, k);
  const double ms2 = st.m_s * st.m_s;
  out.energy[8] = em.Em1;
  out.rhs[8] = -0.5 * em.Em1 - ms2 + (0.75 * k.c1 - 0.5 * B) * ms2;
  out.energy[9] = em.Em2;
  out.rhs[9] = 2.0 * em.Em1 + cross * st.m * st.m_s;
  return out;
}

double mean_ratio(const Field& q) {
  const double sup = q.sup_norm();
  return sup > 0.0 ? std::abs(integrate(q)) / sup : 0.0;
}

}  // namespace

void EnergyWeights::validate() const {
  const std::array<std::pair<const char*, double>, 7> all = {{{"c0", c0},
                                                              {"c1_0", c1_0},
                                                              {"c1_1", c1_1},
                                                              {"c2", c2},
                                                              {"ctilde0", ctilde0},
                                                              {"ctilde1_0", ctilde1_0},
                                                              {"ctilde1_1", ctilde1_1}}};
  for (const auto& [name, value] : all)
    if (!(value > 0.0) || !std::isfinite(value))
      throw InvalidConfigError(fmt::format("energy weight {} must be positive, got {}", name, value));
}

E0Values eval_E0(const ScaledState& scaled) {
  return e0_from(scaled, SnapshotFields(scaled, NonlinearityModel{}, false));
}

E1Values eval_E1(const ScaledState& scaled, int n) {
  require_weight_order(n);
  return e1_from(scaled, SnapshotFields(scaled, NonlinearityModel{}, false), n);
}

E2Values eval_E2(const ScaledState& scaled) {
  return e2_from(scaled, SnapshotFields(scaled, NonlinearityModel{}, false));
}

EmValues eval_Em(double m, double m_s, const ScaledFactors& k) {
  return {0.5 * k.c1 * m_s * m_s, 0.5 * m * m + k.c1 * m * m_s};
}

EmValues eval_Em(double m, double m_s, double s, const CoefficientModel& model) {
  return eval_Em(m, m_s, scaled_factors(model, s));
}

CompositeValues eval_composites(const EnergyParts& p, const DissipationIntegrals& diss,
                                const EnergyWeights& w) {
  w.validate();
  CompositeValues c;
  c.bbE0 = p.E01 + w.c0 * p.E02;
  c.bbE1_0 = p.E11_0 + w.c1_0 * p.E12_0;
  c.bbE1_1 = p.E11_1 + w.c1_1 * p.E12_1;
  c.bbE2 = p.E21 + w.c2 * p.E22;
  c.calE = w.ctilde0 * c.bbE0 + w.ctilde1_0 * c.bbE1_0 + w.ctilde1_1 * c.bbE1_1 + c.bbE2 + p.Em1;
  c.calG = w.ctilde0 * diss.G2 + w.ctilde1_0 * diss.g2 + w.ctilde1_1 * diss.y2g2 + diss.gy2;
  c.calE_tilde = c.calE + p.Em2;
  return c;
}

RemainderNorms remainder_norms(const ScaledState& scaled, const NonlinearityModel& nonlin) {
  const SnapshotFields d(scaled, nonlin, true);
  return {std::sqrt(sq(scaled.H_anti)), weighted_norm(scaled.h, 0, 1), std::sqrt(sq(d.h_y)),
          std::sqrt(sq(d.nl0)),         weighted_norm(d.nl1, 0, 1),   std::sqrt(sq(d.nl2))};
}

IdentityTerms identity_terms(const ScaledState& scaled, const NonlinearityModel& nonlin) {
  return identity_terms_from(scaled, SnapshotFields(scaled, nonlin, true));
}

EnergyReport evaluate_report(const ScaledState& st, const NonlinearityModel& nonlin,
                             const EnergyWeights& weights) {
  const SnapshotFields d(st, nonlin, true);
  EnergyReport r;
  r.s = st.s;
  r.identity = identity_terms_from(st, d);
  const auto& e = r.identity.energy;
  r.parts = {e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7], e[8], e[9]};
  r.dissipation = {sq(st.G_anti), sq(st.g), sq(st.g, 2), sq(d.g[1])};
  r.composites = eval_composites(r.parts, r.dissipation, weights);
  r.remainder = {std::sqrt(sq(st.H_anti)), weighted_norm(st.h, 0, 1), std::sqrt(sq(d.h_y)),
                 std::sqrt(sq(d.nl0)),     weighted_norm(d.nl1, 0, 1), std::sqrt(sq(d.nl2))};
  r.zero_mean = {mean_ratio(st.f), mean_ratio(st.g), mean_ratio(st.h)};
  const ScaledFactors& k = st.factors;
  r.lower_bound.bbE0 = r.composites.bbE0;
  r.lower_bound.bound =
      0.25 * (sq(st.f) + 0.5 * k.c4 * sq(d.f[1]) + 0.5 * k.c1 * sq(st.G_anti) + sq(st.F));
  r.lower_bound.holds = r.lower_bound.bbE0 >= r.lower_bound.bound;
  return r;
}

std::map<std::string, std::vector<ResidualPoint>> specialized_identity_residuals(
    const std::vector<double>& s, const std::vector<IdentityTerms>& terms) {
  if (s.size() != terms.size())
    throw InsufficientDataError("scaled times and identity terms differ in length");
  if (s.size() < 3)
    throw InsufficientDataError(
        fmt::format("identity residuals need at least 3 snapshots, got {}", s.size()));
  const double ds = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs((s[i] - s[i - 1]) - ds) > 1e-9 * std::max(1.0, std::abs(ds)))
      throw InsufficientDataError("identity residuals need a uniform scaled-time spacing");

  std::map<std::string, std::vector<ResidualPoint>> out;
  for (std::size_t id = 0; id < kIdentityNames.size(); ++id) {
    auto& series = out[std::string(kIdentityNames[id])];
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const double lhs = (terms[i + 1].energy[id] - terms[i - 1].energy[id]) / (2.0 * ds);
      series.push_back({s[i], std::abs(lhs - terms[i].rhs[id])});
    }
  }
  return out;
}

GeneralEnergies general_energies(const GeneralIdentitySystem& sys, double s) {
  const Field f = sys.f(s);
  const Field g = sys.g(s);
  const std::vector<Field> fd = derivatives(f, 2);
  const int w = 2 * sys.n;
  const double c1 = sys.c1.value(s);
  return {0.5 * (sys.c3.value(s) * sq(fd[1], w) + sys.c4.value(s) * sq(fd[2], w) + c1 * sq(g, w)),
          0.5 * sq(f, w) + c1 * inner(f, g, w)};
}

GeneralEnergies general_rhs(const GeneralIdentitySystem& sys, double s) {
  require_weight_order(sys.n);
  const Field f = sys.f(s);
  const Field g = sys.g(s);
  const Field h = sys.h(s);
  const std::vector<Field> fd = derivatives(f, 2);
  const Field gy = deriv(g, 1);
  const double n = sys.n;
  const int w = 2 * sys.n;
  const double k = sys.k;
  const double l = sys.l;
  const double m = sys.m;
  const double c1 = sys.c1.value(s), c2 = sys.c2.value(s), c3 = sys.c3.value(s),
               c4 = sys.c4.value(s);
  const double c1p = sys.c1.derivative(s), c3p = sys.c3.derivative(s),
               c4p = sys.c4.derivative(s);

  const double fy2 = sq(fd[1], w), fyy2 = sq(fd[2], w), g2 = sq(g, w);
  double dE1 = -g2 + (-(2 * n - 1) * k / 2 + l) * c3 * fy2 + (-(2 * n - 3) * k / 2 + l) * c4 * fyy2 +
               (-(2 * n + 1) * k / 2 + m) * c1 * g2 - c2 * g2 + 0.5 * c3p * fy2 + 0.5 * c4p * fyy2 +
               0.5 * c1p * g2 + inner(g, h, w);
  double dE2 = -c3 * fy2 - c4 * fyy2 + (-(2 * n + 1) * k / 2 + l) * sq(f, w) + c1 * g2 +
               (-(2 * n + 1) * k + l + m) * c1 * inner(f, g, w) - c2 * inner(f, g, w) +
               c1p * inner(f, g, w) + inner(f, h, w);
  if (sys.n > 0) {
    dE1 += -2 * n * c3 * inner(fd[1], g, w - 1) - 2 * n * (2 * n - 1) * c4 * inner(fd[2], g, w - 2) -
           4 * n * c4 * inner(fd[2], gy, w - 1);
    dE2 += -2 * n * c3 * inner(f, fd[1], w - 1) - 4 * n * c4 * inner(fd[1], fd[2], w - 1) -
           2 * n * (2 * n - 1) * c4 * inner(f, fd[2], w - 2);
  }
  return {dE1, dE2};
}

std::vector<GeneralResidual> general_identity_residual(const GeneralIdentitySystem& sys,
                                                       const std::vector<double>& s_samples,
                                                       double ds) {
  if (s_samples.empty()) throw InsufficientDataError("no scaled-time samples supplied");
  if (!(ds > 0.0)) throw InsufficientDataError("difference spacing must be positive");
  std::vector<GeneralResidual> out;
  out.reserve(s_samples.size());
  for (double s : s_samples) {
    const GeneralEnergies plus = general_energies(sys, s + ds);
    const GeneralEnergies minus = general_energies(sys, s - ds);
    const GeneralEnergies rhs = general_rhs(sys, s);
    out.push_back({s, std::abs((plus.E1 - minus.E1) / (2 * ds) - rhs.E1),
                   std::abs((plus.E2 - minus.E2) / (2 * ds) - rhs.E2)});
  }
  return out;
}

GeneralIdentitySystem manufactured_system(double k, double l, double m, int n,
                                          CoefficientFunction c1, CoefficientFunction c2,
                                          CoefficientFunction c3, CoefficientFunction c4,
                                          std::vector<ManufacturedMode> modes) {
  require_weight_order(n);
  if (modes.empty()) throw InvalidConfigError("manufactured system needs at least one mode");
  struct Profile {
    ManufacturedMode mode;
    std::vector<Field> d;  // P, P', P'', P''', P''''
    Field yP1, yP2;        // y P', y P''
  };
  auto profiles = std::make_shared<std::vector<Profile>>();
  for (auto& mode : modes) {
    std::vector<Field> d = derivatives(mode.profile, 4);
    const Grid& grid = mode.profile.grid();
    Field yP1 = Field::sample(grid, [](double) { return 0.0; });
    Field yP2 = yP1;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      yP1[j] = grid.point(j) * d[1][j];
      yP2[j] = grid.point(j) * d[2][j];
    }
    profiles->push_back({std::move(mode), std::move(d), std::move(yP1), std::move(yP2)});
  }
  const Grid grid = profiles->front().mode.profile.grid();

  GeneralIdentitySystem sys;
  sys.k = k;
  sys.l = l;
  sys.m = m;
  sys.n = n;
  sys.c1 = c1;
  sys.c2 = c2;
  sys.c3 = c3;
  sys.c4 = c4;
  sys.f = [profiles, grid](double s) {
    Field out(grid);
    for (const auto& p : *profiles) out = axpy(out, p.mode.a(s), p.d[0]);
    return out;
  };
  // g = f_s - k y f_y - l f
  sys.g = [profiles, grid, k, l](double s) {
    Field out(grid);
    for (const auto& p : *profiles) {
      const double a = p.mode.a(s);
      out = axpy(out, p.mode.a_s(s) - l * a, p.d[0]);
      out = axpy(out, -k * a, p.yP1);
    }
    return out;
  };
  // h = c1 (g_s - k y g_y - m g) + c2 g + g - c3 f_yy + c4 f_yyyy
  sys.h = [profiles, grid, k, l, m, c1, c2, c3, c4](double s) {
    Field g(grid), gs(grid), ygy(grid), fyy(grid), fyyyy(grid);
    for (const auto& p : *profiles) {
      const double a = p.mode.a(s);
      const double as = p.mode.a_s(s);
      const double ass = p.mode.a_ss(s);
      g = axpy(axpy(g, as - l * a, p.d[0]), -k * a, p.yP1);
      gs = axpy(axpy(gs, ass - l * as, p.d[0]), -k * as, p.yP1);
      // y g_y = (a_s - l a) y P' - k a (y P' + y^2 P'')
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = grid.point(j);
        ygy[j] += (as - l * a) * p.yP1[j] - k * a * (p.yP1[j] + y * p.yP2[j]);
      }
      fyy = axpy(fyy, a, p.d[2]);
      fyyyy = axpy(fyyyy, a, p.d[4]);
    }
    const double v1 = c1.value(s);
    Field out = axpy(axpy(gs, -k, ygy), -m, g);
    out *= v1;
    out = axpy(out, c2.value(s) + 1.0, g);
    out = axpy(out, -c3.value(s), fyy);
    return axpy(out, c4.value(s), fyyyy);
  };
  return sys;
}

}  // namespace beamlab
