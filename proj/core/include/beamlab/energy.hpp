#pragma once

// Energy functionals of the scaled system, their composites, the exact
// energy identities (as residual checks) and remainder-norm monitors.

#include <array>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "beamlab/coefficients.hpp"
#include "beamlab/nonlinearity.hpp"
#include "beamlab/scaling.hpp"

namespace beamlab {

struct EnergyWeights {
  double c0 = 4.0;
  double c1_0 = 4.0;
  double c1_1 = 4.0;
  double c2 = 4.0;
  double ctilde0 = 8.0;
  double ctilde1_0 = 4.0;
  double ctilde1_1 = 2.0;

  /// Throws InvalidConfigError on a nonpositive weight.
  void validate() const;
};

struct E0Values {
  double E01;
  double E02;
};
struct E1Values {
  double E11;
  double E12;
};
struct E2Values {
  double E21;
  double E22;
};
struct EmValues {
  double Em1;
  double Em2;
};

E0Values eval_E0(const ScaledState& scaled);
E1Values eval_E1(const ScaledState& scaled, int n);
E2Values eval_E2(const ScaledState& scaled);
EmValues eval_Em(double m, double m_s, const ScaledFactors& factors);
EmValues eval_Em(double m, double m_s, double s, const CoefficientModel& model);

struct EnergyParts {
  double E01 = 0, E02 = 0;
  double E11_0 = 0, E12_0 = 0, E11_1 = 0, E12_1 = 0;
  double E21 = 0, E22 = 0;
  double Em1 = 0, Em2 = 0;
};

/// int G^2, int g^2, int y^2 g^2, int g_y^2.
struct DissipationIntegrals {
  double G2 = 0, g2 = 0, y2g2 = 0, gy2 = 0;
};

struct CompositeValues {
  double bbE0 = 0, bbE1_0 = 0, bbE1_1 = 0, bbE2 = 0;
  double calE = 0, calG = 0, calE_tilde = 0;
};

CompositeValues eval_composites(const EnergyParts& parts, const DissipationIntegrals& diss,
                                const EnergyWeights& weights);

struct RemainderNorms {
  double H_L2 = 0;
  double h_H01 = 0;
  double hy_L2 = 0;
  double nonlin_L2 = 0;     // (e^s/a) || N(e^{-s} v_y) ||
  double nonlin_y_H01 = 0;  // (e^s/a) || d_y N(e^{-s} v_y) ||_{H^{0,1}}
  double nonlin_yy_L2 = 0;  // (e^s/a) || d_y^2 N(e^{-s} v_y) ||
};

RemainderNorms remainder_norms(const ScaledState& scaled, const NonlinearityModel& nonlin);

inline constexpr std::array<std::string_view, 10> kIdentityNames = {
    "E01", "E02", "E11_0", "E12_0", "E11_1", "E12_1", "E21", "E22", "Em1", "Em2"};

/// Energy value and the right-hand side of its d/ds identity at one snapshot.
struct IdentityTerms {
  std::array<double, 10> energy{};
  std::array<double, 10> rhs{};
};

IdentityTerms identity_terms(const ScaledState& scaled, const NonlinearityModel& nonlin);

struct ZeroMeanRatios {
  double f = 0, g = 0, h = 0;  // |int q| / sup|q|, 0 for q == 0
};

struct LowerBoundCheck {
  double bbE0 = 0;
  double bound = 0;  // 1/4 (int F_y^2 + c4/2 int F_yy^2 + c1/2 int G^2 + int F^2)
  bool holds = true;
};

struct EnergyReport {
  double s = 0;
  EnergyParts parts;
  DissipationIntegrals dissipation;
  CompositeValues composites;
  RemainderNorms remainder;
  IdentityTerms identity;
  ZeroMeanRatios zero_mean;
  LowerBoundCheck lower_bound;
  std::map<std::string, double> identity_residuals;  // filled from the series, interior snapshots
};

EnergyReport evaluate_report(const ScaledState& scaled, const NonlinearityModel& nonlin,
                             const EnergyWeights& weights);

struct ResidualPoint {
  double s;
  double residual;
};

/// |d/ds energy - rhs| with centered differences at interior samples of a uniform series.
/// Throws InsufficientDataError for fewer than 3 samples or non-uniform spacing.
std::map<std::string, std::vector<ResidualPoint>> specialized_identity_residuals(
    const std::vector<double>& s, const std::vector<IdentityTerms>& terms);

// General two-equation system
//   f_s - k y f_y - l f = g,
//   c1 (g_s - k y g_y - m g) + c2 g + g = c3 f_yy - c4 f_yyyy + h,
// with weights y^{2n}.

struct CoefficientFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

struct GeneralIdentitySystem {
  double k = 0.5;
  double l = 0.5;
  double m = 1.5;
  int n = 0;
  CoefficientFunction c1, c2, c3, c4;
  std::function<Field(double)> f, g, h;
};

/// E1 = 1/2 int y^{2n} (c3 f_y^2 + c4 f_yy^2 + c1 g^2), E2 = int y^{2n} (f^2/2 + c1 f g).
struct GeneralEnergies {
  double E1;
  double E2;
};

GeneralEnergies general_energies(const GeneralIdentitySystem& system, double s);
/// Right-hand sides of dE1/ds and dE2/ds.
GeneralEnergies general_rhs(const GeneralIdentitySystem& system, double s);

struct GeneralResidual {
  double s;
  double dE1;
  double dE2;
};

std::vector<GeneralResidual> general_identity_residual(const GeneralIdentitySystem& system,
                                                       const std::vector<double>& s_samples,
                                                       double ds);

/// One term A(s) P(y) of a manufactured f.
struct ManufacturedMode {
  std::function<double(double)> a;
  std::function<double(double)> a_s;
  std::function<double(double)> a_ss;
  Field profile;
};

/// f = sum A_i P_i, g from the first equation and h as the defect of the second,
/// so (f, g, h) solves the system exactly.
GeneralIdentitySystem manufactured_system(double k, double l, double m, int n,
                                          CoefficientFunction c1, CoefficientFunction c2,
                                          CoefficientFunction c3, CoefficientFunction c4,
                                          std::vector<ManufacturedMode> modes);

}  // namespace beamlab
