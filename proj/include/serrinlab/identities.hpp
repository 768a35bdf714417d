#pragma once

#include <map>
#include <string>
#include <vector>

#include "serrinlab/solved_problem.hpp"

namespace serrinlab::identities {

enum class Verdict { pass, fail, hypothesis_not_met };

std::string to_string(Verdict v);

// One theorem check. `residual` is the signed slack of the identity or
// inequality (orientation documented per check); `values` carries named
// diagnostic scalars; `hypotheses` is the human-readable hypothesis ledger.
struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::map<std::string, double> values;
  std::vector<std::string> hypotheses;
  std::string domain;
  double h_eff = 0.0;

  std::string to_json() const;  // single stable-key-order JSON object
  static std::string csv_header();
  std::string csv_row() const;
};

// Resolution-aware inequality tolerance for a solved problem.
double resolution_tolerance(const SolvedProblem& p);

// Theorem-level checks. Inequality orientation:
//   heintze_karcher: lhs = ((n-1)/n) f(0)^2 * integral of 1/H over the
//     boundary, rhs = f(0) * integral of f(u); pass iff lhs >= rhs - tol.
//   soap_bubble:     lhs = integral of (H0 - H) u_nu^2, rhs = 0, with
//     c = -mean flux and H0 = (n-1) f(0)/(n c); pass iff lhs >= -tol.
//   reilly_residual: lhs = integral of |traceless Hessian|^2, rhs = the
//     boundary functional; pass iff rhs - lhs >= -tol (boundary side only
//     is asserted for FEM inputs).
//   shear_stress:    lhs = tau, rhs = 2/n; the rigidity flag is reported,
//     never asserted.
//   minkowski_annulus / umbilicity_check: annular identities; report-only
//     (hypothesis-not-met) when the Neumann trace is not constant per loop.
IdentityReport heintze_karcher(const SolvedProblem& p);
IdentityReport soap_bubble(const SolvedProblem& p);
IdentityReport reilly_residual(const SolvedProblem& p);
IdentityReport shear_stress(const SolvedProblem& p);
IdentityReport minkowski_annulus(const SolvedProblem& p);
IdentityReport umbilicity_check(const SolvedProblem& p);
IdentityReport divergence_closure(const SolvedProblem& p);

// P-function check; also returns the discrete P profile (radial grid order)
// or field (vertex order).
struct PFunctionResult {
  std::vector<double> p;
  IdentityReport report;
};
PFunctionResult p_function(const SolvedProblem& p);

// Names understood by run_checks, in canonical order.
const std::vector<std::string>& check_names();

// Runs the named checks ("all" expands to every check applicable to the
// problem's topology). Unknown names throw ConfigError; structurally
// inapplicable explicit names propagate the checker's exception.
std::vector<IdentityReport> run_checks(const SolvedProblem& p,
                                       const std::vector<std::string>& names);

}  // namespace serrinlab::identities
