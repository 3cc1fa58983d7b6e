// Affine network dynamics with scalar states and controls, their Boolean
// discretization, and helpers that build complete problems from the affine
// data. The discretization produced here has zero thresholding error by
// construction: the Boolean dynamics is literally the thresholded affine
// dynamics, and the lifts invert the quantizers on the feasible values.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/boolrelax.hpp"

namespace netsheaf {

// Per-vertex nominal data: the failed and operational levels, the threshold
// separating them, and the two control settings.
struct NominalVertex {
  double failed = 0.0;
  double operational = 1.0;
  double threshold = 0.5;
  double control_off = 0.0;
  double control_on = 1.0;
};

using NominalStates = std::map<std::string, NominalVertex>;

// next_state[v] = sum_w a(w, v) * state[w] + b_diag[v] * control[v] + h[v],
// where w runs over the in-neighborhood of v and indices follow `order`.
struct AffineDynamics {
  std::vector<std::string> order;
  Matrix a;  // a(i, j): influence of order[i]'s state on order[j]'s next one
  std::vector<double> b_diag;
  std::vector<double> h;
};

std::size_t dyn_index(const AffineDynamics& dyn, const std::string& v);

// Unit step with a small guard so arguments that should be exactly zero do
// not flip the output: 1 when t >= -1e-12, else 0.
double heaviside(double t);

// Componentwise H(s - threshold); outputs are exactly 0 or 1.
StalkMap heaviside_tau(const Space& state, const Space& state_b,
                       double threshold);
// b -> (operational - failed) * b + failed, componentwise. Exact Lipschitz.
StalkMap lift_rho(const Space& state_b, const Space& state,
                  const NominalVertex& nv);
// c -> (c - control_off) / (control_on - control_off); exactly 0/1 on the
// two control settings.
StalkMap control_chi(const Space& control, const Space& control_b,
                     const NominalVertex& nv);
// b -> (control_on - control_off) * b + control_off. Exact Lipschitz.
StalkMap control_chi_inverse(const Space& control_b, const Space& control,
                             const NominalVertex& nv);

// v's affine dynamics on its tuple space, with the exact Lipschitz bound.
StalkMap dynamics_component(const DirectedGraph& g, const AffineDynamics& dyn,
                            const std::string& v, const Space& tuple_space,
                            const Space& state_space);

// Boolean tuple -> Boolean next state, composed literally as
// tau(f(gamma(b))), so the dynamics part of the discretization error
// vanishes identically when the problem's dynamics match the affine data.
StalkMap boolean_dynamics_component(const DirectedGraph& g,
                                    const AffineDynamics& dyn,
                                    const NominalStates& ns,
                                    const std::string& v, const Space& tuple_b,
                                    const Space& tuple_space,
                                    const Space& state_b,
                                    const Space& state_space);

// Whole-network Boolean dynamics in one map: H(M1 x + M2 u + y) on the
// concatenated (states, controls) Boolean vector in dynamics order.
struct VectorizedBooleanDynamics {
  std::vector<std::string> order;
  Matrix m1;                    // a(w, v) * (operational_w - failed_w)
  std::vector<double> m2_diag;  // b_diag[v] * (control_on_v - control_off_v)
  std::vector<double> y;        // lifted constants minus thresholds
  std::vector<double> d_s;      // operational - failed
  std::vector<double> s_phi;    // failed
  std::vector<double> d_c;      // control_on - control_off
  std::vector<double> c_off;    // control_off
  std::vector<double> eta;      // thresholds
};

// Throws InconsistentDynamics when a coupling entry is nonzero between
// vertices the graph does not connect.
VectorizedBooleanDynamics vectorize(const DirectedGraph& g,
                                    const AffineDynamics& dyn,
                                    const NominalStates& ns);

// {0,1}^{2n} -> {0,1}^n, (states, controls) -> H(M1 x + M2 u + y).
StalkMap vectorized_boolean_dynamics(const VectorizedBooleanDynamics& vd);
// {0,1}^{2n} -> R^{2n}, (states, controls) -> (lifted states, lifted
// controls) componentwise.
StalkMap gamma_vectorized(const VectorizedBooleanDynamics& vd);

struct BooleanSchemeOptions {
  // Check that the problem's dynamics agree with the affine data on the
  // feasible tuples (InconsistentDynamics otherwise). Turn off to discretize
  // against an affine reference on purpose, e.g. when the real dynamics
  // saturate; the error budget then reports the resulting gap.
  bool require_consistent_dynamics = true;
  double tolerance = 1e-9;
};

// Builds the full per-vertex thresholding scheme from the affine data. The
// Boolean feasible sets are all Boolean tuples. Throws SchemeInvalid when
// states or controls are not scalar, a threshold does not separate the
// nominal levels, or a neighborhood is too large to enumerate.
ThresholdingScheme build_boolean_scheme(const NetworkProblem& p,
                                        const NominalStates& ns,
                                        const AffineDynamics& dyn,
                                        const BooleanSchemeOptions& opt = {});

struct AffineObjective {
  // J'(s) = state_weight * |s - operational| / (operational - failed)
  double state_weight = 1.0;
  // J(r) = control_weight * |control - control_off| / |on - off|
  double control_weight = 1.0;
};

// Complete problem from the affine data: scalar spaces, feasible tuples =
// both control settings crossed with every nominal neighbor combination,
// normalized objectives with exact Lipschitz bounds.
NetworkProblem make_affine_problem(
    const DirectedGraph& g, const NominalStates& ns, const AffineDynamics& dyn,
    int horizon,
    const std::map<std::string, AffineObjective>& objectives = {});

struct RandomAffineSpec {
  std::size_t max_vertices = 4;
  int horizon = 2;
  double edge_density = 0.5;
};

struct AffineInstance {
  NetworkProblem problem;
  NominalStates nominals;
  AffineDynamics dynamics;
};

// Seeded instance with integer gains, integer nominal levels at least one
// apart, and half-integer thresholds, so every threshold comparison is
// numerically unambiguous.
AffineInstance random_affine_instance(std::uint64_t seed,
                                      const RandomAffineSpec& spec = {});

}  // namespace netsheaf
