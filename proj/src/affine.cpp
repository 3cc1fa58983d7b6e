#include "netsheaf/affine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "netsheaf/errors.hpp"

namespace netsheaf {
namespace {

const NominalVertex& nominal_at(const NominalStates& ns,
                                const std::string& v) {
  auto it = ns.find(v);
  if (it == ns.end()) throw MissingValue("no nominal data for vertex " + v);
  return it->second;
}

void check_nominal(const std::string& v, const NominalVertex& nv) {
  auto fail = [&](const std::string& what) {
    throw SchemeInvalid("vertex " + v + ": " + what);
  };
  if (!(nv.operational > nv.failed))
    fail("the operational level must sit above the failed level");
  if (!(nv.threshold - nv.failed > 1e-9))
    fail("the threshold must sit strictly above the failed level");
  if (!(nv.operational >= nv.threshold))
    fail("the threshold must not exceed the operational level");
  if (std::abs(nv.control_on - nv.control_off) < 1e-12)
    fail("the two control settings coincide");
}

}  // namespace

std::size_t dyn_index(const AffineDynamics& dyn, const std::string& v) {
  for (std::size_t i = 0; i < dyn.order.size(); ++i)
    if (dyn.order[i] == v) return i;
  throw UnknownVertex("vertex not in the dynamics order: " + v);
}

double heaviside(double t) { return t >= -1e-12 ? 1.0 : 0.0; }

StalkMap heaviside_tau(const Space& state, const Space& state_b,
                       double threshold) {
  StalkMap m;
  m.domain = state;
  m.codomain = state_b;
  m.fn = [threshold](const Point& p) {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      out[i] = heaviside(p[i] - threshold);
    return out;
  };
  return m;  // a step has no finite Lipschitz bound
}

StalkMap lift_rho(const Space& state_b, const Space& state,
                  const NominalVertex& nv) {
  const std::size_t n = state.dim();
  Matrix w(n, n);
  Point offset(n, nv.failed);
  for (std::size_t i = 0; i < n; ++i)
    w.at(i, i) = nv.operational - nv.failed;
  return affine_map(state_b, state, std::move(w), std::move(offset));
}

StalkMap control_chi(const Space& control, const Space& control_b,
                     const NominalVertex& nv) {
  const double c0 = nv.control_off;
  const double d = nv.control_on - nv.control_off;
  StalkMap m;
  m.domain = control;
  m.codomain = control_b;
  // (c - c0) / d rather than c/d - c0/d: both control settings then map to
  // exactly 0 and 1, whatever their values.
  m.fn = [c0, d](const Point& p) {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = (p[i] - c0) / d;
    return out;
  };
  m.lipschitz = 1.0 / std::abs(d);
  m.lipschitz_provenance = "exact";
  return m;
}

StalkMap control_chi_inverse(const Space& control_b, const Space& control,
                             const NominalVertex& nv) {
  const std::size_t n = control.dim();
  Matrix w(n, n);
  Point offset(n, nv.control_off);
  for (std::size_t i = 0; i < n; ++i)
    w.at(i, i) = nv.control_on - nv.control_off;
  return affine_map(control_b, control, std::move(w), std::move(offset));
}

StalkMap dynamics_component(const DirectedGraph& g, const AffineDynamics& dyn,
                            const std::string& v, const Space& tuple_space,
                            const Space& state_space) {
  const std::size_t jv = dyn_index(dyn, v);
  if (state_space.dim() != 1)
    throw SchemeInvalid("affine dynamics need scalar states, vertex " + v);
  Matrix w(1, tuple_space.dim());
  w.at(0, 0) = dyn.b_diag.at(jv);
  std::vector<std::string> nbrs = neighborhood(g, v);
  if (tuple_space.dim() != 1 + nbrs.size())
    throw SchemeInvalid("affine dynamics need scalar tuple blocks, vertex " +
                        v);
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    w.at(0, 1 + i) = dyn.a.at(dyn_index(dyn, nbrs[i]), jv);
  return affine_map(tuple_space, state_space, std::move(w),
                    Point{dyn.h.at(jv)});
}

StalkMap boolean_dynamics_component(const DirectedGraph& g,
                                    const AffineDynamics& dyn,
                                    const NominalStates& ns,
                                    const std::string& v, const Space& tuple_b,
                                    const Space& tuple_space,
                                    const Space& state_b,
                                    const Space& state_space) {
  const NominalVertex& nv = nominal_at(ns, v);
  // Lift the Boolean tuple, push it through the affine dynamics, threshold.
  const std::size_t dim = tuple_space.dim();
  Matrix w(dim, dim);
  Point offset(dim, 0.0);
  w.at(0, 0) = nv.control_on - nv.control_off;
  offset[0] = nv.control_off;
  std::vector<std::string> nbrs = neighborhood(g, v);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NominalVertex& nw = nominal_at(ns, nbrs[i]);
    w.at(1 + i, 1 + i) = nw.operational - nw.failed;
    offset[1 + i] = nw.failed;
  }
  StalkMap gamma =
      affine_map(tuple_b, tuple_space, std::move(w), std::move(offset));
  StalkMap f = dynamics_component(g, dyn, v, tuple_space, state_space);
  StalkMap tau = heaviside_tau(state_space, state_b, nv.threshold);
  return compose(tau, compose(f, gamma));
}

VectorizedBooleanDynamics vectorize(const DirectedGraph& g,
                                    const AffineDynamics& dyn,
                                    const NominalStates& ns) {
  const std::size_t n = dyn.order.size();
  if (dyn.a.rows != n || dyn.a.cols != n || dyn.b_diag.size() != n ||
      dyn.h.size() != n)
    throw DimensionMismatch("affine dynamics arrays do not match the order");
  {
    std::vector<std::string> sorted = dyn.order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != g.vertices)
      throw UnknownVertex(
          "the dynamics order must list exactly the graph vertices");
  }
  VectorizedBooleanDynamics vd;
  vd.order = dyn.order;
  vd.m1 = Matrix(n, n);
  vd.m2_diag.resize(n);
  vd.y.resize(n);
  vd.d_s.resize(n);
  vd.s_phi.resize(n);
  vd.d_c.resize(n);
  vd.c_off.resize(n);
  vd.eta.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const NominalVertex& nv = nominal_at(ns, dyn.order[j]);
    vd.d_s[j] = nv.operational - nv.failed;
    vd.s_phi[j] = nv.failed;
    vd.d_c[j] = nv.control_on - nv.control_off;
    vd.c_off[j] = nv.control_off;
    vd.eta[j] = nv.threshold;
  }
  for (std::size_t v = 0; v < n; ++v) {
    double c = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
      const double a = dyn.a.at(w, v);
      if (a != 0.0 && !g.has_edge(dyn.order[w], dyn.order[v]))
        throw InconsistentDynamics("coupling " + dyn.order[w] + " -> " +
                                   dyn.order[v] +
                                   " has no edge in the graph");
      vd.m1.at(v, w) = a * vd.d_s[w];
      c += a * vd.s_phi[w];
    }
    vd.m2_diag[v] = dyn.b_diag[v] * vd.d_c[v];
    vd.y[v] = c + dyn.b_diag[v] * vd.c_off[v] + dyn.h[v] - vd.eta[v];
  }
  return vd;
}

StalkMap vectorized_boolean_dynamics(const VectorizedBooleanDynamics& vd) {
  const std::size_t n = vd.order.size();
  StalkMap m;
  m.domain = Space::booleans(2 * n);
  m.codomain = Space::booleans(n);
  VectorizedBooleanDynamics copy = vd;
  m.fn = [copy, n](const Point& p) {
    Point out(n);
    for (std::size_t v = 0; v < n; ++v) {
      double t = copy.y[v] + copy.m2_diag[v] * p[n + v];
      for (std::size_t w = 0; w < n; ++w) t += copy.m1.at(v, w) * p[w];
      out[v] = heaviside(t);
    }
    return out;
  };
  return m;
}

StalkMap gamma_vectorized(const VectorizedBooleanDynamics& vd) {
  const std::size_t n = vd.order.size();
  StalkMap m;
  m.domain = Space::booleans(2 * n);
  m.codomain = Space::reals(2 * n);
  VectorizedBooleanDynamics copy = vd;
  m.fn = [copy, n](const Point& p) {
    Point out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = copy.d_s[i] * p[i] + copy.s_phi[i];
      out[n + i] = copy.d_c[i] * p[n + i] + copy.c_off[i];
    }
    return out;
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(copy.d_s[i]), std::abs(copy.d_c[i])});
  m.lipschitz = scale;
  m.lipschitz_provenance = "exact";
  return m;
}

ThresholdingScheme build_boolean_scheme(const NetworkProblem& p,
                                        const NominalStates& ns,
                                        const AffineDynamics& dyn,
                                        const BooleanSchemeOptions& opt) {
  ThresholdingScheme ts;
  for (const auto& v : p.graph.vertices) {
    const VertexModel& model = p.vertices.at(v);
    const NominalVertex& nv = nominal_at(ns, v);
    check_nominal(v, nv);
    if (model.state_space.dim() != 1 || model.control_space.dim() != 1)
      throw SchemeInvalid("vertex " + v +
                          ": the Boolean scheme needs scalar states and "
                          "controls");
    const std::size_t dim = model.tuple_space.dim();
    if (dim > 16)
      throw SchemeInvalid("vertex " + v +
                          ": neighborhood too large to enumerate Boolean "
                          "tuples");
    VertexScheme vs;
    vs.state_b = Space::booleans(1);
    vs.control_b = Space::booleans(1);
    vs.tuple_b = Space::booleans(dim);
    {
      auto pts = std::make_shared<std::vector<Point>>();
      pts->reserve(std::size_t{1} << dim);
      for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
        Point b(dim);
        for (std::size_t i = 0; i < dim; ++i)
          b[i] = (mask >> i) & 1 ? 1.0 : 0.0;
        pts->push_back(std::move(b));
      }
      std::sort(pts->begin(), pts->end());
      FeasibleSet f;
      f.points = std::move(pts);
      vs.tuple_b.feasible = std::move(f);
    }
    vs.tau = heaviside_tau(model.state_space, vs.state_b, nv.threshold);
    vs.chi = control_chi(model.control_space, vs.control_b, nv);
    vs.gamma_state = lift_rho(vs.state_b, model.state_space, nv);
    {
      Matrix w(dim, dim);
      Point offset(dim, 0.0);
      w.at(0, 0) = nv.control_on - nv.control_off;
      offset[0] = nv.control_off;
      std::vector<std::string> nbrs = neighborhood(p.graph, v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const NominalVertex& nw = nominal_at(ns, nbrs[i]);
        w.at(1 + i, 1 + i) = nw.operational - nw.failed;
        offset[1 + i] = nw.failed;
      }
      vs.gamma = affine_map(vs.tuple_b, model.tuple_space, std::move(w),
                            std::move(offset));
    }
    vs.f_tilde =
        boolean_dynamics_component(p.graph, dyn, ns, v, vs.tuple_b,
                                   model.tuple_space, vs.state_b,
                                   model.state_space);
    ts.vertices.emplace(v, std::move(vs));
  }
  if (opt.require_consistent_dynamics) {
    for (const auto& v : p.graph.vertices) {
      const VertexModel& model = p.vertices.at(v);
      StalkMap f = dynamics_component(p.graph, dyn, v, model.tuple_space,
                                      model.state_space);
      std::vector<Point> pts;
      if (model.tuple_space.feasible && model.tuple_space.feasible->finite())
        pts = *model.tuple_space.feasible->points;
      else
        pts = sample_points(model.tuple_space, 128, 0xaff1eULL);
      for (const auto& r : pts) {
        if (model.state_space.distance(model.dynamics(r), f(r)) >
            opt.tolerance)
          throw InconsistentDynamics(
              "vertex " + v +
              ": the problem dynamics disagree with the affine data");
      }
    }
  }
  return ts;
}

NetworkProblem make_affine_problem(
    const DirectedGraph& g, const NominalStates& ns, const AffineDynamics& dyn,
    int horizon, const std::map<std::string, AffineObjective>& objectives) {
  NetworkProblem p;
  p.graph = g;
  p.horizon = horizon;
  std::map<std::string, Space> state_spaces;
  for (const auto& v : g.vertices) {
    const NominalVertex& nv = nominal_at(ns, v);
    check_nominal(v, nv);
    state_spaces.emplace(
        v, Space::reals(1, std::min(nv.failed, nv.operational) - 1.0,
                        std::max(nv.failed, nv.operational) + 1.0));
  }
  for (const auto& v : g.vertices) {
    const NominalVertex& nv = nominal_at(ns, v);
    VertexModel m;
    m.state_space = state_spaces.at(v);
    m.control_space =
        Space::reals(1, std::min(nv.control_off, nv.control_on),
                     std::max(nv.control_off, nv.control_on));
    m.tuple_space = tuple_signature(g, state_spaces, m.control_space, v);

    // Feasible tuples: both control settings crossed with every nominal
    // combination of the neighborhood states.
    std::vector<std::string> nbrs = neighborhood(g, v);
    auto pts = std::make_shared<std::vector<Point>>();
    for (double c : {nv.control_off, nv.control_on}) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << nbrs.size());
           ++mask) {
        Point t(1 + nbrs.size());
        t[0] = c;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
          const NominalVertex& nw = nominal_at(ns, nbrs[i]);
          t[1 + i] = (mask >> i) & 1 ? nw.operational : nw.failed;
        }
        pts->push_back(std::move(t));
      }
    }
    std::sort(pts->begin(), pts->end());
    FeasibleSet f;
    f.points = std::move(pts);
    m.tuple_space.feasible = std::move(f);

    m.dynamics = dynamics_component(g, dyn, v, m.tuple_space, m.state_space);

    AffineObjective obj;
    if (auto it = objectives.find(v); it != objectives.end()) obj = it->second;
    const double sgap = nv.operational - nv.failed;
    const double starget = nv.operational;
    const double sw = obj.state_weight;
    m.state_objective = scalar_map(
        m.state_space,
        [starget, sgap, sw](const Point& s) {
          return sw * std::abs(s[0] - starget) / sgap;
        },
        sw / sgap, "exact");
    const double cgap = std::abs(nv.control_on - nv.control_off);
    const double coff = nv.control_off;
    const double cw = obj.control_weight;
    m.control_objective = scalar_map(
        m.tuple_space,
        [coff, cgap, cw](const Point& t) {
          return cw * std::abs(t[0] - coff) / cgap;
        },
        cw / cgap, "exact");
    p.vertices.emplace(v, std::move(m));
  }
  return p;
}

AffineInstance random_affine_instance(std::uint64_t seed,
                                      const RandomAffineSpec& spec) {
  Rng rng(seed);
  const std::size_t n =
      1 + static_cast<std::size_t>(rng() % std::max<std::size_t>(
                                             spec.max_vertices, 1));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& v : names) edges.emplace_back(v, v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (static_cast<double>(rng() % 1000) <
          spec.edge_density * 1000.0)
        edges.emplace_back(names[i], names[j]);
    }
  DirectedGraph g = make_graph(names, edges);

  AffineInstance inst;
  inst.dynamics.order = g.vertices;
  const std::size_t nn = g.vertices.size();
  inst.dynamics.a = Matrix(nn, nn);
  inst.dynamics.b_diag.resize(nn);
  inst.dynamics.h.resize(nn);
  for (const auto& v : g.vertices) {
    NominalVertex nv;
    nv.failed = static_cast<double>(static_cast<int>(rng() % 7) - 3);
    nv.operational = nv.failed + 1.0 + static_cast<double>(rng() % 3);
    nv.threshold = nv.failed + 0.5;
    nv.control_off = static_cast<double>(static_cast<int>(rng() % 5) - 2);
    nv.control_on = nv.control_off + 1.0 + static_cast<double>(rng() % 2);
    inst.nominals.emplace(v, nv);
  }
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t i = 0; i < nn; ++i)
      if (g.has_edge(g.vertices[i], g.vertices[j]))
        inst.dynamics.a.at(i, j) =
            static_cast<double>(static_cast<int>(rng() % 5) - 2);
    inst.dynamics.b_diag[j] = 1.0 + static_cast<double>(rng() % 3);
    inst.dynamics.h[j] = static_cast<double>(static_cast<int>(rng() % 5) - 2);
  }
  inst.problem =
      make_affine_problem(g, inst.nominals, inst.dynamics, spec.horizon);
  return inst;
}

}  // namespace netsheaf
