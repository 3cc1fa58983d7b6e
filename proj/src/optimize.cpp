#include "netsheaf/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/errors.hpp"
#include "netsheaf/exec.hpp"

namespace netsheaf {
namespace {

constexpr double kImprove = 1e-15;  // strict-improvement guard
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// ---- shared post-processing ------------------------------------------------

std::vector<double> per_step_radii(const EncodedProblem& e, const Assignment& a,
                                   const ExecPolicy& exec) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(e.horizon));
  for (int k = 0; k < e.horizon; ++k) {
    Assignment r = restrict_network_step(e, a, k);
    out.push_back(consistency_radius(*e.network, r, exec));
  }
  return out;
}

std::vector<StepCertificate> step_certificate(const EncodedProblem& e,
                                              const Assignment& sol,
                                              const Assignment& ref,
                                              const ExecPolicy& exec) {
  std::vector<StepCertificate> rows;
  for (int k = 0; k < e.horizon; ++k) {
    Assignment rr = restrict_network_step(e, ref, k);
    if (!is_global_section(*e.network, rr, 1e-9))
      throw NotASection("reference assignment is not a per-step section at step " +
                        std::to_string(k));
    Assignment sr = restrict_network_step(e, sol, k);
    StepCertificate c;
    c.step = k;
    c.radius = consistency_radius(*e.network, sr, exec);
    c.distance = assignment_distance(*e.network, sr, rr);
    // Every restriction in the network prototype is a coordinate projection
    // (Lipschitz 1), so sections bound nearby assignments with factor 1 + 1.
    c.bound_ok = c.radius <= 2.0 * c.distance + 1e-9;
    rows.push_back(c);
  }
  return rows;
}

void finish_result(const EncodedProblem& e, const SolveRequest& req,
                   SolveResult& r) {
  r.objective = consistency_radius(*e.scored_rollout, r.assignment, req.exec);
  r.step_radii = per_step_radii(e, r.assignment, req.exec);
  if (req.reference)
    r.certificate = step_certificate(e, r.assignment, *req.reference, req.exec);
}

// ---- constrained search over enumerated sections ---------------------------

// Flat candidate index <-> per-step section picks, step 0 most significant, so
// index order is lexicographic and argmin ties resolve to the lexicographically
// smallest pick vector.
std::vector<std::size_t> decode_digits(std::size_t idx, std::size_t base,
                                       int h) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(h), 0);
  for (int k = h - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = idx % base;
    idx /= base;
  }
  return digits;
}

double radius_of_digits(const EncodedProblem& e,
                        const std::vector<Assignment>& sections,
                        const std::vector<std::size_t>& digits,
                        Assignment* out) {
  std::vector<Assignment> per;
  per.reserve(digits.size());
  for (std::size_t d : digits) per.push_back(sections[d]);
  Assignment a = extend_sections(e, per);
  double r = consistency_radius(*e.scored_rollout, a, ExecPolicy{1, true});
  if (out) *out = std::move(a);
  return r;
}

SolveResult constrained_exhaustive(const EncodedProblem& e,
                                   const SolveRequest& req,
                                   const std::vector<Assignment>& sections,
                                   std::size_t total) {
  const std::size_t nsec = sections.size();
  auto term = [&](std::size_t idx) {
    return radius_of_digits(e, sections, decode_digits(idx, nsec, e.horizon),
                            nullptr);
  };
  auto [at, best] = argmin_terms(total, term, req.exec);
  (void)best;
  SolveResult r;
  radius_of_digits(e, sections, decode_digits(at, nsec, e.horizon),
                   &r.assignment);
  r.converged = true;
  r.exhaustive = true;
  r.evaluations = total;
  r.trace.push_back("constrained: exhaustive scan over " +
                    std::to_string(total) + " candidates (" +
                    std::to_string(nsec) + " sections per step)");
  finish_result(e, req, r);
  return r;
}

SolveResult constrained_local(const EncodedProblem& e, const SolveRequest& req,
                              const std::vector<Assignment>& sections) {
  const std::size_t nsec = sections.size();
  const int h = e.horizon;
  const std::size_t budget = std::max<std::size_t>(req.budget, 1);
  std::size_t evals = 0;
  bool exhausted = false;

  auto eval = [&](const std::vector<std::size_t>& digits) -> double {
    if (evals >= budget) {
      exhausted = true;
      return kInf;
    }
    ++evals;
    return radius_of_digits(e, sections, digits, nullptr);
  };

  // One start replays the per-step greedy pick, one sits at the first
  // section, the rest are seeded random pick vectors.
  std::size_t greedy = 0;
  {
    double best = kInf;
    for (std::size_t i = 0; i < nsec; ++i) {
      double o = step_objective(e, sections[i]);
      if (o < best - kImprove) {
        best = o;
        greedy = i;
      }
    }
  }
  const int nstarts = std::max(req.starts, 2);
  std::vector<std::vector<std::size_t>> starts;
  starts.emplace_back(static_cast<std::size_t>(h), greedy);
  starts.emplace_back(static_cast<std::size_t>(h), 0);
  for (int s = 2; s < nstarts; ++s) {
    Rng rng(mix_seed(req.seed, static_cast<std::uint64_t>(s)));
    std::vector<std::size_t> d(static_cast<std::size_t>(h));
    for (auto& x : d) x = static_cast<std::size_t>(rng() % nsec);
    starts.push_back(std::move(d));
  }

  double best_val = kInf;
  std::vector<std::size_t> best_digits;
  auto consider = [&](double v, const std::vector<std::size_t>& d) {
    if (v < best_val - kImprove) {
      best_val = v;
      best_digits = d;
    }
  };

  for (const auto& start : starts) {
    if (exhausted) break;
    std::vector<std::size_t> digits = start;
    double cur = eval(digits);
    if (exhausted) break;
    consider(cur, digits);
    bool improved = true;
    while (improved && !exhausted) {
      improved = false;
      for (int k = 0; k < h && !exhausted; ++k) {
        // Trial list: every section when the pool is small, a seeded sample
        // otherwise.
        std::vector<std::size_t> trial;
        if (nsec <= 64) {
          trial.resize(nsec);
          std::iota(trial.begin(), trial.end(), std::size_t{0});
        } else {
          Rng rng(mix_seed(req.seed, 0x7713ULL + 31 * static_cast<std::uint64_t>(k)));
          trial.resize(64);
          for (auto& x : trial) x = static_cast<std::size_t>(rng() % nsec);
        }
        std::size_t at = digits[static_cast<std::size_t>(k)];
        double best_here = cur;
        std::size_t best_pick = at;
        for (std::size_t i : trial) {
          if (i == at) continue;
          digits[static_cast<std::size_t>(k)] = i;
          double v = eval(digits);
          digits[static_cast<std::size_t>(k)] = at;
          if (exhausted) break;
          if (v < best_here - kImprove) {
            best_here = v;
            best_pick = i;
          }
        }
        if (best_pick != at) {
          digits[static_cast<std::size_t>(k)] = best_pick;
          cur = best_here;
          consider(cur, digits);
          improved = true;
        }
      }
    }
  }

  SolveResult r;
  radius_of_digits(e, sections, best_digits, &r.assignment);
  r.converged = !exhausted;
  r.exhaustive = false;
  r.evaluations = evals;
  r.trace.push_back("constrained: local search over " + std::to_string(nsec) +
                    " sections per step, " + std::to_string(starts.size()) +
                    " starts");
  finish_result(e, req, r);
  return r;
}

// ---- constrained search without an enumerable section pool -----------------

// Per-step, per-vertex (control, own state) labeling, flattened into one
// coordinate vector. Candidate tuples outside the feasible set score +inf.
struct LabelingSearch {
  const EncodedProblem* e = nullptr;
  std::vector<std::string> verts;
  // Flat layout per step: for each vertex, control coords then state coords.
  std::size_t per_step = 0;
  std::vector<std::size_t> ctrl_off;   // per vertex, within a step block
  std::vector<std::size_t> state_off;  // per vertex, within a step block

  explicit LabelingSearch(const EncodedProblem& enc) : e(&enc) {
    verts = enc.problem.graph.vertices;
    std::size_t off = 0;
    for (const auto& v : verts) {
      const VertexModel& m = e->problem.vertices.at(v);
      ctrl_off.push_back(off);
      off += m.control_space.dim();
      state_off.push_back(off);
      off += m.state_space.dim();
    }
    per_step = off;
  }

  std::size_t dim() const {
    return per_step * static_cast<std::size_t>(e->horizon);
  }

  const CoordSpec& spec_of(std::size_t flat) const {
    std::size_t in_step = flat % per_step;
    for (std::size_t vi = verts.size(); vi-- > 0;) {
      if (in_step >= ctrl_off[vi]) {
        const VertexModel& m = e->problem.vertices.at(verts[vi]);
        std::size_t rel = in_step - ctrl_off[vi];
        if (rel < m.control_space.dim())
          return m.control_space.signature[rel];
        return m.state_space.signature[rel - m.control_space.dim()];
      }
    }
    throw IndexOutOfRange("labeling coordinate out of range");
  }

  // +inf when some assembled tuple fails its membership predicate.
  double radius(const std::vector<double>& x, Assignment* out) const {
    std::vector<Assignment> per;
    per.reserve(static_cast<std::size_t>(e->horizon));
    for (int k = 0; k < e->horizon; ++k) {
      const double* blk = x.data() + per_step * static_cast<std::size_t>(k);
      std::map<std::string, Point> states;
      for (std::size_t vi = 0; vi < verts.size(); ++vi) {
        const VertexModel& m = e->problem.vertices.at(verts[vi]);
        states[verts[vi]] =
            Point(blk + state_off[vi], blk + state_off[vi] + m.state_space.dim());
      }
      Assignment a = make_assignment(*e->network);
      for (std::size_t vi = 0; vi < verts.size(); ++vi) {
        const std::string& v = verts[vi];
        const VertexModel& m = e->problem.vertices.at(v);
        Point control(blk + ctrl_off[vi], blk + ctrl_off[vi] + m.control_space.dim());
        Point tuple = assemble_state(e->problem, v, control, states);
        if (m.tuple_space.feasible && m.tuple_space.feasible->member &&
            !m.tuple_space.feasible->member(tuple))
          return kInf;
        set_value(*e->network, a, "U:" + v, std::move(tuple));
        set_value(*e->network, a, "v:" + v, states[v]);
      }
      per.push_back(std::move(a));
    }
    Assignment full = extend_sections(*e, per);
    double r = consistency_radius(*e->scored_rollout, full, ExecPolicy{1, true});
    if (out) *out = std::move(full);
    return r;
  }
};

SolveResult constrained_continuous(const EncodedProblem& e,
                                   const SolveRequest& req) {
  LabelingSearch ls(e);
  const std::size_t n = ls.dim();
  const std::size_t budget = std::max<std::size_t>(req.budget, 1);
  std::size_t evals = 0;
  bool exhausted = false;

  auto eval = [&](const std::vector<double>& x) -> double {
    if (evals >= budget) {
      exhausted = true;
      return kInf;
    }
    ++evals;
    return ls.radius(x, nullptr);
  };

  const int nstarts = std::max(req.starts, 2);
  std::vector<std::vector<double>> starts;
  for (int s = 0; s < nstarts; ++s) {
    std::vector<double> x(n, 0.0);
    Rng rng(mix_seed(req.seed, 0xc0c0ULL + static_cast<std::uint64_t>(s)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const CoordSpec& cs = ls.spec_of(i);
      if (cs.tag == CoordTag::Boolean) {
        x[i] = (s == 0) ? 0.0 : (s == 1 ? 1.0 : (rng() & 1 ? 1.0 : 0.0));
      } else {
        double mid = 0.5 * (cs.lo + cs.hi);
        x[i] = (s <= 1) ? mid : cs.lo + (cs.hi - cs.lo) * unit(rng);
      }
    }
    starts.push_back(std::move(x));
  }

  double best_val = kInf;
  std::vector<double> best_x;
  bool all_converged = true;

  for (const auto& start : starts) {
    if (exhausted) break;
    std::vector<double> x = start;
    double cur = eval(x);
    if (exhausted) break;
    if (cur < best_val - kImprove) {
      best_val = cur;
      best_x = x;
    }
    double step = 0.5;
    while (step >= req.tolerance && !exhausted) {
      bool changed = false;
      for (std::size_t i = 0; i < n && !exhausted; ++i) {
        const CoordSpec& cs = ls.spec_of(i);
        if (cs.tag == CoordTag::Boolean) {
          double save = x[i];
          x[i] = save == 0.0 ? 1.0 : 0.0;
          double v = eval(x);
          if (v < cur - kImprove) {
            cur = v;
            changed = true;
          } else {
            x[i] = save;
          }
          continue;
        }
        double move = step * 0.5 * std::max(cs.hi - cs.lo, 1.0);
        double save = x[i];
        double pick = save;
        double pick_val = cur;
        for (int dir : {+1, -1}) {
          double t = move;
          double prev = cur;
          for (int it = 0; it < 40 && !exhausted; ++it) {
            x[i] = save + dir * t;
            double v = eval(x);
            if (v < prev - kImprove) {
              prev = v;
              if (v < pick_val - kImprove) {
                pick_val = v;
                pick = x[i];
              }
              t *= 2.0;
            } else {
              break;
            }
          }
        }
        x[i] = pick;
        if (pick != save) {
          cur = pick_val;
          changed = true;
        }
      }
      if (cur < best_val - kImprove) {
        best_val = cur;
        best_x = x;
      }
      if (!changed) step *= 0.5;
    }
    if (exhausted) all_converged = false;
  }

  if (!std::isfinite(best_val))
    throw InfeasibleProblem(
        "no feasible labeling found from any start; the feasible sets may be "
        "empty or too tight for the continuous search");

  SolveResult r;
  ls.radius(best_x, &r.assignment);
  r.converged = all_converged && !exhausted;
  r.exhaustive = false;
  r.evaluations = evals;
  r.trace.push_back("constrained: continuous labeling search, " +
                    std::to_string(starts.size()) + " starts over " +
                    std::to_string(n) + " coordinates");
  finish_result(e, req, r);
  return r;
}

// ---- relaxed descent over all stalk coordinates -----------------------------

// Incremental consistency-radius bookkeeping: one squared term per strict
// pair, per-element incidence lists, probes report the change without
// committing. Exact values are re-taken at pass boundaries so rounding drift
// in the running total never leaks into results.
class RadiusEvaluator {
 public:
  RadiusEvaluator(const Sheaf& s, Assignment a) : sh_(&s), a_(std::move(a)) {
    const auto& sp = s.strict_pairs();
    term_.assign(sp.size(), 0.0);
    incident_.assign(s.base().size(), {});
    for (std::size_t i = 0; i < sp.size(); ++i) {
      incident_[sp[i].first].push_back(i);
      incident_[sp[i].second].push_back(i);
    }
    for (std::size_t i = 0; i < sp.size(); ++i) term_[i] = pair_sq(i);
  }

  const Assignment& assignment() const { return a_; }
  const Point& value(std::size_t e) const { return *a_.values[e]; }

  // Change in the squared total if element e were set to p.
  double probe_delta(std::size_t e, const Point& p) {
    Point saved = std::move(*a_.values[e]);
    a_.values[e] = p;
    double delta = 0.0;
    for (std::size_t i : incident_[e]) delta += pair_sq(i) - term_[i];
    a_.values[e] = std::move(saved);
    return delta;
  }

  void commit(std::size_t e, Point p) {
    a_.values[e] = std::move(p);
    for (std::size_t i : incident_[e]) term_[i] = pair_sq(i);
  }

 private:
  double pair_sq(std::size_t i) const {
    const auto& pr = sh_->strict_pairs()[i];
    Point img = sh_->restriction(pr.first, pr.second)(*a_.values[pr.first]);
    double d = sh_->stalk(pr.second).distance(img, *a_.values[pr.second]);
    return d * d;
  }

  const Sheaf* sh_;
  Assignment a_;
  std::vector<double> term_;
  std::vector<std::vector<std::size_t>> incident_;
};

Assignment canonical_relaxed_start(const Sheaf& s, bool bools_one) {
  Assignment a = make_assignment(s);
  for (std::size_t i = 0; i < s.base().size(); ++i) {
    const Space& sp = s.stalk(i);
    Point p(sp.dim(), 0.0);
    for (std::size_t c = 0; c < sp.dim(); ++c) {
      const CoordSpec& cs = sp.signature[c];
      p[c] = cs.tag == CoordTag::Boolean ? (bools_one ? 1.0 : 0.0)
                                         : 0.5 * (cs.lo + cs.hi);
    }
    a.values[i] = std::move(p);
  }
  return a;
}

Assignment random_relaxed_start(const Sheaf& s, std::uint64_t seed) {
  Assignment a = make_assignment(s);
  for (std::size_t i = 0; i < s.base().size(); ++i) {
    const Space& sp = s.stalk(i);
    auto pts = sample_points(sp, 1, mix_seed(seed, i));
    if (!pts.empty()) {
      a.values[i] = std::move(pts.front());
      continue;
    }
    Point p(sp.dim(), 0.0);
    for (std::size_t c = 0; c < sp.dim(); ++c)
      p[c] = 0.5 * (sp.signature[c].lo + sp.signature[c].hi);
    a.values[i] = std::move(p);
  }
  return a;
}

struct DescentOutcome {
  double exact = kInf;
  Assignment best;
  bool converged = false;
  std::size_t evals = 0;
};

DescentOutcome descend(const Sheaf& sh, Assignment init, double tol,
                       std::size_t budget, const ExecPolicy& exec) {
  RadiusEvaluator ev(sh, std::move(init));
  DescentOutcome out;
  out.exact = consistency_radius(sh, ev.assignment(), exec);
  out.best = ev.assignment();

  double step = 0.5;
  bool out_of_budget = false;
  int passes = 0;
  const int max_passes = 10000;
  while (step >= tol && passes < max_passes) {
    bool changed = false;
    double pass_gain = 0.0;  // total squared-sum reduction this pass
    for (std::size_t e = 0; e < sh.base().size() && !out_of_budget; ++e) {
      const Space& sp = sh.stalk(e);
      for (std::size_t c = 0; c < sp.dim(); ++c) {
        if (out.evals >= budget) {
          out_of_budget = true;
          break;
        }
        Point cur = ev.value(e);
        if (sp.signature[c].tag == CoordTag::Boolean) {
          Point cand = cur;
          cand[c] = cand[c] == 0.0 ? 1.0 : 0.0;
          ++out.evals;
          const double delta = ev.probe_delta(e, cand);
          if (delta < -kImprove) {
            ev.commit(e, std::move(cand));
            changed = true;
            pass_gain -= delta;
          }
          continue;
        }
        const CoordSpec& cs = sp.signature[c];
        double move = step * 0.5 * std::max(cs.hi - cs.lo, 1.0);
        double pick = cur[c];
        double pick_delta = 0.0;
        for (int dir : {+1, -1}) {
          double t = move;
          double prev = 0.0;
          for (int it = 0; it < 40; ++it) {
            if (out.evals >= budget) {
              out_of_budget = true;
              break;
            }
            Point cand = cur;
            cand[c] = cur[c] + dir * t;
            ++out.evals;
            double delta = ev.probe_delta(e, cand);
            if (delta < prev - kImprove) {
              prev = delta;
              if (delta < pick_delta - kImprove) {
                pick_delta = delta;
                pick = cand[c];
              }
              t *= 2.0;
            } else {
              break;
            }
          }
          if (out_of_budget) break;
        }
        if (pick_delta < -kImprove) {
          Point cand = cur;
          cand[c] = pick;
          ev.commit(e, std::move(cand));
          changed = true;
          pass_gain -= pick_delta;
        }
      }
    }
    ++passes;
    double exact = consistency_radius(sh, ev.assignment(), exec);
    if (exact < out.exact - kImprove) {
      out.exact = exact;
      out.best = ev.assignment();
    }
    if (out_of_budget) break;
    // Halve the step on a stalled pass, and also once a pass's total gain
    // drops below what the current step level should deliver (near a
    // minimum the available gain scales with step squared); otherwise
    // smooth landscapes keep the step hot with endless sub-tolerance gains
    // until the budget dies.
    if (!changed || pass_gain <= std::max(tol * tol, step * step * 1e-4))
      step *= 0.5;
  }
  out.converged = !out_of_budget && passes < max_passes;
  return out;
}

}  // namespace

SolveResult solve_constrained(const EncodedProblem& e, const SolveRequest& req) {
  auto sections = enumerate_network_sections(e, 1u << 16);
  if (sections) {
    if (sections->empty())
      throw InfeasibleProblem("the network admits no feasible labeling");
    const std::size_t nsec = sections->size();
    std::size_t total = 1;
    bool fits = true;
    const std::size_t cap =
        std::min(req.exhaustive_limit, std::max<std::size_t>(req.budget, 1));
    for (int k = 0; k < e.horizon && fits; ++k) {
      if (nsec != 0 && total > cap / nsec)
        fits = false;
      else
        total *= nsec;
    }
    if (fits && total <= cap)
      return constrained_exhaustive(e, req, *sections, total);
    return constrained_local(e, req, *sections);
  }
  return constrained_continuous(e, req);
}

SolveResult solve_relaxed(const EncodedProblem& e, const SolveRequest& req) {
  const Sheaf& sh = *e.scored_rollout;
  std::vector<Assignment> starts;
  for (const auto& w : req.warm_starts) {
    if (w.values.size() != sh.base().size() || !w.total())
      throw SupportMismatch("warm start must be total on the scored rollout");
    starts.push_back(w);
  }
  // The labeled optimum is a feasible point of the relaxed search, so seed
  // the descent with it: the descent never returns a point worse than its
  // start, which keeps the relaxed objective at or below the labeled one.
  std::size_t seed_evals = 0;
  bool seeded = false;
  try {
    SolveRequest sub = req;
    sub.warm_starts.clear();
    sub.reference.reset();
    SolveResult labeled = solve_constrained(e, sub);
    seed_evals = labeled.evaluations;
    starts.push_back(std::move(labeled.assignment));
    seeded = true;
  } catch (const InfeasibleProblem&) {
    // nothing to seed from; the generic starts below still apply
  }
  starts.push_back(canonical_relaxed_start(sh, true));
  starts.push_back(canonical_relaxed_start(sh, false));
  const std::size_t want =
      std::max<std::size_t>(static_cast<std::size_t>(std::max(req.starts, 1)),
                            starts.size());
  for (std::size_t s = starts.size(); s < want; ++s)
    starts.push_back(random_relaxed_start(sh, mix_seed(req.seed, 0xa9e0ULL + s)));

  const std::size_t remaining =
      req.budget > seed_evals ? req.budget - seed_evals : 1;
  const std::size_t slice =
      std::max<std::size_t>(remaining / starts.size(), 1);

  SolveResult r;
  r.evaluations = seed_evals;
  double best = kInf;
  bool winner_converged = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    DescentOutcome got =
        descend(sh, std::move(starts[s]), req.tolerance, slice, req.exec);
    r.evaluations += got.evals;
    if (got.exact < best - kImprove) {
      best = got.exact;
      r.assignment = std::move(got.best);
      winner_converged = got.converged;
    }
  }
  // Exploratory starts may exhaust their slice; what matters is whether
  // the descent that produced the reported point ran to its step floor.
  r.converged = winner_converged;
  r.exhaustive = false;
  r.trace.push_back("relaxed: coordinate descent, " +
                    std::to_string(starts.size()) + " starts (" +
                    std::to_string(req.warm_starts.size()) + " warm" +
                    (seeded ? ", labeled seed" : "") + ")");
  finish_result(e, req, r);
  return r;
}

GapReport relaxation_gap(const EncodedProblem& e, const SolveResult& constrained,
                         const SolveResult& relaxed, const ExecPolicy& exec) {
  GapReport g;
  g.objective_constrained = constrained.objective;
  g.objective_relaxed = relaxed.objective;
  g.distance_total = assignment_distance(*e.scored_rollout,
                                         constrained.assignment,
                                         relaxed.assignment);
  g.relaxed_no_worse = g.objective_relaxed <= g.objective_constrained + 1e-9;
  bool rows_ok = true;
  for (int k = 0; k < e.horizon; ++k) {
    Assignment cr = restrict_network_step(e, constrained.assignment, k);
    Assignment rr = restrict_network_step(e, relaxed.assignment, k);
    GapRow row;
    row.step = k;
    row.radius_relaxed = consistency_radius(*e.network, rr, exec);
    row.distance_step = assignment_distance(*e.network, cr, rr);
    bool is_sec = is_global_section(*e.network, cr, 1e-9);
    row.section_bound_ok =
        is_sec && row.radius_relaxed <= 2.0 * row.distance_step + 1e-9;
    rows_ok = rows_ok && row.section_bound_ok &&
              row.distance_step <= g.distance_total + 1e-9;
    g.rows.push_back(row);
  }
  g.chain_ok = rows_ok && g.relaxed_no_worse;
  return g;
}

}  // namespace netsheaf
