#include "erglab/percolation.hpp"

#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/random.hpp"
#include "erglab/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <tuple>

namespace erglab {

std::optional<std::uint32_t> CayleyBall::find(const Element& e) const {
  auto it = index.find(e);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

CayleyBall cayley_ball(std::shared_ptr<const GroupModel> model, std::vector<Element> q, std::size_t r,
                       const Caps& caps) {
  CayleyBall ball;
  Element id = model->identity();
  std::vector<Element> sym;
  for (const auto& s : q) {
    if (s == id) throw ValidationError("generating set contains the identity");
    for (Element t : {s, model->inverse(s)})
      if (std::find(sym.begin(), sym.end(), t) == sym.end()) sym.push_back(std::move(t));
  }
  if (sym.empty() && r > 0) throw ValidationError("empty generating set");
  ball.model = std::move(model);
  ball.generators = std::move(sym);
  ball.radius = r;

  auto add_layer = [&](std::vector<Element>& layer, std::uint32_t dist) {
    std::sort(layer.begin(), layer.end());
    for (auto& v : layer) {
      if (ball.vertices.size() >= caps.ball) throw CapExceeded("ball", ball.vertices.size() + 1, caps.ball);
      ball.index.emplace(v, static_cast<std::uint32_t>(ball.vertices.size()));
      ball.vertices.push_back(std::move(v));
      ball.distance.push_back(dist);
    }
  };
  std::vector<Element> layer{id};
  add_layer(layer, 0);
  std::size_t begin = 0;
  for (std::uint32_t d = 1; d <= r; ++d) {
    std::size_t end = ball.vertices.size();
    std::set<Element> next;
    for (std::size_t v = begin; v < end; ++v)
      for (const auto& s : ball.generators) {
        Element w = ball.model->multiply(s, ball.vertices[v]);
        if (!ball.index.count(w)) next.insert(std::move(w));
      }
    std::vector<Element> fresh(next.begin(), next.end());
    if (fresh.empty()) break;
    add_layer(fresh, d);
    begin = end;
  }
  for (std::uint32_t v = 0; v < ball.vertices.size(); ++v) {
    for (const auto& s : ball.generators) {
      auto w = ball.find(ball.model->multiply(s, ball.vertices[v]));
      if (w && v < *w) ball.edges.emplace_back(v, *w);
    }
    if (ball.distance[v] == r) ball.boundary.push_back(v);
  }
  return ball;
}

PercConfig percolate(const CayleyBall& ball, double p, std::uint64_t seed, std::uint64_t trial) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
  PercConfig c{p, seed, trial, std::vector<std::uint8_t>(ball.edges.size())};
  std::vector<double> u(ball.edges.size());
  counter_uniforms(seed, trial, u);
  for (std::size_t e = 0; e < u.size(); ++e) c.open[e] = u[e] < p;
  return c;
}

namespace {

UnionFind clusters(const CayleyBall& ball, const PercConfig& config) {
  if (config.open.size() != ball.edges.size()) throw ValidationError("configuration does not match the ball");
  UnionFind uf(ball.vertices.size());
  for (std::size_t e = 0; e < ball.edges.size(); ++e)
    if (config.open[e]) uf.unite(ball.edges[e].first, ball.edges[e].second);
  return uf;
}

std::vector<std::uint32_t> target_indices(const CayleyBall& ball, const std::vector<Element>& targets) {
  std::vector<std::uint32_t> out;
  for (const auto& t : targets) {
    auto i = ball.find(t);
    if (!i) throw ValidationError("target " + ball.model->format(t) + " lies outside the ball");
    out.push_back(*i);
  }
  return out;
}

double binomial_se(double p, std::size_t n) { return n ? std::sqrt(p * (1.0 - p) / double(n)) : 0.0; }

}  // namespace

std::vector<std::uint32_t> cluster_labels(const CayleyBall& ball, const PercConfig& config) {
  UnionFind uf = clusters(ball, config);
  std::size_t n = ball.vertices.size();
  std::vector<std::uint32_t> smallest(n, static_cast<std::uint32_t>(n)), label(n);
  for (std::uint32_t v = 0; v < n; ++v) smallest[uf.find(v)] = std::min(smallest[uf.find(v)], v);
  for (std::uint32_t v = 0; v < n; ++v) label[v] = smallest[uf.find(v)];
  return label;
}

ClusterStats cluster_stats(const CayleyBall& ball, const std::vector<PercConfig>& configs,
                           const std::vector<Element>& targets) {
  auto tidx = target_indices(ball, targets);
  ClusterStats st;
  st.trials = configs.size();
  std::vector<std::size_t> tau(targets.size(), 0);
  std::size_t theta = 0, bc = 0;
  for (const auto& c : configs) {
    UnionFind uf = clusters(ball, c);
    std::set<std::uint32_t> roots;
    for (auto v : ball.boundary) roots.insert(uf.find(v));
    bc += roots.size();
    theta += roots.count(uf.find(0));
    for (std::size_t t = 0; t < tidx.size(); ++t) tau[t] += uf.same(0, tidx[t]);
  }
  double n = double(st.trials);
  if (st.trials) {
    st.theta_hat = double(theta) / n;
    st.boundary_clusters_mean = double(bc) / n;
  }
  st.theta_se = binomial_se(st.theta_hat, st.trials);
  for (auto c : tau) {
    double p = st.trials ? double(c) / n : 0.0;
    st.tau_hat.push_back(p);
    st.tau_se.push_back(binomial_se(p, st.trials));
  }
  return st;
}

double SweepPoint::theta_se() const { return binomial_se(theta_hat(), trials); }

namespace {

struct TrialCounts {
  std::vector<std::size_t> theta, bc, tau;  // tau is grid-major, targets-minor
};

void run_trials(const CayleyBall& ball, const std::vector<double>& grid, std::uint64_t seed, std::size_t first,
                std::size_t last, const std::vector<std::uint32_t>& tidx, TrialCounts& out) {
  std::size_t g = grid.size(), ne = ball.edges.size(), nv = ball.vertices.size(), nt = tidx.size();
  out.theta.assign(g, 0);
  out.bc.assign(g, 0);
  out.tau.assign(g * nt, 0);
  std::vector<double> u(ne);
  std::vector<std::uint32_t> bucket(ne), start(g + 2), order(ne);
  std::vector<std::uint8_t> on_boundary(nv);
  UnionFind uf(nv);
  for (std::size_t t = first; t < last; ++t) {
    counter_uniforms(seed, t, u);
    // Edge e opens at the first grid value exceeding u_e (bucket g = never).
    std::fill(start.begin(), start.end(), 0);
    for (std::size_t e = 0; e < ne; ++e) {
      bucket[e] = static_cast<std::uint32_t>(std::upper_bound(grid.begin(), grid.end(), u[e]) - grid.begin());
      ++start[bucket[e] + 1];
    }
    for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
    {
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (std::size_t e = 0; e < ne; ++e) order[fill[bucket[e]]++] = static_cast<std::uint32_t>(e);
    }
    uf.reset();
    std::fill(on_boundary.begin(), on_boundary.end(), 0);
    for (auto v : ball.boundary) on_boundary[v] = 1;
    std::size_t boundary_clusters = ball.boundary.size();
    for (std::size_t k = 0; k < g; ++k) {
      for (std::uint32_t i = start[k]; i < start[k + 1]; ++i) {
        auto [a, b] = ball.edges[order[i]];
        auto res = uf.unite(a, b);
        if (!res.merged) continue;
        if (on_boundary[res.root] && on_boundary[res.absorbed]) --boundary_clusters;
        on_boundary[res.root] |= on_boundary[res.absorbed];
      }
      out.theta[k] += on_boundary[uf.find(0)];
      out.bc[k] += boundary_clusters;
      for (std::size_t j = 0; j < nt; ++j) out.tau[k * nt + j] += uf.same(0, tidx[j]);
    }
  }
}

}  // namespace

SweepCurve sweep(const CayleyBall& ball, const std::vector<double>& grid, std::size_t trials, std::uint64_t seed,
                 const std::vector<Element>& targets, std::size_t workers) {
  if (grid.empty()) throw ValidationError("empty p grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ValidationError("grid values must lie in [0,1]");
    if (i && !(grid[i] > grid[i - 1])) throw ValidationError("grid must be strictly increasing");
  }
  auto tidx = target_indices(ball, targets);
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(trials, 1)));
  std::vector<TrialCounts> parts(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t first = trials * w / workers, last = trials * (w + 1) / workers;
    if (w + 1 == workers) run_trials(ball, grid, seed, first, last, tidx, parts[w]);
    else pool.emplace_back(run_trials, std::cref(ball), std::cref(grid), seed, first, last, std::cref(tidx), std::ref(parts[w]));
  }
  for (auto& t : pool) t.join();

  SweepCurve curve;
  curve.targets = targets;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    SweepPoint pt;
    pt.p = grid[k];
    pt.trials = trials;
    pt.tau_count.assign(tidx.size(), 0);
    for (const auto& part : parts) {
      pt.theta_count += part.theta[k];
      pt.boundary_cluster_sum += part.bc[k];
      for (std::size_t j = 0; j < tidx.size(); ++j) pt.tau_count[j] += part.tau[k * tidx.size() + j];
    }
    if (k && pt.theta_count < curve.points.back().theta_count) curve.monotone = false;
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

std::optional<double> crossing(const SweepCurve& curve, double level) {
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double th = pts[i].theta_hat();
    if (th < level) continue;
    if (i == 0) return pts[0].p;
    double t0 = pts[i - 1].theta_hat();
    return pts[i - 1].p + (level - t0) / (th - t0) * (pts[i].p - pts[i - 1].p);
  }
  return std::nullopt;
}

double inflection(const SweepCurve& curve, std::size_t half_window) {
  const auto& pts = curve.points;
  if (pts.empty()) throw ValidationError("empty curve");
  double best_slope = -1e300, best_p = pts.front().p;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t lo = i >= half_window ? i - half_window : 0, hi = std::min(pts.size() - 1, i + half_window);
    double n = double(hi - lo + 1), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = lo; j <= hi; ++j) {
      double x = pts[j].p, y = pts[j].theta_hat();
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    if (den <= 0) continue;
    double slope = (n * sxy - sx * sy) / den;
    if (slope > best_slope) {
      best_slope = slope;
      best_p = pts[i].p;
    }
  }
  return best_p;
}

PhiReport action_to_percolation(const FinAction& action, const std::vector<std::optional<std::vector<Point>>>& a_sets,
                                const Caps& caps, std::optional<std::size_t> radius) {
  auto gens = action.generators();
  std::size_t m = action.space_size();
  if (a_sets.size() != gens.size()) throw ValidationError("need one A-set entry per generator");

  // Complete and check A_{s^-1} = s A_s.
  std::vector<std::vector<bool>> a(gens.size());
  auto as_mask = [&](const std::vector<Point>& pts) {
    std::vector<bool> mask(m, false);
    for (Point x : pts) {
      if (x >= m) throw ValidationError("A-set point out of range");
      mask[x] = true;
    }
    return mask;
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::size_t j = gens[i].inverse;
    if (a_sets[i]) {
      a[i] = as_mask(*a_sets[i]);
    } else if (a_sets[j]) {
      std::vector<bool> mask(m, false);
      for (Point x : *a_sets[j]) mask[gens[j].perm(x)] = true;
      a[i] = std::move(mask);
    } else {
      throw ValidationError("no A-set for generator '" + gens[i].label + "' or its inverse");
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::size_t j = gens[i].inverse;
    for (Point x = 0; x < m; ++x)
      if (a[i][x] != a[j][gens[i].perm(x)])
        throw ValidationError("A-sets of '" + gens[i].label + "' and '" + gens[j].label + "' are incompatible");
  }

  PhiReport rep;
  for (const auto& mask : a) {
    std::vector<Point> pts;
    for (Point x = 0; x < m; ++x)
      if (mask[x]) pts.push_back(x);
    rep.a_sets.push_back(std::move(pts));
  }
  GroupClosure g = action.closure(caps.closure);
  std::size_t order = g.order();
  rep.group_order = order;
  rep.free_action = true;
  for (std::size_t id = 1; id < order; ++id) rep.free_action = rep.free_action && g.element(id).fixed_point_count() == 0;

  // Undirected edges {d, s_i d}, keyed by endpoints and the generator pair.
  struct Edge {
    std::uint32_t from;
    std::uint32_t gen;
  };
  std::vector<Edge> edges;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> edge_id;
  auto key = [&](std::size_t u, std::size_t v, std::size_t i) {
    auto pair_id = static_cast<std::uint32_t>(std::min(i, gens[i].inverse));
    return std::tuple{static_cast<std::uint32_t>(std::min(u, v)), static_cast<std::uint32_t>(std::max(u, v)), pair_id};
  };
  for (std::size_t d = 0; d < order; ++d)
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::size_t e = g.multiply(g.generator_id(i), d);
      if (e == d) continue;
      auto [it, fresh] = edge_id.try_emplace(key(d, e, i), static_cast<std::uint32_t>(edges.size()));
      if (fresh) edges.push_back({static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(i)});
    }
  rep.edges = edges.size();

  std::vector<std::size_t> dist(order, static_cast<std::size_t>(-1));
  dist[0] = 0;
  std::vector<std::size_t> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::size_t e = g.multiply(g.generator_id(i), queue[h]);
      if (dist[e] == static_cast<std::size_t>(-1)) {
        dist[e] = dist[queue[h]] + 1;
        queue.push_back(e);
      }
    }
  auto in_ball = [&](std::size_t v) { return !radius || dist[v] <= *radius; };

  std::vector<std::vector<std::uint8_t>> config(m, std::vector<std::uint8_t>(edges.size()));
  for (Point x = 0; x < m; ++x)
    for (std::size_t k = 0; k < edges.size(); ++k) config[x][k] = a[edges[k].gen][g.element(edges[k].from)(x)];

  for (std::size_t gam = 0; gam < order && rep.equivariant; ++gam)
    for (Point x = 0; x < m && rep.equivariant; ++x) {
      Point gx = g.element(gam)(x);
      for (std::size_t k = 0; k < edges.size(); ++k) {
        std::size_t d = edges[k].from, i = edges[k].gen, e = g.multiply(g.generator_id(i), d);
        std::size_t dg = g.multiply(d, gam), eg = g.multiply(e, gam);
        if (!in_ball(d) || !in_ball(e) || !in_ball(dg) || !in_ball(eg)) continue;
        auto it = edge_id.find(key(dg, eg, i));
        if (it == edge_id.end() || config[gx][k] != config[x][it->second]) {
          rep.equivariant = false;
          break;
        }
      }
    }

  UnionFind ef(m);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (Point x = 0; x < m; ++x)
      if (a[i][x]) ef.unite(x, gens[i].perm(x));
  EqRel e = EqRel::from_union_find(ef);

  std::vector<std::size_t> hits(order, 0);
  UnionFind uf(order);
  for (Point x = 0; x < m; ++x) {
    uf.reset();
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (config[x][k]) uf.unite(edges[k].from, static_cast<std::uint32_t>(g.multiply(g.generator_id(edges[k].gen), edges[k].from)));
    for (std::size_t gam = 0; gam < order; ++gam) hits[gam] += uf.same(0, static_cast<std::uint32_t>(gam));
  }
  for (std::size_t gam = 0; gam < order; ++gam) {
    rep.phi_e.push_back(phi(e, g.element(gam)));
    rep.connection.push_back(ratio(hits[gam], m));
    bool ok = rep.free_action ? rep.connection.back() == rep.phi_e.back() : rep.connection.back() <= rep.phi_e.back();
    rep.identity_holds = rep.identity_holds && ok;
  }
  return rep;
}

LengthSystem::LengthSystem(std::shared_ptr<const GroupModel> model, std::vector<Element> q, const Caps& caps,
                           std::vector<std::size_t> a)
    : model_(std::move(model)), q_(std::move(q)), budget_(caps.word_length), a_(std::move(a)) {
  Element id = model_->identity();
  std::vector<Element> sym;
  for (const auto& s : q_) {
    if (s == id) throw ValidationError("generating set contains the identity");
    for (Element t : {s, model_->inverse(s)})
      if (std::find(sym.begin(), sym.end(), t) == sym.end()) sym.push_back(std::move(t));
  }
  q_ = std::move(sym);
  auto standard = model_->standard_generators();
  standard_ = std::is_permutation(q_.begin(), q_.end(), standard.begin(), standard.end()) &&
              model_->standard_length(id).has_value();
  if (a_.empty()) a_.push_back(1);
  if (a_.front() == 0) throw ValidationError("a_1 must be positive");
  for (std::size_t n = 1; n < a_.size(); ++n)
    if (a_[n] <= n * a_[n - 1]) throw ValidationError("a-sequence must satisfy a_{n+1} > n a_n");
}

std::size_t LengthSystem::a(std::size_t n) const {
  if (n == 0) throw ValidationError("a_n is indexed from 1");
  while (a_.size() < n) a_.push_back(a_.size() * a_.back() + 1);
  return a_[n - 1];
}

std::size_t LengthSystem::word_length(const Element& g) const {
  if (standard_) {
    std::size_t l = *model_->standard_length(g);
    if (l > budget_) throw CapExceeded("word_length", l, budget_);
    return l;
  }
  // Breadth-first search in the Cayley graph of Q.
  std::unordered_map<Element, std::size_t, ElementHash> seen{{model_->identity(), 0}};
  std::vector<Element> frontier{model_->identity()};
  for (std::size_t d = 0;; ++d) {
    if (seen.count(g)) return seen.at(g);
    if (d >= budget_ || frontier.empty()) throw CapExceeded("word_length", d + 1, budget_);
    std::vector<Element> next;
    for (const auto& v : frontier)
      for (const auto& s : q_) {
        Element w = model_->multiply(s, v);
        if (seen.emplace(w, d + 1).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
}

std::size_t LengthSystem::length(const Element& g) const {
  std::size_t wl = word_length(g);
  if (wl == 0) return 0;
  std::size_t n = 1;
  while (wl > n * a(n)) ++n;
  return n;
}

}  // namespace erglab
