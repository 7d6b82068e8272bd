#include "erglab/coinduce.hpp"

#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"

#include <algorithm>
#include <limits>

namespace erglab {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

EqRel checked_orbits(const FinAction& a0, const FinAction& b0) {
  if (a0.space_size() != b0.space_size()) throw ValidationError("a0 and b0 act on different spaces");
  return orbit_relation(a0);
}

}  // namespace

CoinducedSystem::CoinducedSystem(FinAction a0, FinAction b0, const TargetSpec& target, const Caps& caps,
                                 ChoiceSystem::Convention convention)
    : a0_(std::move(a0)),
      b0_(std::move(b0)),
      delta_(a0_.closure(caps.closure)),
      gamma_(b0_.closure(caps.closure)),
      cs_(checked_orbits(a0_, b0_), orbit_relation(b0_), convention) {
  for (std::size_t id = 1; id < delta_.order(); ++id)
    if (delta_.element(id).fixed_point_count() != 0)
      throw ValidationError("a0 is not free: " + delta_.name(id) + " has a fixed point");
  auto n = cs_.constant_index();
  if (!n) {
    std::string strata;
    for (std::size_t fc = 0; fc < cs_.f().num_classes(); ++fc)
      strata += (fc ? "," : "") + std::to_string(cs_.ordered_classes(fc).size());
    throw ValidationError("index [F:E] is not constant across F-classes (per class: " + strata + ")");
  }
  n_ = *n;

  std::size_t m = space_size(), d = delta_.order();
  rank_.resize(m);
  for (const auto& c : cs_.e().classes())
    for (std::size_t r = 0; r < c.size(); ++r) rank_[c[r]] = static_cast<std::uint32_t>(r);
  transit_.assign(m * d, 0);
  for (Point u = 0; u < m; ++u)
    for (std::size_t id = 0; id < d; ++id) transit_[u * d + rank_[delta_.element(id)(u)]] = static_cast<std::uint32_t>(id);

  y_ = target.size;
  if (y_ == 0) throw ValidationError("target space must be non-empty");
  a_.assign(d, Perm::identity(y_));
  if (!target.generator_images.empty() && !target.element_images.empty())
    throw ValidationError("give either generator images or element images for the target action");
  if (!target.element_images.empty()) {
    for (const auto& [name, img] : target.element_images) {
      auto id = delta_.find_name(name);
      if (!id) throw ValidationError("unknown Delta element '" + name + "'");
      if (img.size() != y_) throw ValidationError("target image of '" + name + "' has wrong degree");
      a_[*id] = img;
    }
  } else if (!target.generator_images.empty()) {
    auto gens = a0_.generators();
    std::vector<std::optional<Perm>> gen_img(gens.size());
    for (const auto& [label, img] : target.generator_images) {
      auto g = a0_.find(label);
      if (!g) throw ValidationError("unknown a0 generator '" + label + "'");
      if (img.size() != y_) throw ValidationError("target image of '" + label + "' has wrong degree");
      gen_img[*g] = img;
    }
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (!gen_img[g]) {
        if (!gen_img[gens[g].inverse]) throw ValidationError("no target image for generator '" + gens[g].label + "'");
        gen_img[g] = gen_img[gens[g].inverse]->inverse();
      }
    std::vector<bool> known(d, false);
    known[0] = true;
    std::vector<std::size_t> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t h = queue[head];
      for (std::size_t g = 0; g < gens.size(); ++g) {
        std::size_t next = delta_.multiply(delta_.generator_id(g), h);
        if (known[next]) continue;
        known[next] = true;
        a_[next] = *gen_img[g] * a_[h];
        queue.push_back(next);
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (!(a_[delta_.multiply(i, j)] == a_[i] * a_[j]))
        throw ValidationError("target images are not a homomorphism at (" + delta_.name(i) + ", " + delta_.name(j) + ")");

  pow_.assign(n_ + 1, 1);
  for (std::size_t k = 1; k <= n_; ++k) pow_[k] = saturating_mul(pow_[k - 1], y_);
  product_ = saturating_mul(m, pow_[n_]);
  product_cap_ = caps.product;
}

EqRel CoinducedSystem::target_orbits() const {
  UnionFind uf(y_);
  for (const auto& p : a_)
    for (Point y = 0; y < y_; ++y) uf.unite(y, p(y));
  return EqRel::from_union_find(uf);
}

std::optional<std::size_t> CoinducedSystem::transit(Point u, Point v) const {
  if (!cs_.e().related(u, v)) return std::nullopt;
  return transit_[u * delta_.order() + rank_[v]];
}

std::vector<std::size_t> CoinducedSystem::delta_bar(Point x, Point y) const {
  Perm pinv = index_cocycle(cs_, x, y).inverse();
  std::vector<std::size_t> out(n_);
  for (std::size_t n = 0; n < n_; ++n) {
    Point u = cs_.choice(x, pinv(static_cast<Point>(n))), v = cs_.choice(y, n);
    auto id = transit(u, v);
    if (!id || delta_.element(*id)(u) != v) throw ValidationError("no Delta element links the chosen points");
    out[n] = *id;
  }
  return out;
}

Rho CoinducedSystem::rho_pair(Point x, Point y) const { return {index_cocycle(cs_, x, y), delta_bar(x, y)}; }

Rho CoinducedSystem::rho(std::size_t gamma_id, Point x) const { return rho_pair(x, gamma_.element(gamma_id)(x)); }

Rho CoinducedSystem::multiply(const Rho& a, const Rho& b) const {
  Perm ainv = a.pi.inverse();
  Rho out{a.pi * b.pi, std::vector<std::size_t>(n_)};
  for (std::size_t n = 0; n < n_; ++n) out.delta[n] = delta_.multiply(a.delta[n], b.delta[ainv(static_cast<Point>(n))]);
  return out;
}

void CoinducedSystem::act(const Rho& r, std::span<const Point> ybar, std::span<Point> out) const {
  Perm pinv = r.pi.inverse();
  for (std::size_t n = 0; n < n_; ++n) out[n] = a_[r.delta[n]](ybar[pinv(static_cast<Point>(n))]);
}

std::size_t CoinducedSystem::encode(Point x, std::span<const Point> ybar) const {
  std::size_t z = 0;
  for (std::size_t n = 0; n < n_; ++n) z += ybar[n] * pow_[n];
  return x * pow_[n_] + z;
}

Point CoinducedSystem::decode(std::size_t z, std::span<Point> ybar) const {
  std::size_t rest = z % pow_[n_];
  for (std::size_t n = 0; n < n_; ++n) {
    ybar[n] = static_cast<Point>(rest % y_);
    rest /= y_;
  }
  return static_cast<Point>(z / pow_[n_]);
}

Perm CoinducedSystem::product_perm(const std::vector<Rho>& per_x, const std::vector<Point>& base) const {
  if (!materializable()) throw CapExceeded("product", product_, product_cap_);
  std::vector<Point> img(product_), ybar(n_), out(n_);
  for (std::size_t z = 0; z < product_; ++z) {
    Point x = decode(z, ybar);
    act(per_x[x], ybar, out);
    img[z] = static_cast<Point>(encode(base[x], out));
  }
  return Perm(std::move(img));
}

Perm CoinducedSystem::b(std::size_t gamma_id) const {
  std::vector<Rho> per_x;
  std::vector<Point> base(space_size());
  for (Point x = 0; x < space_size(); ++x) {
    per_x.push_back(rho(gamma_id, x));
    base[x] = gamma_.element(gamma_id)(x);
  }
  return product_perm(per_x, base);
}

Perm CoinducedSystem::a_prime(std::size_t delta_id) const {
  std::vector<Rho> per_x;
  std::vector<Point> base(space_size());
  for (Point x = 0; x < space_size(); ++x) {
    base[x] = delta_.element(delta_id)(x);
    per_x.push_back(rho_pair(x, base[x]));
  }
  return product_perm(per_x, base);
}

Rat phi_kn(const ChoiceSystem& cs, const Perm& gamma, std::size_t k, std::size_t n) {
  if (gamma.size() != cs.space_size()) throw ValidationError("permutation on a different space");
  std::size_t hits = 0;
  for (Point x = 0; x < cs.space_size(); ++x) {
    if (k >= cs.index(x) || n >= cs.index(x)) throw ValidationError("phi_kn index out of range");
    hits += index_cocycle(cs, x, gamma(x))(static_cast<Point>(k)) == n;
  }
  return ratio(hits, cs.space_size());
}

namespace {

Rat power(std::size_t base, std::size_t e) {
  Rat r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

IdentityCheck check_thm33_identity(const CoinducedSystem& sys, const std::vector<Point>& b, std::size_t gamma_id) {
  std::size_t ysz = sys.target_size(), big_n = sys.index();
  std::vector<bool> in_b(ysz, false);
  for (Point y : b) {
    if (y >= ysz) throw ValidationError("B point out of range");
    in_b[y] = true;
  }
  for (std::size_t id = 0; id < sys.delta().order(); ++id)
    for (Point y = 0; y < ysz; ++y)
      if (in_b[y] && !in_b[sys.target_image(id)(y)]) throw ValidationError("B is not invariant under the target action");
  std::size_t bsize = std::count(in_b.begin(), in_b.end(), true);

  IdentityCheck out;
  Rat p = ratio(bsize, ysz);
  Rat ph = phi(sys.choices().e(), sys.gamma().element(gamma_id));
  out.rhs = p * ph + p * p * (1 - ph);

  // Factorized count: (gamma z)_0 = a(d)(ybar_j) with j = pi^-1(0), d = delta_bar_0.
  Rat count = 0;
  for (Point x = 0; x < sys.space_size(); ++x) {
    Rho r = sys.rho(gamma_id, x);
    std::size_t j = r.pi.inverse()(0);
    const Perm& ad = sys.target_image(r.delta[0]);
    std::size_t moved_in = 0, both = 0;
    for (Point y = 0; y < ysz; ++y) {
      moved_in += in_b[ad(y)];
      both += in_b[y] && in_b[ad(y)];
    }
    if (j == 0) count += Rat(both) * power(ysz, big_n - 1);
    else count += Rat(bsize) * Rat(moved_in) * power(ysz, big_n - 2);
  }
  out.lhs = count / (Rat(sys.space_size()) * power(ysz, big_n));

  if (sys.materializable()) {
    Perm bg = sys.b(gamma_id);
    std::vector<Point> ybar(big_n), img(big_n);
    std::size_t hits = 0;
    for (std::size_t z = 0; z < sys.product_size(); ++z) {
      sys.decode(z, ybar);
      if (!in_b[ybar[0]]) continue;
      sys.decode(bg(static_cast<Point>(z)), img);
      hits += in_b[img[0]];
    }
    if (ratio(hits, sys.product_size()) != out.lhs)
      throw IdentityViolation("materialized and factorized counts disagree");
    out.materialized = true;
  }
  out.holds = out.lhs == out.rhs;
  return out;
}

IdentityCheck check_prop34_pairing(const CoinducedSystem& sys, const std::vector<Rat>& f, std::size_t k, std::size_t n,
                                   std::size_t gamma_id) {
  std::size_t ysz = sys.target_size(), big_n = sys.index();
  if (f.size() != ysz) throw ValidationError("f does not live on Y");
  if (k >= big_n || n >= big_n) throw ValidationError("pairing index out of range");
  Rat sum = 0, sq = 0;
  for (const auto& v : f) {
    sum += v;
    sq += v * v;
  }
  if (sum != 0) throw ValidationError("f is not mean-zero");
  for (std::size_t id = 0; id < sys.delta().order(); ++id)
    for (Point y = 0; y < ysz; ++y)
      if (f[sys.target_image(id)(y)] != f[y]) throw ValidationError("f is not invariant under the target action");

  IdentityCheck out;
  out.rhs = phi_kn(sys.choices(), sys.gamma().element(gamma_id), k, n) * sq / ysz;

  // (gamma z)_n = a(d)(ybar_j) with j = pi^-1(n), d = delta_bar_n.
  Rat total = 0;
  for (Point x = 0; x < sys.space_size(); ++x) {
    Rho r = sys.rho(gamma_id, x);
    std::size_t j = r.pi.inverse()(static_cast<Point>(n));
    const Perm& ad = sys.target_image(r.delta[n]);
    if (j == k) {
      Rat s = 0;
      for (Point y = 0; y < ysz; ++y) s += f[ad(y)] * f[y];
      total += s * power(ysz, big_n - 1);
    } else {
      Rat s = 0;
      for (Point y = 0; y < ysz; ++y) s += f[ad(y)];
      total += s * sum * power(ysz, big_n - 2);
    }
  }
  out.lhs = total / (Rat(sys.space_size()) * power(ysz, big_n));

  if (sys.materializable()) {
    Perm bg = sys.b(gamma_id);
    std::vector<Point> ybar(big_n), img(big_n);
    Rat acc = 0;
    for (std::size_t z = 0; z < sys.product_size(); ++z) {
      sys.decode(z, ybar);
      if (f[ybar[k]] == 0) continue;
      sys.decode(bg(static_cast<Point>(z)), img);
      acc += f[img[n]] * f[ybar[k]];
    }
    if (acc / sys.product_size() != out.lhs) throw IdentityViolation("materialized and factorized pairings disagree");
    out.materialized = true;
  }
  out.holds = out.lhs == out.rhs;
  return out;
}

std::vector<std::vector<Point>> invariant_subsets(const CoinducedSystem& sys) {
  EqRel orbits = sys.target_orbits();
  std::size_t k = orbits.num_classes();
  if (k > 20) throw CapExceeded("invariant_subsets", k, 20);
  std::vector<std::vector<Point>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<Point> s;
    for (std::size_t c = 0; c < k; ++c)
      if (mask >> c & 1) s.insert(s.end(), orbits.classes()[c].begin(), orbits.classes()[c].end());
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

CoinduceValidation validate(const CoinducedSystem& sys) {
  CoinduceValidation v;
  const auto& g = sys.gamma();
  std::size_t m = sys.space_size();
  std::vector<Rho> table;
  table.reserve(g.order() * m);
  for (std::size_t id = 0; id < g.order(); ++id)
    for (Point x = 0; x < m; ++x) table.push_back(sys.rho(id, x));
  for (std::size_t g1 = 0; g1 < g.order(); ++g1)
    for (std::size_t g2 = 0; g2 < g.order(); ++g2)
      for (Point x = 0; x < m; ++x) {
        Point x2 = g.element(g2)(x);
        if (!(table[g.multiply(g1, g2) * m + x] == sys.multiply(table[g1 * m + x2], table[g2 * m + x])))
          v.rho_cocycle = false;
        ++v.cocycle_pairs;
      }

  constexpr std::size_t stored_limit = std::size_t{1} << 25;
  if (!sys.materializable() || saturating_mul(g.order(), sys.product_size()) > stored_limit) return v;
  v.materialized = true;
  std::size_t p = sys.product_size(), big_n = sys.index();
  std::vector<Perm> b;
  for (std::size_t id = 0; id < g.order(); ++id) b.push_back(sys.b(id));
  bool b0_free = true;
  for (std::size_t id = 1; id < g.order(); ++id) b0_free = b0_free && g.element(id).fixed_point_count() == 0;

  for (std::size_t s = 0; s < g.generator_count(); ++s)
    for (std::size_t id = 0; id < g.order(); ++id)
      if (!(b[g.generator_id(s)] * b[id] == b[g.multiply(g.generator_id(s), id)])) v.b_action = false;
  if (b0_free)
    for (std::size_t id = 1; id < g.order(); ++id) v.b_free = v.b_free && b[id].fixed_point_count() == 0;

  std::vector<Point> ybar(big_n), img(big_n);
  for (std::size_t id = 0; id < g.order(); ++id)
    for (std::size_t z = 0; z < p; ++z) {
      Point x = sys.decode(z, ybar);
      if (sys.decode(b[id](static_cast<Point>(z)), img) != g.element(id)(x)) v.factors = false;
    }

  UnionFind orbits(p);
  for (std::size_t s = 0; s < g.generator_count(); ++s)
    for (std::size_t z = 0; z < p; ++z) orbits.unite(static_cast<std::uint32_t>(z), b[g.generator_id(s)](static_cast<Point>(z)));
  const auto& d = sys.delta();
  for (std::size_t id = 0; id < d.order(); ++id) {
    Perm ap = sys.a_prime(id);
    if (id != 0 && ap.fixed_point_count() != 0) v.a_prime_free = false;
    for (std::size_t z = 0; z < p; ++z) {
      Point x = sys.decode(z, ybar);
      Point w = ap(static_cast<Point>(z));
      if (sys.decode(w, img) != d.element(id)(x)) v.factors = false;
      if (img[0] != sys.target_image(id)(ybar[0])) v.factors = false;
      if (!orbits.same(static_cast<std::uint32_t>(z), w)) v.orbit_inclusion = false;
    }
  }
  return v;
}

std::vector<std::vector<std::size_t>> cycle_fingerprint(const CoinducedSystem& sys) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t id = 0; id < sys.gamma().order(); ++id) out.push_back(sys.b(id).cycle_type());
  return out;
}

}  // namespace erglab
